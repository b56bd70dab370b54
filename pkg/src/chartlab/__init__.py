"""chartlab: a desk-scale chart-perception laboratory.

Synthetic chart generation, hard-negative caption synthesis, dual-encoder
contrastive training, image-to-text retrieval evaluation, frozen-embedding
probes, and conditional-accuracy analysis.
"""

__version__ = "0.1.0"
