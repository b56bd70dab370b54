"""Fixed 12-color series palette.

All channel values sit on the grid {30, 110, 190, 250}, so any two
distinct colors differ by at least 60/255 in some channel. That gap is
what lets pixel-scan test oracles attribute marks to series
unambiguously against the white background and black axes.
"""

PALETTE = (
    (250, 30, 30),    # red
    (30, 110, 250),   # blue
    (30, 190, 30),    # green
    (250, 110, 30),   # orange
    (110, 30, 190),   # purple
    (30, 190, 250),   # cyan
    (250, 30, 190),   # magenta
    (190, 190, 30),   # olive
    (110, 30, 30),    # maroon
    (110, 110, 110),  # gray
    (30, 110, 110),   # teal
    (250, 190, 30),   # gold
)

BACKGROUND = (255, 255, 255)
INK = (0, 0, 0)


def channel_distance(a, b) -> int:
    """Largest per-channel difference between two RGB triples."""
    return max(abs(x - y) for x, y in zip(a, b))
