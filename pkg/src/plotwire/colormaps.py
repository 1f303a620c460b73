"""Fixed 256-entry colormap tables.

Tables are built with exact integer/IEEE arithmetic only, so every platform
produces identical bytes; docs/colormaps.md lists the expanded entries and a
unit test keeps that file in sync with this module.
"""

from __future__ import annotations

import numpy as np

# viridis-like ramp: 9 RGB anchors, linearly interpolated
VIRIDIS_ANCHORS = (
    (68, 1, 84),
    (71, 44, 122),
    (59, 81, 139),
    (44, 113, 142),
    (33, 144, 141),
    (39, 173, 129),
    (92, 200, 99),
    (170, 220, 50),
    (253, 231, 37),
)
_ANCHOR_POSITIONS = (0, 32, 64, 96, 128, 160, 192, 224, 255)


def _lerp_table(anchors, positions) -> np.ndarray:
    table = np.zeros((256, 3), dtype=np.uint8)
    for seg in range(len(positions) - 1):
        p0, p1 = positions[seg], positions[seg + 1]
        c0, c1 = anchors[seg], anchors[seg + 1]
        for i in range(p0, p1 + 1):
            for ch in range(3):
                table[i, ch] = round(c0[ch] + (c1[ch] - c0[ch]) * (i - p0) / (p1 - p0))
    return table


def _greys_table() -> np.ndarray:
    table = np.zeros((256, 3), dtype=np.uint8)
    for i in range(256):
        g = 235 - (235 * i) // 255  # light grey at 0 down to black at 255
        table[i] = (g, g, g)
    return table


COLORMAPS: dict[str, np.ndarray] = {
    "greys": _greys_table(),
    "viridis": _lerp_table(VIRIDIS_ANCHORS, _ANCHOR_POSITIONS),
}

for _t in COLORMAPS.values():
    _t.setflags(write=False)


def colormap_doc() -> str:
    """Markdown rendering of every table (docs/colormaps.md is this text)."""
    lines = ["# Colormap tables", ""]
    lines.append(
        "Density maps use one of the fixed 256-entry RGB tables below; entry i"
    )
    lines.append(
        "colors a normalized bin value of i/255. Tables are computed with exact"
    )
    lines.append("integer arithmetic, so rendered pixels match on any platform.")
    for name in sorted(COLORMAPS):
        lines += ["", f"## {name}", "", "| index | R | G | B |", "|---|---|---|---|"]
        for i, (r, g, b) in enumerate(COLORMAPS[name]):
            lines.append(f"| {i} | {r} | {g} | {b} |")
    lines.append("")
    return "\n".join(lines)
