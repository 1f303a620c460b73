"""Axis tick placement and label text.

Linear axes tick at 1/2/5 x 10^k steps sized so that roughly 4 to 9 fall in
range; log axes tick at 1/2/5 mantissa decades, thinning to whole decades
when crowded. Labels use shortest round-trip decimal formatting.
"""

from __future__ import annotations

import math


def _step_candidates(span: float) -> list[float]:
    e0 = math.floor(math.log10(span))
    return [m * 10.0**e for e in (e0 + 1, e0, e0 - 1, e0 - 2) for m in (5, 2, 1)]


def _count(lo: float, hi: float, step: float) -> int:
    return math.floor(hi / step + 1e-9) - math.ceil(lo / step - 1e-9) + 1


def nice_linear_ticks(lo: float, hi: float) -> list[float]:
    span = hi - lo
    best_step, best_penalty = None, None
    for step in _step_candidates(span):
        c = _count(lo, hi, step)
        penalty = 0 if 4 <= c <= 9 else min(abs(c - 4), abs(c - 9))
        # prefer in-range counts; among those, the coarsest step wins
        if best_penalty is None or penalty < best_penalty:
            best_step, best_penalty = step, penalty
        if penalty == 0:
            break
    k0 = math.ceil(lo / best_step - 1e-9)
    k1 = math.floor(hi / best_step + 1e-9)
    return [k * best_step for k in range(k0, k1 + 1)]


def nice_log_ticks(lo: float, hi: float) -> list[float]:
    tlo, thi = math.log10(lo), math.log10(hi)
    decades = range(math.floor(tlo), math.ceil(thi) + 1)
    full = [m * 10.0**k for k in decades for m in (1, 2, 5)]
    ticks = [t for t in full if lo <= t <= hi]
    if len(ticks) > 9:
        ticks = [t for t in ticks if math.log10(t) == round(math.log10(t))]
    if len(ticks) > 9:
        ticks = ticks[:: math.ceil(len(ticks) / 9)]
    if len(ticks) < 4:
        return [10.0**v for v in nice_linear_ticks(tlo, thi)]
    return ticks


def ticks_for_axis(lo: float, hi: float, scale: str) -> list[float]:
    return nice_log_ticks(lo, hi) if scale == "log" else nice_linear_ticks(lo, hi)


def format_tick(value: float) -> str:
    """Shortest decimal text that round-trips to the same float."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)
