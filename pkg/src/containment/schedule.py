"""Segment widths over time: constant or dyadically doubling schedules.

A schedule yields the segment width ``h_t`` for every turn.  Doubling
schedules must keep doubling times far apart relative to the consolidation
window ``4*q^2*h^2``; `validate_schedule` checks exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def consolidation_window(q: Fraction, h: int) -> int:
    """Turn span a disruption keeps its surroundings spreading: 4*q^2*h^2, rounded up."""
    v = 4 * Fraction(q) ** 2 * h * h
    return -((-v.numerator) // v.denominator)


@dataclass(frozen=True)
class Constant:
    h: int

    def width(self, t: int) -> int:
        return self.h


@dataclass(frozen=True)
class DyadicPower:
    """Width 2^floor(log2(C * t^(1/7))) for t >= 1, with h_0 = h_1.

    Computed with exact integer arithmetic: 2^k <= C*t^(1/7) iff
    (2^k * den)^7 <= num^7 * t.
    """

    C: Fraction

    def width(self, t: int) -> int:
        t = max(t, 1)
        num, den = self.C.numerator, self.C.denominator
        rhs = num**7 * t
        k = 0
        while (2 ** (k + 1) * den) ** 7 <= rhs:
            k += 1
        if (2**k * den) ** 7 > rhs:
            return 1
        return 2**k


HSchedule = Constant | DyadicPower


def doubling_times(schedule: HSchedule, lo: int, hi: int) -> list[int]:
    """Turns t in [max(lo,1), hi] with h_t = 2 * h_{t-1}."""
    if isinstance(schedule, Constant):
        return []
    out = []
    prev = schedule.width(max(lo - 1, 0))
    for t in range(max(lo, 1), hi + 1):
        cur = schedule.width(t)
        if cur == 2 * prev:
            out.append(t)
        prev = cur
    return out


def alert_reset(schedule: HSchedule, q: Fraction, t: int) -> int:
    """Timer value for alerted segments; pads the window by h_t across a doubling."""
    h = schedule.width(t)
    H = consolidation_window(q, h)
    if schedule.width(t + H) != h:
        return H + h
    return H


def edge_reset(schedule: HSchedule, t: int) -> int:
    """Timer value for edge segments; doubles across an imminent doubling."""
    h = schedule.width(t)
    if schedule.width(t + h) != h:
        return 2 * h
    return h


def validate_schedule(schedule: HSchedule, q: Fraction, horizon: int) -> list[dict]:
    """Check the doubling-separation condition up to the horizon.

    Every doubling time t must have no other doubling within
    [t - 2H_t, t + 2H_t], and the width ratio must stay in {1, 2}.
    Violations are returned as data, never raised.
    """
    violations: list[dict] = []
    if isinstance(schedule, Constant):
        if schedule.h < 1:
            violations.append({"rule": "width-positive", "t": 0, "detail": schedule.h})
        return violations

    prev = schedule.width(0)
    for t in range(1, horizon + 1):
        cur = schedule.width(t)
        if cur != prev and cur != 2 * prev:
            violations.append({"rule": "ratio", "t": t, "detail": (prev, cur)})
        prev = cur

    for t in doubling_times(schedule, 1, horizon):
        H = consolidation_window(q, schedule.width(t))
        near = doubling_times(schedule, max(t - 2 * H, 1), t + 2 * H)
        for s in near:
            if s != t:
                violations.append({"rule": "doubling-separation", "t": t, "detail": s})
    return violations


def segment_index(h: int, x: int) -> int:
    """Index k of the width-h segment [k*h, (k+1)*h) containing column x."""
    return x // h


def segment_span(h: int, k: int) -> tuple[int, int]:
    """Column range [lo, hi] (inclusive) of segment k at width h."""
    return k * h, (k + 1) * h - 1


# Merge rules applied per quantity when segments double (children -> parent).
MERGE_SUM = "sum"
MERGE_MAX = "max"
MERGE_UNION = "union"


def merge_segmap(values: dict[int, object], rule: str, drop=None) -> dict[int, object]:
    """Fold a segment-indexed map onto the twice-coarser segmentation.

    Child k lands in parent k // 2 (dyadic nesting).  Entries equal to
    ``drop`` are removed from the result.
    """
    out: dict[int, object] = {}
    for k, v in values.items():
        p = k // 2
        if p not in out:
            out[p] = v
        elif rule == MERGE_SUM:
            out[p] = out[p] + v
        elif rule == MERGE_MAX:
            out[p] = max(out[p], v)
        elif rule == MERGE_UNION:
            out[p] = out[p] | v
        else:
            raise ValueError(rule)
    if drop is not None:
        out = {k: v for k, v in out.items() if v != drop}
    return out
