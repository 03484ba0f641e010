"""The sub-linear Spreader strategy: segment modes, timers, pivots, pruning.

Segments of the current width partition the columns.  A *simulative*
segment holds a single pivot cell standing in for a full-width simulated
fire; a *spreading* segment pushes every occupied cell to its upward
neighbours.  Deletions near the front (disruptions) reset consolidation
timers across the surrounding alert interval; segments near the ends of
the occupied set are kept spreading by edge refreshes.

Far-away segments carry no state: a stateless segment left or right of
all occupied columns behaves as permanently spreading with zero
look-ahead, and a stateless interior segment as an empty simulative one.
Both defaults coincide with what the update rules would compute, so state
is materialised only where the dynamics can tell the difference.

All per-turn decisions are made from the previous front plus the current
deletion set; the analytic layer (ledger module) recomputes the potential
bookkeeping independently from the facts published in `TurnFacts`.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import GraphKind
from .paths import (
    INFINITE,
    DeletionIndex,
    RegionCounter,
    alert_interval,
    column_clear,
    forward_reach_columns,
    viable_start_columns,
)
from .schedule import HSchedule, alert_reset, consolidation_window, edge_reset


class EdgeOracle:
    """Per-turn test for segments whose alert interval is unbounded.

    A segment is edge-infinite when fewer than ``need_l`` disjoint paths of
    height ``need_l`` emanate strictly left of it, or fewer than ``need_r``
    of height ``need_r`` strictly right.  Pure counting answers almost
    every query; regions muddled by blocked columns fall back to exact
    greedy sweeps.
    """

    def __init__(self, front_cols: list[int], deletions: DeletionIndex,
                 kind: GraphKind, row: int, need_l: int):
        self.front = front_cols
        self.need_l = need_l
        self.need_r = 2 * need_l
        self._lc = RegionCounter(front_cols, deletions, kind, row, need_l)
        self._rc = RegionCounter(front_cols, deletions, kind, row, 2 * need_l)
        self._left_cache: dict[int, bool] = {}
        self._right_cache: dict[int, bool] = {}

    def left_infinite(self, boundary: int) -> bool:
        hit = self._left_cache.get(boundary)
        if hit is None:
            c = self._lc
            if c.clear(None, boundary - 1) >= self.need_l:
                hit = False
            else:
                hit = c.count(None, boundary - 1, self.need_l) < self.need_l
            self._left_cache[boundary] = hit
        return hit

    def right_infinite(self, boundary: int) -> bool:
        hit = self._right_cache.get(boundary)
        if hit is None:
            c = self._rc
            if c.clear(boundary + 1, None) >= self.need_r:
                hit = False
            else:
                hit = c.count(boundary + 1, None, self.need_r) < self.need_r
            self._right_cache[boundary] = hit
        return hit

    def infinite(self, k: int, h: int) -> bool:
        return self.left_infinite(k * h) or self.right_infinite((k + 1) * h - 1)


@dataclass
class TurnFacts:
    """Strategy facts for one turn, consumed by the analytic ledger."""

    t: int
    h: int
    doubling: bool
    window: int            # consolidation window 4*q^2*h^2
    alert_span: int        # timer reset for alerted segments
    edge_span: int         # timer reset for edge segments
    disrupted: list[int]
    timers: dict[int, int]
    lookahead: dict[int, int]
    pivots: dict[int, int]
    front_cols: list[int]
    pruned_cols: list[int]
    prev_front_cols: list[int]
    edge: EdgeOracle | None = None
    alert_covers: list[tuple[int, int]] = field(default_factory=list)

    def chi(self, k: int) -> int:
        if k in self.timers:
            return 1
        if self.edge is not None and self.edge.infinite(k, self.h):
            return 1
        return 0

    def look(self, k: int) -> int:
        if self.chi(k):
            return self.lookahead.get(k, 0)
        return self.h


class SpreaderStrategy:
    """Turn-by-turn evolution of the strategy front on one directed graph."""

    def __init__(self, kind: GraphKind, q: Fraction, schedule: HSchedule,
                 initial_cols, deletions: DeletionIndex):
        if kind not in (GraphKind.EIGHTH_PLANE, GraphKind.DIRECTED_HALF_PLANE):
            raise ValueError("strategy runs on the directed kinds only")
        self.kind = kind
        self.q = Fraction(q)
        self.schedule = schedule
        self.deli = deletions
        self.t = 0
        self.h = schedule.width(0)
        self.front_cols: list[int] = sorted(initial_cols)
        self.pruned_cols: list[int] = list(self.front_cols)
        self.timers: dict[int, int] = {}
        self.lookahead: dict[int, int] = {}
        self.pivots: dict[int, int] = {}
        # chi at the previous turn: None means "every segment" (turn-0 rule).
        self._prev_spreading: set[int] | None = None
        self._prev_edge: EdgeOracle | None = None
        self.facts: TurnFacts | None = None
        self.nw = kind is GraphKind.DIRECTED_HALF_PLANE

    # -- previous-turn status, resolved at the old segmentation -------------

    def _child_was_spreading(self, c: int) -> bool:
        if self._prev_spreading is None:
            return True
        if c in self._prev_spreading:
            return True
        if self._prev_edge is not None:
            return self._prev_edge.infinite(c, self.h)
        return False

    def _child_prev_look(self, c: int) -> int:
        if self._child_was_spreading(c):
            return self.lookahead.get(c, 0)
        return self.h

    def _front_segments(self, cols: list[int], h: int) -> dict[int, tuple[int, int]]:
        """Segment index -> slice [i, j) of the sorted column list."""
        out: dict[int, tuple[int, int]] = {}
        i, n = 0, len(cols)
        while i < n:
            k = cols[i] // h
            j = bisect.bisect_right(cols, (k + 1) * h - 1, i)
            out[k] = (i, j)
            i = j
        return out

    # -- the turn ------------------------------------------------------------

    def step(self, new_deletions) -> TurnFacts:
        s = self.t + 1
        h_old = self.h
        h = self.schedule.width(s)
        doubling = h != h_old
        deli = self.deli
        kind = self.kind
        children = (lambda k: (2 * k, 2 * k + 1)) if doubling else (lambda k: (k,))

        def was_spreading(k: int) -> bool:
            return any(self._child_was_spreading(c) for c in children(k))

        def prev_look(k: int) -> int:
            return max(self._child_prev_look(c) for c in children(k))

        ticking: dict[int, int] = {}
        for c, v in self.timers.items():
            p = c // 2 if doubling else c
            if v > ticking.get(p, 0):
                ticking[p] = v

        window = consolidation_window(self.q, h)
        span_alert = alert_reset(self.schedule, self.q, s)
        span_edge = edge_reset(self.schedule, s)

        prev_cols = self.front_cols
        disrupted = sorted({x // h for (x, y) in new_deletions if s <= y <= s + h - 1})
        edge = EdgeOracle(prev_cols, deli, kind, s - 1, span_alert)

        covered, covers = self._alert_coverage(disrupted, prev_cols, s, h, span_alert)

        front_segs = self._front_segments(prev_cols, h)
        probe: set[int] = set(front_segs)
        if prev_cols:
            probe.add((prev_cols[0] - 1) // h)
            probe.add((prev_cols[-1] + 1) // h)
        probe |= covered
        probe |= set(ticking)
        old_pivot_parents = {c // 2 if doubling else c for c in self.pivots}
        probe |= old_pivot_parents

        new_timers: dict[int, int] = {}
        for k in probe:
            if k in covered:
                new_timers[k] = span_alert
            elif edge.infinite(k, h):
                new_timers[k] = span_edge
            else:
                tv = ticking.get(k, 0)
                if tv > 1:
                    new_timers[k] = tv - 1

        new_look: dict[int, int] = {}
        for k in new_timers:
            lv = prev_look(k) - 1
            if lv > 0:
                new_look[k] = lv

        new_pivots: dict[int, int] = {}
        for k in sorted(set(front_segs) | old_pivot_parents):
            if k in new_timers:
                continue  # spreading this turn
            if was_spreading(k):
                p = self._consolidate(k, h, s, front_segs, prev_cols)
            else:
                p = self._pivot_step(k, h, h_old, s, children(k))
            if p is not None:
                new_pivots[k] = p

        front = self._evolve_front(s, h, new_timers, new_pivots, prev_cols, edge)
        pruned = self._prune(s, h, window, front)

        self.t = s
        self.h = h
        self.front_cols = front
        self.timers = new_timers
        self.lookahead = new_look
        self.pivots = new_pivots
        self._prev_spreading = set(new_timers)
        self._prev_edge = edge
        facts = TurnFacts(
            t=s, h=h, doubling=doubling, window=window,
            alert_span=span_alert, edge_span=span_edge,
            disrupted=disrupted, timers=new_timers, lookahead=new_look,
            pivots=new_pivots, front_cols=front, pruned_cols=pruned,
            prev_front_cols=prev_cols, edge=edge, alert_covers=covers,
        )
        self.facts = facts
        return facts

    def _alert_coverage(self, disrupted, prev_cols, s, h, span_alert):
        """Segments reset by this turn's disruptions, clipped to relevance.

        An unbounded alert interval is clipped to the columns the fire can
        reach while the reset timer is still running; beyond that span the
        stateless edge default takes over before any fire arrives.
        """
        covered: set[int] = set(disrupted)
        covers: list[tuple[int, int]] = []
        if not disrupted or not prev_cols:
            return covered, covers
        reach = span_alert + 2 * h
        lo_lim = prev_cols[0] - reach
        hi_lim = prev_cols[-1] + reach
        for kd in disrupted:
            iv = alert_interval(prev_cols, self.deli, self.kind, s - 1,
                                span_alert, h, kd * h, (kd + 1) * h - 1)
            if iv is INFINITE:
                lo, hi = lo_lim, hi_lim
            else:
                lo, hi = max(iv[0], lo_lim), min(iv[1], hi_lim)
            k0 = -((-lo) // h)
            k1 = (hi + 1) // h - 1
            if k0 <= k1:
                covers.append((k0, k1))
                covered.update(range(k0, k1 + 1))
        return covered, covers

    def _consolidate(self, k, h, s, front_segs, prev_cols):
        """Leftmost occupied column with an unblocked vertical run of h cells."""
        seg = front_segs.get(k)
        if seg is None:
            return None
        i, j = seg
        for idx in range(i, j):
            x = prev_cols[idx]
            if column_clear(self.deli, x, s, h):
                return x
        return None

    def _pivot_step(self, k, h, h_old, s, kids):
        """Move each child pivot north or north-east along an unblocked path.

        The continuation path must stay inside the child segment and span
        the full look-ahead height; the leftmost surviving candidate wins.
        """
        best = None
        for c in kids:
            p = self.pivots.get(c)
            if p is None:
                continue
            span_lo, span_hi = c * h_old, (c + 1) * h_old - 1
            cand = None
            if column_clear(self.deli, p, s, h):
                cand = p
            else:
                for off in (0, 1):
                    x = p + off
                    if x > span_hi or (x, s) in self.deli:
                        continue
                    if forward_reach_columns([x], self.deli, self.kind, s, h - 1,
                                             col_cap=(span_lo, span_hi)):
                        cand = x
                        break
            if cand is not None and (best is None or cand < best):
                best = cand
        return best

    def _evolve_front(self, s, h, new_timers, new_pivots, prev_cols, edge):
        deli = self.deli
        out: list[int] = []
        spreading_cache: dict[int, bool] = {}

        def is_spreading(k: int) -> bool:
            v = spreading_cache.get(k)
            if v is None:
                v = k in new_timers or edge.infinite(k, h)
                spreading_cache[k] = v
            return v

        targets: set[int] = set()
        for x in prev_cols:
            targets.add(x)
            targets.add(x + 1)
        if self.nw and prev_cols:
            targets.add(prev_cols[0] - 1)
        if self.kind is GraphKind.EIGHTH_PLANE:
            targets = {x for x in targets if 0 <= x <= s}
        for x in sorted(targets):
            k = x // h
            if is_spreading(k):
                if (x, s) not in deli:
                    out.append(x)
            elif new_pivots.get(k) == x:
                out.append(x)
        return out

    def _prune(self, s, h, window, front):
        """Dead-end avoidance: keep cells with an everlasting escape.

        On the eighth plane this is exactly the one-sided viability filter;
        on the half plane, candidates for a future leftmost cell are kept
        too, so the minimum always survives pruning.
        """
        if not front:
            return []
        ell = 3 * window
        keep = viable_start_columns(front, self.deli, self.kind, s, ell, sided=1)
        if not self.nw:
            return keep
        self._height_memo: dict[int, int] = {}
        devirt = self._devirt_candidates(s, ell, front)
        allowed: set[int] = set()
        for x in self.pruned_cols:
            allowed.update((x - 1, x, x + 1))
        extra = [x for x in devirt if x in allowed]
        return sorted(set(keep) | set(extra))

    def _devirt_candidates(self, s, ell, front):
        """Superset of cells that may become the leftmost occupied cell soon.

        A cell with a two-sided escape of height L qualifies when fewer
        than 2*q*L^2 + 2*L cells of escape at least L sit strictly left of
        it; the bound grows so fast that full-height escapees all qualify
        at desk scale.
        """
        viable = viable_start_columns(front, self.deli, self.kind, s, ell, sided=2)
        q = self.q
        bound_full = 2 * q * ell * ell + 2 * ell
        out: list[int] = []
        vset = set(viable)
        rank = 0
        for x in front:
            if x in vset:
                if rank < bound_full:
                    out.append(x)
                rank += 1
        for x in front:
            if x in vset:
                continue
            lx = self._two_sided_height(x, s, ell)
            bound = 2 * q * lx * lx + 2 * lx
            ahead = 0
            for y in front:
                if y >= x:
                    break
                if y in vset or self._two_sided_height(y, s, ell) >= lx:
                    ahead += 1
                    if ahead >= bound:
                        break
            if ahead < bound:
                bisect.insort(out, x)
        return out

    def _two_sided_height(self, x, s, cap):
        best = self._height_memo.get(x)
        if best is not None:
            return best
        lo, hi, best = 1, cap, 0
        while lo <= hi:
            mid = (lo + hi) // 2
            if viable_start_columns([x], self.deli, self.kind, s, mid, sided=2):
                best = mid
                lo = mid + 1
            else:
                hi = mid - 1
        self._height_memo[x] = best
        return best


class PaperSpreader:
    """Engine policy wrapping the strategy; occupies the pruned front.

    The strategy's internal (unpruned) front drives all bookkeeping; the
    engine sees only the dead-end-filtered cells, which by construction
    stay adjacent to the previously emitted cells.
    """

    name = "paper"

    def __init__(self, seed: int = 0):
        self.strategy: SpreaderStrategy | None = None

    def params(self) -> dict:
        return {}

    def plan_occupations(self, state, budget):
        if self.strategy is None:
            cfg = state.config
            rows = {y for (_, y) in cfg.initial_occupied}
            if rows and rows != {0}:
                raise ValueError("strategy games start with the fire on row 0")
            self.strategy = SpreaderStrategy(
                cfg.kind, cfg.q, cfg.schedule,
                [x for (x, _) in cfg.initial_occupied], state.deleted)
        facts = self.strategy.step(state.new_deletions)
        if not facts.pruned_cols:
            return None
        return [(x, facts.t) for x in facts.pruned_cols]
