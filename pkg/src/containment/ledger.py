"""Analytic layer: simulated fire, counted deletions, debt, potential, checks.

The ledger never trusts the strategy's arithmetic: it refolds counted
deletions, simulated-fire mass, range, pre-potential and debt from the raw
per-turn facts (deletions, fronts, segment modes) using its own
implementations of the update rules, then checks every promised invariant,
turn by turn, in exact integer arithmetic.

Violations are data: dicts carrying the check name, turn, segment and the
two sides of the failed comparison.  A clean run yields an empty list.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import GraphKind
from .paths import (
    INFINITE,
    DeletionIndex,
    alert_interval,
    forward_reach_columns,
    interval_total,
)
from .spreader import TurnFacts

_WIDE = 1 << 62


def _seg_slices(cols: list[int], h: int) -> dict[int, tuple[int, int]]:
    out: dict[int, tuple[int, int]] = {}
    i, n = 0, len(cols)
    while i < n:
        k = cols[i] // h
        j = bisect.bisect_right(cols, (k + 1) * h - 1, i)
        out[k] = (i, j)
        i = j
    return out


@dataclass
class LedgerSnapshot:
    t: int
    h: int
    b: int
    phi: int
    f: int
    d: int
    prepot: int
    pot: int
    spread_cells: int
    pruned: int
    rows: dict[int, list] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "t": self.t, "h": self.h, "b": self.b, "phi": self.phi,
            "f": self.f, "d": self.d, "prepot": self.prepot, "pot": self.pot,
            "spread_cells": self.spread_cells, "pruned": self.pruned,
        }
        if self.rows:
            out["rows"] = {str(k): v for k, v in sorted(self.rows.items())}
        return out


class Ledger:
    """Per-segment analytic state for one directed-graph game."""

    def __init__(self, kind: GraphKind, q: Fraction, deletions: DeletionIndex,
                 initial_cols: list[int], h0: int,
                 initial_counted: dict[int, set] | None = None,
                 sample_every: int = 97, keep_rows: bool = False):
        self.kind = kind
        self.q = Fraction(q)
        self.deli = deletions
        self.nw = kind is GraphKind.DIRECTED_HALF_PLANE
        self.t = 0
        self.h = h0
        self.counted: dict[int, set] = {}
        self.f: dict[int, int] = {}
        self.phi: dict[int, int] = {}
        self.r: dict[int, int] = {}
        self.debt: dict[int, int] = {}
        self.debt_born: dict[int, int] = {}
        self.front_cols = sorted(initial_cols)
        self.violations: list[dict] = []
        self.initial_deleted_count = len(deletions)
        self.sample_every = max(sample_every, 1)
        self.keep_rows = keep_rows
        self._samples: list[dict] = []
        self._last_facts: TurnFacts | None = None
        self.last_pot_delta = 0
        for k, (i, j) in _seg_slices(self.front_cols, h0).items():
            self.phi[k] = j - i
            self.r[k] = j - i
        if initial_counted:
            for k, cells in initial_counted.items():
                if cells:
                    self.counted[k] = set(cells)
                    self.f[k] = len(cells)
        self.f_total = sum(self.f.values())
        self.phi_total = sum(self.phi.values())
        self.d_total = 0

    # -- helpers -------------------------------------------------------------

    def _fail(self, prop: str, t: int, segment, lhs, rhs) -> None:
        self.violations.append({
            "prop": prop, "turn": t, "segment": segment,
            "lhs": str(lhs), "rhs": str(rhs),
        })

    def _prev_look(self, k: int, doubling: bool) -> int:
        lf = self._last_facts
        if lf is None:
            return 0
        kids = (2 * k, 2 * k + 1) if doubling else (k,)
        return max(lf.look(c) for c in kids)

    def _box_deletions(self, k: int, h: int, s: int, look: int,
                       col_lo: int | None = None) -> int:
        lo = k * h if col_lo is None else col_lo
        hi = (k + 1) * h - 1
        total = 0
        for x in range(lo, hi + 1):
            rows = self.deli.by_col.get(x)
            if rows:
                i = bisect.bisect_left(rows, s)
                j = bisect.bisect_right(rows, s + look)
                total += j - i
        return total

    def _range_of(self, k: int, h: int, s: int, look: int,
                  starts: list[int]) -> int:
        """Endpoints in the segment's top row reachable from its cells."""
        if not starts:
            return 0
        lo, hi = k * h, (k + 1) * h - 1
        if look == 0:
            return len(starts)
        clean = True
        for rr in self.deli.rows_between(s + 1, s + look):
            if self.deli.cols_at(rr, starts[0], hi):
                clean = False
                break
        if clean:
            total = 0
            run_lo = run_hi = None
            for x in starts:
                top = min(x + look, hi)
                if run_hi is not None and x <= run_hi + 1:
                    run_hi = max(run_hi, top)
                else:
                    if run_hi is not None:
                        total += run_hi - run_lo + 1
                    run_lo, run_hi = x, top
            total += run_hi - run_lo + 1
            return total
        reach = forward_reach_columns(starts, self.deli, self.kind, s, look,
                                      col_cap=(None, hi))
        return interval_total(reach, lo, hi)

    # -- the fold --------------------------------------------------------------

    def on_turn_facts(self, facts: TurnFacts, new_deletions: list) -> LedgerSnapshot:
        s = facts.t
        h = facts.h
        self.t = s
        doubling = facts.doubling
        prev_front = self.front_cols
        front = facts.front_cols
        front_segs = _seg_slices(front, h)
        prev_segs = _seg_slices(prev_front, h)

        if doubling:
            self._merge_rows()
        self.h = h

        chi = facts.chi
        look = facts.look
        min_prev = prev_front[0] if prev_front else None
        prev_set = set(prev_front)

        # --- counted deletions -------------------------------------------------
        delta_f: dict[int, list] = {}
        dirty: set[int] = set()
        for r in self.deli.rows_between(s, s + h):
            for x in self.deli.cols_at(r, -_WIDE, _WIDE):
                k = x // h
                lk = look(k)
                if lk > 0 and r <= s + lk:
                    dirty.add(k)
                    cell = (x, r)
                    if cell not in self.counted.get(k, ()):
                        lst = delta_f.setdefault(k, [])
                        if cell not in lst:
                            lst.append(cell)
        if prev_front:
            lo = min_prev - (1 if self.nw else 0)
            hi = prev_front[-1] + 1
            for x in self.deli.cols_at(s, lo, hi):
                k = x // h
                if look(k) != 0:
                    continue  # the box rule above covers it
                is_target = (x in prev_set or (x - 1) in prev_set
                             or (self.nw and x == min_prev - 1))
                if not is_target:
                    continue
                cell = (x, s)
                if cell not in self.counted.get(k, ()):
                    lst = delta_f.setdefault(k, [])
                    if cell not in lst:
                        lst.append(cell)

        actives: set[int] = set(dirty) | set(delta_f) | set(front_segs)
        actives.update(k for k in facts.timers
                       if k in self.phi or k in self.debt or k in self.r)
        actives.update(facts.pivots)
        actives.update(self.debt)
        if doubling:
            actives.update(self.phi)
            actives.update(self.f)
            actives.update(self.r)

        dis_set = set(facts.disrupted)

        # Freshness observations on counted deletions.
        for k, cells in delta_f.items():
            if k not in dis_set:
                lp = self._prev_look(k, doubling)
                bad = [c for c in cells if s - 1 <= c[1] <= s - 1 + lp]
                if bad:
                    self._fail("obs-fresh-count", s, k, bad,
                               f"S x [{s - 1},{s - 1 + lp}]")
            if self._prev_look(k, doubling) == 0 and self.counted.get(k):
                top = max(c[1] for c in self.counted[k])
                if top >= s:
                    self._fail("obs-simple-f-fresh", s, k, top, s)

        for k, cells in delta_f.items():
            self.counted.setdefault(k, set()).update(cells)
            self.f[k] = self.f.get(k, 0) + len(cells)
            self.f_total += len(cells)

        # --- range and simulated fire --------------------------------------------
        d_phi: dict[int, int] = {}
        d_r: dict[int, int] = {}
        for k in actives:
            seg = front_segs.get(k)
            cells = front[seg[0]:seg[1]] if seg else []
            ck = chi(k)
            lk = look(k)
            if ck == 0:
                pivot = facts.pivots.get(k)
                starts = [pivot] if pivot is not None else []
            else:
                starts = cells
            r = self._range_of(k, h, s, lk, starts)
            old_r = self.r.get(k, 0)
            if r != old_r:
                d_r[k] = r - old_r
                if r:
                    self.r[k] = r
                else:
                    self.r.pop(k, None)
            old_phi = self.phi.get(k, 0)
            if ck == 0:
                nphi = max(old_phi - len(delta_f.get(k, ())), 0)
            else:
                nphi = r
            if nphi != old_phi:
                d_phi[k] = nphi - old_phi
                if nphi:
                    self.phi[k] = nphi
                else:
                    self.phi.pop(k, None)
                self.phi_total += nphi - old_phi

        # --- pre-potential deltas and debt ----------------------------------------
        d_pre: dict[int, int] = {}
        for k in actives:
            dp = d_phi.get(k, 0) + len(delta_f.get(k, ()))
            if dp:
                d_pre[k] = dp

        k_min_occ = front[0] // h if front else None
        eligible = sorted(k for k, v in d_pre.items()
                          if v > 0 and k_min_occ is not None and k > k_min_occ)

        d_tilde: dict[int, int] = {}
        for k in set(self.debt) | set(d_pre):
            dv = self.debt.get(k, 0) + max(-d_pre.get(k, 0), 0)
            if dv:
                d_tilde[k] = dv
        tilde_keys = sorted(d_tilde)

        new_debt: dict[int, int] = {}
        d_debt: dict[int, int] = {}
        for k in sorted(set(self.debt) | set(d_tilde)):
            dv = d_tilde.get(k, 0)
            old = self.debt.get(k, 0)
            if dv > 0 and eligible:
                i = bisect.bisect_right(eligible, k)
                lam = eligible[i - 1] if i else None
                if lam is not None:
                    a = bisect.bisect_left(tilde_keys, lam)
                    b = bisect.bisect_left(tilde_keys, k)
                    if a == b:  # no indebted segment in [lam, k)
                        dv = max(dv - d_pre[lam], 0)
            if dv != old:
                d_debt[k] = dv - old
                self.d_total += dv - old
            if dv:
                new_debt[k] = dv
                if old == 0:
                    self.debt_born[k] = s
            else:
                self.debt_born.pop(k, None)
        self.debt = new_debt

        self._run_checks(facts, s, h, front, prev_front, front_segs, prev_segs,
                         actives, dis_set, d_pre, d_debt, d_r, delta_f, doubling)

        self._last_facts = facts
        self.front_cols = front

        spread_cells = sum(
            (j - i) for k, (i, j) in front_segs.items() if chi(k) == 1)
        snap = LedgerSnapshot(
            t=s, h=h, b=len(front), phi=self.phi_total, f=self.f_total,
            d=self.d_total, prepot=self.phi_total + self.f_total,
            pot=self.phi_total + self.f_total + self.d_total,
            spread_cells=spread_cells, pruned=len(facts.pruned_cols),
        )
        if self.keep_rows:
            rows = {}
            for k in sorted(actives):
                rows[k] = [chi(k), look(k), self.phi.get(k, 0),
                           self.f.get(k, 0), self.r.get(k, 0),
                           self.debt.get(k, 0)]
            snap.rows = rows
        return snap

    def _merge_rows(self) -> None:
        def fold_sum(d: dict[int, int]) -> dict[int, int]:
            out: dict[int, int] = {}
            for k, v in d.items():
                out[k // 2] = out.get(k // 2, 0) + v
            return {k: v for k, v in out.items() if v}

        self.f = fold_sum(self.f)
        self.phi = fold_sum(self.phi)
        self.r = fold_sum(self.r)
        self.debt = fold_sum(self.debt)
        merged: dict[int, set] = {}
        for k, cells in self.counted.items():
            merged.setdefault(k // 2, set()).update(cells)
        self.counted = merged
        born: dict[int, int] = {}
        for k, v in self.debt_born.items():
            p = k // 2
            born[p] = min(born.get(p, v), v)
        self.debt_born = {k: v for k, v in born.items() if k in self.debt}

    # -- invariant suite -------------------------------------------------------

    def _run_checks(self, facts, s, h, front, prev_front, front_segs, prev_segs,
                    actives, dis_set, d_pre, d_debt, d_r, delta_f, doubling) -> None:
        q = self.q
        chi, look = facts.chi, facts.look

        # 1. counted deletions never outrun the budget
        if self.f_total - self.initial_deleted_count > q * s:
            self._fail("count-budget", s, None,
                       self.f_total - self.initial_deleted_count, q * s)

        # 2. potential growth while the fire burns
        d_pot = (sum(d_pre.values()) + sum(d_debt.values()))
        self.last_pot_delta = d_pot
        need = 2 if self.nw else 1
        if prev_front and d_pot < need:
            self._fail("potential-growth", s, None, d_pot, need)

        # 3. positive surplus needs fire on the board
        if self.phi_total + self.d_total > 0 and not front:
            self._fail("surplus-needs-fire", s, None,
                       self.phi_total + self.d_total, 0)

        # 4/5. per-segment caps
        for k in actives:
            pk = self.phi.get(k, 0)
            dk = self.debt.get(k, 0)
            if pk + dk > h:
                self._fail("fire-plus-debt-cap", s, k, pk + dk, h)
            if pk > self.r.get(k, 0):
                self._fail("fire-within-range", s, k, pk, self.r.get(k, 0))

        # 6. debt ages out within q*h^2 + h turns
        bound = q * h * h + h
        for k in self.debt:
            if s - self.debt_born[k] > bound:
                self._fail("debt-duration", s, k, s - self.debt_born[k], bound)

        # 7. no disruption, no loss; spreading keeps range+count
        for k in actives:
            if k in dis_set:
                continue
            if d_pre.get(k, 0) < 0:
                self._fail("undisrupted-no-loss", s, k, d_pre.get(k, 0), 0)
            if chi(k) == 1:
                dr = d_r.get(k, 0) + len(delta_f.get(k, ()))
                if dr < 0:
                    self._fail("spreading-range-gain", s, k, dr, 0)

        # 8. simple segment with a right-vacant occupied cell gains
        prev_set = set(prev_front)
        for k in actives:
            if look(k) != 0 or self._prev_look(k, doubling) != 0:
                continue
            if k not in prev_segs:
                continue
            lo, hi = k * h, (k + 1) * h - 1
            gain = any(x - 1 in prev_set and x not in prev_set
                       for x in range(lo, hi + 1))
            if gain and d_pre.get(k, 0) < 1:
                self._fail("simple-vacancy-gain", s, k, d_pre.get(k, 0), 1)

        # 9. debt growth is bounded by the potential loss
        for k, dd in d_debt.items():
            if dd > max(-d_pre.get(k, 0), 0):
                self._fail("debt-growth-cap", s, k, dd,
                           max(-d_pre.get(k, 0), 0))

        # 10. the neighbourhood of a simulative segment is debt-free
        if self.debt:
            self._check_simulative_debt_free(facts, s, h)

        # 11. pivot diagnostics
        for k in actives:
            pivot = facts.pivots.get(k)
            if pivot is None or chi(k) != 0:
                continue
            hi = (k + 1) * h - 1
            lk = look(k)
            if self.phi.get(k, 0) > 0:
                w = hi - pivot + 1
                ftilde = self._box_deletions(k, h, s, lk, col_lo=pivot)
                rk = self.r.get(k, 0)
                if w > rk + ftilde:
                    self._fail("pivot-width-range", s, k, w, rk + ftilde)
            box = self._box_deletions(k, h, s, lk)
            if self.phi.get(k, 0) > h - box:
                self._fail("simulative-fire-headroom", s, k,
                           self.phi.get(k, 0), h - box)

        # 12. structural segment facts
        for k, (i, j) in front_segs.items():
            if chi(k) == 0 and j - i > 1:
                self._fail("simulative-unique", s, k, j - i, 1)
            if chi(k) == 1:
                tau = facts.timers.get(k, facts.edge_span)
                if look(k) >= tau:
                    self._fail("lookahead-below-timer", s, k, look(k), tau)
        if front:
            for k in (front[0] // h, front[-1] // h):
                if look(k) != 0 or self.debt.get(k, 0):
                    self._fail("boundary-simple-debtfree", s, k,
                               (look(k), self.debt.get(k, 0)), (0, 0))

        # 13. doubling keeps timers clear of the old width
        if doubling and self._last_facts is not None:
            h_old = self._last_facts.h
            merged: dict[int, int] = {}
            for c, v in self._last_facts.timers.items():
                p = c // 2
                merged[p] = max(merged.get(p, 0), v)
            for k, v in merged.items():
                if 0 < v <= h_old:
                    self._fail("doubling-timer-gap", s, k, v, h_old)

        self._sample_side_mass(facts, s, h, front)

    def _check_simulative_debt_free(self, facts, s, h) -> None:
        """No simulative segment may carry debt in its left alert reach."""
        span = facts.alert_span
        kmax_extra = 2 * span // h + 4
        for kq in sorted(self.debt):
            for kS in range(kq - 1, kq + kmax_extra):
                if facts.chi(kS) != 0:
                    continue
                if kS not in facts.pivots and kS != kq:
                    continue
                iv = alert_interval(facts.prev_front_cols, self.deli, self.kind,
                                    s - 1, span, h, kS * h, (kS + 1) * h - 1)
                if iv is INFINITE:
                    lo = -_WIDE
                else:
                    lo = iv[0]
                if lo <= (kq + 1) * h - 1 and kq * h <= (kS + 2) * h - 1:
                    self._fail("simulative-debtfree-zone", s, kq,
                               self.debt[kq], kS)
                    break

    def _sample_side_mass(self, facts, s, h, front) -> None:
        keep = []
        for sample in self._samples:
            age = s - sample["t0"]
            if age >= sample["span"] or sample["h"] != h:
                continue
            k = sample["k"]
            lo, hi = k * h, (k + 1) * h - 1
            left_mass = bisect.bisect_right(front, hi)
            right_mass = len(front) - bisect.bisect_left(front, lo)
            if left_mass < sample["span"] - self.q * age:
                self._fail("simulative-left-mass", s, k, left_mass,
                           sample["span"] - self.q * age)
            if right_mass < 2 * sample["span"] - self.q * age:
                self._fail("simulative-right-mass", s, k, right_mass,
                           2 * sample["span"] - self.q * age)
            keep.append(sample)
        self._samples = keep
        if s % self.sample_every == 0 and facts.pivots:
            k = min(facts.pivots)
            self._samples.append({"t0": s, "k": k, "span": facts.alert_span,
                                  "h": h})


def counted_by_segment(cells, h: int) -> dict[int, set]:
    out: dict[int, set] = {}
    for (x, y) in cells:
        out.setdefault(x // h, set()).add((x, y))
    return out


class LedgerObserver:
    """Engine observer folding strategy facts into the analytic ledger."""

    def __init__(self, policy, sample_every: int = 97, keep_rows: bool = False,
                 serialize: bool = True):
        self.policy = policy
        self.ledger: Ledger | None = None
        self.sample_every = sample_every
        self.keep_rows = keep_rows
        self.serialize = serialize
        self.snapshots: list[LedgerSnapshot] = []

    def on_start(self, state) -> None:
        cfg = state.config
        h0 = cfg.schedule.width(0)
        self.ledger = Ledger(
            cfg.kind, cfg.q, state.deleted,
            [x for (x, _) in cfg.initial_occupied], h0,
            initial_counted=counted_by_segment(cfg.initial_counted, h0),
            sample_every=self.sample_every, keep_rows=self.keep_rows)

    def on_turn(self, state, record) -> None:
        facts = self.policy.strategy.facts
        before = len(self.ledger.violations)
        snap = self.ledger.on_turn_facts(facts, state.new_deletions)
        self.snapshots.append(snap)
        fresh = self.ledger.violations[before:]
        if fresh:
            record.violations.extend(fresh)
        record.metrics = snap.to_json()
        if self.serialize:
            record.metrics["facts"] = serialize_facts(facts, self.ledger)

    @property
    def violations(self) -> list[dict]:
        return [] if self.ledger is None else self.ledger.violations


def serialize_facts(facts: TurnFacts, ledger: Ledger) -> dict:
    """Trace-portable view of one turn's strategy facts.

    Carries the segment modes the offline refold needs: materialised
    timers/look-ahead/pivots plus derived modes for every segment the
    deletion router may probe this turn.
    """
    s, h = facts.t, facts.h
    probes: set[int] = set()
    deli = ledger.deli
    for r in deli.rows_between(s, s + h):
        probes.update(x // h for x in deli.cols_at(r, -_WIDE, _WIDE))
    chi_ext = {}
    for k in probes:
        if k not in facts.timers:
            chi_ext[str(k)] = [facts.chi(k), facts.look(k)]
    return {
        "h": h,
        "doubling": facts.doubling,
        "window": facts.window,
        "alert_span": facts.alert_span,
        "edge_span": facts.edge_span,
        "dis": facts.disrupted,
        "timers": {str(k): v for k, v in facts.timers.items()},
        "look": {str(k): v for k, v in facts.lookahead.items()},
        "pivots": {str(k): v for k, v in facts.pivots.items()},
        "front": facts.front_cols,
        "chi_ext": chi_ext,
    }


class ReplayFacts:
    """TurnFacts look-alike rebuilt from a serialized trace record."""

    def __init__(self, t: int, payload: dict, pruned_cols, prev_front_cols):
        self.t = t
        self.h = payload["h"]
        self.doubling = payload["doubling"]
        self.window = payload["window"]
        self.alert_span = payload["alert_span"]
        self.edge_span = payload["edge_span"]
        self.disrupted = list(payload["dis"])
        self.timers = {int(k): v for k, v in payload["timers"].items()}
        self.lookahead = {int(k): v for k, v in payload["look"].items()}
        self.pivots = {int(k): v for k, v in payload["pivots"].items()}
        self.front_cols = list(payload["front"])
        self.pruned_cols = list(pruned_cols)
        self.prev_front_cols = list(prev_front_cols)
        self.edge = None
        self.alert_covers = []
        self._chi_ext = {int(k): v for k, v in payload.get("chi_ext", {}).items()}

    def chi(self, k: int) -> int:
        if k in self.timers:
            return 1
        if k in self._chi_ext:
            return self._chi_ext[k][0]
        return 0

    def look(self, k: int) -> int:
        if k in self._chi_ext:
            return self._chi_ext[k][1]
        if self.chi(k):
            return self.lookahead.get(k, 0)
        return self.h
