"""Upward-path machinery over sparse deletion sets.

Everything here works on one game's deletion index plus a front (a set of
occupied cells on a single row).  Paths are staircases: a one-sided path
drifts 0 or +1 columns per row, a two-sided path drifts -1, 0 or +1.  A
path of *length* ``ell`` occupies ``ell`` cells on rows ``t .. t+ell-1``.

Deletions are sparse, so all reachability questions are answered with
interval arithmetic over the rows that actually contain deletions; rows
without deletions are skipped in O(1).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .lattice import Cell, GraphKind, in_domain

INFINITE = "infinite"


class QueryUnbounded(ValueError):
    """Disjoint-path count requested over an unbounded region with no stop threshold."""


class DeletionIndex:
    """Deleted cells indexed by column and by row for fast window queries."""

    def __init__(self, cells=()):
        self.cells: set[Cell] = set()
        self.by_col: dict[int, list[int]] = {}
        self.by_row: dict[int, list[int]] = {}
        self._rows: list[int] = []
        for c in cells:
            self.add(c)

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def add(self, cell: Cell) -> None:
        if cell in self.cells:
            return
        x, y = cell
        self.cells.add(cell)
        rows = self.by_col.setdefault(x, [])
        bisect.insort(rows, y)
        if y not in self.by_row:
            self.by_row[y] = []
            bisect.insort(self._rows, y)
        bisect.insort(self.by_row[y], x)

    def column_blocked(self, x: int, row_lo: int, row_hi: int) -> bool:
        """Any deleted cell in column x with row in [row_lo, row_hi]?"""
        rows = self.by_col.get(x)
        if not rows:
            return False
        i = bisect.bisect_left(rows, row_lo)
        return i < len(rows) and rows[i] <= row_hi

    def rows_between(self, row_lo: int, row_hi: int) -> list[int]:
        i = bisect.bisect_left(self._rows, row_lo)
        j = bisect.bisect_right(self._rows, row_hi)
        return self._rows[i:j]

    def cols_at(self, row: int, col_lo: int, col_hi: int) -> list[int]:
        cols = self.by_row.get(row)
        if not cols:
            return []
        i = bisect.bisect_left(cols, col_lo)
        j = bisect.bisect_right(cols, col_hi)
        return cols[i:j]


def column_clear(deletions: DeletionIndex, x: int, t: int, ell: int) -> bool:
    """True iff the vertical run of ell cells above (x, t) contains no deletion."""
    if ell <= 0:
        return True
    return not deletions.column_blocked(x, t, t + ell - 1)


# ---------------------------------------------------------------------------
# Interval arithmetic
# ---------------------------------------------------------------------------

Intervals = list[tuple[int, int]]  # sorted, disjoint, inclusive


def _merge(ivs: Intervals) -> Intervals:
    if not ivs:
        return []
    ivs.sort()
    out = [ivs[0]]
    for a, b in ivs[1:]:
        pa, pb = out[-1]
        if a <= pb + 1:
            if b > pb:
                out[-1] = (pa, b)
        else:
            out.append((a, b))
    return out


def _expand(ivs: Intervals, left: int, right: int) -> Intervals:
    return _merge([(a - left, b + right) for a, b in ivs])


def _subtract_cols(ivs: Intervals, cols: list[int]) -> Intervals:
    if not cols:
        return ivs
    out: Intervals = []
    ci = 0
    for a, b in ivs:
        ci = bisect.bisect_left(cols, a, ci)
        cur = a
        i = ci
        while i < len(cols) and cols[i] <= b:
            c = cols[i]
            if cur <= c - 1:
                out.append((cur, c - 1))
            cur = c + 1
            i += 1
        if cur <= b:
            out.append((cur, b))
    return out


def _clamp(ivs: Intervals, lo, hi) -> Intervals:
    out: Intervals = []
    for a, b in ivs:
        if lo is not None:
            a = max(a, lo)
        if hi is not None:
            b = min(b, hi)
        if a <= b:
            out.append((a, b))
    return out


def _contains(ivs: Intervals, x: int) -> bool:
    i = bisect.bisect_right(ivs, (x, float("inf"))) - 1
    return i >= 0 and ivs[i][0] <= x <= ivs[i][1]


def _domain_clamp(kind: GraphKind, row: int, ivs: Intervals) -> Intervals:
    if kind is GraphKind.EIGHTH_PLANE:
        return _clamp(ivs, 0, row)
    return ivs


# ---------------------------------------------------------------------------
# Start viability (dead-end detection) and forward reach
# ---------------------------------------------------------------------------

def viable_intervals_at(
    deletions: DeletionIndex,
    kind: GraphKind,
    t: int,
    ell: int,
    col_lo: int,
    col_hi: int,
    sided: int = 1,
    obstacle_rows: dict[int, list[int]] | None = None,
    stop_row: int | None = None,
) -> dict[int, Intervals]:
    """Columns from which the top row t+ell-1 is reachable, per row.

    Returns a map row -> intervals for rows stop_row..t+ell-1 (default all
    the way down to t).  Cells in ``obstacle_rows`` (extra per-row blocked
    columns, e.g. vertices used by committed paths) are avoided too.
    """
    top = t + ell - 1
    if stop_row is None:
        stop_row = t
    grow_r = 1 if sided == 2 else 0

    def blocked_at(row: int, lo: int, hi: int) -> list[int]:
        cols = deletions.cols_at(row, lo, hi)
        if obstacle_rows and row in obstacle_rows:
            extra = [c for c in obstacle_rows[row] if lo <= c <= hi]
            if extra:
                cols = sorted(set(cols) | set(extra))
        return cols

    win_lo = col_lo - (top - stop_row) if sided == 2 else col_lo
    win_hi = col_hi

    cur: Intervals = [(col_lo, col_hi)]
    cur = _domain_clamp(kind, top, cur)
    cur = _subtract_cols(cur, blocked_at(top, col_lo, col_hi))
    out = {top: cur}
    row = top
    while row > stop_row:
        row -= 1
        cur = _expand(cur, 1, grow_r)
        cur = _clamp(cur, win_lo, win_hi)
        cur = _domain_clamp(kind, row, cur)
        if cur:
            lo, hi = cur[0][0], cur[-1][1]
            cur = _subtract_cols(cur, blocked_at(row, lo, hi))
        out[row] = cur
        if not cur:
            break
    return out


def viable_start_columns(
    front_cols: list[int],
    deletions: DeletionIndex,
    kind: GraphKind,
    t: int,
    ell: int,
    sided: int = 1,
) -> list[int]:
    """Sorted front columns admitting a length-ell upward path (dead-end filter)."""
    if not front_cols:
        return []
    if ell <= 1:
        return list(front_cols)
    top = t + ell - 1
    lo, hi = front_cols[0], front_cols[-1]
    col_hi = hi + (ell - 1)
    col_lo = lo - (ell - 1) if sided == 2 else lo
    grow_r = 1 if sided == 2 else 0

    cur: Intervals = [(col_lo, col_hi)]
    cur = _domain_clamp(kind, top, cur)
    cur = _subtract_cols(cur, deletions.cols_at(top, col_lo, col_hi))
    row = top
    del_rows = deletions.rows_between(t + 1, top - 1)
    for r in reversed(del_rows):
        k = row - r
        cur = _expand(cur, k, k * grow_r)
        cur = _clamp(cur, col_lo, col_hi)
        cur = _domain_clamp(kind, r, cur)
        if not cur:
            return []
        a, b = cur[0][0], cur[-1][1]
        cur = _subtract_cols(cur, deletions.cols_at(r, a, b))
        row = r
    k = row - t
    cur = _expand(cur, k, k * grow_r)
    cur = _clamp(cur, col_lo, col_hi)
    cur = _domain_clamp(kind, t, cur)
    return [c for c in front_cols if _contains(cur, c)]


def forward_reach_columns(
    start_cols: list[int],
    deletions: DeletionIndex,
    kind: GraphKind,
    start_row: int,
    ell: int,
    sided: int = 1,
    col_cap: tuple[int | None, int | None] = (None, None),
) -> Intervals:
    """Columns reachable at row start_row + ell by paths with ell edges.

    Starts are assumed occupied (hence not deleted); intermediate rows and
    the final row avoid deletions.  ``col_cap`` confines the whole walk.
    """
    if not start_cols:
        return []
    cur: Intervals = _merge([(c, c) for c in start_cols])
    cur = _clamp(cur, *col_cap)
    grow_l = 1 if sided == 2 else 0
    row = start_row
    target = start_row + ell
    while row < target and cur:
        nxt_del = deletions.rows_between(row + 1, target)
        r = nxt_del[0] if nxt_del else target
        k = r - row
        cur = _expand(cur, k * grow_l, k)
        cur = _clamp(cur, *col_cap)
        cur = _domain_clamp(kind, r, cur)
        if cur:
            a, b = cur[0][0], cur[-1][1]
            cur = _subtract_cols(cur, deletions.cols_at(r, a, b))
        row = r
    return cur


def interval_total(ivs: Intervals, lo=None, hi=None) -> int:
    total = 0
    for a, b in _clamp(ivs, lo, hi):
        total += b - a + 1
    return total


# ---------------------------------------------------------------------------
# Greedy disjoint-path sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepStats:
    fast: int = 0
    slow: int = 0
    failed: int = 0


class DisjointPathSweep:
    """Counts pairwise vertex-disjoint one-sided paths, fed one start at a time.

    Starts must be fed in ascending column order.  Each accepted start
    routes the leftmost completing path around deletions and all previously
    routed paths; clear columns take an O(log) vertical fast path.  The
    running count after each feed equals the exact maximum over the starts
    fed so far (prefix optimality), which the oracle tests pin down.
    """

    def __init__(self, deletions: DeletionIndex, kind: GraphKind, t: int, ell: int):
        self.deli = deletions
        self.kind = kind
        self.t = t
        self.ell = ell
        self.count = 0
        self.full_cols: list[int] = []            # columns used whole-height
        self.used_ranges: dict[int, list[tuple[int, int]]] = {}
        self.used_rows: dict[int, list[int]] = {}
        self.stats = SweepStats()
        self._last: int | None = None

    # -- helpers ----------------------------------------------------------

    def _col_used(self, x: int, lo: int, hi: int) -> bool:
        i = bisect.bisect_left(self.full_cols, x)
        if i < len(self.full_cols) and self.full_cols[i] == x:
            return True
        for a, b in self.used_ranges.get(x, ()):
            if a <= hi and lo <= b:
                return True
        return False

    def _mark_full(self, x: int) -> None:
        bisect.insort(self.full_cols, x)

    def _mark_path(self, path_cols: list[int]) -> None:
        # path_cols[i] is the column at row t+i
        runs: dict[int, tuple[int, int]] = {}
        for i, x in enumerate(path_cols):
            r = self.t + i
            if x in runs and runs[x][1] == r - 1:
                runs[x] = (runs[x][0], r)
            else:
                if x in runs:
                    self.used_ranges.setdefault(x, []).append(runs[x])
                runs[x] = (r, r)
            self.used_rows.setdefault(r, []).append(x)
        for x, rng in runs.items():
            self.used_ranges.setdefault(x, []).append(rng)

    def _obstacle_map(self, col_lo: int, col_hi: int) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        top = self.t + self.ell - 1
        i = bisect.bisect_left(self.full_cols, col_lo)
        walls = []
        while i < len(self.full_cols) and self.full_cols[i] <= col_hi:
            walls.append(self.full_cols[i])
            i += 1
        for r, cols in self.used_rows.items():
            if self.t <= r <= top:
                sel = sorted(c for c in cols if col_lo <= c <= col_hi)
                if sel:
                    out[r] = sel
        if walls:
            for r in range(self.t, top + 1):
                cur = out.setdefault(r, [])
                out[r] = sorted(set(cur) | set(walls))
        return out

    # -- feeding ----------------------------------------------------------

    def feed(self, col: int) -> bool:
        """Try to route a path from the front cell at this column."""
        if self._last is not None and col <= self._last:
            raise ValueError("sweep fed out of order")
        self._last = col
        t, ell = self.t, self.ell
        if ell <= 1:
            self.count += 1
            self.stats.fast += 1
            return True
        top = t + ell - 1
        if (not self.deli.column_blocked(col, t + 1, top)
                and not self._col_used(col, t + 1, top)
                and (self.kind is not GraphKind.EIGHTH_PLANE or col <= t)):
            self._mark_full(col)
            self.count += 1
            self.stats.fast += 1
            return True
        return self._feed_slow(col)

    def _feed_slow(self, col: int) -> bool:
        t, ell = self.t, self.ell
        top = t + ell - 1
        col_hi = col + (ell - 1)
        obstacles = self._obstacle_map(col, col_hi)
        viable = viable_intervals_at(
            self.deli, self.kind, t, ell, col, col_hi,
            sided=1, obstacle_rows=obstacles,
        )
        if not _contains(viable.get(t, []), col):
            self.stats.failed += 1
            return False
        # Walk upward hugging the left frontier.
        prefs = (0, 1)
        path = [col]
        x = col
        for r in range(t + 1, top + 1):
            nxt = None
            for d in prefs:
                if _contains(viable.get(r, []), x + d):
                    nxt = x + d
                    break
            if nxt is None:  # should not happen if start was viable
                self.stats.failed += 1
                return False
            x = nxt
            path.append(x)
        self._mark_path(path)
        self.count += 1
        self.stats.slow += 1
        return True


def count_disjoint(
    front_cols: list[int],
    deletions: DeletionIndex,
    kind: GraphKind,
    t: int,
    ell: int,
    region: tuple[int | None, int | None] = (None, None),
    stop_at: int | None = None,
) -> int:
    """Max number of disjoint one-sided length-ell paths from the region."""
    lo, hi = region
    if (lo is None or hi is None) and stop_at is None:
        raise QueryUnbounded("unbounded region needs a stop threshold")
    sweep = DisjointPathSweep(deletions, kind, t, ell)
    for c in front_cols:
        if lo is not None and c < lo:
            continue
        if hi is not None and c > hi:
            break
        sweep.feed(c)
        if stop_at is not None and sweep.count >= stop_at:
            break
    return sweep.count


# ---------------------------------------------------------------------------
# Alert intervals
# ---------------------------------------------------------------------------

def alert_interval(
    front_cols: list[int],
    deletions: DeletionIndex,
    kind: GraphKind,
    t: int,
    ell: int,
    h: int,
    seg_lo: int,
    seg_hi: int,
):
    """Minimal grid-aligned interval around [seg_lo, seg_hi] holding enough paths.

    The left bound is the largest multiple of h whose right-open region up
    to seg_lo carries ell disjoint paths; the right bound the smallest
    multiple of h whose open region after seg_hi carries 2*ell such paths
    of length 2*ell.  Returns (lo, hi) or INFINITE when a bound does not
    exist; scans stop at the extreme occupied columns.
    """
    if ell <= 0:
        raise ValueError("alert interval needs ell >= 1")
    left = _alert_left_bound(front_cols, deletions, kind, t, ell, h, seg_lo)
    if left is None:
        return INFINITE
    right = _alert_right_bound(front_cols, deletions, kind, t, 2 * ell, h, seg_hi)
    if right is None:
        return INFINITE
    return (left, right)


def blocked_start_columns(front_cols: list[int], deletions: DeletionIndex,
                          t: int, ell: int) -> list[int]:
    """Sorted front columns whose vertical run of ell cells is obstructed."""
    if ell <= 1 or not front_cols:
        return []
    hit: set[int] = set()
    lo, hi = front_cols[0], front_cols[-1]
    for r in deletions.rows_between(t + 1, t + ell - 1):
        hit.update(deletions.cols_at(r, lo, hi))
    if not hit:
        return []
    return [c for c in front_cols if c in hit]


class RegionCounter:
    """Disjoint-path counts over column regions of one front row.

    Exact counts come from ascending greedy sweeps; regions whose starts
    all have clear vertical columns are answered by pure counting, which
    is the common case on sparse boards.
    """

    def __init__(self, front_cols: list[int], deletions: DeletionIndex,
                 kind: GraphKind, t: int, ell: int):
        self.front = front_cols
        self.deli = deletions
        self.kind = kind
        self.t = t
        self.ell = ell
        self.blocked = blocked_start_columns(front_cols, deletions, t, ell)

    def total(self, lo, hi) -> int:
        i = 0 if lo is None else bisect.bisect_left(self.front, lo)
        j = len(self.front) if hi is None else bisect.bisect_right(self.front, hi)
        return max(j - i, 0)

    def clear(self, lo, hi) -> int:
        i = 0 if lo is None else bisect.bisect_left(self.blocked, lo)
        j = len(self.blocked) if hi is None else bisect.bisect_right(self.blocked, hi)
        return self.total(lo, hi) - max(j - i, 0)

    def count(self, lo, hi, stop_at: int) -> int:
        """Exact count over [lo, hi], capped at stop_at."""
        c = self.clear(lo, hi)
        if c >= stop_at:
            return stop_at
        if self.total(lo, hi) == c:
            return c
        sweep = DisjointPathSweep(self.deli, self.kind, self.t, self.ell)
        i = 0 if lo is None else bisect.bisect_left(self.front, lo)
        while i < len(self.front):
            col = self.front[i]
            if hi is not None and col > hi:
                break
            sweep.feed(col)
            if sweep.count >= stop_at:
                break
            i += 1
        return sweep.count

    def at_least(self, lo, hi, n: int) -> bool:
        return self.count(lo, hi, n) >= n


def _alert_left_bound(front_cols, deletions, kind, t, ell, h, seg_lo):
    """Largest x in the h-grid with at least ell disjoint paths from [x, seg_lo)."""
    counter = RegionCounter(front_cols, deletions, kind, t, ell)
    j = bisect.bisect_left(front_cols, seg_lo)
    if j == 0 or counter.total(None, seg_lo - 1) < ell:
        return None
    g_lo = front_cols[0] // h          # full occupied prefix
    g_hi = (seg_lo - 1) // h           # tightest grid point with a nonempty region
    if not counter.at_least(g_lo * h, seg_lo - 1, ell):
        return None
    while g_lo < g_hi:
        mid = (g_lo + g_hi + 1) // 2
        if counter.at_least(mid * h, seg_lo - 1, ell):
            g_lo = mid
        else:
            g_hi = mid - 1
    return g_lo * h


def _alert_right_bound(front_cols, deletions, kind, t, ell, h, seg_hi):
    """Smallest x in the h-grid with at least ell disjoint paths from (seg_hi, x)."""
    counter = RegionCounter(front_cols, deletions, kind, t, ell)
    j = bisect.bisect_right(front_cols, seg_hi)
    if counter.total(seg_hi + 1, None) < ell:
        return None
    cand = front_cols[j + ell - 1]
    k = bisect.bisect_right(counter.blocked, seg_hi)
    if k >= len(counter.blocked) or counter.blocked[k] > cand:
        # Pure counting: the ell-th start to the right closes the region.
        c = cand
    else:
        sweep = DisjointPathSweep(deletions, kind, t, ell)
        c = None
        while j < len(front_cols):
            col = front_cols[j]
            sweep.feed(col)
            if sweep.count >= ell:
                c = col
                break
            j += 1
        if c is None:
            return None
    x = c + 1
    return x if x % h == 0 else (x // h + 1) * h


# ---------------------------------------------------------------------------
# Unit-vertex-capacity max-flow oracle (small windows)
# ---------------------------------------------------------------------------

def maxflow_disjoint(
    front_cols: list[int],
    deleted: set[Cell],
    kind: GraphKind,
    t: int,
    ell: int,
    sided: int = 1,
    region: tuple[int | None, int | None] = (None, None),
    want_paths: bool = False,
):
    """Exact disjoint-path count by max-flow with split vertices.

    Brute-force oracle over an explicit window; intended for tests and the
    two-sided `dispath` route, not for strategy hot paths.
    """
    lo, hi = region
    starts = [c for c in front_cols
              if (lo is None or c >= lo) and (hi is None or c <= hi)]
    if not starts:
        return (0, []) if want_paths else 0
    if ell <= 1:
        return (len(starts), [[(c, t)] for c in starts]) if want_paths else len(starts)
    drifts = (0, 1) if sided == 1 else (-1, 0, 1)
    top = t + ell - 1
    cmin = min(starts) - (ell if sided == 2 else 0)
    cmax = max(starts) + ell

    nodes: dict[tuple[int, int, int], int] = {}

    def nid(x, y, half):
        key = (x, y, half)
        if key not in nodes:
            nodes[key] = len(nodes) + 2
        return nodes[key]

    SRC, SNK = 0, 1
    graph: dict[int, dict[int, int]] = {SRC: {}, SNK: {}}

    def add_edge(u, v, cap):
        graph.setdefault(u, {})
        graph.setdefault(v, {})
        graph[u][v] = graph[u].get(v, 0) + cap
        graph[v].setdefault(u, 0)

    def ok(x, y):
        return in_domain(kind, (x, y)) and (x, y) not in deleted and cmin <= x <= cmax

    for y in range(t, top + 1):
        for x in range(cmin, cmax + 1):
            if ok(x, y):
                add_edge(nid(x, y, 0), nid(x, y, 1), 1)
    for y in range(t, top):
        for x in range(cmin, cmax + 1):
            if not ok(x, y):
                continue
            for d in drifts:
                if ok(x + d, y + 1):
                    add_edge(nid(x, y, 1), nid(x + d, y + 1, 0), 1)
    for c in starts:
        if ok(c, t):
            add_edge(SRC, nid(c, t, 0), 1)
    for x in range(cmin, cmax + 1):
        if ok(x, top):
            add_edge(nid(x, top, 1), SNK, 1)

    flow = _dinic(graph, SRC, SNK)
    if not want_paths:
        return flow
    paths = _extract_paths(graph, nodes, starts, t, top, deleted, kind, drifts)
    return flow, paths


def _dinic(graph, s, t):
    flow = 0
    while True:
        level = {s: 0}
        queue = [s]
        for u in queue:
            for v, cap in graph[u].items():
                if cap > 0 and v not in level:
                    level[v] = level[u] + 1
                    queue.append(v)
        if t not in level:
            return flow
        it = {u: iter(list(graph[u].items())) for u in graph}

        def dfs(u, pushed):
            if u == t:
                return pushed
            for v, cap in it[u]:
                if cap > 0 and level.get(v) == level.get(u, -2) + 1:
                    got = dfs(v, min(pushed, cap))
                    if got:
                        graph[u][v] -= got
                        graph[v][u] += got
                        return got
            level.pop(u, None)
            return 0

        while True:
            pushed = dfs(s, float("inf"))
            if not pushed:
                break
            flow += pushed


def _extract_paths(graph, nodes, starts, t, top, deleted, kind, drifts):
    rev = {v: k for k, v in nodes.items()}
    paths = []
    for c in sorted(starts):
        u = nodes.get((c, t, 0))
        if u is None or graph[0].get(u, 1) != 0:
            continue  # no flow through this start
        path = []
        x, y = c, t
        while True:
            path.append((x, y))
            if y == top:
                break
            out = nodes[(x, y, 1)]
            nxt = None
            for d in drifts:
                vin = nodes.get((x + d, y + 1, 0))
                if vin is not None and graph[out].get(vin, 0) == 0 and graph[vin].get(out, 0) > 0:
                    graph[vin][out] -= 1
                    graph[out][vin] = graph[out].get(vin, 0) + 1
                    nxt = (x + d, y + 1)
                    break
            if nxt is None:
                break
            x, y = nxt
        if len(path) == top - t + 1:
            paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# Historical ancestry
# ---------------------------------------------------------------------------

def leftmost_ancestor(fronts: list[list[int]], t: int, ell: int, y_cell: Cell):
    """Leftmost start of a one-sided occupied path ending in y at time t+ell.

    ``fronts[s]`` is the sorted list of occupied columns at turn s.  Returns
    None when every lineage of y crosses a north-west expansion inside the
    window (possible on the half plane).
    """
    if t + ell >= len(fronts):
        raise IndexError(f"turn {t + ell} beyond trace of {len(fronts)} fronts")
    yx, yy = y_cell
    if yy != t + ell:
        raise ValueError(f"{y_cell} is not on row {t + ell}")
    cols = fronts[t + ell]
    i = bisect.bisect_left(cols, yx)
    if i >= len(cols) or cols[i] != yx:
        raise ValueError(f"{y_cell} not occupied at turn {t + ell}")
    if ell == 0:
        return y_cell
    cur = {yx}
    for s in range(t + ell - 1, t - 1, -1):
        prev_cols = fronts[s]
        nxt = set()
        for x in cur:
            for d in (0, 1):
                j = bisect.bisect_left(prev_cols, x - d)
                if j < len(prev_cols) and prev_cols[j] == x - d:
                    nxt.add(x - d)
        if not nxt:
            return None
        cur = nxt
    return (min(cur), t)
