"""Turn loop for the containment game: budgets, legality, traces, outcomes.

Container moves first each turn, deleting at most floor(t*q) - floor((t-1)*q)
unoccupied cells; Spreader then occupies up to g(t) cells at distance at most
one (in the remainder graph) from the previous occupied set.  All budget
arithmetic is exact: rationals via `fractions.Fraction`, power laws via
integer k-th roots.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import Cell, GraphKind, in_domain, neighbourhood
from .paths import DeletionIndex
from .schedule import Constant, HSchedule


class IllegalMove(ValueError):
    def __init__(self, role: str, cell, reason: str):
        self.role, self.cell, self.reason = role, cell, reason
        super().__init__(f"{role} illegal move at {cell}: {reason}")


class ContainerIllegalMove(IllegalMove):
    def __init__(self, cell, reason):
        super().__init__("container", cell, reason)


class SpreaderIllegalMove(IllegalMove):
    def __init__(self, cell, reason):
        super().__init__("spreader", cell, reason)


class BudgetExceeded(ValueError):
    pass


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if k == 1 or n == 0:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


@dataclass(frozen=True)
class SpreadConstant:
    k: int

    def budget(self, t: int) -> int:
        return self.k

    def describe(self) -> str:
        return str(self.k)


@dataclass(frozen=True)
class SpreadPowerLaw:
    """Budget floor(C * t^(e/f)), via exact integer roots: no floats anywhere."""

    coeff: Fraction
    exp: Fraction

    def budget(self, t: int) -> int:
        a, b = self.coeff.numerator, self.coeff.denominator
        e, f = self.exp.numerator, self.exp.denominator
        if t <= 0:
            return 0
        return iroot(a ** f * t ** e, f) // b

    def describe(self) -> str:
        return f"{self.coeff}*t^({self.exp})"


@dataclass(frozen=True)
class SpreadUnbounded:
    def budget(self, t: int) -> None:
        return None

    def describe(self) -> str:
        return "unbounded"


SpreadSpec = SpreadConstant | SpreadPowerLaw | SpreadUnbounded


def container_budget(q: Fraction, t: int, accumulating: bool = False, spent: int = 0) -> int:
    """Deletions allowed at turn t >= 1; accumulating mode banks unused power."""
    if t < 1:
        raise ValueError("turns start at 1")
    q = Fraction(q)
    total = (t * q).__floor__()
    if accumulating:
        return max(total - spent, 0)
    prev = ((t - 1) * q).__floor__()
    return total - prev


@dataclass
class GameConfig:
    kind: GraphKind
    q: Fraction
    growth: SpreadSpec
    schedule: HSchedule
    initial_occupied: frozenset[Cell]
    initial_deleted: frozenset[Cell] = frozenset()
    initial_counted: frozenset[Cell] = frozenset()
    mode: str = "front"  # "front" (Avoider) or "accumulate"
    accumulating_container: bool = False
    horizon: int = 100
    stall_window: int | None = None
    seed: int = 0

    def validate(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon >= 1 required")
        if self.mode not in ("front", "accumulate"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.initial_counted <= self.initial_deleted:
            raise ValueError("initial counted cells must be deleted cells")
        if self.initial_occupied & self.initial_deleted:
            raise ValueError("initial occupied and deleted sets overlap")
        for c in self.initial_occupied | self.initial_deleted:
            if not in_domain(self.kind, c):
                raise ValueError(f"initial cell {c} outside domain")
        if Fraction(self.q) < 0:
            raise ValueError("q must be non-negative")

    def effective_stall_window(self) -> int:
        if self.stall_window is not None:
            return self.stall_window
        h = self.schedule.width(max(self.horizon, 1))
        return 2 * h

    def canonical(self) -> dict:
        return {
            "kind": self.kind.value,
            "q": f"{Fraction(self.q)}",
            "growth": self.growth.describe(),
            "schedule": ("constant:%d" % self.schedule.h
                         if isinstance(self.schedule, Constant)
                         else f"dyadic:{self.schedule.C}"),
            "initial_occupied": sorted(map(list, self.initial_occupied)),
            "initial_deleted": sorted(map(list, self.initial_deleted)),
            "initial_counted": sorted(map(list, self.initial_counted)),
            "mode": self.mode,
            "accumulating_container": self.accumulating_container,
            "horizon": self.horizon,
            "stall_window": self.effective_stall_window(),
            "seed": self.seed,
        }


RUNNING = "running"
CONTAINER_WIN = "container_win"
SPREADER_SURVIVED = "spreader_survived_horizon"


class GameState:
    """Mutable adversarial game state; one game, mutated sequentially."""

    def __init__(self, config: GameConfig):
        config.validate()
        self.config = config
        self.t = 0
        self.front: set[Cell] = set(config.initial_occupied)
        self.occupied_all: set[Cell] = set(config.initial_occupied)
        self.deleted = DeletionIndex(config.initial_deleted)
        self.status = RUNNING
        self.spent_deletions = 0
        self.new_deletions: list[Cell] = []
        self.new_occupied: list[Cell] = []
        self.empty_streak = 0
        self.win_turn: int | None = None

    @property
    def kind(self) -> GraphKind:
        return self.config.kind

    def width_now(self) -> int:
        return self.config.schedule.width(max(self.t, 1))

    def is_occupied(self, cell: Cell) -> bool:
        if self.config.mode == "accumulate":
            return cell in self.occupied_all
        return cell in self.front


@dataclass
class TurnRecord:
    t: int
    deleted_cells: list[Cell]
    occupied_cells: list[Cell]
    metrics: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def canonical(self) -> dict:
        return {
            "t": self.t,
            "deleted": sorted(map(list, self.deleted_cells)),
            "occupied": sorted(map(list, self.occupied_cells)),
            "metrics": self.metrics,
            "violations": self.violations,
        }


def _canon_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _touches_front(kind: GraphKind, cell: Cell, front: set[Cell]) -> bool:
    if cell in front:
        return True
    x, y = cell
    if kind is GraphKind.EIGHTH_PLANE:
        cands = ((x, y - 1), (x - 1, y - 1), (x, y + 1), (x + 1, y + 1))
    elif kind is GraphKind.DIRECTED_HALF_PLANE:
        cands = ((x - 1, y - 1), (x, y - 1), (x + 1, y - 1),
                 (x - 1, y + 1), (x, y + 1), (x + 1, y + 1))
    else:
        cands = ((x - 1, y - 1), (x, y - 1), (x + 1, y - 1), (x - 1, y),
                 (x + 1, y), (x - 1, y + 1), (x, y + 1), (x + 1, y + 1))
    for c in cands:
        if c in front:
            return True
    return False


def step(state: GameState, container, spreader) -> TurnRecord:
    """Play one full turn: Container deletes, then Spreader occupies."""
    if state.status != RUNNING:
        raise RuntimeError(f"game over: {state.status}")
    cfg = state.config
    t = state.t + 1
    state.t = t

    budget = container_budget(cfg.q, t, cfg.accumulating_container, state.spent_deletions)
    plan = list(container.plan_deletions(state, budget))
    if len(plan) > budget:
        raise BudgetExceeded(f"container planned {len(plan)} > budget {budget} at t={t}")
    seen: set[Cell] = set()
    for cell in plan:
        if cell in seen:
            raise ContainerIllegalMove(cell, "duplicate deletion")
        if not in_domain(cfg.kind, cell):
            raise ContainerIllegalMove(cell, "outside domain")
        if cell in state.deleted:
            raise ContainerIllegalMove(cell, "already deleted")
        if state.is_occupied(cell):
            raise ContainerIllegalMove(cell, "non-occupied vertices only")
        seen.add(cell)
    for cell in plan:
        state.deleted.add(cell)
    state.spent_deletions += len(plan)
    state.new_deletions = list(plan)

    growth_budget = cfg.growth.budget(t)
    occ = spreader.plan_occupations(state, growth_budget)
    resigned = occ is None
    occ = [] if occ is None else list(occ)
    if growth_budget is not None and len(occ) > growth_budget:
        raise BudgetExceeded(f"spreader planned {len(occ)} > budget {growth_budget} at t={t}")
    prev_front = state.front
    seen = set()
    for cell in occ:
        if cell in seen:
            raise SpreaderIllegalMove(cell, "duplicate occupation")
        if not in_domain(cfg.kind, cell):
            raise SpreaderIllegalMove(cell, "outside domain")
        if cell in state.deleted:
            raise SpreaderIllegalMove(cell, "cell is deleted")
        if not _touches_front(cfg.kind, cell, prev_front):
            raise SpreaderIllegalMove(cell, "not within distance one of the front")
        seen.add(cell)

    if cfg.mode == "front":
        state.front = set(occ)
    else:
        state.front = prev_front | set(occ)
    state.occupied_all.update(occ)
    state.new_occupied = list(occ)

    if occ:
        state.empty_streak = 0
    else:
        state.empty_streak += 1

    if resigned or state.empty_streak >= cfg.effective_stall_window() or not state.front:
        state.status = CONTAINER_WIN
        state.win_turn = t
    elif t >= cfg.horizon:
        state.status = SPREADER_SURVIVED

    return TurnRecord(t, sorted(plan), sorted(occ))


@dataclass
class Outcome:
    status: str
    turn: int
    trace_hash: str


def run(config: GameConfig, container, spreader, *, observers=(), trace_file=None,
        keep_records: bool = False):
    """Run a full game; returns (Outcome, records or None).

    Observers are called after every turn with (state, record) and may
    attach metrics/violations to the record before it is hashed.  The trace
    hash is the SHA-256 of the canonical header plus every record line.
    """
    state = GameState(config)
    header = {
        "config": config.canonical(),
        "container": {"name": container.name, "params": container.params()},
        "spreader": {"name": spreader.name, "params": spreader.params()},
    }
    hasher = hashlib.sha256()
    head_line = _canon_json(header)
    hasher.update(head_line.encode())
    if trace_file is not None:
        trace_file.write(head_line + "\n")
    records = [] if keep_records else None

    for obs in observers:
        start = getattr(obs, "on_start", None)
        if start:
            start(state)

    while state.status == RUNNING:
        record = step(state, container, spreader)
        for obs in observers:
            obs.on_turn(state, record)
        line = _canon_json(record.canonical())
        hasher.update(b"\n")
        hasher.update(line.encode())
        if trace_file is not None:
            trace_file.write(line + "\n")
        if records is not None:
            records.append(record)

    outcome = Outcome(state.status, state.t, hasher.hexdigest())
    for obs in observers:
        fin = getattr(obs, "on_finish", None)
        if fin:
            fin(state, outcome)
    return outcome, records


# ---------------------------------------------------------------------------
# Basic spreader policies (the strategy spreader lives in spreader.py)
# ---------------------------------------------------------------------------

class GreedySpreader:
    """Occupies as many frontier cells as allowed, outward-most first."""

    name = "greedy"

    def __init__(self, seed: int = 0):
        self._heap: list[tuple] = []
        self._seen: set[Cell] = set()
        self._started = False

    def params(self) -> dict:
        return {}

    def _key(self, kind: GraphKind, cell: Cell):
        x, y = cell
        if kind is GraphKind.PLANE:
            return (-max(abs(x), abs(y)), y, x)
        return (-y, x)

    def _discover(self, state: GameState, new_cells) -> None:
        kind = state.kind
        for c in new_cells:
            for n in neighbourhood(kind, c):
                if n not in self._seen and n not in state.occupied_all:
                    self._seen.add(n)
                    heapq.heappush(self._heap, (self._key(kind, n), n))

    def plan_occupations(self, state: GameState, budget):
        if not self._started:
            self._discover(state, sorted(state.occupied_all))
            self._started = True
        else:
            self._discover(state, state.new_occupied)
        picked: list[Cell] = []
        skipped: list[tuple] = []
        want = len(self._heap) if budget is None else budget
        while self._heap and len(picked) < want:
            key, cell = heapq.heappop(self._heap)
            if cell in state.occupied_all:
                continue
            if cell in state.deleted:
                continue  # deleted cells are lost for good
            picked.append(cell)
        if not picked and not self._heap:
            return None
        return picked


class RandomSpreader:
    """Occupies a random legal subset of the frontier each turn."""

    name = "random_spreader"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)
        self.seed = seed
        self._cand_list: list[Cell] = []
        self._cand_set: set[Cell] = set()
        self._started = False

    def params(self) -> dict:
        return {"seed": self.seed}

    def _add(self, state: GameState, new_cells) -> None:
        for c in new_cells:
            for n in neighbourhood(state.kind, c):
                if (n not in state.occupied_all and n not in state.deleted
                        and n not in self._cand_set):
                    self._cand_set.add(n)
                    self._cand_list.append(n)

    def plan_occupations(self, state: GameState, budget):
        if not self._started:
            self._add(state, sorted(state.occupied_all))
            self._started = True
        else:
            self._add(state, state.new_occupied)
        picked: list[Cell] = []
        if budget is None:
            budget = len(self._cand_list)
        lst, cset = self._cand_list, self._cand_set
        while len(picked) < budget and lst:
            i = self.rng.randrange(len(lst))
            cell = lst[i]
            lst[i] = lst[-1]
            lst.pop()
            cset.discard(cell)
            if cell in state.occupied_all or cell in state.deleted:
                continue
            picked.append(cell)
        if not picked and not lst:
            return None
        return picked
