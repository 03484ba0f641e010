"""Lattice graphs, spread rules, and rotated coordinate frames.

Cells are plain ``(x, y)`` integer tuples everywhere; state is held in
sparse sets, no board is ever materialised.  Coordinates are kept well
inside the 64-bit signed range and overflowing them is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

Cell = tuple[int, int]

COORD_LIMIT = 2**62


class GraphKind(Enum):
    PLANE = "plane"
    EIGHTH_PLANE = "eighth"
    DIRECTED_HALF_PLANE = "half"


class DomainError(ValueError):
    """A cell lies outside the graph's vertex set."""


class FrameError(ValueError):
    """A plane cell has no preimage under the given frame."""


class CoordinateOverflow(OverflowError):
    """A coordinate left the supported 64-bit signed window."""


def check_coord(v: int) -> int:
    if not -COORD_LIMIT <= v <= COORD_LIMIT:
        raise CoordinateOverflow(f"coordinate {v} out of range")
    return v


def in_domain(kind: GraphKind, cell: Cell) -> bool:
    x, y = cell
    if kind is GraphKind.EIGHTH_PLANE:
        return 0 <= x <= y
    if kind is GraphKind.DIRECTED_HALF_PLANE:
        return y >= 0
    return True


def spread_targets(kind: GraphKind, front: set[Cell], leftmost_nw: bool = False) -> set[Cell]:
    """Cells the given front spreads to, before any deletion filtering.

    On the directed kinds every cell targets its north and north-east
    neighbours; with ``leftmost_nw`` the single leftmost cell of the front
    additionally targets north-west.  On the plane, targets are all strong
    (8-way) neighbours.  The result is intersected with the domain.
    """
    if not front:
        return set()
    if kind is GraphKind.PLANE:
        out: set[Cell] = set()
        for (x, y) in front:
            out.update(
                ((x - 1, y - 1), (x, y - 1), (x + 1, y - 1),
                 (x - 1, y), (x + 1, y),
                 (x - 1, y + 1), (x, y + 1), (x + 1, y + 1))
            )
        return out

    rows = {y for (_, y) in front}
    if len(rows) != 1:
        raise DomainError(f"front spans rows {sorted(rows)}, expected a single row")
    for cell in front:
        if not in_domain(kind, cell):
            raise DomainError(f"front cell {cell} outside {kind.value} domain")

    out = set()
    for (x, y) in front:
        out.add((x, y + 1))
        out.add((x + 1, y + 1))
    if leftmost_nw and kind is GraphKind.DIRECTED_HALF_PLANE:
        mx, my = min(front)
        out.add((mx - 1, my + 1))
    return {c for c in out if in_domain(kind, c)}


def neighbourhood(kind: GraphKind, cell: Cell) -> set[Cell]:
    """The cell plus all graph neighbours (undirected), i.e. distance <= 1."""
    x, y = cell
    if kind is GraphKind.PLANE:
        cand = {(x + dx, y + dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)}
    elif kind is GraphKind.EIGHTH_PLANE:
        cand = {cell, (x, y + 1), (x + 1, y + 1), (x, y - 1), (x - 1, y - 1)}
    else:
        cand = {cell}
        cand.update((x + i, y + 1) for i in (-1, 0, 1))
        cand.update((x + i, y - 1) for i in (-1, 0, 1))
    return {c for c in cand if in_domain(kind, c)}


# Cardinal directions, clockwise, and the secondary diagonals between them.
CARDINAL = ((0, 1), (1, 0), (0, -1), (-1, 0))
SECONDARY = ((1, 1), (1, -1), (-1, -1), (-1, 1))


@dataclass(frozen=True)
class FrontFrame:
    """Rotation/shift isometry placing a half-plane game onto the plane.

    Frame cell ``(u, v)`` maps to ``(shift + v) * cardinal[i] + u *
    cardinal[i + 1]``; direction indices are reduced mod 4.
    """

    direction: int
    shift: int

    def __post_init__(self):
        object.__setattr__(self, "direction", self.direction % 4)

    def to_plane(self, cell: Cell) -> Cell:
        u, v = cell
        ax, ay = CARDINAL[self.direction]
        bx, by = CARDINAL[(self.direction + 1) % 4]
        d = self.shift + v
        return (check_coord(d * ax + u * bx), check_coord(d * ay + u * by))

    def from_plane(self, cell: Cell) -> Cell:
        x, y = cell
        i = self.direction
        if i == 0:
            u, v = x, y - self.shift
        elif i == 1:
            u, v = -y, x - self.shift
        elif i == 2:
            u, v = -x, -y - self.shift
        else:
            u, v = y, -x - self.shift
        if v < 0:
            raise FrameError(f"{cell} not in image of frame {self}")
        return (u, v)
