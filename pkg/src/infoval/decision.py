"""Finite decision problems and the subdivision of the belief simplex.

A decision problem is a finite utility matrix over states and actions. Its
value function is the upper envelope of the actions' affine payoff lines,
and projecting that envelope onto the simplex subdivides it into cells, one
per action that is strictly optimal somewhere. This module computes those
objects exactly and decides when two problems differ only by an
action-independent, state-dependent payoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linprog
from .errors import NonpositiveScale
from .geometry import (
    Belief,
    Halfspace,
    Polytope,
    dimension,
    facet_between,
    interior_point,
)

Coords = tuple[Fraction, ...]


def _frac(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floating point payoffs are not allowed")
    return Fraction(value)


@dataclass(frozen=True)
class DecisionProblem:
    """States, actions, and an exact utility matrix u[action][state]."""

    state_labels: tuple[str, ...]
    action_labels: tuple[str, ...]
    utility: tuple[Coords, ...]

    def __post_init__(self):
        utility = tuple(tuple(_frac(v) for v in row) for row in self.utility)
        object.__setattr__(self, "utility", utility)
        object.__setattr__(self, "state_labels", tuple(self.state_labels))
        object.__setattr__(self, "action_labels", tuple(self.action_labels))
        n = len(self.state_labels)
        if n < 2:
            raise ValueError("a decision problem needs at least two states")
        if not utility:
            raise ValueError("a decision problem needs at least one action")
        if len(self.action_labels) != len(utility):
            raise ValueError("one label per action is required")
        for row in utility:
            if len(row) != n:
                raise ValueError("every utility row needs one entry per state")
        seen: dict[Coords, int] = {}
        for idx, row in enumerate(utility):
            if row in seen:
                raise ValueError(
                    f"duplicate action payoffs: {self.action_labels[seen[row]]!r} "
                    f"and {self.action_labels[idx]!r} are indistinguishable"
                )
            seen[row] = idx

    @property
    def n(self) -> int:
        return len(self.state_labels)

    @property
    def num_actions(self) -> int:
        return len(self.utility)

    def payoff(self, action: int, x: Belief) -> Fraction:
        return sum(u * c for u, c in zip(self.utility[action], x.coords))


def make_problem(utility, state_labels=None, action_labels=None) -> DecisionProblem:
    rows = [tuple(_frac(v) for v in row) for row in utility]
    n = len(rows[0]) if rows else 0
    states = tuple(state_labels) if state_labels else tuple(f"t{i+1}" for i in range(n))
    actions = (
        tuple(action_labels)
        if action_labels
        else tuple(f"a{i+1}" for i in range(len(rows)))
    )
    return DecisionProblem(states, actions, tuple(rows))


@dataclass(frozen=True)
class AffineFn:
    """An affine function on the simplex, stored as x -> coeffs . x.

    Because coordinates sum to one, constants are absorbed into the
    coefficients, and the representation is unique: the coefficient on state
    theta is the value at the theta vertex.
    """

    coeffs: Coords

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_frac(v) for v in self.coeffs))

    def __call__(self, x) -> Fraction:
        coords = x.coords if isinstance(x, Belief) else x
        return sum(a * c for a, c in zip(self.coeffs, coords))

    def __add__(self, other: "AffineFn") -> "AffineFn":
        return AffineFn(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "AffineFn") -> "AffineFn":
        return AffineFn(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scaled(self, factor: Fraction) -> "AffineFn":
        return AffineFn(tuple(a * _frac(factor) for a in self.coeffs))

    @classmethod
    def zero(cls, n: int) -> "AffineFn":
        return cls(tuple(Fraction(0) for _ in range(n)))

    @classmethod
    def from_halfspace(cls, h: Halfspace) -> "AffineFn":
        return cls(h.as_affine_coords())


@dataclass(frozen=True)
class Cell:
    """A maximal region of the simplex on which one action is optimal."""

    action_index: int
    geometry: Polytope


@dataclass(frozen=True)
class AdjacentPair:
    """Two cells meeting in a common facet, with the separating halfspace.

    The halfspace is oriented to hold on cell j (the larger index side) with
    equality exactly on the shared facet.
    """

    i: int
    j: int
    shared: Polytope
    halfspace: Halfspace


@dataclass(frozen=True)
class Subdivision:
    """Cells covering the simplex with pairwise disjoint interiors."""

    cells: tuple[Cell, ...]
    adjacency: tuple[AdjacentPair, ...]

    @property
    def n(self) -> int:
        return self.cells[0].geometry.n

    def oriented_facet(self, i: int, j: int) -> Halfspace | None:
        """The facet halfspace between cells i and j, positive on cell j."""
        a, b = min(i, j), max(i, j)
        for pair in self.adjacency:
            if (pair.i, pair.j) == (a, b):
                return pair.halfspace if j == b else pair.halfspace.flipped()
        return None

    def shared_facet(self, i: int, j: int) -> Polytope | None:
        a, b = min(i, j), max(i, j)
        for pair in self.adjacency:
            if (pair.i, pair.j) == (a, b):
                return pair.shared
        return None

    def neighbors(self, i: int) -> list[int]:
        out = []
        for pair in self.adjacency:
            if pair.i == i:
                out.append(pair.j)
            elif pair.j == i:
                out.append(pair.i)
        return sorted(out)

    def cells_containing(self, x: Belief) -> list[int]:
        return [i for i, cell in enumerate(self.cells) if cell.geometry.contains(x)]

    def geometry_key(self) -> frozenset:
        """Order-free fingerprint of the cell geometry, for exact comparison."""
        return frozenset(
            tuple(v.coords for v in cell.geometry.vertices) for cell in self.cells
        )

    def same_geometry(self, other: "Subdivision") -> bool:
        return self.geometry_key() == other.geometry_key()


@dataclass(frozen=True)
class PiecewiseAffineFn:
    """A convex piecewise-affine function given by one affine piece per cell.

    Construction verifies the defining invariants exactly: adjacent pieces
    agree on their shared facet, and each cell's piece dominates every other
    piece on that cell, so the function equals the pointwise maximum of its
    pieces.
    """

    subdivision: Subdivision
    pieces: tuple[AffineFn, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        cells = self.subdivision.cells
        if len(self.pieces) != len(cells):
            raise ValueError("need exactly one affine piece per cell")
        from .errors import InconsistentData

        for pair in self.subdivision.adjacency:
            gi, gj = self.pieces[pair.i], self.pieces[pair.j]
            for v in pair.shared.vertices:
                if gi(v) != gj(v):
                    raise InconsistentData(
                        f"pieces {pair.i} and {pair.j} disagree on their shared facet"
                    )
        for i, cell in enumerate(cells):
            mine = self.pieces[i]
            for v in cell.geometry.vertices:
                val = mine(v)
                for k, other in enumerate(self.pieces):
                    if other(v) > val:
                        raise InconsistentData(
                            f"piece {k} rises above piece {i} on cell {i}"
                        )

    def __call__(self, x) -> Fraction:
        return max(piece(x) for piece in self.pieces)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def evaluate_value(dp: DecisionProblem, x: Belief) -> Fraction:
    """The best expected payoff available at belief x."""
    return max(dp.payoff(a, x) for a in range(dp.num_actions))


def _strict_margin(rows: list[Coords], index: int) -> Fraction | None:
    """Best worst-case advantage of rows[index] over its rivals on the simplex.

    Solves max_x min_b (rows[index] - rows[b]) . x over beliefs x by exact LP.
    None means the row has no rivals (vacuously undominated).
    """
    rivals = [row for k, row in enumerate(rows) if k != index]
    if not rivals:
        return None
    n = len(rows[index])
    # variables: x (n, >= 0), then margin split into positive and negative parts
    objective = [Fraction(0)] * n + [Fraction(1), Fraction(-1)]
    eq = [([Fraction(1)] * n + [Fraction(0), Fraction(0)], Fraction(1))]
    ge = []
    for rival in rivals:
        diff = [a - b for a, b in zip(rows[index], rival)]
        ge.append((diff + [Fraction(-1), Fraction(1)], Fraction(0)))
    value, _ = linprog.maximize(objective, eq=eq, ge=ge)
    return value


def _undominated_rows(rows: list[Coords]) -> frozenset[int]:
    """Indices of rows that are strictly optimal at some belief.

    Duplicate rows eliminate each other here (their mutual margin is zero);
    callers that want duplicates to survive must deduplicate first.
    """
    out = set()
    for idx in range(len(rows)):
        margin = _strict_margin(rows, idx)
        if margin is None or margin > 0:
            out.add(idx)
    return frozenset(out)


def undominated_actions(dp: DecisionProblem) -> frozenset[int]:
    """Actions that are strictly better than every rival at some belief.

    Decided by exact LP feasibility: maximize the minimum payoff margin over
    all rival actions; the action is undominated exactly when the optimal
    margin is positive. Actions that are optimal only on ties (margin zero)
    count as dominated.
    """
    return _undominated_rows(list(dp.utility))


def compute_subdivision(dp: DecisionProblem) -> Subdivision:
    """One full-dimensional cell per undominated action, plus facet adjacency.

    Cell geometry is the exact halfspace intersection
    {x : u(a,.) . x >= u(b,.) . x for every rival undominated b}. Cells come
    back ordered by action index. The adjacency graph is checked to be
    connected, which upper-envelope subdivisions always satisfy.
    """
    n = dp.n
    winners = sorted(undominated_actions(dp))
    cells: list[Cell] = []
    for a in winners:
        halfspaces = []
        for b in winners:
            if b == a:
                continue
            diff = tuple(u - v for u, v in zip(dp.utility[a], dp.utility[b]))
            halfspaces.append(Halfspace(diff, Fraction(0)))
        poly = Polytope.from_halfspaces(halfspaces, n)
        if poly.is_empty() or dimension(poly.vertices) != n - 1:
            raise RuntimeError(f"optimality region of action {a} is not full-dimensional")
        center = interior_point(poly)
        best = evaluate_value(dp, center)
        optimal = [k for k in range(dp.num_actions) if dp.payoff(k, center) == best]
        if optimal != [a]:
            raise RuntimeError(f"action {a} is not uniquely optimal inside its cell")
        cells.append(Cell(a, poly))

    adjacency: list[AdjacentPair] = []
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            found = facet_between(cells[i].geometry, cells[j].geometry)
            if found is not None:
                shared, h = found
                adjacency.append(AdjacentPair(i, j, shared, h))

    if len(cells) > 1:
        seen = {0}
        frontier = [0]
        links = {}
        for pair in adjacency:
            links.setdefault(pair.i, []).append(pair.j)
            links.setdefault(pair.j, []).append(pair.i)
        while frontier:
            node = frontier.pop()
            for nxt in links.get(node, []):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        if len(seen) != len(cells):
            raise RuntimeError("subdivision adjacency graph is disconnected")
    return Subdivision(tuple(cells), tuple(adjacency))


def scale_problem(dp: DecisionProblem, factor) -> DecisionProblem:
    """Multiply every payoff by a positive rational; behavior is unchanged."""
    factor = _frac(factor)
    if factor <= 0:
        raise NonpositiveScale(f"scale factor must be positive, got {factor}")
    scaled = tuple(tuple(v * factor for v in row) for row in dp.utility)
    return DecisionProblem(dp.state_labels, dp.action_labels, scaled)


def value_function(dp: DecisionProblem) -> PiecewiseAffineFn:
    """The upper envelope of dp's payoff lines as a piecewise-affine function."""
    sub = compute_subdivision(dp)
    pieces = tuple(AffineFn(dp.utility[cell.action_index]) for cell in sub.cells)
    return PiecewiseAffineFn(sub, pieces)


def equal_up_to_state_transfer(dp1: DecisionProblem, dp2: DecisionProblem):
    """Witness that dp2 is dp1 plus a state-dependent payoff, on undominated actions.

    Matches the cells of both subdivisions by exact geometric equality; when a
    bijection exists and every matched pair of utility rows differs by one and
    the same per-state vector, returns (relabeling, transfer) where relabeling
    maps dp1's undominated action indices to dp2's. Otherwise returns None.
    """
    if dp1.n != dp2.n:
        return None
    sub1 = compute_subdivision(dp1)
    sub2 = compute_subdivision(dp2)
    if len(sub1.cells) != len(sub2.cells):
        return None
    lookup = {
        tuple(v.coords for v in cell.geometry.vertices): cell.action_index
        for cell in sub2.cells
    }
    relabeling: dict[int, int] = {}
    transfer: Coords | None = None
    for cell in sub1.cells:
        key = tuple(v.coords for v in cell.geometry.vertices)
        if key not in lookup:
            return None
        a1 = cell.action_index
        a2 = lookup[key]
        delta = tuple(
            u2 - u1 for u1, u2 in zip(dp1.utility[a1], dp2.utility[a2])
        )
        if transfer is None:
            transfer = delta
        elif delta != transfer:
            return None
        relabeling[a1] = a2
    assert transfer is not None
    return relabeling, AffineFn(transfer)
