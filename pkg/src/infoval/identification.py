"""Identifying a decision problem from comparisons of experiments.

The forward direction builds, for a given problem and interior prior, a
finite collection of statements about posterior distributions:

* one equality per cell, holding exactly when the candidate value function
  is affine on that cell (mass on the cell's extreme points versus the same
  mass collapsed to their barycenter);
* one strict inequality per adjacent cell pair, holding exactly when the
  candidate is not affine across the pair (mass at a shared facet point
  versus the same mass split into the two cell interiors);
* one utility difference per spanning-tree edge of the cell adjacency
  graph, pinning down the slope jump across that facet.

The backward direction reads the cell geometry out of the equalities and
rebuilds the value function, up to an affine function, from the utility
differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .decision import (
    AdjacentPair,
    AffineFn,
    Cell,
    DecisionProblem,
    PiecewiseAffineFn,
    Subdivision,
    compute_subdivision,
)
from .errors import (
    BoundaryPrior,
    InconsistentData,
    MalformedData,
    NoFeasibleLambda,
    SingularSolve,
)
from .geometry import (
    Belief,
    Polytope,
    barycenter,
    dimension,
    facet_between,
    interior_interval_on_line,
    interior_point,
    point_on_line,
)
from .information import (
    PosteriorDistribution,
    collapse_to_barycenter,
    expected_value,
    split_atom,
)

HALVING_LIMIT = 400

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class CellAffine:
    """Tags an equality that tests affineness on one cell."""

    cell: int


@dataclass(frozen=True)
class PairNonAffine:
    """Tags a strict inequality that tests non-affineness across a facet."""

    i: int
    j: int


@dataclass(frozen=True)
class OrderedExpectation:
    """A comparison of the candidate value's expectation under two distributions.

    relation is "eq" (exact equality required) or "gt" (left side strictly
    larger). Both sides share the prior as their mean, so each side is the
    posterior distribution of an actual experiment at that prior.
    """

    lhs: PosteriorDistribution
    rhs: PosteriorDistribution
    relation: str
    tag: CellAffine | PairNonAffine

    def __post_init__(self):
        if self.relation not in ("eq", "gt"):
            raise ValueError("relation must be 'eq' or 'gt'")
        if self.lhs.mean != self.rhs.mean:
            raise ValueError("both sides of an ordered expectation must share their mean")
        if self.relation == "eq" and not isinstance(self.tag, CellAffine):
            raise ValueError("equalities must carry a cell tag")
        if self.relation == "gt" and not isinstance(self.tag, PairNonAffine):
            raise ValueError("strict inequalities must carry a pair tag")


@dataclass(frozen=True)
class UtilityDifference:
    """States that the left distribution is worth exactly `gap` more utils.

    The two supports share all atoms except on the cell-`edge[0]` side, and
    exactly one common atom carries different weights on the two sides; that
    atom sits inside cell edge[1] and anchors the reconstruction.
    """

    lhs: PosteriorDistribution
    rhs: PosteriorDistribution
    gap: Fraction
    edge: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "gap", Fraction(self.gap))
        object.__setattr__(self, "edge", (int(self.edge[0]), int(self.edge[1])))
        if self.lhs.mean != self.rhs.mean:
            raise ValueError("both sides of a utility difference must share their mean")


@dataclass(frozen=True)
class IdentificationData:
    """Everything the observer reveals: prior, ordinal statements, differences."""

    prior: Belief
    ordinal: tuple[OrderedExpectation, ...]
    cardinal: tuple[UtilityDifference, ...]
    root_cell: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ordinal", tuple(self.ordinal))
        object.__setattr__(self, "cardinal", tuple(self.cardinal))


def _require_interior(prior: Belief) -> None:
    if not prior.is_interior():
        raise BoundaryPrior()


# ---------------------------------------------------------------------------
# ordinal statements
# ---------------------------------------------------------------------------


def _residual_point(prior: Belief, anchor: Belief, forbidden: set) -> tuple[Belief, Fraction]:
    """Find weight lam so that (prior - lam*anchor)/(1-lam) is a valid residual.

    The residual must be interior to the simplex and distinct from every
    forbidden point; halving lam converges to the interior prior, so the
    search always terminates.
    """
    lam = HALF
    for _ in range(HALVING_LIMIT):
        coords = tuple(
            (m - lam * a) / (1 - lam) for m, a in zip(prior.coords, anchor.coords)
        )
        if all(c > 0 for c in coords) and coords not in forbidden:
            return Belief(coords), lam
        lam = lam / 2
    raise NoFeasibleLambda("no residual weight found; is the prior interior?")


def gen_affineness_equalities(sub: Subdivision, prior: Belief) -> list[OrderedExpectation]:
    """One equality per cell, sensitive exactly to affineness on that cell.

    The left side spreads weight lam evenly over the cell's extreme points
    and parks the rest on a residual point chosen so the mean is the prior;
    the right side collapses the extreme-point mass to its barycenter. Under
    a convex candidate the two sides agree exactly when the candidate is
    affine on the cell.
    """
    _require_interior(prior)
    statements = []
    for index, cell in enumerate(sub.cells):
        extremes = list(cell.geometry.vertices)
        center = barycenter(extremes)
        forbidden = {v.coords for v in extremes}
        residual, lam = _residual_point(prior, center, forbidden)
        k = len(extremes)
        atoms = [(v, lam / k) for v in extremes]
        atoms.append((residual, 1 - lam))
        spread = PosteriorDistribution(atoms)
        extreme_indices = [
            i for i, (b, _) in enumerate(spread.atoms) if b.coords in forbidden
        ]
        collapsed = collapse_to_barycenter(spread, extreme_indices)
        statements.append(
            OrderedExpectation(spread, collapsed, "eq", CellAffine(index))
        )
    return statements


def _point_into_cell(start: Belief, through: Belief, target: Polytope) -> Belief:
    """First point of the halved ray start -> through -> beyond inside target."""
    direction = tuple(t - s for s, t in zip(start.coords, through.coords))
    t = ONE
    for _ in range(HALVING_LIMIT):
        coords = point_on_line(through, direction, t)
        if all(c > 0 for c in coords) and target.contains(coords, strict=True):
            return Belief(coords)
        t = t / 2
    raise NoFeasibleLambda("could not step across the facet into the cell")


def gen_nonaffineness_inequalities(sub: Subdivision, prior: Belief) -> list[OrderedExpectation]:
    """One strict inequality per adjacent cell pair.

    A base distribution puts weight on an interior point of the shared facet
    (plus a residual fixing the mean); the comparison distribution splits the
    facet mass onto interior points of the two cells. A convex candidate
    strictly prefers the split exactly when it is not affine across the pair.
    """
    _require_interior(prior)
    statements = []
    for pair in sub.adjacency:
        facet_center = interior_point(pair.shared)
        inner_i = interior_point(sub.cells[pair.i].geometry)
        inner_j = _point_into_cell(inner_i, facet_center, sub.cells[pair.j].geometry)
        # inner_j = facet_center + t * (facet_center - inner_i) for some t > 0,
        # so facet_center = w_i * inner_i + w_j * inner_j with positive weights
        direction = tuple(f - s for s, f in zip(inner_i.coords, facet_center.coords))
        t = next(
            (far - center) / d
            for far, center, d in zip(inner_j.coords, facet_center.coords, direction)
            if d != 0
        )
        w_i = t / (1 + t)
        w_j = 1 / (1 + t)
        if facet_center == prior:
            base = PosteriorDistribution([(facet_center, ONE)])
            lam = ONE
        else:
            residual, lam = _residual_point(prior, facet_center, {facet_center.coords})
            base = PosteriorDistribution([(facet_center, lam), (residual, 1 - lam)])
        at = next(i for i, (b, _) in enumerate(base.atoms) if b == facet_center)
        spread = split_atom(base, at, (inner_i, lam * w_i), (inner_j, lam * w_j))
        statements.append(
            OrderedExpectation(spread, base, "gt", PairNonAffine(pair.i, pair.j))
        )
    return statements


def satisfies_ordinal(dp: DecisionProblem, data: IdentificationData) -> bool:
    """Whether the problem's value function satisfies every ordinal statement."""
    for statement in data.ordinal:
        left = expected_value(dp, statement.lhs)
        right = expected_value(dp, statement.rhs)
        if statement.relation == "eq" and left != right:
            return False
        if statement.relation == "gt" and not left > right:
            return False
    return True


# ---------------------------------------------------------------------------
# reading geometry back out of the data
# ---------------------------------------------------------------------------


def extract_subdivision(data: IdentificationData) -> Subdivision:
    """Rebuild the cell geometry encoded in the affineness equalities.

    Each cell's extreme points are the atoms that disappear between the two
    sides of its equality; the cell is their convex hull. Adjacency is then
    recomputed from the geometry, and the inequality tags are checked against
    it.
    """
    cell_tags = [s for s in data.ordinal if isinstance(s.tag, CellAffine)]
    indices = sorted(s.tag.cell for s in cell_tags)
    if indices != list(range(len(cell_tags))) or not cell_tags:
        raise MalformedData("need exactly one affineness equality per cell")
    cells: list[Cell] = []
    for statement in sorted(cell_tags, key=lambda s: s.tag.cell):
        if statement.relation != "eq":
            raise MalformedData("cell-tagged statements must be equalities")
        right_support = {b.coords for b in statement.rhs.support}
        removed = [b for b in statement.lhs.support if b.coords not in right_support]
        if len(removed) < statement.lhs.mean.n:
            raise MalformedData(
                f"cell {statement.tag.cell}: too few collapsed atoms to span a cell"
            )
        try:
            geometry = Polytope.from_vertices(removed)
        except ValueError as exc:
            raise MalformedData(f"cell {statement.tag.cell}: {exc}") from exc
        n = statement.lhs.mean.n
        if dimension(geometry.vertices) != n - 1:
            raise MalformedData(f"cell {statement.tag.cell} is not full-dimensional")
        cells.append(Cell(statement.tag.cell, geometry))

    adjacency = []
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            found = facet_between(cells[i].geometry, cells[j].geometry)
            if found is not None:
                shared, h = found
                adjacency.append(AdjacentPair(i, j, shared, h))

    pair_tags = {
        (min(s.tag.i, s.tag.j), max(s.tag.i, s.tag.j))
        for s in data.ordinal
        if isinstance(s.tag, PairNonAffine)
    }
    actual = {(p.i, p.j) for p in adjacency}
    if pair_tags != actual:
        raise MalformedData(
            f"inequality tags {sorted(pair_tags)} do not match the adjacency {sorted(actual)}"
        )
    return Subdivision(tuple(cells), tuple(adjacency))


# ---------------------------------------------------------------------------
# utility differences
# ---------------------------------------------------------------------------


def _spanning_tree_edges(sub: Subdivision, root: int) -> list[tuple[int, int]]:
    """Breadth-first tree edges (parent, child), lowest neighbor index first."""
    seen = {root}
    queue = [root]
    edges: list[tuple[int, int]] = []
    while queue:
        node = queue.pop(0)
        for neighbor in sub.neighbors(node):
            if neighbor not in seen:
                seen.add(neighbor)
                edges.append((node, neighbor))
                queue.append(neighbor)
    if len(seen) != len(sub.cells):
        raise RuntimeError("adjacency graph is disconnected")
    return edges


def _signed_intervals(interval, side):
    """Clip an open interval to the strictly positive or negative axis."""
    if interval is None:
        return None
    lo, hi = interval
    if side > 0:
        lo = max(lo, ZERO)
    else:
        hi = min(hi, ZERO)
    if lo >= hi:
        return None
    return lo, hi


def _binary_difference(sub: Subdivision, prior: Belief, parent: int, child: int):
    """Two binary mean-prior distributions separating the pair, if possible.

    Works on a line through the prior: one support point in each cell's
    interior on opposite sides of the prior, and a second comparison point
    strictly between the prior and the parent-side point. Feasible exactly
    when the prior can be written as a strict mixture of the two interiors.
    Returns (lhs_atoms, rhs_atoms, anchor) or None when infeasible.
    """
    facet = sub.shared_facet(parent, child)
    h = sub.oriented_facet(parent, child)
    facet_center = interior_point(facet)
    if h.value(prior) != 0:
        direction = tuple(f - m for m, f in zip(prior.coords, facet_center.coords))
    else:
        target = interior_point(sub.cells[child].geometry)
        direction = tuple(t - m for m, t in zip(prior.coords, target.coords))
    cell_i = sub.cells[parent].geometry
    cell_j = sub.cells[child].geometry
    interval_i = interior_interval_on_line(prior, direction, cell_i)
    interval_j = interior_interval_on_line(prior, direction, cell_j)
    for side_i in (1, -1):
        window_i = _signed_intervals(interval_i, side_i)
        window_j = _signed_intervals(interval_j, -side_i)
        if window_i is not None and window_j is not None:
            break
    else:
        return None

    t_i = (window_i[0] + window_i[1]) / 2
    near_i = window_i[0] if side_i > 0 else window_i[1]
    far_i = window_i[1] if side_i > 0 else window_i[0]
    t_hat = Fraction(2 * side_i)
    if side_i * (t_hat - near_i) <= 0:
        t_hat = far_i
    for _ in range(HALVING_LIMIT):
        inside = near_i < t_hat < far_i if side_i > 0 else far_i < t_hat < near_i
        if inside and side_i * t_hat < side_i * t_i:
            break
        t_hat = (t_hat + near_i) / 2
    else:
        raise NoFeasibleLambda("no comparison point between the prior and the cell")

    near_j = window_j[0] if side_i < 0 else window_j[1]
    far_j = window_j[1] if side_i < 0 else window_j[0]
    mirrored = -t_hat
    start_j = mirrored if (min(window_j) < mirrored < max(window_j)) else near_j
    t_j = (start_j + far_j) / 2

    p = t_i / (t_i - t_j)
    q = t_hat / (t_hat - t_j)
    x_i = Belief(point_on_line(prior, direction, t_i))
    x_hat = Belief(point_on_line(prior, direction, t_hat))
    x_j = Belief(point_on_line(prior, direction, t_j))
    lhs = PosteriorDistribution([(x_j, p), (x_i, 1 - p)])
    rhs = PosteriorDistribution([(x_j, q), (x_hat, 1 - q)])
    return lhs, rhs, x_j


def _residual_difference(sub: Subdivision, prior: Belief, parent: int, child: int):
    """Mean-prior distributions for a pair the prior cannot sit between.

    Both sides share one residual atom that absorbs the mean constraint; the
    remaining atoms live near the shared facet. Because the two sides share
    their mean and the residual atom, the residual contribution cancels from
    the utility difference and the reconstruction formula is unchanged.
    """
    facet = sub.shared_facet(parent, child)
    facet_center = interior_point(facet)
    x_i = interior_point(sub.cells[parent].geometry)
    x_j = _point_into_cell(x_i, facet_center, sub.cells[child].geometry)
    x_hat = barycenter([x_i, facet_center])
    # x_hat = beta * x_i + (1 - beta) * x_j along the common line
    beta = next(
        (h - j) / (i - j)
        for h, i, j in zip(x_hat.coords, x_i.coords, x_j.coords)
        if i != j
    )
    assert all(
        h == beta * i + (1 - beta) * j
        for h, i, j in zip(x_hat.coords, x_i.coords, x_j.coords)
    )
    eps = Fraction(1, 4)
    for _ in range(HALVING_LIMIT):
        q = b = eps
        p = eps * (2 - beta)
        a = eps * beta
        s = 1 - 2 * eps
        coords = tuple(
            (m - p * xj - a * xi) / s
            for m, xj, xi in zip(prior.coords, x_j.coords, x_i.coords)
        )
        if all(c > 0 for c in coords) and coords not in {
            x_i.coords,
            x_hat.coords,
            x_j.coords,
        }:
            residual = Belief(coords)
            lhs = PosteriorDistribution([(x_j, p), (x_i, a), (residual, s)])
            rhs = PosteriorDistribution([(x_j, q), (x_hat, b), (residual, s)])
            return lhs, rhs, x_j
        eps = eps / 2
    raise NoFeasibleLambda("no residual weight found; is the prior interior?")


def gen_utility_differences(
    dp: DecisionProblem,
    prior: Belief,
    subdivision: Subdivision | None = None,
    include_all_edges: bool = False,
) -> list[UtilityDifference]:
    """One utility difference per spanning-tree edge of the adjacency graph.

    The tree is breadth-first from the lowest-index cell. Each difference
    compares two mean-prior distributions whose supports agree except that
    exactly one atom, interior to the child cell, carries different weights;
    the stated gap is the exact expected-value difference under dp. With
    include_all_edges=True every adjacent pair gets a difference, not just
    the tree, which makes the data redundant and cross-checkable.
    """
    _require_interior(prior)
    sub = subdivision if subdivision is not None else compute_subdivision(dp)
    if len(sub.cells) == 1:
        return []
    edges = _spanning_tree_edges(sub, 0)
    if include_all_edges:
        tree = {(min(i, j), max(i, j)) for i, j in edges}
        for pair in sub.adjacency:
            if (pair.i, pair.j) not in tree:
                edges.append((pair.i, pair.j))
    out = []
    for parent, child in edges:
        built = _binary_difference(sub, prior, parent, child)
        if built is None:
            built = _residual_difference(sub, prior, parent, child)
        lhs, rhs, _ = built
        gap = expected_value(dp, lhs) - expected_value(dp, rhs)
        if gap <= 0:
            raise RuntimeError("generated utility difference is not positive")
        out.append(UtilityDifference(lhs, rhs, gap, (parent, child)))
    return out


def generate_identification(
    dp: DecisionProblem, prior: Belief, include_all_edges: bool = False
) -> IdentificationData:
    """The full identifying collection for a problem at an interior prior."""
    _require_interior(prior)
    sub = compute_subdivision(dp)
    ordinal = gen_affineness_equalities(sub, prior)
    ordinal += gen_nonaffineness_inequalities(sub, prior)
    cardinal = gen_utility_differences(
        dp, prior, subdivision=sub, include_all_edges=include_all_edges
    )
    return IdentificationData(prior, tuple(ordinal), tuple(cardinal), root_cell=0)


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------


def _anchor_of(difference: UtilityDifference):
    """The unique common-support atom whose weight differs between the sides."""
    lhs = {b.coords: p for b, p in difference.lhs.atoms}
    rhs = {b.coords: p for b, p in difference.rhs.atoms}
    differing = [
        key for key in lhs.keys() & rhs.keys() if lhs[key] != rhs[key]
    ]
    if len(differing) != 1:
        raise MalformedData(
            "a utility difference needs exactly one shared atom with differing weights"
        )
    key = differing[0]
    return Belief(key), lhs[key], rhs[key]


def reconstruct_value(data: IdentificationData) -> PiecewiseAffineFn:
    """Rebuild the value function from identifying data, up to an affine part.

    The subdivision comes from the equalities; the root cell's piece is
    normalized to zero; each utility difference fixes the slope jump across
    its facet via gap = (p - q) * jump(anchor). Differences beyond a spanning
    tree are consistency checks and must agree exactly with the rebuilt
    function.
    """
    sub = extract_subdivision(data)
    t = len(sub.cells)
    n = sub.n
    root = data.root_cell
    if not 0 <= root < t:
        raise MalformedData(f"root cell {root} is out of range")
    pieces: list[AffineFn | None] = [None] * t
    pieces[root] = AffineFn.zero(n)

    pending = list(data.cardinal)
    redundant: list[UtilityDifference] = []
    progress = True
    while pending and progress:
        progress = False
        still = []
        for diff in pending:
            i, j = diff.edge
            known_i = pieces[i] is not None
            known_j = pieces[j] is not None
            if known_i and known_j:
                redundant.append(diff)
                progress = True
                continue
            if not known_i and not known_j:
                still.append(diff)
                continue
            anchor, p, q = _anchor_of(diff)
            if not sub.cells[j].geometry.contains(anchor):
                raise MalformedData(
                    f"difference for edge {diff.edge}: its anchor atom is not in cell {j}"
                )
            h = sub.oriented_facet(i, j)
            if h is None:
                raise MalformedData(f"edge {diff.edge} does not join adjacent cells")
            denominator = (p - q) * h.value(anchor)
            if denominator == 0:
                raise SingularSolve(
                    f"edge {diff.edge}: degenerate weights or anchor on the facet"
                )
            jump = AffineFn.from_halfspace(h).scaled(diff.gap / denominator)
            if known_i:
                pieces[j] = pieces[i] + jump
            else:
                pieces[i] = pieces[j] - jump
            progress = True
        pending = still

    if pending or any(piece is None for piece in pieces):
        raise MalformedData("utility differences do not span the cell adjacency graph")

    fn = PiecewiseAffineFn(sub, tuple(pieces))
    for diff in redundant:
        predicted = sum(prob * fn(b) for b, prob in diff.lhs.atoms) - sum(
            prob * fn(b) for b, prob in diff.rhs.atoms
        )
        if predicted != diff.gap:
            raise InconsistentData(
                f"edge {diff.edge}: stated gap {diff.gap} but the reconstruction "
                f"implies {predicted}"
            )
    return fn


def equal_up_to_affine(first: PiecewiseAffineFn, second: PiecewiseAffineFn) -> AffineFn | None:
    """The affine function phi with second = first + phi, if one exists.

    Requires the two subdivisions to have identical cell geometry; the cells
    are matched by geometry, and all matched piece differences must be one
    and the same affine function (the coefficient representation on the
    simplex is unique, so this is plain tuple equality).
    """
    cells1 = first.subdivision.cells
    cells2 = second.subdivision.cells
    if len(cells1) != len(cells2):
        return None
    lookup = {
        tuple(v.coords for v in cell.geometry.vertices): k
        for k, cell in enumerate(cells2)
    }
    shift: AffineFn | None = None
    for k, cell in enumerate(cells1):
        key = tuple(v.coords for v in cell.geometry.vertices)
        if key not in lookup:
            return None
        delta = second.pieces[lookup[key]] - first.pieces[k]
        if shift is None:
            shift = delta
        elif delta != shift:
            return None
    return shift
