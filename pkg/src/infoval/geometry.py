"""Exact rational geometry on the probability simplex.

Everything here runs on arbitrary-precision rationals; no floating point.
Points live on the simplex {x >= 0, sum(x) = 1} and polytopes are stored as
halfspace intersections (implicitly cut with the simplex) together with their
exact vertex sets. Enumeration is brute force over small constraint subsets,
which is all the intended problem sizes need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DimensionTooLarge, EmptyInput, EmptyPolytope

MAX_STATES = 6

Coords = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not allowed; pass Fraction, int or str")
    return Fraction(value)


def _coords(values) -> Coords:
    return tuple(_frac(v) for v in values)


@dataclass(frozen=True)
class Belief:
    """A probability vector over states, held exactly.

    Coordinates must be nonnegative rationals summing to one. Instances are
    immutable, hashable, and ordered lexicographically by coordinates, which
    gives every vertex listing in this library a canonical order.
    """

    coords: Coords

    def __post_init__(self):
        coords = _coords(self.coords)
        object.__setattr__(self, "coords", coords)
        if not coords:
            raise ValueError("belief needs at least one coordinate")
        if any(c < 0 for c in coords):
            raise ValueError(f"belief has a negative coordinate: {coords}")
        if sum(coords) != 1:
            raise ValueError(f"belief coordinates must sum to 1, got {sum(coords)}")

    @property
    def n(self) -> int:
        return len(self.coords)

    def __getitem__(self, idx: int) -> Fraction:
        return self.coords[idx]

    def __lt__(self, other: "Belief") -> bool:
        return self.coords < other.coords

    def is_interior(self) -> bool:
        return all(c > 0 for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def belief(*values) -> Belief:
    """Shorthand constructor: belief("1/2", "1/2")."""
    return Belief(_coords(values))


def uniform_belief(n: int) -> Belief:
    return Belief(tuple(Fraction(1, n) for _ in range(n)))


@dataclass(frozen=True)
class Halfspace:
    """The set {x : normal . x >= offset}, read within the simplex.

    Two pairs (a, c) and (a + t*1, c + t) cut the simplex identically because
    coordinates sum to one, and positive rescaling changes nothing either.
    canonical() quotients both freedoms out: it shifts the smallest normal
    coordinate to zero and scales the normal to a primitive integer vector.
    """

    normal: Coords
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", _coords(self.normal))
        object.__setattr__(self, "offset", _frac(self.offset))
        if len(set(self.normal)) == 1:
            raise ValueError("halfspace normal is constant on the simplex (degenerate)")

    @property
    def n(self) -> int:
        return len(self.normal)

    def value(self, point) -> Fraction:
        """Signed slack normal . x - offset at a Belief or raw coordinate tuple."""
        coords = point.coords if isinstance(point, Belief) else point
        return sum(a * x for a, x in zip(self.normal, coords)) - self.offset

    def canonical(self) -> "Halfspace":
        low = min(self.normal)
        shifted = tuple(a - low for a in self.normal)
        offset = self.offset - low
        scale = math.lcm(*(a.denominator for a in shifted))
        ints = [int(a * scale) for a in shifted]
        g = math.gcd(*ints)
        factor = Fraction(scale, g)
        return Halfspace(tuple(a * factor for a in shifted), offset * factor)

    def flipped(self) -> "Halfspace":
        """The opposite halfspace, canonicalized."""
        return Halfspace(tuple(-a for a in self.normal), -self.offset).canonical()

    def as_affine_coords(self) -> Coords:
        """Coefficients of x -> normal . x - offset as a pure linear form on the simplex."""
        return tuple(a - self.offset for a in self.normal)


@dataclass(frozen=True)
class Polytope:
    """Halfspace intersection inside the simplex, with its exact vertex set.

    The stored vertices are always the full, deduplicated, lexicographically
    sorted list of extreme points of (halfspaces cut with the simplex).
    An empty vertex tuple means the intersection is empty.
    """

    halfspaces: tuple[Halfspace, ...]
    vertices: tuple[Belief, ...]
    n: int

    @classmethod
    def from_halfspaces(cls, halfspaces, n: int) -> "Polytope":
        hs = _dedupe_canonical(halfspaces)
        verts = tuple(vertices_of(hs, n))
        return cls(hs, verts, n)

    @classmethod
    def from_vertices(cls, points) -> "Polytope":
        """Build a full-dimensional polytope from its claimed vertex set.

        The convex-hull facets are recomputed exactly, then the vertex set is
        re-enumerated from them; a mismatch means the input was not actually
        the vertex set of its own hull, which is rejected.
        """
        points = sorted(set(points))
        if not points:
            raise EmptyInput("cannot build a polytope from no points")
        n = points[0].n
        hs = hull_halfspaces(points)
        verts = vertices_of(hs, n)
        if verts != points:
            raise ValueError("points are not the vertex set of their convex hull")
        return cls(tuple(hs), tuple(verts), n)

    def is_empty(self) -> bool:
        return not self.vertices

    def dim(self) -> int:
        if self.is_empty():
            return -1
        return dimension(self.vertices)

    def is_full_dimensional(self) -> bool:
        return not self.is_empty() and self.dim() == self.n - 1

    def contains(self, point, strict: bool = False) -> bool:
        """Membership test; strict=True tests the relative interior.

        For a full-dimensional polytope the relative interior is exactly the
        set of points with every stored halfspace strict and every coordinate
        positive.
        """
        coords = point.coords if isinstance(point, Belief) else point
        if strict:
            if any(c <= 0 for c in coords):
                return False
            return all(h.value(coords) > 0 for h in self.halfspaces)
        if any(c < 0 for c in coords):
            return False
        return all(h.value(coords) >= 0 for h in self.halfspaces)


def _dedupe_canonical(halfspaces) -> tuple[Halfspace, ...]:
    seen: dict[tuple, Halfspace] = {}
    for h in halfspaces:
        c = h.canonical()
        seen.setdefault((c.normal, c.offset), c)
    return tuple(seen.values())


# ---------------------------------------------------------------------------
# integer linear algebra (Bareiss fraction-free elimination)
# ---------------------------------------------------------------------------


def _int_row(normal: Coords, offset: Fraction) -> tuple[tuple[int, ...], int]:
    scale = math.lcm(offset.denominator, *(a.denominator for a in normal))
    return tuple(int(a * scale) for a in normal), int(offset * scale)


def _solve_int_square(rows: list[list[int]]) -> list[Fraction] | None:
    """Solve an n x (n+1) augmented integer system exactly; None if singular."""
    n = len(rows)
    a = [row[:] for row in rows]
    prev = 1
    for k in range(n):
        pivot = next((r for r in range(k, n) if a[r][k] != 0), None)
        if pivot is None:
            return None
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (akk * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    xs: list[Fraction] = [ZERO] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(a[i][n])
        for j in range(i + 1, n):
            s -= a[i][j] * xs[j]
        xs[i] = s / a[i][i]
    return xs


def _rank_of_rows(rows: list[Coords]) -> int:
    """Exact rank of a small rational matrix."""
    if not rows:
        return 0
    work: list[list[Fraction]] = [[_frac(v) for v in row] for row in rows]
    m, n = len(work), len(work[0])
    rank = 0
    col = 0
    while rank < m and col < n:
        pivot = next((r for r in range(rank, m) if work[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        pval = prow[col]
        for r in range(rank + 1, m):
            factor = work[r][col] / pval
            if factor:
                work[r] = [x - factor * y for x, y in zip(work[r], prow)]
        rank += 1
        col += 1
    return rank


def _unique_kernel_vector(rows: list[Coords], n: int) -> Coords | None:
    """The kernel vector of a rational row system whose nullity is exactly 1.

    Returns None when the nullity differs from 1 (rows rank-deficient or of
    full column rank). The vector is scaled to primitive integers with its
    first nonzero entry positive.
    """
    work: list[list[Fraction]] = [[_frac(v) for v in row] for row in rows]
    m = len(work)
    pivots: list[int] = []
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, m) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        pval = prow[col]
        work[rank] = [x / pval for x in prow]
        prow = work[rank]
        for r in range(m):
            if r != rank and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], prow)]
        pivots.append(col)
        rank += 1
        if rank == m:
            break
    if n - rank != 1:
        return None
    free = next(c for c in range(n) if c not in pivots)
    vec = [ZERO] * n
    vec[free] = ONE
    for r, col in enumerate(pivots):
        vec[col] = -work[r][free]
    scale = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * scale) for v in vec]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(Fraction(v) for v in ints)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def vertices_of(halfspaces, n: int) -> list[Belief]:
    """All extreme points of the halfspace intersection cut with the simplex.

    Brute force: every (n-1)-subset of constraints (the given halfspaces plus
    the n simplex facets) is made tight together with sum(x) = 1, the square
    system is solved exactly, and feasible solutions are kept. Deduplicated
    and sorted lexicographically; the empty list means an empty intersection.
    """
    if n > MAX_STATES:
        raise DimensionTooLarge(f"vertex enumeration supports at most {MAX_STATES} states, got {n}")
    hs = _dedupe_canonical(halfspaces)
    rows: list[tuple[tuple[int, ...], int]] = [_int_row(h.normal, h.offset) for h in hs]
    for theta in range(n):
        unit = tuple(1 if i == theta else 0 for i in range(n))
        rows.append((unit, 0))
    sum_row = [1] * n + [1]

    found: dict[Coords, Belief] = {}
    for subset in combinations(rows, n - 1):
        system = [list(a) + [c] for a, c in subset]
        system.append(sum_row[:])
        xs = _solve_int_square(system)
        if xs is None:
            continue
        if any(x < 0 for x in xs):
            continue
        coords = tuple(xs)
        if coords in found:
            continue
        if all(h.value(coords) >= 0 for h in hs):
            found[coords] = Belief(coords)
    return sorted(found.values())


def dimension(points) -> int:
    """Affine dimension of a point set (0 for a single point)."""
    pts = list(points)
    if not pts:
        raise EmptyInput("dimension of an empty point set is undefined")
    base = pts[0].coords
    diffs = [tuple(c - b for c, b in zip(p.coords, base)) for p in pts[1:]]
    return _rank_of_rows(diffs)


def barycenter(points) -> Belief:
    """Unweighted average of the points, exact."""
    pts = list(points)
    if not pts:
        raise EmptyInput("barycenter of an empty point set is undefined")
    k = len(pts)
    coords = tuple(sum(p.coords[i] for p in pts) / k for i in range(pts[0].n))
    return Belief(coords)


def interior_point(poly: Polytope) -> Belief:
    """A deterministic relative-interior point: the barycenter of the vertices."""
    if poly.is_empty():
        raise EmptyPolytope("polytope has no points")
    return barycenter(poly.vertices)


def hull_halfspaces(points) -> list[Halfspace]:
    """Facet halfspaces of the convex hull of a full-dimensional point set.

    Brute force over (n-1)-subsets: each affinely independent subset spans a
    candidate hyperplane (computed as the one-dimensional kernel of the
    difference rows plus the sum-gauge row); it is a facet when every input
    point sits weakly on one side. Assumes the hull is full-dimensional.
    """
    pts = sorted(set(points))
    if not pts:
        raise EmptyInput("hull of an empty point set is undefined")
    n = pts[0].n
    if dimension(pts) != n - 1:
        raise ValueError("hull_halfspaces expects a full-dimensional point set")
    facets: dict[tuple, Halfspace] = {}
    for subset in combinations(pts, n - 1):
        base = subset[0].coords
        rows: list[Coords] = [
            tuple(c - b for c, b in zip(p.coords, base)) for p in subset[1:]
        ]
        rows.append(tuple(ONE for _ in range(n)))
        w = _unique_kernel_vector(rows, n)
        if w is None:
            continue
        cut = sum(a * b for a, b in zip(w, base))
        signs = [sum(a * c for a, c in zip(w, p.coords)) - cut for p in pts]
        if all(s >= 0 for s in signs):
            h = Halfspace(w, cut).canonical()
        elif all(s <= 0 for s in signs):
            h = Halfspace(tuple(-a for a in w), -cut).canonical()
        else:
            continue
        facets[(h.normal, h.offset)] = h
    return sorted(facets.values(), key=lambda h: (h.normal, h.offset))


def _affinely_independent_subset(points, size: int) -> list[Belief]:
    """Greedy selection of `size` affinely independent points."""
    chosen: list[Belief] = []
    for p in points:
        trial = chosen + [p]
        if len(trial) == 1 or dimension(trial) == len(trial) - 1:
            chosen = trial
        if len(chosen) == size:
            return chosen
    raise ValueError("point set has too low affine dimension")


def facet_between(p1: Polytope, p2: Polytope):
    """Shared facet of two adjacent full-dimensional cells, with orientation.

    Returns (shared, h) where `shared` is the common face and `h` the facet
    halfspace holding on p2 with equality on the face, or None when the cells
    do not meet in dimension n-2. Swapping the arguments flips h.

    Both inputs must be full-dimensional cells that meet face-to-face (as the
    cells of one subdivision always do): the shared face is then spanned by
    the common vertices.
    """
    if not p1.is_full_dimensional() or not p2.is_full_dimensional():
        raise ValueError("facet_between expects full-dimensional cells")
    n = p1.n
    common = sorted(set(p1.vertices) & set(p2.vertices))
    if not common or dimension(common) != n - 2:
        return None
    span = _affinely_independent_subset(common, n - 1)
    base = span[0].coords
    rows: list[Coords] = [tuple(c - b for c, b in zip(p.coords, base)) for p in span[1:]]
    rows.append(tuple(ONE for _ in range(n)))
    w = _unique_kernel_vector(rows, n)
    if w is None:
        return None
    cut = sum(a * b for a, b in zip(w, base))
    inner = interior_point(p2)
    side = sum(a * c for a, c in zip(w, inner.coords)) - cut
    if side == 0:
        raise ValueError("cells are not separated by the shared facet's hyperplane")
    if side < 0:
        w = tuple(-a for a in w)
        cut = -cut
    h = Halfspace(w, cut).canonical()
    if any(h.value(v) < 0 for v in p2.vertices):
        raise ValueError("shared hyperplane does not support the second cell")
    shared = Polytope(
        _dedupe_canonical(p1.halfspaces + p2.halfspaces), tuple(common), n
    )
    return shared, h


# ---------------------------------------------------------------------------
# small affine helpers used by the construction code
# ---------------------------------------------------------------------------


def convex_combination(weighted_points) -> Belief:
    """Sum of prob * belief for (belief, prob) pairs with probs summing to 1."""
    items = list(weighted_points)
    n = items[0][0].n
    coords = tuple(
        sum(w * p.coords[i] for p, w in items) for i in range(n)
    )
    return Belief(coords)


def point_on_line(origin: Belief, direction: Coords, t: Fraction) -> Coords:
    """Raw coordinates of origin + t * direction (direction sums to zero)."""
    return tuple(o + t * d for o, d in zip(origin.coords, direction))


def interior_interval_on_line(origin: Belief, direction: Coords, poly: Polytope):
    """Open parameter interval {t : origin + t*direction in relint(poly)}.

    Returns an exact (lo, hi) pair with lo < hi, or None when the line misses
    the relative interior. The direction must sum to zero so the line stays
    in the simplex's affine hull.
    """
    n = poly.n
    conditions: list[tuple[Fraction, Fraction]] = []
    for h in poly.halfspaces:
        alpha = h.value(origin)
        beta = sum(a * d for a, d in zip(h.normal, direction))
        conditions.append((alpha, beta))
    for theta in range(n):
        conditions.append((origin.coords[theta], direction[theta]))
    lo: Fraction | None = None
    hi: Fraction | None = None
    for alpha, beta in conditions:
        if beta == 0:
            if alpha <= 0:
                return None
            continue
        bound = -alpha / beta
        if beta > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is None or hi is None:
        # a zero-sum direction always hits coordinate bounds on both sides
        return None
    if lo >= hi:
        return None
    return lo, hi
