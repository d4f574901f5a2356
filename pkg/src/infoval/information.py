"""Blackwell experiments, posterior distributions, and the value of information.

An experiment maps states to signal distributions. At an interior prior it
induces a finitely supported distribution over posterior beliefs whose mean
is the prior; that distribution is the only thing the decision maker cares
about, so distributions are kept in a canonical form (atoms with equal
beliefs merged, atoms sorted) and equality is literal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .decision import DecisionProblem, evaluate_value
from .errors import BoundaryPrior, MeanMismatch, ShapeMismatch, UnequalWeights
from .geometry import Belief, barycenter

Coords = tuple[Fraction, ...]


def _frac(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floating point probabilities are not allowed")
    return Fraction(value)


@dataclass(frozen=True)
class Experiment:
    """A row-stochastic likelihood matrix: row theta gives P(signal | theta)."""

    signal_labels: tuple[str, ...]
    likelihood: tuple[Coords, ...]

    def __post_init__(self):
        rows = tuple(tuple(_frac(v) for v in row) for row in self.likelihood)
        object.__setattr__(self, "likelihood", rows)
        object.__setattr__(self, "signal_labels", tuple(self.signal_labels))
        if not rows:
            raise ValueError("an experiment needs at least one state row")
        width = len(self.signal_labels)
        for row in rows:
            if len(row) != width:
                raise ValueError("likelihood rows must match the signal labels")
            if any(v < 0 for v in row):
                raise ValueError("signal probabilities must be nonnegative")
            if sum(row) != 1:
                raise ValueError("each likelihood row must sum to exactly 1")

    @property
    def n(self) -> int:
        return len(self.likelihood)

    @property
    def num_signals(self) -> int:
        return len(self.signal_labels)

    @classmethod
    def fully_revealing(cls, n: int) -> "Experiment":
        rows = tuple(
            tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
            for i in range(n)
        )
        return cls(tuple(f"s{i+1}" for i in range(n)), rows)

    @classmethod
    def uninformative(cls, n: int) -> "Experiment":
        return cls(("s1",), tuple((Fraction(1),) for _ in range(n)))


@dataclass(frozen=True)
class Garbling:
    """Row-stochastic post-processing of signals."""

    matrix: tuple[Coords, ...]

    def __post_init__(self):
        rows = tuple(tuple(_frac(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if not rows:
            raise ValueError("a garbling needs at least one row")
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise ValueError("garbling rows must have equal length")
            if any(v < 0 for v in row):
                raise ValueError("garbling entries must be nonnegative")
            if sum(row) != 1:
                raise ValueError("each garbling row must sum to exactly 1")

    @property
    def num_inputs(self) -> int:
        return len(self.matrix)

    @property
    def num_outputs(self) -> int:
        return len(self.matrix[0])

    def compose(self, other: "Garbling") -> "Garbling":
        if self.num_outputs != other.num_inputs:
            raise ShapeMismatch("garbling shapes do not compose")
        rows = tuple(
            tuple(
                sum(self.matrix[i][k] * other.matrix[k][j] for k in range(self.num_outputs))
                for j in range(other.num_outputs)
            )
            for i in range(self.num_inputs)
        )
        return Garbling(rows)


@dataclass(frozen=True)
class PosteriorDistribution:
    """A finitely supported distribution over beliefs, in canonical form.

    Atoms with identical beliefs are merged and the list is sorted by belief,
    so equal distributions compare equal syntactically. The mean is cached.
    """

    atoms: tuple[tuple[Belief, Fraction], ...]
    mean: Belief

    def __init__(self, atoms):
        merged: dict[Coords, Fraction] = {}
        order: dict[Coords, Belief] = {}
        for belief_point, prob in atoms:
            prob = _frac(prob)
            if prob < 0:
                raise ValueError("atom probabilities must be nonnegative")
            if prob == 0:
                continue
            key = belief_point.coords
            merged[key] = merged.get(key, Fraction(0)) + prob
            order[key] = belief_point
        if not merged:
            raise ValueError("a posterior distribution needs positive mass")
        total = sum(merged.values())
        if total != 1:
            raise ValueError(f"atom probabilities must sum to 1, got {total}")
        canonical = tuple(
            (order[key], merged[key]) for key in sorted(merged.keys())
        )
        n = canonical[0][0].n
        mean = tuple(
            sum(prob * b.coords[i] for b, prob in canonical) for i in range(n)
        )
        object.__setattr__(self, "atoms", canonical)
        object.__setattr__(self, "mean", Belief(mean))

    @property
    def support(self) -> tuple[Belief, ...]:
        return tuple(b for b, _ in self.atoms)

    def prob_of(self, belief_point: Belief) -> Fraction:
        for b, p in self.atoms:
            if b == belief_point:
                return p
        return Fraction(0)

    @classmethod
    def point_mass(cls, belief_point: Belief) -> "PosteriorDistribution":
        return cls(((belief_point, Fraction(1)),))


class Order(enum.Enum):
    """Exact comparison of two experiments' value to the decision maker."""

    BETTER = "better"
    EQUAL = "equal"
    WORSE = "worse"

    def __str__(self) -> str:
        return {"better": ">", "equal": "=", "worse": "<"}[self.value]


def _require_interior(prior: Belief) -> None:
    if not prior.is_interior():
        raise BoundaryPrior()


def bayes_split(prior: Belief, experiment: Experiment) -> PosteriorDistribution:
    """The distribution of posterior beliefs the experiment induces at the prior.

    Signals with zero marginal probability are dropped; signals leading to the
    same posterior are merged. The result's mean is the prior, exactly.
    """
    _require_interior(prior)
    if experiment.n != prior.n:
        raise ShapeMismatch("experiment rows must match the prior's states")
    atoms = []
    for s in range(experiment.num_signals):
        marginal = sum(
            prior.coords[t] * experiment.likelihood[t][s] for t in range(prior.n)
        )
        if marginal == 0:
            continue
        posterior = Belief(
            tuple(
                prior.coords[t] * experiment.likelihood[t][s] / marginal
                for t in range(prior.n)
            )
        )
        atoms.append((posterior, marginal))
    return PosteriorDistribution(atoms)


def experiment_of(prior: Belief, dist: PosteriorDistribution) -> Experiment:
    """The canonical experiment generating the given posterior distribution.

    One signal per atom, with P(s | theta) = prob_s * x_s(theta) / prior(theta).
    Inverse of bayes_split: splitting the result at the same prior returns the
    distribution unchanged.
    """
    _require_interior(prior)
    if dist.mean != prior:
        raise MeanMismatch(
            f"distribution mean {dist.mean} does not match the prior {prior}"
        )
    labels = tuple(f"s{i+1}" for i in range(len(dist.atoms)))
    rows = tuple(
        tuple(
            prob * b.coords[t] / prior.coords[t] for b, prob in dist.atoms
        )
        for t in range(prior.n)
    )
    return Experiment(labels, rows)


def garble(experiment: Experiment, garbling: Garbling) -> Experiment:
    """Post-process signals through a row-stochastic map: likelihood @ matrix."""
    if experiment.num_signals != garbling.num_inputs:
        raise ShapeMismatch(
            f"experiment emits {experiment.num_signals} signals but the garbling "
            f"expects {garbling.num_inputs}"
        )
    rows = tuple(
        tuple(
            sum(
                experiment.likelihood[t][s] * garbling.matrix[s][j]
                for s in range(experiment.num_signals)
            )
            for j in range(garbling.num_outputs)
        )
        for t in range(experiment.n)
    )
    labels = tuple(f"g{i+1}" for i in range(garbling.num_outputs))
    return Experiment(labels, rows)


def expected_value(dp: DecisionProblem, dist: PosteriorDistribution) -> Fraction:
    """Expectation of the problem's value function under the distribution."""
    return sum(prob * evaluate_value(dp, b) for b, prob in dist.atoms)


def value_of_experiment(dp: DecisionProblem, prior: Belief, experiment: Experiment) -> Fraction:
    """Expected gain from observing the experiment before acting.

    Normalized so an uninformative experiment is worth exactly zero.
    """
    _require_interior(prior)
    return expected_value(dp, bayes_split(prior, experiment)) - evaluate_value(dp, prior)


def rank(dp: DecisionProblem, prior: Belief, first: Experiment, second: Experiment) -> Order:
    """Exact comparison of two experiments' value at the prior."""
    w1 = value_of_experiment(dp, prior, first)
    w2 = value_of_experiment(dp, prior, second)
    if w1 > w2:
        return Order.BETTER
    if w1 < w2:
        return Order.WORSE
    return Order.EQUAL


def collapse_to_barycenter(dist: PosteriorDistribution, indices) -> PosteriorDistribution:
    """Replace equally weighted atoms by a single atom at their barycenter.

    This is a mean-preserving contraction. The equal-weights precondition
    makes the collapsed mass's conditional mean the plain barycenter.
    """
    chosen = sorted(set(indices))
    if not chosen:
        return dist
    picked = [dist.atoms[i] for i in chosen]
    weights = {p for _, p in picked}
    if len(weights) > 1:
        raise UnequalWeights(
            "collapse needs equal probabilities on the selected atoms"
        )
    center = barycenter([b for b, _ in picked])
    total = sum(p for _, p in picked)
    rest = [atom for i, atom in enumerate(dist.atoms) if i not in set(chosen)]
    return PosteriorDistribution(rest + [(center, total)])


def split_atom(dist: PosteriorDistribution, index: int, first, second) -> PosteriorDistribution:
    """Replace one atom by two whose weighted average reproduces it.

    first and second are (belief, weight) pairs; the weights must be positive,
    sum to the split atom's probability, and average back to its belief. The
    result is a mean-preserving spread of the input.
    """
    belief_point, prob = dist.atoms[index]
    (x1, w1), (x2, w2) = first, second
    w1, w2 = _frac(w1), _frac(w2)
    if w1 <= 0 or w2 <= 0:
        raise ValueError("split weights must be positive")
    if w1 + w2 != prob:
        raise MeanMismatch("split weights must sum to the atom's probability")
    mixed = tuple(
        w1 * a + w2 * b for a, b in zip(x1.coords, x2.coords)
    )
    target = tuple(prob * c for c in belief_point.coords)
    if mixed != target:
        raise MeanMismatch("split targets do not average back to the original atom")
    rest = [atom for i, atom in enumerate(dist.atoms) if i != index]
    return PosteriorDistribution(rest + [(x1, w1), (x2, w2)])
