from fractions import Fraction
from random import Random

import pytest

import support
from infoval.decision import (
    AffineFn,
    compute_subdivision,
    equal_up_to_state_transfer,
    evaluate_value,
    make_problem,
    scale_problem,
    undominated_actions,
    value_function,
)
from infoval.errors import NonpositiveScale
from infoval.geometry import belief


class TestProblemValidation:
    def test_duplicate_rows_rejected(self):
        with pytest.raises(ValueError, match="duplicate action"):
            make_problem([[1, 0], [1, 0]])

    def test_single_state_rejected(self):
        with pytest.raises(ValueError, match="two states"):
            make_problem([[1], [2]])

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            make_problem([[0.5, 0.5], [0, 1]])


class TestEvaluateValue:
    def test_symmetric_peak(self):
        dp = support.two_peak_problem()
        assert evaluate_value(dp, belief("1/2", "1/2")) == Fraction(1, 2)

    def test_vertex(self):
        dp = support.two_peak_problem()
        assert evaluate_value(dp, belief("1", "0")) == 1

    def test_bet_problem(self):
        dp = support.safe_or_bet_problem()
        assert evaluate_value(dp, belief("2/5", "3/5")) == Fraction(1, 5)

    def test_grid_matches_brute_force(self):
        rng = Random(7)
        for _ in range(5):
            dp = support.random_problem(rng, n=2, max_actions=5, max_denominator=6)
            for x in support.grid_beliefs(2, 12):
                brute = max(
                    sum(u * c for u, c in zip(row, x.coords)) for row in dp.utility
                )
                assert evaluate_value(dp, x) == brute


class TestUndominated:
    def test_flat_action_dominated(self):
        dp = support.two_peak_problem()
        assert undominated_actions(dp) == frozenset({0, 1})

    def test_single_action(self):
        dp = make_problem([[1, 2]])
        assert undominated_actions(dp) == frozenset({0})

    def test_bet_problem(self):
        dp = support.safe_or_bet_problem()
        assert undominated_actions(dp) == frozenset({0, 1})

    def test_tie_only_action_is_dominated(self):
        # the middle action equals the envelope only at x = (1/2, 1/2)
        dp = make_problem([[1, 0], [0, 1], ["1/2", "1/2"]])
        assert undominated_actions(dp) == frozenset({0, 1})

    def test_matches_dense_grid_maximin(self):
        rng = Random(21)
        for _ in range(8):
            dp = support.random_problem(rng, n=2, max_actions=4, max_denominator=5)
            lp_winners = undominated_actions(dp)
            grid = support.grid_beliefs(2, 240)
            grid_winners = set()
            for a in range(dp.num_actions):
                best = max(
                    min(
                        dp.payoff(a, x) - dp.payoff(b, x)
                        for b in range(dp.num_actions)
                        if b != a
                    )
                    for x in grid
                )
                if best > 0:
                    grid_winners.add(a)
            # the grid can only under-approximate strict optimality
            assert grid_winners <= lp_winners
            for a in lp_winners - grid_winners:
                # a thin winning region must still show up on a finer grid line
                assert any(
                    all(
                        dp.payoff(a, x) > dp.payoff(b, x)
                        for b in range(dp.num_actions)
                        if b != a
                    )
                    for x in support.grid_beliefs(2, 1201)
                )


class TestSubdivision:
    def test_two_peak_cells(self):
        sub = compute_subdivision(support.two_peak_problem())
        assert [c.action_index for c in sub.cells] == [0, 1]
        assert list(sub.cells[0].geometry.vertices) == [
            belief("1/2", "1/2"),
            belief("1", "0"),
        ]
        assert list(sub.cells[1].geometry.vertices) == [
            belief("0", "1"),
            belief("1/2", "1/2"),
        ]
        assert len(sub.adjacency) == 1

    def test_bet_cells(self):
        sub = compute_subdivision(support.safe_or_bet_problem())
        assert list(sub.cells[0].geometry.vertices) == [
            belief("1/2", "1/2"),
            belief("1", "0"),
        ]
        assert list(sub.cells[1].geometry.vertices) == [
            belief("0", "1"),
            belief("1/2", "1/2"),
        ]

    def test_three_state_cells_pairwise_adjacent(self):
        sub = compute_subdivision(support.guess_the_state_problem())
        assert len(sub.cells) == 3
        center = belief("1/3", "1/3", "1/3")
        for cell in sub.cells:
            assert center in cell.geometry.vertices
        assert {(p.i, p.j) for p in sub.adjacency} == {(0, 1), (0, 2), (1, 2)}

    def test_cells_cover_grid(self):
        rng = Random(3)
        for _ in range(4):
            dp = support.random_problem(rng, n=3, max_actions=4, max_denominator=6)
            sub = compute_subdivision(dp)
            for x in support.grid_beliefs(3, 7):
                hits = sub.cells_containing(x)
                assert hits, f"{x} not covered"
                strict = [
                    i
                    for i in hits
                    if sub.cells[i].geometry.contains(x, strict=True)
                ]
                if strict:
                    assert len(strict) == 1

    def test_cell_actions_equal_undominated(self):
        rng = Random(11)
        for _ in range(6):
            dp = support.random_problem(rng, max_actions=5, max_denominator=8)
            sub = compute_subdivision(dp)
            assert {c.action_index for c in sub.cells} == set(undominated_actions(dp))


class TestScaling:
    def test_entries(self):
        dp = scale_problem(support.safe_or_bet_problem(), 2)
        assert dp.utility == ((Fraction(0), Fraction(0)), (Fraction(-2), Fraction(2)))

    def test_identity(self):
        dp = support.two_peak_problem()
        assert scale_problem(dp, 1) == dp

    def test_subdivision_invariant(self):
        dp = support.two_peak_problem()
        scaled = scale_problem(dp, 3)
        assert scaled.utility[2] == (Fraction(6, 5), Fraction(6, 5))
        assert compute_subdivision(dp).same_geometry(compute_subdivision(scaled))

    def test_nonpositive_rejected(self):
        with pytest.raises(NonpositiveScale):
            scale_problem(support.two_peak_problem(), 0)

    def test_random_scaling_preserves_geometry(self):
        rng = Random(5)
        for _ in range(5):
            dp = support.random_problem(rng, max_actions=4, max_denominator=6)
            factor = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            assert compute_subdivision(dp).same_geometry(
                compute_subdivision(scale_problem(dp, factor))
            )


class TestStateTransfer:
    def test_pure_transfer_found(self):
        dp1 = support.two_peak_problem()
        shifted = make_problem([[6, 0], [5, 1], ["27/5", "2/5"]])
        got = equal_up_to_state_transfer(dp1, shifted)
        assert got is not None
        relabeling, transfer = got
        assert relabeling == {0: 0, 1: 1}
        assert transfer == AffineFn((5, 0))

    def test_scaling_is_not_a_transfer(self):
        dp = support.safe_or_bet_problem()
        assert equal_up_to_state_transfer(dp, scale_problem(dp, 2)) is None

    def test_relabeled_actions(self):
        dp1 = support.two_peak_problem()
        reversed_dp = make_problem([["2/5", "2/5"], [0, 1], [1, 0]])
        got = equal_up_to_state_transfer(dp1, reversed_dp)
        assert got is not None
        relabeling, transfer = got
        assert relabeling == {0: 2, 1: 1}
        assert transfer == AffineFn((0, 0))

    def test_transfer_invariance_of_subdivision(self):
        rng = Random(13)
        for _ in range(5):
            dp = support.random_problem(rng, max_actions=4, max_denominator=6)
            gamma = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(dp.n))
            moved = make_problem(
                [tuple(u + g for u, g in zip(row, gamma)) for row in dp.utility]
            )
            assert compute_subdivision(dp).same_geometry(compute_subdivision(moved))
            got = equal_up_to_state_transfer(dp, moved)
            assert got is not None
            assert got[1] == AffineFn(gamma)

    def test_equivalence_relation(self):
        rng = Random(17)
        dp = support.random_problem(rng, n=3, max_actions=4, max_denominator=5)
        self_rel = equal_up_to_state_transfer(dp, dp)
        assert self_rel is not None and self_rel[1] == AffineFn((0, 0, 0))

        gamma1 = (Fraction(1), Fraction(-2), Fraction(3))
        step1 = make_problem(
            [tuple(u + g for u, g in zip(row, gamma1)) for row in dp.utility]
        )
        forward = equal_up_to_state_transfer(dp, step1)
        backward = equal_up_to_state_transfer(step1, dp)
        assert forward is not None and backward is not None
        assert backward[1] == AffineFn(tuple(-g for g in gamma1))

        gamma2 = (Fraction(0), Fraction(5), Fraction(-1))
        step2 = make_problem(
            [tuple(u + g for u, g in zip(row, gamma2)) for row in step1.utility]
        )
        combined = equal_up_to_state_transfer(dp, step2)
        assert combined is not None
        assert combined[1] == AffineFn(tuple(a + b for a, b in zip(gamma1, gamma2)))


class TestValueFunction:
    def test_pieces_are_the_winning_rows(self):
        dp = support.safe_or_bet_problem()
        fn = value_function(dp)
        assert fn.pieces[0] == AffineFn((0, 0))
        assert fn.pieces[1] == AffineFn((-1, 1))
        assert fn(belief("2/5", "3/5")) == Fraction(1, 5)

    def test_envelope_matches_evaluate_value(self):
        rng = Random(29)
        dp = support.random_problem(rng, n=3, max_actions=5, max_denominator=6)
        fn = value_function(dp)
        for x in support.grid_beliefs(3, 6):
            assert fn(x) == evaluate_value(dp, x)
