import random
from fractions import Fraction

import numpy as np
import pytest

from hkcert.bounds import (
    ConstantObjective,
    GeneralBoundObjective,
    BoundSpec,
    HBoundObjective,
    MuSmallObjective,
)
from hkcert.search import (
    SearchParams,
    nu_vector,
    optimize_bound,
    rationalize,
)
from hkcert.volume import nu_exact, nu_float

from oracles import best_rational_oracle

F = Fraction


class TestRationalize:
    def test_half(self):
        assert rationalize(0.5, 10**6) == F(1, 2)

    def test_printed_decimal_roundtrip(self):
        assert rationalize(0.779643, 10**6) == F(779643, 1000000)

    def test_pi_against_enumeration_oracle(self):
        x = 3.14159265
        got = rationalize(x, 100)
        assert got == best_rational_oracle(x, 100) == F(311, 99)

    def test_small_denominator_oracle(self):
        rng = random.Random(3)
        for _ in range(25):
            x = rng.uniform(-5, 5)
            got = rationalize(x, 40)
            best = best_rational_oracle(x, 40)
            assert abs(got - F(x)) == abs(best - F(x))

    def test_error_bound(self):
        rng = random.Random(5)
        for _ in range(50):
            x = rng.uniform(-100, 100)
            assert abs(rationalize(x, 1000) - F(x)) <= F(1, 1000)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            rationalize(float("nan"))
        with pytest.raises(ValueError):
            rationalize(float("inf"))

    def test_integers_pass_through(self):
        assert rationalize(4, 10) == 4


class TestNuVector:
    def test_matches_scalar_path(self):
        rng = random.Random(12)
        for d in range(1, 13):
            xs = np.array([rng.uniform(-1, d + 1) for _ in range(200)])
            got = nu_vector(xs, d)
            want = np.array([nu_float(x, d) for x in xs])
            assert np.max(np.abs(got - want)) <= 1e-12

    def test_exact_agreement(self):
        xs = np.array([0.0, 0.5, 3.5, 6.5, 7.0, -1.0, 8.0])
        got = nu_vector(xs, 7)
        want = [float(nu_exact(F(x), 7)) for x in xs]
        assert np.max(np.abs(got - np.array(want))) <= 1e-13


class TestSearchParams:
    def test_defaults(self):
        p = SearchParams()
        assert p.resolved_s_range(7) == (F(0), F(8))
        assert p.grid == (200, 100)

    def test_validation(self):
        with pytest.raises(ValueError):
            SearchParams(grid=(1, 10))
        with pytest.raises(ValueError):
            SearchParams(t_range=(F(1), F(0)))
        with pytest.raises(ValueError):
            SearchParams(refine_rounds=-1)
        with pytest.raises(ValueError):
            SearchParams(max_denominator=0)


class TestOptimizer:
    def test_constant_objective_tie_break(self):
        params = SearchParams(s_range=(F(1), F(3)), grid=(10, 10))
        cand = optimize_bound(ConstantObjective(0), params)
        assert cand.value == 0.0
        assert cand.s_exact == F(1)
        assert cand.t_exact == F(0)

    def test_reaches_reference_single_e(self):
        for e, reference in ((6, "1.06437"), (7, "1.06046")):
            cand = optimize_bound(HBoundObjective(e, 7))
            assert cand.value >= float(reference)

    def test_deterministic_repeat(self):
        params = SearchParams()
        a = optimize_bound(HBoundObjective(9, 7), params)
        b = optimize_bound(HBoundObjective(9, 7), params)
        assert a == b

    def test_deterministic_across_workers(self):
        params = SearchParams(grid=(97, 41))
        runs = [
            optimize_bound(HBoundObjective(8, 7), params, workers=w)
            for w in (1, 2, 3, 7)
        ]
        assert all(r == runs[0] for r in runs)

    def test_witness_coordinates_are_grid_exact(self):
        cand = optimize_bound(HBoundObjective(7, 7))
        assert cand.s == float(cand.s_exact)
        assert cand.t == float(cand.t_exact)
        assert cand.s_exact.denominator <= 10**6
        assert cand.t_exact.denominator <= 10**6

    @pytest.mark.parametrize(
        "objective",
        [
            HBoundObjective(6, 7),
            HBoundObjective(5340, 7),
            GeneralBoundObjective(BoundSpec(8, 21, 19, 4)),
            MuSmallObjective(6, 3, 7),
        ],
    )
    def test_float_exact_agreement_at_witness(self, objective):
        cand = optimize_bound(objective, SearchParams(grid=(60, 30), refine_rounds=2))
        exact = objective.exact(cand.s_exact, cand.t_exact)
        assert cand.value <= float(exact) + 1e-9
        assert abs(cand.value - float(exact)) <= 1e-9

    def test_candidate_inside_ranges(self):
        params = SearchParams(s_range=(F(2), F(3)), t_range=(F(1, 4), F(1, 2)))
        cand = optimize_bound(HBoundObjective(7, 7), params)
        assert F(2) <= cand.s_exact <= F(3)
        assert F(1, 4) <= cand.t_exact <= F(1, 2)

    def test_degenerate_t_range(self):
        params = SearchParams(t_range=(F(1), F(1)), grid=(50, 2))
        cand = optimize_bound(MuSmallObjective(6, 1, 7), params)
        assert cand.t_exact == 1
        assert abs(float(nu_exact(cand.s_exact, 7)) * 6
                   - 6 * float(nu_exact(cand.s_exact - 1, 7))
                   - cand.value) < 1e-9

    def test_refinement_improves_or_keeps(self):
        coarse = optimize_bound(
            HBoundObjective(7, 7), SearchParams(refine_rounds=0)
        )
        refined = optimize_bound(
            HBoundObjective(7, 7), SearchParams(refine_rounds=3)
        )
        assert refined.value >= coarse.value
