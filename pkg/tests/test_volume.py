import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcert.volume import (
    PiecewisePolynomial,
    Polynomial,
    nu_density,
    nu_exact,
    nu_float,
    nu_piecewise,
    to_rational,
)

from oracles import volume_oracle

F = Fraction


class TestNuExact:
    def test_unit_simplex(self):
        assert nu_exact(1, 7) == F(1, 5040)

    def test_symmetry_midpoint(self):
        assert nu_exact(F(7, 2), 7) == F(1, 2)

    def test_corner_complement(self):
        # 1 - (1/2)^2 / 2 by cutting the corner triangle off the square.
        assert nu_exact(F(3, 2), 2) == F(7, 8)

    def test_empty_slice(self):
        assert nu_exact(-1, 5) == 0
        assert nu_exact(0, 3) == 0

    def test_full_cube(self):
        assert nu_exact(7, 7) == 1
        assert nu_exact(F(15, 2), 7) == 1

    def test_against_integration_oracle(self):
        # Value fixed by the repeated-integration oracle.
        expected = F(62837, 645120)
        assert volume_oracle(F(5, 2), 7) == expected
        assert nu_exact(F(5, 2), 7) == expected

    def test_oracle_equivalence_random(self):
        rng = random.Random(20240817)
        for d in range(1, 10):
            for _ in range(25):
                s = F(rng.randint(-500, 1000 * d), rng.randint(1, 997))
                assert nu_exact(s, d) == volume_oracle(s, d)

    def test_rejects_float_input(self):
        with pytest.raises(TypeError):
            nu_exact(2.5, 7)

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            nu_exact(F(1, 2), 0)


@settings(max_examples=60, deadline=None)
@given(
    s=st.fractions(min_value=-2, max_value=10, max_denominator=500),
    d=st.integers(min_value=1, max_value=9),
)
def test_range_property(s, d):
    v = nu_exact(s, d)
    assert 0 <= v <= 1


@settings(max_examples=60, deadline=None)
@given(
    s=st.fractions(min_value=-2, max_value=11, max_denominator=500),
    d=st.integers(min_value=1, max_value=9),
)
def test_symmetry_property(s, d):
    assert nu_exact(s, d) + nu_exact(d - s, d) == 1


@settings(max_examples=60, deadline=None)
@given(
    s1=st.fractions(min_value=-1, max_value=10, max_denominator=300),
    s2=st.fractions(min_value=-1, max_value=10, max_denominator=300),
    d=st.integers(min_value=1, max_value=8),
)
def test_monotonicity_property(s1, s2, d):
    if s1 > s2:
        s1, s2 = s2, s1
    v1, v2 = nu_exact(s1, d), nu_exact(s2, d)
    assert v1 <= v2
    if 0 <= s1 < s2 <= d:
        assert v1 < v2


class TestNuFloat:
    def test_clamps(self):
        assert nu_float(7.0, 7) == 1.0
        assert nu_float(-0.5, 4) == 0.0

    def test_midpoint(self):
        assert abs(nu_float(3.5, 7) - 0.5) <= 1e-12

    def test_against_exact_path(self):
        want = float(nu_exact(F(2741180, 1000000), 7))
        assert abs(nu_float(2.74118, 7) - want) <= 1e-12

    def test_near_top_no_cancellation(self):
        # The dangerous region is s close to d, where naive summation loses
        # most of its digits.
        for d in range(2, 13):
            for num in (4 * d - 1, 4 * d - 2, 4 * d - 3):
                s = F(num, 4)
                assert abs(nu_float(float(s), d) - float(nu_exact(s, d))) <= 1e-12

    def test_random_agreement(self):
        rng = random.Random(99)
        for _ in range(200):
            d = rng.randint(1, 12)
            s = rng.uniform(-1, d + 1)
            exact = nu_exact(F(s), d)
            assert abs(nu_float(s, d) - float(exact)) <= 1e-12

    def test_monte_carlo_sanity(self):
        rng = random.Random(5151)
        npr = np.random.default_rng(5151)
        n = 10**6
        for _ in range(10):
            d = rng.randint(1, 9)
            s = rng.uniform(0.2, d - 0.2)
            hits = 0
            for _ in range(10):
                block = npr.random((n // 10, d)).sum(axis=1)
                hits += int((block <= s).sum())
            assert abs(nu_float(s, d) - hits / n) <= 4 * 0.5 / 1000


class TestPiecewise:
    def test_dimension_one_structure(self):
        pw = nu_piecewise(1)
        assert pw.breakpoints == (F(0), F(1))
        assert pw.pieces == (Polynomial((0, 1)),)
        assert pw.left_value == 0 and pw.right_value == 1

    def test_dimension_two_pieces(self):
        pw = nu_piecewise(2)
        assert pw.pieces[0] == Polynomial((0, 0, F(1, 2)))
        assert pw.pieces[1] == Polynomial((-1, 2, F(-1, 2)))

    def test_dimension_seven_structure(self):
        pw = nu_piecewise(7)
        assert pw.breakpoints == tuple(F(j) for j in range(8))
        assert len(pw.pieces) == 7
        assert all(p.degree == 7 for p in pw.pieces)

    @pytest.mark.parametrize("d", range(1, 10))
    def test_continuity_exact(self, d):
        pw = nu_piecewise(d)
        assert pw.is_continuous()
        for j in range(len(pw.pieces) - 1):
            b = pw.breakpoints[j + 1]
            assert pw.pieces[j](b) == pw.pieces[j + 1](b)

    @pytest.mark.parametrize("d", range(2, 10))
    def test_derivative_continuity_exact(self, d):
        dv = nu_piecewise(d).derivative()
        for j in range(len(dv.pieces) - 1):
            b = dv.breakpoints[j + 1]
            assert dv.pieces[j](b) == dv.pieces[j + 1](b)

    @pytest.mark.parametrize("d", range(1, 10))
    def test_matches_nu_exact_everywhere(self, d):
        pw = nu_piecewise(d)
        rng = random.Random(31 + d)
        for _ in range(60):
            s = F(rng.randint(-300, 300 + 100 * d), rng.randint(1, 100))
            assert pw(s) == nu_exact(s, d)

    def test_rejects_discontinuous_pieces(self):
        with pytest.raises(ValueError):
            PiecewisePolynomial((0, 1, 2), (Polynomial((0, 1)), Polynomial((5,))), 0, 5)

    def test_rejects_bad_breakpoints(self):
        with pytest.raises(ValueError):
            PiecewisePolynomial((0, 0), (Polynomial((1,)),), 1, 1)


class TestDensity:
    def test_ramp_slope(self):
        assert nu_density(F(1, 2), 1) == 1

    def test_triangle_peak(self):
        assert nu_density(1, 2) == 1

    def test_middle_piece_slope(self):
        v = nu_density(F(7, 2), 7)
        assert v > 0
        middle = nu_piecewise(7).pieces[3].derivative()
        assert v == middle(F(7, 2))

    def test_outside_support(self):
        assert nu_density(-1, 5) == 0
        assert nu_density(5, 5) == 0
        assert nu_density(8, 5) == 0

    def test_nonnegative_random(self):
        rng = random.Random(11)
        for _ in range(200):
            d = rng.randint(1, 9)
            s = F(rng.randint(-100, 100 * d), rng.randint(1, 50))
            assert nu_density(s, d) >= 0


class TestPolynomial:
    def test_canonical_trailing_zeros(self):
        assert Polynomial((1, 2, 0, 0)) == Polynomial((1, 2))
        assert Polynomial((0,)).degree == -1

    def test_arithmetic(self):
        p = Polynomial((1, 1))  # 1 + x
        q = Polynomial((-1, 1))  # -1 + x
        assert p * q == Polynomial((-1, 0, 1))
        assert p + q == Polynomial((0, 2))
        assert p - p == Polynomial(())
        assert 3 * p == Polynomial((3, 3))

    def test_derivative_and_eval(self):
        p = Polynomial((F(1, 2), 0, 3, 1))  # 1/2 + 3x^2 + x^3
        assert p.derivative() == Polynomial((0, 6, 3))
        assert p(F(1, 2)) == F(1, 2) + 3 * F(1, 4) + F(1, 8)

    def test_rejects_float_coefficients(self):
        with pytest.raises(TypeError):
            Polynomial((0.5, 1))


def test_to_rational_accepts_strings_and_ints():
    assert to_rational("2.74118") == F(274118, 100000)
    assert to_rational("71/67") == F(71, 67)
    assert to_rational(5) == 5


def test_to_rational_rejects_floats_and_bools():
    with pytest.raises(TypeError):
        to_rational(0.1)
    with pytest.raises(TypeError):
        to_rational(True)
