"""Exact hypercube-slice volumes and their piecewise-polynomial structure.

The central object is

    nu(s, d) = vol{ x in [0,1]^d : x_1 + ... + x_d <= s },

the cumulative distribution function of a sum of d independent uniform
variables (the Irwin-Hall distribution).  On [0, d] it is the degree-d
piecewise polynomial

    nu(s, d) = sum_{j=0}^{floor(s)} (-1)^j (s - j)^d / (j! (d - j)!),

with nu = 0 for s <= 0 and nu = 1 for s >= d.  Everything here is computed
in exact rational arithmetic; :func:`nu_float` is the fast floating twin
used by grid searches.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, floor, fsum, isnan

__all__ = [
    "Polynomial",
    "PiecewisePolynomial",
    "to_rational",
    "nu_exact",
    "nu_float",
    "nu_piecewise",
    "nu_density",
]

# Factorials cached as exact integers; dimensions beyond the cache are close
# to meaningless for these volumes and are rejected by the CLI layer.
MAX_CACHED_DIMENSION = 64
_FACT = tuple(factorial(n) for n in range(MAX_CACHED_DIMENSION + 1))


def _fact(n: int) -> int:
    return _FACT[n] if n <= MAX_CACHED_DIMENSION else factorial(n)


def to_rational(value: Fraction | int | str) -> Fraction:
    """Coerce ``value`` to an exact :class:`~fractions.Fraction`.

    Accepts Fractions, integers, and strings ("7/8", "2.74118"); decimal
    strings convert exactly.  Binary floats are rejected so that inexact
    values cannot slip into a certification path unnoticed -- convert them
    deliberately with :func:`hkcert.search.rationalize`.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(
            f"refusing to coerce {value!r} to an exact rational; "
            "use hkcert.search.rationalize() for floats"
        )
    return Fraction(value)


def _check_dimension(d: int) -> None:
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial with exact rational coefficients.

    ``coefficients[i]`` is the coefficient of x**i; trailing zeros are
    stripped on construction so equal polynomials compare equal.
    """

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients=()):
        coeffs = [to_rational(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def __call__(self, x: Fraction | int | str) -> Fraction:
        x = to_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial | Fraction | int") -> "Polynomial":
        if isinstance(other, Polynomial):
            if not self.coefficients or not other.coefficients:
                return Polynomial()
            out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
            for i, a in enumerate(self.coefficients):
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
            return Polynomial(out)
        scale = to_rational(other)
        return Polynomial(tuple(c * scale for c in self.coefficients))

    __rmul__ = __mul__

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i))


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Continuous piecewise polynomial over exact rational breakpoints.

    Piece ``i`` applies on ``[breakpoints[i], breakpoints[i+1])`` in the
    absolute coordinate; ``left_value`` / ``right_value`` are the constant
    tails outside the breakpoint span.  Evaluation is right-continuous at
    breakpoints.  Adjacent pieces must agree exactly at the shared
    breakpoint (checked on construction).
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Polynomial, ...]
    left_value: Fraction
    right_value: Fraction

    def __init__(self, breakpoints, pieces, left_value, right_value):
        breaks = tuple(to_rational(b) for b in breakpoints)
        pieces = tuple(pieces)
        if len(breaks) < 2 or len(pieces) != len(breaks) - 1:
            raise ValueError("need n >= 2 breakpoints and n - 1 pieces")
        if any(b1 >= b2 for b1, b2 in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        for i in range(len(pieces) - 1):
            b = breaks[i + 1]
            if pieces[i](b) != pieces[i + 1](b):
                raise ValueError(f"pieces {i} and {i + 1} disagree at breakpoint {b}")
        object.__setattr__(self, "breakpoints", breaks)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "left_value", to_rational(left_value))
        object.__setattr__(self, "right_value", to_rational(right_value))

    def __call__(self, s: Fraction | int | str) -> Fraction:
        s = to_rational(s)
        if s < self.breakpoints[0]:
            return self.left_value
        if s >= self.breakpoints[-1]:
            return self.right_value
        i = bisect_right(self.breakpoints, s) - 1
        return self.pieces[i](s)

    def derivative(self) -> "PiecewisePolynomial":
        """Piecewise derivative with zero tails (right-continuous at breaks).

        Only valid as a classical derivative where the original is C^1; the
        result is still a well-defined right-continuous function otherwise.
        """
        derived = tuple(p.derivative() for p in self.pieces)
        # Bypass the continuity check: derivatives of C^0 functions may jump.
        out = object.__new__(PiecewisePolynomial)
        object.__setattr__(out, "breakpoints", self.breakpoints)
        object.__setattr__(out, "pieces", derived)
        object.__setattr__(out, "left_value", Fraction(0))
        object.__setattr__(out, "right_value", Fraction(0))
        return out

    def is_continuous(self) -> bool:
        """Exact continuity check at every interior breakpoint and both tails."""
        if self.pieces[0](self.breakpoints[0]) != self.left_value:
            return False
        if self.pieces[-1](self.breakpoints[-1]) != self.right_value:
            return False
        return all(
            self.pieces[i](b) == self.pieces[i + 1](b)
            for i, b in enumerate(self.breakpoints[1:-1])
        )


def nu_exact(s: Fraction | int | str, d: int) -> Fraction:
    """Exact volume of the slice of [0,1]^d where the coordinates sum to <= s.

    Total on all rational s: clamps to 0 below 0 and to 1 above d, which is
    how the bound formulas expect shifted arguments like s - t to behave.
    """
    _check_dimension(d)
    s = to_rational(s)
    if s <= 0:
        return Fraction(0)
    if s >= d:
        return Fraction(1)
    total = Fraction(0)
    # At integer s the j = s term is (s - j)^d = 0, so the inclusive floor
    # needs no case split.
    for j in range(floor(s) + 1):
        term = Fraction((-1) ** j, _fact(j) * _fact(d - j)) * (s - j) ** d
        total += term
    return total


def _nu_float_half(x: float, d: int) -> float:
    # x in [0, d/2]; summation via fsum so the alternating sum is exactly
    # rounded, and the reflection keeps individual terms small.
    terms = [
        ((-1) ** j / (_fact(j) * _fact(d - j))) * (x - j) ** d
        for j in range(floor(x) + 1)
    ]
    return fsum(terms)


def nu_float(s: float, d: int) -> float:
    """Floating twin of :func:`nu_exact` (error well under 1e-12 for d <= 12).

    Evaluates on the reflected argument min(s, d - s) with exactly rounded
    summation, so the alternating sum never cancels catastrophically.
    """
    _check_dimension(d)
    s = float(s)
    if isnan(s):
        return s
    if s <= 0.0:
        return 0.0
    if s >= d:
        return 1.0
    if 2.0 * s > d:
        return 1.0 - _nu_float_half(d - s, d)
    return _nu_float_half(s, d)


@lru_cache(maxsize=None)
def nu_piecewise(d: int) -> PiecewisePolynomial:
    """The slice volume as an explicit piecewise polynomial in s.

    Breakpoints are the integers 0..d; the piece on [j, j+1] is

        sum_{i=0}^{j} (-1)^i (s - i)^d / (i! (d - i)!)

    expanded into monomial coefficients.  Evaluation agrees with
    :func:`nu_exact` everywhere (tails included).
    """
    _check_dimension(d)
    pieces = []
    coeffs = [Fraction(0)] * (d + 1)
    for j in range(d):
        # Add the expansion of (-1)^j (s - j)^d / (j! (d - j)!).
        lead = Fraction((-1) ** j, _fact(j) * _fact(d - j))
        for m in range(d + 1):
            coeffs[m] += lead * comb(d, m) * Fraction(-j) ** (d - m)
        pieces.append(Polynomial(coeffs))
    return PiecewisePolynomial(range(d + 1), pieces, 0, 1)


def nu_density(s: Fraction | int | str, d: int) -> Fraction:
    """Exact slope of the slice volume at s (right-hand piece at breakpoints).

    Nonnegative everywhere; constant tails make it 0 left of 0 and from d on.
    """
    return nu_piecewise(d).derivative()(s)
