"""Deterministic grid search with local refinement, on a float fast path.

The optimizer scans a rectangular (s, t) grid, then repeatedly shrinks a box
around the incumbent by a fixed factor and rescans.  Grid coordinates are
exact rationals end to end (floats are derived from them, never the other
way around), so the best point found can be certified afterwards with exact
arithmetic at exactly the coordinates the search visited.

Ties are broken by value (descending), then s, then t (ascending), making
the result deterministic and independent of the degree of parallelism.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isfinite
from typing import Protocol, Sequence

import numpy as np

from .volume import _fact, to_rational

__all__ = [
    "SearchParams",
    "Candidate",
    "rationalize",
    "nu_vector",
    "optimize_bound",
]


def rationalize(x: float | int, max_denominator: int = 10**6) -> Fraction:
    """Best rational approximation to ``x`` with denominator <= max_denominator.

    Continued-fraction based (via Fraction.limit_denominator), so the result
    is the true closest fraction under the denominator cap; printed decimals
    like 0.779643 come back exactly as 779643/1000000 reduced.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    if isinstance(x, float) and not isfinite(x):
        raise ValueError(f"cannot rationalize non-finite value {x!r}")
    return Fraction(x).limit_denominator(max_denominator)


def nu_vector(x: np.ndarray, d: int) -> np.ndarray:
    """Vectorized float slice volume, same reflection scheme as nu_float."""
    x = np.asarray(x, dtype=float)
    clamped = np.clip(x, 0.0, float(d))
    refl = np.minimum(clamped, d - clamped)
    acc = np.zeros_like(refl)
    for j in range(d // 2 + 1):
        w = np.maximum(refl - j, 0.0)
        acc += ((-1) ** j / (_fact(j) * _fact(d - j))) * w**d
    return np.where(2.0 * clamped > d, 1.0 - acc, acc)


class Objective(Protocol):
    """What the optimizer needs from a bound expression."""

    @property
    def dimension(self) -> int: ...

    def exact(self, s: Fraction, t: Fraction) -> Fraction: ...

    def vector(self, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Values on the grid s[:, None] x t[None, :], shape (len(s), len(t))."""
        ...

    def descriptor(self) -> dict: ...


@dataclass(frozen=True)
class SearchParams:
    """Grid-search configuration.

    ``s_range=None`` means [0, d+1] for the objective's dimension d.  All
    range endpoints are exact rationals; every grid node is snapped to a
    denominator of at most ``max_denominator`` so float and exact views of
    a node agree to within one part in 2^52.
    """

    s_range: tuple[Fraction, Fraction] | None = None
    t_range: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    grid: tuple[int, int] = (200, 100)
    refine_rounds: int = 3
    shrink_factor: int = 5
    max_denominator: int = 10**6

    def __post_init__(self):
        if self.s_range is not None:
            lo, hi = (to_rational(v) for v in self.s_range)
            if lo > hi:
                raise ValueError("empty s range")
            object.__setattr__(self, "s_range", (lo, hi))
        lo, hi = (to_rational(v) for v in self.t_range)
        if lo > hi:
            raise ValueError("empty t range")
        object.__setattr__(self, "t_range", (lo, hi))
        ns, nt = self.grid
        if ns < 2 or nt < 2:
            raise ValueError("grid counts must be >= 2")
        if self.refine_rounds < 0 or self.shrink_factor < 2:
            raise ValueError("refine_rounds must be >= 0 and shrink_factor >= 2")
        if self.max_denominator < 1:
            raise ValueError("max_denominator must be >= 1")

    def resolved_s_range(self, dimension: int) -> tuple[Fraction, Fraction]:
        if self.s_range is not None:
            return self.s_range
        return (Fraction(0), Fraction(dimension + 1))


@dataclass(frozen=True)
class Candidate:
    """Best grid point found: float view plus the exact coordinates behind it."""

    s: float
    t: float
    value: float
    s_exact: Fraction
    t_exact: Fraction


def _axis(lo: Fraction, hi: Fraction, n: int, max_den: int) -> list[Fraction]:
    if lo == hi:
        return [lo] * n
    step = (hi - lo) / (n - 1)
    return [(lo + i * step).limit_denominator(max_den) for i in range(n)]


def _scan(
    objective: Objective,
    s_nodes: Sequence[Fraction],
    t_nodes: Sequence[Fraction],
    workers: int,
) -> tuple[float, Fraction, Fraction]:
    s_arr = np.array([float(v) for v in s_nodes])
    t_arr = np.array([float(v) for v in t_nodes])

    def chunk_best(i0: int, i1: int) -> tuple[float, int, int]:
        vals = objective.vector(s_arr[i0:i1], t_arr)
        flat = int(np.argmax(vals))
        i, j = divmod(flat, vals.shape[1])
        return float(vals[i, j]), i0 + i, j

    if workers <= 1 or len(s_nodes) < 2 * workers:
        results = [chunk_best(0, len(s_nodes))]
    else:
        bounds = np.linspace(0, len(s_nodes), workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(chunk_best, int(a), int(b))
                for a, b in zip(bounds, bounds[1:])
                if a < b
            ]
            results = [f.result() for f in futures]

    # Deterministic reduction: value desc, then s asc, then t asc (exact keys).
    best_value, best_i, best_j = results[0]
    for value, i, j in results[1:]:
        if value > best_value or (
            value == best_value
            and (s_nodes[i], t_nodes[j]) < (s_nodes[best_i], t_nodes[best_j])
        ):
            best_value, best_i, best_j = value, i, j
    return best_value, s_nodes[best_i], t_nodes[best_j]


def optimize_bound(
    objective: Objective,
    params: SearchParams | None = None,
    workers: int = 1,
) -> Candidate:
    """Grid-scan ``objective`` and refine around the incumbent.

    Each refinement round rescans a box 1/shrink_factor the size of the
    previous one, centered at the incumbent and clipped to the original
    ranges.  Returns the best point over all rounds.
    """
    params = params or SearchParams()
    s_lo, s_hi = params.resolved_s_range(objective.dimension)
    t_lo, t_hi = params.t_range
    ns, nt = params.grid

    best: tuple[float, Fraction, Fraction] | None = None
    box = (s_lo, s_hi, t_lo, t_hi)
    s_width, t_width = s_hi - s_lo, t_hi - t_lo
    for round_no in range(params.refine_rounds + 1):
        s_nodes = _axis(box[0], box[1], ns, params.max_denominator)
        t_nodes = _axis(box[2], box[3], nt, params.max_denominator)
        value, s_best, t_best = _scan(objective, s_nodes, t_nodes, workers)
        if (
            best is None
            or value > best[0]
            or (value == best[0] and (s_best, t_best) < (best[1], best[2]))
        ):
            best = (value, s_best, t_best)
        s_width /= params.shrink_factor
        t_width /= params.shrink_factor
        box = (
            max(s_lo, best[1] - s_width / 2),
            min(s_hi, best[1] + s_width / 2),
            max(t_lo, best[2] - t_width / 2),
            min(t_hi, best[2] + t_width / 2),
        )

    value, s_best, t_best = best
    return Candidate(
        s=float(s_best), t=float(t_best), value=value, s_exact=s_best, t_exact=t_best
    )
