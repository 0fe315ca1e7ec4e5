"""hkcert: certified lower bounds for Hilbert-Kunz multiplicities.

Exact hypercube-slice volumes, the parametric bound families built on them,
a deterministic float-path search, exact rational certification of strict
inequalities, and the dimension-by-dimension proof pipeline.
"""

from .bounds import (
    BoundSpec,
    ConstantObjective,
    EvalPoint,
    GeneralBoundObjective,
    HBoundObjective,
    LinearInEError,
    MuSmallObjective,
    NoRootsObjective,
    e_max,
    general_bound,
    h_bound,
    mu_small_bound,
    noroots_bound,
    not_normal_bound,
    phi_envelope,
    quadratic_in_e,
    range_min,
    s_bound,
)
from .certify import (
    CaseEntry,
    Certificate,
    CoverageInterval,
    CoveragePlan,
    GapEntry,
    ProofReport,
    certify_point,
    cover_range,
    objective_from_descriptor,
    prove_dimension,
    reverify_certificate,
)
from .report import (
    ReportDocument,
    ScalarResult,
    SeriesResult,
    SurfaceGrid,
    TableResult,
    surface_csv,
    surface_grid,
    surface_svg,
)
from .search import Candidate, SearchParams, nu_vector, optimize_bound, rationalize
from .targets import (
    QuadricIdentityReport,
    TargetValue,
    ehk_quadric_dim7,
    large_e_threshold,
    m_coeffs,
    verify_quadric_identities,
    wy_target,
    zigzag_numbers,
)
from .volume import (
    PiecewisePolynomial,
    Polynomial,
    nu_density,
    nu_exact,
    nu_float,
    nu_piecewise,
    to_rational,
)

__version__ = "0.1.0"

__all__ = [
    "BoundSpec",
    "CaseEntry",
    "Candidate",
    "Certificate",
    "ConstantObjective",
    "CoverageInterval",
    "CoveragePlan",
    "EvalPoint",
    "GapEntry",
    "GeneralBoundObjective",
    "HBoundObjective",
    "LinearInEError",
    "MuSmallObjective",
    "NoRootsObjective",
    "PiecewisePolynomial",
    "Polynomial",
    "ProofReport",
    "QuadricIdentityReport",
    "ReportDocument",
    "ScalarResult",
    "SearchParams",
    "SeriesResult",
    "SurfaceGrid",
    "TableResult",
    "TargetValue",
    "certify_point",
    "cover_range",
    "e_max",
    "ehk_quadric_dim7",
    "general_bound",
    "h_bound",
    "large_e_threshold",
    "m_coeffs",
    "mu_small_bound",
    "noroots_bound",
    "not_normal_bound",
    "nu_density",
    "nu_exact",
    "nu_float",
    "nu_piecewise",
    "nu_vector",
    "objective_from_descriptor",
    "optimize_bound",
    "phi_envelope",
    "prove_dimension",
    "quadratic_in_e",
    "range_min",
    "rationalize",
    "reverify_certificate",
    "s_bound",
    "surface_csv",
    "surface_grid",
    "surface_svg",
    "to_rational",
    "verify_quadric_identities",
    "wy_target",
    "zigzag_numbers",
]
