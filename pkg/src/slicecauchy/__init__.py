"""Slice functions, Cauchy formulas and series expansions over real alternative *-algebras."""
from .algebra import (
    Algebra,
    Element,
    ValidationReport,
    associator,
    build_clifford,
    build_complex,
    build_octonions,
    build_quaternions,
    build_sedenions,
    builtin_algebra,
    cayley_dickson_double,
    conjugate,
    dump_algebra,
    estimate_C1,
    load_algebra,
    norm_sq,
    trace,
    validate_alternative,
    validate_involution,
    validate_norm_submultiplicativity,
)
from .cauchy import (
    QuadratureParams,
    cauchy_formula_regular,
    cauchy_kernel,
    cauchy_pompeiu,
    cauchy_pompeiu_terms,
    characteristic_poly,
    contour_integral,
    pointwise_cauchy_formula,
)
from .complexified import ComplexElement, embed, embed_scalar
from .cone import (
    ConeDecomposition,
    decompose,
    in_quadratic_cone,
    invert,
    is_imaginary_unit,
    phi_J,
    psi_J,
    sample_sphere,
)
from .errors import (
    AlgebraError,
    CapabilityError,
    ConeError,
    DomainError,
    ExhaustionError,
    GeometryError,
    PoleError,
    SliceError,
    StemSymmetryError,
)
from .geometry import Contour, PlanarDomain
from .literals import parse_element, parse_polynomial
from .series import (
    ExpansionResult,
    cassini_pseudometric,
    convergence_report,
    eval_truncated_series,
    power_coefficients,
    sigma_metric,
    slice_power,
    spherical_coefficients,
    spherical_poly,
)
from .slices import (
    SliceFunction,
    conjugation,
    constant,
    eval_slice,
    eval_stem,
    half_plane_function,
    is_slice_preserving,
    is_slice_regular,
    polynomial,
    representation_formula,
    slice_derivatives,
    slice_product,
    star_product,
    stem_from_plane_values,
)

__version__ = "0.1.0"
