"""Exact computation and certification of integral periodic orbits of polynomial maps."""

__version__ = "0.1.0"

from .bounds import (
    bound_divisor,
    bound_elementary,
    bound_plane,
    bounds_report,
    candidate_periods,
    valuation,
)
from .dynamics import (
    DecideConfig,
    decide_periodic,
    orbit_mod_p,
    orbit_report,
    primitive_period_exact,
)
from .errors import (
    BudgetExceeded,
    DimensionError,
    NotPeriodicError,
    OrbitaError,
    ParseError,
    TheoremViolation,
)
from .parser import parse_map, parse_point, print_map, print_point
from .poly import (
    PolyMap,
    Polynomial,
    eval_map,
    eval_map_mod,
    jacobian_along_orbit,
    jacobian_at,
    reduce_mod,
    translate_conjugate,
)
from .search import FamilySpec, census, enumerate_family, max_order_gl, open_question_report
from .theorem import DecompositionCertificate, decompose
from .zmod import ModMatrix, g_of, is_idempotent, mat_pow, min_d_fixing, verify_lemma
