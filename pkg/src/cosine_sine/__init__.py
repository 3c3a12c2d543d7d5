"""Finite-semigroup laboratory for a sigma-twisted cosine-sine functional equation.

f(x sigma(y)) = f(x) g(y) + g(x) f(y) + h(x) h(y)
"""

__version__ = "0.1.0"

from .fields import Field, FieldError, Scalar, make_field  # noqa: E402
from .semigroup import (  # noqa: E402
    CATALOG_NAMES,
    GROUP_NAMES,
    InvalidSemigroup,
    Involution,
    Semigroup,
    catalog,
    enumerate_involutive_automorphisms,
    validate_involution,
    validate_table,
)
from .functions import Func, multiplicative_functions  # noqa: E402
from .equations import SolutionTriple, residual_main  # noqa: E402
from .families import (  # noqa: E402
    FamilyId,
    ParamSet,
    Unrealizable,
    construct,
    sample_params,
    validate_params,
)
from .classify import Classification, classify  # noqa: E402
from .oracle import brute_force_solutions, completeness_report  # noqa: E402

__all__ = [
    "__version__",
    "Field", "FieldError", "Scalar", "make_field",
    "CATALOG_NAMES", "GROUP_NAMES", "InvalidSemigroup", "Involution", "Semigroup",
    "catalog", "enumerate_involutive_automorphisms", "validate_involution", "validate_table",
    "Func", "multiplicative_functions",
    "SolutionTriple", "residual_main",
    "FamilyId", "ParamSet", "Unrealizable", "construct", "sample_params", "validate_params",
    "Classification", "classify",
    "brute_force_solutions", "completeness_report",
]
