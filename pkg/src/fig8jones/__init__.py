"""Colored Jones polynomials of the figure-eight knot and their limit
1/Delta(exp a) at t = exp(a/N)."""

__version__ = "0.1.0"

from .laurent import (  # noqa: E402
    ComplexParam,
    DomainError,
    LaurentPolynomial,
    NotInvertibleError,
    PoleError,
    TruncatedSeries,
    lp_add,
    lp_eval,
    lp_mul,
    ts_exp_pow,
    ts_invert,
)
from .jones import (  # noqa: E402
    JonesExact,
    SummandTrace,
    alexander_inverse,
    g_factor,
    habiro_eval,
    habiro_exact,
    jones_numeric,
    jones_trace,
    kashaev_value,
    recursion_residual,
)
from .convergence import (  # noqa: E402
    growth_rate_study,
    limit_study,
    mmr_study,
    region_check,
    shifted_gap_study,
)
