"""High-precision evaluation and large-a asymptotics of Mathieu-Bessel series

    S_nu(a, b) = sum_{n>=1} n^gamma J_nu(n b / a) / (n^2 + a^2)^mu

together with its alternating and Y-Bessel variants.
"""

from .asymptotics import (
    CoeffSet,
    ExpansionReport,
    Regime,
    coeff_set,
    regime_of,
    residue_s1,
    theorem1_series,
    theorem2_series,
    theorem3_expsmall,
)
from .config import Config, load_config
from .errors import (
    ConvergenceError,
    DomainError,
    IntegerNuError,
    MBAsymError,
    ParamsError,
    PoleError,
    PrecisionError,
    RegimeError,
    StripError,
    UnimplementedError,
)
from .mellin import H, Q, leading_term
from .precision import PrecisionCtx, working_precision
from .series import DirectSum, Params, SeriesKind, direct_sum, tail_bound
from .variants import alternating_expansion, y_series_expansion

__version__ = "0.1.0"

__all__ = [
    "CoeffSet",
    "Config",
    "ConvergenceError",
    "DirectSum",
    "DomainError",
    "ExpansionReport",
    "H",
    "IntegerNuError",
    "MBAsymError",
    "Params",
    "ParamsError",
    "PoleError",
    "PrecisionCtx",
    "PrecisionError",
    "Q",
    "Regime",
    "RegimeError",
    "SeriesKind",
    "StripError",
    "UnimplementedError",
    "alternating_expansion",
    "coeff_set",
    "direct_sum",
    "leading_term",
    "load_config",
    "regime_of",
    "residue_s1",
    "tail_bound",
    "theorem1_series",
    "theorem2_series",
    "theorem3_expsmall",
    "working_precision",
    "y_series_expansion",
]
