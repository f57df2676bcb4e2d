"""Hypergeometric building blocks of heat coefficients for kΔ on noncommutative tori.

Numerics for 2F1, Appell/Lauricella functions and the family H_alpha, a
symbol calculus that derives b2, and the spectral functions K and H.
"""

__version__ = "0.1.0"

from .errors import (DerivativeUnavailable, DomainError, MalformedWord, ModHeatError,
                     NoConvergence, PoleAtC, UnsupportedDerivative, UnsupportedJ,
                     UnsupportedXiDegree)
from .special_fn import gauss_2f1, gauss_2f1_euler_integral
from .multivar_hyper import appell_f1, appell_f2, lauricella_fd
from .divided_diff import Func1D, NodeList, divdiff
from .h_family import MultiIndex, h_alpha
from .symbol_calculus import resolvent_b, sphere_integrate
from .spectral import cm_residual, h_delta, k_delta, t_function

__all__ = [
    "__version__", "ModHeatError", "DomainError", "PoleAtC", "NoConvergence",
    "DerivativeUnavailable", "UnsupportedDerivative", "UnsupportedJ", "UnsupportedXiDegree",
    "MalformedWord", "gauss_2f1", "gauss_2f1_euler_integral", "appell_f1", "appell_f2",
    "lauricella_fd", "Func1D", "NodeList", "divdiff", "MultiIndex", "h_alpha",
    "resolvent_b", "sphere_integrate", "cm_residual", "h_delta", "k_delta", "t_function",
]
