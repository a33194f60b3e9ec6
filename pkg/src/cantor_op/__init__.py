"""Orthogonal polynomials, Jacobi coefficients and Widom factors for the
equilibrium measure of the weakly equilibrium Cantor sets K(gamma)."""
from .errors import ConfigError, DomainError, PrecisionExhausted
from .gamma import GammaSpec, Tail, capacity, load_config, parse_inline, q_norm_sq, r_value
from .jacobi import JacobiTable, jacobi_coefficients
from .numeric import LogScalar
from .presets import load_preset
from .widom import widom_dyadic_closed, widom_factors

__all__ = [
    "ConfigError", "DomainError", "PrecisionExhausted", "GammaSpec", "Tail", "capacity",
    "load_config", "parse_inline", "q_norm_sq", "r_value", "JacobiTable", "jacobi_coefficients",
    "LogScalar", "load_preset", "widom_dyadic_closed", "widom_factors",
]
