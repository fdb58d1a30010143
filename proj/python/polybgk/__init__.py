"""Python bindings for the polyatomic BGK solver."""

from ._polybgk import (
    AlphaParams,
    BlowUpError,
    ConfigError,
    ConvergenceError,
    Error,
    InvalidArgument,
    InvalidState,
    MacroState,
    ParseError,
    Primitive,
    Simulation,
    alpha_from_macro,
    compute_k,
    compute_zeta_max,
    exact_riemann,
    gauss_legendre,
    gauss_lobatto,
    rankine_hugoniot,
    run_config,
    squeeze,
    to_conserved,
    to_primitive,
    validate,
    validation_suites,
)

__all__ = [name for name in dir() if not name.startswith("_")]
