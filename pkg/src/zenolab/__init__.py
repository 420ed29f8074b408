"""Quantum Zeno experiments on a spin-1/2 with lossy measurement stages."""
from .engine import (
    BranchLedger,
    ZenoRun,
    survival_dominant,
    survival_exact,
    survival_exact_diagonal,
    survival_exact_spinflip,
    survival_first_order,
    survival_ideal,
    survival_oracle,
)
from .errors import ConfigError, DomainError, NumericalConsistencyError, OutOfRegimeError
from .mirrors import DiagonalMirror, IdealMirror, SpinFlipMirror
from .optimizer import (
    LossModel,
    OptimumReport,
    general_n_opt,
    general_p_opt,
    n_opt_estimate,
    n_opt_search,
    optimize,
    p_opt_estimate,
    x_opt_root,
)

__version__ = "0.1.0"
