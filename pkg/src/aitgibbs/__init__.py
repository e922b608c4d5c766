"""Gibbs ensembles over program-length spectra."""

__version__ = "0.1.0"

from .detkernel import StructuredMatrix, dense_det_oracle, f_poly, structured_det
from .errors import (
    DegenerateSpectrum,
    DivergentSum,
    NoConvergence,
    SpectrumError,
    TargetOutOfRange,
)
from .extremum import (
    HessianReport,
    VerificationReport,
    grad_F,
    grad_F_log,
    hessian_at_gibbs,
    simplex_oracle_max,
    verify_maximum,
)
from .gibbs import (
    EnsembleStats,
    GibbsState,
    TemperatureParam,
    compromise_value,
    entropy,
    gibbs_state,
    mean_length,
    stats,
)
from .inverse import SolveConfig, solve_lambda
from .spectrum import LengthSpectrum, TailPolicy, gen_binary_programs, load_spectrum, tail_cutoff
