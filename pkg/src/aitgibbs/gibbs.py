"""Gibbs weights, partition function and ensemble statistics.

Weights are kept in the log domain: an entry ``(l, m)`` has log-weight
``lam * l + ln m``, i.e. ``m`` programs each weighted ``exp(lam * l)``.
Entropies are in nats and count individual programs, so an entry with
multiplicity ``m`` and probability ``q`` contributes ``-q (ln q - ln m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, xlogy

from .errors import DimensionMismatch, NotOnSimplex
from .spectrum import LengthSpectrum

SIMPLEX_TOL = 1e-9
LN2 = math.log(2.0)


@dataclass(frozen=True)
class TemperatureParam:
    """Inverse-temperature parameter ``lam = -beta``.

    With ``base2`` set, temperature is read in base-2 units so that program
    weights are ``2**(-l / T)``; ``kconst`` is then unused.
    """

    lam: float
    kconst: float = 1.0
    base2: bool = False

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ValueError("lambda must be finite")
        if not (self.kconst > 0 and math.isfinite(self.kconst)):
            raise ValueError("kconst must be a positive finite number")

    @classmethod
    def from_temperature(cls, temperature: float, kconst: float = 1.0, base2: bool = False) -> "TemperatureParam":
        if temperature == 0 or not math.isfinite(temperature):
            raise ValueError("temperature must be finite and nonzero")
        if base2:
            return cls(-LN2 / temperature, kconst, True)
        return cls(-1.0 / (kconst * temperature), kconst, False)

    @property
    def beta(self) -> float:
        return -self.lam

    @property
    def temperature(self) -> float:
        """T for this lambda; ``inf`` at ``beta == 0``."""
        if self.lam == 0:
            return math.inf
        if self.base2:
            return LN2 / self.beta
        return 1.0 / (self.kconst * self.beta)


@dataclass(frozen=True, eq=False)
class GibbsState:
    spectrum: LengthSpectrum
    lam: float
    log_weights: np.ndarray
    logZ: float
    probabilities: np.ndarray

    @property
    def Z(self) -> float:
        return math.exp(self.logZ)

    @property
    def weights(self) -> np.ndarray:
        """Unnormalized entry weights ``m_k exp(lam l_k)`` (may under/overflow)."""
        return np.exp(self.log_weights)

    @property
    def log_probabilities(self) -> np.ndarray:
        return self.log_weights - self.logZ


@dataclass(frozen=True)
class EnsembleStats:
    L: float
    S: float
    F: float
    logZ: float
    var_length: float

    @property
    def S_bits(self) -> float:
        return self.S / LN2


def gibbs_state(spectrum: LengthSpectrum, lam: float) -> GibbsState:
    lam = float(lam)
    if not math.isfinite(lam):
        raise ValueError("lambda must be finite")
    log_w = lam * spectrum.lengths + spectrum.log_mults
    log_z = float(logsumexp(log_w))
    probs = np.exp(log_w - log_z)
    return GibbsState(spectrum, lam, log_w, log_z, probs)


def mean_length(state: GibbsState) -> float:
    spec = state.spectrum
    L = float(np.dot(state.probabilities, spec.lengths))
    # sum(P) = 1 only to rounding; keep L inside the length range
    return min(max(L, spec.l_min), spec.l_max)


def entropy(state: GibbsState) -> float:
    # -sum q (ln q - ln m) with ln q taken from the log weights, never log(0)
    log_per_program = state.log_probabilities - state.spectrum.log_mults
    return float(-np.dot(state.probabilities, log_per_program))


def _checked_simplex(P, m: int) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.shape != (m,):
        raise DimensionMismatch(f"distribution has shape {P.shape}, spectrum has {m} entries")
    if not np.all(np.isfinite(P)) or np.any(P < 0):
        raise NotOnSimplex("distribution entries must be finite and >= 0")
    total = P.sum()
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise NotOnSimplex(f"distribution sums to {total!r}, not 1")
    return P / total


def compromise_value(P, spectrum: LengthSpectrum, lam: float) -> float:
    """``F = lam * L + S`` for an arbitrary entry distribution ``P``."""
    P = _checked_simplex(P, spectrum.m)
    L = np.dot(P, spectrum.lengths)
    S = -np.sum(xlogy(P, P)) + np.dot(P, spectrum.log_mults)
    return float(lam * L + S)


def compromise_from_weights(p, spectrum: LengthSpectrum, lam: float) -> float:
    """F at unnormalized positive weights; invariant under ``p -> c p``."""
    p = np.asarray(p, dtype=float)
    if p.shape != (spectrum.m,):
        raise DimensionMismatch(f"weights have shape {p.shape}, spectrum has {spectrum.m} entries")
    if np.any(p < 0) or not np.all(np.isfinite(p)) or p.sum() <= 0:
        raise NotOnSimplex("weights must be finite, nonnegative and not all zero")
    return compromise_value(p / p.sum(), spectrum, lam)


def stats(state: GibbsState) -> EnsembleStats:
    L = mean_length(state)
    S = entropy(state)
    dev = state.spectrum.lengths - L
    var = float(np.dot(state.probabilities, dev * dev))
    return EnsembleStats(L=L, S=S, F=state.lam * L + S, logZ=state.logZ, var_length=var)
