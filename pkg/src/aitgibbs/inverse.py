"""Find lambda such that the Gibbs mean length hits a target value.

``L(lam)`` is nondecreasing with ``dL/dlam = Var(l)``, so a bracket plus
bisection always converges; Newton steps using the variance are taken
whenever they land inside the current bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, NoConvergence, TargetOutOfRange
from .gibbs import gibbs_state, stats
from .spectrum import LengthSpectrum


@dataclass(frozen=True)
class SolveConfig:
    tol: float | None = None  # default 1e-10 * l_max
    max_iter: int = 200
    bracket: tuple[float, float] | None = None
    newton: bool = True

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.bracket is not None and not self.bracket[0] < self.bracket[1]:
            raise ValueError("bracket must be ordered (lo < hi)")


def lambda_cap(spectrum: LengthSpectrum) -> float:
    """|lambda| beyond which the extreme entry holds all the mass to double precision."""
    spread = float(np.ptp(spectrum.log_mults)) if spectrum.m > 1 else 0.0
    return (800.0 + spread) / spectrum.min_gap


def _L_var(spectrum: LengthSpectrum, lam: float) -> tuple[float, float]:
    st = stats(gibbs_state(spectrum, lam))
    return st.L, st.var_length


def solve_lambda(spectrum: LengthSpectrum, L_target: float, cfg: SolveConfig | None = None) -> float:
    cfg = cfg or SolveConfig()
    tol = cfg.tol if cfg.tol is not None else 1e-10 * spectrum.l_max
    L_target = float(L_target)

    if spectrum.m == 1:
        if L_target == spectrum.l_min:
            return 0.0
        raise DegenerateSpectrum(f"only length {spectrum.l_min} is present; target {L_target} unreachable")
    if not spectrum.l_min < L_target < spectrum.l_max:
        raise TargetOutOfRange(
            f"target mean length {L_target!r} outside the open range ({spectrum.l_min!r}, {spectrum.l_max!r})"
        )

    def g(lam):
        L, var = _L_var(spectrum, lam)
        return L - L_target, var

    cap = lambda_cap(spectrum)
    if cfg.bracket is not None:
        lo, hi = cfg.bracket
        g_lo, _ = g(lo)
        g_hi, _ = g(hi)
        if g_lo > 0 or g_hi < 0:
            raise ValueError(f"bracket {cfg.bracket} does not contain the target")
    else:
        lo, hi = -1.0, 1.0
        g_lo, _ = g(lo)
        while g_lo > 0 and lo > -cap:
            lo = max(2 * lo, -cap)
            g_lo, _ = g(lo)
        g_hi, _ = g(hi)
        while g_hi < 0 and hi < cap:
            hi = min(2 * hi, cap)
            g_hi, _ = g(hi)
    if abs(g_lo) <= tol:
        return lo
    if abs(g_hi) <= tol:
        return hi

    x = 0.5 * (lo + hi)
    for _ in range(cfg.max_iter):
        gx, var = g(x)
        if abs(gx) <= tol:
            return x
        if gx < 0:
            lo = x
        else:
            hi = x
        step_ok = False
        if cfg.newton and var > 0:
            x_new = x - gx / var
            step_ok = lo < x_new < hi
        x = x_new if step_ok else 0.5 * (lo + hi)
        if not lo < x < hi:
            break
    raise NoConvergence(f"no lambda with |L - {L_target!r}| <= {tol!r} after {cfg.max_iter} iterations")
