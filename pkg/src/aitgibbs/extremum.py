"""Certification that the Gibbs weights maximize ``F = lam * L + S``.

Coordinates here are unnormalized positive entry weights ``p``; ``F`` depends
on them only through ``P = p / sum(p)``, so it is constant along rays and the
stationary point ``p_k = m_k exp(lam l_k)`` is unique only up to scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp, xlogy

from .detkernel import StructuredMatrix, natural_scale, structured_det
from .errors import DimensionMismatch, NonPositiveWeight
from .gibbs import compromise_from_weights, gibbs_state
from .spectrum import LengthSpectrum

MIN_WEIGHT = 1e-300
GRAD_TOL_REL = 1e-10
FD_TOL = 1e-6
GAP_TOL = 1e-12
# |det| at or below this fraction of the natural scale is not distinguishable from 0
DET_RESOLUTION = 1e-10
MAX_ORACLE_DIM = 4
_SCALE_MIN, _SCALE_MAX = 1e-280, 1e280


def grad_F_log(log_p, spectrum: LengthSpectrum, lam: float) -> np.ndarray:
    """Gradient of F with respect to ``p``, given ``log p``.

    Component j is ``(u_j - sum_k P_k u_k) / Z`` with
    ``u_j = lam l_j - ln(p_j / m_j)``; for unit multiplicities this is the
    familiar ``lam (l_j/Z - sum l p / Z^2) - ln p_j / Z + sum p ln p / Z^2``.
    """
    log_p = np.asarray(log_p, dtype=float)
    if log_p.shape != (spectrum.m,):
        raise DimensionMismatch(f"weights have shape {log_p.shape}, spectrum has {spectrum.m} entries")
    log_z = logsumexp(log_p)
    P = np.exp(log_p - log_z)
    u = lam * spectrum.lengths + spectrum.log_mults - log_p
    return (u - np.dot(P, u)) * math.exp(-log_z)


def grad_F(p, spectrum: LengthSpectrum, lam: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (spectrum.m,):
        raise DimensionMismatch(f"weights have shape {p.shape}, spectrum has {spectrum.m} entries")
    if not np.all(np.isfinite(p)) or np.any(p < MIN_WEIGHT):
        raise NonPositiveWeight(f"weights must be finite and >= {MIN_WEIGHT}")
    return grad_F_log(np.log(p), spectrum, lam)


def fd_gradient(p, spectrum: LengthSpectrum, lam: float, step: float = 1e-6) -> np.ndarray:
    """Central differences of F, step ``step * (1 + |p_j|)`` per coordinate."""
    p = np.asarray(p, dtype=float)
    out = np.empty_like(p)
    for j in range(p.size):
        h = step * (1.0 + abs(p[j]))
        up = p.copy()
        dn = p.copy()
        up[j] += h
        dn[j] -= h
        out[j] = (compromise_from_weights(up, spectrum, lam) - compromise_from_weights(dn, spectrum, lam)) / (2 * h)
    return out


@dataclass(frozen=True, eq=False)
class HessianReport:
    """Hessian of F at ``p_k = m_k exp(lam l_k)`` restricted to the first n coordinates.

    ``Z`` and ``Zk`` sum over the full spectrum. ``det`` comes from the
    structured kernel; ``closed_form_det`` from the tail-mass form
    ``(-Z)^-n (1 - sum_{k<=n} p_k / Z) / prod_{k<=n} p_k`` evaluated in logs.
    Float fields can under/overflow for extreme ``lam * l``; ``log_abs_det``,
    ``log_tail_mass`` and ``sign`` cannot. ``sign`` is read from the kernel
    determinant when it stands clear of rounding, otherwise from the closed form.
    """

    n: int
    p: np.ndarray
    diag: np.ndarray
    offdiag: float
    Z: float
    Zk: np.ndarray
    det: float
    closed_form_det: float
    log_abs_det: float
    tail_mass: float
    log_tail_mass: float
    scale: float
    kernel_resolved: bool
    sign: int

    @property
    def expected_sign(self) -> int:
        return (-1) ** self.n

    @property
    def degenerate(self) -> bool:
        return self.log_tail_mass == -math.inf

    @property
    def rel_diff(self) -> float:
        if self.closed_form_det == 0.0:
            return math.inf if self.det != 0.0 else 0.0
        return abs(self.det - self.closed_form_det) / abs(self.closed_form_det)


def hessian_at_gibbs(spectrum: LengthSpectrum, lam: float, n: int) -> HessianReport:
    if not 1 <= n <= spectrum.m:
        raise ValueError(f"need 1 <= n <= {spectrum.m}, got {n}")
    state = gibbs_state(spectrum, lam)
    lw = state.log_weights
    log_z = state.logZ
    log_zk = np.array([logsumexp(np.delete(lw, k)) if spectrum.m > 1 else -math.inf for k in range(n)])
    with np.errstate(over="ignore", under="ignore"):
        diag = -np.exp(log_zk - lw[:n] - 2 * log_z)
        offdiag = math.exp(-2 * log_z) if -2 * log_z < 709 else math.inf
        p = np.exp(lw)
        zk = np.exp(log_zk)
    z = math.exp(log_z) if log_z < 709 else math.inf

    log_tail = float(logsumexp(lw[n:]) - log_z) if n < spectrum.m else -math.inf
    tail = math.exp(log_tail)
    log_abs = -n * log_z - float(lw[:n].sum()) + log_tail
    closed_sign = (-1) ** n if n < spectrum.m else 0
    if closed_sign == 0:
        closed = 0.0
    else:
        closed = closed_sign * (math.exp(log_abs) if log_abs < 709 else math.inf)

    det, scale = math.nan, math.nan
    if np.all(np.isfinite(diag)) and math.isfinite(offdiag):
        mat = StructuredMatrix(diag, offdiag, offdiag)
        with np.errstate(all="ignore"):
            det = structured_det(mat)
            scale = natural_scale(mat)
    # outside this window the float kernel has over/underflowed somewhere
    in_range = math.isfinite(det) and _SCALE_MIN < scale < _SCALE_MAX
    resolved = bool(in_range and abs(det) > DET_RESOLUTION * scale)
    sign = int(np.sign(det)) if resolved else closed_sign
    return HessianReport(
        n=n, p=p, diag=diag, offdiag=offdiag, Z=z, Zk=zk, det=det,
        closed_form_det=closed, log_abs_det=log_abs, tail_mass=tail, log_tail_mass=log_tail,
        scale=scale, kernel_resolved=resolved, sign=sign,
    )


def sample_simplex(rng: np.random.Generator, m: int, size: int) -> np.ndarray:
    """Uniform points on the probability simplex (normalized exponential spacings)."""
    e = rng.exponential(size=(size, m))
    return e / e.sum(axis=1, keepdims=True)


def _compromise_rows(P: np.ndarray, spectrum: LengthSpectrum, lam: float) -> np.ndarray:
    return lam * (P @ spectrum.lengths) - xlogy(P, P).sum(axis=1) + P @ spectrum.log_mults


def _compositions(total: int, parts: int) -> np.ndarray:
    if parts == 1:
        return np.array([[total]])
    blocks = []
    for first in range(total + 1):
        rest = _compositions(total - first, parts - 1)
        blocks.append(np.column_stack([np.full(len(rest), first), rest]))
    return np.vstack(blocks)


def simplex_oracle_max(spectrum: LengthSpectrum, lam: float, grid: int) -> tuple[float, np.ndarray]:
    """Brute-force max of F over the lattice ``{i / grid}`` on the simplex."""
    m = spectrum.m
    if m > MAX_ORACLE_DIM:
        raise ValueError(f"grid oracle supports at most {MAX_ORACLE_DIM} entries, got {m}")
    if grid < 1:
        raise ValueError("grid must be >= 1")
    best_f, best_p = -math.inf, None
    if m == 1:
        return float(_compromise_rows(np.ones((1, 1)), spectrum, lam)[0]), np.ones(1)
    # slice on the first coordinate to bound memory at m = 4
    for first in range(grid + 1):
        rest = _compositions(grid - first, m - 1)
        P = np.column_stack([np.full(len(rest), first), rest]) / grid
        F = _compromise_rows(P, spectrum, lam)
        i = int(np.argmax(F))
        if F[i] > best_f:
            best_f, best_p = float(F[i]), P[i]
    return best_f, best_p


@dataclass
class VerificationReport:
    lam: float
    logZ: float
    grad_at_gibbs: float
    grad_tol: float
    fd_max_dev: float
    fd_tol: float
    hessians: list[HessianReport] = field(default_factory=list)
    simplex_max_gap: float = -math.inf
    simplex_tol: float = GAP_TOL
    samples: int = 0

    @property
    def grad_ok(self) -> bool:
        return self.grad_at_gibbs <= self.grad_tol

    @property
    def fd_ok(self) -> bool:
        return self.fd_max_dev <= self.fd_tol

    @property
    def signs_ok(self) -> bool:
        return all(h.sign == h.expected_sign for h in self.hessians)

    @property
    def simplex_ok(self) -> bool:
        return self.simplex_max_gap <= self.simplex_tol

    @property
    def passed(self) -> bool:
        return self.grad_ok and self.fd_ok and self.signs_ok and self.simplex_ok


def verify_maximum(
    spectrum: LengthSpectrum,
    lam: float,
    fd_step: float = 1e-6,
    samples: int = 10_000,
    seed: int = 0,
    fd_points: int = 10,
) -> VerificationReport:
    """Run the four maximality checks at ``lam``.

    (a) gradient at the normalized Gibbs point, (b) analytic vs central
    finite-difference gradient at random positive points, (c) Hessian sign
    ``(-1)^n`` for n = 1..m-1, (d) ``F(Q) - logZ`` over uniform simplex samples.
    """
    if not 0 < fd_step <= 1e-2:
        raise ValueError("fd_step must lie in (0, 1e-2]")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    state = gibbs_state(spectrum, lam)

    grad0 = grad_F_log(state.log_probabilities, spectrum, lam)
    grad_tol = GRAD_TOL_REL * (1.0 + abs(lam) * spectrum.l_max)

    fd_dev = 0.0
    for _ in range(fd_points):
        p = rng.uniform(0.1, 10.0, size=spectrum.m)
        fd_dev = max(fd_dev, float(np.max(np.abs(grad_F(p, spectrum, lam) - fd_gradient(p, spectrum, lam, fd_step)))))

    hessians = [hessian_at_gibbs(spectrum, lam, n) for n in range(1, spectrum.m)]

    gap = -math.inf
    chunk = 4096
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        Q = sample_simplex(rng, spectrum.m, k)
        gap = max(gap, float(np.max(_compromise_rows(Q, spectrum, lam))) - state.logZ)
        done += k

    return VerificationReport(
        lam=lam, logZ=state.logZ,
        grad_at_gibbs=float(np.max(np.abs(grad0))), grad_tol=grad_tol,
        fd_max_dev=fd_dev, fd_tol=FD_TOL,
        hessians=hessians, simplex_max_gap=gap, samples=samples,
    )
