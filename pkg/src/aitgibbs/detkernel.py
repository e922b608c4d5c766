"""Determinant of the matrix with diagonal ``r``, constant ``a`` strictly above
the diagonal and constant ``b`` strictly below it.

With ``f(x) = prod(r_i - x)`` the determinant is ``(a f(b) - b f(a)) / (a - b)``;
its limit as ``b -> a`` is ``f(a) - a f'(a)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# relative |a - b| below which the a == b limit form is used
EQUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class StructuredMatrix:
    r: np.ndarray
    a: float
    b: float

    def __post_init__(self):
        r = np.array(self.r, dtype=float).ravel()
        r.setflags(write=False)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if r.size < 1:
            raise ValueError("structured matrix needs n >= 1")
        if not (np.all(np.isfinite(r)) and np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("structured matrix entries must be finite")

    @property
    def n(self) -> int:
        return int(self.r.size)

    def dense(self) -> np.ndarray:
        n = self.n
        out = np.triu(np.full((n, n), self.a), 1) + np.tril(np.full((n, n), self.b), -1)
        out[np.diag_indices(n)] = self.r
        return out


def f_poly(r, x: float) -> tuple[float, float]:
    """Value and derivative of ``prod(r_i - x)``.

    The derivative uses prefix/suffix products, so it stays exact when some
    ``r_i == x``.
    """
    d = np.asarray(r, dtype=float).ravel() - x
    n = d.size
    prefix = np.ones(n + 1)
    suffix = np.ones(n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] * d[i]
        suffix[n - 1 - i] = suffix[n - i] * d[n - 1 - i]
    value = prefix[n]
    deriv = -sum(prefix[i] * suffix[i + 1] for i in range(n))
    return float(value), float(deriv)


def structured_det(mat: StructuredMatrix) -> float:
    a, b = mat.a, mat.b
    if abs(a - b) > EQUAL_TOL * (abs(a) + abs(b) + 1.0):
        fa, _ = f_poly(mat.r, a)
        fb, _ = f_poly(mat.r, b)
        return (a * fb - b * fa) / (a - b)
    c = 0.5 * (a + b)
    fc, dfc = f_poly(mat.r, c)
    return fc - c * dfc


def natural_scale(mat: StructuredMatrix) -> float:
    """``prod(|r_i| + max(|a|, |b|))``: magnitude the determinant's rounding is measured against."""
    return float(np.prod(np.abs(mat.r) + max(abs(mat.a), abs(mat.b))))


def dense_det_oracle(matrix) -> float:
    """Determinant by Gaussian elimination with partial pivoting."""
    A = np.array(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    n = A.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    if n > 64:
        raise ValueError("oracle is limited to n <= 64")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    sign = 1.0
    det = 1.0
    for k in range(n):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if A[piv, k] == 0.0:
            return 0.0
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            sign = -sign
        det *= A[k, k]
        A[k + 1:, k:] -= np.outer(A[k + 1:, k] / A[k, k], A[k, k:])
    return sign * det
