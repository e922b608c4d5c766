"""Program-length spectra: ingestion, serialization and generated spectra.

A spectrum is a finite list of ``(length, multiplicity)`` entries sorted by
strictly increasing length. An entry stands for ``multiplicity`` distinct
programs that all have the same length, so duplicate lengths are merged by
summing their multiplicities.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    DivergentSum,
    EmptySpectrum,
    NonPositiveLength,
    NonPositiveMultiplicity,
    ParseError,
    SpectrumOverflow,
)

# largest exponent with 2.0**e finite
_MAX_BINARY_LEN = 1023


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LengthSpectrum:
    """Canonical length spectrum. Build with :meth:`from_entries` to sort/merge."""

    lengths: np.ndarray
    mults: np.ndarray

    def __post_init__(self):
        lengths = _frozen(self.lengths)
        mults = _frozen(self.mults)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "mults", mults)
        if lengths.ndim != 1 or lengths.shape != mults.shape:
            raise ParseError("lengths and multiplicities must be 1-d and aligned")
        if lengths.size == 0:
            raise EmptySpectrum("spectrum has no entries")
        if not np.all(np.isfinite(lengths)) or np.any(lengths <= 0):
            raise NonPositiveLength("lengths must be finite and > 0")
        if not np.all(np.isfinite(mults)) or np.any(mults <= 0):
            raise NonPositiveMultiplicity("multiplicities must be finite and > 0")
        if np.any(np.diff(lengths) <= 0):
            raise ParseError("lengths must be strictly increasing; use from_entries")

    @classmethod
    def from_entries(cls, lengths: Iterable[float], mults: Iterable[float] | None = None) -> "LengthSpectrum":
        lengths = np.asarray(list(lengths), dtype=float)
        if mults is None:
            mults = np.ones_like(lengths)
        else:
            mults = np.asarray(list(mults), dtype=float)
        if lengths.shape != mults.shape:
            raise ParseError("lengths and multiplicities differ in count")
        if lengths.size == 0:
            raise EmptySpectrum("spectrum has no entries")
        # validate before merging so a zero multiplicity is not hidden by a sum
        if not np.all(np.isfinite(lengths)) or np.any(lengths <= 0):
            raise NonPositiveLength("lengths must be finite and > 0")
        if not np.all(np.isfinite(mults)) or np.any(mults <= 0):
            raise NonPositiveMultiplicity("multiplicities must be finite and > 0")
        uniq, inverse = np.unique(lengths, return_inverse=True)
        merged = np.zeros(uniq.size)
        np.add.at(merged, inverse, mults)
        return cls(uniq, merged)

    @property
    def m(self) -> int:
        return int(self.lengths.size)

    @property
    def entries(self) -> list[tuple[float, float]]:
        return [(float(l), float(c)) for l, c in zip(self.lengths, self.mults)]

    @property
    def log_mults(self) -> np.ndarray:
        return np.log(self.mults)

    @property
    def total_mult(self) -> float:
        return float(self.mults.sum())

    @property
    def l_min(self) -> float:
        return float(self.lengths[0])

    @property
    def l_max(self) -> float:
        return float(self.lengths[-1])

    @property
    def min_gap(self) -> float:
        """Smallest spacing between consecutive lengths (inf for one entry)."""
        if self.m < 2:
            return math.inf
        return float(np.diff(self.lengths).min())

    def head(self, n: int) -> "LengthSpectrum":
        return LengthSpectrum(self.lengths[:n], self.mults[:n])

    def shifted(self, c: float) -> "LengthSpectrum":
        return LengthSpectrum(self.lengths + c, self.mults)

    def __eq__(self, other):
        if not isinstance(other, LengthSpectrum):
            return NotImplemented
        return np.array_equal(self.lengths, other.lengths) and np.array_equal(self.mults, other.mults)

    def __repr__(self):
        return f"LengthSpectrum({self.entries!r})"


def _fmt_number(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def dumps(spectrum: LengthSpectrum) -> str:
    """Serialize to the line-oriented text format."""
    return "".join(f"{_fmt_number(l)} {_fmt_number(c)}\n" for l, c in spectrum.entries)


def dumps_json(spectrum: LengthSpectrum) -> str:
    entries = [{"length": l, "mult": c} for l, c in spectrum.entries]
    return json.dumps({"entries": entries}, indent=2) + "\n"


def _parse_float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: not a number: {tok!r}") from None


def _load_text(source: str) -> LengthSpectrum:
    lengths, mults = [], []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected '<length> <multiplicity>', got {raw!r}")
        lengths.append(_parse_float(fields[0], lineno))
        mults.append(_parse_float(fields[1], lineno))
    return LengthSpectrum.from_entries(lengths, mults)


def _load_json(source: str) -> LengthSpectrum:
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise ParseError("structured spectrum needs a top-level 'entries' list")
    lengths, mults = [], []
    for i, rec in enumerate(doc["entries"]):
        try:
            lengths.append(float(rec["length"]))
            mults.append(float(rec["mult"]))
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"entry {i}: expected {{'length': x, 'mult': y}}") from None
    return LengthSpectrum.from_entries(lengths, mults)


def load_spectrum(source: str) -> LengthSpectrum:
    """Parse spectrum text; a leading ``{`` selects the JSON form."""
    stripped = source.lstrip()
    if stripped.startswith("{"):
        return _load_json(stripped)
    return _load_text(source)


def gen_binary_programs(max_len: int) -> LengthSpectrum:
    """All binary strings of length 1..max_len: entries ``(l, 2**l)``."""
    return gen_geometric(max_len, 2.0)


def gen_geometric(max_len: int, growth_base: float) -> LengthSpectrum:
    """Entries ``(l, g**l)`` for l = 1..max_len."""
    if max_len < 1:
        raise EmptySpectrum("max_len must be >= 1")
    if growth_base == 2.0 and max_len > _MAX_BINARY_LEN:
        raise SpectrumOverflow(f"2**{max_len} does not fit a double")
    ell = np.arange(1, max_len + 1, dtype=float)
    with np.errstate(over="ignore"):
        mults = np.power(float(growth_base), ell)
    if not np.all(np.isfinite(mults)):
        raise SpectrumOverflow(f"{growth_base}**{max_len} overflows a double")
    return LengthSpectrum(ell, mults)


@dataclass(frozen=True)
class TailPolicy:
    """Multiplicity of length l grows like ``growth_base**l``; ``epsilon`` is the
    admissible relative truncation error of Z."""

    growth_base: float = 2.0
    epsilon: float = 1e-12

    def __post_init__(self):
        if not self.growth_base > 1:
            raise ValueError("growth_base must be > 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


def _log_ratio(policy: TailPolicy, lam: float) -> float:
    log_g = math.log(policy.growth_base)
    if not lam < -log_g:
        raise DivergentSum(
            f"sum of {policy.growth_base}**l * exp({lam} l) diverges: need lambda < {-log_g!r}"
        )
    return lam + log_g


def _tail_ok(log_x: float, n: int, eps: float) -> bool:
    # tail x^(N+1)/(1-x) < eps * sum_{l=1..N} x^l, in logs
    log_one_minus_x = math.log(-math.expm1(log_x))
    log_tail = (n + 1) * log_x - log_one_minus_x
    log_partial = log_x + math.log(-math.expm1(n * log_x)) - log_one_minus_x
    return log_tail < math.log(eps) + log_partial


def tail_cutoff(policy: TailPolicy, lam: float) -> int:
    """Smallest N whose geometric tail bound is below ``epsilon`` times the
    partial sum through N.

    Raises :class:`DivergentSum` when ``lam >= -ln(growth_base)``.
    """
    log_x = _log_ratio(policy, lam)
    eps = policy.epsilon
    # the bound reduces to x^N < eps/(1+eps); start there and fix rounding
    n = max(1, math.ceil(math.log(eps / (1 + eps)) / log_x))
    while n > 1 and _tail_ok(log_x, n - 1, eps):
        n -= 1
    while not _tail_ok(log_x, n, eps):
        n += 1
    return n


def truncated_spectrum(policy: TailPolicy, lam: float) -> LengthSpectrum:
    """Geometric spectrum cut at :func:`tail_cutoff`; Z is certified to
    relative accuracy ``policy.epsilon``."""
    return gen_geometric(tail_cutoff(policy, lam), policy.growth_base)


def truncated_log_z(policy: TailPolicy, lam: float) -> tuple[int, float]:
    """``(N, ln Z_N)`` for the geometric spectrum cut at :func:`tail_cutoff`.

    Summed in closed form in the log domain, so it also works when ``g**N``
    would overflow a double.
    """
    log_x = _log_ratio(policy, lam)
    n = tail_cutoff(policy, lam)
    # Z_N = x (1 - x^N) / (1 - x)
    log_z = log_x + math.log(-math.expm1(n * log_x)) - math.log(-math.expm1(log_x))
    return n, log_z
