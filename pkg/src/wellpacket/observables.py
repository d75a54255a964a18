"""Expectation values and uncertainties from exact matrix elements.

All moments are assembled in the eigenbasis,

    <O>_t = Sum_mn a_m* a_n <m|O|n> exp(i (E_m - E_n) t / hbar),

with closed-form infinite-square-well matrix elements, so there is no grid
truncation or aliasing error.  Grids serve only as an independent
cross-check (see tests).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .packet import EigenExpansion
from .system import WellSystem

__all__ = [
    "NumericalConsistencyError",
    "MatrixElementTable",
    "TimeSeries",
    "build_matrix_elements",
    "table_for",
    "spec_hash",
    "expectation",
    "expectation_series",
    "uncertainty",
    "uncertainty_series",
    "sample_series",
]

OBSERVABLES = ("x", "x2", "p", "p2")
SERIES_IDS = OBSERVABLES + ("dx", "dp")

# Relative ceiling on the imaginary residue of an assembled real observable;
# anything larger points at a coefficient/table inconsistency.
_IMAG_TOL = 1e-12


class NumericalConsistencyError(RuntimeError):
    """An internally-inconsistent numerical result (not a user error)."""


@dataclass(frozen=True, eq=False)
class MatrixElementTable:
    """Dense <m|O|n> tables for O in {x, x^2, p, p^2} over a level window."""

    n_min: int
    n_max: int
    x: NDArray[np.float64]
    x2: NDArray[np.float64]
    p: NDArray[np.complex128]
    p2: NDArray[np.float64]

    def covers(self, exp: EigenExpansion) -> bool:
        return self.n_min <= exp.n_min and exp.n_max <= self.n_max

    def block(self, which: str, exp: EigenExpansion) -> NDArray:
        """Sub-table aligned with the expansion's window."""
        if which not in OBSERVABLES:
            raise ValueError(f"unknown observable {which!r}")
        if not self.covers(exp):
            raise ValueError(
                f"table window [{self.n_min}, {self.n_max}] does not cover "
                f"expansion window [{exp.n_min}, {exp.n_max}]")
        i = exp.n_min - self.n_min
        j = exp.n_max - self.n_min + 1
        return getattr(self, which)[i:j, i:j]


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Sampled observable values plus bookkeeping metadata."""

    observable: str
    times: NDArray[np.float64]
    values: NDArray[np.float64]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValueError("times and values must be equal-length 1-d arrays")
        if t.size and np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite values in series")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


def build_matrix_elements(n_min: int, n_max: int,
                          sys: WellSystem = WellSystem()) -> MatrixElementTable:
    """Closed-form tables over [n_min, n_max].

    <m|x|n>  = L/2 on the diagonal; for m+n odd
               -(2L/pi^2) [1/(m-n)^2 - 1/(m+n)^2]; zero otherwise.
    <m|x2|n> = L^2 (1/3 - 1/(2 n^2 pi^2)) on the diagonal; off it
               (2L^2/pi^2) (-1)^(m+n) [1/(m-n)^2 - 1/(m+n)^2]  (all m != n).
    <m|p|n>  = -(4 i hbar / L) m n / (m^2 - n^2) for m+n odd; zero otherwise.
    <m|p2|n> = delta_mn (n pi hbar / L)^2.
    """
    if not (1 <= n_min <= n_max):
        raise ValueError("need 1 <= n_min <= n_max")
    L, hbar = sys.width_L, sys.hbar
    ns = np.arange(n_min, n_max + 1)
    M = ns[:, None].astype(float)
    N = ns[None, :].astype(float)
    diff = M - N
    tot = M + N
    off = diff != 0
    odd = (ns[:, None] + ns[None, :]) % 2 == 1

    with np.errstate(divide="ignore", invalid="ignore"):
        bracket = 1.0 / diff**2 - 1.0 / tot**2

    x = np.where(off & odd, -(2.0 * L / np.pi**2) * bracket, 0.0)
    np.fill_diagonal(x, L / 2.0)

    sign = np.where(odd, -1.0, 1.0)  # (-1)^(m+n)
    x2 = np.where(off, (2.0 * L**2 / np.pi**2) * sign * bracket, 0.0)
    np.fill_diagonal(x2, L**2 * (1.0 / 3.0 - 1.0 / (2.0 * ns.astype(float)**2 * np.pi**2)))

    with np.errstate(divide="ignore", invalid="ignore"):
        pval = -4j * hbar / L * M * N / (M**2 - N**2)
    p = np.where(off & odd, pval, 0.0 + 0.0j)

    p2 = np.diag((ns * np.pi * hbar / L) ** 2)

    for arr in (x, x2, p, p2):
        arr.setflags(write=False)
    return MatrixElementTable(n_min=int(n_min), n_max=int(n_max), x=x, x2=x2, p=p, p2=p2)


def table_for(exp: EigenExpansion) -> MatrixElementTable:
    """Convenience: a table exactly covering the expansion's window."""
    return build_matrix_elements(exp.n_min, exp.n_max, exp.sys)


def _assemble(exp: EigenExpansion, table: MatrixElementTable, which: str,
              times: NDArray[np.float64]) -> NDArray[np.float64]:
    Mk = table.block(which, exp)
    U = exp.coefficients[None, :] * np.exp(
        -1j * np.outer(times, exp.energies) / exp.sys.hbar)
    vals = np.sum(U.conj() * (U @ Mk.T), axis=1)
    scale = np.maximum(1.0, np.abs(vals.real))
    worst = float(np.max(np.abs(vals.imag) / scale)) if vals.size else 0.0
    if worst > _IMAG_TOL:
        raise NumericalConsistencyError(
            f"imaginary residue {worst:.3e} on <{which}> exceeds {_IMAG_TOL}")
    return vals.real


def expectation(exp: EigenExpansion, table: MatrixElementTable, which: str,
                t: float) -> float:
    """<which>_t for which in {x, x2, p, p2}."""
    val = float(_assemble(exp, table, which, np.array([float(t)]))[0])
    if which == "x" and not -1e-9 <= val <= exp.sys.width_L + 1e-9:
        raise NumericalConsistencyError(f"<x> = {val} outside the well")
    return val


def expectation_series(exp: EigenExpansion, table: MatrixElementTable, which: str,
                       times) -> NDArray[np.float64]:
    """Vectorized expectation over a time array."""
    return _assemble(exp, table, which, np.asarray(times, dtype=float))


def _variance(exp, table, which: str, times) -> NDArray[np.float64]:
    sq = {"x": "x2", "p": "p2"}
    if which not in sq:
        raise ValueError(f"uncertainty defined for x or p, got {which!r}")
    mean = _assemble(exp, table, which, times)
    second = _assemble(exp, table, sq[which], times)
    var = second - mean**2
    floor = -_IMAG_TOL * np.maximum(1.0, np.abs(second))
    if np.any(var < floor):
        raise NumericalConsistencyError(
            f"negative variance for {which}: min {float(np.min(var)):.3e}")
    return np.maximum(var, 0.0)


def uncertainty(exp: EigenExpansion, table: MatrixElementTable, which: str,
                t: float) -> float:
    """Delta which at time t, sqrt(<O^2> - <O>^2), which in {x, p}."""
    return float(np.sqrt(_variance(exp, table, which, np.array([float(t)]))[0]))


def uncertainty_series(exp: EigenExpansion, table: MatrixElementTable, which: str,
                       times) -> NDArray[np.float64]:
    """Vectorized uncertainty over a time array."""
    return np.sqrt(_variance(exp, table, which, np.asarray(times, dtype=float)))


def spec_hash(exp: EigenExpansion) -> str:
    """Short stable hash of the packet parameters and window, for metadata."""
    s = exp.spec
    key = (exp.sys.mass, exp.sys.hbar, exp.sys.width_L, exp.n_min, exp.n_max,
           None if s is None else (s.n0, s.x0, s.alpha, s.dx0, s.window_sigmas))
    return hashlib.sha256(repr(key).encode()).hexdigest()[:16]


def sample_series(exp: EigenExpansion, table: MatrixElementTable, which: str,
                  schedule) -> TimeSeries:
    """One value per schedule point; which in {x, x2, p, p2, dx, dp}."""
    times = np.asarray(schedule, dtype=float)
    if times.size == 0:
        raise ValueError("empty schedule")
    if which in ("dx", "dp"):
        values = uncertainty_series(exp, table, which[1:], times)
    elif which in OBSERVABLES:
        values = expectation_series(exp, table, which, times)
    else:
        raise ValueError(f"unknown series id {which!r}")
    meta = {
        "packet": spec_hash(exp),
        "window": [exp.n_min, exp.n_max],
    }
    return TimeSeries(observable=which, times=times, values=values, metadata=meta)
