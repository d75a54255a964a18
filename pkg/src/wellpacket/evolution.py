"""Exact time evolution on position and momentum grids.

Evolution is exact in the eigenbasis: each coefficient picks up the phase
exp(-i E_n t / hbar), and the wavefunction is the coherent sum over the
window.  Grids exist for densities and visualization; moments are computed
from matrix elements in the observables module instead, which avoids grid
truncation bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .packet import EigenExpansion
from .system import WellSystem

__all__ = [
    "SpatialGrid",
    "MomentumGrid",
    "WaveField",
    "position_wavefunction",
    "momentum_wavefunction",
    "probability_density",
    "density_norm",
]


@dataclass(frozen=True, eq=False)
class SpatialGrid:
    """Uniform grid spanning the well, endpoints included."""

    points: NDArray[np.float64]

    @classmethod
    def default(cls, sys: WellSystem = WellSystem(), n_points: int = 4096) -> "SpatialGrid":
        # 4096 points resolve dx0 = 0.05 L with ~200 points and the n0 = 400
        # oscillation with ~10 points per cycle.
        return cls(np.linspace(0.0, sys.width_L, n_points))

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2 or np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)
        pts.setflags(write=False)

    @property
    def spacing(self) -> float:
        return float(self.points[1] - self.points[0])


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """Uniform momentum grid, symmetric about p = 0.

    Built as integer multiples of the spacing so that -p is on the grid
    exactly whenever p is; the p -> -p flip checks rely on that.
    """

    points: NDArray[np.float64]

    @classmethod
    def default(cls, sys: WellSystem = WellSystem(), n0: int = 400,
                span: float = 1.5, spacing: float | None = None) -> "MomentumGrid":
        p0 = n0 * np.pi * sys.hbar / sys.width_L
        if spacing is None:
            spacing = 1.0  # <= dp0/10 for the default packet (dp0 = 10)
        kmax = int(np.ceil(span * p0 / spacing))
        return cls(np.arange(-kmax, kmax + 1) * spacing)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 3 or np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        if not np.array_equal(pts, -pts[::-1]):
            raise ValueError("momentum grid must be symmetric about 0")
        object.__setattr__(self, "points", pts)
        pts.setflags(write=False)

    @property
    def spacing(self) -> float:
        return float(self.points[1] - self.points[0])


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex amplitudes over a grid at a fixed time."""

    grid: SpatialGrid | MomentumGrid
    amplitudes: NDArray[np.complex128]
    time: float

    def __post_init__(self):
        if len(self.amplitudes) != len(self.grid.points):
            raise ValueError("amplitude array does not match grid size")
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("non-finite amplitudes")
        self.amplitudes.setflags(write=False)


def _basis_position(exp: EigenExpansion, x: NDArray) -> NDArray[np.float64]:
    # u_n(x) for every window level; rows index grid points
    L = exp.sys.width_L
    ns = exp.levels
    return np.sqrt(2.0 / L) * np.sin(np.outer(x, ns) * np.pi / L)


def _basis_momentum(exp: EigenExpansion, p: NDArray) -> NDArray[np.complex128]:
    # phi_n(p) columns over the window, closed form with the removable
    # singularity handled as in system.eigenstate_momentum but vectorized
    hbar, L = exp.sys.hbar, exp.sys.width_L
    ns = exp.levels
    pn = ns * np.pi * hbar / L
    norm = np.sqrt(hbar / (np.pi * L))
    P = p[:, None]
    d2 = P**2 - pn[None, :] ** 2
    sign = np.where(ns % 2 == 1, -1.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = norm * pn[None, :] / d2 * (sign[None, :] * np.exp(-1j * P * L / hbar) - 1.0)
    near = np.abs(d2) < 1e-6 * pn[None, :] ** 2
    if np.any(near):
        ii, jj = np.nonzero(near)
        s = np.where(p[ii] >= 0.0, 1.0, -1.0)
        u = (p[ii] - s * pn[jj]) * L / hbar
        z = -1j * u
        series = -1j * (1.0 + z / 2.0 + z**2 / 6.0 + z**3 / 24.0 + z**4 / 120.0)
        out[ii, jj] = norm * (pn[jj] * L / hbar) * series / (p[ii] + s * pn[jj])
    return out


def position_wavefunction(exp: EigenExpansion, grid: SpatialGrid, t: float) -> WaveField:
    """psi(x, t) = Sum a_n u_n(x) exp(-i E_n t / hbar) on the grid."""
    amp = _basis_position(exp, grid.points) @ exp.phases_at(t)
    return WaveField(grid=grid, amplitudes=amp, time=t)


def momentum_wavefunction(exp: EigenExpansion, grid: MomentumGrid, t: float) -> WaveField:
    """phi(p, t) = Sum a_n phi_n(p) exp(-i E_n t / hbar) on the grid."""
    amp = _basis_momentum(exp, grid.points) @ exp.phases_at(t)
    return WaveField(grid=grid, amplitudes=amp, time=t)


def probability_density(field: WaveField) -> NDArray[np.float64]:
    """Pointwise |amplitude|^2."""
    return np.abs(field.amplitudes) ** 2


def density_norm(field: WaveField) -> float:
    """Trapezoid integral of the density over the field's grid."""
    return float(np.trapezoid(probability_density(field), field.grid.points))
