"""Quasi-Gaussian wave packets expanded over the well eigenbasis.

A packet is specified by its central level n0, launch point x0 and either
the width parameter alpha or the initial spatial spread dx0 (alpha =
dx0*sqrt(2)/hbar).  Coefficients carry the phase exp(-i p_n x0 / hbar) so
the packet starts at x0 moving toward the right wall with mean momentum
+p0 = n0 pi hbar / L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .system import WellSystem, eigenenergy

__all__ = ["PacketSpec", "EigenExpansion", "build_gaussian_packet", "initial_moments"]

# Raw Gaussian weight that may be discarded by clipping the window at n = 1
# before the construction is flagged.
_TRUNCATION_WARN_WEIGHT = 1e-8


@dataclass(frozen=True)
class PacketSpec:
    """Parameters of the quasi-Gaussian packet.

    Exactly one of ``alpha`` / ``dx0`` must be given; the other is derived
    through dx0 = alpha*hbar/sqrt(2) (minimum-uncertainty pair, so
    dx0 * dp0 = hbar/2).
    """

    n0: int
    x0: float
    alpha: float | None = None
    dx0: float | None = None
    window_sigmas: float = 8.0

    def __post_init__(self):
        if (self.alpha is None) == (self.dx0 is None):
            raise ValueError("provide exactly one of alpha / dx0")
        if int(self.n0) != self.n0 or self.n0 < 1:
            raise ValueError("n0 must be a positive integer")
        if self.window_sigmas <= 0:
            raise ValueError("window_sigmas must be positive")

    def validate_for(self, sys: WellSystem):
        if not 0.0 < self.x0 < sys.width_L:
            raise ValueError(f"x0 must lie inside (0, {sys.width_L})")

    def alpha_value(self, sys: WellSystem) -> float:
        if self.alpha is not None:
            return self.alpha
        return self.dx0 * math.sqrt(2.0) / sys.hbar

    def dx0_value(self, sys: WellSystem) -> float:
        if self.dx0 is not None:
            return self.dx0
        return self.alpha * sys.hbar / math.sqrt(2.0)

    def dn_value(self, sys: WellSystem) -> float:
        """Std deviation of the |a_n|^2 distribution over the level index.

        dn = dp * L / (pi hbar) with dp = 1/(alpha sqrt(2)); this is the
        width entering the collapse time T_C = T/(2 pi dn^2).
        """
        dp = 1.0 / (self.alpha_value(sys) * math.sqrt(2.0))
        return dp * sys.width_L / (math.pi * sys.hbar)


@dataclass(frozen=True, eq=False)
class EigenExpansion:
    """State as coefficients a_n over a contiguous level window.

    coefficients[i] belongs to level n_min + i and energies[i] matches
    eigenenergy(n_min + i).  Sum |a_n|^2 = 1 after construction.
    """

    n_min: int
    coefficients: NDArray[np.complex128]
    energies: NDArray[np.float64]
    sys: WellSystem
    truncated_at_floor: bool = False
    spec: PacketSpec | None = None

    def __post_init__(self):
        if len(self.coefficients) != len(self.energies):
            raise ValueError("coefficients and energies must have equal length")
        self.coefficients.setflags(write=False)
        self.energies.setflags(write=False)

    @property
    def n_max(self) -> int:
        return self.n_min + len(self.coefficients) - 1

    @property
    def levels(self) -> NDArray[np.int64]:
        return np.arange(self.n_min, self.n_max + 1)

    @property
    def weights(self) -> NDArray[np.float64]:
        """|a_n|^2 over the window."""
        return np.abs(self.coefficients) ** 2

    def phases_at(self, t: float) -> NDArray[np.complex128]:
        """Coefficients evolved to time t: a_n exp(-i E_n t / hbar)."""
        return self.coefficients * np.exp(-1j * self.energies * t / self.sys.hbar)


def build_gaussian_packet(spec: PacketSpec, sys: WellSystem = WellSystem()) -> EigenExpansion:
    """Construct the packet's eigenbasis expansion.

    Coefficients on the window [n0 - W*dn, n0 + W*dn] (clipped to n >= 1):

        a_n = sqrt(alpha hbar sqrt(pi) / L)
              * exp(-alpha^2 (p_n - p0)^2 / 2) * exp(-i p_n x0 / hbar)

    then rescaled so Sum |a_n|^2 is exactly 1.  If clipping at n = 1 discards
    more than 1e-8 of raw weight, the result carries truncated_at_floor=True.
    """
    spec.validate_for(sys)
    alpha = spec.alpha_value(sys)
    hbar, L = sys.hbar, sys.width_L
    dn = spec.dn_value(sys)
    lo = spec.n0 - spec.window_sigmas * dn
    n_min = max(1, math.ceil(lo))
    n_max = math.floor(spec.n0 + spec.window_sigmas * dn)
    if n_max < n_min:
        raise ValueError("truncation window is empty; increase window_sigmas")

    ns = np.arange(n_min, n_max + 1)
    pn = ns * math.pi * hbar / L
    p0 = spec.n0 * math.pi * hbar / L
    amp = math.sqrt(alpha * hbar * math.sqrt(math.pi) / L)
    raw = amp * np.exp(-0.5 * alpha**2 * (pn - p0) ** 2) * np.exp(-1j * pn * spec.x0 / hbar)

    truncated = False
    if lo < 1.0:
        # weight the clip would have kept had levels below 1 existed
        k = np.arange(math.floor(lo), 1)
        lost = float(np.sum(amp**2 * np.exp(-(alpha * math.pi * hbar / L) ** 2
                                            * (k - spec.n0) ** 2)))
        truncated = lost > _TRUNCATION_WARN_WEIGHT

    coeff = raw / math.sqrt(float(np.sum(np.abs(raw) ** 2)))
    energies = np.array([eigenenergy(int(n), sys) for n in ns], dtype=float)
    return EigenExpansion(n_min=n_min, coefficients=coeff, energies=energies,
                          sys=sys, truncated_at_floor=truncated, spec=spec)


def initial_moments(spec: PacketSpec, sys: WellSystem = WellSystem()) -> tuple[float, float]:
    """Analytic t=0 spreads (dx0, dp0) = (alpha hbar / sqrt2, 1/(alpha sqrt2))."""
    alpha = spec.alpha_value(sys)
    return alpha * sys.hbar / math.sqrt(2.0), 1.0 / (alpha * math.sqrt(2.0))
