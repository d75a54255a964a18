"""Infinite square well: units, eigenbasis, classical reference motion.

The well occupies 0 <= x <= L with infinite walls.  Everything downstream
(packets, evolution, observables) is built on the eigenbasis defined here.
Default units follow 2m = hbar = L = 1, i.e. m = 1/2, hbar = 1, L = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "WellSystem",
    "ClassicalState",
    "eigenenergy",
    "eigenstate_position",
    "eigenstate_momentum",
    "level_momentum",
    "classical_trajectory",
]


@dataclass(frozen=True)
class WellSystem:
    """Physical constants of the well (natural units by default)."""

    mass: float = 0.5
    hbar: float = 1.0
    width_L: float = 1.0

    def __post_init__(self):
        if self.mass <= 0 or self.hbar <= 0 or self.width_L <= 0:
            raise ValueError("mass, hbar and width_L must all be positive")


@dataclass(frozen=True)
class ClassicalState:
    """Bouncing point particle: position in [0, L] and signed velocity."""

    position: float
    velocity: float


def _check_level(n) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"level index must be a positive integer, got {n!r}")
    return int(n)


def eigenenergy(n, sys: WellSystem = WellSystem()) -> float:
    """E_n = n^2 hbar^2 pi^2 / (2 m L^2), n = 1, 2, ..."""
    n = _check_level(n)
    return (n * math.pi * sys.hbar / sys.width_L) ** 2 / (2.0 * sys.mass)


def level_momentum(n, sys: WellSystem = WellSystem()) -> float:
    """Magnitude p_n = n pi hbar / L of the momentum associated with level n."""
    n = _check_level(n)
    return n * math.pi * sys.hbar / sys.width_L


def eigenstate_position(n, x, sys: WellSystem = WellSystem()) -> float:
    """u_n(x) = sqrt(2/L) sin(n pi x / L), clamped to 0 outside the well."""
    n = _check_level(n)
    L = sys.width_L
    if x < 0.0 or x > L:
        return 0.0
    return math.sqrt(2.0 / L) * math.sin(n * math.pi * x / L)


# Relative closeness to p = +-p_n below which the bracket in phi_n(p) is
# evaluated by series instead of the closed form (catastrophic cancellation).
_SINGULAR_EPS = 1e-6


def eigenstate_momentum(n, p, sys: WellSystem = WellSystem()) -> complex:
    """Momentum-space eigenstate phi_n(p) of the well.

    Closed form

        phi_n(p) = sqrt(hbar / (pi L)) * p_n / (p^2 - p_n^2)
                   * ((-1)^n exp(-i p L / hbar) - 1),

    the Fourier transform (1/sqrt(2 pi hbar)) Int_0^L u_n(x) exp(-i p x/hbar) dx.
    The removable singularities at p = +-p_n are evaluated by a series
    expansion of the bracket so the function is continuous in p.

    Returns
    -------
    complex
        Amplitude; |phi_n|^2 integrates to 1 over all p (tails fall as p^-4).
    """
    n = _check_level(n)
    hbar, L = sys.hbar, sys.width_L
    pn = n * math.pi * hbar / L
    norm = math.sqrt(hbar / (math.pi * L))
    d2 = p * p - pn * pn
    if abs(d2) >= _SINGULAR_EPS * pn * pn:
        sign = -1.0 if n % 2 else 1.0
        bracket = sign * cmath.exp(-1j * p * L / hbar) - 1.0
        return norm * pn / d2 * bracket
    # Near p = s*pn write u = (p - s*pn) L / hbar; then
    #   phi_n = norm * (pn L / hbar) * [(exp(-iu) - 1)/u] / (p + s*pn)
    # and (exp(-iu)-1)/u is expanded about u = 0.  (-1)^n exp(-i s pn L/hbar) = 1.
    s = 1.0 if p >= 0.0 else -1.0
    u = (p - s * pn) * L / hbar
    z = -1j * u
    series = -1j * (1.0 + z / 2.0 + z * z / 6.0 + z**3 / 24.0 + z**4 / 120.0)
    return norm * (pn * L / hbar) * series / (p + s * pn)


def classical_trajectory(t, x0, v0, sys: WellSystem = WellSystem()) -> ClassicalState:
    """Bouncing classical particle: triangle-wave fold of x0 + v0 t into [0, L].

    The solution is evaluated in closed form (no time stepping), so it is
    periodic with period 2L/|v0| to round-off for arbitrarily late times.
    A particle with v0 = 0 stays put.
    """
    L = sys.width_L
    if not 0.0 <= x0 <= L:
        raise ValueError(f"x0 must lie in [0, {L}], got {x0}")
    if v0 == 0.0:
        return ClassicalState(x0, 0.0)
    y = math.fmod(x0 + v0 * t, 2.0 * L)
    if y < 0.0:
        y += 2.0 * L
    if y <= L:
        return ClassicalState(y, v0)
    return ClassicalState(2.0 * L - y, -v0)
