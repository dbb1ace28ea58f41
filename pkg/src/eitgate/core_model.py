"""Four-level N-system parameters and the weak-probe response W10.

All rates, detunings and Rabi amplitudes are dimensionless, expressed in a
caller-chosen reference rate.  Per-photon amplitudes are written with a tilde;
the effective amplitude of mode k is |Omega_k| = |Omega~_k| sqrt(n_k).  Mode b
is special: `omega_b_tilde` holds the *effective* |Omega_b| for the evaluation
at hand, with any photon-number factor folded in by the caller (the coherent
drive machinery evaluates one Fock component at a time).
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, DivisionByZero, InvalidInput, RegimeWarning

# Relative tolerance floors: singularity detection and passivity slack.
EPS_DEN = 1e-12
EPS_NUM = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Rates, detunings and drive amplitudes of the four-level system.

    gamma_10 is the collective ground-state decoherence rate already divided
    by the atom number; gamma_10 and gamma_30 are pure dephasing (the levels
    they guard are metastable), gamma_20 and gamma_40 include depopulation.
    """

    omega_a_tilde: float
    omega_b_tilde: float
    omega_c_tilde: float
    n_a: int
    n_c: int
    nu_a: float
    nu_b: float
    nu_c: float
    gamma_10: float
    gamma_20: float
    gamma_30: float
    gamma_40: float
    n_atoms: int = 1

    def __post_init__(self):
        for name in ("omega_a_tilde", "omega_b_tilde", "omega_c_tilde",
                     "gamma_10", "gamma_20", "gamma_30", "gamma_40"):
            if getattr(self, name) < 0:
                raise InvalidInput(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.n_a < 0 or self.n_c < 0:
            raise InvalidInput(f"photon numbers must be >= 0, got n_a={self.n_a}, n_c={self.n_c}")
        if self.n_atoms < 1:
            raise InvalidInput(f"n_atoms must be >= 1, got {self.n_atoms}")
        if self.gamma_10 > self.gamma_20 or self.gamma_30 > self.gamma_20:
            warnings.warn(
                "gamma_10 or gamma_30 exceeds gamma_20; the metastability "
                "assumption behind the pure-dephasing model is doubtful here",
                RegimeWarning, stacklevel=2)

    @property
    def omega_a(self) -> float:
        """Effective probe amplitude |Omega_a| = |Omega~_a| sqrt(n_a)."""
        return self.omega_a_tilde * np.sqrt(self.n_a)

    @property
    def omega_b(self) -> float:
        """Effective drive amplitude; photon number already folded in."""
        return self.omega_b_tilde

    @property
    def omega_c(self) -> float:
        """Effective signal amplitude |Omega_c| = |Omega~_c| sqrt(n_c)."""
        return self.omega_c_tilde * np.sqrt(self.n_c)


@dataclass(frozen=True)
class ResponseW10:
    """Complex weak-probe response: Re is the phase rate, Im the absorption."""

    value: complex

    @property
    def phase_rate(self) -> float:
        return self.value.real

    @property
    def absorption_rate(self) -> float:
        return self.value.imag


def w10(params: SystemParams) -> ResponseW10:
    """Evaluate the complex weak-probe response of the four-level chain.

    The ground-state coherence evolves as
    rho_10(t) = rho_10(0) exp[(-gamma_10 + i W10) N t]; Re(W10) sets the
    phase accumulation rate and Im(W10) >= 0 the absorption.

    Raises
    ------
    DegenerateDenominator
        If the response denominator is smaller than EPS_DEN times the scale
        of its terms (an exactly singular or unphysical parameter point).
    """
    d3 = params.nu_a - params.nu_b
    d4 = d3 + params.nu_c
    a3 = d3 + 1j * params.gamma_30
    a4 = d4 + 1j * params.gamma_40
    bracket = a3 * a4 - params.omega_c ** 2
    num = -bracket * params.omega_a ** 2
    den = (params.nu_a + 1j * params.gamma_20) * bracket - a4 * params.omega_b ** 2
    scale = abs((params.nu_a + 1j * params.gamma_20) * bracket) + abs(a4) * params.omega_b ** 2
    if abs(den) < EPS_DEN * scale or scale == 0.0:
        raise DegenerateDenominator(
            f"w10: |denominator|={abs(den):.3e} below {EPS_DEN:.0e} x scale={scale:.3e}")
    return ResponseW10(value=complex(num / den))


def rho10_at(params: SystemParams, t: float) -> complex:
    """Quasi-steady-state coherence factor exp[(-gamma_10 + i W10) N t].

    The caller multiplies by rho_10(0).  Propagates DegenerateDenominator
    from w10.
    """
    w = w10(params)
    return cmath.exp((-params.gamma_10 + 1j * w.value) * params.n_atoms * t)


def kerr_approximation(params: SystemParams) -> float:
    """Dispersive cross-Kerr limit of the phase rate.

    Re(W10) -> -|Omega_a|^2 |Omega_c|^2 / (nu_c |Omega_b|^2), valid deep in
    the dispersive regime (|nu_c| much larger than the widths involved).

    Raises
    ------
    DivisionByZero
        If nu_c = 0 or the drive amplitude is zero.
    """
    if params.nu_c == 0:
        raise DivisionByZero("kerr_approximation: nu_c = 0")
    if params.omega_b == 0:
        raise DivisionByZero("kerr_approximation: |Omega_b| = 0")
    return -(params.omega_a ** 2) * params.omega_c ** 2 / (params.nu_c * params.omega_b ** 2)
