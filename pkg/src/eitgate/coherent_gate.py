"""Coherent-drive gate model.

The drive mode b (and mode c for the one-qubit variant) is a coherent state,
so the gate acts component-by-component on its Poisson-distributed Fock
content.  Each component n picks up a phase phi_n and a damping tau_n from
the exact response evaluated at |Omega_b| = |Omega~_b| sqrt(n); the gate
fidelity is the Poisson-averaged overlap amplitude

    F = | sum_n P(n) exp(-i phi_n - tau_n) |,    delta_total = 1 - F^2.

Switching off the damping (tau_n -> 0) isolates the coherent-spread error,
switching off the spread (phi_n -> phi) isolates the decoherence error; each
component reproduces delta_total when the other mechanism is absent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import poisson

from .analytic_design import PhaseTarget, gate_time, optimal_detuning
from .core_model import EPS_DEN, SystemParams, w10
from .errors import (DivisionByZero, InvalidInput, NotAttainable, RegimeWarning,
                     TruncationNotConverged)

EPS_TRUNC = 1e-10

TWO_QUBIT = "two-qubit"
ONE_QUBIT = "one-qubit"


@dataclass(frozen=True)
class GateDesign:
    """An operating point: detuning, drive amplitude, phase and duration."""

    nu_c: float
    alpha_b: float
    phi: float
    time_norm: float          # |Omega_a| N t
    suppression: float        # gamma_40 / gamma_20 at this point
    mode: str = TWO_QUBIT

    def __post_init__(self):
        if self.alpha_b < 0:
            raise InvalidInput(f"alpha_b must be >= 0, got {self.alpha_b}")
        if self.phi <= 0:
            raise InvalidInput(f"phi must be > 0, got {self.phi}")
        if self.time_norm < 0:
            raise InvalidInput(f"time_norm must be >= 0, got {self.time_norm}")
        if self.suppression <= 0:
            raise InvalidInput(f"suppression must be > 0, got {self.suppression}")
        if self.mode not in (TWO_QUBIT, ONE_QUBIT):
            raise InvalidInput(f"mode must be '{TWO_QUBIT}' or '{ONE_QUBIT}'")


@dataclass(frozen=True)
class ErrorBudget:
    """Gate error 1 - F^2 split into decoherence and coherent-spread parts."""

    delta_decoherence: float
    delta_coherent_spread: float
    delta_total: float
    fidelity: float

    def __post_init__(self):
        if not 0.0 <= self.fidelity <= 1.0 + 1e-12:
            raise InvalidInput(f"fidelity out of [0, 1]: {self.fidelity}")
        if abs(self.delta_total - (1.0 - self.fidelity ** 2)) > 1e-9:
            raise InvalidInput("delta_total inconsistent with 1 - fidelity^2")


@dataclass(frozen=True, eq=False)
class FockExpansion:
    """Truncated Fock-basis amplitudes of the evolved drive state."""

    amplitudes: np.ndarray
    n_max: int
    tail_mass: float

    def __post_init__(self):
        norm = float(np.sum(np.abs(self.amplitudes) ** 2)) + self.tail_mass
        if abs(norm - 1.0) > 1e-12:
            raise InvalidInput(f"FockExpansion norm + tail = {norm}, expected 1")
        if self.tail_mass > EPS_TRUNC:
            raise TruncationNotConverged(
                f"tail mass {self.tail_mass:.3e} exceeds {EPS_TRUNC:.0e}")


def truncation_bound(alpha_b: float, eps: float = EPS_TRUNC) -> int:
    """Smallest n_max whose Poisson(|alpha_b|^2) upper tail mass is <= eps."""
    if alpha_b < 0:
        raise InvalidInput(f"alpha_b must be >= 0, got {alpha_b}")
    if not 0.0 < eps < 1.0:
        raise InvalidInput(f"eps must be in (0, 1), got {eps}")
    if alpha_b == 0.0:
        return 0
    mu = alpha_b ** 2
    n = int(poisson.isf(eps, mu))
    while n > 0 and poisson.sf(n - 1, mu) <= eps:
        n -= 1
    while poisson.sf(n, mu) > eps:
        n += 1
    return n


def _poisson_window(mu: float, eps: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Fock indices covering all but <= eps of Poisson(mu), with weights.

    Returns (indices, weights, missing) where missing is the cdf/sf-verified
    mass outside the window.  The quantile-function guesses are checked and
    widened if needed (scipy's discrete quantile inversion drifts at extreme
    quantiles for large mu), and the missing mass is measured through cdf/sf
    rather than 1 - sum(pmf): the pmf bulk carries a coherent relative
    rounding of order mu * eps_machine that would otherwise be mistaken for
    truncated mass.
    """
    if mu == 0.0:
        return np.array([0]), np.array([1.0]), 0.0
    side = eps / 2.0
    hi = int(poisson.isf(side, mu)) + 1
    while poisson.sf(hi, mu) > side:
        hi += max(1, int(0.02 * math.sqrt(mu)))
    lo = max(0, int(poisson.ppf(side, mu)) - 1)
    while lo > 0 and poisson.cdf(lo - 1, mu) > side:
        lo = max(0, lo - max(1, int(0.02 * math.sqrt(mu))))
    n = np.arange(lo, hi + 1)
    missing = float(poisson.sf(hi, mu))
    if lo > 0:
        missing += float(poisson.cdf(lo - 1, mu))
    return n, poisson.pmf(n, mu), missing


def kerr_phase_state(alpha_b: float, phi: float, n_a: int = 1, n_c: int = 1,
                     eps: float = EPS_TRUNC) -> FockExpansion:
    """Coherent drive state after the gate, in the idealized Kerr limit.

    Component n >= 1 acquires exp(-i n_a n_c phi |alpha_b|^2 / n); the vacuum
    component carries zero phase (with no drive photons the dispersive
    mechanism is absent, and its Poisson weight exp(-|alpha_b|^2) is
    negligible at design amplitudes).
    """
    if alpha_b < 0:
        raise InvalidInput(f"alpha_b must be >= 0, got {alpha_b}")
    if n_a < 0 or n_c < 0:
        raise InvalidInput("photon numbers must be >= 0")
    n_max = truncation_bound(alpha_b, eps)
    mu = alpha_b ** 2
    n = np.arange(0, n_max + 1)
    weights = poisson.pmf(n, mu)
    phases = np.zeros(n_max + 1)
    if n_max >= 1:
        phases[1:] = n_a * n_c * phi * mu / n[1:]
    # the complement of the captured mass, so the normalization identity is
    # exact in floating point (scipy's pmf and sf disagree at ~1e-12)
    tail = max(0.0, 1.0 - math.fsum(weights))
    return FockExpansion(amplitudes=np.sqrt(weights) * np.exp(-1j * phases),
                         n_max=n_max, tail_mass=tail)


def ideal_overlap(state: FockExpansion, phi: float, n_a: int = 1, n_c: int = 1) -> complex:
    """Overlap of the evolved drive state with the ideally phase-shifted input."""
    return np.exp(1j * n_a * n_c * phi) * np.sum(np.abs(state.amplitudes) * state.amplitudes)


def spread_error(state: FockExpansion, phi: float, n_a: int = 1, n_c: int = 1) -> float:
    """Finite-amplitude error 1 - |<ideal|psi>|^2 of the idealized Kerr state."""
    return 1.0 - abs(ideal_overlap(state, phi, n_a, n_c)) ** 2


def _response_grid(params: SystemParams, omega_b, omega_c):
    """Vectorized W10 over effective drive amplitudes.

    Components with a vanishing denominator (possible only in idealized
    zero-width configurations, e.g. the undriven vacuum component with
    gamma_20 = 0) are assigned zero response, extending the zero-phase
    vacuum convention of kerr_phase_state.
    """
    d3 = params.nu_a - params.nu_b
    d4 = d3 + params.nu_c
    a3 = d3 + 1j * params.gamma_30
    a4 = d4 + 1j * params.gamma_40
    bracket = a3 * a4 - np.asarray(omega_c) ** 2
    num = -bracket * params.omega_a ** 2
    den = (params.nu_a + 1j * params.gamma_20) * bracket - a4 * np.asarray(omega_b) ** 2
    scale = (np.abs((params.nu_a + 1j * params.gamma_20) * bracket)
             + np.abs(a4) * np.asarray(omega_b) ** 2)
    bad = np.abs(den) <= EPS_DEN * scale
    w = np.where(bad, 0.0, num) / np.where(bad, 1.0, den)
    return w


def per_component_response(params: SystemParams, n_b: int, time_norm: float):
    """Phase and damping of one Fock component of the drive.

    Evaluates the exact response at |Omega_b| = |Omega~_b| sqrt(n_b) (n_b = 0
    is a regular point) and returns (-Re(W10) N t, (gamma_10 + Im(W10)) N t)
    for the interaction time time_norm = |Omega_a| N t.
    """
    if n_b < 0:
        raise InvalidInput(f"n_b must be >= 0, got {n_b}")
    if params.omega_a == 0:
        raise DivisionByZero("per_component_response: |Omega_a| = 0")
    wp = replace(params, omega_b_tilde=params.omega_b_tilde * math.sqrt(n_b))
    w = w10(wp)
    nt = time_norm / params.omega_a
    return -w.phase_rate * nt, (params.gamma_10 + w.absorption_rate) * nt


def _budget_from_sums(m_full: complex, m_spread: complex, m_damp: float) -> ErrorBudget:
    """Assemble the error budget from the three Poisson-averaged overlaps."""
    fid = min(float(np.abs(m_full)), 1.0)
    return ErrorBudget(
        delta_decoherence=max(0.0, 1.0 - min(float(m_damp), 1.0) ** 2),
        delta_coherent_spread=max(0.0, 1.0 - min(float(np.abs(m_spread)), 1.0) ** 2),
        delta_total=1.0 - fid ** 2,
        fidelity=fid,
    )


def _budget_from_terms(weights, phases, taus) -> ErrorBudget:
    """Error budget from per-component phases and dampings.

    The sums are normalized by the captured Poisson mass, so the truncated
    tail (below the convergence tolerance by construction) does not
    masquerade as decoherence.
    """
    wsum = float(np.sum(weights))
    m_full = np.sum(weights * np.exp(-1j * phases - taus)) / wsum
    m_spread = np.sum(weights * np.exp(-1j * phases)) / wsum
    m_damp = float(np.sum(weights * np.exp(-taus))) / wsum
    return _budget_from_sums(m_full, m_spread, m_damp)


def _two_qubit_budget(params: SystemParams, nu_c: float, alpha_b: float,
                      phi: float, eps: float = EPS_TRUNC,
                      n_max: int | None = None) -> tuple[ErrorBudget, float]:
    """Error budget and time_norm at a two-qubit operating point.

    params carries per-photon amplitudes; the interaction time is calibrated
    so the mean drive component acquires exactly phi.
    """
    wp = replace(params, nu_c=nu_c)
    mean = replace(wp, omega_b_tilde=params.omega_b_tilde * alpha_b)
    time_norm = gate_time(mean, PhaseTarget(phi))
    mu = alpha_b ** 2
    if n_max is None:
        n_max = truncation_bound(alpha_b, eps)
    n = np.arange(0, n_max + 1)
    weights = poisson.pmf(n, mu) if mu > 0 else np.array([1.0] + [0.0] * n_max)
    tail = float(poisson.sf(n_max, mu)) if mu > 0 else 0.0
    if tail > eps:
        raise TruncationNotConverged(
            f"tail mass {tail:.3e} beyond n_max={n_max} exceeds eps={eps:.3e}")
    w = _response_grid(wp, params.omega_b_tilde * np.sqrt(n), wp.omega_c)
    nt = time_norm / params.omega_a
    phases = -np.real(w) * nt
    taus = (params.gamma_10 + np.imag(w)) * nt
    return _budget_from_terms(weights, phases, taus), time_norm


def design_point(params: SystemParams, nu_c: float, alpha_b: float, phi: float,
                 mode: str = TWO_QUBIT, alpha_c: float | None = None) -> GateDesign:
    """Build a GateDesign with its interaction time calibrated to phi.

    The time is fixed so the mean Fock component of each coherent mode
    acquires exactly the target phase.
    """
    wp = replace(params, nu_c=nu_c)
    mean = replace(wp, omega_b_tilde=params.omega_b_tilde * alpha_b)
    if mode == ONE_QUBIT:
        if alpha_c is None or alpha_c <= 0:
            raise InvalidInput("one-qubit design needs alpha_c > 0")
        mean = replace(mean, omega_c_tilde=params.omega_c_tilde * alpha_c, n_c=1)
    tn = gate_time(mean, PhaseTarget(phi))
    if params.gamma_20 > 0:
        sup = params.gamma_40 / params.gamma_20
    elif params.gamma_40 == 0:
        sup = 1.0
    else:
        raise InvalidInput("gamma_40 > 0 with gamma_20 = 0 has no suppression ratio")
    return GateDesign(nu_c=nu_c, alpha_b=alpha_b, phi=phi, time_norm=tn,
                      suppression=sup, mode=mode)


def _check_design(params: SystemParams, design: GateDesign, alpha_c=None):
    expected = design_point(params, design.nu_c, design.alpha_b, design.phi,
                            mode=design.mode, alpha_c=alpha_c)
    scale = max(abs(expected.time_norm), 1e-300)
    if abs(expected.time_norm - design.time_norm) > 1e-9 * scale:
        raise InvalidInput(
            f"design time_norm {design.time_norm!r} inconsistent with "
            f"gate_time at its parameters ({expected.time_norm!r})")
    if abs(expected.suppression - design.suppression) > 1e-9 * expected.suppression:
        raise InvalidInput(
            f"design suppression {design.suppression!r} inconsistent with "
            f"gamma_40/gamma_20 = {expected.suppression!r}")


def gate_error(params: SystemParams, design: GateDesign,
               eps_trunc: float = EPS_TRUNC, n_max: int | None = None) -> ErrorBudget:
    """Error budget of the two-qubit gate at a design point.

    The dual-rail coherence after the gate is rho_10(0) times
    sum_n P(n) exp(-i phi_n - tau_n); the budget is built from the modulus
    of that sum (delta_total = 1 - F^2) with the spread and decoherence
    components obtained by switching off the other mechanism.

    Raises
    ------
    TruncationNotConverged
        If the Poisson tail beyond the truncation order exceeds eps_trunc.
    """
    if design.mode != TWO_QUBIT:
        raise InvalidInput("gate_error handles two-qubit designs; "
                           "use one_qubit_error for the one-qubit variant")
    _check_design(params, design)
    budget, _ = _two_qubit_budget(params, design.nu_c, design.alpha_b,
                                  design.phi, eps=eps_trunc, n_max=n_max)
    return budget


def _one_qubit_budget(params: SystemParams, nu_c: float, alpha_b: float,
                      alpha_c: float, phi: float,
                      eps: float = EPS_TRUNC) -> tuple[ErrorBudget, float]:
    """Error budget for coherent drives in both modes b and c.

    The double Fock sum runs over the product of per-mode Poisson windows,
    accumulated in fixed row blocks so memory stays bounded at large
    amplitudes and the reduction order is deterministic.
    """
    wp = replace(params, nu_c=nu_c, n_c=1)
    mean = replace(wp, omega_b_tilde=params.omega_b_tilde * alpha_b,
                   omega_c_tilde=params.omega_c_tilde * alpha_c)
    time_norm = gate_time(mean, PhaseTarget(phi))
    nb, pb, miss_b = _poisson_window(alpha_b ** 2, eps)
    nc, pc, miss_c = _poisson_window(alpha_c ** 2, eps)
    if miss_b + miss_c > 2 * eps:
        raise TruncationNotConverged(
            f"joint tail mass {miss_b + miss_c:.3e} exceeds eps={eps:.3e}")
    omega_c = params.omega_c_tilde * np.sqrt(nc)[None, :]
    nt = time_norm / params.omega_a
    block = max(1, int(1_000_000 / len(nc)))
    m_full = 0.0 + 0.0j
    m_spread = 0.0 + 0.0j
    m_damp = 0.0
    wsum = 0.0
    for i in range(0, len(nb), block):
        rows = slice(i, min(i + block, len(nb)))
        omega_b = params.omega_b_tilde * np.sqrt(nb[rows])[:, None]
        w = _response_grid(wp, omega_b, omega_c)
        phases = -np.real(w) * nt
        taus = (params.gamma_10 + np.imag(w)) * nt
        weights = pb[rows][:, None] * pc[None, :]
        m_full += np.sum(weights * np.exp(-1j * phases - taus))
        m_spread += np.sum(weights * np.exp(-1j * phases))
        m_damp += float(np.sum(weights * np.exp(-taus)))
        wsum += float(np.sum(weights))
    return _budget_from_sums(m_full / wsum, m_spread / wsum, m_damp / wsum), time_norm


def one_qubit_error(params: SystemParams, design: GateDesign, alpha_c: float,
                    eps_trunc: float = EPS_TRUNC) -> ErrorBudget:
    """Error budget of the one-qubit phase gate (modes b and c coherent).

    Poisson-weighted double sum over (n_b, n_c) with the exact response at
    (|Omega~_b| sqrt(n_b), |Omega~_c| sqrt(n_c)).  Requires |alpha_c| >>
    |alpha_b|; warns below a ratio of 10.
    """
    if design.mode != ONE_QUBIT:
        raise InvalidInput("one_qubit_error requires a one-qubit design")
    if alpha_c <= 0:
        raise InvalidInput(f"alpha_c must be > 0, got {alpha_c}")
    if alpha_c < 10.0 * design.alpha_b:
        warnings.warn("one-qubit gate assumes |alpha_c| >> |alpha_b|; "
                      f"ratio is only {alpha_c / max(design.alpha_b, 1e-300):.2f}",
                      RegimeWarning, stacklevel=2)
    _check_design(params, design, alpha_c=alpha_c)
    budget, _ = _one_qubit_budget(params, design.nu_c, design.alpha_b,
                                  alpha_c, design.phi, eps=eps_trunc)
    return budget


def min_alpha_b(params: SystemParams, phi: float, delta_target: float,
                alpha_c_ratio: float = 10.0, nu_c: float | None = None,
                alpha_max: float = 400.0, tol: float = 0.02,
                eps_trunc: float = EPS_TRUNC) -> float:
    """Smallest drive amplitude whose spread-only one-qubit error <= target.

    The detuning defaults to the closed-form optimum at the mean drive
    configuration; alpha_c tracks alpha_b at the given ratio.  The bracket is
    seeded from the Gaussian estimate spread ~ phi^2 (1/alpha_b^2 + 1/alpha_c^2)
    and grown geometrically, so large amplitudes are only evaluated if needed.
    """
    if not 0.0 < delta_target < 1.0:
        raise InvalidInput(f"delta_target must be in (0, 1), got {delta_target}")

    def spread_at(alpha: float) -> float:
        nc = nu_c
        if nc is None:
            mean = replace(params, omega_b_tilde=params.omega_b_tilde * alpha,
                           omega_c_tilde=params.omega_c_tilde * alpha * alpha_c_ratio,
                           n_c=1)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RegimeWarning)
                nc = optimal_detuning(mean)
        budget, _ = _one_qubit_budget(params, nc, alpha, alpha * alpha_c_ratio,
                                      phi, eps=eps_trunc)
        return budget.delta_coherent_spread

    hi = min(alpha_max,
             max(1.0, phi * math.sqrt((1.0 + alpha_c_ratio ** -2) / delta_target)))
    while spread_at(hi) > delta_target:
        hi *= 1.5
        if hi > alpha_max:
            raise NotAttainable(
                f"spread error still above {delta_target} at alpha_b = {alpha_max}")
    lo = hi / 1.5
    while spread_at(lo) <= delta_target and lo > 0.5:
        hi = lo
        lo /= 1.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if spread_at(mid) <= delta_target:
            hi = mid
        else:
            lo = mid
    return hi
