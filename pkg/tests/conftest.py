"""Shared oracles for the test suite.

The continued-fraction response evaluator below is algebraically equivalent
to the published closed form but built from a different grouping; it serves
as the independent route every response value is checked against.
"""

import warnings

import numpy as np
import pytest

from eitgate import RegimeWarning, SystemParams


def w10_continued_fraction(params: SystemParams) -> complex:
    """i|Omega_a|^2 / [x2 + |Omega_b|^2 / (x3 + |Omega_c|^2 / x4)]."""
    d3 = params.nu_a - params.nu_b
    d4 = d3 + params.nu_c
    x2 = params.gamma_20 - 1j * params.nu_a
    x3 = params.gamma_30 - 1j * d3
    x4 = params.gamma_40 - 1j * d4
    z = x2 + params.omega_b ** 2 / (x3 + params.omega_c ** 2 / x4)
    return 1j * params.omega_a ** 2 / z


def cf_denominator_scale(params: SystemParams) -> tuple[float, float]:
    """|denominator| of the closed form and the scale of its terms."""
    d3 = params.nu_a - params.nu_b
    d4 = d3 + params.nu_c
    a3 = d3 + 1j * params.gamma_30
    a4 = d4 + 1j * params.gamma_40
    bracket = a3 * a4 - params.omega_c ** 2
    den = (params.nu_a + 1j * params.gamma_20) * bracket - a4 * params.omega_b ** 2
    scale = abs((params.nu_a + 1j * params.gamma_20) * bracket) + abs(a4) * params.omega_b ** 2
    return abs(den), scale


def random_physical_params(rng: np.random.Generator, degeneracy_floor=1e-4) -> SystemParams:
    """One non-degenerate parameter set from the random physical ensemble.

    Rates in [0, 10], detunings in [-100, 100], amplitudes in [0, 100];
    resamples until the response denominator clears the degeneracy floor.
    """
    while True:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            p = SystemParams(
                omega_a_tilde=rng.uniform(0.0, 100.0),
                omega_b_tilde=rng.uniform(0.0, 100.0),
                omega_c_tilde=rng.uniform(0.0, 100.0),
                n_a=1, n_c=1,
                nu_a=rng.uniform(-100.0, 100.0),
                nu_b=rng.uniform(-100.0, 100.0),
                nu_c=rng.uniform(-100.0, 100.0),
                gamma_10=rng.uniform(0.0, 10.0),
                gamma_20=rng.uniform(0.0, 10.0),
                gamma_30=rng.uniform(0.0, 10.0),
                gamma_40=rng.uniform(0.0, 10.0),
            )
        den, scale = cf_denominator_scale(p)
        if scale > 0 and den > degeneracy_floor * scale:
            return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240215)
