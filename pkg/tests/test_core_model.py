import cmath
import math
from dataclasses import replace

import numpy as np
import pytest

from eitgate import (DegenerateDenominator, DivisionByZero, InvalidInput,
                     RegimeWarning, SystemParams, kerr_approximation, rho10_at,
                     w10)
from conftest import random_physical_params, w10_continued_fraction


def params(**kwargs):
    base = dict(omega_a_tilde=1.0, omega_b_tilde=10.0, omega_c_tilde=10.0,
                n_a=1, n_c=1, nu_a=0.0, nu_b=0.0, nu_c=10.0,
                gamma_10=0.0, gamma_20=1.0, gamma_30=0.0, gamma_40=1.0)
    base.update(kwargs)
    return SystemParams(**base)


# the worked example used throughout: exact value -5/52 + i/52
EXAMPLE = params()
EXAMPLE_W10 = -5.0 / 52.0 + 1j / 52.0


class TestW10:
    def test_no_probe_photon_gives_zero(self):
        assert w10(params(n_a=0)).value == 0.0

    def test_ideal_eit_dark_state(self):
        # two-photon resonance, no gamma_30, no signal field: full transparency
        p = params(omega_c_tilde=0.0, nu_c=0.0)
        assert w10(p).value == 0.0

    def test_worked_example_value(self):
        w = w10(EXAMPLE)
        assert w.value == pytest.approx(EXAMPLE_W10, rel=1e-14)
        # leading-order Kerr estimate of the phase rate
        assert w.phase_rate == pytest.approx(-0.1, rel=0.05)
        assert w.absorption_rate > 0

    def test_matches_continued_fraction_at_example(self):
        assert w10(EXAMPLE).value == pytest.approx(
            w10_continued_fraction(EXAMPLE), rel=1e-12)

    def test_accessors(self):
        w = w10(EXAMPLE)
        assert w.phase_rate == w.value.real
        assert w.absorption_rate == w.value.imag

    def test_degenerate_denominator(self):
        p = params(omega_b_tilde=0.0, omega_c_tilde=0.0, nu_c=0.0,
                   gamma_20=0.0, gamma_40=0.0)
        with pytest.raises(DegenerateDenominator):
            w10(p)


class TestEnsembleInvariants:
    def test_form_equivalence_10k(self, rng):
        for _ in range(10_000):
            p = random_physical_params(rng)
            a = w10(p).value
            b = w10_continued_fraction(p)
            assert a == pytest.approx(b, rel=1e-10, abs=1e-300)

    def test_passivity(self, rng):
        for _ in range(2_000):
            p = random_physical_params(rng)
            assert w10(p).absorption_rate >= -1e-12

    def test_three_level_reduction(self, rng):
        for _ in range(500):
            p = replace(random_physical_params(rng), omega_c_tilde=0.0)
            d3 = p.nu_a - p.nu_b
            a3 = d3 + 1j * p.gamma_30
            den = (p.nu_a + 1j * p.gamma_20) * a3 - p.omega_b ** 2
            if abs(den) < 1e-4 * (abs((p.nu_a + 1j * p.gamma_20) * a3) + p.omega_b ** 2):
                continue
            reduced = -a3 * p.omega_a ** 2 / den
            assert w10(p).value == pytest.approx(reduced, rel=1e-12, abs=1e-300)

    def test_scaling_covariance_exact_for_pow2(self, rng):
        for s in (2.0, 0.5, 1024.0):
            for _ in range(200):
                p = random_physical_params(rng)
                scaled = SystemParams(
                    omega_a_tilde=s * p.omega_a_tilde, omega_b_tilde=s * p.omega_b_tilde,
                    omega_c_tilde=s * p.omega_c_tilde, n_a=p.n_a, n_c=p.n_c,
                    nu_a=s * p.nu_a, nu_b=s * p.nu_b, nu_c=s * p.nu_c,
                    gamma_10=s * p.gamma_10, gamma_20=s * p.gamma_20,
                    gamma_30=s * p.gamma_30, gamma_40=s * p.gamma_40)
                assert w10(scaled).value == s * w10(p).value

    def test_scaling_covariance_generic_factor(self, rng):
        s = 3.0
        for _ in range(200):
            p = random_physical_params(rng)
            scaled = SystemParams(
                omega_a_tilde=s * p.omega_a_tilde, omega_b_tilde=s * p.omega_b_tilde,
                omega_c_tilde=s * p.omega_c_tilde, n_a=p.n_a, n_c=p.n_c,
                nu_a=s * p.nu_a, nu_b=s * p.nu_b, nu_c=s * p.nu_c,
                gamma_10=s * p.gamma_10, gamma_20=s * p.gamma_20,
                gamma_30=s * p.gamma_30, gamma_40=s * p.gamma_40)
            assert w10(scaled).value == pytest.approx(s * w10(p).value, rel=5e-15)


class TestRho10At:
    def test_identity_at_zero_time(self):
        assert rho10_at(EXAMPLE, 0.0) == 1.0

    def test_pure_decay_without_probe(self):
        p = params(n_a=0, gamma_10=0.25)
        t = 3.0
        assert rho10_at(p, t) == pytest.approx(math.exp(-0.25 * t), rel=1e-14)
        assert rho10_at(p, t).imag == 0.0

    def test_pi_phase_point(self):
        # at t = pi/|Re W10| the factor is -e^{-Im(W10) t}
        t = math.pi / abs(EXAMPLE_W10.real)
        value = rho10_at(EXAMPLE, t)
        expected = cmath.exp((1j * EXAMPLE_W10) * t)
        assert value == pytest.approx(expected, rel=1e-12)
        assert abs(value) == pytest.approx(math.exp(-math.pi / 5.0), rel=1e-12)
        assert cmath.phase(value) == pytest.approx(-math.pi, abs=1e-12) or \
            cmath.phase(value) == pytest.approx(math.pi, abs=1e-12)

    def test_n_atoms_in_exponent(self):
        p = replace(EXAMPLE, n_atoms=7)
        assert rho10_at(p, 1.0) == pytest.approx(rho10_at(EXAMPLE, 7.0), rel=1e-12)


class TestKerrApproximation:
    def test_direct_arithmetic(self):
        assert kerr_approximation(EXAMPLE) == -0.1

    def test_no_probe_photon(self):
        assert kerr_approximation(params(n_a=0)) == 0.0

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            kerr_approximation(params(nu_c=0.0))
        with pytest.raises(DivisionByZero):
            kerr_approximation(params(omega_b_tilde=0.0))

    def test_dispersive_agreement(self, rng):
        count = 0
        while count < 200:
            ob = rng.uniform(5.0, 50.0)
            oc = rng.uniform(5.0, 50.0)
            g20 = rng.uniform(0.1, 1.0)
            g40 = rng.uniform(0.1, 1.0)
            g30 = rng.uniform(0.0, 0.01)
            q_c_sq = g30 * g40 + oc ** 2
            knee = q_c_sq * (g20 + g40 * ob ** 2 / q_c_sq) / ob ** 2
            p = SystemParams(
                omega_a_tilde=rng.uniform(0.1, 1.0), omega_b_tilde=ob,
                omega_c_tilde=oc, n_a=1, n_c=1, nu_a=0.0, nu_b=0.0,
                nu_c=rng.uniform(100.0, 1000.0) * knee,
                gamma_10=0.0, gamma_20=g20, gamma_30=g30, gamma_40=g40)
            assert kerr_approximation(p) == pytest.approx(w10(p).phase_rate, rel=0.05)
            count += 1


class TestValidation:
    def test_negative_rate_rejected(self):
        with pytest.raises(InvalidInput):
            params(gamma_20=-1.0)

    def test_negative_photon_number_rejected(self):
        with pytest.raises(InvalidInput):
            params(n_a=-1)

    def test_zero_atoms_rejected(self):
        with pytest.raises(InvalidInput):
            SystemParams(omega_a_tilde=1, omega_b_tilde=1, omega_c_tilde=1,
                         n_a=1, n_c=1, nu_a=0, nu_b=0, nu_c=1,
                         gamma_10=0, gamma_20=1, gamma_30=0, gamma_40=1,
                         n_atoms=0)

    def test_metastability_warning(self):
        with pytest.warns(RegimeWarning):
            params(gamma_30=5.0, gamma_20=1.0)
