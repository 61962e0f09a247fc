import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nernst_lab.errors import DomainError, InputError
from nernst_lab.numerics import bessel_i_sph
from nernst_lab.spin_models import (ASYMPTOTIC_CONSTANT, ASYMPTOTIC_CONSTANT_OFFSET,
                                    MEASURE_OFFSET, ClassicalHeisenbergChainModel,
                                    HeisenbergSpec, ParamagnetModel, ParamagnetSpec,
                                    QuantumHeisenbergModel, RotorModel, gibbs_entropy,
                                    classical_density_report, classical_entropy_montecarlo,
                                    classical_entropy_quadrature, heis_classical_entropy_finite,
                                    heis_classical_entropy_limit, heis_classical_f_limit,
                                    heis_classical_f_limit_offset, heis_classical_log_Z,
                                    heis_classical_Z_finite, heis_quantum_entropy_small,
                                    heis_quantum_hamiltonian, langevin_entropy,
                                    pm_printed_entropy, pm_quantum_energy, pm_quantum_entropy,
                                    pm_quantum_entropy_trace, pm_spectrum,
                                    rotor_classical_entropy, rotor_printed_entropy, two_j_of)


def pm_direct(J, b):
    # brute-force single-spin entropy over levels m = -J..J
    m = np.arange(-J, J + 1)
    w = np.exp(b * m / J)
    p = w / w.sum()
    return float(-np.sum(p * np.log(p)))


class TestParamagnet:
    def test_reference_values(self):
        assert pm_quantum_entropy(0.5, 1.0) == pytest.approx(0.3653338550872076, rel=1e-13)
        assert pm_quantum_entropy(1, 1.0) == pytest.approx(0.8323955818399389, rel=1e-13)

    def test_high_temperature_limit(self):
        for J in (0.5, 1, 2.5):
            assert pm_quantum_entropy(J, 0.0) == pytest.approx(math.log(2 * J + 1), rel=1e-15)

    def test_frozen_limit(self):
        assert pm_quantum_entropy(0.5, 800.0) == 0.0
        assert pm_quantum_entropy(0.5, math.inf) == 0.0

    @pytest.mark.parametrize("J", [0.5, 1, 1.5, 3])
    def test_matches_direct_sum(self, J):
        for b in (0.01, 0.3, 1.0, 4.0):
            assert pm_quantum_entropy(J, b) == pytest.approx(pm_direct(J, b), rel=1e-12)

    def test_trace_oracle(self):
        for N, two_j, b in [(1, 1, 1.0), (3, 2, 0.7), (4, 3, 2.0), (2, 1, 30.0)]:
            spec = ParamagnetSpec(N, two_j, b)
            tot = pm_quantum_entropy_trace(spec, 1.0)
            assert tot == pytest.approx(N * pm_quantum_entropy(two_j / 2, b), rel=1e-12)

    def test_spectrum_ground_zero(self):
        E = pm_spectrum(ParamagnetSpec(2, 1, 1.0))
        assert E.min() == pytest.approx(-4.0)
        assert len(E) == 4

    def test_energy_thermodynamic_identity(self):
        # dS/dT = (1/T) dE/dT per spin
        J, B, T, h = 1.5, 1.0, 0.8, 1e-4
        dS = (pm_quantum_entropy(J, B / (T + h)) - pm_quantum_entropy(J, B / (T - h))) / (2 * h)
        dE = (pm_quantum_energy(J, B, T + h) - pm_quantum_energy(J, B, T - h)) / (2 * h)
        assert dS == pytest.approx(dE / T, rel=1e-6)

    def test_two_j_of(self):
        assert two_j_of(1.5) == 3
        with pytest.raises(DomainError):
            two_j_of(0.3)

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            ParamagnetSpec(0, 1, 1.0)
        with pytest.raises(DomainError):
            ParamagnetSpec(1, 1, 0.0)
        with pytest.raises(DomainError):
            pm_spectrum(ParamagnetSpec(13, 1, 1.0))

    def test_printed_form_not_factorized(self):
        # the non-factorized N-spin closed form is not N times the single-spin result
        per_spin = pm_printed_entropy(4, 0.5, 1.0) / 4
        assert abs(per_spin - pm_quantum_entropy(0.5, 1.0)) > 0.1

    def test_model_adapter(self):
        m = ParamagnetModel(3, 2)
        assert m.entropy((2.0,), 1.0) == pytest.approx(3 * pm_quantum_entropy(1, 2.0))
        assert m.energy((2.0,), 1.0) == pytest.approx(3 * pm_quantum_energy(1, 2.0, 1.0))

    def test_gibbs_entropy_small(self):
        assert gibbs_entropy([0.0, 50.0], 1.0) == pytest.approx(51 * math.exp(-50), rel=1e-12)


class TestRotor:
    def test_reference_values(self):
        assert rotor_classical_entropy(1.0) == pytest.approx(-0.151595923928136, rel=1e-13)
        assert rotor_classical_entropy(10.0) == pytest.approx(-1.995732316838217, rel=1e-13)

    def test_series_branch_continuous(self):
        # high-precision references on either side of the series switch
        assert langevin_entropy(0.79) == pytest.approx(-0.097927329079767947137, rel=1e-14)
        assert langevin_entropy(0.81) == pytest.approx(-0.10264153423122155922, rel=1e-14)

    def test_small_argument_relative_accuracy(self):
        x = 1e-4
        assert langevin_entropy(x) == pytest.approx(-x * x / 6 + x ** 4 / 60, rel=1e-14)

    def test_asymptote(self):
        b = 1e4
        assert rotor_classical_entropy(b) == pytest.approx(1 - math.log(2 * b), rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(b=st.floats(1e-6, 500.0))
    def test_non_positive(self, b):
        assert rotor_classical_entropy(b) <= 0.0

    @settings(max_examples=30, deadline=None)
    @given(b=st.floats(0.01, 50.0))
    def test_printed_form_relation(self, b):
        expected = rotor_classical_entropy(b / 2) - 1.0 + MEASURE_OFFSET
        assert rotor_printed_entropy(b) == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_quadrature_oracle(self):
        for b in (0.1, 1.0, 5.0):
            q = classical_entropy_quadrature("rotor", 3, b)
            assert abs(q.value - 3 * rotor_classical_entropy(b)) < 1e-9

    def test_density_exceeds_one(self):
        rep = classical_density_report("rotor", 1, 1.0)
        assert rep.max_density == pytest.approx(2.31303528549933, rel=1e-12)
        assert rep.exceeds_one
        assert rep.shift_gap < 1e-12

    def test_model(self):
        m = RotorModel(2)
        assert m.entropy((1.0,), 1.0) == pytest.approx(2 * rotor_classical_entropy(1.0))
        with pytest.raises(DomainError):
            RotorModel(0)


class TestClassicalHeisenberg:
    def test_transfer_identity(self):
        for x in (0.5, 1.0, 2.0, 5.0):
            z = heis_classical_Z_finite(2, x, "periodic")
            assert z == pytest.approx(math.sinh(2 * x) / (2 * x), rel=1e-12)
        assert heis_classical_Z_finite(2, 1.0, "periodic") == pytest.approx(1.8134302039235095,
                                                                            rel=1e-14)

    def test_open_chain(self):
        x = 1.3
        assert heis_classical_log_Z(5, x, "open") == pytest.approx(
            4 * math.log(math.sinh(x) / x), rel=1e-14)

    def test_default_bc(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert ClassicalHeisenbergChainModel(2, None).bc == "open"
        assert ClassicalHeisenbergChainModel(3, None).bc == "periodic"

    @pytest.mark.parametrize("N", [3, 4])
    def test_quadrature_agreement(self, N):
        for x in (0.3, 1.0, 4.0):
            q = classical_entropy_quadrature("heisenberg_classical", N, x, nodes=48)
            assert abs(q.value - heis_classical_entropy_finite(N, x)) < 1e-10
            assert abs(q.log_partition - heis_classical_log_Z(N, x)) < 1e-10

    def test_free_energy_conventions(self):
        beta, lam = 2.0, 0.7
        diff = heis_classical_f_limit_offset(beta, lam) - heis_classical_f_limit(beta, lam)
        assert diff == pytest.approx(MEASURE_OFFSET / beta, rel=1e-14)
        assert ASYMPTOTIC_CONSTANT_OFFSET == pytest.approx(1 - math.log(8 * math.pi), rel=1e-15)

    def test_entropy_limit_asymptote(self):
        x = 100.0
        s = heis_classical_entropy_limit(x, 1.0)
        assert abs(s + math.log(x) - ASYMPTOTIC_CONSTANT) < 1e-3

    def test_limit_entropy_from_free_energy(self):
        lam, T, h = 1.0, 0.6, 1e-5
        f = lambda t: heis_classical_f_limit(1 / t, lam)  # noqa: E731
        s = -(f(T + h) - f(T - h)) / (2 * h)
        assert s == pytest.approx(heis_classical_entropy_limit(1 / T, lam), rel=1e-8)

    def test_l_max_not_converged(self):
        with pytest.raises(DomainError):
            heis_classical_Z_finite(3, 50.0, "periodic", l_max=2)

    def test_quadrature_limits(self):
        with pytest.raises(DomainError):
            classical_entropy_quadrature("rotor", 5, 1.0)
        with pytest.raises(InputError):
            classical_entropy_quadrature("ising", 2, 1.0)
        with pytest.raises(InputError):
            classical_entropy_quadrature("rotor", 2, 1.0, nodes=65)

    def test_quadrature_shift_invariance(self):
        a = classical_entropy_quadrature("heisenberg_classical", 3, 2.0)
        b = classical_entropy_quadrature("heisenberg_classical", 3, 2.0, shift=-6.0)
        assert abs(a.value - b.value) < 1e-12


class TestMonteCarlo:
    def test_deterministic_seed(self):
        a = classical_entropy_montecarlo("rotor", 2, 1.0, 20_000, seed=7)
        b = classical_entropy_montecarlo("rotor", 2, 1.0, 20_000, seed=7)
        assert a == b

    def test_agrees_with_closed_form(self):
        r = classical_entropy_montecarlo("heisenberg_classical", 4, 1.0, 100_000, seed=1)
        assert abs(r.value - heis_classical_entropy_finite(4, 1.0)) < 4 * r.stderr

    def test_minimum_samples(self):
        with pytest.raises(InputError):
            classical_entropy_montecarlo("rotor", 1, 1.0, 100, seed=0)


class TestQuantumHeisenberg:
    def test_two_spin_reference(self):
        s = heis_quantum_entropy_small(HeisenbergSpec(2, 1, 1.0, "open"), 1.0)
        assert s == pytest.approx(1.128971602407658, rel=1e-12)

    def test_two_spin_closed_form(self):
        # triplet at -lam, singlet at 3 lam for J = 1/2
        beta = 0.7
        s = heis_quantum_entropy_small(HeisenbergSpec(2, 1, 1.0, "open"), 1 / beta)
        assert s == pytest.approx(gibbs_entropy([-1, -1, -1, 3], beta), rel=1e-13)

    def test_periodic_pair_warns(self):
        with pytest.warns(UserWarning):
            heis_quantum_entropy_small(HeisenbergSpec(2, 1, 1.0, "periodic"), 1.0)

    def test_hamiltonian_symmetric(self):
        H = heis_quantum_hamiltonian(HeisenbergSpec(3, 2, 1.0))
        np.testing.assert_allclose(H, H.T, atol=0)

    def test_ferromagnetic_ground_degeneracy(self):
        # ground multiplet has total spin NJ, degeneracy 2NJ + 1
        spec = HeisenbergSpec(3, 1, 1.0)
        E = np.linalg.eigvalsh(heis_quantum_hamiltonian(spec))
        assert np.sum(np.abs(E - E[0]) < 1e-10) == 4
        s = heis_quantum_entropy_small(spec, 1e-3)
        assert s == pytest.approx(math.log(4), rel=1e-12)

    def test_dimension_limit(self):
        with pytest.raises(DomainError):
            heis_quantum_hamiltonian(HeisenbergSpec(6, 3, 1.0))

    def test_model(self):
        m = QuantumHeisenbergModel(3, 1)
        assert m.entropy((1.0,), 2.0) >= 0.0

    @settings(max_examples=30, deadline=None)
    @given(x=st.floats(0.1, 60.0))
    def test_bessel_based_z_positive(self, x):
        i = bessel_i_sph(3, x, scaled=True)
        assert np.all(i[:2] > 0)
