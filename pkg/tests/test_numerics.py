import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from nernst_lab.errors import BracketError, DomainError, EvaluationError, InputError
from nernst_lab.numerics import (Classification, bessel_i_sph, brent_root, default_step,
                                 extrapolate_limit, finite_diff, gauss_legendre,
                                 golden_section_max, jacobi_eigenvalues, sym_eigenvalues)


class TestGaussLegendre:
    def test_small_rule(self):
        x, w = gauss_legendre(2)
        np.testing.assert_allclose(x, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
        np.testing.assert_allclose(w, [1.0, 1.0], rtol=1e-15)

    def test_weights_sum_to_two(self):
        for n in (1, 5, 48, 256):
            _, w = gauss_legendre(n)
            assert abs(w.sum() - 2.0) < 1e-13

    def test_nodes_increasing(self):
        x, _ = gauss_legendre(33)
        assert np.all(np.diff(x) > 0)

    @pytest.mark.parametrize("n", [0, 257, 2.5, True])
    def test_rejects_bad_n(self, n):
        with pytest.raises(InputError):
            gauss_legendre(n)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(1, 40), data=st.data())
    def test_polynomial_exactness(self, n, data):
        deg = data.draw(st.integers(0, 2 * n - 1))
        x, w = gauss_legendre(n)
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert abs(np.sum(w * x ** deg) - exact) < 1e-12


class TestEigenvalues:
    def test_two_by_two(self):
        A = np.array([[2.0, 1.0], [1.0, 2.0]])
        np.testing.assert_allclose(jacobi_eigenvalues(A), [1.0, 3.0], atol=1e-14)
        np.testing.assert_allclose(sym_eigenvalues(A), [1.0, 3.0], atol=1e-14)

    def test_jacobi_matches_lapack(self):
        rng = np.random.default_rng(3)
        B = rng.normal(size=(20, 20))
        A = B + B.T
        np.testing.assert_allclose(sym_eigenvalues(A, "jacobi"), sym_eigenvalues(A),
                                   atol=1e-12)

    def test_rejects_asymmetric(self):
        with pytest.raises(InputError):
            sym_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_large(self):
        with pytest.raises(InputError):
            jacobi_eigenvalues(np.eye(257))

    def test_unknown_method(self):
        with pytest.raises(InputError):
            sym_eigenvalues(np.eye(2), method="qr")

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(2, 8))
    def test_invariant_under_rotation(self, seed, n):
        rng = np.random.default_rng(seed)
        B = rng.normal(size=(n, n))
        A = B + B.T
        Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
        R = Q.T @ A @ Q
        R = 0.5 * (R + R.T)
        np.testing.assert_allclose(jacobi_eigenvalues(R), jacobi_eigenvalues(A),
                                   atol=1e-10 * max(1.0, np.abs(A).max()))


class TestBessel:
    def test_low_orders_closed_form(self):
        x = 1.0
        i = bessel_i_sph(3, x)
        np.testing.assert_allclose(i[0], math.sinh(1.0), rtol=1e-15)
        np.testing.assert_allclose(i[1], math.cosh(1.0) - math.sinh(1.0), rtol=1e-14)
        np.testing.assert_allclose(i[3], 0.0100650905240699, rtol=1e-13)

    def test_matches_scipy(self):
        for x in (0.01, 0.5, 3.0, 40.0, 300.0):
            ours = bessel_i_sph(30, x)
            ref = special.spherical_in(np.arange(31), x)
            mask = ref > 1e-290
            np.testing.assert_allclose(ours[mask], ref[mask], rtol=1e-12)

    def test_scaled_large_argument(self):
        i = bessel_i_sph(5, 5000.0, scaled=True)
        assert np.all(np.isfinite(i))
        # e^{-x} i_0(x) -> 1/(2x)
        np.testing.assert_allclose(i[0], 1.0 / 10000.0, rtol=1e-12)

    def test_unscaled_overflow(self):
        with pytest.raises(EvaluationError):
            bessel_i_sph(2, 800.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_i_sph(2, 0.0)
        with pytest.raises(InputError):
            bessel_i_sph(201, 1.0)

    @settings(max_examples=60, deadline=None)
    @given(x=st.floats(0.05, 200.0), l=st.integers(1, 40))
    def test_recurrence_identity(self, x, l):
        i = bessel_i_sph(l + 1, x, scaled=True)
        lhs = i[l - 1] - i[l + 1]
        rhs = (2 * l + 1) * i[l] / x
        assert abs(lhs - rhs) <= 1e-12 * max(abs(i[l - 1]), 1e-300)


class TestRootsAndOptima:
    def test_brent_sqrt2(self):
        r = brent_root(lambda t: t * t - 2.0, 0.0, 2.0)
        assert abs(r - math.sqrt(2.0)) < 1e-14

    def test_brent_no_sign_change(self):
        with pytest.raises(BracketError):
            brent_root(lambda t: t * t + 1.0, -1.0, 1.0)

    def test_brent_nonfinite(self):
        with pytest.raises(EvaluationError):
            brent_root(lambda t: math.nan, 0.0, 1.0)

    def test_golden_section(self):
        x, fx = golden_section_max(lambda t: -(t - 0.3) ** 2 + 1.0, 0.0, 1.0)
        assert abs(x - 0.3) < 1e-7
        assert abs(fx - 1.0) < 1e-13


class TestFiniteDiff:
    def test_default_step(self):
        assert default_step(0.0) == 1e-6
        assert default_step(1e3) == pytest.approx(1e-3)

    def test_richardson_improves(self):
        f, x, h = math.exp, 1.0, 1e-2
        plain = abs(finite_diff(f, x, h) - math.e)
        rich = abs(finite_diff(f, x, h, richardson=True) - math.e)
        assert rich < plain * 1e-3

    def test_bad_step(self):
        with pytest.raises(InputError):
            finite_diff(math.sin, 0.0, h=0.0)


class TestExtrapolateLimit:
    def test_algebraic_finite(self):
        u = 2.0 ** -np.arange(1, 13)
        est = extrapolate_limit(list(zip(u, 2.5 + 3 * u + u ** 2)))
        assert est.classification is Classification.FINITE
        assert abs(est.value - 2.5) < 1e-10

    def test_exponential_finite(self):
        T = 2.0 ** -np.arange(0, 13)
        est = extrapolate_limit(list(zip(T, 1.0 - np.exp(-1.0 / T))))
        assert est.is_finite
        assert abs(est.value - 1.0) < 1e-12

    def test_log_divergence_negative(self):
        T = 2.0 ** -np.arange(0, 13)
        est = extrapolate_limit(list(zip(T, np.log(T) + 0.3)))
        assert est.classification is Classification.DIVERGES_NEG
        assert abs(est.slope + 1.0) < 1e-8

    def test_toward_infinity(self):
        n = np.array([2.0, 3, 5, 9, 17, 33, 65, 101])
        est = extrapolate_limit(list(zip(n, 2 * np.log(n) + 1 / n)), toward_infinity=True)
        assert est.classification is Classification.DIVERGES_POS
        assert abs(est.slope - 2.0) < 1e-6

    def test_noise_inconclusive(self):
        rng = np.random.default_rng(0)
        T = 2.0 ** -np.arange(0, 13)
        est = extrapolate_limit(list(zip(T, rng.normal(size=13))))
        assert est.classification is Classification.INCONCLUSIVE

    def test_input_checks(self):
        with pytest.raises(InputError):
            extrapolate_limit([(1, 1), (0.5, 1), (0.25, 1)])
        with pytest.raises(InputError):
            extrapolate_limit([(1, 1), (2, 1), (3, 1), (4, 1)])
        with pytest.raises(EvaluationError):
            extrapolate_limit([(1, 1), (0.5, 1), (0.25, math.inf), (0.1, 1)])

    def test_to_dict(self):
        T = 2.0 ** -np.arange(0, 8)
        d = extrapolate_limit(list(zip(T, T))).to_dict()
        assert d["classification"] == "FINITE"
