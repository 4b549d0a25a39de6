import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmid import (
    DelaySystem,
    OverflowGuardError,
    Quasipolynomial,
    ValidationError,
    as_quasipolynomial,
    confluent_vandermonde,
    denormalize,
    normalize,
    polya_szego_bounds,
)
from gmid.quasipoly import NormalizedCoeffs

E2 = math.exp(-2.0)


class TestDelaySystem:
    def test_valid_construction(self):
        s = DelaySystem(n=2, m=1, a=(1.0, 0.0), alpha=(0.5, -0.25), tau=1.5)
        assert s.is_retarded and not s.is_neutral

    def test_neutral_classification(self):
        s = DelaySystem(n=1, m=1, a=(0.0,), alpha=(1.0, 2.0), tau=1.0)
        assert s.is_neutral

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=0, m=0, a=(), alpha=(1.0,), tau=1.0),
            dict(n=1, m=2, a=(0.0,), alpha=(1.0, 1.0, 1.0), tau=1.0),
            dict(n=1, m=0, a=(0.0,), alpha=(1.0,), tau=-1.0),
            dict(n=1, m=0, a=(0.0, 1.0), alpha=(1.0,), tau=1.0),
            dict(n=1, m=1, a=(0.0,), alpha=(1.0, 0.0), tau=1.0),
        ],
    )
    def test_invalid_construction(self, kwargs):
        with pytest.raises(ValidationError):
            DelaySystem(**kwargs)

    def test_delay_free_degenerate_allowed(self):
        s = DelaySystem(n=1, m=0, a=(1.0,), alpha=(0.0,), tau=1.0)
        assert s.is_delay_free and not s.is_retarded and not s.is_neutral

    def test_json_round_trip(self):
        s = DelaySystem(n=2, m=1, a=(1.0, 0.0), alpha=(0.5, -0.25), tau=1.5)
        assert DelaySystem.from_json(s.to_json()) == s


class TestAsQuasipolynomial:
    def test_transport_loop_shape(self):
        # s - (k_i + k_p s) e^{-tau s} encoded with alpha = (-k_i, -k_p)
        k_p, k_i = -E2, -4.0 * E2
        s = DelaySystem(n=1, m=1, a=(0.0,), alpha=(-k_i, -k_p), tau=1.0)
        q = as_quasipolynomial(s)
        assert q.degree == 3
        assert q.terms[0] == (0.0, (0.0, 1.0))
        assert q.terms[1][0] == -1.0
        s_test = 0.7 + 0.3j
        expected = s_test - (k_i + k_p * s_test) * np.exp(-s_test)
        assert abs(q.eval(s_test) - expected) < 1e-14

    def test_pendulum_shape(self):
        g_over_l = 2.0
        s = DelaySystem(n=2, m=1, a=(g_over_l, 0.0), alpha=(0.3, 0.1), tau=0.7)
        q = as_quasipolynomial(s)
        assert q.degree == 4
        z = -0.5 + 1.2j
        expected = z * z + g_over_l + (0.1 * z + 0.3) * np.exp(-0.7 * z)
        assert abs(q.eval(z) - expected) < 1e-14

    def test_smallest_retarded_case(self):
        q = as_quasipolynomial(DelaySystem(n=1, m=0, a=(0.0,), alpha=(1.0,), tau=1.0))
        assert q.degree == 2
        assert abs(q.eval(0.5) - (0.5 + math.exp(-0.5))) < 1e-15

    @pytest.mark.parametrize("n,m", [(1, 0), (1, 1), (3, 2), (5, 5)])
    def test_degree_is_m_plus_n_plus_1(self, n, m):
        a = tuple(0.1 * (k + 1) for k in range(n))
        alpha = tuple(0.2 * (k + 1) for k in range(m + 1))
        q = as_quasipolynomial(DelaySystem(n=n, m=m, a=a, alpha=alpha, tau=0.8))
        assert q.degree == m + n + 1


class TestEval:
    def test_double_root_at_origin(self):
        # z - 1 + e^{-z}: value 0 at 0, second derivative e^{-z} -> 1
        q = Quasipolynomial(((0.0, (-1.0, 1.0)), (-1.0, (1.0,))))
        assert q.eval(0.0, 0) == 0.0
        assert abs(q.eval(0.0, 1)) < 1e-15
        assert abs(q.eval(0.0, 2) - 1.0) < 1e-15

    def test_quadruple_root_derivatives(self):
        # (z^2 - 4z + 6) + e^{-z}(-2z - 6): orders 0..3 vanish, order 4 does not
        q = Quasipolynomial(((0.0, (6.0, -4.0, 1.0)), (-1.0, (-6.0, -2.0))))
        for order in range(4):
            value, scale = q.eval_with_scale(0.0, order)
            assert abs(value) <= 1e-14 * scale
        assert abs(q.eval(0.0, 4)) > 0.1

    def test_order_guard(self):
        q = Quasipolynomial(((0.0, (1.0, 1.0)),))
        with pytest.raises(ValidationError):
            q.eval(0.0, order=65)

    def test_overflow_guard(self):
        q = Quasipolynomial(((0.0, (0.0, 1.0)), (-1.0, (1.0,))))
        with pytest.raises(OverflowGuardError):
            q.eval(-800.0)

    @given(
        st.integers(min_value=1, max_value=3),
        st.integers(min_value=1, max_value=4),
        st.floats(min_value=-4.0, max_value=4.0),
        st.floats(min_value=-4.0, max_value=4.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_leibniz_matches_finite_differences(self, order, seed, re, im):
        rng = np.random.default_rng(seed)
        coeffs0 = tuple(rng.uniform(-2, 2, size=3))
        coeffs1 = tuple(rng.uniform(-2, 2, size=2))
        if coeffs0[-1] == 0 or coeffs1[-1] == 0:
            return
        q = Quasipolynomial(((0.0, coeffs0), (-1.3, coeffs1)))
        s = complex(re, im)
        h = 3e-6
        fd = (q.eval(s + h, order - 1) - q.eval(s - h, order - 1)) / (2 * h)
        exact, scale = q.eval_with_scale(s, order)
        assert abs(fd - exact) <= 1e-6 * max(abs(exact), 1e-7 * scale)


class TestPolyaSzegoBounds:
    def test_normalized_pendulum_strip(self):
        q = Quasipolynomial(((0.0, (6.0, -4.0, 1.0)), (-1.0, (-6.0, -2.0))))
        lower, upper = polya_szego_bounds(q, 0.0, math.pi)
        assert upper == 4
        assert lower == 0

    def test_zero_height_strip_caps_multiplicity(self):
        q = Quasipolynomial(((0.0, (6.0, -4.0, 1.0)), (-1.0, (-6.0, -2.0))))
        lower, upper = polya_szego_bounds(q, 0.7, 0.7)
        assert (lower, upper) == (0, 4)

    def test_neutral_first_order_symmetric_strip(self):
        q = Quasipolynomial(((0.0, (-2.0, 1.0)), (-1.0, (2.0, 1.0))))
        lower, upper = polya_szego_bounds(q, -math.pi, math.pi)
        assert (lower, upper) == (0, 4)

    def test_bad_strip(self):
        q = Quasipolynomial(((0.0, (1.0, 1.0)),))
        with pytest.raises(ValidationError):
            polya_szego_bounds(q, 1.0, 0.0)


class TestConfluentVandermonde:
    def test_size_one(self):
        T, S = confluent_vandermonde(1, 2.5, -0.3)
        assert T[0, 0] == 2.5 and abs(S[0, 0] - 0.4) < 1e-15

    def test_size_two_unit(self):
        T, S = confluent_vandermonde(2, 1.0, 1.0)
        assert np.allclose(T, [[1.0, 1.0], [0.0, 1.0]])
        assert np.allclose(S, [[1.0, -1.0], [0.0, 1.0]])

    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_product_is_identity_moderate_parameters(self, k):
        rng = np.random.default_rng(k)
        for _ in range(5):
            tau = float(rng.uniform(0.5, 2.0))
            s0 = float(rng.uniform(-1.0, 1.0))
            T, S = confluent_vandermonde(k, tau, s0)
            assert np.max(np.abs(T @ S - np.eye(k))) < 1e-12

    @pytest.mark.parametrize("k", [2, 4, 8, 12])
    def test_product_is_identity_wide_parameters(self, k):
        # Entries reach tau^k s0^(k-1); judge the product against the size of
        # its own summands rather than an absolute unit scale.
        rng = np.random.default_rng(100 + k)
        for _ in range(5):
            tau = float(rng.uniform(0.1, 10.0))
            s0 = float(rng.uniform(-5.0, 5.0))
            T, S = confluent_vandermonde(k, tau, s0)
            magnitude = np.maximum(np.abs(T) @ np.abs(S), 1.0)
            assert np.max(np.abs(T @ S - np.eye(k)) / magnitude) < 1e-12


class TestNormalizeDenormalize:
    def test_identity_transform(self):
        s = DelaySystem(n=2, m=1, a=(0.3, -0.7), alpha=(0.2, 0.9), tau=1.0)
        nc = normalize(s, 0.0)
        assert np.allclose(nc.b, s.a) and np.allclose(nc.beta, s.alpha)

    def test_transport_normalization(self):
        # Gains forcing the triple root at -2 normalize to b=[-2], beta=[2, 1]
        s = DelaySystem(n=1, m=1, a=(0.0,), alpha=(4.0 * E2, E2), tau=1.0)
        nc = normalize(s, -2.0)
        assert abs(nc.b[0] + 2.0) < 1e-12
        assert abs(nc.beta[0] - 2.0) < 1e-12 and abs(nc.beta[1] - 1.0) < 1e-12

    def test_pendulum_normalization(self):
        sq2 = math.sqrt(2.0)
        s = DelaySystem(n=2, m=1, a=(1.0, 0.0), alpha=(-5.0 * E2, -sq2 * E2), tau=sq2)
        nc = normalize(s, -sq2)
        assert np.allclose(nc.b, (6.0, -4.0), atol=1e-10)
        assert np.allclose(nc.beta, (-6.0, -2.0), atol=1e-10)

    def test_denormalize_transport_gains(self):
        nc = NormalizedCoeffs(b=(-2.0,), beta=(2.0, 1.0))
        s = denormalize(nc, 1, 1, 1.0, -2.0)
        assert abs(s.a[0]) < 1e-14
        assert abs(s.alpha[0] - 4.0 * E2) < 1e-14
        assert abs(s.alpha[1] - E2) < 1e-14

    def test_zero_beta_gives_zero_alpha(self):
        nc = NormalizedCoeffs(b=(1.0, 2.0, 3.0), beta=(0.0, 0.0))
        s = denormalize(nc, 3, 1, 0.7, 1.3)
        assert s.alpha == (0.0, 0.0)

    def test_overflow_guard(self):
        s = DelaySystem(n=1, m=0, a=(0.0,), alpha=(1.0,), tau=200.0)
        with pytest.raises(OverflowGuardError):
            normalize(s, -5.0)

    @given(
        st.integers(min_value=1, max_value=5),
        st.integers(min_value=0, max_value=5),
        st.floats(min_value=-5.0, max_value=5.0),
        st.floats(min_value=0.1, max_value=10.0),
        st.integers(min_value=0, max_value=2**31 - 1),
    )
    @settings(max_examples=1000, deadline=None)
    def test_round_trip(self, n, m, s0, tau, seed):
        m = min(m, n)
        if abs(s0 * tau) > 60:
            # Stay clear of the exponential overflow guard region; the guard
            # itself is tested separately.
            s0 = math.copysign(60.0 / tau, s0)
        rng = np.random.default_rng(seed)
        a = tuple(float(x) for x in rng.uniform(-5, 5, size=n))
        alpha = list(rng.uniform(-5, 5, size=m + 1))
        if abs(alpha[m]) < 1e-3:
            alpha[m] = 1.0
        sys_in = DelaySystem(n=n, m=m, a=a, alpha=tuple(alpha), tau=tau)
        back = denormalize(normalize(sys_in, s0), n, m, tau, s0)
        # Tolerance is relative to the transform's own magnitude: the chain
        # a -> b -> a multiplies by confluent Vandermonde factors ~ (tau s0)^n.
        amp = max(1.0, (1.0 + abs(s0)) ** n * max(1.0, tau) ** n * 2.0**n)
        for x, y in zip(sys_in.a, back.a):
            assert abs(x - y) <= 1e-10 * amp * max(1.0, abs(x))
        for x, y in zip(sys_in.alpha, back.alpha):
            assert abs(x - y) <= 1e-10 * amp * max(1.0, abs(x))
