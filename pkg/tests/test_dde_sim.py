import math

import numpy as np
import pytest

from gmid import (
    DelaySystem,
    History,
    PreconditionError,
    ValidationError,
    decay_rate,
    simulate,
    simulate_transport,
    synthesize,
)

SQ2 = math.sqrt(2.0)


def tiny_expm(A):
    """Matrix exponential by scaling-and-squaring Taylor; test oracle only."""
    A = np.asarray(A, dtype=float)
    norm = np.max(np.sum(np.abs(A), axis=1))
    k = max(0, int(math.ceil(math.log2(max(norm, 1e-30)))) + 1)
    B = A / (2.0**k)
    E = np.eye(A.shape[0])
    term = np.eye(A.shape[0])
    for j in range(1, 24):
        term = term @ B / j
        E = E + term
    for _ in range(k):
        E = E @ E
    return E


def companion(a):
    n = len(a)
    A = np.zeros((n, n))
    A[:-1, 1:] = np.eye(n - 1)
    A[-1, :] = [-x for x in a]
    return A


class TestHistory:
    def test_constant(self):
        h = History.constant(2.5)
        assert h.derivative(-0.3, 0) == 2.5
        assert h.derivative(-0.3, 1) == 0.0

    def test_polynomial_derivatives(self):
        h = History.polynomial((1.0, 2.0, 3.0))  # 1 + 2t + 3t^2
        assert h.derivative(-1.0, 0) == 2.0
        assert h.derivative(-1.0, 1) == -4.0
        assert h.derivative(-1.0, 2) == 6.0
        assert h.derivative(-1.0, 3) == 0.0

    def test_samples(self):
        t = np.linspace(-1.0, 0.0, 11)
        cols = np.stack([t**2, 2 * t], axis=1)
        h = History.from_samples(t, cols)
        assert abs(h.derivative(-0.55, 1) + 1.1) < 1e-12
        with pytest.raises(PreconditionError):
            h.derivative(-0.5, 2)

    def test_bad_kind(self):
        with pytest.raises(ValidationError):
            History("spline")


class TestSimulate:
    def test_delay_free_exponential(self):
        sys_ = DelaySystem(n=1, m=0, a=(1.0,), alpha=(0.0,), tau=1.0)
        traj = simulate(sys_, History.constant(1.0), 1.0, dt=1.0 / 200)
        assert abs(traj.value(1.0) - math.exp(-1.0)) < 1e-6

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_delay_free_matches_matrix_exponential(self, n):
        rng = np.random.default_rng(n)
        a = tuple(float(x) for x in rng.uniform(-1.0, 1.0, size=n))
        sys_ = DelaySystem(n=n, m=0, a=a, alpha=(0.0,), tau=1.0)
        coeffs = tuple(float(x) for x in rng.uniform(-0.5, 0.5, size=n))
        hist = History.polynomial(coeffs)
        traj = simulate(sys_, hist, 1.0, dt=1.0 / 400)
        u0 = hist.state(0.0, n)
        expected = tiny_expm(companion(a)) @ u0
        got = traj.state_at(1.0)
        assert np.max(np.abs(got - expected)) < 1e-8

    def test_retarded_transport_decay_bound(self):
        sys_ = synthesize(1, 1, 1.0, -2.0).system
        traj = simulate(sys_, History.polynomial((1.0,)), 20.0, dt=1.0 / 200)
        t = traj.t
        y = np.abs(traj.y)
        mask = t >= 2.0
        # |y| <= C e^{-1.9 t} for a fitted C
        envelope = y[mask] * np.exp(1.9 * t[mask])
        assert np.max(envelope) < 10.0 * max(1.0, envelope[0])

    def test_neutral_requires_polynomial_history(self):
        sys_ = synthesize(1, 1, 1.0, -2.0).system
        t = np.linspace(-1.0, 0.0, 5)
        h = History.from_samples(t, np.stack([np.ones_like(t), np.zeros_like(t)], axis=1))
        with pytest.raises(PreconditionError):
            simulate(sys_, h, 1.0)

    def test_dt_guard(self):
        sys_ = DelaySystem(n=1, m=0, a=(1.0,), alpha=(0.0,), tau=1.0)
        with pytest.raises(PreconditionError):
            simulate(sys_, History.constant(1.0), 1.0, dt=0.5)

    def test_step_size_convergence_order(self):
        # Smooth polynomial history: halving dt should improve the endpoint
        # by roughly 2^4 (observed order at least 3.5).
        sys_ = synthesize(2, 1, 1.0, -1.0).system
        hist = History.polynomial((0.3, -0.1, 0.05))
        vals = {}
        for k in (50, 100, 200, 400):
            traj = simulate(sys_, hist, 4.0, dt=1.0 / k)
            vals[k] = traj.value(4.0)
        e1 = abs(vals[50] - vals[400])
        e2 = abs(vals[100] - vals[400])
        e3 = abs(vals[200] - vals[400])
        order12 = math.log2(e1 / e2)
        order23 = math.log2(e2 / e3)
        assert order12 > 3.5 and order23 > 3.2


class TestDecayRate:
    def test_pure_exponential(self):
        t = np.linspace(0.0, 10.0, 2001)
        y = np.exp(-2.0 * t)
        traj_like = type("T", (), {})()
        traj_like.t = t
        traj_like.y = y
        assert abs(decay_rate(traj_like, 1.0) - 2.0) < 1e-3

    def test_transport_rate(self):
        sys_ = synthesize(1, 1, 1.0, -2.0).system
        traj = simulate(sys_, History.polynomial((1.0,)), 40.0, dt=1.0 / 200)
        rate = decay_rate(traj, 25.0)
        assert abs(rate - 2.0) < 0.1

    def test_pendulum_rate(self):
        sys_ = synthesize(2, 1, SQ2, -SQ2).system
        traj = simulate(sys_, History.polynomial((0.1,)), 80.0, dt=SQ2 / 200)
        rate = decay_rate(traj, 55.0)
        assert abs(rate - SQ2) < 0.05 * SQ2

    def test_too_few_samples(self):
        traj_like = type("T", (), {})()
        traj_like.t = np.linspace(0, 1, 20)
        traj_like.y = np.ones(20)
        with pytest.raises(ValidationError):
            decay_rate(traj_like, 0.0)


class TestTransport:
    def test_open_loop_zero_inflow(self):
        field = simulate_transport(
            1.0, 1.0, 0.0, 0.0, lambda x: np.sin(2.0 * np.pi * x), 3.0, nx=64
        )
        assert np.max(np.abs(field.trace_in)) == 0.0
        after = field.t > 1.0 + 1e-9
        assert np.max(np.abs(field.phi[after])) == 0.0

    def test_closed_loop_envelope_decay(self):
        e2 = math.exp(-2.0)
        field = simulate_transport(
            1.0, 1.0, -e2, -4.0 * e2, lambda x: np.sin(2.0 * np.pi * x), 12.0, nx=64
        )
        sup = field.sup_profile()
        early = np.max(sup[(field.t >= 1.0) & (field.t <= 2.0)])
        late = np.max(sup[(field.t >= 9.0) & (field.t <= 10.0)])
        assert late < early * math.exp(-2.0 * 7.0) * 50.0

    def test_grid_guards(self):
        with pytest.raises(PreconditionError):
            simulate_transport(1.0, 1.0, 0.0, 0.0, lambda x: x, 1.0, nx=8)
        with pytest.raises(PreconditionError):
            simulate_transport(1.0, 1.0, 0.0, 0.0, lambda x: x, 150.0, nx=64)

    def test_trace_matches_neutral_dde(self):
        # The boundary inflow obeys w'(t) = k_p w'(t - tau) + k_i w(t - tau);
        # simulate the equivalent neutral system seeded with the first
        # delay-interval of the trace and compare on [2 tau, 9 tau].
        e2 = math.exp(-2.0)
        k_p, k_i = -e2, -4.0 * e2
        tau = 1.0
        field = simulate_transport(
            1.0, 1.0, k_p, k_i, lambda x: np.sin(2.0 * np.pi * x), 10.0, nx=64, dt=tau / 2000
        )
        sys_ = DelaySystem(n=1, m=1, a=(0.0,), alpha=(-k_i, -k_p), tau=tau)
        n_hist = round(tau / (field.t[1] - field.t[0]))
        th, wh = field.t[: n_hist + 1], field.trace_in[: n_hist + 1]
        cheb = np.polynomial.chebyshev.Chebyshev.fit(th - tau, wh, 24, domain=[-tau, 0.0])
        hist = History.polynomial(tuple(cheb.convert(kind=np.polynomial.polynomial.Polynomial).coef))
        assert np.max(np.abs(cheb(th - tau) - wh)) < 1e-12
        traj = simulate(sys_, hist, 9.0 - tau, dt=tau / 2000)
        worst = 0.0
        for tq in np.linspace(2 * tau, 9.0, 200):
            w_ref = float(np.interp(tq, field.t, field.trace_in))
            worst = max(worst, abs(w_ref - traj.value(tq - tau)))
        assert worst < 1e-4
