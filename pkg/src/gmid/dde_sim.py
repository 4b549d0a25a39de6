"""Time-domain simulation of single-delay equations by the method of steps.

Each delay interval [k tau, (k+1) tau] is integrated with a classic
fixed-step fourth-order scheme on the order-n companion system; delayed
terms are read from the previous interval's dense cubic Hermite
interpolant.  For neutral equations the delayed n-th derivative is never
obtained by differentiating an interpolant: it is reconstructed by
evaluating the equation itself on earlier intervals, a recursion that
bottoms out in the (polynomial, hence n-times differentiable) initial
history.  A transport equation with proportional-integral boundary feedback
is simulated exactly along characteristics for cross-validation against the
equivalent neutral equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .budget import check_deadline
from .errors import PreconditionError, ValidationError
from .quasipoly import DelaySystem


class History:
    """Initial data on [-tau, 0]: y and its derivatives up to order n-1.

    Polynomial histories (including constants) provide exact derivatives of
    every order and are the only kind accepted for neutral runs, which need
    the n-th derivative on the initial interval.  Sampled histories carry
    columns (y, y', ..., y^(n-1)) and interpolate linearly.
    """

    POLYNOMIAL = "polynomial"
    SAMPLES = "samples"

    def __init__(self, kind: str, *, coeffs=None, sample_t=None, sample_cols=None):
        self.kind = kind
        if kind == self.POLYNOMIAL:
            if coeffs is None or len(tuple(coeffs)) == 0:
                raise ValidationError("polynomial history needs coefficients")
            self.coeffs = tuple(float(c) for c in coeffs)
        elif kind == self.SAMPLES:
            t = np.asarray(sample_t, dtype=float)
            cols = np.asarray(sample_cols, dtype=float)
            if t.ndim != 1 or cols.ndim != 2 or cols.shape[0] != t.size or t.size < 2:
                raise ValidationError("sampled history needs t (k,) and columns (k, j)")
            if not np.all(np.diff(t) > 0):
                raise ValidationError("sample times must be strictly increasing")
            self.sample_t = t
            self.sample_cols = cols
        else:
            raise ValidationError(f"unknown history kind {kind!r}")

    @classmethod
    def constant(cls, value: float) -> "History":
        return cls(cls.POLYNOMIAL, coeffs=(float(value),))

    @classmethod
    def polynomial(cls, coeffs) -> "History":
        return cls(cls.POLYNOMIAL, coeffs=tuple(coeffs))

    @classmethod
    def from_samples(cls, t, columns) -> "History":
        return cls(cls.SAMPLES, sample_t=t, sample_cols=columns)

    def derivative(self, theta: float, order: int) -> float:
        if self.kind == self.POLYNOMIAL:
            c = self.coeffs
            for _ in range(order):
                c = tuple(i * c[i] for i in range(1, len(c)))
            acc = 0.0
            for v in reversed(c):
                acc = acc * theta + v
            return acc
        if order >= self.sample_cols.shape[1]:
            raise PreconditionError(
                f"sampled history provides derivatives up to order "
                f"{self.sample_cols.shape[1] - 1}, requested {order}"
            )
        return float(np.interp(theta, self.sample_t, self.sample_cols[:, order]))

    def state(self, theta: float, n: int) -> np.ndarray:
        return np.array([self.derivative(theta, j) for j in range(n)])


@dataclass
class Trajectory:
    """Dense method-of-steps output: nodes, states, and node derivatives.

    states[i] holds (y, y', ..., y^(n-1)) at t[i]; derivs[i] holds the time
    derivative of that vector, so each component has a C^1 cubic Hermite
    interpolant between nodes.
    """

    t: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    tau: float

    @property
    def y(self) -> np.ndarray:
        return self.states[:, 0]

    def state_at(self, tq: float) -> np.ndarray:
        if tq <= self.t[0]:
            return self.states[0].copy()
        if tq >= self.t[-1]:
            return self.states[-1].copy()
        h = self.t[1] - self.t[0]
        i = min(int(tq / h), len(self.t) - 2)
        if tq < self.t[i]:
            i -= 1
        elif tq > self.t[i + 1]:
            i += 1
        t0, t1 = self.t[i], self.t[i + 1]
        th = (tq - t0) / (t1 - t0)
        hh = t1 - t0
        h00 = (1 + 2 * th) * (1 - th) ** 2
        h10 = th * (1 - th) ** 2
        h01 = th * th * (3 - 2 * th)
        h11 = th * th * (th - 1)
        return (
            h00 * self.states[i]
            + h10 * hh * self.derivs[i]
            + h01 * self.states[i + 1]
            + h11 * hh * self.derivs[i + 1]
        )

    def value(self, tq: float) -> float:
        return float(self.state_at(tq)[0])


def simulate(sys: DelaySystem, hist: History, t_end: float, dt: float | None = None) -> Trajectory:
    """Integrate the delay equation from the given history up to t_end."""
    tau, n, m = sys.tau, sys.n, sys.m
    if dt is None:
        dt = tau / 200.0
    if dt > tau / 20.0:
        raise PreconditionError("dt must be at most tau/20 for delayed-term accuracy")
    if t_end <= 0:
        raise ValidationError("t_end must be positive")
    if t_end > 1e4 * tau:
        raise PreconditionError("t_end capped at 1e4 delays")
    neutral = sys.is_neutral
    if neutral and hist.kind != History.POLYNOMIAL:
        raise PreconditionError(
            "neutral simulation needs an n-times differentiable (polynomial) history"
        )

    steps_per_seg = max(20, round(tau / dt))
    h = tau / steps_per_seg
    n_steps = int(math.ceil(t_end / h - 1e-12))

    ts = np.empty(n_steps + 1)
    us = np.empty((n_steps + 1, n))
    uds = np.empty((n_steps + 1, n))
    ts[0] = 0.0
    us[0] = hist.state(0.0, n)

    a = np.array(sys.a)
    alpha = np.array(sys.alpha)
    delay_free = sys.is_delay_free
    filled = 0  # index of the last node whose state is known
    # y^(n) at step midpoints; with the step grid aligned to the delay,
    # every delayed stage time is exactly an earlier node or midpoint, so
    # the neutral recursion costs O(1) per lookup (nodes reuse uds).
    yn_mid = np.empty(n_steps) if neutral else None

    def interp_state(tq: float) -> np.ndarray:
        if tq <= 0.0:
            return hist.state(tq, n)
        i = min(int(tq / h), filled - 1)
        if tq < ts[i]:
            i -= 1
        elif tq > ts[i + 1]:
            i += 1
        i = max(0, min(i, filled - 1))
        t0 = ts[i]
        th = (tq - t0) / h
        h00 = (1 + 2 * th) * (1 - th) ** 2
        h10 = th * (1 - th) ** 2
        h01 = th * th * (3 - 2 * th)
        h11 = th * th * (th - 1)
        return h00 * us[i] + h10 * h * uds[i] + h01 * us[i + 1] + h11 * h * uds[i + 1]

    def yn_at(td: float) -> float:
        # Delayed n-th derivative: from the history for negative times, else
        # the value the equation itself produced at that node or midpoint.
        if td < -1e-12 * h:
            return hist.derivative(td, n)
        idx2 = round(2.0 * td / h)
        if idx2 % 2 == 0:
            return uds[idx2 // 2][n - 1]
        return yn_mid[(idx2 - 1) // 2]

    def rhs(t: float, u: np.ndarray) -> np.ndarray:
        ynth = -float(a @ u)
        if not delay_free:
            td = t - tau
            ydel = interp_state(td)
            for j in range(min(m, n - 1) + 1):
                ynth -= alpha[j] * ydel[j]
            if neutral:
                ynth -= alpha[n] * yn_at(td)
        out = np.empty(n)
        out[:-1] = u[1:]
        out[-1] = ynth
        return out

    uds[0] = rhs(0.0, us[0])
    for i in range(n_steps):
        check_deadline()
        t0 = i * h
        u0 = us[i]
        k1 = uds[i]
        k2 = rhs(t0 + 0.5 * h, u0 + 0.5 * h * k1)
        k3 = rhs(t0 + 0.5 * h, u0 + 0.5 * h * k2)
        k4 = rhs(t0 + h, u0 + h * k3)
        us[i + 1] = u0 + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        ts[i + 1] = (i + 1) * h
        filled = i + 1
        uds[i + 1] = rhs(ts[i + 1], us[i + 1])
        if neutral:
            tm = t0 + 0.5 * h
            um = interp_state(tm)
            yn_mid[i] = rhs(tm, um)[-1]

    return Trajectory(t=ts, states=us, derivs=uds, tau=tau)


def decay_rate(traj: Trajectory, t_skip: float) -> float:
    """Exponential rate fitted to |y| after a transient skip.

    Peaks of |y| (local maxima) define the envelope; when the response is
    not oscillatory enough to yield peaks, the fit falls back to log|y| on
    all retained samples.  Returns the positive rate for a decaying signal.
    """
    mask = traj.t >= t_skip
    if int(mask.sum()) < 50:
        raise ValidationError("need at least 50 samples after t_skip")
    t = traj.t[mask]
    y = np.abs(traj.y[mask])
    peaks_t, peaks_y = [], []
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] > y[i + 1] and y[i] > 1e-280:
            peaks_t.append(t[i])
            peaks_y.append(y[i])
    if len(peaks_t) >= 5:
        slope = np.polyfit(np.array(peaks_t), np.log(np.array(peaks_y)), 1)[0]
        return -float(slope)
    keep = y > 1e-280
    if int(keep.sum()) < 2:
        raise ValidationError("signal identically zero after t_skip")
    slope = np.polyfit(t[keep], np.log(y[keep]), 1)[0]
    return -float(slope)


@dataclass
class TransportField:
    """Space-time field of the boundary-fed transport equation.

    trace_in is the controlled boundary value phi(t, 0); trace_out is the
    outflow phi(t, L) feeding the controller.
    """

    t: np.ndarray
    x: np.ndarray
    phi: np.ndarray
    trace_in: np.ndarray
    trace_out: np.ndarray
    L: float
    lam: float

    @property
    def tau(self) -> float:
        return self.L / self.lam

    def sup_profile(self) -> np.ndarray:
        return np.max(np.abs(self.phi), axis=1)


def simulate_transport(
    L: float,
    lam: float,
    k_p: float,
    k_i: float,
    phi0,
    t_end: float,
    nx: int = 256,
    dt: float | None = None,
) -> TransportField:
    """Exact characteristics transport with proportional-integral inflow.

    The outflow phi(t, L) equals the initial profile swept past the boundary
    for t < L/lam and the delayed inflow afterwards; the inflow is
    k_p phi(t, L) + k_i * integral of the outflow, with the integral
    accumulated by trapezoid on the trace grid.
    """
    if L <= 0 or lam <= 0:
        raise ValidationError("L and lambda must be positive")
    if nx < 32:
        raise PreconditionError("nx must be at least 32")
    tau = L / lam
    if t_end <= 0:
        raise ValidationError("t_end must be positive")
    if t_end > 100.0 * tau:
        raise PreconditionError("t_end capped at 100 transport times")
    if dt is None:
        dt = tau / 200.0
    steps_per_delay = max(20, round(tau / dt))
    dt = tau / steps_per_delay
    nt = int(math.ceil(t_end / dt - 1e-12))

    t = np.arange(nt + 1) * dt
    out = np.empty(nt + 1)  # phi(t, L)
    win = np.empty(nt + 1)  # phi(t, 0)
    integral = np.empty(nt + 1)
    for i in range(nt + 1):
        ti = t[i]
        if i <= steps_per_delay:
            out[i] = phi0(L - lam * ti)
        else:
            out[i] = win[i - steps_per_delay]
        integral[i] = 0.0 if i == 0 else integral[i - 1] + 0.5 * dt * (out[i - 1] + out[i])
        win[i] = k_p * out[i] + k_i * integral[i]

    try:
        probe = np.asarray(phi0(np.array([0.0, 0.5 * L])), dtype=float)
        phi0_vec = phi0 if probe.shape == (2,) else np.vectorize(phi0)
    except Exception:
        phi0_vec = np.vectorize(phi0)
    x = np.linspace(0.0, L, nx)
    phi = np.empty((nt + 1, nx))
    for j, xj in enumerate(x):
        shift = xj / lam
        early = t < shift
        swept = np.asarray(phi0_vec(np.where(early, xj - lam * t, 0.0)), dtype=float)
        fed = np.interp(t - shift, t, win)
        phi[:, j] = np.where(early, swept, fed)
    return TransportField(t=t, x=x, phi=phi, trace_in=win, trace_out=out, L=L, lam=lam)
