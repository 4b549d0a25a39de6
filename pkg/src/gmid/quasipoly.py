"""Quasipolynomials with a single delay: representation, evaluation, transforms.

The characteristic function of

    y^(n)(t) + a_{n-1} y^(n-1)(t) + ... + a_0 y(t)
        + alpha_m y^(m)(t - tau) + ... + alpha_0 y(t - tau) = 0

is D(s) = s^n + sum a_k s^k + e^{-s tau} sum alpha_k s^k.  This module holds
the equation data (DelaySystem), the generic sum-of-polynomial-exponentials
form (Quasipolynomial) with exact derivative evaluation, the strip counting
bounds, and the affine change of variables z = tau (s - s0) that moves a
designated real point to the origin and rescales the delay to 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import OverflowGuardError, ValidationError

# Double precision holds exp(x) for |x| up to ~709; stay under it.
OVERFLOW_EXPONENT = 700.0
MAX_EVAL_ORDER = 64


def _check_exponent(x: float) -> None:
    if abs(x) > OVERFLOW_EXPONENT:
        raise OverflowGuardError(
            f"exponent {x:.3g} exceeds the safe range +/-{OVERFLOW_EXPONENT:g}; "
            "rescale the problem or shrink the search window"
        )


@dataclass(frozen=True)
class DelaySystem:
    """Coefficient data (n, m, a, alpha, tau) of a single-delay linear DDE.

    a has length n (orders 0..n-1), alpha has length m+1 (orders 0..m).
    The equation is retarded when m < n and neutral when m = n; this
    classification requires alpha[m] != 0.  An all-zero alpha is accepted as
    a degenerate delay-free system (used by simulator and abscissa fixtures).
    """

    n: int
    m: int
    a: tuple[float, ...]
    alpha: tuple[float, ...]
    tau: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.m, int) or not 0 <= self.m <= self.n:
            raise ValidationError(f"m must satisfy 0 <= m <= n, got m={self.m!r}")
        if not (isinstance(self.tau, (int, float)) and math.isfinite(self.tau) and self.tau > 0):
            raise ValidationError(f"tau must be a positive finite real, got {self.tau!r}")
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "alpha", tuple(float(x) for x in self.alpha))
        object.__setattr__(self, "tau", float(self.tau))
        if len(self.a) != self.n:
            raise ValidationError(f"a must have length n={self.n}, got {len(self.a)}")
        if len(self.alpha) != self.m + 1:
            raise ValidationError(f"alpha must have length m+1={self.m + 1}, got {len(self.alpha)}")
        if not all(math.isfinite(x) for x in self.a + self.alpha):
            raise ValidationError("coefficients must be finite")
        if self.alpha[self.m] == 0.0 and any(x != 0.0 for x in self.alpha):
            raise ValidationError("alpha[m] must be nonzero (or alpha identically zero)")

    @property
    def is_delay_free(self) -> bool:
        return all(x == 0.0 for x in self.alpha)

    @property
    def is_neutral(self) -> bool:
        return self.m == self.n and not self.is_delay_free

    @property
    def is_retarded(self) -> bool:
        return self.m < self.n and not self.is_delay_free

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "a": list(self.a),
            "alpha": list(self.alpha),
            "tau": self.tau,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DelaySystem":
        if not isinstance(data, dict):
            raise ValidationError("system must be a JSON object")
        missing = {"n", "m", "a", "alpha", "tau"} - set(data)
        if missing:
            raise ValidationError(f"system object missing fields: {sorted(missing)}")
        n, m = data["n"], data["m"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ValidationError("field 'n' must be an integer")
        if not isinstance(m, int) or isinstance(m, bool):
            raise ValidationError("field 'm' must be an integer")
        for key in ("a", "alpha"):
            if not isinstance(data[key], list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in data[key]
            ):
                raise ValidationError(f"field {key!r} must be an array of numbers")
        if not isinstance(data["tau"], (int, float)) or isinstance(data["tau"], bool):
            raise ValidationError("field 'tau' must be a number")
        return cls(n=n, m=m, a=tuple(data["a"]), alpha=tuple(data["alpha"]), tau=float(data["tau"]))


def _poly_derivative(coeffs: tuple[float, ...]) -> tuple[float, ...]:
    return tuple(i * coeffs[i] for i in range(1, len(coeffs)))


def _polyval(coeffs, s):
    acc = 0.0 + 0.0j
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc


def _polyval_abs(coeffs, r: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * r + abs(c)
    return acc


@dataclass(frozen=True)
class Quasipolynomial:
    """Finite sum Q(s) = sum_k P_k(s) e^{sigma_k s} with real shifts sigma_k.

    Terms are (shift, coefficients) pairs, coefficients in the monomial basis
    ascending by degree with a nonzero leading coefficient; shifts are
    pairwise distinct.  The degree used by the strip counting bound is
    (number of terms - 1) + sum of polynomial degrees.
    """

    terms: tuple[tuple[float, tuple[complex, ...]], ...]

    def __post_init__(self):
        cleaned = []
        for shift, coeffs in self.terms:
            coeffs = tuple(coeffs)
            while coeffs and coeffs[-1] == 0:
                coeffs = coeffs[:-1]
            if not coeffs:
                raise ValidationError("each term must carry a nonzero polynomial")
            cleaned.append((float(shift), coeffs))
        shifts = [s for s, _ in cleaned]
        if len(set(shifts)) != len(shifts):
            raise ValidationError("term shifts must be pairwise distinct")
        if not cleaned:
            raise ValidationError("a quasipolynomial needs at least one term")
        object.__setattr__(self, "terms", tuple(cleaned))

    @property
    def degree(self) -> int:
        return len(self.terms) - 1 + sum(len(c) - 1 for _, c in self.terms)

    @property
    def shift_gap(self) -> float:
        shifts = [s for s, _ in self.terms]
        return max(shifts) - min(shifts)

    def eval(self, s: complex, order: int = 0) -> complex:
        """Order-th derivative at s, exact term-wise Leibniz differentiation."""
        value, _ = self.eval_with_scale(s, order)
        return value

    def eval_with_scale(self, s: complex, order: int = 0) -> tuple[complex, float]:
        """Value plus the cancellation scale (sum of |summand| magnitudes).

        The scale is what the value would be if every monomial-times-
        exponential summand added constructively; residuals should be judged
        against it, not against the (possibly fully cancelled) value.
        """
        if not isinstance(order, int) or order < 0:
            raise ValidationError("derivative order must be a nonnegative integer")
        if order > MAX_EVAL_ORDER:
            raise ValidationError(f"derivative order capped at {MAX_EVAL_ORDER}")
        s = complex(s)
        r = abs(s)
        total = 0.0 + 0.0j
        scale = 0.0
        for shift, coeffs in self.terms:
            _check_exponent(shift * s.real)
            ez = cmath.exp(shift * s)
            aez = abs(ez)
            inner = 0.0 + 0.0j
            inner_scale = 0.0
            dcoeffs = coeffs
            for j in range(order + 1):
                if not dcoeffs:
                    break
                w = math.comb(order, j) * shift ** (order - j) if order != j else 1.0
                if w != 0.0:
                    inner += w * _polyval(dcoeffs, s)
                    inner_scale += abs(w) * _polyval_abs(dcoeffs, r)
                dcoeffs = _poly_derivative(dcoeffs)
            total += ez * inner
            scale += aez * inner_scale
        return total, scale

    def derivative(self, order: int = 1) -> "Quasipolynomial":
        """Exact derivative; terms whose polynomial factor vanishes are dropped
        (a zero-shift polynomial eventually differentiates away)."""
        q = self
        for _ in range(order):
            terms = []
            for shift, coeffs in q.terms:
                dp = _poly_derivative(coeffs)
                new = [shift * c for c in coeffs]
                for i, c in enumerate(dp):
                    new[i] += c
                if any(c != 0 for c in new):
                    terms.append((shift, tuple(new)))
            if not terms:
                raise ValidationError("derivative vanished identically")
            q = Quasipolynomial(tuple(terms))
        return q

    def evaluator(self):
        """Fast closure returning (value, scale) pairs for contour walks."""
        terms = self.terms

        def fs(s: complex) -> tuple[complex, float]:
            s = complex(s)
            r = abs(s)
            total = 0.0 + 0.0j
            scale = 0.0
            for shift, coeffs in terms:
                x = shift * s.real
                if abs(x) > OVERFLOW_EXPONENT:
                    raise OverflowGuardError(
                        f"exponent {x:.3g} out of range during contour evaluation"
                    )
                ez = cmath.exp(shift * s)
                total += ez * _polyval(coeffs, s)
                scale += abs(ez) * _polyval_abs(coeffs, r)
            return total, scale

        return fs


def as_quasipolynomial(sys: DelaySystem) -> Quasipolynomial:
    """Characteristic function of the system as a two-term quasipolynomial.

    The zero-shift polynomial is monic of degree n; the delayed term carries
    shift -tau.  A degenerate all-zero alpha collapses to a single term.
    """
    p0 = tuple(sys.a) + (1.0,)
    terms: list[tuple[float, tuple[float, ...]]] = [(0.0, p0)]
    if not sys.is_delay_free:
        terms.append((-sys.tau, tuple(sys.alpha)))
    return Quasipolynomial(tuple(terms))


def polya_szego_bounds(q: Quasipolynomial, im_lo: float, im_hi: float) -> tuple[int, int]:
    """Bounds on the zero count (with multiplicity) in a horizontal strip.

    Returns (lower, upper) with lower clamped at zero.  For a zero-height
    strip the upper bound is exactly the degree, which also caps the
    multiplicity of any single root.
    """
    if im_lo > im_hi:
        raise ValidationError("strip requires im_lo <= im_hi")
    x = q.shift_gap * (im_hi - im_lo) / (2.0 * math.pi)
    d = q.degree
    lower = max(0, math.ceil(x - d))
    upper = math.floor(x + d)
    return lower, upper


@dataclass(frozen=True)
class NormalizedCoeffs:
    """Coefficients (b, beta) of the shifted/rescaled form with delay 1.

    The transformed function is z^n + sum b_k z^k + e^{-z} sum beta_k z^k.
    """

    b: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        object.__setattr__(self, "beta", tuple(float(x) for x in self.beta))

    def quasipolynomial(self) -> Quasipolynomial:
        n = len(self.b)
        p0 = self.b + (1.0,)
        if any(x != 0.0 for x in self.beta):
            return Quasipolynomial(((0.0, p0), (-1.0, self.beta)))
        return Quasipolynomial(((0.0, p0),))


def confluent_vandermonde(k: int, tau: float, s0: float) -> tuple[np.ndarray, np.ndarray]:
    """Upper-triangular change-of-basis matrix T_k and its closed-form inverse.

    T_k[i, j] = C(j, i) tau^{k-i} s0^{j-i} for i <= j; the inverse has
    entries (-1)^{l-j} C(l, j) s0^{l-j} / tau^{k-l}.  The inverse is built
    from the entry formula, not numerically, so the product identity is a
    genuine test of both.
    """
    if not isinstance(k, int) or k < 1:
        raise ValidationError("matrix size k must be a positive integer")
    if tau <= 0:
        raise ValidationError("tau must be positive")
    T = np.zeros((k, k))
    S = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            T[i, j] = comb(j, i) * tau ** (k - i) * s0 ** (j - i)
            S[i, j] = (-1.0) ** (j - i) * comb(j, i) * s0 ** (j - i) / tau ** (k - j)
    return T, S


def normalize(sys: DelaySystem, s0: float) -> NormalizedCoeffs:
    """Coefficients after the change of variables z = tau (s - s0)."""
    n, m, tau = sys.n, sys.m, sys.tau
    _check_exponent(s0 * tau)
    es = math.exp(-s0 * tau)
    b = []
    for k in range(n):
        acc = comb(n, k) * tau ** (n - k) * s0 ** (n - k)
        acc += tau ** (n - k) * sum(
            comb(j, k) * s0 ** (j - k) * sys.a[j] for j in range(k, n)
        )
        b.append(acc)
    beta = []
    for k in range(m + 1):
        acc = tau ** (n - k) * es * sum(
            comb(j, k) * s0 ** (j - k) * sys.alpha[j] for j in range(k, m + 1)
        )
        beta.append(acc)
    return NormalizedCoeffs(b=tuple(b), beta=tuple(beta))


def denormalize(nc: NormalizedCoeffs, n: int, m: int, tau: float, s0: float) -> DelaySystem:
    """Inverse of normalize: recover (a, alpha) from (b, beta)."""
    if len(nc.b) != n or len(nc.beta) != m + 1:
        raise ValidationError(
            f"coefficient lengths ({len(nc.b)}, {len(nc.beta)}) inconsistent with n={n}, m={m}"
        )
    _check_exponent(s0 * tau)
    es = math.exp(s0 * tau)
    a = []
    for k in range(n):
        acc = comb(n, k) * (-s0) ** (n - k)
        acc += sum(
            (-1.0) ** (j - k) * comb(j, k) * s0 ** (j - k) / tau ** (n - j) * nc.b[j]
            for j in range(k, n)
        )
        a.append(acc)
    alpha = []
    for k in range(m + 1):
        acc = es * sum(
            (-1.0) ** (j - k) * comb(j, k) * s0 ** (j - k) / tau ** (n - j) * nc.beta[j]
            for j in range(k, m + 1)
        )
        alpha.append(acc)
    return DelaySystem(n=n, m=m, a=tuple(a), alpha=tuple(alpha), tau=tau)
