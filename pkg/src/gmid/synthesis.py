"""Synthesis and certification of maximal-multiplicity dominant-root designs.

For the single-delay system of order n with delayed order m, a real root of
the characteristic function can reach multiplicity at most m+n+1.  This
module produces the unique coefficient set forcing that multiplicity at a
chosen real point s0, checks claimed multiplicities with cancellation-aware
residuals, exposes two independent factorization oracles for the normalized
function, solves the neutral-case imaginary root chain, and evaluates the
closed-form stability test a_{n-1} > -n(m+1)/tau.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from math import comb, factorial

import numpy as np

from .errors import NonConvergenceError, OverflowGuardError, PreconditionError, ValidationError
from .kummer import KummerParams, phi_series
from .numerics import gauss_legendre_adaptive
from .quasipoly import (
    DelaySystem,
    NormalizedCoeffs,
    Quasipolynomial,
    as_quasipolynomial,
)

MAX_FACTORIAL_ORDER = 150


class Dominance(Enum):
    STRICT = "strict"
    ON_LINE = "on_line"
    UNVERIFIED = "unverified"
    VIOLATED = "violated"


@dataclass(frozen=True)
class GmidCertificate:
    """Outcome of forcing a maximal-multiplicity root at s0.

    derivative_residuals[k] is |D^(k)(s0)| divided by the sum of the
    magnitudes of its summands, for k = 0..m+n.  The certificate is stable
    exactly when s0 < 0, equivalently a_{n-1} > -n(m+1)/tau.
    """

    system: DelaySystem
    s0: float
    multiplicity: int
    derivative_residuals: tuple[float, ...]
    dominance: Dominance
    stable: bool
    neutral_chain: tuple[float, ...] | None = None

    def with_dominance(
        self, dominance: Dominance, neutral_chain: tuple[float, ...] | None = None
    ) -> "GmidCertificate":
        if neutral_chain is None:
            return replace(self, dominance=dominance)
        return replace(self, dominance=dominance, neutral_chain=neutral_chain)


@dataclass(frozen=True)
class ChainSpec:
    """Nonzero imaginary offsets of the neutral maximal-multiplicity spectrum.

    Each zeta solves tan(zeta/2) * D(zeta) = zeta * N(zeta) for the order-n
    trigonometric chain equation; values come in +/- pairs and exclude 0,
    which belongs to the multiple root itself.
    """

    n: int
    zeta_values: tuple[float, ...]
    window: float


def admissible_root(n: int, m: int, tau: float, a_n_minus_1: float) -> float:
    """The only real point where maximal multiplicity can occur given a_{n-1}."""
    if tau <= 0:
        raise ValidationError("tau must be positive")
    return -a_n_minus_1 / n - (m + 1) / tau


def stability_verdict(n: int, m: int, tau: float, a_n_minus_1: float) -> bool:
    """Exponential stability test for a maximal-multiplicity design.

    True iff a_{n-1} > -n(m+1)/tau, which is equivalent to the forced root
    satisfying s0 < 0; the boundary case is excluded.
    """
    if tau <= 0:
        raise ValidationError("tau must be positive")
    return a_n_minus_1 > -n * (m + 1) / tau


def normalized_max_mult(n: int, m: int) -> NormalizedCoeffs:
    """Closed-form (b, beta) making 0 a root of multiplicity m+n+1.

    b_k = (-1)^{n-k} (n!/k!) C(m+n-k, m),
    beta_k = (-1)^{n-1} (m+n-k)! / (k! (m-k)!).
    Exact integer arithmetic; guarded against leaving float range.
    """
    _check_orders(n, m)
    if m + n > MAX_FACTORIAL_ORDER:
        raise OverflowGuardError(f"m+n={m + n} exceeds factorial guard {MAX_FACTORIAL_ORDER}")
    b = tuple(
        float((-1) ** (n - k) * (factorial(n) // factorial(k)) * comb(m + n - k, m))
        for k in range(n)
    )
    beta = tuple(
        float((-1) ** (n - 1) * factorial(m + n - k) // (factorial(k) * factorial(m - k)))
        for k in range(m + 1)
    )
    return NormalizedCoeffs(b=b, beta=beta)


def max_mult_by_linear_system(n: int, m: int) -> np.ndarray:
    """Independent oracle for the delayed-side coefficients beta.

    Solves the (m+1)x(m+1) system T beta = -e0 with
    T[j, k] = (-1)^{n+j-k} / (n+j-k)! by dense LU.  The matrix is provably
    nonsingular (its scaled form has determinant +/-1), so a singular solve
    here indicates a genuine implementation fault.
    """
    _check_orders(n, m)
    if m + n > 30:
        raise PreconditionError("dense solve limited to m+n <= 30")
    size = m + 1
    T = np.empty((size, size))
    for j in range(size):
        for k in range(size):
            T[j, k] = (-1.0) ** (n + j - k) / factorial(n + j - k)
    rhs = np.zeros(size)
    rhs[0] = -1.0
    try:
        beta = np.linalg.solve(T, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - provably unreachable
        raise NonConvergenceError(f"chain system reported singular: {exc}") from exc
    return beta


def max_mult_system(n: int, m: int, tau: float, s0: float) -> DelaySystem:
    """The unique (a, alpha) giving the characteristic function a root of
    multiplicity m+n+1 at the real point s0."""
    _check_orders(n, m)
    if tau <= 0:
        raise ValidationError("tau must be positive")
    if abs(s0 * tau) > 700.0:
        raise OverflowGuardError("|s0 * tau| too large for the exponential factor")
    es = math.exp(s0 * tau)
    a = []
    for k in range(n):
        acc = comb(n, k) * (-s0) ** (n - k)
        acc += (
            (-1.0) ** (n - k)
            * factorial(n)
            * sum(
                comb(j, k) * comb(m + n - j, m) * s0 ** (j - k) / (factorial(j) * tau ** (n - j))
                for j in range(k, n)
            )
        )
        a.append(acc)
    alpha = []
    for k in range(m + 1):
        acc = (
            (-1.0) ** (n - 1)
            * es
            * sum(
                (-1.0) ** (j - k)
                * factorial(m + n - j)
                * s0 ** (j - k)
                / (factorial(k) * factorial(j - k) * factorial(m - j) * tau ** (n - j))
                for j in range(k, m + 1)
            )
        )
        alpha.append(acc)
    return DelaySystem(n=n, m=m, a=tuple(a), alpha=tuple(alpha), tau=tau)


def synthesize(n: int, m: int, tau: float, s0: float) -> GmidCertificate:
    """Build the maximal-multiplicity design at s0 and certify it locally.

    The certificate carries the scaled derivative residuals at orders
    0..m+n, the verified multiplicity, and the closed-form stability
    verdict.  Dominance is left unverified here; the root finder upgrades
    it against a windowed spectrum computation.
    """
    if isinstance(s0, complex):
        raise ValidationError("the forced root s0 must be real")
    sys = max_mult_system(n, m, tau, float(s0))
    expected = admissible_root(n, m, tau, sys.a[n - 1])
    if abs(expected - s0) > 1e-9 * max(1.0, abs(s0)):
        raise NonConvergenceError(
            f"synthesized a_{{n-1}} inconsistent with forced root: {expected} vs {s0}"
        )
    residuals = derivative_residuals(sys, s0)
    mult = verify_multiplicity(sys, s0, rel_tol=1e-8)
    return GmidCertificate(
        system=sys,
        s0=float(s0),
        multiplicity=mult,
        derivative_residuals=residuals,
        dominance=Dominance.UNVERIFIED,
        stable=stability_verdict(n, m, tau, sys.a[n - 1]),
        neutral_chain=None,
    )


def derivative_residuals(sys: DelaySystem, s0: float) -> tuple[float, ...]:
    """Scaled |D^(k)(s0)| for k = 0..m+n."""
    q = as_quasipolynomial(sys)
    out = []
    for k in range(sys.m + sys.n + 1):
        value, scale = q.eval_with_scale(s0, k)
        out.append(abs(value) / max(scale, 1e-300))
    return tuple(out)


def verify_multiplicity(sys: DelaySystem, s0: float, rel_tol: float = 1e-8) -> int:
    """Largest k with all scaled residuals below rel_tol at orders < k.

    Residuals are judged against the summand-magnitude scale so that a near
    total cancellation still registers as a vanishing derivative.  Capped at
    m+n+1, the maximum any root of the characteristic function can reach.
    """
    if not 0 < rel_tol <= 1e-3:
        raise ValidationError("rel_tol must lie in (0, 1e-3]")
    q = as_quasipolynomial(sys)
    cap = sys.m + sys.n + 1
    for k in range(cap):
        value, scale = q.eval_with_scale(s0, k)
        if abs(value) >= rel_tol * max(scale, 1e-300):
            return k
    return cap


def factorization_residual_integral(n: int, m: int, z: complex) -> float:
    """Mismatch between the normalized function and its kernel-integral form.

    Compares z^{m+n+1}/m! times the finite Laplace transform of
    t^m (1-t)^n against direct evaluation, scaled by max(1, |value|).
    """
    _check_orders(n, m)
    z = complex(z)
    if abs(z) > 50:
        raise PreconditionError("|z| <= 50 required")
    q = normalized_max_mult(n, m).quasipolynomial()
    direct = q.eval(z)
    integral = gauss_legendre_adaptive(
        lambda t: t**m * (1.0 - t) ** n * cmath.exp(-z * t), 0.0, 1.0
    )
    factored = z ** (m + n + 1) / factorial(m) * integral
    return abs(direct - factored) / max(1.0, abs(direct))


def factorization_residual_kummer(n: int, m: int, z: complex) -> float:
    """Mismatch between the normalized function and its series-factor form.

    Compares n!/(m+n+1)! z^{m+n+1} Phi(m+1, m+n+2, -z) against direct
    evaluation, scaled by max(1, |value|).
    """
    _check_orders(n, m)
    z = complex(z)
    if abs(z) > 50:
        raise PreconditionError("|z| <= 50 required")
    q = normalized_max_mult(n, m).quasipolynomial()
    direct = q.eval(z)
    phi = phi_series(KummerParams(m + 1, m + n + 2), -z)
    factored = factorial(n) / factorial(m + n + 1) * z ** (m + n + 1) * phi
    return abs(direct - factored) / max(1.0, abs(direct))


def chain_polynomials(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Even polynomials (N, D) of the order-n chain equation, as coefficient
    arrays in zeta^2 ascending."""
    num = np.array(
        [
            (-1.0) ** l * factorial(2 * n - 2 * l - 1) / (factorial(2 * l + 1) * factorial(n - 2 * l - 1))
            for l in range((n - 1) // 2 + 1)
        ]
    )
    den = np.array(
        [
            (-1.0) ** l * factorial(2 * n - 2 * l) / (factorial(2 * l) * factorial(n - 2 * l))
            for l in range(n // 2 + 1)
        ]
    )
    return num, den


def chain_equation_residual(n: int, zeta: float) -> float:
    """Scaled residual of sin(z/2) D(z) - z cos(z/2) N(z) at z = zeta."""
    num, den = chain_polynomials(n)
    u = zeta * zeta
    nval = float(np.polynomial.polynomial.polyval(u, num))
    dval = float(np.polynomial.polynomial.polyval(u, den))
    lhs = math.sin(zeta / 2.0) * dval
    rhs = zeta * math.cos(zeta / 2.0) * nval
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def neutral_chain(n: int, zeta_window: float) -> ChainSpec:
    """All nonzero chain offsets with |zeta| <= zeta_window.

    The continuous form sin(zeta/2) D - zeta cos(zeta/2) N is bracketed on a
    grid refined between the tangent poles (2k+1)pi and the positive zeros
    of D, then bisected; solutions are mirrored to negative zeta.  zeta = 0
    is excluded by construction.
    """
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n must be a positive integer")
    if zeta_window <= 0:
        raise ValidationError("zeta_window must be positive")
    num, den = chain_polynomials(n)

    def g(z: float) -> float:
        u = z * z
        return math.sin(z / 2.0) * float(
            np.polynomial.polynomial.polyval(u, den)
        ) - z * math.cos(z / 2.0) * float(np.polynomial.polynomial.polyval(u, num))

    breakpoints = {0.0, zeta_window}
    k = 0
    while (2 * k + 1) * math.pi < zeta_window:
        breakpoints.add((2 * k + 1) * math.pi)
        k += 1
    if len(den) > 1:
        for u_root in np.roots(den[::-1]):
            if abs(u_root.imag) < 1e-12 and u_root.real > 0:
                z = math.sqrt(u_root.real)
                if z < zeta_window:
                    breakpoints.add(z)
    grid = sorted(breakpoints)

    roots: list[float] = []
    for lo, hi in zip(grid[:-1], grid[1:]):
        # Dense scan inside each pole-free stretch; the equation oscillates
        # at most once per branch so a modest density suffices.
        samples = max(64, int(16 * (hi - lo)))
        prev_x = lo + 1e-9 * max(1.0, hi - lo)
        prev_g = g(prev_x)
        for i in range(1, samples + 1):
            x = lo + (hi - lo) * i / samples
            x = min(x, hi - 1e-12 * max(1.0, hi))
            gx = g(x)
            if prev_g == 0.0:
                roots.append(prev_x)
            elif gx != 0.0 and (prev_g < 0) != (gx < 0):
                roots.append(_bisect(g, prev_x, x))
            prev_x, prev_g = x, gx
    roots = [z for z in roots if z > 1e-6]
    deduped: list[float] = []
    for z in sorted(roots):
        if not deduped or z - deduped[-1] > 1e-8:
            deduped.append(z)
    for z in deduped:
        resid = chain_equation_residual(n, z)
        if resid > 1e-10:
            raise NonConvergenceError(f"chain solution zeta={z} has residual {resid:.3g}")
    values = tuple(sorted([-z for z in deduped] + deduped))
    return ChainSpec(n=n, zeta_values=values, window=float(zeta_window))


def normalized_for_neutral(n: int) -> Quasipolynomial:
    """Normalized maximal-multiplicity function for the neutral order n."""
    return normalized_max_mult(n, n).quasipolynomial()


def _bisect(g, lo: float, hi: float, tol: float = 1e-13) -> float:
    glo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0 or hi - lo < tol * max(1.0, abs(mid)):
            return mid
        if (glo < 0) != (gm < 0):
            hi = mid
        else:
            lo, glo = mid, gm
    return 0.5 * (lo + hi)


def _check_orders(n: int, m: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n must be a positive integer")
    if not isinstance(m, int) or not 0 <= m <= n:
        raise ValidationError("m must satisfy 0 <= m <= n")
