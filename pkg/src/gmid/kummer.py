"""Confluent hypergeometric function Phi(a, b, z) and zero-location checks.

Phi is the entire series sum_k (a)_k z^k / ((b)_k k!).  The series evaluator
is primary; an independent Beta-weighted integral evaluator exists for
cross-validation, together with residual checks of the reflection identity
Phi(a, b, z) = e^z Phi(b-a, b, -z) and of the second-order differential
equation z y'' + (b - z) y' - a y = 0.  The region classifier encodes where
nontrivial zeros may lie as a function of sign(b - 2a).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from dataclasses import dataclass
from enum import Enum

from .errors import NonConvergenceError, PreconditionError, ValidationError
from .numerics import KahanSum, gauss_legendre_adaptive, gauss_legendre_panel

MAX_SERIES_TERMS = 100_000


class ZeroRegion(Enum):
    ON_IMAGINARY_AXIS = "on_imaginary_axis"
    RIGHT_HALF = "right_half"
    LEFT_HALF = "left_half"


class ClassificationError(PreconditionError):
    """The supplied point is not a zero, or contradicts the claimed region."""


@dataclass(frozen=True)
class KummerParams:
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValidationError("parameters must be finite reals")
        nearest = round(self.b)
        if nearest <= 0 and abs(self.b - nearest) < 1e-12:
            raise ValidationError(f"b={self.b} is a forbidden nonpositive integer")


def phi_series(p: KummerParams, z: complex, rel_tol: float = 1e-15) -> complex:
    value, _ = phi_series_with_scale(p, z, rel_tol)
    return value


def phi_series_with_scale(
    p: KummerParams, z: complex, rel_tol: float = 1e-15
) -> tuple[complex, float]:
    """Series value plus the sum of term magnitudes (the cancellation scale).

    For Re(z) < 0 the direct sum cancels catastrophically (the terms hump
    far above the value), so the evaluation routes through the reflection
    Phi(a, b, z) = e^z Phi(b-a, b, -z), whose argument has a nonnegative
    real part.  The returned scale describes the computation actually
    performed.
    """
    if rel_tol < 1e-15:
        raise ValidationError("rel_tol must be at least 1e-15")
    z = complex(z)
    if abs(z) > 200:
        raise PreconditionError("|z| <= 200 required for direct series evaluation")
    if z.real < 0.0:
        factor = cmath.exp(z)
        value, scale = _phi_series_stable(KummerParams(p.b - p.a, p.b), -z, rel_tol)
        return factor * value, abs(factor) * scale
    return _phi_series_stable(p, z, rel_tol)


def _phi_series_stable(p: KummerParams, z: complex, rel_tol: float) -> tuple[complex, float]:
    value, scale, terms = _phi_series_raw(p, z, rel_tol)
    # On (or near) the imaginary axis the hump of the series still towers
    # over the value and compensated doubles cannot deliver rel_tol; rerun
    # the same partial sum in exact rational arithmetic.
    if 4e-16 * scale > rel_tol * max(abs(value), 1.0):
        value = _phi_series_exact(p, z, terms + 16)
    return value, scale


def _phi_series_raw(p: KummerParams, z: complex, rel_tol: float) -> tuple[complex, float, int]:
    """Literal partial sum with the ratio recurrence
    t_{k+1} = t_k (a+k) z / ((b+k)(k+1)).

    Terms grow before they decay, so convergence is declared only after
    three consecutive small terms once k has passed |z|; summation is
    compensated.
    """
    acc = KahanSum()
    term: complex = 1.0 + 0.0j
    acc.add(term)
    scale = 1.0
    small_run = 0
    hump = abs(z)
    for k in range(MAX_SERIES_TERMS):
        term = term * (p.a + k) * z / ((p.b + k) * (k + 1))
        acc.add(term)
        scale += abs(term)
        if k > hump:
            if abs(term) < rel_tol * max(abs(acc.value), 1e-300):
                small_run += 1
                if small_run >= 3:
                    return acc.value, scale, k + 1
            else:
                small_run = 0
    raise NonConvergenceError(
        f"series for Phi({p.a}, {p.b}, {z}) did not converge in {MAX_SERIES_TERMS} terms"
    )


def _phi_series_exact(p: KummerParams, z: complex, n_terms: int) -> complex:
    """Exactly rounded partial sum: floats are rationals, so the whole sum
    can be carried in Fraction arithmetic and rounded once."""
    a, b = Fraction(p.a), Fraction(p.b)
    zr, zi = Fraction(z.real), Fraction(z.imag)
    tr, ti = Fraction(1), Fraction(0)
    sr, si = tr, ti
    for k in range(n_terms):
        q = (a + k) / ((b + k) * (k + 1))
        tr, ti = q * (tr * zr - ti * zi), q * (tr * zi + ti * zr)
        sr += tr
        si += ti
    return complex(float(sr), float(si))


def gamma_positive(x: float) -> float:
    """Gamma on the real arguments used here (x >= 0.5)."""
    if x < 0.5:
        raise PreconditionError("gamma evaluator restricted to arguments >= 0.5")
    return math.gamma(x)


def _beta_half(w: complex, s: float, c: float) -> complex:
    """Integral of e^{w u} u^{s-1} (1-u)^{c-1} over [0, 1/2].

    When s < 1 the mesh is graded dyadically toward the (integrable)
    singularity at u = 0 until the remaining sliver falls below the target
    accuracy; the sliver itself is taken in one fixed panel.
    """

    def g(u: float) -> complex:
        return cmath.exp(w * u) * u ** (s - 1.0) * (1.0 - u) ** (c - 1.0)

    if s >= 1.0:
        return gauss_legendre_adaptive(g, 0.0, 0.5, rel_tol=1e-14)
    levels = min(2000, int(math.ceil(54.0 / s)))
    total = gauss_legendre_panel(g, 0.0, 2.0 ** (-levels))
    knots = [2.0 ** (-j) for j in range(levels, 0, -1)]
    for lo, hi in zip(knots[:-1], knots[1:]):
        total += gauss_legendre_adaptive(g, lo, hi, rel_tol=1e-14)
    return total


def phi_integral(p: KummerParams, z: complex) -> complex:
    """Beta-weighted integral form, valid for b > a > 0.

    The [0, 1] range is split at 1/2 and the upper half folded to the origin
    by u = 1 - t, so each endpoint singularity is graded toward an exactly
    representable zero.
    """
    if not p.b > p.a > 0:
        raise PreconditionError("integral form requires b > a > 0")
    z = complex(z)
    pa, pb = p.a, p.b
    prefactor = gamma_positive(pb) / (gamma_positive(pa) * gamma_positive(pb - pa))
    lower = _beta_half(z, pa, pb - pa)
    upper = cmath.exp(z) * _beta_half(-z, pb - pa, pa)
    return prefactor * (lower + upper)


def reflection_residual(p: KummerParams, z: complex) -> float:
    """Scaled defect of Phi(a, b, z) = e^z Phi(b-a, b, -z)."""
    z = complex(z)
    lhs = phi_series(p, z)
    rhs = cmath.exp(z) * phi_series(KummerParams(p.b - p.a, p.b), -z)
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def ode_residual(p: KummerParams, z: complex) -> float:
    """Scaled defect of z y'' + (b - z) y' - a y at y = Phi(a, b, .).

    Derivatives use the parameter-shift identities y' = (a/b) Phi(a+1, b+1, .)
    and y'' = a(a+1)/(b(b+1)) Phi(a+2, b+2, .), i.e. the term-wise
    differentiated series.
    """
    z = complex(z)
    phi0 = phi_series(p, z)
    phi1 = p.a / p.b * phi_series(KummerParams(p.a + 1, p.b + 1), z)
    phi2 = (
        p.a * (p.a + 1.0) / (p.b * (p.b + 1.0))
        * phi_series(KummerParams(p.a + 2, p.b + 2), z)
    )
    defect = z * phi2 + (p.b - z) * phi1 - p.a * phi0
    return abs(defect) / max(1.0, abs(p.a * phi0))


def classify_zero_region(p: KummerParams, z: complex) -> tuple[ZeroRegion, bool]:
    """Which half-plane statement applies to a verified zero z of Phi(a, b, .).

    Requires b >= 2 and |Phi(a, b, z)| below 1e-8 of the series term-sum
    scale.  The region is dictated by sign(b - 2a); the observed location
    must agree with it to 1e-7, otherwise the classification fails loudly.
    The second return value reports the strict hyperbola inequality
    (b-2a)^2 Im(z)^2 - (4a(b-a) - 2b) Re(z)^2 > 0, vacuously true at b = 2a.
    """
    if p.b < 2.0:
        raise PreconditionError("zero-region statements are unsupported below b = 2")
    z = complex(z)
    if z == 0:
        raise ValidationError("the trivial zero z = 0 is excluded")
    value, scale = phi_series_with_scale(p, z)
    if abs(value) >= 1e-8 * max(scale, 1e-300):
        raise ClassificationError(
            f"not a root: |Phi|={abs(value):.3g} exceeds 1e-8 of scale {scale:.3g}"
        )
    d = p.b - 2.0 * p.a
    tol = 1e-7
    if d == 0.0:
        if abs(z.real) > tol * max(1.0, abs(z)):
            raise ClassificationError(f"root {z} off the imaginary axis despite b = 2a")
        region = ZeroRegion.ON_IMAGINARY_AXIS
        hyperbola_ok = True
    else:
        if d > 0:
            region = ZeroRegion.RIGHT_HALF
            if z.real <= -tol:
                raise ClassificationError(f"root {z} not in the right half-plane (b > 2a)")
        else:
            region = ZeroRegion.LEFT_HALF
            if z.real >= tol:
                raise ClassificationError(f"root {z} not in the left half-plane (b < 2a)")
        hyperbola_ok = (
            d * d * z.imag * z.imag
            - (4.0 * p.a * (p.b - p.a) - 2.0 * p.b) * z.real * z.real
            > 0.0
        )
    return region, hyperbola_ok
