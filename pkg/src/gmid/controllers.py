"""Closed-form controller recipes for the two reference plants.

A delayed proportional-derivative controller on the linearized pendulum and
a proportional-integral boundary controller on the transport equation; each
recipe returns the gain set that forces the admissible multiple root,
together with the delay-system form and a certificate.

Sign conventions follow each plant's characteristic function as written:
the pendulum carries +(k_d s + k_p) e^{-tau s}, so alpha = (k_p, k_d); the
transport loop carries -(k_i + k_p s) e^{-tau s}, so alpha = (-k_i, -k_p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PreconditionError, ValidationError
from .quasipoly import DelaySystem
from .rootfinder import dominance_check
from .synthesis import (
    Dominance,
    GmidCertificate,
    derivative_residuals,
    neutral_chain,
    stability_verdict,
    verify_multiplicity,
)


@dataclass(frozen=True)
class PendulumDesign:
    """Delayed PD design for theta'' + (g/L) theta = -k_p theta(t-tau) - k_d theta'(t-tau)."""

    L: float
    g: float
    k_p: float
    k_d: float
    tau: float
    s0: float
    multiplicity: int

    def system(self) -> DelaySystem:
        return DelaySystem(
            n=2, m=1, a=(self.g / self.L, 0.0), alpha=(self.k_p, self.k_d), tau=self.tau
        )


@dataclass(frozen=True)
class TransportDesign:
    """Boundary PI design for the speed-lambda transport loop of length L."""

    L: float
    lam: float
    k_p: float
    k_i: float
    s0: float
    multiplicity: int = 3

    @property
    def tau(self) -> float:
        return self.L / self.lam

    def system(self) -> DelaySystem:
        return DelaySystem(n=1, m=1, a=(0.0,), alpha=(-self.k_i, -self.k_p), tau=self.tau)


def certify_design(
    sys: DelaySystem,
    s0: float,
    *,
    im_window: float | None = None,
    run_dominance: bool = True,
) -> GmidCertificate:
    """Certificate for a designed system: residuals, multiplicity, stability,
    and (optionally) a windowed dominance verdict with the neutral chain."""
    residuals = derivative_residuals(sys, s0)
    mult = verify_multiplicity(sys, s0, rel_tol=1e-8)
    stable = stability_verdict(sys.n, sys.m, sys.tau, sys.a[sys.n - 1])
    dominance = Dominance.UNVERIFIED
    chain = None
    if run_dominance:
        window = im_window if im_window is not None else 40.0 / sys.tau
        report = dominance_check(sys, s0, window)
        dominance = report.verdict
        if sys.is_neutral and dominance is Dominance.ON_LINE:
            chain = neutral_chain(sys.n, window * sys.tau).zeta_values
    return GmidCertificate(
        system=sys,
        s0=s0,
        multiplicity=mult,
        derivative_residuals=residuals,
        dominance=dominance,
        stable=stable,
        neutral_chain=chain,
    )


def pendulum_gmid(L: float, g: float, *, certify: bool = True) -> tuple[PendulumDesign, GmidCertificate]:
    """Gains and delay forcing the quadruple root of the pendulum loop.

    k_d = -sqrt(2) e^{-2} sqrt(g/L), k_p = -5 e^{-2} g/L,
    tau = sqrt(2 L / g), which places the root at s0 = -sqrt(2 g / L).
    """
    if L <= 0 or g <= 0:
        raise ValidationError("L and g must be positive")
    w = math.sqrt(g / L)
    e2 = math.exp(-2.0)
    design = PendulumDesign(
        L=L,
        g=g,
        k_p=-5.0 * e2 * g / L,
        k_d=-math.sqrt(2.0) * e2 * w,
        tau=math.sqrt(2.0) / w,
        s0=-math.sqrt(2.0) * w,
        multiplicity=4,
    )
    cert = certify_design(design.system(), design.s0, run_dominance=certify)
    return design, cert


def pendulum_triple(
    L: float, g: float, tau: float
) -> tuple[PendulumDesign, PendulumDesign]:
    """The two triple-root designs available when the delay is a free knob.

    Requires tau < sqrt(2 L / g).  Returns (plus, minus) for the roots
    s_pm = (-2 +/- sqrt(2 - g tau^2 / L)) / tau; the plus branch is the
    rightmost-root design (numerically verifiable per instance, not proved
    here).
    """
    if L <= 0 or g <= 0:
        raise ValidationError("L and g must be positive")
    if tau <= 0:
        raise ValidationError("tau must be positive")
    if not tau < math.sqrt(2.0 * L / g):
        raise PreconditionError(
            f"triple roots need tau < sqrt(2 L / g) = {math.sqrt(2.0 * L / g):.6g}"
        )
    ratio = g * tau * tau / L
    disc = math.sqrt(2.0 - ratio)

    def branch(sign: float) -> PendulumDesign:
        s = (-2.0 + sign * disc) / tau
        ets = math.exp(tau * s)
        k_d = 2.0 * (tau * s + 1.0) * ets / tau
        k_p = 2.0 * (ratio + 5.0 * tau * s + 3.0) * ets / (tau * tau)
        return PendulumDesign(L=L, g=g, k_p=k_p, k_d=k_d, tau=tau, s0=s, multiplicity=3)

    return branch(+1.0), branch(-1.0)


def transport_pi_gmid(L: float, lam: float, *, certify: bool = True) -> tuple[TransportDesign, GmidCertificate]:
    """Boundary PI gains forcing the triple root of the transport loop.

    k_p = -e^{-2}, k_i = -4 e^{-2} lambda / L, root at s0 = -2 lambda / L;
    the rest of the spectrum sits on the vertical line through s0 at the
    chain offsets.
    """
    if L <= 0 or lam <= 0:
        raise ValidationError("L and lambda must be positive")
    e2 = math.exp(-2.0)
    design = TransportDesign(
        L=L, lam=lam, k_p=-e2, k_i=-4.0 * e2 * lam / L, s0=-2.0 * lam / L, multiplicity=3
    )
    cert = certify_design(design.system(), design.s0, run_dominance=certify)
    return design, cert
