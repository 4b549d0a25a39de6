"""Partial pole placement for single-delay differential equations.

Synthesis of maximal-multiplicity dominant-root designs, certified windowed
spectrum computation, hypergeometric-series diagnostics, method-of-steps
simulation, and the two reference controller recipes, behind one CLI and a
small JSON HTTP service.
"""

from .controllers import (
    PendulumDesign,
    TransportDesign,
    certify_design,
    pendulum_gmid,
    pendulum_triple,
    transport_pi_gmid,
)
from .dde_sim import History, Trajectory, TransportField, decay_rate, simulate, simulate_transport
from .errors import (
    BoundaryZeroError,
    GmidError,
    NonConvergenceError,
    OverflowGuardError,
    PreconditionError,
    TimeBudgetExceeded,
    ValidationError,
)
from .kummer import KummerParams, ZeroRegion, classify_zero_region, phi_integral, phi_series
from .quasipoly import (
    DelaySystem,
    NormalizedCoeffs,
    Quasipolynomial,
    as_quasipolynomial,
    confluent_vandermonde,
    denormalize,
    normalize,
    polya_szego_bounds,
)
from .rootfinder import (
    DominanceReport,
    Rectangle,
    Root,
    RootSet,
    dominance_check,
    find_roots,
    quasipoly_rootset,
    spectral_abscissa,
    system_rootset,
    winding_number,
)
from .synthesis import (
    ChainSpec,
    Dominance,
    GmidCertificate,
    admissible_root,
    factorization_residual_integral,
    factorization_residual_kummer,
    max_mult_by_linear_system,
    max_mult_system,
    neutral_chain,
    normalized_max_mult,
    stability_verdict,
    synthesize,
    verify_multiplicity,
)

__version__ = "0.1.0"
