"""Certified zero location in rectangles via boundary phase tracking.

The zero count of an analytic function inside an axis-aligned rectangle is
the total phase change of f along the boundary divided by 2 pi.  Counting is
derivative-free: the boundary is sampled adaptively until consecutive phase
increments stay below pi/2, which is robust for quasipolynomial and
series-defined evaluators alike.  Rectangles are then subdivided recursively
until each terminal box isolates one root (or one unseparable cluster),
local refinement polishes the location, and a tight re-count around the
polished point measures the multiplicity.

On top of the generic finder sit the delay-system queries: windowed spectral
abscissa and the dominance check for a designated real root.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .budget import check_deadline
from .errors import BoundaryZeroError, ValidationError
from .quasipoly import DelaySystem, Quasipolynomial, as_quasipolynomial, polya_szego_bounds
from .synthesis import Dominance, admissible_root

TWO_PI = 2.0 * math.pi
PHASE_STEP_MAX = 0.5 * math.pi
CHORD_FACTOR = 1.0
BOUNDARY_ZERO_REL = 1e-13
NUDGE_FACTOR = 1e-6
MAX_NUDGE_RETRIES = 8
MAX_SUBDIVISION_DEPTH = 40

# Off-center cut fractions tried when a subdivision line lands on a root.
_CUT_FRACTIONS = (0.5, 0.501, 0.499, 0.5037, 0.4963, 0.511, 0.489, 0.533, 0.467)


@dataclass(frozen=True)
class Rectangle:
    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    def __post_init__(self):
        if not (self.re_lo < self.re_hi and self.im_lo < self.im_hi):
            raise ValidationError("rectangle requires re_lo < re_hi and im_lo < im_hi")

    @property
    def width(self) -> float:
        return self.re_hi - self.re_lo

    @property
    def height(self) -> float:
        return self.im_hi - self.im_lo

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))

    def grown(self, margin: float) -> "Rectangle":
        return Rectangle(
            self.re_lo - margin, self.re_hi + margin, self.im_lo - margin, self.im_hi + margin
        )

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (
            self.re_lo - slack <= z.real <= self.re_hi + slack
            and self.im_lo - slack <= z.imag <= self.im_hi + slack
        )

    def to_json(self) -> dict:
        return {
            "re_lo": self.re_lo,
            "re_hi": self.re_hi,
            "im_lo": self.im_lo,
            "im_hi": self.im_hi,
        }


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class RootSet:
    """Roots found in a window, with the winding evidence that produced them.

    The multiplicities of the reported roots sum to the winding number of
    the searched window.  Boxes whose subdivision budget ran out are listed
    as unresolved rather than guessed at; their presence degrades the
    confidence of any verdict built on this set.
    """

    roots: tuple[Root, ...]
    total_winding: int
    evidence: tuple[Rectangle, ...]
    unresolved: tuple[Rectangle, ...]
    window: Rectangle

    @property
    def degraded(self) -> bool:
        return bool(self.unresolved)


def _wrap_phase(d: float) -> float:
    return (d + math.pi) % TWO_PI - math.pi


class _Contour:
    """Adaptive phase walk along a rectangle boundary.

    fs maps a point to (value, scale-or-None); a sample is treated as a
    boundary zero when the value vanishes exactly, falls below 1e-13 of the
    evaluator's local cancellation scale, or the walk cannot bring phase
    increments under pi/2 within its refinement budget.
    """

    def __init__(self, fs, max_depth: int = 52):
        self.fs = fs
        self.max_depth = max_depth

    def _probe(self, s: complex) -> tuple[complex, float]:
        value, scale = self.fs(s)
        av = abs(value)
        if av == 0.0:
            raise BoundaryZeroError(f"exact zero on contour at {s}")
        if scale is not None and av < BOUNDARY_ZERO_REL * scale:
            raise BoundaryZeroError(f"value below cancellation floor on contour at {s}")
        return value, cmath.phase(value)

    def winding(self, rect: Rectangle, samples_per_edge: int = 16) -> int:
        check_deadline()
        corners = [
            complex(rect.re_lo, rect.im_lo),
            complex(rect.re_hi, rect.im_lo),
            complex(rect.re_hi, rect.im_hi),
            complex(rect.re_lo, rect.im_hi),
        ]
        total = 0.0
        first_val = None
        prev: tuple[complex, complex, float] | None = None
        for i in range(4):
            za, zb = corners[i], corners[(i + 1) % 4]
            npts = max(4, samples_per_edge)
            for j in range(npts):
                s = za + (zb - za) * (j / npts)
                v, ph = self._probe(s)
                if first_val is None:
                    first_val = (s, v, ph)
                if prev is not None:
                    total += self._segment(prev, (s, v, ph), 0)
                prev = (s, v, ph)
        assert first_val is not None and prev is not None
        total += self._segment(prev, first_val, 0)
        w = round(total / TWO_PI)
        if abs(total - w * TWO_PI) > 0.5:
            raise BoundaryZeroError("inconsistent phase accumulation around contour")
        return int(w)

    def _segment(self, a, b, depth: int) -> float:
        sa, va, pa = a
        sb, vb, pb = b
        d = _wrap_phase(pb - pa)
        # The wrapped step is trustworthy only when the value chord is short
        # compared to the distance from the origin; otherwise the curve may
        # have looped around zero between the samples (the wrapped phase of
        # a multiplicity-mu pass can alias to an arbitrarily small step).
        if abs(d) <= PHASE_STEP_MAX and abs(vb - va) <= CHORD_FACTOR * min(abs(va), abs(vb)):
            return d
        if depth >= self.max_depth:
            raise BoundaryZeroError(f"phase step unresolvable near {0.5 * (sa + sb)}")
        sm = 0.5 * (sa + sb)
        vm, pm = self._probe(sm)
        mid = (sm, vm, pm)
        return self._segment(a, mid, depth + 1) + self._segment(mid, b, depth + 1)


def _wrap_plain(f, scale=None):
    if scale is None:
        return lambda s: (f(s), None)
    return lambda s: (f(s), scale(s))


def winding_number(f, rect: Rectangle, *, scale=None, samples_per_edge: int = 16) -> int:
    """Zeros of f inside rect, counted with multiplicity.

    Raises BoundaryZeroError when a zero sits on (or numerically too close
    to) the boundary; the caller is expected to nudge the rectangle
    (deterministic growth by 1e-6 of the diagonal) and retry, at most 8
    times.
    """
    contour = _Contour(_wrap_plain(f, scale))
    return contour.winding(rect, samples_per_edge)


def _winding_with_nudges(contour: _Contour, rect: Rectangle, samples: int) -> tuple[int, Rectangle]:
    work = rect
    for attempt in range(MAX_NUDGE_RETRIES + 1):
        try:
            return contour.winding(work, samples), work
        except BoundaryZeroError:
            if attempt == MAX_NUDGE_RETRIES:
                raise
            work = work.grown(NUDGE_FACTOR * rect.diagonal)
    raise AssertionError("unreachable")


def _partition(rect: Rectangle, fr: float, split_x: bool, split_y: bool) -> list[Rectangle]:
    xs = [rect.re_lo, rect.re_hi]
    ys = [rect.im_lo, rect.im_hi]
    if split_x:
        xs = [rect.re_lo, rect.re_lo + fr * rect.width, rect.re_hi]
    if split_y:
        ys = [rect.im_lo, rect.im_lo + fr * rect.height, rect.im_hi]
    boxes = []
    for j in range(len(ys) - 1):
        for i in range(len(xs) - 1):
            boxes.append(Rectangle(xs[i], xs[i + 1], ys[j], ys[j + 1]))
    return boxes


def find_roots(
    f,
    f_derivative,
    rect: Rectangle,
    tol: float = 1e-9,
    *,
    scale=None,
    derivative_factory=None,
    cluster_resolution: int = 1,
    isolation_diag: float = 1e-6,
    mult_box_diag: float = 1e-6,
    max_depth: int = MAX_SUBDIVISION_DEPTH,
    samples_per_edge: int = 16,
    real_axis_snap: float = 0.0,
) -> RootSet:
    """Locate all zeros of f in rect with multiplicities and residuals.

    Quadrisection stops once a box holds at most cluster_resolution zeros or
    its diagonal falls under isolation_diag (clusters that never separate
    are reported as one multiple root).  Cut lines that land on a zero are
    retried at deterministic off-center fractions so that child counts
    always add up to the parent count.  Each terminal box is polished by
    Newton iteration from its centroid (Muller when no derivative is
    available); when a derivative factory is supplied, a multiplicity-mu
    cluster is re-polished on the (mu-1)-th derivative, which has a simple
    and well-conditioned zero there.
    """
    contour = _Contour(_wrap_plain(f, scale))
    total, work = _winding_with_nudges(contour, rect, samples_per_edge)

    ref_extent = max(work.width, work.height)

    def samples_for(box: Rectangle) -> int:
        frac = max(box.width, box.height) / ref_extent
        return max(10, int(samples_per_edge * frac) + 8)

    terminals: list[tuple[Rectangle, int]] = []
    unresolved: list[Rectangle] = []
    stack: list[tuple[Rectangle, int, int]] = [(work, total, 0)]
    while stack:
        check_deadline()
        box, w, depth = stack.pop()
        if w == 0:
            continue
        # Keep shrinking even single-root boxes down to the isolation size:
        # Newton from the centroid of a small box is far more reliable than
        # from the centroid of whatever box first isolated the root.
        if box.diagonal <= isolation_diag or (
            w <= cluster_resolution and box.diagonal <= 4.0 * isolation_diag
        ):
            terminals.append((box, w))
            continue
        if depth >= max_depth:
            unresolved.append(box)
            continue
        children = _subdivide(contour, box, w, samples_for)
        if children is None:
            # Every cut line lands too close to a zero (a tightly packed or
            # high-multiplicity cluster); treat the box as one cluster and
            # let the polish stage sort it out.
            terminals.append((box, w))
            continue
        for child, cw in reversed(children):
            if cw != 0:
                stack.append((child, cw, depth + 1))

    roots: list[Root] = []
    for box, w in terminals:
        root = _locate(
            contour, f, f_derivative, derivative_factory, box, w, tol, mult_box_diag,
            real_axis_snap, samples_for,
        )
        if root is None:
            unresolved.append(box)
        else:
            roots.append(root)
    roots = _merge_coincident(
        contour, roots, f, f_derivative, derivative_factory, tol, mult_box_diag, real_axis_snap
    )
    roots.sort(key=lambda r: (r.location.real, r.location.imag))
    return RootSet(
        roots=tuple(roots),
        total_winding=total,
        evidence=tuple(box for box, _ in terminals),
        unresolved=tuple(unresolved),
        window=work,
    )


def _subdivide(contour: _Contour, box: Rectangle, w: int, samples_for):
    aspect = box.width / box.height
    split_x = aspect >= 1.0 / 16.0
    split_y = aspect <= 16.0
    for fr in _CUT_FRACTIONS:
        try:
            children = _partition(box, fr, split_x, split_y)
            windings = [contour.winding(child, samples_for(child)) for child in children]
        except BoundaryZeroError:
            continue
        if sum(windings) == w:
            return list(zip(children, windings))
    return None


def _newton(f, fprime, z0: complex, mu: int, box: Rectangle, iters: int = 100) -> complex:
    z = z0
    best = z0
    best_val = abs(f(z0))
    slack = box.diagonal
    for _ in range(iters):
        fv = f(z)
        av = abs(fv)
        if av < best_val:
            best, best_val = z, av
        dv = fprime(z)
        if dv == 0 or not (math.isfinite(dv.real) and math.isfinite(dv.imag)):
            break
        step = mu * fv / dv
        if not (math.isfinite(step.real) and math.isfinite(step.imag)):
            break
        z = z - step
        if not box.contains(z, slack):
            z = best
            break
        if abs(step) <= 1e-15 * (1.0 + abs(z)):
            break
    return z if abs(f(z)) <= best_val else best


def _muller(f, z0: complex, box: Rectangle, iters: int = 200) -> complex:
    h = 0.125 * box.diagonal
    x0, x1, x2 = z0 + h, z0 - h * 1j, z0
    f0, f1, f2 = f(x0), f(x1), f(x2)
    best, best_val = x2, abs(f2)
    for _ in range(iters):
        if x1 == x0 or x2 == x1 or x2 == x0:
            break
        q = (x2 - x1) / (x1 - x0)
        a = q * f2 - q * (1 + q) * f1 + q * q * f0
        b = (2 * q + 1) * f2 - (1 + q) ** 2 * f1 + q * q * f0
        c = (1 + q) * f2
        disc = cmath.sqrt(b * b - 4 * a * c)
        den1, den2 = b + disc, b - disc
        den = den1 if abs(den1) >= abs(den2) else den2
        if den == 0:
            break
        x3 = x2 - (x2 - x1) * 2 * c / den
        if not box.contains(x3, box.diagonal):
            break
        x0, x1, x2 = x1, x2, x3
        f0, f1, f2 = f1, f2, f(x2)
        av = abs(f2)
        if av < best_val:
            best, best_val = x2, av
        if av == 0.0 or abs(x2 - x1) <= 1e-15 * (1.0 + abs(x2)):
            break
    return best


def _tight_winding(contour: _Contour, z: complex, diag: float) -> int | None:
    half = diag / (2.0 * math.sqrt(2.0))
    for _ in range(8):
        box = Rectangle(z.real - half, z.real + half, z.imag - half, z.imag + half)
        try:
            return contour.winding(box, 8)
        except BoundaryZeroError:
            half *= 2.0
    return None


def _winding_bisect(contour: _Contour, box: Rectangle, w: int, floor: float, samples_for):
    """Shrink a box around its zeros by pure winding counts (no derivatives).

    Follows the child with the largest count at every level; used as a
    fallback when iterative polishing walks out of its basin.
    """
    cur, curw = box, w
    for _ in range(64):
        if cur.diagonal <= floor:
            break
        children = _subdivide(contour, cur, curw, samples_for)
        if children is None:
            break
        best = None
        for child, cw in children:
            if cw > 0 and (best is None or cw > best[1]):
                best = (child, cw)
        if best is None:
            break
        cur, curw = best
    return cur.center


def _merge_coincident(
    contour: _Contour, roots: list[Root], f, fprime, dfactory, tol, mult_box_diag, snap
) -> list[Root]:
    """Fuse root fragments that are indistinguishable at the tight-box scale.

    A cut line passing inside the cancellation floor of a multiple root can
    split its count between two boxes while keeping the total consistent.
    Candidate pairs closer than the multiplicity resolution are re-polished
    as a single cluster; the merge is kept only if the merged point passes
    the residual test and a tight re-count equals the summed multiplicity.
    """
    roots = list(roots)
    merged = True
    while merged:
        merged = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                ri, rj = roots[i], roots[j]
                if abs(ri.location - rj.location) > mult_box_diag:
                    continue
                mu = ri.multiplicity + rj.multiplicity
                z = (
                    ri.location * ri.multiplicity + rj.location * rj.multiplicity
                ) / mu
                half = max(mult_box_diag, 4.0 * abs(ri.location - rj.location))
                box = Rectangle(z.real - half, z.real + half, z.imag - half, z.imag + half)
                if dfactory is not None and mu > 1:
                    g = dfactory(mu - 1)
                    gp = dfactory(mu)
                    z = _newton(g, gp, z, 1, box)
                elif fprime is not None:
                    z = _newton(f, fprime, z, mu, box)
                if snap > 0.0 and abs(z.imag) < snap * max(1.0, abs(z)):
                    z = complex(z.real, 0.0)
                value, scale_val = contour.fs(z)
                residual = (
                    abs(value) / max(scale_val, 1e-300) if scale_val is not None else abs(value)
                )
                if residual >= tol:
                    continue
                count = _tight_winding(contour, z, mult_box_diag)
                if count != mu:
                    continue
                roots[i] = Root(location=z, multiplicity=mu, residual=residual)
                del roots[j]
                merged = True
                break
            if merged:
                break
    return roots


def _locate(
    contour: _Contour,
    f,
    fprime,
    dfactory,
    box: Rectangle,
    w: int,
    tol: float,
    mult_box_diag: float,
    real_axis_snap: float,
    samples_for,
) -> Root | None:
    def residual_at(z: complex) -> float:
        value, scale_val = contour.fs(z)
        return abs(value) / max(scale_val, 1e-300) if scale_val is not None else abs(value)

    def polish(start: complex) -> complex:
        if fprime is not None:
            return _newton(f, fprime, start, w, box)
        return _muller(f, start, box)

    z = polish(box.center)
    if residual_at(z) >= tol or not box.contains(z, 0.5 * box.diagonal):
        floor = max(1e-9 * (1.0 + abs(box.center)), 1e-12 * box.diagonal)
        z = polish(_winding_bisect(contour, box, w, floor, samples_for))
    if w > 1 and dfactory is not None:
        # The (w-1)-th derivative has a simple, well-conditioned zero at a
        # multiplicity-w cluster point; polishing on it recovers the
        # location far below the cancellation floor of f itself.
        g = dfactory(w - 1)
        gp = dfactory(w)
        refined = _newton(g, gp, z, 1, box.grown(box.diagonal))
        if box.contains(refined, 0.5 * box.diagonal):
            z = refined
    if real_axis_snap > 0.0 and abs(z.imag) < real_axis_snap * max(1.0, abs(z)):
        z = complex(z.real, 0.0)
    residual = residual_at(z)
    if residual >= tol or not box.contains(z, 0.5 * box.diagonal):
        return None
    mult = _tight_winding(contour, z, mult_box_diag)
    if mult is None or mult != w:
        # Cluster that never separated (or unmeasurable tight box): report
        # the box count so multiplicities still sum to the window winding.
        mult = w
    return Root(location=z, multiplicity=mult, residual=residual)


# ---------------------------------------------------------------------------
# Delay-system queries


def _quasipoly_callables(q: Quasipolynomial):
    fs = q.evaluator()
    f = lambda s: fs(s)[0]
    scale = lambda s: fs(s)[1]
    fprime = q.derivative(1).evaluator()

    def dfactory(order: int):
        ev = q.derivative(order).evaluator()
        return lambda s: ev(s)[0]

    return fs, f, scale, (lambda s: fprime(s)[0]), dfactory


def _default_resolution(q: Quasipolynomial, rect: Rectangle) -> tuple[float, float]:
    gap = q.shift_gap
    if gap > 0.0:
        base = min(0.8 / gap, rect.diagonal / 8.0)
    else:
        base = 1e-6
    base = max(base, 1e-6)
    return base, max(0.75 * base, 1e-6)


def _edge_samples(q: Quasipolynomial, rect: Rectangle) -> int:
    swing = q.shift_gap * max(rect.width, rect.height)
    return max(16, int(swing / (0.25 * math.pi)) + 4 * q.degree + 8)


def quasipoly_rootset(
    q: Quasipolynomial,
    rect: Rectangle,
    tol: float = 1e-9,
    *,
    isolation_diag: float | None = None,
    mult_box_diag: float | None = None,
    real_coefficients: bool = True,
) -> RootSet:
    """Root search specialised to quasipolynomials.

    Exact derivatives of every order are wired in for polishing, the
    cancellation scale guards the contour walk, and box resolutions default
    to a fraction of the delay spread (high-multiplicity clusters cannot be
    measured on boxes much smaller than that in double precision).

    For real coefficients the spectrum is conjugate-symmetric, so a window
    touching or crossing the real axis is computed on its upper part (with a
    small band below the axis so real roots sit strictly inside) and
    mirrored into the requested negative range.
    """
    iso_default, mult_default = _default_resolution(q, rect)
    isolation = isolation_diag if isolation_diag is not None else iso_default
    mult_diag = mult_box_diag if mult_box_diag is not None else mult_default
    samples = _edge_samples(q, rect)
    fs, f, scale, fprime, dfactory = _quasipoly_callables(q)
    snap = 1e-9 if real_coefficients else 0.0

    band = min(isolation, 0.45 * rect.height)
    mirror = real_coefficients and rect.im_lo < -band and rect.im_hi >= -rect.im_lo
    work_rect = rect
    if real_coefficients and not mirror and -band <= rect.im_lo <= 0.0:
        work_rect = Rectangle(rect.re_lo, rect.re_hi, rect.im_lo - band, rect.im_hi)
    if mirror:
        work_rect = Rectangle(rect.re_lo, rect.re_hi, -band, rect.im_hi)

    rs = find_roots(
        f,
        fprime,
        work_rect,
        tol,
        scale=scale,
        derivative_factory=dfactory,
        isolation_diag=isolation,
        mult_box_diag=mult_diag,
        samples_per_edge=samples,
        real_axis_snap=snap,
    )
    if not mirror:
        return rs
    mirrored: list[Root] = list(rs.roots)
    extra = 0
    for r in rs.roots:
        if r.location.imag > 0.0 and -r.location.imag >= rect.im_lo:
            mirrored.append(
                Root(r.location.conjugate(), r.multiplicity, r.residual)
            )
            extra += r.multiplicity
    mirrored.sort(key=lambda r: (r.location.real, r.location.imag))
    return RootSet(
        roots=tuple(mirrored),
        total_winding=rs.total_winding + extra,
        evidence=rs.evidence,
        unresolved=rs.unresolved,
        window=Rectangle(rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi),
    )


def system_rootset(sys: DelaySystem, rect: Rectangle, tol: float = 1e-9, **kwargs) -> RootSet:
    return quasipoly_rootset(as_quasipolynomial(sys), rect, tol, **kwargs)


def certified_strip_bounds(q: Quasipolynomial, rs: RootSet) -> tuple[int, int]:
    """Counting bounds for the horizontal strip enclosing a root set's window."""
    return polya_szego_bounds(q, rs.window.im_lo, rs.window.im_hi)


def _search_bounds(sys: DelaySystem, re_lo: float | None) -> tuple[float, float, float]:
    s0_guess = admissible_root(sys.n, sys.m, sys.tau, sys.a[sys.n - 1])
    if sys.m == sys.n:
        re_hi = s0_guess + 1.0
    else:
        re_hi = s0_guess + max(2.0, 4.0 / sys.tau)
    if sys.is_delay_free:
        # Cauchy-style bound: polynomial roots satisfy |s| <= 1 + sum |a_k|.
        re_hi = max(re_hi, 1.0 + sum(abs(x) for x in sys.a))
    lo = re_lo if re_lo is not None else s0_guess - 10.0 / sys.tau
    return lo, re_hi, s0_guess


def spectral_abscissa(
    sys: DelaySystem, im_window: float, re_lo: float | None = None
) -> tuple[float, RootSet]:
    """Largest real part over the roots found in a finite window.

    The result is only as strong as the window: roots outside
    [re_lo, re_hi] x [0, im_window] (and their mirror images) are not seen.
    Unresolved boxes leave the returned set degraded.
    """
    if im_window <= 0:
        raise ValidationError("im_window must be positive")
    lo, hi, _ = _search_bounds(sys, re_lo)
    rect = Rectangle(lo, hi, 0.0, im_window)
    rs = system_rootset(sys, rect)
    if not rs.roots:
        return -math.inf, rs
    return max(r.location.real for r in rs.roots), rs


@dataclass(frozen=True)
class DominanceReport:
    verdict: Dominance
    rootset: RootSet
    witnesses: tuple[Root, ...]
    margin: float
    cluster: Root | None


def dominance_check(
    sys: DelaySystem, s0: float, im_window: float, margin: float | None = None
) -> DominanceReport:
    """Windowed dominance verdict for a designated real root s0.

    Retarded systems must show every root other than the s0 cluster with
    real part below s0 - margin; neutral systems must show every root on the
    vertical line through s0 to within the margin.  Unresolved boxes force
    an unverified verdict; violations are returned with their witnesses.
    """
    if margin is None:
        margin = 1e-6 * max(1.0, abs(s0))
    if margin <= 0:
        raise ValidationError("margin must be positive")
    if im_window <= 0:
        raise ValidationError("im_window must be positive")
    lo, hi, _ = _search_bounds(sys, s0 - 8.0 / sys.tau)
    rect = Rectangle(lo, max(hi, s0 + 1.0), 0.0, im_window)
    rs = system_rootset(sys, rect)
    if rs.degraded:
        return DominanceReport(Dominance.UNVERIFIED, rs, (), margin, None)

    cluster_tol = max(margin, 1e-6 * max(1.0, abs(s0)))
    cluster = None
    others: list[Root] = []
    for r in rs.roots:
        if abs(r.location - s0) <= cluster_tol and (
            cluster is None or abs(r.location - s0) < abs(cluster.location - s0)
        ):
            if cluster is not None:
                others.append(cluster)
            cluster = r
        else:
            others.append(r)

    if sys.is_neutral:
        witnesses = tuple(r for r in others if abs(r.location.real - s0) >= margin)
        verdict = Dominance.ON_LINE if not witnesses else Dominance.VIOLATED
    else:
        witnesses = tuple(r for r in others if r.location.real > s0 - margin)
        verdict = Dominance.STRICT if not witnesses else Dominance.VIOLATED
    return DominanceReport(verdict, rs, witnesses, margin, cluster)
