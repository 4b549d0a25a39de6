"""Shared numerical kernels: adaptive Gauss-Legendre panels, Kahan sums."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import NonConvergenceError


@lru_cache(maxsize=8)
def _gl_nodes(npts: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(npts)
    return x, w


def gauss_legendre_panel(f, a: float, b: float, npts: int = 20) -> complex:
    x, w = _gl_nodes(npts)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    total = 0.0 + 0.0j
    for xi, wi in zip(x, w):
        total += wi * f(mid + half * xi)
    return total * half


def gauss_legendre_adaptive(
    f,
    a: float,
    b: float,
    rel_tol: float = 1e-13,
    abs_tol: float = 1e-300,
    max_depth: int = 24,
    npts: int = 20,
) -> complex:
    """Integrate a (possibly complex-valued) function of a real variable.

    Each panel is accepted when the two-half refinement agrees with the
    single-panel value; otherwise the panel is bisected, up to max_depth.
    """
    if not b > a:
        raise ValueError("integration requires b > a")

    def recurse(lo: float, hi: float, coarse: complex, depth: int) -> complex:
        mid = 0.5 * (lo + hi)
        left = gauss_legendre_panel(f, lo, mid, npts)
        right = gauss_legendre_panel(f, mid, hi, npts)
        fine = left + right
        err = abs(fine - coarse)
        if err <= rel_tol * max(abs(fine), abs_tol / rel_tol) or err <= abs_tol:
            return fine
        if depth >= max_depth:
            raise NonConvergenceError(
                f"quadrature failed to converge on [{lo:.6g}, {hi:.6g}] "
                f"(residual {err:.3g})"
            )
        return recurse(lo, mid, left, depth + 1) + recurse(mid, hi, right, depth + 1)

    return recurse(a, b, gauss_legendre_panel(f, a, b, npts), 0)


class KahanSum:
    """Compensated accumulator for complex series with large transient terms."""

    __slots__ = ("_s", "_c")

    def __init__(self) -> None:
        self._s = 0.0 + 0.0j
        self._c = 0.0 + 0.0j

    def add(self, term: complex) -> None:
        y = term - self._c
        t = self._s + y
        self._c = (t - self._s) - y
        self._s = t

    @property
    def value(self) -> complex:
        return self._s
