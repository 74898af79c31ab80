"""Lossless region of ``a11`` for 2x2 feedback matrices with fixed determinant.

For ``A = [[a11, a12], [a21, a22]]`` with ``det A = eps`` unimodular and
``a22 = eps * conj(a11)`` the characteristic polynomial with delays
``[m1, m2]`` is self-inversive, so losslessness reduces to Cohn's test on
its derivative. The sweep bisects, per angle, the outer radius at which the
verdict flips.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import io

import numpy as np

from .model import DomainError, Poly
from .roots import cohn_is_unimodular

COHN_TOL = 1e-9
MAX_BISECTIONS = 60
CSV_HEADER = ("theta_rad", "radius", "a11_re", "a11_im")


def p_2x2(a11: complex, eps: complex, m1: int, m2: int) -> Poly:
    """``z^(m1+m2) - a22 z^m1 - a11 z^m2 + eps`` with ``a22 = eps * conj(a11)``."""
    eps = complex(eps)
    if abs(abs(eps) - 1) > 1e-12:
        raise DomainError(f"eps must be unimodular, |eps| = {abs(eps)!r}")
    if m1 < 1 or m2 < 1:
        raise DomainError("delays must be >= 1")
    a11 = complex(a11)
    a22 = eps * a11.conjugate()
    c = np.zeros(m1 + m2 + 1, dtype=complex)
    c[m1 + m2] += 1
    c[m1] -= a22
    c[m2] -= a11
    c[0] += eps
    return Poly(c)


def is_lossless_2x2(a11: complex, eps: complex, m1: int, m2: int, tol: float = COHN_TOL) -> bool:
    return cohn_is_unimodular(p_2x2(a11, eps, m1, m2), tol)


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float
    radius: float
    clipped: bool = False  # region still lossless at the search limit r_max

    @property
    def a11(self) -> complex:
        return complex(self.radius * np.exp(1j * self.theta))


def _outer_radius(theta, eps, m1, m2, radial_tol, r_max, coarse_step, tol):
    direction = np.exp(1j * theta)

    def ok(r):
        return is_lossless_2x2(r * direction, eps, m1, m2, tol)

    # Coarse outward scan locates the last lossless grid radius; bisection refines it.
    grid = np.arange(coarse_step, r_max + coarse_step / 2, coarse_step)
    lo = 0.0
    for r in grid:
        if ok(r):
            lo = r
    if lo >= grid[-1]:
        return float(grid[-1]), True
    hi = lo + coarse_step
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= radial_tol:
            break
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo, False


def region_boundary(
    eps: complex,
    k: int,
    angles: int,
    radial_tol: float = 1e-6,
    m1: int = 1,
    r_max: float = 4.0,
    coarse_step: float = 0.05,
    tol: float = COHN_TOL,
    workers: int | None = None,
) -> list[BoundaryPoint]:
    """Outer boundary of the lossless ``a11`` region on a uniform angle grid, delays ``[m1, k]``.

    Each returned radius is lossless and ``radius + radial_tol`` is not, except
    for points flagged ``clipped`` where the region reaches ``r_max`` (e.g. the
    unbounded strip that equal delays give).
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if angles < 8:
        raise DomainError("need at least 8 angles")
    thetas = 2 * np.pi * np.arange(angles) / angles

    def job(t):
        r, clipped = _outer_radius(t, eps, m1, k, radial_tol, r_max, coarse_step, tol)
        return BoundaryPoint(float(t), float(r), clipped)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(job, thetas))
    return [job(t) for t in thetas]


def boundary_csv(points: list[BoundaryPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        a = p.a11
        w.writerow([repr(float(v)) for v in (p.theta, p.radius, a.real, a.imag)])
    return buf.getvalue()
