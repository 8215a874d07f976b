"""Logarithmic means of Blaschke products.

``T(r) = (1 / log r) (1 / 2 pi) int log |B(r e^{i theta})| d theta`` is
computed two ways: exactly from the zeros via Jensen's formula, and by
quadrature on the circle ``|z| = r`` as an independent check.  Radii are
passed either as ``r`` or, to keep precision near the boundary, as
``gap = 1 - r``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .blaschke import BlaschkeProduct, log_modulus_polar
from .boundary import TWO_PI, BoundaryGrid, panel_grid

#: Closest a zero may sit to the integration contour.
MIN_CONTOUR_DISTANCE = 1e-9


class ContourProximityError(ValueError):
    """A zero lies too close to the circle ``|z| = r`` for quadrature."""


def _gap(r, gap) -> float:
    if (r is None) == (gap is None):
        raise TypeError("pass exactly one of r or gap")
    g = 1.0 - float(r) if gap is None else float(gap)
    if not 0.0 < g < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got r = {1.0 - g!r}")
    return g


def t_exact(B: BlaschkeProduct, r: Optional[float] = None, *, gap: Optional[float] = None) -> float:
    """``#{|z_n| <= r} + (1 / log r) sum_{|z_n| > r} log |z_n|``.

    A zero on the circle ``|z_n| = r`` is counted once, in the first term;
    both terms agree in the limit so ``T`` stays continuous there.
    """
    g = _gap(r, gap)
    eps = B.zeros.eps
    inside = eps >= g
    tail = eps[~inside]
    return float(np.count_nonzero(inside)) + math.fsum(np.log1p(-tail).tolist()) / math.log1p(-g)


def contour_distance(B: BlaschkeProduct, r: Optional[float] = None, *, gap: Optional[float] = None) -> float:
    g = _gap(r, gap)
    if len(B) == 0:
        return math.inf
    return float(np.min(np.abs(B.zeros.eps - g)))


def jensen_grid(B: BlaschkeProduct, r: Optional[float] = None, *, gap: Optional[float] = None,
                base_panels: int = 64, order: int = 16) -> BoundaryGrid:
    """Gauss-Legendre panels graded toward each zero angle.

    Around ``theta_n`` the breakpoints sit at ``theta_n +- d 2**j`` where
    ``d`` is the distance from the zero to the contour, so every panel is
    about as long as its distance to the nearest log singularity.
    """
    g = _gap(r, gap)
    pts = [TWO_PI * np.arange(base_panels) / base_panels]
    for e, t in zip(B.zeros.eps.tolist(), B.zeros.theta.tolist()):
        d = max(abs(e - g), 1e-15)
        steps = d * 2.0 ** np.arange(0, int(math.ceil(math.log2(math.pi / d))) + 1)
        steps = steps[steps < math.pi]
        pts.append(t + np.concatenate([[0.0], steps, -steps]))
    return panel_grid(np.concatenate(pts), order)


def t_quadrature(B: BlaschkeProduct, r: Optional[float] = None, grid: Optional[BoundaryGrid] = None,
                 *, gap: Optional[float] = None) -> float:
    """``T(r)`` as a weighted sum of ``log |B(r e^{i theta})|``.

    Without a grid, :func:`jensen_grid` is used.

    Raises
    ------
    ContourProximityError
        If a zero lies within ``1e-9`` of the contour.
    """
    g = _gap(r, gap)
    dist = contour_distance(B, gap=g)
    if dist < MIN_CONTOUR_DISTANCE:
        raise ContourProximityError(
            f"zero at distance {dist:.3g} from |z| = {1 - g!r}; need >= {MIN_CONTOUR_DISTANCE}"
        )
    if grid is None:
        grid = jensen_grid(B, gap=g)
    vals = log_modulus_polar(B, g, *grid.angles)
    integral = math.fsum((grid.weights * vals).tolist()) / TWO_PI
    return integral / math.log1p(-g)


def annulus_deficit(B: BlaschkeProduct, r: Optional[float] = None, *, gap: Optional[float] = None) -> float:
    """Count minus normalised log mass of the zeros in ``r <= |z| <= r1``.

    ``r1`` is fixed by ``log(1/r1) = log(1/r) / 2``.  Every zero in the
    annulus has ``log(1/|z|) <= log(1/r)``, so the value is nonnegative.
    """
    g = _gap(r, gap)
    log_inv_r = -math.log1p(-g)
    g1 = -math.expm1(-0.5 * log_inv_r)
    eps = B.zeros.eps
    sel = (eps <= g) & (eps >= g1)
    mass = math.fsum((-np.log1p(-eps[sel])).tolist())
    return float(np.count_nonzero(sel)) - mass / log_inv_r


@dataclass(frozen=True)
class LogMeanCurve:
    """``T`` sampled at ``r = 1 - 2**-N`` plus the dyadic increments.

    ``increments[i]`` is ``|T(1 - 2**-(N+1)) - T(1 - 2**-N)|`` for
    ``N = levels[i]``.
    """

    gaps: np.ndarray
    t_exact: np.ndarray
    t_quad: Optional[np.ndarray]
    levels: np.ndarray
    increments: np.ndarray

    @property
    def radii(self) -> np.ndarray:
        return 1.0 - self.gaps

    @property
    def M_observed(self) -> float:
        return float(np.max(self.increments)) if self.increments.size else 0.0

    def increment(self, N: int) -> float:
        return float(self.increments[int(N) - int(self.levels[0])])

    def curve_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "t_exact", "t_quad"])
        tq = self.t_quad if self.t_quad is not None else [None] * self.gaps.size
        for r, te, q in zip(self.radii.tolist(), self.t_exact.tolist(), list(tq)):
            w.writerow([repr(r), repr(te), "" if q is None or not np.isfinite(q) else repr(float(q))])
        return buf.getvalue()

    def increments_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "increment"])
        for n, inc in zip(self.levels.tolist(), self.increments.tolist()):
            w.writerow([n, repr(inc)])
        return buf.getvalue()


def dyadic_increments(B: BlaschkeProduct, N_max: int, with_quadrature: bool = False) -> LogMeanCurve:
    """Increments of ``T`` between consecutive radii ``1 - 2**-N``, ``N = 1..N_max``.

    ``N_max <= 51`` so every radius is a distinct float.  With
    ``with_quadrature`` the quadrature value is stored wherever no zero is
    within ``1e-9`` of the contour (NaN elsewhere).
    """
    N_max = int(N_max)
    if not 1 <= N_max <= 51:
        raise ValueError(f"N_max must lie in [1, 51], got {N_max}")
    levels = np.arange(1, N_max + 2)
    gaps = 2.0 ** -levels.astype(float)
    te = np.array([t_exact(B, gap=g) for g in gaps.tolist()])
    tq = None
    if with_quadrature:
        tq = np.array([
            t_quadrature(B, gap=g) if contour_distance(B, gap=g) >= MIN_CONTOUR_DISTANCE else np.nan
            for g in gaps.tolist()
        ])
    return LogMeanCurve(gaps, te, tq, levels[:-1], np.abs(np.diff(te)))
