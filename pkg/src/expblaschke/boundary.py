"""Quadrature grids on the unit circle and level-set statistics.

A :class:`BoundaryGrid` stores each node as ``anchor + offset``.  Base nodes
have anchor 0; nodes refined around a zero are anchored at that zero's angle,
so the distance to the zero is the offset itself and keeps full relative
precision even when it is far below the float spacing near ``theta ~ pi``.
Weights are midpoint-rule arclengths, half the distance to each neighbour.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .zeroseq import ZeroSequence

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class BoundaryGrid:
    """Nodes and weights on the circle.

    Attributes
    ----------
    anchor, offset : ndarray
        Node position is ``anchor + offset``; pass both to the evaluators.
    theta : ndarray
        ``(anchor + offset) mod 2 pi`` rounded to a float, nondecreasing.
        Strictly increasing unless a window is narrower than float spacing.
    weights : ndarray
        Nonnegative, summing to ``2 pi``.
    kind : str
        ``"uniform"`` or ``"stratified"``.
    """

    anchor: np.ndarray
    offset: np.ndarray
    theta: np.ndarray
    weights: np.ndarray
    kind: str
    base_count: int = 0
    refine_factor: int = 0

    def __len__(self) -> int:
        return self.weights.size

    @property
    def angles(self) -> tuple:
        """``(theta, offset)`` arguments for the evaluators."""
        return self.anchor, self.offset


def _assemble(anchor: np.ndarray, offset: np.ndarray, kind: str, base_count=0, refine_factor=0):
    key = np.mod(anchor + offset, TWO_PI)
    fine = (anchor - key) + offset
    fine = fine - TWO_PI * np.round(fine / TWO_PI)
    order = np.lexsort((fine, key))
    anchor, offset, key = anchor[order], offset[order], key[order]
    while True:
        nxt = np.roll(np.arange(anchor.size), -1)
        gaps = (anchor[nxt] - anchor) + (offset[nxt] - offset)
        gaps = gaps - TWO_PI * np.round(gaps / TWO_PI)
        if anchor.size == 1:
            gaps = np.array([TWO_PI])
        dup = gaps <= 0.0
        if not dup.any():
            break
        # drop the later node of each coincident pair
        keep = ~np.roll(dup, 1)
        anchor, offset, key = anchor[keep], offset[keep], key[keep]
    weights = 0.5 * (gaps + np.roll(gaps, 1))
    for arr in (anchor, offset, key, weights):
        arr.setflags(write=False)
    return BoundaryGrid(anchor, offset, key, weights, kind, base_count, refine_factor)


def uniform_grid(count: int) -> BoundaryGrid:
    """``count`` equispaced nodes starting at 0 (the periodic trapezoid rule)."""
    if count < 1:
        raise ValueError("count must be positive")
    offset = TWO_PI * np.arange(count) / count
    return _assemble(np.zeros(count), offset, "uniform", count, 1)


def window_offsets(eps: float, spacing: float, refine_factor: int) -> np.ndarray:
    """Signed offsets of the refined nodes around one zero.

    The distance from the zero grows as ``s_j = eps ((1 + 1/R)^j - 1)``, so the
    local spacing is ``(eps + s) / R``.  Inside the core window
    ``|s| <= 4 pi eps`` this is at most ``(1 + 4 pi) eps / R``; grading stops
    where the spacing reaches the base spacing.
    """
    kappa = 1.0 / refine_factor
    top = max(spacing / (kappa * eps), 1.0 + 4.0 * np.pi)
    jmax = int(math.ceil(math.log(top) / math.log1p(kappa))) + 1
    s = eps * np.expm1(np.arange(jmax + 1) * math.log1p(kappa))
    s = s[s < np.pi]
    return np.concatenate([-s[:0:-1], s])


def make_grid(zeros: Optional[ZeroSequence], base_count: int = 2**14, refine_factor: int = 64) -> BoundaryGrid:
    """Uniform base grid plus graded refinement around every zero angle.

    Overlapping windows simply merge.  With no zeros this is the uniform grid.
    """
    if base_count < 64:
        raise ValueError(f"base_count must be >= 64, got {base_count}")
    if refine_factor < 1:
        raise ValueError(f"refine_factor must be >= 1, got {refine_factor}")
    spacing = TWO_PI / base_count
    anchors = [np.zeros(base_count)]
    offsets = [spacing * np.arange(base_count)]
    if zeros is not None:
        for e, t in zip(zeros.eps.tolist(), zeros.theta.tolist()):
            o = window_offsets(e, spacing, refine_factor)
            anchors.append(np.full(o.size, t))
            offsets.append(o)
    kind = "stratified" if zeros is not None and len(zeros) else "uniform"
    return _assemble(
        np.concatenate(anchors), np.concatenate(offsets), kind, base_count, refine_factor
    )


def panel_grid(breakpoints: np.ndarray, order: int = 16) -> BoundaryGrid:
    """Composite Gauss-Legendre rule on the panels cut by ``breakpoints``.

    Breakpoints are angles in ``[0, 2 pi)``; the last panel wraps around.
    """
    b = np.unique(np.mod(np.asarray(breakpoints, float), TWO_PI))
    b = np.concatenate([b, [b[0] + TWO_PI]])
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = b[:-1, None], b[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    nodes = np.mod(nodes, TWO_PI)
    order_ = np.argsort(nodes, kind="stable")
    nodes, weights = nodes[order_], weights[order_]
    for arr in (nodes, weights):
        arr.setflags(write=False)
    return BoundaryGrid(np.zeros_like(nodes), nodes, nodes, weights, "panels", b.size - 1, order)


# -- level sets -------------------------------------------------------------


@dataclass(frozen=True)
class DistributionProfile:
    """Level-set measures ``m(lambda) = |{|g| > lambda}|`` on a lambda grid."""

    lambda_grid: np.ndarray
    measure: np.ndarray
    p: Optional[float] = None
    quasinorm: Optional[float] = None
    argmax_lambda: Optional[float] = None

    def scaled(self) -> np.ndarray:
        """``lambda**p * m(lambda)``."""
        if self.p is None:
            raise ValueError("profile has no exponent")
        return self.lambda_grid**self.p * self.measure

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lambda", "measure", "lambda_times_measure_pow_p"])
        scaled = self.scaled() if self.p is not None else np.full(self.measure.shape, np.nan)
        for row in zip(self.lambda_grid.tolist(), self.measure.tolist(), scaled.tolist()):
            writer.writerow([repr(v) for v in row])
        return buf.getvalue()


def lambda_grid(samples, points_per_decade: int = 200) -> np.ndarray:
    """Log grid ``10**(j / ppd)`` covering the positive sample range.

    Exponents are integers, so the grid depends on the samples only through
    which decades they reach; one extra point sits below the smallest
    positive sample.
    """
    v = np.asarray(samples, float)
    pos = v[v > 0]
    if pos.size == 0:
        return np.array([1.0])
    lo = math.floor(math.log10(pos.min()) * points_per_decade) - 1
    hi = math.ceil(math.log10(pos.max()) * points_per_decade)
    return 10.0 ** (np.arange(lo, hi + 1) / points_per_decade)


def _weights(grid) -> np.ndarray:
    return grid.weights if isinstance(grid, BoundaryGrid) else np.asarray(grid, float)


def distribution(samples, grid, lambdas=None, points_per_decade: int = 200) -> DistributionProfile:
    """Sum of weights over nodes where ``samples > lambda``."""
    v = np.asarray(samples, float).ravel()
    w = _weights(grid).ravel()
    if v.shape != w.shape:
        raise ValueError(f"{v.size} samples for {w.size} grid nodes")
    lam = lambda_grid(v, points_per_decade) if lambdas is None else np.asarray(lambdas, float)
    order = np.argsort(v, kind="stable")
    vs = v[order]
    tail = np.concatenate([np.cumsum(w[order][::-1])[::-1], [0.0]])
    m = tail[np.searchsorted(vs, lam, side="right")]
    return DistributionProfile(lam, m)


def weak_quasinorm(samples, grid, p: float, lambdas=None, points_per_decade: int = 200) -> DistributionProfile:
    """``sup_lambda lambda**p * m(lambda)`` over the log grid."""
    if not 0 < p <= 2:
        raise ValueError(f"p must lie in (0, 2], got {p}")
    prof = distribution(samples, grid, lambdas, points_per_decade)
    v = np.asarray(samples, float)
    if not np.any(v > 0):
        return DistributionProfile(prof.lambda_grid, prof.measure, p, 0.0, None)
    scaled = prof.lambda_grid**p * prof.measure
    i = int(np.argmax(scaled))
    return DistributionProfile(prof.lambda_grid, prof.measure, p, float(scaled[i]), float(prof.lambda_grid[i]))


def hardy_quasinorm(samples, grid, p: float) -> float:
    """``(sum w |g|^p / 2 pi)^(1/p)``."""
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    v = np.abs(np.asarray(samples, float))
    w = _weights(grid)
    return float((np.dot(w, v**p) / TWO_PI) ** (1.0 / p))
