"""Finite spans of normalised Szego kernels at the zeros.

A :class:`ModelFunction` is ``f(z) = sum_k beta_k sqrt(eps_k) / (1 - conj(z_k) z)``,
which lies in the orthogonal complement of ``B H^2``.  Norms come from the
Gram matrix of the kernels, derivatives are evaluated on or inside the circle
in gap/angle coordinates, and the level-set statistics reuse
:mod:`expblaschke.boundary`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .blaschke import BlaschkeProduct, boundary_derivative_modulus, factor_parts
from .boundary import BoundaryGrid, hardy_quasinorm, make_grid, weak_quasinorm
from .zeroseq import ZeroSequence

MIN_SEPARATION = 1e-12
MAX_SYSTEM = 64
MAX_CONDITION = 1e12


class ConditioningError(ArithmeticError):
    """Kernel Gram matrix or interpolation system is numerically singular."""


def _pair_terms(zeros: ZeroSequence):
    """``|z_j - z_k|^2`` and ``|1 - conj(z_j) z_k|^2`` for all pairs, cancellation free."""
    e = zeros.eps
    d = zeros.theta[None, :] - zeros.theta[:, None]
    cross = 4.0 * np.outer(1.0 - e, 1.0 - e) * np.sin(0.5 * d) ** 2
    diff2 = (e[:, None] - e[None, :]) ** 2 + cross
    one2 = (e[:, None] + e[None, :] - np.outer(e, e)) ** 2 + cross
    return diff2, one2


def pseudo_hyperbolic(zeros: ZeroSequence) -> np.ndarray:
    """Matrix of ``|z_j - z_k| / |1 - conj(z_j) z_k|``."""
    diff2, one2 = _pair_terms(zeros)
    return np.sqrt(diff2 / one2)


def gram_matrix(zeros: ZeroSequence) -> np.ndarray:
    """``G[j, k] = <k_j, k_k> = sqrt(eps_j eps_k) / (1 - conj(z_j) z_k)``.

    Hermitian; ``||f||^2 = sum_jk beta_j G[j, k] conj(beta_k)``.
    """
    e = zeros.eps
    rho = 1.0 - e
    d = zeros.theta[None, :] - zeros.theta[:, None]
    rr = np.outer(rho, rho)
    one_minus = (e[:, None] + e[None, :] - np.outer(e, e)) + 2.0 * rr * np.sin(0.5 * d) ** 2 - 1j * rr * np.sin(d)
    c = np.sqrt(e)
    return np.outer(c, c) / one_minus


@dataclass(frozen=True)
class ModelFunction:
    zeros: ZeroSequence
    coefficients: np.ndarray

    def __post_init__(self):
        beta = np.atleast_1d(np.asarray(self.coefficients, dtype=complex)).ravel()
        if beta.size != len(self.zeros):
            raise ValueError(f"{beta.size} coefficients for {len(self.zeros)} zeros")
        if len(self.zeros) > 1:
            rho = pseudo_hyperbolic(self.zeros)
            np.fill_diagonal(rho, np.inf)
            if rho.min() < MIN_SEPARATION:
                j, k = np.unravel_index(np.argmin(rho), rho.shape)
                raise ValueError(f"zeros {j} and {k} coincide (separation {rho[j, k]:.3g})")
        beta.setflags(write=False)
        object.__setattr__(self, "coefficients", beta)

    def __mul__(self, scalar) -> "ModelFunction":
        return ModelFunction(self.zeros, self.coefficients * complex(scalar))

    __rmul__ = __mul__

    def __add__(self, other: "ModelFunction") -> "ModelFunction":
        if not (np.array_equal(self.zeros.eps, other.zeros.eps)
                and np.array_equal(self.zeros.theta, other.zeros.theta)):
            raise ValueError("model functions live on different zero sets")
        return ModelFunction(self.zeros, self.coefficients + other.coefficients)

    @classmethod
    def kernel(cls, zeros: ZeroSequence, index: int, weight: complex = 1.0) -> "ModelFunction":
        """``weight`` times the single normalised kernel at ``zeros[index]``."""
        beta = np.zeros(len(zeros), dtype=complex)
        beta[index] = weight
        return cls(zeros, beta)

    def to_json_obj(self) -> dict:
        obj = self.zeros.to_json_obj()
        obj["coefficients"] = [[b.real, b.imag] for b in self.coefficients.tolist()]
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ModelFunction":
        beta = [complex(re, im) for re, im in obj["coefficients"]]
        return cls(ZeroSequence.from_json_obj(obj), beta)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "ModelFunction":
        return cls.from_json_obj(json.loads(text))


def l2_norm(f: ModelFunction) -> float:
    """Exact ``H^2`` norm through the reproducing property.

    Raises
    ------
    ConditioningError
        If the Gram matrix has an eigenvalue below ``-1e-9 * trace``.
    """
    if len(f.zeros) == 0:
        return 0.0
    G = gram_matrix(f.zeros)
    lam = np.linalg.eigvalsh(G)
    if lam[0] < -1e-9 * np.trace(G).real:
        rho = pseudo_hyperbolic(f.zeros)
        np.fill_diagonal(rho, np.inf)
        j, k = np.unravel_index(np.argmin(rho), rho.shape)
        raise ConditioningError(f"Gram matrix not PSD; closest zeros are {j} and {k}")
    beta = f.coefficients
    return math.sqrt(max(np.real(beta @ G @ beta.conj()), 0.0))


def riesz_bounds(zeros: ZeroSequence) -> tuple:
    """Extreme eigenvalues of the Gram matrix.

    ``lo * sum |beta|^2 <= ||f||^2 <= hi * sum |beta|^2`` for every ``f`` on
    these zeros.
    """
    lam = np.linalg.eigvalsh(gram_matrix(zeros))
    return float(lam[0]), float(lam[-1])


def evaluate_polar(f: ModelFunction, gap, theta, offset=0.0) -> np.ndarray:
    gap, theta, offset = np.broadcast_arrays(
        np.asarray(gap, float), np.asarray(theta, float), np.asarray(offset, float)
    )
    out = np.zeros(gap.shape, dtype=complex)
    for b, e, t in zip(f.coefficients.tolist(), f.zeros.eps.tolist(), f.zeros.theta.tolist()):
        _, den = factor_parts(e, t, gap, theta, offset)
        out += b * math.sqrt(e) / den
    return out


def derivative_polar(f: ModelFunction, gap, theta, offset=0.0) -> np.ndarray:
    """``f'(z) = sum_k beta_k sqrt(eps_k) conj(z_k) / (1 - conj(z_k) z)^2``."""
    gap, theta, offset = np.broadcast_arrays(
        np.asarray(gap, float), np.asarray(theta, float), np.asarray(offset, float)
    )
    out = np.zeros(gap.shape, dtype=complex)
    for b, e, t in zip(f.coefficients.tolist(), f.zeros.eps.tolist(), f.zeros.theta.tolist()):
        _, den = factor_parts(e, t, gap, theta, offset)
        zbar = (1.0 - e) * complex(math.cos(t), -math.sin(t))
        out += (b * math.sqrt(e) * zbar) / den**2
    return out


def derivative_boundary(f: ModelFunction, r: float, theta, offset=0.0) -> np.ndarray:
    """``f'(r e^{i theta})`` for ``0 < r <= 1``."""
    if not 0.0 < r <= 1.0:
        raise ValueError(f"radius must lie in (0, 1], got {r}")
    out = derivative_polar(f, 1.0 - r, theta, offset)
    return out[()] if out.ndim == 0 else out


def weak23_statistic(f: ModelFunction, r: float, grid: BoundaryGrid, points_per_decade: int = 200) -> float:
    """``sup_lambda lambda^(2/3) |{|f'(r e^{i theta})| > lambda ||f||_2}|``."""
    norm = l2_norm(f)
    if not norm > 0:
        raise ValueError("statistic needs ||f||_2 > 0")
    samples = np.abs(derivative_boundary(f, r, *grid.angles)) / norm
    return weak_quasinorm(samples, grid, 2.0 / 3.0, points_per_decade=points_per_decade).quasinorm


class ClaimStatistic(NamedTuple):
    quasinorm: float
    h_norm_pow: float

    @property
    def ratio(self) -> float:
        return self.quasinorm / self.h_norm_pow


def _contains(big: ZeroSequence, small: ZeroSequence) -> bool:
    pairs = set(zip(big.eps.tolist(), big.theta.tolist()))
    return all(p in pairs for p in zip(small.eps.tolist(), small.theta.tolist()))


def claim_statistic(B: BlaschkeProduct, h: ModelFunction, grid: BoundaryGrid,
                    points_per_decade: int = 200) -> ClaimStatistic:
    """``sup lambda^(2/3) |{|B' h| > lambda}|`` on the circle, with ``||h||_2^(2/3)``.

    Their ratio is the constant in the weak-2/3 bound for ``B' h``.
    """
    if not _contains(B.zeros, h.zeros):
        raise ValueError("h must be built on a subset of the zeros of B")
    samples = boundary_derivative_modulus(B, *grid.angles) * np.abs(evaluate_polar(h, 0.0, *grid.angles))
    q = weak_quasinorm(samples, grid, 2.0 / 3.0, points_per_decade=points_per_decade).quasinorm
    return ClaimStatistic(q, l2_norm(h) ** (2.0 / 3.0))


class Interpolation(NamedTuple):
    model: ModelFunction
    condition: float


def interpolation_solve(zeros: ZeroSequence, targets: Sequence[complex]) -> Interpolation:
    """Find ``f`` in the kernel span with ``f(z_m) = targets[m]``.

    Row ``m`` of the system is scaled by ``sqrt(eps_m)``, turning it into the
    transposed Gram matrix, whose condition number is reported.
    """
    w = np.asarray(targets, dtype=complex).ravel()
    if w.size != len(zeros):
        raise ValueError(f"{w.size} targets for {len(zeros)} zeros")
    if len(zeros) > MAX_SYSTEM:
        raise ValueError(f"system size {len(zeros)} exceeds {MAX_SYSTEM}")
    A = gram_matrix(zeros).T
    cond = float(np.linalg.cond(A))
    if not cond <= MAX_CONDITION:
        raise ConditioningError(f"interpolation system condition {cond:.3g} > {MAX_CONDITION:.0e}")
    beta = np.linalg.solve(A, np.sqrt(zeros.eps) * w)
    return Interpolation(ModelFunction(zeros, beta), cond)


def interpolation_constant(zeros: ZeroSequence) -> float:
    """``min_n |B'(z_n)| (1 - |z_n|)`` for the product on ``zeros``.

    Equals ``min_n prod_{m != n} rho(z_n, z_m) / (2 - eps_n)``.
    """
    rho = pseudo_hyperbolic(zeros)
    np.fill_diagonal(rho, 1.0)
    return float(np.min(np.prod(rho, axis=1) / (2.0 - zeros.eps)))


def observation_weights(zeros: ZeroSequence, kind: str = "divergent") -> np.ndarray:
    """Interpolation targets for the divergence check.

    ``"divergent"``: ``w_n = eps_n^(-1/2) / n``, square-summable against
    ``eps_n`` while ``sum |w_n|^(2/3) eps_n^(1/3)`` diverges.
    ``"control"``: ``w_n = n^-2``, both sums finite.
    """
    n = np.arange(1, len(zeros) + 1, dtype=float)
    if kind == "divergent":
        return 1.0 / (np.sqrt(zeros.eps) * n)
    if kind == "control":
        return n**-2.0
    raise ValueError(f"unknown weight kind {kind!r}")


@dataclass(frozen=True)
class WitnessRow:
    M: int
    quasinorm: float
    condition: float


def divergence_witness(zeros: ZeroSequence, M_list: Sequence[int], kind: str = "divergent",
                       base_count: int = 2**12, refine_factor: int = 64,
                       p: float = 2.0 / 3.0) -> list:
    """``H^p`` quasinorm of ``f_M'`` on the circle, ``f_M`` interpolating the first ``M`` targets."""
    M_list = [int(m) for m in M_list]
    if any(b <= a for a, b in zip(M_list, M_list[1:])):
        raise ValueError("M_list must be strictly increasing")
    if M_list[-1] > min(len(zeros), 40):
        raise ValueError(f"largest M must be <= min(len(zeros), 40), got {M_list[-1]}")
    rows = []
    for M in M_list:
        sub = zeros[:M]
        fit = interpolation_solve(sub, observation_weights(sub, kind))
        grid = make_grid(sub, base_count, refine_factor)
        vals = np.abs(derivative_polar(fit.model, 0.0, *grid.angles))
        rows.append(WitnessRow(M, hardy_quasinorm(vals, grid, p), fit.condition))
    return rows
