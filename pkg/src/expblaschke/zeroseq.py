"""Zero sequences in the unit disc.

Points are stored as ``(eps, theta)`` pairs, ``z = (1 - eps) * exp(i * theta)``,
so that boundary distances survive down to ``eps ~ 1e-300`` without
cancellation.  This module builds sequences, classifies them by how many
zeros fall into each dyadic annulus, and runs the exponent construction used
to prove the weak-type bound for exponential products.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

#: Smallest gap a generator may produce.
MIN_EPS = 2.0**-500

AngleRule = Union[str, Sequence[float]]


class ZeroSequenceError(ValueError):
    """Raised for sequences that violate the disc or ordering invariants."""


class Lemma1PreconditionError(ZeroSequenceError):
    """A precondition of :func:`lemma1_construct` failed.

    ``condition`` is ``"a"`` (first gap too large) or ``"b"`` (no lag with
    ratio below one).
    """

    def __init__(self, condition: str, message: str):
        super().__init__(f"condition ({condition}): {message}")
        self.condition = condition


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ZeroSequence:
    """Ordered zeros ``z_n = (1 - eps_n) e^{i theta_n}``.

    Parameters
    ----------
    eps : array_like
        Gaps ``1 - |z_n|``, nonincreasing, in ``(0, 1)``.
    theta : array_like
        Arguments in radians, same length as ``eps``; reduced to ``[0, 2 pi)``.
    allow_origin : bool, default False
        Permit ``eps = 1`` (a zero at the origin).  The angle of such a zero
        is forced to 0, which realises the convention ``conj(z)/|z| = 1`` at
        ``z = 0``.
    """

    eps: np.ndarray
    theta: np.ndarray
    allow_origin: bool = False
    blaschke_sum: float = field(init=False)

    def __post_init__(self):
        eps = np.atleast_1d(np.asarray(self.eps, dtype=float)).ravel()
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float)).ravel()
        if eps.shape != theta.shape:
            raise ZeroSequenceError(
                f"eps and theta lengths differ: {eps.size} != {theta.size}"
            )
        if not np.all(np.isfinite(eps)) or not np.all(np.isfinite(theta)):
            raise ZeroSequenceError("non-finite entry in zero sequence")
        upper_ok = eps <= 1.0 if self.allow_origin else eps < 1.0
        if np.any(eps <= 0.0) or not np.all(upper_ok):
            bad = eps[(eps <= 0.0) | ~upper_ok][0]
            raise ZeroSequenceError(
                f"gap {bad!r} outside {'(0, 1]' if self.allow_origin else '(0, 1)'}"
            )
        if np.any(np.diff(eps) > 0.0):
            raise ZeroSequenceError("gaps must be nonincreasing (moduli nondecreasing)")
        theta = np.mod(np.where(eps == 1.0, 0.0, theta), 2.0 * np.pi)
        theta[theta >= 2.0 * np.pi] = 0.0
        object.__setattr__(self, "eps", _frozen(eps))
        object.__setattr__(self, "theta", _frozen(theta))
        object.__setattr__(self, "blaschke_sum", float(math.fsum(eps)))

    def __len__(self) -> int:
        return self.eps.size

    def __getitem__(self, item) -> "ZeroSequence":
        if isinstance(item, (int, np.integer)):
            item = slice(item, item + 1 if item != -1 else None)
        return ZeroSequence(self.eps[item], self.theta[item], self.allow_origin)

    @property
    def modulus(self) -> np.ndarray:
        return 1.0 - self.eps

    @property
    def points(self) -> np.ndarray:
        """Cartesian points.  Lossy for tiny gaps; use only for display."""
        return (1.0 - self.eps) * np.exp(1j * self.theta)

    @classmethod
    def from_points(cls, z: Iterable[complex], allow_origin: bool = False) -> "ZeroSequence":
        """Build from complex points, sorting by modulus."""
        z = np.asarray(list(z), dtype=complex)
        order = np.argsort(np.abs(z), kind="stable")
        z = z[order]
        return cls(1.0 - np.abs(z), np.angle(z), allow_origin=allow_origin)

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        """One ``eps theta`` pair per line at full precision."""
        return "".join(f"{e!r} {t!r}\n" for e, t in zip(self.eps.tolist(), self.theta.tolist()))

    @classmethod
    def from_text(cls, text: str, allow_origin: bool = False) -> "ZeroSequence":
        eps, theta = [], []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ZeroSequenceError(f"line {lineno}: expected 'eps theta', got {line!r}")
            eps.append(float(parts[0]))
            theta.append(float(parts[1]))
        return cls(eps, theta, allow_origin=allow_origin)

    def to_json_obj(self) -> dict:
        return {
            "zeros": [[e, t] for e, t in zip(self.eps.tolist(), self.theta.tolist())],
            "allow_origin": self.allow_origin,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ZeroSequence":
        pairs = obj["zeros"]
        eps = [float(p[0]) for p in pairs]
        theta = [float(p[1]) for p in pairs]
        return cls(eps, theta, allow_origin=bool(obj.get("allow_origin", False)))

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "ZeroSequence":
        return cls.from_json_obj(json.loads(text))


def _angles(rule: AngleRule, count: int, seed) -> np.ndarray:
    if isinstance(rule, str):
        if rule == "equispaced":
            return 2.0 * np.pi * np.arange(count) / count
        if rule in ("random", "uniform-random"):
            return np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, count)
        raise ZeroSequenceError(f"unknown angle rule {rule!r}")
    angles = np.asarray(rule, dtype=float)
    if angles.size < count:
        raise ZeroSequenceError(f"fixed angle list has {angles.size} entries, need {count}")
    return angles[:count]


def generate_geometric(
    c: float, delta: float, count: int, angles: AngleRule = "random", seed=None
) -> ZeroSequence:
    """Zeros with gaps ``eps_n = c * delta**n``, ``n = 1..count``."""
    if c <= 0 or not 0 < delta < 1:
        raise ZeroSequenceError(f"need c > 0 and 0 < delta < 1, got c={c}, delta={delta}")
    if c * delta >= 1:
        raise ZeroSequenceError(f"c*delta = {c * delta} >= 1 puts the first zero outside the disc")
    if count < 1:
        raise ZeroSequenceError("count must be >= 1")
    eps = np.array([c * delta**k for k in range(1, count + 1)])
    if eps[-1] < MIN_EPS:
        raise ZeroSequenceError(
            f"gap {eps[-1]:.3g} at n={count} underflows the 2**-500 floor"
        )
    return ZeroSequence(eps, _angles(angles, count, seed))


def generate_power(q: float, count: int, angles: AngleRule = "random", seed=None) -> ZeroSequence:
    """Zeros with gaps ``eps_n = (n + 1)**-q``.

    The shift by one keeps ``eps_1 < 1`` (the unshifted rule would put the
    first zero at the origin).  For ``q > 1`` the Blaschke condition holds but
    dyadic annuli hold about ``2**(k/q)`` zeros, so the product is not
    exponential.
    """
    if q <= 1:
        raise ZeroSequenceError(f"need q > 1 for the Blaschke condition, got {q}")
    if count < 1:
        raise ZeroSequenceError("count must be >= 1")
    n = np.arange(1, count + 1, dtype=float)
    return ZeroSequence((n + 1.0) ** -q, _angles(angles, count, seed))


@dataclass(frozen=True)
class DyadicCensus:
    """Zero counts per closed annulus ``2**-(k+1) <= eps <= 2**-k``."""

    counts: dict
    max_count: int

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _annuli(eps: float) -> tuple:
    mant, exp = math.frexp(eps)
    if mant == 0.5:
        # eps = 2**-k sits on the shared edge of annuli k and k - 1
        k = 1 - exp
        return (k, k - 1) if k >= 1 else (k,)
    return (-exp,)


def dyadic_census(seq: ZeroSequence) -> DyadicCensus:
    """Count zeros per dyadic annulus.

    Annuli are closed on both ends, so a gap equal to ``2**-k`` is counted in
    annulus ``k`` and in annulus ``k - 1``.  The sum of counts is therefore at
    least ``len(seq)`` and exceeds it by the number of such endpoint gaps.
    """
    counts: dict = {}
    for e in seq.eps.tolist():
        for k in _annuli(e):
            counts[k] = counts.get(k, 0) + 1
    counts = dict(sorted(counts.items()))
    return DyadicCensus(counts, max(counts.values()) if counts else 0)


def is_exponential(seq: ZeroSequence, M_bound: int | None = None) -> tuple:
    """Return ``(flag, M_observed)``.

    A finite sequence is always exponential, so without ``M_bound`` the flag
    is True and only the observed per-annulus maximum is informative.
    """
    if len(seq) == 0:
        raise ZeroSequenceError("empty sequence")
    m = dyadic_census(seq).max_count
    return (True if M_bound is None else m <= M_bound), m


def lag_ratios(eps: np.ndarray, max_lag: int = 10) -> dict:
    """``alpha(K) = max_n eps[n+K] / eps[n]`` for ``K = 1..min(max_lag, len-1)``."""
    eps = np.asarray(eps, dtype=float)
    return {
        K: float(np.max(eps[K:] / eps[:-K]))
        for K in range(1, min(max_lag, eps.size - 1) + 1)
    }


@dataclass(frozen=True)
class GeometricEnvelope:
    c: float
    delta: float
    alpha: dict


def fit_geometric_envelope(seq: ZeroSequence) -> GeometricEnvelope:
    """Fit ``eps_n <= c * delta**n``.

    ``delta`` is the least-squares slope of ``log eps_n`` against ``n``
    (capped below 1), and ``c`` is then the smallest constant making the
    envelope hold at every index.  Exact geometric input is recovered exactly
    up to rounding.  The lag-ratio table ``alpha(K)`` comes along.
    """
    if len(seq) < 2:
        raise ZeroSequenceError("envelope needs at least two zeros")
    n = np.arange(1, len(seq) + 1, dtype=float)
    log_eps = np.log(seq.eps)
    slope = np.polyfit(n, log_eps, 1)[0]
    log_delta = min(slope, -1e-12)
    c = float(np.exp(np.max(log_eps - n * log_delta)))
    return GeometricEnvelope(c, float(np.exp(log_delta)), lag_ratios(seq.eps))


@dataclass(frozen=True)
class Lemma1Result:
    exponents: np.ndarray
    S_c: float
    S_d: float
    mu: float
    lag: int
    lag_ratio: float

    @property
    def K_observed(self) -> float:
        """``mu * S_c``, the constant in ``S_c <= K / mu``."""
        return self.mu * self.S_c


def lemma1_exponents(eps, mu: float) -> np.ndarray:
    """``n_k = max(0, ceil(log2(100 k**2 / (mu eps_k)) / 2))``, no preconditions.

    Under ``eps_1 <= 1 / mu`` the clamp at 0 never binds; it matters only
    for inputs that :func:`lemma1_construct` would reject.
    """
    eps = np.asarray(eps, dtype=float)
    k = np.arange(1, eps.size + 1, dtype=float)
    # log2 form keeps 100 k^2 / (mu eps) finite for eps near 2**-500
    log2_target = np.log2(100.0 * k**2 / mu) - np.log2(eps)
    return np.maximum(0, np.ceil(log2_target / 2.0)).astype(np.int64)


def lemma1_construct(seq: ZeroSequence, mu: float, max_lag: int = 10) -> Lemma1Result:
    """Choose integers ``n_k`` with ``sum 2**(-2 n_k) / eps_k <= mu``.

    ``n_k`` is the real solution of ``2**(-2 n_k) / eps_k = mu / (100 k**2)``
    rounded up (and clamped at 0), so each term of ``S_d`` is at most
    ``mu / (100 k**2)`` and ``S_d <= mu * pi**2 / 600``.

    Raises
    ------
    Lemma1PreconditionError
        ``condition="a"`` if ``eps_1 > 1 / mu``; ``condition="b"`` if no lag
        ``K <= max_lag`` has ``alpha(K) < 1``.
    """
    if not mu > 10:
        raise ValueError(f"mu must exceed 10, got {mu}")
    eps = seq.eps
    if eps[0] > 1.0 / mu:
        raise Lemma1PreconditionError("a", f"1 - |w_1| = {eps[0]:.6g} exceeds 1/mu = {1 / mu:.6g}")
    if eps.size == 1:
        lag, ratio = 1, 0.0
    else:
        witness = [(K, a) for K, a in lag_ratios(eps, max_lag).items() if a < 1.0]
        if not witness:
            raise Lemma1PreconditionError("b", f"no lag K <= {max_lag} with ratio < 1")
        lag, ratio = witness[0]
    n_k = lemma1_exponents(eps, mu)
    S_c = math.fsum((np.exp2(n_k.astype(float)) * eps).tolist())
    S_d = math.fsum(np.exp2(-2.0 * n_k.astype(float) - np.log2(eps)).tolist())
    n_k.setflags(write=False)
    return Lemma1Result(n_k, S_c, S_d, float(mu), lag, ratio)
