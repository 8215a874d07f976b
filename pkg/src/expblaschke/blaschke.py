"""Finite Blaschke products evaluated in gap/angle coordinates.

A point is addressed as ``z = (1 - gap) * exp(i * (theta + offset))``.
``offset`` is optional; boundary grids use it to carry the part of an angle
that lies below float resolution of ``theta`` (a grid node anchored at a zero
angle ``theta_n`` passes ``theta = theta_n`` and a tiny ``offset``), so
``theta - theta_n`` is formed exactly before the offset is added.

Every factor is written as ``b(z) = (rho - w) / (1 - rho w)`` with
``w = exp(-i theta_n) z`` and ``rho = 1 - eps``.  Real parts of numerator and
denominator are expanded as ``(gap - eps) + 2 (1 - gap) sin^2(phi / 2)`` and
``(eps + gap - eps gap) + 2 (1 - eps)(1 - gap) sin^2(phi / 2)`` so nothing
cancels when gaps are tiny.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .zeroseq import ZeroSequence

MAX_FACTORS = 10_000
POLE_TOL = 1e-300


class PoleError(ArithmeticError):
    """Evaluation point too close to a pole ``1 / conj(z_n)``."""


@dataclass(frozen=True)
class BlaschkeProduct:
    """``psi * prod_n conj(z_n)/|z_n| * (z_n - z) / (1 - conj(z_n) z)``."""

    zeros: ZeroSequence
    constant: complex = 1.0 + 0.0j

    def __post_init__(self):
        if len(self.zeros) > MAX_FACTORS:
            raise ValueError(f"at most {MAX_FACTORS} factors supported, got {len(self.zeros)}")
        if abs(abs(self.constant) - 1.0) > 1e-12:
            raise ValueError(f"unimodular constant required, |psi| = {abs(self.constant)}")
        object.__setattr__(self, "constant", complex(self.constant))

    def __len__(self) -> int:
        return len(self.zeros)

    @classmethod
    def empty(cls) -> "BlaschkeProduct":
        return cls(ZeroSequence([], []))


def _polar(z) -> tuple:
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if np.any(r > 1.0 + 1e-12):
        raise ValueError("evaluation point outside the closed disc")
    return 1.0 - r, np.angle(z)


def factor_parts(eps, theta_n, gap, theta, offset):
    """``rho - w`` and ``1 - rho w`` for one zero, ``w = exp(-i theta_n) z``.

    The second is ``1 - conj(z_n) z``, shared with the Szego kernel code.
    """
    phi = (theta - theta_n) + offset
    s2 = np.sin(0.5 * phi) ** 2
    sn = np.sin(phi)
    rg = 1.0 - gap
    num = ((gap - eps) + 2.0 * rg * s2) - 1j * rg * sn
    rho_rg = (1.0 - eps) * rg
    den = ((eps + gap - eps * gap) + 2.0 * rho_rg * s2) - 1j * rho_rg * sn
    return num, den


def _check_pole(den):
    if np.any(np.abs(den) < POLE_TOL):
        raise PoleError("evaluation point within 1e-300 of a pole")


def evaluate_polar(B: BlaschkeProduct, gap, theta, offset=0.0) -> np.ndarray:
    """``B`` at ``(1 - gap) exp(i (theta + offset))``."""
    gap, theta, offset = np.broadcast_arrays(
        np.asarray(gap, float), np.asarray(theta, float), np.asarray(offset, float)
    )
    out = np.full(gap.shape, B.constant, dtype=complex)
    for e, t in zip(B.zeros.eps.tolist(), B.zeros.theta.tolist()):
        num, den = factor_parts(e, t, gap, theta, offset)
        _check_pole(den)
        out *= num / den
    return out


def evaluate(B: BlaschkeProduct, z) -> np.ndarray:
    """``B(z)`` for ``|z| <= 1``; scalar in, scalar out."""
    gap, theta = _polar(z)
    out = evaluate_polar(B, gap, theta)
    return out[()] if out.ndim == 0 else out


def evaluate_boundary(B: BlaschkeProduct, theta, offset=0.0) -> np.ndarray:
    return evaluate_polar(B, 0.0, theta, offset)


def derivative_polar(B: BlaschkeProduct, gap, theta, offset=0.0) -> np.ndarray:
    """``B'`` by the product rule, accumulated without division by ``B``."""
    gap, theta, offset = np.broadcast_arrays(
        np.asarray(gap, float), np.asarray(theta, float), np.asarray(offset, float)
    )
    prod = np.full(gap.shape, B.constant, dtype=complex)
    deriv = np.zeros(gap.shape, dtype=complex)
    for e, t in zip(B.zeros.eps.tolist(), B.zeros.theta.tolist()):
        num, den = factor_parts(e, t, gap, theta, offset)
        _check_pole(den)
        b = num / den
        db = -np.exp(-1j * t) * (e * (2.0 - e)) / den**2
        deriv = deriv * b + prod * db
        prod = prod * b
    return deriv


def derivative(B: BlaschkeProduct, z) -> np.ndarray:
    """``B'(z)`` for ``|z| < 1``."""
    gap, theta = _polar(z)
    if np.any(gap <= 0.0):
        raise ValueError("derivative requires |z| < 1; use boundary_derivative_modulus")
    out = derivative_polar(B, gap, theta)
    return out[()] if out.ndim == 0 else out


def boundary_derivative_modulus(B: BlaschkeProduct, theta, offset=0.0) -> np.ndarray:
    """``|B'(e^{i theta})| = sum_n (1 - |z_n|^2) / |e^{i theta} - z_n|^2``.

    Exact for finite products at every boundary point.
    """
    theta, offset = np.broadcast_arrays(np.asarray(theta, float), np.asarray(offset, float))
    out = np.zeros(theta.shape)
    for e, t in zip(B.zeros.eps.tolist(), B.zeros.theta.tolist()):
        phi = (theta - t) + offset
        out += e * (2.0 - e) / (e * e + 4.0 * (1.0 - e) * np.sin(0.5 * phi) ** 2)
    return out[()] if out.ndim == 0 else out


def frostman_shift_boundary(B: BlaschkeProduct, a: complex, theta, offset=0.0) -> np.ndarray:
    """Boundary modulus of the derivative of ``(B - a) / (1 - conj(a) B)``.

    By the chain rule this is ``(1 - |a|^2) |B'| / |1 - conj(a) B|^2``.
    """
    a = complex(a)
    if not abs(a) < 1.0:
        raise ValueError(f"shift parameter must lie in the disc, |a| = {abs(a)}")
    bd = boundary_derivative_modulus(B, theta, offset)
    if a == 0:
        return bd
    Bv = evaluate_boundary(B, theta, offset)
    out = (1.0 - abs(a) ** 2) * bd / np.abs(1.0 - a.conjugate() * Bv) ** 2
    return out[()] if np.ndim(out) == 0 else out


def log_modulus_polar(B: BlaschkeProduct, gap, theta, offset=0.0) -> np.ndarray:
    """``log |B|`` at ``(1 - gap) exp(i (theta + offset))``.

    Far from a zero each factor is close to unimodular, and
    ``1 - |b|^2 = (1 - |z|^2)(1 - |z_n|^2) / |1 - conj(z_n) z|^2`` gives its
    logarithm through ``log1p`` without cancellation.
    """
    gap, theta, offset = np.broadcast_arrays(
        np.asarray(gap, float), np.asarray(theta, float), np.asarray(offset, float)
    )
    out = np.zeros(gap.shape)
    g2 = gap * (2.0 - gap)
    for e, t in zip(B.zeros.eps.tolist(), B.zeros.theta.tolist()):
        num, den = factor_parts(e, t, gap, theta, offset)
        den2 = den.real**2 + den.imag**2
        q = g2 * (e * (2.0 - e)) / den2
        near = q > 0.5
        with np.errstate(divide="ignore"):
            direct = np.log(num.real**2 + num.imag**2) - np.log(den2)
        out += 0.5 * np.where(near, direct, np.log1p(-np.where(near, 0.0, q)))
    return out
