"""Flat target polynomials for the NOT-gate figure of merit.

The built-in family is ``Q_m(p, q) = sum_k c_k q^{2k} p^{m-2k}`` with generalised binomial
coefficients ``c_k = binom(m/2, k)``.  On the unit circle ``q = sqrt(1 - p^2)`` it is
the truncated binomial series of ``p^m (1 + (1 - p^2)/p^2)^{m/2} = 1``, which is why it
stays in ``[0, 1]`` and is flat at ``p = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np


@lru_cache(maxsize=None)
def half_binomials(m: int) -> tuple[Fraction, ...]:
    """Exact ``binom(m/2, k)`` for ``k = 0 .. (m-1)/2``."""
    m = _check_odd(m)
    half = Fraction(m, 2)
    out = [Fraction(1)]
    for k in range(1, (m + 1) // 2):
        out.append(out[-1] * (half - k + 1) / k)
    return tuple(out)


def _check_odd(m) -> int:
    if int(m) != m or m < 1 or int(m) % 2 == 0:
        raise ValueError(f"polynomial order must be a positive odd integer, got {m!r}")
    return int(m)


@dataclass(frozen=True)
class TargetPolynomial:
    order: int
    coeffs: tuple[float, ...]
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        _check_odd(self.order)
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) != (self.order + 1) // 2:
            raise ValueError(
                f"order {self.order} needs {(self.order + 1) // 2} coefficients, got {len(coeffs)}"
            )
        if coeffs[0] != 1.0:
            raise ValueError("leading coefficient c_0 must be 1 (perfect gate at the origin)")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def custom(cls, coeffs: Sequence[float]) -> "TargetPolynomial":
        """User-supplied coefficient list; the order follows from its length."""
        return cls(2 * len(coeffs) - 1, tuple(coeffs))

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def __call__(self, p):
        return eval_q_m(self, p)


def q_m_coefficients(m: int) -> TargetPolynomial:
    """``Q_m`` with ``c_k = binom(m/2, k)``, built by the running product
    ``c_k = c_{k-1} (m/2 - k + 1) / k`` so even ``m = 201`` stays finite."""
    m = _check_odd(m)
    floats = [1.0]
    half = m / 2.0
    for k in range(1, (m + 1) // 2):
        floats.append(floats[-1] * (half - k + 1) / k)
    return TargetPolynomial(m, tuple(floats), half_binomials(m))


def eval_pq(poly: TargetPolynomial, p, q):
    """``sum_k c_k q^{2k} p^{m-2k}`` for arbitrary ``(p, q)``, no unit-circle constraint."""
    p = np.asarray(p, dtype=float)[..., None]
    q = np.asarray(q, dtype=float)[..., None]
    k = np.arange(len(poly.coeffs))
    return np.sum(poly.as_array() * q ** (2 * k) * p ** (poly.order - 2 * k), axis=-1)


def eval_q_m(poly: TargetPolynomial, p):
    """``Q_m(p, sqrt(1 - p^2))`` for ``p`` in ``[0, 1]``, summed with ``math.fsum``."""
    arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("p must lie in [0, 1]")
    flat = arr.ravel()
    q2 = 1.0 - flat * flat
    k = np.arange(len(poly.coeffs))
    with np.errstate(under="ignore"):
        terms = poly.as_array() * q2[:, None] ** k * flat[:, None] ** (poly.order - 2 * k)
    out = np.fromiter((math.fsum(row) for row in terms), dtype=float, count=len(flat))
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


@lru_cache(maxsize=None)
def _power_coefficients(coeffs: tuple[Fraction, ...], m: int) -> tuple[Fraction, ...]:
    """Exact coefficients of ``Q_m(p, sqrt(1-p^2))`` as a polynomial in ``p``."""
    out = [Fraction(0)] * (m + 1)
    for k, ck in enumerate(coeffs):
        # c_k (1 - p^2)^k p^{m-2k}
        for j in range(k + 1):
            out[m - 2 * k + 2 * j] += ck * math.comb(k, j) * (-1) ** j
    return tuple(out)


@lru_cache(maxsize=None)
def _shifted_coefficients(coeffs: tuple[Fraction, ...], m: int) -> tuple[Fraction, ...]:
    """Exact coefficients of ``Q_m`` in powers of ``t = 1 - p``."""
    power = _power_coefficients(coeffs, m)
    out = [Fraction(0)] * (m + 1)
    for n, a in enumerate(power):
        if a == 0:
            continue
        # p^n = (1 - t)^n
        for j in range(n + 1):
            out[j] += a * math.comb(n, j) * (-1) ** j
    return tuple(out)


def _exact(poly: TargetPolynomial) -> tuple[Fraction, ...]:
    if poly.exact is not None:
        return poly.exact
    return tuple(Fraction(c) for c in poly.coeffs)


def derivatives_at_one(poly: TargetPolynomial, count: int) -> list[Fraction]:
    """Exact ``d^j Q / dp^j`` at ``p = 1`` for ``j = 1 .. count``."""
    shifted = _shifted_coefficients(_exact(poly), poly.order)
    # Q(1 - t) = sum a_j t^j  =>  d^j Q/dp^j (1) = (-1)^j j! a_j
    return [(-1) ** j * math.factorial(j) * shifted[j] for j in range(1, count + 1)]


def deficit(poly: TargetPolynomial, p):
    """``1 - Q_m(p)`` evaluated without cancellation near ``p = 1``.

    The constant term of the ``t = 1 - p`` expansion is removed exactly, so the
    result keeps full relative precision even where ``Q_m`` rounds to one.
    """
    shifted = _shifted_coefficients(_exact(poly), poly.order)
    tail = [-float(a) for a in shifted[1:]]
    t = 1.0 - np.asarray(p, dtype=float)
    # Horner on sum_{j>=1} tail_j t^j
    acc = np.zeros_like(t)
    for a in reversed(tail):
        acc = (acc + a) * t
    constant = 1.0 - float(shifted[0])
    return constant + acc


def flatness_order(poly: TargetPolynomial, p_lo: float = 0.99, p_hi: float = 0.9999, samples: int = 41) -> float:
    """Log-log slope of ``1 - Q_m`` against ``1 - p`` over ``[p_lo, p_hi]``."""
    t = np.geomspace(1.0 - p_hi, 1.0 - p_lo, samples)
    d = deficit(poly, 1.0 - t)
    if np.any(d <= 0):
        raise ValueError("deficit is not positive on the fit window")
    slope, _ = np.polyfit(np.log(t), np.log(d), 1)
    return float(slope)
