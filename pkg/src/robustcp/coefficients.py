"""Expansion of the composite propagator in powers of ``p`` and ``q``.

With ``U_n`` written as ``q * diag(e^{i alpha}, e^{-i alpha}) + p * offdiag(...)``, the
entries of ``U^(N) = U_N ... U_1`` are polynomials in ``(p, q)``::

    Re U11 = sum_k A_k p^{2k} q^{N-2k}      Im U11 = sum_k B_k p^{2k} q^{N-2k}
    Re U21 = sum_k C_k q^{2k} p^{N-2k}      Im U21 = sum_k D_k q^{2k} p^{N-2k}

whose coefficients depend on ``alpha`` and on the phases only.  The NOT-gate figure of
merit is ``J = -Re U21`` so its coefficients are ``c_k = -C_k``.

Two independent evaluators are provided: :func:`expand_coefficients` runs a transfer
recursion over (row, number of off-diagonal factors) and is cheap and batched;
:func:`enumerate_paths` sums the ``2**N`` factor choices one by one and serves as the
brute-force reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

MAX_ORDER = 25
_CHUNK_BITS = 15


def check_order(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"order must be a positive integer, got {n!r}")
    n = int(n)
    if n % 2 == 0:
        raise ValueError(f"order must be odd, got {n}")
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds the supported maximum of {MAX_ORDER}")
    return n


def _prepare(n, alpha, phases):
    n = check_order(n)
    phases = np.asarray(phases, dtype=float)
    if phases.shape[-1] != n:
        raise ValueError(f"expected {n} phases, got {phases.shape[-1]}")
    alpha = np.asarray(alpha, dtype=float)
    shape = np.broadcast_shapes(alpha.shape, phases.shape[:-1])
    phases = np.broadcast_to(phases, shape + (n,))
    alpha = np.broadcast_to(alpha, shape)
    return n, alpha, phases


def _step(w1, w2, ea, off):
    """One left multiplication by ``U_n`` on the bucketed first column."""
    n1 = w1 * ea[..., None]
    n2 = w2 * np.conj(ea)[..., None]
    n1[..., 1:] += w2[..., :-1] * np.conj(off)[..., None] * -1.0
    n2[..., 1:] += w1[..., :-1] * off[..., None]
    return n1, n2


def _bucket_sums(alpha, phases):
    """Bucketed path sums of the first column of ``U^(N)``.

    Returns complex arrays ``w1, w2`` of shape ``(..., N+1)``; entry ``m`` collects the
    paths containing ``m`` off-diagonal factors (with ``p`` and ``q`` stripped).
    """
    n = phases.shape[-1]
    shape = phases.shape[:-1]
    w1 = np.zeros(shape + (n + 1,), dtype=complex)
    w2 = np.zeros_like(w1)
    w1[..., 0] = 1.0
    ea = np.exp(1j * alpha)
    for k in range(n):
        # lower-left factor i e^{i phi}; upper-right i e^{-i phi} = -conj(lower-left)
        w1, w2 = _step(w1, w2, ea, 1j * np.exp(1j * phases[..., k]))
    return w1, w2


@dataclass(frozen=True)
class CoefficientSet:
    order: int
    alpha: float
    phases: tuple[float, ...]
    a: np.ndarray
    b: np.ndarray
    c_upper: np.ndarray
    d: np.ndarray

    @property
    def c_not(self) -> np.ndarray:
        """NOT-gate coefficients ``c_k = -C_k``."""
        return -self.c_upper

    def reconstruct(self, p, q):
        """Evaluate ``(U11, U21)`` of the composite propagator from the coefficients."""
        p = np.asarray(p, dtype=float)[..., None]
        q = np.asarray(q, dtype=float)[..., None]
        k = np.arange(len(self.a))
        n = self.order
        diag_pow = p ** (2 * k) * q ** (n - 2 * k)
        off_pow = q ** (2 * k) * p ** (n - 2 * k)
        u11 = np.sum((self.a + 1j * self.b) * diag_pow, axis=-1)
        u21 = np.sum((self.c_upper + 1j * self.d) * off_pow, axis=-1)
        return u11, u21


def _to_set(n, alpha, phases, w1, w2) -> CoefficientSet:
    k = np.arange((n + 1) // 2)
    diag = w1[2 * k]
    off = w2[n - 2 * k]
    return CoefficientSet(
        order=n,
        alpha=float(alpha),
        phases=tuple(float(x) for x in phases),
        a=diag.real.copy(),
        b=diag.imag.copy(),
        c_upper=off.real.copy(),
        d=off.imag.copy(),
    )


def expand_coefficients(n: int, alpha: float, phases) -> CoefficientSet:
    """Coefficients ``A_k, B_k, C_k, D_k`` for one ``alpha`` and one phase list."""
    n, alpha, phases = _prepare(n, alpha, phases)
    if phases.ndim != 1:
        raise ValueError("expand_coefficients takes a single phase list; use ck_not for batches")
    w1, w2 = _bucket_sums(alpha, phases)
    return _to_set(n, alpha, phases, w1, w2)


def ck_not(n: int, alpha, phases) -> np.ndarray:
    """``c_k(alpha, phases)`` for ``k = 0 .. (N-1)/2``; batched over leading axes."""
    n, alpha, phases = _prepare(n, alpha, phases)
    _, w2 = _bucket_sums(alpha, phases)
    k = np.arange((n + 1) // 2)
    return -w2[..., n - 2 * k].real


def ck_not_jacobian(n: int, alpha, phases) -> np.ndarray:
    """``d c_k / d phi_j`` with shape ``(..., (N+1)/2, N)``.

    Differentiates each path product directly: the derivative with respect to
    ``phi_j`` only touches the off-diagonal factors of pulse ``j``, so the recursion is
    rerun from the stored prefix with that single step differentiated.
    """
    n, alpha, phases = _prepare(n, alpha, phases)
    shape = phases.shape[:-1]
    ea = np.exp(1j * alpha)
    offs = 1j * np.exp(1j * phases)
    w1 = np.zeros(shape + (n + 1,), dtype=complex)
    w2 = np.zeros_like(w1)
    w1[..., 0] = 1.0
    prefix = []
    for j in range(n):
        prefix.append((w1, w2))
        w1, w2 = _step(w1, w2, ea, offs[..., j])
    k = np.arange((n + 1) // 2)
    jac = np.empty(shape + ((n + 1) // 2, n))
    for j in range(n):
        v1, v2 = prefix[j]
        # d/dphi (i e^{i phi}) = i * (i e^{i phi}); this also handles the conjugate factor
        d1 = np.zeros_like(v1)
        d2 = np.zeros_like(v2)
        doff = 1j * offs[..., j]
        d1[..., 1:] = v2[..., :-1] * -np.conj(doff)[..., None]
        d2[..., 1:] = v1[..., :-1] * doff[..., None]
        for m in range(j + 1, n):
            d1, d2 = _step(d1, d2, ea, offs[..., m])
        jac[..., :, j] = -d2[..., n - 2 * k].real
    return jac


def enumerate_paths(n: int, alpha: float, phases) -> CoefficientSet:
    """Brute-force coefficients by summing all ``2**N`` diagonal/off-diagonal choices.

    Buckets are accumulated chunk by chunk in a fixed order, so the result does not
    depend on how the enumeration is partitioned.
    """
    n, alpha, phases = _prepare(n, alpha, phases)
    if phases.ndim != 1:
        raise ValueError("enumerate_paths takes a single phase list")
    alpha = float(alpha)
    total = 1 << n
    chunk = min(total, 1 << _CHUNK_BITS)
    bit_index = np.arange(n, dtype=np.int64)
    acc1 = np.zeros(n + 1, dtype=complex)
    acc2 = np.zeros(n + 1, dtype=complex)
    ipow = np.array([1, 1j, -1, -1j])
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        off = ((masks[:, None] >> bit_index) & 1).astype(np.int8)
        # row occupied before pulse j: 0 for the first row, 1 for the second
        before = (np.cumsum(off, axis=1) - off) & 1
        sign = 1 - 2 * before.astype(np.int64)
        angle = np.where(off == 1, sign * phases, sign * alpha).sum(axis=1)
        count = off.sum(axis=1).astype(np.int64)
        value = ipow[count % 4] * np.exp(1j * angle)
        odd = (count % 2) == 1
        acc1 += np.bincount(count[~odd], weights=value[~odd].real, minlength=n + 1) + 1j * np.bincount(
            count[~odd], weights=value[~odd].imag, minlength=n + 1
        )
        acc2 += np.bincount(count[odd], weights=value[odd].real, minlength=n + 1) + 1j * np.bincount(
            count[odd], weights=value[odd].imag, minlength=n + 1
        )
    return _to_set(n, alpha, phases, acc1, acc2)


def path_count_bounds(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Number of contributing paths: bound for ``|A_k|, |B_k|`` and ``|C_k|, |D_k|``."""
    n = check_order(n)
    k = np.arange((n + 1) // 2)
    diag = np.array([comb(n, 2 * int(i)) for i in k], dtype=float)
    off = np.array([comb(n, n - 2 * int(i)) for i in k], dtype=float)
    return diag, off
