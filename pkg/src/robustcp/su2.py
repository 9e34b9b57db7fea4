"""Single-pulse and composite propagators of a driven two-level system.

Every pulse of the sequence is a pi-pulse (``omega0 * T = pi``) whose phase is the
only free parameter.  The offset ``delta`` and the relative amplitude error ``eta``
enter through the dimensionless pair ``(deltaT, eta)`` and are mapped onto the
propagator parameters ``(p, q, alpha)``::

    U_n = [[q e^{i alpha},     i p e^{-i phi_n}],
           [i p e^{i phi_n},   q e^{-i alpha}  ]]

Matrices are plain ``numpy`` arrays of shape ``(..., 2, 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PULSE_AREA = math.pi
"""Product ``omega0 * T`` of every elementary pulse."""

TWO_PI = 2.0 * math.pi


def wrap_phase(phi):
    """Reduce angles to the half-open interval ``(-pi, pi]``."""
    phi = np.asarray(phi, dtype=float)
    out = np.mod(phi + math.pi, TWO_PI) - math.pi
    out = np.where(out <= -math.pi, out + TWO_PI, out)
    # values already in range are returned untouched (no rounding from the shift)
    out = np.where((phi > -math.pi) & (phi <= math.pi), phi, out)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class PulseSequence:
    """Phases of ``N`` identical pi-pulses; ``N`` must be odd."""

    phases: tuple[float, ...]
    pulse_area: float = PULSE_AREA

    def __post_init__(self):
        phases = tuple(float(x) for x in np.ravel(np.asarray(self.phases, dtype=float)))
        if not phases:
            raise ValueError("a pulse sequence needs at least one phase")
        if len(phases) % 2 == 0:
            raise ValueError(f"number of pulses must be odd, got {len(phases)}")
        if not all(math.isfinite(x) for x in phases):
            raise ValueError("phases must be finite")
        if abs(self.pulse_area - PULSE_AREA) > 1e-12:
            raise ValueError(f"only pi-pulses are supported (pulse_area={self.pulse_area!r})")
        object.__setattr__(self, "phases", tuple(wrap_phase(x) for x in phases))

    @property
    def n_pulses(self) -> int:
        return len(self.phases)

    def as_array(self) -> np.ndarray:
        return np.array(self.phases)

    def alternating_sum(self) -> float:
        """``phi_1 - phi_2 + phi_3 - ...``, not reduced modulo 2 pi."""
        signs = (-1.0) ** np.arange(self.n_pulses)
        return float(np.dot(signs, self.phases))


@dataclass(frozen=True)
class InhomogeneityPoint:
    deltaT: float
    eta: float
    p: float
    q: float
    alpha: float
    degenerate: bool = field(default=False, compare=False)

    @classmethod
    def from_pqa(cls, p: float, q: float, alpha: float) -> "InhomogeneityPoint":
        """Build the point whose single-pulse propagator has parameters ``(p, q, alpha)``.

        ``p`` and ``q`` are renormalised onto the unit circle; the matching
        ``(deltaT, eta)`` is the one with ``omega T`` in ``[0, 2 pi]``.
        """
        norm = math.hypot(p, q)
        if norm == 0.0:
            raise ValueError("p and q cannot both vanish")
        p, q = p / norm, abs(q) / norm
        z = q * math.cos(alpha)
        y = q * math.sin(alpha)
        half = math.acos(max(-1.0, min(1.0, z)))
        s = math.sin(half)
        if s == 0.0:
            # z = +-1: only the trivial rotation, no finite (deltaT, eta) except omega = 0
            if z > 0:
                return cls(0.0, -1.0, 0.0, 1.0, 0.0, degenerate=True)
            raise ValueError("q = 1 with alpha = pi has no representation with omega T <= 2 pi")
        omega_t = 2.0 * half
        deltaT = y * omega_t / s
        eta = p * omega_t / (s * PULSE_AREA) - 1.0
        return cls(deltaT, eta, p, q, math.atan2(y, z))


def _pqa(deltaT, eta):
    deltaT = np.asarray(deltaT, dtype=float)
    eta = np.asarray(eta, dtype=float)
    amp = PULSE_AREA * (1.0 + eta)
    omega_t = np.hypot(deltaT, amp)
    degenerate = omega_t == 0.0
    safe = np.where(degenerate, 1.0, omega_t)
    s = np.sin(0.5 * omega_t)
    x = np.where(degenerate, 0.0, amp * s / safe)
    y = np.where(degenerate, 0.0, deltaT * s / safe)
    z = np.where(degenerate, 1.0, np.cos(0.5 * omega_t))
    q = np.hypot(y, z)
    alpha = np.arctan2(y, z)
    return x, q, alpha, degenerate


def map_inhomogeneity(deltaT: float, eta: float) -> InhomogeneityPoint:
    """Map the error coordinates ``(deltaT, eta)`` onto ``(p, q, alpha)``.

    ``p`` keeps its sign where ``omega T > 2 pi``; the zero-field point
    ``(0, -1)`` is the identity propagator and is flagged as degenerate.
    """
    p, q, alpha, degenerate = _pqa(deltaT, eta)
    return InhomogeneityPoint(
        float(deltaT), float(eta), float(p), float(q), float(alpha), bool(degenerate)
    )


def single_propagator(point: InhomogeneityPoint, phase: float) -> np.ndarray:
    p, q, a = point.p, point.q, point.alpha
    return np.array(
        [
            [q * np.exp(1j * a), 1j * p * np.exp(-1j * phase)],
            [1j * p * np.exp(1j * phase), q * np.exp(-1j * a)],
        ]
    )


def composite_propagator(seq: PulseSequence, point: InhomogeneityPoint) -> np.ndarray:
    """Ordered product ``U_N ... U_2 U_1``."""
    u = np.eye(2, dtype=complex)
    for phi in seq.phases:
        u = single_propagator(point, phi) @ u
    return u


def fidelity_not(seq: PulseSequence, point: InhomogeneityPoint) -> float:
    """Signed NOT-gate overlap ``J = -Re(U_21)``; robustness is measured by ``|J|``."""
    return float(-composite_propagator(seq, point)[1, 0].real)


def not_fidelity_map(phases: Sequence[float], deltaT, eta) -> np.ndarray:
    """Vectorised ``J(deltaT, eta)`` over broadcastable coordinate arrays.

    Uses the Cayley-Klein pair ``(a, b)`` of each SU(2) factor, i.e. the first column
    of the matrix, instead of full 2x2 products.
    """
    p, q, alpha, _ = _pqa(deltaT, eta)
    diag = q * np.exp(1j * alpha)
    a = np.ones(np.shape(diag), dtype=complex)
    b = np.zeros(np.shape(diag), dtype=complex)
    for phi in np.asarray(phases, dtype=float):
        off = 1j * p * np.exp(1j * phi)
        # [[diag, -conj(off)], [off, conj(diag)]] @ [a, b]^T
        a, b = diag * a - np.conj(off) * b, off * a + np.conj(diag) * b
    return -b.real
