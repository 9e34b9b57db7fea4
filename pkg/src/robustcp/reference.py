"""Published phase sets and closed forms, used as solver seeds and verification fixtures.

Phases are in radians, exactly as printed (three or four significant digits unless
given in closed form).
"""

from __future__ import annotations

import math

import numpy as np

PI = math.pi

# robust along alpha = 0 (the delta = 0 axis)
LINE_ALPHA0 = {
    3: (PI / 6, 5 * PI / 6, PI / 6),
    5: (0.211, 1.21, 3.569, 1.21, 0.211),
    7: (0.706, -0.903, 1.98, 2.466, 1.98, -0.903, 0.706),
    9: (0.03, 0.242, 0.941, 2.466, 5.043, 2.466, 0.941, 0.242, 0.03),
}

# robust along alpha = pi/2 (the omega T = pi curve)
LINE_ALPHA_HALF_PI = {
    3: (PI / 6, -PI / 6, PI / 6),
    5: (PI / 14, -3 * PI / 5, -59 * PI / 70, -3 * PI / 5, PI / 14),
    7: (-0.691, -2.257, -2.002, -5.584, -2.002, -2.257, -0.691),
    9: (1.012, 0.442, 2.569, 2.945, 1.184, 2.945, 2.569, 0.442, 1.012),
}

# robust along both lines at once
TWO_LINES = {
    3: (PI / 2, PI / 2, -PI / 2),
    5: (0.616, -0.634, 2.34, 2.58, 0.616),
    7: (1.809, 0.997, -0.292, 2.609, 2.85, 0.997, -1.333),
    9: (2.588, -0.428, 0.207, 1.803, 1.571, 4.48, 2.936, 0.428, 0.553),
}

# rows given in closed form (exact), the others are rounded numerical values
EXACT_ROWS = {
    ("line", 0.0): {3},
    ("line", PI / 2): {3, 5},
    ("two_lines",): {3},
}


def all_directions_n5() -> tuple[float, ...]:
    """phi_2 = 2 phi_1, phi_3 = pi/2 + phi_2, phi_1 = -pi/6, completed symmetrically."""
    p1 = -PI / 6
    p2 = 2 * p1
    p3 = PI / 2 + p2
    return (p1, p2, p3, p2, p1)


def all_directions_n7(phi4: float | None = None) -> tuple[float, ...]:
    """phi_1 = phi_4/2 - pi/4, phi_2 = phi_3 = 3 phi_1, phi_4 = arcsin(sqrt(3) - 19/16).

    ``phi4`` overrides the printed middle phase; the family keeps ``c_0 = 1`` and an
    alpha-independent ``c_1`` for every ``phi4``.
    """
    if phi4 is None:
        phi4 = math.asin(math.sqrt(3) - 19 / 16)
    p1 = phi4 / 2 - PI / 4
    return (p1, 3 * p1, 3 * p1, phi4, 3 * p1, 3 * p1, p1)


ALL_DIRECTIONS = {5: all_directions_n5(), 7: all_directions_n7()}


def published_sets():
    """Yield ``(family, alphas, order, phases, exact)`` for every printed row."""
    for n, ph in LINE_ALPHA0.items():
        yield "line", (0.0,), n, ph, n in EXACT_ROWS[("line", 0.0)]
    for n, ph in LINE_ALPHA_HALF_PI.items():
        yield "line", (PI / 2,), n, ph, n in EXACT_ROWS[("line", PI / 2)]
    for n, ph in TWO_LINES.items():
        yield "two_lines", (0.0, PI / 2), n, ph, n in EXACT_ROWS[("two_lines",)]


def n5_closed_form_coefficients(alpha: float, phases) -> dict[str, np.ndarray]:
    """Printed closed forms of ``A_k, B_k, C_k, D_k`` for five pulses, transcribed verbatim.

    ``C_k`` as printed carries the opposite overall sign to the ``Re U21`` expansion
    (it matches ``Re U12 = -Re U21``); see :data:`N5_PRINTED_SIGN`.
    """
    a = float(alpha)
    f1, f2, f3, f4, f5 = (float(x) for x in phases)
    sin, cos = math.sin, math.cos
    A = [
        cos(5 * a),
        -cos(a - f2 + f5) - cos(-f1 + a + f4) - cos(f1 + a - f3) - cos(-f1 + 3 * a + f5)
        - cos(3 * a + f2 - f3) - cos(3 * a - f5 + f4) - cos(3 * a + f3 - f4) - cos(f1 - f2 + 3 * a)
        - cos(a + f2 - f4) - cos(a + f3 - f5),
        cos(-f1 + a + f3 + f5 - f4) + cos(-f1 + f2 - f3 + f5 + a) + cos(f1 - f2 + f3 + a - f4)
        + cos(a + f2 - f3 - f5 + f4) + cos(f1 - f2 + a - f5 + f4),
    ]
    B = [
        sin(5 * a),
        -sin(f1 + a - f3) - sin(3 * a + f3 - f4) - sin(a + f3 - f5) + sin(-f1 + 3 * a + f5)
        - sin(a + f2 - f4) + sin(a - f2 + f5) - sin(f1 - f2 + 3 * a) + sin(-f1 + a + f4)
        - sin(3 * a - f5 + f4) - sin(3 * a + f2 - f3),
        -sin(-f1 + f2 - f3 + f5 + a) + sin(a + f2 - f3 - f5 + f4) + sin(f1 - f2 + f3 + a - f4)
        + sin(f1 - f2 + a - f5 + f4) - sin(-f1 + a + f3 + f5 - f4),
    ]
    C = [
        sin(f1 - f2 + f3 + f5 - f4),
        -sin(f1 - f2 + f4) + sin(-f1 + f2 - f3 + 2 * a) - sin(f1 - f3 + f5) + sin(-f1 + 2 * a - f5 + f4)
        - sin(f2 - f3 + f4) - sin(f2 + f5 - f4) + sin(-f1 + 2 * a + f3 - f4) - sin(2 * a + f2 - f3 + f5)
        - sin(2 * a + f3 + f5 - f4) - sin(f1 - f2 + 2 * a + f5),
        sin(2 * a + f4) - sin(-f1 + 4 * a) + sin(4 * a + f5) + sin(f3) - sin(2 * a - f2),
    ]
    # all ten summands, including the two printed after the stray comma
    D = [
        cos(f1 - f2 + f3 + f5 - f4),
        -cos(f2 - f3 + f4) - cos(-f1 + f2 - f3 + 2 * a) - cos(f1 - f2 + f4) - cos(-f1 + 2 * a - f5 + f4)
        - cos(f2 + f5 - f4) - cos(f1 - f3 + f5) - cos(-f1 + 2 * a + f3 - f4) - cos(f1 - f2 + 2 * a + f5)
        - cos(2 * a + f2 - f3 + f5) - cos(2 * a + f3 + f5 - f4),
        cos(-f1 + 4 * a) + cos(f3) + cos(4 * a + f5) + cos(2 * a - f2) + cos(2 * a + f4),
    ]
    return {k: np.array(v) for k, v in zip("ABCD", (A, B, C, D))}


N5_PRINTED_SIGN = {"A": 1.0, "B": 1.0, "C": -1.0, "D": 1.0}
"""Overall sign relating each printed family to the expansion of ``U21``/``U11``."""

