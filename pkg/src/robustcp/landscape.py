"""Fidelity landscapes ``|J(deltaT, eta)|``: grids, level lines and area scores."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import ndimage

from .su2 import PULSE_AREA, PulseSequence, not_fidelity_map

DEFAULT_LEVELS = (0.999, 0.995, 0.99)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular window in ``(deltaT, eta)``; arrays are indexed ``[eta, deltaT]``."""

    delta_lo: float = -math.pi
    delta_hi: float = math.pi
    delta_samples: int = 401
    eta_lo: float = -1.0
    eta_hi: float = 1.0
    eta_samples: int = 401

    def __post_init__(self):
        bounds = (self.delta_lo, self.delta_hi, self.eta_lo, self.eta_hi)
        if not all(math.isfinite(float(b)) for b in bounds):
            raise ValueError("window bounds must be finite")
        if not (self.delta_lo < self.delta_hi and self.eta_lo < self.eta_hi):
            raise ValueError("window bounds must be increasing")
        if int(self.delta_samples) < 2 or int(self.eta_samples) < 2:
            raise ValueError("need at least 2 samples per axis")
        object.__setattr__(self, "delta_samples", int(self.delta_samples))
        object.__setattr__(self, "eta_samples", int(self.eta_samples))

    @property
    def deltas(self) -> np.ndarray:
        return _axis(self.delta_lo, self.delta_hi, self.delta_samples)

    @property
    def etas(self) -> np.ndarray:
        return _axis(self.eta_lo, self.eta_hi, self.eta_samples)

    @property
    def cell_diagonal(self) -> float:
        dx = (self.delta_hi - self.delta_lo) / (self.delta_samples - 1)
        dy = (self.eta_hi - self.eta_lo) / (self.eta_samples - 1)
        return math.hypot(dx, dy)

    def to_dict(self) -> dict:
        return {
            "deltaT": [float(self.delta_lo), float(self.delta_hi), self.delta_samples],
            "eta": [float(self.eta_lo), float(self.eta_hi), self.eta_samples],
        }

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()


def strip_spec(half_width: float = 0.02, delta_samples: int = 41, eta_samples: int = 401) -> GridSpec:
    """Thin window around ``deltaT = 0`` spanning the full ``eta`` range."""
    return GridSpec(-half_width, half_width, delta_samples, -1.0, 1.0, eta_samples)


@dataclass(frozen=True)
class FidelityGrid:
    spec: GridSpec
    values: np.ndarray = field(repr=False)
    provenance: dict = field(default_factory=dict)


def pulse_digest(seq: PulseSequence) -> str:
    return hashlib.sha256(json.dumps([repr(x) for x in seq.phases]).encode()).hexdigest()


def _axis(lo, hi, n):
    nodes = np.linspace(lo, hi, n)
    # rounding leaves the centre of a symmetric window a few ulp off zero
    nodes[np.abs(nodes) <= 8 * np.finfo(float).eps * (hi - lo)] = 0.0
    return nodes


def evaluate_grid(seq: PulseSequence, spec: GridSpec | None = None, pulse_hash: str | None = None) -> FidelityGrid:
    """``|J|`` at every node; nodes are computed independently of each other."""
    spec = spec or GridSpec()
    d, e = np.meshgrid(spec.deltas, spec.etas)
    values = np.abs(not_fidelity_map(seq.phases, d, e))
    provenance = {"spec_sha256": spec.digest(), "pulse_sha256": pulse_hash or pulse_digest(seq)}
    return FidelityGrid(spec, values, provenance)


def origin_value(grid: FidelityGrid) -> float:
    """Grid value at the node nearest ``(0, 0)``."""
    i = int(np.argmin(np.abs(grid.spec.etas)))
    j = int(np.argmin(np.abs(grid.spec.deltas)))
    return float(grid.values[i, j])


# ---------------------------------------------------------------------------
# marching squares

# cell corners: 0 = (i, j), 1 = (i, j+1), 2 = (i+1, j+1), 3 = (i+1, j); edges join them
_EDGES = ((0, 1), (1, 2), (3, 2), (0, 3))
_CORNER_OFFSETS = ((0, 0), (0, 1), (1, 1), (1, 0))


def _edge_key(i, j, edge):
    # global edge identity shared by neighbouring cells
    if edge == 0:
        return ("h", i, j)
    if edge == 2:
        return ("h", i + 1, j)
    if edge == 3:
        return ("v", i, j)
    return ("v", i, j + 1)


def _cell_corners(values, i, j):
    return (values[i, j], values[i, j + 1], values[i + 1, j + 1], values[i + 1, j])


def _segments(corners, level):
    """Edge pairs crossed by the level line inside one cell."""
    inside = [c >= level for c in corners]
    crossed = [k for k, (a, b) in enumerate(_EDGES) if inside[a] != inside[b]]
    if len(crossed) == 2:
        return [tuple(crossed)]
    if len(crossed) == 4:
        center_inside = float(np.mean(corners)) >= level
        if inside[0] == center_inside:
            # corners 0 and 2 joined through the centre: cut off corners 1 and 3
            return [(0, 1), (3, 2)]
        return [(0, 3), (1, 2)]
    return []


def _crossing(spec, i, j, edge, corners, level):
    a, b = _EDGES[edge]
    va, vb = corners[a], corners[b]
    t = (level - va) / (vb - va)
    xs, ys = spec.deltas, spec.etas
    (ia, ja), (ib, jb) = _CORNER_OFFSETS[a], _CORNER_OFFSETS[b]
    xa, ya = xs[j + ja], ys[i + ia]
    xb, yb = xs[j + jb], ys[i + ib]
    return (float(xa + t * (xb - xa)), float(ya + t * (yb - ya)))


def _chain(points, adjacency):
    """Join segments into polylines, open ones first, in a fixed order."""
    seen = set()
    lines = []

    def walk(start):
        line = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in adjacency[cur] if n != prev and n not in seen]
            if not nxt:
                closing = [n for n in adjacency[cur] if n == start and prev is not None and len(line) > 2]
                if closing:
                    line.append(start)
                return line
            prev, cur = cur, nxt[0]
            seen.add(cur)
            line.append(cur)

    order = sorted(points)
    for key in order:
        if key not in seen and len(adjacency[key]) == 1:
            lines.append(walk(key))
    for key in order:
        if key not in seen:
            lines.append(walk(key))
    return [[list(points[k]) for k in line] for line in lines]


@dataclass(frozen=True)
class Contour:
    level: float
    polylines: list

    def to_dict(self) -> dict:
        return {"level": self.level, "polylines": self.polylines}


@dataclass(frozen=True)
class ContourSet:
    contours: tuple[Contour, ...]

    @property
    def levels(self) -> tuple[float, ...]:
        return tuple(c.level for c in self.contours)

    def __getitem__(self, level) -> Contour:
        for c in self.contours:
            if c.level == level:
                return c
        raise KeyError(level)

    def to_json(self) -> list:
        return [c.to_dict() for c in self.contours]


def _check_level(level):
    level = float(level)
    if not 0.0 < level < 1.0:
        raise ValueError(f"levels must lie strictly between 0 and 1, got {level}")
    return level


def _boundary_cells(values, level):
    above = values >= level
    corners = above[:-1, :-1].astype(int) + above[:-1, 1:] + above[1:, 1:] + above[1:, :-1]
    return corners, np.argwhere((corners > 0) & (corners < 4))


def extract_contours(grid: FidelityGrid, levels: Iterable[float] = DEFAULT_LEVELS) -> ContourSet:
    """Marching-squares level lines with linear interpolation along cell edges.

    Ambiguous (saddle) cells are resolved with the mean of the four corner values.
    Closed polylines repeat their first vertex at the end.
    """
    out = []
    for level in levels:
        level = _check_level(level)
        _, cells = _boundary_cells(grid.values, level)
        points, adjacency = {}, {}
        for i, j in cells:
            corners = _cell_corners(grid.values, i, j)
            for e1, e2 in _segments(corners, level):
                k1, k2 = _edge_key(i, j, e1), _edge_key(i, j, e2)
                for key, edge in ((k1, e1), (k2, e2)):
                    if key not in points:
                        points[key] = _crossing(grid.spec, i, j, edge, corners, level)
                        adjacency[key] = []
                adjacency[k1].append(k2)
                adjacency[k2].append(k1)
        out.append(Contour(level, _chain(points, adjacency)))
    return ContourSet(tuple(out))


def _shoelace(poly):
    x = np.array([p[0] for p in poly])
    y = np.array([p[1] for p in poly])
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


_CORNER_EDGES = {0: (0, 3), 1: (0, 1), 2: (1, 2), 3: (2, 3)}


def _inside_fraction(corners, level):
    """Area fraction of a unit cell where the edge-interpolated field is above ``level``."""
    unit = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
    inside = [c >= level for c in corners]

    def cross(edge):
        a, b = _EDGES[edge]
        t = (level - corners[a]) / (corners[b] - corners[a])
        return (unit[a][0] + t * (unit[b][0] - unit[a][0]), unit[a][1] + t * (unit[b][1] - unit[a][1]))

    crossed = [k for k, (a, b) in enumerate(_EDGES) if inside[a] != inside[b]]
    if len(crossed) == 4 and float(np.mean(corners)) < level:
        # saddle with the centre outside: two separate corner triangles
        return sum(
            _shoelace([unit[c], cross(_CORNER_EDGES[c][0]), cross(_CORNER_EDGES[c][1])])
            for c in range(4)
            if inside[c]
        )
    # walk the boundary counter-clockwise: corner 0, edge 0, corner 1, edge 1, ...
    poly = []
    for k in range(4):
        if inside[k]:
            poly.append(unit[k])
        if k in crossed:
            poly.append(cross(k))
    return _shoelace(poly) if len(poly) >= 3 else 0.0


def robustness_score(grid: FidelityGrid, threshold: float) -> float:
    """Fraction of the window area where ``|J| >= threshold``.

    Fully covered cells count one; boundary cells count the area of the polygon cut
    out by the linearly interpolated level line.
    """
    threshold = _check_level(threshold)
    counts, cells = _boundary_cells(grid.values, threshold)
    total = float(np.count_nonzero(counts == 4))
    for i, j in cells:
        total += _inside_fraction(_cell_corners(grid.values, i, j), threshold)
    return float(total / counts.size)


def region_containing(grid: FidelityGrid, threshold: float, point=(0.0, 0.0)) -> np.ndarray:
    """Mask of the 4-connected ``|J| >= threshold`` component holding the node nearest ``point``."""
    mask = grid.values >= threshold
    labels, _ = ndimage.label(mask)
    i = int(np.argmin(np.abs(grid.spec.etas - point[1])))
    j = int(np.argmin(np.abs(grid.spec.deltas - point[0])))
    if labels[i, j] == 0:
        return np.zeros_like(mask)
    return labels == labels[i, j]


# ---------------------------------------------------------------------------
# reference curves


def omega_pi_eta(deltaT):
    """``eta`` on the curve ``omega T = pi`` (``alpha = pi/2``): ``sqrt(1 - deltaT^2/pi^2) - 1``."""
    deltaT = np.asarray(deltaT, dtype=float)
    return np.sqrt(np.clip(1.0 - (deltaT / PULSE_AREA) ** 2, 0.0, None)) - 1.0


def reference_lines(spec: GridSpec | None = None, samples: int = 401) -> list[dict]:
    """The ``deltaT = 0`` axis and the ``omega T = pi`` curve clipped to the window."""
    spec = spec or GridSpec()
    axis = []
    if spec.delta_lo <= 0.0 <= spec.delta_hi:
        axis = [[[0.0, float(spec.eta_lo)], [0.0, float(spec.eta_hi)]]]
    lo, hi = max(spec.delta_lo, -PULSE_AREA), min(spec.delta_hi, PULSE_AREA)
    curve = []
    if lo <= hi:
        d = np.linspace(lo, hi, samples)
        e = omega_pi_eta(d)
        keep = (e >= spec.eta_lo) & (e <= spec.eta_hi)
        run = []
        for x, y, k in zip(d, e, keep):
            if k:
                run.append([float(x), float(y)])
            elif run:
                curve.append(run)
                run = []
        if run:
            curve.append(run)
    return [
        {"name": "deltaT=0", "level": None, "polylines": axis},
        {"name": "omegaT=pi", "level": None, "polylines": curve},
    ]


# ---------------------------------------------------------------------------
# export


def write_grid_csv(grid: FidelityGrid, path) -> None:
    """``deltaT,eta,J_abs`` rows, ``eta`` as the outer loop, 17 significant digits."""
    d, e = np.meshgrid(grid.spec.deltas, grid.spec.etas)
    table = np.column_stack([d.ravel(), e.ravel(), grid.values.ravel()])
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header="deltaT,eta,J_abs", comments="")


def read_grid_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def line_samples(phases: Sequence[float], line: str, count: int = 200, spec: GridSpec | None = None):
    """``(deltaT, eta)`` samples on a design line inside the window (``'alpha0'`` or ``'alpha_half_pi'``)."""
    spec = spec or GridSpec()
    if line == "alpha0":
        eta = np.linspace(spec.eta_lo, spec.eta_hi, count)
        return np.zeros_like(eta), eta
    if line == "alpha_half_pi":
        lo, hi = max(spec.delta_lo, -PULSE_AREA), min(spec.delta_hi, PULSE_AREA)
        d = np.linspace(lo, hi, count)
        return d, omega_pi_eta(d)
    raise ValueError(f"unknown design line {line!r}")
