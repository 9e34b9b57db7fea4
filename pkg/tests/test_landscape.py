import json
import math

import numpy as np
import pytest

from robustcp import reference
from robustcp.landscape import (
    FidelityGrid,
    GridSpec,
    evaluate_grid,
    extract_contours,
    line_samples,
    omega_pi_eta,
    origin_value,
    read_grid_csv,
    reference_lines,
    region_containing,
    robustness_score,
    strip_spec,
    write_grid_csv,
)
from robustcp.su2 import PulseSequence, fidelity_not, map_inhomogeneity
from robustcp.target import eval_q_m, q_m_coefficients

SMALL = GridSpec(-math.pi, math.pi, 81, -1.0, 1.0, 81)


def _synthetic(spec, fn):
    d, e = np.meshgrid(spec.deltas, spec.etas)
    return FidelityGrid(spec, fn(d, e))


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(delta_samples=1)
    with pytest.raises(ValueError):
        GridSpec(1.0, -1.0)
    with pytest.raises(ValueError):
        GridSpec(eta_hi=float("inf"))


def test_grid_matches_matrix_products(rng):
    seq = PulseSequence(reference.LINE_ALPHA0[5])
    grid = evaluate_grid(seq, SMALL)
    for _ in range(30):
        i, j = rng.integers(0, 81, 2)
        pt = map_inhomogeneity(SMALL.deltas[j], SMALL.etas[i])
        assert grid.values[i, j] == pytest.approx(abs(fidelity_not(seq, pt)), abs=1e-12)


def test_grid_bounds_and_origin():
    for ph in (reference.LINE_ALPHA0[3], reference.ALL_DIRECTIONS[5], reference.TWO_LINES[9]):
        grid = evaluate_grid(PulseSequence(ph), SMALL)
        assert np.all(grid.values >= 0) and np.all(grid.values <= 1 + 1e-12)
    grid = evaluate_grid(PulseSequence(reference.LINE_ALPHA0[3]), SMALL)
    assert origin_value(grid) >= 1 - 1e-9


def test_evaluation_order_invariance():
    seq = PulseSequence(reference.LINE_ALPHA0[7])
    full = evaluate_grid(seq, SMALL).values
    rows = [evaluate_grid(seq, GridSpec(SMALL.delta_lo, SMALL.delta_hi, 81, e, e + 1e-9, 2)).values[0] for e in SMALL.etas[::20]]
    assert np.array_equal(np.array(rows), full[::20])


def test_three_pulse_on_resonance_axis_follows_target():
    seq = PulseSequence(reference.LINE_ALPHA0[3])
    eta = np.linspace(-1, 0, 50)
    p = np.sin(math.pi * (1 + eta) / 2)
    j = np.array([abs(fidelity_not(seq, map_inhomogeneity(0.0, e))) for e in eta])
    assert np.all(j >= eval_q_m(q_m_coefficients(3), p) - 1e-9)


def test_constant_grids():
    low = _synthetic(SMALL, lambda d, e: np.full_like(d, 0.5))
    high = _synthetic(SMALL, lambda d, e: np.ones_like(d))
    assert extract_contours(low, [0.99]).contours[0].polylines == []
    assert robustness_score(low, 0.99) == 0.0
    assert robustness_score(high, 0.99) == 1.0


def test_circle_contour_oracle():
    spec = GridSpec(-1, 1, 121, -1, 1, 121)
    grid = _synthetic(spec, lambda d, e: 1 - (d**2 + e**2))
    for level in (0.5, 0.75, 0.9):
        lines = extract_contours(grid, [level]).contours[0].polylines
        assert len(lines) == 1 and lines[0][0] == lines[0][-1]
        radius = math.sqrt(1 - level)
        r = np.hypot(*np.array(lines[0]).T)
        assert np.max(np.abs(r - radius)) < spec.cell_diagonal
        assert robustness_score(grid, level) == pytest.approx(math.pi * radius**2 / 4, rel=1e-2)


def test_contour_vertices_on_cell_edges():
    grid = evaluate_grid(PulseSequence(reference.LINE_ALPHA0[5]), SMALL)
    xs, ys = SMALL.deltas, SMALL.etas
    for contour in extract_contours(grid).contours:
        for line in contour.polylines:
            for x, y in line:
                on_x = np.min(np.abs(xs - x)) < 1e-12
                on_y = np.min(np.abs(ys - y)) < 1e-12
                assert on_x or on_y


def test_saddle_cells_resolved_by_centre_mean():
    spec = GridSpec(0, 1, 2, 0, 1, 2)
    # high diagonal corners, centre mean above the level: one band joining them
    joined = FidelityGrid(spec, np.array([[1.0, 0.0], [0.0, 1.0]]))
    split = FidelityGrid(spec, np.array([[0.6, 0.0], [0.0, 0.6]]))
    assert len(extract_contours(joined, [0.4]).contours[0].polylines) == 2
    assert robustness_score(joined, 0.4) > robustness_score(split, 0.4)


def test_contours_deterministic():
    grid = evaluate_grid(PulseSequence(reference.LINE_ALPHA0[7]), SMALL)
    a = extract_contours(grid).to_json()
    b = extract_contours(grid).to_json()
    assert json.dumps(a) == json.dumps(b)


def test_invalid_levels():
    grid = _synthetic(SMALL, lambda d, e: np.ones_like(d))
    with pytest.raises(ValueError):
        extract_contours(grid, [1.0])
    with pytest.raises(ValueError):
        robustness_score(grid, 0.0)


def test_reference_lines():
    axis, curve = reference_lines(GridSpec())
    assert axis["level"] is None and curve["level"] is None
    pts = np.array(curve["polylines"][0])
    assert pts[0] == pytest.approx([-math.pi, -1.0])
    assert pts[-1] == pytest.approx([math.pi, -1.0])
    assert omega_pi_eta(0.0) == 0.0
    assert omega_pi_eta(math.pi / 2) == pytest.approx(math.sqrt(3) / 2 - 1)
    assert axis["polylines"] == [[[0.0, -1.0], [0.0, 1.0]]]


def test_reference_curve_has_alpha_half_pi():
    d, e = line_samples(None, "alpha_half_pi", 25)
    for x, y in zip(d[1:-1], e[1:-1]):
        if abs(x) < 1e-9:
            # the curve touches the alpha = 0 axis at the origin
            continue
        assert abs(map_inhomogeneity(x, y).alpha) == pytest.approx(math.pi / 2, abs=1e-9)


def test_seven_pulses_cover_more_than_five():
    s5 = robustness_score(evaluate_grid(PulseSequence(reference.LINE_ALPHA0[5])), 0.99)
    s7 = robustness_score(evaluate_grid(PulseSequence(reference.LINE_ALPHA0[7])), 0.99)
    assert s7 > s5


def test_strip_scores_nondecreasing():
    strip = strip_spec()
    scores = [robustness_score(evaluate_grid(PulseSequence(reference.LINE_ALPHA0[n]), strip), 0.99) for n in (3, 5, 9)]
    assert scores[0] <= scores[1] <= scores[2]


def test_region_containing_origin():
    grid = _synthetic(SMALL, lambda d, e: 1 - (d**2 + e**2) / 10)
    mask = region_containing(grid, 0.99)
    assert mask[40, 40] and not mask[0, 0]


def test_csv_export(tmp_path):
    spec = GridSpec(-1, 1, 3, -0.5, 0.5, 2)
    grid = evaluate_grid(PulseSequence(reference.LINE_ALPHA0[3]), spec)
    path = tmp_path / "g.csv"
    write_grid_csv(grid, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "deltaT,eta,J_abs"
    assert len(lines) == 7
    data = read_grid_csv(path)
    # eta is the outer loop
    assert np.allclose(data[:3, 1], -0.5) and np.allclose(data[:3, 0], [-1, 0, 1])
    assert np.array_equal(data[:, 2], grid.values.ravel())
