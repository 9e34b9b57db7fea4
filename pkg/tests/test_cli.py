import json
import math

import numpy as np
import pytest

from robustcp import reference
from robustcp.cli import EXIT_NOT_CONVERGED, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from robustcp.landscape import read_grid_csv
from robustcp.pulsefile import PulseFile, PulseFileError
from robustcp.solver import equivalent

PI = math.pi


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _pulse(path, phases):
    PulseFile(phases=list(phases), metadata={"mode": {"name": "manual"}}).write(path)
    return str(path)


def test_design_three_pulse_line(workdir, capsys):
    assert main(["design", "--order", "3", "--mode", "line", "--alpha", "0", "--restarts", "32", "--out", "p.json"]) == EXIT_OK
    pulse = PulseFile.read("p.json")
    assert equivalent(pulse.phases, (PI / 6, 5 * PI / 6, PI / 6))
    out = capsys.readouterr().out
    assert "0.523599, 2.617994, 0.523599" in out
    assert "alternating phase sum" in out and "c1=" in out
    assert pulse.metadata["mode"] == {"name": "line", "alpha": 0.0}
    assert pulse.metadata["solver"]["seed"] == 0


def test_design_five_pulse_all_directions(workdir):
    assert main(["design", "--order", "5", "--mode", "all-dirs", "--restarts", "32", "--out", "p.json"]) == EXIT_OK
    assert equivalent(PulseFile.read("p.json").phases, (-PI / 6, -PI / 3, PI / 6, -PI / 3, -PI / 6))


def test_design_unsupported_order(workdir, capsys):
    code = main(["design", "--order", "9", "--mode", "all-dirs", "--out", "p.json"])
    assert code != 0
    assert "unsupported" in capsys.readouterr().err
    assert not (workdir / "p.json").exists()


def test_design_non_convergence_still_writes(workdir):
    code = main(["design", "--order", "9", "--mode", "line", "--restarts", "1", "--max-iterations", "1",
                 "--out", "p.json"])
    pulse = PulseFile.read("p.json")
    assert code == (EXIT_OK if pulse.metadata["converged"] else EXIT_NOT_CONVERGED)


def test_design_degrees_display(workdir, capsys):
    main(["design", "--order", "3", "--mode", "line", "--restarts", "8", "--degrees", "--out", "p.json"])
    assert "(degrees)" in capsys.readouterr().out
    # the file stays in radians
    assert max(abs(p) for p in PulseFile.read("p.json").phases) <= PI


def test_usage_errors(workdir):
    with pytest.raises(SystemExit) as exc:
        main(["design", "--order", "3", "--mode", "sideways", "--out", "p.json"])
    assert exc.value.code == EXIT_USAGE
    assert main(["design", "--order", "4", "--mode", "line", "--out", "p.json"]) == EXIT_USAGE
    p = _pulse(workdir / "a.json", reference.LINE_ALPHA0[3])
    assert main(["simulate", "--pulse", p, "--window", "1,2,3", "--out-prefix", "o"]) == EXIT_USAGE
    assert main(["simulate", "--pulse", p, "--samples", "x,4", "--out-prefix", "o"]) == EXIT_USAGE
    assert main(["simulate", "--pulse", "missing.json", "--out-prefix", "o"]) == EXIT_USAGE


def test_pulse_file_roundtrip_bytes(workdir):
    path = workdir / "p.json"
    original = PulseFile(phases=[0.1, -2.5, 3.0000000000000004], metadata={"order": 3, "note": "x"})
    original.write(path)
    first = path.read_bytes()
    PulseFile.read(path).write(path)
    assert path.read_bytes() == first
    assert PulseFile.loads(first.decode()) == original


def test_pulse_file_validation():
    with pytest.raises(PulseFileError):
        PulseFile(phases=[float("nan")])
    with pytest.raises(PulseFileError):
        PulseFile(phases=[0.0], gate="CNOT")
    text = PulseFile(phases=[0.0]).dumps().replace('"schema_version": 1', '"schema_version": 7')
    with pytest.raises(PulseFileError):
        PulseFile.loads(text)
    with pytest.raises(PulseFileError):
        PulseFile.loads("{not json")


def test_simulate_outputs(workdir, capsys):
    p = _pulse(workdir / "p.json", reference.LINE_ALPHA_HALF_PI[3])
    assert main(["simulate", "--pulse", p, "--samples", "41,31", "--out-prefix", "o"]) == EXIT_OK
    data = read_grid_csv("o.grid.csv")
    assert data.shape == (41 * 31, 3)
    contours = json.loads((workdir / "o.contours.json").read_text())
    assert [c["level"] for c in contours] == [0.999, 0.995, 0.99]
    refl = json.loads((workdir / "o.reflines.json").read_text())
    assert [r["name"] for r in refl] == ["deltaT=0", "omegaT=pi"]
    out = capsys.readouterr().out
    assert out.count("score(") == 3


def test_simulate_reproduces_design_origin(workdir, capsys):
    main(["design", "--order", "5", "--mode", "two-lines", "--restarts", "16", "--out", "p.json"])
    design_out = capsys.readouterr().out
    assert main(["simulate", "--pulse", "p.json", "--out-prefix", "o"]) == EXIT_OK
    first = capsys.readouterr().out
    main(["simulate", "--pulse", "p.json", "--out-prefix", "o2"])
    assert capsys.readouterr().out.replace("o2.", "o.") == first

    def value(text, prefix):
        return next(ln for ln in text.splitlines() if ln.startswith(prefix)).rsplit(" ", 1)[1]

    assert value(first, "|J| at node nearest origin") == value(design_out, "|J| at origin")


def test_simulate_coarse_grid_warns(workdir, capsys):
    p = _pulse(workdir / "p.json", reference.LINE_ALPHA0[3])
    assert main(["simulate", "--pulse", p, "--samples", "2,2", "--out-prefix", "o"]) == EXIT_OK
    assert "too coarse" in capsys.readouterr().err
    assert len(read_grid_csv("o.grid.csv")) == 4


def test_simulate_negative_window(workdir):
    p = _pulse(workdir / "p.json", reference.LINE_ALPHA0[3])
    assert main(["simulate", "--pulse", p, "--window=-1,1,-0.5,0.5", "--samples", "11,11", "--out-prefix", "o"]) == EXIT_OK
    data = read_grid_csv("o.grid.csv")
    assert data[0, 0] == -1.0 and data[-1, 1] == 0.5


@pytest.mark.parametrize("suite", ["appendix", "polynomials"])
def test_verify_suites_pass(workdir, suite):
    assert main(["verify", "--suite", suite, "--report", "r.json"]) == EXIT_OK
    report = json.loads((workdir / "r.json").read_text())
    assert report["passed"] and list(report["suites"]) == [suite]


def test_verify_exit_code_tracks_report(workdir):
    code = main(["verify", "--suite", "tables", "--report", "r.json"])
    report = json.loads((workdir / "r.json").read_text())
    names = {c["name"]: c for c in report["suites"]["tables"]["checks"]}
    assert names["line(alpha=0) N=3"]["passed"]
    assert names["line(alpha=0) N=3"]["value"] < 1e-13
    assert code == (EXIT_OK if report["passed"] else EXIT_VERIFY)


def test_verify_polynomial_content(workdir, capsys):
    main(["verify", "--suite", "polynomials"])
    assert "PASS" in capsys.readouterr().out


def test_compare_same_pulse_zero_delta(workdir):
    p = _pulse(workdir / "p.json", reference.LINE_ALPHA0[5])
    assert main(["compare", "--pulse", p, "--pulse", p, "--samples", "41,41", "--json", "c.json"]) == EXIT_OK
    rows = json.loads((workdir / "c.json").read_text())["pulses"]
    assert rows[0]["scores"] == rows[1]["scores"]


def test_compare_strip_ordering(workdir):
    p5 = _pulse(workdir / "p5.json", reference.LINE_ALPHA0[5])
    p7 = _pulse(workdir / "p7.json", reference.LINE_ALPHA0[7])
    assert main(["compare", "--pulse", p7, "--pulse", p5, "--strip", "--json", "c.json"]) == EXIT_OK
    rows = json.loads((workdir / "c.json").read_text())["pulses"]
    assert [r["pulse"] for r in rows] == [p7, p5]
    assert rows[0]["scores"][2] >= rows[1]["scores"][2]
    alt = rows[0]["alternating_sum"]
    assert abs(abs(math.sin(alt)) - 1) < 1e-3


def test_compare_all_dirs_beats_two_lines(workdir):
    a = _pulse(workdir / "a.json", reference.ALL_DIRECTIONS[5])
    b = _pulse(workdir / "b.json", reference.TWO_LINES[5])
    main(["compare", "--pulse", a, "--pulse", b, "--levels", "0.99", "--json", "c.json"])
    rows = json.loads((workdir / "c.json").read_text())["pulses"]
    assert rows[0]["scores"][0] > rows[1]["scores"][0]


def test_compare_mismatched_gates(workdir, capsys):
    good = _pulse(workdir / "a.json", reference.LINE_ALPHA0[3])
    data = json.loads((workdir / "a.json").read_text())
    data["gate"] = "HADAMARD"
    (workdir / "b.json").write_text(json.dumps(data))
    assert main(["compare", "--pulse", good, "--pulse", str(workdir / "b.json")]) == EXIT_USAGE


def test_design_deterministic(workdir):
    args = ["design", "--order", "5", "--mode", "two-lines", "--seed", "3", "--restarts", "16"]
    main(args + ["--out", "a.json"])
    main(args + ["--out", "b.json"])
    assert (workdir / "a.json").read_bytes() == (workdir / "b.json").read_bytes()
    assert np.isfinite(PulseFile.read("a.json").metadata["residual"])
