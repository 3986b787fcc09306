import json
import math
import os
import subprocess

import numpy as np
import pytest

import newton_measure as nm

CONFIGS = os.environ.get("NMEASURE_CONFIGS", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))
CLI = os.environ.get("NMEASURE_CLI")


def erf(c=0.3):
    return nm.Problem([1], [0, 0, -1], c)


def test_normalization():
    prob = erf()
    assert prob.d == 2 and prob.m == 0
    assert prob.lam == 0.5
    assert prob.alpha == 1j and prob.b == 2j
    assert prob.p == [2] and prob.q == [0, 0, 1]


def test_raw_evaluation():
    raw = nm.Problem([1], [0, 0, -1], 0, normalize=False)
    assert abs(raw.g(1.0) - 0.746824132812427) < 1e-12
    assert abs(raw.f(1.0) - (1 - 0.746824132812427 * math.e)) < 1e-10


def test_sector_constants():
    half = math.sqrt(math.pi) / 2
    got = sorted(erf().sector_constants(), key=lambda z: z.imag)
    assert abs(got[0] - 2j * (0.3 - half)) < 1e-10
    assert abs(got[1] - 2j * (0.3 + half)) < 1e-10


def test_gamma_solve():
    assert abs(nm.gamma_solve(1.0, 1.0, 10.0) - 2.32907) < 1e-4


def test_orbit_of_critical_point():
    prob = erf()
    assert prob.critical_points() == [0j]
    r = prob.orbit(0j)
    assert r["verdict"] == "converged"
    assert abs(prob.g(r["root"])) < 1e-10


def test_density_inside_basin_disk():
    prob = erf()
    root = prob.refine_zero(prob.phi(1, prob.zero_anchor(1, 20)))
    r = 1 / (6 * abs(root))
    rep = nm.density(prob, root / prob.alpha, 0.9 * r, n=200, budget=60)
    assert rep["density"] == 1.0 and rep["unresolved"] == 0


def test_render_is_deterministic():
    prob = erf()
    a = nm.render_basins(prob, -2 - 2j, 2 + 2j, 12, 10, budget=40)
    b = nm.render_basins(prob, -2 - 2j, 2 + 2j, 12, 10, budget=40)
    assert a.shape == (10, 12)
    assert np.array_equal(a, b)
    assert (a >= -4).all()


def test_numeric_error_is_raised():
    with pytest.raises(nm.NumericError):
        nm.Problem([1], [3], 0)


def test_run_exit_codes(tmp_path):
    code, out, _ = nm.run("info", os.path.join(CONFIGS, "erf_c03.json"))
    assert code == 0 and "lambda = 1/2" in out
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert nm.run("info", str(bad))[0] == 2
    code, _, err = nm.run("info", os.path.join(CONFIGS, "erf_baker.json"))
    assert code == 3 and "Baker domain likely" in err


@pytest.mark.skipif(not CLI, reason="CLI path not provided")
def test_cli(tmp_path):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"p": [[1, 0]], "q": [[0, 0], [0, 0], [-1, 0]], "c": [0.3, 0]}))
    done = subprocess.run([CLI, "verify", "gamma"], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout.startswith("PASS gamma")
    out = tmp_path / "img.ppm"
    done = subprocess.run([CLI, "render", "--config", str(cfg), "--res", "16", "--budget", "30", "--out", str(out)],
                          capture_output=True, text=True)
    assert done.returncode == 0
    assert out.read_bytes().startswith(b"P6\n16 16\n255\n")
    done = subprocess.run([CLI, "info", "--config", str(tmp_path / "missing.json")], capture_output=True, text=True)
    assert done.returncode == 2
