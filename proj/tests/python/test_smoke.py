import json
import math

import numpy as np
import pytest

import hasimoto_lab as hl


def circle(n):
    return hl.Grid("periodic", 0.0, 2 * math.pi, n)


def test_grid_properties():
    g = circle(64)
    assert g.n == 64
    assert g.periodic
    assert g.h == pytest.approx(2 * math.pi / 64)
    assert g.x.shape == (64,)
    with pytest.raises(hl.ConfigError):
        hl.Grid("torus", 0.0, 1.0, 16)


def test_great_circle_transform_and_round_trip():
    g = hl.Grid("line", 0.0, 1.0, 256)
    q = np.full(g.n, 0.5 + 0j)
    u, e = hl.reconstruct_frame(q, g, (0, 0, 1), (1, 0, 0))
    assert np.allclose(np.linalg.norm(u, axis=1), 1.0, atol=1e-12)
    assert np.allclose(np.einsum("ij,ij->i", u, e), 0.0, atol=1e-12)
    back = hl.transform(u, g)
    assert np.max(np.abs(back - q)) < 1e-6


def test_curvature_torsion_of_wobbly_loop():
    g = circle(128)
    theta, eta = hl.curvature_torsion(hl.wobbly_loop(g), g)
    assert theta.shape == eta.shape == (128,)
    assert np.all(theta > 0)


def test_llg_keeps_great_circle():
    g = circle(64)
    u0 = hl.great_circle(g, 2.0)
    times, states = hl.llg_integrate(u0, g, dt=1e-4, t_end=0.01, output_stride=50)
    assert times[-1] == pytest.approx(0.01)
    assert np.max(np.abs(states[-1] - u0)) < 1e-10


def test_heat_constant_phase():
    g = circle(64)
    k = 1.0
    times, states = hl.heat_integrate(np.full(g.n, k + 0j), g, dt=1e-4, t_end=0.05, output_stride=500)
    exact = k * np.exp(0.5j * k * k * times[-1])
    assert np.max(np.abs(states[-1] - exact)) < 1e-6


def test_sllg_path_is_reproducible_and_orthonormal():
    g = circle(32)
    q0 = np.zeros(g.n, dtype=complex)
    a = hl.run_sllg(q0, g, (0, 0, 1), (1, 0, 0), [1.0, 1.0], seed=3, dt=1e-3, t_end=0.02)
    b = hl.run_sllg(q0, g, (0, 0, 1), (1, 0, 0), [1.0, 1.0], seed=3, dt=1e-3, t_end=0.02)
    assert np.array_equal(a["q"][-1], b["q"][-1])
    assert a["max_orthonormality_defect"] < 1e-10
    assert a["steps"] == 20


def test_unstable_dt_is_rejected():
    g = circle(64)
    with pytest.raises(hl.ConfigError):
        hl.heat_integrate(np.ones(g.n, dtype=complex), g, dt=1.0, t_end=0.1)


def test_run_experiment(tmp_path):
    names = [e[0] for e in hl.experiments()]
    assert "covariance" in names
    report, outputs = hl.run_experiment("heat", tmp_path, t_end=0.01, n=64)
    assert report["experiment"] == "heat"
    assert "series_q.csv" in outputs
    assert (tmp_path / "report.json").exists()
    assert json.loads((tmp_path / "report.json").read_text())["experiment"] == "heat"
    with pytest.raises(hl.ConfigError):
        hl.run_experiment("heat", tmp_path, bogus=1)
