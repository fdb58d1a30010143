import math

import numpy as np
import pytest

import polybgk


def test_quadrature_rules():
    x, w = polybgk.gauss_legendre(5)
    assert len(x) == 5
    assert w.sum() == pytest.approx(2.0, abs=1e-14)
    assert (w * x**8).sum() == pytest.approx(2.0 / 9.0, abs=1e-14)
    x, w = polybgk.gauss_lobatto(4)
    assert x[0] == -1.0 and x[-1] == 1.0
    with pytest.raises(ValueError):
        polybgk.gauss_legendre(0)


def test_closed_forms():
    assert polybgk.compute_k(1e-15, 1.4) == pytest.approx(7.0243, rel=1e-4)
    assert polybgk.compute_zeta_max(2.0, 1e-2) == pytest.approx(math.log(100.0), rel=1e-10)
    q = polybgk.to_conserved(polybgk.Primitive(1.0, 0.0, 1.0), 1.4)
    assert (q.rho, q.mom, q.energy) == pytest.approx((1.0, 0.0, 2.5))
    a = polybgk.alpha_from_macro(polybgk.MacroState(1.0, 0.0, 0.5))
    assert a.amplitude == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))
    assert a.beta == pytest.approx(0.5)
    g = 5.0 / 3.0
    down = polybgk.rankine_hugoniot(3.8, g, polybgk.Primitive(1.0, 3.8 * math.sqrt(g), 1.0))
    assert down.rho == pytest.approx(3.312, rel=1e-3)
    assert down.p == pytest.approx(17.80, rel=1e-3)


def test_squeeze():
    out = polybgk.squeeze(np.array([-1.0, 3.0]))
    assert out == pytest.approx([0.0, 2.0])
    with pytest.raises(polybgk.BlowUpError):
        polybgk.squeeze([-3.0, 1.0])


def test_exact_riemann_sod():
    xt = np.linspace(-2.0, 2.0, 81)
    s = polybgk.exact_riemann(polybgk.Primitive(1, 0, 1), polybgk.Primitive(0.125, 0, 0.1), 1.4, xt)
    assert s["rho"][0] == pytest.approx(1.0)
    assert s["rho"][-1] == pytest.approx(0.125)
    assert np.all(np.diff(s["rho"]) <= 1e-12)


def test_uniform_run_conserves_mass():
    sim = polybgk.Simulation.from_case("uniform")
    rho0 = sim.density()
    rows = sim.run(20 * sim.dt_cfl)
    assert rows[-1]["t"] == pytest.approx(20 * sim.dt_cfl)
    assert rows[-1]["mass_err"] < 1e-12
    assert np.max(np.abs(sim.density() - rho0)) < 1e-11


def test_config_errors():
    with pytest.raises(polybgk.ParseError):
        polybgk.Simulation.from_config("case = sod\nbogus = 1\n")


def test_run_config(tmp_path):
    cfg = tmp_path / "pulse.cfg"
    cfg.write_text("case = pulse\np = 2\nn_elements = 6\nt_final = 0.01\nn_v = 16\nkn = 0.1\n")
    out = polybgk.run_config(str(cfg), str(tmp_path / "out"))
    assert out["status"] == 0
    assert "profile.csv" in out["files"]
    header = (tmp_path / "out" / "profile.csv").read_text().splitlines()[0]
    assert header == "x,rho,u,p,e,theta"


def test_validation_entry_points():
    assert "properties" in polybgk.validation_suites()
    with pytest.raises(ValueError):
        polybgk.validate("missing")
