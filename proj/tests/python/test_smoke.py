import math

import pytest

import heatlab


def test_constants():
    c = heatlab.liyau_constant(2)
    assert c["C"] == 4.0
    assert c["K1"] == pytest.approx(math.exp(-4) / 16, rel=1e-12)
    assert c["L1"] == c["K1"]
    assert heatlab.single_ball_remainder_constant(2) == pytest.approx(128 * math.pi, rel=1e-14)


def test_ball_quantities():
    h = heatlab.heat_content_ball(2, 1.0, 1e-3)
    f = heatlab.heat_loss_ball(2, 1.0, 1e-3)
    assert h.value + f.value == pytest.approx(math.pi, rel=1e-12)
    assert f.value / math.sqrt(1e-3) == pytest.approx(2 * math.sqrt(math.pi), rel=0.02)
    assert h.kind == "deterministic-tol"
    g_mu, g_nu = heatlab.functionals_ball(2, 1.0, 0.1)
    assert g_mu.value + g_nu.value == pytest.approx(math.pi, rel=1e-12)


def test_monte_carlo_matches_quadrature():
    disk = heatlab.BallUnion(2, [heatlab.Ball([0.0, 0.0], 1.0)])
    assert len(disk) == 1 and disk.volume == pytest.approx(math.pi)
    mc = heatlab.heat_content_mc(disk, 0.1, 200_000, seed=1)
    q = heatlab.heat_content_ball(2, 1.0, 0.1)
    assert abs(mc.value - q.value) < 4 * mc.error
    again = heatlab.heat_content_mc(disk, 0.1, 200_000, seed=1, threads=2)
    assert again.value == mc.value


def test_geometry():
    assert heatlab.lens_volume(2, 1.0, 1.0, 1.0) == pytest.approx(2 * math.pi / 3 - math.sqrt(3) / 2, rel=1e-13)
    with pytest.raises(ValueError):
        heatlab.BallUnion(2, [heatlab.Ball([0.0, 0.0], 1.0), heatlab.Ball([1.0, 0.0], 1.0)])


def test_regimes_and_constants():
    assert heatlab.classify_regime(2, 0.4) == ("R1", pytest.approx(-0.25))
    assert heatlab.classify_regime(3, 1.0)[0] == "R4"
    with pytest.raises(ValueError):
        heatlab.classify_regime(2, 0.2)
    assert heatlab.c_constant(2, 0.4, 0.25).value > 0
    d = heatlab.d_constant(2, 0.7, 0.25).value
    assert heatlab.d_constant(2, 0.7, 0.125).value == pytest.approx(d * 0.5 ** (1 / 0.7), rel=1e-10)
    assert heatlab.zeta(2.0).value == pytest.approx(math.pi**2 / 6, rel=1e-15)


def test_lattice():
    fam = heatlab.LatticeFamily(2, 0.25, 1.5)
    f = heatlab.lattice_heat_loss(fam, 1e-6, 1e-10)
    assert f.error <= 1e-10
    assert 0 < f.value < 3e-3
    assert len(fam.window(25)) == 25
    with pytest.raises(heatlab.ConvergenceError):
        heatlab.lattice_heat_content(heatlab.LatticeFamily(2, 0.25, 0.4), 0.5, 1e-12)
    with pytest.raises(ValueError):
        heatlab.LatticeFamily(2, 0.5, 1.0)


def test_fit_and_grid():
    ts = heatlab.parse_t_grid("logspace:1e-6:1e-2:5")
    assert len(ts) == 5
    slope, const, se = heatlab.fit_power_law(ts, [3 * t**0.5 for t in ts])
    assert slope == pytest.approx(0.5, rel=1e-12)
    assert const == pytest.approx(3.0, rel=1e-10)
    with pytest.raises(ValueError):
        heatlab.parse_t_grid("logspace:0:1:3")


def test_reports():
    disk = heatlab.BallUnion(2, [heatlab.Ball([0.0, 0.0], 1.0)])
    rep = heatlab.verify_theorem1(disk, [1e-3, 1e-1, 1.0])
    assert rep["passed"] and rep["theorem_id"] == "T1"
    assert len(rep["rows"]) == 3
    rep2 = heatlab.verify_theorem2(disk, [1e-3, 1.0])
    assert rep2["passed"]
    window = heatlab.BallUnion(2, [heatlab.Ball([float(i), float(j)], 0.25) for i in range(-2, 3) for j in range(-2, 3)])
    dec = heatlab.verify_decoupling(window, [0.01, 0.1], samples=20_000, seed=3)
    assert dec["passed"] and dec["theorem_id"] == "T3ii"
