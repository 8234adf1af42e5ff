import json

import numpy as np
import pytest

import elastinet


def test_scenarios_listed():
    assert "theta-symmetric" in elastinet.scenario_names()


def test_straight_triod_energy_and_checks():
    net, mu, flavor = elastinet.scenario("triod-straight", intervals=32)
    assert flavor == "c1"
    assert net.topology == "triod"
    assert net.energy(mu) == pytest.approx(3.0)
    assert elastinet.geometric_admissibility(net, mu)["passed"]
    assert elastinet.ls_verify(net)["passed"]


def test_network_round_trip():
    net, mu, _ = elastinet.scenario("theta-symmetric", intervals=64)
    back, mu_back = elastinet.Network.from_json(net.to_json(mu))
    assert mu_back == mu
    for a, b in zip(net.curves, back.curves):
        assert np.array_equal(a, b)
    assert json.loads(net.to_json(mu))["topology"] == "theta"


def test_network_from_arrays():
    x = np.linspace(0.0, 1.0, 33)
    dirs = [np.array([np.cos(a), np.sin(a)]) for a in (0.0, 2 * np.pi / 3, 4 * np.pi / 3)]
    net = elastinet.Network("triod", [np.outer(x, d) for d in dirs])
    assert net.intervals == 32
    assert net.length() == pytest.approx(3.0)


def test_reparametrize_twisted_theta():
    net, mu, _ = elastinet.scenario("theta-twisted", intervals=128, seed=1)
    assert not elastinet.parametric_admissibility(net, mu)["passed"]
    fixed, min_slope = elastinet.reparametrize(net, mu)
    assert min_slope > 0.0
    assert elastinet.parametric_admissibility(fixed, mu)["passed"]


def test_simulate_decreases_energy():
    net, mu, _ = elastinet.scenario("triod-perturbed", intervals=64)
    out = elastinet.simulate(net, mu, t_final=2e-3)
    assert out["termination"] == "t_final"
    energies = np.array(out["energies"])
    assert np.all(np.diff(energies) <= 1e-12)
    assert out["final"].intervals == 64


def test_errors_are_raised():
    net, mu, _ = elastinet.scenario("theta-degenerate", intervals=64)
    with pytest.raises(elastinet.ElastinetError):
        elastinet.reparametrize(net, mu)
    with pytest.raises(ValueError):
        elastinet.Network("theta", [np.zeros((17, 3))] * 3)
