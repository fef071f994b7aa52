import json
import math

import pytest

import enmod


def test_rayleigh_rates_closed_form():
    o = enmod.RateOracle(enmod.ChannelSpec.rayleigh(), 1.0, 0.0)
    for d in (0.1, 0.5, 2.0):
        assert o.right(d) == pytest.approx(d - math.log1p(d), abs=1e-8)
    assert o.left(0.5) == pytest.approx(math.log(2.0) - 0.5, abs=1e-8)
    assert math.isinf(o.left(1.5))
    assert o.inverse(enmod.Side.RIGHT, o.right(1.0)) == pytest.approx(1.0)


def test_design_and_bound():
    ch = enmod.ChannelSpec.rayleigh()
    s2 = enmod.sigma2_from_snr(10.0)
    two = enmod.design_exact(ch, s2, enmod.DesignConfig(levels=2))
    assert two.feasible
    assert two.constellation.levels[0] == 0.0
    assert two.constellation.levels[1] == pytest.approx(2.0, abs=2e-6)

    four = enmod.design_exact(ch, s2, enmod.DesignConfig(levels=4))
    assert four.constellation.mean_power == pytest.approx(1.0, abs=1e-6)
    assert enmod.error_exponent(four.constellation, ch, s2) == pytest.approx(four.t_star, abs=1e-8)
    mind = enmod.min_distance_constellation(4, s2)
    assert enmod.error_exponent(mind, ch, s2) < four.t_star


def test_robust_infeasible():
    box = enmod.UncertaintyBox(1.0, 1.0, math.sqrt(0.1), math.sqrt(10.0))
    assert not enmod.design_robust(box, enmod.DesignConfig(levels=2)).feasible


def test_simulation_is_shard_invariant():
    ch = enmod.ChannelSpec.rayleigh()
    s2 = 0.1
    c = enmod.design_exact(ch, s2, enmod.DesignConfig(levels=8)).constellation
    a = enmod.simulate_energy(c, ch, s2, 30, symbols=5000, seed=4, shards=1)
    b = enmod.simulate_energy(c, ch, s2, 30, symbols=5000, seed=4, shards=4)
    assert a.symbol_errors == b.symbol_errors
    assert a.symbol_errors > 0
    lo, hi = a.ser_ci
    assert lo <= a.ser <= hi
    with pytest.raises(enmod.NotSamplable):
        enmod.simulate_energy(c, enmod.ChannelSpec.moments_only(1.0), s2, 30, symbols=1000)


def test_run_command():
    code, out, _ = enmod.run("design", {"design": {"L": 2}})
    assert code == 0
    assert json.loads(out)["status"] == "feasible"
    code, _, err = enmod.run("design", {"design": {"nope": 1}})
    assert code == 1
    assert "config error" in err
    code, out, _ = enmod.run(
        "design",
        {"design": {"method": "robust", "L": 2, "alpha1_min": 1, "alpha1_max": 1, "sigma2_min": 0.1, "sigma2_max": 10}},
    )
    assert code == 2
    assert json.loads(out)["status"] == "infeasible"
