import math

import pytest

import chargraph as cg


def h(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_binary_entropy():
    assert cg.binary_entropy(0.5) == pytest.approx(1.0)
    assert cg.binary_entropy(0.25) == pytest.approx(0.8112781244591328)


def test_placement():
    p = cg.placement(3, 3, 2)
    assert p["Z"] == [[1, 2], [2, 3], [1, 3]]
    with pytest.raises(cg.ValidationError):
        cg.placement(3, 4, 2)


def test_ternary_graph_entropy():
    r = cg.graph_entropy([1 / 3] * 3, [(0, 2)])
    assert r["value"] == pytest.approx(2 / 3, abs=1e-8)
    assert r["converged"]
    joint = [[1 / 6, 1 / 6, 0], [1 / 6, 0, 1 / 6], [0, 1 / 6, 1 / 6]]
    c = cg.conditional_graph_entropy([1 / 3] * 3, [(0, 2)], joint)
    assert c["value"] < r["value"]
    assert cg.chromatic_entropy([1 / 3] * 3, [(0, 2)]) >= r["value"]


def test_bad_edge():
    with pytest.raises(cg.ValidationError):
        cg.graph_entropy([0.5, 0.5], [(0, 2)])


def test_rates():
    assert cg.prop3_rate(5, 5, 4, 0.5)["sum_rate"] == pytest.approx(1.076598, abs=1e-6)
    assert cg.prop1_rate(4, 8, 3, 5)["sum_rate"] == 6
    s2 = cg.scenario_rates("s2-iid", 0.2)
    assert s2["graph"] == pytest.approx(2 * h(0.2))
    s1 = cg.scenario_rates("s1", 0.2, 1.0, n=30, k=30, nr=20)
    assert s1["eta_lin"] == pytest.approx(10.0)
    assert cg.scenario_rates("multilinear", 0.3, n=4, k=4, nr=3)["lin"] is None


def test_run_scenario():
    rows, csv = cg.run_scenario(
        {"scenario": "s2-table2", "coupling": "independent", "eps_grid": [0.1, 0.5, 3]}
    )
    assert len(rows) == 3
    assert rows[-1]["eta_lin"] == pytest.approx(1.0)
    assert csv.startswith("N,K,Kc,M,Nr,eps,param,")
    with pytest.raises(cg.ValidationError):
        cg.run_scenario({"scenario": "nope"})


def test_simulate():
    r = cg.simulate("s2", eps=0.3, blocklength=1, trials=20000, seed=3)
    assert r["errors"] == 0
    assert r["verified_all_subsets"]
    for emp, exact in zip(r["empirical"], r["theoretical"]):
        assert abs(emp - exact) < 0.03
