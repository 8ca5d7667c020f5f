import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netdef.errors import UnknownNode
from netdef.instances import gen_random
from netdef.model import (
    DefenseNetwork,
    DefendingStrategy,
    EdgeSpec,
    NodeSpec,
    attacker_gain,
    crucial_set,
    defending_power,
    defending_result,
    network_warnings,
    result_space,
    validate_network,
    validate_strategy,
    vulnerable_set,
)


def test_validate_fixture_clean(gap2, path3_iso, path3_st):
    assert validate_network(gap2) == []
    assert validate_network(path3_iso) == []
    assert validate_network(path3_st) == []


def test_validate_lb_above_ub():
    net = DefenseNetwork([NodeSpec("a", 2.0, 1.0, 1.0, 1.0)], [], 1.0)
    problems = validate_network(net)
    assert len(problems) == 1
    assert "lb>ub" in problems[0]


def test_validate_unknown_endpoint():
    net = DefenseNetwork([NodeSpec("a", 0.0, 1.0, 1.0, 1.0)], [EdgeSpec("a", "x9", 0.5)], 1.0)
    problems = validate_network(net)
    assert len(problems) == 1
    assert "unknown endpoint" in problems[0] and "x9" in problems[0]


def test_validate_other_violations():
    nodes = [NodeSpec("a", 0.0, 1.0, 1.0, 2.0), NodeSpec("a", 0.0, 1.0, 1.0, 1.0),
             NodeSpec("b", -1.0, 1.0, 1.0, 1.0)]
    edges = [EdgeSpec("a", "a", 1.0), EdgeSpec("a", "b", 1.0), EdgeSpec("b", "a", -1.0)]
    problems = " | ".join(validate_network(DefenseNetwork(nodes, edges, -1.0)))
    for fragment in ("g_prime>g", "duplicate node id", "lb must be", "self-loop",
                     "duplicate pair", "w must be", "resource"):
        assert fragment in problems


def test_disconnection_is_only_a_warning():
    net = DefenseNetwork([NodeSpec("a", 0, 1, 1, 1), NodeSpec("b", 0, 1, 1, 1)], [], 1.0)
    assert validate_network(net) == []
    assert len(network_warnings(net)) == 1


def test_defending_power_shares_over_edge(gap2):
    power = defending_power(gap2, DefendingStrategy({"u": 1.0, "v": 0.0}))
    assert power.power == {"u": 1.0, "v": 1.0}


def test_defending_power_zero(path3_st):
    power = defending_power(path3_st, DefendingStrategy({}))
    assert set(power.power.values()) == {0.0}


def test_defending_power_isolated_identity(path3_iso):
    power = defending_power(path3_iso, DefendingStrategy({"u1": 1, "u2": 1, "u3": 1}))
    assert power.power == {"u1": 1, "u2": 1, "u3": 1}


def test_defending_power_unknown_node(gap2):
    with pytest.raises(UnknownNode):
        defending_power(gap2, DefendingStrategy({"zz": 1.0}))


def test_attacker_gain_cases(gap2, path3_iso):
    s = DefendingStrategy({"u": 1.0, "v": 0.0})
    assert attacker_gain(gap2, defending_power(gap2, s), "u") == 0.0
    s = DefendingStrategy({"u": 0.0, "v": 0.5})
    assert attacker_gain(gap2, defending_power(gap2, s), "u") == 1.0
    s = DefendingStrategy({"u1": 1, "u2": 1, "u3": 1})
    assert attacker_gain(path3_iso, defending_power(path3_iso, s), "u1") == 0.0
    with pytest.raises(UnknownNode):
        attacker_gain(gap2, defending_power(gap2, DefendingStrategy()), "nope")


def test_attacker_gain_tolerance(gap2):
    # Power a hair under the threshold still counts as meeting it.
    s = DefendingStrategy({"u": 1.0 - 1e-12})
    assert attacker_gain(gap2, defending_power(gap2, s), "u") == 0.0
    s = DefendingStrategy({"u": 1.0 - 1e-6})
    assert attacker_gain(gap2, defending_power(gap2, s), "u") == 1.0


def test_defending_result_examples(gap2, path3_iso):
    assert defending_result(gap2, DefendingStrategy({"u": 0.7, "v": 0.3})).result == 0.0
    report = defending_result(path3_iso, DefendingStrategy({"u1": 2, "u2": 1, "u3": 0}))
    assert report.result == 10.0
    assert report.argmax == "u3"
    safe = DefendingStrategy({"u1": 2, "u2": 2, "u3": 2})
    assert defending_result(path3_iso.with_resource(6), safe).result == 0.0


def test_argmax_ties_smallest_id(path3_iso):
    report = defending_result(path3_iso, DefendingStrategy())
    assert report.result == 10.0
    assert report.argmax == "u1"


def test_result_space(gap2, path3_iso):
    assert result_space(gap2) == [0.0, 1.0]
    assert result_space(path3_iso) == [0.0, 2.0, 10.0]
    zero = DefenseNetwork([NodeSpec("a", 0, 1, 0, 0)], [], 0.0)
    assert result_space(zero) == [0.0]


def test_vulnerable_and_crucial(gap2, path3_iso):
    assert vulnerable_set(gap2, 0) == {"u"} and crucial_set(gap2, 0) == {"u"}
    assert vulnerable_set(path3_iso, 2) == {"u1", "u3"}
    assert crucial_set(path3_iso, 2) == {"u1", "u3"}
    assert vulnerable_set(path3_iso, 10) == set() == crucial_set(path3_iso, 10)


def test_validate_strategy(gap2):
    assert validate_strategy(gap2, DefendingStrategy({"u": 1.0})) == []
    assert validate_strategy(gap2, DefendingStrategy({"u": 0.9, "v": 0.2}))
    assert validate_strategy(gap2, DefendingStrategy({"x": 0.1}))


# --- properties ------------------------------------------------------------

instance_params = st.tuples(st.integers(0, 10_000), st.integers(1, 7), st.data())


def _random_net(seed, n, data):
    m = data.draw(st.integers(max(n - 1, 0), n * (n - 1) // 2))
    return gen_random(seed, n, m)


def _alloc(data, net, max_value=3.0):
    values = data.draw(st.lists(st.floats(0, max_value), min_size=net.n, max_size=net.n))
    return DefendingStrategy.from_vector(net, values)


@settings(max_examples=60, deadline=None)
@given(instance_params)
def test_power_is_linear(params):
    seed, n, data = params
    net = _random_net(seed, n, data)
    s1, s2 = _alloc(data, net), _alloc(data, net)
    both = DefendingStrategy({u: s1[u] + s2[u] for u in net.ids})
    p1, p2, p12 = (defending_power(net, s).power for s in (s1, s2, both))
    for u in net.ids:
        assert p12[u] == pytest.approx(p1[u] + p2[u], abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(instance_params)
def test_gain_monotone_in_allocation(params):
    seed, n, data = params
    net = _random_net(seed, n, data)
    low = _alloc(data, net)
    bump = _alloc(data, net)
    high = DefendingStrategy({u: low[u] + bump[u] for u in net.ids})
    g_low = defending_result(net, low).gains
    g_high = defending_result(net, high).gains
    for u in net.ids:
        assert g_high[u] <= g_low[u]


@settings(max_examples=60, deadline=None)
@given(instance_params)
def test_gains_in_range_and_result_in_space(params):
    seed, n, data = params
    net = _random_net(seed, n, data)
    report = defending_result(net, _alloc(data, net))
    for nd in net.nodes:
        assert report.gains[nd.id] in (0.0, nd.g_prime, nd.g)
    assert report.result in result_space(net)
    assert report.result == max(report.gains.values())


@settings(max_examples=40, deadline=None)
@given(instance_params)
def test_crucial_inside_vulnerable_and_shrinking(params):
    seed, n, data = params
    net = _random_net(seed, n, data)
    space = result_space(net)
    for lo, hi in zip(space, space[1:]):
        assert crucial_set(net, lo) <= vulnerable_set(net, lo)
        assert vulnerable_set(net, hi) <= vulnerable_set(net, lo)
        assert crucial_set(net, hi) <= crucial_set(net, lo)
