import json

import pytest

from asepchain.markov import (
    ChainError,
    IndexMismatchError,
    LumpingError,
    LumpingMap,
    Measure,
    ReducibleChainError,
    SymbolicChain,
    build_chain,
    chain_from_json,
    chain_to_json,
    check_global_balance,
    classify,
    lump,
    measure_from_json,
    measure_to_json,
    proportional,
    pushforward,
    stationary_compact,
)
from asepchain.models import build_masep, build_open_asep3, rotation_class
from asepchain.polyring import Ring

R = Ring(("a", "b"))
A, B = R.gens()


def four_cycle():
    edges = []
    for i in range(4):
        edges.append((i, (i + 1) % 4, A))
        edges.append((i, (i - 1) % 4, B))
    return build_chain(R, range(4), edges)


def two_coin_chain():
    """Two independent two-state flips; the first coordinate is a lumping."""
    S = Ring(("a", "b", "c", "d"))
    a, b, c, d = S.gens()
    states = [(x, y) for x in (0, 1) for y in (0, 1)]
    edges = []
    for x, y in states:
        edges.append(((x, y), (1 - x, y), a if x == 0 else b))
        edges.append(((x, y), (x, 1 - y), c if y == 0 else d))
    return build_chain(S, states, edges)


def check_lumping(c, f):
    m = stationary_compact(c)
    lumped = lump(c, f)
    ml = stationary_compact(lumped)
    assert proportional(pushforward(m, f), ml.values)
    return lumped


def test_two_state_solution():
    c = build_chain(R, [1, 2], [(1, 2, A), (2, 1, B)])
    m = stationary_compact(c)
    assert list(m.values) == [B, A]
    assert check_global_balance(c, m)


def test_self_loops_rejected():
    with pytest.raises(ChainError):
        SymbolicChain(R, [1, 2], {(1, 1): A})


def test_reducible_chain_rejected():
    c = build_chain(R, [1, 2, 3], [(1, 2, A), (2, 1, A), (3, 1, B)])
    assert not c.is_irreducible()
    with pytest.raises(ReducibleChainError):
        stationary_compact(c)


def test_lumping_four_cycle_antipodal():
    c = four_cycle()
    f = LumpingMap.from_function(c, lambda s: s % 2)
    lumped = check_lumping(c, f)
    assert lumped.rate(0, 1) == A + B


def test_lumping_full_collapse():
    c = four_cycle()
    f = LumpingMap.from_function(c, lambda s: "*")
    lumped = check_lumping(c, f)
    assert len(lumped) == 1 and not lumped.rates


def test_lumping_product_chain_projection():
    c = two_coin_chain()
    f = LumpingMap.from_function(c, lambda s: s[0])
    lumped = check_lumping(c, f)
    a, b = lumped.ring.var("a"), lumped.ring.var("b")
    assert lumped.rate(0, 1) == a and lumped.rate(1, 0) == b


def test_lumping_species_merge():
    c = build_masep((2, 1, 0))
    f = LumpingMap.from_function(c, lambda s: s.replace("1", "0"))
    check_lumping(c, f)


def test_lumping_rotation_classes():
    c = build_masep((4, 3, 2, 1))
    f = LumpingMap.from_function(c, rotation_class)
    lumped = check_lumping(c, f)
    assert len(lumped) == 6


def test_particle_count_is_not_a_lumping():
    c = build_open_asep3(2)
    f = LumpingMap.from_function(c, lambda s: s.count("B"))
    with pytest.raises(LumpingError) as info:
        lump(c, f)
    assert info.value.witness


def test_label_invariance():
    c = four_cycle()
    m = stationary_compact(c)
    order = [2, 0, 3, 1]
    m2 = stationary_compact(c.reorder(order))
    assert m2.as_dict() == m.as_dict()


def test_label_invariance_nontrivial():
    c = build_open_asep3(3)
    m = stationary_compact(c)
    rev = list(reversed(c.states))
    m2 = stationary_compact(c.reorder(rev))
    assert m2.as_dict() == m.as_dict()


def test_classify():
    Q = Ring(("q",))
    q = Q.var("q")
    cls = classify([q + 1, 2 * q + 2])
    assert cls.manifestly_positive and not cls.compact
    cls = classify([q - 1, q + 2])
    assert not cls.manifestly_positive and cls.compact


def test_proportional():
    assert proportional([A, B], [2 * A, 2 * B])
    assert proportional([A * B, B * B], [A, B])
    assert not proportional([A, B], [B, A])


def test_json_round_trip():
    c = build_open_asep3(3)
    data = json.loads(json.dumps(chain_to_json(c)))
    c2 = chain_from_json(data)
    assert c2.states == c.states and c2.rates == c.rates
    m = stationary_compact(c)
    m2 = measure_from_json(json.loads(json.dumps(measure_to_json(m))), c2)
    assert m2.values == m.values


def test_measure_rejects_wrong_length():
    c = four_cycle()
    with pytest.raises(IndexMismatchError):
        Measure(c, [R.one])
    with pytest.raises(ChainError):
        Measure(c, [R.zero] * 4)
