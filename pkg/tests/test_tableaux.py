import pytest

from asepchain.markov import proportional, stationary_compact
from asepchain.models import build_open_asep5, open_states
from asepchain.tableaux import (
    FOUR_LETTER,
    TWO_LETTER,
    StaircaseTableau,
    count_tableaux,
    enumerate_tableaux,
    normalize_word,
    partition_function,
    place_q,
    psi_all_types,
    psi_tableaux,
    tableau_to_json,
    tableau_type,
    weight_ring,
)

R3 = weight_ring(TWO_LETTER)
R5 = weight_ring(FOUR_LETTER)


def test_normalize_word():
    assert normalize_word("•∘") == "BO"
    assert normalize_word("10") == "BO"
    with pytest.raises(ValueError):
        normalize_word("BX")


def test_small_generating_functions():
    assert psi_tableaux(1, "O") == R3.parse("beta")
    assert psi_tableaux(1, "B") == R3.parse("alpha")
    assert psi_tableaux(2, "BO") == R3.parse("alpha^2*beta + alpha*beta^2 + alpha*beta*q")
    z2 = R3.parse("alpha^2 + alpha^2*beta + alpha*beta^2 + alpha*beta*q + alpha*beta + beta^2")
    assert partition_function(2) == z2
    assert partition_function(2, FOUR_LETTER).evaluate({v: 1 for v in R5.names}) == 32


def test_partition_function_at_ones():
    ones = {"alpha": 1, "beta": 1, "q": 1}
    assert partition_function(3).evaluate(ones) == 24


def test_type_filter_partitions_enumeration():
    n = 3
    total = sum(len(enumerate_tableaux(n, TWO_LETTER, w)) for w in open_states(n))
    assert total == count_tableaux(n) == 24


def test_weights_are_monomials():
    for n in (2, 3, 4):
        for t in enumerate_tableaux(n, FOUR_LETTER):
            w = place_q(t)
            assert w.weight.is_monomial()
            assert w.weight.degree("q") == len(w.q_boxes)
            assert w.weight.total_degree() == len(t.filling) + len(w.q_boxes)
            assert w.weight.total_degree() <= n * (n + 1) // 2


def _drop_gamma_delta(p):
    terms = {(a, b, q): c for (a, b, g, d, q), c in p.terms.items() if g == 0 and d == 0}
    return R3.from_terms(terms)


def test_two_letter_from_four_letter():
    for n in (2, 3, 4):
        four = psi_all_types(n, FOUR_LETTER)
        two = psi_all_types(n, TWO_LETTER)
        for w in open_states(n):
            assert _drop_gamma_delta(four[w]) == two[w]


def test_four_letter_proportional_n2():
    c = build_open_asep5(2)
    psi = psi_all_types(2, FOUR_LETTER)
    assert proportional([psi[s] for s in c.states], stationary_compact(c).values)


def test_validate_rejects_bad_fillings():
    with pytest.raises(ValueError):
        # beta with a filled box to its left
        StaircaseTableau.from_dict(2, "ab", {(1, 1): "alpha", (1, 2): "beta", (2, 1): "beta"})
    with pytest.raises(ValueError):
        StaircaseTableau.from_dict(2, "ab", {(1, 2): "alpha"})
    with pytest.raises(ValueError):
        StaircaseTableau.from_dict(2, "ab", {(1, 2): "gamma", (2, 1): "beta"})


def test_json_form():
    t = StaircaseTableau.from_dict(2, "ab", {(1, 2): "alpha", (2, 1): "beta"})
    assert tableau_type(t) == "BO"
    assert tableau_to_json(t, True) == {
        "type": "BO",
        "boxes": [[1, 2, "alpha"], [2, 1, "beta"]],
        "q_boxes": [[1, 1]],
        "weight": "alpha*beta*q",
    }
