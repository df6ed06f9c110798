import pytest

from asepchain.markov import check_global_balance, stationary_compact
from asepchain.models import (
    ModelError,
    build_inhom_tasep,
    build_masep,
    build_model,
    build_open_asep3,
    build_open_asep5,
    open_states,
    parse_word,
    ring_stationary,
    ring_words,
    rotation_class,
    word_label,
)


def test_open_states_order():
    assert open_states(2) == ["BB", "BO", "OB", "OO"]


def test_open3_rates_n2():
    c = build_open_asep3(2)
    r = {k: str(v) for k, v in c.labelled_rates().items()}
    assert r == {
        ("BB", "BO"): "beta",
        ("BO", "OB"): "1",
        ("OB", "BB"): "alpha",
        ("OB", "BO"): "q",
        ("OB", "OO"): "beta",
        ("OO", "BO"): "alpha",
    }


def test_open5_boundary_moves():
    c = build_open_asep5(1)
    assert str(c.rate("O", "B")) == "alpha + delta"
    assert str(c.rate("B", "O")) == "beta + gamma"


def test_masep_rates():
    c = build_masep((1, 0))
    # two bonds on a two-site ring: one sees (1, 0), the wraparound sees (0, 1)
    assert str(c.rate("10", "01")) == "t + 1"
    c = build_masep((2, 1, 0))
    assert str(c.rate("210", "120")) == "t"
    assert str(c.rate("120", "210")) == "1"


def test_tasep_only_lighter_left_moves():
    c = build_inhom_tasep((3, 2, 1))
    assert str(c.rate("123", "213")) == "x1"
    assert str(c.rate("123", "132")) == "x2"
    assert c.rate("213", "123").is_zero()


def test_tasep_with_y():
    c = build_inhom_tasep((2, 1), with_y=True)
    assert str(c.rate("12", "21")) == "x1 - y2"


def test_ring_words_and_labels():
    assert ring_words((1, 1, 0)) == [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert word_label((10, 2)) == "10,2"
    assert parse_word("10,2") == (10, 2)
    assert parse_word("120") == (1, 2, 0)
    assert rotation_class("3412") == "1234"


def test_bad_inputs():
    with pytest.raises(ModelError):
        build_masep((1, 2))
    with pytest.raises(ModelError):
        build_masep((1, 1))
    with pytest.raises(ModelError):
        build_open_asep3(0)
    with pytest.raises(ModelError):
        build_model("open3")
    with pytest.raises(ModelError):
        build_model("nope", n=2)


@pytest.mark.parametrize("parts", [(2, 1, 0), (2, 1, 1, 0), (1, 1, 0, 0), (3, 2, 1)])
def test_ring_solver_matches_direct(parts):
    for build in (build_masep, build_inhom_tasep):
        c = build(parts)
        assert ring_stationary(c) == stationary_compact(c)


@pytest.mark.parametrize("chain", [
    build_open_asep3(1), build_open_asep3(3), build_open_asep5(2),
    build_masep((2, 1, 0)), build_inhom_tasep((3, 2, 1)),
    build_inhom_tasep((2, 1, 0), with_y=True),
], ids=["open3-1", "open3-3", "open5-2", "masep", "tasep", "tasep-y"])
def test_solver_passes_global_balance(chain):
    assert check_global_balance(chain, stationary_compact(chain))


def test_masep_specialization_is_uniform():
    # at t = 1 the swap rates are symmetric, so every word is equally likely
    c = build_masep((2, 1, 0))
    m = stationary_compact(c.subs({"t": 1}))
    assert len(set(m.values)) == 1
