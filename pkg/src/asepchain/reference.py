"""Published reference values used by ``asepchain verify`` and the test suite.

Each value is stored as text in the canonical polynomial format so it can
be parsed into the same ring as the computed values.
"""

from __future__ import annotations

from .markov import SymbolicChain, build_chain
from .polyring import Ring

# open ASEP, n = 2
OPEN_N2 = {
    "BB": "alpha^2",
    "BO": "alpha^2*beta + alpha*beta^2 + alpha*beta*q",
    "OB": "alpha*beta",
    "OO": "beta^2",
}

# multispecies ASEP on a ring, parts (4, 3, 2, 1), states with w1 = 1
MASEP_4321 = {
    "1234": "9*t^3 + 7*t^2 + 7*t + 1",
    "1243": "3*t^3 + 9*t^2 + 9*t + 3",
    "1324": "3*t^3 + 11*t^2 + 5*t + 5",
    "1342": "3*t^3 + 9*t^2 + 9*t + 3",
    "1423": "5*t^3 + 5*t^2 + 11*t + 3",
    "1432": "t^3 + 7*t^2 + 7*t + 9",
}

# inhomogeneous TASEP, parts (4, 3, 2, 1), y = 0:
# (factors whose product is psi, monomial part, Schubert factors)
TASEP_4321 = {
    "1234": (("x1^3*x2",), "x1^3*x2", ()),
    "1243": (("x1^2", "x1*x2 + x1*x3 + x2*x3"), "x1^2", ("1342",)),
    "1324": (("x1", "x1^2*x2 + x1^2*x3 + x1*x2^2 + x1*x2*x3 + x2^2*x3"), "x1", ("1432",)),
    "1342": (("x1*x2", "x1^2 + x1*x2 + x2^2"), "x1*x2", ("1423",)),
    "1423": (("x1^2*x2", "x1 + x2 + x3"), "x1^2*x2", ("1243",)),
    "1432": (("x1^2 + x1*x2 + x2^2", "x1*x2 + x1*x3 + x2*x3"), "1", ("1423", "1342")),
}

# the five-state example chain, tree-theorem measure and its compact form
EXAMPLE_TREE_MEASURE = {
    1: "2*q^3 + q^2 + q + 2",
    2: "q^4 + 3*q^3 + 4*q^2 + 3*q + 1",
    3: "2*q^3 + 2*q^2 + q + 1",
    4: "q^3 + q^2 + 2*q + 2",
    5: "2*q^3 + 4*q^2 + 4*q + 2",
}
EXAMPLE_COMPACT_MEASURE = {
    1: "2*q^2 - q + 2",
    2: "q^3 + 2*q^2 + 2*q + 1",
    3: "2*q^2 + 1",
    4: "q^2 + 2",
    5: "2*q^2 + 2*q + 2",
}
EXAMPLE_COMMON_FACTOR = "q + 1"
EXAMPLE_ROOT1_TREES = ("q^3", "q^3", "q^2", "q", "1", "1")

# tree-theorem total over tableaux total at alpha = beta = q = 1
TREE_RATIO_AT_ONES = {
    2: 1,
    3: 4,
    4: 840,
    5: 2285015040,
    6: 11335132600511975880768000,
}

# transition probabilities of the five-state chain, multiplied by 3
EXAMPLE_EDGES = (
    (1, 3, "1"), (1, 4, "q"),
    (2, 5, "1"),
    (3, 1, "q"), (3, 2, "1"), (3, 5, "1"),
    (4, 1, "1"), (4, 2, "q"), (4, 5, "q"),
    (5, 3, "q"), (5, 4, "1"),
)


def example_chain() -> SymbolicChain:
    ring = Ring(("q",))
    edges = [(a, b, ring.parse(r)) for a, b, r in EXAMPLE_EDGES]
    return build_chain(ring, [1, 2, 3, 4, 5], edges)


def parse_table(ring: Ring, table: dict) -> dict:
    return {k: ring.parse(v) for k, v in table.items()}


def tasep_psi(ring: Ring) -> dict:
    out = {}
    for state, (factors, _, _) in TASEP_4321.items():
        p = ring.one
        for f in factors:
            p = p * ring.parse(f)
        out[state] = p
    return out
