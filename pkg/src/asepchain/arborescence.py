"""Spanning arborescences and the tree-theorem stationary measure.

An arborescence rooted at ``r`` picks one outgoing edge of the rate graph
for every state other than ``r`` so that every state drains into ``r``.
Its weight is the product of the chosen rates.  The sum of weights over
arborescences rooted at ``r`` is the principal minor of the out-degree
Laplacian with row and column ``r`` removed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .markov import Measure, ReducibleChainError, SymbolicChain
from .polyring import (
    MultiPoly,
    NotDivisibleError,
    PolyMatrix,
    determinant,
    exact_div,
    int_determinant,
)
from .models import HOLE, PARTICLE, build_open_asep3
from .tableaux import PARTICLE_LETTERS, TWO_LETTER, _fillings

DEFAULT_CAP = 10 ** 6
CAP_ENV = "ASEPCHAIN_TREE_CAP"


class TreeCapExceeded(RuntimeError):
    pass


class RatioError(ArithmeticError):
    pass


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True)
class Arborescence:
    root: object
    edges: tuple[tuple[object, object], ...]

    def weight(self, chain: SymbolicChain) -> MultiPoly:
        w = chain.ring.one
        for a, b in self.edges:
            w = w * chain.rate(a, b)
        return w


def enumerate_arborescences(c: SymbolicChain, root, cap: int | None = None) -> list[Arborescence]:
    """Every arborescence rooted at ``root``, by backtracking over parent choices."""
    cap = default_cap() if cap is None else cap
    r = c.index(root)
    n = len(c)
    succ = c.successors()
    others = [v for v in range(n) if v != r]
    parent = [-1] * n
    found: list[Arborescence] = []

    def closes_cycle(v: int, p: int) -> bool:
        while p != -1 and p != r:
            if p == v:
                return True
            p = parent[p]
        return False

    def rec(k: int) -> None:
        if k == len(others):
            if len(found) >= cap:
                raise TreeCapExceeded(f"more than {cap} arborescences; use psi_tree")
            edges = tuple((c.states[v], c.states[parent[v]]) for v in others)
            found.append(Arborescence(c.states[r], edges))
            return
        v = others[k]
        for p in succ[v]:
            if closes_cycle(v, p):
                continue
            parent[v] = p
            rec(k + 1)
            parent[v] = -1

    rec(0)
    return found


def laplacian(c: SymbolicChain) -> PolyMatrix:
    """Out-degree Laplacian ``L = -Q``."""
    return c.rate_matrix().scale(-1)


def _minor(grid: list[list], skip: int) -> list[list]:
    return [[x for j, x in enumerate(row) if j != skip]
            for i, row in enumerate(grid) if i != skip]


def psi_tree(c: SymbolicChain, root) -> MultiPoly:
    """Weighted count of arborescences rooted at ``root`` (Kirchhoff minor)."""
    r = c.index(root)
    if len(c) == 1:
        return c.ring.one
    L = laplacian(c)
    return determinant(PolyMatrix(c.ring, _minor(L.entries, r)))


def mctt_measure(c: SymbolicChain) -> Measure:
    """Tree-theorem measure; deliberately not reduced by the common gcd."""
    if not c.is_irreducible():
        raise ReducibleChainError("the tree measure needs an irreducible chain")
    return Measure(c, [psi_tree(c, s) for s in c.states])


def laplacian_at(c: SymbolicChain, assignment: Mapping[str, int | Fraction]) -> list[list]:
    n = len(c)
    grid = [[0] * n for _ in range(n)]
    for (i, j), rate in c.rates.items():
        v = rate.evaluate(assignment)
        v = int(v) if v.denominator == 1 else v
        grid[i][j] -= v
        grid[i][i] += v
    return grid


def psi_tree_at(c: SymbolicChain, root, assignment: Mapping[str, int | Fraction]):
    """``psi_tree`` at a numeric point, via an integer (or rational) determinant."""
    r = c.index(root)
    if len(c) == 1:
        return 1
    minor = _minor(laplacian_at(c, assignment), r)
    if all(isinstance(x, int) for row in minor for x in row):
        return int_determinant(minor)
    return _fraction_det(minor)


def _fraction_det(rows: list[list]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return det


def ratio_q(c: SymbolicChain, reference: Measure | list[MultiPoly]) -> MultiPoly:
    """Common exact quotient ``psi_tree(s) / reference(s)`` over all states."""
    values = reference.values if isinstance(reference, Measure) else list(reference)
    if len(values) != len(c):
        raise RatioError("reference has the wrong number of entries")
    quotient = None
    for s, ref in zip(c.states, values):
        tree = psi_tree(c, s)
        try:
            qs = exact_div(tree, ref)
        except NotDivisibleError:
            raise RatioError(f"tree weight at {s!r} is not divisible by the reference") from None
        if quotient is None:
            quotient = qs
        elif qs != quotient:
            raise RatioError(f"quotient at {s!r} differs: {qs} vs {quotient}")
    return quotient


def ratio_q_at(c: SymbolicChain, reference_at: Mapping, assignment: Mapping[str, int | Fraction]):
    """Numeric ratio at ``assignment``; ``reference_at`` maps state -> number."""
    ratio = None
    for s in c.states:
        tree = psi_tree_at(c, s, assignment)
        val = Fraction(tree) / Fraction(reference_at[s])
        if ratio is None:
            ratio = val
        elif val != ratio:
            raise RatioError(f"ratio at {s!r} is {val}, expected {ratio}")
    return int(ratio) if ratio.denominator == 1 else ratio


def open_ratio_at_ones(n: int) -> int:
    """Tree total over tableau count for the open chain with all rates 1.

    Both sides are integers here, so no symbolic elimination is needed.
    """
    c = build_open_asep3(n)
    counts = {s: 0 for s in c.states}
    for fill in _fillings(n, TWO_LETTER, None):
        word = "".join(PARTICLE if fill[(k, n + 1 - k)] in PARTICLE_LETTERS else HOLE
                       for k in range(1, n + 1))
        counts[word] += 1
    return ratio_q_at(c, counts, {"alpha": 1, "beta": 1, "q": 1})
