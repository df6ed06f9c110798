"""Transfer-matrix solution of the open-boundary Matrix Ansatz.

``D`` is the shift with ``alpha`` on the superdiagonal and ``E`` is lower
triangular with::

    e_ij = beta^(i-j+1) * (q^(j-1) C(i-1, j-1) + alpha * sum_{r=0}^{j-2} C(i-j+r, r) q^r)

for ``j <= i`` (1-indexed).  With ``W = (1, 0, ...)`` and ``V = (1, 1, ...)^T``
these satisfy the algebra with ``c = alpha*beta``.  A word of length ``n``
starting from ``W`` can reach index at most ``n + 1``, so ``n + 1`` rows and
columns give the exact value of any product of ``n`` factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .models import OPEN3_VARS, PARTICLE
from .polyring import MultiPoly, PolyMatrix, Ring
from .tableaux import normalize_word

RING = Ring(OPEN3_VARS)


def _binom(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


def e_entry(i: int, j: int, ring: Ring = RING) -> MultiPoly:
    """Entry ``e_ij`` of ``E`` (1-indexed); zero above the diagonal."""
    if j > i:
        return ring.zero
    alpha, beta, q = ring.var("alpha"), ring.var("beta"), ring.var("q")
    inner = q ** (j - 1) * _binom(i - 1, j - 1)
    tail = ring.zero
    for r in range(j - 1):
        tail = tail + q ** r * _binom(i - j + r, r)
    return beta ** (i - j + 1) * (inner + alpha * tail)


@dataclass(frozen=True)
class AnsatzTruncation:
    dim: int
    D: PolyMatrix
    E: PolyMatrix
    W: tuple[MultiPoly, ...]
    V: tuple[MultiPoly, ...]


def build_truncation(dim: int) -> AnsatzTruncation:
    if dim < 1:
        raise ValueError("truncation dimension must be positive")
    ring = RING
    z, alpha = ring.zero, ring.var("alpha")
    D = [[alpha if j == i + 1 else z for j in range(dim)] for i in range(dim)]
    E = [[e_entry(i + 1, j + 1) for j in range(dim)] for i in range(dim)]
    W = tuple(ring.one if k == 0 else z for k in range(dim))
    V = tuple(ring.one for _ in range(dim))
    return AnsatzTruncation(dim, PolyMatrix(ring, D), PolyMatrix(ring, E), W, V)


def check_relations(N: int, c: MultiPoly | int | None = None) -> bool:
    """Verify the three Ansatz relations on the truncation-safe windows.

    ``DE - qED - c(D+E)`` is computed at size ``N + 1`` and checked on its
    leading ``N x N`` block; ``beta D V = c V`` on rows ``1..N-1``;
    ``alpha W E = c W`` on all ``N`` columns.
    """
    if N < 2:
        raise ValueError("relations need N >= 2")
    ring = RING
    alpha, beta, q = ring.var("alpha"), ring.var("beta"), ring.var("q")
    if c is None:
        c = alpha * beta
    elif isinstance(c, int):
        c = ring.const(c)
    big = build_truncation(N + 1)
    D, E = big.D, big.E
    bulk = (D @ E) - (E @ D).scale(q) - (D + E).scale(c)
    if any(bulk[i, j] for i in range(N) for j in range(N)):
        return False
    small = build_truncation(N)
    Dv = [sum((small.D[i, k] * small.V[k] for k in range(N)), ring.zero) for i in range(N)]
    if any(beta * Dv[i] != c * small.V[i] for i in range(N - 1)):
        return False
    WE = [sum((small.W[k] * small.E[k, j] for k in range(N)), ring.zero) for j in range(N)]
    return all(alpha * WE[j] == c * small.W[j] for j in range(N))


def _apply(row: list[MultiPoly], m: PolyMatrix) -> list[MultiPoly]:
    z = m.ring.zero
    out = [z] * m.cols
    for k, x in enumerate(row):
        if not x:
            continue
        for j, y in enumerate(m.entries[k]):
            if y:
                out[j] = out[j] + x * y
    return out


def word_product(word: str, dim: int | None = None) -> MultiPoly:
    """``<W| prod (tau_i D + (1 - tau_i) E) |V>`` for a B/O word."""
    word = normalize_word(word)
    if not word:
        raise ValueError("empty word")
    tr = build_truncation(dim if dim is not None else len(word) + 1)
    row = list(tr.W)
    for ch in word:
        row = _apply(row, tr.D if ch == PARTICLE else tr.E)
    total = RING.zero
    for x, v in zip(row, tr.V):
        total = total + x * v
    return total


def transfer_psi(word: str) -> MultiPoly:
    return word_product(word)


def total_weight(n: int, dim: int | None = None) -> MultiPoly:
    """``<W|(D + E)^n|V>``, the partition function straight from the matrices."""
    tr = build_truncation(dim if dim is not None else n + 1)
    S = tr.D + tr.E
    row = list(tr.W)
    for _ in range(n):
        row = _apply(row, S)
    total = RING.zero
    for x, v in zip(row, tr.V):
        total = total + x * v
    return total
