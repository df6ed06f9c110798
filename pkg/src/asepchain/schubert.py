"""Permutations, Schubert polynomials, and the factorization check for the
inhomogeneous TASEP on ``(n, n-1, ..., 1)``.

Schubert polynomials are generated top-down: the longest permutation gets
the staircase monomial ``x1^(n-1) x2^(n-2) ... x_{n-1}`` and every other
``S_w`` is ``d_i S_{w s_i}`` for an ascent ``i`` of ``w``, where ``d_i`` is
the divided difference ``(f - s_i f) / (x_i - x_{i+1})``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .models import build_inhom_tasep, ring_stationary, word_label
from .polyring import MultiPoly, NotDivisibleError, Ring, exact_div

EVIL_PATTERNS = ((2, 4, 1, 3), (4, 1, 3, 2), (4, 2, 1, 3), (3, 2, 1, 4))


class PatternError(ValueError):
    pass


class FactorizationNotFound(ArithmeticError):
    pass


@dataclass(frozen=True)
class Permutation:
    one_line: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(v) for v in self.one_line)
        if sorted(w) != list(range(1, len(w) + 1)):
            raise ValueError(f"{self.one_line} is not a permutation of 1..{len(w)}")
        object.__setattr__(self, "one_line", w)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        text = text.strip()
        parts = text.split(",") if "," in text else list(text)
        return cls(tuple(int(p) for p in parts))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n: int) -> Permutation:
        return cls(tuple(range(n, 0, -1)))

    def __len__(self):
        return len(self.one_line)

    def __getitem__(self, i: int) -> int:
        """``w(i)`` with 1-indexed ``i``."""
        return self.one_line[i - 1]

    def __str__(self):
        return word_label(self.one_line)

    def inverse(self) -> Permutation:
        inv = [0] * len(self)
        for i, v in enumerate(self.one_line, 1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def descents(self) -> list[int]:
        w = self.one_line
        return [i for i in range(1, len(w)) if w[i - 1] > w[i]]

    def inverse_descents(self) -> list[int]:
        """Values ``i`` with ``i + 1`` appearing before ``i``; equals ``w^-1``'s descents."""
        pos = {v: k for k, v in enumerate(self.one_line)}
        return [i for i in range(1, len(self)) if pos[i + 1] < pos[i]]

    def length(self) -> int:
        w = self.one_line
        return sum(1 for a, b in itertools.combinations(w, 2) if a > b)

    def swap(self, i: int) -> Permutation:
        """Right multiplication by ``s_i``: exchange positions ``i`` and ``i + 1``."""
        w = list(self.one_line)
        w[i - 1], w[i] = w[i], w[i - 1]
        return Permutation(tuple(w))


def _as_perm(w) -> Permutation:
    if isinstance(w, Permutation):
        return w
    if isinstance(w, str):
        return Permutation.parse(w)
    return Permutation(tuple(w))


def contains_pattern(w, p) -> bool:
    w, p = _as_perm(w), _as_perm(p)
    m = len(p)
    if m > len(w):
        raise PatternError(f"pattern of length {m} is longer than the permutation")
    target = p.one_line
    for sub in itertools.combinations(w.one_line, m):
        ranks = sorted(sub)
        if all(ranks.index(v) + 1 == t for v, t in zip(sub, target)):
            return True
    return False


def is_evil_avoiding(w) -> bool:
    w = _as_perm(w)
    if len(w) < 4:
        return True
    return not any(contains_pattern(w, p) for p in EVIL_PATTERNS)


def schubert_ring(n: int) -> Ring:
    return Ring(tuple(f"x{i}" for i in range(1, n + 1)))


def swap_variables(f: MultiPoly, i: int) -> MultiPoly:
    """``s_i f``: exchange the ``i``-th and ``i+1``-th ring variables (1-indexed)."""
    out = {}
    for e, c in f.terms.items():
        e = list(e)
        e[i - 1], e[i] = e[i], e[i - 1]
        out[tuple(e)] = c
    return f.ring.from_terms(out)


def divided_difference(f: MultiPoly, i: int) -> MultiPoly:
    ring = f.ring
    den = ring.gens()[i - 1] - ring.gens()[i]
    return exact_div(f - swap_variables(f, i), den)


@lru_cache(maxsize=None)
def _schubert_cached(w: tuple[int, ...]) -> MultiPoly:
    n = len(w)
    ring = schubert_ring(n)
    if w == tuple(range(n, 0, -1)):
        return ring.monomial(tuple(range(n - 1, -1, -1)))
    i = next(k for k in range(1, n) if w[k - 1] < w[k])
    up = list(w)
    up[i - 1], up[i] = up[i], up[i - 1]
    return divided_difference(_schubert_cached(tuple(up)), i)


def schubert_poly(w) -> MultiPoly:
    """``S_w`` in the ring ``x1..xn`` with ``n = len(w)``."""
    return _schubert_cached(_as_perm(w).one_line)


def complete_homogeneous(k: int, variables: Sequence[MultiPoly]) -> MultiPoly:
    """``h_k`` of a list of ring elements (repeats allowed, so ``h_1(x1, x1) = 2*x1``)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if not variables:
        raise ValueError("need at least one variable to fix the ring")
    ring = variables[0].ring
    total = ring.zero
    for combo in itertools.combinations_with_replacement(range(len(variables)), k):
        term = ring.one
        for idx in combo:
            term = term * variables[idx]
        total = total + term
    return total


def z_product(n: int, ring: Ring | None = None) -> MultiPoly:
    """``prod_{i=1..n} h_{n-i}(x1, ..., x_{i-1}, x_i, x_i)``."""
    ring = ring or schubert_ring(n)
    xs = ring.gens()
    out = ring.one
    for i in range(1, n + 1):
        out = out * complete_homogeneous(n - i, list(xs[:i]) + [xs[i - 1]])
    return out


def reciprocal(f: MultiPoly) -> MultiPoly:
    """``x^d * f(1/x)`` with ``d`` the per-variable degree bound of ``f``."""
    top = [max(e[i] for e in f.terms) for i in range(f.ring.nvars)]
    return f.ring.from_terms({tuple(d - a for d, a in zip(top, e)): c
                              for e, c in f.terms.items()})


def _proportional(a: MultiPoly, b: MultiPoly) -> bool:
    return a * b.leading_coefficient() == b * a.leading_coefficient()


def find_factorization(psi: MultiPoly, k: int, candidates: Iterable[Permutation]):
    """Split ``psi`` as ``monomial * S_{u1} * ... * S_{uk}``.

    Returns ``(monomial, [u1, ..., uk])`` or raises :class:`FactorizationNotFound`.
    The integer content of ``psi`` stays in the monomial part.
    """
    mono = psi.monomial_content()
    rest = exact_div(psi, mono)
    scale = rest.content()
    rest = exact_div(rest, scale)
    mono = mono * scale
    pool = []
    for u in candidates:
        s = schubert_poly(u)
        if s.total_degree() > 0:
            pool.append((u, psi.ring.convert(s)))

    def search(f: MultiPoly, left: int, start: int):
        if left == 0:
            return [] if f == f.ring.one else None
        deg = f.total_degree()
        for idx in range(start, len(pool)):
            u, s = pool[idx]
            if s.total_degree() > deg:
                continue
            try:
                g = exact_div(f, s)
            except NotDivisibleError:
                continue
            tail = search(g, left - 1, idx)
            if tail is not None:
                return [u] + tail
        return None

    found = search(rest, k, 0)
    if found is None:
        raise FactorizationNotFound(f"{psi} is not a monomial times {k} Schubert polynomials")
    return mono, found


def tasep_measure(n: int):
    chain = build_inhom_tasep(tuple(range(n, 0, -1)))
    return chain, ring_stationary(chain)


def verify_kw(n: int) -> dict:
    """Check the Schubert factorization of every evil-avoiding state with ``w1 = 1``."""
    if not 2 <= n <= 5:
        raise ValueError("verify_kw supports 2 <= n <= 5")
    chain, measure = tasep_measure(n)
    ring = measure.ring
    candidates = sorted(
        (Permutation(p) for p in itertools.permutations(range(1, n + 1))),
        key=lambda u: (u.length(), u.one_line))
    states = []
    ok = True
    for label in chain.states:
        w = Permutation.parse(label)
        if w[1] != 1:
            continue
        psi = measure[label]
        entry = {"state": label, "psi": str(psi), "k": len(w.inverse_descents()),
                 "evil_avoiding": is_evil_avoiding(w)}
        if not entry["evil_avoiding"]:
            entry["status"] = "unverified"
            states.append(entry)
            continue
        try:
            mono, factors = find_factorization(psi, entry["k"], candidates)
        except FactorizationNotFound:
            entry["status"] = "not found"
            ok = False
        else:
            entry["status"] = "found"
            entry["monomial"] = str(mono)
            entry["factors"] = [str(u) for u in factors]
        states.append(entry)
    total = measure.total()
    formula = ring.convert(z_product(n))
    equal = total == formula
    ok = ok and equal
    return {
        "n": n,
        "states": states,
        "z": {"solver_total": str(total), "product_formula": str(formula),
              "proportional": _proportional(total, formula), "equal": equal,
              # diagnostic: the formula read with every x_i inverted
              "proportional_after_inversion": _proportional(total, reciprocal(formula))},
        "ok": ok,
    }
