"""Finite-state Markov chains with polynomial transition rates.

Chains store only off-diagonal rates.  The discrete-time chains of the
exclusion models carry a uniform factor (``1/(n+1)`` or ``1/n``) and
self-loops; dropping both leaves the stationary vector unchanged, since
``pi (P - I) = 0`` iff ``pi Q = 0`` when ``P = I + Q/c``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .polyring import (
    MultiPoly,
    PolyMatrix,
    Ring,
    exact_div,
    gcd_all,
    left_kernel,
)


class ChainError(ValueError):
    pass


class ReducibleChainError(ChainError):
    pass


class IndexMismatchError(ChainError):
    pass


class LumpingError(ChainError):
    """The strong-lumping condition fails; ``witness`` holds the offending pair."""

    def __init__(self, x0, x0_prime, y1, sums):
        self.witness = (x0, x0_prime)
        self.target = y1
        self.sums = sums
        super().__init__(
            f"states {x0!r} and {x0_prime!r} lump together but send "
            f"{sums[0]} vs {sums[1]} into {y1!r}")


class SymbolicChain:
    """Ordered states plus a sparse map ``(i, j) -> rate`` with ``i != j``."""

    def __init__(self, ring: Ring, states: Sequence[Hashable],
                 rates: Mapping[tuple, MultiPoly] | None = None):
        self.ring = ring
        self.states = tuple(states)
        if not self.states:
            raise ChainError("a chain needs at least one state")
        self._index = {s: i for i, s in enumerate(self.states)}
        if len(self._index) != len(self.states):
            raise ChainError("state labels must be unique")
        store: dict[tuple[int, int], MultiPoly] = {}
        for (a, b), r in (rates or {}).items():
            i, j = self._resolve(a), self._resolve(b)
            if i == j:
                raise ChainError(f"self-loop at {self.states[i]!r} is not stored")
            if r.ring != ring:
                r = ring.convert(r)
            r = store.get((i, j), ring.zero) + r
            if r.is_zero():
                store.pop((i, j), None)
            else:
                store[(i, j)] = r
        self.rates = dict(sorted(store.items()))

    def _resolve(self, s) -> int:
        if s in self._index:
            return self._index[s]
        raise IndexMismatchError(f"unknown state {s!r}")

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"SymbolicChain({len(self.states)} states, {len(self.rates)} rates)"

    def __eq__(self, other):
        return (isinstance(other, SymbolicChain) and self.ring == other.ring
                and self.states == other.states and self.rates == other.rates)

    def index(self, state) -> int:
        return self._resolve(state)

    def rate(self, a, b) -> MultiPoly:
        return self.rates.get((self._resolve(a), self._resolve(b)), self.ring.zero)

    def out_rate(self, i: int) -> MultiPoly:
        total = self.ring.zero
        for (a, _), r in self.rates.items():
            if a == i:
                total = total + r
        return total

    def rate_matrix(self) -> PolyMatrix:
        """Generator matrix: off-diagonal rates, diagonal = minus the row sum."""
        n = len(self.states)
        z = self.ring.zero
        grid = [[z] * n for _ in range(n)]
        for (i, j), r in self.rates.items():
            grid[i][j] = r
            grid[i][i] = grid[i][i] - r
        return PolyMatrix(self.ring, grid)

    def successors(self) -> list[list[int]]:
        out = [[] for _ in self.states]
        for i, j in self.rates:
            out[i].append(j)
        return out

    def is_irreducible(self) -> bool:
        """Strong connectivity of the rate graph (symbolic rates count as positive)."""
        n = len(self.states)
        if n == 1:
            return True
        fwd = self.successors()
        back = [[] for _ in range(n)]
        for i, j in self.rates:
            back[j].append(i)
        return _reaches_all(fwd) and _reaches_all(back)

    def reorder(self, new_states: Sequence[Hashable]) -> SymbolicChain:
        if sorted(map(repr, new_states)) != sorted(map(repr, self.states)):
            raise IndexMismatchError("reorder needs a permutation of the states")
        labelled = {(self.states[i], self.states[j]): r for (i, j), r in self.rates.items()}
        return SymbolicChain(self.ring, new_states, labelled)

    def subs(self, assignment: Mapping[str, int]) -> SymbolicChain:
        """Specialise some parameters; rates that vanish disappear."""
        labelled = {(self.states[i], self.states[j]): r.subs(assignment)
                    for (i, j), r in self.rates.items()}
        return SymbolicChain(self.ring, self.states, labelled)

    def labelled_rates(self) -> dict[tuple, MultiPoly]:
        return {(self.states[i], self.states[j]): r for (i, j), r in self.rates.items()}


def _reaches_all(adj: list[list[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(adj)


class Measure:
    """One polynomial per state of ``chain``, not all zero."""

    def __init__(self, chain: SymbolicChain, values: Sequence[MultiPoly]):
        values = list(values)
        if len(values) != len(chain.states):
            raise IndexMismatchError(
                f"{len(values)} values for a chain with {len(chain.states)} states")
        if all(v.is_zero() for v in values):
            raise ChainError("a measure cannot be identically zero")
        self.chain = chain
        self.values = tuple(values)

    @property
    def ring(self) -> Ring:
        return self.chain.ring

    @property
    def states(self):
        return self.chain.states

    def __getitem__(self, state) -> MultiPoly:
        return self.values[self.chain.index(state)]

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return (isinstance(other, Measure) and self.states == other.states
                and self.values == other.values)

    def __repr__(self):
        inner = ", ".join(f"{s}: {v}" for s, v in zip(self.states, self.values))
        return f"Measure({{{inner}}})"

    def as_dict(self) -> dict:
        return dict(zip(self.states, self.values))

    def total(self) -> MultiPoly:
        z = self.ring.zero
        for v in self.values:
            z = z + v
        return z

    def scaled(self, c) -> Measure:
        return Measure(self.chain, [c * v for v in self.values])

    def divided(self, d) -> Measure:
        return Measure(self.chain, [exact_div(v, d) for v in self.values])


@dataclass(frozen=True)
class Classification:
    manifestly_positive: bool
    compact: bool


class LumpingMap:
    """Surjection from the states of ``source`` onto ``targets``."""

    def __init__(self, source: SymbolicChain, targets: Sequence[Hashable],
                 assignment: Mapping[Hashable, Hashable]):
        self.source = source
        self.targets = tuple(targets)
        tindex = {t: k for k, t in enumerate(self.targets)}
        if len(tindex) != len(self.targets):
            raise ChainError("target labels must be unique")
        missing = [s for s in source.states if s not in assignment]
        if missing:
            raise IndexMismatchError(f"no image for states {missing}")
        self.image = tuple(tindex[assignment[s]] for s in source.states)
        hit = set(self.image)
        empty = [t for k, t in enumerate(self.targets) if k not in hit]
        if empty:
            raise ChainError(f"map is not surjective: {empty} have no preimage")

    @classmethod
    def from_function(cls, source: SymbolicChain, f) -> LumpingMap:
        images = {s: f(s) for s in source.states}
        targets = list(dict.fromkeys(images[s] for s in source.states))
        return cls(source, targets, images)

    def fibers(self) -> list[list[int]]:
        out = [[] for _ in self.targets]
        for i, k in enumerate(self.image):
            out[k].append(i)
        return out


# -- operations ------------------------------------------------------------

def _sign_normalize(values: list[MultiPoly]) -> list[MultiPoly]:
    first = next((v for v in values if v), None)
    if first is not None and first.leading_coefficient() < 0:
        return [-v for v in values]
    return values


def stationary_compact(c: SymbolicChain) -> Measure:
    """Compact unnormalised stationary measure: ``psi @ Q == 0`` with gcd 1."""
    if not c.is_irreducible():
        raise ReducibleChainError("stationary_compact needs an irreducible chain")
    if len(c) == 1:
        return Measure(c, [c.ring.one])
    kernel = left_kernel(c.rate_matrix())
    g = gcd_all(kernel)
    if not g.is_constant() or g != 1:
        kernel = [exact_div(v, g) for v in kernel]
    return Measure(c, _sign_normalize(kernel))


def check_global_balance(c: SymbolicChain, m: Measure) -> bool:
    """Exact check of inflow == outflow at every state."""
    if m.states != c.states:
        raise IndexMismatchError("measure and chain have different states")
    if m.ring != c.ring:
        raise IndexMismatchError("measure and chain live in different rings")
    n = len(c)
    outflow = [c.ring.zero] * n
    inflow = [c.ring.zero] * n
    for (i, j), r in c.rates.items():
        outflow[i] = outflow[i] + r
        inflow[j] = inflow[j] + m.values[i] * r
    return all(m.values[i] * outflow[i] == inflow[i] for i in range(n))


def classify(m: Measure | Sequence[MultiPoly]) -> Classification:
    values = m.values if isinstance(m, Measure) else list(m)
    positive = all(coef > 0 for v in values for coef in v.terms.values())
    g = gcd_all(values)
    return Classification(manifestly_positive=positive, compact=(g == 1))


def proportional(u: Sequence[MultiPoly], v: Sequence[MultiPoly]) -> bool:
    """True iff ``u_i v_j == u_j v_i`` for all i, j (both vectors nonzero)."""
    u, v = list(u), list(v)
    if len(u) != len(v):
        raise IndexMismatchError("vectors of different length")
    anchor = next((k for k, x in enumerate(u) if x), None)
    if anchor is None or v[anchor].is_zero():
        return False
    ua, va = u[anchor], v[anchor]
    return all(x * va == y * ua for x, y in zip(u, v))


def lump(c: SymbolicChain, f: LumpingMap) -> SymbolicChain:
    """Lumped chain; off-diagonal fibre sums must not depend on the representative."""
    if f.source.states != c.states:
        raise IndexMismatchError("lumping map belongs to a different chain")
    zero = c.ring.zero
    # row_sums[x][y1] = total rate from x into fibre y1
    row_sums: list[dict[int, MultiPoly]] = [dict() for _ in c.states]
    for (i, j), r in c.rates.items():
        k = f.image[j]
        row_sums[i][k] = row_sums[i].get(k, zero) + r
    lumped: dict[tuple, MultiPoly] = {}
    for y0, fiber in enumerate(f.fibers()):
        rep = fiber[0]
        for y1 in range(len(f.targets)):
            if y1 == y0:
                continue
            ref = row_sums[rep].get(y1, zero)
            for other in fiber[1:]:
                val = row_sums[other].get(y1, zero)
                if val != ref:
                    raise LumpingError(c.states[rep], c.states[other],
                                       f.targets[y1], (ref, val))
            if ref:
                lumped[(f.targets[y0], f.targets[y1])] = ref
    return SymbolicChain(c.ring, f.targets, lumped)


def pushforward(m: Measure, f: LumpingMap) -> list[MultiPoly]:
    """Fibre sums of ``m`` (indexed like ``f.targets``)."""
    if m.states != f.source.states:
        raise IndexMismatchError("measure and lumping map disagree on states")
    out = [m.ring.zero] * len(f.targets)
    for i, k in enumerate(f.image):
        out[k] = out[k] + m.values[i]
    return out


def pushforward_measure(m: Measure, f: LumpingMap, target: SymbolicChain) -> Measure:
    return Measure(target, pushforward(m, f))


# -- JSON ------------------------------------------------------------------

def chain_to_json(c: SymbolicChain) -> dict:
    return {
        "variables": list(c.ring.names),
        "states": [str(s) for s in c.states],
        "rates": [[str(c.states[i]), str(c.states[j]), str(r)]
                  for (i, j), r in c.rates.items()],
    }


def chain_from_json(data: Mapping) -> SymbolicChain:
    ring = Ring(data["variables"])
    rates = {(a, b): ring.parse(text) for a, b, text in data["rates"]}
    return SymbolicChain(ring, data["states"], rates)


def measure_to_json(m: Measure) -> dict:
    return {
        "variables": list(m.ring.names),
        "states": [str(s) for s in m.states],
        "values": {str(s): str(v) for s, v in zip(m.states, m.values)},
    }


def measure_from_json(data: Mapping, chain: SymbolicChain | None = None) -> Measure:
    ring = Ring(data["variables"])
    if chain is None:
        chain = SymbolicChain(ring, data["states"])
    elif [str(s) for s in chain.states] != list(data["states"]):
        raise IndexMismatchError("measure file does not match the chain's states")
    values = [ring.parse(data["values"][str(s)]) for s in chain.states]
    if chain.ring != ring:
        values = [chain.ring.convert(v) for v in values]
    return Measure(chain, values)


def dumps(obj: Mapping) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def build_chain(ring: Ring, states: Iterable[Hashable],
                edges: Iterable[tuple[Hashable, Hashable, MultiPoly | int]]) -> SymbolicChain:
    """Convenience constructor from ``(source, target, rate)`` triples."""
    rates: dict[tuple, MultiPoly] = {}
    for a, b, r in edges:
        if isinstance(r, int):
            r = ring.const(r)
        rates[(a, b)] = rates.get((a, b), ring.zero) + r
    return SymbolicChain(ring, list(states), rates)
