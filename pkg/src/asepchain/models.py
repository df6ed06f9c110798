"""Builders for the exclusion-process chains.

Open-boundary states are strings over ``B`` (particle) and ``O`` (hole),
site 1 first.  Ring states are the words of a partition's parts, written
as digit strings when every part is at most 9 and comma-separated
otherwise.  All rates drop the uniform ``1/(n+1)`` or ``1/n`` factor.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from .markov import LumpingMap, Measure, SymbolicChain, lump, stationary_compact
from .polyring import MultiPoly, Ring, exact_div, gcd_all

PARTICLE, HOLE = "B", "O"

OPEN3_VARS = ("alpha", "beta", "q")
OPEN5_VARS = ("alpha", "beta", "gamma", "delta", "q")


class ModelError(ValueError):
    pass


def open_states(n: int) -> list[str]:
    return ["".join(w) for w in itertools.product((PARTICLE, HOLE), repeat=n)]


def _open_chain(n: int, ring: Ring, five: bool) -> SymbolicChain:
    if n < 1:
        raise ModelError("lattice size must be at least 1")
    alpha, beta, q = ring.var("alpha"), ring.var("beta"), ring.var("q")
    one = ring.one
    gamma = ring.var("gamma") if five else None
    delta = ring.var("delta") if five else None
    rates: dict[tuple[str, str], MultiPoly] = {}

    def add(src: str, word: list[str], r: MultiPoly) -> None:
        key = (src, "".join(word))
        rates[key] = rates[key] + r if key in rates else r

    for s in open_states(n):
        w = list(s)
        if w[0] == HOLE:
            add(s, [PARTICLE] + w[1:], alpha)
        elif five:
            add(s, [HOLE] + w[1:], gamma)
        if w[-1] == PARTICLE:
            add(s, w[:-1] + [HOLE], beta)
        elif five:
            add(s, w[:-1] + [PARTICLE], delta)
        for i in range(n - 1):
            pair = w[i] + w[i + 1]
            if pair == PARTICLE + HOLE:
                add(s, w[:i] + [HOLE, PARTICLE] + w[i + 2:], one)
            elif pair == HOLE + PARTICLE:
                add(s, w[:i] + [PARTICLE, HOLE] + w[i + 2:], q)
    return SymbolicChain(ring, open_states(n), rates)


def build_open_asep3(n: int) -> SymbolicChain:
    """Open-boundary ASEP with entry rate alpha, exit rate beta, left hop rate q."""
    return _open_chain(n, Ring(OPEN3_VARS), five=False)


def build_open_asep5(n: int) -> SymbolicChain:
    """As :func:`build_open_asep3` plus left exit gamma and right entry delta."""
    return _open_chain(n, Ring(OPEN5_VARS), five=True)


# -- ring models -----------------------------------------------------------

def check_partition(parts: Sequence[int]) -> tuple[int, ...]:
    parts = tuple(int(p) for p in parts)
    if not parts:
        raise ModelError("empty partition")
    if any(p < 0 for p in parts):
        raise ModelError("partition parts must be nonnegative")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ModelError(f"partition {parts} is not weakly decreasing")
    return parts


def word_label(word: Sequence[int]) -> str:
    if all(0 <= p <= 9 for p in word):
        return "".join(map(str, word))
    return ",".join(map(str, word))


def parse_word(label: str) -> tuple[int, ...]:
    if "," in label:
        return tuple(int(x) for x in label.split(","))
    return tuple(int(x) for x in label)


def ring_words(parts: Sequence[int]) -> list[tuple[int, ...]]:
    """Distinct rearrangements of ``parts`` in increasing lexicographic order."""
    return sorted(set(itertools.permutations(parts)))


def _ring_chain(parts, ring: Ring, rate_of) -> SymbolicChain:
    words = ring_words(parts)
    n = len(parts)
    rates: dict[tuple[str, str], MultiPoly] = {}
    for w in words:
        src = word_label(w)
        for i in range(n):
            j = (i + 1) % n
            if i == j or w[i] == w[j]:
                continue
            r = rate_of(w[i], w[j])
            if r is None:
                continue
            v = list(w)
            v[i], v[j] = v[j], v[i]
            key = (src, word_label(v))
            rates[key] = rates[key] + r if key in rates else r
    return SymbolicChain(ring, [word_label(w) for w in words], rates)


def build_masep(parts: Sequence[int]) -> SymbolicChain:
    """Multispecies ASEP on a ring: swap at rate t if the left entry is heavier, else 1."""
    parts = check_partition(parts)
    if len(set(parts)) < 2:
        raise ModelError("a constant partition gives a one-state chain")
    ring = Ring(("t",))
    t, one = ring.var("t"), ring.one
    return _ring_chain(parts, ring, lambda a, b: t if a > b else one)


def tasep_ring(parts: Sequence[int], with_y: bool) -> Ring:
    types = sorted(set(parts))
    names = [f"x{v}" for v in types]
    if with_y:
        names += [f"y{v}" for v in types]
    return Ring(names)


def build_inhom_tasep(parts: Sequence[int], with_y: bool = False) -> SymbolicChain:
    """Inhomogeneous multispecies TASEP on a ring.

    Adjacent entries ``a < b`` (lighter on the left) swap at rate
    ``x_a - y_b``; heavier-on-the-left pairs never move.
    """
    parts = check_partition(parts)
    if len(set(parts)) < 2:
        raise ModelError("a constant partition gives a one-state chain")
    ring = tasep_ring(parts, with_y)

    def rate(a: int, b: int):
        if a >= b:
            return None
        r = ring.var(f"x{a}")
        if with_y:
            r = r - ring.var(f"y{b}")
        return r

    return _ring_chain(parts, ring, rate)


def rotation_class(label: str) -> str:
    w = parse_word(label)
    return word_label(min(w[k:] + w[:k] for k in range(len(w))))


def ring_stationary(c: SymbolicChain) -> Measure:
    """Compact stationary measure of a ring chain, solved on rotation classes.

    Rotating the ring is a symmetry of the dynamics, so the measure is
    constant on rotation classes and the class chain is an exact lumping.
    """
    f = LumpingMap.from_function(c, rotation_class)
    quotient = stationary_compact(lump(c, f))
    sizes = [len(fb) for fb in f.fibers()]
    scale = math.lcm(*sizes)
    values = [quotient.values[k] * (scale // sizes[k]) for k in f.image]
    g = gcd_all(values) * math.gcd(*(v.content() for v in values))
    return Measure(c, [exact_div(v, g) for v in values])


def build_model(model: str, n: int | None = None,
                parts: Sequence[int] | None = None, with_y: bool = False) -> SymbolicChain:
    """Dispatch used by the CLI: ``open3``, ``open5``, ``masep`` or ``tasep``."""
    if model in ("open3", "open5"):
        if n is None:
            raise ModelError(f"model {model} needs a lattice size")
        return build_open_asep3(n) if model == "open3" else build_open_asep5(n)
    if model in ("masep", "tasep"):
        if parts is None:
            raise ModelError(f"model {model} needs a partition")
        return build_masep(parts) if model == "masep" else build_inhom_tasep(parts, with_y)
    raise ModelError(f"unknown model {model!r}")
