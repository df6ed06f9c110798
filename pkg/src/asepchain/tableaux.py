"""Staircase tableaux and their weight generating functions.

Boxes of the staircase ``(n, n-1, ..., 1)`` are addressed in English
notation as ``(row, col)`` with ``1 <= col <= n + 1 - row``.  The
anti-diagonal boxes ``(k, n + 1 - k)`` carry the type of the tableau,
read for ``k = 1..n``.

Filling rules (``beta``/``delta`` block their row to the left,
``alpha``/``gamma`` block their column upwards)::

    row i:   .  .  .  b  |  everything left of a beta/delta is empty
    col j:   alpha/gamma at (i, j)  =>  (i', j) empty for i' < i

An empty box receives a ``q`` according to the nearest filled box to its
right (same row) and the nearest filled box below it (same column).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .models import HOLE, OPEN3_VARS, OPEN5_VARS, PARTICLE
from .polyring import MultiPoly, Ring

TWO_LETTER = "two_letter"
FOUR_LETTER = "four_letter"
MODES = (TWO_LETTER, FOUR_LETTER)

ALPHA, BETA, GAMMA, DELTA = "alpha", "beta", "gamma", "delta"
LETTERS = {TWO_LETTER: (ALPHA, BETA), FOUR_LETTER: (ALPHA, BETA, GAMMA, DELTA)}
ROW_BLOCKERS = frozenset((BETA, DELTA))
COL_BLOCKERS = frozenset((ALPHA, GAMMA))
PARTICLE_LETTERS = frozenset((ALPHA, DELTA))

_MODE_ALIASES = {"ab": TWO_LETTER, "abgd": FOUR_LETTER,
                 TWO_LETTER: TWO_LETTER, FOUR_LETTER: FOUR_LETTER}


def canonical_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode]
    except KeyError:
        raise ValueError(f"unknown tableau mode {mode!r}") from None


def weight_ring(mode: str) -> Ring:
    return Ring(OPEN3_VARS if canonical_mode(mode) == TWO_LETTER else OPEN5_VARS)


def normalize_word(word: str | Sequence[str]) -> str:
    """Accept ``B/O``, ``•/∘`` or ``1/0`` spellings; return the ``B/O`` form."""
    table = {"B": PARTICLE, "•": PARTICLE, "1": PARTICLE,
             "O": HOLE, "∘": HOLE, "0": HOLE}
    try:
        return "".join(table[ch] for ch in word)
    except KeyError as exc:
        raise ValueError(f"bad letter {exc.args[0]!r} in word {word!r}") from None


def boxes(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 2 - i)]


def scan_order(n: int) -> list[tuple[int, int]]:
    """Anti-diagonal first (fixes the type), then interior boxes row by row."""
    diag = [(k, n + 1 - k) for k in range(1, n + 1)]
    inner = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1 - i)]
    return diag + inner


@dataclass(frozen=True)
class StaircaseTableau:
    n: int
    mode: str
    filling: tuple[tuple[tuple[int, int], str], ...]

    @classmethod
    def from_dict(cls, n: int, mode: str, filling: dict) -> StaircaseTableau:
        t = cls(n, canonical_mode(mode), tuple(sorted(filling.items())))
        t.validate()
        return t

    def as_dict(self) -> dict[tuple[int, int], str]:
        return dict(self.filling)

    def validate(self) -> None:
        n, fill = self.n, self.as_dict()
        allowed = LETTERS[self.mode]
        shape = set(boxes(n))
        for box, letter in fill.items():
            if box not in shape:
                raise ValueError(f"box {box} outside the size-{n} staircase")
            if letter not in allowed:
                raise ValueError(f"letter {letter!r} not allowed in {self.mode} mode")
        for k in range(1, n + 1):
            if (k, n + 1 - k) not in fill:
                raise ValueError(f"anti-diagonal box {(k, n + 1 - k)} is empty")
        for (i, j), letter in fill.items():
            if letter in ROW_BLOCKERS and any((i, jj) in fill for jj in range(1, j)):
                raise ValueError(f"{letter} at {(i, j)} has a filled box to its left")
            if letter in COL_BLOCKERS and any((ii, j) in fill for ii in range(1, i)):
                raise ValueError(f"{letter} at {(i, j)} has a filled box above it")


@dataclass(frozen=True)
class WeightedTableau:
    tableau: StaircaseTableau
    q_boxes: frozenset
    weight: MultiPoly


def enumerate_tableaux(n: int, mode: str = TWO_LETTER,
                       type_filter: str | None = None) -> list[StaircaseTableau]:
    """All staircase tableaux of size ``n``, optionally of one type."""
    mode = canonical_mode(mode)
    return [StaircaseTableau(n, mode, tuple(sorted(f.items())))
            for f in _fillings(n, mode, type_filter)]


def _fillings(n: int, mode: str, type_filter: str | None) -> Iterator[dict]:
    if n < 1:
        raise ValueError("tableau size must be at least 1")
    letters = LETTERS[mode]
    order = scan_order(n)
    diag_choices = []
    if type_filter is not None:
        word = normalize_word(type_filter)
        if len(word) != n:
            raise ValueError(f"type {type_filter!r} does not have length {n}")
        for ch in word:
            want = ch == PARTICLE
            diag_choices.append(tuple(l for l in letters if (l in PARTICLE_LETTERS) == want))
    else:
        diag_choices = [letters] * n
    fill: dict[tuple[int, int], str] = {}
    # filled boxes seen so far, per row and per column
    row_filled: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    col_filled: dict[int, list[int]] = {j: [] for j in range(1, n + 1)}

    def allowed(box, letter) -> bool:
        i, j = box
        for jj in row_filled[i]:
            if jj > j and fill[(i, jj)] in ROW_BLOCKERS:
                return False
            if jj < j and letter in ROW_BLOCKERS:
                return False
        for ii in col_filled[j]:
            if ii > i and fill[(ii, j)] in COL_BLOCKERS:
                return False
            if ii < i and letter in COL_BLOCKERS:
                return False
        return True

    def rec(pos: int) -> Iterator[dict]:
        if pos == len(order):
            yield dict(fill)
            return
        box = order[pos]
        if pos < n:
            options = diag_choices[pos]
        else:
            yield from rec(pos + 1)
            options = letters
        i, j = box
        for letter in options:
            if not allowed(box, letter):
                continue
            fill[box] = letter
            row_filled[i].append(j)
            col_filled[j].append(i)
            yield from rec(pos + 1)
            row_filled[i].pop()
            col_filled[j].pop()
            del fill[box]

    yield from rec(0)


def tableau_type(t: StaircaseTableau) -> str:
    fill = t.as_dict()
    return "".join(PARTICLE if fill[(k, t.n + 1 - k)] in PARTICLE_LETTERS else HOLE
                   for k in range(1, t.n + 1))


def _q_boxes(n: int, mode: str, fill: dict) -> list[tuple[int, int]]:
    out = []
    for (i, j) in boxes(n):
        if (i, j) in fill:
            continue
        right = next(fill[(i, jj)] for jj in range(j + 1, n + 2 - i) if (i, jj) in fill)
        below = next(fill[(ii, j)] for ii in range(i + 1, n + 2 - j) if (ii, j) in fill)
        if mode == TWO_LETTER:
            hit = right == ALPHA and below == BETA
        else:
            hit = right == DELTA or (right in (ALPHA, GAMMA) and below in (BETA, GAMMA))
        if hit:
            out.append((i, j))
    return out


def _exponent(n: int, mode: str, fill: dict) -> tuple[int, ...]:
    counts = Counter(fill.values())
    nq = len(_q_boxes(n, mode, fill))
    if mode == TWO_LETTER:
        return (counts[ALPHA], counts[BETA], nq)
    return (counts[ALPHA], counts[BETA], counts[GAMMA], counts[DELTA], nq)


def place_q(t: StaircaseTableau) -> WeightedTableau:
    fill = t.as_dict()
    qs = frozenset(_q_boxes(t.n, t.mode, fill))
    ring = weight_ring(t.mode)
    return WeightedTableau(t, qs, ring.monomial(_exponent(t.n, t.mode, fill)))


def psi_tableaux(n: int, word: str, mode: str = TWO_LETTER) -> MultiPoly:
    """Weight generating function of the tableaux of type ``word``."""
    mode = canonical_mode(mode)
    acc: Counter = Counter()
    for fill in _fillings(n, mode, word):
        acc[_exponent(n, mode, fill)] += 1
    return weight_ring(mode).from_terms(acc)


def psi_all_types(n: int, mode: str = TWO_LETTER) -> dict[str, MultiPoly]:
    """``{type: psi}`` for every type word, in the solver's state order."""
    from .models import open_states

    mode = canonical_mode(mode)
    acc: dict[str, Counter] = {w: Counter() for w in open_states(n)}
    for fill in _fillings(n, mode, None):
        word = "".join(PARTICLE if fill[(k, n + 1 - k)] in PARTICLE_LETTERS else HOLE
                       for k in range(1, n + 1))
        acc[word][_exponent(n, mode, fill)] += 1
    ring = weight_ring(mode)
    return {w: ring.from_terms(c) for w, c in acc.items()}


def partition_function(n: int, mode: str = TWO_LETTER) -> MultiPoly:
    ring = weight_ring(mode)
    total = ring.zero
    for p in psi_all_types(n, mode).values():
        total = total + p
    return total


def count_tableaux(n: int, mode: str = TWO_LETTER) -> int:
    return sum(1 for _ in _fillings(n, canonical_mode(mode), None))


def tableau_to_json(t: StaircaseTableau, with_weight: bool = False) -> dict:
    out = {
        "type": tableau_type(t),
        "boxes": [[i, j, letter] for (i, j), letter in t.filling],
    }
    if with_weight:
        w = place_q(t)
        out["q_boxes"] = [list(b) for b in sorted(w.q_boxes)]
        out["weight"] = str(w.weight)
    return out
