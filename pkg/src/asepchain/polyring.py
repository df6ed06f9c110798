"""Exact sparse multivariate polynomials with big-integer coefficients.

A :class:`Ring` fixes an ordered list of variable names; every
:class:`MultiPoly` belongs to exactly one ring.  Arithmetic between
polynomials of different rings raises :class:`RingMismatchError`;
use :meth:`Ring.convert` to move a polynomial between rings explicitly.

Multiplication, exact division and gcd run on FLINT's ``fmpz_mpoly``.
Everything that fixes the observable contract (canonical term order,
text format, sign normalisation, fraction-free linear algebra) lives here.

Text format, terms in decreasing lex order over the ring's variables::

    2*q^3 + q^2 + q + 2
    alpha^2*beta - 3*alpha*q
"""

from __future__ import annotations

import re
from math import gcd as igcd
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint

Exponent = tuple[int, ...]


class PolyError(Exception):
    """Base class for polynomial-ring errors."""


class RingMismatchError(PolyError, ValueError):
    pass


class NotDivisibleError(PolyError, ArithmeticError):
    pass


class MissingVariableError(PolyError, KeyError):
    pass


class KernelDimensionError(PolyError, ValueError):
    def __init__(self, dimension: int, rank: int):
        self.dimension = dimension
        self.rank = rank
        super().__init__(f"left kernel has dimension {dimension} (rank {rank}), expected 1")


class ParseError(PolyError, ValueError):
    pass


class Ring:
    """Polynomial ring Z[v1, ..., vk] with a fixed, totally ordered variable list."""

    __slots__ = ("names", "_ctx", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"invalid variable name {name!r}")
        self.names = names
        self._ctx = flint.fmpz_mpoly_ctx.get(names, "lex")
        self._index = {name: i for i, name in enumerate(names)}

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return hash(("Ring", self.names))

    def __repr__(self):
        return f"Ring({list(self.names)!r})"

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise MissingVariableError(f"{name!r} is not a variable of {self!r}") from None

    def _wrap(self, raw) -> MultiPoly:
        return MultiPoly(self, raw)

    @property
    def zero(self) -> MultiPoly:
        return self._wrap(self._ctx.from_dict({}))

    @property
    def one(self) -> MultiPoly:
        return self.const(1)

    def const(self, c: int) -> MultiPoly:
        if isinstance(c, bool) or not isinstance(c, int):
            raise TypeError(f"integer constant expected, got {c!r}")
        if c == 0:
            return self.zero
        return self._wrap(self._ctx.from_dict({(0,) * self.nvars: c}))

    def var(self, name: str) -> MultiPoly:
        exps = [0] * self.nvars
        exps[self.index(name)] = 1
        return self._wrap(self._ctx.from_dict({tuple(exps): 1}))

    def gens(self) -> tuple[MultiPoly, ...]:
        return tuple(self.var(name) for name in self.names)

    def monomial(self, exponents: Mapping[str, int] | Exponent, coeff: int = 1) -> MultiPoly:
        if isinstance(exponents, Mapping):
            exps = [0] * self.nvars
            for name, e in exponents.items():
                exps[self.index(name)] += e
            exponents = tuple(exps)
        return self.from_terms({tuple(exponents): coeff})

    def from_terms(self, terms: Mapping[Exponent, int]) -> MultiPoly:
        clean = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != self.nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {self!r}")
            if c:
                clean[exps] = int(c)
        return self._wrap(self._ctx.from_dict(clean))

    def convert(self, p: MultiPoly) -> MultiPoly:
        """Re-express ``p`` in this ring; every variable ``p`` uses must exist here."""
        if p.ring == self:
            return p
        positions = []
        for i, name in enumerate(p.ring.names):
            positions.append(self._index.get(name))
        terms = {}
        for exps, c in p.terms.items():
            new = [0] * self.nvars
            for i, e in enumerate(exps):
                if e:
                    if positions[i] is None:
                        raise MissingVariableError(
                            f"variable {p.ring.names[i]!r} of {p} not in {self!r}")
                    new[positions[i]] = e
            terms[tuple(new)] = c
        return self.from_terms(terms)

    def parse(self, text: str) -> MultiPoly:
        return parse(self, text)


class MultiPoly:
    """Immutable polynomial in a :class:`Ring`."""

    __slots__ = ("ring", "_p", "_terms", "_hash")

    def __init__(self, ring: Ring, raw):
        self.ring = ring
        self._p = raw
        self._terms = None
        self._hash = None

    # -- structure -----------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, int]:
        """Map exponent vector -> nonzero integer coefficient."""
        if self._terms is None:
            self._terms = {tuple(map(int, k)): int(v) for k, v in self._p.to_dict().items()}
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        """Terms in decreasing lexicographic exponent order."""
        return sorted(self.terms.items(), reverse=True)

    def __len__(self):
        return len(self._p)

    def __bool__(self):
        return not self._p.is_zero()

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def is_monomial(self) -> bool:
        return len(self._p) == 1

    def coefficients(self) -> list[int]:
        return [c for _, c in self.sorted_terms()]

    def leading_coefficient(self) -> int:
        if self.is_zero():
            return 0
        return self.sorted_terms()[0][1]

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, name: str) -> int:
        i = self.ring.index(name)
        if self.is_zero():
            return -1
        return max(e[i] for e in self.terms)

    def variables(self) -> set[str]:
        used = set()
        for exps in self.terms:
            used.update(self.ring.names[i] for i, e in enumerate(exps) if e)
        return used

    def content(self) -> int:
        """Nonnegative gcd of the integer coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self.terms.values():
            g = igcd(g, c)
            if g == 1:
                break
        return g

    def normalized(self) -> MultiPoly:
        """Primitive part with positive leading coefficient (zero stays zero)."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return self if c == 1 else self._exact_int_div(c)

    def monomial_content(self) -> MultiPoly:
        """Largest monomial (coefficient 1) dividing every term."""
        if self.is_zero():
            raise ArithmeticError("monomial content of zero is undefined")
        exps = None
        for e in self.terms:
            exps = e if exps is None else tuple(map(min, exps, e))
        return self.ring.monomial(exps)

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.ring, self._p + other._p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.ring, self._p - other._p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.ring, other._p - self._p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.ring, self._p * other._p)

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPoly(self.ring, -self._p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return MultiPoly(self.ring, self._p ** k)

    def exact_div(self, other) -> MultiPoly:
        return exact_div(self, other)

    def _exact_int_div(self, c: int) -> MultiPoly:
        terms = {}
        for e, v in self.terms.items():
            quo, rem = divmod(v, c)
            if rem:
                raise NotDivisibleError(f"{self} is not divisible by {c}")
            terms[e] = quo
        return self.ring.from_terms(terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self._p == other._p
        if isinstance(other, int) and not isinstance(other, bool):
            return self._p == self.ring.const(other)._p
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple(self.sorted_terms())))
        return self._hash

    # -- substitution --------------------------------------------------
    def subs(self, assignment: Mapping[str, int]) -> MultiPoly:
        """Substitute integers for some variables; result stays in the same ring."""
        idx = {self.ring.index(name): int(v) for name, v in assignment.items()}
        terms: dict[Exponent, int] = {}
        for exps, c in self.terms.items():
            new = list(exps)
            for i, v in idx.items():
                if exps[i]:
                    c *= v ** exps[i]
                    new[i] = 0
                    if not c:
                        break
            if c:
                key = tuple(new)
                terms[key] = terms.get(key, 0) + c
        return self.ring.from_terms(terms)

    def evaluate(self, assignment: Mapping[str, int | Fraction]) -> Fraction:
        return evaluate(self, assignment)

    # -- text ----------------------------------------------------------
    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"MultiPoly({render(self)!r})"


# -- module-level operations ------------------------------------------------

def _same_ring(a: MultiPoly, b: MultiPoly) -> None:
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring!r} vs {b.ring!r}")


def arith(a: MultiPoly, b: MultiPoly, kind: str) -> MultiPoly:
    _same_ring(a, b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def exact_div(a: MultiPoly, b: MultiPoly | int) -> MultiPoly:
    """Return ``c`` with ``b*c == a``; raise :class:`NotDivisibleError` otherwise."""
    if isinstance(b, int) and not isinstance(b, bool):
        if b == 0:
            raise ZeroDivisionError("division by the zero polynomial")
        return a._exact_int_div(b)
    _same_ring(a, b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    try:
        raw = a._p / b._p
    except Exception as exc:  # flint raises DomainError
        raise NotDivisibleError(f"{a} is not divisible by {b}") from exc
    return MultiPoly(a.ring, raw)


def divides(b: MultiPoly, a: MultiPoly) -> bool:
    try:
        exact_div(a, b)
    except NotDivisibleError:
        return False
    return True


def gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Primitive gcd with positive leading coefficient."""
    _same_ring(a, b)
    if a.is_zero() and b.is_zero():
        raise ArithmeticError("gcd(0, 0) is undefined")
    if b.is_zero():
        return a.normalized()
    if a.is_zero():
        return b.normalized()
    return MultiPoly(a.ring, a._p.gcd(b._p)).normalized()


def gcd_all(polys: Iterable[MultiPoly]) -> MultiPoly:
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = p.normalized() if g is None else gcd(g, p)
        if g.is_constant():
            break
    if g is None:
        raise ArithmeticError("gcd of an all-zero family is undefined")
    return g


def evaluate(a: MultiPoly, assignment: Mapping[str, int | Fraction]) -> Fraction:
    """Exact rational value of ``a`` at ``assignment``."""
    missing = a.variables() - set(assignment)
    if missing:
        raise MissingVariableError(f"assignment misses {sorted(missing)}")
    vals = [Fraction(assignment[name]) if name in assignment else None
            for name in a.ring.names]
    total = Fraction(0)
    for exps, c in a.terms.items():
        term = Fraction(c)
        for v, e in zip(vals, exps):
            if e:
                term *= v ** e
        total += term
    return total


# -- text format -----------------------------------------------------------

def _render_monomial(names: Sequence[str], exps: Exponent) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render(a: MultiPoly) -> str:
    if a.is_zero():
        return "0"
    out = []
    for k, (exps, c) in enumerate(a.sorted_terms()):
        mono = _render_monomial(a.ring.names, exps)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if k == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-]))")


def parse(ring: Ring, text: str) -> MultiPoly:
    """Parse a sum of signed terms ``c*v^e*w`` (the canonical format, any term order)."""
    tokens = []
    pos = 0
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial text")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        num, name, caret, star, sign = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("var", name))
        elif caret:
            tokens.append(("^", None))
        elif star:
            tokens.append(("*", None))
        else:
            tokens.append(("sign", sign))

    terms: dict[Exponent, int] = {}
    i = 0
    n = len(tokens)
    while i < n:
        sign = 1
        if tokens[i][0] == "sign":
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif terms or i > 0:
            raise ParseError(f"missing operator between terms in {text!r}")
        coeff = 1
        exps = [0] * ring.nvars
        expect_factor = True
        seen = False
        while i < n and tokens[i][0] != "sign":
            kind, val = tokens[i]
            if not expect_factor:
                if kind != "*":
                    raise ParseError(f"expected '*' in {text!r}")
                expect_factor = True
                i += 1
                continue
            if kind == "num":
                coeff *= val
                i += 1
            elif kind == "var":
                e = 1
                if i + 1 < n and tokens[i + 1][0] == "^":
                    if i + 2 >= n or tokens[i + 2][0] != "num":
                        raise ParseError(f"bad exponent in {text!r}")
                    e = tokens[i + 2][1]
                    i += 3
                else:
                    i += 1
                exps[ring.index(val)] += e
            else:
                raise ParseError(f"unexpected {kind!r} in {text!r}")
            expect_factor = False
            seen = True
        if not seen or expect_factor:
            raise ParseError(f"dangling operator in {text!r}")
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign * coeff
    return ring.from_terms(terms)


# -- matrices and fraction-free linear algebra -----------------------------

class PolyMatrix:
    """Dense rows x cols grid of polynomials over one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: Ring, entries: Sequence[Sequence[MultiPoly]]):
        entries = [list(row) for row in entries]
        if not entries or not entries[0]:
            raise ValueError("a PolyMatrix needs at least one row and one column")
        cols = len(entries[0])
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged matrix rows")
            for x in row:
                if x.ring != ring:
                    raise RingMismatchError(f"entry {x} not in {ring!r}")
        self.ring = ring
        self.rows = len(entries)
        self.cols = cols
        self.entries = entries

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> PolyMatrix:
        z = ring.zero
        return cls(ring, [[z] * cols for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(self.ring, [list(col) for col in zip(*self.entries)])

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        self._check_shape(other)
        return PolyMatrix(self.ring, [[x + y for x, y in zip(r, s)]
                                      for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        self._check_shape(other)
        return PolyMatrix(self.ring, [[x - y for x, y in zip(r, s)]
                                      for r, s in zip(self.entries, other.entries)])

    def scale(self, c: MultiPoly | int) -> PolyMatrix:
        return PolyMatrix(self.ring, [[c * x for x in row] for row in self.entries])

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = list(zip(*other.entries))
        zero = self.ring.zero
        out = []
        for row in self.entries:
            nz = [(k, x) for k, x in enumerate(row) if x]
            new_row = []
            for col in ocols:
                acc = zero
                for k, x in nz:
                    if col[k]:
                        acc = acc + x * col[k]
                new_row.append(acc)
            out.append(new_row)
        return PolyMatrix(self.ring, out)

    def _check_shape(self, other: PolyMatrix) -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.ring == other.ring
                and self.entries == other.entries)

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols} over {list(self.ring.names)})"


def _bareiss(rows: list[list], zero, one):
    """In-place fraction-free row echelon form.

    Returns ``(pivot_columns, last_pivot, sign)``.  Pivot rows are chosen as
    the lowest-index nonzero candidate.  ``sign`` tracks row swaps.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = one
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        prow = rows[r]
        pv = prow[c]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            for j in range(c + 1, ncols):
                x = row[j]
                if f:
                    num = pv * x
                    pj = prow[j]
                    if pj:
                        num = num - f * pj
                else:
                    if not x:
                        continue
                    num = pv * x
                row[j] = num if r == 0 else _div_exact_raw(num, prev)
            row[c] = zero
        prev = pv
        pivots.append(c)
        r += 1
    return pivots, prev, sign


def _div_exact_raw(num, den):
    if isinstance(num, int):
        q, rem = divmod(num, den)
        if rem:
            raise NotDivisibleError("inexact division inside fraction-free elimination")
        return q
    try:
        return num / den
    except Exception as exc:
        raise NotDivisibleError("inexact division inside fraction-free elimination") from exc


def _raw_grid(m: PolyMatrix) -> list[list]:
    return [[x._p for x in row] for row in m.entries]


def determinant(m: PolyMatrix) -> MultiPoly:
    """Determinant by Bareiss fraction-free elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    ctx = m.ring._ctx
    zero, one = ctx.from_dict({}), ctx.from_dict({(0,) * m.ring.nvars: 1})
    rows = _raw_grid(m)
    pivots, last, sign = _bareiss(rows, zero, one)
    if len(pivots) < m.rows:
        return m.ring.zero
    return MultiPoly(m.ring, last if sign == 1 else -last)


def int_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    grid = [list(map(int, r)) for r in rows]
    pivots, last, sign = _bareiss(grid, 0, 1)
    if len(pivots) < n:
        return 0
    return sign * last


def left_kernel(m: PolyMatrix) -> list[MultiPoly]:
    """Generator ``v`` of the one-dimensional left kernel ``v @ m == 0``.

    Fraction-free elimination on the transpose, then fraction-free back
    substitution.  The result has integer content 1 and its first nonzero
    entry has a positive leading coefficient.
    """
    if m.rows != m.cols:
        raise ValueError("left_kernel expects a square matrix")
    ring = m.ring
    ctx = ring._ctx
    zero, one = ctx.from_dict({}), ctx.from_dict({(0,) * ring.nvars: 1})
    rows = _raw_grid(m.transpose())
    n = len(rows)
    pivots, _, _ = _bareiss(rows, zero, one)
    rank = len(pivots)
    if n - rank != 1:
        raise KernelDimensionError(n - rank, rank)
    free = next(c for c in range(n) if c not in set(pivots))
    # solution with x[free] = product-free choice: last pivot of the echelon block
    x = [zero] * n
    x[free] = rows[rank - 1][pivots[-1]] if rank else one
    for k in range(rank - 1, -1, -1):
        c = pivots[k]
        row = rows[k]
        acc = zero
        for j in range(c + 1, n):
            if row[j] and x[j]:
                acc = acc + row[j] * x[j]
        if acc.is_zero():
            x[c] = zero
            continue
        num = -acc
        try:
            x[c] = num / row[c]
        except Exception:
            # clear the denominator across the whole vector instead
            g = num.gcd(row[c])
            scale = row[c] / g
            x = [xi * scale for xi in x]
            x[c] = num / g
    vec = [MultiPoly(ring, xi) for xi in x]
    return _normalize_vector(vec)


def _normalize_vector(vec: list[MultiPoly]) -> list[MultiPoly]:
    g = 0
    for p in vec:
        g = igcd(g, p.content())
    first = next((p for p in vec if p), None)
    if first is None:
        return vec
    if first.leading_coefficient() < 0:
        g = -g
    if g == 1:
        return vec
    return [exact_div(p, g) for p in vec]
