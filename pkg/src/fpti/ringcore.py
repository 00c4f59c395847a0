"""Exact arithmetic over R = F_p[x_1..x_n] and free R-modules.

Coefficients are plain ints in ``[0, p)``.  Monomials are exponent tuples.
A :class:`Polynomial` stores a dict ``{exponents: coefficient}`` with no zero
coefficients; its ``terms`` view lists them in strictly descending order
under the ring's monomial order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    CtxMismatch,
    DuplicateVariable,
    InvalidVariable,
    NotPrime,
    ParseError,
    RankMismatch,
)

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
ORDERS = ("grevlex", "lex")
MODULE_ORDERS = ("pot", "top")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def inverse_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in F_p")
    return pow(a, p - 2, p)


def grevlex_key(exps):
    return (sum(exps), tuple(-x for x in reversed(exps)))


def lex_key(exps):
    return exps


@dataclass(frozen=True)
class RingCtx:
    """Ambient data: prime ``p``, variable names and monomial order.

    ``module_order`` extends the monomial order to free modules:
    ``"pot"`` compares positions first, ``"top"`` compares monomials first.
    Lower positions are always greater.
    """

    p: int
    vars: tuple
    order: str = "grevlex"
    module_order: str = "pot"

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not isinstance(self.p, int) or not 2 <= self.p < 2**16 or not is_prime(self.p):
            raise NotPrime(f"{self.p} is not a prime in [2, 2^16)")
        for v in self.vars:
            if not isinstance(v, str) or not _NAME_RE.match(v):
                raise InvalidVariable(f"invalid variable name {v!r}")
        if len(set(self.vars)) != len(self.vars):
            raise DuplicateVariable(f"duplicate variable names in {list(self.vars)}")
        if self.order not in ORDERS:
            raise ValueError(f"unknown monomial order {self.order!r}")
        if self.module_order not in MODULE_ORDERS:
            raise ValueError(f"unknown module order {self.module_order!r}")

    @property
    def n(self) -> int:
        return len(self.vars)

    @cached_property
    def monomial_key(self):
        return grevlex_key if self.order == "grevlex" else lex_key

    @cached_property
    def one_monomial(self) -> tuple:
        return (0,) * len(self.vars)

    def extend(self, *names: str) -> "RingCtx":
        """Same ring with extra variables appended (they come last in the order)."""
        return RingCtx(self.p, self.vars + tuple(names), self.order, self.module_order)

    def fresh_name(self, base: str = "t") -> str:
        name = base
        k = 0
        while name in self.vars:
            k += 1
            name = f"{base}{k}"
        return name

    # constructors
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        return Polynomial(self, {self.one_monomial: c})

    def monomial(self, exps, coeff: int = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.n or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps}")
        return Polynomial(self, {exps: coeff})

    def var(self, name) -> "Polynomial":
        i = self.vars.index(name) if isinstance(name, str) else int(name)
        exps = [0] * self.n
        exps[i] = 1
        return Polynomial(self, {tuple(exps): 1})

    def gens(self) -> list:
        return [self.var(i) for i in range(self.n)]

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(self, text)

    def describe(self) -> str:
        return f"F_{self.p}[{', '.join(self.vars)}] ({self.order}, {self.module_order})"


def make_ring(p: int, vars: Sequence[str], order: str = "grevlex", module_order: str = "pot") -> RingCtx:
    return RingCtx(p, tuple(vars), order, module_order)


def monomial_compare(a, b, ctx: RingCtx) -> int:
    """-1, 0 or 1 according to the ctx order."""
    if len(a) != ctx.n or len(b) != ctx.n:
        raise CtxMismatch("monomial length does not match the ring")
    ka, kb = ctx.monomial_key(tuple(a)), ctx.monomial_key(tuple(b))
    return (ka > kb) - (ka < kb)


def _check_ctx(a, b):
    if a.ctx is not b.ctx and a.ctx != b.ctx:
        raise CtxMismatch(f"{a.ctx.describe()} vs {b.ctx.describe()}")


class Polynomial:
    """Immutable sparse polynomial over F_p."""

    __slots__ = ("ctx", "_t", "_terms", "_hash")

    def __init__(self, ctx: RingCtx, terms: Mapping[tuple, int] | None = None):
        p = ctx.p
        t = {}
        if terms:
            for m, c in terms.items():
                c %= p
                if c:
                    t[tuple(m)] = c
        self.ctx = ctx
        self._t = t
        self._terms = None
        self._hash = None

    @classmethod
    def _raw(cls, ctx, t):
        # t must already be canonical: tuple keys, coefficients in [1, p)
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._t = t
        obj._terms = None
        obj._hash = None
        return obj

    # views
    @property
    def coeffs(self) -> Mapping[tuple, int]:
        return self._t

    @property
    def terms(self) -> list:
        """``[(coeff, exps), ...]`` strictly descending in the ctx order."""
        if self._terms is None:
            key = self.ctx.monomial_key
            self._terms = [(self._t[m], m) for m in sorted(self._t, key=key, reverse=True)]
        return self._terms

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and self.ctx.one_monomial in self._t)

    def constant_value(self) -> int:
        return self._t.get(self.ctx.one_monomial, 0)

    def leading_term(self):
        return self.terms[0] if self._t else None

    def leading_monomial(self):
        return self.terms[0][1] if self._t else None

    def leading_coefficient(self) -> int:
        return self.terms[0][0] if self._t else 0

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._t), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self._t), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._t}) <= 1

    def monic(self) -> "Polynomial":
        if not self._t:
            return self
        return self * inverse_mod(self.leading_coefficient(), self.ctx.p)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            _check_ctx(self, other)
            return other
        if isinstance(other, int):
            return self.ctx.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        t = dict(self._t)
        for m, c in other._t.items():
            v = (t.get(m, 0) + c) % p
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Polynomial._raw(self.ctx, t)

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return Polynomial._raw(self.ctx, {m: p - c for m, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: int) -> "Polynomial":
        p = self.ctx.p
        c %= p
        if c == 0:
            return Polynomial._raw(self.ctx, {})
        return Polynomial._raw(self.ctx, {m: (v * c) % p for m, v in self._t.items()})

    def mul_term(self, c: int, exps) -> "Polynomial":
        p = self.ctx.p
        c %= p
        if c == 0:
            return Polynomial._raw(self.ctx, {})
        return Polynomial._raw(
            self.ctx,
            {tuple(a + b for a, b in zip(m, exps)): (v * c) % p for m, v in self._t.items()},
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, Polynomial):
            _check_ctx(self, other)
            if len(self._t) < len(other._t):
                a, b = self._t, other._t
            else:
                a, b = other._t, self._t
            acc = {}
            get = acc.get
            for ma, ca in a.items():
                for mb, cb in b.items():
                    m = tuple([x + y for x, y in zip(ma, mb)])
                    acc[m] = get(m, 0) + ca * cb
            p = self.ctx.p
            t = {}
            for m, c in acc.items():
                c %= p
                if c:
                    t[m] = c
            return Polynomial._raw(self.ctx, t)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def frobenius(self, e: int = 1) -> "Polynomial":
        """``self ** (p**e)``; coefficients are fixed because a**p == a in F_p."""
        if e == 0:
            return self
        q = self.ctx.p**e
        return Polynomial._raw(self.ctx, {tuple(q * x for x in m): c for m, c in self._t.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        p = self.ctx.p
        result = self.ctx.one()
        base = self
        # base-p digits: f**k = prod (f**(p**i))**d_i, each f**(p**i) free
        while k:
            k, d = divmod(k, p)
            for _ in range(d):
                result = result * base
            if k:
                base = base.frobenius(1)
        return result

    def derivative(self, i: int) -> "Polynomial":
        t = {}
        p = self.ctx.p
        for m, c in self._t.items():
            if m[i] and (m[i] * c) % p:
                mm = list(m)
                mm[i] -= 1
                t[tuple(mm)] = (m[i] * c) % p
        return Polynomial._raw(self.ctx, t)

    def embed(self, ctx: RingCtx) -> "Polynomial":
        """Image in a ring with the same leading variables and possibly more."""
        if ctx.p != self.ctx.p or ctx.vars[: self.ctx.n] != self.ctx.vars:
            raise CtxMismatch("target ring does not extend the source ring")
        pad = (0,) * (ctx.n - self.ctx.n)
        return Polynomial._raw(ctx, {m + pad: c for m, c in self._t.items()})

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, int):
            return self._t == ({self.ctx.one_monomial: other % self.ctx.p} if other % self.ctx.p else {})
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ctx == other.ctx and self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.p, self.ctx.vars, frozenset(self._t.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_monomial(ctx: RingCtx, exps) -> str:
    parts = []
    for name, e in zip(ctx.vars, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if not f.coeffs:
        return "0"
    out = []
    for c, m in f.terms:
        mono = format_monomial(f.ctx, m)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\^)|(\*)|([+-])|(\()|(\)))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", column=col)
        start = m.start(m.lastindex)
        kind = ("int", "name", "^", "*", "sign", "(", ")")[m.lastindex - 1]
        toks.append((kind, m.group(m.lastindex), start + 1))
        pos = m.end()
    return toks


def parse_polynomial(ctx: RingCtx, text: str) -> Polynomial:
    """Parse ``[int*] var[^int] (*var[^int])*`` terms joined by ``+``/``-``.

    Integers are reduced mod p.  Parenthesised sub-expressions are accepted
    as factors (useful for fixtures such as ``(x+y)^2``).
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", "", len(text) + 1)

    def take(kind=None):
        nonlocal pos
        tok = peek()
        if kind is not None and tok[0] != kind:
            what = tok[1] or "end of input"
            raise ParseError(f"expected {kind}, found {what!r}", column=tok[2])
        pos += 1
        return tok

    def expression():
        result = ctx.zero()
        sign = 1
        if peek()[0] == "sign":
            sign = -1 if take()[1] == "-" else 1
        result = result + term() * sign
        while peek()[0] == "sign":
            sign = -1 if take()[1] == "-" else 1
            result = result + term() * sign
        return result

    def term():
        value = factor()
        while peek()[0] == "*":
            take()
            value = value * factor()
        return value

    def factor():
        tok = peek()
        if tok[0] == "int":
            take()
            base = ctx.const(int(tok[1]))
        elif tok[0] == "name":
            take()
            if tok[1] not in ctx.vars:
                raise ParseError(f"unknown variable {tok[1]!r}", column=tok[2])
            base = ctx.var(tok[1])
        elif tok[0] == "(":
            take()
            base = expression()
            take(")")
        else:
            what = tok[1] or "end of input"
            raise ParseError(f"expected a coefficient or variable, found {what!r}", column=tok[2])
        if peek()[0] == "^":
            take()
            exp_tok = take("int")
            base = base ** int(exp_tok[1])
        return base

    if not toks:
        raise ParseError("empty polynomial", column=1)
    result = expression()
    if pos != len(toks):
        tok = toks[pos]
        raise ParseError(f"unexpected token {tok[1]!r}", column=tok[2])
    return result


class ModuleVector:
    """Element of R^rank, stored as a tuple of polynomials."""

    __slots__ = ("ctx", "comps", "_hash")

    def __init__(self, ctx: RingCtx, comps: Iterable[Polynomial]):
        comps = tuple(comps)
        for c in comps:
            if not isinstance(c, Polynomial):
                raise TypeError("components must be Polynomials")
            if c.ctx is not ctx and c.ctx != ctx:
                raise CtxMismatch("component from a different ring")
        self.ctx = ctx
        self.comps = comps
        self._hash = None

    @classmethod
    def zero(cls, ctx, rank):
        return cls(ctx, [ctx.zero()] * rank)

    @classmethod
    def unit(cls, ctx, rank, i):
        return cls(ctx, [ctx.one() if k == i else ctx.zero() for k in range(rank)])

    @property
    def rank(self) -> int:
        return len(self.comps)

    def __len__(self):
        return len(self.comps)

    def __getitem__(self, i):
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def _check(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        _check_ctx(self, other)
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ModuleVector(self.ctx, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ModuleVector(self.ctx, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return ModuleVector(self.ctx, [-a for a in self.comps])

    def __mul__(self, r):
        if isinstance(r, (int, Polynomial)):
            return ModuleVector(self.ctx, [a * r for a in self.comps])
        return NotImplemented

    __rmul__ = __mul__

    def frobenius(self, e: int = 1) -> "ModuleVector":
        return ModuleVector(self.ctx, [a.frobenius(e) for a in self.comps])

    def degree(self) -> int:
        return max((c.degree() for c in self.comps), default=-1)

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.ctx == other.ctx and self.comps == other.comps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.comps)
        return self._hash

    def __str__(self):
        if self.rank == 1:
            return str(self.comps[0])
        return "[" + ", ".join(str(c) for c in self.comps) + "]"

    def __repr__(self):
        return f"ModuleVector({self})"


class PolyMatrix:
    """Dense rows x cols matrix of polynomials; columns are module elements."""

    __slots__ = ("ctx", "nrows", "ncols", "rows")

    def __init__(self, ctx: RingCtx, rows: Sequence[Sequence[Polynomial]], ncols: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.ctx = ctx
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def from_columns(cls, ctx, nrows: int, cols: Sequence[ModuleVector]) -> "PolyMatrix":
        cols = list(cols)
        for c in cols:
            if c.rank != nrows:
                raise RankMismatch(f"column of rank {c.rank}, expected {nrows}")
        rows = [[c.comps[i] for c in cols] for i in range(nrows)]
        return cls(ctx, rows, ncols=len(cols))

    @classmethod
    def identity(cls, ctx, n: int) -> "PolyMatrix":
        return cls(ctx, [[ctx.one() if i == j else ctx.zero() for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, ctx, nrows: int, ncols: int) -> "PolyMatrix":
        return cls(ctx, [[ctx.zero()] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def parse(cls, ctx, rows: Sequence[Sequence[str]]) -> "PolyMatrix":
        return cls(ctx, [[ctx.parse(s) for s in r] for r in rows])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> ModuleVector:
        return ModuleVector(self.ctx, [r[j] for r in self.rows])

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ctx, [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                          ncols=self.nrows)

    @property
    def T(self):
        return self.transpose()

    def apply(self, v: ModuleVector) -> ModuleVector:
        if v.rank != self.ncols:
            raise RankMismatch(f"matrix has {self.ncols} columns, vector has rank {v.rank}")
        out = []
        for r in self.rows:
            acc = self.ctx.zero()
            for a, b in zip(r, v.comps):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return ModuleVector(self.ctx, out)

    def __matmul__(self, other):
        if isinstance(other, ModuleVector):
            return self.apply(other)
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise RankMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = [self.apply(c) for c in other.columns()]
        return PolyMatrix.from_columns(self.ctx, self.nrows, cols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise RankMismatch("shape mismatch")
        return PolyMatrix(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                          ncols=self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise RankMismatch("shape mismatch")
        return PolyMatrix(self.ctx, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                          ncols=self.ncols)

    def scale(self, r) -> "PolyMatrix":
        return PolyMatrix(self.ctx, [[a * r for a in row] for row in self.rows], ncols=self.ncols)

    def frobenius(self, e: int = 1) -> "PolyMatrix":
        return PolyMatrix(self.ctx, [[a.frobenius(e) for a in r] for r in self.rows], ncols=self.ncols)

    def hstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.nrows != other.nrows:
            raise RankMismatch("row count mismatch")
        return PolyMatrix(self.ctx, [a + b for a, b in zip(self.rows, other.rows)], ncols=self.ncols + other.ncols)

    def select_columns(self, idx) -> "PolyMatrix":
        idx = list(idx)
        return PolyMatrix(self.ctx, [[r[j] for j in idx] for r in self.rows], ncols=len(idx))

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def to_strings(self) -> list:
        return [[str(a) for a in r] for r in self.rows]

    def __str__(self):
        if not self.nrows or not self.ncols:
            return f"<{self.nrows}x{self.ncols} matrix>"
        cells = self.to_strings()
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)

    def __repr__(self):
        return f"PolyMatrix({self.to_strings()!r})"


def determinant(M: PolyMatrix) -> Polynomial:
    """Laplace expansion; intended for the small minors the library needs."""
    if M.nrows != M.ncols:
        raise RankMismatch("determinant of a non-square matrix")
    ctx = M.ctx

    def det(rows, cols):
        if not rows:
            return ctx.one()
        r = rows[0]
        acc = ctx.zero()
        for k, c in enumerate(cols):
            a = M.rows[r][c]
            if a.is_zero():
                continue
            sub = det(rows[1:], cols[:k] + cols[k + 1:])
            term = a * sub
            acc = acc - term if k % 2 else acc + term
        return acc

    return det(tuple(range(M.nrows)), tuple(range(M.ncols)))
