"""Groebner bases for submodules of R^rank over F_p.

Buchberger's algorithm with normal pair selection and the Gebauer-Moeller
criteria.  Internally a module monomial ``(pos, exps)`` is encoded as a tuple
that *is* its sort key under the chosen order, so leading terms are found by
plain ``max`` and monomial products are componentwise sums of keys.

Syzygies, lifts, intersections and colons all reduce to one construction:
a Groebner basis of a stacked module in position-over-term order, where the
upper block dominates.
"""
from __future__ import annotations

from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from itertools import combinations
from operator import add, le, sub
from typing import Iterable, Sequence

from .errors import CtxMismatch, RankMismatch, ResourceCap
from .ringcore import ModuleVector, PolyMatrix, Polynomial, RingCtx, inverse_mod


@dataclass(frozen=True)
class Limits:
    """Resource caps for a single Groebner computation."""

    max_pairs: int = 200_000
    max_terms: int = 400_000


DEFAULT_LIMITS = Limits()


class _Encoder:
    def __init__(self, ctx: RingCtx, module_order: str):
        self.n = ctx.n
        self.grevlex = ctx.order == "grevlex"
        self.pot = module_order == "pot"

    def key(self, pos, exps):
        if self.grevlex:
            mk = (sum(exps),) + tuple([-x for x in reversed(exps)])
        else:
            mk = tuple(exps)
        return (-pos,) + mk if self.pot else mk + (-pos,)

    def unkey(self, k):
        if self.pot:
            pos, mk = -k[0], k[1:]
        else:
            pos, mk = -k[-1], k[:-1]
        if self.grevlex:
            return pos, tuple([-x for x in reversed(mk[1:])])
        return pos, mk

    def encode(self, v: ModuleVector, offset: int = 0) -> dict:
        d = {}
        key = self.key
        for i, f in enumerate(v.comps):
            for m, c in f.coeffs.items():
                d[key(i + offset, m)] = c
        return d

    def decode(self, ctx, d, rank, offset=0) -> ModuleVector:
        comps = [{} for _ in range(rank)]
        for k, c in d:
            pos, exps = self.unkey(k)
            comps[pos - offset][exps] = c
        return ModuleVector(ctx, [Polynomial._raw(ctx, t) for t in comps])


class _Elt:
    """Monic basis element: ``terms`` sorted by descending key."""

    __slots__ = ("terms", "lead", "pos", "lexps")

    def __init__(self, terms, enc):
        self.terms = terms
        self.lead = terms[0][0]
        self.pos, self.lexps = enc.unkey(self.lead)


def _make_elt(d: dict, enc, p) -> _Elt:
    items = sorted(d.items(), reverse=True)
    inv = inverse_mod(items[0][1], p)
    if inv != 1:
        items = [(k, c * inv % p) for k, c in items]
    return _Elt(items, enc)


class _Basis:
    """Reducers indexed by position for fast divisor lookup."""

    __slots__ = ("by_pos",)

    def __init__(self, elts=()):
        self.by_pos = {}
        for g in elts:
            self.add(g)

    def add(self, g):
        self.by_pos.setdefault(g.pos, []).append(g)

    def remove(self, g):
        self.by_pos[g.pos].remove(g)


def _reduce(h: dict, basis: _Basis, enc, p, limits: Limits) -> dict:
    """Full normal form of ``h`` (consumed).  Returned dict is in descending key order."""
    rem = {}
    unkey = enc.unkey
    by_pos = basis.by_pos
    max_terms = limits.max_terms
    while h:
        if len(h) > max_terms:
            raise ResourceCap(f"polynomial exceeded {max_terms} terms during reduction")
        m = max(h)
        c = h.pop(m)
        pos, ex = unkey(m)
        for g in by_pos.get(pos, ()):
            if all(map(le, g.lexps, ex)):
                q = tuple(map(sub, m, g.lead))
                terms = g.terms
                for idx in range(1, len(terms)):
                    k, gc = terms[idx]
                    nk = tuple(map(add, k, q))
                    v = (h.get(nk, 0) - c * gc) % p
                    if v:
                        h[nk] = v
                    elif nk in h:
                        del h[nk]
                break
        else:
            rem[m] = c
    return rem


def _spoly(a: _Elt, b: _Elt, L, enc, p) -> dict:
    Lk = enc.key(a.pos, L)
    qa = tuple(map(sub, Lk, a.lead))
    qb = tuple(map(sub, Lk, b.lead))
    h = {}
    for k, c in a.terms[1:]:
        h[tuple(map(add, k, qa))] = c
    for k, c in b.terms[1:]:
        nk = tuple(map(add, k, qb))
        v = (h.get(nk, 0) - c) % p
        if v:
            h[nk] = v
        elif nk in h:
            del h[nk]
    return h


def _divides(a, b):
    return all(map(le, a, b))


def _groebner(vecs: Sequence[dict], enc, p, rank1: bool, limits: Limits) -> list:
    """Reduced Groebner basis (list of _Elt, descending leads) of the given encoded vectors."""
    elts: list = []
    active: list = []
    basis = _Basis()
    pairs: list = []

    def insert(d):
        h = _make_elt(d, enc, p)
        hidx = len(elts)
        elts.append(h)
        nonlocal pairs
        # Gebauer-Moeller update
        cand = []
        for g in active:
            eg = elts[g]
            if eg.pos != h.pos:
                continue
            L = tuple(map(max, h.lexps, eg.lexps))
            coprime = rank1 and all(x == 0 or y == 0 for x, y in zip(h.lexps, eg.lexps))
            cand.append((g, L, coprime))
        kept = []
        for idx, (g, L, cop) in enumerate(cand):
            if not cop:
                later = cand[idx + 1:]
                if any(_divides(L2, L) for _, L2, _ in later) or any(_divides(L2, L) for _, L2, _ in kept):
                    continue
            kept.append((g, L, cop))
        new_pairs = [(enc.key(h.pos, L), g, hidx, L) for g, L, cop in kept if not cop]
        filtered = []
        for pr in pairs:
            Lk, i, j, L = pr
            if elts[i].pos == h.pos and _divides(h.lexps, L):
                Li = tuple(map(max, elts[i].lexps, h.lexps))
                Lj = tuple(map(max, elts[j].lexps, h.lexps))
                if Li != L and Lj != L:
                    continue
            filtered.append(pr)
        pairs = filtered + new_pairs
        heapify(pairs)
        if len(pairs) > limits.max_pairs:
            raise ResourceCap(f"pair queue exceeded {limits.max_pairs}")
        survivors = []
        for g in active:
            eg = elts[g]
            if eg.pos == h.pos and _divides(h.lexps, eg.lexps):
                basis.remove(eg)
            else:
                survivors.append(g)
        active[:] = survivors + [hidx]
        basis.add(h)

    for d in sorted((v for v in vecs if v), key=max):
        r = _reduce(dict(d), basis, enc, p, limits)
        if r:
            insert(r)
    while pairs:
        _, i, j, L = heappop(pairs)
        s = _spoly(elts[i], elts[j], L, enc, p)
        r = _reduce(s, basis, enc, p, limits)
        if r:
            insert(r)

    final = [elts[i] for i in active]
    red = _Basis(final)
    out = []
    for g in final:
        tail = _reduce(dict(g.terms[1:]), red, enc, p, limits)
        out.append(_Elt([g.terms[0]] + list(tail.items()), enc))
    out.sort(key=lambda g: g.lead, reverse=True)
    return out


def _check_same(ctx, other_ctx):
    if ctx is not other_ctx and ctx != other_ctx:
        raise CtxMismatch("objects from different rings")


class GroebnerBasis:
    """Reduced, monic Groebner basis of a submodule of R^rank."""

    def __init__(self, ctx: RingCtx, rank: int, module_order: str, elts, enc):
        self.ctx = ctx
        self.rank = rank
        self.order = (ctx.order, module_order)
        self.reduced = True
        self._elts = elts
        self._enc = enc
        self._elements = None
        self._basis = _Basis(elts)

    @property
    def elements(self) -> tuple:
        if self._elements is None:
            self._elements = tuple(self._enc.decode(self.ctx, g.terms, self.rank) for g in self._elts)
        return self._elements

    def __len__(self):
        return len(self._elts)

    def __iter__(self):
        return iter(self.elements)

    def leading_monomials(self) -> list:
        """``[(position, exponents), ...]`` of the basis elements."""
        return [(g.pos, g.lexps) for g in self._elts]

    def reduce(self, v: ModuleVector, limits: Limits = DEFAULT_LIMITS) -> ModuleVector:
        _check_same(self.ctx, v.ctx)
        if v.rank != self.rank:
            raise RankMismatch(f"vector of rank {v.rank}, basis of rank {self.rank}")
        r = _reduce(self._enc.encode(v), self._basis, self._enc, self.ctx.p, limits)
        return self._enc.decode(self.ctx, r.items(), self.rank)

    def contains(self, v: ModuleVector) -> bool:
        _check_same(self.ctx, v.ctx)
        if v.rank != self.rank:
            raise RankMismatch(f"vector of rank {v.rank}, basis of rank {self.rank}")
        return not _reduce(self._enc.encode(v), self._basis, self._enc, self.ctx.p, DEFAULT_LIMITS)

    def is_whole(self) -> bool:
        """True iff the module is all of R^rank."""
        units = {g.pos for g in self._elts if not any(g.lexps)}
        return len(units) == self.rank

    def s_vector(self, i: int, j: int):
        """S-vector of elements i and j, or None when their leads sit in different positions."""
        a, b = self._elts[i], self._elts[j]
        if a.pos != b.pos:
            return None
        L = tuple(map(max, a.lexps, b.lexps))
        s = _spoly(a, b, L, self._enc, self.ctx.p)
        return self._enc.decode(self.ctx, s.items(), self.rank)

    def __repr__(self):
        return f"GroebnerBasis({[str(e) for e in self.elements]})"


def _as_vector(ctx, v, rank=None):
    if isinstance(v, Polynomial):
        v = ModuleVector(ctx, [v])
    if rank is not None and v.rank != rank:
        raise RankMismatch(f"vector of rank {v.rank}, expected {rank}")
    return v


class Submodule:
    """Finitely generated submodule of R^rank given by generators.

    The Groebner basis is computed on first use and cached; the object is
    otherwise immutable.
    """

    __slots__ = ("ctx", "rank", "gens", "_gb")

    def __init__(self, ctx: RingCtx, rank: int, gens: Iterable = (), *, _gb=None):
        out = []
        for g in gens:
            g = _as_vector(ctx, g)
            _check_same(ctx, g.ctx)
            if g.rank != rank:
                raise RankMismatch(f"generator of rank {g.rank} in a rank-{rank} module")
            if not g.is_zero():
                out.append(g)
        self.ctx = ctx
        self.rank = rank
        self.gens = tuple(out)
        self._gb = _gb

    @classmethod
    def ideal(cls, ctx, polys: Iterable) -> "Submodule":
        polys = [ctx.parse(f) if isinstance(f, str) else f for f in polys]
        return cls(ctx, 1, [ModuleVector(ctx, [f]) for f in polys])

    @classmethod
    def from_matrix(cls, A: PolyMatrix) -> "Submodule":
        return cls(A.ctx, A.nrows, A.columns())

    @classmethod
    def free(cls, ctx, rank) -> "Submodule":
        return cls(ctx, rank, [ModuleVector.unit(ctx, rank, i) for i in range(rank)])

    @classmethod
    def zero(cls, ctx, rank) -> "Submodule":
        return cls(ctx, rank, [])

    # Groebner data
    def gb(self, limits: Limits = DEFAULT_LIMITS) -> GroebnerBasis:
        if self._gb is None:
            self._gb = buchberger(self, limits)
        return self._gb

    def canonical(self) -> "Submodule":
        """Same module, generated by its reduced Groebner basis."""
        G = self.gb()
        return Submodule(self.ctx, self.rank, G.elements, _gb=G)

    @property
    def polys(self) -> list:
        if self.rank != 1:
            raise RankMismatch("polys is only defined for ideals")
        return [g.comps[0] for g in self.gens]

    def matrix(self) -> PolyMatrix:
        return PolyMatrix.from_columns(self.ctx, self.rank, self.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def is_whole(self) -> bool:
        return self.gb().is_whole()

    def contains(self, v) -> bool:
        v = _as_vector(self.ctx, v, self.rank)
        if v.is_zero():
            return True
        if not self.gens:
            return False
        return self.gb().contains(v)

    __contains__ = contains

    def issubset(self, other: "Submodule") -> bool:
        _check_same(self.ctx, other.ctx)
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")
        return all(other.contains(g) for g in self.gens)

    def equals(self, other: "Submodule") -> bool:
        return self.issubset(other) and other.issubset(self)

    def __add__(self, other: "Submodule") -> "Submodule":
        _check_same(self.ctx, other.ctx)
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")
        return Submodule(self.ctx, self.rank, self.gens + other.gens)

    def transform(self, U: PolyMatrix) -> "Submodule":
        """Image of the module under the matrix U (acting on column vectors)."""
        if U.ncols != self.rank:
            raise RankMismatch(f"matrix with {U.ncols} columns on a rank-{self.rank} module")
        return Submodule(self.ctx, U.nrows, [U.apply(g) for g in self.gens])

    def scale(self, ideal: "Submodule") -> "Submodule":
        """Product J * W of an ideal with the module."""
        return Submodule(self.ctx, self.rank, [g * f for f in ideal.polys for g in self.gens])

    def frobenius(self, e: int = 1) -> "Submodule":
        return Submodule(self.ctx, self.rank, [g.frobenius(e) for g in self.gens])

    def generator_strings(self) -> list:
        return [str(g) for g in self.gens]

    def __str__(self):
        return "(" + (", ".join(self.generator_strings()) or "0") + ")"

    def __repr__(self):
        return f"Submodule(rank={self.rank}, gens={self.generator_strings()})"


def ideal(ctx: RingCtx, polys: Iterable) -> Submodule:
    return Submodule.ideal(ctx, polys)


def buchberger(W: Submodule, limits: Limits = DEFAULT_LIMITS) -> GroebnerBasis:
    """Reduced Groebner basis of W under the ring's monomial and module order."""
    ctx = W.ctx
    enc = _Encoder(ctx, ctx.module_order)
    elts = _groebner([enc.encode(g) for g in W.gens], enc, ctx.p, W.rank == 1, limits)
    return GroebnerBasis(ctx, W.rank, ctx.module_order, elts, enc)


def normal_form(v: ModuleVector, G: GroebnerBasis) -> ModuleVector:
    return G.reduce(v)


def membership(v, W: Submodule) -> bool:
    return W.contains(v)


def module_equal(W1: Submodule, W2: Submodule) -> bool:
    return W1.equals(W2)


class Lifter:
    """Division with cofactors against the columns of a matrix M.

    Built from a Groebner basis of the graph module generated by the columns
    ``(m_j, e_j)`` of the stacked matrix [M; I] in position-over-term order.
    Basis elements with vanishing upper block generate Syz(M).
    """

    def __init__(self, M: PolyMatrix, limits: Limits = DEFAULT_LIMITS):
        ctx = M.ctx
        self.ctx = ctx
        self.matrix = M
        self.top = M.nrows
        self.k = M.ncols
        enc = _Encoder(ctx, "pot")
        self._enc = enc
        one = ctx.one_monomial
        vecs = []
        for j, col in enumerate(M.columns()):
            d = enc.encode(col)
            d[enc.key(self.top + j, one)] = 1
            vecs.append(d)
        self._elts = _groebner(vecs, enc, ctx.p, False, limits)
        self._basis = _Basis(self._elts)
        self._limits = limits
        self._syz = None

    def lift(self, v: ModuleVector):
        """w with M @ w == v, or None when v is not in the column span."""
        if v.rank != self.top:
            raise RankMismatch(f"vector of rank {v.rank}, matrix has {self.top} rows")
        r = _reduce(self._enc.encode(v), self._basis, self._enc, self.ctx.p, self._limits)
        unkey = self._enc.unkey
        p = self.ctx.p
        comps = [{} for _ in range(self.k)]
        for key, c in r.items():
            pos, exps = unkey(key)
            if pos < self.top:
                return None
            comps[pos - self.top][exps] = (-c) % p
        return ModuleVector(self.ctx, [Polynomial._raw(self.ctx, t) for t in comps])

    def lift_matrix(self, B: PolyMatrix):
        """X with M @ X == B, or None."""
        cols = []
        for col in B.columns():
            w = self.lift(col)
            if w is None:
                return None
            cols.append(w)
        return PolyMatrix.from_columns(self.ctx, self.k, cols)

    @property
    def syzygies(self) -> list:
        if self._syz is None:
            self._syz = [
                self._enc.decode(self.ctx, g.terms, self.k, offset=self.top)
                for g in self._elts if g.pos >= self.top
            ]
        return self._syz

    def syzygy_matrix(self) -> PolyMatrix:
        return PolyMatrix.from_columns(self.ctx, self.k, self.syzygies)


def syzygy_matrix(M: PolyMatrix) -> PolyMatrix:
    """Matrix whose columns generate {w : M w = 0} (a reduced Groebner basis of it)."""
    return Lifter(M).syzygy_matrix()


def intersect(W1: Submodule, W2: Submodule, limits: Limits = DEFAULT_LIMITS) -> Submodule:
    """W1 ∩ W2 via the doubled module generated by (w, w), w in W1, and (w, 0), w in W2."""
    _check_same(W1.ctx, W2.ctx)
    if W1.rank != W2.rank:
        raise RankMismatch(f"rank {W1.rank} vs {W2.rank}")
    ctx, a = W1.ctx, W1.rank
    if not W1.gens or not W2.gens:
        return Submodule.zero(ctx, a)
    enc = _Encoder(ctx, "pot")
    vecs = []
    for g in W1.gens:
        d = enc.encode(g)
        d.update(enc.encode(g, offset=a))
        vecs.append(d)
    for g in W2.gens:
        vecs.append(enc.encode(g))
    elts = _groebner(vecs, enc, ctx.p, False, limits)
    gens = [enc.decode(ctx, g.terms, a, offset=a) for g in elts if g.pos >= a]
    return Submodule(ctx, a, gens)


def intersect_all(mods: Sequence[Submodule]) -> Submodule:
    result = mods[0]
    for W in mods[1:]:
        if result.is_zero():
            break
        if W.is_whole():
            continue
        if result.is_whole():
            result = W
            continue
        result = intersect(result, W)
    return result


def colon(W: Submodule, v, limits: Limits = DEFAULT_LIMITS) -> Submodule:
    """The ideal (W : v) = {r : r v in W}, from syzygies of [gens(W) | v]."""
    ctx = W.ctx
    v = _as_vector(ctx, v, W.rank)
    if W.contains(v):
        return ideal(ctx, [ctx.one()])
    if not W.gens:
        return ideal(ctx, [])
    a = W.rank
    enc = _Encoder(ctx, "pot")
    vecs = [enc.encode(g) for g in W.gens]
    d = enc.encode(v)
    d[enc.key(a, ctx.one_monomial)] = 1
    vecs.append(d)
    elts = _groebner(vecs, enc, ctx.p, False, limits)
    gens = [enc.decode(ctx, g.terms, 1, offset=a) for g in elts if g.pos == a]
    return Submodule(ctx, 1, gens)


def ideal_colon(I: Submodule, c: Polynomial) -> Submodule:
    return colon(I, ModuleVector(I.ctx, [c]))


def ann_cokernel(A) -> Submodule:
    """Annihilator of R^rows / Image A, i.e. the intersection of (Image A : e_i)."""
    W = Submodule.from_matrix(A) if isinstance(A, PolyMatrix) else A
    ctx = W.ctx
    if W.rank == 1:
        return W.canonical()
    cols = [colon(W, ModuleVector.unit(ctx, W.rank, i)) for i in range(W.rank)]
    return intersect_all(cols).canonical()


def quotient_annihilator(big: Submodule, small: Submodule) -> Submodule:
    """Ann(big / small) for small ⊆ big: intersection of (small : g), g generating big."""
    ctx = big.ctx
    cols = [colon(small, g) for g in big.gens]
    if not cols:
        return ideal(ctx, [ctx.one()])
    return intersect_all(cols).canonical()


def ideal_product(I: Submodule, J: Submodule) -> Submodule:
    return Submodule.ideal(I.ctx, [f * g for f in I.polys for g in J.polys])


def ideal_power(I: Submodule, d: int) -> Submodule:
    result = ideal(I.ctx, [I.ctx.one()])
    for _ in range(d):
        result = ideal_product(result, I).canonical()
    return result


def krull_dim(I: Submodule) -> int:
    """dim R/I from the leading-term ideal: largest independent set of variables.

    Returns -1 for the unit ideal.
    """
    if I.rank != 1:
        raise RankMismatch("krull_dim expects an ideal")
    n = I.ctx.n
    leads = [ex for _, ex in I.gb().leading_monomials()] if I.gens else []
    if any(not any(ex) for ex in leads):
        return -1
    supports = [frozenset(i for i, x in enumerate(ex) if x) for ex in leads]
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            S = frozenset(S)
            if not any(sup <= S for sup in supports):
                return size
    return 0


def radical_membership(g: Polynomial, I: Submodule) -> bool:
    """g in sqrt(I), decided by testing 1 in I + (1 - t g) over R[t]."""
    ctx = I.ctx
    t = ctx.fresh_name("t")
    big = ctx.extend(t)
    tv = big.var(t)
    gens = [f.embed(big) for f in I.polys] + [big.one() - tv * g.embed(big)]
    return Submodule.ideal(big, gens).is_whole()
