"""Naive reference implementations used to cross-check the fast paths.

Nothing here touches the Groebner engine's internals: Frobenius roots are read
off dense numpy coefficient grids, intersections come from row reduction mod
p on truncated coefficient spaces, and Frobenius-power membership goes
through sympy.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

import numpy as np
import sympy

from .errors import BoundsExceeded, RankMismatch
from .frobenius import star_closure
from .groebner import Submodule
from .ringcore import ModuleVector, PolyMatrix, Polynomial, RingCtx, make_ring

DENSE_LIMIT = 1 << 20


@dataclass(frozen=True)
class InstanceSpec:
    p: int
    n: int
    max_degree: int
    ambient_rank: int
    generator_count: int
    seed: int

    def ring(self) -> RingCtx:
        return make_ring(self.p, ["x", "y", "z", "w"][: self.n])


def random_polynomial(ctx: RingCtx, rng: random.Random, max_degree: int, terms: int = 3,
                      homogeneous: int | None = None, min_degree: int = 0) -> Polynomial:
    out = {}
    for _ in range(terms):
        if homogeneous is None:
            d = rng.randint(min(min_degree, max_degree), max_degree)
        else:
            d = homogeneous
        exps = [0] * ctx.n
        for _ in range(d):
            exps[rng.randrange(ctx.n)] += 1
        out[tuple(exps)] = rng.randrange(1, ctx.p)
    return Polynomial(ctx, out)


def random_submodule(spec: InstanceSpec, ctx: RingCtx | None = None, homogeneous: bool = False,
                     rng: random.Random | None = None, min_degree: int = 0) -> Submodule:
    """Random submodule of R^rank with small generators; homogeneous entries share a degree per generator."""
    ctx = ctx or spec.ring()
    rng = rng or random.Random(spec.seed)
    gens = []
    for _ in range(spec.generator_count):
        deg = rng.randint(1, spec.max_degree) if homogeneous else None
        comps = []
        for _ in range(spec.ambient_rank):
            if rng.random() < 0.25 and spec.ambient_rank > 1:
                comps.append(ctx.zero())
            else:
                comps.append(random_polynomial(ctx, rng, spec.max_degree, rng.randint(1, 3), deg, min_degree))
        gens.append(ModuleVector(ctx, comps))
    return Submodule(ctx, spec.ambient_rank, gens)


def _dense(f: Polynomial, shape) -> np.ndarray:
    arr = np.zeros(shape, dtype=np.int64)
    for exps, c in f.coeffs.items():
        arr[exps] = c
    return arr


def dense_fe_root(K: Submodule, e: int = 1) -> Submodule:
    """I_e(K) by slicing each dense coefficient grid along residue classes mod p^e."""
    ctx = K.ctx
    if e == 0:
        return K
    q = ctx.p ** e
    deg = max((f.degree() for g in K.gens for f in g.comps), default=0)
    side = max(deg, 0) + 1
    if side ** ctx.n > DENSE_LIMIT:
        raise BoundsExceeded(f"dense grid of side {side} in {ctx.n} variables is too large")
    shape = (side,) * ctx.n
    roots = []
    for g in K.gens:
        grids = [_dense(f, shape) for f in g.comps]
        for residue in product(range(min(q, side)), repeat=ctx.n):
            window = tuple(slice(r, None, q) for r in residue)
            parts = [grid[window] for grid in grids]
            if not any(part.any() for part in parts):
                continue
            comps = []
            for part in parts:
                terms = {tuple(int(i) for i in idx): int(part[idx]) for idx in zip(*np.nonzero(part))}
                comps.append(Polynomial(ctx, terms))
            roots.append(ModuleVector(ctx, comps))
    return Submodule(ctx, K.rank, roots)


def _monomials_upto(n: int, d: int) -> list:
    return [m for m in product(range(d + 1), repeat=n) if sum(m) <= d]


def rref_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Reduced row echelon form over F_p; zero rows removed."""
    M = M.copy() % p
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if not len(nz):
            continue
        piv = r + nz[0]
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), p - 2, p)) % p
        others = np.nonzero(M[:, c])[0]
        for i in others:
            if i != r:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
    return M[:r]


def brute_intersect(W1: Submodule, W2: Submodule, degree_bound: int) -> Submodule:
    """All elements of W1 ∩ W2 of degree <= degree_bound, from monomial multiples of the generators.

    Exact for homogeneous generators; in general a subset of the intersection.
    """
    if W1.rank != W2.rank:
        raise RankMismatch(f"rank {W1.rank} vs {W2.rank}")
    ctx, a = W1.ctx, W1.rank
    monos = _monomials_upto(ctx.n, degree_bound)
    index = {(pos, m): t for t, (pos, m) in enumerate(product(range(a), monos))}
    dim = len(index)
    if dim * dim > DENSE_LIMIT * 16:
        raise BoundsExceeded(f"coefficient space of dimension {dim} is too large")

    def span(W):
        rows = []
        for g in W.gens:
            gdeg = g.degree()
            for m in monos:
                if sum(m) + gdeg > degree_bound:
                    continue
                row = np.zeros(dim, dtype=np.int64)
                for pos, f in enumerate(g.comps):
                    for exps, c in f.coeffs.items():
                        row[index[(pos, tuple(x + y for x, y in zip(exps, m)))]] = c
                rows.append(row)
        return np.array(rows, dtype=np.int64).reshape(len(rows), dim)

    S1, S2 = span(W1), span(W2)
    if not len(S1) or not len(S2):
        return Submodule.zero(ctx, a)
    top = np.hstack([S1, S1])
    bottom = np.hstack([S2, np.zeros_like(S2)])
    R = rref_mod_p(np.vstack([top, bottom]), ctx.p)
    basis = [row[dim:] for row in R if not row[:dim].any() and row[dim:].any()]
    keys = list(index)
    gens = []
    for row in basis:
        comps = [{} for _ in range(a)]
        for t in np.nonzero(row)[0]:
            pos, m = keys[t]
            comps[pos][m] = int(row[t])
        gens.append(ModuleVector(ctx, [Polynomial(ctx, c) for c in comps]))
    return Submodule(ctx, a, gens)


def nullspace_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {w : M w = 0} over F_p."""
    R = rref_mod_p(M, p)
    cols = M.shape[1]
    pivots = [int(np.nonzero(row)[0][0]) for row in R]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for row, c in zip(R, pivots):
            basis[t, c] = (-row[f]) % p
    return basis


def brute_syzygies(M: PolyMatrix, degree_bound: int) -> list:
    """A basis of the F_p-space of w with M w = 0 and entries of degree <= degree_bound."""
    ctx = M.ctx
    monos = _monomials_upto(ctx.n, degree_bound)
    unknowns = list(product(range(M.ncols), monos))
    out_deg = degree_bound + max((f.degree() for r in M.rows for f in r), default=0)
    out_monos = _monomials_upto(ctx.n, max(out_deg, 0))
    eq_index = {(r, m): t for t, (r, m) in enumerate(product(range(M.nrows), out_monos))}
    if len(unknowns) * len(eq_index) > DENSE_LIMIT * 16:
        raise BoundsExceeded("kernel system is too large")
    system = np.zeros((len(eq_index), len(unknowns)), dtype=np.int64)
    for u, (col, m) in enumerate(unknowns):
        for r in range(M.nrows):
            for exps, c in M[r, col].coeffs.items():
                system[eq_index[(r, tuple(x + y for x, y in zip(exps, m)))], u] += c
    out = []
    for row in nullspace_mod_p(system, ctx.p):
        comps = [{} for _ in range(M.ncols)]
        for u in np.nonzero(row)[0]:
            col, m = unknowns[u]
            comps[col][m] = int(row[u])
        out.append(ModuleVector(ctx, [Polynomial(ctx, c) for c in comps]))
    return out


def _to_sympy(f: Polynomial, symbols):
    expr = sympy.Integer(0)
    for exps, c in f.coeffs.items():
        term = sympy.Integer(c)
        for s, k in zip(symbols, exps):
            term *= s ** k
        expr += term
    return expr


def frobenius_closure_membership(z: Polynomial, I: Submodule, e_max: int) -> bool:
    """True iff z^{p^e} lies in I^{[p^e]} for some 0 <= e <= e_max (sympy Groebner bases)."""
    ctx = I.ctx
    symbols = sympy.symbols(ctx.vars)
    for e in range(e_max + 1):
        q = ctx.p ** e
        zq = _to_sympy(z, symbols) ** q
        gens = [_to_sympy(f, symbols) ** q for f in I.polys]
        if not gens:
            if sympy.Poly(zq, *symbols, modulus=ctx.p).is_zero:
                return True
            continue
        G = sympy.groebner(gens, *symbols, modulus=ctx.p, order="grevlex")
        if G.contains(zq):
            return True
    return False


def sympy_groebner(I: Submodule):
    """Reduced Groebner basis of an ideal as sympy polynomials, for cross-checking."""
    ctx = I.ctx
    symbols = sympy.symbols(ctx.vars)
    order = "grevlex" if ctx.order == "grevlex" else "lex"
    G = sympy.groebner([_to_sympy(f, symbols) for f in I.polys], *symbols, modulus=ctx.p, order=order)
    return G, symbols


def bracket_module(W: Submodule, e: int = 1) -> Submodule:
    """W^{[p^e]} written out generator by generator."""
    ctx = W.ctx
    q = ctx.p ** e
    gens = []
    for g in W.gens:
        comps = [Polynomial(ctx, {tuple(x * q for x in m): c for m, c in f.coeffs.items()}) for f in g.comps]
        gens.append(ModuleVector(ctx, comps))
    return Submodule(ctx, W.rank, gens)


def verify_star_minimality(V: Submodule, U: PolyMatrix, W: Submodule, e: int = 1) -> bool:
    """W contains V, U W lies in W^{[p^e]}, and the star-closure of V lies in W."""
    if V.rank != W.rank or U.nrows != V.rank or U.ncols != V.rank:
        raise RankMismatch("V, U and W must share the ambient rank")
    if not V.issubset(W):
        return False
    if not W.transform(U).issubset(bracket_module(W, e)):
        return False
    return star_closure(V, U, e).issubset(W)
