"""Bracket powers, Frobenius roots and star-closure.

Over F_p[x_1..x_n] the ring is free over its subring of p^e-th powers with
basis the monomials x^b, 0 <= b_i < p^e, so every vector has a unique
expansion v = sum_b x^b u_b^{[p^e]}.  The root I_e(K) is generated by all
the u_b coming from generators of K.  Because a^p = a on F_p, the
coefficients of u_b are copied unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ExponentOverflow, IterationCap, RankMismatch
from .groebner import Submodule
from .ringcore import ModuleVector, PolyMatrix, Polynomial

DEFAULT_STAR_CAP = 64


@dataclass(frozen=True)
class BracketExponent:
    p: int
    e: int

    def __post_init__(self):
        if self.e < 0:
            raise ValueError("Frobenius exponent must be nonnegative")
        if self.p ** self.e >= 2 ** 31:
            raise ExponentOverflow(f"{self.p}^{self.e} does not fit in 31 bits")

    @property
    def q(self) -> int:
        return self.p ** self.e


def _q(ctx, e) -> int:
    return BracketExponent(ctx.p, e).q


def bracket_power(X, e: int = 1):
    """Entry-wise p^e-th power of a polynomial, vector, matrix or submodule."""
    if isinstance(X, (Polynomial, ModuleVector, PolyMatrix, Submodule)):
        _q(X.ctx, e)
        return X if e == 0 else X.frobenius(e)
    raise TypeError(f"cannot take a bracket power of {type(X).__name__}")


def root_decomposition(v: ModuleVector, q: int) -> dict:
    """``{b: u_b}`` with v = sum_b x^b u_b^{[q]}; b ranges over exponent tuples below q."""
    ctx = v.ctx
    buckets: dict = {}
    for k, f in enumerate(v.comps):
        for m, c in f.coeffs.items():
            b = tuple(x % q for x in m)
            root = tuple(x // q for x in m)
            comps = buckets.get(b)
            if comps is None:
                comps = buckets[b] = [{} for _ in range(v.rank)]
            comps[k][root] = c
    return {
        b: ModuleVector(ctx, [Polynomial._raw(ctx, t) for t in comps])
        for b, comps in sorted(buckets.items())
    }


def fe_root(K: Submodule, e: int = 1) -> Submodule:
    """I_e(K): the smallest submodule L with K inside L^{[p^e]}.  Returned GB-reduced."""
    q = _q(K.ctx, e)
    if e == 0:
        return K
    roots = []
    for g in K.gens:
        roots.extend(root_decomposition(g, q).values())
    return Submodule(K.ctx, K.rank, roots).canonical()


def _check_square(V: Submodule, U: PolyMatrix):
    if U.nrows != V.rank or U.ncols != V.rank:
        raise RankMismatch(f"U is {U.nrows}x{U.ncols} but the module has rank {V.rank}")


def star_closure_chain(V: Submodule, U: PolyMatrix, e: int = 1, cap: int = DEFAULT_STAR_CAP) -> list:
    """Ascending chain V_0 = V, V_{i+1} = V_i + I_e(U V_i), up to its first repeat.

    The last entry is the star-closure.  Raises IterationCap after ``cap``
    steps without stabilizing.
    """
    _check_square(V, U)
    if e < 1:
        raise ValueError("star-closure needs e >= 1")
    current = V.canonical()
    chain = [current]
    for _ in range(cap):
        new = fe_root(current.transform(U), e)
        if new.issubset(current):
            return chain
        current = (current + new).canonical()
        chain.append(current)
    raise IterationCap(f"star-closure did not stabilize within {cap} iterations")


def star_closure(V: Submodule, U: PolyMatrix, e: int = 1, cap: int = DEFAULT_STAR_CAP) -> Submodule:
    """Smallest W containing V with U W inside W^{[p^e]}."""
    return star_closure_chain(V, U, e, cap)[-1]


def is_u_stable(W: Submodule, U: PolyMatrix, e: int = 1) -> bool:
    """Whether U W lies in W^{[p^e]}, decided through the root: I_e(U W) inside W."""
    _check_square(W, U)
    return fe_root(W.transform(U), e).issubset(W)
