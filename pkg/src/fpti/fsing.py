"""Test elements, parameter test ideals and HSL numbers of S = R/I.

Every computation here runs on a pair (A, U) from ``homology``: a cokernel
presentation of some Ext^i(R/I, R) together with its Frobenius matrix.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .errors import InvariantViolation, NoTestElement, StabilizationCapExceeded
from .frobenius import DEFAULT_STAR_CAP, fe_root, star_closure_chain
from .groebner import (
    Submodule,
    ann_cokernel,
    ideal,
    ideal_colon,
    ideal_power,
    ideal_product,
    intersect_all,
    krull_dim,
    quotient_annihilator,
)
from .homology import ResolutionData, _as_resolution, ext_module, induced_frobenius_matrix
from .ringcore import PolyMatrix, Polynomial, determinant

RANDOM_ATTEMPTS = 32


@dataclass(frozen=True)
class TestElementCertificate:
    """A nonzerodivisor c of R/I; provenance is "jacobian-minor", "jacobian-combination" or "user-supplied"."""

    __test__ = False  # keep pytest from collecting this class

    c: Polynomial
    provenance: str
    minor_index: tuple | None = None
    seed: int | None = None
    nzd_checked: bool = True


@dataclass(frozen=True, eq=False)
class PtiResult:
    Z: Submodule
    c: TestElementCertificate
    h: int
    star_module: Submodule
    iterations: int


@dataclass(frozen=True, eq=False)
class SandwichResult:
    lower: Submodule
    upper: Submodule
    J: Submodule
    d: int
    pti: PtiResult


@dataclass(frozen=True, eq=False)
class HSLReport:
    """B_0 = R^alpha, B_1, ... with B_{eta} = B_{eta+1}; loci[e-1] = Ann(B_{e-1}/B_e)."""

    j: int
    chain: tuple
    eta: int | None
    loci: tuple
    A: PolyMatrix
    U: PolyMatrix


def codimension(I: Submodule) -> int:
    return I.ctx.n - krull_dim(I)


def is_nonzerodivisor(c: Polynomial, I: Submodule) -> bool:
    """(I : c) == I, i.e. c is a nonzerodivisor on R/I."""
    if c.is_zero():
        return False
    return ideal_colon(I, c).issubset(I)


def _jacobian_minors(I: Submodule, h: int):
    ctx = I.ctx
    polys = I.polys
    jac = [[f.derivative(k) for k in range(ctx.n)] for f in polys]
    for rows in combinations(range(len(polys)), h):
        for cols in combinations(range(ctx.n), h):
            M = PolyMatrix(ctx, [[jac[r][c] for c in cols] for r in rows], ncols=h)
            yield (rows, cols), determinant(M)


def jacobian_test_element(I: Submodule, seed: int = 0, attempts: int = RANDOM_ATTEMPTS) -> TestElementCertificate:
    """A Jacobian minor (or F_p-combination of minors) that is a nonzerodivisor on R/I.

    Assumes I is radical with R/I geometrically reduced; only the
    nonzerodivisor condition is checked.
    """
    ctx = I.ctx
    if I.gens and I.is_whole():
        raise ValueError("the ideal is not proper")
    h = codimension(I)
    if h == 0:
        return TestElementCertificate(ctx.one(), "jacobian-minor", (), None)
    minors = []
    for index, m in _jacobian_minors(I, h):
        if m.is_zero():
            continue
        if is_nonzerodivisor(m, I):
            return TestElementCertificate(m, "jacobian-minor", index, None)
        minors.append(m)
    if not minors:
        raise NoTestElement("every Jacobian minor of the expected size vanishes; supply c")
    rng = random.Random(seed)
    tried = set(minors)
    for _ in range(attempts):
        c = ctx.zero()
        for m in minors:
            c = c + m.scale(rng.randrange(ctx.p))
        if c.is_zero() or c in tried:
            continue
        tried.add(c)
        if is_nonzerodivisor(c, I):
            return TestElementCertificate(c, "jacobian-combination", None, seed)
    raise NoTestElement(f"no Jacobian minor combination passed the nonzerodivisor check in {attempts} attempts")


def certify_test_element(I: Submodule, c: Polynomial) -> TestElementCertificate:
    """Wrap a caller-supplied c after checking it is a nonzerodivisor on R/I."""
    if not is_nonzerodivisor(c, I):
        raise NoTestElement(f"{c} is a zerodivisor on R/I")
    return TestElementCertificate(c, "user-supplied")


def _test_element(I, c, seed):
    if c is None:
        return jacobian_test_element(I, seed=seed)
    if isinstance(c, TestElementCertificate):
        return c
    if isinstance(c, str):
        c = I.ctx.parse(c)
    return certify_test_element(I, c)


def global_pti_cm(I: Submodule, c=None, *, seed: int = 0, cap: int = DEFAULT_STAR_CAP,
                  resolution: ResolutionData | None = None) -> PtiResult:
    """Z = Ann(R^alpha / (Image A + c R^alpha)^{star U}) for Ext^h, h = codim I.

    Localized at any prime in the Cohen-Macaulay locus of R/I this is the
    parameter test ideal.
    """
    cert = _test_element(I, c, seed)
    res = resolution or _as_resolution(I)
    h = codimension(I)
    data = induced_frobenius_matrix(res, h, 1)
    A, U = data.A, data.U
    ctx = I.ctx
    alpha = A.nrows
    V = Submodule.from_matrix(A) + Submodule.free(ctx, alpha).scale(ideal(ctx, [cert.c]))
    chain = star_closure_chain(V, U, 1, cap)
    W = chain[-1]
    Z = ann_cokernel(W)
    return PtiResult(Z, cert, h, W, len(chain) - 1)


def colon_killer_ideal(I, resolution: ResolutionData | None = None) -> Submodule:
    """J = product of Ann Ext^{n-i}(R/I, R) over i < dim R/I."""
    res = resolution or _as_resolution(I)
    ctx = res.ctx
    d = krull_dim(res.ideal)
    J = ideal(ctx, [ctx.one()])
    for i in range(d):
        ext = ext_module(res, ctx.n - i)
        if not ext.is_zero:
            J = ideal_product(J, ann_cokernel(ext.A)).canonical()
    return J


def pti_sandwich(I: Submodule, c=None, *, seed: int = 0, cap: int = DEFAULT_STAR_CAP) -> SandwichResult:
    """lower = J^d Z and upper = Z, with the parameter test ideal between them."""
    res = _as_resolution(I)
    pti = global_pti_cm(I, c, seed=seed, cap=cap, resolution=res)
    J = colon_killer_ideal(I, res)
    d = krull_dim(I)
    Z = pti.Z
    if J.is_whole():
        lower = Z
    else:
        lower = ideal_product(ideal_power(J, d), Z).canonical()
    if not lower.issubset(Z):
        raise InvariantViolation("sandwich lower bound is not inside the upper bound")
    return SandwichResult(lower, Z, J, d, pti)


def hsl_chain(I, j: int, e_max: int = 8) -> HSLReport:
    """Descending chain B_e = Image A_j + I_e(Image U_j^{[p^{e-1}]} ... U_j).

    Computed as B_e = Image A + I_1(U B_{e-1}).  Stops at the first e with
    B_e = B_{e+1} (eta = e); one further step is computed to confirm the
    chain stays put.
    """
    if e_max < 1:
        raise ValueError("e_max must be at least 1")
    res = _as_resolution(I)
    ctx = res.ctx
    data = induced_frobenius_matrix(res, j, 1)
    A, U = data.A, data.U
    image = Submodule.from_matrix(A)
    chain = [Submodule.free(ctx, A.nrows).canonical()]

    def step(B):
        return (image + fe_root(B.transform(U), 1)).canonical()

    eta = None
    for e in range(1, e_max + 1):
        B = step(chain[-1])
        if not B.issubset(chain[-1]):
            raise InvariantViolation(f"B_{e} is not contained in B_{e - 1}")
        stable = B.equals(chain[-1])
        chain.append(B)
        if stable:
            eta = e - 1
            break
    loci = tuple(quotient_annihilator(chain[e - 1], chain[e]) for e in range(1, len(chain)))
    if eta is None:
        partial = HSLReport(j, tuple(chain), None, loci, A, U)
        raise StabilizationCapExceeded(f"chain for j={j} did not stabilize within {e_max} steps", partial)
    if not step(chain[-1]).equals(chain[-1]):
        raise InvariantViolation("HSL chain moved after stabilizing")
    return HSLReport(j, tuple(chain), eta, loci[:eta], A, U)


def hsl_global_bound(I, e_max: int = 8) -> int:
    res = _as_resolution(I)
    return max(hsl_chain(res, j, e_max).eta for j in range(res.ctx.n + 1))


def f_injective_locus(I) -> Submodule:
    """Intersection over j of Ann(R^alpha_j / B_{j,1}); its zero set is the non-F-injective locus."""
    res = _as_resolution(I)
    ctx = res.ctx
    anns = []
    for j in range(ctx.n + 1):
        data = induced_frobenius_matrix(res, j, 1)
        image = Submodule.from_matrix(data.A)
        free = Submodule.free(ctx, data.A.nrows)
        B1 = image + fe_root(free.transform(data.U), 1)
        anns.append(ann_cokernel(B1))
    return intersect_all(anns).canonical()
