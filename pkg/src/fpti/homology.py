"""Free resolutions, Ext^i(R/I, R) as cokernels, and their Frobenius matrices.

Matrices act on column vectors.  Ext^i(R/I, R) is the homology of the dual
complex at F_i^*; it is converted to a cokernel Coker A by taking generators
K of ker(d_{i+1}^T), writing im(d_i^T) in K-coordinates, and adjoining the
syzygies of K.

Frobenius is flat over R, so the bracket-powered complex d^{[q]} resolves
R/I^{[q]} and the same construction with K^{[q]} presents Ext^i(R/I^{[q]}, R)
by A^{[q]}.  The surjection R/I^{[q]} -> R/I lifts to a chain map
phi: d^{[q]} -> d, and phi_i^T induces U: Coker A -> Coker A^{[q]}.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvariantViolation, RankMismatch, ResourceCap
from .frobenius import bracket_power, root_decomposition
from .groebner import Lifter, Submodule, ann_cokernel, ideal, intersect_all
from .ringcore import ModuleVector, PolyMatrix, inverse_mod


@dataclass(frozen=True, eq=False)
class ResolutionData:
    """Free resolution ... -> F_2 -> F_1 -> F_0 = R of R/I; d_i maps F_i to F_{i-1}."""

    ideal: Submodule
    differentials: tuple
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def ctx(self):
        return self.ideal.ctx

    @property
    def length(self) -> int:
        return len(self.differentials)

    def rank(self, i: int) -> int:
        if i == 0:
            return 1
        if 1 <= i <= self.length:
            return self.differentials[i - 1].ncols
        return 0

    def differential(self, i: int) -> PolyMatrix:
        return self.differentials[i - 1]

    def lifter(self, i: int) -> Lifter:
        key = ("lifter", i)
        if key not in self._cache:
            self._cache[key] = Lifter(self.differential(i))
        return self._cache[key]

    def check_exact(self) -> bool:
        """d_i d_{i+1} = 0 and Image d_{i+1} = ker d_i, for every i."""
        for i in range(1, self.length):
            d, nxt = self.differential(i), self.differential(i + 1)
            if not (d @ nxt).is_zero():
                return False
            kernel = Submodule(self.ctx, d.ncols, self.lifter(i).syzygies)
            if not kernel.equals(Submodule.from_matrix(nxt)):
                return False
        if self.length:
            return not self.lifter(self.length).syzygies
        return True


def _prune_columns(M: PolyMatrix) -> PolyMatrix:
    """Drop columns lying in the span of the others (one pass gives an irredundant set)."""
    cols = M.columns()
    keep = list(range(len(cols)))
    for j in range(len(cols)):
        others = [cols[k] for k in keep if k != j]
        if others and Submodule(M.ctx, M.nrows, others).contains(cols[j]):
            keep.remove(j)
    return M.select_columns(keep)


def free_resolution(I: Submodule, max_length: int | None = None) -> ResolutionData:
    """Resolve R/I by iterated syzygies, pruning redundant columns at each step."""
    if I.rank != 1:
        raise RankMismatch("free_resolution expects an ideal")
    ctx = I.ctx
    if I.gens and I.is_whole():
        raise ValueError("free_resolution needs a proper ideal")
    cap = max_length if max_length is not None else 2 * ctx.n + 2
    diffs = []
    cache = {}
    if I.gens:
        d = _prune_columns(PolyMatrix.from_columns(ctx, 1, I.gens))
        while True:
            diffs.append(d)
            lifter = Lifter(d)
            cache[("lifter", len(diffs))] = lifter
            S = lifter.syzygy_matrix()
            if S.ncols == 0:
                break
            if len(diffs) >= cap:
                raise ResourceCap(f"resolution longer than {cap}")
            d = _prune_columns(S)
    return ResolutionData(I, tuple(diffs), cache)


def _as_resolution(I) -> ResolutionData:
    return I if isinstance(I, ResolutionData) else free_resolution(I)


@dataclass(frozen=True, eq=False)
class ExtPresentation:
    """Ext^i(R/I, R) = Coker A.

    ``K`` holds generators of ker(d_{i+1}^T) (columns), ``raw`` the presentation
    in those coordinates, and P, Q the mutually inverse maps between Coker raw
    and the pruned Coker A (A = P raw with eliminated columns dropped).
    """

    i: int
    A: PolyMatrix
    K: PolyMatrix
    raw: PolyMatrix
    P: PolyMatrix
    Q: PolyMatrix
    is_zero: bool
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def generators(self) -> PolyMatrix:
        """Elements of F_i^* representing the generators of Coker A."""
        return self.K @ self.Q

    def kernel_lifter(self) -> Lifter:
        if "K" not in self._cache:
            self._cache["K"] = Lifter(self.K)
        return self._cache["K"]


def _zero_ext(ctx, i, K=None) -> ExtPresentation:
    m = K.ncols if K is not None else 0
    K = K if K is not None else PolyMatrix.zeros(ctx, 0, 0)
    return ExtPresentation(
        i, PolyMatrix.identity(ctx, 1), K, PolyMatrix.zeros(ctx, m, 0),
        PolyMatrix.zeros(ctx, 1, m), PolyMatrix.zeros(ctx, m, 1), True,
    )


def _unit_entry(A: PolyMatrix):
    for c in range(A.ncols):
        for r in range(A.nrows):
            a = A[r, c]
            if a.is_constant() and not a.is_zero():
                return r, c, a.constant_value()
    return None


def _prune_units(A: PolyMatrix):
    """Eliminate generators of Coker A killed by a unit entry; returns (A', P, Q)."""
    ctx = A.ctx
    p = ctx.p
    P = PolyMatrix.identity(ctx, A.nrows)
    Q = PolyMatrix.identity(ctx, A.nrows)
    while True:
        hit = _unit_entry(A)
        if hit is None:
            break
        r, c, u = hit
        m = A.nrows
        others = [i for i in range(m) if i != r]
        uinv = inverse_mod(u, p)
        step_rows = []
        for t, i in enumerate(others):
            row = [ctx.zero()] * m
            row[i] = ctx.one()
            row[r] = A[i, c].scale((-uinv) % p)
            step_rows.append(row)
        Pstep = PolyMatrix(ctx, step_rows, ncols=m)
        Qstep = PolyMatrix.from_columns(ctx, m, [ModuleVector.unit(ctx, m, i) for i in others])
        A = (Pstep @ A).select_columns([j for j in range(A.ncols) if j != c])
        P = Pstep @ P
        Q = Q @ Qstep
    nonzero = [j for j in range(A.ncols) if not A.column(j).is_zero()]
    return A.select_columns(nonzero), P, Q


def ext_module(I, i: int) -> ExtPresentation:
    """Full presentation data for Ext^i(R/I, R)."""
    res = _as_resolution(I)
    key = ("ext", i)
    if key in res._cache:
        return res._cache[key]
    ctx = res.ctx
    k = res.length
    if i < 0 or i > k:
        out = _zero_ext(ctx, i)
    else:
        r = res.rank(i)
        if i + 1 > k:
            K = PolyMatrix.identity(ctx, r)
        else:
            K = Lifter(res.differential(i + 1).T).syzygy_matrix()
        if K.ncols == 0:
            out = _zero_ext(ctx, i, K)
        else:
            LK = Lifter(K)
            if i == 0:
                C = PolyMatrix.zeros(ctx, K.ncols, 0)
            else:
                C = LK.lift_matrix(res.differential(i).T)
                if C is None:
                    raise InvariantViolation(f"image of d_{i}^T is not inside ker d_{i + 1}^T")
            raw = C.hstack(LK.syzygy_matrix())
            A, P, Q = _prune_units(raw)
            if A.nrows == 0:
                out = _zero_ext(ctx, i, K)
            else:
                out = ExtPresentation(i, A, K, raw, P, Q, False, {"K": LK})
    res._cache[key] = out
    return out


def ext_presentation(I, i: int) -> PolyMatrix:
    """A with Coker A = Ext^i(R/I, R); the zero module is presented by a 1x1 identity."""
    return ext_module(I, i).A


def chain_map(I, e: int) -> list:
    """phi_0 .. phi_k with phi_0 = 1 and phi_{j-1} d_j^{[q]} = d_j phi_j."""
    res = _as_resolution(I)
    key = ("phi", e)
    if key in res._cache:
        return res._cache[key]
    ctx = res.ctx
    phis = [PolyMatrix.identity(ctx, 1)]
    for j in range(1, res.length + 1):
        target = phis[-1] @ bracket_power(res.differential(j), e)
        phi = res.lifter(j).lift_matrix(target)
        if phi is None:
            raise InvariantViolation(f"chain map does not lift at degree {j}")
        phis.append(phi)
    res._cache[key] = phis
    return phis


@dataclass(frozen=True, eq=False)
class ExtFrobeniusData:
    """Coker A -> Coker A^{[p^e]} given by U, for Ext^i(R/I, R)."""

    i: int
    e: int
    A: PolyMatrix
    U: PolyMatrix
    ext: ExtPresentation

    @property
    def rank(self) -> int:
        return self.A.nrows

    def is_well_defined(self) -> bool:
        image = Submodule.from_matrix(self.U @ self.A)
        return image.issubset(Submodule.from_matrix(bracket_power(self.A, self.e)))


def _lift_through_bracket(v: ModuleVector, LK: Lifter, m: int, e: int, q: int) -> ModuleVector:
    """w with K^{[q]} w = v, using v = sum_b x^b u_b^{[q]} and lifting each u_b through K."""
    ctx = v.ctx
    w = ModuleVector.zero(ctx, m)
    for b, u in root_decomposition(v, q).items():
        wb = LK.lift(u)
        if wb is None:
            raise InvariantViolation("Frobenius image is not inside the bracket-powered kernel")
        w = w + wb.frobenius(e) * ctx.monomial(b)
    return w


def induced_frobenius_matrix(I, i: int, e: int = 1) -> ExtFrobeniusData:
    if e < 1:
        raise ValueError("Frobenius exponent must be at least 1")
    res = _as_resolution(I)
    key = ("U", i, e)
    if key in res._cache:
        return res._cache[key]
    ctx = res.ctx
    ext = ext_module(res, i)
    if ext.is_zero:
        U = PolyMatrix.zeros(ctx, 1, 1)
    else:
        phi = chain_map(res, e)[i]
        K = ext.K
        q = ctx.p ** e
        LK = ext.kernel_lifter()
        phiT = phi.T
        cols = [_lift_through_bracket(phiT @ col, LK, K.ncols, e, q) for col in K.columns()]
        U0 = PolyMatrix.from_columns(ctx, K.ncols, cols)
        U = bracket_power(ext.P, e) @ U0 @ ext.Q
    out = ExtFrobeniusData(i, e, ext.A, U, ext)
    res._cache[key] = out
    return out


def codim(I: Submodule) -> int:
    from .groebner import krull_dim

    return I.ctx.n - krull_dim(I)


def non_cm_locus(I) -> Submodule:
    """Ideal cutting out the points of V(I) where two or more Ext^i(R/I, R) survive."""
    res = _as_resolution(I)
    ctx = res.ctx
    anns = []
    for i in range(ctx.n + 1):
        ext = ext_module(res, i)
        if not ext.is_zero:
            anns.append(ann_cokernel(ext.A))
    sums = [(a + b).canonical() for t, a in enumerate(anns) for b in anns[t + 1:]]
    if not sums:
        return ideal(ctx, [ctx.one()])
    return intersect_all(sums).canonical()
