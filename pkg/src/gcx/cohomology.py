"""Cohomology groups of the Lie algebra complex and the decomposition verdicts built on them.

Everything lives in the full exterior algebra (ambient dimension ``2^dim``);
subspaces of a single degree are intersections with the span of that degree's
monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import InternalError, NotIntegrableError
from .exterior import Form, LieAlgebra, covector, masks_of_degree, mukai, wedge_all
from .gcs import check_symplectic, holomorphic_coframe
from .grading import (
    Grading,
    d_lambda,
    d_matrix,
    degree_operator,
    dual_lefschetz,
    form_matrix,
    lefschetz,
    split_d,
)
from .scalars import ONE
from .subspace import CohomSpace, Matrix, Subspace, image, kernel, vec_to_dense


def degree_subspace(dim: int, k: int) -> Subspace:
    return Subspace(1 << dim, [(m, {m: ONE}) for m in masks_of_degree(dim, k)] if 0 <= k <= dim else [])


def _apply_space(m: Matrix, s: Subspace) -> Subspace:
    return Subspace.span(m.nrows, (m.apply(v) for v in s.basis))


# ---------------------------------------------------------------------------
# de Rham

@dataclass(frozen=True, eq=False)
class DeRham:
    algebra: LieAlgebra
    degrees: tuple[CohomSpace, ...]
    total: CohomSpace
    dmat: Matrix

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(h.dim for h in self.degrees)

    def closed(self, f: Form) -> bool:
        return self.algebra.d(f).is_zero()

    def classes(self, forms, k: int | None = None) -> Subspace:
        h = self.total if k is None else self.degrees[k]
        return h.classes_span(f.terms for f in forms)

    def is_basis(self, forms, k: int) -> bool:
        forms = list(forms)
        return len(forms) == self.degrees[k].dim and self.classes(forms, k).dim == len(forms)


def derham(algebra: LieAlgebra) -> DeRham:
    dim = algebra.dim
    dm = d_matrix(algebra)
    z = kernel(dm)
    b = image(dm)
    per = []
    for k in range(dim + 1):
        deg = degree_subspace(dim, k)
        per.append(CohomSpace(z.intersect(deg), b.intersect(deg)))
    betti = [h.dim for h in per]
    if betti != betti[::-1]:
        raise InternalError(f"Betti numbers {betti} violate Poincare duality")
    return DeRham(algebra, tuple(per), CohomSpace(z, b), dm)


# ---------------------------------------------------------------------------
# generalized subgroups

@dataclass
class Verdict:
    dims: dict
    pure: bool
    full: bool
    witnesses: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def pure_and_full(self) -> bool:
        return self.pure and self.full


def _sum_verdict(subgroups: dict, total: CohomSpace) -> Verdict:
    """Purity and fullness of a family of subgroups of ``total`` (quotient coordinates)."""
    acc = Subspace.zero(total.dim)
    for s in subgroups.values():
        acc = acc.sum(s)
    pure = acc.dim == sum(s.dim for s in subgroups.values())
    full = acc.dim == total.dim
    witnesses: dict = {}
    if not pure:
        for key, s in subgroups.items():
            rest = Subspace.zero(total.dim)
            for other, t in subgroups.items():
                if other != key:
                    rest = rest.sum(t)
            meet = s.intersect(rest)
            if meet.dim:
                witnesses["not_pure"] = (key, Form(total.lift(vec_to_dense(meet.basis[0], total.dim))))
                break
    if not full:
        for j, r in enumerate(total.rep_basis):
            if not acc.member({j: ONE}):
                witnesses["not_full"] = Form(r)
                break
    return Verdict({k: s.dim for k, s in subgroups.items()}, pure, full, witnesses)


def gh_k(gr: Grading, dr: DeRham, k: int) -> Subspace:
    if abs(k) > gr.n:
        return Subspace.zero(dr.total.dim)
    z = dr.total.cocycles.intersect(gr.piece(k))
    return dr.total.subgroup_image(z)


def gh_subgroups(gr: Grading, dr: DeRham) -> dict[int, Subspace]:
    return {k: gh_k(gr, dr, k) for k in range(gr.n, -gr.n - 1, -1)}


@dataclass(frozen=True, eq=False)
class BottChern:
    per_k: dict[int, CohomSpace]
    images: dict[int, Subspace]

    def dims(self) -> dict[int, int]:
        return {k: h.dim for k, h in self.per_k.items()}

    def surjective(self, total_dim: int) -> bool:
        acc = Subspace.zero(total_dim)
        for s in self.images.values():
            acc = acc.sum(s)
        return acc.dim == total_dim


def _require_integrable(gr: Grading):
    ds = split_d(gr)
    if not ds.integrable:
        raise NotIntegrableError("operation requires an integrable structure (A = 0)")
    return ds


def gh_bc(gr: Grading, dr: DeRham) -> BottChern:
    ds = _require_integrable(gr)
    if "bc" in gr._cache:
        return gr._cache["bc"]
    z = kernel(ds.delta).intersect(kernel(ds.delbar))
    ddb = ds.delta @ ds.delbar
    per, imgs = {}, {}
    for k in range(gr.n, -gr.n - 1, -1):
        u = gr.piece(k)
        zk = z.intersect(u)
        bk = _apply_space(ddb, u)
        per[k] = CohomSpace(zk, bk)
        imgs[k] = dr.total.subgroup_image(zk)
    out = BottChern(per, imgs)
    gr._cache["bc"] = out
    return out


def verdict_gen(gr: Grading, dr: DeRham) -> Verdict:
    subs = gh_subgroups(gr, dr)
    v = _sum_verdict(subs, dr.total)
    ds = split_d(gr)
    v.extra["integrable"] = ds.integrable
    if ds.integrable:
        bc = gh_bc(gr, dr)
        for k, s in subs.items():
            if bc.images[k] != s:
                raise InternalError(f"image of GH_BC^{k} differs from GH^({k})")
        surj = bc.surjective(dr.total.dim)
        v.extra["bc_surjective"] = surj
        v.extra["bc_dims"] = bc.dims()
        if surj != v.full:
            raise InternalError("fullness disagrees with GH_BC surjectivity")
        if v.full and not v.pure:
            raise InternalError("full but not pure for an integrable structure")
    return v


def ddbar_lemma(gr: Grading, dr: DeRham | None = None) -> bool:
    """``im del cap ker delbar = im del delbar = im delbar cap ker del``."""
    ds = _require_integrable(gr)
    ddb = image(ds.delta @ ds.delbar)
    left = image(ds.delta).intersect(kernel(ds.delbar))
    right = image(ds.delbar).intersect(kernel(ds.delta))
    return left == ddb and right == ddb


def bc_injective(gr: Grading, dr: DeRham) -> bool:
    """``ker del cap ker delbar cap im d = im del delbar``."""
    ds = _require_integrable(gr)
    z = kernel(ds.delta).intersect(kernel(ds.delbar))
    return z.intersect(dr.total.coboundaries) == image(ds.delta @ ds.delbar)


# ---------------------------------------------------------------------------
# almost-complex decompositions

def pq_subspace(j_cov: Matrix, p: int, q: int) -> Subspace:
    dim = j_cov.nrows
    hol = [covector(vec_to_dense(v, dim)) for v in holomorphic_coframe(j_cov)]
    anti = [f.conj() for f in hol]
    forms = []
    for a in combinations(hol, p):
        for b in combinations(anti, q):
            forms.append(wedge_all(a + b).terms)
    return Subspace.span(1 << dim, forms)


def hpq(j_cov: Matrix, dr: DeRham, p: int, q: int) -> Subspace:
    n = j_cov.nrows // 2
    h = dr.degrees[p + q] if 0 <= p + q < len(dr.degrees) else None
    if h is None or not (0 <= p <= n and 0 <= q <= n):
        return Subspace.zero(h.dim if h else 0)
    return h.subgroup_image(h.cocycles.intersect(pq_subspace(j_cov, p, q)))


def hpq_table(j_cov: Matrix, dr: DeRham) -> dict[tuple[int, int], int]:
    n = j_cov.nrows // 2
    return {(p, q): hpq(j_cov, dr, p, q).dim for p in range(n + 1) for q in range(n + 1)}


def complex_stage_verdict(j_cov: Matrix, dr: DeRham, k: int) -> Verdict:
    n = j_cov.nrows // 2
    subs = {(p, k - p): hpq(j_cov, dr, p, k - p) for p in range(max(0, k - n), min(n, k) + 1)}
    return _sum_verdict(subs, dr.degrees[k])


def complex_verdicts(j_cov: Matrix, dr: DeRham) -> dict[int, Verdict]:
    return {k: complex_stage_verdict(j_cov, dr, k) for k in range(len(dr.degrees))}


def induced_on_forms(j_cov: Matrix) -> Matrix:
    """``alpha -> alpha(J., J., ...)`` as an algebra automorphism of the exterior algebra."""
    dim = j_cov.nrows
    images = [covector(vec_to_dense(j_cov.cols[i], dim)) for i in range(dim)]

    def act(f: Form) -> Form:
        (m, c), = f.terms.items()
        out = wedge_all(images[i] for i in range(dim) if m >> i & 1)
        return out * c

    return form_matrix(act, dim)


@dataclass(frozen=True)
class JSplit:
    plus: Subspace
    minus: Subspace
    b2: int

    @property
    def direct(self) -> bool:
        return self.plus.intersect(self.minus).dim == 0

    @property
    def spans(self) -> bool:
        return self.plus.sum(self.minus).dim == self.b2


def real_j_split(j_cov: Matrix, dr: DeRham) -> JSplit:
    """Classes in ``H^2`` with a closed ``J``-invariant (resp. anti-invariant) representative."""
    dim = j_cov.nrows
    h2 = dr.degrees[2]
    jm = induced_on_forms(j_cov)
    deg2 = degree_subspace(dim, 2)
    ident = Matrix.identity(1 << dim)
    inv = kernel(jm - ident).intersect(deg2)
    anti = kernel(jm + ident).intersect(deg2)
    return JSplit(
        h2.subgroup_image(h2.cocycles.intersect(inv)),
        h2.subgroup_image(h2.cocycles.intersect(anti)),
        h2.dim,
    )


# ---------------------------------------------------------------------------
# symplectic

@dataclass(frozen=True, eq=False)
class SymplecticOps:
    omega: Form
    L: Matrix
    Lam: Matrix
    d: Matrix
    dLam: Matrix

    def primitive(self) -> Subspace:
        return kernel(self.Lam)

    def sl2_holds(self) -> bool:
        dim = self.L.nrows.bit_length() - 1
        return self.L @ self.Lam - self.Lam @ self.L == degree_operator(dim, -(dim // 2))


def symplectic_ops(omega: Form, algebra: LieAlgebra) -> SymplecticOps:
    dim = algebra.dim
    return SymplecticOps(omega, lefschetz(omega, dim), dual_lefschetz(omega, dim), d_matrix(algebra), d_lambda(algebra, omega))


def _power(m: Matrix, k: int) -> Matrix:
    out = Matrix.identity(m.ncols)
    for _ in range(k):
        out = m @ out
    return out


@dataclass
class SymplecticReport:
    hlc: dict[int, bool]
    brylinski_surjective: dict[int, bool]
    dd_lambda_lemma: bool
    dd_lambda_two_sided: bool
    sh_bc_dims: dict[int, int]
    ph_bc_dims: dict[int, int]
    sh_rs_dims: dict[tuple[int, int], int]
    h_rs_omega_dims: dict[tuple[int, int], int]
    brylinski_decomposition: dict[int, Verdict]
    at_decomposition: dict[int, Verdict]
    sl2: bool

    @property
    def hlc_all(self) -> bool:
        return all(self.hlc.values())

    @property
    def brylinski_all(self) -> bool:
        return all(self.brylinski_surjective.values())

    @property
    def brylinski_pure_and_full(self) -> bool:
        return all(v.pure_and_full for v in self.brylinski_decomposition.values())

    @property
    def equivalence_consistent(self) -> bool:
        flags = {self.hlc_all, self.brylinski_all, self.dd_lambda_lemma, self.brylinski_pure_and_full}
        return len(flags) == 1


def symplectic_suite(omega: Form, algebra: LieAlgebra, dr: DeRham | None = None) -> SymplecticReport:
    check_symplectic(omega, algebra)
    dr = dr or derham(algebra)
    dim, n = algebra.dim, algebra.dim // 2
    ops = symplectic_ops(omega, algebra)
    zd = dr.total.cocycles
    zl = kernel(ops.dLam)
    z = zd.intersect(zl)
    ddl = image(ops.d @ ops.dLam)
    prim = ops.primitive()

    hlc = {}
    for k in range(n + 1):
        src, dst = dr.degrees[n - k], dr.degrees[n + k]
        lk = _power(ops.L, k)
        img = dst.classes_span(lk.apply(r) for r in src.rep_basis)
        hlc[k] = src.dim == dst.dim and img.dim == dst.dim

    bry, sh, ph = {}, {}, {}
    for h in range(dim + 1):
        deg = degree_subspace(dim, h)
        zh = z.intersect(deg)
        bh = ddl.intersect(deg)
        sh[h] = CohomSpace(zh, bh).dim
        zp = zh.intersect(prim)
        ph[h] = CohomSpace(zp, bh.intersect(prim)).dim
        bry[h] = dr.degrees[h].subgroup_image(zh).dim == dr.degrees[h].dim

    injective = z.intersect(dr.total.coboundaries) == ddl
    two_sided = (
        image(ops.d).intersect(zl) == ddl and image(ops.dLam).intersect(zd) == ddl
    )
    if injective != two_sided:
        raise InternalError("dd^Lambda-lemma: injectivity and two-sided forms disagree")

    sh_rs, h_rs, bry_dec, at_dec = {}, {}, {}, {}
    for total in range(dim + 1):
        hk = dr.degrees[total]
        subs_s, subs_h = {}, {}
        for r in range(total // 2 + 1):
            s = total - 2 * r
            if s > n:
                continue
            lr = _power(ops.L, r)
            closed_prim = zd.intersect(prim).intersect(degree_subspace(dim, s))
            subs_s[(r, s)] = hk.classes_span(lr.apply(v) for v in closed_prim.basis)
            lrps = _apply_space(lr, prim.intersect(degree_subspace(dim, s)))
            subs_h[(r, s)] = hk.subgroup_image(zd.intersect(lrps))
            sh_rs[(r, s)] = subs_s[(r, s)].dim
            h_rs[(r, s)] = subs_h[(r, s)].dim
        bry_dec[total] = _sum_verdict(subs_s, hk)
        at_dec[total] = _sum_verdict(subs_h, hk)

    rep = SymplecticReport(hlc, bry, injective, two_sided, sh, ph, sh_rs, h_rs, bry_dec, at_dec, ops.sl2_holds())
    if not rep.sl2:
        raise InternalError("[L, Lambda] is not (k - n) on k-forms")
    return rep


# ---------------------------------------------------------------------------
# Mukai pairing

def mukai_gram(dr: DeRham) -> Matrix:
    reps = [Form(r) for r in dr.total.rep_basis]
    dim = dr.algebra.dim
    return Matrix.from_rows([[mukai(a, b, dim) for b in reps] for a in reps])
