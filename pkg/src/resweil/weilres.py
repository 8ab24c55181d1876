"""Restriction of scalars along a finite free algebra over its stage.

A scheme presentation is a finite system of equations over a finite
algebra A.  Expanding each unknown y_j against a vector space basis of A
and splitting every equation into basis coordinates yields a system over
the stage itself; its solutions in any extension K correspond to the
original system's solutions with coordinates in A tensor K.  That
coordinate-level dictionary, plus exact point solvers on both sides, is
what this module provides, together with the comparison routines for
products of algebras and principal open coverings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import _linalg
from .errors import (
    EmptyBase,
    MixedFields,
    NotCovering,
    NotFinite,
    NotLocalBase,
    SearchGuardExceeded,
)
from .exactfield import PrimeField, embed, roots_in, stage_field
from .finalg import (
    AlgebraPresentation,
    ProductAlgebra,
    coordinate_ring,
    decompose_local,
    etale_check,
    substitute_in_algebra,
    tensor_extend,
)
from .multipoly import (
    INFINITE,
    MPoly,
    buchberger,
    normal_form,
    rename_context,
    substitute_expand,
)

SEARCH_GUARD = 10 ** 6


class SchemePresentation:
    """Equations in unknowns y over an algebra base, coefficients reduced.

    Relations live in the combined context (base variables, unknowns);
    on construction every coefficient against the unknowns is brought to
    normal form with respect to the base relations, so two presentations
    of the same system compare equal term by term.
    """

    def __init__(self, base: AlgebraPresentation, variables, relations):
        self.base = base
        self.vars = tuple(variables)
        shared = set(self.vars) & set(base.vars)
        assert not shared, "unknowns shadow base variables: %r" % sorted(shared)
        ctx = tuple(base.vars) + self.vars
        self.all_vars = ctx
        ext_gb = [g.extend_context(ctx) for g in base.groebner.polys]
        rels = []
        for r in relations:
            if r.vars != ctx:
                r = r.extend_context(ctx)
            assert r.field == base.field, "relation stage differs from the base"
            rels.append(normal_form(r, ext_gb) if ext_gb else r)
        self.relations = tuple(rels)

    @property
    def field(self):
        return self.base.field

    def __repr__(self):
        return "SchemePresentation(vars=%r, %d relations over %r)" % (
            self.vars, len(self.relations), self.base)


class RestrictedScheme:
    """The coordinate-expanded system over the stage, with its dictionary.

    var_table maps (unknown, basis index) to the flattened coordinate
    name; basis records the algebra basis the expansion used.
    """

    def __init__(self, scheme, algebra, basis, variables, relations, var_table):
        self.scheme = scheme
        self.algebra = algebra
        self.basis = tuple(basis)
        self.vars = tuple(variables)
        self.relations = tuple(relations)
        self.var_table = dict(var_table)
        self.base_field = algebra.field
        self._gb = None

    @property
    def groebner(self):
        if self._gb is None:
            rels = [r for r in self.relations if not r.is_zero()]
            self._gb = buchberger(rels, field=self.base_field, variables=self.vars)
        return self._gb

    def is_empty(self):
        return self.groebner.is_unit_ideal()

    def points(self, K=None, guard=SEARCH_GUARD):
        K = K or self.base_field
        return presentation_points(self.base_field, self.vars, self.relations,
                                   K, guard)

    def __repr__(self):
        return "RestrictedScheme(%d vars, %d relations over %r)" % (
            len(self.vars), len(self.relations), self.base_field)


def _restricted_names(scheme_vars, d, forbidden):
    for sep in ("", "_"):
        names = []
        table = {}
        for sv in scheme_vars:
            for b in range(d):
                name = "%s%s%d" % (sv, sep, b)
                names.append(name)
                table[(sv, b)] = name
        if len(set(names)) == len(names) and not (set(names) & set(forbidden)):
            return names, table
    raise AssertionError("could not pick distinct coordinate names")


def weil_restrict(A: AlgebraPresentation, X: SchemePresentation,
                  basis=None) -> RestrictedScheme:
    """Expand X against a basis of A into a system over the stage.

    Each unknown y becomes d coordinates y0..y(d-1) bound by
    y = sum_b y_b * e_b, and each relation splits into d coordinate
    relations, so the output has exactly (relations * d) entries, zero
    entries included.  By default e_b is the standard monomial basis;
    any other basis of A may be passed to exercise independence of the
    choice.
    """
    assert X.base is A or (X.base.field == A.field and X.base.vars == A.vars
                           and X.base.relations == A.relations), \
        "scheme is presented over a different base"
    d = A.dimension
    if d == 0:
        raise EmptyBase("restriction along the zero ring")
    field = A.field
    if basis is None:
        basis = A.basis_elements()
        inv_change = None
    else:
        basis = [A.nf(b) for b in basis]
        assert len(basis) == d, "basis size differs from the algebra dimension"
        C = [[A.coords(basis[j])[i] for j in range(d)] for i in range(d)]
        inv_change = _linalg.invert(C, field)
        assert inv_change is not None, "the given elements do not form a basis"

    yvars, table = _restricted_names(X.vars, d, A.vars)
    ctx = tuple(A.vars) + tuple(yvars)
    nt = len(A.vars)
    basis_ctx = [b.extend_context(ctx) for b in basis]
    images = {tv: MPoly.variable(field, ctx, tv) for tv in A.vars}
    for sv in X.vars:
        acc = MPoly.zero(field, ctx)
        for b in range(d):
            acc = acc + MPoly.variable(field, ctx, table[(sv, b)]) * basis_ctx[b]
        images[sv] = acc
    ext_gb = [g.extend_context(ctx) for g in A.groebner.polys]
    idx = {m: i for i, m in enumerate(A.basis_monomials)}

    relations = []
    reduced_list = []
    for g in X.relations:
        expanded = substitute_expand(g, images)
        reduced = normal_form(expanded, ext_gb) if ext_gb else expanded
        reduced_list.append(reduced)
        vecs = {}
        for mono, c in reduced.terms.items():
            tpart, ypart = mono[:nt], mono[nt:]
            v = vecs.get(ypart)
            if v is None:
                v = [field.zero] * d
                vecs[ypart] = v
            i = idx[tpart]
            v[i] = v[i] + c
        comps = [dict() for _ in range(d)]
        zmono = (0,) * nt
        for ypart, v in vecs.items():
            u = v if inv_change is None else _linalg.mat_vec(inv_change, v, field)
            for b in range(d):
                if not u[b].is_zero():
                    comps[b][zmono + ypart] = u[b]
        for b in range(d):
            relations.append(MPoly(field, ctx, comps[b]))

    # structural round trip: recombining the coordinate relations along
    # the basis must reproduce each reduced expansion exactly
    for i in range(len(X.relations)):
        acc = MPoly.zero(field, ctx)
        for b in range(d):
            acc = acc + relations[i * d + b] * basis_ctx[b]
        acc = normal_form(acc, ext_gb) if ext_gb else acc
        assert acc == reduced_list[i], "basis recombination failed"

    rels_y = [r.restrict_context(tuple(yvars)) for r in relations]
    return RestrictedScheme(X, A, basis, yvars, rels_y, table)


# ---------------------------------------------------------------------------
# point solvers over the stage

def _point_label(pt):
    return tuple(x.label() for x in pt)


def _alg_point_label(pt):
    return tuple(c.label() for c in pt)


def enumerate_points(field, variables, relations, K, guard=SEARCH_GUARD):
    """All K-solutions by exhaustion, guarded by the search budget.

    Still a dumb scan over every candidate tuple; the relations are
    just flattened to term lists once, with one shared power table per
    candidate, so large stages stay affordable.
    """
    variables = tuple(variables)
    n = len(variables)
    total = K.order ** n
    if total > guard:
        raise SearchGuardExceeded(
            "%d candidate tuples exceed the budget %d" % (total, guard))
    relsK = [r if r.field == K else r.map_coefficients(K) for r in relations]
    maxdeg = [0] * n
    compiled = []
    for r in relsK:
        terms = list(r.terms.items())
        for m, _ in terms:
            for i, e in enumerate(m):
                if e > maxdeg[i]:
                    maxdeg[i] = e
        compiled.append(terms)
    compiled.sort(key=len)
    elems = list(K)
    q = len(elems)
    zero = K.zero
    one = K.one
    # all powers any candidate can need, indexed by element position
    pow_tab = []
    for i in range(n):
        tab = []
        for x in elems:
            row = [one]
            for _ in range(maxdeg[i]):
                row.append(row[-1] * x)
            tab.append(row)
        pow_tab.append(tab)
    out = []
    for idxs in itertools.product(range(q), repeat=n):
        good = True
        for terms in compiled:
            acc = zero
            for m, c in terms:
                t = c
                for i, e in enumerate(m):
                    if e:
                        t = t * pow_tab[i][idxs[i]][e]
                acc = acc + t
            if not acc.is_zero():
                good = False
                break
        if good:
            out.append(tuple(elems[j] for j in idxs))
    out.sort(key=_point_label)
    return out


def zero_dim_solve(B: AlgebraPresentation, K, guard=SEARCH_GUARD):
    """K-points of a finite quotient, in label order.

    Runs on per-variable minimal polynomials when the quotient is
    finite over its stage; otherwise falls back to guarded exhaustion.
    """
    if K.p != B.field.p or K.degree % B.field.degree != 0:
        raise MixedFields("cannot solve over %r from %r" % (K, B.field))
    if B.groebner.is_unit_ideal():
        return []
    if not B.vars:
        return [()]
    if B.basis_monomials is INFINITE:
        return enumerate_points(B.field, B.vars, B.relations, K, guard)
    rootlists = []
    for v in B.vars:
        mu = B.min_poly(B.var(v))
        rootlists.append(roots_in(mu, K))
    total = 1
    for rl in rootlists:
        total *= len(rl)
    if total > guard:
        raise SearchGuardExceeded(
            "%d root combinations exceed the budget %d" % (total, guard))
    if total == 0:
        return []
    relsK = [r.map_coefficients(K) for r in B.relations]
    out = []
    for combo in itertools.product(*rootlists):
        values = dict(zip(B.vars, combo))
        if all(r.evaluate(values).is_zero() for r in relsK):
            out.append(tuple(combo))
    out.sort(key=_point_label)
    return out


def presentation_points(field, variables, relations, K=None, guard=SEARCH_GUARD):
    """K-points of an affine presentation over the stage."""
    K = K or field
    rels = [r for r in relations if not r.is_zero()]
    B = AlgebraPresentation(field, tuple(variables), rels)
    return zero_dim_solve(B, K, guard)


# ---------------------------------------------------------------------------
# algebra-valued points, computed without the restriction

_REL_COORD_CACHE: dict = {}


def _stage_basis(K):
    if K.degree == 1:
        return [K.one]
    return [K.element(tuple(1 if i == l else 0 for i in range(K.degree)))
            for l in range(K.degree)]


def _relative_inverse(K, L):
    key = (K, L)
    cached = _REL_COORD_CACHE.get(key)
    if cached is None:
        PF = PrimeField(L.p)
        f = L.degree // K.degree
        cols = []
        gp = L.one
        for _ in range(f):
            for beta in _stage_basis(K):
                x = embed(beta, L) * gp
                cols.append([PF.from_int(c) for c in x.coeffs])
            gp = gp * L.gen
        n = L.degree
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        inv = _linalg.invert(mat, PF)
        assert inv is not None, "powers of the generator span over the substage"
        cached = _REL_COORD_CACHE.setdefault(key, (PF, inv))
    return cached


def relative_coords(x, K, L):
    """Coordinates of x in the K-basis 1, g, .., g^(f-1) of the stage L."""
    if K == L:
        return [x]
    PF, inv = _relative_inverse(K, L)
    vec = _linalg.mat_vec(inv, [PF.from_int(c) for c in x.coeffs], PF)
    f = L.degree // K.degree
    out = []
    for i in range(f):
        chunk = tuple(vec[i * K.degree + l].coeffs[0] for l in range(K.degree))
        out.append(K.element(chunk))
    return out


def _local_solve(B, M, rhs):
    """Solve M x = rhs over a local quotient; needs a unit determinant.

    In a local ring a matrix with unit determinant always offers a unit
    pivot in the current column, so plain elimination goes through.
    """
    n = len(M)
    rows = [list(M[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = pinv = None
        for r in range(col, n):
            inv = B.inverse(rows[r][col])
            if inv is not None:
                piv, pinv = r, inv
                break
        assert piv is not None, "no unit pivot available"
        rows[col], rows[piv] = rows[piv], rows[col]
        rows[col] = [B.mul(pinv, e) for e in rows[col]]
        for r in range(n):
            if r == col:
                continue
            factor = rows[r][col]
            if factor.is_zero():
                continue
            rows[r] = [a - B.mul(factor, b) for a, b in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


def _newton_lift(X, Bf, dgdy, start):
    """Correct a residue-level solution to an exact one through nilpotents."""
    r = len(X.vars)
    assign_t = {tv: Bf.nf(Bf.var(tv)) for tv in X.base.vars}
    current = list(start)
    for _ in range(64):
        assign = dict(assign_t)
        assign.update(zip(X.vars, current))
        vals = [substitute_in_algebra(Bf, g, assign) for g in X.relations]
        if all(v.is_zero() for v in vals):
            return tuple(current)
        J = [[substitute_in_algebra(Bf, dgdy[i][j], assign) for j in range(r)]
             for i in range(len(X.relations))]
        delta = _local_solve(Bf, J, vals)
        current = [Bf.nf(c - dlt) for c, dlt in zip(current, delta)]
    raise AssertionError("correction loop failed to terminate")


def _algebra_points_smooth(X, AK, guard):
    A = X.base
    K = AK.field
    factors = decompose_local(AK)
    r = len(X.vars)
    dgdy = [[g.derivative(y) for y in X.vars] for g in X.relations]
    per = []
    for f in factors:
        Bf = f.presentation
        Lf = stage_field(K.p, K.degree * f.residue_degree)
        rho_pts = zero_dim_solve(Bf, Lf, guard)
        assert rho_pts, "a local factor always maps onto its residue stage"
        rho = dict(zip(Bf.vars, rho_pts[0]))
        yctx = tuple(X.vars)
        resid = []
        for g in X.relations:
            assign = {tv: MPoly.constant(Lf, yctx, rho[tv]) for tv in A.vars}
            for yv in X.vars:
                assign[yv] = MPoly.variable(Lf, yctx, yv)
            resid.append(substitute_expand(g, assign))
        Bres = AlgebraPresentation(Lf, yctx, [g for g in resid if not g.is_zero()])
        ybars = zero_dim_solve(Bres, Lf, guard)

        fdeg = f.residue_degree
        cols = []
        for m in Bf.basis_monomials:
            e = MPoly(K, Bf.vars, {m: K.one})
            val = (e.evaluate(rho) if Lf == K
                   else e.map_coefficients(Lf).evaluate(rho))
            cols.append(relative_coords(val, K, Lf))
        sect = [[cols[j][i] for j in range(len(cols))] for i in range(fdeg)]

        pts_f = []
        for ybar in ybars:
            start = []
            for val in ybar:
                target = relative_coords(val, K, Lf)
                sol = _linalg.solve(sect, target, K)
                assert sol is not None, "residue map is onto"
                start.append(Bf.from_coords(sol))
            pts_f.append(_newton_lift(X, Bf, dgdy, start))
        per.append(pts_f)

    out = []
    for combo in itertools.product(*per):
        point = []
        for j in range(r):
            acc = AK.zero()
            for f, pts in zip(factors, combo):
                acc = acc + f.idempotent * pts[j]
            point.append(AK.nf(acc))
        out.append(tuple(point))
    tassign = {tv: AK.nf(AK.var(tv)) for tv in A.vars}
    for pt in out:
        assign = dict(tassign)
        assign.update(zip(X.vars, pt))
        for g in X.relations:
            assert substitute_in_algebra(AK, g, assign).is_zero()
    out.sort(key=_alg_point_label)
    return out


def _algebra_points_bruteforce(X, AK, guard):
    A = X.base
    K = AK.field
    d = AK.dimension
    r = len(X.vars)
    total = K.order ** (d * r)
    if total > guard:
        raise SearchGuardExceeded(
            "%d algebra tuples exceed the budget %d" % (total, guard))
    elements = [AK.from_coords(list(c)) for c in itertools.product(list(K), repeat=d)]
    tassign = {tv: AK.nf(AK.var(tv)) for tv in A.vars}
    out = []
    for combo in itertools.product(elements, repeat=r):
        assign = dict(tassign)
        assign.update(zip(X.vars, combo))
        if all(substitute_in_algebra(AK, g, assign).is_zero() for g in X.relations):
            out.append(tuple(combo))
    out.sort(key=_alg_point_label)
    return out


def algebra_points(X: SchemePresentation, K=None, guard=SEARCH_GUARD):
    """Solutions of X with coordinates in (base algebra) tensor K.

    For a square system that is smooth over the extended base this runs
    factor by local factor: solve at residue level, correct through the
    nilpotents, recombine along the idempotents.  Anything else falls
    back to guarded exhaustion.  Each point is a tuple of reduced
    algebra elements, in label order.
    """
    A = X.base
    if A.dimension == 0:
        raise EmptyBase("points valued in the zero ring")
    K = K or A.field
    AK = tensor_extend(A, K)
    if not X.vars:
        tassign = {tv: AK.nf(AK.var(tv)) for tv in A.vars}
        ok = all(substitute_in_algebra(AK, g, tassign).is_zero()
                 for g in X.relations)
        return [()] if ok else []
    if len(X.relations) == len(X.vars):
        try:
            rels = (X.relations if K == A.field
                    else [g.map_coefficients(K) for g in X.relations])
            cert = etale_check(SchemePresentation(AK, X.vars, rels))
        except NotFinite:
            cert = None
        if cert is not None and cert.ok:
            return _algebra_points_smooth(X, AK, guard)
    return _algebra_points_bruteforce(X, AK, guard)


# ---------------------------------------------------------------------------
# the coordinate dictionary and its certificates

def regroup_point(R: RestrictedScheme, values, K=None):
    """Repackage restriction coordinates as algebra-valued coordinates."""
    A = R.algebra
    if K is None:
        K = values[0].field if values else A.field
    AK = tensor_extend(A, K)
    basis = [b if K == A.field else b.map_coefficients(K) for b in R.basis]
    vmap = dict(zip(R.vars, values))
    out = []
    for sv in R.scheme.vars:
        acc = AK.zero()
        for b in range(len(basis)):
            acc = acc + basis[b] * vmap[R.var_table[(sv, b)]]
        out.append(AK.nf(acc))
    return tuple(out)


@dataclass
class AdjunctionCertificate:
    ok: bool
    left_points: list
    right_points: list
    pairs: list


def adjunction_check(R: RestrictedScheme, K=None,
                     guard=SEARCH_GUARD) -> AdjunctionCertificate:
    """Certify that regrouping is a bijection onto the algebra points."""
    A = R.algebra
    K = K or A.field
    left = R.points(K, guard)
    right = algebra_points(R.scheme, K, guard)
    pairs = [(pt, regroup_point(R, pt, K)) for pt in left]
    mapped = sorted(_alg_point_label(q) for _, q in pairs)
    expected = [_alg_point_label(q) for q in right]
    ok = mapped == expected and len(set(mapped)) == len(mapped)
    return AdjunctionCertificate(ok, left, right, pairs)


@dataclass
class ProductFormulaCertificate:
    ok: bool
    ideal_match: bool
    counts: list  # (stage degree, product count, left count, right count)


def _base_change(X, proj):
    target = proj.target
    shared = set(target.vars) & set(X.vars)
    assert not shared, "cannot base change, unknowns collide: %r" % sorted(shared)
    ctx = tuple(target.vars) + tuple(X.vars)
    assign = {pv: proj.images[pv].extend_context(ctx) for pv in proj.source.vars}
    for yv in X.vars:
        assign[yv] = MPoly.variable(target.field, ctx, yv)
    rels = [substitute_expand(g, assign) for g in X.relations]
    return SchemePresentation(target, X.vars, rels)


def product_formula_check(prod: ProductAlgebra, X: SchemePresentation,
                          stages=(1, 2, 3),
                          guard=SEARCH_GUARD) -> ProductFormulaCertificate:
    """Restriction along a product against the product of restrictions.

    Expanding against the basis adapted to the idempotent splits the
    coordinate system into two independent blocks; the certificate
    demands literal equality of reduced Groebner data between that
    system and the juxtaposition of the factor restrictions, and point
    count multiplicativity over the requested stages.
    """
    P = prod.presentation
    assert X.base is P or (X.base.vars == P.vars
                           and X.base.relations == P.relations), \
        "scheme is not presented over the product"
    A1 = prod.proj_left.target
    A2 = prod.proj_right.target
    field = P.field
    w = MPoly.variable(field, P.vars, prod.idempotent_var)
    one = MPoly.constant(field, P.vars, 1)
    lifted = [P.nf(w * rename_context(m, prod.left_vars, P.vars))
              for m in A1.basis_elements()]
    lifted += [P.nf((one - w) * rename_context(m, prod.right_vars, P.vars))
               for m in A2.basis_elements()]
    RP = weil_restrict(P, X, basis=lifted)
    X1 = _base_change(X, prod.proj_left)
    X2 = _base_change(X, prod.proj_right)
    R1 = weil_restrict(A1, X1)
    R2 = weil_restrict(A2, X2)

    d1 = A1.dimension
    lmap = {}
    rmap = {}
    for sv in X.vars:
        for b in range(d1):
            lmap[R1.var_table[(sv, b)]] = RP.var_table[(sv, b)]
        for b in range(A2.dimension):
            rmap[R2.var_table[(sv, b)]] = RP.var_table[(sv, d1 + b)]
    juxta = [rename_context(r, lmap, RP.vars)
             for r in R1.relations if not r.is_zero()]
    juxta += [rename_context(r, rmap, RP.vars)
              for r in R2.relations if not r.is_zero()]
    gb_j = buchberger(juxta, field=field, variables=RP.vars)
    ideal_match = RP.groebner.polys == gb_j.polys

    ok = ideal_match
    counts = []
    for m in stages:
        K = stage_field(field.p, m)
        nP = len(RP.points(K, guard))
        n1 = len(R1.points(K, guard))
        n2 = len(R2.points(K, guard))
        counts.append((m, nP, n1, n2))
        ok = ok and nP == n1 * n2
    return ProductFormulaCertificate(ok, ideal_match, counts)


@dataclass
class CoverCertificate:
    ok: bool
    unit_ideal: bool
    per_stage: list


def open_cover_check(X: SchemePresentation, hs, stages=(1, 2),
                     guard=SEARCH_GUARD) -> CoverCertificate:
    """Principal opens covering X induce a matching cover downstairs.

    Requires a local base with rational residue.  For each h the scheme
    where h is inverted is restricted separately; its points must land
    bijectively on the restriction points whose regrouped coordinates
    make h a unit, and every point must be caught by some h.
    """
    A = X.base
    if A.dimension == 0:
        raise EmptyBase("covering over the zero ring")
    factors = decompose_local(A)
    if len(factors) != 1 or factors[0].residue_degree != 1:
        raise NotLocalBase(
            "the covering comparison needs a local base with rational residue")
    B = coordinate_ring(X)
    ctx = B.vars
    hs = [h if h.vars == ctx else h.extend_context(ctx) for h in hs]
    probe = AlgebraPresentation(A.field, ctx, list(B.relations) + list(hs))
    if not probe.groebner.is_unit_ideal():
        raise NotCovering("the given elements do not generate the unit ideal")

    R = weil_restrict(A, X)
    zname = "z"
    n = 0
    while zname in set(A.vars) | set(X.vars):
        zname = "z%d" % n
        n += 1
    charts = []
    xz = tuple(X.vars) + (zname,)
    cctx = tuple(A.vars) + xz
    z = MPoly.variable(A.field, cctx, zname)
    for h in hs:
        rels = [g.extend_context(cctx) for g in X.relations]
        rels.append(z * h.extend_context(cctx) - 1)
        charts.append(SchemePresentation(A, xz, rels))

    ok = True
    per_stage = []
    for m in stages:
        K = stage_field(A.field.p, m)
        AK = tensor_extend(A, K)
        pts = R.points(K, guard)
        tassign = {tv: AK.nf(AK.var(tv)) for tv in A.vars}
        unit_sets = []
        for h in hs:
            sel = set()
            for pt in pts:
                a = regroup_point(R, pt, K)
                assign = dict(tassign)
                assign.update(zip(R.scheme.vars, a))
                if AK.is_unit(substitute_in_algebra(AK, h, assign)):
                    sel.add(pt)
            unit_sets.append(sel)
        stage_ok = all(any(pt in sel for sel in unit_sets) for pt in pts)
        chart_counts = []
        for chart, sel in zip(charts, unit_sets):
            Rh = weil_restrict(A, chart)
            hpts = Rh.points(K, guard)
            keep = [Rh.vars.index(v) for v in R.vars]
            proj = {tuple(q[i] for i in keep) for q in hpts}
            stage_ok = stage_ok and len(hpts) == len(proj) and proj == sel
            chart_counts.append(len(hpts))
        per_stage.append({"stage": m, "points": len(pts),
                          "unit_counts": [len(s) for s in unit_sets],
                          "chart_counts": chart_counts})
        ok = ok and stage_ok
    return CoverCertificate(ok, True, per_stage)
