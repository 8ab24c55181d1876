"""Finitely presented commutative algebras over a stage, as quotient rings.

An AlgebraPresentation is k[t_1..t_n]/(relations) together with its
reduced Groebner basis and the standard monomial basis of the quotient.
The first basis element is always the monomial 1.  On top of that sit
the structural operations: base extension, splitting into local factors,
binary products, and the Jacobian smoothness certificate for a relative
presentation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _linalg
from .errors import (
    MixedFields,
    NotFinite,
    NotSquareSystem,
    ZeroRing,
)
from .exactfield import UniPoly, roots_in
from .multipoly import (
    INFINITE,
    MPoly,
    buchberger,
    normal_form,
    standard_monomials,
    substitute_expand,
)


class AlgebraPresentation:
    """k[vars]/(relations) with cached Groebner data, immutable once built."""

    def __init__(self, field, variables, relations, step_budget=None):
        self.field = field
        self.vars = tuple(variables)
        rels = []
        for r in relations:
            assert r.vars == self.vars and r.field == field, "relation context mismatch"
            if not r.is_zero():
                rels.append(r)
        self.relations = tuple(rels)
        kwargs = {} if step_budget is None else {"step_budget": step_budget}
        self.groebner = buchberger(list(self.relations), field=field,
                                   variables=self.vars, **kwargs)
        self.basis_monomials = standard_monomials(self.groebner)
        self._mono_index = None
        self._nilradical_dim = None

    # -- basic structure ----------------------------------------------

    @property
    def dimension(self):
        if self.basis_monomials is INFINITE:
            raise NotFinite("quotient by %r is not finite dimensional" % (self.groebner,))
        return len(self.basis_monomials)

    def is_zero_ring(self):
        return self.dimension == 0

    def basis_elements(self):
        """Standard monomials as elements, 1 first."""
        return [MPoly(self.field, self.vars, {m: self.field.one})
                for m in self.basis_monomials]

    def zero(self):
        return MPoly.zero(self.field, self.vars)

    def one(self):
        return MPoly.constant(self.field, self.vars, self.field.one)

    def var(self, name):
        return MPoly.variable(self.field, self.vars, name)

    def nf(self, f: MPoly) -> MPoly:
        return normal_form(f, self.groebner)

    def mul(self, f, g):
        return self.nf(f * g)

    def pow(self, f, e):
        result = self.one()
        base = self.nf(f)
        while e > 0:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- coordinates --------------------------------------------------

    def _index(self):
        if self._mono_index is None:
            self._mono_index = {m: i for i, m in enumerate(self.basis_monomials)}
        return self._mono_index

    def coords(self, f: MPoly):
        """Coordinate vector of nf(f) in the standard monomial basis."""
        d = self.dimension
        idx = self._index()
        vec = [self.field.zero] * d
        for m, c in self.nf(f).terms.items():
            vec[idx[m]] = c
        return vec

    def from_coords(self, vec) -> MPoly:
        terms = {}
        for m, c in zip(self.basis_monomials, vec):
            terms[m] = c
        return MPoly(self.field, self.vars, terms)

    def mult_matrix(self, f: MPoly):
        """Matrix of multiplication by f; columns follow the basis."""
        d = self.dimension
        cols = []
        fn = self.nf(f)
        for m in self.basis_monomials:
            e = MPoly(self.field, self.vars, {m: self.field.one})
            cols.append(self.coords(fn * e))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def frobenius_matrix(self):
        """Matrix of x -> x^q with q the order of the coefficient stage.

        This map is linear over the stage, which is what makes the
        fixed-space splitting below work.
        """
        q = self.field.order
        cols = []
        for m in self.basis_monomials:
            e = MPoly(self.field, self.vars, {m: self.field.one})
            cols.append(self.coords(self.pow(e, q)))
        d = self.dimension
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def nilradical_dimension(self):
        """Dimension of the nilradical, as the kernel of an iterated Frobenius."""
        if self._nilradical_dim is None:
            d = self.dimension
            if d == 0:
                self._nilradical_dim = 0
            else:
                q = self.field.order
                L = 1
                while q ** L < d + 1:
                    L += 1
                F = self.frobenius_matrix()
                M = F
                for _ in range(L - 1):
                    M = _linalg.mat_mul(M, F, self.field)
                self._nilradical_dim = len(_linalg.kernel_basis(M, self.field))
        return self._nilradical_dim

    def is_unit(self, f: MPoly):
        return self.inverse(f) is not None

    def inverse(self, f: MPoly):
        """Multiplicative inverse as a normal form, or None."""
        d = self.dimension
        if d == 0:
            return self.zero()  # zero ring: 1 = 0 and everything inverts
        M = self.mult_matrix(f)
        one = self.coords(self.one())
        sol = _linalg.solve(M, one, self.field)
        if sol is None:
            return None
        g = self.from_coords(sol)
        assert self.mul(f, g) == self.one()
        return g

    def min_poly(self, f: MPoly) -> UniPoly:
        """Monic minimal polynomial of f acting on the quotient."""
        d = self.dimension
        assert d > 0
        powers = [self.coords(self.one())]
        current = self.one()
        fn = self.nf(f)
        for k in range(1, d + 1):
            current = self.mul(current, fn)
            w = self.coords(current)
            mat = [[powers[j][i] for j in range(len(powers))] for i in range(d)]
            sol = _linalg.solve(mat, w, self.field)
            if sol is not None:
                coeffs = [-c for c in sol] + [self.field.one]
                return UniPoly(self.field, coeffs)
            powers.append(w)
        raise AssertionError("no dependency found below the dimension bound")

    def __repr__(self):
        return "AlgebraPresentation(%r, vars=%r, %d relations)" % (
            self.field, self.vars, len(self.relations))


def dimension_and_basis(A: AlgebraPresentation):
    """(dimension, standard monomial basis); raises NotFinite when infinite."""
    return A.dimension, A.basis_elements()


def substitute_in_algebra(A: AlgebraPresentation, f: MPoly, assignment: dict) -> MPoly:
    """Image of f under var -> element substitution, reduced in A."""
    return A.nf(substitute_expand(f, assignment))


def tensor_extend(A: AlgebraPresentation, K) -> AlgebraPresentation:
    """The same presentation read over a larger stage."""
    if K == A.field:
        return A
    if K.p != A.field.p or K.degree % A.field.degree != 0:
        raise MixedFields("cannot extend %r to %r" % (A.field, K))
    rels = [r.map_coefficients(K) for r in A.relations]
    return AlgebraPresentation(K, A.vars, rels)


# ---------------------------------------------------------------------------
# local decomposition

@dataclass
class LocalFactor:
    parent: AlgebraPresentation
    idempotent: MPoly            # normal form in the parent
    presentation: AlgebraPresentation
    residue_degree: int          # over the parent's coefficient stage
    projection: "AlgebraHom"


@dataclass
class AlgebraHom:
    """A k-algebra map given by generator images, validated on request."""

    source: AlgebraPresentation
    target: AlgebraPresentation
    images: dict

    def apply(self, f: MPoly) -> MPoly:
        return self.target.nf(substitute_expand(f, self.images))

    def check(self):
        for r in self.source.relations:
            if not self.apply(r).is_zero():
                return False
        return True


def decompose_local(A: AlgebraPresentation):
    """Split A into local factors via the Frobenius fixed space.

    The q-power map is linear over a stage of order q, its fixed space
    meets the nilradical trivially and has dimension equal to the number
    of local factors.  Any fixed element outside the scalars has a
    squarefree minimal polynomial splitting over the stage, so Lagrange
    interpolation at its roots yields exact orthogonal idempotents; no
    lifting through the nilpotents is needed.  Recurse until each piece
    has a one dimensional fixed space, which certifies it is local.
    """
    if A.dimension == 0:
        raise ZeroRing("the zero ring has no local factors")
    field = A.field
    out = []
    stack = [(A, A.one())]
    while stack:
        B, idem = stack.pop()
        d = B.dimension
        F = B.frobenius_matrix()
        M = [[F[i][j] - (field.one if i == j else field.zero) for j in range(d)]
             for i in range(d)]
        V = _linalg.kernel_basis(M, field)
        assert V, "the fixed space always contains the scalars"
        if len(V) == 1:
            f_res = d - B.nilradical_dimension()
            proj = AlgebraHom(A, B, {v: B.nf(B.var(v)) for v in A.vars})
            out.append(LocalFactor(A, idem, B, f_res, proj))
            continue
        split = None
        for vec in V:
            if any(not c.is_zero() for c in vec[1:]):
                split = B.from_coords(vec)
                break
        assert split is not None
        mu = B.min_poly(split)
        cs = roots_in(mu, field)
        assert len(cs) == mu.degree >= 2, "fixed elements split over the stage"
        eps = []
        for j, cj in enumerate(cs):
            num = B.one()
            den = field.one
            for l, cl in enumerate(cs):
                if l == j:
                    continue
                num = B.mul(num, split - MPoly.constant(field, B.vars, cl))
                den = den * (cj - cl)
            eps.append(num * den.inverse())
        total = B.zero()
        for e in eps:
            total = total + e
        assert B.nf(total) == B.one()
        for j, e in enumerate(eps):
            assert B.mul(e, e) == B.nf(e)
            for l in range(j):
                assert B.mul(e, eps[l]).is_zero()
        for e in eps:
            new_idem = A.nf(idem * e)
            one_minus = A.one() - new_idem
            Bj = AlgebraPresentation(field, A.vars, list(A.relations) + [one_minus])
            stack.append((Bj, new_idem))
    out.sort(key=lambda f: f.idempotent.label())
    total = A.zero()
    for f in out:
        total = total + f.idempotent
    assert A.nf(total) == A.one()
    return out


# ---------------------------------------------------------------------------
# binary products

@dataclass
class ProductAlgebra:
    presentation: AlgebraPresentation
    idempotent_var: str
    left_vars: dict    # original A1 var -> product var
    right_vars: dict
    idempotent_left: MPoly
    idempotent_right: MPoly
    proj_left: AlgebraHom
    proj_right: AlgebraHom


def product_algebra(A1: AlgebraPresentation, A2: AlgebraPresentation) -> ProductAlgebra:
    """Present A1 x A2 with one new idempotent variable splitting 1.

    Variable names survive when the two sets are disjoint, otherwise the
    factor index is appended.  The idempotent variable takes the first
    free name among w, w0, w1, ...
    """
    if A1.field != A2.field:
        raise MixedFields("product factors live over different stages")
    field = A1.field
    collide = set(A1.vars) & set(A2.vars)
    left = {v: (v + "1" if v in collide else v) for v in A1.vars}
    right = {v: (v + "2" if v in collide else v) for v in A2.vars}
    taken = set(left.values()) | set(right.values())
    wname = "w"
    n = 0
    while wname in taken:
        wname = "w%d" % n
        n += 1
    pvars = tuple(left[v] for v in A1.vars) + tuple(right[v] for v in A2.vars) + (wname,)

    def to_prod(f, rename):
        out = {}
        for m, c in f.terms.items():
            mono = [0] * len(pvars)
            for i, e in enumerate(m):
                mono[pvars.index(rename[f.vars[i]])] = e
            out[tuple(mono)] = c
        return MPoly(field, pvars, out)

    w = MPoly.variable(field, pvars, wname)
    one = MPoly.constant(field, pvars, 1)
    rels = [w * w - w]
    for v in A1.vars:
        u = MPoly.variable(field, pvars, left[v])
        rels.append(u * w - u)
    for v in A2.vars:
        u = MPoly.variable(field, pvars, right[v])
        rels.append(u * w)
    for v1 in A1.vars:
        for v2 in A2.vars:
            rels.append(MPoly.variable(field, pvars, left[v1])
                        * MPoly.variable(field, pvars, right[v2]))
    for r in A1.relations:
        c = r.constant_value()
        rels.append(to_prod(r, left) - (one - w) * c)
    for r in A2.relations:
        c = r.constant_value()
        rels.append(to_prod(r, right) - w * c)
    pres = AlgebraPresentation(field, pvars, rels)
    assert pres.dimension == A1.dimension + A2.dimension

    img_left = {left[v]: A1.nf(A1.var(v)) for v in A1.vars}
    img_left.update({right[v]: A1.zero() for v in A2.vars})
    img_left[wname] = A1.one()
    img_right = {left[v]: A2.zero() for v in A1.vars}
    img_right.update({right[v]: A2.nf(A2.var(v)) for v in A2.vars})
    img_right[wname] = A2.zero()
    proj_left = AlgebraHom(pres, A1, img_left)
    proj_right = AlgebraHom(pres, A2, img_right)
    assert proj_left.check() and proj_right.check()
    return ProductAlgebra(
        presentation=pres,
        idempotent_var=wname,
        left_vars=left,
        right_vars=right,
        idempotent_left=pres.nf(w),
        idempotent_right=pres.nf(one - w),
        proj_left=proj_left,
        proj_right=proj_right,
    )


# ---------------------------------------------------------------------------
# relative smoothness certificate

@dataclass
class EtaleCertificate:
    ok: bool
    jacobian_det: MPoly
    inverse: MPoly | None
    obstruction: MPoly | None


def coordinate_ring(X) -> AlgebraPresentation:
    """Total coordinate ring of a relative presentation, over the stage."""
    base = X.base
    allvars = tuple(base.vars) + tuple(X.vars)
    rels = [r.extend_context(allvars) for r in base.relations]
    rels += [r.extend_context(allvars) if r.vars != allvars else r for r in X.relations]
    return AlgebraPresentation(base.field, allvars, rels)


def _poly_det(rows, field, variables):
    n = len(rows)
    if n == 0:
        return MPoly.constant(field, variables, 1)
    if n == 1:
        return rows[0][0]
    acc = MPoly.zero(field, variables)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _poly_det(minor, field, variables)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def etale_check(X) -> EtaleCertificate:
    """Square Jacobian test: the determinant must be a unit of the ring.

    The certificate carries the inverse normal form when it exists and a
    nonzero annihilator of the determinant otherwise.
    """
    if len(X.relations) != len(X.vars):
        raise NotSquareSystem(
            "%d relations against %d scheme variables" % (len(X.relations), len(X.vars)))
    B = coordinate_ring(X)
    d = B.dimension  # raises NotFinite when the quotient is infinite
    allvars = B.vars
    rows = []
    for g in X.relations:
        g = g.extend_context(allvars) if g.vars != allvars else g
        rows.append([g.derivative(y) for y in X.vars])
    det = B.nf(_poly_det(rows, B.field, allvars))
    if d == 0:
        return EtaleCertificate(True, det, B.zero(), None)
    inv = B.inverse(det)
    if inv is not None:
        return EtaleCertificate(True, det, inv, None)
    M = B.mult_matrix(det)
    ker = _linalg.kernel_basis(M, B.field)
    assert ker
    obstruction = B.from_coords(ker[0])
    assert B.mul(det, obstruction).is_zero() and not obstruction.is_zero()
    return EtaleCertificate(False, det, None, obstruction)
