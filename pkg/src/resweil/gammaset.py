"""Finite sets with a Frobenius permutation, and their comparisons.

Every object here lives at one finite stage F_{p^N}: geometric points
are coordinate tuples there, and the group actor is the power map.  A
GammaSet packages a point set with that permutation; since the acting
group is generated by a single element, two GammaSets are isomorphic
exactly when the cycle types of their permutations agree, and an
explicit isomorphism can be assembled orbit by orbit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    AmbientMismatch,
    MissingFiber,
    NotLocalBase,
    NotZeroDimensional,
    PositiveDimensionalFiber,
)
from .exactfield import embed, frobenius, stage_field
from .finalg import AlgebraPresentation, decompose_local
from .multipoly import INFINITE, MPoly, substitute_expand
from .weilres import (
    SEARCH_GUARD,
    RestrictedScheme,
    regroup_point,
    zero_dim_solve,
)


@dataclass(frozen=True)
class GeometricPoint:
    coords: tuple

    def label(self):
        return tuple(x.label() for x in self.coords)

    def __repr__(self):
        return "GeometricPoint%r" % (self.label(),)


@dataclass(frozen=True)
class ProductPoint:
    """One point per base point, aligned with the canonical base order."""

    components: tuple

    def label(self):
        return tuple(c.label() for c in self.components)

    def __repr__(self):
        return "ProductPoint%r" % (self.label(),)


def _arith_frob_point(pt: GeometricPoint) -> GeometricPoint:
    return GeometricPoint(tuple(frobenius(x) for x in pt.coords))


def _power_frob_point(pt: GeometricPoint, e: int) -> GeometricPoint:
    coords = pt.coords
    for _ in range(e):
        coords = tuple(frobenius(x) for x in coords)
    return GeometricPoint(coords)


class GammaSet:
    """A finite set with one permutation whose given period is verified."""

    def __init__(self, elements, perm, period):
        self.elements = tuple(sorted(elements, key=lambda e: e.label()))
        eset = set(self.elements)
        assert len(eset) == len(self.elements), "duplicate elements"
        assert set(perm) == eset, "permutation domain mismatch"
        assert set(perm.values()) == eset, "not a permutation of the set"
        self.perm = dict(perm)
        self.period = period
        current = {e: e for e in self.elements}
        for _ in range(period):
            current = {e: self.perm[v] for e, v in current.items()}
        assert all(current[e] == e for e in self.elements), \
            "permutation period exceeds the ambient bound"

    def __len__(self):
        return len(self.elements)

    def cycle_type(self):
        return tuple(sorted(len(o) for o in self.orbits()))

    def orbits(self):
        seen = set()
        out = []
        for e in self.elements:
            if e in seen:
                continue
            orbit = [e]
            seen.add(e)
            cur = self.perm[e]
            while cur != e:
                orbit.append(cur)
                seen.add(cur)
                cur = self.perm[cur]
            out.append(orbit)
        return out

    def canonical_orbits(self):
        """Orbits anchored at their label-least element, sorted by size then anchor."""
        out = []
        for orbit in self.orbits():
            k = min(range(len(orbit)), key=lambda i: orbit[i].label())
            anchored = orbit[k:] + orbit[:k]
            out.append(tuple(anchored))
        out.sort(key=lambda o: (len(o), o[0].label()))
        return out

    def __repr__(self):
        return "GammaSet(%d elements, cycle type %r)" % (
            len(self.elements), self.cycle_type())


@dataclass
class EquivariantMap:
    source: GammaSet
    target: GammaSet
    mapping: dict

    def is_equivariant(self):
        for x in self.source.elements:
            if self.target.perm[self.mapping[x]] != self.mapping[self.source.perm[x]]:
                return False
        return True

    def is_bijective(self):
        values = set(self.mapping.values())
        return (len(values) == len(self.source.elements)
                and values == set(self.target.elements))

    def check(self):
        if set(self.mapping) != set(self.source.elements):
            return False
        if not all(v in set(self.target.elements) for v in self.mapping.values()):
            return False
        return self.is_equivariant()


# ---------------------------------------------------------------------------
# builders

def pi0_points(field, variables, relations, N, guard=SEARCH_GUARD) -> GammaSet:
    """Component set of a finite presentation at stage N over its field.

    The permutation is the relative power map x -> x^(field order).
    For anything that is not finite over its stage this refuses rather
    than guessing a component count.
    """
    if N % field.degree != 0:
        raise AmbientMismatch(
            "ambient degree %d is no multiple of the base degree %d"
            % (N, field.degree))
    K = stage_field(field.p, N)
    rels = [r for r in relations if not r.is_zero()]
    B = AlgebraPresentation(field, tuple(variables), rels)
    if B.basis_monomials is INFINITE:
        raise NotZeroDimensional(
            "the presentation is not finite over its stage")
    pts = zero_dim_solve(B, K, guard)
    elements = [GeometricPoint(p) for p in pts]
    e = field.degree
    perm = {el: _power_frob_point(el, e) for el in elements}
    return GammaSet(elements, perm, N // e)


def algebra_gamma_set(A: AlgebraPresentation, N, guard=SEARCH_GUARD) -> GammaSet:
    """The geometric point set of the base algebra with its power action."""
    return pi0_points(A.field, A.vars, A.relations, N, guard)


def fiber_presentation(X, s: GeometricPoint, K) -> AlgebraPresentation:
    """Coordinate ring of the fiber of X over one base point, at stage K."""
    yctx = tuple(X.vars)
    svals = {}
    for tv, sv in zip(X.base.vars, s.coords):
        svals[tv] = sv if sv.field == K else embed(sv, K)
    rels = []
    for g in X.relations:
        assign = {tv: MPoly.constant(K, yctx, sv) for tv, sv in svals.items()}
        for yv in X.vars:
            assign[yv] = MPoly.variable(K, yctx, yv)
        rels.append(substitute_expand(g, assign))
    return AlgebraPresentation(K, yctx, [r for r in rels if not r.is_zero()])


def fiber(X, s: GeometricPoint, N, guard=SEARCH_GUARD):
    """Geometric points of X over one base point, as a sorted list.

    This is a plain list: a single fiber is only Frobenius stable when
    its base point is rational, so the group structure is left to the
    assembled product.
    """
    K = stage_field(X.field.p, N)
    B = fiber_presentation(X, s, K)
    if B.basis_monomials is INFINITE:
        raise PositiveDimensionalFiber(
            "the fiber at %r is not a finite point set" % (s,))
    return [GeometricPoint(p) for p in zero_dim_solve(B, K, guard)]


def product_gamma_set(S: GammaSet, fibers: dict, N) -> GammaSet:
    """Tuples over the base points with the twisted permutation.

    A tuple u moves to v with v[sigma(s)] = F(u[s]), where sigma is the
    base permutation and F the coordinatewise p-power map; F carries the
    fiber over s into the fiber over sigma(s), which the constructor
    re-verifies through membership.
    """
    for s in S.elements:
        if s not in fibers:
            raise MissingFiber("no fiber supplied for %r" % (s,))
    ambient = set()
    for s in S.elements:
        for x in s.coords:
            ambient.add(x.field)
        for ptf in fibers[s]:
            for x in ptf.coords:
                ambient.add(x.field)
    if len(ambient) > 1:
        raise AmbientMismatch(
            "points live at different stages: %r" % sorted(
                (f.degree for f in ambient)))
    sindex = {s: i for i, s in enumerate(S.elements)}
    elements = [ProductPoint(c) for c in
                itertools.product(*[fibers[s] for s in S.elements])]
    perm = {}
    for el in elements:
        v = [None] * len(S.elements)
        for i, s in enumerate(S.elements):
            v[sindex[S.perm[s]]] = _arith_frob_point(el.components[i])
        perm[el] = ProductPoint(tuple(v))
    return GammaSet(elements, perm, N)


def gamma_iso(G1: GammaSet, G2: GammaSet):
    """A canonical isomorphism, or None when the cycle types differ.

    For an action generated by one permutation, matching cycle types
    are the whole obstruction; the witness pairs orbits sorted by size
    and anchor label, then walks them in step.
    """
    if G1.cycle_type() != G2.cycle_type():
        return None
    mapping = {}
    for o1, o2 in zip(G1.canonical_orbits(), G2.canonical_orbits()):
        assert len(o1) == len(o2)
        for a, b in zip(o1, o2):
            mapping[a] = b
    em = EquivariantMap(G1, G2, mapping)
    assert em.check() and em.is_bijective()
    return em


def evaluation_map(R: RestrictedScheme, left: GammaSet, S: GammaSet,
                   prod: GammaSet, N) -> EquivariantMap:
    """The coordinate witness from restriction points to fiber tuples.

    A restriction point regroups to algebra-valued coordinates; reading
    those at each base point gives one fiber point per base point.  The
    caller decides what to make of failed bijectivity; equivariance and
    well-definedness are checked here.
    """
    K = stage_field(R.base_field.p, N)
    A = R.algebra
    mapping = {}
    for el in left.elements:
        a = regroup_point(R, el.coords, K)
        comps = []
        for s in S.elements:
            values = {}
            for tv, sv in zip(A.vars, s.coords):
                values[tv] = sv if sv.field == K else embed(sv, K)
            comps.append(GeometricPoint(tuple(c.evaluate(values) for c in a)))
        mapping[el] = ProductPoint(tuple(comps))
    em = EquivariantMap(left, prod, mapping)
    assert em.check(), "evaluation is not a map of Frobenius sets"
    return em


def reduction_map(R: RestrictedScheme, N, guard=SEARCH_GUARD) -> EquivariantMap:
    """Evaluate restriction points at the unique rational base point.

    Needs a local base algebra with rational residue.  The result is
    always an equivariant map; it can fail to be a bijection, which is
    precisely what makes it interesting, so no bijectivity is enforced.
    """
    A = R.algebra
    factors = decompose_local(A)
    if len(factors) != 1 or factors[0].residue_degree != 1:
        raise NotLocalBase(
            "reduction needs a local base with rational residue")
    k = A.field
    K = stage_field(k.p, N)
    left = pi0_points(k, R.vars, R.relations, N, guard)
    (s0_raw,) = zero_dim_solve(A, k, guard)
    s0 = GeometricPoint(tuple(x if x.field == K else embed(x, K)
                              for x in s0_raw))
    target_pts = fiber(R.scheme, s0, N, guard)
    e = k.degree
    tperm = {pt: _power_frob_point(pt, e) for pt in target_pts}
    target = GammaSet(target_pts, tperm, N // e)
    mapping = {}
    values0 = dict(zip(A.vars, s0.coords))
    for el in left.elements:
        a = regroup_point(R, el.coords, K)
        mapping[el] = GeometricPoint(tuple(c.evaluate(values0) for c in a))
    em = EquivariantMap(left, target, mapping)
    assert em.check(), "reduction is not a map of Frobenius sets"
    return em
