"""Quotient algebra structure: bases, local factors, products, smoothness."""

import itertools
import random
from types import SimpleNamespace

import pytest

from resweil import (
    AlgebraHom,
    AlgebraPresentation,
    MPoly,
    PrimeField,
    UniPoly,
    coordinate_ring,
    decompose_local,
    dimension_and_basis,
    etale_check,
    make_ext_field,
    product_algebra,
    stage_field,
    substitute_in_algebra,
    tensor_extend,
)
from resweil.errors import MixedFields, NotFinite, NotSquareSystem, ZeroRing

F5 = PrimeField(5)
F7 = PrimeField(7)


def alg(field, names, build):
    names = tuple(names)
    gens = [MPoly.variable(field, names, n) for n in names]
    return AlgebraPresentation(field, names, build(*gens))


def oracle_hom_count(A, K):
    """Count algebra maps into K by exhausting variable assignments."""
    count = 0
    for combo in itertools.product(list(K), repeat=len(A.vars)):
        values = dict(zip(A.vars, combo))
        if all(r.map_coefficients(K).evaluate(values).is_zero() for r in A.relations):
            count += 1
    return count


# -- bases and dimensions ----------------------------------------------

def test_dimension_and_basis_examples():
    dual = alg(F5, ["eps"], lambda e: [e * e])
    d, basis = dimension_and_basis(dual)
    assert d == 2
    assert [str(b) for b in basis] == ["1", "eps"]

    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    assert quad.dimension == 2

    pts = alg(F5, ["t"], lambda t: [t * t - t])
    assert pts.dimension == 2


def test_basis_starts_with_one():
    A = alg(F7, ["t", "u"], lambda t, u: [t * t * t - 2, u * u - t])
    assert A.dimension == 6
    assert str(A.basis_elements()[0]) == "1"


def test_not_finite():
    A = alg(F5, ["t", "u"], lambda t, u: [t * u - 1])
    with pytest.raises(NotFinite):
        A.dimension


def test_zero_ring_dimension():
    A = alg(F5, ["t"], lambda t: [t, t - 1])
    assert A.is_zero_ring()
    with pytest.raises(ZeroRing):
        decompose_local(A)


# -- element-level helpers --------------------------------------------

def test_min_poly():
    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    t = quad.var("t")
    assert quad.min_poly(t) == UniPoly.from_ints(F5, [-2, 0, 1])
    dual = alg(F5, ["eps"], lambda e: [e * e])
    assert dual.min_poly(dual.var("eps")) == UniPoly.from_ints(F5, [0, 0, 1])
    assert dual.min_poly(dual.one()) == UniPoly.from_ints(F5, [-1, 1])


def test_inverse_and_units():
    dual = alg(F5, ["eps"], lambda e: [e * e])
    e = dual.var("eps")
    inv = dual.inverse(1 + e)
    assert inv is not None and dual.mul(1 + e, inv) == dual.one()
    assert str(inv) == "4*eps + 1"
    assert dual.inverse(e) is None
    assert not dual.is_unit(dual.zero())


def test_substitute_in_algebra():
    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    ctx = ("t", "y")
    y = MPoly.variable(F5, ctx, "y")
    t = MPoly.variable(F5, ctx, "t")
    img = substitute_in_algebra(quad, y * y + t, {"y": quad.var("t"), "t": quad.one()})
    assert img == MPoly.constant(F5, ("t",), 3)


# -- local decomposition ----------------------------------------------

def test_decompose_dual_numbers():
    dual = alg(F5, ["eps"], lambda e: [e * e])
    (f,) = decompose_local(dual)
    assert f.residue_degree == 1
    assert f.idempotent == dual.one()
    assert f.presentation.dimension == 2
    assert dual.nilradical_dimension() == 1


def test_decompose_two_points():
    pts = alg(F5, ["t"], lambda t: [t * t - t])
    fs = decompose_local(pts)
    assert [f.residue_degree for f in fs] == [1, 1]
    assert sorted(str(f.idempotent) for f in fs) == ["4*t + 1", "t"]
    for f in fs:
        assert f.presentation.dimension == 1


def test_decompose_field_stays_whole():
    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    (f,) = decompose_local(quad)
    assert f.residue_degree == 2
    assert quad.nilradical_dimension() == 0


def test_decompose_mixed_multiplicity():
    A = alg(PrimeField(3), ["t"], lambda t: [t * t * (t - 1)])
    fs = decompose_local(A)
    assert sorted(f.presentation.dimension for f in fs) == [1, 2]
    assert [f.residue_degree for f in fs] == [1, 1]


def test_decompose_idempotent_laws():
    A = alg(F7, ["t"], lambda t: [(t * t - 3) * t * (t - 1) * (t - 1)])
    fs = decompose_local(A)
    assert A.dimension == 5
    assert sum(f.presentation.dimension for f in fs) == 5
    total = A.zero()
    for f in fs:
        assert A.mul(f.idempotent, f.idempotent) == f.idempotent
        total = total + f.idempotent
    assert A.nf(total) == A.one()
    for f, g in itertools.combinations(fs, 2):
        assert A.mul(f.idempotent, g.idempotent).is_zero()


def test_decompose_two_isomorphic_quadratic_factors():
    # (t^2 - 3)(t^2 - 3t + 1) over F_7: both factors irreducible, so the
    # fixed space must separate two copies of the same residue stage.
    A = alg(F7, ["t"], lambda t: [(t * t - 3) * (t * t - 3 * t + 1)])
    fs = decompose_local(A)
    assert [f.residue_degree for f in fs] == [2, 2]


def test_decompose_projections():
    pts = alg(F5, ["t"], lambda t: [t * t - t])
    for f in decompose_local(pts):
        assert f.projection.check()
        img = f.projection.apply(pts.var("t"))
        assert img.is_constant()


def test_hom_counts_add_over_factors():
    cases = [
        alg(F5, ["t"], lambda t: [t * t - 2]),
        alg(F5, ["t"], lambda t: [t * t * (t - 1)]),
        alg(F7, ["t"], lambda t: [(t * t - 3) * t]),
    ]
    for A in cases:
        fs = decompose_local(A)
        for m in (1, 2):
            K = stage_field(A.field.p, m)
            whole = oracle_hom_count(A, K)
            assert whole == sum(oracle_hom_count(f.presentation, K) for f in fs)
            expected = sum(f.residue_degree for f in fs
                           if m % f.residue_degree == 0)
            assert whole == expected


def test_decompose_after_extension():
    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    K = make_ext_field(5, 2)
    fs = decompose_local(tensor_extend(quad, K))
    assert [f.residue_degree for f in fs] == [1, 1]
    total = sum(f.presentation.dimension for f in fs)
    assert total == 2


def test_seeded_random_split_algebras():
    rng = random.Random(1105)
    for _ in range(25):
        p = rng.choice([3, 5, 7])
        F = PrimeField(p)
        roots = rng.sample(range(p), rng.randint(1, 3))
        mults = [rng.randint(1, 2) for _ in roots]
        names = ("t",)
        t = MPoly.variable(F, names, "t")
        rel = MPoly.constant(F, names, 1)
        for r, m in zip(roots, mults):
            rel = rel * (t - r) ** m
        A = AlgebraPresentation(F, names, [rel])
        fs = decompose_local(A)
        assert len(fs) == len(roots)
        assert sorted(f.presentation.dimension for f in fs) == sorted(mults)
        assert all(f.residue_degree == 1 for f in fs)


# -- base extension ----------------------------------------------------

def test_tensor_extend_identity_and_errors():
    dual = alg(F5, ["eps"], lambda e: [e * e])
    assert tensor_extend(dual, F5) is dual
    with pytest.raises(MixedFields):
        tensor_extend(dual, PrimeField(7))
    with pytest.raises(MixedFields):
        tensor_extend(tensor_extend(dual, make_ext_field(5, 2)), make_ext_field(5, 3))


def test_tensor_extend_preserves_dimension():
    A = alg(F5, ["t"], lambda t: [t * t * (t - 1)])
    K = make_ext_field(5, 4)
    assert tensor_extend(A, K).dimension == A.dimension


# -- products ----------------------------------------------------------

def test_product_of_prime_stages():
    P = AlgebraPresentation(F5, (), [])
    prod = product_algebra(P, P)
    assert prod.presentation.vars == ("w",)
    assert prod.presentation.dimension == 2
    w = prod.idempotent_left
    assert prod.presentation.mul(w, w) == w
    assert prod.idempotent_right == prod.presentation.one() - w


def test_product_disjoint_names_survive():
    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    dual = alg(F5, ["eps"], lambda e: [e * e])
    prod = product_algebra(quad, dual)
    assert prod.presentation.vars == ("t", "eps", "w")
    assert prod.presentation.dimension == 4
    assert prod.left_vars == {"t": "t"}
    assert prod.right_vars == {"eps": "eps"}


def test_product_name_collision():
    A = alg(F5, ["t"], lambda t: [t * t - 2])
    B = alg(F5, ["t"], lambda t: [t * t - t])
    prod = product_algebra(A, B)
    assert prod.presentation.vars == ("t1", "t2", "w")
    assert prod.presentation.dimension == 4


def test_product_projections_and_homs():
    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    dual = alg(F5, ["eps"], lambda e: [e * e])
    prod = product_algebra(quad, dual)
    P = prod.presentation
    assert prod.proj_left.check() and prod.proj_right.check()
    # the two idempotent slices have dimensions of the factors
    for e, expect in ((prod.idempotent_left, 2), (prod.idempotent_right, 2)):
        cut = AlgebraPresentation(P.field, P.vars,
                                  list(P.relations) + [P.one() - e])
        assert cut.dimension == expect


def test_product_hom_counts_multiply_points():
    A = alg(F5, ["t"], lambda t: [t * t - t])
    B = alg(F5, ["u"], lambda u: [u * u - 2])
    prod = product_algebra(A, B)
    for m in (1, 2):
        K = stage_field(5, m)
        assert oracle_hom_count(prod.presentation, K) == \
            oracle_hom_count(A, K) + oracle_hom_count(B, K)


def test_product_mixed_fields():
    with pytest.raises(MixedFields):
        product_algebra(AlgebraPresentation(F5, (), []),
                        AlgebraPresentation(F7, (), []))


# -- smoothness certificates ------------------------------------------

def test_etale_certificate_positive():
    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    ctx = ("t", "y")
    y = MPoly.variable(F5, ctx, "y")
    t = MPoly.variable(F5, ctx, "t")
    X = SimpleNamespace(base=quad, vars=("y",), relations=[y * y - t])
    cert = etale_check(X)
    assert cert.ok and cert.obstruction is None
    B = coordinate_ring(X)
    assert B.mul(cert.jacobian_det, cert.inverse) == B.one()


def test_etale_certificate_negative():
    dual = alg(F5, ["eps"], lambda e: [e * e])
    ctx = ("eps", "y")
    y = MPoly.variable(F5, ctx, "y")
    e = MPoly.variable(F5, ctx, "eps")
    X = SimpleNamespace(base=dual, vars=("y",), relations=[y * y - e])
    cert = etale_check(X)
    assert not cert.ok and cert.inverse is None
    B = coordinate_ring(X)
    assert not cert.obstruction.is_zero()
    assert B.mul(cert.jacobian_det, cert.obstruction).is_zero()


def test_etale_not_square():
    dual = alg(F5, ["eps"], lambda e: [e * e])
    e = MPoly.variable(F5, ("eps",), "eps")
    X = SimpleNamespace(base=dual, vars=(), relations=[e])
    with pytest.raises(NotSquareSystem):
        etale_check(X)


def test_etale_not_finite():
    base = AlgebraPresentation(F5, (), [])
    ctx = ("y", "z")
    y = MPoly.variable(F5, ctx, "y")
    z = MPoly.variable(F5, ctx, "z")
    X = SimpleNamespace(base=base, vars=("y", "z"),
                        relations=[y * z - 1, MPoly.zero(F5, ctx)])
    with pytest.raises(NotFinite):
        etale_check(X)


def test_etale_multivariable():
    base = AlgebraPresentation(F7, (), [])
    ctx = ("y0", "y1")
    a = MPoly.variable(F7, ctx, "y0")
    b = MPoly.variable(F7, ctx, "y1")
    X = SimpleNamespace(base=base, vars=ctx,
                        relations=[a * a - 3, b * b * b - a])
    cert = etale_check(X)
    assert cert.ok
    B = coordinate_ring(X)
    assert B.mul(cert.jacobian_det, cert.inverse) == B.one()


def test_coordinate_ring_merges_contexts():
    dual = alg(F5, ["eps"], lambda e: [e * e])
    ctx = ("eps", "y")
    y = MPoly.variable(F5, ctx, "y")
    e = MPoly.variable(F5, ctx, "eps")
    X = SimpleNamespace(base=dual, vars=("y",), relations=[y * y - y - e])
    B = coordinate_ring(X)
    assert B.vars == ("eps", "y")
    assert B.dimension == 4


def test_algebra_hom_check_rejects_nonmap():
    quad = alg(F5, ["t"], lambda t: [t * t - 2])
    bad = AlgebraHom(quad, quad, {"t": quad.one()})
    assert not bad.check()
