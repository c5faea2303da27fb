#!/usr/bin/env python3
"""
Tests for the dual Steenrod algebra, catalog comodules, Q_m, σ, φ_n and J_n.
"""

from tateforge.algebra import derivation_matrix, multiply
from tateforge.exceptions import UnsupportedId, UnsupportedModel
from tateforge.f2linalg import rank, unit_vector
from tateforge.steenrod import (
    SpaceKind,
    TensorElement,
    catalog,
    comodule_primitives,
    coproduct_xi,
    dual_steenrod_algebra,
    hf2_model,
    jn_span,
    leibniz_q_derivation,
    parse_space_id,
    phi_map,
    phi_matrix,
    q_action,
    q_degree,
    sigma,
    sigma_matrix,
    tensor_multiply,
    xi_count,
)


def comodule(text, N):
    return catalog(parse_space_id(text), N)


def gen_element(c, **powers):
    return c.algebra.element(c.algebra.monomial(**powers))


def test_coproduct_xi():
    N = 7
    A = dual_steenrod_algebra(max(2, xi_count(N)))
    one = A.unit()
    assert coproduct_xi(0, N).terms == frozenset({(one, one)})
    assert coproduct_xi(1, N).terms == frozenset({(A.gen("xi1"), one), (one, A.gen("xi1"))})
    assert coproduct_xi(2, N).terms == frozenset(
        {(A.gen("xi2"), one), (A.gen("xi1"), A.gen("xi1", 2)), (one, A.gen("xi2"))}
    )


def test_q_action_on_dual_steenrod():
    c = comodule("a", 8)
    one = c.algebra.one()
    assert q_action(0, gen_element(c, xi1=1), c) == one
    assert q_action(1, gen_element(c, xi2=1), c) == one
    assert q_action(1, gen_element(c, xi1=1), c).is_zero()
    assert q_action(0, gen_element(c, xi2=1), c) == gen_element(c, xi1=2)
    assert q_action(0, gen_element(c, xi1=2), c).is_zero()


def test_q_action_exotic_pair():
    c = comodule("thhy1", 8)
    assert c.has_exotic_rules
    x = gen_element(c, xi1=3, sxi1=1)
    assert q_action(1, x, c) == gen_element(c, xi1=2)
    y = gen_element(c, xi1=1, sxi1=1)
    assert q_action(0, y, c) == gen_element(c, sxi1=1) + gen_element(c, xi1=2)


CATALOG = ("a", "hz", "y1", "y2", "z1", "z2", "zmodv1", "zmodv2", "thhhf2", "thhy1", "thhy2")


def assert_q_squares_to_zero(c, ms):
    for m in ms:
        q = q_degree(m)
        for d in range(2 * q, c.max_degree + 1):
            assert c.q_matrix(m, d - q).matmul(c.q_matrix(m, d)).is_zero(), (c.name, m, d)


def test_q_squares_to_zero():
    for text in CATALOG:
        assert_q_squares_to_zero(comodule(text, 14), range(5))


def psi_monomial(mono, A, N):
    result = TensorElement.of([(A.unit(), A.unit())])
    for g, e in enumerate(mono):
        for _ in range(e):
            result = tensor_multiply(result, coproduct_xi(g + 1, N), A, A)
    return result


def test_coproduct_coassociative():
    N = 15
    A = dual_steenrod_algebra(xi_count(N))
    for k in range(1, 5):
        left, right = set(), set()
        for l, r in coproduct_xi(k, N).terms:
            for a, b in psi_monomial(l, A, N).terms:
                left ^= {(a, b, r)}
            for b, c in psi_monomial(r, A, N).terms:
                right ^= {(l, b, c)}
        assert left == right, k
        assert len(left) == (k + 1) * (k + 2) // 2, k


def test_q_action_leibniz_on_products():
    for text in ("a", "y2", "zmodv1", "thhhf2"):
        c = comodule(text, 10)
        alg = c.algebra
        for m in (0, 1, 2):
            for d1 in range(1, 6):
                for d2 in range(d1, 11 - d1):
                    for x in c.basis.monomials(d1):
                        for y in c.basis.monomials(d2):
                            X, Y = alg.element(x), alg.element(y)
                            product = q_action(m, multiply(X, Y, alg), c)
                            expanded = multiply(q_action(m, X, c), Y, alg) + multiply(X, q_action(m, Y, c), alg)
                            assert product.terms == expanded.terms, (text, m, x, y)


def test_leibniz_derivation_matches_coaction():
    c = comodule("y2", 12)
    for m in (0, 1):
        D = leibniz_q_derivation(m, c)
        for d in range(q_degree(m), 13):
            assert derivation_matrix(D, d, c.basis).to_dense().tolist() == c.q_matrix(m, d).to_dense().tolist()
    try:
        leibniz_q_derivation(0, comodule("thhy1", 8))
    except UnsupportedModel:
        pass
    else:
        raise AssertionError("exotic coactions are not derivations")


def test_sigma_examples():
    thh = comodule("thhy1", 8)
    assert sigma(gen_element(thh, xi1=1, sxi1=1), thh).is_zero()
    assert sigma(gen_element(thh, xi1=1), thh) == gen_element(thh, sxi1=1)

    hf2 = hf2_model(1, 10)
    assert sigma(gen_element(hf2, xi1=1, u=1), hf2) == gen_element(hf2, u=2)
    assert sigma(gen_element(hf2, xi2=1), hf2) == gen_element(hf2, u=2)
    for d in range(0, 9):
        assert sigma_matrix(hf2, d + 1).matmul(sigma_matrix(hf2, d)).is_zero()


def test_sigma_undefined_on_plain_comodules():
    try:
        sigma(comodule("y1", 8).algebra.one(), comodule("y1", 8))
    except UnsupportedModel:
        pass
    else:
        raise AssertionError("σ needs a THH model")


def test_phi_examples():
    N = 10
    source = comodule("thhy1", N)
    target = hf2_model(1, N)
    assert phi_map(1, gen_element(source, xi1=1), source, target) == gen_element(target, xi1=1)
    assert phi_map(1, gen_element(source, sxi1=1), source, target) == gen_element(target, u=1)
    assert phi_map(1, gen_element(source, xi1=1, sxi1=1), source, target) == (
        gen_element(target, xi1=1, u=1) + gen_element(target, xi2=1)
    )


def test_phi_injective_and_sigma_equivariant():
    for n, N in ((1, 12), (2, 10)):
        source = comodule(f"thhy{n}", N)
        target = hf2_model(n, N)
        for d in range(N + 1):
            assert rank(phi_matrix(n, d, source, target)) == source.dim(d), (n, d)
        for d in range(N):
            for mono in source.basis.monomials(d):
                x = source.algebra.element(mono)
                left = sigma(phi_map(n, x, source, target), target)
                right = phi_map(n, sigma(x, source), source, target)
                assert left == right, (n, mono)


def test_jn_first_degree():
    N = 8
    source = comodule("thhy1", N)
    target = hf2_model(1, N)
    for d in range(6):
        assert jn_span(1, d, N, source, target).dim == 0, d
    j6 = jn_span(1, 6, N, source, target)
    assert j6.dim >= 1
    idx = target.basis.index_of(target.algebra.gen("xi2", 2))
    assert j6.contains(unit_vector(target.basis.dim(6), idx))


def test_primitives():
    a = comodule_primitives(comodule("a", 7), 0, 7)
    assert a[0].dim == 1
    assert all(a[d].dim == 0 for d in range(1, 8))

    thh = comodule_primitives(comodule("thhy1", 6), 0, 6)
    assert thh[1].dim == 0
    assert thh[2].dim == 1
    assert thh[3].dim == 0


def test_parse_space_id():
    y2 = parse_space_id("y2")
    assert (y2.kind, y2.n, y2.i) == (SpaceKind.Y, 2, None)
    tp = parse_space_id("TP1_-3")
    assert (tp.kind, tp.n, tp.i) == (SpaceKind.TP_MODEL, 1, -3)
    assert tp.is_page_model
    assert parse_space_id("thhhf2").kind == SpaceKind.THH_HF2
    for bad in ("q3", "sphere2", "z0", "thhy1_2", "tcminus1_-1", "tp2", "y"):
        try:
            parse_space_id(bad)
        except UnsupportedId:
            continue
        raise AssertionError(f"{bad} was accepted")


def test_catalog_dims():
    assert comodule("sphere", 8).dim(0) == 1
    assert comodule("sphere", 8).dim(3) == 0
    hz = comodule("hz", 8)
    assert [hz.dim(d) for d in range(9)] == [1, 0, 1, 1, 1, 1, 2, 2, 2]
    zv = comodule("zmodv1", 8)
    assert [zv.dim(d) for d in range(9)] == [1, 0, 1, 1, 1, 1, 1, 1, 1]


TESTS = [
    test_coproduct_xi,
    test_q_action_on_dual_steenrod,
    test_q_action_exotic_pair,
    test_q_squares_to_zero,
    test_coproduct_coassociative,
    test_q_action_leibniz_on_products,
    test_leibniz_derivation_matches_coaction,
    test_sigma_examples,
    test_sigma_undefined_on_plain_comodules,
    test_phi_examples,
    test_phi_injective_and_sigma_equivariant,
    test_jn_first_degree,
    test_primitives,
    test_parse_space_id,
    test_catalog_dims,
]


def main():
    print("=" * 60)
    print("STEENROD / COMODULE TESTS")
    print("=" * 60)
    failed = 0
    for test in TESTS:
        try:
            test()
            print(f"✅ {test.__name__}")
        except AssertionError as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")
    print("=" * 60)
    return failed


if __name__ == "__main__":
    raise SystemExit(main())
