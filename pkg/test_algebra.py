#!/usr/bin/env python3
"""
Tests for graded algebras, derivations and Poincaré-series comparison.
"""

import itertools
import threading

from tateforge.algebra import (
    AlgebraSpec,
    DerivationSpec,
    Element,
    apply_derivation,
    derivation_matrix,
    enumerate_basis,
    ext,
    multiply,
    poly,
)
from tateforge.exceptions import CapTooLarge, OutOfCap
from tateforge.series import E, P, ClosedForm, PoincareSeries, poincare_compare


def p_xi1():
    return AlgebraSpec("P(xi1)", (poly("xi1", 1),))


def q0_on_p_xi1(a):
    return DerivationSpec.build("Q0", a, -1, {"xi1": a.one()})


def test_basis_dims():
    a = AlgebraSpec("P(xi1,xi2)", (poly("xi1", 1), poly("xi2", 3)))
    assert enumerate_basis(a, 6).dims() == [1, 1, 1, 2, 2, 2, 3]
    b = AlgebraSpec("E(sxi1)", (ext("sxi1", 2),))
    assert enumerate_basis(b, 4).dims() == [1, 0, 1, 0, 0]
    c = AlgebraSpec("P(xi1sq,xi2)E(xi3)", (poly("xi1sq", 2), poly("xi2", 3), ext("xi3", 7)))
    assert enumerate_basis(c, 7).dims() == [1, 0, 1, 1, 1, 1, 2, 2]


def test_basis_order_is_reproducible():
    a = AlgebraSpec("P(xi1,xi2)", (poly("xi1", 1), poly("xi2", 3)))
    first = enumerate_basis(a, 9)
    second = enumerate_basis(a, 9)
    assert all(first.monomials(d) == second.monomials(d) for d in range(10))
    assert first.monomials(3) == ((3, 0), (0, 1))


def test_basis_size_guard():
    from tateforge.config import settings

    old = settings.max_basis_size
    settings.max_basis_size = 2
    try:
        a = AlgebraSpec("P(xi1,xi2)", (poly("xi1", 1), poly("xi2", 3)))
        try:
            enumerate_basis(a, 6)
        except CapTooLarge as e:
            assert e.details["degree"] == 6
        else:
            raise AssertionError("basis of size 3 passed a guard of 2")
    finally:
        settings.max_basis_size = old


def test_parallel_map_order_and_inline():
    from tateforge.concurrency import parallel_map
    from tateforge.config import settings

    caller = threading.get_ident()
    old = settings.threads
    settings.threads = 1
    try:
        assert parallel_map(lambda _: threading.get_ident(), range(4)) == [caller] * 4
    finally:
        settings.threads = old
    assert parallel_map(lambda x: x * x, range(20), workers=4) == [x * x for x in range(20)]
    names = parallel_map(lambda _: threading.current_thread().name, range(8), workers=2)
    assert all(name.startswith("tateforge") for name in names)


def test_multiply_examples():
    b = AlgebraSpec("E(sxi1)", (ext("sxi1", 2),))
    s = b.element(b.gen("sxi1"))
    assert multiply(s, s, b).is_zero()

    a = p_xi1()
    x = a.element(a.gen("xi1"))
    assert multiply(x, x, a) == a.element(a.gen("xi1", 2))
    one_plus = a.element(a.unit(), a.gen("xi1"))
    assert multiply(one_plus, one_plus, a) == a.element(a.unit(), a.gen("xi1", 2))


def test_multiply_truncation_flag():
    a = p_xi1()
    x = a.element(a.gen("xi1", 3))
    product = multiply(x, x, a, max_degree=5)
    assert product.is_zero()
    assert product.truncated


def test_multiply_associative_commutative():
    a = AlgebraSpec("P(xi1)E(sxi1)", (poly("xi1", 1), ext("sxi1", 2)))
    basis = enumerate_basis(a, 4)
    monos = [m for d in range(5) for m in basis.monomials(d)]
    elems = [Element.of(m) for m in monos] + [Element.of(monos[1], monos[2])]
    for x, y, z in itertools.product(elems[:5], repeat=3):
        assert multiply(x, y, a) == multiply(y, x, a)
        assert multiply(multiply(x, y, a), z, a) == multiply(x, multiply(y, z, a), a)


def test_derivation_leibniz():
    a = p_xi1()
    D = q0_on_p_xi1(a)
    assert apply_derivation(D, a.one(), a).is_zero()
    assert apply_derivation(D, a.element(a.gen("xi1", 2)), a).is_zero()
    assert apply_derivation(D, a.element(a.gen("xi1", 3)), a) == a.element(a.gen("xi1", 2))


def test_derivation_matrix():
    a = p_xi1()
    basis = enumerate_basis(a, 6)
    D = q0_on_p_xi1(a)
    assert derivation_matrix(D, 3, basis).to_dense().tolist() == [[1]]
    assert derivation_matrix(D, 2, basis).to_dense().tolist() == [[0]]
    for d in range(2, 7):
        assert derivation_matrix(D, d - 1, basis).matmul(derivation_matrix(D, d, basis)).is_zero()


def test_derivation_matrix_out_of_cap():
    a = p_xi1()
    basis = enumerate_basis(a, 4)
    up = DerivationSpec.build("up", a, 1, {"xi1": a.element(a.gen("xi1", 2))})
    try:
        derivation_matrix(up, 4, basis)
    except OutOfCap:
        pass
    else:
        raise AssertionError("degree 5 lies above the cap")


def test_derivation_degree_check():
    a = p_xi1()
    try:
        DerivationSpec.build("bad", a, -1, {"xi1": a.element(a.gen("xi1"))})
    except ValueError:
        pass
    else:
        raise AssertionError("an image of the wrong degree was accepted")


def test_poincare_compare():
    a = AlgebraSpec("P(xi1sq)E(w)", (poly("xi1sq", 2), ext("w", 3)))
    machine = PoincareSeries.from_dims(enumerate_basis(a, 8).dims())
    closed = PoincareSeries.from_closed_form(ClosedForm.product(*P(2), *E(3)), 0, 8)
    report = poincare_compare(machine, closed, 8)
    assert report.equal
    assert report.machine == [1, 0, 1, 1, 1, 1, 1, 1, 1]

    b = AlgebraSpec("P(xi1,xi2)", (poly("xi1", 1), poly("xi2", 3)))
    series = PoincareSeries.from_dims(enumerate_basis(b, 6).dims())
    assert poincare_compare(series, series, 6).equal
    closed_b = PoincareSeries.from_closed_form(ClosedForm.product(*P(1, 3)), 0, 6)
    assert poincare_compare(series, closed_b, 6).expected == [1, 1, 1, 2, 2, 2, 3]


def test_poincare_first_mismatch():
    machine = PoincareSeries.from_dims([1, 0, 1, 0, 1])
    closed = PoincareSeries.from_closed_form(ClosedForm.product(*P(1)), 0, 4)
    report = poincare_compare(machine, closed, 4)
    assert not report.equal
    assert report.first_mismatch.degree == 1


def test_closed_form_arithmetic():
    form = ClosedForm.product(*E(2, 4)) - ClosedForm.product()
    assert form.expand(0, 6) == {0: 0, 1: 0, 2: 1, 3: 0, 4: 1, 5: 0, 6: 1}
    shifted = ClosedForm.product(*P(2), shift=3)
    assert shifted.expand(0, 7) == {0: 0, 1: 0, 2: 0, 3: 1, 4: 0, 5: 1, 6: 0, 7: 1}


TESTS = [
    test_basis_dims,
    test_basis_order_is_reproducible,
    test_basis_size_guard,
    test_parallel_map_order_and_inline,
    test_multiply_examples,
    test_multiply_truncation_flag,
    test_multiply_associative_commutative,
    test_derivation_leibniz,
    test_derivation_matrix,
    test_derivation_matrix_out_of_cap,
    test_derivation_degree_check,
    test_poincare_compare,
    test_poincare_first_mismatch,
    test_closed_form_arithmetic,
]


def main():
    print("=" * 60)
    print("GRADED ALGEBRA TESTS")
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
