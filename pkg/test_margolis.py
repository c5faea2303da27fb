#!/usr/bin/env python3
"""
Tests for Margolis homology, Ext over E(Q_m), the localized E₂ page and Künneth.
"""

from tateforge.exceptions import OutOfCap
from tateforge.margolis import (
    ext_over_EQm,
    kunneth_check,
    localized_e2,
    margolis_homology,
    margolis_report,
)
from tateforge.oracles import resolution_ext
from tateforge.series import E, P, ClosedForm
from tateforge.steenrod import catalog, parse_space_id, tensor_comodule

ONE = ClosedForm.product(label="1")


def comodule(text, N):
    return catalog(parse_space_id(text), N)


def assert_margolis(text, m, N, form):
    result = margolis_homology(comodule(text, N), m, N)
    report = margolis_report(result, form)
    assert report.equal, (text, m, report.first_mismatch)
    return result


def test_dual_steenrod_is_free():
    for m in (0, 1, 2):
        result = margolis_homology(comodule("a", 16), m, 16)
        assert result.vanishes(), m


def test_y_n():
    assert margolis_homology(comodule("y1", 16), 0, 16).vanishes()
    assert_margolis("y1", 1, 16, ClosedForm.product(*P(1)))
    assert_margolis("y1", 2, 16, ClosedForm.product(*P(1)))
    for m in (0, 1):
        assert margolis_homology(comodule("y2", 16), m, 16).vanishes(), m
    assert_margolis("y2", 2, 16, ClosedForm.product(*P(1, 3)))


def test_hz():
    result = assert_margolis("hz", 0, 16, ONE)
    assert result.dims[0] == 1
    for m in (1, 2):
        assert margolis_homology(comodule("hz", 16), m, 16).vanishes(), m


def test_z_n():
    assert_margolis("z1", 0, 16, ClosedForm.product(*P(2)))
    assert_margolis("z2", 0, 16, ClosedForm.product(*P(6)))
    assert margolis_homology(comodule("z2", 16), 1, 16).vanishes()


def test_z_mod_vn():
    assert_margolis("zmodv1", 0, 16, ONE)
    assert margolis_homology(comodule("zmodv1", 16), 1, 16).vanishes()
    assert margolis_homology(comodule("zmodv2", 16), 2, 16).vanishes()


def test_certified_window():
    result = margolis_homology(comodule("y1", 16), 1, 16)
    assert result.certified_window == (0, 13)
    assert not result.certified[14]
    empty = margolis_homology(comodule("y1", 8), 3, 8)
    assert empty.certified_window == (0, -1)
    assert empty.vanishes()
    try:
        margolis_report(empty, ONE)
    except OutOfCap:
        pass
    else:
        raise AssertionError("an empty window has nothing to compare")


def test_ext_of_sphere():
    page = ext_over_EQm(comodule("sphere", 12), 1, 12, 4)
    for s in range(5):
        assert page.dim(s, 3 * s) == 1, s
        assert page.dim(s, 3 * s + 1) == 0, s
    assert page.v_degree == (1, 3)
    assert page.periodicity_holds()


def test_ext_of_y1():
    page = ext_over_EQm(comodule("y1", 12), 0, 12, 3)
    assert [page.dim(0, t) for t in range(8)] == [1, 0, 1, 0, 1, 0, 1, 0]
    assert all(page.dim(s, t) == 0 for (s, t) in page.certified_cells() if s >= 1)

    page1 = ext_over_EQm(comodule("y1", 12), 1, 12, 3)
    assert page1.dim(1, 3) == 1
    assert page1.dim(2, 7) == 1
    assert page1.periodicity_holds()


def test_ext_matches_minimal_resolution():
    for text, m in (("sphere", 0), ("y1", 0), ("y1", 1), ("hz", 0), ("zmodv1", 0), ("zmodv1", 1), ("y2", 1)):
        c = comodule(text, 12)
        shifted = ext_over_EQm(c, m, 12, 3)
        resolved = resolution_ext(c, m, 12, 3)
        for cell in shifted.certified_cells():
            if resolved.certified.get(cell):
                assert shifted.dim(*cell) == resolved.dim(*cell), (text, m, cell)


def test_localized_e2():
    for m in (0, 1):
        report = localized_e2(comodule("y2", 16), m, 16, ClosedForm.zero())
        assert report.equal
        assert report.provenance["vanishes"] == "true"
    report = localized_e2(comodule("y2", 16), 2, 16, ClosedForm.product(*P(1, 3)))
    assert report.equal
    assert report.provenance["vanishes"] == "false"
    assert report.provenance["periodicity"] == "6"


def test_kunneth():
    left, right = comodule("y1", 12), comodule("zmodv1", 12)
    product = tensor_comodule(left, right)
    for m in (0, 1, 2):
        check = kunneth_check(
            margolis_homology(product, m, 12),
            margolis_homology(left, m, 12),
            margolis_homology(right, m, 12),
        )
        assert check.equal, (m, check.first_mismatch)
    y_times_z = margolis_homology(tensor_comodule(comodule("y1", 12), comodule("z1", 12)), 1, 12)
    assert margolis_report(y_times_z, ClosedForm.product(*P(1, 2))).equal


def test_exterior_closed_form_against_machine():
    # H(y1 ⊗ zmodv1; Q_2) = P(1) ⊗ P(2) ⊗ E(3)
    product = tensor_comodule(comodule("y1", 16), comodule("zmodv1", 16))
    result = margolis_homology(product, 2, 16)
    assert margolis_report(result, ClosedForm.product(*P(1, 2), *E(3))).equal


TESTS = [
    test_dual_steenrod_is_free,
    test_y_n,
    test_hz,
    test_z_n,
    test_z_mod_vn,
    test_certified_window,
    test_ext_of_sphere,
    test_ext_of_y1,
    test_ext_matches_minimal_resolution,
    test_localized_e2,
    test_kunneth,
    test_exterior_closed_form_against_machine,
]


def main():
    print("=" * 60)
    print("MARGOLIS HOMOLOGY TESTS")
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
