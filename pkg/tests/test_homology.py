import numpy as np
import pytest

from koszulres.exactfield import rank_mod
from koszulres.homology import (
    ClassCIBasis,
    ClassTBasis,
    DiscoveryError,
    HomologyError,
    discover_class_CI_basis,
    discover_class_T_basis,
    homology_ranks,
    verify_class_CI,
    verify_class_T,
)
from koszulres.koszul import KoszulElement, parse_koszul_element
from tests.conftest import make_class_t_basis


def test_homology_ranks_class_t(ring_t):
    ranks, c = homology_ranks(ring_t)
    assert ranks == (1, 4, 6, 3)
    assert c == 3


def test_homology_ranks_ci(ring_ci3, ring_ci2):
    assert homology_ranks(ring_ci3) == ((1, 3, 3, 1), 3)
    assert homology_ranks(ring_ci2) == ((1, 2, 1), 2)


def test_boundary_class_is_zero(ring_t, homology_t):
    b = KoszulElement.basis(ring_t, (1, 2)).differential()
    assert not homology_t.class_of(b).any()


def test_class_well_defined_mod_boundaries(ring_t, homology_t):
    z = parse_koszul_element("x*e[1]", ring_t)
    moved = z + KoszulElement.basis(ring_t, (1, 3)).differential()
    c1 = homology_t.class_of(z)
    c2 = homology_t.class_of(moved)
    assert c1.any()
    assert (c1 == c2).all()


def test_class_of_rejects_non_cycle(ring_t, homology_t):
    with pytest.raises(HomologyError):
        homology_t.class_of(KoszulElement.basis(ring_t, (1,)))


def test_product_classes(ring_t, homology_t, basis_t):
    z1, z2, z3, z4 = basis_t.z1
    assert homology_t.product_class(z1, z2).any()
    assert not homology_t.product_class(z1, z4).any()
    # [z1_2][z1_3] equals the class of yz e_23
    got = homology_t.product_class(z2, z3)
    want = homology_t.class_of(parse_koszul_element("y*z*e[2,3]", ring_t))
    assert (got == want).all()


def test_product_independent_of_representative(ring_t, homology_t, basis_t):
    z1, z2 = basis_t.z1[0], basis_t.z1[1]
    moved = z1 + KoszulElement.basis(ring_t, (2, 3)).differential()
    a = homology_t.product_class(z1, z2)
    b = homology_t.product_class(moved, z2)
    assert (a == b).all()


def test_supplied_degree1_classes_form_basis(ring_t, homology_t, basis_t):
    M = np.array([homology_t.class_of(z) for z in basis_t.z1]).T
    assert rank_mod(M, ring_t.p) == 4


def test_product_overflow_is_empty(ring_t, homology_t, basis_t):
    z2 = basis_t.z2[0]
    z3 = basis_t.z3[0]
    assert homology_t.product_class(z2, z3).size == 0


# -- certification -----------------------------------------------------------

def test_verify_class_t_passes(ring_t, homology_t, basis_t):
    cert = verify_class_T(basis_t, ring_t, homology_t)
    assert cert.passed
    descriptions = [c.description for c in cert.checks]
    assert any("distinguished products" in d for d in descriptions)


def test_verify_class_t_passes_p2(ring_t2):
    basis = make_class_t_basis(ring_t2)
    assert verify_class_T(basis, ring_t2).passed


def test_verify_class_t_swapped_triple_fails(ring_t, homology_t, basis_t):
    z1 = list(basis_t.z1)
    z1[0], z1[3] = z1[3], z1[0]
    bad = ClassTBasis(z1=z1, z2=basis_t.z2, z3=basis_t.z3)
    cert = verify_class_T(bad, ring_t, homology_t)
    assert not cert.passed
    assert any("independent" in c.description for c in cert.failures())


def test_verify_class_t_on_ci_ring_fails(ring_ci3):
    # z1_u = x_u e_u; a_2 = 3 so the z2 list is empty, but A_1 . A_2 != 0
    z = [parse_koszul_element(f"{nm}*e[{u}]", ring_ci3)
         for u, nm in enumerate(ring_ci3.names, start=1)]
    bad = ClassTBasis(z1=z, z2=[], z3=[parse_koszul_element("x*y*z*e[1,2,3]", ring_ci3)])
    cert = verify_class_T(bad, ring_ci3)
    assert not cert.passed


def test_verify_class_ci_passes(ring_ci3):
    basis = ClassCIBasis(z1=[
        parse_koszul_element(f"{nm}*e[{u}]", ring_ci3)
        for u, nm in enumerate(ring_ci3.names, start=1)])
    cert = verify_class_CI(basis, ring_ci3)
    assert cert.passed


def test_verify_class_ci_count_gate(ring_ci3):
    basis = ClassCIBasis(z1=[parse_koszul_element("x*e[1]", ring_ci3)])
    cert = verify_class_CI(basis, ring_ci3)
    assert not cert.passed
    assert "codepth" in cert.checks[0].description


def test_class_t_ring_fed_as_ci_fails(ring_t, homology_t, basis_t):
    cert = verify_class_CI(ClassCIBasis(z1=basis_t.z1), ring_t, homology_t)
    assert not cert.passed


# -- discovery ---------------------------------------------------------------

def test_discover_ci_basis(ring_ci3, ring_ci2):
    for ring in (ring_ci3, ring_ci2):
        basis = discover_class_CI_basis(ring)
        assert verify_class_CI(basis, ring).passed


def test_discover_ci_fails_on_class_t(ring_t, homology_t):
    with pytest.raises(DiscoveryError):
        discover_class_CI_basis(ring_t, homology_t)


def test_discover_class_t_basis(ring_t, homology_t):
    basis = discover_class_T_basis(ring_t, homology_t)
    assert verify_class_T(basis, ring_t, homology_t).passed


def test_discover_class_t_rejects_ci(ring_ci2):
    with pytest.raises(DiscoveryError):
        discover_class_T_basis(ring_ci2)


def test_ranks_dimension_bookkeeping(ring_t, homology_t):
    # dim ker d_i + rank d_i = rank K_i for every i
    from koszulres.exactfield import rank_mod as rk
    from math import comb
    for i in range(4):
        flat = homology_t.flat_diff[i]
        r = rk(flat, ring_t.p)
        ker = flat.shape[1] - r
        assert flat.shape[1] == comb(3, i) * ring_t.dim
        assert ker + r == flat.shape[1]


def test_b_and_c_classes_fill_ranks_by_degree(ring_t, homology_t, basis_t):
    # B spans 1, the triple, and its three products; C spans z1_4, z2_*, z3_*;
    # together they fill A degreewise: (1, 4, 6, 3)
    t = basis_t.triple
    by_degree = {0: 1, 1: 0, 2: 0, 3: 0}
    groups = {
        1: t + [basis_t.z1[3]],
        2: [t[0].wedge(t[1]), t[1].wedge(t[2]), t[0].wedge(t[2])] + basis_t.z2,
        3: basis_t.z3,
    }
    for deg, elems in groups.items():
        M = np.array([homology_t.class_of(z) for z in elems]).T
        assert rank_mod(M, ring_t.p) == len(elems)
        by_degree[deg] = len(elems)
    assert tuple(by_degree[i] for i in range(4)) == (1, 4, 6, 3)
