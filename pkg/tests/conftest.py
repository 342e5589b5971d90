import pytest

from koszulres.exactfield import QuotientRing
from koszulres.homology import ClassTBasis, HomologyAlgebra
from koszulres.koszul import parse_koszul_element
from koszulres.samples import CLASS_T_CYCLES, class_t_ring, ci_squares_ring
from koszulres.sequences import sequence_tables


def make_class_t_basis(ring):
    cyc = {name: parse_koszul_element(text, ring)
           for name, text in CLASS_T_CYCLES.items()}
    return ClassTBasis(
        z1=[cyc[f"z1_{i}"] for i in range(1, 5)],
        z2=[cyc[f"z2_{i}"] for i in range(1, 4)],
        z3=[cyc[f"z3_{i}"] for i in range(1, 4)],
    )


@pytest.fixture(scope="session")
def ring_t():
    """The codepth-3 class-T example ring over F_32003."""
    return class_t_ring()


@pytest.fixture(scope="session")
def ring_t2():
    return class_t_ring(p=2)


@pytest.fixture(scope="session")
def basis_t(ring_t):
    return make_class_t_basis(ring_t)


@pytest.fixture(scope="session")
def homology_t(ring_t):
    return HomologyAlgebra(ring_t)


@pytest.fixture(scope="session")
def pack_t():
    return sequence_tables(3, 4, 6, 3, k_max=12)


@pytest.fixture(scope="session")
def ring_ci3():
    return ci_squares_ring(3)


@pytest.fixture(scope="session")
def ring_ci2():
    return ci_squares_ring(2)


@pytest.fixture(scope="session")
def ring_x():
    """The hypersurface k[x]/(x^2)."""
    return QuotientRing(32003, 1, [(2,)], names=["x"])
