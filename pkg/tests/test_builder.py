import numpy as np
import pytest

from koszulres.builder import (
    AssemblyError,
    BuildError,
    alpha,
    assemble_CI,
    assemble_T,
    beta,
    beta_prime,
    bracket,
    component_C,
    delta,
    gamma,
    graded_A_complexes,
    phi,
    phi_blocks,
    words,
)
from koszulres.exactfield import RingMatrix
from koszulres.homology import ClassTBasis, discover_class_CI_basis
from koszulres.koszul import (
    KoszulElement,
    cycle_matrix_action,
    parse_koszul_element,
    subsets,
)
from koszulres.sequences import tree_layer, u_table


def grid(theta, names):
    return [[names.get(id(theta.entries.get((i, j))), "0")
             for j in range(theta.cols)] for i in range(theta.rows)]


@pytest.fixture(scope="module")
def names_t(basis_t):
    d = {id(z): f"z{1}_{u}" for u, z in enumerate(basis_t.z1, start=1)}
    return d


# -- words and beta ----------------------------------------------------------

def test_words_and_bracket():
    assert words(3, 0) == ((),)
    assert words(3, 1) == ((1,), (2,), (3,))
    assert words(3, 2) == ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))
    assert len(words(3, 3)) == 10
    assert bracket((1, 3, 1, 2)) == (1, 1, 2, 3)


def test_beta_1_2_3_displayed(basis_t, names_t):
    b1 = beta(1, 3, basis_t.triple)
    assert grid(b1, names_t) == [["z1_1", "z1_2", "z1_3"]]
    b2 = beta(2, 3, basis_t.triple)
    assert grid(b2, names_t) == [
        ["z1_1", "z1_2", "z1_3", "0", "0", "0"],
        ["0", "z1_1", "0", "z1_2", "z1_3", "0"],
        ["0", "0", "z1_1", "0", "z1_2", "z1_3"],
    ]
    b3 = beta(3, 3, basis_t.triple)
    assert (b3.rows, b3.cols) == (6, 10)
    assert grid(b3, names_t) == [
        ["z1_1", "z1_2", "z1_3", "0", "0", "0", "0", "0", "0", "0"],
        ["0", "z1_1", "0", "z1_2", "z1_3", "0", "0", "0", "0", "0"],
        ["0", "0", "z1_1", "0", "z1_2", "z1_3", "0", "0", "0", "0"],
        ["0", "0", "0", "z1_1", "0", "0", "z1_2", "z1_3", "0", "0"],
        ["0", "0", "0", "0", "z1_1", "0", "0", "z1_2", "z1_3", "0"],
        ["0", "0", "0", "0", "0", "z1_1", "0", "0", "z1_2", "z1_3"],
    ]
    b0 = beta(0, 3, basis_t.triple)
    assert (b0.rows, b0.cols) == (0, 1) and b0.is_zero()


def test_beta_prime_displayed(basis_t):
    t = basis_t.triple
    w23 = t[1].wedge(t[2])
    w13 = t[0].wedge(t[2])
    w12 = t[0].wedge(t[1])
    bp2 = beta_prime(2, t)
    assert (bp2.rows, bp2.cols) == (3, 1)
    assert [bp2.entry(i, 0) for i in range(3)] == [w23, w13, w12]
    bp3 = beta_prime(3, t)
    assert (bp3.rows, bp3.cols) == (6, 3)
    expected = [
        [w23, None, None],
        [w13, w23, None],
        [w12, None, w23],
        [None, w13, None],
        [None, w12, w13],
        [None, None, w12],
    ]
    for i in range(6):
        for j in range(3):
            got = bp3.entries.get((i, j))
            assert got == expected[i][j]
    assert beta_prime(0, t).is_zero() and beta_prime(1, t).is_zero()


def right_inverse_holds(triple, kmax=6):
    vol = triple[0].wedge(triple[1]).wedge(triple[2])
    for k in range(1, kmax + 1):
        prod = beta(k, 3, triple) @ beta_prime(k + 1, triple)
        for i in range(prod.rows):
            for j in range(prod.cols):
                entry = prod.entries.get((i, j))
                if i == j:
                    if vol.is_zero():
                        assert entry is None
                    else:
                        assert entry == vol
                else:
                    assert entry is None
    return True


def test_beta_right_inverse_identity(basis_t):
    assert right_inverse_holds(basis_t.triple)


def test_beta_right_inverse_nonzero_volume(ring_ci3):
    # in k[x,y,z]/(x^2,y^2,z^2) the triple product x y z e_123 is nonzero
    triple = [parse_koszul_element(f"{nm}*e[{u}]", ring_ci3)
              for u, nm in enumerate(ring_ci3.names, start=1)]
    vol = triple[0].wedge(triple[1]).wedge(triple[2])
    assert not vol.is_zero()
    assert right_inverse_holds(triple)


# -- gamma and alpha ---------------------------------------------------------

def test_gamma_contents(basis_t, ring_t):
    g1 = gamma(1, basis_t)
    assert (g1.rows, g1.cols, g1.entry_degree) == (1, 1, 1)
    assert g1.entry(0, 0) == parse_koszul_element("y*z*e[1]", ring_t)
    g2 = gamma(2, basis_t)
    assert (g2.rows, g2.cols, g2.entry_degree) == (1, 3, 2)
    g3 = gamma(3, basis_t)
    assert (g3.rows, g3.cols, g3.entry_degree) == (1, 3, 3)
    with pytest.raises(BuildError):
        gamma(4, basis_t)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_alpha_extents_match_tables(k, pack_t, basis_t):
    for r, expected_cols in ((k, pack_t.l[k]), (k + 1, pack_t.lp[k]),
                             (k + 2, pack_t.lpp[k])):
        theta = alpha(k, r, pack_t, basis_t)
        assert theta.rows == pack_t.l[k - 1]
        assert theta.cols == expected_cols
        assert theta.entry_degree == r - k + 1


def test_alpha_11_display(pack_t, basis_t, names_t):
    theta = alpha(1, 1, pack_t, basis_t)
    assert grid(theta, names_t) == [["z1_1", "z1_2", "z1_3", "z1_4"]]


def test_alpha_22_display(pack_t, basis_t, names_t):
    theta = alpha(2, 2, pack_t, basis_t)
    assert grid(theta, names_t) == [
        ["z1_1", "z1_2", "z1_3", "0", "0", "0", "0", "0", "0",
         "z1_4", "0", "0", "0"],
        ["0", "z1_1", "0", "z1_2", "z1_3", "0", "0", "0", "0",
         "0", "z1_4", "0", "0"],
        ["0", "0", "z1_1", "0", "z1_2", "z1_3", "0", "0", "0",
         "0", "0", "z1_4", "0"],
        ["0", "0", "0", "0", "0", "0", "z1_1", "z1_2", "z1_3",
         "0", "0", "0", "z1_4"],
    ]


def test_alpha_23_layout(pack_t, basis_t):
    # first column holds beta'_2 in the first b_1 rows; the beta_1^{d_1} row
    # group receives no beta' input; gamma_2 blocks go one per row
    theta = alpha(2, 3, pack_t, basis_t)
    t = basis_t.triple
    assert theta.entry(0, 0) == t[1].wedge(t[2])
    assert theta.entry(1, 0) == t[0].wedge(t[2])
    assert theta.entry(2, 0) == t[0].wedge(t[1])
    assert (3, 0) not in theta.entries
    for s0 in range(4):
        for c in range(3):
            assert theta.entry(s0, 1 + 3 * s0 + c) == basis_t.z2[c]


def test_alpha_input_validation(pack_t, basis_t):
    with pytest.raises(BuildError):
        alpha(0, 0, pack_t, basis_t)
    with pytest.raises(BuildError):
        alpha(2, 5, pack_t, basis_t)


def test_delta_extents(pack_t, basis_t):
    d1 = delta(1, pack_t, basis_t)
    assert (d1.rows, d1.cols) == (1, 4 + 3 + 3)
    d2 = delta(2, pack_t, basis_t)
    assert (d2.rows, d2.cols) == (4, 13 + 13 + 12)
    for k in (1, 2, 3):
        dk = delta(k, pack_t, basis_t)
        assert dk.cols == pack_t.l[k] + pack_t.lp[k] + pack_t.lpp[k]


# -- phi and C^(k) -----------------------------------------------------------

def test_phi_block_structure(pack_t, basis_t):
    assert [(j, str(n)) for j, n in phi_blocks(1)] == [(1, "1")]
    assert [(j, str(n)) for j, n in phi_blocks(2)] == [
        (2, "1"), (1, "X[1,2]"), (1, "X[1,3]")]
    assert [(j, str(n)) for j, n in phi_blocks(3)] == [
        (3, "1"), (1, "X[2,3]"), (1, "X[2,4]"),
        (2, "X[1,2]"), (1, "X[1,2]*X[1,2]"), (1, "X[1,3]*X[1,2]"),
        (2, "X[1,3]"), (1, "X[1,2]*X[1,3]"), (1, "X[1,3]*X[1,3]"),
    ]


def test_phi_2_and_3_deltas(pack_t, basis_t):
    p2 = phi(2, pack_t, basis_t)
    assert [blk[0].k for blk in p2] == [2, 1, 1]
    assert [blk[1] for blk in p2] == [1, pack_t.lp[1], pack_t.lpp[1]]
    p3 = phi(3, pack_t, basis_t)
    assert [blk[0].k for blk in p3] == [3, 1, 1, 2, 1, 1, 2, 1, 1]
    assert [blk[1] for blk in p3] == [
        1, pack_t.lp[2], pack_t.lpp[2],
        pack_t.lp[1], pack_t.lp[1] ** 2, pack_t.lpp[1] * pack_t.lp[1],
        pack_t.lpp[1], pack_t.lp[1] * pack_t.lpp[1], pack_t.lpp[1] ** 2,
    ]


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_phi_unfolds_to_tree_layers(m, pack_t, basis_t):
    blocks = phi(m, pack_t, basis_t)
    assert len(blocks) == 3 ** (m - 1)  # Delta-type diagonal blocks
    sources = [s for blk in blocks for s in blk[2]]
    assert sources == list(tree_layer(m))
    targets = [blk[3] for blk in blocks]
    assert targets == list(tree_layer(m - 1))


def test_component_c(pack_t):
    c1 = component_C(1, pack_t)
    assert [(str(m), s, u) for m, s, u in c1] == [
        ("X[1,1]", 1, 4), ("X[1,2]", 2, 3), ("X[1,3]", 3, 3)]
    c0 = component_C(0, pack_t)
    assert [(s, u) for _, s, u in c0] == [(0, 1)]
    # aggregate by shift reproduces the u table rows
    ut = u_table(4, 12, pack_t)
    for k in range(5):
        agg = {}
        for _, s, u in component_C(k, pack_t):
            agg[s] = agg.get(s, 0) + u
        expected = {s: v for (kk, s), v in ut.items() if kk == k and v}
        assert agg == expected


# -- assembled resolutions ---------------------------------------------------

def block_offsets(F, k):
    out = {}
    off = 0
    n = F.ring.nvars
    for b in F.blocks[k]:
        width = b.copies * len(subsets(n, b.kdeg))
        out[(b.key, b.kdeg)] = (off, off + width)
        off += width
    return out


@pytest.fixture(scope="module")
def assembly_t(ring_t, basis_t, pack_t):
    return assemble_T(ring_t, basis_t, pack_t, i_max=7)


def test_assembled_ranks(assembly_t):
    assert assembly_t.ranks == [1, 3, 7, 16, 37, 86, 200, 465]


def test_block_inventory_low_degrees(assembly_t):
    labels = [b.label() for b in assembly_t.blocks[2]]
    assert labels == ["K[2]^1 @ 1", "K[0]^4 @ X[1,1]"]
    labels3 = [b.label() for b in assembly_t.blocks[3]]
    assert labels3 == ["K[3]^1 @ 1", "K[1]^4 @ X[1,1]", "K[0]^3 @ X[1,2]"]


def test_diff2_structure(assembly_t, ring_t, basis_t, pack_t):
    # d_2 = (d^K_2 | alpha_{1,1}) with positive signs in the chosen regime
    d2 = assembly_t.diff(2)
    expected_left = RingMatrix.repeat_diag(
        __import__("koszulres.koszul", fromlist=["koszul_differential"])
        .koszul_differential(2, ring_t), 1)
    for (i, j), f in expected_left.entries.items():
        assert d2.entry(i, j) == f
    act = cycle_matrix_action(alpha(1, 1, pack_t, basis_t), 1, ring_t)
    for (i, j), f in act.entries.items():
        assert d2.entry(i, 3 + j) == f


def test_diff5_block_pattern(assembly_t, ring_t, basis_t, pack_t):
    from koszulres.sequences import TreeMonomial
    d5 = assembly_t.diff(5)
    rows = block_offsets(assembly_t, 4)
    cols = block_offsets(assembly_t, 5)
    X11, X22 = TreeMonomial(((1, 1),)), TreeMonomial(((2, 2),))
    X12 = TreeMonomial(((1, 2),))
    X11X12 = TreeMonomial(((1, 1), (1, 2)))
    # block (X11@2, X22@1) is alpha_{2,2} acting into K_2^4
    r0, r1 = rows[(X11, 2)]
    c0, c1 = cols[(X22, 1)]
    act = cycle_matrix_action(alpha(2, 2, pack_t, basis_t), 2, ring_t)
    assert (r1 - r0, c1 - c0) == (act.rows, act.cols)
    for (i, j), f in act.entries.items():
        assert d5.entry(r0 + i, c0 + j) == f
    # block (X12@1, X11X12@0) is alpha_{1,1}^3
    r0, r1 = rows[(X12, 1)]
    c0, c1 = cols[(X11X12, 0)]
    act11 = cycle_matrix_action(alpha(1, 1, pack_t, basis_t), 1, ring_t)
    assert (r1 - r0) == 3 * act11.rows and (c1 - c0) == 3 * act11.cols
    for copy in range(3):
        for (i, j), f in act11.entries.items():
            assert d5.entry(r0 + copy * act11.rows + i,
                            c0 + copy * act11.cols + j) == f


def test_assembly_differentials_in_m(assembly_t):
    for i in range(1, assembly_t.i_max + 1):
        assert assembly_t.diff(i).entries_in_m()


def test_forced_wrong_regime_breaks_d2(ring_t, basis_t, pack_t):
    F = assemble_T(ring_t, basis_t, pack_t, i_max=4, force_regime=("deg2", 1))
    assert "forced" in F.sign_regime
    prod = F.diff(2) @ F.diff(3)
    assert not prod.is_zero()


def test_literal_product_precondition(ring_t, basis_t, pack_t):
    # z1_4 + d(e_13) has the same class but a nonzero wedge with z1_2
    moved = basis_t.z1[3] + KoszulElement.basis(ring_t, (1, 3)).differential()
    bad = ClassTBasis(z1=basis_t.z1[:3] + [moved], z2=basis_t.z2, z3=basis_t.z3)
    assert not moved.wedge(basis_t.z1[1]).is_zero()
    with pytest.raises(AssemblyError, match="wedge product"):
        assemble_T(ring_t, bad, pack_t, i_max=4)


def test_assemble_ci_ranks_and_blocks(ring_ci3, ring_x):
    basis = discover_class_CI_basis(ring_ci3)
    F = assemble_CI(ring_ci3, basis, 3, i_max=6)
    assert F.ranks == [1, 3, 6, 10, 15, 21, 28]
    # hypersurface: F_i = K_i + K_{i-2} + ... intersected with 0 <= kdeg <= 1
    bx = discover_class_CI_basis(ring_x)
    Fx = assemble_CI(ring_x, bx, 1, i_max=6)
    assert Fx.ranks == [1] * 7
    assert [(b.key, b.kdeg) for b in Fx.blocks[4]] == [(2, 0)]
    assert [(b.key, b.kdeg) for b in Fx.blocks[5]] == [(2, 1)]


def test_assemble_ci_diff3_blocks(ring_ci3):
    # d^F_3 block pattern: (d_3, beta_1-action; 0, d_1^{b_1})
    basis = discover_class_CI_basis(ring_ci3)
    F = assemble_CI(ring_ci3, basis, 3, i_max=4)
    d3 = F.diff(3)
    from koszulres.koszul import koszul_differential
    top_left = koszul_differential(3, ring_ci3)  # K_3 col -> K_2 row, offsets 0
    for (i, j), f in top_left.entries.items():
        assert d3.entry(i, j) == f
    # beta_1 arrow: K_1^{b_1} (cols from 1) -> K_2 (rows from 0)
    act = cycle_matrix_action(beta(1, 3, basis.z1), 2, ring_ci3)
    assert (act.rows, act.cols) == (3, 9)
    for (i, j), f in act.entries.items():
        assert d3.entry(i, 1 + j) == f
    # diagonal of the j=1 block: d_1^{b_1} at rows 3.., cols 1..
    d1 = koszul_differential(1, ring_ci3)
    for copy in range(3):
        for (i, j), f in d1.entries.items():
            assert d3.entry(3 + copy * d1.rows + i, 1 + copy * d1.cols + j) == f


def test_graded_complex_dimensions(basis_t, pack_t, homology_t):
    out = graded_A_complexes(3, basis_t, pack_t, homology_t)
    assert out["B"][1].dims == [3, 3]
    assert out["B"][2].dims == [6, 9, 3]
    assert out["C"][1].dims == [1, 1]
    assert out["C"][2].dims == [3, 3]
    assert out["C"][3].dims == [3, 3]
    assert out["A"][1].dims == [4, 4]
    assert out["A"][2].dims == [13, 19, 6]
    assert out["A"][3].dims == [41, 4 * 13 + 13, 6 * 4 + 3, 3]
    for k, rows in out["decomposition"].items():
        assert all(ok for *_, ok in rows), (k, rows)


def test_f7_block_inventory(ring_t, basis_t, pack_t):
    F = assemble_T(ring_t, basis_t, pack_t, i_max=7)
    assert [b.label() for b in F.blocks[7]] == [
        "K[3]^3 @ X[1,3]",
        "K[3]^13 @ X[2,2]", "K[2]^13 @ X[2,3]", "K[1]^12 @ X[2,4]",
        "K[2]^12 @ X[1,1]*X[1,2]", "K[1]^9 @ X[1,2]*X[1,2]",
        "K[0]^9 @ X[1,3]*X[1,2]", "K[1]^12 @ X[1,1]*X[1,3]",
        "K[0]^9 @ X[1,2]*X[1,3]",
        "K[1]^41 @ X[3,3]", "K[0]^43 @ X[3,4]",
        "K[0]^52 @ X[1,1]*X[2,3]", "K[0]^39 @ X[2,2]*X[1,2]",
    ]
    widths = [b.copies * len(subsets(3, b.kdeg)) for b in F.blocks[7]]
    assert sum(widths) == 465
