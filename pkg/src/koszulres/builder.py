"""Construction of the resolution data: the word-indexed cycle matrices
beta_k / beta'_k, the gamma row vectors, the alpha family and its Delta / phi
block aggregates, the tree-indexed complexes C^(k), the assembled minimal
free resolution F of the residue field (class T and complete intersection),
and the finite complexes of homology classes used for graded-level exactness
checks.

Block-sign bookkeeping, fixed by the d^2 = 0 arbiter (see assemble_T): the
diagonal Koszul block of the component indexed by a tree monomial m carries
the sign (-1)^(deg1 m + deg2 m) - the parity of the block's total homological
shift inside F - and the arrow blocks all carry a global phi sign.  Both
knobs are searched over and the surviving combination is frozen into the
assembly and reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exactfield import QuotientRing, RingMatrix, solve_mod
from .homology import ClassCIBasis, ClassTBasis, HomologyAlgebra
from .koszul import (
    CycleMatrix,
    cycle_matrix_action,
    koszul_differential,
    subsets,
)
from .sequences import (
    SequencePack,
    TreeMonomial,
    UNIT_MONOMIAL,
    arrow_target,
    tree_layer,
)


class BuildError(ValueError):
    pass


class AssemblyError(BuildError):
    """d^2 = 0 failed under every sign regime, or a structural precondition
    of the block construction is violated."""


# ---------------------------------------------------------------------------
# word indexing
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def words(c: int, k: int) -> tuple:
    """Non-decreasing words of length k over {1..c}, lexicographic order."""
    if k < 0:
        return ()
    return tuple(itertools.combinations_with_replacement(range(1, c + 1), k))


def bracket(word: tuple) -> tuple:
    """Re-sort an index word non-decreasingly."""
    return tuple(sorted(word))


# ---------------------------------------------------------------------------
# beta, beta', gamma
# ---------------------------------------------------------------------------


def beta(k: int, c: int, cycles) -> CycleMatrix:
    """The b_{k-1} x b_k matrix with entry z^1_u at (v-word, u-word) whenever
    the u-word is the sorted extension [v-word . u]."""
    if k < 0:
        raise BuildError("beta needs k >= 0")
    if len(cycles) != c:
        raise BuildError(f"beta over codepth {c} needs {c} degree-1 cycles")
    ring = cycles[0].ring if cycles else None
    rows = words(c, k - 1)
    cols = words(c, k)
    if k == 0:
        return CycleMatrix(ring, 0, 1, 1)
    col_index = {w: j for j, w in enumerate(cols)}
    entries = {}
    for i, v in enumerate(rows):
        for u in range(1, c + 1):
            j = col_index[bracket(v + (u,))]
            entries[(i, j)] = cycles[u - 1]
    return CycleMatrix(ring, len(rows), len(cols), 1, entries)


def beta_prime(k: int, triple) -> CycleMatrix:
    """The b_{k-1} x b_{k-2} matrix (codepth 3) with entry z^1_{u'} ^ z^1_{u''}
    at (u-word, v-word) whenever u-word = [v-word . u], where {u', u''} is the
    complement of u in {1,2,3}."""
    if len(triple) != 3:
        raise BuildError("beta_prime needs the distinguished triple")
    ring = triple[0].ring
    if k < 2:
        return CycleMatrix(ring, len(words(3, k - 1)), len(words(3, k - 2)), 2)
    rows = words(3, k - 1)
    cols = words(3, k - 2)
    entries = {}
    complements = {1: (2, 3), 2: (1, 3), 3: (1, 2)}
    wedges = {u: triple[a - 1].wedge(triple[b - 1])
              for u, (a, b) in complements.items()}
    row_index = {w: i for i, w in enumerate(rows)}
    for j, v in enumerate(cols):
        for u in (1, 2, 3):
            i = row_index[bracket(v + (u,))]
            entries[(i, j)] = wedges[u]
    return CycleMatrix(ring, len(rows), len(cols), 2, entries)


def gamma(j: int, basis: ClassTBasis) -> CycleMatrix:
    """gamma_1 = (z1_4 ... z1_{a1}), gamma_2 = (z2_*), gamma_3 = (z3_*) as
    1 x count row vectors of cycles of degree j."""
    if j == 1:
        cycles = basis.z1[3:]
    elif j == 2:
        cycles = basis.z2
    elif j == 3:
        cycles = basis.z3
    else:
        raise BuildError(f"gamma index must be 1, 2 or 3 (got {j})")
    ring = basis.z1[0].ring
    entries = {(0, c): z for c, z in enumerate(cycles)}
    return CycleMatrix(ring, 1, len(cycles), j, entries)


# ---------------------------------------------------------------------------
# the alpha family
# ---------------------------------------------------------------------------


def alpha(k: int, r: int, pack: SequencePack, basis: ClassTBasis) -> CycleMatrix:
    """alpha_{k,r} for r in {k, k+1, k+2}: the three block shapes

        alpha_k   = (beta_k^{d_0} + ... + beta_1^{d_{k-1}} | gamma_1^{l_{k-1}})
        alpha'_k  = (beta'-sum with zero rows on the beta_1 row group | gamma_2^{l_{k-1}})
        alpha''_k = gamma_3^{l_{k-1}}

    with extents l_{k-1} x l_{k,r} checked against the sequence tables."""
    if k < 1:
        raise BuildError("alpha needs k >= 1")
    if r not in (k, k + 1, k + 2):
        raise BuildError(f"alpha_{{k,r}} needs r in {{k, k+1, k+2}}, got r={r}")
    ring = basis.z1[0].ring
    triple = basis.triple
    rows = pack.l[k - 1]
    entries: dict = {}
    if r == k:
        cols_expected = pack.l[k]
        col = 0
        row = 0
        for t in range(k):
            bt = beta(k - t, 3, triple)
            for _ in range(pack.d[t]):
                for (i, j), z in bt.entries.items():
                    entries[(row + i, col + j)] = z
                row += bt.rows
                col += bt.cols
        g1 = gamma(1, basis)
        for s0 in range(rows):
            for (_, j), z in g1.entries.items():
                entries[(s0, col + j)] = z
            col += g1.cols
        degree = 1
    elif r == k + 1:
        cols_expected = pack.lp[k]
        col = 0
        row = 0
        for t in range(k - 1):
            bp = beta_prime(k - t, triple)
            for _ in range(pack.d[t]):
                for (i, j), z in bp.entries.items():
                    entries[(row + i, col + j)] = z
                row += bp.rows
                col += bp.cols
        # the beta_1^{d_{k-1}} row group receives no beta' input: zero rows
        assert col == (pack.l[k - 2] if k >= 2 else 0)
        g2 = gamma(2, basis)
        for s0 in range(rows):
            for (_, j), z in g2.entries.items():
                entries[(s0, col + j)] = z
            col += g2.cols
        degree = 2
    else:
        cols_expected = pack.lpp[k]
        col = 0
        g3 = gamma(3, basis)
        for s0 in range(rows):
            for (_, j), z in g3.entries.items():
                entries[(s0, col + j)] = z
            col += g3.cols
        degree = 3
    if col != cols_expected:
        raise AssemblyError(
            f"alpha_{{{k},{r}}} extent mismatch: built {col} columns, "
            f"tables give {cols_expected}")
    return CycleMatrix(ring, rows, cols_expected, degree, entries, check=False)


@dataclass
class Delta:
    """Horizontal concatenation (alpha_{k,k} | alpha_{k,k+1} | alpha_{k,k+2});
    the three column blocks carry entry degrees 1, 2, 3."""

    k: int
    parts: tuple  # (alpha_{k,k}, alpha_{k,k+1}, alpha_{k,k+2})

    @property
    def rows(self):
        return self.parts[0].rows

    @property
    def cols(self):
        return sum(a.cols for a in self.parts)


def delta(k: int, pack: SequencePack, basis: ClassTBasis) -> Delta:
    return Delta(k, tuple(alpha(k, r, pack, basis) for r in (k, k + 1, k + 2)))


def phi_blocks(m: int) -> list:
    """Diagonal block structure of phi^(m): ordered (j, n) pairs, each one a
    Delta_j repeated deg3(n) times, covering the three sources X_{j,r}.n going
    to the target X_{j-1,j-1}.n; sources in this order are exactly
    tree_layer(m)."""
    if m < 1:
        raise BuildError("phi needs m >= 1")
    out = [(m, UNIT_MONOMIAL)]
    for j in range(m - 1, 0, -1):
        for s in (j + 1, j + 2):
            for jb, nb in phi_blocks(m - j):
                out.append((jb, TreeMonomial(nb.factors + ((j, s),))))
    return out


def phi(m: int, pack: SequencePack, basis: ClassTBasis) -> list:
    """phi^(m) as a list of (Delta_j, repeat count, source monomials, target
    monomial) in block-diagonal order; a structural bijection with
    tree_layer(m) (sources) and tree_layer(m-1) (targets) is asserted."""
    blocks = []
    sources_flat = []
    targets = []
    deltas: dict = {}
    for j, n in phi_blocks(m):
        if j not in deltas:
            deltas[j] = delta(j, pack, basis)
        d = deltas[j]
        srcs = [TreeMonomial(((j, r),) + n.factors) for r in (j, j + 1, j + 2)]
        tgt = arrow_target(srcs[0])
        blocks.append((d, n.deg3(pack), srcs, tgt))
        sources_flat.extend(srcs)
        targets.append(tgt)
    if list(tree_layer(m)) != sources_flat:
        raise AssemblyError(f"phi^{m} domain blocks do not match tree layer {m}")
    if len(sources_flat) != 3 ** m or len(set(targets)) != len(targets):
        raise AssemblyError(f"phi^{m} layer sizes are inconsistent")
    return blocks


def component_C(k: int, pack: SequencePack) -> list:
    """Ordered block description of C^(k): (monomial, shift deg2, copies deg3)
    for every layer-k monomial; C^(0) is the unshifted Koszul complex."""
    return [(m, m.deg2, m.deg3(pack)) for m in tree_layer(k)]


# ---------------------------------------------------------------------------
# assembled resolutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """One Koszul block K_kdeg^{copies} of some F_degree; identified across
    adjacent degrees by (monomial/ci-index, kdeg)."""

    key: object        # TreeMonomial (class T) or int j (CI)
    kdeg: int
    copies: int
    shift: int         # total homological shift of the block inside F

    def label(self) -> str:
        return f"K[{self.kdeg}]^{self.copies} @ {self.key}"


@dataclass
class ResolutionAssembly:
    mode: str                       # "T" or "CI"
    ring: QuotientRing
    i_max: int
    blocks: list                    # blocks[k] = ordered list of Block
    differentials: list             # differentials[k] = RingMatrix d_{k+1}... see diff()
    ranks: list
    sign_regime: str

    def diff(self, i: int) -> RingMatrix:
        """d^F_i : F_i -> F_{i-1} for 1 <= i <= i_max."""
        if not 1 <= i <= self.i_max:
            raise BuildError(f"differential index {i} outside [1, {self.i_max}]")
        return self.differentials[i - 1]

    def block_inventory(self):
        return [
            [(str(b.key), b.shift, b.copies, b.kdeg) for b in self.blocks[k]]
            for k in range(self.i_max + 1)
        ]


def _class_t_blocks(k: int, pack: SequencePack, n: int) -> list:
    out = []
    for j in range(0, k // 2 + 1):
        for m in tree_layer(j):
            i = k - j - m.deg2
            if 0 <= i <= n:
                copies = m.deg3(pack)
                if copies:
                    out.append(Block(m, i, copies, m.deg1 + m.deg2))
    return out


def _diag_sign(shift: int, regime: str, m: TreeMonomial | None = None) -> int:
    if regime == "total":
        return (-1) ** shift
    if regime == "deg2":
        assert m is not None
        return (-1) ** m.deg2
    raise BuildError(f"unknown sign regime {regime!r}")


def _place(entries: dict, sub: RingMatrix, r0: int, c0: int, sign: int = 1):
    for (i, j), f in sub.entries.items():
        key = (r0 + i, c0 + j)
        g = f if sign == 1 else f.scale(sign)
        entries[key] = entries[key] + g if key in entries else g


def _assemble_T_diff(ring, pack, basis, blocks_lo, blocks_hi, regime, phi_sign,
                     alphas):
    """One differential F_hi -> F_lo from the block inventories."""
    n = ring.nvars
    row_offset = {}
    off = 0
    for b in blocks_lo:
        row_offset[(b.key, b.kdeg)] = off
        off += b.copies * len(subsets(n, b.kdeg))
    rows_total = off
    entries: dict = {}
    col = 0
    for b in blocks_hi:
        width = b.copies * len(subsets(n, b.kdeg))
        # diagonal Koszul block
        if b.kdeg >= 1:
            tgt = row_offset.get((b.key, b.kdeg - 1))
            if tgt is not None:
                base = koszul_differential(b.kdeg, ring)
                sign = _diag_sign(b.shift, regime, b.key)
                for copy in range(b.copies):
                    _place(entries, base, tgt + copy * base.rows,
                           col + copy * base.cols, sign)
        # arrow block along the tree
        head = b.key.head
        if head is not None:
            j, r, tail = head
            target_m = arrow_target(b.key)
            theta = alphas[(j, r)]
            i_tgt = b.kdeg + (r - j + 1)
            tgt = row_offset.get((target_m, i_tgt))
            if tgt is not None:
                act = cycle_matrix_action(theta, i_tgt, ring)
                reps = tail.deg3(pack)
                assert theta.cols * reps * len(subsets(n, b.kdeg)) == width
                for copy in range(reps):
                    _place(entries, act, tgt + copy * act.rows,
                           col + copy * act.cols, phi_sign)
        col += width
    return RingMatrix(ring, rows_total, col, entries, reduce=False)


_SIGN_REGIMES = (("total", 1), ("total", -1), ("deg2", 1), ("deg2", -1))


def assemble_T(ring: QuotientRing, basis: ClassTBasis, pack: SequencePack,
               i_max: int = 8, force_regime: tuple | None = None) -> ResolutionAssembly:
    """Assemble the class-T resolution F through homological degree i_max.

    The degree-1 representatives outside the distinguished triple must have
    literally vanishing wedge products in K_2 (not merely vanishing classes);
    this is checked up front because no sign choice can repair it.  The sign
    regime (diagonal-shift rule x global phi sign) is selected by checking
    d^2 = 0 on low degrees, then frozen; pass force_regime to bypass the
    search (used by the negative controls).
    """
    if i_max < 1:
        raise BuildError("i_max must be >= 1")
    _check_literal_products(basis)
    kmax_needed = i_max // 2 + 1
    if pack.k_max < kmax_needed:
        pack = SequencePack(3, pack.a1, pack.a2, pack.a3, k_max=max(12, kmax_needed))
    alphas = {}
    for j in range(1, i_max // 2 + 2):
        for r in (j, j + 1, j + 2):
            alphas[(j, r)] = alpha(j, r, pack, basis)
    blocks = [_class_t_blocks(k, pack, ring.nvars) for k in range(i_max + 1)]
    ranks = [sum(b.copies * len(subsets(ring.nvars, b.kdeg)) for b in bl)
             for bl in blocks]

    def build(regime, phi_sign, through):
        return [
            _assemble_T_diff(ring, pack, basis, blocks[k - 1], blocks[k],
                             regime, phi_sign, alphas)
            for k in range(1, through + 1)
        ]

    if force_regime is not None:
        regime, phi_sign = force_regime
        diffs = build(regime, phi_sign, i_max)
        label = _regime_label(regime, phi_sign) + " (forced)"
        return ResolutionAssembly("T", ring, i_max, blocks, diffs, ranks, label)

    probe_depth = min(i_max, 4)
    chosen = None
    first_failure = None
    for regime, phi_sign in _SIGN_REGIMES:
        diffs = build(regime, phi_sign, probe_depth)
        bad = _first_d2_failure(diffs)
        if bad is None:
            chosen = (regime, phi_sign)
            break
        if first_failure is None:
            first_failure = bad
    if chosen is None:
        raise AssemblyError(
            "d^2 = 0 fails under every sign regime; first offending product "
            f"at degree pair {first_failure[0]}, entry {first_failure[1]}")
    regime, phi_sign = chosen
    diffs = build(regime, phi_sign, i_max)
    return ResolutionAssembly("T", ring, i_max, blocks, diffs, ranks,
                              _regime_label(regime, phi_sign))


def _regime_label(regime, phi_sign):
    diag = "(-1)^(deg1+deg2)" if regime == "total" else "(-1)^deg2"
    return f"diagonal {diag}, phi {'+' if phi_sign == 1 else '-'}1"


def _first_d2_failure(diffs):
    for k in range(len(diffs) - 1):
        prod = diffs[k] @ diffs[k + 1]
        if not prod.is_zero():
            return (k + 1, sorted(prod.entries)[0])
    return None


def _check_literal_products(basis: ClassTBasis):
    z1 = basis.z1
    for u in range(len(z1)):
        for v in range(u + 1, len(z1)):
            if u < 3 and v < 3:
                continue
            if not z1[u].wedge(z1[v]).is_zero():
                raise AssemblyError(
                    f"representatives z1_{u+1} and z1_{v+1} have a nonzero "
                    "wedge product in K_2; the block construction needs these "
                    "products to vanish literally - adjust the representatives")


def assemble_CI(ring: QuotientRing, basis: ClassCIBasis, c: int,
                i_max: int = 8) -> ResolutionAssembly:
    """Complete-intersection resolution: F_i = K_i + K_{i-2}^{b_1} + ..., with
    Koszul differentials on the diagonal and beta_{j+1} on the superdiagonal.
    All block shifts are even, so every diagonal sign is +1."""
    if len(basis.z1) != c:
        raise BuildError(f"CI assembly over codepth {c} needs {c} cycles")
    n = ring.nvars
    pack = SequencePack(c, class_t=False, k_max=max(12, i_max))
    betas = {j: beta(j, c, basis.z1) for j in range(1, i_max // 2 + 2)}
    blocks = []
    for k in range(i_max + 1):
        bl = []
        for j in range(0, k // 2 + 1):
            i = k - 2 * j
            if 0 <= i <= n:
                bl.append(Block(j, i, pack.b[j], 2 * j))
        blocks.append(bl)
    ranks = [sum(b.copies * len(subsets(n, b.kdeg)) for b in bl) for bl in blocks]
    diffs = []
    for k in range(1, i_max + 1):
        row_offset = {}
        off = 0
        for b in blocks[k - 1]:
            row_offset[(b.key, b.kdeg)] = off
            off += b.copies * len(subsets(n, b.kdeg))
        entries: dict = {}
        col = 0
        for b in blocks[k]:
            width = b.copies * len(subsets(n, b.kdeg))
            if b.kdeg >= 1:
                tgt = row_offset.get((b.key, b.kdeg - 1))
                if tgt is not None:
                    base = koszul_differential(b.kdeg, ring)
                    for copy in range(b.copies):
                        _place(entries, base, tgt + copy * base.rows,
                               col + copy * base.cols)
            if b.key >= 1:
                tgt = row_offset.get((b.key - 1, b.kdeg + 1))
                if tgt is not None:
                    act = cycle_matrix_action(betas[b.key], b.kdeg + 1, ring)
                    _place(entries, act, tgt, col)
            col += width
        diffs.append(RingMatrix(ring, off, col, entries, reduce=False))
    return ResolutionAssembly("CI", ring, i_max, blocks, diffs, ranks,
                              "diagonal +1 (even shifts), beta +1")


# ---------------------------------------------------------------------------
# graded-level complexes of homology classes
# ---------------------------------------------------------------------------


@dataclass
class FiniteComplex:
    """A finite complex of F_p spaces: positions[t] is the dimension at
    homological position pos_top - t and maps[t] : positions[t] ->
    positions[t+1] (numpy matrices acting on column vectors)."""

    name: str
    top_position: int
    dims: list
    maps: list
    p: int


class _ClassCalculator:
    """Coordinates and multiplication tables in the homology basis.  Results
    are cached per cycle object (the block matrices share entry objects)."""

    def __init__(self, H: HomologyAlgebra):
        self.H = H
        self.p = H.ring.p
        self._coords: dict = {}
        self._mult: dict = {}

    def _class_of(self, z):
        key = id(z)
        hit = self._coords.get(key)
        if hit is None:
            hit = (z, self.H.class_of(z))
            self._coords[key] = hit
        return hit[1]

    def coords_matrix(self, theta: CycleMatrix, rows, cols) -> np.ndarray:
        """Entries as A_{deg}-coordinate columns: (a_deg * rows) x cols."""
        a = self.H.rank(theta.entry_degree)
        M = np.zeros((a * rows, cols), dtype=np.int64)
        for (r, c), z in theta.entries.items():
            M[r * a:(r + 1) * a, c] = self._class_of(z)
        return M

    def _mult_block(self, z, q):
        key = (id(z), q)
        hit = self._mult.get(key)
        if hit is None:
            a_src = self.H.rank(q)
            a_dst = self.H.rank(q + z.degree)
            blk = np.zeros((a_dst, a_src), dtype=np.int64)
            for v, w in enumerate(self.H.reps[q]):
                blk[:, v] = self.H.product_class(z, w)
            hit = (z, blk)
            self._mult[key] = hit
        return hit[1]

    def mult_matrix(self, theta: CycleMatrix, q: int, rows, cols) -> np.ndarray:
        """Entrywise multiplication maps A_q^cols -> A_{q+deg}^rows."""
        a_src = self.H.rank(q)
        a_dst = self.H.rank(q + theta.entry_degree)
        M = np.zeros((a_dst * rows, a_src * cols), dtype=np.int64)
        for (r, c), z in theta.entries.items():
            M[r * a_dst:(r + 1) * a_dst, c * a_src:(c + 1) * a_src] = \
                self._mult_block(z, q)
        return M


def _solve_coords(target_cols: np.ndarray, vec: np.ndarray, p: int) -> np.ndarray:
    x = solve_mod(target_cols, vec, p)
    if x is None:
        raise BuildError("class does not lie in the expected subspace")
    x = np.atleast_1d(np.asarray(x, dtype=np.int64))
    return x % p


def graded_A_complexes(k_max: int, basis: ClassTBasis, pack: SequencePack,
                       H: HomologyAlgebra) -> dict:
    """The finite complexes of homology classes whose exactness certifies the
    graded resolution data: B_k (k <= k_max), C_1..C_3, A_k (k <= k_max), and
    the dimension bookkeeping of the decomposition of A_k into shifted B and C
    pieces.

    Returns {"B": {k: FiniteComplex}, "C": {...}, "A": {...},
    "decomposition": {k: [(position, lhs, rhs, ok), ...]}}.
    """
    p = H.ring.p
    calc = _ClassCalculator(H)
    triple = basis.triple
    a1, a2, a3 = H.rank(1), H.rank(2), H.rank(3)

    # B-space coordinates inside A_1 / A_2
    B1_cols = np.array([H.class_of(z) for z in triple], dtype=np.int64).T
    prods = [triple[0].wedge(triple[1]), triple[1].wedge(triple[2]),
             triple[0].wedge(triple[2])]
    B2_cols = np.array([H.class_of(z) for z in prods], dtype=np.int64).T

    def b1_coords(z):
        return _solve_coords(B1_cols, H.class_of(z), p)

    def b2_coords(z):
        return _solve_coords(B2_cols, H.class_of(z), p)

    def b_coords_matrix(theta: CycleMatrix, coords, dim):
        M = np.zeros((dim * theta.rows, theta.cols), dtype=np.int64)
        for (r, c), z in theta.entries.items():
            M[r * dim:(r + 1) * dim, c] = coords(z)
        return M

    def b_mult_matrix(theta: CycleMatrix):
        """B_1^cols -> B_2^rows by entrywise multiplication."""
        M = np.zeros((3 * theta.rows, 3 * theta.cols), dtype=np.int64)
        for (r, c), z in theta.entries.items():
            blk = np.zeros((3, 3), dtype=np.int64)
            for v in range(3):
                cls = H.product_class(z, triple[v])
                blk[:, v] = _solve_coords(B2_cols, cls, p) if np.any(cls) \
                    else np.zeros(3, dtype=np.int64)
            M[r * 3:(r + 1) * 3, c * 3:(c + 1) * 3] = blk
        return M

    out = {"B": {}, "C": {}, "A": {}, "decomposition": {}}
    b = pack.b

    for k in range(1, k_max + 1):
        bk = beta(k, 3, triple)
        bk1 = beta(k - 1, 3, triple) if k >= 1 else None
        bpk1 = beta_prime(k - 1, triple)
        b_m3 = b[k - 3] if k >= 3 else 0
        dims = [b[k], 3 * b[k - 1] + b_m3]
        d_top = np.vstack([
            b_coords_matrix(bk, b1_coords, 3),
            np.zeros((b_m3, b[k]), dtype=np.int64),
        ])
        maps = [d_top % p]
        if k >= 2:
            dims.append(3 * b[k - 2])
            left = b_mult_matrix(bk1)
            right = b_coords_matrix(bpk1, b2_coords, 3) if b_m3 else \
                np.zeros((3 * b[k - 2], 0), dtype=np.int64)
            maps.append(np.hstack([left, right]) % p)
        out["B"][k] = FiniteComplex(f"B_{k}", k, dims, maps, p)

    for j in (1, 2, 3):
        g = gamma(j, basis)
        cols = np.array([H.class_of(z) for _, z in sorted(g.entries.items())],
                        dtype=np.int64).T if g.entries else \
            np.zeros((H.rank(j), 0), dtype=np.int64)
        cnt = g.cols
        d = np.zeros((cnt, cnt), dtype=np.int64)
        for c in range(cnt):
            d[:, c] = _solve_coords(cols, cols[:, c], p) if cnt else 0
        out["C"][j] = FiniteComplex(f"C_{j}", 1, [cnt, cnt], [d], p)

    for k in range(1, k_max + 1):
        l = pack.l
        lp, lpp = pack.lp, pack.lpp
        dims = [l[k]]
        maps = []
        # position k-1
        dims.append(a1 * l[k - 1] + lp[k - 1])
        ak = alpha(k, k, pack, basis)
        d0 = np.vstack([
            calc.coords_matrix(ak, l[k - 1], l[k]),
            np.zeros((lp[k - 1], l[k]), dtype=np.int64),
        ])
        maps.append(d0 % p)
        if k >= 2:
            dims.append(a2 * l[k - 2] + lpp[k - 2])
            m_alpha = calc.mult_matrix(alpha(k - 1, k - 1, pack, basis), 1,
                                       l[k - 2], l[k - 1])
            c_alpha_p = calc.coords_matrix(alpha(k - 1, k, pack, basis),
                                           l[k - 2], lp[k - 1])
            top = np.hstack([m_alpha, c_alpha_p])
            bottom = np.zeros((lpp[k - 2], top.shape[1]), dtype=np.int64)
            maps.append(np.vstack([top, bottom]) % p)
        if k >= 3:
            dims.append(a3 * l[k - 3])
            m_alpha2 = calc.mult_matrix(alpha(k - 2, k - 2, pack, basis), 2,
                                        l[k - 3], l[k - 2])
            c_alpha_pp = calc.coords_matrix(alpha(k - 2, k, pack, basis),
                                            l[k - 3], lpp[k - 2])
            maps.append(np.hstack([m_alpha2, c_alpha_pp]) % p)
        out["A"][k] = FiniteComplex(f"A_{k}", k, dims, maps, p)
        out["decomposition"][k] = _decomposition_check(k, pack, a1, a2, a3)

    return out


def _b_complex_dims(m: int, b) -> dict:
    """Position -> dimension for B_m (positions m, m-1, m-2)."""
    if m < 1:
        return {}
    dims = {m: b[m], m - 1: 3 * b[m - 1] + (b[m - 3] if m >= 3 else 0)}
    if m >= 2:
        dims[m - 2] = 3 * b[m - 2]
    return dims


def _decomposition_check(k: int, pack: SequencePack, a1, a2, a3) -> list:
    """Dimension bookkeeping of A_k = sum_i Sigma^i B_{k-i}^{d_i} +
    sum_j Sigma^{k-j} C_j^{l_{k-j}} per homological position."""
    lhs = {
        k: pack.l[k],
        k - 1: a1 * pack.l[k - 1] + pack.lp[k - 1],
    }
    if k >= 2:
        lhs[k - 2] = a2 * pack.l[k - 2] + pack.lpp[k - 2]
    if k >= 3:
        lhs[k - 3] = a3 * pack.l[k - 3]
    rhs: dict = {}
    for i in range(k):
        bdims = _b_complex_dims(k - i, pack.b)
        for pos, dim in bdims.items():
            rhs[pos + i] = rhs.get(pos + i, 0) + pack.d[i] * dim
    c_counts = {1: a1 - 3, 2: a2 - 3, 3: a3}
    for j in (1, 2, 3):
        if k - j < 0:
            continue
        copies = pack.l[k - j]
        for pos in (1, 0):
            rhs[pos + (k - j)] = rhs.get(pos + (k - j), 0) + copies * c_counts[j]
    positions = sorted(set(lhs) | set(rhs), reverse=True)
    return [(pos, lhs.get(pos, 0), rhs.get(pos, 0),
             lhs.get(pos, 0) == rhs.get(pos, 0)) for pos in positions
            if pos >= 0]
