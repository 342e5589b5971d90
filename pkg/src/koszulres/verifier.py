"""Certification of assembled resolutions and the independent brute-force
syzygy oracle.

The checks are deliberately redundant: the complex property is verified as
honest matrix products over R, exactness as rank bookkeeping of the
flattened F_p maps, Betti numbers three ways (assembled block ranks, series
coefficients, oracle), and the graded-level complexes by rank conditions at
every position.
"""

from __future__ import annotations

import re
import time
import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .builder import (
    FiniteComplex,
    ResolutionAssembly,
    assemble_CI,
    assemble_T,
    graded_A_complexes,
)
from .exactfield import (
    QuotientRing,
    RingMatrix,
    kernel_mod,
    mod_matmul,
    pivot_columns_mod,
    rank_mod,
)
from .homology import (
    ClassCIBasis,
    ClassTBasis,
    ClassVerificationError,
    DiscoveryError,
    HomologyAlgebra,
    discover_class_CI_basis,
    discover_class_T_basis,
    verify_class_CI,
    verify_class_T,
)
from .koszul import parse_koszul_element, subsets
from .sequences import SequencePack, poincare_CI, poincare_T


@dataclass
class CheckSection:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    failure: str | None = None
    seconds: float = 0.0


@dataclass
class VerificationReport:
    sections: list = field(default_factory=list)
    sign_regime: str | None = None
    exactness_range: tuple | None = None

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)

    def add(self, section: CheckSection):
        self.sections.append(section)
        return section

    def section(self, name: str) -> CheckSection | None:
        for s in self.sections:
            if s.name == name:
                return s
        return None

    def to_dict(self, include_timings: bool = True) -> dict:
        sections = []
        for s in self.sections:
            entry = {
                "name": s.name,
                "passed": s.passed,
                "details": _jsonable(s.details),
                "failure": s.failure,
            }
            if include_timings:
                entry["seconds"] = round(s.seconds, 3)
            sections.append(entry)
        return {
            "passed": self.passed,
            "sign_regime": self.sign_regime,
            "exactness_range": list(self.exactness_range) if self.exactness_range else None,
            "sections": sections,
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------


def check_complex(F: ResolutionAssembly, ring: QuotientRing) -> CheckSection:
    """d_i . d_{i+1} = 0 as RingMatrix products for every consecutive pair."""
    t0 = time.time()
    for i in range(1, F.i_max):
        prod = F.diff(i) @ F.diff(i + 1)
        if not prod.is_zero():
            r, c = sorted(prod.entries)[0]
            return CheckSection(
                "complex", False,
                {"degree_pair": (i, i + 1)},
                failure=f"(d_{i} d_{i+1}) has nonzero entry at "
                        f"({_block_coord(F, i - 1, r)}, {_block_coord(F, i + 1, c)})",
                seconds=time.time() - t0)
    return CheckSection("complex", True,
                        {"pairs_checked": F.i_max - 1}, seconds=time.time() - t0)


def _block_coord(F: ResolutionAssembly, k: int, flat_index: int) -> str:
    """Locate a row/column index of d within the block inventory of F_k."""
    off = 0
    n = F.ring.nvars
    for b in F.blocks[k]:
        width = b.copies * len(subsets(n, b.kdeg))
        if flat_index < off + width:
            return f"F_{k} block {b.label()} offset {flat_index - off}"
        off += width
    return f"F_{k} index {flat_index}"


def check_minimality(F: ResolutionAssembly, ring: QuotientRing) -> CheckSection:
    """Every entry of every differential lies in the maximal ideal."""
    t0 = time.time()
    for i in range(1, F.i_max + 1):
        d = F.diff(i)
        bad = d.first_unit_entry()
        if bad is not None:
            return CheckSection(
                "minimality", False, {"degree": i},
                failure=f"d_{i} entry at {bad} has a unit constant term",
                seconds=time.time() - t0)
    return CheckSection("minimality", True,
                        {"degrees_checked": F.i_max}, seconds=time.time() - t0)


def check_exactness(F: ResolutionAssembly, ring: QuotientRing,
                    i_max: int | None = None) -> CheckSection:
    """Vanishing homology of the flattened complex in degrees 1..i_max-1 and
    a one-dimensional cokernel at degree 0.

    Flattened matrices are produced and ranked one degree at a time so the
    peak footprint is a single matrix (the top-degree ones are large)."""
    t0 = time.time()
    i_max = i_max if i_max is not None else F.i_max
    p = ring.p
    ranks = {}
    cols = {}
    for i in range(1, i_max + 1):
        flat = F.diff(i).flatten()
        cols[i] = flat.shape[1]
        ranks[i] = rank_mod(flat, p)
        del flat
    details = {"flat_ranks": {i: int(r) for i, r in ranks.items()}}
    h0 = ring.dim - ranks[1]
    details["h0_dimension"] = int(h0)
    if h0 != 1:
        return CheckSection("exactness", False, details,
                            failure=f"coker d_1 has dimension {h0}, expected 1",
                            seconds=time.time() - t0)
    homology = {}
    for i in range(1, i_max):
        ker = cols[i] - ranks[i]
        h = ker - ranks[i + 1]
        homology[i] = int(h)
        if h != 0:
            details["homology"] = homology
            return CheckSection(
                "exactness", False, details,
                failure=f"homology at degree {i} has dimension {h}",
                seconds=time.time() - t0)
    details["homology"] = homology
    return CheckSection("exactness", True, details, seconds=time.time() - t0)


def check_block_ranks(F: ResolutionAssembly, expected: list) -> CheckSection:
    """Assembled component ranks against the Poincare series coefficients."""
    got = F.ranks[: len(expected)]
    ok = got == list(expected[: len(got)])
    return CheckSection(
        "betti_vs_series", ok,
        {"assembled": [int(r) for r in got],
         "series": [int(r) for r in expected[: len(got)]]},
        failure=None if ok else "assembled ranks differ from series coefficients")


def check_graded_exactness(complexes: dict) -> CheckSection:
    """Every B_k, C_j, A_k complex is exact at every position (ends included),
    and the A_k dimension decompositions match."""
    t0 = time.time()
    details: dict = {}
    for family in ("B", "C", "A"):
        for k, cx in complexes[family].items():
            ok, msg, dims = _finite_complex_exact(cx)
            details[f"{family}_{k}"] = {"dims": dims, "exact": ok}
            if not ok:
                return CheckSection(
                    "graded_exactness", False, details,
                    failure=f"{cx.name}: {msg}", seconds=time.time() - t0)
    for k, rows in complexes["decomposition"].items():
        bad = [row for row in rows if not row[3]]
        details[f"decomposition_{k}"] = [tuple(int(x) for x in row[:3]) + (row[3],)
                                         for row in rows]
        if bad:
            return CheckSection(
                "graded_exactness", False, details,
                failure=f"A_{k} decomposition dimensions disagree at "
                        f"position {bad[0][0]}: {bad[0][1]} vs {bad[0][2]}",
                seconds=time.time() - t0)
    return CheckSection("graded_exactness", True, details, seconds=time.time() - t0)


def _finite_complex_exact(cx: FiniteComplex):
    """Exactness of a finite complex by rank bookkeeping.

    With maps d_t : V_t -> V_{t+1} (t = 0 the top), exactness everywhere means
    rank d_0 = dim V_0 (injective at the top), rank d_t + rank d_{t+1} =
    dim V_{t+1} in the middle, and rank d_last = dim V_last (surjective at
    the bottom)."""
    p = cx.p
    dims = [int(d) for d in cx.dims]
    for t, M in enumerate(cx.maps):
        if M.shape != (dims[t + 1], dims[t]):
            return False, f"map {t} has shape {M.shape}, expected " \
                          f"({dims[t + 1]}, {dims[t]})", dims
    for t in range(len(cx.maps) - 1):
        prod = mod_matmul(cx.maps[t + 1], cx.maps[t], p)
        if np.any(prod):
            return False, f"composite of maps {t} and {t + 1} is nonzero", dims
    ranks = [rank_mod(M, p) for M in cx.maps]
    if not ranks:
        return dims[0] == 0, "empty complex must be zero", dims
    if ranks[0] != dims[0]:
        return False, f"not exact at the top: rank {ranks[0]} < dim {dims[0]}", dims
    for t in range(len(ranks) - 1):
        if ranks[t] + ranks[t + 1] != dims[t + 1]:
            return False, (f"not exact at position {cx.top_position - t - 1}: "
                           f"{ranks[t]} + {ranks[t + 1]} != {dims[t + 1]}"), dims
    if ranks[-1] != dims[-1]:
        return False, (f"not exact at the bottom: rank {ranks[-1]} "
                       f"< dim {dims[-1]}"), dims
    return True, "", dims


# ---------------------------------------------------------------------------
# the brute-force syzygy oracle
# ---------------------------------------------------------------------------


@dataclass
class OracleResolution:
    betti: list
    differentials: list  # RingMatrix d_1, d_2, ...


ORACLE_COST_WARNING = 20000  # flattened kernel columns


def oracle_resolution(ring: QuotientRing, i_max: int) -> OracleResolution:
    """Bare-hands minimal resolution of the residue field: repeatedly take the
    kernel of the flattened differential and extract a Nakayama-minimal
    generating set (kernel vectors independent modulo m . kernel), lifting the
    chosen vectors back to R-columns.  Only generator choices that are
    deterministic under echelon ordering are used.  Cost grows with the Betti
    numbers; a warning is emitted past ORACLE_COST_WARNING kernel columns."""
    p = ring.p
    D = ring.dim
    var_mults = [ring.mult_matrix(v) for v in ring.variables()]
    d1 = RingMatrix(ring, 1, ring.nvars,
                    {(0, v): ring.variable(v) for v in range(ring.nvars)})
    betti = [1, ring.nvars]
    diffs = [d1]
    current = d1
    for step in range(2, i_max + 1):
        flat = current.flatten()
        ker = kernel_mod(flat, p)  # (cols*D) x nullity
        if ker.shape[1] > ORACLE_COST_WARNING:
            warnings.warn(
                f"oracle step {step}: kernel has {ker.shape[1]} columns; "
                "this will be slow", RuntimeWarning, stacklevel=2)
        m_cols = _m_multiples(ker, var_mults, current.cols, D, p)
        stacked = np.hstack([m_cols, ker]) if m_cols.size else ker
        _, piv = pivot_columns_mod(stacked, p)
        offset = m_cols.shape[1]
        chosen = [c - offset for c in piv if c >= offset]
        columns = [ker[:, c] for c in chosen]
        betti.append(len(columns))
        entries = {}
        for j, vec in enumerate(columns):
            for r in range(current.cols):
                f = ring.element_from_vector(vec[r * D:(r + 1) * D])
                if not f.is_zero():
                    entries[(r, j)] = f
        current = RingMatrix(ring, current.cols, len(columns), entries)
        diffs.append(current)
    return OracleResolution(betti[: i_max + 1], diffs)


def _m_multiples(ker: np.ndarray, var_mults, ncoords: int, D: int, p: int) -> np.ndarray:
    """Columns spanning m . (column span of ker) inside R^ncoords."""
    if ker.shape[1] == 0:
        return np.zeros((ker.shape[0], 0), dtype=np.int64)
    blocks = []
    for X in var_mults:
        out = np.zeros_like(ker)
        for r in range(ncoords):
            sl = slice(r * D, (r + 1) * D)
            out[sl] = mod_matmul(X, ker[sl], p)
        blocks.append(out)
    return np.hstack(blocks)


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------


def resolve_basis(ring: QuotientRing, mode: str, cycle_strings: dict,
                  H: HomologyAlgebra):
    """Build (mode, basis) from supplied representatives or discovery."""
    if mode == "auto":
        c = H.codepth
        if all(H.rank(i) == comb(c, i) for i in range(c + 1)):
            mode = "CI"
        elif c == 3:
            mode = "T"
        else:
            raise DiscoveryError(
                f"cannot classify homology ranks {tuple(H.ranks)} automatically; "
                "pass mode=T or mode=CI")
    if mode == "T":
        if cycle_strings:
            basis = basis_from_strings(ring, cycle_strings, class_t=True)
            cert = verify_class_T(basis, ring, H)
        else:
            basis = discover_class_T_basis(ring, H)
            cert = verify_class_T(basis, ring, H)
        if not cert.passed:
            raise ClassVerificationError(_cert_message("T", cert))
        return "T", basis, cert
    if mode == "CI":
        if cycle_strings:
            basis = basis_from_strings(ring, cycle_strings, class_t=False)
            cert = verify_class_CI(basis, ring, H)
        else:
            basis = discover_class_CI_basis(ring, H)
            cert = verify_class_CI(basis, ring, H)
        if not cert.passed:
            raise ClassVerificationError(_cert_message("CI", cert))
        return "CI", basis, cert
    raise ValueError(f"unknown mode {mode!r}")


def _cert_message(kind, cert):
    fails = "; ".join(f"{c.description} ({c.detail})" if c.detail else c.description
                      for c in cert.failures())
    return f"class {kind} verification failed: {fails}"


def basis_from_strings(ring, cycle_strings, class_t: bool):
    groups: dict = {1: {}, 2: {}, 3: {}}
    for name, text in cycle_strings.items():
        m = re.fullmatch(r"z([123])_([0-9]+)", name)
        if not m:
            raise ValueError(f"bad cycle name {name!r}")
        deg, idx = int(m.group(1)), int(m.group(2))
        groups[deg][idx] = parse_koszul_element(text, ring)

    def ordered(deg):
        d = groups[deg]
        if sorted(d) != list(range(1, len(d) + 1)):
            raise ValueError(f"cycle indices for degree {deg} must be 1..{len(d)}")
        return [d[i] for i in sorted(d)]

    if class_t:
        return ClassTBasis(z1=ordered(1), z2=ordered(2), z3=ordered(3))
    if groups[2] or groups[3]:
        raise ClassVerificationError(
            "class CI verification failed: a complete-intersection basis has "
            "degree-1 representatives only, but degree-2/3 cycles were supplied")
    return ClassCIBasis(z1=ordered(1))


def full_verify(ring: QuotientRing, mode: str = "auto", i_max: int = 8,
                cycle_strings: dict | None = None, oracle_depth: int | None = None,
                series_order: int | None = None,
                force_regime: tuple | None = None) -> tuple:
    """Run the whole pipeline: class certification, assembly, complex /
    minimality / exactness checks, series cross-checks, graded-level
    exactness (class T), and optionally the oracle comparison.

    Returns (report, assembly, basis).
    """
    report = VerificationReport()
    H = HomologyAlgebra(ring)
    mode, basis, cert = resolve_basis(ring, mode, cycle_strings or {}, H)
    report.add(CheckSection(
        "class_certificate", cert.passed,
        {"kind": mode, "checks": len(cert.checks),
         "homology_ranks": [int(a) for a in H.ranks]}))
    order = max(series_order if series_order is not None else 10, i_max)
    if mode == "T":
        a1, a2, a3 = H.rank(1), H.rank(2), H.rank(3)
        pack = SequencePack(3, a1, a2, a3, k_max=max(12, i_max))
        _, PR = poincare_T(a1, a2, a3, ring.nvars, order)
        F = assemble_T(ring, basis, pack, i_max, force_regime=force_regime)
        complexes = graded_A_complexes(min(5, max(2, i_max // 2 + 1)), basis, pack, H)
        report.add(check_graded_exactness(complexes))
    else:
        c = H.codepth
        _, PR = poincare_CI(c, ring.nvars, order)
        F = assemble_CI(ring, basis, c, i_max)
    report.sign_regime = F.sign_regime
    report.exactness_range = (0, i_max)
    expected = [PR.coefficient(k) for k in range(i_max + 1)]
    report.add(check_block_ranks(F, expected))
    report.add(check_complex(F, ring))
    report.add(check_minimality(F, ring))
    report.add(check_exactness(F, ring, i_max))
    if oracle_depth:
        oracle = oracle_resolution(ring, oracle_depth)
        ok = oracle.betti == F.ranks[: oracle_depth + 1]
        report.add(CheckSection(
            "oracle", ok,
            {"oracle_betti": [int(x) for x in oracle.betti],
             "assembled": [int(x) for x in F.ranks[: oracle_depth + 1]]},
            failure=None if ok else "oracle Betti numbers disagree"))
    return report, F, basis
