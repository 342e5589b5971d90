"""Command-line interface.

Subcommands:
  betti        Betti numbers from a ring file or from raw invariants.
  resolve      assemble the resolution, verify it, emit a report.
  verify       verification only (report without matrix dumps).
  demo-classt  run the built-in class-T example and print its matrices.

Exit codes: 0 all checks pass, 2 parse/input error, 3 class verification
failure, 4 mathematical verification failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

from math import comb

from . import __version__
from .builder import AssemblyError, BuildError, alpha
from .exactfield import (
    ExactFieldError,
    RingFile,
    build_ring,
    parse_ring_file,
    serialize_ring_file,
)
from .homology import ClassVerificationError, DiscoveryError, HomologyAlgebra
from .koszul import KoszulError
from .samples import CLASS_T_CYCLES, class_t_ring_file
from .sequences import (
    SequencePack,
    poincare_CI,
    poincare_T,
    sequence_tables,
    u_table,
)
from .verifier import basis_from_strings, full_verify

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CLASS = 3
EXIT_MATH = 4

LP5_NOTE = ("l'_5 = l_3 + (a_2-3) l_4 follows the recurrence; the example "
            "list printing 1347 at this position matches l'_6 and is "
            "recorded as a suspected typo (the recurrence value is kept).")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ExactFieldError, KoszulError, ValueError) as exc:
        if isinstance(exc, ClassVerificationError) or isinstance(exc, DiscoveryError):
            print(f"class verification failure: {exc}", file=sys.stderr)
            return EXIT_CLASS
        if isinstance(exc, (AssemblyError, BuildError)):
            print(f"verification failure: {exc}", file=sys.stderr)
            return EXIT_MATH
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="koszulres",
        description="minimal free resolutions of the residue field over "
                    "Artinian monomial quotient rings (class T and complete "
                    "intersections), with exact verification")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--ring", type=Path, help="ring description file")
        p.add_argument("--mode", choices=["T", "CI", "auto"], default=None,
                       help="ring class (default: the file's mode, else auto)")
        p.add_argument("--max-degree", type=int, default=None,
                       help="last homological degree to assemble")
        p.add_argument("--order", type=int, default=None,
                       help="power series truncation order")
        p.add_argument("--out", type=Path, default=None,
                       help="write the JSON report here")
        p.add_argument("--char", type=int, default=None,
                       help="override the characteristic")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp (byte-identical reruns)")

    p_betti = sub.add_parser("betti", help="Betti numbers / Poincare table")
    common(p_betti)
    p_betti.add_argument("--class-t", metavar="a1,a2,a3",
                         help="raw class-T invariants instead of a ring file")
    p_betti.add_argument("--ci", type=int, metavar="c",
                         help="raw complete-intersection codepth instead of a ring file")
    p_betti.add_argument("--n", type=int, default=None,
                         help="embedding dimension for raw invariants")
    p_betti.set_defaults(func=cmd_betti)

    p_resolve = sub.add_parser("resolve", help="assemble and fully verify")
    common(p_resolve)
    p_resolve.add_argument("--emit-matrices", action="store_true",
                           help="include differential matrices in the report")
    p_resolve.add_argument("--oracle", action="store_true",
                           help="cross-check against the brute-force syzygy oracle")
    p_resolve.add_argument("--sign-flip", action="store_true",
                           help="test hook: force the rejected sign regime")
    p_resolve.set_defaults(func=cmd_resolve)

    p_verify = sub.add_parser("verify", help="verification report only")
    common(p_verify)
    p_verify.add_argument("--oracle", action="store_true")
    p_verify.add_argument("--sign-flip", action="store_true",
                          help="test hook: force the rejected sign regime")
    p_verify.set_defaults(func=cmd_verify)

    p_demo = sub.add_parser("demo-classt",
                            help="built-in class-T example with matrix displays")
    common(p_demo)
    p_demo.set_defaults(func=cmd_demo_classt)
    return parser


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _load_ring(args, default_file: RingFile | None = None):
    if args.ring is not None:
        rf = parse_ring_file(args.ring.read_text())
    elif default_file is not None:
        rf = default_file
    else:
        raise ExactFieldError("no ring file given (use --ring)")
    ring = build_ring(rf, char_override=args.char)
    mode = args.mode or rf.mode or "auto"
    i_max = args.max_degree if args.max_degree is not None else (rf.max_degree or 8)
    order = (args.order if args.order is not None
             else (rf.series_order if rf.series_order is not None else 10))
    return rf, ring, mode, i_max, order


def _maybe_timestamp(args) -> dict:
    if getattr(args, "no_timestamp", False):
        return {}
    return {"generated_at": datetime.datetime.now(datetime.timezone.utc)
            .isoformat(timespec="seconds")}


def _emit(report_doc: dict, args):
    text = json.dumps(report_doc, indent=2, sort_keys=True)
    if args.out is not None:
        args.out.write_text(text + "\n")
    return text


def _sequence_block(pack: SequencePack, order: int) -> dict:
    hi = min(order, pack.k_max)
    return {
        "b": pack.b[: hi + 1],
        "l": pack.l[: hi + 1],
        "lp": pack.lp[: hi + 1],
        "lpp": pack.lpp[: hi + 1],
        "d": pack.d[: hi + 1],
    }


def _u_block(pack: SequencePack, k_hi: int) -> dict:
    table = u_table(k_hi, 3 * k_hi, pack)
    return {f"{k},{s}": v for (k, s), v in sorted(table.items())}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_betti(args) -> int:
    if args.class_t:
        try:
            a1, a2, a3 = (int(t) for t in args.class_t.split(","))
        except ValueError:
            raise ExactFieldError("--class-t wants three integers a1,a2,a3") from None
        n = args.n if args.n is not None else 3
        order = args.order if args.order is not None else 10
        pack = sequence_tables(3, a1, a2, a3, k_max=max(order, 12))
        _, PR = poincare_T(a1, a2, a3, n, order)
        doc = {
            "schema_version": SCHEMA_VERSION,
            "mode": "T",
            "invariants": {"n": n, "a": [1, a1, a2, a3]},
            "betti": [PR.coefficient(k) for k in range(order + 1)],
            "sequences": _sequence_block(pack, order),
            "u_table": _u_block(pack, min(5, order)),
            "notes": [LP5_NOTE],
            **_maybe_timestamp(args),
        }
    elif args.ci is not None:
        c = args.ci
        n = args.n if args.n is not None else c
        order = args.order if args.order is not None else 10
        _, PR = poincare_CI(c, n, order)
        doc = {
            "schema_version": SCHEMA_VERSION,
            "mode": "CI",
            "invariants": {"n": n, "c": c},
            "betti": [PR.coefficient(k) for k in range(order + 1)],
            **_maybe_timestamp(args),
        }
    else:
        rf, ring, mode, _, order = _load_ring(args)
        H = HomologyAlgebra(ring)
        c = H.codepth
        if mode == "auto":
            mode = "CI" if all(H.rank(i) == comb(c, i) for i in range(c + 1)) else "T"
        if mode == "T":
            a1, a2, a3 = H.rank(1), H.rank(2), H.rank(3)
            pack = sequence_tables(3, a1, a2, a3, k_max=max(order, 12))
            _, PR = poincare_T(a1, a2, a3, ring.nvars, order)
            doc = {
                "schema_version": SCHEMA_VERSION,
                "mode": "T",
                "ring": serialize_ring_file(rf),
                "invariants": {"n": ring.nvars, "a": [int(a) for a in H.ranks]},
                "betti": [PR.coefficient(k) for k in range(order + 1)],
                "sequences": _sequence_block(pack, order),
                "u_table": _u_block(pack, min(5, order)),
                "notes": [LP5_NOTE],
                **_maybe_timestamp(args),
            }
        else:
            _, PR = poincare_CI(c, ring.nvars, order)
            doc = {
                "schema_version": SCHEMA_VERSION,
                "mode": "CI",
                "ring": serialize_ring_file(rf),
                "invariants": {"n": ring.nvars, "c": c,
                               "a": [int(a) for a in H.ranks]},
                "betti": [PR.coefficient(k) for k in range(order + 1)],
                **_maybe_timestamp(args),
            }
    text = _emit(doc, args)
    print("betti: " + ",".join(str(b) for b in doc["betti"]))
    if "sequences" in doc:
        for name in ("b", "l", "lp", "lpp"):
            print(f"{name}: " + ",".join(str(v) for v in doc["sequences"][name]))
    if args.out is None:
        print(text)
    return EXIT_OK


def _run_verify(args, emit_matrices: bool) -> int:
    rf, ring, mode, i_max, order = _load_ring(args)
    force = ("deg2", 1) if getattr(args, "sign_flip", False) else None
    try:
        report, F, _ = full_verify(
            ring, mode, i_max, cycle_strings=rf.cycles,
            oracle_depth=min(i_max, 6) if getattr(args, "oracle", False) else None,
            series_order=order, force_regime=force)
    except (ClassVerificationError, DiscoveryError) as exc:
        print(f"class verification failure: {exc}", file=sys.stderr)
        return EXIT_CLASS
    except AssemblyError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    H_ranks = report.section("class_certificate").details["homology_ranks"]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "ring": serialize_ring_file(rf),
        "characteristic": ring.p,
        "mode": F.mode,
        "max_degree": i_max,
        "a_invariants": H_ranks,
        "ranks": [int(r) for r in F.ranks],
        "sign_regime": F.sign_regime,
        "blocks": F.block_inventory(),
        "verification": report.to_dict(
            include_timings=not getattr(args, "no_timestamp", False)),
        **_maybe_timestamp(args),
    }
    if F.mode == "T":
        a1, a2, a3 = H_ranks[1], H_ranks[2], H_ranks[3]
        pack = sequence_tables(3, a1, a2, a3, k_max=max(order, 12))
        _, PR = poincare_T(a1, a2, a3, ring.nvars, order)
        doc["poincare"] = [PR.coefficient(k) for k in range(order + 1)]
        doc["sequences"] = _sequence_block(pack, order)
        doc["u_table"] = _u_block(pack, min(5, max(2, i_max // 2 + 1)))
        doc["notes"] = [LP5_NOTE]
    else:
        _, PR = poincare_CI(len(H_ranks) - 1, ring.nvars, order)
        doc["poincare"] = [PR.coefficient(k) for k in range(order + 1)]
    if emit_matrices:
        doc["matrices"] = {
            f"d_{i}": _matrix_dump(F.diff(i), ring) for i in range(1, i_max + 1)
        }
    text = _emit(doc, args)
    for s in report.sections:
        status = "pass" if s.passed else f"FAIL ({s.failure})"
        print(f"{s.name}: {status}")
    print("ranks: " + ",".join(str(r) for r in F.ranks))
    if args.out is None and not emit_matrices:
        print(text)
    return EXIT_OK if report.passed else EXIT_MATH


def _matrix_dump(M, ring):
    return {
        "rows": M.rows,
        "cols": M.cols,
        "entries": {
            f"{i},{j}": f.to_string(ring.names)
            for (i, j), f in sorted(M.entries.items())
        },
    }


def cmd_resolve(args) -> int:
    return _run_verify(args, emit_matrices=args.emit_matrices)


def cmd_verify(args) -> int:
    return _run_verify(args, emit_matrices=False)


# ---------------------------------------------------------------------------
# the built-in demo
# ---------------------------------------------------------------------------


def cmd_demo_classt(args) -> int:
    rf = class_t_ring_file(p=args.char or 32003,
                           i_max=args.max_degree or 7)
    ring = build_ring(rf)
    print(f"ring: {ring!r}")
    print("cycles:")
    for name, text in CLASS_T_CYCLES.items():
        print(f"  {name} = {text}")
    H = HomologyAlgebra(ring)
    a1, a2, a3 = H.rank(1), H.rank(2), H.rank(3)
    order = args.order if args.order is not None else 10
    pack = sequence_tables(3, a1, a2, a3, k_max=max(order, 12))
    print(f"a-invariants: {tuple(int(a) for a in H.ranks)}")
    print("b:   " + ",".join(str(v) for v in pack.b[:6]))
    print("l:   " + ",".join(str(v) for v in pack.l[:6]))
    print("lp:  " + ",".join(str(v) for v in pack.lp[:6]))
    print("lpp: " + ",".join(str(v) for v in pack.lpp[:7]))
    print("note: " + LP5_NOTE)

    basis = basis_from_strings(ring, rf.cycles, class_t=True)
    names = _entry_names(basis)
    print("\ngamma_2 = (" + ", ".join(z.to_string() for z in basis.z2) + ")")
    print("gamma_3 = (" + ", ".join(z.to_string() for z in basis.z3) + ")")
    for k in range(1, 4):
        for r in (k, k + 1, k + 2):
            theta = alpha(k, r, pack, basis)
            print(f"\nalpha_{{{k},{r}}}  ({theta.rows} x {theta.cols}):")
            print(_pretty_cycle_matrix(theta, names, _alpha_col_groups(k, r, pack)))

    report, F, _ = full_verify(ring, "T", rf.max_degree or 7,
                               cycle_strings=rf.cycles, series_order=order)
    print("\nbetti: " + ",".join(str(v) for v in F.ranks))
    print("sign regime: " + F.sign_regime)
    for s in report.sections:
        print(f"{s.name}: {'pass' if s.passed else 'FAIL'}")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "ring": serialize_ring_file(rf),
        "mode": "T",
        "ranks": [int(r) for r in F.ranks],
        "sign_regime": F.sign_regime,
        "verification": report.to_dict(
            include_timings=not getattr(args, "no_timestamp", False)),
        **_maybe_timestamp(args),
    }
    if args.out is not None:
        _emit(doc, args)
    return EXIT_OK if report.passed else EXIT_MATH


def _entry_names(basis) -> dict:
    names = {}
    for u, z in enumerate(basis.z1, start=1):
        names[id(z)] = f"z1_{u}"
    for u, z in enumerate(basis.z2, start=1):
        names[id(z)] = f"z2_{u}"
    for u, z in enumerate(basis.z3, start=1):
        names[id(z)] = f"z3_{u}"
    return names


def _alpha_col_groups(k, r, pack) -> list:
    """Column group boundaries replicating the block partition (cosmetic)."""
    groups = []
    if r == k:
        for t in range(k):
            for _ in range(pack.d[t]):
                groups.append(pack.b[k - t])
        groups.append((pack.a1 - 3) * pack.l[k - 1])
    elif r == k + 1:
        if k >= 2:
            groups.append(pack.l[k - 2])
        for _ in range(pack.l[k - 1]):
            groups.append(pack.a2 - 3)
    else:
        for _ in range(pack.l[k - 1]):
            groups.append(pack.a3)
    return [g for g in groups if g]


def _pretty_cycle_matrix(theta, names, col_groups) -> str:
    """ASCII grid with dashed separators at the block boundaries."""
    cells = []
    for i in range(theta.rows):
        row = []
        for j in range(theta.cols):
            z = theta.entries.get((i, j))
            if z is None:
                row.append(".")
            else:
                row.append(names.get(id(z), _wedge_name(z, names)))
        cells.append(row)
    cuts = set()
    acc = 0
    for g in col_groups[:-1]:
        acc += g
        cuts.add(acc)
    widths = [max((len(cells[i][j]) for i in range(theta.rows)), default=1)
              for j in range(theta.cols)]
    lines = []
    for row in cells:
        parts = []
        for j, cell in enumerate(row):
            if j in cuts:
                parts.append(":")
            parts.append(cell.rjust(widths[j]))
        lines.append("  ".join(parts))
    return "\n".join(lines) if lines else "(empty)"


def _wedge_name(z, names) -> str:
    """Fallback label for entries that are not named basis cycles (the beta'
    wedges): the element itself."""
    return z.to_string()


if __name__ == "__main__":
    sys.exit(main())
