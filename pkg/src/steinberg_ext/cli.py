"""Command-line front end.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 verification mismatch, 2 usage error, 3 ring-assumption error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import permutations

from .errors import (
    ConfigurationError,
    ContractError,
    ResourceLimitError,
    RingAssumptionError,
    VerificationError,
)
from .extengine import (
    CLOSED_FORM,
    COMPLEX_BUILT,
    ExtTable,
    cohomology_v,
    ext_cuspidal_line,
    ext_induced_closed,
    ext_induced_via_strata,
    ext_steinberg,
    ext_v_to_induced,
    induced_cohomology,
    orientation_from_permutation,
    orientation_from_subset,
    subset_from_orientation,
    trivial_cohomology,
    vanishing_certificate,
)
from .homology import exterior_row_complex, homology_over_Z
from .ringcond import RingSpec, check_ring, format_ring, parse_ring
from .rootdata import (
    build_root_system,
    full_mask,
    mask_from_indices,
    mask_indices,
    mask_size,
    parse_type,
)
from .weyl import kostant_reps, load_or_generate

CACHE_ENV = "STEINBERG_EXT_CACHE_DIR"

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RING = 3


def _parse_subset(text: str, rank: int) -> int:
    text = text.strip()
    if text in ("", "-"):
        return 0
    try:
        indices = [int(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise ConfigurationError(f"cannot parse subset {text!r}") from None
    return mask_from_indices(indices, rank)


def _subset_list(mask: int) -> list[int]:
    return list(mask_indices(mask))


def _query_dict(series: str, rank: int, spec: RingSpec | None, **extra) -> dict:
    query: dict = {"series": series, "rank": rank}
    if spec is not None:
        query["ring"] = format_ring(spec)
    query.update(extra)
    return query


def render_table(table: ExtTable, fmt: str, query: dict, method: str,
                 extra: dict | None = None) -> str:
    if fmt == "tsv":
        lines = ["degree\trank\ttorsion"]
        for degree, piece in sorted(table.entries.items()):
            if piece.is_zero():
                continue
            torsion = ",".join(str(t) for t in sorted(piece.torsion)) or "-"
            lines.append(f"{degree}\t{piece.rank}\t{torsion}")
        return "\n".join(lines) + "\n"
    payload = {"query": query, "method": method, "table": table.to_json_dict()}
    if table.outside_hypotheses:
        payload["outside_hypotheses"] = True
    if extra:
        payload.update(extra)
    return json.dumps(payload, sort_keys=True) + "\n"


def emit_table(table: ExtTable, fmt: str, query: dict, method: str,
               extra: dict | None = None, out=None) -> None:
    (out or sys.stdout).write(render_table(table, fmt, query, method, extra))


# ---------------------------------------------------------------------------
# argument plumbing


def _add_common(p: argparse.ArgumentParser, ring_default: str | None = "Q") -> None:
    p.add_argument("--type", required=True, metavar="XN",
                   help="root-system type, e.g. A2, B3, G2; simple roots are "
                        "indexed 0..rank-1 along the Dynkin chain (branch/short "
                        "nodes last, as in the standard tables)")
    if ring_default is None:
        p.add_argument("--ring", default=None,
                       help="coefficient ring: 'Q' or 'q=<prime power>,d=<n>'")
    else:
        p.add_argument("--ring", default=ring_default,
                       help="coefficient ring: 'Q' or 'q=<prime power>,d=<n>' "
                            f"(default {ring_default})")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--cache-dir", default=None,
                   help=f"optional Weyl cache directory (env {CACHE_ENV} overrides)")
    p.add_argument("--assume-theta", action="store_true",
                   help="acknowledge the character-lattice comparison assumption")
    p.add_argument("--dump-complex", action="store_true",
                   help="include every built complex in the JSON output")


def _pair_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--I", default="", help="comma-separated simple-root indices (empty = {})")
    p.add_argument("--J", default="", help="comma-separated simple-root indices (empty = {})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinberg-ext",
        description="Exact Ext tables for generalized Steinberg modules: "
                    "closed forms checked against integer subset-lattice complexes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ext", help="Ext table between two Steinberg-type modules")
    _add_common(p)
    _pair_args(p)
    p.add_argument("--method", choices=(CLOSED_FORM, COMPLEX_BUILT, "both"),
                   default=CLOSED_FORM)
    p.add_argument("--center-rank", type=int, default=0)

    p = sub.add_parser("ext-induced", help="Ext table between two induced modules")
    _add_common(p)
    _pair_args(p)
    p.add_argument("--method", choices=(CLOSED_FORM, "strata", "both"), default=CLOSED_FORM)

    p = sub.add_parser("ext-vi", help="Ext table from a Steinberg-type module "
                                      "into an induced module")
    _add_common(p)
    _pair_args(p)
    p.add_argument("--method", choices=(CLOSED_FORM, COMPLEX_BUILT, "both"),
                   default=CLOSED_FORM)

    p = sub.add_parser("cohomology", help="cohomology tables (quotient, induced "
                                          "or trivial module)")
    _add_common(p)
    p.add_argument("--I", default="", help="comma-separated simple-root indices")
    p.add_argument("--object", choices=("v", "induced", "trivial"), default="v")
    p.add_argument("--method", choices=(CLOSED_FORM, COMPLEX_BUILT, "both"),
                   default=CLOSED_FORM)
    p.add_argument("--center-rank", type=int, default=0)

    p = sub.add_parser("dcosets", help="minimal double-coset representatives with "
                                       "their stratum characters")
    _add_common(p, ring_default=None)
    _pair_args(p)

    p = sub.add_parser("check-ring", help="report the coefficient-ring conditions")
    _add_common(p)

    p = sub.add_parser("verify", help="run the verification sweeps for one type and ring")
    _add_common(p)
    _pair_args(p)
    p.add_argument("--all-pairs", action="store_true",
                   help="sweep every pair of subsets instead of a single (I, J)")
    p.add_argument("--strata", choices=("auto", "on", "off"), default="auto",
                   help="include the double-coset strata sweep (auto: rank <= 3)")
    p.add_argument("--parallel", type=int, default=1, metavar="N",
                   help="worker processes for the pair sweep (same bytes, less wall time)")

    p = sub.add_parser("zelevinsky", help="segment-graph orientation combinatorics "
                                          "and the cuspidal-line Ext table")
    p.add_argument("--k", type=int, required=True, help="number of segment vertices")
    p.add_argument("--I", default=None, help="edge subset (comma-separated indices)")
    p.add_argument("--J", default=None, help="edge subset (comma-separated indices)")
    p.add_argument("--ring", default="Q")
    p.add_argument("--format", choices=("json", "tsv"), default="json")

    return parser


# ---------------------------------------------------------------------------
# subcommands


def _cache_dir(args) -> str | None:
    return os.environ.get(CACHE_ENV) or getattr(args, "cache_dir", None)


def cmd_ext(args) -> int:
    series, rank = parse_type(args.type)
    rs = build_root_system(series, rank)
    spec = parse_ring(args.ring)
    I = _parse_subset(args.I, rank)
    J = _parse_subset(args.J, rank)
    dumps: list | None = [] if args.dump_complex else None
    if args.method == CLOSED_FORM:
        table = ext_steinberg(rs, I, J, spec, CLOSED_FORM, args.center_rank)
    else:
        table = ext_steinberg(rs, I, J, spec, COMPLEX_BUILT, args.center_rank,
                              complexes_out=dumps)
        if args.method == "both":
            closed = ext_steinberg(rs, I, J, spec, CLOSED_FORM, args.center_rank)
            if not table.outside_hypotheses and not table.same_modules(closed):
                raise VerificationError("methods disagree",
                                        {"closed": closed.to_json_dict(),
                                         "built": table.to_json_dict()})
    query = _query_dict(series, rank, spec, I=_subset_list(I), J=_subset_list(J),
                        center_rank=args.center_rank)
    extra = {"complexes": dumps} if dumps else None
    emit_table(table, args.format, query, args.method, extra)
    return EXIT_OK


def cmd_ext_induced(args) -> int:
    series, rank = parse_type(args.type)
    rs = build_root_system(series, rank)
    spec = parse_ring(args.ring)
    I = _parse_subset(args.I, rank)
    J = _parse_subset(args.J, rank)
    elements = load_or_generate(rs, _cache_dir(args))
    if args.method == CLOSED_FORM:
        table = ext_induced_closed(rs, I, J, spec)
    else:
        table = ext_induced_via_strata(rs, I, J, spec, elements)
    query = _query_dict(series, rank, spec, I=_subset_list(I), J=_subset_list(J))
    emit_table(table, args.format, query, args.method)
    return EXIT_OK


def cmd_ext_vi(args) -> int:
    series, rank = parse_type(args.type)
    rs = build_root_system(series, rank)
    spec = parse_ring(args.ring)
    I = _parse_subset(args.I, rank)
    J = _parse_subset(args.J, rank)
    dumps: list | None = [] if args.dump_complex else None
    method = CLOSED_FORM if args.method == CLOSED_FORM else COMPLEX_BUILT
    table = ext_v_to_induced(rs, I, J, spec, method,
                             complexes_out=dumps if method == COMPLEX_BUILT else None)
    query = _query_dict(series, rank, spec, I=_subset_list(I), J=_subset_list(J))
    extra = {"complexes": dumps} if dumps else None
    emit_table(table, args.format, query, args.method, extra)
    return EXIT_OK


def cmd_cohomology(args) -> int:
    series, rank = parse_type(args.type)
    rs = build_root_system(series, rank)
    spec = parse_ring(args.ring)
    I = _parse_subset(args.I, rank)
    dumps: list | None = [] if args.dump_complex else None
    if args.object == "trivial":
        table = trivial_cohomology(rs, spec, args.center_rank)
    elif args.object == "induced":
        table = induced_cohomology(rs, I, spec)
    else:
        method = CLOSED_FORM if args.method == CLOSED_FORM else COMPLEX_BUILT
        table = cohomology_v(rs, I, spec, method,
                             complexes_out=dumps if method == COMPLEX_BUILT else None)
    query = _query_dict(series, rank, spec, I=_subset_list(I), object=args.object,
                        center_rank=args.center_rank)
    extra = {"complexes": dumps} if dumps else None
    emit_table(table, args.format, query, args.method if args.object == "v" else CLOSED_FORM,
               extra)
    return EXIT_OK


def cmd_dcosets(args) -> int:
    series, rank = parse_type(args.type)
    rs = build_root_system(series, rank)
    spec = parse_ring(args.ring) if args.ring else None
    I = _parse_subset(args.I, rank)
    J = _parse_subset(args.J, rank)
    elements = load_or_generate(rs, _cache_dir(args))
    reps = kostant_reps(rs, I, J, elements)
    rows = []
    for rep in reps:
        entry = {
            "length": rep.length,
            "gamma_exp": list(rep.gamma_exp),
            "delta_exp": list(rep.delta_exp),
            "levi": _subset_list(rep.levi),
            "surviving": rep.w.is_identity and not (J & ~I),
        }
        if spec is not None:
            cert = vanishing_certificate(rs, rep, spec)
            entry["certificate"] = None if cert is None else {
                "beta": cert.beta_index, "exponent": cert.exponent,
                "unit_value": cert.unit_value, "branch": cert.branch,
            }
        rows.append(entry)
    if args.format == "tsv":
        lines = ["length\tgamma_exp\tdelta_exp\tlevi\tsurviving"]
        for r in rows:
            lines.append("{}\t{}\t{}\t{}\t{}".format(
                r["length"],
                ",".join(map(str, r["gamma_exp"])),
                ",".join(map(str, r["delta_exp"])),
                ",".join(map(str, r["levi"])) or "-",
                int(r["surviving"])))
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        query = _query_dict(series, rank, spec, I=_subset_list(I), J=_subset_list(J))
        sys.stdout.write(json.dumps({"query": query, "reps": rows}, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_check_ring(args) -> int:
    series, rank = parse_type(args.type)
    rs = build_root_system(series, rank)
    spec = parse_ring(args.ring)
    report = check_ring(rs, spec, theta_assumed=args.assume_theta)
    payload = {"query": _query_dict(series, rank, spec)}
    payload.update(report.to_json_dict())
    payload["theta_assumed"] = args.assume_theta
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


# -- verify -----------------------------------------------------------------


def _verify_pair_task(series: str, rank: int, d: int, q: int, I: int, J: int,
                      strata: bool) -> list[str]:
    """Per-pair checks; returns sorted human-readable result lines."""
    rs = build_root_system(series, rank)
    spec = RingSpec(d, q)
    lines = []

    def record(check: str, ok: bool, detail: str = "") -> None:
        state = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        lines.append(f"{state} {check} I={{{','.join(map(str, mask_indices(I)))}}} "
                     f"J={{{','.join(map(str, mask_indices(J)))}}}{suffix}")

    try:
        built = ext_steinberg(rs, I, J, spec, COMPLEX_BUILT)
        closed = ext_steinberg(rs, I, J, spec, CLOSED_FORM)
        record("ext-methods", built.same_modules(closed) and not built.has_torsion())
    except VerificationError as e:
        record("ext-methods", False, str(e))

    try:
        built = ext_v_to_induced(rs, I, J, spec, COMPLEX_BUILT)
        closed = ext_v_to_induced(rs, I, J, spec, CLOSED_FORM)
        record("vi-methods", built.same_modules(closed) and not built.has_torsion())
    except VerificationError as e:
        record("vi-methods", False, str(e))

    if strata:
        # RingAssumptionError propagates: the caller turns it into exit 3
        table = ext_induced_via_strata(rs, I, J, spec)
        record("strata", table.same_modules(ext_induced_closed(rs, I, J, spec)))
        dichotomy = True
        for rep in kostant_reps(rs, I, J):
            cert = vanishing_certificate(rs, rep, spec)
            expected_none = rep.w.is_identity and not (J & ~I)
            if (cert is None) != expected_none:
                dichotomy = False
        record("certificates", dichotomy)
    return lines


def cmd_verify(args) -> int:
    series, rank = parse_type(args.type)
    rs = build_root_system(series, rank)
    spec = parse_ring(args.ring)

    report = check_ring(rs, spec, theta_assumed=args.assume_theta)
    if not report.ok:
        raise RingAssumptionError(
            f"ring {format_ring(spec)} fails the conditions for {series}{rank}: "
            + json.dumps(report.to_json_dict()["witness"], sort_keys=True))

    full = full_mask(rank)
    if args.all_pairs:
        pairs = [(I, J) for I in range(full + 1) for J in range(full + 1)]
        subsets = list(range(full + 1))
    else:
        I = _parse_subset(args.I, rank)
        J = _parse_subset(args.J, rank)
        pairs = [(I, J)]
        subsets = sorted({I, J})
    strata = args.strata == "on" or (args.strata == "auto" and rank <= 3)

    lines: list[str] = []
    for I in subsets:
        try:
            cohomology_v(rs, I, spec, COMPLEX_BUILT)
            m = rank - mask_size(I)
            rows_exact = all(homology_over_Z(exterior_row_complex(rs, I, t)).is_trivial()
                             for t in range(m))
            state = "PASS" if rows_exact else "FAIL"
            lines.append(f"{state} cohomology I={{{','.join(map(str, mask_indices(I)))}}}")
        except VerificationError as e:
            lines.append(f"FAIL cohomology I={{{','.join(map(str, mask_indices(I)))}}} ({e})")

    tasks = [(series, rank, spec.d, spec.q, I, J, strata) for I, J in pairs]
    if args.parallel > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            for result in pool.map(_verify_pair_task_star, tasks):
                lines.extend(result)
    else:
        for task in tasks:
            lines.extend(_verify_pair_task(*task))

    lines.sort()
    for line in lines:
        sys.stdout.write(line + "\n")
    failed = sum(1 for line in lines if line.startswith("FAIL"))
    sys.stdout.write(f"checked {len(lines)} assertions for {series}{rank} over "
                     f"{format_ring(spec)}: {len(lines) - failed} passed, {failed} failed\n")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def _verify_pair_task_star(task) -> list[str]:
    return _verify_pair_task(*task)


def cmd_zelevinsky(args) -> int:
    k = args.k
    if k < 2:
        raise ConfigurationError("need k >= 2 segment vertices")
    spec = parse_ring(args.ring)
    edges = k - 1

    roundtrip = all(subset_from_orientation(orientation_from_subset(k, I)) == I
                    for I in range(1 << edges))
    surjective = None
    if k <= 6:
        hit = {orientation_from_permutation(k, w).forward for w in permutations(range(k))}
        surjective = hit == set(range(1 << edges))

    payload: dict = {"k": k, "theta_roundtrip_ok": roundtrip,
                     "sk_orientations_surjective": surjective,
                     "ring": format_ring(spec)}
    if args.I is not None and args.J is not None:
        I = _parse_subset(args.I, edges)
        J = _parse_subset(args.J, edges)
        table = ext_cuspidal_line(k, I, J, spec)
        if args.format == "tsv":
            query = {"k": k, "I": _subset_list(I), "J": _subset_list(J)}
            emit_table(table, "tsv", query, CLOSED_FORM)
            return EXIT_OK
        payload.update({
            "I": _subset_list(I), "J": _subset_list(J),
            "orientation_I": list(orientation_from_subset(k, I).bits()),
            "orientation_J": list(orientation_from_subset(k, J).bits()),
            "table": table.to_json_dict(),
        })
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


_COMMANDS = {
    "ext": cmd_ext,
    "ext-induced": cmd_ext_induced,
    "ext-vi": cmd_ext_vi,
    "cohomology": cmd_cohomology,
    "dcosets": cmd_dcosets,
    "check-ring": cmd_check_ring,
    "verify": cmd_verify,
    "zelevinsky": cmd_zelevinsky,
}


def parse_and_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse prints usage to stderr on its own
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except RingAssumptionError as e:
        print(f"ring-assumption error: {e}", file=sys.stderr)
        return EXIT_RING
    except VerificationError as e:
        print(f"verification failure: {e}", file=sys.stderr)
        if e.payload:
            print(json.dumps(e.payload, sort_keys=True), file=sys.stderr)
        return EXIT_VERIFY
    except (ConfigurationError, ResourceLimitError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ContractError as e:
        print(f"internal contract violation: {e}", file=sys.stderr)
        return EXIT_VERIFY


def main() -> None:
    raise SystemExit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
