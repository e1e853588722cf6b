"""Command line interface.

Exit codes: 0 when everything ran and no asserted claim failed, 2 when a scan
or verification found a violation, 3 for input errors, 4 when a resource cap
or time limit was hit at the command level.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import InputError, ResourceCapError
from .families import FamilyInstance, formula_table
from .harness import CHECKS, emit_csv, emit_json, emit_md, run_scan
from .homology import depth_squarefree, hochster_betti
from .ideals import QuotientPresentation, format_ideal, parse_ideal, ring_quotient
from .solver import (
    DEFAULT_POSET_CAP,
    DEFAULT_TIME_LIMIT_S,
    build_poset,
    format_certificate,
    parse_certificate,
    sdepth_of_pair,
    verify_decomposition,
)

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_INPUT = 3
EXIT_RESOURCE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse's default exits with code 2
        raise InputError(message)


def _read_ideal(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_ideal(text)


def _load_pair(args) -> QuotientPresentation:
    ideal = _read_ideal(args.ideal_file)
    if args.quotient_by is None:
        return ring_quotient(ideal)
    return QuotientPresentation(ideal, _read_ideal(args.quotient_by))


def _cmd_family(args) -> int:
    instance = FamilyInstance(args.n, args.m, args.kind)
    ideal = instance.ideal()
    rec = formula_table(args.n, args.m)
    if args.out == "json":
        payload = {
            "kind": args.kind,
            "n": args.n,
            "m": args.m,
            "ideal": format_ideal(ideal),
            "formulas": {
                "phi": rec.phi,
                "psi": rec.psi,
                "pd_line": rec.pd_line,
                "pd_cycle": rec.pd_cycle,
                "depth_line": rec.depth_line,
                "depth_cycle": rec.depth_cycle,
                "p": rec.p,
                "d": rec.d,
            },
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(format_ideal(ideal))
        print(
            f"phi={rec.phi} psi={rec.psi} pd_line={rec.pd_line} pd_cycle={rec.pd_cycle} "
            f"depth_line={rec.depth_line} depth_cycle={rec.depth_cycle} p={rec.p} d={rec.d}"
        )
        if instance.collapses_to_principal:
            print("note: m = n, the ideal is principal")
        if instance.quotient_is_field:
            print("note: m = 1, the quotient ring is the ground field")
    return EXIT_OK


def _cmd_sdepth(args) -> int:
    pair = _load_pair(args)
    result = sdepth_of_pair(
        pair, time_limit_s=args.time_limit_s, max_poset=args.max_poset
    )
    print(f"sdepth = {result.value}")
    print(f"poset elements = {len(result.poset)}")
    if result.infeasible_at is not None:
        print(f"certified: partition at {result.value}, none at {result.infeasible_at}")
    else:
        print(f"certified: partition at {result.value} (ambient bound)")
    if args.certificate:
        Path(args.certificate).write_text(
            format_certificate(result.certificate), encoding="utf-8"
        )
        print(f"certificate written to {args.certificate}")
    return EXIT_OK


def _cmd_depth(args) -> int:
    ideal = _read_ideal(args.ideal_file)
    table = hochster_betti(ideal)
    pd = table.projective_dimension()
    print(f"depth = {ideal.ambient - pd}")
    print(f"pd = {pd}")
    if args.betti:
        print("i,F,rank")
        for (i, fvars), rank in sorted(table.entries.items()):
            print(f"{i},{'-'.join(str(v) for v in fvars)},{rank}")
    return EXIT_OK


def _cmd_verify_decomp(args) -> int:
    pair = _load_pair(args)
    poset = build_poset(pair)
    try:
        text = Path(args.decomp_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {args.decomp_file}: {exc}") from exc
    decomposition = parse_certificate(text, poset.n)
    report = verify_decomposition(poset, decomposition, args.k)
    if report.ok:
        print(f"valid decomposition at level {args.k} (min rho = {report.min_rho})")
        return EXIT_OK
    for failure in report.failures:
        print(f"invalid: {failure}")
    return EXIT_VIOLATION


def _cmd_scan(args) -> int:
    rows = run_scan(
        args.check,
        n_max=args.n_max,
        m_min=args.m_min,
        m_max=args.m_max,
        time_limit_s=args.time_limit_s,
        max_poset=args.max_poset,
        jobs=args.jobs,
        cert_dir=args.cert_dir,
    )
    emitter = {"csv": emit_csv, "json": emit_json, "md": emit_md}[args.format]
    sys.stdout.write(emitter(rows, timings=args.timings))
    if any(row.status == "violation" for row in rows):
        return EXIT_VIOLATION
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="sdepthlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_family = sub.add_parser("family", help="print a family ideal and its formula table")
    p_family.add_argument("--kind", choices=("line", "cycle"), required=True)
    p_family.add_argument("--n", type=int, required=True)
    p_family.add_argument("--m", type=int, required=True)
    p_family.add_argument("--out", choices=("text", "json"), default="text")
    p_family.set_defaults(func=_cmd_family)

    p_sdepth = sub.add_parser("sdepth", help="compute the certified invariant of a quotient")
    p_sdepth.add_argument("--ideal-file", required=True)
    p_sdepth.add_argument("--quotient-by", default=None,
                          help="denominator ideal file; omitted means the ring quotient")
    p_sdepth.add_argument("--time-limit-s", type=float, default=DEFAULT_TIME_LIMIT_S)
    p_sdepth.add_argument("--max-poset", type=int, default=DEFAULT_POSET_CAP)
    p_sdepth.add_argument("--certificate", default=None, help="write the certificate here")
    p_sdepth.set_defaults(func=_cmd_sdepth)

    p_depth = sub.add_parser("depth", help="depth of a squarefree quotient ring")
    p_depth.add_argument("--ideal-file", required=True)
    p_depth.add_argument("--betti", action="store_true", help="also print nonzero table entries")
    p_depth.set_defaults(func=_cmd_depth)

    p_scan = sub.add_parser("scan", help="run a verification scan over the family grid")
    p_scan.add_argument("--check", choices=CHECKS, required=True)
    p_scan.add_argument("--n-max", type=int, default=None)
    p_scan.add_argument("--m-min", type=int, default=2)
    p_scan.add_argument("--m-max", type=int, default=None)
    p_scan.add_argument("--format", choices=("csv", "json", "md"), default="csv")
    p_scan.add_argument("--jobs", type=int, default=1)
    p_scan.add_argument("--time-limit-s", type=float, default=DEFAULT_TIME_LIMIT_S)
    p_scan.add_argument("--max-poset", type=int, default=DEFAULT_POSET_CAP)
    p_scan.add_argument("--timings", action="store_true",
                        help="emit measured milliseconds (output is then not reproducible)")
    p_scan.add_argument("--cert-dir", default=None, help="store certificates in this directory")
    p_scan.set_defaults(func=_cmd_scan)

    p_verify = sub.add_parser("verify-decomp", help="check a decomposition certificate")
    p_verify.add_argument("--ideal-file", required=True)
    p_verify.add_argument("--quotient-by", default=None)
    p_verify.add_argument("--decomp-file", required=True)
    p_verify.add_argument("--k", type=int, required=True)
    p_verify.set_defaults(func=_cmd_verify_decomp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceCapError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
