"""Command-line front end.

Every subcommand builds its full output before writing anything, so a
failure never leaves partial output behind.  Exit codes: 0 success,
1 bad input, 2 bound violated.
"""
from __future__ import annotations

import argparse
import csv
import io as _stringio
import random
import sys
from fractions import Fraction

from . import io
from .boolfn import nu_bruteforce, nu_fwht, parse_table
from .errors import SeqCtxError, ValidationError
from .fraction import ncf
from .gf2 import Partition, commutes, infer_partition, validate_commutative_class
from .parity import exhaustive_search, parity_check, random_assignment
from .tbqc import resource_model, run, sweep_noise, verify_bound

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2

DEFAULT_QS = ",".join(f"{n}/10" for n in range(11))


def _bitstr(bits) -> str:
    return "".join(str(b) for b in bits)


def _csv(header, rows) -> str:
    buf = _stringio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _index_list(text: str, name: str) -> set[int]:
    text = text.strip()
    if not text:
        return set()
    try:
        return {int(x) for x in text.replace(" ", ",").split(",") if x}
    except ValueError:
        raise ValidationError(f"--{name}: expected comma-separated bit indices, got {text!r}")


def _load_protocol(path: str):
    return io.protocol_from_json(io.load_json(path))


def cmd_simulate(args) -> tuple[str, int]:
    rep = run(_load_protocol(args.protocol))
    if args.format == "csv":
        rows = [
            [_bitstr(r.i), _bitstr(r.k), io.fmt_q(r.p0), io.fmt_q(r.p1), io.fmt_q(r.fail)]
            for r in rep.rows
        ]
        rows.append(["epsilon", io.fmt_q(rep.epsilon)])
        return _csv(["i", "k", "p0", "p1", "fail"], rows), EXIT_OK
    return io.dumps(io.run_report_to_json(rep)), EXIT_OK


def cmd_nu(args) -> tuple[str, int]:
    if args.function:
        f = io.boolfn_from_json(io.load_json(args.function))
    elif args.table:
        f = parse_table(args.table)
    else:
        raise ValidationError("--function/--table: one of them is required")
    strict = args.strict_linear
    out = {"r": f.r, "table": list(f.table), "family": "linear" if strict else "affine"}
    if args.method in ("fwht", "both"):
        out["nu"] = io.fmt_q(nu_fwht(f, strict))
    if args.method in ("brute", "both"):
        brute = io.fmt_q(nu_bruteforce(f, strict))
        if "nu" in out and out["nu"] != brute:
            raise SeqCtxError(f"nu: transform gives {out['nu']}, enumeration gives {brute}")
        out["nu"] = brute
    out["method"] = args.method
    return io.dumps(out), EXIT_OK


def cmd_ncf(args) -> tuple[str, int]:
    if args.model:
        model = io.model_from_json(io.load_json(args.model))
    elif args.protocol:
        model = resource_model(_load_protocol(args.protocol))
    else:
        raise ValidationError("--model/--protocol: one of them is required")
    return io.dumps(io.ncf_result_to_json(ncf(model))), EXIT_OK


def cmd_bound(args) -> tuple[str, int]:
    rep = verify_bound(_load_protocol(args.protocol))
    code = EXIT_OK if rep.holds else EXIT_VIOLATION
    return io.dumps(io.bound_to_json(rep)), code


def cmd_sweep(args) -> tuple[str, int]:
    p = _load_protocol(args.protocol)
    qs = [io.parse_q(x, "--qs") for x in args.qs.split(",") if x.strip()]
    rows = sweep_noise(p, qs)
    code = EXIT_OK if all(row.slack >= 0 for row in rows) else EXIT_VIOLATION
    if args.format == "csv":
        body = [[io.fmt_q(getattr(row, f)) for f in io.SWEEP_FIELDS] for row in rows]
        return _csv(list(io.SWEEP_FIELDS), body), code
    return io.dumps(io.sweep_to_json(rows)), code


def cmd_search(args) -> tuple[str, int]:
    controls = _index_list(args.controls, "controls")
    targets = _index_list(args.targets, "targets")
    part = Partition(controls, targets)
    part.check(args.s)
    target = tuple(int(c) for c in args.target if c in "01")
    if len(target) != 4 or len(args.target) != 4:
        raise ValidationError(f"--target: expected four bits like 0111, got {args.target!r}")
    res = exhaustive_search(args.s, part, target, args.relax_measurement)
    out = io.search_to_json(res, args.s, part, target)
    if args.parity_samples:
        rng = random.Random(args.seed)
        odd = sum(
            parity_check(random_assignment(args.s, rng, part)) for _ in range(args.parity_samples)
        )
        out["parity_samples"] = args.parity_samples
        out["parity_violations"] = odd
    return io.dumps(out), EXIT_OK


def cmd_commute(args) -> tuple[str, int]:
    data = io.load_json(args.maps)
    if isinstance(data, dict):
        s = data.get("s")
        raw = data.get("maps")
    else:
        s, raw = None, data
    if not isinstance(raw, list) or not raw:
        raise ValidationError("maps: expected a non-empty list of maps")
    maps = [io.map_from_json(m, s, f"maps[{n}]") for n, m in enumerate(raw)]
    matrix = [[commutes(f, g) for g in maps] for f in maps]
    out = {
        "n": len(maps),
        "commutes": matrix,
        "all_commute": all(all(row) for row in matrix),
    }
    if args.controls is not None or args.targets is not None:
        part = Partition(
            _index_list(args.controls or "", "controls"), _index_list(args.targets or "", "targets")
        )
        out["commutative_class"] = validate_commutative_class(maps, part)
    else:
        found = infer_partition(maps)
        out["commutative_class"] = found is not None
        if found is not None:
            out["controls"] = sorted(found.controls)
            out["targets"] = sorted(found.targets)
    return io.dumps(out), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqctx",
        description="Exact tools for sequential-transformation contextuality in mod-2 linear protocols.",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a protocol on its resource")
    p.add_argument("--protocol", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("nu", help="nonlinearity of a Boolean function")
    p.add_argument("--function", help="BoolFn JSON file")
    p.add_argument("--table", help="truth table as a bit string, e.g. 0111")
    p.add_argument("--strict-linear", action="store_true", help="compare with linear functions only")
    p.add_argument("--method", choices=("fwht", "brute", "both"), default="fwht")
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("ncf", help="non-contextual fraction of an empirical model")
    p.add_argument("--model", help="EmpiricalModel JSON file")
    p.add_argument("--protocol", help="use the resource model of this protocol")
    p.set_defaults(func=cmd_ncf)

    p = sub.add_parser("bound", help="check epsilon >= NCF * nu")
    p.add_argument("--protocol", required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="bound check across noise levels")
    p.add_argument("--protocol", required=True)
    p.add_argument("--qs", default=DEFAULT_QS, help="comma-separated rationals")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("search-ontology", help="best non-contextual GF(2) realisation")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--controls", required=True)
    p.add_argument("--targets", required=True)
    p.add_argument("--target", default="0111")
    p.add_argument("--relax-measurement", action="store_true",
                   help="allow any off-diagonal measurement pre-map")
    p.add_argument("--parity-samples", type=int, default=0,
                   help="also check parity on this many random assignments")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("commute-check", help="pairwise commutation of GF(2) maps")
    p.add_argument("--maps", required=True, help="JSON list of maps, or {\"s\":..,\"maps\":[..]}")
    p.add_argument("--controls")
    p.add_argument("--targets")
    p.set_defaults(func=cmd_commute)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except (SeqCtxError, ValueError) as exc:
        print(f"seqctx {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    if code == EXIT_VIOLATION:
        print(f"seqctx {args.command}: bound violated", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
