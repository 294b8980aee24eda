"""Command line entry point: ``cubictheta {enumerate,theta,classgroup,verify}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from .arith import NotFundamental, is_fundamental, three_reflection
from .cache import Cache
from .cubic import enumerate_cubic_fields, ring_of, trace_form
from .pipeline import InvalidRange, reports_to_csv, reports_to_json, verify_range
from .qform import class_group, reduced_forms, three_rank
from .realquad import narrow_class_group, real_three_rank
from .theta import f_K, first_two_nonzero

log = logging.getLogger("cubictheta")

GRAMMAR = (
    "cubictheta {enumerate,theta,classgroup,verify} (--disc D | --range A B) "
    "[--precision N] [--format {json,csv,text}] [--cache-dir PATH] [--jobs J] [--timings]"
)


class UsageError(Exception):
    pass


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    which = common.add_mutually_exclusive_group(required=True)
    which.add_argument("--disc", type=int, metavar="D")
    which.add_argument("--range", type=int, nargs=2, metavar=("A", "B"))
    common.add_argument("--precision", type=int, default=1000, metavar="N")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--cache-dir", metavar="PATH")
    common.add_argument("--jobs", type=int, default=1, metavar="J")
    common.add_argument("--timings", action="store_true", help="record per-d wall time (breaks byte-reproducibility)")

    p = argparse.ArgumentParser(prog="cubictheta", usage=GRAMMAR)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("enumerate", parents=[common], help="cubic fields of each discriminant")
    sub.add_parser("theta", parents=[common], help="theta series f_K for each field")
    sub.add_parser("classgroup", parents=[common], help="form class group of a discriminant")
    sub.add_parser("verify", parents=[common], help="verify injectivity, independence and counts")
    return p


def _field_discs(args):
    if args.disc is not None:
        d = args.disc
        if d <= 0 or not is_fundamental(d):
            raise UsageError(f"{d} is not a fundamental discriminant" if d > 0 else f"{d} is not positive")
        return [d]
    a, b = args.range
    if a > b or a < 1:
        raise UsageError(f"--range {a} {b}: need 1 <= A <= B")
    return [d for d in range(a, b + 1) if is_fundamental(d)]


def _cache(args):
    path = args.cache_dir or os.environ.get("CUBICTHETA_CACHE_DIR") or "./cache"
    return Cache(path)


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt_form(f):
    return "(" + ", ".join(str(x) for x in f) + ")"


def cmd_enumerate(args):
    cache = _cache(args)
    out = []
    for d in _field_discs(args):
        fields = cache.memo("cubic", d, lambda: [list(F) for F in enumerate_cubic_fields(d)])
        out.append({"d": d, "fields": fields})
    if args.format == "json":
        return json.dumps(out, separators=(",", ":")), 0
    if args.format == "csv":
        rows = [[o["d"], len(o["fields"]), " ".join(_fmt_form(F) for F in o["fields"])] for o in out]
        return _csv(rows, ["d", "count", "fields"]), 0
    lines = [f"{o['d']:>8}  {len(o['fields'])}  " + " ".join(_fmt_form(F) for F in o["fields"]) for o in out]
    return "\n".join(lines) + "\n", 0


def _series(args):
    for d in _field_discs(args):
        for F in enumerate_cubic_fields(d):
            t = trace_form(ring_of(F), d)
            yield d, F, f_K(t, args.precision)


def cmd_theta(args):
    items = list(_series(args))
    if args.format == "json":
        return json.dumps([s.to_dict() for _, _, s in items], separators=(",", ":")), 0
    if args.format == "csv":
        rows = [
            [d, _fmt_form(F), _fmt_form(s.form), s.level, s.precision, " ".join(map(str, s.coeffs))]
            for d, F, s in items
        ]
        return _csv(rows, ["d", "field", "form", "level", "precision", "coeffs"]), 0
    lines = []
    for d, F, s in items:
        terms = " + ".join(f"{c}q^{n}" for n, c in enumerate(s.coeffs[:60]) if c)
        lines.append(f"d={d} field={_fmt_form(F)} t_K={_fmt_form(s.form)} level={s.level}: {terms} + ...")
    return "\n".join(lines) + "\n", 0


def _group_summary(D):
    if D < 0:
        forms = reduced_forms(D)
        G = class_group(D, forms)
        return {"disc": D, "class_number": len(G), "three_rank": three_rank(G), "forms": [list(f) for f in G]}
    G = narrow_class_group(D)
    reps = [list(G.representative(k)) for k in range(len(G))]
    return {"disc": D, "class_number": len(G), "three_rank": real_three_rank(D), "forms": reps, "narrow": True}


def cmd_classgroup(args):
    if args.disc is not None:
        discs = [args.disc]
        if args.disc in (0, 1) or not is_fundamental(args.disc):
            raise UsageError(f"{args.disc} is not a fundamental discriminant")
    else:
        a, b = args.range
        if a > b:
            raise UsageError(f"--range {a} {b}: need A <= B")
        discs = [D for D in range(a, b + 1) if D not in (0, 1) and is_fundamental(D)]
    out = [_group_summary(D) for D in discs]
    if args.format == "json":
        return json.dumps(out, separators=(",", ":")), 0
    if args.format == "csv":
        rows = [[o["disc"], o["class_number"], o["three_rank"], " ".join(_fmt_form(f) for f in o["forms"])] for o in out]
        return _csv(rows, ["disc", "h", "r3", "forms"]), 0
    lines = [f"{o['disc']:>8}  h={o['class_number']:<4} r3={o['three_rank']}  " + " ".join(_fmt_form(f) for f in o["forms"]) for o in out]
    return "\n".join(lines) + "\n", 0


def cmd_verify(args):
    ds = _field_discs(args)
    reports, summary = verify_range(ds[0], ds[-1], args.precision, args.jobs, _cache(args), args.timings) if ds else ([], None)
    if summary is not None:
        log.info("summary: %s", json.dumps(summary, separators=(",", ":")))
    code = 0 if all(r.passed for r in reports) else 1
    if args.format == "json":
        return reports_to_json(reports), code
    if args.format == "csv":
        return reports_to_csv(reports), code
    lines = []
    for r in reports:
        lines.append(
            f"d={r.d} d3={r.d3} h={r.class_number} r3={r.r3} r3(Q(sqrt d))={r.r3_real} "
            f"fields={r.count} expected={r.expected_count} {r.verdict}"
        )
        for F, t, fp, p in zip(r.fields, r.trace_forms, r.injective["fingerprints"], r.independent["witness_primes"]):
            lines.append(f"    {_fmt_form(F):<24} t_K={_fmt_form(t):<20} first terms={fp}  witness={p}")
        for msg in r.failures:
            lines.append(f"    FAIL: {msg}")
    if summary is not None:
        lines.append(
            f"{summary['discriminants']} discriminants, {summary['fields_found']} fields, "
            f"all_pass={summary['all_pass']}, histogram={summary['histogram']}"
        )
    return "\n".join(lines) + "\n", code


COMMANDS = {
    "enumerate": cmd_enumerate,
    "theta": cmd_theta,
    "classgroup": cmd_classgroup,
    "verify": cmd_verify,
}


def main(argv=None):
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.precision < 1:
            raise UsageError("--precision must be >= 1")
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        text, code = COMMANDS[args.command](args)
    except (UsageError, NotFundamental, InvalidRange) as exc:
        print(f"cubictheta: error: {exc}", file=sys.stderr)
        print(f"usage: {GRAMMAR}", file=sys.stderr)
        return 2
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
