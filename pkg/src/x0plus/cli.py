"""Command-line front end: classification, tables, filter traces, genus
reports, point counts, quadric classification and genus-2 criteria.

Data files are loaded from --data, the X0PLUS_DATA environment variable, or
the packaged data directory, in that order.  Output is TSV (default) or
JSON with a fixed schema; identical inputs produce identical bytes.
"""

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import arith, counting, genus2, geometry, quadforms, sieve
from .dataset import (
    IntegrityError,
    ParseError,
    load_elliptic_curves,
    load_known_lists,
    load_models,
    load_newforms,
)

EXIT_OK = 0
EXIT_DATA = 2
EXIT_DOMAIN = 3
EXIT_USAGE = 64


def data_dir(arg):
    if arg:
        return Path(arg)
    env = os.environ.get("X0PLUS_DATA")
    if env:
        return Path(env)
    return Path(__file__).parent / "data"


def load_databases(root: Path) -> sieve.Databases:
    try:
        newforms = load_newforms(open(root / "newforms.tsv"))
        curves = load_elliptic_curves(open(root / "curves.csv"))
        models = load_models(open(root / "models.tsv"))
        lists = load_known_lists(open(root / "known_lists.txt"))
        trig = frozenset()
        trig_path = root / "known_lists.txt"
        for line in open(trig_path):
            line = line.strip()
            if line.startswith("trigonal_rational:"):
                trig = frozenset(int(x) for x in line.split(":")[1].split())
    except FileNotFoundError as exc:
        raise IntegrityError(f"missing data file: {exc.filename}") from exc
    return sieve.Databases(newforms, curves, models, lists, trig)


def emit(obj, fmt):
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        if isinstance(obj, dict):
            for k in obj:
                v = obj[k]
                if isinstance(v, (list, tuple)):
                    v = ";".join(str(x) for x in v)
                print(f"{k}\t{v}")
        else:
            print(obj)


def classification_dict(c: sieve.Classification):
    return {
        "level": c.level,
        "genus": c.genus_plus,
        "verdict": c.verdict,
        "reason": c.reason,
        "witnesses": list(c.witnesses),
        "notes": list(c.notes),
    }


def cmd_classify(args, dbs):
    if args.level < 1:
        raise arith.DomainError("level must be positive")
    c = sieve.classify_level(args.level, dbs)
    emit(classification_dict(c), args.format)
    return EXIT_OK


def cmd_table(args, dbs):
    rows, issues = sieve.main_theorem_table(args.max, dbs)
    if args.format == "json":
        emit(
            {
                "rows": {str(g): v for g, v in rows.items()},
                "unresolved": [classification_dict(c) for c in issues],
            },
            "json",
        )
    else:
        for g in sorted(rows):
            print(f"{g}\t{','.join(str(x) for x in rows[g])}")
        for c in issues:
            print(f"# unresolved\t{c.level}\t{c.reason}")
    return EXIT_OK


def cmd_sieve(args, dbs):
    cands = sieve.enumerate_admissible_pairs(args.level, dbs.newforms, dbs.curves)
    out = [
        {
            "level": args.level,
            "curve": c.label,
            "status": c.status,
            "filter": c.filter_name,
            "witness": c.witness,
        }
        for c in cands
    ]
    if args.format == "json":
        emit({"candidates": out}, "json")
    else:
        for row in out:
            print(
                f"{row['level']}\t{row['curve']}\t{row['status']}"
                f"\t{row['filter'] or '-'}\t{row['witness'] or '-'}"
            )
    return EXIT_OK


def cmd_genus(args, dbs):
    rep = geometry.genus_x0_plus(args.level, dbs.newforms)
    emit(
        {
            "level": rep.level,
            "genus_x0": rep.genus_x0,
            "fricke_fixed_points": rep.fricke_fixed_points,
            "genus_plus_rh": rep.genus_plus_rh,
            "genus_plus_nf": rep.genus_plus_nf,
            "agreement": rep.agreement,
            "genus": rep.genus,
        },
        args.format,
    )
    return EXIT_OK


def cmd_count(args, dbs):
    pp = counting.PrimePower(args.p, args.n)
    if args.object == "x0":
        rep = counting.count_x0(args.level, pp, dbs.newforms)
    elif args.object == "x0plus":
        rep = counting.count_x0_plus(args.level, pp, dbs.newforms)
    elif args.object == "ec":
        rep = counting.count_ec(dbs.curves.curve(args.label), pp)
    elif args.object == "model":
        m = dbs.models.model(args.level)
        if m.kind == "hyperelliptic":
            rep = counting.count_hyperelliptic_model(m, pp)
        else:
            rep = counting.count_petri_model(m, pp)
    else:
        raise arith.DomainError(f"unknown object {args.object}")
    emit(
        {
            "object": rep.description,
            "p": rep.p,
            "n": rep.n,
            "count": rep.count,
            "method": rep.method,
        },
        args.format,
    )
    return EXIT_OK


def cmd_quadric(args, dbs):
    if args.coeffs:
        entries = [Fraction(x) for x in args.coeffs.split(",")]
        form = quadforms.SymmetricForm.from_upper(entries)
    else:
        m = dbs.models.model(args.level)
        if m.kind != "petri":
            raise arith.DomainError(f"level {args.level} has no quadric model")
        form = quadforms.SymmetricForm(m.quadric)
    c = quadforms.classify_quadric(form)
    emit(
        {
            "rank": c.rank,
            "diagonal": [str(d) for d in c.diagonal],
            "disc_class": c.disc_class,
            "verdict": c.verdict,
            "field": list(c.field),
            "witness": list(c.isotropy_witness) if c.isotropy_witness else None,
        },
        args.format,
    )
    return EXIT_OK


def cmd_genus2(args, dbs):
    if args.poly:
        coeffs = tuple(int(x) for x in args.poly.split(","))
        from .dataset import CurveModel

        model = CurveModel(0, "hyperelliptic", poly=coeffs, bad_primes=())
        model.validate()
    else:
        model = dbs.models.model(args.level)
    v = genus2.genus2_cubic_verdict(model, height_bound=args.bound)
    emit(
        {
            "level": v.level,
            "criterion": v.criterion,
            "witnesses": list(v.witnesses),
        },
        args.format,
    )
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="x0plus", description="cubic-point classification for X0+(N)"
    )
    ap.add_argument("--data", help="data directory (default: packaged fixtures)")
    ap.add_argument("--format", choices=("tsv", "json"), default="tsv")
    sub = ap.add_subparsers(dest="verb")

    p = sub.add_parser("classify", help="classify one level")
    p.add_argument("level", type=int)

    p = sub.add_parser("table", help="levels with infinitely many cubic points")
    p.add_argument("--max", type=int, default=350)

    p = sub.add_parser("sieve", help="filter-by-filter trace of candidate pairs")
    p.add_argument("level", type=int)

    p = sub.add_parser("genus", help="genus report for X0+(N)")
    p.add_argument("level", type=int)

    p = sub.add_parser("count", help="point count over a finite field")
    p.add_argument("object", choices=("x0", "x0plus", "ec", "model"))
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--label", default="")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, default=1)

    p = sub.add_parser("quadric", help="classify a quadric surface")
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--coeffs", help="10 upper-triangle rationals, comma-joined")

    p = sub.add_parser("genus2", help="degree-3-map criteria for a genus-2 model")
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--poly", help="ascending integer coefficients, comma-joined")
    p.add_argument("--bound", type=int, default=100)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if not args.verb:
        ap.print_usage()
        return EXIT_USAGE
    try:
        dbs = load_databases(data_dir(args.data))
    except (ParseError, IntegrityError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    handlers = {
        "classify": cmd_classify,
        "table": cmd_table,
        "sieve": cmd_sieve,
        "genus": cmd_genus,
        "count": cmd_count,
        "quadric": cmd_quadric,
        "genus2": cmd_genus2,
    }
    try:
        return handlers[args.verb](args, dbs)
    except (arith.DomainError, counting.ResourceError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ParseError, IntegrityError, counting.DataError, KeyError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
