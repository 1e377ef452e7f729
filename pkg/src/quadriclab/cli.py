"""Command-line front end: stratify, fiber, verify, random.

All runs are batch and reproducible: reports are JSON with sorted keys,
embed the tool version, the input hash, the seed, and the convention
constants, so identical configurations give byte-identical files.
Exit codes: 0 all checks passed, 1 a check failed, 2 input error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from .family import (AnalysisError, FamilyValidationError, QuadricFamily,
                     SampleSpec, corank_at, odp_test, stratify)
from .fano import CHART_IDS, classify_fiber, enumerate_lines_fp, expected_line_count, \
    vertex_and_planes_report
from .fields import QQ, FieldError, PrimeField, field_descriptor
from .linalg import Matrix
from .poly import PolyRing, PolyParseError
from .reports import envelope, write_report
from .verify import run_verify_suite


def _parse_field(text):
    if text == "Q":
        return QQ
    if text.startswith("Fp:"):
        return PrimeField(int(text.split(":", 1)[1]))
    raise FieldError("field must be Q or Fp:<odd prime>, got %r" % text)


def _parse_points(text, field, base_dim):
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coords = [c.strip() for c in chunk.split(",")]
        if len(coords) != base_dim:
            raise AnalysisError("bad_point",
                                "point %r needs %d coordinates" % (chunk, base_dim))
        points.append(tuple(field.from_fraction(Fraction(c)) for c in coords))
    if not points:
        raise AnalysisError("bad_point", "no points given")
    return points


def _sample_spec(args, fam):
    if args.points:
        return SampleSpec.explicit(_parse_points(args.points, fam.field, fam.base_dim))
    if args.grid:
        return SampleSpec.grid(args.grid if args.grid > 0 else 0)
    return SampleSpec.random(args.seed, args.count)


def cmd_stratify(args) -> int:
    fam = QuadricFamily.load(args.input)
    spec = _sample_spec(args, fam)
    report = stratify(fam, spec)
    out = envelope("stratify", input_path=args.input,
                   seed=spec.seed if spec.kind == "random" else None)
    out["result"] = report.to_json_dict()
    write_report(os.path.join(args.out, "stratify.json"), out)
    return 0


def cmd_fiber(args) -> int:
    fam = QuadricFamily.load(args.input)
    if not args.points:
        raise AnalysisError("bad_point", "fiber needs --points")
    points = _parse_points(args.points, fam.field, fam.base_dim)
    results = []
    for pt in points:
        amat = fam.matrix_at(pt)
        fiber = classify_fiber(amat, fam.field)
        entry = {
            "point": [fam.field.to_str(c) for c in pt],
            "tag": fiber.tag,
            "corank": fiber.corank,
        }
        if fiber.tag == "TwoConics":
            entry["disc_is_square"] = fiber.disc_is_square
        if fiber.tag == "TwoPlanes":
            entry["planes"] = vertex_and_planes_report(fam, pt)
        if isinstance(fam.field, PrimeField) and fam.field.p <= 13:
            count, plucker = enumerate_lines_fp(amat, fam.field.p)
            entry["oracle_count"] = count
            entry["expected_count"] = expected_line_count(fiber, fam.field.p)
            entry["oracle_matches"] = count == entry["expected_count"]
            entry["plucker_points"] = [[fam.field.to_str(c) for c in coords]
                                       for coords in plucker]
        results.append(entry)
    out = envelope("fiber", input_path=args.input)
    out["chart"] = args.chart
    out["result"] = results
    write_report(os.path.join(args.out, "fiber.json"), out)
    bad = [r for r in results if r.get("oracle_matches") is False]
    return 1 if bad else 0


def cmd_verify(args) -> int:
    fam = QuadricFamily.load(args.input)
    suite = run_verify_suite(fam, seed=args.seed)
    out = envelope("verify", input_path=args.input, seed=args.seed)
    out["result"] = suite
    write_report(os.path.join(args.out, "verify.json"), out)
    return 0 if suite["all_passed"] else 1


def cmd_random(args) -> int:
    field = _parse_field(args.field)
    rng = random.Random(args.seed)
    variables = ("y1", "y2", "y3")
    ring = PolyRing(field, variables)
    degree = args.degree

    def random_poly():
        terms = {}
        from .poly import monomials_of_degree
        for d in range(degree + 1):
            for mono in monomials_of_degree(3, d):
                if rng.random() < 0.5:
                    continue
                if field.characteristic:
                    c = field.from_int(rng.randrange(field.characteristic))
                else:
                    c = field.from_int(rng.randrange(-3, 4))
                if not field.is_zero(c):
                    terms[mono] = c
        from .poly import Poly
        return Poly(ring, terms)

    while True:
        rows = [[ring.zero] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                p = random_poly()
                rows[i][j] = p
                rows[j][i] = p
        matrix = Matrix(ring, rows)
        if not matrix.is_zero():
            break
    fam = QuadricFamily(3, field, variables, matrix,
                        label=args.label or ("random-seed%d" % args.seed))
    path = os.path.join(args.out, "family.json")
    fam.save(path)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quadriclab",
        description="Exact analysis of families of quadric surfaces: stratification, "
                    "Fano fibers with a finite-field oracle, and the full invariant "
                    "verification suite.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="family JSON file")
        p.add_argument("--field", default="Q", help="Q or Fp:<odd prime>")
        p.add_argument("--chart", default="12", choices=CHART_IDS,
                       help="Grassmannian chart id")
        p.add_argument("--points", default="",
                       help="semicolon-separated points, comma-separated rational coordinates")
        p.add_argument("--grid", type=int, default=0,
                       help="grid size per axis (F_p: 0 means the full grid)")
        p.add_argument("--seed", type=int, default=0, help="seed for random sampling")
        p.add_argument("--count", type=int, default=20, help="random sample size")
        p.add_argument("--out", default=".", help="output directory")

    p_strat = sub.add_parser("stratify", help="corank stratification over a sample")
    common(p_strat)
    p_strat.set_defaults(func=cmd_stratify)

    p_fiber = sub.add_parser("fiber", help="classify fibers; oracle counts over F_p")
    common(p_fiber)
    p_fiber.set_defaults(func=cmd_fiber)

    p_verify = sub.add_parser("verify", help="run the full invariant suite")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_rand = sub.add_parser("random", help="emit a seeded random family file")
    common(p_rand, needs_input=False)
    p_rand.add_argument("--degree", type=int, default=1, help="entry degree bound")
    p_rand.add_argument("--label", default="", help="family label")
    p_rand.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FamilyValidationError, FieldError, PolyParseError, AnalysisError,
            FileNotFoundError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
