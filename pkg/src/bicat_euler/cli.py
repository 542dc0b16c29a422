"""Command line front end: chi, check, verify, gen.

All numeric output is exact rational text; exit codes are 0 (pass),
1 (check or verification failed), 2 (input error), 3 (internal assertion
or generator failure).  --json emits a machine-readable RunReport.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import bicat, bifib, fib1, fincat, generators
from .catdsl import Document, parse, serialize
from .exactq import format_rational

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class InputError(Exception):
    pass


def _load(path: str) -> tuple[Document, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc}")
    result = parse(text)
    if result.document is None:
        lines = [f"{path}:{d}" for d in result.diagnostics]
        raise InputError("\n".join(lines) or f"{path}: unreadable document")
    return result.document, hashlib.sha256(text.encode("utf-8")).hexdigest()


def _emit(args, report: dict, status: int) -> int:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    return status


def _vector_json(vector) -> dict:
    return vector.to_json() if vector is not None else None


def cmd_chi(args) -> int:
    doc, digest = _load(args.file)
    kind = args.kind
    if kind is None:
        kind = {"category": "category", "catgraph": "catgraph", "bicategory": "bicategory"}.get(doc.kind)
        if kind is None:
            raise InputError(f"{args.file}: kind {doc.kind!r} has no Euler characteristic")
    if kind == "category":
        if doc.kind != "category":
            raise InputError(f"{args.file}: expected a category document")
        euler = fincat.euler_char_cat(doc.value)
    elif kind == "catgraph":
        if doc.kind == "catgraph":
            graph = doc.value
        elif doc.kind == "bicategory":
            graph = doc.value.graph
        else:
            raise InputError(f"{args.file}: expected a catgraph or bicategory document")
        euler = bicat.euler_char_cg(graph)
    elif kind == "bicategory":
        if doc.kind != "bicategory":
            raise InputError(f"{args.file}: expected a bicategory document")
        euler = bicat.euler_char_cg(doc.value.graph)
    else:
        raise InputError(f"unknown kind {kind!r}")
    report = {
        "command": "chi",
        "inputs": [{"path": args.file, "sha256": digest}],
        "results": {
            "chi": format_rational(euler.chi) if euler.chi is not None else None,
            "missing": list(euler.missing()),
        },
    }
    if args.weighting:
        report["results"]["weighting"] = _vector_json(euler.weighting)
    if args.coweighting:
        report["results"]["coweighting"] = _vector_json(euler.coweighting)
    if euler.chi is None:
        report["status"] = EXIT_FAIL
        if not args.json:
            print(f"no Euler characteristic (missing: {', '.join(euler.missing())})")
        return _emit(args, report, EXIT_FAIL)
    report["status"] = EXIT_PASS
    if not args.json:
        line = format_rational(euler.chi)
        if args.decimal:
            line += f"  (approx {float(euler.chi):.6g})"
        print(line)
        if args.weighting and euler.weighting is not None:
            print("weighting:", json.dumps(euler.weighting.to_json(), sort_keys=True))
        if args.coweighting and euler.coweighting is not None:
            print("coweighting:", json.dumps(euler.coweighting.to_json(), sort_keys=True))
    return _emit(args, report, EXIT_PASS)


_PREDICATES = ("acyclic", "fibered", "fib-groupoids", "pseudogroupoid", "biequivalence", "fib-pseudogroupoids")


def cmd_check(args) -> int:
    doc, digest = _load(args.file)
    witnesses = {}
    if args.predicate == "acyclic":
        if doc.kind == "category":
            ok = fincat.is_acyclic(doc.value)
        elif doc.kind == "bicategory":
            ok = bicat.is_acyclic_bicat(doc.value)
        else:
            raise InputError("acyclic expects a category or bicategory document")
    elif args.predicate in ("fibered", "fib-groupoids"):
        if doc.kind != "functor":
            raise InputError(f"{args.predicate} expects a functor document")
        rep = fib1.classify_fibration(doc.value)
        ok = rep.fibered if args.predicate == "fibered" else rep.fibered_in_groupoids
        witnesses = rep.to_json()["witnesses"]
    elif args.predicate == "pseudogroupoid":
        if doc.kind != "bicategory":
            raise InputError("pseudogroupoid expects a bicategory document")
        ok = bicat.pseudogroupoid_check(doc.value)
        if not ok:
            witnesses = _pseudogroupoid_witness(doc.value)
    elif args.predicate == "biequivalence":
        if doc.kind != "laxfunctor":
            raise InputError("biequivalence expects a laxfunctor document")
        ok = bicat.check_biequivalence(doc.value)
    elif args.predicate == "fib-pseudogroupoids":
        if doc.kind != "laxfunctor":
            raise InputError("fib-pseudogroupoids expects a laxfunctor document")
        rep = bifib.classify_bifibration(doc.value)
        ok = rep.fibered_in_pseudogroupoids
        witnesses = rep.to_json()["witnesses"]
    else:
        raise InputError(f"unknown predicate {args.predicate!r}")
    status = EXIT_PASS if ok else EXIT_FAIL
    report = {
        "command": f"check {args.predicate}",
        "inputs": [{"path": args.file, "sha256": digest}],
        "results": {"pass": ok, "witnesses": witnesses},
        "status": status,
    }
    if not args.json:
        print("pass" if ok else f"fail {json.dumps(witnesses, sort_keys=True)}")
    return _emit(args, report, status)


def _pseudogroupoid_witness(b) -> dict:
    for x in b.objects:
        for y in b.objects:
            hom = b.hom_at(x, y)
            for m in hom.morphisms:
                if hom.inverse_of(m.name) is None:
                    return {"non_invertible_2cell": [x, y, m.name]}
            for f in hom.objects:
                if not bicat.is_equivalence_1cell(b, x, y, f):
                    return {"non_equivalence_1cell": [x, y, f]}
    return {}


def cmd_verify(args) -> int:
    doc, digest = _load(args.file)
    if args.theorem == "gr":
        if doc.kind != "laxcat":
            raise InputError("verify gr expects a laxcat document")
        rep = fib1.verify_gr_formula(doc.value)
        summary = f"{format_rational(rep.lhs)} = " + " + ".join(
            f"{format_rational(rep.coweighting[b])}·{format_rational(rep.fiber_chi[b])}"
            for b in rep.coweighting.index
        )
        ok = rep.equal
    elif args.theorem == "product-cat":
        if doc.kind != "functor":
            raise InputError("verify product-cat expects a functor document")
        rep = fib1.verify_product_formula_cat(doc.value)
        summary = f"{format_rational(rep.chi_total)} = " + " + ".join(
            f"{format_rational(cb)} · {format_rational(cf)}" for _, cb, cf in rep.components
        )
        ok = rep.equal
    elif args.theorem == "biequivalence":
        if doc.kind != "laxfunctor":
            raise InputError("verify biequivalence expects a laxfunctor document")
        rep = bicat.verify_biequivalence_invariance(doc.value)
        summary = f"{format_rational(rep.chi_source)} = {format_rational(rep.chi_target)}"
        ok = rep.equal and rep.transported_valid
    elif args.theorem == "gr-bicat":
        if doc.kind == "trihom":
            rep = bifib.verify_gr_formula_bicat(doc.value)
        elif doc.kind == "laxfunctor":
            rep = bifib.verify_gr_formula_bicat(doc.value)
        else:
            raise InputError("verify gr-bicat expects a trihom or laxfunctor document")
        summary = f"{format_rational(rep.chi_gr)} = " + " + ".join(
            f"{format_rational(rep.base_coweighting[b])}·{format_rational(rep.fiber_chi[b])}"
            for b in rep.base_coweighting.index
        )
        ok = rep.equal and rep.product_coweighting_valid
    elif args.theorem == "product-bicat":
        if doc.kind != "laxfunctor":
            raise InputError("verify product-bicat expects a laxfunctor document")
        rep = bifib.verify_product_formula_bicat(doc.value)
        summary = f"{format_rational(rep.chi_total)} = " + " + ".join(
            f"{format_rational(cb)} · {format_rational(cf)}" for _, cb, cf in rep.components
        )
        ok = rep.equal and rep.grothendieck_matches_total
    else:
        raise InputError(f"unknown theorem {args.theorem!r}")
    status = EXIT_PASS if ok else EXIT_FAIL
    report = {
        "command": f"verify {args.theorem}",
        "inputs": [{"path": args.file, "sha256": digest}],
        "results": rep.to_json(),
        "status": status,
    }
    if not args.json:
        print(summary)
        if not ok:
            print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
    return _emit(args, report, status)


_GEN_KINDS = {
    "acyclic-cat": (generators.gen_acyclic_category, lambda v: fincat.is_acyclic(v)),
    "groupoid-valued-laxcat": (
        generators.gen_groupoid_valued_laxcat,
        lambda v: all(
            cat.inverse_of(m.name) is not None for cat in v.fiber.values() for m in cat.morphisms
        ),
    ),
    "fib-groupoids-functor": (
        generators.gen_fib_groupoids_functor,
        lambda v: fib1.classify_fibration(v).fibered_in_groupoids,
    ),
    "pseudogroupoid": (generators.gen_pseudogroupoid, bicat.pseudogroupoid_check),
    "trihom-psgrpd": (
        generators.gen_trihom,
        lambda v: all(bicat.pseudogroupoid_check(f) for f in v.fiber.values()),
    ),
}


def cmd_gen(args) -> int:
    builder, predicate = _GEN_KINDS[args.kind]
    value = builder(args.seed, args.size)
    if not predicate(value):
        print(f"generator produced an instance failing its own predicate ({args.kind})", file=sys.stderr)
        return EXIT_INTERNAL
    text = serialize(value)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        if not args.json:
            print(args.out)
    else:
        sys.stdout.write(text)
    report = {
        "command": f"gen {args.kind}",
        "inputs": [],
        "results": {
            "seed": args.seed,
            "size": args.size,
            "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
            "out": args.out,
        },
        "status": EXIT_PASS,
    }
    return _emit(args, report, EXIT_PASS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bicat-euler",
        description="Exact Euler characteristics of finite categories, cat-graphs and bicategories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    chi = sub.add_parser("chi", help="Euler characteristic of a category/cat-graph/bicategory file")
    chi.add_argument("file")
    chi.add_argument("--kind", choices=["category", "catgraph", "bicategory"])
    chi.add_argument("--weighting", action="store_true")
    chi.add_argument("--coweighting", action="store_true")
    chi.add_argument("--decimal", action="store_true")
    chi.add_argument("--json", action="store_true")
    chi.set_defaults(func=cmd_chi)

    check = sub.add_parser("check", help="decide a predicate; exit 1 when it fails")
    check.add_argument("file")
    check.add_argument("predicate", choices=_PREDICATES)
    check.add_argument("--json", action="store_true")
    check.set_defaults(func=cmd_check)

    verify = sub.add_parser("verify", help="verify an identity exactly; exit 1 on mismatch")
    verify.add_argument("theorem", choices=["gr", "product-cat", "biequivalence", "gr-bicat", "product-bicat"])
    verify.add_argument("file")
    verify.add_argument("--json", action="store_true")
    verify.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="emit a seeded instance satisfying its predicate")
    gen.add_argument("kind", choices=sorted(_GEN_KINDS))
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--size", type=int, default=2)
    gen.add_argument("--out")
    gen.add_argument("--json", action="store_true")
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except (
        fincat.InvalidCategory,
        bicat.MissingCompositionData,
        bicat.HomWithoutEuler,
        bicat.NotAcyclic,
        bicat.NotPseudogroupoid,
        bicat.NotBiequivalence,
        bicat.MissingEulerCharacteristic,
        fib1.NotFibered,
        fib1.NotBiFibered,
        fib1.ObjectNotInBase,
        fib1.MorphismNotInCategory,
        fib1.MissingEulerCharacteristic,
        fib1.IncoherentData,
        bifib.IllTypedComponent,
        bifib.MissingCoweighting,
    ) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, fib1.NonUniqueLift) as exc:
        print(f"internal assertion failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
