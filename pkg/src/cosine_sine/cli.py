"""Command-line entry point.

Exit codes: 0 clean, 1 certificates or failed checks, 2 invalid semigroup
or sigma, 3 parse or usage error, 4 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from pathlib import Path

import numpy as np

from .equations import check_prop31
from .families import ConstraintError, FamilyId, Unrealizable, construct, sample_params
from .fields import FieldError, make_field
from .classify import classify
from .oracle import DEFAULT_BUDGET, BudgetExceeded, completeness_report
from .report import ParseError, dumps, load_semigroup_file, new_report, semigroup_file_json
from .semigroup import CATALOG_NAMES, InvalidSemigroup, catalog, enumerate_involutive_automorphisms

EXIT_OK, EXIT_CERTS, EXIT_INVALID, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3, 4
DEFAULT_SEED = 20240601


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for invalid input
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _say(msg: str = ""):
    print(msg, file=sys.stderr)


def _emit(report: dict, args) -> None:
    text = dumps(report, timings=not args.no_timings)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        _say(f"report written to {args.out}")


def _field(spec: str, finite: bool = False):
    try:
        F = make_field(spec)
    except FieldError as exc:
        raise _Usage(str(exc)) from None
    if finite and not F.is_finite:
        raise _Usage(f"{spec} is not a finite field; this command needs gf:p or gf:p^2")
    return F


def _load(source: str):
    """A semigroup file path, or a catalog name."""
    if Path(source).exists():
        sf = load_semigroup_file(source)
        return sf.semigroup, sf.sigma, source
    if source in CATALOG_NAMES:
        return catalog(source), None, f"catalog:{source}"
    raise ParseError(f"{source}: no such file or catalog name (catalog: {', '.join(CATALOG_NAMES)})")


def _sigmas(S, fixed, index):
    allowed = enumerate_involutive_automorphisms(S)
    if index is not None:
        if not 0 <= index < len(allowed):
            raise InvalidSemigroup(f"--sigma-index {index} out of range; {len(allowed)} involutive "
                                   "automorphisms exist")
        return [(index, allowed[index])]
    if fixed is not None:
        return [(next((i for i, s in enumerate(allowed) if s == fixed), None), fixed)]
    return list(enumerate(allowed))


# -- commands ---------------------------------------------------------------


def cmd_validate(args) -> int:
    report = new_report("validate", {"file": args.file}, None, None)
    try:
        sf = load_semigroup_file(args.file)
    except InvalidSemigroup as exc:
        report["results"].append({"valid": False, "error": str(exc),
                                  "witnesses": [list(w) for w in exc.witnesses[:50]]})
        report["summary"] = {"valid": False}
        _say(f"invalid: {exc}")
        _emit(report, args)
        return EXIT_INVALID
    S = sf.semigroup
    inv = enumerate_involutive_automorphisms(S)
    report["results"].append({
        "valid": True, "order": S.n, "is_group": S.is_group(),
        "commutative": S.is_commutative(),
        "sigma": None if sf.sigma is None else sf.sigma.perm.tolist(),
        "involutive_automorphisms": [s.perm.tolist() for s in inv],
    })
    report["summary"] = {"valid": True}
    _say(f"valid semigroup of order {S.n}; {len(inv)} involutive automorphisms")
    _emit(report, args)
    return EXIT_OK


def cmd_solve(args) -> int:
    F = _field(args.field, finite=True)
    S, fixed, src = _load(args.semigroup)
    report = new_report("solve", {"semigroup": src, "table": S.table.tolist(),
                                  "sigma_index": args.sigma_index, "shards": args.shards,
                                  "budget": args.budget}, F.spec, None)
    certs = 0
    for idx, sigma in _sigmas(S, fixed, args.sigma_index):
        run = completeness_report(S, sigma, F, budget=args.budget, shards=args.shards,
                                  conditional_lemmas=False, all_matches=args.all_matches)
        entry = run.to_json()
        entry["sigma_index"] = idx
        report["results"].append(entry)
        certs += len(run.certificates)
        _say(f"sigma={sigma.perm.tolist()}: {run.solution_count} solutions, "
             f"{len(run.certificates)} unclassified; {dict(sorted(run.histogram.items()))}")
    report["summary"] = {"runs": len(report["results"]), "certificates": certs}
    _emit(report, args)
    return EXIT_CERTS if certs else EXIT_OK


def cmd_families(args) -> int:
    F = _field(args.field)
    names = args.catalog or list(CATALOG_NAMES)
    for n in names:
        if n not in CATALOG_NAMES:
            raise _Usage(f"unknown catalog semigroup {n!r}")
    report = new_report("families", {"catalog": names, "samples": args.samples,
                                     "verify": args.verify}, F.spec, args.seed)
    t0 = time.perf_counter()
    failures = 0
    for fi, fam in enumerate(FamilyId):
        row = {"family": fam.value, "constructed": 0, "zero_residual": 0, "failed": [],
               "unrealizable": [], "max_residual": None}
        variants, rt = Counter(), Counter()
        for name in names:
            S = catalog(name)
            for si, sigma in enumerate(enumerate_involutive_automorphisms(S)):
                rng = np.random.default_rng([args.seed, fi, CATALOG_NAMES.index(name), si])
                for _ in range(args.samples):
                    try:
                        p = sample_params(fam, S, sigma, F, rng)
                    except Unrealizable as exc:
                        row["unrealizable"].append({"semigroup": name, "sigma_index": si,
                                                    "reason": str(exc)})
                        break
                    try:
                        t = construct(fam, p, S, sigma)
                    except (ConstraintError, RuntimeError) as exc:
                        row["failed"].append({"semigroup": name, "sigma_index": si,
                                              "error": str(exc), "params": p.to_json()})
                        continue
                    row["constructed"] += 1
                    if t.residual.max_abs is not None:
                        row["max_residual"] = max(row["max_residual"] or 0.0, t.residual.max_abs)
                    if not t.residual.zero:
                        row["failed"].append({"semigroup": name, "sigma_index": si,
                                              "error": "nonzero residual",
                                              "witness": list(t.residual.witness),
                                              "params": p.to_json()})
                        continue
                    row["zero_residual"] += 1
                    if "t42a_variant" in t.notes:
                        variants[t.notes["t42a_variant"]] += 1
                    if args.verify:
                        c = classify(S, sigma, t)
                        if not c.classified:
                            rt["unclassified"] += 1
                            row["failed"].append({"semigroup": name, "sigma_index": si,
                                                  "error": "round-trip unclassified",
                                                  "certificate": c.certificate(S, t)})
                        elif c.family == fam:
                            rt["same"] += 1
                        else:
                            rt[f"overlap:{c.family.value}"] += 1
        if variants:
            row["t42a_variants"] = dict(sorted(variants.items()))
        if args.verify:
            row["round_trip"] = dict(sorted(rt.items()))
        failures += len(row["failed"])
        report["results"].append(row)
        _say(f"{fam.value:<20} {row['zero_residual']:>5} ok  {len(row['failed'])} failed  "
             f"{len(row['unrealizable'])} unrealizable")
    report["summary"] = {"failures": failures,
                         "constructed": sum(r["constructed"] for r in report["results"])}
    report["timings"] = {"total_s": round(time.perf_counter() - t0, 3)}
    _emit(report, args)
    return EXIT_CERTS if failures else EXIT_OK


def cmd_lemmas(args) -> int:
    F = _field(args.field, finite=True)
    if args.semigroup:
        targets = [_load(args.semigroup)]
    else:
        names = args.catalog or list(CATALOG_NAMES)
        for n in names:
            if n not in CATALOG_NAMES:
                raise _Usage(f"unknown catalog semigroup {n!r}")
        targets = [(catalog(n), None, f"catalog:{n}") for n in names]
    report = new_report("lemmas", {"semigroups": [t[2] for t in targets],
                                   "sigma_index": args.sigma_index}, F.spec, None)
    certs = 0
    for S, fixed, src in targets:
        prop31 = check_prop31(S, F)
        certs += len(prop31)
        runs = []
        for idx, sigma in _sigmas(S, fixed, args.sigma_index):
            run = completeness_report(S, sigma, F, budget=args.budget, shards=args.shards)
            certs += len(run.lemma_certificates)
            runs.append({"sigma": sigma.perm.tolist(), "sigma_index": idx,
                         "solution_count": run.solution_count, "lemma33": run.lemma33,
                         "lemma_conditional": run.lemma_conditional,
                         "lemma_certificates": run.lemma_certificates, "timings": run.timings})
            _say(f"{src} sigma={sigma.perm.tolist()}: {run.solution_count} solutions, "
                 f"{len(run.lemma_certificates)} lemma certificates")
        report["results"].append({"semigroup": src, "table": S.table.tolist(),
                                  "is_group": S.is_group(), "prop31_certificates": prop31,
                                  "runs": runs})
        _say(f"{src}: {len(prop31)} chi-additive functions in the span of multiplicative ones"
             if prop31 else
             f"{src}: no chi-additive function in the span of the multiplicative ones")
    report["summary"] = {"certificates": certs}
    _emit(report, args)
    return EXIT_CERTS if certs else EXIT_OK


def cmd_export(args) -> int:
    if args.name not in CATALOG_NAMES:
        raise _Usage(f"unknown catalog semigroup {args.name!r}")
    S = catalog(args.name)
    sigma = None
    if args.sigma_index is not None:
        sigma = _sigmas(S, None, args.sigma_index)[0][1]
    text = json.dumps(semigroup_file_json(S, sigma), indent=2) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


# -- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cosine-sine", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("-o", "--out", help="write the JSON report here (default: stdout)")
        sp.add_argument("--no-timings", action="store_true", help="omit timings from the report")

    def oracle_opts(sp):
        sp.add_argument("--field", default="gf:3", help="gf:p or gf:p^2 (default gf:3)")
        sp.add_argument("--sigma-index", type=int, default=None,
                        help="index into the involutive automorphisms (default: all, or the file's sigma)")
        sp.add_argument("--shards", type=int, default=1, help="parallel oracle shards")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum q^(2n) linear systems the oracle may solve")

    sp = sub.add_parser("validate", help="check a semigroup file")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("solve", help="enumerate and classify every solution")
    sp.add_argument("semigroup", help="semigroup JSON file or catalog name")
    oracle_opts(sp)
    sp.add_argument("--all-matches", action="store_true", help="report every matching family")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("families", help="sample and verify every solution family")
    sp.add_argument("--field", default="gf:5^2", help="gf:p, gf:p^2 or complex:tol (default gf:5^2)")
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--verify", action="store_true", help="also round-trip through the classifier")
    sp.add_argument("--catalog", nargs="*", help="restrict to these catalog semigroups")
    common(sp)
    sp.set_defaults(func=cmd_families)

    sp = sub.add_parser("lemmas", help="lemma and proposition sweeps over oracle solutions")
    sp.add_argument("semigroup", nargs="?", help="semigroup JSON file or catalog name")
    sp.add_argument("--catalog", nargs="*", help="catalog semigroups (default: all)")
    oracle_opts(sp)
    common(sp)
    sp.set_defaults(func=cmd_lemmas)

    sp = sub.add_parser("export", help="write a catalog semigroup as a semigroup file")
    sp.add_argument("name", help=f"one of {', '.join(CATALOG_NAMES)}")
    sp.add_argument("--sigma-index", type=int, default=None)
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, _Usage) as exc:
        _say(f"error: {exc}")
        return EXIT_PARSE
    except InvalidSemigroup as exc:
        _say(f"invalid: {exc}")
        for w in exc.witnesses[:10]:
            _say(f"  witness {tuple(w)}")
        return EXIT_INVALID
    except BudgetExceeded as exc:
        _say(f"budget exceeded: {exc}")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
