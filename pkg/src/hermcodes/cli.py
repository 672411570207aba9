"""Command-line interface.

Exit codes: 0 success, 1 usage or budget error, 2 a claim checked by the
command disagrees with enumeration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .engine import default_workers
from .errors import BudgetError

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj, out: str | None = None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _field(args):
    from .field import make_field
    return make_field(args.p, args.a)


def _variety(args):
    from .varieties import hermitian_points
    return hermitian_points(args.n, _field(args))


def _workers(args) -> int:
    return args.threads if args.threads else default_workers()


# -- commands -----------------------------------------------------------------

def cmd_field_info(args) -> int:
    _dump(_field(args).info(), args.out)
    return EXIT_OK


def cmd_points(args) -> int:
    from .projective import projective_space

    F = _field(args)
    space = projective_space(args.n, F)
    if args.ambient:
        rows = space.points
    else:
        X = _variety(args)
        rows = space.points[X.points.indices]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"x{i}" for i in range(args.n + 1)])
            w.writerows(rows.tolist())
    _dump({"n": args.n, "q": F.q, "count": len(rows), "ambient": len(space)}, args.out)
    return EXIT_OK


def cmd_code_info(args) -> int:
    from .code import build_code, exhaustive_cost

    code = build_code(_variety(args), args.h)
    _dump({
        "n": args.n, "h": args.h, "q": code.field.q,
        "length": code.length,
        "dimension": code.dimension,
        "monomials": code.basis_size,
        "exhaustiveCost": exhaustive_cost(code),
    }, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .code import build_code, full_spectrum, sampled_spectrum

    code = build_code(_variety(args), args.h)
    if args.mode == "exhaustive":
        spec = full_spectrum(code, workers=_workers(args), witnesses=args.witnesses)
    else:
        spec = sampled_spectrum(code, args.samples, args.seed, witnesses=args.witnesses)
    _dump(spec.to_json(code.field), args.out)
    return EXIT_OK


def cmd_lines(args) -> int:
    from .varieties import hermitian_points, line_census

    report = line_census(hermitian_points(3, _field(args)))
    _dump(report, args.out)
    return EXIT_OK if report["match"] else EXIT_MISMATCH


def cmd_quadric_census(args) -> int:
    from .census import hyperplane_pair_census, verify_weight_claims
    from .varieties import hermitian_points, quadric_census

    F = _field(args)
    X = hermitian_points(3, F)
    pairs = hyperplane_pair_census(X)
    rows = pairs.cell_rows()
    if args.emit == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
    claims = verify_weight_claims(F.t, pairs)
    if args.emit == "json":
        report = {"q": F.q, "plane_pairs": rows, "weight_claims": claims}
        if not args.skip_quadrics:
            try:
                report["quadrics"] = quadric_census(X, workers=_workers(args))
            except BudgetError as exc:
                report["quadrics"] = {"skipped": str(exc)}
        _dump(report, args.out)
    return EXIT_MISMATCH if claims["mismatch"] else EXIT_OK


def cmd_divisor(args) -> int:
    from .divisibility import lambda_for, observed_gcd, weight_violations

    case = lambda_for(args.n, args.h)
    report = {"n": args.n, "h": args.h, "lambda": case.value, "case": case.case, "s": case.s, "r": case.r}
    if args.p is None:
        if args.verify:
            raise SystemExit("--verify needs --p")
        _dump(report, args.out)
        return EXIT_OK
    F = _field(args)
    report["t"] = F.t
    report["divisor"] = case.divisor(F.t)
    if args.verify:
        from .code import build_code, full_spectrum, sampled_spectrum

        mode = args.verify[0]
        code = build_code(_variety(args), args.h)
        if mode == "exhaustive":
            spec = full_spectrum(code, workers=_workers(args), witnesses=0)
        elif mode == "sampled":
            n_samples = int(args.verify[1]) if len(args.verify) > 1 else args.samples
            spec = sampled_spectrum(code, n_samples, args.seed, witnesses=0)
            report["samples"] = n_samples
            report["seed"] = args.seed
        else:
            raise SystemExit(f"unknown verify mode {mode!r}")
        bad = weight_violations(spec.counts, F.t, case.value)
        report.update({
            "mode": mode,
            "checkedWeights": spec.weights(),
            "violations": bad,
            "observedGcd": observed_gcd(spec.counts),
        })
        _dump(report, args.out)
        return EXIT_MISMATCH if bad else EXIT_OK
    _dump(report, args.out)
    return EXIT_OK


def cmd_transform_check(args) -> int:
    from .code import sample_coefficients
    from .divisibility import affine_verify, to_subfield_system
    from .forms import Form, format_form, monomial_basis, parse_form

    F = _field(args)
    forms = [parse_form(text, args.n, F) for text in args.form or []]
    if args.random:
        basis = monomial_basis(args.n, args.h)
        for row in sample_coefficients(len(basis), F.q, args.random, args.seed):
            forms.append(Form(basis, tuple(int(c) for c in row)))
    results = [{"form": None, **affine_verify(to_subfield_system([], F, n=args.n))}]
    for f in forms:
        results.append({"form": format_form(f, F), **affine_verify(to_subfield_system([f], F))})
    ok = all(r["divisible"] and r["matchesProjective"] and r["roundTrip"] for r in results)
    _dump({"n": args.n, "q": F.q, "results": results, "ok": ok}, args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_conjecture(args) -> int:
    from .census import conjecture_check

    F = _field(args)
    r = conjecture_check(args.n, args.h, F.t, args.mode, workers=_workers(args),
                         samples=args.samples, seed=args.seed, p=args.p, a=args.a)
    _dump(r.to_json(), args.out)
    failed = [p for p in (r.part1, r.part2, r.part3) if p.get("holds") is False]
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_acceptance(args) -> int:
    from .acceptance import CRITERIA, run

    only = None
    if args.criteria:
        only = {int(c) for c in args.criteria.split(",")}
        unknown = only - set(CRITERIA)
        if unknown:
            raise SystemExit(f"unknown criteria {sorted(unknown)}")
    summary = run(args.tier, only, echo=lambda s: print(s, file=sys.stderr))
    if args.out:
        _dump(summary, args.out)
    failed = [f"{k} ({v['title']})" for k, v in summary.items() if not v["passed"]]
    print(f"{len(summary) - len(failed)}/{len(summary)} criteria passed", file=sys.stderr)
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hermcodes", description="Functional codes on Hermitian varieties.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help_, n=False, h=False, field=True, threads=False):
        sp = sub.add_parser(name, help=help_)
        if field:
            # field="optional": lambda needs only (n, h); t comes in for the divisor
            sp.add_argument("--p", type=int, required=field is True, help="characteristic")
            sp.add_argument("--a", type=int, default=1, help="t = p^a")
        if n:
            sp.add_argument("--n", type=int, required=True, help="ambient dimension")
        if h:
            sp.add_argument("--h", type=int, required=True, help="form degree")
        if threads:
            sp.add_argument("--threads", type=int, default=0,
                            help="worker processes (default: $HERMCODES_THREADS or 1)")
        sp.add_argument("--out", help="write JSON here instead of stdout")
        sp.set_defaults(func=fn)
        return sp

    command("field-info", cmd_field_info, "moduli and tables of F_{t^2}")

    sp = command("points", cmd_points, "points of H(n, t^2)", n=True)
    sp.add_argument("--ambient", action="store_true", help="list all of P^n instead")
    sp.add_argument("--csv", help="write canonical coordinates to this file")

    command("code-info", cmd_code_info, "length and dimension of C_h(X)", n=True, h=True)

    sp = command("spectrum", cmd_spectrum, "weight distribution of C_h(X)", n=True, h=True, threads=True)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--witnesses", type=int, default=5, help="weights with stored witnesses")

    command("lines", cmd_lines, "line census of H(3, t^2)")

    sp = command("quadric-census", cmd_quadric_census,
                 "plane-pair cells, weight claims and quadric classes on H(3, t^2)", threads=True)
    sp.add_argument("--emit", choices=["json", "csv"], default="json")
    sp.add_argument("--skip-quadrics", action="store_true", help="omit the full quadric classification")

    sp = command("divisor", cmd_divisor, "divisibility exponent lambda(n, h)", n=True, h=True,
                 field="optional", threads=True)
    sp.add_argument("--verify", nargs="+", metavar="MODE", help="'exhaustive' or 'sampled [N]'")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = command("transform-check", cmd_transform_check, "affine count checks over F_t", n=True)
    sp.add_argument("--form", action="append", help="form to check, e.g. 'x0*x1 + a*x2^2'")
    sp.add_argument("--random", type=int, default=0, help="also check this many random forms")
    sp.add_argument("--h", type=int, default=2, help="degree of the random forms")
    sp.add_argument("--seed", type=int, default=0)

    sp = command("conjecture", cmd_conjecture, "check the first-2h+1-weights conjecture", n=True, h=True,
                 threads=True)
    sp.add_argument("--mode", choices=["exhaustive", "structured"], default="exhaustive")
    sp.add_argument("--samples", type=int, default=0, help="sampled evidence in structured mode")
    sp.add_argument("--seed", type=int, default=0)

    sp = command("acceptance", cmd_acceptance, "run the acceptance criteria", field=False)
    sp.add_argument("--tier", choices=["fast", "heavy"], default="fast")
    sp.add_argument("--criteria", help="comma-separated subset, e.g. 1,2,5")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(f"error: {exc.code}", file=sys.stderr)
            return EXIT_USAGE
        raise


if __name__ == "__main__":
    sys.exit(main())
