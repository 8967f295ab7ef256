"""Command-line front end.

Every subcommand is pure given its inputs and prints deterministically.
Exit codes: 0 = success / the queried property holds; 1 = a meaningful
negative (non-membership, refutation, violation); 2 = usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import conditional, constructions, families
from .cone import Certificate, ConeDescription, conditional_implied_by, is_shannon_type
from .distribution import (
    InvalidDistribution,
    JointDistribution,
    entropy_profile,
    format_distribution,
    format_real,
    parse_distribution,
)
from .expressions import (
    ExpressionSyntaxError,
    InfoExpression,
    box_expression,
    entropy,
    mutual_information,
    parse,
    parse_expression,
)
from .subsets import default_names, mask_of_names


class UsageError(Exception):
    pass


def _load_distribution(path: str) -> JointDistribution:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return parse_distribution(handle.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except InvalidDistribution as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _parse_expr(text: str, var_names) -> InfoExpression:
    try:
        return parse(text, var_names)
    except (ExpressionSyntaxError, KeyError) as exc:
        raise UsageError(f"bad expression {text!r}: {exc}") from exc


def _expr_names(texts: list[str], explicit_n: int | None) -> tuple[str, ...]:
    """Default variable universe A..F for expressions given without a file."""
    if explicit_n is not None:
        if not 1 <= explicit_n <= 6:
            raise UsageError("--n must be within 1..6")
        return default_names(explicit_n)
    used = set()
    for text in texts:
        try:
            ast = parse_expression(text, default_names(6))
        except ExpressionSyntaxError as exc:
            raise UsageError(f"bad expression {text!r}: {exc}") from exc
        for term in ast.terms:
            used.update(term.first)
            used.update(term.second or ())
            used.update(term.condition)
    letters = default_names(6)
    top = max((letters.index(name) for name in used), default=0)
    return letters[: top + 1]


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}") from exc


def _cmd_profile(args) -> int:
    d = _load_distribution(args.dist)
    for line in entropy_profile(d).lines(d.var_names):
        print(line)
    return 0


def _cmd_eval(args) -> int:
    d = _load_distribution(args.dist)
    expr = _parse_expr(args.expr, d.var_names)
    print(format_real(expr.evaluate(entropy_profile(d))))
    return 0


def _cmd_shannon_type(args) -> int:
    names = _expr_names([args.expr], args.n)
    expr = _parse_expr(args.expr, names)
    result = is_shannon_type(expr)
    if isinstance(result, Certificate):
        print("SHANNON-TYPE")
        print(result.serialize(names))
        return 0
    print("NOT SHANNON-TYPE")
    print(result.serialize(names))
    return 1


def _cmd_implied_by(args) -> int:
    names = _expr_names([args.target] + args.constraint, args.n)
    target = _parse_expr(args.target, names)
    constraints = [_parse_expr(text, names) for text in args.constraint]
    cone = ConeDescription.shannon(len(names))
    cert = conditional_implied_by(cone, constraints, target)
    if cert is None:
        print("NOT IMPLIED")
        return 1
    print("IMPLIED")
    print(cert.serialize(names))
    return 0


def _cmd_family(args) -> int:
    try:
        if args.name == "geometric" and args.emit == "closed":
            q = int(args.param)
            profile = families.geometric_closed_profile(q)
            for line in profile.lines(("A", "B", "C", "D")):
                print(line)
            print(f"I(C;D) = {format_real(mutual_information(4, 4, 8).evaluate(profile))}")
            print(f"I(A;B) = {format_real(mutual_information(4, 1, 2).evaluate(profile))}")
            print(f"H(C|A,B) = {format_real(entropy(4, 4, 3).evaluate(profile))}")
            print(f"box = {format_real(box_expression(4, 1, 2, 4, 8).evaluate(profile))}")
            return 0
        param = int(args.param) if args.name == "geometric" else _rational(args.param)
        d = families.generate(args.name, param)
    except families.ParameterError as exc:
        raise UsageError(str(exc)) from exc
    if args.emit == "profile":
        for line in entropy_profile(d).lines(d.var_names):
            print(line)
    elif args.emit == "closed":
        raise UsageError("--emit closed is only available for the geometric family")
    else:
        sys.stdout.write(format_distribution(d))
    return 0


def _cmd_check(args) -> int:
    d = _load_distribution(args.dist)
    try:
        ci = conditional.get(args.ineq)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    result = conditional.check(ci, d)
    for text, flag, value in zip(ci.constraint_texts, result.exact_flags, result.constraint_values):
        status = "holds exactly" if flag else "does not hold"
        print(f"constraint {text} = {format_real(value)} ({status})")
    print(f"target {ci.target_text} = {format_real(result.target_value)}")
    if not result.constraints_exact:
        print("constraints not satisfied: no claim made")
        return 0
    if result.target_value < -1e-9:
        print("VIOLATION: constraints hold but target is negative")
        return 1
    print("holds")
    return 0


def _cmd_refute(args) -> int:
    try:
        witness = conditional.refute(
            args.ineq,
            family=args.family,
            lambda_bound=_rational(args.lam),
            precision=args.precision,
        )
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    except conditional.RefutationError as exc:
        print(f"refutation failed: {exc}", file=sys.stderr)
        return 2
    print(witness.serialize())
    return 1


def _cmd_double_markov(args) -> int:
    d = _load_distribution(args.dist)
    try:
        x = mask_of_names(args.x.split(","), d.var_names)
        y = mask_of_names(args.y.split(","), d.var_names)
        z = mask_of_names(args.z.split(","), d.var_names)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    try:
        result = constructions.double_markov_witness(d, x, y, z)
    except constructions.PreconditionError as exc:
        raise UsageError(f"precondition failed: {exc}") from exc
    print(f"witness variable {result.w_name} with {result.class_count} classes")
    sys.stdout.write(format_distribution(result.extended))
    return 0


def _cmd_aep(args) -> int:
    try:
        certificate = constructions.aep_margin(args.target, args.q)
        report = constructions.aep_point(args.target, args.q)
    except (families.ParameterError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    print(certificate.serialize())
    print(report.serialize())
    return 1 if certificate.violated else 0


def _cmd_asymptotics(args) -> int:
    names = ("A", "B", "C", "D")
    expr = _parse_expr(args.expr, names)
    try:
        eps_list = [_rational(x) for x in args.eps.split(",")]
        rows = families.asymptotic_report(args.family, expr, eps_list)
    except families.ParameterError as exc:
        raise UsageError(str(exc)) from exc
    print(families.format_report(rows, tsv=args.format == "tsv"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infoineq",
        description="Exact toolkit for linear and conditional information inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="print the entropy profile of a distribution file")
    p.add_argument("dist")
    p.set_defaults(run=_cmd_profile)

    p = sub.add_parser("eval", help="evaluate an expression on a distribution file")
    p.add_argument("--expr", required=True)
    p.add_argument("dist")
    p.set_defaults(run=_cmd_eval)

    p = sub.add_parser("shannon-type", help="decide Shannon-type derivability")
    p.add_argument("--expr", required=True)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(run=_cmd_shannon_type)

    p = sub.add_parser("implied-by", help="decide a conditional implication over a cone")
    p.add_argument("--target", required=True)
    p.add_argument("--constraint", action="append", default=[], required=True)
    p.add_argument("--cone", choices=["shannon"], default="shannon")
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(run=_cmd_implied_by)

    p = sub.add_parser("family", help="emit a counterexample family member")
    p.add_argument("--name", required=True, choices=sorted(families.FAMILIES) + ["geometric"])
    p.add_argument("--param", required=True)
    p.add_argument("--emit", choices=["dist", "profile", "closed"], default="dist")
    p.set_defaults(run=_cmd_family)

    p = sub.add_parser("check", help="check a conditional inequality on a distribution")
    p.add_argument("--ineq", required=True)
    p.add_argument("dist")
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("refute", help="find a witness against the Lagrange relaxation")
    p.add_argument("--ineq", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--family", default=None)
    p.add_argument("--precision", type=int, default=None)
    p.set_defaults(run=_cmd_refute)

    p = sub.add_parser("double-markov", help="extract the common-information witness")
    p.add_argument("dist")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--z", required=True)
    p.set_defaults(run=_cmd_double_markov)

    p = sub.add_parser("aep", help="limit-point certificate for I1 or I3")
    p.add_argument("--target", required=True, choices=["I1", "I3"])
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(run=_cmd_aep)

    p = sub.add_parser("asymptotics", help="tabulate scalings of an expression on a family")
    p.add_argument("--family", required=True, choices=sorted(families.FAMILIES))
    p.add_argument("--expr", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--format", choices=["text", "tsv"], default="text")
    p.set_defaults(run=_cmd_asymptotics)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
