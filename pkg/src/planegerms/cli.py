"""Command-line entry point.

Every command prints one JSON object (or its flattened text form) on stdout.
Exit status: 0 on success, including ``not_equivalent`` verdicts; 2 on bad
input; 3 when a formula and the numeric oracle disagree under ``--check`` or
on any internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cyclo import format_rational
from .equivalence import decide_equivalence, invariant_signature, verify_certificate
from .errors import (
    ChartMismatch,
    GermError,
    InsufficientTruncation,
    InvalidInput,
    NotDistinct,
    OracleMismatch,
    SchemaError,
)
from .germ import ARC_BOUNDS, GermPresentation
from .invariants import factor_orders, intersection_number, order_along_parameterized
from .newton import CAP_ENV, expand_together
from .oracle import estimate_contact, estimate_order, estimate_order_germ
from .serialize import branch_to_json, read_arc, read_germ, validate, value_to_json
from .series import INF, Arc, arc_size_order, format_series

TOLERANCE = 0.05


def _rational(v) -> str | None:
    return None if v is None else format_rational(Fraction(v))


# --------------------------------------------------------------------------
# commands


def cmd_invariants(args) -> tuple[dict, str]:
    g = _germ(args, args.germ)
    sig = invariant_signature(g)
    out = {
        "factors": [{"mult": k, **cd.to_json()} for k, cd in zip(g.mults, g.char_data())],
        "intersection_matrix": g.intersection_matrix(),
        "multiplicity": g.multiplicity(),
        "applied_shear": _rational(g.shear),
        "signature": sig.to_json(),
    }
    return out, "invariants"


def cmd_expand(args) -> tuple[dict, str]:
    g = _germ(args, args.germ)
    certs = g.report.certified_trunc if g.report is not None else [None] * len(g)
    branches = []
    for (b, k), cert in zip(g.factors, certs):
        entry = branch_to_json(b, k, cert)
        entry.setdefault("certified_trunc", None)
        entry["text"] = f"x = {'t' if b.m == 1 else f't^{b.m}'}, y = {format_series(b.psi)}"
        branches.append(entry)
    return {"branches": branches, "applied_shear": _rational(g.shear)}, "expansion"


def _parameterized_orders(g: GermPresentation, a: Arc) -> list:
    last = None
    for bound in ARC_BOUNDS:
        chart_arc = g.arc_in_chart(a, bound)
        try:
            return [order_along_parameterized(b, chart_arc) for b in g.branches]
        except InsufficientTruncation as exc:
            if g.shear is None:
                raise
            last = exc
    raise last


def _weighted(values, mults):
    total = Fraction(0)
    for v, k in zip(values, mults):
        if v == INF:
            return INF
        total += k * v
    return total


def _oracle_report(slope_est, symbolic, kind: str) -> dict:
    err = abs(slope_est.slope - float(symbolic))
    return {
        "kind": kind,
        "slope": slope_est.slope,
        "symbolic": value_to_json(symbolic),
        "abs_error": err,
        "pass": err <= TOLERANCE,
        "residual": slope_est.residual,
        "samples": slope_est.samples,
        "t_range": list(slope_est.t_range),
    }


def _order_oracle(g: GermPresentation, a: Arc, symbolic, args) -> dict:
    if symbolic == INF:
        raise InvalidInput("the order along this arc is infinite; there is no slope to check")
    if g.source_poly is not None:
        est = estimate_order(g.source_poly, a, args.t_min, args.t_max, args.samples)
    else:
        est = estimate_order_germ(g, a, args.t_min, args.t_max, args.samples)
    return _oracle_report(est, symbolic, "order")


def _contact_oracle(g: GermPresentation, a: Arc, i: int, symbolic, args) -> dict:
    if symbolic == INF:
        raise InvalidInput("the arc lies on the curve; its contact is infinite")
    chart_arc = g.arc_in_chart(a, ARC_BOUNDS[-1])
    t_min = None if args.t_min_given is None else args.t_min
    t_max = None if args.t_max_given is None else args.t_max
    n = args.samples if args.samples_given is not None else 12
    est = estimate_contact(chart_arc, g.branches[i], t_min, t_max, n)
    return _oracle_report(est, symbolic, "contact")


def _require_pass(report: dict) -> None:
    if not report["pass"]:
        raise OracleMismatch(
            f"{report['kind']} slope {report['slope']:.6g} differs from the symbolic value "
            f"{report['symbolic']} by {report['abs_error']:.3g} > {TOLERANCE}"
        )


def cmd_order(args) -> tuple[dict, str]:
    g = _germ(args, args.germ)
    a = _arc(args.arc)
    normalized = factor_orders(g, a)
    parameterized = _parameterized_orders(g, a)
    mu = arc_size_order(a)
    nu = _weighted([r.nu for r in normalized], g.mults)
    nu_p = _weighted([r.nu for r in parameterized], g.mults)
    if (nu == INF) != (nu_p == INF) or (nu != INF and nu * mu != nu_p):
        raise OracleMismatch(f"normalized order {nu} times mu = {mu} is not the parameterized order {nu_p}")
    out = {
        "nu": value_to_json(nu),
        "nu_parameterized": value_to_json(nu_p),
        "mu": value_to_json(mu),
        "factors": [{"mult": k, **r.to_json()} for r, k in zip(normalized, g.mults)],
    }
    if args.check:
        out["check"] = _order_oracle(g, a, nu_p, args)
        _require_pass(out["check"])
    return out, "order"


def cmd_contact(args) -> tuple[dict, str]:
    g = _germ(args, args.germ)
    a = _arc(args.arc)
    results = factor_orders(g, a)
    factors = []
    for i, (r, k) in enumerate(zip(results, g.mults)):
        entry = {"index": i, "mult": k, "contact": value_to_json(r.contact)}
        if args.check and r.contact != INF:
            entry["check"] = _contact_oracle(g, a, i, r.contact, args)
            _require_pass(entry["check"])
        factors.append(entry)
    best = max((r.contact for r in results), key=lambda c: (c == INF, c if c != INF else 0))
    return {"contact": value_to_json(best), "factors": factors}, "contact"


def cmd_oracle(args) -> tuple[dict, str]:
    g = _germ(args, args.germ)
    a = _arc(args.arc)
    if args.kind == "order":
        nu_p = _weighted([r.nu for r in _parameterized_orders(g, a)], g.mults)
        out = _order_oracle(g, a, nu_p, args)
    else:
        if not 0 <= args.factor < len(g):
            raise InvalidInput(f"factor index {args.factor} out of range 0..{len(g) - 1}")
        c = factor_orders(g, a)[args.factor].contact
        out = _contact_oracle(g, a, args.factor, c, args)
        out["factor"] = args.factor
    if args.check:
        _require_pass(out)
    return out, "oracle"


def _common_chart(args) -> tuple[GermPresentation, GermPresentation]:
    f = _germ(args, args.germ)
    if args.other is None:
        return f, f
    g = _germ(args, args.other)
    if f.shear == g.shear:
        return f, g
    if f.source_poly is None or g.source_poly is None:
        raise ChartMismatch(
            f"germs are given in charts with shear {f.shear} and {g.shear}; supply both as polynomials"
        )
    out = []
    for h, rep in zip((f, g), expand_together([f.source_poly, g.source_poly], args.trunc, f.cap)):
        germ = rep.germ()
        germ.source_poly, germ.report = h.source_poly, rep
        out.append(germ)
    return out[0], out[1]


def cmd_intersect(args) -> tuple[dict, str]:
    f, g = _common_chart(args)
    same = args.other is None
    matrix = []
    total = Fraction(0)
    for i, (bi, ki) in enumerate(f.factors):
        row = []
        for j, (bj, kj) in enumerate(g.factors):
            if same and i == j:
                row.append(0)
                continue
            try:
                v = intersection_number(bi, bj)
            except NotDistinct:
                row.append("inf")
                total = INF
                continue
            row.append(v)
            if total != INF and not same:
                total += ki * kj * v
        matrix.append(row)
    if same:
        # (f_red, f_red) has no meaning; report the sum over unordered pairs
        total = sum(f.mults[i] * f.mults[j] * matrix[i][j] for i in range(len(f)) for j in range(i))
    out = {
        "matrix": matrix,
        "left_mults": f.mults,
        "right_mults": g.mults,
        "total": "inf" if total == INF else int(total),
        "applied_shear": _rational(f.shear),
    }
    return out, "intersect"


def cmd_equiv(args) -> tuple[dict, str]:
    f = _germ(args, args.germ)
    g = _germ(args, args.other)
    return decide_equivalence(f, g).to_json(), "certificate"


def _sigma(text: str) -> list[int]:
    try:
        value = json.loads(text) if text.strip().startswith("[") else [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InvalidInput(f"cannot read a permutation from {text!r}") from None
    if not isinstance(value, list):
        raise InvalidInput("sigma must be a list of factor indices")
    return value


def cmd_verify(args) -> tuple[dict, str]:
    f = _germ(args, args.germ)
    g = _germ(args, args.other)
    sigma = _sigma(args.sigma)
    return {"valid": verify_certificate(f, g, sigma), "sigma": sigma}, "verify"


# --------------------------------------------------------------------------
# plumbing


def _germ(args, source) -> GermPresentation:
    return read_germ(source, args.trunc, args.cap)


def _arc(source) -> Arc:
    try:
        return read_arc(source)
    except ValueError as exc:
        raise InvalidInput(f"bad arc: {exc}") from None


def flatten(obj, prefix: str = "") -> list[str]:
    """``path: value`` lines for every field; lists of scalars stay on one line."""
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            lines.extend(flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return lines
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        lines = []
        for i, v in enumerate(obj):
            lines.extend(flatten(v, f"{prefix}[{i}]"))
        return lines
    return [f"{prefix}: {json.dumps(obj)}"]


def emit(obj: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(obj) + "\n")
    else:
        stream.write("\n".join(flatten(obj)) + "\n")


COMMANDS = {
    "invariants": cmd_invariants,
    "expand": cmd_expand,
    "order": cmd_order,
    "contact": cmd_contact,
    "intersect": cmd_intersect,
    "equiv": cmd_equiv,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cap", type=int, default=None, help=f"conductor cap (default: ${CAP_ENV} or 120)")
    common.add_argument("--trunc", type=int, default=6, help="target truncation of Puiseux expansions")

    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--check", action="store_true", help="cross-check against the numeric oracle")
    numeric.add_argument("--t-min", type=float, default=None)
    numeric.add_argument("--t-max", type=float, default=None)
    numeric.add_argument("--samples", type=int, default=None)

    parser = _Parser(prog="planegerms", description="Exact invariants and equivalence of complex plane curve germs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    germ_help = "germ: JSON file, inline JSON or a polynomial in x, y"
    arc_help = "arc: JSON file, inline JSON or a series y(t) for t -> (t, y(t))"

    helps = {
        "invariants": "Puiseux pairs, multiplicities and intersection matrix",
        "expand": "Newton-Puiseux expansion of every branch",
        "order": "order of the germ along an arc",
        "contact": "contact of an arc with each branch",
        "oracle": "numeric log-log estimate of an order or contact",
        "intersect": "intersection numbers between branches",
        "equiv": "decide equivalence and print a certificate",
        "verify": "check a factor bijection",
    }
    for name in ("invariants", "expand"):
        p = sub.add_parser(name, parents=[common], help=helps[name])
        p.add_argument("germ", help=germ_help)
    for name in ("order", "contact"):
        p = sub.add_parser(name, parents=[common, numeric], help=helps[name])
        p.add_argument("germ", help=germ_help)
        p.add_argument("--arc", required=True, help=arc_help)
    p = sub.add_parser("oracle", parents=[common, numeric], help=helps["oracle"])
    p.add_argument("germ", help=germ_help)
    p.add_argument("--arc", required=True, help=arc_help)
    p.add_argument("--kind", choices=("order", "contact"), default="order")
    p.add_argument("--factor", type=int, default=0, help="branch index for --kind contact")
    p = sub.add_parser("intersect", parents=[common], help=helps["intersect"])
    p.add_argument("germ", help=germ_help)
    p.add_argument("other", nargs="?", default=None, help="second germ (default: pairs within the first)")
    for name in ("equiv", "verify"):
        p = sub.add_parser(name, parents=[common], help=helps[name])
        p.add_argument("germ", help=germ_help)
        p.add_argument("other", help=germ_help)
        if name == "verify":
            p.add_argument("--sigma", required=True, help="permutation, e.g. 1,0 or [1,0]")
    return parser


def _numeric_defaults(args) -> None:
    args.t_min_given = getattr(args, "t_min", None)
    args.t_max_given = getattr(args, "t_max", None)
    args.samples_given = getattr(args, "samples", None)
    if hasattr(args, "t_min"):
        args.t_min = 1e-6 if args.t_min is None else args.t_min
        args.t_max = 1e-3 if args.t_max is None else args.t_max
        args.samples = 16 if args.samples is None else args.samples


def run(argv=None, stdout=None) -> int:
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        _numeric_defaults(args)
        out, schema = COMMANDS[args.command](args)
    except GermError as exc:
        emit({"error": exc.to_json()}, fmt, stdout)
        return exc.exit_status
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        emit({"error": {"code": "InternalError", "message": f"{type(exc).__name__}: {exc}"}}, fmt, stdout)
        return 3
    try:
        validate(out, schema)
    except SchemaError as exc:
        emit({"error": {"code": "InternalError", "message": f"output violates the {schema} schema: {exc}"}}, fmt, stdout)
        return 3
    emit(out, fmt, stdout)
    return 0


def main() -> None:
    sys.exit(run())
