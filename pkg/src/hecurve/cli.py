"""Command-line front end.

Every subcommand prints one JSON document (or a flat key/value table) and
exits 0 when all requested checks hold, 1 when a check fails and 2 on
malformed input.  Errors are reported as JSON on stdout as well.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import curve_actions, selftest, wallpaper
from .errors import CheckFailed, HecurveError, MalformedInput
from .exact_linear import as_fraction, format_rational
from .findim_algebra import AlgebraPresentation, center, invariant_report, radical_power_dims
from .hereditary_orders import StandardOrderSpec, order_report, order_spec
from .skew_group import cyclic_idempotents, cyclic_iso_to_order, skew_from_json
from .squid_builder import SquidSpec, build_canonical, build_squid, classify_type, expected_squid_dim

SCHEMA = "hecurve/1"
BOUND_ENV = "HECURVE_COXETER_BOUND"


@dataclass
class CommandConfig:
    subcommand: str
    source: str | None = None
    output_format: str = "json"
    truncation: int | None = None
    lam: Fraction | None = None
    bound: int = selftest.DEFAULT_BOUND


# ---------------------------------------------------------------------------
# input and output


def fixture_names() -> list[str]:
    folder = resources.files("hecurve").joinpath("data/fixtures")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def load_input(source: str | None) -> dict:
    """Inline JSON, '-' for stdin, a file path, or the name of a shipped fixture."""
    if source is None:
        raise MalformedInput("this subcommand needs an input")
    text = source
    if source == "-":
        text = sys.stdin.read()
    elif not source.lstrip().startswith("{"):
        path = Path(source)
        if path.is_file():
            text = path.read_text(encoding="utf-8")
        elif source in fixture_names():
            text = resources.files("hecurve").joinpath(f"data/fixtures/{source}.json").read_text(encoding="utf-8")
        else:
            raise MalformedInput(f"no such file or fixture: {source}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    if not isinstance(data, dict):
        raise MalformedInput("input must be a JSON object")
    if data.get("schema", SCHEMA) != SCHEMA:
        raise MalformedInput(f"unsupported schema {data['schema']!r}; expected {SCHEMA}")
    return data


def _plain(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def render(report: dict, output_format: str) -> str:
    report = _plain(report)
    if output_format == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
    lines: list[str] = []

    def walk(prefix: str, value) -> None:
        if isinstance(value, dict) and value:
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else k, value[k])
        elif isinstance(value, list) and value and any(isinstance(v, (dict, list)) for v in value):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix}: {json.dumps(value, ensure_ascii=False)}")

    walk("", report)
    return "\n".join(lines)


def _substitute_lambda(points: list, lam: Fraction | None) -> list:
    if lam is None:
        return points
    out = []
    for p in points:
        p = dict(p)
        if "coords" in p:
            p["coords"] = [format_rational(lam) if x == "lambda" else x for x in p["coords"]]
        out.append(p)
    return out


# ---------------------------------------------------------------------------
# subcommands; each returns (report, passed)


def cmd_order(cfg: CommandConfig, args) -> tuple[dict, bool]:
    if cfg.source is not None:
        spec = StandardOrderSpec.from_json(load_input(cfg.source))
        if cfg.truncation is not None:
            spec = order_spec(spec.weights, cfg.truncation, spec.base.conductor, spec.radical_cut)
    else:
        if not args.weights:
            raise MalformedInput("order needs --weights or an input spec")
        try:
            weights = [int(x) for x in args.weights.split(",")]
        except ValueError as exc:
            raise MalformedInput(f"bad weight list {args.weights!r}") from exc
        spec = order_spec(weights, cfg.truncation or 2, args.conductor)
    report = order_report(spec)
    return report, report["matches_pattern"] and report["ar_duality"]


def cmd_skew(cfg: CommandConfig, args) -> tuple[dict, bool]:
    data = load_input(cfg.source)
    if cfg.truncation is not None:
        data = {**data, "truncation": cfg.truncation}
    skew = skew_from_json(data)  # raises ActionRelationViolation on a bad action
    A = skew.algebra
    A.validate(check_primitive=False)
    report = {
        "group": {"kind": skew.group.kind, "order": skew.group.order},
        "base_dim": skew.base.dim,
        "dim": A.dim,
        "action_relations": True,
        "center_dim": len(center(A)),
        "radical_filtration": radical_power_dims(A),
    }
    passed = A.dim == skew.base.dim * skew.group.order
    if skew.group.kind == "cyclic":
        n, N = skew.group.n, int(data.get("truncation", 1))
        conductor = int(data.get("conductor", 1))
        eps = cyclic_idempotents(skew, n)
        report["idempotents"] = len(eps)
        gen = data["generators"].get("h", {})
        # the quiver isomorphism concerns the rotation by a primitive n-th root of unity
        if conductor % n == 0 and not gen.get("conjugate") and int(gen.get("galois", 1)) == 1 \
                and int(gen.get("xi_exponent", 0)) == conductor // n:
            iso = cyclic_iso_to_order(n, N, conductor)
            report["quiver_isomorphism"] = iso.to_json()
            passed = passed and iso.verified
    return report, passed


def _squid_spec(cfg: CommandConfig) -> SquidSpec:
    data = load_input(cfg.source)
    data = {**data, "points": _substitute_lambda(data.get("points", []), cfg.lam)}
    return SquidSpec.from_json(data)


def _algebra_report(A: AlgebraPresentation, bound: int) -> dict:
    rep = classify_type(A, bound)
    return {"name": A.name, "dim": A.dim, "rank": A.rank, "invariants": rep.invariants.to_json(),
            "type": rep.kind}


def cmd_squid(cfg: CommandConfig, args) -> tuple[dict, bool]:
    spec = _squid_spec(cfg)
    A = build_squid(spec)
    A.validate()
    report = _algebra_report(A, cfg.bound)
    report["expected_dim"] = expected_squid_dim(spec)
    if getattr(args, "emit_algebra", False):
        report["algebra"] = A.to_json()
    return report, report["dim"] == report["expected_dim"]


def cmd_canonical(cfg: CommandConfig, args) -> tuple[dict, bool]:
    A = build_canonical(_squid_spec(cfg))
    A.validate()
    report = _algebra_report(A, cfg.bound)
    if getattr(args, "emit_algebra", False):
        report["algebra"] = A.to_json()
    return report, True


def cmd_coxeter(cfg: CommandConfig, args) -> tuple[dict, bool]:
    try:
        A = AlgebraPresentation.from_json(load_input(cfg.source))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad algebra JSON: {exc}") from exc
    A.validate()
    inv = invariant_report(A, cfg.bound)
    return {"name": A.name, "dim": A.dim, "coxeter_polynomial": str(inv.coxeter_poly),
            "invariants": inv.to_json()}, True


def cmd_curve_action(cfg: CommandConfig, args) -> tuple[dict, bool]:
    data = load_input(cfg.source)
    spec, candidates = curve_actions.action_from_json(data)
    report = curve_actions.analyze_action(spec, candidates)
    passed = True
    if "expected_signature" in data:
        report["expected_signature"] = data["expected_signature"]
        passed = report["signature"] == data["expected_signature"]
    return report, passed


def cmd_wallpaper(cfg: CommandConfig, args) -> tuple[dict, bool]:
    lam = cfg.lam if cfg.lam is not None else wallpaper.DEFAULT_LAMBDA
    if args.all:
        records = wallpaper.all_records()
    elif args.name:
        records = [wallpaper.lookup(args.name)]
    else:
        raise MalformedInput("wallpaper needs a group name, an index or --all")
    rows, passed = [], True
    for rec in records:
        rep = wallpaper.invariant_report(rec, lam, cfg.bound)
        row = rec.to_json()
        checks = wallpaper.consistency_report(rec)
        row["consistent"] = checks["ok"]
        if isinstance(rep, wallpaper.NonTilting):
            row["tubular"] = None
        else:
            row.update(dim=rep.dim, type=rep.type_report.kind, tubular=rep.tubular,
                       invariants=rep.type_report.invariants.to_json())
            passed = passed and rep.tubular and rep.dim == rep.expected_dim
        passed = passed and checks["ok"]
        rows.append(row)
    report = {"lambda": format_rational(lam), "rows": rows,
              "tubular_count": sum(1 for r in rows if r["tubular"])}
    return report, passed


def cmd_selftest(cfg: CommandConfig, args) -> tuple[dict, bool]:
    only = None
    if args.only:
        try:
            only = [int(x) for x in args.only.split(",")]
        except ValueError as exc:
            raise MalformedInput(f"bad criterion list {args.only!r}") from exc
    report = selftest.run_selftest(cfg.bound, only)
    return report, report["passed"]


COMMANDS = {
    "order": cmd_order,
    "skew": cmd_skew,
    "squid": cmd_squid,
    "canonical": cmd_canonical,
    "coxeter": cmd_coxeter,
    "curve-action": cmd_curve_action,
    "wallpaper": cmd_wallpaper,
    "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# argument parsing


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json", dest="output_format")
    common.add_argument("--bound", type=_positive_int, default=None,
                        help=f"Coxeter order search bound (default ${BOUND_ENV} or 120)")

    parser = argparse.ArgumentParser(prog="hecurve", description="Exact checks for hereditary curves.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("order", parents=[common], help="standard hereditary order tables")
    p.add_argument("input", nargs="?", help="order spec JSON (inline, path, fixture name or -)")
    p.add_argument("--weights", help="comma separated block sizes, e.g. 1,2")
    p.add_argument("--N", type=_positive_int, dest="truncation", help="truncation order of the DVR")
    p.add_argument("--conductor", type=_positive_int, default=1, help="residue field Q(zeta_c)")

    p = sub.add_parser("skew", parents=[common], help="skew group ring of a truncated series ring")
    p.add_argument("input")
    p.add_argument("--N", type=_positive_int, dest="truncation")

    for name, helptext in (("squid", "squid algebra of a weighted curve"),
                           ("canonical", "canonical algebra of a weighted curve")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input")
        p.add_argument("--lambda", dest="lam", help="value substituted for 'lambda' in point coordinates")
        p.add_argument("--emit-algebra", action="store_true", help="include the structure constants")

    p = sub.add_parser("coxeter", parents=[common], help="Coxeter polynomial of an algebra JSON")
    p.add_argument("input")

    p = sub.add_parser("curve-action", parents=[common], help="finite group action on a plane curve")
    p.add_argument("input")

    p = sub.add_parser("wallpaper", parents=[common], help="wallpaper group records")
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true")
    p.add_argument("--lambda", dest="lam")

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", help="comma separated criterion numbers")

    sub.add_parser("fixtures", help="list shipped fixture names")
    return parser


def _config(args) -> CommandConfig:
    bound = args.bound if getattr(args, "bound", None) is not None else None
    if bound is None:
        env = os.environ.get(BOUND_ENV)
        try:
            bound = int(env) if env else selftest.DEFAULT_BOUND
        except ValueError as exc:
            raise MalformedInput(f"{BOUND_ENV} must be an integer") from exc
        if bound < 1:
            raise MalformedInput(f"{BOUND_ENV} must be positive")
    lam = getattr(args, "lam", None)
    if lam is not None:
        try:
            lam = as_fraction(lam)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad lambda {lam!r}") from exc
    return CommandConfig(
        subcommand=args.subcommand,
        source=getattr(args, "input", None),
        output_format=getattr(args, "output_format", "json"),
        truncation=getattr(args, "truncation", None),
        lam=lam,
        bound=bound,
    )


def run(cfg: CommandConfig, args) -> tuple[dict, int]:
    try:
        body, passed = COMMANDS[cfg.subcommand](cfg, args)
    except CheckFailed as exc:
        return exc.to_json(), 1
    except HecurveError as exc:
        return exc.to_json(), 2
    report = {"schema": SCHEMA, "command": cfg.subcommand, **body, "passed": bool(passed)}
    return report, 0 if passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "fixtures":
        print("\n".join(fixture_names()))
        return 0
    try:
        cfg = _config(args)
    except HecurveError as exc:
        print(render({"schema": SCHEMA, **exc.to_json()}, "json"))
        return 2
    report, status = run(cfg, args)
    if "error" in report:
        report = {"schema": SCHEMA, "command": cfg.subcommand, **report}
    print(render(report, cfg.output_format))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
