"""Command-line frontend: construct, enumerate, compute, verify, report.

Every run echoes its fully resolved configuration into the output and
prints canonical JSON (sorted keys), so identical invocations are
byte-identical.  Exit codes: 0 success, 1 verification failure, 2 usage
error, 3 budget or guard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .groebner import (
    BudgetExceeded,
    align_variables,
    ideal_equal,
    initial_ideal,
    is_squarefree,
    toric_ideal_elimination,
)
from .nested import shibuta_pipeline
from .polytopes import (
    Graph,
    GuardExceeded,
    LatticePointSet,
    SubsetFamily,
    YParameters,
    dilate_family,
    family_from_y,
    graphical_building_set,
    minkowski_distinct_points,
    minkowski_lattice_points,
    named_family,
)
from .verify import (
    cross_check_prop63,
    idp_check,
    unimodular_triangulation_probe,
    verify_theorem_main,
)

ENV_ENUM_CAP = "PERMUTORIC_ENUM_CAP"
ENV_MAX_SEGRE = "PERMUTORIC_MAX_SEGRE"


def _env_int(name, default):
    value = os.environ.get(name)
    return default if value is None else int(value)


def _emit(data, stream=None):
    print(json.dumps(data, sort_keys=True, indent=2), file=stream or sys.stdout)


def _instance_arguments(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--family", help="inline family JSON")
    group.add_argument("--named", choices=["permutohedron", "associahedron",
                                           "cyclohedron", "pitman_stanley"])
    group.add_argument("--y", help="inline y-parameter JSON")
    group.add_argument("--graph", help="inline graph JSON (graphical building set)")
    parser.add_argument("--n", type=int, help="ground set size for --named")


def _resolve_family(args):
    if args.family:
        return SubsetFamily.from_json(json.loads(args.family)), None
    if args.named:
        if args.n is None:
            raise SystemExit(2)
        return named_family(args.named, args.n), None
    if args.y:
        y = YParameters.from_json(json.loads(args.y))
        return family_from_y(y), y
    data = json.loads(args.graph)
    graph = Graph(data["n"], data["edges"])
    blocks = graphical_building_set(graph).blocks
    sets = sorted((sorted(b) for b in blocks if len(b) > 1),
                  key=lambda b: (len(b), b))
    return SubsetFamily(data["n"], sets), None


def _family_to_y(family):
    counts = {}
    for s in family.sets:
        key = tuple(sorted(s))
        counts[key] = counts.get(key, 0) + 1
    return YParameters(family.n, counts)


def _config_echo(args, family, extra=None):
    config = {
        "subcommand": args.command,
        "instance": family.to_json() if family is not None else None,
        "enum_cap": _env_int(ENV_ENUM_CAP, 10 ** 6),
        "max_segre_variables": _env_int(ENV_MAX_SEGRE, 1000),
    }
    for name in ("method", "dilate", "kmax", "seed", "check"):
        if hasattr(args, name):
            config[name] = getattr(args, name)
    if extra:
        config.update(extra)
    return config


def cmd_construct(args):
    family, y = _resolve_family(args)
    out = {"config": _config_echo(args, family), "family": family.to_json()}
    if y is not None:
        out["y"] = y.to_json()
    _emit(out)
    return 0


def cmd_points(args):
    family, _ = _resolve_family(args)
    target = dilate_family(family, args.dilate) if args.dilate > 1 else family
    out = {"config": _config_echo(args, family)}
    if args.multiset:
        points = minkowski_lattice_points(
            target, cap=_env_int(ENV_ENUM_CAP, 10 ** 6))
        out["points"] = [list(p) for p in points.points]
        if args.provenance:
            out["provenance"] = [list(t) for t in points.provenance]
        out["distinct_count"] = len(set(points.points))
    else:
        distinct = minkowski_distinct_points(target)
        out["points"] = [list(p) for p in distinct]
        out["distinct_count"] = len(distinct)
    _emit(out)
    return 0


def cmd_gb(args):
    family, _ = _resolve_family(args)
    out = {"config": _config_echo(args, family)}
    elimination = None
    pipeline = None
    if args.method in ("elimination", "both"):
        distinct = minkowski_distinct_points(family)
        config = LatticePointSet(family.n, distinct)
        elimination = toric_ideal_elimination(
            config, labels=[("x", p) for p in distinct])
        ii = initial_ideal(elimination)
        out["elimination"] = {
            "basis": elimination.to_json(),
            "initial_ideal": ii.to_json(),
            "initial_squarefree": is_squarefree(ii),
        }
    if args.method in ("shibuta", "both"):
        pipeline = shibuta_pipeline(
            family, max_variables=_env_int(ENV_MAX_SEGRE, 1000))
        out["shibuta"] = {
            "report": pipeline.report(),
            "projected_basis": pipeline.projection.basis.to_json(),
            "projection": pipeline.projection.to_json(),
        }
    if args.method == "both":
        points_basis = pipeline.projection.as_point_basis()
        out["ideal_equal"] = ideal_equal(
            align_variables(points_basis, elimination.variables), elimination)
    _emit(out)
    return 0


def cmd_verify(args):
    if args.batch:
        return _verify_batch(args)
    family, y = _resolve_family(args)
    out = {"config": _config_echo(args, family)}
    failed = False
    if args.check == "idp":
        result = idp_check(family, k_max=args.kmax)
        out["idp"] = result
        failed = not result["pass"]
    elif args.check == "prop63":
        y = y if y is not None else _family_to_y(family)
        ok = cross_check_prop63(y)
        out["prop63"] = {"pass": ok, "y": y.to_json()}
        failed = not ok
    elif args.check == "unimodular":
        result = unimodular_triangulation_probe(family)
        out["unimodular"] = result
        failed = not result["pass"]
    elif args.check in ("squarefree", "quadratic"):
        report = verify_theorem_main(family, k_max=args.kmax)
        section = getattr(report, args.check)
        out[args.check] = section
        failed = not section.get("pass", False)
    else:
        report = verify_theorem_main(family, k_max=args.kmax)
        out["report"] = report.to_json()
        failed = not report.all_pass()
        if report.has_budget_error():
            _emit(out)
            return 3
    _emit(out)
    return 1 if failed else 0


def _verify_batch(args):
    worst = 0
    with open(args.batch, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            if "y" in data:
                instance = YParameters.from_json(data["y"])
            else:
                instance = SubsetFamily.from_json(data["family"])
            report = verify_theorem_main(instance, k_max=args.kmax)
            print(json.dumps(report.to_json(), sort_keys=True,
                             separators=(",", ":")))
            if report.has_budget_error():
                worst = max(worst, 3)
            elif not report.all_pass():
                worst = max(worst, 1)
    return worst


def _render_section(name, section, lines):
    status = section.get("pass")
    flag = "PASS" if status else ("FAIL" if status is not None else "----")
    detail = ""
    if "error" in section:
        detail = f" (budget: {section['error']})"
    elif name == "idp" and section.get("counterexample"):
        detail = f" counterexample {section['counterexample']} at k={section.get('failed_k')}"
    elif name == "quadratic" and "histogram" in section:
        detail = f" degrees {section['histogram']}"
    lines.append(f"  {name:<12} {flag}{detail}")


def cmd_report(args):
    with open(args.input, encoding="utf-8") as handle:
        data = json.load(handle)
    report = data.get("report", data)
    lines = ["verification report"]
    instance = report.get("instance")
    if instance:
        lines.append(f"  instance     {json.dumps(instance, sort_keys=True)}")
    for name in ("idp", "squarefree", "quadratic", "cross_check"):
        if name in report:
            _render_section(name, report[name], lines)
    if "pass" in report:
        lines.append(f"  overall      {'PASS' if report['pass'] else 'FAIL'}")
    print("\n".join(lines))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="permutoric",
        description="Toric ideals of Minkowski sums of unit simplices")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="resolve an instance to a family")
    _instance_arguments(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("points", help="enumerate lattice points")
    _instance_arguments(p)
    p.add_argument("--dilate", type=int, default=1)
    p.add_argument("--multiset", action="store_true",
                   help="full product enumeration with multiplicities")
    p.add_argument("--provenance", action="store_true")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("gb", help="toric Groebner basis of the polytope")
    _instance_arguments(p)
    p.add_argument("--method", choices=["elimination", "shibuta", "both"],
                   default="both")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("verify", help="machine-check the main theorem")
    p.add_argument("check", choices=["idp", "squarefree", "quadratic",
                                     "prop63", "unimodular", "all"])
    group = p.add_mutually_exclusive_group()
    group.add_argument("--family")
    group.add_argument("--named", choices=["permutohedron", "associahedron",
                                           "cyclohedron", "pitman_stanley"])
    group.add_argument("--y")
    group.add_argument("--graph")
    group.add_argument("--batch", help="JSONL file of instances")
    p.add_argument("--n", type=int)
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="render a stored JSON report as text")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GuardExceeded, BudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
