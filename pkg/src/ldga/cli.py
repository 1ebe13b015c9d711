"""Command-line front end with machine-readable JSON reports.

Subcommands: dga, augs, linpoly, spin, augvar, obstruct, certify.  Reports
follow the `ldga-report/1` schema: stable key order, all enumeration output
canonically sorted, timing isolated under "timing_ms" so that two runs on
the same inputs differ only there.  Exit codes: 0 ok, 2 parse error,
3 validation failure, 4 obstruction-stage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from pathlib import Path

from . import __version__, augment, cedga, diagram, linhom, obstruct, spin
from .algebra import ZZ, validate
from .augment import AugmentationError
from .cedga import DGAValidationError, DSLError, DiskBudgetExceeded
from .diagram import DiagramError
from .obstruct import ObstructionStageError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATE = 3
EXIT_STAGE = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _digest(path: str) -> dict:
    data = Path(path).read_bytes()
    return {"path": path, "sha256": hashlib.sha256(data).hexdigest()}


def _report(command: str, inputs: dict, result: dict, stages=None, started=None) -> dict:
    out = {
        "schema": "ldga-report/1",
        "tool": {"name": "ldga", "version": __version__},
        "command": command,
        "inputs": inputs,
        "stages": stages or [],
        "result": result,
    }
    if started is not None:
        out["timing_ms"] = {"total": round((time.monotonic() - started) * 1000, 3)}
    return out


def _emit(args, report: dict, summary: str) -> int:
    text = json.dumps(report, sort_keys=True, indent=2)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    print(summary, file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Input loading shared by subcommands
# ---------------------------------------------------------------------------

def _load_dga(args, inputs: dict):
    """One of --grid / --dsl / --builtin; grids go through the F2 pipeline."""
    sources = [s for s in ("grid", "dsl", "builtin") if getattr(args, s, None)]
    if len(sources) != 1:
        raise CliError("exactly one of --grid/--dsl/--builtin is required", EXIT_PARSE)
    src = sources[0]
    if src == "grid":
        inputs["grid"] = _digest(args.grid)
        grid = diagram.parse_grid(Path(args.grid).read_text())
        front = diagram.grid_to_front(grid)
        proj = diagram.resolve(front)
        return cedga.build_dga(proj, jobs=args.jobs, budget=args.budget), front
    if src == "dsl":
        inputs["dsl"] = _digest(args.dsl)
        return cedga.load_dsl(Path(args.dsl).read_text()), None
    inputs["builtin"] = args.builtin
    obj = cedga.builtin(args.builtin)
    if isinstance(obj, diagram.GridDiagram):
        front = diagram.grid_to_front(obj)
        proj = diagram.resolve(front)
        return cedga.build_dga(proj, jobs=args.jobs, budget=args.budget), front
    if isinstance(obj, diagram.ProjectionDiagram):
        return cedga.build_dga(obj, jobs=args.jobs, budget=args.budget), None
    return obj, None


def _parse_fields(spec: str) -> list[int]:
    try:
        fields = [int(x) for x in spec.split(",") if x]
    except ValueError:
        raise CliError(f"bad field list {spec!r}", EXIT_PARSE)
    if not fields:
        raise CliError("empty field list", EXIT_PARSE)
    return fields


def _parse_schedule(spec: str) -> list[int]:
    if not spec:
        return []
    try:
        return [int(x) for x in spec.split(",") if x]
    except ValueError:
        raise CliError(f"bad spin schedule {spec!r}", EXIT_PARSE)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_dga(args) -> int:
    inputs: dict = {}
    dga, _front = _load_dga(args, inputs)
    report = validate(dga)
    if not report.ok:
        raise CliError(str(report), EXIT_VALIDATE)
    text = cedga.dump_dsl(dga)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    print(f"{len(dga.generators)} generators over {dga.ring}", file=sys.stderr)
    return EXIT_OK


def cmd_augs(args) -> int:
    started = time.monotonic()
    inputs: dict = {"field": args.field}
    dga, _ = _load_dga(args, inputs)
    augs = augment.enumerate_augmentations(dga, args.field, oracle=args.oracle)
    result = {
        "count": len(augs),
        "augmentations": [dict(a.values) for a in augs],
        "t_value": augs[0].t_value if augs and augs[0].t_value is not None else None,
    }
    rep = _report("augs", inputs, result, started=started)
    return _emit(args, rep, f"{len(augs)} augmentations over F{args.field}")


def cmd_linpoly(args) -> int:
    started = time.monotonic()
    inputs: dict = {"field": args.field, "all_augs": args.all_augs}
    dga, _ = _load_dga(args, inputs)
    augs = augment.enumerate_augmentations(dga, args.field)
    stages = [{"stage": "augment", "count": len(augs)}]
    polys = []
    details = []
    for eps in augs if args.all_augs else augs[:1]:
        conj = augment.conjugate(dga, eps)
        cx = augment.linear_part(conj)
        h = linhom.homology_field(cx)
        p = linhom.poincare(linhom.as_cohomological(h))
        polys.append(str(p))
        details.append({"augmentation": dict(eps.values), "polynomial": str(p)})
    result = {"polynomials": sorted(polys), "per_augmentation": details}
    rep = _report("linpoly", inputs, result, stages=stages, started=started)
    return _emit(args, rep, f"polynomials: {sorted(set(polys))}")


def cmd_spin(args) -> int:
    started = time.monotonic()
    inputs: dict = {"spin": args.spin, "integral": args.integral, "field": args.field}
    dga, _ = _load_dga(args, inputs)
    schedule = _parse_schedule(args.spin)
    stages = []
    try:
        cx = augment.linear_part(dga)
    except AugmentationError:
        # diagram DGAs carry constant terms; linearize at the first augmentation
        q = 2 if args.integral or not args.field else args.field
        augs = augment.enumerate_augmentations(dga, q)
        if not augs:
            raise ObstructionStageError("spin", "no augmentations to linearize at")
        dga = augment.conjugate(dga, augs[0])
        cx = augment.linear_part(dga)
        stages.append({"stage": "conjugate", "augmentation": dict(augs[0].values)})
    if args.integral:
        if not isinstance(dga.ring, type(ZZ)):
            raise CliError("--integral needs an integral DGA", EXIT_VALIDATE)
        current = cx
        n_leg = 1
        h = linhom.homology_integral(current)
        stages.append({"stage": "start", "module": obstruct.module_to_jsonable(h)})
        for m in schedule:
            bound = spin.stable_bound_complex(current)
            if m <= bound:
                raise ObstructionStageError("spin", f"sphere dim {m} within bound {bound}")
            current = spin.spin_complex_stable(current, m)
            n_leg += m
            h = linhom.homology_integral(current)
            stages.append(
                {
                    "stage": "spin",
                    "sphere_dim": m,
                    "legendrian_dimension": n_leg,
                    "module": obstruct.module_to_jsonable(h),
                }
            )
        result = {"module": obstruct.module_to_jsonable(h)}
        summary = h.describe()
    else:
        q = args.field or 2
        fcx = linhom.reduce_complex_mod_p(cx, q) if dga.ring is ZZ else cx
        h = linhom.homology_field(fcx)
        p = linhom.poincare(linhom.as_cohomological(h))
        stages.append({"stage": "start", "polynomial": str(p)})
        current = fcx
        for m in schedule:
            if m == 1:
                h = spin.kunneth_s1(h)
                p = linhom.poincare(linhom.as_cohomological(h) if h.variance != linhom.COHOMOLOGICAL else h)
                stages.append({"stage": "kunneth_s1", "polynomial": str(p)})
                current = None
            else:
                if current is None:
                    raise ObstructionStageError(
                        "spin", "complex-level spinning after a Kunneth stage"
                    )
                bound = spin.stable_bound_complex(current)
                if m <= bound:
                    raise ObstructionStageError("spin", f"sphere dim {m} within bound {bound}")
                current = spin.spin_complex_stable(current, m)
                h = linhom.homology_field(current)
                p = linhom.poincare(linhom.as_cohomological(h))
                stages.append({"stage": "spin", "sphere_dim": m, "polynomial": str(p)})
        result = {"polynomial": str(p)}
        summary = f"P = {p}"
    rep = _report("spin", inputs, result, stages=stages, started=started)
    return _emit(args, rep, summary)


def cmd_augvar(args) -> int:
    started = time.monotonic()
    inputs: dict = {"system": _digest(args.system), "fields": args.fields}
    system = augment.parse_polysystem(Path(args.system).read_text())
    fields = _parse_fields(args.fields)
    counts = {q: augment.variety_points(system, q) for q in fields}
    result = {"counts": {str(q): c for q, c in sorted(counts.items())}}
    if len(counts) >= 2:
        est = augment.dimension_estimate(counts)
        result["dimension"] = {
            "estimate": est.estimate,
            "stable": est.stable,
            "slopes": list(est.slopes),
        }
    rep = _report("augvar", inputs, result, started=started)
    return _emit(args, rep, f"counts: {result['counts']}")


_POLY_TERM = re.compile(r"^\s*(\d+)?\s*\*?\s*(t(?:\^(-?\d+))?)?\s*$")


def parse_poly_text(text: str) -> linhom.PoincarePolynomial:
    dims: dict[int, int] = {}
    protected = text.replace("^-", "^~")
    for chunk in protected.replace("-", "+-").split("+"):
        chunk = chunk.replace("^~", "^-").strip()
        if not chunk:
            continue
        if chunk.startswith("-"):
            raise CliError("Poincare polynomials have nonnegative coefficients", EXIT_PARSE)
        m = _POLY_TERM.match(chunk)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise CliError(f"bad polynomial term {chunk!r}", EXIT_PARSE)
        coeff = int(m.group(1) or 1)
        if m.group(2) is None:
            deg = 0
        else:
            deg = int(m.group(3) or 1)
        dims[deg] = dims.get(deg, 0) + coeff
    return linhom.PoincarePolynomial.from_dims(dims)


def cmd_obstruct(args) -> int:
    started = time.monotonic()
    inputs: dict = {"poly": args.poly, "dim": args.dim, "tb": args.tb, "counts": args.counts}
    poly = parse_poly_text(args.poly)
    h = linhom.GradedModule(
        "F2", linhom.COHOMOLOGICAL, {d: (c, ()) for d, c in poly.as_dict().items()}
    )
    stages = []
    result = obstruct.seidel_profile(h, args.dim)
    if isinstance(result, obstruct.ObstructionVerdict):
        verdict = result
        stages.append({"stage": "seidel", "verdict": verdict.to_jsonable()})
    else:
        stages.append({"stage": "seidel", "profile": result.to_jsonable()})
        verdict = obstruct.ObstructionVerdict(obstruct.FEASIBLE)
        if args.tb is not None and args.dim == 1:
            verdict = obstruct.euler_tb_check(result, args.tb)
            stages.append({"stage": "euler_tb", "verdict": verdict.to_jsonable()})
        if args.counts and not verdict.obstructed:
            counts = {}
            for pair in args.counts.split(","):
                q, c = pair.split(":")
                counts[int(q)] = int(c)
            profile = obstruct.FillingProfile(
                "Z", args.dim, {1: (result.rank(1), result.torsion(1))}
            )
            verdict = obstruct.aug_injectivity_test(profile, counts)
            stages.append({"stage": "aug_injectivity", "verdict": verdict.to_jsonable()})
    rep = _report("obstruct", inputs, {"verdict": verdict.to_jsonable()}, stages=stages, started=started)
    return _emit(args, rep, f"{verdict.status}: {verdict.codes()}")


def cmd_certify(args) -> int:
    started = time.monotonic()
    case_map = {
        "classA": "classA_m821",
        "classA-spun": "classA_spun",
        "classB": "classB_twist",
    }
    if args.case not in case_map:
        raise CliError(f"unknown case {args.case!r}", EXIT_PARSE)
    inputs: dict = {
        "case": args.case,
        "n": args.n,
        "spin": args.spin,
        "fields": args.fields,
    }
    grid = None
    if args.grid:
        inputs["grid"] = _digest(args.grid)
        grid = diagram.parse_grid(Path(args.grid).read_text())
    cert = obstruct.certify_nongeometric(
        case_map[args.case],
        n=args.n,
        schedule=_parse_schedule(args.spin),
        fields=tuple(_parse_fields(args.fields)),
        grid=grid,
        budget=args.budget,
        jobs=args.jobs,
    )
    rep = _report(
        "certify",
        inputs,
        {"verdict": cert.verdict.to_jsonable(), "case": cert.case},
        stages=cert.evidence,
        started=started,
    )
    return _emit(args, rep, f"{cert.case}: {cert.verdict.status} {cert.verdict.codes()}")


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _add_source_args(p, jobs=True):
    p.add_argument("--grid", help="grid diagram JSON file")
    p.add_argument("--dsl", help="DGA DSL file")
    p.add_argument("--builtin", help="builtin id: twist:N, m821_grid, unknot, trefoil, unknot_dsl")
    p.add_argument("--budget", type=int, default=None, help="disk search step budget")
    if jobs:
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for enumeration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ldga", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ldga {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("dga", help="build and dump a DGA in DSL syntax")
    _add_source_args(p)
    p.add_argument("--out", help="write the dump to a file")
    p.set_defaults(func=cmd_dga)

    p = sub.add_parser("augs", help="enumerate graded augmentations")
    _add_source_args(p)
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--oracle", action="store_true", help="use the exhaustive oracle")
    p.add_argument("--out")
    p.set_defaults(func=cmd_augs)

    p = sub.add_parser("linpoly", help="linearized homology Poincare polynomials")
    _add_source_args(p)
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--all-augs", action="store_true", dest="all_augs")
    p.add_argument("--out")
    p.set_defaults(func=cmd_linpoly)

    p = sub.add_parser("spin", help="spherical spinning of linearized complexes")
    _add_source_args(p)
    p.add_argument("--spin", default="", help="comma list of sphere dimensions")
    p.add_argument("--integral", action="store_true")
    p.add_argument("--field", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spin)

    p = sub.add_parser("augvar", help="variety point counts for a polynomial system")
    p.add_argument("--system", required=True, help="polynomial system file")
    p.add_argument("--fields", default="2,4,8,16")
    p.add_argument("--out")
    p.set_defaults(func=cmd_augvar)

    p = sub.add_parser("obstruct", help="run obstruction tests on a polynomial")
    p.add_argument("--poly", required=True, help='e.g. "t^-1 + 4 + 2*t"')
    p.add_argument("--dim", type=int, required=True, help="Legendrian dimension n")
    p.add_argument("--tb", type=int, default=None)
    p.add_argument("--counts", default=None, help='variety counts "2:1,4:3"')
    p.add_argument("--out")
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("certify", help="full non-fillability certification pipelines")
    p.add_argument("case", choices=["classA", "classA-spun", "classB"])
    p.add_argument("--n", type=int, default=None, help="twist parameter (classB)")
    p.add_argument("--spin", default="", help="spin schedule")
    p.add_argument("--fields", default="2,4")
    p.add_argument("--grid", default=None, help="override the grid fixture")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (DSLError, DiagramError, AugmentationError, json.JSONDecodeError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DGAValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATE
    except (ObstructionStageError, DiskBudgetExceeded) as exc:
        print(f"stage error: {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
