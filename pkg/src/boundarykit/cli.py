"""Command-line front end.

One verb per capability: `sample` draws generic tuples, `invariant`
evaluates a named invariant over samples, `verify-cocycle` measures the
coboundary defect of the volume cocycles, `certify-bound` runs the doubling
recursion on a named test function, and `probe-config-space` histograms an
invariant and reports a compactness verdict.

Exit codes: 0 all checks passed, 1 tolerance violation or refused
certificate, 2 usage/config error.  A fixed --seed makes every report byte
identical across runs; the BOUNDARYKIT_SEED environment variable supplies
the default when --seed is absent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from .certifier import (GridConfig, alternating_bump_function, certify_complex_region,
                        certify_interval, const_function, pole_function, vol3_slice)
from .cochains import Cochain, empirical_sup_defect
from .errors import BoundaryKitError, UnboundedDefect, UnknownInvariant
from .reports import (ReportEnvelope, SamplerConfig, compactness_probe,
                      emit_report, histogram_summary, invariant_values,
                      quantile_summary, sample_tuples, sampling_stats)
from .sampling import chart_tuple_sampler, circle_tuple_sampler
from .version import __version__
from .volume import vol2, vol3

SEED_ENV_VAR = "BOUNDARYKIT_SEED"

_DEFAULT_INVARIANTS = {"S1": "orientation_class",
                       "complex_hyperbolic": "cartan",
                       "flags3": "triple_ratio"}

_FUNCTIONS = {
    "const": lambda field: const_function(1.0, field),
    "pole": pole_function,
    "vol3-slice": lambda field: vol3_slice(),
    "bump": lambda field: alternating_bump_function(),
}


def task_seed(master: int, index: int) -> int:
    """Counter-based substream seed for task `index` under a master seed."""
    return int(np.random.SeedSequence(master, spawn_key=(index,)).generate_state(1)[0])


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return 0


def _write(envelope: ReportEnvelope, args) -> None:
    if args.out:
        emit_report(envelope, args.format, args.out)
    else:
        json.dump(envelope.to_dict(), sys.stdout, sort_keys=True, indent=2)
        sys.stdout.write("\n")


def _config_from_args(args, seed: int) -> SamplerConfig:
    model = args.model
    dim = args.n if args.n is not None else (3 if model == "complex_hyperbolic" else 2)
    return SamplerConfig(model=model, tuple_size=args.size, count=args.count,
                         seed=seed, tolerance=args.tol, dim=dim)


def _format_vector(v) -> str:
    return ";".join(repr(float(x)) for x in v)


def _format_complex_vector(v) -> str:
    return ";".join(repr(complex(x)) for x in v)


def _cmd_sample(args) -> int:
    seed = _resolve_seed(args)
    config = _config_from_args(args, seed)
    tuples = sample_tuples(config)
    rows = []
    for i, tup in enumerate(tuples):
        for j, point in enumerate(tup):
            if config.model == "flags3":
                rows.append({"tuple_index": i, "point_index": j,
                             "line": _format_vector(point.line),
                             "plane": _format_vector(point.plane)})
            elif config.model == "complex_hyperbolic":
                rows.append({"tuple_index": i, "point_index": j,
                             "lift": _format_complex_vector(point.lift)})
            else:
                rows.append({"tuple_index": i, "point_index": j,
                             "coords": _format_vector(point.direction)})
    summary = {"tuples": len(tuples), **sampling_stats(config)}
    envelope = ReportEnvelope(command="sample", seed=seed, config=config.echo(),
                              results=rows, summary=summary)
    _write(envelope, args)
    return 0


def _resolve_invariant(args, config) -> str:
    name = args.invariant or _DEFAULT_INVARIANTS.get(config.model)
    if name is None:
        raise UnknownInvariant(
            f"no invariant is defined for model {config.model!r}; pass --invariant")
    return name


def _cmd_invariant(args) -> int:
    seed = _resolve_seed(args)
    config = _config_from_args(args, seed)
    name = _resolve_invariant(args, config)
    values = invariant_values(config, name)
    rows = [{"index": i, "value": float(v)} for i, v in enumerate(values)]
    summary = {"invariant": name, "count": len(rows),
               "min": float(values.min()), "max": float(values.max()),
               "quantiles": quantile_summary(values),
               "histogram": histogram_summary(values)}
    envelope = ReportEnvelope(command="invariant", seed=seed,
                              config={**config.echo(), "invariant": name},
                              results=rows, summary=summary)
    _write(envelope, args)
    return 0


def _cmd_verify_cocycle(args) -> int:
    seed = _resolve_seed(args)
    checks = [
        ("vol2_coboundary", Cochain(arity=3, evaluator=vol2),
         circle_tuple_sampler(4), task_seed(seed, 0)),
        ("vol3_coboundary", Cochain(arity=4, evaluator=vol3),
         chart_tuple_sampler(5), task_seed(seed, 1)),
    ]
    rows = []
    for name, cochain, sampler, sub in checks:
        report = empirical_sup_defect(cochain, sampler, args.count, seed=sub)
        rows.append({"check": name, "samples": report.samples,
                     "sup_abs": report.sup_abs, "tolerance": args.tol,
                     "passed": report.sup_abs <= args.tol})
    all_passed = all(r["passed"] for r in rows)
    summary = {"all_passed": all_passed,
               "max_sup_abs": max(r["sup_abs"] for r in rows),
               "tolerance": args.tol}
    envelope = ReportEnvelope(command="verify-cocycle", seed=seed,
                              config={"count": args.count, "tolerance": args.tol},
                              results=rows, summary=summary)
    _write(envelope, args)
    return 0 if all_passed else 1


def _cmd_certify_bound(args) -> int:
    seed = _resolve_seed(args)
    F = _FUNCTIONS[args.function](args.field)
    grid = GridConfig(points_per_region=args.grid)
    try:
        if args.field == "complex":
            cert = certify_complex_region(F, delta=args.delta, grid=grid)
        else:
            cert = certify_interval(F, delta=args.delta, grid=grid)
    except UnboundedDefect as exc:
        envelope = ReportEnvelope(
            command="certify-bound", seed=seed,
            config={"function": args.function, "field": args.field,
                    "delta": args.delta, "grid": args.grid, "tolerance": args.tol},
            results=[{"function": args.function, "refused": True,
                      "reason": str(exc)}],
            summary={"refused": True, "reason": str(exc)})
        _write(envelope, args)
        return 1
    c_value = cert.inputs["B_defect"] + 2.0 * cert.inputs["M_near2"]
    row = {"function": args.function, "field": args.field,
           "kind": cert.region.kind, "delta": cert.region.delta,
           "certified_bound": cert.certified_bound, "C": c_value,
           "k_max": cert.k_max}
    for key in sorted(cert.inputs):
        row[key] = cert.inputs[key]
    for key in sorted(cert.provenance):
        row[f"provenance_{key}"] = cert.provenance[key]
    summary = {"certificate": {"region": asdict(cert.region),
                               "certified_bound": cert.certified_bound,
                               "inputs": cert.inputs, "k_max": cert.k_max,
                               "provenance": cert.provenance},
               "refused": False}
    envelope = ReportEnvelope(
        command="certify-bound", seed=seed,
        config={"function": args.function, "field": args.field,
                "delta": args.delta, "grid": args.grid, "tolerance": args.tol},
        results=[row], summary=summary)
    _write(envelope, args)
    return 0


def _cmd_probe(args) -> int:
    seed = _resolve_seed(args)
    config = _config_from_args(args, seed)
    name = _resolve_invariant(args, config)
    envelope = compactness_probe(config.model, name, config,
                                 escape_hi=args.escape_hi, escape_lo=args.escape_lo)
    _write(envelope, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundarykit",
        description="Boundary-configuration sampling, cocycle verification "
                    "and boundedness certification.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True, tol_default=1e-9):
        if model:
            p.add_argument("--model", default="S1",
                           choices=["S1", "Sn", "complex_hyperbolic", "flags3"])
            p.add_argument("--n", type=int, default=None,
                           help="hyperbolic dimension for Sn / complex_hyperbolic")
            p.add_argument("--size", type=int, default=3, help="tuple size")
        p.add_argument("--count", type=int, default=1000)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=tol_default)
        p.add_argument("--format", default="json", choices=["json", "csv"])
        p.add_argument("--out", default=None)

    p = sub.add_parser("sample", help="draw generic tuples")
    common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("invariant", help="evaluate an invariant over samples")
    common(p)
    p.add_argument("--invariant", default=None,
                   choices=["orientation_class", "cartan", "triple_ratio"])
    p.set_defaults(func=_cmd_invariant)

    p = sub.add_parser("verify-cocycle",
                       help="empirical coboundary defect of Vol2 and Vol3")
    common(p, model=False, tol_default=1e-7)
    p.set_defaults(func=_cmd_verify_cocycle)

    p = sub.add_parser("certify-bound", help="run the doubling-recursion certifier")
    common(p, model=False)
    p.add_argument("--function", default="vol3-slice", choices=sorted(_FUNCTIONS))
    p.add_argument("--field", default="complex", choices=["real", "complex"])
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--grid", type=int, default=GridConfig().points_per_region)
    p.set_defaults(func=_cmd_certify_bound)

    p = sub.add_parser("probe-config-space",
                       help="histogram an invariant and report compactness")
    common(p)
    p.add_argument("--invariant", default=None,
                   choices=["orientation_class", "cartan", "triple_ratio"])
    p.add_argument("--escape-hi", type=float, default=1e3)
    p.add_argument("--escape-lo", type=float, default=1e-3)
    p.set_defaults(func=_cmd_probe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "certify-bound" and args.delta is None:
        args.delta = 0.1 if args.field == "complex" else 0.125
    try:
        return args.func(args)
    except BoundaryKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
