"""Command line front end: solve, validate, and export.

A single run solves one feasibility problem, extracts the filter bank,
runs the cascade for the scaling function and the three wavelets, applies
the quality checks, and writes filters (JSON), sample tables and the
orthonormality surface (CSV), and a manifest (JSON).  Batch mode repeats
one configuration over a seed list and writes a statistics table.

Exit codes: 0 solved with all checks passing, 2 not solved within the
cutoff, 3 solved but at least one check failed, 64 usage error, 1 output
I/O failure.
"""

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from .algebra import Quaternion, polar
from .solver import SolverConfig, constraint_residuals, solve
from .projectors import build_problem
from .synthesis import (
    FilterBank,
    cascade,
    completeness_residual,
    extract_filters,
    integral,
    orthonormality_check,
    partition_of_unity_residual,
    qqmf_residual,
    separability_measure,
    symmetry_residual,
    vanishing_moment_residual,
)

QQMF_PROBE_POINTS = 50
QQMF_PROBE_SALT = 0x51
RESIDUAL_TOL = 1e-7
CASCADE_TOL = 5e-3


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with the usage code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(64, "%s: error: %s\n" % (self.prog, message))


def build_parser():
    parser = _Parser(
        prog="quatwave",
        description="Solve a quaternionic wavelet feasibility problem "
                    "and export the resulting filters and samples.")
    parser.add_argument("--eta", type=int, default=4,
                        help="grid order (even, >= 4; default 4)")
    parser.add_argument("--mu", type=int, default=1,
                        help="vanishing-moment order (default 1)")
    parser.add_argument("--symmetric", action="store_true",
                        help="add the point-symmetry constraint")
    parser.add_argument("--seed", type=int, default=0,
                        help="random start seed (default 0)")
    parser.add_argument("--seeds", type=int, nargs="+", metavar="SEED",
                        help="batch mode: run every listed seed")
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="stopping tolerance (default 1e-9)")
    parser.add_argument("--max-iters", type=int, default=0,
                        help="iteration cutoff (0 selects 10000 for eta=4, "
                             "300000 otherwise)")
    parser.add_argument("--cascade-level", type=int, default=6,
                        help="dyadic refinement depth (default 6)")
    parser.add_argument("--grid-n", type=int, default=101,
                        help="orthonormality grid size (default 101)")
    parser.add_argument("--out", required=True,
                        help="output directory")
    return parser


def save_filters(fb, path):
    """Write the bank as JSON: per filter, a list of {k, q} records."""
    coefficients = []
    comps = fb.component_array()
    for eps in range(4):
        entries = []
        for k1 in range(fb.eta):
            for k2 in range(fb.eta):
                entries.append({"k": [k1, k2],
                                "q": [float(c) for c in comps[eps, k1, k2]]})
        coefficients.append(entries)
    with open(path, "w") as fh:
        json.dump({"eta": fb.eta, "coefficients": coefficients}, fh,
                  indent=1, sort_keys=True)
        fh.write("\n")


def load_filters(path):
    """Rebuild a FilterBank from a filters.json document."""
    with open(path) as fh:
        doc = json.load(fh)
    eta = int(doc["eta"])
    comps = np.zeros((4, eta, eta, 4))
    for eps, entries in enumerate(doc["coefficients"]):
        for record in entries:
            k1, k2 = record["k"]
            comps[eps, k1, k2] = record["q"]
    return FilterBank.from_component_array(eta, comps)


def export_samples(sf, path):
    """Write one sample table: position, magnitude, and RGB color.

    The color channels are the imaginary components of angle*axis from
    the polar form of each value; zero values get (0, 0, 0).
    """
    step = sf.step
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x1", "x2", "magnitude", "R", "G", "B"])
        for i1 in range(sf.n):
            for i2 in range(sf.n):
                q = sf.value(i1, i2)
                mag, axis, angle = polar(q)
                writer.writerow(["%.17g" % (i1 * step),
                                 "%.17g" % (i2 * step),
                                 "%.17g" % mag,
                                 "%.17g" % (axis.x1 * angle),
                                 "%.17g" % (axis.x2 * angle),
                                 "%.17g" % (axis.x12 * angle)])


def export_lambda_grid(profile, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["xi1", "xi2", "lambda"])
        for a in range(profile.grid_n):
            for b in range(profile.grid_n):
                writer.writerow(["%.17g" % profile.xi[a],
                                 "%.17g" % profile.xi[b],
                                 "%.17g" % profile.values[a, b]])


def run_checks(fb, mu, symmetric, seed, cascade_level, grid_n):
    """All solution checks; returns (checks dict, functions dict)."""
    rng = np.random.default_rng(seed + QQMF_PROBE_SALT)
    qqmf = max(qqmf_residual(fb, rng.uniform(-1.0, 1.0, size=2))
               for _ in range(QQMF_PROBE_POINTS))
    checks = {
        "qqmf": float(qqmf),
        "completeness": completeness_residual(fb),
        "moments": vanishing_moment_residual(fb, mu),
        "symmetry": symmetry_residual(fb) if symmetric else None,
    }
    profile = orthonormality_check(fb, grid_n)
    checks["lambda_min"] = profile.min_value

    functions = {"phi": cascade(fb, 0, cascade_level)}
    for eps in (1, 2, 3):
        functions["psi%d" % eps] = cascade(fb, eps, cascade_level)
    checks["partition"] = partition_of_unity_residual(functions["phi"])
    checks["integral_phi_error"] = abs(integral(functions["phi"])
                                       - Quaternion(1.0))
    checks["integral_psi_max"] = max(
        abs(integral(functions["psi%d" % eps])) for eps in (1, 2, 3))
    checks["separability"] = separability_measure(functions["phi"])

    passed = (checks["qqmf"] <= RESIDUAL_TOL
              and checks["completeness"] <= RESIDUAL_TOL
              and checks["moments"] <= RESIDUAL_TOL
              and (checks["symmetry"] is None
                   or checks["symmetry"] <= RESIDUAL_TOL)
              and profile.passed
              and checks["partition"] <= CASCADE_TOL
              and checks["integral_phi_error"] <= CASCADE_TOL
              and checks["integral_psi_max"] <= CASCADE_TOL)
    return checks, functions, profile, passed


def _config_echo(cfg, args):
    return {
        "eta": cfg.eta,
        "mu": cfg.mu,
        "symmetric": cfg.symmetric,
        "tol": cfg.tol,
        "max_iters": cfg.max_iters,
        "seed": cfg.seed,
        "cascade_level": args.cascade_level,
        "grid_n": args.grid_n,
        "out": args.out,
    }


def run(args):
    """One solve-validate-export cycle; returns the exit code."""
    try:
        cfg = SolverConfig(eta=args.eta, mu=args.mu,
                           symmetric=args.symmetric, tol=args.tol,
                           max_iters=args.max_iters, seed=args.seed)
        if args.cascade_level < 1:
            raise ValueError("cascade level must be >= 1")
        if args.grid_n < 2:
            raise ValueError("orthonormality grid size must be >= 2")
    except ValueError as err:
        build_parser().error(str(err))

    manifest = {"config": _config_echo(cfg, args), "files": []}
    try:
        os.makedirs(args.out, exist_ok=True)
        report = solve(cfg)
        manifest["report"] = {
            "solved": report.solved,
            "iterations": report.iterations,
            "final_residual": report.final_residual,
        }
        if not report.solved:
            manifest["checks"] = None
            manifest["passed"] = False
            _write_manifest(manifest, args.out)
            return 2

        fb = extract_filters(report.solution)
        problem = build_problem(cfg.eta, cfg.mu, cfg.symmetric)
        manifest["report"]["constraint_residual_max"] = max(
            constraint_residuals(report.solution, problem).values())
        checks, functions, profile, passed = run_checks(
            fb, cfg.mu, cfg.symmetric, cfg.seed,
            args.cascade_level, args.grid_n)

        save_filters(fb, os.path.join(args.out, "filters.json"))
        manifest["files"].append("filters.json")
        export_samples(functions["phi"],
                       os.path.join(args.out, "samples_phi.csv"))
        manifest["files"].append("samples_phi.csv")
        for eps in (1, 2, 3):
            name = "samples_psi%d.csv" % eps
            export_samples(functions["psi%d" % eps],
                           os.path.join(args.out, name))
            manifest["files"].append(name)
        export_lambda_grid(profile,
                           os.path.join(args.out, "lambda_grid.csv"))
        manifest["files"].append("lambda_grid.csv")

        manifest["checks"] = checks
        manifest["passed"] = passed
        _write_manifest(manifest, args.out)
        return 0 if passed else 3
    except OSError as err:
        sys.stderr.write("quatwave: output error: %s\n" % err)
        return 1


def _write_manifest(manifest, out):
    path = os.path.join(out, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")


STATS_COLUMNS = ("eta", "mu", "symmetric", "seeds", "solved", "min_iters",
                 "q1_iters", "median_iters", "q3_iters", "mean_iters",
                 "max_iters")


def batch(args):
    """Run every seed of one configuration and write the statistics row."""
    results = []
    for seed in args.seeds:
        sub = argparse.Namespace(**vars(args))
        sub.seed = seed
        sub.seeds = None
        sub.out = os.path.join(args.out, "seed_%d" % seed)
        code = run(sub)
        if code in (64, 1):
            return code
        manifest_path = os.path.join(sub.out, "manifest.json")
        with open(manifest_path) as fh:
            report = json.load(fh)["report"]
        results.append((seed, report["solved"], report["iterations"]))

    iters = [r[2] for r in results if r[1]]
    if iters:
        stats = (min(iters),
                 float(np.percentile(iters, 25)),
                 float(np.percentile(iters, 50)),
                 float(np.percentile(iters, 75)),
                 float(np.mean(iters)),
                 max(iters))
    else:
        stats = (math.nan,) * 6
    try:
        path = os.path.join(args.out, "stats.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(STATS_COLUMNS)
            writer.writerow([args.eta, args.mu, args.symmetric,
                             len(args.seeds), len(iters)]
                            + ["%.17g" % v for v in stats])
    except OSError as err:
        sys.stderr.write("quatwave: output error: %s\n" % err)
        return 1
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seeds:
        try:
            os.makedirs(args.out, exist_ok=True)
        except OSError as err:
            sys.stderr.write("quatwave: output error: %s\n" % err)
            return 1
        return batch(args)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
