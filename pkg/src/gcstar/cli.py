"""Command-line front end for reproducible verification runs.

Exit status: 0 when every requested check passes, 1 when a verification
fails, 2 for malformed input or violated preconditions.  Identical
(command line, seed) pairs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from .bandops import (DEFAULT_GRID, DEFAULT_SECTION_EPS, DEFAULT_SYMBOL_TOL,
                      finite_section_analysis, fredholm_verdict, limit_operator,
                      locality_check, symbol_invertible)
from .errors import (AmbiguityError, CoverPreconditionError,
                     GluingConditionError, GridRefinementNeeded, InputError)
from .gluing import check_weak_gluing, glue
from .groupoid import orbits, reduction, validate
from .isosearch import groupoid_isomorphism
from .models import boundary_symbol, discretize_model
from .reports import Report
from .serialization import (groupoid_to_dict, dump_json, load_band_operator,
                            load_cover, load_gluing_family, load_groupoid,
                            load_model_spec, model_spec_from_dict)
from .spectrum import (block_decomposition, check_norm_estimates,
                       check_phi_isometry, induction_map,
                       verify_spectrum_decomposition)
from .suite import run_suite

FIXTURE_ENV = "GCSTAR_FIXTURES"


@dataclass(frozen=True)
class RunConfig:
    """Tolerances and sizes shared by the subcommands; all positive."""

    seed: int = 0
    tol_norm: float = 1e-9
    tol_eigencluster: float = 1e-9
    tol_symbol: float = DEFAULT_SYMBOL_TOL
    eps: float = DEFAULT_SECTION_EPS
    grid: int = DEFAULT_GRID
    sizes: tuple = (256, 512, 1024)
    out: str | None = None

    def __post_init__(self):
        for name in ("tol_norm", "tol_eigencluster", "tol_symbol", "eps"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")
        if self.grid <= 0 or any(s <= 0 for s in self.sizes):
            raise InputError("grid and sizes must be positive")


def resolve_input(path):
    """Use the path as given, or look it up in the fixture directory."""
    if os.path.exists(path):
        return path
    base = os.environ.get(FIXTURE_ENV)
    if base:
        candidate = os.path.join(base, path)
        if os.path.exists(candidate):
            return candidate
    raise InputError(f"input file not found: {path}")


def _parse_sizes(text):
    try:
        sizes = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse sizes {text!r}") from None
    return sizes


def _emit(report, config):
    text = report.write(config.out)
    sys.stdout.write(text)


# -- subcommand bodies --------------------------------------------------------


def cmd_validate(args, config):
    G = load_groupoid(resolve_input(args.groupoid))
    result = validate(G)
    report = Report("validate", config.seed)
    rows = report.section("groupoid")
    report.add(rows, "units", G.n_units())
    report.add(rows, "arrows", G.n_arrows())
    rows = report.section("axioms")
    report.add(rows, "ok", result.ok)
    for i, line in enumerate(result.lines() if not result.ok else ()):
        report.add(rows, f"violation{i}", line)
    _emit(report, config)
    return 0 if result.ok else 1


def cmd_spectrum(args, config):
    G = load_groupoid(resolve_input(args.groupoid))
    dec = block_decomposition(G, seed=config.seed)
    report = Report("spectrum", config.seed)
    rows = report.section("algebra")
    report.add(rows, "dimension", G.n_arrows())
    report.add(rows, "orbits", len(orbits(G)))
    report.add(rows, "blocks", len(dec.blocks))
    census = sum(b.dim ** 2 for b in dec.blocks)
    report.add(rows, "sum-of-squared-dims", census)
    for b in dec.blocks:
        rows = report.section(f"block {b.label}")
        report.add(rows, "dimension", b.dim)
        report.add(rows, "multiplicity", b.multiplicity)
    _emit(report, config)
    return 0 if census == G.n_arrows() else 1


def cmd_verify_decomposition(args, config):
    G = load_groupoid(resolve_input(args.groupoid))
    cover = load_cover(resolve_input(args.cover))
    result = verify_spectrum_decomposition(G, cover, seed=config.seed)
    report = Report("verify-decomposition", config.seed)
    rows = report.section("result")
    report.add(rows, "ok", result.ok)
    report.add(rows, "blocks", len(result.prim_all))
    for U, img in zip(result.cover, result.images):
        report.add(rows, f"induced from {sorted(map(str, U))}", img)
    _emit(report, config)
    return 0 if result.ok else 1


def cmd_induction_checks(args, config):
    G = load_groupoid(resolve_input(args.groupoid))
    subsets = load_cover(resolve_input(args.subsets))
    report = Report("induction-checks", config.seed)
    ok = True
    for idx, U in enumerate(subsets):
        rows = report.section(f"subset {sorted(map(str, U))}")
        ind = induction_map(G, U, seed=config.seed)
        report.add(rows, "bijection-onto-complement", ind.ok)
        norm_rep = check_norm_estimates(G, U, trials=args.trials,
                                        seed=config.seed)
        report.add(rows, "corner-equality-gap", norm_rep.max_equality_gap)
        report.add(rows, "induced-norm-slack", norm_rep.min_induction_slack)
        worst_phi = 0.0
        surjective = True
        for x in sorted(U, key=G.units.index):
            phi_rep = check_phi_isometry(G, U, x, seed=config.seed)
            worst_phi = max(worst_phi, phi_rep.max_residual())
            surjective = surjective and phi_rep.surjective
        report.add(rows, "unitary-residual", worst_phi)
        report.add(rows, "unitary-onto", surjective)
        subset_ok = (ind.ok and surjective
                     and norm_rep.max_equality_gap < config.tol_norm
                     and norm_rep.min_induction_slack > -config.tol_norm
                     and worst_phi < 1e-8)
        report.add(rows, "ok", subset_ok)
        ok = ok and subset_ok
    _emit(report, config)
    return 0 if ok else 1


def cmd_glue(args, config):
    family = load_gluing_family(resolve_input(args.family))
    result = check_weak_gluing(family)
    report = Report("glue", config.seed)
    rows = report.section("weak-gluing")
    report.add(rows, "ok", result.ok)
    for i, line in enumerate(result.lines() if not result.ok else ()):
        report.add(rows, f"failure{i}", line)
    status = 0
    if result.ok:
        G = glue(family)
        rows = report.section("coproduct")
        report.add(rows, "units", G.n_units())
        report.add(rows, "arrows", G.n_arrows())
        report.add(rows, "orbits", len(orbits(G)))
        replay = all(
            groupoid_isomorphism(reduction(G, U), piece) is not None
            for U, piece in zip(family.cover, family.pieces))
        report.add(rows, "reductions-isomorphic-to-pieces", replay)
        if not replay:
            status = 1
        if args.emit:
            dump_json(args.emit, groupoid_to_dict(G))
            report.add(rows, "emitted", args.emit)
    else:
        status = 1
    _emit(report, config)
    return status


def cmd_fredholm(args, config):
    A = load_band_operator(resolve_input(args.operator))
    report = Report("fredholm", config.seed)
    verdict = fredholm_verdict(A, grid=config.grid, tol=config.tol_symbol)
    rows = report.section("verdict")
    report.add(rows, "fredholm", verdict.fredholm)
    for end in ("minus", "plus"):
        chk = verdict.end(end)
        report.add(rows, f"{end}-min-modulus", chk.min_modulus)
        report.add(rows, f"{end}-certified-margin", chk.margin)
    loc = locality_check(A, grid=config.grid, tol=config.tol_symbol)
    rows = report.section("locality")
    report.add(rows, "left-fredholm", loc.left_fredholm)
    report.add(rows, "right-fredholm", loc.right_fredholm)
    report.add(rows, "conjunction-identity", loc.conjunction_identity)
    sections = finite_section_analysis(A, list(config.sizes), config.eps)
    rows = report.section("finite-sections")
    report.add(rows, "sizes", sections.sizes)
    report.add(rows, "counts-below-eps", sections.counts)
    report.add(rows, "counts-below-window", sections.window_counts)
    report.add(rows, "window", sections.window)
    report.add(rows, "flag", sections.flag)
    opposite = ("CONSISTENT-NONFREDHOLM" if verdict.fredholm
                else "CONSISTENT-FREDHOLM")
    consistent = loc.conjunction_identity and sections.flag != opposite
    rows = report.section("consistency")
    report.add(rows, "ok", consistent)
    if args.emit_data:
        with open(args.emit_data, "w", encoding="utf-8") as fh:
            fh.write("# size count_eps count_window\n")
            for N, c, m in zip(sections.sizes, sections.counts,
                               sections.window_counts):
                fh.write(f"{N} {c} {m}\n")
    _emit(report, config)
    return 0 if consistent else 1


def cmd_model(args, config):
    if args.spec:
        spec = load_model_spec(resolve_input(args.spec))
    else:
        if not args.geometry or not args.coefficients:
            raise InputError("either --spec or --geometry/--coefficients is required")
        spec = model_spec_from_dict({
            "geometry": args.geometry,
            "coefficients": [float(c) for c in args.coefficients.split(",")],
            "r": args.r, "n": args.n, "h": args.h,
        })
    A = discretize_model(spec)
    sym = limit_operator(A, "plus")
    closed = boundary_symbol(spec)
    report = Report("model", config.seed)
    rows = report.section("model")
    report.add(rows, "geometry", spec.geometry)
    report.add(rows, "coefficients", list(spec.coefficients))
    report.add(rows, "step", spec.h)
    report.add(rows, "window", spec.n)
    rows = report.section("boundary-symbol")
    report.add(rows, "matches-closed-form", sym.max_abs_difference(closed) < 1e-12)
    chk = symbol_invertible(sym, grid=config.grid, tol=config.tol_symbol)
    report.add(rows, "invertible", chk.invertible)
    report.add(rows, "min-modulus", chk.min_modulus)
    report.add(rows, "certified-margin", chk.margin)
    if args.emit_data:
        theta = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
        values = np.abs(sym(theta))
        with open(args.emit_data, "w", encoding="utf-8") as fh:
            fh.write("# theta abs_symbol\n")
            for t, v in zip(theta, values):
                fh.write(f"{t:.10f} {v:.12g}\n")
    _emit(report, config)
    return 0


def cmd_suite(args, config):
    results = run_suite(seed=config.seed)
    report = Report("suite", config.seed)
    rows = report.section("criteria")
    for r in results:
        report.add(rows, f"criterion-{r.index}-{r.name}",
                   "PASS" if r.ok else "FAIL")
    rows = report.section("details")
    for r in results:
        report.add(rows, f"criterion-{r.index}", r.detail)
    for r in results:
        print(r.line())
    report.write(config.out)
    if config.out:
        print(f"report written to {config.out}")
    return 0 if all(r.ok for r in results) else 1


# -- argument parsing -----------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gcstar",
        description="Exact and numerical verification for finite groupoid "
                    "algebras and lattice band operators.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here")
    common.add_argument("--tol-norm", type=float, default=1e-9)
    common.add_argument("--tol-eigencluster", type=float, default=1e-9)
    common.add_argument("--tol-symbol", type=float, default=DEFAULT_SYMBOL_TOL)
    common.add_argument("--eps", type=float, default=DEFAULT_SECTION_EPS,
                        help="finite-section singular value threshold")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID)
    common.add_argument("--sizes", default="256,512,1024",
                        help="comma-separated finite-section sizes")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common],
                       help="check the groupoid axioms of a structure file")
    p.add_argument("groupoid")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("spectrum", parents=[common],
                       help="block decomposition and spectrum census")
    p.add_argument("groupoid")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify-decomposition", parents=[common],
                       help="spectrum decomposition over a cover")
    p.add_argument("groupoid")
    p.add_argument("--cover", required=True)
    p.set_defaults(func=cmd_verify_decomposition)

    p = sub.add_parser("induction-checks", parents=[common],
                       help="norm estimates and the induced-representation unitary")
    p.add_argument("groupoid")
    p.add_argument("--subsets", required=True,
                   help="JSON list of unit subsets to check")
    p.add_argument("--trials", type=int, default=10)
    p.set_defaults(func=cmd_induction_checks)

    p = sub.add_parser("glue", parents=[common],
                       help="weak gluing check and coproduct construction")
    p.add_argument("family")
    p.add_argument("--emit", default=None, help="write the glued groupoid here")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("fredholm", parents=[common],
                       help="limit-operator verdict, locality, finite sections")
    p.add_argument("operator")
    p.add_argument("--emit-data", default=None)
    p.set_defaults(func=cmd_fredholm)

    p = sub.add_parser("model", parents=[common],
                       help="discretize a boundary model and check its symbol")
    p.add_argument("--spec", default=None, help="model spec JSON file")
    p.add_argument("--geometry", choices=("b", "cusp", "scattering"))
    p.add_argument("--coefficients", help="comma-separated, lowest power first")
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--h", type=float, default=0.1)
    p.add_argument("--emit-data", default=None)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("suite", parents=[common],
                       help="run the full randomized verification suite")
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            seed=args.seed,
            tol_norm=args.tol_norm,
            tol_eigencluster=args.tol_eigencluster,
            tol_symbol=args.tol_symbol,
            eps=args.eps,
            grid=args.grid,
            sizes=_parse_sizes(args.sizes),
            out=args.out,
        )
        return args.func(args, config)
    except (InputError, CoverPreconditionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except GridRefinementNeeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except (AmbiguityError, GluingConditionError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
