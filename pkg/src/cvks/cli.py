"""Command-line sweeps: ``cvks {ks-werner,chsh,pseudospin,rrep}``.

Every subcommand accepts ``--config FILE`` holding ``key = value`` lines
whose keys are flag names (dashes or underscores); flags given on the
command line override the file.  Output goes to ``--out`` or stdout.

Exit codes: 0 success, 2 usage, 3 oracle mismatch, 4 convergence failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .homodyne import QuadratureConvergenceError, chsh_maximize
from .pseudospin import QuadratureGateError, TruncationError, ks_pseudospin
from .records import csv_text, json_text, run_metadata
from .rrep import PolarGrid, gamma_matrix_pseudospin, ks_any_state, normalization_integral, random_density
from .peres_mermin import all_gammas
from .werner import CONVENTIONS, WernerParams, build_werner, werner_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ORACLE = 3
EXIT_CONVERGENCE = 4

RREP_DEVIATION_TOL = 1e-8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Parsed flags of one subcommand plus the shared output settings."""

    command: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    seed: int | None = None
    tol: float = 1e-6


def read_config(path) -> dict:
    """Flat ``key = value`` file; blank lines and ``#`` comments are skipped."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _build_parser():
    """Top-level parser and a name -> subparser map."""
    parser = argparse.ArgumentParser(prog="cvks", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cvks {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--out", help="output path (default: stdout)")
        return p

    ks = common(sub.add_parser("ks-werner", help="KS function of a CV Werner state against alpha"))
    ks.add_argument("--a", type=float, default=0.5)
    ks.add_argument("--p", type=float, default=1.0)
    ks.add_argument("--alpha-min", type=float, default=0.5)
    ks.add_argument("--alpha-max", type=float, default=3.0)
    ks.add_argument("--steps", type=int, default=51)
    ks.add_argument("--convention", choices=sorted(CONVENTIONS), default="published")
    ks.add_argument("--tol", type=float, default=1e-6, help="absolute oracle tolerance")
    ks.add_argument("--seed", type=int, default=None)

    ch = common(sub.add_parser("chsh", help="maximised CHSH value of a CV Werner state against p"))
    ch.add_argument("--a", type=float, default=0.5)
    ch.add_argument("--alpha", type=float, default=2.5)
    ch.add_argument("--p-min", type=float, default=0.0)
    ch.add_argument("--p-max", type=float, default=1.0)
    ch.add_argument("--steps", type=int, default=11)
    ch.add_argument("--restarts", type=int, default=20)
    ch.add_argument("--seed", type=int, default=0)

    ps = common(sub.add_parser("pseudospin", help="pseudo-spin KS value against squeezing r"))
    ps.add_argument("--r-min", type=float, default=0.1)
    ps.add_argument("--r-max", type=float, default=1.5)
    ps.add_argument("--steps", type=int, default=15)
    ps.add_argument("--dim", type=int, default=None, help="fixed even Fock cutoff per mode")
    ps.add_argument("--quad-nodes", type=int, default=64)
    ps.add_argument("--seed", type=int, default=None)

    rr = common(sub.add_parser("rrep", help="KS value of random two-mode density matrices"))
    rr.add_argument("--dim", type=int, default=6)
    rr.add_argument("--samples", type=int, default=100)
    rr.add_argument("--seed", type=int, default=0)
    return parser, {"ks-werner": ks, "chsh": ch, "pseudospin": ps, "rrep": rr}


def parse_config(argv) -> RunConfig:
    parser, subparsers = _build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = subparsers[args.command]
        file_values = read_config(args.config)
        known = {a.dest: a for a in sub._actions}
        for key, raw in file_values.items():
            if key not in known or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r}")
            action = known[key]
            try:
                value = action.type(raw) if action.type else raw
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: {exc}") from None
            if action.choices and value not in action.choices:
                raise UsageError(f"config key {key!r} must be one of {action.choices}")
            sub.set_defaults(**{key: value})
        args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("command", "config", "out", "seed", "tol")}
    return RunConfig(args.command, params, args.out, getattr(args, "seed", None), getattr(args, "tol", 1e-6))


def _linspace(lo, hi, steps, name):
    if steps < 1:
        raise UsageError(f"--steps must be positive, got {steps}")
    if steps > 1 and not hi > lo:
        raise UsageError(f"{name} range must be increasing")
    return np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


def cmd_ks_werner(cfg: RunConfig) -> int:
    p = cfg.params
    try:
        WernerParams(p["a"], p["p"], p["alpha_min"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    grid = _linspace(p["alpha_min"], p["alpha_max"], p["steps"], "alpha")
    records = werner_sweep(grid, p["a"], p["p"], convention=p["convention"], seed=cfg.seed)
    header = ["alpha", "ks", "r1", "r2", "r3", "c1", "c2", "c3", "oracle", "abs_err"]
    rows = [(r.sweep_parameter, r.value, *r.correlators, r.oracle_value, r.abs_error) for r in records]
    _emit(csv_text(header, rows), cfg.out)
    worst = max((r.abs_error for r in records if r.abs_error is not None), default=0.0)
    if worst > cfg.tol:
        print(f"cvks: oracle mismatch {worst:.3e} exceeds --tol {cfg.tol:g}", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def cmd_chsh(cfg: RunConfig) -> int:
    p = cfg.params
    if p["restarts"] < 1:
        raise UsageError("--restarts must be at least 1")
    if not 0 <= p["p_min"] <= p["p_max"] <= 1:
        raise UsageError("need 0 <= p-min <= p-max <= 1")
    try:
        WernerParams(p["a"], p["p_min"], p["alpha"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    grid = _linspace(p["p_min"], p["p_max"], p["steps"], "p")
    rows = []
    for pv in grid:
        state = build_werner(WernerParams(p["a"], float(pv), p["alpha"]))
        best, ang = chsh_maximize(state, p["alpha"], restarts=p["restarts"], seed=cfg.seed)
        rows.append((pv, best, ang.theta1, ang.theta1p, ang.theta2, ang.theta2p))
    _emit(csv_text(["p", "chsh", "theta1", "theta1p", "theta2", "theta2p"], rows), cfg.out)
    return EXIT_OK


def cmd_pseudospin(cfg: RunConfig) -> int:
    p = cfg.params
    if p["dim"] is not None and (p["dim"] < 2 or p["dim"] % 2):
        raise UsageError(f"--dim must be an even integer >= 2, got {p['dim']}")
    if p["quad_nodes"] < 16:
        raise UsageError("--quad-nodes must be at least 16")
    if not p["r_min"] > 0:
        raise UsageError("--r-min must be positive")
    grid = _linspace(p["r_min"], p["r_max"], p["steps"], "r")
    records = ks_pseudospin(grid, quad_nodes=p["quad_nodes"], D=p["dim"], seed=cfg.seed)
    rows = [(r.sweep_parameter, r.value, r.metadata["norm_defect"]) for r in records]
    _emit(csv_text(["r", "ks", "norm_defect"], rows), cfg.out)
    return EXIT_OK


def cmd_rrep(cfg: RunConfig) -> int:
    p = cfg.params
    D, n = p["dim"], p["samples"]
    if n < 1:
        raise UsageError("--samples must be at least 1")
    if D < 2 or D % 2:
        raise UsageError(f"--dim must be an even integer >= 2, got {D}")
    children = np.random.SeedSequence(cfg.seed).spawn(n)
    samples = []
    for i, child in enumerate(children):
        rank = 1 + i % (D * D)
        rho = random_density(D, rank, np.random.default_rng(child))
        ks = ks_any_state(rho)
        samples.append({"index": i, "rank": rank, "ks": ks, "deviation": abs(ks - 6.0),
                        "normalization": normalization_integral(rho, PolarGrid())})
    identity_err = 0.0
    eye = np.eye(D * D)
    for g in all_gammas():
        m = gamma_matrix_pseudospin(g, D)
        identity_err = max(identity_err, float(np.abs(m - (-eye if g.name == "C3" else eye)).max()))
    max_dev = max(s["deviation"] for s in samples)
    report = {
        "dim": D,
        "samples": samples,
        "max_deviation": max_dev,
        "max_normalization_error": max(abs(s["normalization"] - 1) for s in samples),
        "gamma_identity_max_error": identity_err,
        "metadata": run_metadata(seed=cfg.seed),
    }
    _emit(json_text(report), cfg.out)
    return EXIT_CONVERGENCE if max_dev > RREP_DEVIATION_TOL else EXIT_OK


COMMANDS = {
    "ks-werner": cmd_ks_werner,
    "chsh": cmd_chsh,
    "pseudospin": cmd_pseudospin,
    "rrep": cmd_rrep,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, OSError) as exc:
        print(f"cvks: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationError, QuadratureGateError, QuadratureConvergenceError) as exc:
        print(f"cvks: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
