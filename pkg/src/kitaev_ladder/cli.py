"""kitaev-ladder: spectrum tables, thermodynamic sweeps, RDM reports, verification.

Exit codes: 0 success, 1 verification failure, 2 budget or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from . import oracle, rdm, spectrum, thermo, verification
from .lattice import DegenerateLatticeError, LatticeKind, build, build_two_leg_ladder
from .pauli import DimensionError
from .spectrum import BudgetError, Couplings
from .thermo import ThermalPoint

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    lattice: LatticeKind = LatticeKind.TWO_LEG
    N: tuple[int, ...] = (2,)
    J: float = 1.0
    K: float = 1.0
    betas: tuple[float, ...] = ()
    subsystem: str | None = None
    output: str | None = None
    fmt: str = "csv"
    units: str = "bits"


class ConfigError(ValueError):
    pass


@contextmanager
def _sink(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _beta_grid(args) -> tuple[float, ...]:
    if args.beta is not None:
        grid = tuple(args.beta)
    elif args.beta_min is not None and args.beta_max is not None:
        grid = tuple(float(b) for b in np.linspace(args.beta_min, args.beta_max, args.steps))
    else:
        raise ConfigError("give --beta or both --beta-min and --beta-max")
    if not grid:
        raise ConfigError("beta grid is empty")
    if any(b < 0 for b in grid):
        raise ConfigError("beta must be non-negative")
    return grid


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# --- commands ----------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig) -> int:
    lat = build(cfg.lattice, cfg.N[0])
    hist = spectrum.enumerate_spectrum(lat, Couplings(cfg.J, cfg.K))
    e0, d0 = hist.ground
    etop, dtop = hist.top
    summary = [f"lattice={lat.kind.value} N={lat.size} links={lat.num_links} states={hist.total}",
               f"ground {_fmt(e0)} x{d0}", f"top {_fmt(etop)} x{dtop}"]
    with _sink(cfg.output) as fh:
        hist.write_csv(fh)
    out = sys.stdout if cfg.output else sys.stderr
    print("\n".join(summary), file=out)
    return EXIT_OK


def cmd_thermo(cfg: RunConfig) -> int:
    rows = thermo.sweep_rows(cfg.betas, cfg.J, cfg.K, cfg.N, cfg.lattice)
    with _sink(cfg.output) as fh:
        if cfg.fmt == "json":
            json.dump(rows, fh, indent=2)
            fh.write("\n")
        else:
            thermo.write_sweep_csv(rows, fh)
    return EXIT_OK


def _closed_rdm(lat, name: str, tp: ThermalPoint, rungs, leg: str):
    if name == "A":
        return rdm.subsystem_A(lat, leg), rdm.rho_A_closed(lat.size)
    if name == "B":
        return rdm.subsystem_B(lat), rdm.rho_B_closed(tp).dense()
    if name == "C":
        sub = rdm.subsystem_C(lat, rungs)
        return sub, rdm.rho_C_closed(lat, sub)
    return rdm.subsystem_D(lat), rdm.rho_D_closed()


def cmd_rdm(cfg: RunConfig, rungs=(0,), leg: str = "upper") -> int:
    if cfg.lattice is not LatticeKind.TWO_LEG:
        raise ConfigError("rdm is defined on the two-leg ladder")
    N = cfg.N[0]
    lat = build_two_leg_ladder(N)
    c = Couplings(cfg.J, cfg.K)
    reports = []
    for beta in cfg.betas:
        tp = ThermalPoint(beta, c, N)
        sub, rho = _closed_rdm(lat, cfg.subsystem, tp, rungs, leg)
        brute = None
        if lat.num_links <= oracle.DENSE_MAX_LINKS:
            h = oracle.build_hamiltonian(lat, c)
            brute = rdm.partial_trace(oracle.thermal_density_matrix(h, beta), sub, lat.num_links)
        report = rdm.rdm_report(cfg.subsystem, tp, rho, cfg.units, brute)
        report["links"] = list(sub.links)
        if cfg.subsystem == "B":
            report["entropy_bits_closed_form"] = rdm.entropy_B(tp)
            report["wilson_x"] = thermo.wilson_x_average(tp)
        reports.append(report)
    with _sink(cfg.output) as fh:
        json.dump(reports[0] if len(reports) == 1 else reports, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def cmd_verify(skip, inject, seed, output) -> int:
    opts = verification.Options(seed=seed, inject=inject, workers=verification.default_workers())
    results = verification.run_all(skip=set(skip), opts=opts, echo=lambda s: print(s, flush=True))
    failed = [r for r in results if r.passed is False]
    report = {"passed": not failed, "checks": [r.to_dict() for r in results]}
    if output:
        with open(output, "w") as fh:
            json.dump(report, fh, indent=2, default=lambda x: None)
            fh.write("\n")
    if failed:
        print("FAILED: " + ", ".join(r.name for r in failed), file=sys.stderr)
        return EXIT_FAIL
    print("all checks passed")
    return EXIT_OK


# --- argument parsing ----------------------------------------------------------

def _add_common(p, multi_n=False):
    p.add_argument("--lattice", default="two-leg", choices=[k.value for k in LatticeKind])
    if multi_n:
        p.add_argument("-N", type=int, nargs="+", default=[10])
    else:
        p.add_argument("-N", type=int, default=2)
    p.add_argument("-J", type=float, default=1.0)
    p.add_argument("-K", type=float, default=1.0)
    p.add_argument("-o", "--output", help="output file (default: stdout)")


def _add_beta(p):
    p.add_argument("--beta", type=float, nargs="+")
    p.add_argument("--beta-min", type=float)
    p.add_argument("--beta-max", type=float)
    p.add_argument("--steps", type=int, default=50)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kitaev-ladder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="closed-form spectrum histogram (CSV)")
    _add_common(p)

    p = sub.add_parser("thermo", help="thermodynamic sweep over a beta grid")
    _add_common(p, multi_n=True)
    _add_beta(p)
    p.add_argument("--format", dest="fmt", default="csv", choices=["csv", "json"])

    p = sub.add_parser("rdm", help="reduced density matrix report (JSON)")
    _add_common(p)
    _add_beta(p)
    p.add_argument("--sub", required=True, choices=["A", "B", "C", "D"])
    p.add_argument("--rungs", type=int, nargs="+", default=[0], help="rung indices for C (0-based)")
    p.add_argument("--leg", default="upper", choices=["upper", "lower"], help="leg for A")
    p.add_argument("--units", default="bits", choices=["bits", "nats"])

    p = sub.add_parser("verify", help="run the acceptance checks against the oracle")
    p.add_argument("--skip", action="append", default=[],
                   help=f"check name or group to skip ({', '.join(verification.GROUPS)})")
    p.add_argument("--inject", choices=["k-sign"], help="deliberately corrupt the closed forms")
    p.add_argument("--seed", type=int, default=verification.Options.seed)
    p.add_argument("-o", "--output", help="JSON report path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.skip, args.inject, args.seed, args.output)
        Ns = tuple(args.N) if isinstance(args.N, list) else (args.N,)
        cfg = RunConfig(command=args.command, lattice=LatticeKind(args.lattice), N=Ns,
                        J=args.J, K=args.K, output=args.output)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        cfg.betas = _beta_grid(args)
        if args.command == "thermo":
            cfg.fmt = args.fmt
            return cmd_thermo(cfg)
        cfg.subsystem, cfg.units = args.sub, args.units
        return cmd_rdm(cfg, rungs=args.rungs, leg=args.leg)
    except (BudgetError, DimensionError, DegenerateLatticeError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
