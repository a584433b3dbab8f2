"""Command-line front end.

Subcommands: ideal, probs, bound, sweep, montecarlo.  Parameters may come
from flags or from a flat key=value config file (flags win).  Data goes to
stdout or --output; diagnostics go to stderr.  Exit codes: 0 success,
2 usage error, 3 I/O error, 4 numeric-validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, TextIO

from . import inequality, montecarlo, process_matrix
from .kraus import NoiseParams, behavior as kraus_behavior
from .sweep import (
    DEFAULT_FIDELITIES,
    epsilon_of_fidelity,
    eta_of_purity,
    sweep,
    write_sweep_csv,
)

_EXIT_USAGE = 2
_EXIT_IO = 3
_EXIT_NUMERIC = 4


class UsageError(Exception):
    """Bad flag/config combination (exit code 2)."""


def _parse_config(path: str) -> dict[str, str]:
    """Read a flat key=value file; '#' starts a comment line."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


_FLOAT_KEYS = ("eta", "purity", "epsilon", "f_switch")
_INT_KEYS = ("n_per_setting", "reps", "seed", "threads", "purity_steps", "show")
_STR_KEYS = ("backend", "output", "fidelities")


def _merge(args: argparse.Namespace, config: dict[str, str]) -> argparse.Namespace:
    """Fill flags that were not given on the command line from the config."""
    known = set(_FLOAT_KEYS) | set(_INT_KEYS) | set(_STR_KEYS)
    for key in config:
        if key not in known:
            raise UsageError(f"unknown config key {key!r}")
    for key, raw in config.items():
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue
        try:
            if key in _FLOAT_KEYS:
                setattr(args, key, float(raw))
            elif key in _INT_KEYS:
                setattr(args, key, int(raw))
            else:
                setattr(args, key, raw)
        except ValueError as exc:
            raise UsageError(f"config key {key!r}: {exc}") from exc
    return args


def _resolve_noise(args: argparse.Namespace) -> NoiseParams:
    """Combine the eta/purity and epsilon/f-switch flag pairs."""
    if args.eta is not None and args.purity is not None:
        raise UsageError("--eta and --purity are mutually exclusive")
    if args.epsilon is not None and args.f_switch is not None:
        raise UsageError("--epsilon and --f-switch are mutually exclusive")
    if args.purity is not None:
        eta = eta_of_purity(args.purity)
    else:
        eta = 1.0 if args.eta is None else args.eta
    if args.f_switch is not None:
        epsilon = epsilon_of_fidelity(args.f_switch)
    else:
        epsilon = 1.0 if args.epsilon is None else args.epsilon
    return NoiseParams(eta, epsilon)


@contextmanager
def _open_output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _add_noise_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--eta", type=float, help="Werner visibility in [0, 1]")
    parser.add_argument("--purity", type=float, help="resource purity in [0.25, 1]")
    parser.add_argument("--epsilon", type=float, help="order-coherence weight in [0, 1]")
    parser.add_argument("--f-switch", type=float, dest="f_switch",
                        help="switch process fidelity in [0.5, 1]")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchlab",
        description="Simulate the entangled-control switch experiment and "
        "its causal-order inequality.",
    )
    parser.add_argument("--config", help="flat key=value parameter file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ideal = sub.add_parser("ideal", help="inequality terms at one noise point")
    _add_noise_flags(p_ideal)

    p_probs = sub.add_parser("probs", help="all 256 conditional probabilities as CSV")
    _add_noise_flags(p_probs)
    p_probs.add_argument("--backend", choices=("kraus", "process"),
                         help="simulation backend (default: kraus)")
    p_probs.add_argument("--output", help="write CSV here instead of stdout")

    p_bound = sub.add_parser("bound", help="exact classical bound by enumeration")
    p_bound.add_argument("--show", type=int,
                         help="print the first N maximizing strategies")

    p_sweep = sub.add_parser("sweep", help="inequality value over a noise grid")
    p_sweep.add_argument("--purity-steps", type=int, dest="purity_steps",
                         help="number of purity grid points (default 151)")
    p_sweep.add_argument("--fidelities",
                         help="comma-separated switch fidelities (default 1,0.96,0.92)")
    p_sweep.add_argument("--output", help="write CSV here instead of stdout")
    p_sweep.add_argument("--threads", type=int, help="worker cap (default: machine)")

    p_mc = sub.add_parser("montecarlo", help="finite-statistics simulation")
    _add_noise_flags(p_mc)
    p_mc.add_argument("--n-per-setting", type=int, dest="n_per_setting",
                      help="shots per setting combination (default 7000)")
    p_mc.add_argument("--reps", type=int, help="number of repetitions (default 500)")
    p_mc.add_argument("--seed", type=int, help="master seed (default 0)")
    p_mc.add_argument("--output", help="write per-rep CSV here")
    p_mc.add_argument("--threads", type=int, help="worker cap (default: machine)")

    return parser


def _cmd_ideal(args: argparse.Namespace) -> int:
    value = inequality.vbc_value(kraus_behavior(_resolve_noise(args)))
    print(f"p1    = {value.p1:.9g}")
    print(f"p2    = {value.p2:.9g}")
    print(f"p3    = {value.p3:.9g}")
    print(f"total = {value.total:.9g}")
    print(f"classical bound = {float(inequality.CLASSICAL_BOUND):.9g}")
    print(f"quantum maximum = {inequality.QUANTUM_MAX:.9g}")
    return 0


def _cmd_probs(args: argparse.Namespace) -> int:
    backend = args.backend or "kraus"
    run = kraus_behavior if backend == "kraus" else process_matrix.behavior
    table = run(_resolve_noise(args))
    with _open_output(args.output) as out:
        out.write("x1,x2,y,z,a1,a2,b,c,p\n")
        for *indices, p in table.rows():
            out.write(",".join(str(i) for i in indices) + f",{p:.9g}\n")
    return 0


def _cmd_bound(args: argparse.Namespace) -> int:
    bound, maximizers = inequality.classical_bound()
    assert bound == Fraction(7, 4)
    print(f"classical bound: {bound.numerator}/{bound.denominator} (= {float(bound):.9g})")
    print(f"maximizers: {len(maximizers)} of 32768 deterministic strategies")
    if args.show:
        for strategy in maximizers[: args.show]:
            print(inequality.format_strategy(strategy))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    steps = args.purity_steps
    purities = None
    if steps is not None:
        if steps < 2:
            raise UsageError("--purity-steps must be at least 2")
        import numpy as np

        purities = np.linspace(0.25, 1.0, steps)
    fidelities = DEFAULT_FIDELITIES
    if args.fidelities is not None:
        try:
            fidelities = tuple(float(f) for f in args.fidelities.split(","))
        except ValueError as exc:
            raise UsageError(f"--fidelities: {exc}") from exc
    threads = args.threads if args.threads is not None else os.cpu_count()
    rows = sweep(purities, fidelities, threads=threads)
    with _open_output(args.output) as out:
        write_sweep_csv(rows, out)
    print(f"wrote {len(rows)} sweep rows", file=sys.stderr)
    return 0


def _cmd_montecarlo(args: argparse.Namespace) -> int:
    noise = _resolve_noise(args)
    n = args.n_per_setting if args.n_per_setting is not None else 7000
    reps = args.reps if args.reps is not None else 500
    seed = args.seed if args.seed is not None else 0
    threads = args.threads if args.threads is not None else os.cpu_count()
    rep = montecarlo.report(kraus_behavior(noise), n, reps, seed, threads=threads)
    if args.output is not None:
        with _open_output(args.output) as out:
            montecarlo.write_reps_csv(rep.per_rep, out)
    print(f"n_per_setting = {rep.n_per_setting}")
    print(f"reps          = {rep.reps}")
    print(f"seed          = {rep.seed}")
    for name, mean, sig in zip(("p1", "p2", "p3"), rep.term_means, rep.term_sigmas):
        print(f"{name}: mean = {mean:.9g}, sigma = {sig:.9g}")
    print(f"mean_total = {rep.mean_total:.9g}")
    print(f"sigma      = {rep.sigma:.9g}")
    print(f"z          = {rep.z_score:.9g} σ above 7/4")
    return 0


_COMMANDS = {
    "ideal": _cmd_ideal,
    "probs": _cmd_probs,
    "bound": _cmd_bound,
    "sweep": _cmd_sweep,
    "montecarlo": _cmd_montecarlo,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return int(exc.code or 0)
    try:
        if args.config is not None:
            _merge(args, _parse_config(args.config))
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"switchlab: usage error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except OSError as exc:
        print(f"switchlab: i/o error: {exc}", file=sys.stderr)
        return _EXIT_IO
    except ValueError as exc:
        print(f"switchlab: invalid value: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
