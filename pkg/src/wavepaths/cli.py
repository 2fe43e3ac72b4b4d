"""Command-line interface: ``classify``, ``trace``, ``portrait`` and ``selftest``.

Exit codes: 0 on success, 2 for bad arguments or inputs the caller must
change, 3 when a numerical procedure fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .classifier import classify_flow, w_roots
from .errors import InputError, NumericalError, WavePathsError
from .export import EXPORTERS
from .irrotational import trajectory_irrotational
from .model import FlowConfig, ParticleState, Trajectory
from .vorticity import first_integral, integrate_orbit

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC = 0, 2, 3
MAX_GRID = 10_000


class ArgumentError(Exception):
    pass


@dataclass(frozen=True)
class RunSpec:
    config: FlowConfig
    init: ParticleState
    t_max: float = 5.0
    dt: float = 1e-4
    outputs: tuple = ("csv",)
    out_path: str | None = None

    def __post_init__(self):
        if not self.outputs:
            raise ArgumentError("select at least one output format")


def _add_flow_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c0", type=float, default=0.0, help="uniform current strength")
    p.add_argument("--shear", type=float, help="composite shear coefficient in u (exclusive with --omega0)")
    p.add_argument("--omega0", type=float, help="vorticity; shear is derived with --g and --h0")
    p.add_argument("--g", type=float, help="gravitational acceleration (default 9.81)")
    p.add_argument("--h0", type=float, help="undisturbed depth (default 1)")


def _add_particle_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x0", type=float, default=0.5)
    p.add_argument("--z0", type=float, default=0.5)


def _config(args, c0=None) -> FlowConfig:
    c0 = args.c0 if c0 is None else c0
    g = 9.81 if args.g is None else args.g
    h0 = 1.0 if args.h0 is None else args.h0
    if args.shear is not None:
        if args.omega0 is not None or args.g is not None or args.h0 is not None:
            raise ArgumentError("--shear cannot be combined with --omega0/--g/--h0")
        return FlowConfig.from_shear(args.shear, c0, g=g, h0=h0)
    return FlowConfig(c0=c0, omega0=args.omega0 or 0.0, g=g, h0=h0)


def _number(x):
    if x is None or not math.isfinite(x):
        return None
    return x


def classify_report(config: FlowConfig, init: ParticleState) -> dict:
    cls = classify_flow(config, init)
    fi = first_integral(config, init)
    c0 = config.c0
    w1, w2 = w_roots(fi.C, c0)
    rep = {
        "class": cls.effective.value,
        "analytic_class": cls.shape.value,
        "sub_case": cls.sub_case,
        "C": fi.C,
        "delta": 16.0 * math.pi**2 * (math.pi**2 * c0 * c0 + math.pi**2 - fi.C),
        "W1": _number(w1),
        "W2": _number(w2),
        "branch": cls.branch or fi.alternative,
        "condition_met": fi.condition_met,
        "flags": sorted(cls.flags),
    }
    an = cls.analysis
    if an is not None:
        rep["period"], rep["drift"] = an.period, an.drift
    return rep


def build_trajectory(spec: RunSpec) -> Trajectory:
    cfg, init = spec.config, spec.init
    if cfg.irrotational:
        n = int(math.ceil(spec.t_max / spec.dt - 1e-9)) + 1
        traj = trajectory_irrotational(cfg.c0, init, (0.0, (n - 1) * spec.dt), n)
        # keep the caller's g, h0 and omega0 in the metadata
        return traj.replace(config=cfg)
    traj = integrate_orbit(cfg, init, spec.t_max, dt=spec.dt)
    return traj.replace(cls=classify_flow(cfg, init, resolve=False))


def _parse_range(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ArgumentError(f"range must be A:B:N, got {text!r}") from None
    if n < 1:
        raise ArgumentError("range needs N >= 1")
    return np.linspace(a, b, n)


def _portrait_cell(job):
    config, init = job
    try:
        return classify_flow(config, init).effective.value
    except WavePathsError as exc:
        return type(exc).__name__


def portrait_grid(c0s, shears, init: ParticleState, g=9.81, h0=1.0, jobs: int = 1):
    """Class names on the ``c0 x shear`` grid, rows by ``c0``."""
    cells = [(FlowConfig.from_shear(s, c, g=g, h0=h0), init) for c in c0s for s in shears]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            names = list(ex.map(_portrait_cell, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    else:
        names = [_portrait_cell(c) for c in cells]
    m = len(shears)
    return [names[i * m:(i + 1) * m] for i in range(len(c0s))]


def portrait_csv(c0s, shears, grid) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["c0\\shear"] + [f"{s:.12g}" for s in shears])
    for c, row in zip(c0s, grid):
        w.writerow([f"{c:.12g}"] + row)
    return buf.getvalue().encode("ascii")


def _cmd_classify(args) -> int:
    rep = classify_report(_config(args), ParticleState(args.x0, args.z0))
    print(json.dumps(rep))
    return EXIT_OK


def _cmd_trace(args) -> int:
    formats = tuple(dict.fromkeys(args.format))
    if not args.t_max > 0 or not args.dt > 0:
        raise ArgumentError("--t-max and --dt must be positive")
    if len(formats) > 1 and not args.out:
        raise ArgumentError("several formats need --out")
    spec = RunSpec(_config(args), ParticleState(args.x0, args.z0), args.t_max, args.dt, formats, args.out)
    traj = build_trajectory(spec)
    for fmt in formats:
        data = EXPORTERS[fmt](traj)
        if spec.out_path is None:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
            continue
        path = spec.out_path
        if len(formats) > 1:
            path = os.path.splitext(path)[0] + "." + fmt
        with open(path, "wb") as fh:
            fh.write(data)
    return EXIT_OK


def _cmd_portrait(args) -> int:
    if args.shear is not None or args.omega0 is not None:
        raise ArgumentError("portrait takes --shear-range, not --shear/--omega0")
    c0s, shears = _parse_range(args.c0_range), _parse_range(args.shear_range)
    if len(c0s) * len(shears) > MAX_GRID:
        raise ArgumentError(f"grid has {len(c0s) * len(shears)} points, limit is {MAX_GRID}")
    init = ParticleState(args.x0, args.z0)
    grid = portrait_grid(c0s, shears, init, jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "portrait.csv"), "wb") as fh:
        fh.write(portrait_csv(c0s, shears, grid))
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from . import selftest

    return EXIT_OK if selftest.run(sys.stderr) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavepaths", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="predict the trajectory shape, print JSON")
    _add_flow_args(p)
    _add_particle_args(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("trace", help="compute and export one trajectory")
    _add_flow_args(p)
    _add_particle_args(p)
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--format", nargs="+", choices=sorted(EXPORTERS), default=["csv"])
    p.add_argument("--out", help="output file (standard output if omitted)")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("portrait", help="classify a grid of (c0, shear) values")
    p.add_argument("--c0-range", required=True, metavar="A:B:N")
    p.add_argument("--shear-range", required=True, metavar="A:B:N")
    p.add_argument("--c0", type=float, default=0.0, help=argparse.SUPPRESS)
    p.add_argument("--shear", type=float, help=argparse.SUPPRESS)
    p.add_argument("--omega0", type=float, help=argparse.SUPPRESS)
    _add_particle_args(p)
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=_cmd_portrait)

    p = sub.add_parser("selftest", help="run the invariant checks")
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ARGS
    try:
        return args.func(args)
    except (ArgumentError, InputError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
