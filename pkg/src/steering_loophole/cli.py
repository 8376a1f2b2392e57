"""Command-line interface: ``steering {bounds,eta,noise,simulate}``.

Exit codes: 0 on success, 2 for a bad configuration, 3 for a numerical or
domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .efficiency import (
    DEFAULT_GRID_POINTS,
    DEFAULT_THETA_MIN,
    critical_efficiency,
    efficiency_curve,
    limit_zero_entanglement,
    optimal_alice,
)
from .errors import SteeringError
from .lhs import lhs_bound, random_strategy, saturating_strategy
from .measurements import PLATONIC, MeasurementSet, SetLabel, load_set_file, named_set, platonic_set
from .noise import crossover_epsilon, min_over_theta, noise_curve
from .qubit import NoiseKind, TwoQubitState
from .simulation import DEFAULT_SIGMA, ERROR_BAR_NOTE, simulate_lhs, simulate_quantum, tally_to_dict, verdict

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
HALF_PI = math.pi / 2
# grids typed as 1.5708 overshoot pi/2 by a few 1e-6; anything this close is clamped
GRID_CLAMP = 1e-4

log = logging.getLogger("steering_loophole")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    sets: list[str] = field(default_factory=list)
    set_file: str | None = None
    grid: str | None = None
    epsilons: list[float] = field(default_factory=list)
    noise_kind: str = "colored"
    theta: float | None = None
    eta: float = 1.0
    rounds: int = 1_000_000
    seed: int = 0
    output_format: str = "csv"
    output: str | None = None
    degrees: bool = False


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_grid(spec: str | None, degrees: bool = False) -> np.ndarray:
    if spec is None:
        return np.linspace(DEFAULT_THETA_MIN, HALF_PI, DEFAULT_GRID_POINTS)
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:count, got {spec!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"could not parse grid {spec!r}") from None
    if degrees:
        start, stop = math.radians(start), math.radians(stop)
    if count < 1:
        raise ConfigError("grid count must be positive")
    if HALF_PI < stop <= HALF_PI + GRID_CLAMP:
        stop = HALF_PI
    if not (0 < start <= stop <= HALF_PI):
        raise ConfigError("grid bounds must satisfy 0 < start <= stop <= pi/2")
    return np.linspace(start, stop, count) if count > 1 else np.array([stop])


def parse_theta(value: float | None, degrees: bool) -> float:
    if value is None:
        raise ConfigError("--theta is required")
    theta = math.radians(value) if degrees else float(value)
    if HALF_PI < theta <= HALF_PI + GRID_CLAMP:
        theta = HALF_PI
    if not (0 < theta <= HALF_PI):
        raise ConfigError("--theta must lie in (0, pi/2]")
    return theta


def resolve_sets(cfg: RunConfig, aligned: bool = True) -> list[MeasurementSet]:
    out = []
    for label in cfg.sets:
        try:
            SetLabel(label)
        except ValueError:
            raise ConfigError(f"unknown set {label!r}") from None
        if label == SetLabel.USER.value:
            raise ConfigError("use --set-file for user sets")
        out.append(named_set(label) if aligned else _unaligned(label))
    if cfg.set_file:
        try:
            out.append(load_set_file(cfg.set_file, align=aligned))
        except OSError as exc:
            raise ConfigError(f"cannot read set file: {exc}") from None
    if not out:
        raise ConfigError("give --set or --set-file")
    return out


def _unaligned(label: str) -> MeasurementSet:
    return platonic_set(label) if SetLabel(label) in PLATONIC else named_set(label)


def _metadata_lines(meta: dict) -> list[str]:
    return [f"# {k}={v}" for k, v in meta.items()]


def write_csv(header: list[str], rows, meta: dict | None = None) -> str:
    buf = io.StringIO()
    for line in _metadata_lines(meta or {}):
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def read_csv(text: str) -> tuple[dict, list[str], np.ndarray]:
    """Inverse of :func:`write_csv`: (metadata, header, data)."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = v
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    header, data = rows[0], np.array([[float(x) for x in r] for r in rows[1:]])
    return meta, header, data


def _emit(text: str, cfg: RunConfig, suffix: str | None = None) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    path = Path(cfg.output)
    if suffix:
        path = path.with_name(f"{path.stem}_{suffix}{path.suffix}")
    path.write_text(text)
    log.info("wrote %s", path)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(type(o))


def _grid_label(grid: np.ndarray) -> str:
    return f"{_fmt(grid[0])}:{_fmt(grid[-1])}:{len(grid)}"


def _theta_column(thetas: np.ndarray, degrees: bool):
    return ("theta_deg", np.degrees(thetas)) if degrees else ("theta", thetas)


def cmd_bounds(cfg: RunConfig) -> dict:
    reports = []
    for mset in resolve_sets(cfg, aligned=False):
        b = lhs_bound(mset)
        reports.append(
            {
                "set": mset.label.value,
                "n": mset.n if not mset.is_continuum else "inf",
                "c_n": b.c_n,
                "c_prime_n": b.c_prime_n,
                "maximizing_patterns": [list(p) for p in b.maximizing_patterns],
                "saturating_states": [
                    {"amplitude0": [s.amplitude0.real, s.amplitude0.imag],
                     "amplitude1": [s.amplitude1.real, s.amplitude1.imag],
                     "bloch": s.bloch().as_array().tolist()}
                    for s in b.saturating_states
                ],
            }
        )
    if cfg.output_format == "json":
        _emit(json.dumps(reports, indent=2, default=_json_default), cfg)
    else:
        lines = []
        for r in reports:
            lines.append(f"set={r['set']} n={r['n']}")
            lines.append(f"  C_n  = {_fmt(r['c_n'])}")
            lines.append(f"  C'_n = {_fmt(r['c_prime_n'])}")
            for p, s in zip(r["maximizing_patterns"], r["saturating_states"]):
                sign = " ".join("+" if x > 0 else "-" for x in p)
                bloch = ", ".join(f"{c:+.12f}" for c in s["bloch"])
                lines.append(f"  pattern ({sign})  hidden state Bloch ({bloch})")
        _emit("\n".join(lines) + "\n", cfg)
    return {"reports": reports}


def cmd_eta(cfg: RunConfig) -> dict:
    grid = parse_grid(cfg.grid, cfg.degrees)
    sets = resolve_sets(cfg)
    curves = []
    for mset in sets:
        curve = efficiency_curve(mset, grid)
        curves.append(curve)
        meta = {
            "set": curve.label,
            "n": "inf" if mset.is_continuum else int(mset.n),
            "c_n": _fmt(lhs_bound(mset).c_n),
            "zero_entanglement_limit": _fmt(limit_zero_entanglement(mset)),
            "grid": _grid_label(grid),
        }
        name, th = _theta_column(curve.thetas, cfg.degrees)
        if cfg.output_format == "json":
            text = json.dumps({"metadata": meta, name: th, "eta_c": curve.etas}, default=_json_default, indent=2)
        else:
            text = write_csv([name, "eta_c"], zip(th, curve.etas), meta)
        _emit(text, cfg, curve.label if len(sets) > 1 else None)
    return {"curves": curves}


def cmd_noise(cfg: RunConfig, crossover: bool = False) -> dict:
    grid = parse_grid(cfg.grid, cfg.degrees)
    kind = NoiseKind(cfg.noise_kind)
    epsilons = cfg.epsilons or [0.0]
    for e in epsilons:
        if not (0 <= e < 1):
            raise ConfigError("epsilon values must lie in [0, 1)")
    sets = resolve_sets(cfg)
    results = []
    for mset in sets:
        c_n = lhs_bound(mset).c_n
        curves = [noise_curve(mset, e, grid, kind) for e in epsilons]
        minima = [(e, *min_over_theta(mset, e, kind)) for e in epsilons]
        cross = crossover_epsilon(mset) if crossover else None
        meta = {"set": mset.label.value, "noise": kind.value, "reference_c_n": _fmt(c_n), "grid": _grid_label(grid)}
        for e, t, v in minima:
            meta[f"min[eps={e:g}]"] = f"theta_star={_fmt(t)} eta_star={_fmt(v)}"
        if cross is not None:
            meta["crossover_epsilon"] = _fmt(cross)
        name, th = _theta_column(grid, cfg.degrees)
        if cfg.output_format == "json":
            payload = {
                "metadata": {"set": mset.label.value, "noise": kind.value, "reference_c_n": c_n},
                name: th,
                "curves": [{"epsilon": c.epsilon, "eta_noise": c.etas} for c in curves],
                "minima": [{"epsilon": e, "theta_star": t, "eta_star": v} for e, t, v in minima],
                "crossover_epsilon": cross,
            }
            text = json.dumps(payload, default=_json_default, indent=2)
        else:
            header = [name] + [f"eta_noise[eps={e:g}]" for e in epsilons]
            rows = np.column_stack([th] + [c.etas for c in curves])
            text = write_csv(header, rows, meta)
        _emit(text, cfg, mset.label.value if len(sets) > 1 else None)
        results.append({"set": mset.label.value, "curves": curves, "minima": minima, "crossover_epsilon": cross, "c_n": c_n})
    return {"results": results}


def cmd_simulate(cfg: RunConfig, adversary: str = "quantum", strategy: str = "saturating",
                 sigma: float = DEFAULT_SIGMA, bob_eta: float = 1.0, workers: int | None = None) -> dict:
    sets = resolve_sets(cfg)
    if len(sets) != 1:
        raise ConfigError("simulate takes exactly one set")
    mset = sets[0]
    if mset.is_continuum:
        raise ConfigError("cannot simulate the continuum set")
    if cfg.rounds < 1:
        raise ConfigError("--rounds must be positive")
    if not (0 <= cfg.eta <= 1):
        raise ConfigError("--eta must lie in [0, 1]")
    bound = lhs_bound(mset)
    meta = {"set": mset.label.value, "adversary": adversary, "eta": cfg.eta, "sigma_threshold": sigma,
            "bob_eta": bob_eta, "note": ERROR_BAR_NOTE}
    if adversary == "quantum":
        theta = parse_theta(cfg.theta, cfg.degrees)
        kind = NoiseKind(cfg.noise_kind)
        eps = cfg.epsilons[0] if cfg.epsilons else 0.0
        if eps == 0:
            kind = NoiseKind.NONE
        state = TwoQubitState(theta, kind, eps)
        alice = optimal_alice(theta, mset)
        tally = simulate_quantum(state, alice, mset, cfg.eta, cfg.rounds, cfg.seed, bob_eta=bob_eta, workers=workers)
        meta.update(theta=theta, noise=kind.value, epsilon=eps, critical_efficiency=critical_efficiency(theta, mset))
    else:
        if strategy == "saturating":
            strat = saturating_strategy(mset, bound)
        else:
            strat = random_strategy(np.random.default_rng(cfg.seed), len(mset.directions))
        meta["strategy"] = strategy
        tally = simulate_lhs(strat, mset, cfg.rounds, cfg.seed, bob_eta=bob_eta, workers=workers)
    v = verdict(tally, bound, sigma)
    out = tally_to_dict(tally, v)
    out["metadata"] = meta
    _emit(json.dumps(out, indent=2, default=_json_default), cfg)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steering", description="LHS bounds, critical efficiencies and steering-test simulation.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="subcommand", required=True)

    labels = ", ".join(label.value for label in SetLabel if label is not SetLabel.USER)

    def common(sp):
        sp.add_argument("--set", dest="sets", action="append", default=[], metavar="LABEL",
                        help=f"named set, repeatable: {labels}")
        sp.add_argument("--set-file", help="user direction file, one 'x y z' per line")
        sp.add_argument("--output", "-o", help="output path (default stdout)")
        sp.add_argument("--degrees", action="store_true", help="angles on the command line and in output are in degrees")

    sp = sub.add_parser("bounds", help="C_n, C'_n, maximizing patterns and saturating states")
    common(sp)
    sp.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")

    sp = sub.add_parser("eta", help="critical efficiency curve eta_c(theta)")
    common(sp)
    sp.add_argument("--grid", help="start:stop:count in radians (default 0.001:pi/2:200)")
    sp.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("noise", help="noisy critical efficiency curves, minima and crossover")
    common(sp)
    sp.add_argument("--grid")
    sp.add_argument("--epsilon", dest="epsilons", action="append", type=float, default=[])
    sp.add_argument("--kind", dest="noise_kind", choices=("colored", "white"), default="colored")
    sp.add_argument("--crossover", action="store_true", help="also report the colored-noise crossover epsilon")
    sp.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("simulate", help="Monte Carlo steering test, JSON tally and verdict")
    common(sp)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--eta", type=float, default=1.0)
    sp.add_argument("--rounds", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--adversary", choices=("quantum", "lhs"), default="quantum")
    sp.add_argument("--strategy", choices=("saturating", "random"), default="saturating")
    sp.add_argument("--noise", dest="noise_kind", choices=("none", "colored", "white"), default="none")
    sp.add_argument("--epsilon", dest="epsilons", action="append", type=float, default=[])
    sp.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    sp.add_argument("--bob-eta", type=float, default=1.0)
    sp.add_argument("--workers", type=int, help="worker threads (default from STEERING_WORKERS, else 1)")
    return p


def _config_from_args(args) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    cfg = _config_from_args(args)
    try:
        if cfg.subcommand == "bounds":
            cmd_bounds(cfg)
        elif cfg.subcommand == "eta":
            cmd_eta(cfg)
        elif cfg.subcommand == "noise":
            cmd_noise(cfg, crossover=args.crossover)
        else:
            cmd_simulate(cfg, args.adversary, args.strategy, args.sigma, args.bob_eta, args.workers)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SteeringError, ValueError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
