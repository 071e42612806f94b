"""Command-line entry point: ``tripartite-esd <subcommand> ...``.

Exit status is 0 on success, 2 on bad arguments (argparse's own convention)
and 3 when a numerical consistency check fails.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from typing import Dict, Optional

from .experiments import (
    DynamicsRecord,
    Measure,
    Scenario,
    default_time_grid,
    evolve,
    find_esd_onset,
    ghz_w_scan,
    run_dynamics,
    write_csv,
    write_svg_plot,
)
from .measures import esd_onset_g_theta, fill_pure, gmc_g_theta, gmc_x
from .roof import BoundKind, RoofOptions
from .states import Kind, StateFamily, make_state
from .tensor import NumericalConsistencyError

EXIT_USAGE = 2
EXIT_NUMERIC = 3

_ROOF_FIELDS = {
    f.name: f.type for f in dataclasses.fields(RoofOptions) if f.name != "symmetry_generators"
}


class UsageError(Exception):
    pass


def parse_theta(text: str) -> float:
    """Radians, or ``cos=C`` for the angle with that cosine."""
    text = text.strip()
    try:
        if text.startswith("cos="):
            return _theta_from_cos(float(text[4:]))
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad angle {text!r}: {exc}") from None


def _theta_from_cos(c: float) -> float:
    if not -1.0 <= c <= 1.0:
        raise ValueError("cos(theta) must lie in [-1, 1]")
    return math.acos(c)


def _cos_arg(text: str) -> float:
    try:
        return _theta_from_cos(float(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def read_config(path: str) -> Dict[str, object]:
    """``key=value`` lines for RoofOptions; ``#`` starts a comment."""
    out: Dict[str, object] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _ROOF_FIELDS:
                raise UsageError(f"{path}:{lineno}: unknown option {key!r}")
            out[key] = _coerce(key, value)
    return out


def _coerce(key: str, value: str):
    kind = str(_ROOF_FIELDS[key])
    try:
        if "bool" in kind:
            if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(value)
            return value.lower() in ("true", "1", "yes")
        if "int" in kind:
            return int(value)
        if "float" in kind:
            return float(value)
    except ValueError:
        raise UsageError(f"bad value for {key}: {value!r}") from None
    return value


def build_roof(args) -> RoofOptions:
    settings = read_config(args.config) if args.config else {}
    for key in ("seed", "outer_iters", "inner_restarts"):
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    try:
        return RoofOptions(**settings)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _print_records(records) -> None:
    print("t_over_tau,value,bound_kind,converged_fraction")
    for r in records:
        print(f"{r.t_over_tau:.12g},{r.value:.12g},{r.bound_kind.value},{r.converged_fraction:.12g}")


def cmd_fill_pure(args) -> None:
    fam = StateFamily(Kind(args.family), args.theta)
    print(f"{fill_pure(make_state(fam)):.12g}")


def cmd_gmc(args) -> None:
    theta = args.cos_theta
    rho = evolve(make_state(StateFamily(Kind.G_THETA, theta)), args.t_over_tau)
    value = gmc_x(rho)
    if abs(value - gmc_g_theta(theta, args.t_over_tau)) > 1e-10:
        raise NumericalConsistencyError("X-form GMC disagrees with its closed form")
    print(f"{value:.12g}")


def _scenario(args, roof: Optional[RoofOptions] = None) -> Scenario:
    return Scenario(
        family=StateFamily(Kind(args.family), args.cos_theta),
        time_grid=default_time_grid(args.t_max, args.dt),
        measure=Measure(args.measure),
        roof=roof or RoofOptions(),
    )


def cmd_dynamics(args) -> None:
    scen = _scenario(args, build_roof(args))
    records = run_dynamics(scen)
    if args.csv:
        write_csv(records, args.csv)
    if args.svg:
        write_svg_plot(records, args.svg, y_scale="log" if args.log_scale else "linear",
                       labels=[f"{args.family} cos={math.cos(args.cos_theta):.4g}"])
    _print_records(records)


def cmd_esd_onset(args) -> None:
    if args.analytic:
        if args.family != Kind.G_THETA.value:
            raise UsageError("--analytic is only available for the g-theta family")
        t = esd_onset_g_theta(args.cos_theta)
        kind = BoundKind.EXACT_ANALYTIC
    else:
        scen = _scenario(args, build_roof(args))
        onset = find_esd_onset(scen, zero_tol=args.zero_tol)
        t, kind = onset.t_over_tau, onset.bound_kind
    print("none" if t is None else f"{t:.10g}", kind.value)


def cmd_ghz_w_scan(args) -> None:
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    grid = [i / (args.points - 1) for i in range(args.points)]
    rows = ghz_w_scan(grid, build_roof(args))
    print("s,numeric,analytic")
    for s, num, ana in rows:
        print(f"{s:.12g},{num:.12g},{ana:.12g}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write("s,numeric,analytic\n")
            for s, num, ana in rows:
                fh.write(f"{s:.12g},{num:.12g},{ana:.12g}\n")
    if args.svg:
        num = [DynamicsRecord(s, v, BoundKind.CERTIFIED_LOWER_BOUND, 1.0) for s, v, _ in rows]
        ana = [DynamicsRecord(s, a, BoundKind.EXACT_ANALYTIC, 1.0) for s, _, a in rows]
        write_svg_plot([ana, num], args.svg, labels=["analytic", "numeric"], title="Fill of s G + (1-s) W")


def _add_roof_flags(p) -> None:
    p.add_argument("--config", help="key=value file with RoofOptions fields")
    p.add_argument("--seed", type=int)
    p.add_argument("--outer-iters", dest="outer_iters", type=int)
    p.add_argument("--inner-restarts", dest="inner_restarts", type=int)


def _add_grid_flags(p) -> None:
    p.add_argument("--measure", choices=[m.value for m in Measure], default=Measure.FILL_ROOF.value)
    p.add_argument("--t-max", dest="t_max", type=float, default=3.0)
    p.add_argument("--dt", type=float, default=0.05)


def build_parser() -> argparse.ArgumentParser:
    families = [k.value for k in Kind]
    ap = argparse.ArgumentParser(prog="tripartite-esd", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fill-pure", help="Fill of a pure family member")
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--theta", type=parse_theta, default=0.0, help="radians, or cos=C")
    p.set_defaults(func=cmd_fill_pure)

    p = sub.add_parser("dynamics", help="measure along the damped trajectory")
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--cos-theta", dest="cos_theta", type=_cos_arg, default="1")
    _add_grid_flags(p)
    _add_roof_flags(p)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--log-scale", dest="log_scale", action="store_true")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("esd-onset", help="time at which genuine entanglement vanishes")
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--cos-theta", dest="cos_theta", type=_cos_arg, required=True)
    p.add_argument("--analytic", action="store_true", help="closed-form inversion (g-theta only)")
    p.add_argument("--zero-tol", dest="zero_tol", type=float, default=1e-4)
    _add_grid_flags(p)
    _add_roof_flags(p)
    p.set_defaults(func=cmd_esd_onset)

    p = sub.add_parser("ghz-w-scan", help="Fill of the GHZ/W mixture against the analytic curve")
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--csv")
    p.add_argument("--svg")
    _add_roof_flags(p)
    p.set_defaults(func=cmd_ghz_w_scan)

    p = sub.add_parser("gmc", help="GMC of the damped g-theta state")
    p.add_argument("--family", choices=[Kind.G_THETA.value], default=Kind.G_THETA.value)
    p.add_argument("--cos-theta", dest="cos_theta", type=_cos_arg, required=True)
    p.add_argument("--t-over-tau", dest="t_over_tau", type=float, required=True)
    p.set_defaults(func=cmd_gmc)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except NumericalConsistencyError as exc:
        print(f"numerical consistency error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
