"""Damped G(theta) states: GMC (exact) and the convex-roof Fill, linear and log panels.

    python3 scripts/fig2_g_theta_dynamics.py --out results/fig2 [--gmc-only]
"""
import argparse
import math
import pathlib

from tripartite_esd.experiments import (
    Measure,
    Scenario,
    default_time_grid,
    find_esd_onset,
    run_dynamics,
    write_csv,
    write_svg_plot,
)
from tripartite_esd.roof import RoofOptions
from tripartite_esd.states import Kind, StateFamily

COSINES = (1 / math.sqrt(2), 0.88, 0.17)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-max", type=float, default=3.0)
    ap.add_argument("--dt", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gmc-only", action="store_true", help="skip the slow convex-roof curves")
    ap.add_argument("--out", default="results/fig2")
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    grid = default_time_grid(args.t_max, args.dt)
    measures = [Measure.GMC_X_AUTO] if args.gmc_only else [Measure.GMC_X_AUTO, Measure.FILL_ROOF]
    for measure in measures:
        series, labels = [], []
        for cos in COSINES:
            scen = Scenario(StateFamily(Kind.G_THETA, math.acos(cos)), time_grid=grid,
                            measure=measure, roof=RoofOptions(seed=args.seed))
            recs = run_dynamics(scen)
            tag = f"{measure.value}_cos{cos:.4f}"
            write_csv(recs, out / f"{tag}.csv")
            onset = find_esd_onset(scen, records=recs if measure is Measure.FILL_ROOF else None)
            when = "none" if not onset.exists else f"{onset.t_over_tau:.4f}"
            print(f"{measure.value:10s} cos={cos:.4f}  onset={when} ({onset.bound_kind.value})")
            series.append(recs)
            labels.append(f"cos={cos:.4g}")
        for scale in ("linear", "log"):
            write_svg_plot(series, out / f"{measure.value}_{scale}.svg", y_scale=scale, labels=labels)


if __name__ == "__main__":
    main()
