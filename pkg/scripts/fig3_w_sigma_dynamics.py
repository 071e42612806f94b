"""Convex-roof Fill along damped W(theta), Wbar(theta) and Sigma(theta) trajectories.

    python3 scripts/fig3_w_sigma_dynamics.py --out results/fig3 --dt 0.1
"""
import argparse
import math
import pathlib

from tripartite_esd.experiments import Scenario, default_time_grid, find_esd_onset, run_dynamics, write_csv, write_svg_plot
from tripartite_esd.roof import RoofOptions
from tripartite_esd.states import Kind, StateFamily

PANELS = {
    Kind.W_THETA: (1 / math.sqrt(3), 0.9, 0.1),
    Kind.WBAR_THETA: (1 / math.sqrt(3), 0.9, 0.1),
    Kind.SIGMA_THETA: (math.sqrt(0.9), math.sqrt(0.5), math.sqrt(0.1)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-max", type=float, default=3.0)
    ap.add_argument("--dt", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--families", nargs="*", default=[k.value for k in PANELS])
    ap.add_argument("--out", default="results/fig3")
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    grid = default_time_grid(args.t_max, args.dt)
    for name in args.families:
        kind = Kind(name)
        series, labels = [], []
        for cos in PANELS[kind]:
            scen = Scenario(StateFamily(kind, math.acos(cos)), time_grid=grid, roof=RoofOptions(seed=args.seed))
            recs = run_dynamics(scen)
            write_csv(recs, out / f"{kind.value}_cos{cos:.4f}.csv")
            onset = find_esd_onset(scen, records=recs)
            when = "none" if not onset.exists else f"{onset.t_over_tau:.2f}"
            n_out = sum(r.outlier for r in recs)
            print(f"{kind.value:12s} cos={cos:.4f}  heuristic onset={when}  outliers={n_out}")
            series.append(recs)
            labels.append(f"cos={cos:.4g}")
        for scale in ("linear", "log"):
            write_svg_plot(series, out / f"{kind.value}_{scale}.svg", y_scale=scale, labels=labels)


if __name__ == "__main__":
    main()
