#!/usr/bin/env python3
"""Qualitative method comparisons: error blow-up delay and orbit closure.

Two experiments with trajectory CSVs for plotting:

 1. contact system, H = q + z: both schemes eventually lose the
    exponentially growing solution; the structure-preserving one later.
    Prints the first time each method's coordinate error exceeds 1.

 2. predator-prey system: over one period the JHI-1 orbit closes to
    within a few percent while RK2 spirals away.
"""

import argparse
import math
from pathlib import Path

import numpy as np

from jhi.cli import write_trajectory_csv
from jhi.errors import JhiError
from jhi.integrator import integrate
from jhi.models import build_model
from jhi.validation import _blowup_time, _exact_linear_contact


def contact_comparison(outdir: Path):
    model = build_model("contact")
    print(f"contact blow-up run: x0={model.default_x0}, span [0,20], ds=0.1")
    for method in ("jhi1", "rk2"):
        try:
            traj = integrate(model, method, (0.0, 20.0), 0.1)
        except JhiError as exc:
            traj = exc.trajectory
        path = outdir / f"contact_{method}.csv"
        write_trajectory_csv(path, traj, model.coord_names)
        t_blow = _blowup_time(model, method, 1.0)
        print(f"  {method}: coordinate error exceeds 1 at s = {t_blow:g}")
    # reference samples of the closed-form solution for plotting
    times = [0.1 * i for i in range(201)]
    lines = ["time,q,p,z"]
    for s in times:
        q, p, z = _exact_linear_contact(model.default_x0, s)
        lines.append(f"{s:.6f},{q:.17g},{p:.17g},{z:.17g}")
    (outdir / "contact_exact.csv").write_text("\n".join(lines) + "\n")


def orbit_comparison(outdir: Path):
    model = build_model("lotka_volterra")
    x0 = np.asarray(model.default_x0)
    fine = integrate(model, "rk4", (0.0, 10.0), 0.001)
    dists = [float(np.linalg.norm(np.asarray(s.x) - x0)) for s in fine.states]
    n = len(dists)
    i = min(range(n // 4, n - 1), key=lambda k: dists[k])
    period = fine.times[i]
    print(f"predator-prey orbit: x0={tuple(x0)}, period ~ {period:.4f}")
    for method in ("jhi1", "rk2"):
        traj = integrate(model, method, (0.0, period), 0.025)
        path = outdir / f"orbit_{method}.csv"
        write_trajectory_csv(path, traj, model.coord_names)
        ret = float(np.linalg.norm(np.asarray(traj.states[-1].x) - x0))
        print(f"  {method}: return distance {ret:.4f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/qualitative")
    args = parser.parse_args()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    contact_comparison(outdir)
    orbit_comparison(outdir)


if __name__ == "__main__":
    main()
