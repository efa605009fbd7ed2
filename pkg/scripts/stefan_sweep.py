"""Random sweep over (lambda, c1, c2, a, gamma): derived boundary relations and gamma round trips.

Writes one CSV row per draw and prints the worst cases.
"""
import argparse
from pathlib import Path

import numpy as np

from ermakov_stefan.output import write_csv
from ermakov_stefan.similarity import make_solution
from ermakov_stefan.stefan import boundary_residuals, forward_solve, front_value, inverse_solve


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--draws", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("out/stefan_sweep.csv"))
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cols = {k: [] for k in ("lam", "c1", "c2", "a", "gamma", "P_m", "lp_rel", "H_0", "bc_max", "round_trip")}
    times = np.linspace(0.0, 10.0, 20)
    for _ in range(args.draws):
        lam, c1, c2, a, g = rng.uniform(0.2, 5.0), rng.uniform(0.2, 5.0), rng.uniform(-2, 2), rng.uniform(0.2, 3), rng.uniform(0.3, 3)
        sol = make_solution(lam, c1, c2, a)
        pr = forward_solve(sol, g)
        back = inverse_solve(sol, front_value(sol, g), (0.9 * g, 1.1 * g))
        row = dict(lam=lam, c1=c1, c2=c2, a=a, gamma=g, P_m=pr.P_m,
                   lp_rel=abs(pr.L_m - pr.P_m) / abs(pr.P_m), H_0=abs(pr.H_0),
                   bc_max=max(r.max_abs for r in boundary_residuals(pr, times)), round_trip=abs(back - g))
        for k, v in row.items():
            cols[k].append(v)

    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(args.out, list(cols), [np.array(v) for v in cols.values()])
    for k in ("lp_rel", "H_0", "bc_max", "round_trip"):
        print(f"{k:>10}: worst {max(cols[k]):.3e}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
