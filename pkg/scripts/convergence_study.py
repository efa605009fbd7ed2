"""Step-halving study for every finite-difference residual in the package.

Prints one table per identity: step, max residual, observed order.
"""
import argparse
import math

import numpy as np

from ermakov_stefan.ermakov import integrate_oracle, make_params
from ermakov_stefan.involutory import Modulation, modulated_residual
from ermakov_stefan.reciprocal import compatibility_field, image_front
from ermakov_stefan.reports import GridSpec
from ermakov_stefan.similarity import make_solution, pde_residual
from ermakov_stefan.stefan import forward_solve


def table(title, steps, errs):
    print(f"\n{title}")
    print(f"{'step':>12} {'max residual':>14} {'order':>7}")
    prev = None
    for h, e in zip(steps, errs):
        order = "" if prev is None else f"{math.log(prev[1] / e) / math.log(prev[0] / h):7.3f}"
        print(f"{h:12.4g} {e:14.4e} {order:>7}")
        prev = (h, e)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--c1", type=float, default=1.0)
    ap.add_argument("--c2", type=float, default=0.25)
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--gamma", type=float, default=1.0)
    args = ap.parse_args()

    sol = make_solution(args.lam, args.c1, args.c2, args.a)
    problem = forward_solve(sol, args.gamma)

    counts = [100 * 2 ** k for k in range(6)]
    errs = [integrate_oracle(sol.params, -3.0, 3.0, n, extrapolate=False) for n in counts]
    table("RK4 oracle on xi in [-3, 3], step = interval / n", [6.0 / n for n in counts], errs)

    grid = GridSpec(0.0, 1.0, 0.0, 10.0, 50, 50)
    steps = [4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3]
    table("PDE, central differences", steps,
          [pde_residual(sol, grid, "finite-difference", h, gamma=args.gamma).max_abs for h in steps])

    s = image_front(problem)
    errs, hs = [], []
    for st in (1, 2, 4, 8):
        n = 10 * st + 1
        _, _, res, _ = compatibility_field(problem, GridSpec(0.2 * s, 0.6 * s, 1.0, 1.4, n, n))
        xi = np.arange(2 * st, 8 * st + 1, st) - 2
        ti = np.arange(st, 9 * st + 1, st) - 1
        errs.append(float(np.max(np.abs(res[np.ix_(ti, xi)]))))
        hs.append(0.4 * s / (n - 1))
    table("reciprocal compatibility, shared nodes", hs, errs)

    mod = Modulation.power(0.5, a=1.0)
    mgrid = GridSpec(0.1, 0.9, 0.1, 2.0, 30, 30)
    steps = [4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3, 1e-3]
    table("modulated equation, rho = (t+1)^(1/2)", steps,
          [modulated_residual(sol, mod, mgrid, h).max_abs for h in steps])


if __name__ == "__main__":
    main()
