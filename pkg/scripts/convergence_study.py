"""Discretization error of the min-cost-flow optimum and the queue simulation as the time step shrinks."""
import argparse

import numpy as np

from corridor_equilibrium.instances import worked_example_config, random_instance
from corridor_equilibrium.oracle import lp_st_so, queue_sim
from corridor_equilibrium.scenarios import run_all
from corridor_equilibrium.short_term import so_schedule_cost


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=None, help="random instance instead of the worked example")
    args = ap.parse_args()
    cfg = worked_example_config() if args.seed is None else random_instance(args.seed)
    reps = run_all(cfg, "exact")

    print("min-cost flow: relative objective error / max dual error")
    for lab, r in reps.items():
        so = r.short_term
        target = so_schedule_cost(so)
        cells = []
        for dt in (0.1, 0.05, 0.025, 0.0125):
            v = lp_st_so(so.corridor, so.schedule, so.demands, dt, reference=so)
            cells.append(f"dt={dt:<7g}{abs(v.objective - target) / max(target, 1e-12):.2e}/{v.max_dual_deviation:.2e}")
        print(f"  {lab:<4}" + "  ".join(cells))

    print("queue simulation: max delay deviation, fitted order")
    dts = np.array([0.04, 0.02, 0.01, 0.005])
    for lab, r in reps.items():
        errs = np.array([queue_sim(r.equilibrium, dt).max_delay_deviation for dt in dts])
        order = np.polyfit(np.log(dts), np.log(np.maximum(errs, 1e-15)), 1)[0] if errs[0] > 1e-12 else float("nan")
        print(f"  {lab:<4}" + "  ".join(f"{e:.2e}" for e in errs) + f"   order {order:.2f}")


if __name__ == "__main__":
    main()
