"""Print the four-scenario worked example in both cost modes, plus the pairwise comparisons."""
import argparse

from corridor_equilibrium.instances import worked_example_config
from corridor_equilibrium.scenarios import compare, run_all

PAIRS = [("NS", "SWH"), ("NS", "TLC"), ("SWH", "CS"), ("TLC", "CS")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mode", choices=["merged_formula", "exact", "both"], default="both")
    args = ap.parse_args()
    modes = ["merged_formula", "exact"] if args.mode == "both" else [args.mode]
    cfg = worked_example_config()
    for mode in modes:
        reps = run_all(cfg, mode)
        print(f"== {mode} ==")
        print(f"{'scenario':<9}{'costs':<24}{'rents':<22}{'ratios':<20}{'utility':>8}{'total cost':>12}")
        for lab, r in reps.items():
            print(f"{lab:<9}{str(r.costs.round(6).tolist()):<24}{str(r.rents.round(6).tolist()):<22}"
                  f"{str(r.ratios.round(6).tolist()):<20}{r.utility:>8.4g}{r.total_cost:>12.6g}")
            for w in r.warnings:
                print(f"    warning: {w}")
        for a, b in PAIRS:
            c = compare(reps[a], reps[b])
            status = "all claims hold" if c.all_passed else f"{len(c.failures)} claim(s) fail"
            flag = "  PARADOX" if c.paradox else ""
            print(f"  {a}->{b}: d_utility={c.delta_utility:+.6g} d_TC={c.delta_total_cost:+.6g} {status}{flag}")
        print()


if __name__ == "__main__":
    main()
