"""Write CSV tables for the standard entanglement scenarios.

Outputs (in --outdir):

- ``atom_atom_<initial>_nbar<x>.csv``: atom-atom negativity for |ee> and |eg> starts
- ``atom_field_ee_nbar<x>.csv``: projected atom-field lower bound and witness
- ``mixed_nbar1_lambda<x>.csv``: negativity for thermally mixed atoms
- ``fock_gg_criterion.csv``: threshold and maximum of the ground-start criterion
"""

import argparse
import csv
import time
from pathlib import Path

import numpy as np

from tcthermal.entanglement import fock_gg_maximum, fock_gg_threshold
from tcthermal.scenarios import ScenarioConfig, default_grid, sweep, witness_ee

NBARS = (0.1, 1.0, 10.0)
LAMBDAS = (0.0, 0.05, 0.065)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", type=Path, default=Path("results"))
    parser.add_argument("--tmax", type=float, default=20.0)
    parser.add_argument("--steps", type=int, default=400)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args(argv)
    args.outdir.mkdir(parents=True, exist_ok=True)
    grid = default_grid(args.tmax, args.steps)
    start = time.perf_counter()

    for initial in ("ee", "eg"):
        for nbar in NBARS:
            s = sweep(ScenarioConfig(initial, nbar, t_grid=grid), workers=args.workers)
            write_csv(args.outdir / f"atom_atom_{initial}_nbar{nbar:g}.csv",
                      ["gamma_t", "negativity", "trace_deficit"],
                      zip(s.gamma_t, s.values, s.trace_deficit))

    for nbar in NBARS:
        s = sweep(ScenarioConfig("ee", nbar, t_grid=grid), "atom_field_lower_bound", workers=args.workers)
        wit = np.array([witness_ee(1.0, t, nbar) for t in grid])
        write_csv(args.outdir / f"atom_field_ee_nbar{nbar:g}.csv",
                  ["gamma_t", "lower_bound", "witness"], zip(s.gamma_t, s.values, wit))

    for lam in LAMBDAS:
        s = sweep(ScenarioConfig("mixed", 1.0, lam=lam, t_grid=grid), workers=args.workers)
        write_csv(args.outdir / f"mixed_nbar1_lambda{lam:g}.csv",
                  ["gamma_t", "negativity", "trace_deficit"],
                  zip(s.gamma_t, s.values, s.trace_deficit))

    rows = [(ell, fock_gg_threshold(ell), *fock_gg_maximum(ell)) for ell in range(1, 7)]
    write_csv(args.outdir / "fock_gg_criterion.csv", ["ell", "c_s", "argmax_c", "max_value"], rows)
    print(f"done in {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
