"""Check how the atom-atom negativity converges as the thermal tail tolerance shrinks."""

import argparse

import numpy as np

from tcthermal.scenarios import ScenarioConfig, default_grid, sweep


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--initial", default="eg", choices=["ee", "eg", "gg"])
    parser.add_argument("--nbar", type=float, default=10.0)
    parser.add_argument("--steps", type=int, default=200)
    args = parser.parse_args(argv)

    grid = default_grid(20.0, args.steps)
    ref = sweep(ScenarioConfig(args.initial, args.nbar, t_grid=grid, epsilon=1e-14))
    print("epsilon,cutoff,tail_mass,max_abs_diff_vs_1e-14")
    for eps in (1e-4, 1e-6, 1e-8, 1e-10, 1e-12):
        s = sweep(ScenarioConfig(args.initial, args.nbar, t_grid=grid, epsilon=eps))
        diff = np.abs(s.values - ref.values).max()
        print(f"{eps:g},{s.truncation.cutoff},{s.truncation.tail_mass:.3e},{diff:.3e}")


if __name__ == "__main__":
    main()
