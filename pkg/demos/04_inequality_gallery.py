"""Gallery of harmonic-analysis inequalities on the lattice.

Every estimate the diagnostics rely on is checked here on concrete
fields: frequency-localised norm comparisons, the two interpolation
splits around a sharp cutoff (whose constants never exceed one), decay
of free-flow space-time norms, and the interaction bound along a
nonlinear trajectory.

Run with:  python3 demos/04_inequality_gallery.py
"""

import math

import numpy as np

from nlsbox import (
    EvolutionParams,
    Grid,
    ProjectionBank,
    RadialProfile,
    apply_symbol,
    evolve,
    high_pass,
    i_operator_symbol,
    lebesgue_norm,
    linear_flow,
    low_pass,
    lp_project,
    make_radial_data,
    mass,
    morawetz_quantity,
    sobolev_norm,
)
from nlsbox.norms import MixedNormSpec, mixed_norm


def main() -> None:
    grid = Grid(dim=2, extent=16.0, points=64)
    f = make_radial_data(
        grid, RadialProfile("random_radial_superposition", 1.0, 1.6, seed=11)
    )

    bank = ProjectionBank.for_grid(grid)
    piece = lp_project(f, bank, 0)
    c = lebesgue_norm(piece, 2.0) / sobolev_norm(f, 0.85)
    print(f"frequency-localised L2 against H^0.85: constant {c:.4f}")
    c = lebesgue_norm(piece, 4.0) / (2.0 ** (2 * 0.25) * lebesgue_norm(piece, 2.0))
    print(f"L4 of the same piece against its L2:   constant {c:.4f}")

    cutoff = 6 * grid.freq_step
    low, high = low_pass(f, cutoff), high_pass(f, cutoff)
    smooth = apply_symbol(f, i_operator_symbol(cutoff, 0.85))
    low_c = sobolev_norm(low, 0.5) / math.sqrt(
        sobolev_norm(smooth, 1.0) * lebesgue_norm(low, 2.0)
    )
    high_c = sobolev_norm(high, 0.5) * math.sqrt(cutoff) / sobolev_norm(smooth, 1.0)
    print(f"\ninterpolation splits at cutoff {cutoff:.2f}:")
    print(f"  low side  {low_c:.6f}  (never exceeds 1)")
    print(f"  high side {high_c:.6f}  (never exceeds 1 for s >= 1/2)")

    times = np.linspace(0.0, 1.0, 17)
    flow = [(float(t), linear_flow(f, float(t))) for t in times]
    ratio = mixed_norm(flow, MixedNormSpec(4.0, 4.0, 0.0, 1.0)) / lebesgue_norm(f, 2.0)
    print(f"\nfree-flow space-time L4 over initial L2: {ratio:.4f}")

    datum = make_radial_data(grid, RadialProfile("gaussian", 1.3, 2.0))
    trajectory = evolve(datum, EvolutionParams(2, 1, 0.01, 0.4, sample_every=4))
    lhs = morawetz_quantity(trajectory, 2) ** 2
    rhs = max(mass(g) for _, g in trajectory) * max(
        sobolev_norm(g, 0.5) for _, g in trajectory
    ) ** 2
    print(f"interaction bound along a cubic run: ratio {lhs / rhs:.4f}")


if __name__ == "__main__":
    main()
