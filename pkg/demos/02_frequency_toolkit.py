"""Tour of the frequency-side toolkit.

Shows the unitary transform pair, dyadic frequency projections and
their telescoping, the smoothing multiplier that the almost-conservation
studies are built on, and the grid-exact rescaling that trades box size
against amplitude while moving Sobolev norms by exact powers of two.

Run with:  python3 demos/02_frequency_toolkit.py
"""

import numpy as np

from nlsbox import (
    Grid,
    ProjectionBank,
    RadialProfile,
    apply_symbol,
    i_operator_symbol,
    lebesgue_norm,
    lp_project,
    make_radial_data,
    rescale,
    sobolev_norm,
)


def main() -> None:
    grid = Grid(dim=2, extent=16.0, points=64)
    f = make_radial_data(grid, RadialProfile("gaussian", amplitude=2.0, width=1.5))

    spectral = f.as_frequency()
    back = spectral.as_physical()
    print(f"transform round trip error: {np.abs(back.samples - f.samples).max():.2e}")
    print(f"Plancherel: |u|_2 = {lebesgue_norm(f, 2):.8f} both ways "
          f"(freq side {lebesgue_norm(spectral, 2):.8f})")

    bank = ProjectionBank.for_grid(grid)
    print(f"\ndyadic bank covers scales 2^{bank.j_min} .. 2^{bank.j_max}")
    pieces = [lp_project(f, bank, j) for j in range(bank.j_min, bank.j_max + 1)]
    print("  j   piece mass fraction")
    total = lebesgue_norm(f, 2) ** 2
    for j, piece in zip(range(bank.j_min, bank.j_max + 1), pieces):
        frac = lebesgue_norm(piece, 2) ** 2 / total
        bar = "#" * int(50 * frac)
        print(f"{j:3d}   {frac:8.5f} {bar}")

    cutoff = 4 * grid.freq_step
    smooth = apply_symbol(f, i_operator_symbol(cutoff, 0.85))
    print(f"\nsmoothing multiplier at cutoff {cutoff:.3f}:")
    print(f"  H^1 norm before {sobolev_norm(f, 1.0):.6f}, after {sobolev_norm(smooth, 1.0):.6f}")

    grid3 = Grid(dim=3, extent=16.0, points=32)
    g = make_radial_data(grid3, RadialProfile("gaussian", amplitude=1.0, width=2.0))
    shrunk = rescale(g, 2.0, k=1)
    print("\ngrid-exact rescale by 2 in three dimensions:")
    for s, label in ((0.5, "H^1/2"), (1.0, "H^1  "), (0.0, "L^2  ")):
        before = sobolev_norm(g, s) if s else lebesgue_norm(g, 2)
        after = sobolev_norm(shrunk, s) if s else lebesgue_norm(shrunk, 2)
        print(f"  {label}: ratio {after / before:.12f}")


if __name__ == "__main__":
    main()
