"""Map the zero-force curves of a symmetric three-scatterer arrangement.

Scans the two gaps (d1, d2) of a triplet in two equal counterpropagating
beams and prints the grid of per-scatterer forces. Along the symmetric
diagonal d1 = d2 the middle scatterer is force-free and the outer two
pull with equal and opposite force, so full equilibria live where the
outer force also crosses zero on that diagonal.
"""

import argparse
import math
import sys

from lightlattice import K_REF, Mode, ScattererChain, zero_force_grid


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--zeta", type=float, default=0.05)
    ap.add_argument("--lo", type=float, default=0.05)
    ap.add_argument("--hi", type=float, default=0.95)
    ap.add_argument("--points", type=int, default=41)
    args = ap.parse_args(argv)

    template = ScattererChain((0.0, 0.3, 0.6), args.zeta)
    sqrt2 = math.sqrt(2.0)
    modes = [
        Mode("y", K_REF, drive_left=sqrt2, zeta_scale=1.0),
        Mode("z", K_REF, drive_right=sqrt2, zeta_scale=1.0),
    ]
    step = (args.hi - args.lo) / (args.points - 1)
    values = [args.lo + step * i for i in range(args.points)]
    grid = zero_force_grid(template, modes, values, values)

    print("d1,d2,f1,f2,f3")
    for i, d1 in enumerate(grid.d1):
        for j, d2 in enumerate(grid.d2):
            print(
                f"{d1:.6f},{d2:.6f},{grid.f1[i][j]:.6e},"
                f"{grid.f2[i][j]:.6e},{grid.f3[i][j]:.6e}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
