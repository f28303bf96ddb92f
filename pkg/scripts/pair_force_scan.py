"""Scan pair forces over distance: exact transfer-matrix vs closed forms.

Writes a CSV to stdout with the exact forces, the small-coupling closed
forms, and the residual between them. The residual should shrink as
zeta^3 when you lower --zeta.
"""

import argparse
import math
import sys

from lightlattice import (
    K_REF,
    Mode,
    PairForceParams,
    ScattererChain,
    forces_exact,
    pair_forces_approx,
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--zeta", type=float, default=0.05)
    ap.add_argument("--ratio", type=float, default=1.0, help="I_z / I_y")
    ap.add_argument("--k-z", type=float, default=1.0, help="k_z in units of k_y")
    ap.add_argument("--points", type=int, default=181)
    args = ap.parse_args(argv)

    k_y = K_REF
    k_z = args.k_z * K_REF
    params = PairForceParams(p=args.ratio, k_y=k_y, k_z=k_z, zeta=args.zeta)
    modes = [
        Mode("y", k_y, drive_left=math.sqrt(2.0), zeta_scale=1.0),
        Mode("z", k_z, drive_right=math.sqrt(2.0 * args.ratio), zeta_scale=k_z / k_y),
    ]

    print("d,f1_exact,f2_exact,f1_approx,f2_approx,resid_1,resid_2")
    for i in range(args.points):
        d = 0.02 + (0.96 - 0.02) * i / (args.points - 1)
        chain = ScattererChain((0.0, d), args.zeta)
        exact = forces_exact(chain, modes)
        a1, a2 = pair_forces_approx(d, params)
        print(
            f"{d:.6f},{exact.total[0]:.9e},{exact.total[1]:.9e},"
            f"{a1:.9e},{a2:.9e},"
            f"{exact.total[0] - a1:.3e},{exact.total[1] - a2:.3e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
