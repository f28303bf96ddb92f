"""Tabulate two-beam designs that trap a pair at a chosen separation.

For each target separation the balance condition fixes the admissible
second wavenumber branches and the intensity ratio that zeroes both
forces. The table flags which branches are physical (ratio > 0) and,
after refinement against the exact forces, which are stable.
"""

import sys

from lightlattice import K_REF, NoSolution, design_wavenumber

# targets are d * k_y in radians; the balance condition runs out of real
# solutions just above 0.955
TARGETS = [0.60, 0.70, 0.80, 0.90]
ZETA = 0.01


def main() -> int:
    print(f"zeta = {ZETA}, band = (0, 4 k_y]")
    print("d*k_y,k_z/k_y,p,physical,stability,residual_f1,residual_f2")
    for theta in TARGETS:
        d = theta / K_REF
        try:
            candidates = design_wavenumber(d, K_REF, zeta=ZETA)
        except NoSolution as exc:
            print(f"{theta:.3f},none,,,{exc},")
            continue
        for c in candidates:
            print(
                f"{theta:.3f},{c.k_z / K_REF:.6f},{c.p:.6f},"
                f"{c.physical},{c.stability},"
                f"{c.residual_f1:.2e},{c.residual_f2:.2e}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
