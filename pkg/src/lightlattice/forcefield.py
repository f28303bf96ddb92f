"""Time-averaged radiation forces on chain scatterers.

Exact forces come from the solved field quadruples; the two-splitter
closed-form approximations (small real zeta, error O(zeta^3)) are provided
for analysis and design work. Positive force points toward +x.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import WavenumberMismatch
from .wavecore import FieldSolution, Mode, ScattererChain, solve_fields


@dataclass(frozen=True)
class ForceProfile:
    """Per-scatterer total force and per-mode decomposition."""

    total: tuple[float, ...]
    per_mode: dict[str, tuple[float, ...]]

    @property
    def sup(self) -> float:
        return max((abs(f) for f in self.total), default=0.0)


def forces_from_solution(solution: FieldSolution) -> ForceProfile:
    """F_mode(j) = (|A|^2 + |B|^2 - |C|^2 - |D|^2)/2, summed over modes."""
    n = solution.chain.n
    per_mode = {}
    for mf in solution.fields:
        per_mode[mf.label] = tuple(
            0.5 * (abs(a) ** 2 + abs(b) ** 2 - abs(c) ** 2 - abs(d) ** 2)
            for (a, b, c, d) in mf.quads
        )
    total = tuple(
        sum(per_mode[lab][j] for lab in per_mode) for j in range(n)
    )
    return ForceProfile(total, per_mode)


def forces_exact(chain: ScattererChain, modes: list[Mode]) -> ForceProfile:
    return forces_from_solution(solve_fields(chain, modes))


@dataclass(frozen=True)
class PairForceParams:
    """Parameters of the two-splitter closed forms.

    p is the intensity ratio I_z/I_y of the right-incident to the
    left-incident beam; zeta is the (real) coupling at k_y.
    """

    p: float
    k_y: float
    k_z: float
    zeta: float
    i_y: float = 1.0

    def __post_init__(self):
        if self.p < 0 or self.i_y < 0:
            raise ValueError("intensities must be non-negative")
        if isinstance(self.zeta, complex):
            raise ValueError("closed forms hold for real zeta only")
        if abs(self.zeta) > 0.2:
            warnings.warn(
                f"|zeta| = {abs(self.zeta)} above 0.2; O(zeta^3) truncation is poor",
                stacklevel=3,
            )


def pair_forces_approx(d: float, p: PairForceParams) -> tuple[float, float]:
    """Closed-form pair forces to O(zeta^2), valid for small real zeta.

    The coupling of the z beam scales as (k_z/k_y)*zeta with the fixed
    polarizability.
    """
    z = p.zeta
    zz = (p.k_z / p.k_y) * z
    iy = p.i_y
    iz = p.p * p.i_y
    cy2 = math.cos(d * p.k_y) ** 2
    cz2 = math.cos(d * p.k_z) ** 2
    den_y = 1.0 + 4.0 * z * z * cy2
    den_z = 1.0 + 4.0 * zz * zz * cz2
    f1 = 2.0 * (iy * z * z * (4.0 * cy2 - 1.0) / den_y - iz * zz * zz / den_z)
    f2 = 2.0 * (iy * z * z / den_y - iz * zz * zz * (4.0 * cz2 - 1.0) / den_z)
    return f1, f2


def pair_force_difference(d: float, p: PairForceParams) -> float:
    """F1 - F2 for equal wavenumbers; vanishes exactly at d = (2n+1)pi/(4k)."""
    if p.k_y != p.k_z:
        raise WavenumberMismatch(
            f"equal-wavenumber form called with k_y={p.k_y}, k_z={p.k_z}"
        )
    k = p.k_y
    z = p.zeta
    c = math.cos(d * k)
    return (
        4.0 * z * z * math.cos(2.0 * d * k) * (p.i_y + p.p * p.i_y)
        / (1.0 + 4.0 * z * z * c * c)
    )


@dataclass(frozen=True)
class PairZeroDistances:
    """Approximate distances of vanishing force on each splitter.

    d1 (d2) zeroes the force on the left (right) splitter. A None entry
    means no real solution exists for these parameters; the notes say why.
    """

    d1: float | None
    d2: float | None
    notes: dict


def pair_zero_force_distances(p: PairForceParams, branch: int = -1, n: int = 0) -> PairZeroDistances:
    """Small-zeta closed forms for the single-splitter zero-force distances.

    branch picks the sign in front of the arccos argument (+1 or -1); n the
    period index. Out-of-domain arguments are reported, not raised: the
    corresponding distance does not exist physically.
    """
    if branch not in (-1, 1):
        raise ValueError("branch must be +1 or -1")
    iy = p.i_y
    iz = p.p * p.i_y
    z2 = p.zeta * p.zeta
    num = p.k_y ** 2 * iy + p.k_z ** 2 * iz
    notes: dict = {}

    def solve(k_pref: float, den: float, key: str) -> float | None:
        if den <= 0.0:
            notes[key] = f"denominator {den:.6g} <= 0"
            return None
        arg = branch * math.sqrt(num / den) / (2.0 * k_pref)
        if abs(arg) > 1.0:
            notes[key] = f"arccos argument {arg:.6g} outside [-1, 1]"
            return None
        return (math.acos(arg) + n * math.pi) / k_pref

    d1 = solve(p.k_y, iy + (p.k_z / p.k_y) ** 2 * z2 * (iy - iz), "d1")
    d2 = solve(p.k_z, iz - z2 * (iy - iz), "d2")
    return PairZeroDistances(d1, d2, notes)
