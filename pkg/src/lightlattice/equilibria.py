"""Equilibrium search, stability classification, and design helpers.

Equilibria are roots of the per-scatterer force map. Stability is judged
from the eigenvalues of the force Jacobian: all real parts below -1e-9 is
stable, any above +1e-9 unstable, otherwise marginal. For scenarios that
are invariant under rigid translation the Jacobian is projected onto the
complement of the uniform shift before classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InconsistentLinearization,
    NoConvergence,
    NoSolution,
    UnstableMode,
)
from .forcefield import forces_exact
from .wavecore import Mode, ScattererChain

_EIG_TOL = 1e-9


@dataclass(frozen=True)
class EquilibriumReport:
    positions: tuple[float, ...]
    residual: float
    jacobian: np.ndarray
    eigenvalues: np.ndarray
    classification: str
    com_force: float
    translation_projected: bool
    iterations: int


def _classify(eigenvalues: np.ndarray) -> str:
    reals = eigenvalues.real
    if reals.size == 0:
        return "marginal"
    if np.max(reals) < -_EIG_TOL:
        return "stable"
    if np.max(reals) > _EIG_TOL:
        return "unstable"
    return "marginal"


def force_jacobian(
    chain: ScattererChain, modes: list[Mode], h: float = 1e-7
) -> np.ndarray:
    """Central-difference Jacobian dF_i/dx_j of the exact forces."""
    x = list(chain.positions)
    n = len(x)
    jac = np.empty((n, n))
    for j in range(n):
        xp = list(x)
        xm = list(x)
        xp[j] += h
        xm[j] -= h
        fp = forces_exact(chain.with_positions(tuple(xp)), modes).total
        fm = forces_exact(chain.with_positions(tuple(xm)), modes).total
        jac[:, j] = [(a - b) / (2.0 * h) for a, b in zip(fp, fm)]
    return jac


def _translation_complement(n: int) -> np.ndarray:
    # orthonormal basis of the hyperplane orthogonal to the uniform shift
    shift = np.ones((n, 1)) / math.sqrt(n)
    q, _ = np.linalg.qr(np.eye(n) - shift @ shift.T)
    # drop the column aligned with the shift (numerically near-zero norm in
    # the projected matrix); keep the n-1 best-conditioned columns
    proj = q.T @ shift
    order = np.argsort(np.abs(proj[:, 0]))
    return q[:, order[: n - 1]]


def find_equilibrium(
    chain: ScattererChain,
    modes: list[Mode],
    relative_only: bool = False,
    tol: float = 1e-12,
    max_iter: int = 80,
    fd_step: float = 1e-7,
) -> EquilibriumReport:
    """Damped Newton search starting from the chain's positions.

    relative_only solves for the gaps with the first position held fixed,
    zeroing neighbour force differences instead of the forces themselves;
    use it for translation-invariant scenarios that drift as a whole.
    Raises NoConvergence with the best iterate attached.
    """
    n = chain.n
    if n == 0:
        raise ValueError("cannot search an empty chain")
    x1 = chain.positions[0]

    if relative_only and n == 1:
        raise ValueError("relative_only needs at least two scatterers")

    def positions_from(u: np.ndarray) -> tuple[float, ...]:
        if not relative_only:
            return tuple(u)
        out = [x1]
        for g in u:
            out.append(out[-1] + g)
        return tuple(out)

    def residual_vec(u: np.ndarray) -> np.ndarray:
        f = forces_exact(chain.with_positions(positions_from(u)), modes).total
        if relative_only:
            return np.array([f[j + 1] - f[j] for j in range(n - 1)])
        return np.array(f)

    if relative_only:
        u = np.array([chain.positions[j + 1] - chain.positions[j] for j in range(n - 1)])
    else:
        u = np.array(chain.positions)

    def ordered(u_try: np.ndarray) -> bool:
        pos = positions_from(u_try)
        return all(pos[j + 1] - pos[j] > 1e-6 for j in range(n - 1))

    r = residual_vec(u)
    merit = float(np.max(np.abs(r))) if r.size else 0.0
    best_u, best_merit = u.copy(), merit
    iterations = 0
    while merit >= tol:
        if iterations >= max_iter:
            raise NoConvergence(
                f"no convergence below {tol:g} in {max_iter} iterations "
                f"(best sup-residual {best_merit:.3e})",
                best_positions=positions_from(best_u),
                best_residual=best_merit,
            )
        iterations += 1
        m = len(u)
        jac = np.empty((m, m))
        for j in range(m):
            up = u.copy()
            um = u.copy()
            up[j] += fd_step
            um[j] -= fd_step
            jac[:, j] = (residual_vec(up) - residual_vec(um)) / (2.0 * fd_step)
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        lam = 1.0
        accepted = False
        for _ in range(10):
            u_try = u + lam * step
            if ordered(u_try):
                r_try = residual_vec(u_try)
                merit_try = float(np.max(np.abs(r_try)))
                if merit_try < merit * (1.0 - 1e-4 * lam) or merit_try < tol:
                    u, r, merit = u_try, r_try, merit_try
                    accepted = True
                    break
            lam *= 0.5
        if merit < best_merit:
            best_u, best_merit = u.copy(), merit
        if not accepted:
            raise NoConvergence(
                f"Newton stalled at sup-residual {merit:.3e} after {iterations} iterations",
                best_positions=positions_from(best_u),
                best_residual=best_merit,
            )

    positions = positions_from(u)
    solution = chain.with_positions(positions)
    forces = forces_exact(solution, modes).total
    com_force = sum(forces) / n
    jac_full = force_jacobian(solution, modes, h=fd_step)
    if relative_only:
        q = _translation_complement(n)
        reduced = q.T @ jac_full @ q
        eigs = np.linalg.eigvals(reduced)
    else:
        eigs = np.linalg.eigvals(jac_full)
    order = np.argsort(eigs.real)[::-1]
    eigs = eigs[order]
    return EquilibriumReport(
        positions=positions,
        residual=merit,
        jacobian=jac_full,
        eigenvalues=eigs,
        classification=_classify(eigs),
        com_force=com_force,
        translation_projected=relative_only,
        iterations=iterations,
    )


def pair_stationary_distances(k: float, n_max: int) -> list[tuple[float, str]]:
    """Stationary pair separations d = (2n+1) pi / (4k), n = 0..n_max.

    Odd n are stable, even n unstable (small-zeta symmetric drive).
    """
    if k <= 0:
        raise ValueError("wavenumber must be positive")
    out = []
    for n in range(n_max + 1):
        d = (2 * n + 1) * math.pi / (4.0 * k)
        out.append((d, "stable" if n % 2 == 1 else "unstable"))
    return out


@dataclass(frozen=True)
class DesignRatios:
    p1: float
    p2: float
    p1_physical: bool
    p2_physical: bool


def design_intensity_ratio(d: float, k_y: float, k_z: float, zeta: float) -> DesignRatios:
    """Intensity ratios p = I_z/I_y that zero F1 (p1) or F2 (p2) at distance d.

    Small-zeta closed forms; each force is linear in p so the ratio is exact
    within the approximation. Non-physical values (negative or infinite) are
    returned flagged, never raised.
    """
    cy2 = math.cos(d * k_y) ** 2
    cz2 = math.cos(d * k_z) ** 2
    shared = (k_y ** 2 + 4.0 * k_z ** 2 * zeta ** 2 * cz2) / (
        k_z ** 2 * (1.0 + 4.0 * zeta ** 2 * cy2)
    )
    p1 = (4.0 * cy2 - 1.0) * shared
    den2 = 4.0 * cz2 - 1.0
    p2 = shared / den2 if den2 != 0.0 else math.inf
    return DesignRatios(
        p1=p1,
        p2=p2,
        p1_physical=math.isfinite(p1) and p1 > 0.0,
        p2_physical=math.isfinite(p2) and p2 > 0.0,
    )


@dataclass(frozen=True)
class DesignCandidate:
    k_z: float
    p: float
    p1: float
    p2: float
    physical: bool
    residual_f1: float
    residual_f2: float
    stability: str
    refined: bool


def _pair_design_forces(
    d: float, k_y: float, k_z: float, zeta: float, p: float, i_y: float
) -> tuple[float, float]:
    chain = ScattererChain((0.0, d), zeta)
    i_z = p * i_y
    modes = [
        Mode("y", k_y, drive_left=math.sqrt(2.0 * i_y), zeta_scale=1.0),
        Mode("z", k_z, drive_right=math.sqrt(2.0 * abs(i_z)), zeta_scale=k_z / k_y),
    ]
    f = forces_exact(chain, modes).total
    return f[0], f[1]


def _pair_design_stability(d, k_y, k_z, zeta, p, i_y) -> str:
    h = 1e-7
    jac = np.empty((2, 2))
    for j in range(2):
        dp = [0.0, 0.0]
        dp[j] = h
        fp = _pair_design_forces_at(d, k_y, k_z, zeta, p, i_y, dp)
        dp[j] = -h
        fm = _pair_design_forces_at(d, k_y, k_z, zeta, p, i_y, dp)
        jac[:, j] = [(a - b) / (2.0 * h) for a, b in zip(fp, fm)]
    # counter-propagating single-sided drives: rigid translation is a
    # symmetry, classify the gap coordinate only
    q = np.array([[-1.0], [1.0]]) / math.sqrt(2.0)
    lam = float((q.T @ jac @ q)[0, 0])
    if lam < -_EIG_TOL:
        return "stable"
    if lam > _EIG_TOL:
        return "unstable"
    return "marginal"


def _pair_design_forces_at(d, k_y, k_z, zeta, p, i_y, offsets):
    chain = ScattererChain((0.0 + offsets[0], d + offsets[1]), zeta)
    modes = [
        Mode("y", k_y, drive_left=math.sqrt(2.0 * i_y), zeta_scale=1.0),
        Mode("z", k_z, drive_right=math.sqrt(2.0 * p * i_y), zeta_scale=k_z / k_y),
    ]
    f = forces_exact(chain, modes).total
    return f[0], f[1]


def design_wavenumber(
    d: float,
    k_y: float,
    zeta: float = 0.0,
    band: tuple[float, float] | None = None,
    i_y: float = 1.0,
    refine: bool = True,
) -> list[DesignCandidate]:
    """Wavenumbers k_z at which both pair forces can vanish at distance d.

    The balance condition (2cos(2dk_y)+1)(2cos(2dk_z)+1) = 1 fixes the
    admissible cos^2(dk_z); all branches inside the band are enumerated,
    each paired with its intensity ratio. With refine=True every candidate
    is polished against the exact forces (Newton in (p, k_z) at fixed d).
    Requires cos(2dk_y) >= -1/3; otherwise NoSolution carries the radicand.
    """
    if d <= 0 or k_y <= 0:
        raise ValueError("d and k_y must be positive")
    if band is None:
        band = (1e-9, 4.0 * k_y)
    c2 = math.cos(2.0 * d * k_y)
    lead = 1.0 + 2.0 * c2
    if lead <= 0.0:
        raise NoSolution(
            f"cos(2 d k_y) = {c2:.6g} leaves no real balance point", radicand=lead
        )
    s2 = (1.0 + c2) / (2.0 * lead)
    if s2 > 1.0 + 1e-12:
        raise NoSolution(
            f"squared cosine {s2:.6g} exceeds 1", radicand=s2
        )
    s = math.sqrt(min(s2, 1.0))
    thetas = set()
    base = [math.acos(min(1.0, s)), math.acos(max(-1.0, -s))]
    n = 0
    while True:
        added = False
        for b in base:
            th = b + n * math.pi
            if th <= 0:
                continue
            if th / d > band[1]:
                continue
            thetas.add(round(th, 12))
            added = True
        if not added and n * math.pi / d > band[1]:
            break
        n += 1
    candidates = []
    for th in sorted(thetas):
        k_z = th / d
        if not (band[0] <= k_z <= band[1]) or k_z < 1e-9:
            continue
        ratios = design_intensity_ratio(d, k_y, k_z, zeta)
        p = ratios.p1
        physical = ratios.p1_physical and ratios.p2_physical
        refined = False
        if physical and refine:
            p, k_z, refined = _refine_design(d, k_y, k_z, zeta, p, i_y, band)
        if physical:
            f1, f2 = _pair_design_forces(d, k_y, k_z, zeta, p, i_y)
            stab = _pair_design_stability(d, k_y, k_z, zeta, p, i_y)
        else:
            f1 = f2 = math.nan
            stab = "n/a"
        candidates.append(
            DesignCandidate(
                k_z=k_z,
                p=p,
                p1=ratios.p1,
                p2=ratios.p2,
                physical=physical,
                residual_f1=abs(f1),
                residual_f2=abs(f2),
                stability=stab,
                refined=refined,
            )
        )
    return candidates


def _refine_design(d, k_y, k_z0, zeta, p0, i_y, band):
    # Newton in (p, k_z) on the exact pair forces at fixed d
    p, k_z = p0, k_z0
    h_p = 1e-7 * max(1.0, abs(p0))
    h_k = 1e-7 * k_y
    for _ in range(25):
        f1, f2 = _pair_design_forces(d, k_y, k_z, zeta, p, i_y)
        if max(abs(f1), abs(f2)) < 1e-13 * i_y:
            return p, k_z, True
        f1p, f2p = _pair_design_forces(d, k_y, k_z, zeta, p + h_p, i_y)
        f1m, f2m = _pair_design_forces(d, k_y, k_z, zeta, p - h_p, i_y)
        f1k, f2k = _pair_design_forces(d, k_y, k_z + h_k, zeta, p, i_y)
        f1l, f2l = _pair_design_forces(d, k_y, k_z - h_k, zeta, p, i_y)
        jac = np.array(
            [
                [(f1p - f1m) / (2 * h_p), (f1k - f1l) / (2 * h_k)],
                [(f2p - f2m) / (2 * h_p), (f2k - f2l) / (2 * h_k)],
            ]
        )
        try:
            step = np.linalg.solve(jac, [-f1, -f2])
        except np.linalg.LinAlgError:
            return p0, k_z0, False
        p_new = p + step[0]
        k_new = k_z + step[1]
        if p_new <= 0 or not (band[0] <= k_new <= band[1]):
            return p0, k_z0, False
        p, k_z = p_new, k_new
    f1, f2 = _pair_design_forces(d, k_y, k_z, zeta, p, i_y)
    if max(abs(f1), abs(f2)) < 1e-10 * i_y:
        return p, k_z, True
    return p0, k_z0, False


@dataclass(frozen=True)
class LinearizedModel:
    """Two-splitter lattice linearization: spring K, couplings, drive.

    Displacement equations (mass m, Delta = dx2 - dx1):

        m ddx1 = -K dx1 + kappa1 (dx2 - dx1) + F_ext
        m ddx2 = -K dx2 - kappa2 (dx2 - dx1) + F_ext
    """

    k_spring: float
    kappa1: float
    kappa2: float
    f_ext: float
    mass: float
    h: float
    constants: dict = field(default_factory=dict)
    identities: dict = field(default_factory=dict)

    @property
    def omega1(self) -> float | None:
        if self.k_spring <= 0:
            return None
        return math.sqrt(self.k_spring / self.mass)

    @property
    def omega2(self) -> float | None:
        arg = self.k_spring + self.kappa1 + self.kappa2
        if arg <= 0:
            return None
        return math.sqrt(arg / self.mass)


def linearize_pair_in_lattice(scenario, mass: float = 1.0, h: float = 1e-6) -> LinearizedModel:
    """Expand the pair forces to first order about the lattice equilibrium.

    The scenario must expose chain() at the lattice-only equilibrium plus
    lattice_modes() and perturbation_modes(). The lattice contribution is
    expanded in (dx1, Delta) for F1 and (dx2, Delta) for F2; the
    perturbation contribution depends on Delta alone (one-sided drive), its
    offset and slope become the external force and coupling corrections.
    Raises InconsistentLinearization when the constant lattice terms do not
    vanish, i.e. the scenario is not at its equilibrium.
    """
    chain = scenario.chain()
    if chain.n != 2:
        raise ValueError("linearization is defined for exactly two scatterers")
    lat_modes = scenario.lattice_modes()
    pert_modes = scenario.perturbation_modes()
    x1, x2 = chain.positions

    def f_lat(dx1, dx2):
        return forces_exact(
            chain.with_positions((x1 + dx1, x2 + dx2)), lat_modes
        ).total

    def f_pert(dx1, dx2):
        if not pert_modes:
            return (0.0, 0.0)
        return forces_exact(
            chain.with_positions((x1 + dx1, x2 + dx2)), pert_modes
        ).total

    # F1 in (dx1, Delta): dx1 moves both (Delta fixed), Delta moves x2 only
    a = f_lat(0.0, 0.0)[0]
    u = f_lat(0.0, 0.0)[1]
    b = (f_lat(h, h)[0] - f_lat(-h, -h)[0]) / (2.0 * h)
    c = (f_lat(0.0, h)[0] - f_lat(0.0, -h)[0]) / (2.0 * h)
    # F2 in (dx2, Delta): dx2 moves both, Delta moves x1 by -Delta
    v = (f_lat(h, h)[1] - f_lat(-h, -h)[1]) / (2.0 * h)
    w = (f_lat(-h, 0.0)[1] - f_lat(h, 0.0)[1]) / (2.0 * h)

    k1p = f_pert(0.0, 0.0)[0]
    k3p = f_pert(0.0, 0.0)[1]
    k2p = (f_pert(0.0, h)[0] - f_pert(0.0, -h)[0]) / (2.0 * h)
    k4p = (f_pert(-h, 0.0)[1] - f_pert(h, 0.0)[1]) / (2.0 * h)

    i_total = sum(
        (abs(m.drive_left) ** 2 + abs(m.drive_right) ** 2) / 2.0 for m in lat_modes
    )
    tol = max(1e-8 * i_total, 100.0 * h * h)
    if abs(a) > tol or abs(u) > tol:
        raise InconsistentLinearization(
            f"constant lattice forces a={a:.3e}, u={u:.3e} exceed {tol:.1e}; "
            "the scenario is not at its lattice equilibrium"
        )

    k_spring = -b
    kappa1 = k2p + c
    kappa2 = -(k4p + w)
    f_ext = k1p
    constants = {
        "a": a, "b": b, "c": c, "u": u, "v": v, "w": w,
        "k1p": k1p, "k2p": k2p, "k3p": k3p, "k4p": k4p,
    }
    identities = {
        "a": a,
        "u": u,
        "b_minus_v": b - v,
        "c_minus_w": c - w,
        "c_plus_w": c + w,
        "k1p_minus_k3p": k1p - k3p,
        "tolerance": tol,
    }
    return LinearizedModel(
        k_spring=k_spring,
        kappa1=kappa1,
        kappa2=kappa2,
        f_ext=f_ext,
        mass=mass,
        h=h,
        constants=constants,
        identities=identities,
    )


@dataclass(frozen=True)
class NormalModes:
    omega1: float
    omega2: float
    vector1: tuple[float, float]
    vector2: tuple[float, float]
    offset: float


def normal_modes(model: LinearizedModel) -> NormalModes:
    """Mode frequencies and shapes of the linearized pair.

    The symmetric mode (1, 1) oscillates at sqrt(K/m) about the common
    offset F_ext/K; the counter-mode (-kappa1/kappa2, 1) at
    sqrt((K + kappa1 + kappa2)/m). Raises UnstableMode when a squared
    frequency is non-positive.
    """
    if model.k_spring <= 0:
        mag = math.sqrt(max(-model.k_spring, 0.0) / model.mass)
        raise UnstableMode(
            f"symmetric mode frequency squared is {model.k_spring / model.mass:.3e}",
            imaginary_magnitude=mag,
        )
    arg = model.k_spring + model.kappa1 + model.kappa2
    if arg <= 0:
        mag = math.sqrt(max(-arg, 0.0) / model.mass)
        raise UnstableMode(
            f"counter-mode frequency squared is {arg / model.mass:.3e}",
            imaginary_magnitude=mag,
        )
    if model.kappa2 == 0:
        raise ValueError("counter-mode shape undefined at kappa2 = 0")
    return NormalModes(
        omega1=math.sqrt(model.k_spring / model.mass),
        omega2=math.sqrt(arg / model.mass),
        vector1=(1.0, 1.0),
        vector2=(-model.kappa1 / model.kappa2, 1.0),
        offset=model.f_ext / model.k_spring,
    )


@dataclass(frozen=True)
class ZeroForceGrid:
    d1: np.ndarray
    d2: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray


def zero_force_grid(
    chain_template: ScattererChain,
    modes: list[Mode],
    d1_values,
    d2_values,
) -> ZeroForceGrid:
    """Forces on a three-scatterer chain over a (d1, d2) separation grid."""
    if chain_template.n != 3:
        raise ValueError("grid is defined for three scatterers")
    x1 = chain_template.positions[0]
    d1_arr = np.asarray(list(d1_values), dtype=float)
    d2_arr = np.asarray(list(d2_values), dtype=float)
    shape = (d1_arr.size, d2_arr.size)
    f1 = np.empty(shape)
    f2 = np.empty(shape)
    f3 = np.empty(shape)
    for i, d1 in enumerate(d1_arr):
        for j, d2 in enumerate(d2_arr):
            pos = (x1, x1 + d1, x1 + d1 + d2)
            f = forces_exact(chain_template.with_positions(pos), modes).total
            f1[i, j], f2[i, j], f3[i, j] = f
    return ZeroForceGrid(d1=d1_arr, d2=d2_arr, f1=f1, f2=f2, f3=f3)
