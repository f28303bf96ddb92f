import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lightlattice.equilibria import (
    LinearizedModel,
    design_intensity_ratio,
    design_wavenumber,
    find_equilibrium,
    force_jacobian,
    linearize_pair_in_lattice,
    normal_modes,
    pair_stationary_distances,
    zero_force_grid,
)
from lightlattice.errors import (
    InconsistentLinearization,
    NoSolution,
    UnstableMode,
)
from lightlattice.dynamics import DynamicsParams, evolve
from lightlattice.forcefield import forces_exact
from lightlattice.lattice import build_lattice
from lightlattice.wavecore import K_REF, Mode, ScattererChain

EXACT_CROSSING_LOW = 0.123416461
EXACT_CROSSING_HIGH = 0.373400547


def symmetric_modes(i_y=1.0, i_z=1.0, k_z=K_REF):
    return [
        Mode("y", K_REF, drive_left=math.sqrt(2.0 * i_y)),
        Mode("z", k_z, drive_right=math.sqrt(2.0 * i_z)),
    ]


def test_pair_relative_equilibria_from_seeds():
    modes = symmetric_modes()
    stable = find_equilibrium(
        ScattererChain((0.0, 0.35), 0.01), modes, relative_only=True
    )
    gap = stable.positions[1] - stable.positions[0]
    assert gap == pytest.approx(EXACT_CROSSING_HIGH, abs=5e-9)
    assert stable.classification == "stable"
    assert stable.translation_projected

    unstable = find_equilibrium(
        ScattererChain((0.0, 0.13), 0.01), modes, relative_only=True
    )
    gap_u = unstable.positions[1] - unstable.positions[0]
    assert gap_u == pytest.approx(EXACT_CROSSING_LOW, abs=5e-9)
    assert unstable.classification == "unstable"


def test_pair_stationary_distance_catalogue():
    entries = pair_stationary_distances(K_REF, 3)
    assert [e[1] for e in entries] == ["unstable", "stable", "unstable", "stable"]
    assert entries[0][0] == pytest.approx(0.125)
    assert entries[1][0] == pytest.approx(0.375)
    with pytest.raises(ValueError):
        pair_stationary_distances(0.0, 1)


def test_triplet_equilibrium_residual_and_com():
    modes = symmetric_modes()
    report = find_equilibrium(
        ScattererChain((0.0, 0.38, 0.76), 0.01), modes, relative_only=True
    )
    assert report.residual < 1e-11
    assert abs(report.com_force) < 1e-11
    chain = ScattererChain(report.positions, 0.01)
    f = forces_exact(chain, modes).total
    # relative coordinates are stationary: neighbour forces agree
    assert f[1] - f[0] == pytest.approx(0.0, abs=1e-10)
    assert f[2] - f[1] == pytest.approx(0.0, abs=1e-10)


def test_jacobian_respects_translation_invariance():
    # one-sided drives: shifting every scatterer together changes nothing,
    # so the uniform vector lies in the Jacobian kernel
    chain = ScattererChain((0.0, 0.37, 0.74), 0.05)
    jac = force_jacobian(chain, symmetric_modes())
    kernel_action = jac @ np.ones(3)
    assert np.max(np.abs(kernel_action)) < 1e-5


def test_stable_equilibrium_recovers_from_perturbation():
    modes = symmetric_modes()
    report = find_equilibrium(
        ScattererChain((0.0, 0.37), 0.02), modes, relative_only=True
    )
    nudged = tuple(x + s for x, s in zip(report.positions, (1e-3, -1e-3)))
    traj = evolve(
        ScattererChain(nudged, 0.02),
        modes,
        DynamicsParams(regime="overdamped", dt=2.0, t_end=50000.0,
                       friction=1.0, force_tol=1e-12),
        capture_every=100,
    )
    gap0 = report.positions[1] - report.positions[0]
    back = traj.final_positions()
    assert back[1] - back[0] == pytest.approx(gap0, abs=1e-8)


def test_design_ratio_balance_point():
    # at the matched wavenumber both ratios coincide
    d = 0.125
    res = design_wavenumber(d, K_REF, zeta=0.01, refine=False)
    assert res, "expected at least one candidate"
    for cand in res:
        ratios = design_intensity_ratio(d, K_REF, cand.k_z, 0.01)
        assert ratios.p1 == pytest.approx(ratios.p2, abs=1e-8)
        assert cand.p == pytest.approx(ratios.p1, abs=1e-10)


@given(theta=st.floats(min_value=0.15, max_value=0.92))
def test_design_balance_holds_across_domain(theta):
    d = theta / K_REF
    cands = design_wavenumber(d, K_REF, zeta=0.02, refine=False)
    physical = [c for c in cands if c.physical]
    for cand in physical:
        ratios = design_intensity_ratio(d, K_REF, cand.k_z, 0.02)
        assert ratios.p1 == pytest.approx(ratios.p2, abs=1e-8)


def test_design_branches_at_quarter_period():
    # d k_y = pi/4 admits k_z near k_y and near 3 k_y, and nothing near 2 k_y
    d = 0.125
    cands = design_wavenumber(d, K_REF, zeta=0.01)
    ratios_k = sorted(c.k_z / K_REF for c in cands if c.physical)
    assert any(abs(rk - 1.0) < 0.05 for rk in ratios_k)
    assert any(abs(rk - 3.0) < 0.05 for rk in ratios_k)
    assert not any(abs(rk - 2.0) < 0.2 for rk in ratios_k)


def test_design_refinement_zeroes_exact_forces():
    d = 0.125
    cands = design_wavenumber(d, K_REF, zeta=0.01, refine=True)
    physical = [c for c in cands if c.physical]
    assert physical
    for cand in physical:
        assert cand.refined
        assert abs(cand.residual_f1) < 1e-10
        assert abs(cand.residual_f2) < 1e-10
    assert any(c.stability == "stable" for c in physical)


def test_design_out_of_domain_reports_radicand():
    # cos(2 d k_y) < -1/3 leaves no balanced wavenumber
    d = 0.25  # 2 d k_y = pi
    with pytest.raises(NoSolution) as exc_info:
        design_wavenumber(d, K_REF, zeta=0.01)
    assert exc_info.value.radicand is not None
    with pytest.raises(ValueError):
        design_wavenumber(-0.1, K_REF)


def test_linearization_identities_with_perturbation():
    scenario = build_lattice(2, 1.0, 1.0, 0.1, i_p=0.5, k_p=K_REF / 0.99,
                             zeta_p=0.1)
    model = linearize_pair_in_lattice(scenario)
    ids = model.identities
    tol = ids["tolerance"]
    assert abs(ids["a"]) < tol and abs(ids["u"]) < tol
    assert abs(ids["b_minus_v"]) < tol
    # cross coupling is antisymmetric: c = -w
    assert abs(ids["c_plus_w"]) < tol
    assert abs(ids["c_minus_w"]) > 10 * tol
    # the upstream splitter takes three times the downstream static push
    # (leading order in zeta_p; at 0.1 the correction is ~2 percent)
    assert model.constants["k1p"] / model.constants["k3p"] == pytest.approx(
        3.0, rel=3e-2
    )
    assert model.f_ext == pytest.approx(model.constants["k1p"])
    zeta_p = 0.1
    f1p_expect = 6.0 * zeta_p ** 2 * 0.5 / (1.0 + 4.0 * zeta_p ** 2)
    assert model.constants["k1p"] == pytest.approx(f1p_expect, rel=2e-2)


def test_linearization_couplings_equal_without_perturbation():
    scenario = build_lattice(2, 1.0, 1.0, 0.1)
    model = linearize_pair_in_lattice(scenario)
    assert model.kappa1 == pytest.approx(model.kappa2, rel=1e-6)
    assert model.f_ext == pytest.approx(0.0, abs=1e-10)
    assert model.k_spring > 0
    modes = normal_modes(model)
    assert modes.omega1 == pytest.approx(math.sqrt(model.k_spring / model.mass))
    assert modes.omega2 > modes.omega1
    assert modes.vector1 == pytest.approx((1.0, 1.0))
    assert modes.offset == pytest.approx(0.0, abs=1e-10)


def test_linearization_rejects_off_equilibrium_state():
    scenario = build_lattice(2, 1.0, 1.0, 0.1)
    shifted = scenario.with_positions(
        tuple(x + dx for x, dx in zip(scenario.positions, (0.0, 0.05)))
    )
    with pytest.raises(InconsistentLinearization):
        linearize_pair_in_lattice(shifted)


def _model(k_spring, kappa1, kappa2, f_ext=0.0, mass=1.0):
    return LinearizedModel(
        k_spring=k_spring, kappa1=kappa1, kappa2=kappa2, f_ext=f_ext,
        mass=mass, h=1e-6, constants={}, identities={},
    )


def test_normal_modes_edge_cases():
    plain = normal_modes(_model(4.0, 0.0, 0.5, f_ext=2.0))
    assert plain.omega1 == pytest.approx(2.0)
    assert plain.vector2 == pytest.approx((0.0, 1.0))
    assert plain.offset == pytest.approx(0.5)

    with pytest.raises(UnstableMode) as exc_info:
        normal_modes(_model(-1.0, 0.1, 0.2))
    assert exc_info.value.imaginary_magnitude == pytest.approx(1.0)

    with pytest.raises(UnstableMode):
        normal_modes(_model(1.0, -3.0, 1.0))

    with pytest.raises(ValueError):
        normal_modes(_model(1.0, 0.1, 0.0))


def test_zero_force_grid_shape_and_symmetry():
    chain = ScattererChain((0.0, 0.3, 0.6), 0.05)
    modes = symmetric_modes()
    d_vals = np.linspace(0.2, 0.45, 6)
    grid = zero_force_grid(chain, modes, d_vals, d_vals)
    assert grid.f1.shape == (6, 6)
    # mirror drive, mirror geometry: on the d1 = d2 diagonal the middle
    # scatterer is force free and the outer pair balances
    for i in range(6):
        assert grid.f2[i, i] == pytest.approx(0.0, abs=1e-12)
        assert grid.f1[i, i] == pytest.approx(-grid.f3[i, i], abs=1e-12)
    with pytest.raises(ValueError):
        zero_force_grid(ScattererChain((0.0, 0.3), 0.05), modes, d_vals, d_vals)


def test_zero_coupling_grid_is_flat():
    chain = ScattererChain((0.0, 0.3, 0.6), 0.0)
    grid = zero_force_grid(chain, symmetric_modes(),
                           np.linspace(0.2, 0.4, 3), np.linspace(0.2, 0.4, 3))
    assert np.max(np.abs(grid.f1)) == 0.0
    assert np.max(np.abs(grid.f2)) == 0.0
