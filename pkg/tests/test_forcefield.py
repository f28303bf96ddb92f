import math

import pytest
from hypothesis import given, strategies as st

from lightlattice.errors import WavenumberMismatch
from lightlattice.forcefield import (
    PairForceParams,
    forces_exact,
    forces_from_solution,
    pair_force_difference,
    pair_forces_approx,
    pair_zero_force_distances,
)
from lightlattice.wavecore import K_REF, Mode, ScattererChain, solve_fields

# exact zero crossings of the symmetric pair forces at zeta = 0.01,
# found once by bisection against the exact engine and frozen here
EXACT_CROSSING_LOW = 0.123416461
EXACT_CROSSING_HIGH = 0.373400547


def symmetric_modes(i_y=1.0, i_z=1.0, k_y=K_REF, k_z=K_REF):
    return [
        Mode("y", k_y, drive_left=math.sqrt(2.0 * i_y), zeta_scale=1.0),
        Mode("z", k_z, drive_right=math.sqrt(2.0 * i_z), zeta_scale=k_z / k_y),
    ]


def test_single_splitter_radiation_pressure():
    # one-sided unit-intensity drive: F = 2 zeta^2 I/(1 + zeta^2)
    for z in (0.05, 0.1, 0.3):
        chain = ScattererChain((0.0,), z)
        f = forces_exact(chain, [Mode("y", K_REF, drive_left=math.sqrt(2.0))])
        assert f.total[0] == pytest.approx(2 * z * z / (1 + z * z), rel=1e-12)


def test_zero_coupling_means_zero_force():
    chain = ScattererChain((0.0, 0.3, 0.7), 0.0)
    f = forces_exact(chain, symmetric_modes())
    assert all(v == pytest.approx(0.0, abs=1e-15) for v in f.total)


def test_per_mode_decomposition_sums_to_total():
    chain = ScattererChain((0.0, 0.29), 0.07)
    prof = forces_exact(chain, symmetric_modes(i_y=1.3, i_z=0.6))
    for j in range(2):
        parts = prof.per_mode["y"][j] + prof.per_mode["z"][j]
        assert prof.total[j] == pytest.approx(parts, rel=1e-12)


@given(st.floats(0.03, 0.97), st.floats(0.002, 0.05), st.floats(0.1, 3.0))
def test_telescoping_total_force(d, zeta, p):
    # the chain total equals the net momentum flux through the boundaries
    chain = ScattererChain((0.0, d), zeta)
    modes = symmetric_modes(i_z=p)
    sol = solve_fields(chain, modes)
    prof = forces_from_solution(sol)
    boundary = 0.0
    for mf in sol.fields:
        a1, b1, _, _ = mf.quads[0]
        _, _, cn, dn = mf.quads[-1]
        boundary += 0.5 * (abs(a1) ** 2 + abs(b1) ** 2 - abs(cn) ** 2 - abs(dn) ** 2)
    assert sum(prof.total) == pytest.approx(boundary, abs=1e-12)


def test_approx_zeros_sit_exactly_on_the_lattice_points():
    # the small-zeta closed forms vanish exactly at lambda/8 and 3 lambda/8
    p = PairForceParams(p=1.0, k_y=K_REF, k_z=K_REF, zeta=0.01)
    for d in (0.125, 0.375):
        f1, f2 = pair_forces_approx(d, p)
        assert abs(f1) < 1e-12
        assert abs(f2) < 1e-12


def test_exact_crossings_frozen_values():
    # the exact engine's crossings are shifted by about -zeta/k from the
    # closed-form points; frozen positions located by bisection
    chain = ScattererChain((0.0, 0.3), 0.01)
    modes = symmetric_modes()

    def f1(d):
        return forces_exact(chain.with_positions((0.0, d)), modes).total[0]

    for lo, hi, frozen in (
        (0.10, 0.15, EXACT_CROSSING_LOW),
        (0.35, 0.40, EXACT_CROSSING_HIGH),
    ):
        a, b = lo, hi
        fa = f1(a)
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = f1(m)
            if (fa < 0) == (fm < 0):
                a, fa = m, fm
            else:
                b = m
        root = 0.5 * (a + b)
        assert root == pytest.approx(frozen, abs=5e-9)
        # both splitters cross together in the symmetric scenario
        f2 = forces_exact(chain.with_positions((0.0, root)), modes).total[1]
        assert abs(f2) < 1e-10


@given(st.floats(0.02, 0.98), st.floats(0.001, 0.15), st.floats(0.05, 2.5))
def test_difference_form_matches_f1_minus_f2(d, zeta, p):
    params = PairForceParams(p=p, k_y=K_REF, k_z=K_REF, zeta=zeta)
    f1, f2 = pair_forces_approx(d, params)
    assert pair_force_difference(d, params) == pytest.approx(
        f1 - f2, rel=1e-12, abs=1e-15
    )


def test_difference_requires_equal_wavenumbers():
    params = PairForceParams(p=1.0, k_y=K_REF, k_z=1.2 * K_REF, zeta=0.01)
    with pytest.raises(WavenumberMismatch):
        pair_force_difference(0.3, params)


def test_difference_scales_with_total_intensity():
    base = PairForceParams(p=1.0, k_y=K_REF, k_z=K_REF, zeta=0.02, i_y=1.0)
    double = PairForceParams(p=1.0, k_y=K_REF, k_z=K_REF, zeta=0.02, i_y=2.0)
    d = 0.21
    assert pair_force_difference(d, double) == pytest.approx(
        2.0 * pair_force_difference(d, base), rel=1e-12
    )


@given(st.floats(0.03, 0.47))
def test_symmetric_pair_mirror_antisymmetry(d):
    # equal counter-propagating drives: F2(d) = -F1(d) exactly
    chain = ScattererChain((0.0, d), 0.03)
    f = forces_exact(chain, symmetric_modes()).total
    assert f[1] == pytest.approx(-f[0], rel=1e-9, abs=1e-14)


def test_approx_error_scales_cubically():
    # halving zeta cuts the worst-case truncation error by about 8x
    grid = [0.05 + 0.9 * i / 120 for i in range(121)]

    def sup_err(zeta):
        params = PairForceParams(p=1.0, k_y=K_REF, k_z=K_REF, zeta=zeta)
        chain = ScattererChain((0.0, 0.3), zeta)
        modes = symmetric_modes()
        worst = 0.0
        for d in grid:
            fe = forces_exact(chain.with_positions((0.0, d)), modes).total
            fa = pair_forces_approx(d, params)
            worst = max(worst, abs(fe[0] - fa[0]), abs(fe[1] - fa[1]))
        return worst

    ratio = sup_err(0.02) / sup_err(0.01)
    assert 5.0 < ratio < 12.0


def test_zero_distance_closed_forms_symmetric_case():
    # equal intensities and wavenumbers: zeros at (2n+1) lambda/8
    p = PairForceParams(p=1.0, k_y=K_REF, k_z=K_REF, zeta=0.01)
    low = pair_zero_force_distances(p, branch=1, n=0)
    high = pair_zero_force_distances(p, branch=-1, n=0)
    assert low.d1 == pytest.approx(0.125, rel=1e-12)
    assert low.d2 == pytest.approx(0.125, rel=1e-12)
    assert high.d1 == pytest.approx(0.375, rel=1e-12)
    assert high.d2 == pytest.approx(0.375, rel=1e-12)
    assert not high.notes
    shifted = pair_zero_force_distances(p, branch=-1, n=2)
    assert shifted.d1 == pytest.approx(0.375 + 1.0, rel=1e-12)


def test_zero_distance_reports_missing_roots():
    # one-beam limit: the right splitter has no zero, reported not raised
    p = PairForceParams(p=0.0, k_y=K_REF, k_z=K_REF, zeta=0.05)
    res = pair_zero_force_distances(p, branch=1, n=0)
    assert res.d1 is not None
    assert res.d2 is None
    assert "d2" in res.notes and "denominator" in res.notes["d2"]

    # large wavenumber ratio pushes the arccos argument out of range
    p2 = PairForceParams(p=1.0, k_y=K_REF, k_z=3.0 * K_REF, zeta=0.01)
    res2 = pair_zero_force_distances(p2, branch=1, n=0)
    assert res2.d1 is None
    assert "arccos" in res2.notes["d1"]


def test_zero_distance_verified_against_exact_engine():
    # at small zeta the reported distances nearly zero the exact forces
    p = PairForceParams(p=0.8, k_y=K_REF, k_z=K_REF, zeta=0.005)
    res = pair_zero_force_distances(p, branch=-1, n=0)
    modes = symmetric_modes(i_y=1.0, i_z=0.8)
    chain = ScattererChain((0.0, res.d1), 0.005)
    f1 = forces_exact(chain, modes).total[0]
    assert abs(f1) < 5e-4 * 2 * 0.005 ** 2 / 0.005  # small vs force scale
    chain2 = ScattererChain((0.0, res.d2), 0.005)
    f2 = forces_exact(chain2, modes).total[1]
    assert abs(f2) < 5e-4


def test_large_zeta_warns():
    with pytest.warns(UserWarning):
        PairForceParams(p=1.0, k_y=K_REF, k_z=K_REF, zeta=0.3)


def test_params_validation():
    with pytest.raises(ValueError):
        PairForceParams(p=-0.1, k_y=K_REF, k_z=K_REF, zeta=0.01)
    with pytest.raises(ValueError):
        pair_zero_force_distances(
            PairForceParams(p=1.0, k_y=K_REF, k_z=K_REF, zeta=0.01), branch=0
        )
