"""Exact steady-state light fields in a 1D chain of thin polarizable scatterers.

Each scatterer is an infinitely thin slab characterized by a single complex
coupling zeta; each light mode (a polarization/frequency component that does
not scatter into any other) is solved independently with 2x2 complex transfer
matrices. Internal units: eps0 = c = 1 and |amplitude|^2 = 2*I, so intensity
is |E|^2 / 2. Lengths are arbitrary as long as k*x products are consistent;
the package convention is lengths in units of the reference wavelength with
K_REF = 2*pi.

The field between scatterers j and j+1 is C_j e^{ik(x-x_j)} + D_j e^{-ik(x-x_j)};
A_j/B_j are the right/left moving amplitudes just left of scatterer j.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass

from .errors import NegativeDistance, SingularBoundary

# reference wavenumber: one reference wavelength per unit length
K_REF = 2.0 * math.pi

_SINGULAR_M22 = 1e-14


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 complex map between (right-moving, left-moving) amplitude pairs."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def apply(self, a: complex, b: complex) -> tuple[complex, complex]:
        return (self.m11 * a + self.m12 * b, self.m21 * a + self.m22 * b)

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21


IDENTITY = TransferMatrix(1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j)


def beam_splitter_matrix(zeta: complex) -> TransferMatrix:
    """Scattering matrix of a single thin slab with coupling zeta.

    Unimodular for any zeta: det = (1+iz)(1-iz) - (iz)(-iz) = 1.
    """
    iz = 1j * zeta
    return TransferMatrix(1.0 + iz, iz, -iz, 1.0 - iz)


def propagation_matrix(k: float, d: float) -> TransferMatrix:
    """Free propagation over a distance d >= 0: diag(e^{ikd}, e^{-ikd})."""
    if d < 0:
        raise NegativeDistance(f"propagation distance {d} < 0 (unsorted chain?)")
    ph = cmath.exp(1j * k * d)
    return TransferMatrix(ph, 0.0j, 0.0j, 1.0 / ph)


@dataclass(frozen=True)
class Mode:
    """One non-interfering field component.

    k is the wavenumber (K_REF times the ratio to the reference mode).
    drive_left / drive_right are the incoming amplitudes referenced at x = 0:
    the solver uses A_1 = drive_left * e^{i k x_1} and
    D_N = drive_right * e^{-i k x_N}, so absolute chain positions carry
    physical meaning against the incoming waves (standing-wave nodes stay
    put when the chain moves).

    zeta_scale multiplies every scatterer's base coupling for this mode;
    the default k / K_REF keeps the polarizability fixed while the
    wavenumber varies. zeta_override, when set, replaces the coupling of
    every scatterer for this mode outright (used when a mode's coupling is
    prescribed independently of the scaling law).
    """

    label: str
    k: float
    drive_left: complex = 0.0j
    drive_right: complex = 0.0j
    zeta_scale: float | None = None
    zeta_override: complex | None = None

    def __post_init__(self):
        if not (self.k > 0):
            raise ValueError(f"mode {self.label!r}: k must be positive, got {self.k}")
        if self.zeta_scale is not None and not (self.zeta_scale > 0):
            raise ValueError(f"mode {self.label!r}: zeta_scale must be positive")
        for name in ("drive_left", "drive_right"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"mode {self.label!r}: {name} not finite")

    @property
    def effective_scale(self) -> float:
        return self.k / K_REF if self.zeta_scale is None else self.zeta_scale


@dataclass(frozen=True)
class ScattererChain:
    """Ordered scatterer positions with per-scatterer base coupling.

    zeta_base may be a single complex (shared by all scatterers) or a
    sequence of length N. Im(zeta) > 0 models absorption; Im(zeta) < 0
    would be gain and is rejected unless allow_gain is set.
    """

    positions: tuple[float, ...]
    zeta_base: tuple[complex, ...]
    allow_gain: bool = False

    def __init__(self, positions, zeta_base, allow_gain: bool = False):
        positions = tuple(float(x) for x in positions)
        for a, b in zip(positions, positions[1:]):
            if not (b > a):
                raise ValueError(f"positions not strictly increasing: {a} !< {b}")
        try:
            zetas = (complex(zeta_base),) * len(positions)
        except TypeError:
            zetas = tuple(complex(z) for z in zeta_base)
            if len(zetas) != len(positions):
                raise ValueError(
                    f"got {len(zetas)} couplings for {len(positions)} scatterers"
                )
        if not allow_gain:
            for z in zetas:
                if z.imag < 0:
                    raise ValueError(
                        f"zeta {z} has negative imaginary part (gain); "
                        "pass allow_gain=True to permit it"
                    )
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "zeta_base", zetas)
        object.__setattr__(self, "allow_gain", allow_gain)

    @property
    def n(self) -> int:
        return len(self.positions)

    def gaps(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.positions, self.positions[1:]))

    def with_positions(self, positions) -> "ScattererChain":
        return ScattererChain(positions, self.zeta_base, self.allow_gain)


def mode_zetas(chain: ScattererChain, mode: Mode) -> tuple[complex, ...]:
    """Per-scatterer coupling seen by one mode."""
    if mode.zeta_override is not None:
        return (complex(mode.zeta_override),) * chain.n
    s = mode.effective_scale
    return tuple(z * s for z in chain.zeta_base)


def total_transfer_matrix(chain: ScattererChain, mode: Mode) -> TransferMatrix:
    """Ordered product mapping (A_1, B_1) to (C_N, D_N).

    M = M_BS(z_N) . M_p(d_{N-1}) ... M_p(d_1) . M_BS(z_1); identity for an
    empty chain.
    """
    zetas = mode_zetas(chain, mode)
    if chain.n == 0:
        return IDENTITY
    m = beam_splitter_matrix(zetas[0])
    for j in range(1, chain.n):
        d = chain.positions[j] - chain.positions[j - 1]
        m = beam_splitter_matrix(zetas[j]) @ (propagation_matrix(mode.k, d) @ m)
    return m


def reflection_transmission(chain: ScattererChain, mode: Mode) -> tuple[complex, complex]:
    """Amplitude coefficients r, t with B_1 = r A_1 + t D_N.

    t = 1/m22 is direction independent (det = 1), r = -m21/m22 for left
    incidence on the chain as given.
    """
    m = total_transfer_matrix(chain, mode)
    if abs(m.m22) < _SINGULAR_M22:
        raise SingularBoundary(
            f"|m22| = {abs(m.m22):.3e} below {_SINGULAR_M22} for mode {mode.label!r}"
        )
    return -m.m21 / m.m22, 1.0 / m.m22


@dataclass(frozen=True)
class ModeFields:
    """Solved amplitudes of one mode: quadruples (A_j, B_j, C_j, D_j) per scatterer."""

    label: str
    k: float
    quads: tuple[tuple[complex, complex, complex, complex], ...]
    r_tot: complex
    t_tot: complex
    drive_left: complex
    drive_right: complex


@dataclass(frozen=True)
class FieldSolution:
    chain: ScattererChain
    fields: tuple[ModeFields, ...]

    def __getitem__(self, label: str) -> ModeFields:
        for f in self.fields:
            if f.label == label:
                return f
        raise KeyError(label)


def solve_fields(chain: ScattererChain, modes: list[Mode]) -> FieldSolution:
    """Solve every mode independently against the same chain.

    Per mode: B_1 = (D_N - m21 A_1)/m22 from the total matrix, then a
    left-to-right sweep alternating the scatterer and propagation maps fills
    all quadruples.
    """
    solved = []
    for mode in modes:
        m = total_transfer_matrix(chain, mode)
        if abs(m.m22) < _SINGULAR_M22:
            raise SingularBoundary(
                f"|m22| = {abs(m.m22):.3e} below {_SINGULAR_M22} for mode {mode.label!r}"
            )
        r_tot = -m.m21 / m.m22
        t_tot = 1.0 / m.m22
        if chain.n == 0:
            solved.append(
                ModeFields(mode.label, mode.k, (), r_tot, t_tot,
                           complex(mode.drive_left), complex(mode.drive_right))
            )
            continue
        zetas = mode_zetas(chain, mode)
        a1 = complex(mode.drive_left) * cmath.exp(1j * mode.k * chain.positions[0])
        dn = complex(mode.drive_right) * cmath.exp(-1j * mode.k * chain.positions[-1])
        b1 = (dn - m.m21 * a1) / m.m22
        quads = []
        a, b = a1, b1
        for j in range(chain.n):
            c, d = beam_splitter_matrix(zetas[j]).apply(a, b)
            quads.append((a, b, c, d))
            if j + 1 < chain.n:
                gap = chain.positions[j + 1] - chain.positions[j]
                a, b = propagation_matrix(mode.k, gap).apply(c, d)
        for q in quads:
            for amp in q:
                if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                    raise SingularBoundary(
                        f"non-finite amplitude in mode {mode.label!r}"
                    )
        solved.append(
            ModeFields(mode.label, mode.k, tuple(quads), r_tot, t_tot,
                       complex(mode.drive_left), complex(mode.drive_right))
        )
    return FieldSolution(chain, tuple(solved))


def _mode_field_at(chain: ScattererChain, mf: ModeFields, x: float) -> complex:
    k = mf.k
    if chain.n == 0:
        return mf.drive_left * cmath.exp(1j * k * x) + mf.drive_right * cmath.exp(-1j * k * x)
    # interval index: j scatterers lie at or left of x
    j = bisect.bisect_right(chain.positions, x)
    if j == 0:
        a, b, _, _ = mf.quads[0]
        x0 = chain.positions[0]
    else:
        _, _, a, b = mf.quads[j - 1]  # (C, D) of the interval starting at x_j
        x0 = chain.positions[j - 1]
    ph = cmath.exp(1j * k * (x - x0))
    return a * ph + b / ph


def intensity_profile(solution: FieldSolution, x_samples) -> list[tuple[float, float, dict]]:
    """Sample I(x) per mode and in total. Modes do not interfere: no cross terms."""
    rows = []
    for x in x_samples:
        per_mode = {}
        for mf in solution.fields:
            e = _mode_field_at(solution.chain, mf, x)
            per_mode[mf.label] = 0.5 * abs(e) ** 2
        rows.append((float(x), sum(per_mode.values()), per_mode))
    return rows
