"""Command line front end: scenario files in, CSV/JSON artifacts out.

Exit codes: 0 success, 2 invalid input, 3 numerical failure (partial
outputs are written and flagged where the run produced any). Output is
deterministic: fixed float formatting (17 significant digits), fixed row
order, headers carrying only the tool version, scenario hash, and command
name. Sweep cells fan out to a process pool sized by LIGHTLATTICE_THREADS;
results are always assembled in grid order.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .dynamics import com_velocity, evolve
from .equilibria import (
    design_wavenumber,
    find_equilibrium,
    force_jacobian,
    linearize_pair_in_lattice,
    normal_modes,
    zero_force_grid,
    _classify,
    _translation_complement,
)
from .errors import (
    LightLatticeError,
    NoConvergence,
    NoSolution,
    ScenarioError,
    SeparationViolation,
    UnstableMode,
)
from .forcefield import PairForceParams, forces_exact, pair_forces_approx
from .lattice import (
    build_lattice,
    build_perturbation_scenarios,
    perturbation_scenario_kinds,
)
from .scenario import (
    Scenario,
    apply_axis_values,
    load_scenario,
    scenario_from_document,
    scenario_hash,
)
from .wavecore import K_REF, intensity_profile, reflection_transmission, solve_fields


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def _write_csv(path, command, sha, name, columns, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# lightlattice {__version__}\n")
        fh.write(f"# scenario {sha} {name}\n")
        fh.write(f"# command {command}\n")
        fh.write("# columns: " + ",".join(columns) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path, command, sha, name, payload):
    doc = {
        "_meta": {
            "tool": f"lightlattice {__version__}",
            "scenario": f"{sha} {name}",
            "command": command,
        }
    }
    doc.update(payload)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _out_path(args, filename) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, filename)


def _prefix(scn: Scenario) -> str:
    pref = scn.doc.get("output", {}).get("prefix")
    return f"{pref}_" if pref else ""


# ---------------------------------------------------------------- presets

def _preset_self_ordering() -> dict:
    return {
        "version": "1",
        "chain": {
            "zeta": [0.01, 0.0],
            "n": 10,
            "generator": {"kind": "equidistant", "spacing": 0.5, "start": 0.0},
        },
        "modes": [
            {"label": "y", "k": 1.0, "intensity_left": 1.0},
            {"label": "z", "k": 1.0, "intensity_right": 1.0},
        ],
        "dynamics": {
            "regime": "overdamped",
            "friction": 1.0,
            "dt": 5.0,
            "t_end": 400000.0,
            "force_tol": 1e-10,
        },
        "output": {"capture_every": 100},
    }


def _preset_drift_intensity() -> dict:
    doc = _preset_self_ordering()
    doc["modes"][1]["intensity_right"] = 1.3
    doc["dynamics"]["t_end"] = 40000.0
    return doc


def _preset_drift_wavenumber() -> dict:
    doc = _preset_self_ordering()
    doc["modes"][1]["k"] = 1.3
    doc["dynamics"]["t_end"] = 40000.0
    return doc


def _preset_stationary_distance_map() -> dict:
    # complex coupling with a small gain component; the chain flag must
    # acknowledge it
    return {
        "version": "1",
        "chain": {
            "zeta": [1.0 / 12.0, -1.0 / 150.0],
            "allow_gain": True,
            "n": 2,
            "generator": {"kind": "equidistant", "spacing": 0.25, "start": 0.0},
        },
        "modes": [
            {"label": "y", "k": 1.0, "intensity_left": 1.0},
            {"label": "z", "k": 1.0, "intensity_right": 1.0},
        ],
        "dynamics": {
            "regime": "overdamped",
            "friction": 1.0,
            "dt": 2.0,
            "t_end": 20000.0,
            "force_tol": 1e-11,
        },
        "sweep": {
            "axes": [
                {"path": "modes.z.k", "start": 0.6, "stop": 1.4, "steps": 9},
                {
                    "path": "modes.z.intensity_right",
                    "start": 0.25,
                    "stop": 4.0,
                    "steps": 9,
                },
            ]
        },
    }


def _preset_gap_vs_intensity() -> dict:
    return {
        "version": "1",
        "chain": {
            "zeta": [0.01, 0.0],
            "n": 4,
            "generator": {"kind": "equidistant", "spacing": 0.5, "start": 0.0},
        },
        "modes": [
            {"label": "y", "k": 1.0, "intensity_left": 1.0},
            {"label": "z", "k": 1.0, "intensity_right": 1.0},
        ],
        "dynamics": {
            "regime": "overdamped",
            "friction": 1.0,
            "dt": 5.0,
            "t_end": 200000.0,
            "force_tol": 1e-10,
        },
        "sweep": {
            "axes": [
                {
                    "path": "modes.z.intensity_right",
                    "start": 0.5,
                    "stop": 2.0,
                    "steps": 16,
                }
            ]
        },
    }


_PRESETS = {
    "self_ordering": _preset_self_ordering,
    "drift_intensity": _preset_drift_intensity,
    "drift_wavenumber": _preset_drift_wavenumber,
    "stationary_distance_map": _preset_stationary_distance_map,
    "gap_vs_intensity": _preset_gap_vs_intensity,
}


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(set(_PRESETS) | set(perturbation_scenario_kinds())))


def _load(args) -> Scenario:
    has_file = getattr(args, "scenario", None) is not None
    has_preset = getattr(args, "preset", None) is not None
    if has_file == has_preset:
        raise ScenarioError("give exactly one of --scenario or --preset")
    if has_file:
        return load_scenario(args.scenario)
    name = args.preset
    scale = getattr(args, "ip_scale", 1.0)
    if name in perturbation_scenario_kinds():
        doc = build_perturbation_scenarios(name, i_p_scale=scale)
    elif name in _PRESETS:
        doc = _PRESETS[name]()
    else:
        raise ScenarioError(
            f"unknown preset {name!r}; known: {', '.join(preset_names())}"
        )
    return scenario_from_document(doc, name=f"preset:{name}")


# ------------------------------------------------------------- subcommands

def cmd_fields(args) -> int:
    scn = _load(args)
    chain, modes = scn.chain, scn.mode_list()
    if args.x_min is not None and args.x_max is not None:
        lo, hi = args.x_min, args.x_max
    elif chain.n > 0:
        lo, hi = chain.positions[0] - 1.0, chain.positions[-1] + 1.0
    else:
        lo, hi = -1.0, 1.0
    if hi <= lo:
        raise ScenarioError("x range must be increasing")
    xs = [lo + i * (hi - lo) / (args.samples - 1) for i in range(args.samples)]
    solution = solve_fields(chain, modes)
    profile = intensity_profile(solution, xs)
    labels = [m.label for m in modes]
    columns = ["x", "i_total"] + [f"i_{lab}" for lab in labels]
    rows = [
        [x, total] + [per[lab] for lab in labels] for (x, total, per) in profile
    ]
    pre = _prefix(scn)
    _write_csv(
        _out_path(args, f"{pre}fields.csv"),
        "fields", scn.sha, scn.name, columns, rows,
    )
    amp_cols = ["mode", "splitter", "x"] + [
        f"{q}_{part}" for q in "abcd" for part in ("re", "im")
    ]
    amp_rows = []
    for mf in solution.fields:
        for j, quad in enumerate(mf.quads):
            row = [mf.label, j + 1, chain.positions[j]]
            for val in quad:
                row.extend([val.real, val.imag])
            amp_rows.append(row)
    _write_csv(
        _out_path(args, f"{pre}amplitudes.csv"),
        "fields", scn.sha, scn.name, amp_cols, amp_rows,
    )
    summary = {}
    if chain.n > 0:
        for mode in modes:
            r, t = reflection_transmission(chain, mode)
            summary[mode.label] = {
                "r": [r.real, r.imag],
                "t": [t.real, t.imag],
                "reflectance": abs(r) ** 2,
                "transmittance": abs(t) ** 2,
            }
    _write_json(
        _out_path(args, f"{pre}fields_summary.json"),
        "fields", scn.sha, scn.name, {"modes": summary},
    )
    return 0


def cmd_forces(args) -> int:
    scn = _load(args)
    chain, modes = scn.chain, scn.mode_list()
    if chain.n != 2:
        raise ScenarioError("forces table needs a two-scatterer chain")
    if args.steps < 2 or args.d_max <= args.d_min:
        raise ScenarioError("bad distance grid")
    x1 = chain.positions[0]
    zeta = chain.zeta_base[0]
    zeta_r = zeta.real
    iy = (abs(modes[0].drive_left) ** 2 + abs(modes[0].drive_right) ** 2) / 2.0
    approx_ok = len(modes) == 2 and zeta.imag == 0.0 and iy > 0
    if approx_ok:
        iz = (abs(modes[1].drive_left) ** 2 + abs(modes[1].drive_right) ** 2) / 2.0
        params = PairForceParams(
            p=iz / iy if iy > 0 else 0.0,
            k_y=modes[0].k,
            k_z=modes[1].k,
            zeta=zeta_r * modes[0].effective_scale,
            i_y=iy,
        )
    rows = []
    for i in range(args.steps):
        d = args.d_min + i * (args.d_max - args.d_min) / (args.steps - 1)
        f = forces_exact(chain.with_positions((x1, x1 + d)), modes).total
        if approx_ok:
            fa1, fa2 = pair_forces_approx(d, params)
        else:
            fa1 = fa2 = math.nan
        rows.append([d, f[0], f[1], fa1, fa2])
    pre = _prefix(scn)
    _write_csv(
        _out_path(args, f"{pre}forces.csv"),
        "forces", scn.sha, scn.name,
        ["d", "f1_exact", "f2_exact", "f1_approx", "f2_approx"],
        rows,
    )
    return 0


def _trajectory_rows(traj, n):
    cols = ["t"] + [f"x{j + 1}" for j in range(n)]
    if traj.velocities is not None:
        cols += [f"v{j + 1}" for j in range(n)]
    rows = []
    for i, t in enumerate(traj.times):
        row = [t] + list(traj.positions[i])
        if traj.velocities is not None:
            row += list(traj.velocities[i])
        rows.append(row)
    return cols, rows


def _run_dynamics(args, command) -> int:
    scn = _load(args)
    if scn.dynamics is None:
        raise ScenarioError(f"{command} needs a dynamics block")
    if command == "relax" and scn.dynamics.regime != "overdamped":
        raise ScenarioError("relax requires the overdamped regime")
    chain, modes = scn.chain, scn.mode_list()
    pre = _prefix(scn)
    partial = False
    diagnostic = None
    try:
        traj = evolve(
            chain,
            modes,
            scn.dynamics,
            capture_every=scn.capture_every,
            initial_velocities=scn.initial_velocities,
        )
    except SeparationViolation as exc:
        traj = exc.trajectory
        partial = True
        diagnostic = str(exc)
        if traj is None:
            raise
    cols, rows = _trajectory_rows(traj, chain.n)
    _write_csv(
        _out_path(args, f"{pre}trajectory.csv"),
        command, scn.sha, scn.name, cols, rows,
    )
    final = traj.final_positions()
    forces = forces_exact(chain.with_positions(final), modes).total
    summary = {
        "termination": traj.termination,
        "diagnostic": diagnostic or traj.diagnostic,
        "partial": partial,
        "final_positions": list(final),
        "final_gaps": [final[j + 1] - final[j] for j in range(len(final) - 1)],
        "residual_force_sup": max((abs(f) for f in forces), default=0.0),
        "com_velocity": com_velocity(traj) if len(traj.times) >= 2 else 0.0,
        "snapshots": traj.n_snapshots,
    }
    _write_json(
        _out_path(args, f"{pre}summary.json"),
        command, scn.sha, scn.name, summary,
    )
    return 3 if partial else 0


def cmd_relax(args) -> int:
    return _run_dynamics(args, "relax")


def cmd_evolve(args) -> int:
    return _run_dynamics(args, "evolve")


def _sweep_cell(payload):
    doc_json, assignments = payload
    base = json.loads(doc_json)
    try:
        doc = apply_axis_values(base, assignments)
        doc.pop("sweep", None)
        scn = scenario_from_document(doc, name="sweep-cell")
        if scn.dynamics is None:
            raise ScenarioError("sweep needs a dynamics block")
        traj = evolve(
            scn.chain,
            scn.mode_list(),
            scn.dynamics,
            capture_every=max(1, scn.capture_every),
            initial_velocities=scn.initial_velocities,
        )
        final = traj.final_positions()
        chain = scn.chain.with_positions(final)
        forces = forces_exact(chain, scn.mode_list()).total
        jac = force_jacobian(chain, scn.mode_list())
        q = _translation_complement(chain.n)
        eigs = np.linalg.eigvals(q.T @ jac @ q)
        gaps = [final[j + 1] - final[j] for j in range(len(final) - 1)]
        return {
            "gaps": gaps,
            "com_velocity": com_velocity(traj),
            "residual": max(abs(f) for f in forces),
            "stability": _classify(eigs),
            "error": "",
        }
    except LightLatticeError as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}
    except Exception as exc:  # pragma: no cover - defensive
        return {"error": f"{type(exc).__name__}: {exc}"}


def _thread_count() -> int:
    raw = os.environ.get("LIGHTLATTICE_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise ScenarioError(
                f"LIGHTLATTICE_THREADS must be an integer, got {raw!r}"
            ) from None
        if n < 1:
            raise ScenarioError("LIGHTLATTICE_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def cmd_sweep(args) -> int:
    scn = _load(args)
    if scn.sweep_axes is None or not scn.sweep_axes:
        raise ScenarioError("sweep needs a sweep block with at least one axis")
    if scn.dynamics is None:
        raise ScenarioError("sweep needs a dynamics block")
    n = scn.chain.n
    axes = scn.sweep_axes
    grids = [ax.values() for ax in axes]
    doc_json = json.dumps(scn.doc, sort_keys=True)
    cells = []
    for combo in itertools.product(*grids):
        assignments = [(ax.path, v) for ax, v in zip(axes, combo)]
        cells.append((combo, (doc_json, assignments)))
    threads = _thread_count()
    if threads <= 1 or len(cells) <= 2:
        results = [_sweep_cell(payload) for _, payload in cells]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sweep_cell, [p for _, p in cells]))
    axis_cols = [ax.path.replace(".", "_") for ax in axes]
    columns = axis_cols + [f"gap_{j + 1}" for j in range(n - 1)] + [
        "com_velocity", "residual", "stability", "error",
    ]
    rows = []
    for (combo, _), res in zip(cells, results):
        row = list(combo)
        if res.get("error"):
            row += [math.nan] * (n - 1) + [math.nan, math.nan, "failed",
                                           res["error"].replace(",", ";")]
        else:
            row += res["gaps"] + [
                res["com_velocity"], res["residual"], res["stability"], "",
            ]
        rows.append(row)
    pre = _prefix(scn)
    _write_csv(
        _out_path(args, f"{pre}sweep.csv"),
        "sweep", scn.sha, scn.name, columns, rows,
    )
    return 0


def cmd_design(args) -> int:
    if args.d is not None:
        d_values = list(args.d)
    else:
        if args.steps < 2 or args.d_max <= args.d_min:
            raise ScenarioError("bad distance grid")
        d_values = [
            args.d_min + i * (args.d_max - args.d_min) / (args.steps - 1)
            for i in range(args.steps)
        ]
    if not d_values:
        raise ScenarioError("no target distances given")
    k_y = args.k_y * K_REF
    params_doc = {
        "command": "design",
        "d": d_values,
        "k_y": args.k_y,
        "zeta": args.zeta,
        "band_max": args.band_max,
        "i_y": args.i_y,
        "refine": not args.no_refine,
    }
    sha = scenario_hash(params_doc)
    columns = [
        "d", "k_z_over_k_y", "k_z", "p", "p1", "p2", "physical",
        "residual_f1", "residual_f2", "stability", "refined", "error",
    ]
    rows = []
    for d in d_values:
        try:
            cands = design_wavenumber(
                d,
                k_y,
                zeta=args.zeta,
                band=(1e-9, args.band_max * k_y),
                i_y=args.i_y,
                refine=not args.no_refine,
            )
        except NoSolution as exc:
            rows.append(
                [d] + [math.nan] * 5 + [False, math.nan, math.nan, "n/a", False,
                                        str(exc).replace(",", ";")]
            )
            continue
        for c in cands:
            rows.append([
                d, c.k_z / k_y, c.k_z / K_REF, c.p, c.p1, c.p2, c.physical,
                c.residual_f1, c.residual_f2, c.stability, c.refined, "",
            ])
    os.makedirs(args.out, exist_ok=True)
    _write_csv(
        os.path.join(args.out, "design.csv"),
        "design", sha, "design-parameters", columns, rows,
    )
    return 0


def cmd_modes(args) -> int:
    scn = _load(args)
    chain, modes = scn.chain, scn.mode_list()
    if chain.n != 2:
        raise ScenarioError("mode analysis needs a two-scatterer lattice")
    if not modes:
        raise ScenarioError("mode analysis needs a standing-wave mode")
    sw = modes[0]
    i_l = abs(sw.drive_left) ** 2 / 2.0
    i_r = abs(sw.drive_right) ** 2 / 2.0
    if i_l <= 0 or i_r <= 0:
        raise ScenarioError("the first mode must drive from both sides")
    zeta = chain.zeta_base[0]
    if zeta.imag != 0.0:
        raise ScenarioError("mode analysis is defined for real coupling")
    zeta_eff = zeta.real * sw.effective_scale
    i_p = 0.0
    k_p = None
    zeta_p = None
    if len(modes) > 1:
        p = modes[1]
        i_p = abs(p.drive_left) ** 2 / 2.0
        k_p = p.k
        # the linearization must see the same coupling the field solver
        # applies to this mode, so resolve the default here
        zeta_p = p.zeta_override
        if zeta_p is None:
            zeta_p = zeta.real * p.effective_scale
        if abs(p.drive_right) > 0:
            raise ScenarioError("the perturbation mode must drive from the left")
    mass = scn.dynamics.mass if scn.dynamics is not None else args.mass
    lattice = build_lattice(
        2, i_l, i_r, zeta_eff, k=sw.k, i_p=i_p, k_p=k_p, zeta_p=zeta_p
    )
    model = linearize_pair_in_lattice(lattice, mass=mass)
    try:
        nm = normal_modes(model)
        mode_block = {
            "omega1": nm.omega1,
            "omega2": nm.omega2,
            "vector1": list(nm.vector1),
            "vector2": list(nm.vector2),
            "offset": nm.offset,
        }
    except (UnstableMode, ValueError) as exc:
        mode_block = {"error": str(exc)}
    payload = {
        "equilibrium": {
            "positions": list(lattice.positions),
            "d_sw": lattice.d_sw,
            "x0_seed": lattice.x0,
            "asymmetry": lattice.asymmetry,
        },
        "model": {
            "K": model.k_spring,
            "kappa1": model.kappa1,
            "kappa2": model.kappa2,
            "f_ext": model.f_ext,
            "mass": model.mass,
            "constants": model.constants,
            "identities": model.identities,
        },
        "normal_modes": mode_block,
    }
    pre = _prefix(scn)
    _write_json(
        _out_path(args, f"{pre}modes.json"),
        "modes", scn.sha, scn.name, payload,
    )
    ip_max = args.ip_max if args.ip_max is not None else (2.0 * i_p if i_p > 0 else 1.0)
    ip_values = [
        ip_max * i / (args.ip_steps - 1) for i in range(args.ip_steps)
    ] if args.ip_steps > 1 else [ip_max]
    rows = []
    for ip in ip_values:
        lat = dataclasses.replace(lattice, i_p=ip)
        mdl = linearize_pair_in_lattice(lat, mass=mass)
        rows.append([
            ip, mdl.k_spring, mdl.kappa1, mdl.kappa2, mdl.f_ext,
        ])
    _write_csv(
        _out_path(args, f"{pre}coupling_sweep.csv"),
        "modes", scn.sha, scn.name,
        ["i_p", "K", "kappa1", "kappa2", "f_ext"], rows,
    )
    return 0


def cmd_zerolines(args) -> int:
    scn = _load(args)
    chain, modes = scn.chain, scn.mode_list()
    if chain.n != 3:
        raise ScenarioError("zero-force map needs a three-scatterer chain")
    for lo, hi, steps in ((args.d1_min, args.d1_max, args.d1_steps),
                          (args.d2_min, args.d2_max, args.d2_steps)):
        if steps < 2 or hi <= lo:
            raise ScenarioError("bad separation grid")
    d1 = [args.d1_min + i * (args.d1_max - args.d1_min) / (args.d1_steps - 1)
          for i in range(args.d1_steps)]
    d2 = [args.d2_min + i * (args.d2_max - args.d2_min) / (args.d2_steps - 1)
          for i in range(args.d2_steps)]
    grid = zero_force_grid(chain, modes, d1, d2)
    rows = []
    for i, a in enumerate(grid.d1):
        for j, b in enumerate(grid.d2):
            rows.append([a, b, grid.f1[i, j], grid.f2[i, j], grid.f3[i, j]])
    pre = _prefix(scn)
    _write_csv(
        _out_path(args, f"{pre}zerolines.csv"),
        "zerolines", scn.sha, scn.name,
        ["d1", "d2", "f1", "f2", "f3"], rows,
    )
    return 0


# ------------------------------------------------------------------ parser

def _add_common(sub):
    sub.add_argument("--scenario", help="scenario JSON file")
    sub.add_argument("--preset", help=f"built-in scenario ({', '.join(preset_names())})")
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument(
        "--ip-scale", type=float, default=1.0,
        help="scale factor on the perturbation intensity of a preset",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lightlattice",
        description="Light fields, forces, and motion of scatterer chains.",
    )
    parser.add_argument("--version", action="version",
                        version=f"lightlattice {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("fields", help="intensity profile and mode amplitudes")
    _add_common(p)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--samples", type=int, default=801)
    p.set_defaults(func=cmd_fields)

    p = subs.add_parser("forces", help="pair force-vs-distance table")
    _add_common(p)
    p.add_argument("--d-min", type=float, default=0.02)
    p.add_argument("--d-max", type=float, default=0.98)
    p.add_argument("--steps", type=int, default=193)
    p.set_defaults(func=cmd_forces)

    p = subs.add_parser("relax", help="overdamped relaxation to steady state")
    _add_common(p)
    p.set_defaults(func=cmd_relax)

    p = subs.add_parser("evolve", help="time evolution in either regime")
    _add_common(p)
    p.set_defaults(func=cmd_evolve)

    p = subs.add_parser("sweep", help="parallel parameter sweep")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("design", help="wavenumber/intensity design table")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--d", type=float, action="append",
                   help="target distance (repeatable, reference wavelengths)")
    p.add_argument("--d-min", type=float, default=0.05)
    p.add_argument("--d-max", type=float, default=0.45)
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--k-y", type=float, default=1.0,
                   help="first-beam wavenumber in reference units")
    p.add_argument("--zeta", type=float, default=0.01)
    p.add_argument("--band-max", type=float, default=4.0,
                   help="largest k_z/k_y candidate kept")
    p.add_argument("--i-y", type=float, default=1.0)
    p.add_argument("--no-refine", action="store_true",
                   help="skip Newton refinement against the exact forces")
    p.set_defaults(func=cmd_design)

    p = subs.add_parser("modes", help="linearized pair model and couplings")
    _add_common(p)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--ip-max", type=float, default=None)
    p.add_argument("--ip-steps", type=int, default=21)
    p.set_defaults(func=cmd_modes)

    p = subs.add_parser("zerolines", help="three-splitter force map over (d1, d2)")
    _add_common(p)
    p.add_argument("--d1-min", type=float, default=0.05)
    p.add_argument("--d1-max", type=float, default=0.95)
    p.add_argument("--d1-steps", type=int, default=41)
    p.add_argument("--d2-min", type=float, default=0.05)
    p.add_argument("--d2-max", type=float, default=0.95)
    p.add_argument("--d2-steps", type=int, default=41)
    p.set_defaults(func=cmd_zerolines)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoConvergence, SeparationViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except LightLatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
