"""Command-line front end producing the CSV datasets behind the field scans.

Subcommands
-----------
spectrum
    Transmittance/reflectance sweep, Markov closed forms next to the
    exact lattice expressions.
field
    Field envelopes and energy densities on a position/frequency grid
    (behind, before, or between the qubits).
beating
    Time series of the steady transmitted energy density at a fixed
    point for detuned drives, with the FFT beat-peak report.
peaks
    Reflected resonance-peak value against distance from the first
    qubit, closed formula next to the directly evaluated steady field.
oracle-check
    Runs the oracle-vs-closed-form validation suite and exits nonzero
    on any tolerance failure.

Scenarios are INI files (flat ``key = value`` under sections); named
presets embed the parameter sets of the survey figures.  Output is CSV
with ``#``-prefixed metadata lines, and every run with the same scenario
produces byte-identical output (fixed 17-significant-digit floats, no
timestamps).  The environment variable WQED_THREADS caps the evaluation
thread pool.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys

import numpy as np

from .model import ModelParams, classify_regime, collective_rates
from . import fields
from .version import __version__

_SECTIONS = {
    "model": ("omega_q_ghz", "omega_q_rad_s", "gamma_ratio", "gamma_rad_s",
              "distance_m", "phase_over_pi", "v_g_m_s",
              "omega_s_over_omega_q", "omega_s_rad_s", "amplitude"),
    "sweep": ("omega_min_over_omega_q", "omega_max_over_omega_q", "points"),
    "grid": ("x_over_d", "t_s", "branch"),
    "beating": ("x0_over_d", "detunings_over_omega_q", "n_periods",
                "n_samples"),
    "peaks": ("x_min_over_d", "x_max_over_d", "points", "t_s"),
    "output": ("path",),
}


class ScenarioError(Exception):
    """Raised for malformed or inconsistent scenario input."""


# ---------------------------------------------------------------------------
# presets: caption parameter sets of the survey figures

def _preset(command, caption, model, **extra):
    entry = {"command": command, "caption": caption, "model": model}
    entry.update(extra)
    return entry


_SPECTRUM_SWEEP = {"omega_min_over_omega_q": 0.98,
                   "omega_max_over_omega_q": 1.02, "points": 2001}
_WIDE_SWEEP = {"omega_min_over_omega_q": 0.8,
               "omega_max_over_omega_q": 1.2, "points": 2001}
_WEAK = {"omega_q_ghz": 5.0, "gamma_ratio": 0.01, "v_g_m_s": 3.0e8}
_STRONG = {"omega_q_ghz": 5.0, "gamma_ratio": 0.1, "v_g_m_s": 3.0e8}

PRESETS = {
    "fig2": _preset(
        "spectrum",
        "Markovian vs exact transmittance; Gamma/Omega=0.01, "
        "Omega/2pi=5 GHz, k_Omega d=pi/2",
        dict(_WEAK, phase_over_pi=0.5), sweep=dict(_SPECTRUM_SWEEP)),
    "fig3": _preset(
        "spectrum",
        "Markovian vs exact transmittance; Gamma/Omega=0.1, "
        "Omega/2pi=5 GHz, k_Omega d=5pi",
        dict(_STRONG, phase_over_pi=5.0), sweep=dict(_WIDE_SWEEP)),
    "fig6": _preset(
        "field",
        "Transmitted energy behind the second qubit; resonance line at "
        "x=3d and spatial decay from x=1.05d for "
        "(omega_S-Omega)/Omega=+-0.007; Gamma/Omega=0.01, "
        "Omega/2pi=5 GHz, d=0.015 m (k_Omega d=pi/2)",
        dict(_WEAK, phase_over_pi=0.5),
        grid={"t_s": 5.0e-6, "branch": "steady"},
        blocks=[
            {"kind": "line", "x_over_d": [3.0],
             "omega_lo": 0.98, "omega_hi": 1.02, "points": 1001},
            {"kind": "scan", "omega_s_over_omega_q": [1.007, 0.993],
             "x_lo": 1.05, "x_hi": 60.0, "points": 1180},
        ]),
    "fig7": _preset(
        "beating",
        "Beatings of the field energy behind the second qubit at x=2d; "
        "(omega_S-Omega)/Omega=0.01 and 0.02; Gamma/Omega=0.01, "
        "Omega/2pi=5 GHz, k_Omega d=2pi, d=0.06 m",
        dict(_WEAK, phase_over_pi=2.0),
        beating={"x0_over_d": 2.0,
                 "detunings_over_omega_q": [0.01, 0.02],
                 "n_periods": 40, "n_samples": 4096}),
    "fig8": _preset(
        "peaks",
        "Peak value of the reflected resonance line vs distance from the "
        "first qubit; k_Omega d=pi/2, Omega/2pi=5 GHz, Gamma/Omega=0.01, "
        "d=0.015 m",
        dict(_WEAK, phase_over_pi=0.5),
        peaks={"x_min_over_d": -8.0, "x_max_over_d": -0.05,
               "points": 1591, "t_s": 5.0e-6}),
    "fig9": _preset(
        "field",
        "Photon field between qubits for k_Omega d=pi/2; resonance lines "
        "at x=0.5d, 0.25d, 0.75d and spatial dependence for "
        "omega_S/Omega=1, 1.01, 0.99, 1.02, 0.98; Gamma/Omega=0.01, "
        "Omega/2pi=5 GHz, d=0.015 m",
        dict(_WEAK, phase_over_pi=0.5),
        grid={"t_s": 5.0e-6, "branch": "steady"},
        blocks=[
            {"kind": "line", "x_over_d": [0.5, 0.25, 0.75],
             "omega_lo": 0.98, "omega_hi": 1.02, "points": 1001},
            {"kind": "scan",
             "omega_s_over_omega_q": [1.0, 1.01, 0.99, 1.02, 0.98],
             "x_lo": 0.05, "x_hi": 0.95, "points": 451},
        ]),
    "fig10": _preset(
        "field",
        "Reflected resonance lines for k_Omega d=2pi at x=-0.5d, -d, "
        "-2d and the x=-infinity (reflectance) limit, t=5e-6 s; "
        "Gamma/Omega=0.01, Omega/2pi=5 GHz, d=0.06 m",
        dict(_WEAK, phase_over_pi=2.0),
        grid={"t_s": 5.0e-6, "branch": "steady"},
        blocks=[
            {"kind": "line", "x_over_d": [-0.5, -1.0, -2.0],
             "omega_lo": 0.98, "omega_hi": 1.02, "points": 1001},
            {"kind": "reflectance_limit",
             "omega_lo": 0.98, "omega_hi": 1.02, "points": 1001},
        ]),
    "fig11": _preset(
        "field",
        "Photon field between qubits for k_Omega d=2pi; resonance lines "
        "at x=0.25d, 0.5d, 0.75d and spatial dependence for "
        "omega_S/Omega=1, 1.01, 0.99, 1.02, 0.98; Gamma/Omega=0.01, "
        "Omega/2pi=5 GHz, d=0.06 m",
        dict(_WEAK, phase_over_pi=2.0),
        grid={"t_s": 5.0e-6, "branch": "steady"},
        blocks=[
            {"kind": "line", "x_over_d": [0.25, 0.5, 0.75],
             "omega_lo": 0.98, "omega_hi": 1.02, "points": 1001},
            {"kind": "scan",
             "omega_s_over_omega_q": [1.0, 1.01, 0.99, 1.02, 0.98],
             "x_lo": 0.05, "x_hi": 0.95, "points": 451},
        ]),
}
# reflectance figures share the transmittance parameter sets
PRESETS["fig4"] = dict(PRESETS["fig2"],
                       caption=PRESETS["fig2"]["caption"].replace(
                           "transmittance", "reflectance"))
PRESETS["fig5"] = dict(PRESETS["fig3"],
                       caption=PRESETS["fig3"]["caption"].replace(
                           "transmittance", "reflectance"))


# ---------------------------------------------------------------------------
# scenario assembly

def _parse_value(raw):
    """Interpret an INI value: list if comma-separated, float if numeric."""
    raw = raw.strip()
    if "," in raw:
        return [_parse_value(part) for part in raw.split(",")]
    try:
        return float(raw)
    except ValueError:
        return raw


def read_scenario(path):
    """Read an INI scenario file into {section: {key: value}}.

    Raises ScenarioError with the configparser line number on syntax
    errors and names the offending section/key on unknown entries.
    """
    parser = configparser.ConfigParser()
    try:
        with open(path) as handle:
            parser.read_file(handle, source=path)
    except OSError as exc:
        raise ScenarioError(f"cannot read config: {exc}") from exc
    except configparser.Error as exc:
        raise ScenarioError(f"config parse error: {exc}") from exc
    scenario = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ScenarioError(
                f"unknown config section [{section}]; expected one of "
                + ", ".join(sorted(_SECTIONS)))
        allowed = _SECTIONS[section]
        scenario[section] = {}
        for key, raw in parser.items(section):
            if key not in allowed:
                raise ScenarioError(
                    f"unknown key '{key}' in section [{section}]; allowed: "
                    + ", ".join(allowed))
            scenario[section][key] = _parse_value(raw)
    return scenario


def _build_params(model_cfg) -> ModelParams:
    """Resolve the [model] mapping into ModelParams (radians internally)."""
    cfg = dict(model_cfg)
    if "omega_q_rad_s" in cfg:
        omega_q = float(cfg.pop("omega_q_rad_s"))
        cfg.pop("omega_q_ghz", None)
    elif "omega_q_ghz" in cfg:
        omega_q = 2.0 * np.pi * 1.0e9 * float(cfg.pop("omega_q_ghz"))
    else:
        raise ScenarioError("model needs omega_q_ghz or omega_q_rad_s")
    if "gamma_rad_s" in cfg:
        gamma = float(cfg.pop("gamma_rad_s"))
        cfg.pop("gamma_ratio", None)
    elif "gamma_ratio" in cfg:
        gamma = float(cfg.pop("gamma_ratio")) * omega_q
    else:
        raise ScenarioError("model needs gamma_ratio or gamma_rad_s")
    v_g = float(cfg.pop("v_g_m_s", 3.0e8))
    if "distance_m" in cfg:
        distance = float(cfg.pop("distance_m"))
        cfg.pop("phase_over_pi", None)
    elif "phase_over_pi" in cfg:
        distance = float(cfg.pop("phase_over_pi")) * np.pi * v_g / omega_q
    else:
        raise ScenarioError("model needs distance_m or phase_over_pi")
    if "omega_s_rad_s" in cfg:
        omega_s = float(cfg.pop("omega_s_rad_s"))
        cfg.pop("omega_s_over_omega_q", None)
    else:
        omega_s = float(cfg.pop("omega_s_over_omega_q", 1.0)) * omega_q
    amplitude = float(cfg.pop("amplitude", 1.0))
    return ModelParams.create(omega_q, gamma, distance, v_g=v_g,
                              omega_s=omega_s, amplitude=amplitude)


def build_scenario(args):
    """Merge preset defaults and config overrides into one scenario dict."""
    if not args.preset and not args.config:
        raise ScenarioError("provide --preset and/or --config")
    scenario = {"command": args.command, "caption": None, "model": {},
                "sweep": {}, "grid": {}, "beating": {}, "peaks": {},
                "blocks": None, "out": None}
    if args.preset:
        if args.preset not in PRESETS:
            raise ScenarioError(
                f"unknown preset '{args.preset}'; expected one of "
                + ", ".join(sorted(PRESETS)))
        preset = PRESETS[args.preset]
        if preset["command"] != args.command:
            raise ScenarioError(
                f"preset {args.preset} belongs to the "
                f"'{preset['command']}' subcommand")
        scenario["caption"] = preset["caption"]
        scenario["model"].update(preset["model"])
        for part in ("sweep", "grid", "beating", "peaks"):
            scenario[part].update(preset.get(part, {}))
        scenario["blocks"] = preset.get("blocks")
    if args.config:
        overrides = read_scenario(args.config)
        for part in ("model", "sweep", "grid", "beating", "peaks"):
            scenario[part].update(overrides.get(part, {}))
        if "output" in overrides and "path" in overrides["output"]:
            scenario["out"] = overrides["output"]["path"]
    if args.out:
        scenario["out"] = args.out
    if scenario["out"] is None:
        name = args.preset if args.preset else args.command
        scenario["out"] = f"{name}.csv"
    scenario["params"] = _build_params(scenario["model"])
    return scenario


# ---------------------------------------------------------------------------
# deterministic CSV/JSON output

def _fmt(value):
    if isinstance(value, str):
        return value
    return "%.17g" % value


def _header_lines(scenario, extra=()):
    p = scenario["params"]
    regime = classify_regime(p)
    lines = [f"wqed {__version__}", f"command: {scenario['command']}"]
    if scenario["caption"]:
        lines.append(f"caption: {scenario['caption']}")
    lines += [
        "omega_q_rad_s = %.17g" % p.omega_q,
        "omega_q_ghz = %.17g" % (p.omega_q / (2.0 * np.pi * 1.0e9)),
        "gamma_rad_s = %.17g" % p.gamma,
        "gamma_ratio = %.17g" % (p.gamma / p.omega_q),
        "distance_m = %.17g" % p.distance,
        "phase_over_pi = %.17g" % (p.qubit_phase / np.pi),
        "v_g_m_s = %.17g" % p.v_g,
        "omega_s_rad_s = %.17g" % p.omega_s,
        "omega_s_over_omega_q = %.17g" % (p.omega_s / p.omega_q),
        "amplitude = %.17g" % p.amplitude,
        f"regime = {regime.value}",
    ]
    lines.extend(extra)
    return lines


def write_csv(path, lines, columns, rows):
    """Write '#'-commented metadata, a column header, and %.17g rows."""
    with open(path, "w", newline="") as handle:
        for line in lines:
            handle.write(f"# {line}\n")
        handle.write(",".join(columns) + "\n")
        for row in rows:
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(path, lines, columns, rows):
    payload = {
        "meta": list(lines),
        "columns": list(columns),
        "rows": [[v if isinstance(v, str) else float(v) for v in row]
                 for row in rows],
    }
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=1, sort_keys=False)
        handle.write("\n")


def _emit(scenario, args, lines, columns, rows):
    out = scenario["out"]
    write_csv(out, lines, columns, rows)
    written = [out]
    if args.json:
        json_path = out[:-4] + ".json" if out.endswith(".csv") \
            else out + ".json"
        write_json(json_path, lines, columns, rows)
        written.append(json_path)
    return written


# ---------------------------------------------------------------------------
# subcommands

def cmd_spectrum(scenario, args):
    """Markov vs exact transmittance/reflectance sweep."""
    p = scenario["params"]
    sweep = scenario["sweep"]
    lo = float(sweep.get("omega_min_over_omega_q", 0.98))
    hi = float(sweep.get("omega_max_over_omega_q", 1.02))
    points = int(sweep.get("points", 2001))
    rates = collective_rates(p)
    ratio = np.linspace(lo, hi, points)
    omega = ratio * p.omega_q
    t_markov = fields.transmittance(omega, rates, p)
    r_markov = fields.reflectance(omega, rates, p)
    t_exact = fields.nonmarkov_transmittance(omega, p)
    r_exact = fields.nonmarkov_reflectance(omega, p)
    flux = t_markov + r_markov - 1.0
    columns = ["omega_over_Omega", "T_markov", "R_markov",
               "T_nonmarkov", "R_nonmarkov", "flux_sum"]
    rows = list(zip(ratio, t_markov, r_markov, t_exact, r_exact, flux))
    extra = ["sweep = %.17g .. %.17g, %d points" % (lo, hi, points),
             "max_abs_T_difference = %.17g"
             % float(np.max(np.abs(t_markov - t_exact))),
             "max_abs_R_difference = %.17g"
             % float(np.max(np.abs(r_markov - r_exact)))]
    written = _emit(scenario, args, _header_lines(scenario, extra),
                    columns, rows)
    print(f"wrote {', '.join(written)} ({len(rows)} rows)")
    return 0


_FIELD_COLUMNS = ["curve", "x_over_d", "omega_s_over_omega_q",
                  "u_re", "u_im", "v_re", "v_im", "w_re", "w_im",
                  "energy_u", "energy_v", "energy_w"]


def _field_rows_for(params, x_over_d, t, branch, label, ratio=None):
    """Rows of the field table for one drive frequency and x array."""
    d = params.distance
    x = np.asarray(x_over_d, dtype=float) * d
    grid = fields.space_time_grid(params, x, [t])
    rates = collective_rates(params)
    if grid.region is fields.Region.BEHIND:
        fs = fields.forward_field(grid, rates, params, branch=branch)
        u = fs.u[0]
        v = np.zeros_like(u)
        w = u
    elif grid.region is fields.Region.BEFORE:
        fs = fields.backward_field(grid, rates, params, branch=branch)
        v = fs.v[0]
        u = fields.incident_plane_wave(x, t, params)
        w = u + v
    else:
        fs = fields.interqubit_field(grid, rates, params, branch=branch)
        u, v, w = fs.u[0], fs.v[0], fs.w[0]
    amp2 = params.amplitude ** 2
    if ratio is None:
        ratio = params.omega_s / params.omega_q
    rows = []
    for i, xod in enumerate(np.asarray(x_over_d, dtype=float)):
        rows.append((label, xod, ratio,
                     u[i].real, u[i].imag, v[i].real, v[i].imag,
                     w[i].real, w[i].imag,
                     abs(u[i]) ** 2 / amp2, abs(v[i]) ** 2 / amp2,
                     abs(w[i]) ** 2 / amp2))
    return rows


def cmd_field(scenario, args):
    """Field envelopes and normalized energies over position/frequency."""
    p = scenario["params"]
    grid_cfg = scenario["grid"]
    t = float(grid_cfg.get("t_s", 5.0e-6))
    branch = str(grid_cfg.get("branch", "auto"))
    blocks = scenario["blocks"]
    if blocks is None:
        x_over_d = grid_cfg.get("x_over_d")
        if x_over_d is None:
            raise ScenarioError("field command needs grid.x_over_d "
                                "(or a figure preset)")
        if not isinstance(x_over_d, list):
            x_over_d = [x_over_d]
        blocks = [{"kind": "fixed", "x_over_d": x_over_d}]
    rows = []
    for block in blocks:
        kind = block["kind"]
        if kind == "line":
            ratios = np.linspace(block["omega_lo"], block["omega_hi"],
                                 int(block["points"]))
            for xod in block["x_over_d"]:
                label = "line:x=%gd" % xod
                for ratio in ratios:
                    drive = p.with_drive(ratio * p.omega_q)
                    rows.extend(_field_rows_for(drive, [xod], t, branch,
                                                label, ratio=float(ratio)))
        elif kind == "scan":
            x_over_d = np.linspace(block["x_lo"], block["x_hi"],
                                   int(block["points"]))
            for ratio in block["omega_s_over_omega_q"]:
                drive = p.with_drive(float(ratio) * p.omega_q)
                label = "scan:ws=%g" % ratio
                rows.extend(_field_rows_for(drive, x_over_d, t, branch,
                                            label, ratio=float(ratio)))
        elif kind == "fixed":
            # plain config path: the configured drive, a handful of x values
            ratio = float(p.omega_s / p.omega_q)
            label = "fixed:ws=%g" % ratio
            for xod in block["x_over_d"]:
                rows.extend(_field_rows_for(p, [float(xod)], t, branch,
                                            label, ratio=ratio))
        elif kind == "reflectance_limit":
            ratios = np.linspace(block["omega_lo"], block["omega_hi"],
                                 int(block["points"]))
            omega = ratios * p.omega_q
            rates = collective_rates(p)
            refl = fields.reflectance(omega, rates, p)
            nan = float("nan")
            for ratio, r_val in zip(ratios, refl):
                rows.append(("line:x=-inf", -np.inf, ratio,
                             nan, nan, nan, nan, nan, nan,
                             nan, float(r_val), nan))
        else:
            raise ScenarioError(f"unknown field block kind '{kind}'")
    extra = ["t_s = %.17g" % t, f"branch = {branch}",
             "energies normalized by amplitude^2"]
    written = _emit(scenario, args, _header_lines(scenario, extra),
                    _FIELD_COLUMNS, rows)
    print(f"wrote {', '.join(written)} ({len(rows)} rows)")
    return 0


def cmd_beating(scenario, args):
    """Steady transmitted energy time series and FFT beat peaks."""
    p = scenario["params"]
    cfg = scenario["beating"]
    x0 = float(cfg.get("x0_over_d", 2.0)) * p.distance
    detunings = cfg.get("detunings_over_omega_q", [0.01, 0.02])
    if not isinstance(detunings, list):
        detunings = [detunings]
    n_periods = int(cfg.get("n_periods", 40))
    n_samples = int(cfg.get("n_samples", 4096))
    rows = []
    extra = ["x0_m = %.17g" % x0,
             "n_periods = %d" % n_periods, "n_samples = %d" % n_samples]
    peaks = []
    for det in detunings:
        drive = p.with_drive((1.0 + float(det)) * p.omega_q)
        rates = collective_rates(drive)
        label = "det=%g" % det
        t, energy = fields.beat_note_series(drive, rates, x0,
                                            n_periods=n_periods,
                                            n_samples=n_samples)
        _, _, peak, expected = fields.beat_note_spectrum(
            drive, rates, x0, n_periods=n_periods, n_samples=n_samples)
        amp2 = drive.amplitude ** 2
        for ti, ei in zip(t, energy):
            rows.append((label, ti, ei / amp2))
        extra.append("beat_peak_hz[%s] = %.17g (expected %.17g, "
                     "period %.17g s)" % (label, peak, expected,
                                          1.0 / expected))
        peaks.append((label, peak, expected))
    columns = ["curve", "t_s", "energy_u"]
    written = _emit(scenario, args, _header_lines(scenario, extra),
                    columns, rows)
    print(f"wrote {', '.join(written)} ({len(rows)} rows)")
    for label, peak, expected in peaks:
        print(f"  {label}: FFT peak {peak:.6g} Hz, "
              f"expected {expected:.6g} Hz")
    return 0


def cmd_peaks(scenario, args):
    """Reflected resonance-peak value vs distance, formula and direct."""
    p = scenario["params"]
    cfg = scenario["peaks"]
    lo = float(cfg.get("x_min_over_d", -8.0))
    hi = float(cfg.get("x_max_over_d", -0.05))
    points = int(cfg.get("points", 1591))
    t = float(cfg.get("t_s", 5.0e-6))
    x_over_d = np.linspace(lo, hi, points)
    x = x_over_d * p.distance
    peak_formula = fields.reflected_resonance_peak(x, p)
    rates = collective_rates(p)
    v = fields.steady_backward(x, t, rates, p)
    direct = np.abs(v) ** 2 / p.amplitude ** 2
    columns = ["x_over_d", "peak_value", "energy_at_resonance"]
    rows = list(zip(x_over_d, peak_formula, direct))
    extra = ["t_s = %.17g" % t,
             "max_peak_value = %.17g" % float(np.max(peak_formula)),
             "max_abs_formula_vs_direct = %.17g"
             % float(np.max(np.abs(peak_formula - direct)))]
    written = _emit(scenario, args, _header_lines(scenario, extra),
                    columns, rows)
    print(f"wrote {', '.join(written)} ({len(rows)} rows)")
    return 0


# ---------------------------------------------------------------------------
# oracle-check

def _check(name, err, tol):
    status = "PASS" if err < tol else "FAIL"
    print(f"{status} {name}: max_err={err:.3e} (tol {tol:.1e})")
    return {"name": name, "max_err": float(err), "tol": float(tol),
            "passed": bool(err < tol)}


def closed_kernel(kernel_id, x_shift, t, rates, params):
    """Closed-form counterpart of ``oracle.quad_kernel`` by kernel id."""
    forward = kernel_id.startswith("fwd")
    if "decay" in kernel_id:
        gamma_c = rates.gamma_plus if kernel_id.endswith("plus") \
            else rates.gamma_minus
        omega_c = params.omega_q - 1j * gamma_c
        fn = fields.decay_kernel_fwd if forward else fields.decay_kernel_bwd
        return fn(x_shift, t, omega_c, params)
    if "drive" in kernel_id:
        fn = fields.drive_kernel_fwd if forward else fields.drive_kernel_bwd
        return fn(x_shift, t, params)
    return fields.resonant_kernel("fwd" if forward else "bwd",
                                  x_shift, t, params)


def cmd_oracle_check(scenario, args):
    """Validation suite: closed forms against the brute-force oracles."""
    from . import amplitudes, oracle, specfun

    results = []
    rng = np.random.default_rng(20260822)
    omega_q = 2.0 * np.pi * 5.0e9
    gamma = 0.01 * omega_q

    # special functions: identities, asymptotics, reference value
    x = rng.uniform(0.05, 60.0, 400)
    err = np.max(np.abs(specfun.si_lower(x) + specfun.si_lower(-x) + np.pi))
    results.append(_check("si reflection identity", err, 1.0e-12))
    # the two-term expansions truncate at O(1/x^3), so sample x >= 30
    big = rng.uniform(30.0, 100.0, 200)
    asym_si = -np.cos(big) / big - np.sin(big) / big ** 2
    asym_ci = np.sin(big) / big - np.cos(big) / big ** 2
    err = max(np.max(np.abs(specfun.si_lower(big) - asym_si)),
              np.max(np.abs(specfun.cosine_integral(big) - asym_ci)))
    results.append(_check("si/ci large-argument asymptotics", err, 1.0e-4))
    radius = rng.uniform(150.0, 400.0, 100)
    angle = rng.uniform(-2.0, 2.0, 100)
    z = radius * np.exp(1j * angle)
    asym_e1 = np.exp(-z) / z * (1.0 - 1.0 / z)
    err = np.max(np.abs(specfun.exp_integral_e1(z) / asym_e1 - 1.0))
    results.append(_check("E1 large-argument asymptotics", err, 1.0e-4))
    err = abs(specfun.exp_integral_e1(1.0) - 0.21938393439552029)
    results.append(_check("E1(1) reference value", err, 1.0e-6))

    # damped kernels against oscillatory quadrature
    params = {}
    for tag, phase in (("generic", 0.8), ("even", 2.0), ("odd", 5.0)):
        params[tag] = ModelParams.from_phase(
            omega_q, gamma, phase, omega_s=1.005 * omega_q)
    rates_for = {tag: collective_rates(p) for tag, p in params.items()}
    n_samples = 12 if not args.full else 24
    worst = 0.0
    for i in range(n_samples):
        tag = ("generic", "even", "odd")[i % 3]
        p = params[tag]
        rates = rates_for[tag]
        kernel_id = oracle.KERNEL_IDS[i % len(oracle.KERNEL_IDS)]
        d = p.distance
        t = rng.uniform(0.2, 2.0) * 40.0 / gamma
        if kernel_id.startswith("bwd"):
            x_shift = rng.uniform(-4.0, -0.1) * d
        else:
            x_shift = rng.uniform(1.1, 5.0) * d
        closed = closed_kernel(kernel_id, x_shift, t, rates, p)
        brute = oracle.quad_kernel(kernel_id, x_shift, t, p, rates)
        scale = max(abs(brute), 1.0e-3)
        worst = max(worst, abs(complex(closed) - brute) / scale)
    results.append(_check(f"damped kernels vs quadrature ({n_samples} samples)",
                          worst, 1.0e-3))

    # qubit amplitudes against the independent ODE integration
    worst = 0.0
    for tag in ("generic", "even"):
        p = params[tag]
        rates = rates_for[tag]
        ode = oracle.markov_ode(p, 20.0 / gamma, keep_every=50)
        state = amplitudes.qubit_amplitudes(rates, p, ode.t)
        worst = max(worst,
                    float(np.max(np.abs(state.beta_1 - ode.beta_1))),
                    float(np.max(np.abs(state.beta_2 - ode.beta_2))))
    results.append(_check("qubit amplitudes vs Markov ODE", worst, 1.0e-6))

    # resonance-peak formulas against directly evaluated steady fields
    p = params["generic"].with_drive(omega_q)
    rates = collective_rates(p)
    t_late = 5.0e-6
    x_b = np.array([-2.0, -4.0, -6.0]) * p.distance
    direct = np.abs(fields.steady_backward(x_b, t_late, rates, p)) ** 2
    formula = fields.reflected_resonance_peak(x_b, p)
    worst = float(np.max(np.abs(direct - formula)))
    x_f = np.array([3.0, 5.0]) * p.distance
    direct = np.abs(fields.steady_forward(x_f, t_late, rates, p)) ** 2
    formula = fields.transmitted_resonance_peak(x_f, p)
    worst = max(worst, float(np.max(np.abs(direct - formula))))
    results.append(_check("resonance peaks vs steady fields", worst, 1.0e-8))

    if args.full:
        # spectral amplitudes against time quadrature
        p = params["generic"]
        rates = rates_for["generic"]
        worst = 0.0
        for omega in (0.995 * omega_q, 1.01 * omega_q):
            spec = amplitudes.spectral_amplitudes(
                rates, p, np.asarray([omega]), 10.0 / gamma)
            fwd, bwd = oracle.quad_spectral(omega, 10.0 / gamma, rates, p)
            worst = max(worst, abs(spec.forward[0] - fwd),
                        abs(spec.backward[0] - bwd))
        results.append(_check("spectral amplitudes vs quadrature",
                              worst, 1.0e-9))

        # memory-kernel coefficients against the half-line limits
        from scipy.special import sici
        p5 = params["odd"]
        g2 = p5.coupling ** 2
        kd = p5.qubit_phase
        self_c, cross_c = oracle.memory_kernel_coefficients(
            400.0 / omega_q, p5)
        si_v, ci_v = sici(kd)
        exact = 2.0 * g2 * (np.pi * np.cos(kd)
                            + 1j * (np.cos(kd) * ci_v
                                    + np.sin(kd) * (si_v + np.pi / 2)))
        half = 0.5 * p5.gamma
        err = max(abs(self_c.real - half) / half,
                  abs(cross_c - exact) / half)
        results.append(_check("memory kernel vs half-line limit",
                              err, 5.0e-3))

        # continuum evolution: norm drift and fluxes vs exact lattice T/R
        pulse = ModelParams.from_phase(omega_q, gamma, 5.0,
                                       omega_s=omega_q + 5.0 * gamma,
                                       pulse_width=gamma)
        launch = 8.0 / gamma
        res = oracle.continuum_evolve(pulse, launch + 25.0 / gamma,
                                      n_modes=4096, launch_delay=launch)
        drift = float(np.max(np.abs(res.norm - res.norm[0])))
        results.append(_check("continuum norm drift", drift, 1.0e-3))
        grid = res.grid
        phi2 = np.abs(oracle.gaussian_spectrum(pulse, grid.omega)) ** 2
        weight = phi2 * grid.weights
        weight /= weight.sum()
        t_bar = float(np.sum(
            weight * fields.nonmarkov_transmittance(grid.omega, pulse)))
        r_bar = float(np.sum(
            weight * fields.nonmarkov_reflectance(grid.omega, pulse)))
        err = max(abs(res.transmitted_flux - t_bar),
                  abs(res.reflected_flux - r_bar))
        results.append(_check("continuum fluxes vs exact lattice T/R",
                              err, 2.0e-3))

    failed = [r for r in results if not r["passed"]]
    if args.json:
        out = scenario["out"]
        json_path = out[:-4] + ".json" if out.endswith(".csv") \
            else out + ".json"
        with open(json_path, "w") as handle:
            json.dump({"checks": results}, handle, indent=1)
            handle.write("\n")
        print(f"wrote {json_path}")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# entry point

def build_parser():
    parser = argparse.ArgumentParser(
        prog="wqed",
        description="Single-photon scattering on a pair of distant qubits "
                    "in a one-dimensional waveguide: figure-style CSV "
                    "datasets and oracle validation.")
    parser.add_argument("--version", action="version",
                        version=f"wqed {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI scenario file")
    common.add_argument("--preset",
                        help="figure preset name (fig2 .. fig11)")
    common.add_argument("--out", help="output CSV path")
    common.add_argument("--json", action="store_true",
                        help="also write a JSON mirror")
    sub.add_parser("spectrum", parents=[common],
                   help="transmittance/reflectance sweep")
    sub.add_parser("field", parents=[common],
                   help="field envelopes over a grid")
    sub.add_parser("beating", parents=[common],
                   help="beat-note time series and FFT peak")
    sub.add_parser("peaks", parents=[common],
                   help="reflected resonance-peak value vs distance")
    check = sub.add_parser("oracle-check", parents=[common],
                           help="oracle-vs-closed-form validation suite")
    check.add_argument("--full", action="store_true",
                       help="include the slow continuum and memory checks")
    return parser


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "field": cmd_field,
    "beating": cmd_beating,
    "peaks": cmd_peaks,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "full"):
        args.full = False
    try:
        if args.command == "oracle-check":
            scenario = {"command": args.command, "caption": None,
                        "out": args.out or "oracle-check.csv"}
        else:
            scenario = build_scenario(args)
        return _DISPATCH[args.command](scenario, args)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
