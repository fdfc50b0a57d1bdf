"""Command-line front end: run experiments, write CSV/JSON reports.

Every command echoes its resolved configuration (defaults, then config
file, then command-line flags) before printing results, and all file
output is deterministic: rerunning `report` with the same seed must
produce byte-identical JSON.  Wall-clock timings therefore never enter
report.json; they go to a sidecar text file.

Exit codes: 0 success; 1 physics-domain failure (thresholds, unresolved
numerics, box contamination); 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .core import GridSpec, PhysicalParams, RegularizedPotential
from .errors import ConfigError, StepForceError
from .force import (boundary_terms, delta_conventions, infinite_step_sweep,
                    interface_probe, kfg_density_jump, mean_force_closed,
                    nonrel_residuals, weak_product_check)
from .modes import random_mode, solve_step_mode
from .regularized import (DEFAULT_DOMAIN, DEFAULT_EPSILONS, route_b_sweep,
                          smooth_jump_diagnostics)
from .reporting import dumps_json, fmt_float, write_csv
from .timeevo import (PacketSpec, compare_packet_rt, ehrenfest_report,
                      packet_rt)

__all__ = ["main", "build_parser", "run_report"]


DEFAULTS = {
    "params": {"hbar": 1.0, "mass": 1.0, "c": 1.0},
    "mode": {"theory": "kfg", "energy": 2.0, "v0": 0.5},
    "converge": {
        "theory": "kfg", "energy": 2.0, "v0": 0.5,
        "shapes": ["logistic", "erf"],
        "epsilons": list(DEFAULT_EPSILONS),
        "domain": DEFAULT_DOMAIN, "resolution": 8,
    },
    "limits": {
        "kind": "nonrel",
        "energy_nr": 0.1, "v0": 0.05, "speeds": [10.0, 100.0, 1000.0],
        "energy": 1.0, "v0_list": [10.0, 100.0, 1000.0],
    },
    "ehrenfest": {
        "case": "scattering",
        "k0": 1.0, "sigma": 2.0, "x0": -12.0, "v0": 0.5, "eps": 0.1,
        "shape": "logistic",
        "x_min": -60.0, "x_max": 44.0, "n_points": 5201,
        "dt": 4.0e-4, "t_final": 20.0, "save_stride": 100,
    },
    "report": {"n_random": 100},
}

_EHRENFEST_FREE = {
    "case": "free",
    "k0": 1.0, "sigma": 2.0, "x0": -10.0, "v0": 0.0, "eps": 0.1,
    "shape": "logistic",
    "x_min": -40.0, "x_max": 40.0, "n_points": 2001,
    "dt": 1.0e-3, "t_final": 5.0, "save_stride": 40,
}

_RT_CASE = {
    "k0": 2.0, "sigma": 5.0, "x0": -25.0, "v0": 0.5, "eps": 0.1,
    "shape": "logistic",
    "x_min": -95.0, "x_max": 95.0, "n_points": 9501,
    "dt": 4.0e-4, "t_final": 27.0, "save_stride": 250,
}


# ---------------------------------------------------------------------------
# config plumbing
# ---------------------------------------------------------------------------

def _deep_copy(tree):
    if isinstance(tree, dict):
        return {k: _deep_copy(v) for k, v in tree.items()}
    if isinstance(tree, list):
        return [_deep_copy(v) for v in tree]
    return tree


def _merge_into(base: dict, override: dict, path: str = ""):
    for key, value in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config key: {here}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {here} must be a table")
            _merge_into(base[key], value, here)
        elif isinstance(base[key], list):
            if not isinstance(value, list):
                raise ConfigError(f"config key {here} must be a list")
            base[key] = list(value)
        elif isinstance(base[key], str):
            if not isinstance(value, str):
                raise ConfigError(f"config key {here} must be a string")
            base[key] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"config key {here} must be a number")
            base[key] = type(base[key])(value)


def load_config(path: str | None) -> dict:
    """Defaults overlaid with the JSON config file, strictly validated."""
    resolved = _deep_copy(DEFAULTS)
    if path is not None:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError("config file must contain a JSON object")
        _merge_into(resolved, user)
    return resolved


def _apply_flag(cfg: dict, section: str, key: str, value):
    if value is not None:
        cfg[section][key] = value


def build_params(cfg: dict, v0: float) -> PhysicalParams:
    p = cfg["params"]
    return PhysicalParams(hbar=p["hbar"], mass=p["mass"], c=p["c"],
                          v0=v0, natural_units=(p["c"] == 1.0))


def _echo_config(command: str, cfg: dict, seed: int, out_dir: str):
    subset = {
        "command": command,
        "out": out_dir,
        "params": cfg["params"],
        "seed": seed,
        command: cfg[command],
    }
    sys.stdout.write("resolved config:\n")
    sys.stdout.write(dumps_json(subset))


def _parse_floats(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers: {text!r}") from exc


# ---------------------------------------------------------------------------
# mode command
# ---------------------------------------------------------------------------

def _mode_payload(theory: str, energy: float, pars: PhysicalParams) -> dict:
    mode = solve_step_mode(theory, energy, pars)
    probe = interface_probe(mode)
    report = boundary_terms(mode)
    payload = {
        "theory": mode.theory,
        "energy": mode.energy,
        "v0": pars.v0,
        "regime": mode.regime,
        "r": mode.r,
        "t": mode.t,
        "reflection_probability": abs(mode.r) ** 2,
        "rho_left": probe.rho_left,
        "rho_right": probe.rho_right,
        "current_left": probe.current_left,
        "current_right": probe.current_right,
        "density_jump": probe.density_jump,
        "route_a": report.route_a,
        "kinetic_term": report.kinetic_term,
        "mass_term": report.mass_term,
        "potential_term": report.potential_term,
        "identity_residual": report.identity_residual,
        "delta_integral": report.delta_integral,
    }
    return payload


def cmd_mode(cfg: dict, seed: int, out_dir: str) -> int:
    blk = cfg["mode"]
    _echo_config("mode", cfg, seed, out_dir)
    pars = build_params(cfg, blk["v0"])
    payload = _mode_payload(blk["theory"], blk["energy"], pars)
    for key in ("regime", "r", "t", "rho_left", "rho_right", "density_jump",
                "route_a", "kinetic_term", "mass_term", "potential_term",
                "identity_residual"):
        value = payload[key]
        if isinstance(value, complex):
            text = f"{fmt_float(value.real)} + {fmt_float(value.imag)}j"
        elif isinstance(value, float):
            text = fmt_float(value)
        else:
            text = str(value)
        print(f"{key} = {text}")
    for key, value in sorted(payload["delta_integral"].items()):
        print(f"delta_integral.{key} = {fmt_float(value)}")
    path = os.path.join(out_dir, "mode.json")
    with open(path, "w", newline="") as fh:
        fh.write(dumps_json(payload))
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# converge command
# ---------------------------------------------------------------------------

def _candidates(theory: str, energy: float, pars: PhysicalParams) -> dict:
    sharp = solve_step_mode(theory, energy, pars)
    closed = mean_force_closed(sharp)
    midpoint = -pars.v0 * delta_conventions(sharp)["midpoint"]
    return {"sharp_closed_form": closed, "midpoint_average": midpoint}


def _verdict(extrapolated: float, candidates: dict, tol: float = 5e-3) -> dict:
    diffs = {}
    for name, value in candidates.items():
        scale = max(abs(value), 1e-300)
        diffs[name] = abs(extrapolated - value) / scale
    matched = [name for name, d in sorted(diffs.items()) if d <= tol]
    if len(matched) == 1:
        label = matched[0]
    elif not matched:
        label = "neither"
    else:
        label = "both"
    return {"matched": label,
            "candidates": candidates,
            "relative_differences": diffs}


def _verdict_line(shape: str, series, verdict: dict) -> str:
    cands = verdict["candidates"]
    diffs = verdict["relative_differences"]
    parts = [
        f"verdict ({series.theory}, {shape}): limit "
        f"{fmt_float(series.extrapolated)} (order {series.order:.2f})"
    ]
    if verdict["matched"] in cands:
        other = [n for n in cands if n != verdict["matched"]][0]
        parts.append(
            f"matches the {verdict['matched'].replace('_', '-')} candidate "
            f"({fmt_float(cands[verdict['matched']])}, "
            f"diff {diffs[verdict['matched']]:.3e});")
        parts.append(
            f"the {other.replace('_', '-')} candidate "
            f"({fmt_float(cands[other])}) differs by {diffs[other]:.3e}")
    else:
        parts.append(f"matches {verdict['matched']} candidate")
    return " ".join(parts)


def cmd_converge(cfg: dict, seed: int, out_dir: str) -> int:
    blk = cfg["converge"]
    _echo_config("converge", cfg, seed, out_dir)
    if len(blk["epsilons"]) < 3:
        raise ConfigError("converge.epsilons needs at least 3 decreasing "
                          "widths to extrapolate")
    if not blk["shapes"]:
        raise ConfigError("converge.shapes must not be empty")
    pars = build_params(cfg, blk["v0"])
    rows = []
    for shape in blk["shapes"]:
        series = route_b_sweep(blk["theory"], blk["energy"], shape, blk["v0"],
                               pars, tuple(blk["epsilons"]), blk["domain"],
                               int(blk["resolution"]))
        for eps, value, defect in zip(series.epsilons, series.values,
                                      series.defects):
            rows.append((series.theory, series.energy, series.v0,
                         series.shape, eps, value, defect))
        verdict = _verdict(series.extrapolated,
                           _candidates(blk["theory"], blk["energy"], pars))
        print(_verdict_line(series.shape, series, verdict))
    path = os.path.join(out_dir, "converge.csv")
    write_csv(path, ("theory", "E", "V0", "shape", "epsilon", "value",
                     "defect"), rows)
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# limits command
# ---------------------------------------------------------------------------

def cmd_limits(cfg: dict, seed: int, out_dir: str) -> int:
    blk = cfg["limits"]
    _echo_config("limits", cfg, seed, out_dir)
    kind = blk["kind"]
    if kind == "nonrel":
        pars = build_params(cfg, blk["v0"])
        table = nonrel_residuals(blk["energy_nr"], tuple(blk["speeds"]), pars)
        rows = [(row.c, row.residual_density, row.residual_force, row.tag)
                for row in table.rows]
        path = os.path.join(out_dir, "limits_nonrel.csv")
        write_csv(path, ("c", "residual_density", "residual_force", "tag"),
                  rows)
        print(f"force-residual log-log slope vs c: {fmt_float(table.slope)}")
    elif kind == "infinite-step":
        p = cfg["params"]
        table = infinite_step_sweep(blk["energy"], tuple(blk["v0_list"]),
                                    hbar=p["hbar"], mass=p["mass"])
        rows = [(row.v0, row.route_a, row.wall_value, row.candidate,
                 row.candidate_error, row.tag) for row in table.rows]
        path = os.path.join(out_dir, "limits_infinite_step.csv")
        write_csv(path, ("v0", "route_a", "wall_value", "candidate",
                         "candidate_error", "tag"), rows)
        print(f"candidate-error log-log slope vs v0: "
              f"{fmt_float(table.error_slope)}")
    else:
        raise ConfigError(f"unknown limits kind: {kind!r}")
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# ehrenfest command
# ---------------------------------------------------------------------------

def _ehrenfest_setup(blk: dict):
    grid = GridSpec(x_min=blk["x_min"], x_max=blk["x_max"],
                    n_points=int(blk["n_points"]))
    spec = PacketSpec(x0=blk["x0"], sigma=blk["sigma"], k0=blk["k0"],
                      grid=grid)
    if blk["case"] == "free" or blk["v0"] == 0.0:
        reg = None
    else:
        reg = RegularizedPotential(v0=blk["v0"], eps=blk["eps"],
                                   shape=blk["shape"])
    return spec, reg


def _ehrenfest_block(cfg: dict) -> dict:
    blk = dict(cfg["ehrenfest"])
    if blk["case"] == "free":
        merged = dict(_EHRENFEST_FREE)
        for key, value in cfg["ehrenfest"].items():
            if value != DEFAULTS["ehrenfest"].get(key):
                merged[key] = value
        merged["case"] = "free"
        return merged
    if blk["case"] != "scattering":
        raise ConfigError(f"unknown ehrenfest case: {blk['case']!r}")
    return blk


def cmd_ehrenfest(cfg: dict, seed: int, out_dir: str) -> int:
    blk = _ehrenfest_block(cfg)
    cfg = dict(cfg)
    cfg["ehrenfest"] = blk
    _echo_config("ehrenfest", cfg, seed, out_dir)
    spec, reg = _ehrenfest_setup(blk)
    p = cfg["params"]
    report = ehrenfest_report(spec, reg, blk["dt"], blk["t_final"],
                              int(blk["save_stride"]),
                              hbar=p["hbar"], mass=p["mass"])
    path = os.path.join(out_dir, "ehrenfest.csv")
    write_csv(path, ("t", "px_expect", "dpdt", "force_expect", "norm"),
              list(report.rows()))
    print(f"max |dp/dt - force| = {fmt_float(report.max_deviation)}")
    print(f"max deviation / peak |force| = "
          f"{fmt_float(report.max_deviation_rel)}")
    print(f"norm drift = {fmt_float(report.norm_drift)}")
    print(f"wall amplitude max = {fmt_float(report.wall_amplitude)}")
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# report command
# ---------------------------------------------------------------------------

def _sweep_residuals(theory: str, rng, n: int, pars: PhysicalParams) -> dict:
    """Worst-case identity residuals over n random admissible modes."""
    worst = {
        "continuity": 0.0,
        "flux": 0.0,
        "evanescent_reflection": 0.0,
        "identity_residual_rel": 0.0,
    }
    if theory == "kfg":
        worst["density_jump_identity"] = 0.0
        worst["route_agreement"] = 0.0
    regimes: dict = {}
    for _ in range(n):
        mode = random_mode(theory, rng, pars)
        regimes[mode.regime] = regimes.get(mode.regime, 0) + 1
        mp = mode.params
        if theory == "dirac":
            cont = max(abs((1.0 + mode.r) - mode.t),
                       abs(mode.lam_left * (1.0 - mode.r)
                           - mode.lam_right * mode.t))
            w_t = (abs(mode.t) ** 2 * mode.lam_right.real
                   / mode.lam_left.real) if mode.q.imag == 0.0 else 0.0
        else:
            cont = max(abs((1.0 + mode.r) - mode.t),
                       abs(mode.k * (1.0 - mode.r) - mode.q * mode.t)
                       / abs(mode.k))
            w_t = (abs(mode.t) ** 2 * (mode.q.real / mode.k.real)
                   if mode.q.imag == 0.0 else 0.0)
        worst["continuity"] = max(worst["continuity"], float(cont))
        worst["flux"] = max(worst["flux"],
                            abs(1.0 - abs(mode.r) ** 2 - w_t))
        if mode.regime == "evanescent":
            worst["evanescent_reflection"] = max(
                worst["evanescent_reflection"], abs(abs(mode.r) - 1.0))
        rep = boundary_terms(mode)
        scale = max(abs(rep.route_a), abs(rep.potential_term),
                    abs(rep.mass_term), 1e-300)
        worst["identity_residual_rel"] = max(
            worst["identity_residual_rel"], abs(rep.identity_residual) / scale)
        if theory == "kfg":
            jump = kfg_density_jump(mode)
            closed = -(mp.v0 / mp.rest_energy) * abs(mode.psi0) ** 2
            worst["density_jump_identity"] = max(
                worst["density_jump_identity"],
                abs(jump - closed) / max(abs(closed), 1e-300))
            half = mean_force_closed(mode)
            restated = (mp.v0**2 / (2.0 * mp.rest_energy)) * abs(mode.psi0) ** 2
            worst["route_agreement"] = max(
                worst["route_agreement"],
                abs(half - restated) / max(abs(restated), 1e-300))
    return {"n_draws": n, "regime_counts": regimes, "worst": worst}


def _report_route_b(cfg: dict) -> dict:
    out = {}
    flagship_energy = {"s": 1.0, "kfg": 2.0, "dirac": 2.0}
    for theory in ("s", "kfg", "dirac"):
        pars = build_params(cfg, 0.5)
        energy = flagship_energy[theory]
        shapes = ("logistic", "erf", "ramp") if theory == "kfg" else (
            "logistic", "erf")
        series_by_shape = {}
        verdicts = {}
        for shape in shapes:
            series = route_b_sweep(theory, energy, shape, 0.5, pars)
            series_by_shape[shape] = {
                "epsilons": list(series.epsilons),
                "values": list(series.values),
                "defects": list(series.defects),
                "extrapolated": series.extrapolated,
                "order": series.order,
                "error_estimate": series.error_estimate,
            }
            verdicts[shape] = _verdict(series.extrapolated,
                                       _candidates(theory, energy, pars))
        limits = [series_by_shape[s]["extrapolated"] for s in shapes]
        spread = (max(limits) - min(limits)) / max(abs(min(limits)),
                                                   abs(max(limits)), 1e-300)
        out[theory] = {
            "energy": energy,
            "v0": 0.5,
            "series": series_by_shape,
            "verdicts": verdicts,
            "shape_spread_rel": spread,
        }
    return out


def _report_limits(cfg: dict) -> dict:
    pars = build_params(cfg, 0.05)
    nonrel = nonrel_residuals(0.1, (10.0, 100.0, 1000.0), pars)
    p = cfg["params"]
    infinite = infinite_step_sweep(1.0, (10.0, 100.0, 1000.0),
                                   hbar=p["hbar"], mass=p["mass"])
    a3 = []
    for eps in (0.004, 0.002, 0.001):
        reg = RegularizedPotential(v0=1.0e4, eps=eps, shape="logistic")
        chk = weak_product_check(1.0, reg, hbar=p["hbar"], mass=p["mass"])
        a3.append({"eps": eps, "window": chk.window,
                   "deviation": chk.deviation})
    return {
        "nonrel": {
            "rows": [{"c": r.c, "residual_density": r.residual_density,
                      "residual_force": r.residual_force, "tag": r.tag}
                     for r in nonrel.rows],
            "force_slope": nonrel.slope,
        },
        "infinite_step": {
            "rows": [{"v0": r.v0, "route_a": r.route_a,
                      "wall_value": r.wall_value, "candidate": r.candidate,
                      "candidate_error": r.candidate_error, "tag": r.tag}
                     for r in infinite.rows],
            "error_slope": infinite.error_slope,
        },
        "weak_product": {
            "rows": a3,
            "decreasing": all(a3[i]["deviation"] > a3[i + 1]["deviation"]
                              for i in range(len(a3) - 1)),
        },
    }


def _report_jump_diagnostics(cfg: dict) -> dict:
    pars = build_params(cfg, 0.5)
    rows = []
    for eps in (0.01, 0.005, 0.0025):
        reg = RegularizedPotential(v0=0.5, eps=eps, shape="logistic")
        diag = smooth_jump_diagnostics(2.0, reg, pars, probe_offset=0.2)
        rows.append({
            "eps": eps,
            "jump_value_norm": float(np.linalg.norm(diag.jump_value)),
            "expected_value_norm": float(np.linalg.norm(diag.expected_value)),
            "projected_fraction_value": diag.projected_fraction_value,
            "projected_fraction_deriv": diag.projected_fraction_deriv,
            "component_ratio": diag.component_ratio_value,
        })
    fracs = [r["projected_fraction_value"] for r in rows]
    return {
        "probe_offset": 0.2,
        "rows": rows,
        "improving": all(fracs[i] > fracs[i + 1]
                         for i in range(len(fracs) - 1)),
    }


def _summary(report) -> dict:
    return {
        "max_deviation": report.max_deviation,
        "max_deviation_rel": report.max_deviation_rel,
        "norm_drift": report.norm_drift,
        "wall_amplitude": report.wall_amplitude,
        "dt": report.dt,
        "save_stride": report.save_stride,
    }


def _report_ehrenfest(cfg: dict) -> dict:
    p = cfg["params"]
    free_blk = dict(_EHRENFEST_FREE)
    spec_f, reg_f = _ehrenfest_setup(free_blk)
    free = ehrenfest_report(spec_f, reg_f, free_blk["dt"],
                            free_blk["t_final"],
                            int(free_blk["save_stride"]),
                            hbar=p["hbar"], mass=p["mass"])
    blk = DEFAULTS["ehrenfest"]
    spec_s, reg_s = _ehrenfest_setup(blk)
    coarse = ehrenfest_report(spec_s, reg_s, blk["dt"], blk["t_final"],
                              int(blk["save_stride"]),
                              hbar=p["hbar"], mass=p["mass"])
    # same stride count, so the save interval halves with the step and
    # every second-order-in-time error term must drop fourfold
    fine = ehrenfest_report(spec_s, reg_s, blk["dt"] / 2.0, blk["t_final"],
                            int(blk["save_stride"]),
                            hbar=p["hbar"], mass=p["mass"])
    rt_blk = dict(_RT_CASE)
    grid = GridSpec(x_min=rt_blk["x_min"], x_max=rt_blk["x_max"],
                    n_points=int(rt_blk["n_points"]))
    spec_rt = PacketSpec(x0=rt_blk["x0"], sigma=rt_blk["sigma"],
                         k0=rt_blk["k0"], grid=grid)
    reg_rt = RegularizedPotential(v0=rt_blk["v0"], eps=rt_blk["eps"],
                                  shape=rt_blk["shape"])
    rt_run = ehrenfest_report(spec_rt, reg_rt, rt_blk["dt"],
                              rt_blk["t_final"],
                              int(rt_blk["save_stride"]),
                              hbar=p["hbar"], mass=p["mass"])
    rt = compare_packet_rt(rt_run.final_state, spec_rt, reg_rt)
    ratio = (coarse.max_deviation / fine.max_deviation
             if fine.max_deviation > 0.0 else float("inf"))
    return {
        "free": _summary(free),
        "scattering": _summary(coarse),
        "scattering_half_dt": _summary(fine),
        "dt_halving_ratio": ratio,
        "packet_rt": rt,
    }


def run_report(cfg: dict, seed: int) -> dict:
    """Assemble the full verification bundle (pure: no timing, no files)."""
    rng = np.random.default_rng(seed)
    n = int(cfg["report"]["n_random"])
    pars_template = build_params(cfg, 0.5)
    flagship_energy = {"s": 1.0, "kfg": 2.0, "dirac": 2.0}
    flagships = {
        theory: _mode_payload(theory, flagship_energy[theory],
                              build_params(cfg, 0.5))
        for theory in ("s", "kfg", "dirac")
    }
    sweeps = {theory: _sweep_residuals(theory, rng, n, pars_template)
              for theory in ("s", "kfg", "dirac")}
    return {
        "version": __version__,
        "seed": seed,
        "resolved_config": cfg,
        "flagships": flagships,
        "random_sweeps": sweeps,
        "route_b": _report_route_b(cfg),
        "limits": _report_limits(cfg),
        "jump_diagnostics": _report_jump_diagnostics(cfg),
        "ehrenfest": _report_ehrenfest(cfg),
    }


def cmd_report(cfg: dict, seed: int, out_dir: str) -> int:
    _echo_config("report", cfg, seed, out_dir)
    started = time.perf_counter()
    bundle = run_report(cfg, seed)
    elapsed = time.perf_counter() - started
    path = os.path.join(out_dir, "report.json")
    with open(path, "w", newline="") as fh:
        fh.write(dumps_json(bundle))
    timing_path = os.path.join(out_dir, "report_timing.txt")
    with open(timing_path, "w", newline="") as fh:
        fh.write(f"wall_clock_seconds {elapsed:.3f}\n")
    for theory in ("s", "kfg", "dirac"):
        verdict = bundle["route_b"][theory]["verdicts"]["logistic"]
        print(f"route B ({theory}): limit matches "
              f"{verdict['matched'].replace('_', '-')}")
    print(f"nonrel force-residual slope: "
          f"{fmt_float(bundle['limits']['nonrel']['force_slope'])}")
    print(f"infinite-step candidate-error slope: "
          f"{fmt_float(bundle['limits']['infinite_step']['error_slope'])}")
    print(f"ehrenfest dt-halving ratio: "
          f"{fmt_float(bundle['ehrenfest']['dt_halving_ratio'])}")
    print(f"wrote {path}")
    print(f"wrote {timing_path} (wall clock kept out of report.json)")
    return 0


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON config file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized sweeps (default 0)")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output directory (default .)")

    parser = argparse.ArgumentParser(
        prog="stepforce",
        description="mean-force verification laboratory for the step "
                    "potential", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p_mode = sub.add_parser("mode", parents=[common],
                            help="solve one sharp-step mode, print all "
                                 "interface quantities")
    p_mode.add_argument("--theory", default=None)
    p_mode.add_argument("--energy", type=float, default=None)
    p_mode.add_argument("--v0", type=float, default=None)

    p_conv = sub.add_parser("converge", parents=[common],
                            help="force on smoothed steps over a width "
                                 "sweep, extrapolated")
    p_conv.add_argument("--theory", default=None)
    p_conv.add_argument("--energy", type=float, default=None)
    p_conv.add_argument("--v0", type=float, default=None)
    p_conv.add_argument("--shapes", default=None,
                        help="comma-separated profile names")
    p_conv.add_argument("--epsilons", default=None,
                        help="comma-separated widths, decreasing")
    p_conv.add_argument("--domain", type=float, default=None)
    p_conv.add_argument("--resolution", type=int, default=None)

    p_lim = sub.add_parser("limits", parents=[common],
                           help="nonrelativistic or hard-wall limit tables")
    p_lim.add_argument("--kind", choices=("nonrel", "infinite-step"),
                       default=None)
    p_lim.add_argument("--energy-nr", type=float, default=None)
    p_lim.add_argument("--v0", type=float, default=None)
    p_lim.add_argument("--speeds", default=None,
                       help="comma-separated light speeds")
    p_lim.add_argument("--energy", type=float, default=None)
    p_lim.add_argument("--v0-list", default=None,
                       help="comma-separated step heights")

    p_ehr = sub.add_parser("ehrenfest", parents=[common],
                           help="packet evolution with the momentum-balance "
                                "audit")
    p_ehr.add_argument("--case", choices=("free", "scattering"), default=None)
    p_ehr.add_argument("--dt", type=float, default=None)
    p_ehr.add_argument("--t-final", type=float, default=None)
    p_ehr.add_argument("--save-stride", type=int, default=None)
    p_ehr.add_argument("--k0", type=float, default=None)
    p_ehr.add_argument("--sigma", type=float, default=None)
    p_ehr.add_argument("--x0", type=float, default=None)
    p_ehr.add_argument("--v0", type=float, default=None)
    p_ehr.add_argument("--eps", type=float, default=None)

    p_rep = sub.add_parser("report", parents=[common],
                           help="full verification bundle as deterministic "
                                "JSON")
    p_rep.add_argument("--n-random", type=int, default=None)

    return parser


def _resolve(args: argparse.Namespace) -> tuple:
    cfg = load_config(getattr(args, "config", None))
    seed = int(getattr(args, "seed", 0))
    out_dir = getattr(args, "out", ".")
    command = args.command
    if command == "mode":
        _apply_flag(cfg, "mode", "theory", args.theory)
        _apply_flag(cfg, "mode", "energy", args.energy)
        _apply_flag(cfg, "mode", "v0", args.v0)
    elif command == "converge":
        _apply_flag(cfg, "converge", "theory", args.theory)
        _apply_flag(cfg, "converge", "energy", args.energy)
        _apply_flag(cfg, "converge", "v0", args.v0)
        if args.shapes is not None:
            cfg["converge"]["shapes"] = [s.strip()
                                         for s in args.shapes.split(",")
                                         if s.strip()]
        if args.epsilons is not None:
            cfg["converge"]["epsilons"] = _parse_floats(args.epsilons)
        _apply_flag(cfg, "converge", "domain", args.domain)
        _apply_flag(cfg, "converge", "resolution", args.resolution)
    elif command == "limits":
        _apply_flag(cfg, "limits", "kind", args.kind)
        _apply_flag(cfg, "limits", "energy_nr", args.energy_nr)
        _apply_flag(cfg, "limits", "v0", args.v0)
        if args.speeds is not None:
            cfg["limits"]["speeds"] = _parse_floats(args.speeds)
        _apply_flag(cfg, "limits", "energy", args.energy)
        if args.v0_list is not None:
            cfg["limits"]["v0_list"] = _parse_floats(args.v0_list)
    elif command == "ehrenfest":
        _apply_flag(cfg, "ehrenfest", "case", args.case)
        _apply_flag(cfg, "ehrenfest", "dt", args.dt)
        _apply_flag(cfg, "ehrenfest", "t_final", args.t_final)
        _apply_flag(cfg, "ehrenfest", "save_stride", args.save_stride)
        _apply_flag(cfg, "ehrenfest", "k0", args.k0)
        _apply_flag(cfg, "ehrenfest", "sigma", args.sigma)
        _apply_flag(cfg, "ehrenfest", "x0", args.x0)
        _apply_flag(cfg, "ehrenfest", "v0", args.v0)
        _apply_flag(cfg, "ehrenfest", "eps", args.eps)
    elif command == "report":
        if args.n_random is not None:
            cfg["report"]["n_random"] = args.n_random
    return cfg, seed, out_dir, command


_DISPATCH = {
    "mode": cmd_mode,
    "converge": cmd_converge,
    "limits": cmd_limits,
    "ehrenfest": cmd_ehrenfest,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg, seed, out_dir, command = _resolve(args)
        os.makedirs(out_dir, exist_ok=True)
        return _DISPATCH[command](cfg, seed, out_dir)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # library precondition failures triggered by bad parameter values
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except StepForceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
