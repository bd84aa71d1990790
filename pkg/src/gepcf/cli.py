"""Command-line pipeline for the pair-source toolkit.

Each subcommand wraps one pipeline stage (dispersion fit or waveguide
proxy, phase matching, joint spectrum, seeded scan, grating design,
heralded marginals, counting simulation, power sweep), writes plot-ready
CSV/JSON artifacts into the output directory, and records a manifest with
every resolved parameter, the SHA-256 of each file input, and the package
version.  Manifests carry no timestamps, so identical inputs give
byte-identical outputs.

Exit codes: 0 success; 1 runtime/numeric failure; 2 usage or validation
error (bad flags, malformed/missing files, out-of-domain requests).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import counting as cnt
from . import dispersion as disp
from . import fbg
from . import jsa
from .errors import GepcfError, ValidationError
from .phasematch import FwmParams, contour, solve_signal


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _require_file(path: str) -> str:
    if not os.path.isfile(path):
        raise ValidationError(f"input file not found: {path}")
    return path


def _parse_set(pairs: list[str] | None) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise ValidationError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        key = key.strip()
        if not key:
            raise ValidationError(f"--set expects key=value, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _apply_overrides(params: dict, overrides: dict) -> dict:
    for key, value in overrides.items():
        if key not in params:
            raise ValidationError(
                f"--set key {key!r} does not match a parameter of this "
                f"command (known: {sorted(params)})"
            )
        params[key] = value
    return params


def _write_manifest(out_dir: str, command: str, parameters: dict,
                    inputs: dict, outputs: list[str]) -> None:
    payload = {
        "command": command,
        "version": __version__,
        "parameters": parameters,
        "inputs": {path: _sha256(path) for path in inputs},
        "outputs": sorted(outputs),
    }
    name = command.replace("-", "_") + "_manifest.json"
    with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_path(args, name: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


# -- dispersion ---------------------------------------------------------------

def cmd_dispersion(args, overrides) -> int:
    params = {
        "gvd_csv": args.gvd,
        "proxy": args.proxy,
        "degree": args.degree,
        "reference_nm": args.reference,
        "pitch_um": args.pitch,
        "hole_diameter_ratio": args.hole_ratio,
        "ge_molar_fraction": args.ge_fraction,
        "clad_depression": args.clad_depression,
        "clad_exponent": args.clad_exponent,
        "curve_points": args.curve_points,
    }
    _apply_overrides(params, overrides)
    inputs = []
    if params["gvd_csv"] is not None:
        path = _require_file(params["gvd_csv"])
        inputs.append(path)
        samples = disp.GvdSamples.from_csv(path)
        model = disp.fit_gvd(samples, degree=int(params["degree"]),
                             reference_nm=float(params["reference_nm"]))
    elif params["proxy"]:
        design = disp.PcfDesign(
            pitch_um=float(params["pitch_um"]),
            hole_diameter_ratio=float(params["hole_diameter_ratio"]),
        )
        material = disp.MaterialModel.ge_doped_silica(
            float(params["ge_molar_fraction"])
        )
        model = disp.from_step_index_proxy(
            design=design,
            core_material=material,
            clad_depression=float(params["clad_depression"]),
            clad_exponent=float(params["clad_exponent"]),
            reference_nm=float(params["reference_nm"]),
        )
    else:
        raise ValidationError("need --gvd CSV or --proxy")

    model_path = _out_path(args, "dispersion_model.json")
    model.to_json(model_path)
    curve_path = _out_path(args, "dispersion_curve.csv")
    lam = np.linspace(model.lambda_min_nm, model.lambda_max_nm,
                      int(params["curve_points"]))
    d_vals = model.d_parameter(lam)
    with open(curve_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("wavelength_nm,D_ps_nm_km\n")
        for x, y in zip(lam, d_vals):
            fh.write(f"{x:.9g},{y:.12g}\n")
    _write_manifest(args.out, "dispersion", params, inputs,
                    [os.path.basename(model_path), os.path.basename(curve_path)])
    print(f"dispersion model: {model_path} (D({params['reference_nm']:g} nm) = "
          f"{model.d_parameter(float(params['reference_nm'])):.4g} ps/(nm km))")
    return 0


# -- phasematch ---------------------------------------------------------------

def cmd_phasematch(args, overrides) -> int:
    params = {
        "model_json": args.model,
        "pump_min_nm": args.pump_min,
        "pump_max_nm": args.pump_max,
        "pump_points": args.pump_points,
        "gamma_per_w_km": args.gamma,
        "peak_power_w": args.power,
        "signal_min_nm": args.signal_min,
        "signal_max_nm": args.signal_max,
    }
    _apply_overrides(params, overrides)
    model_path = _require_file(params["model_json"])
    model = disp.DispersionModel.from_json(model_path)
    fwm = FwmParams(gamma_per_w_km=float(params["gamma_per_w_km"]),
                    peak_power_w=float(params["peak_power_w"]))
    if params["pump_min_nm"] is None or params["pump_max_nm"] is None:
        raise ValidationError("need --pump-min and --pump-max")
    if float(params["pump_max_nm"]) < float(params["pump_min_nm"]):
        raise ValidationError("empty pump range: --pump-max < --pump-min")
    window = None
    if params["signal_min_nm"] is not None and params["signal_max_nm"] is not None:
        window = (float(params["signal_min_nm"]), float(params["signal_max_nm"]))
    result = contour(
        model, fwm,
        (float(params["pump_min_nm"]), float(params["pump_max_nm"])),
        n_pump=int(params["pump_points"]),
        signal_window_nm=window,
    )
    out_csv = _out_path(args, "phasematch_contour.csv")
    result.to_csv(out_csv)
    _write_manifest(args.out, "phasematch", params, [model_path],
                    [os.path.basename(out_csv)])
    n_rows = sum(len(r.points) for r in result.rows)
    print(f"contour: {out_csv} ({n_rows} matched pairs)")
    return 0


# -- shared jsa plumbing ------------------------------------------------------

def _jsa_params(args) -> dict:
    return {
        "model_json": args.model,
        "pump_center_nm": args.pump_center,
        "pump_fwhm_nm": args.pump_fwhm,
        "pump_shape": args.pump_shape,
        "length_m": args.length,
        "gamma_per_w_km": args.gamma,
        "peak_power_w": args.power,
        "signal_min_nm": args.signal_min,
        "signal_max_nm": args.signal_max,
        "signal_points": args.signal_points,
        "idler_min_nm": args.idler_min,
        "idler_max_nm": args.idler_max,
        "idler_points": args.idler_points,
    }


def _jsa_objects(params):
    model_path = _require_file(params["model_json"])
    model = disp.DispersionModel.from_json(model_path)
    pump = jsa.PumpEnvelope(
        center_nm=float(params["pump_center_nm"]),
        fwhm_nm=float(params["pump_fwhm_nm"]),
        shape=str(params["pump_shape"]),
    )
    fwm = FwmParams(gamma_per_w_km=float(params["gamma_per_w_km"]),
                    peak_power_w=float(params["peak_power_w"]))
    return model_path, model, pump, fwm


def cmd_jsi(args, overrides) -> int:
    params = _jsa_params(args)
    _apply_overrides(params, overrides)
    model_path, model, pump, fwm = _jsa_objects(params)
    spectrum = jsa.compute_jsi(
        pump, model, fwm, float(params["length_m"]),
        signal_window_nm=(float(params["signal_min_nm"]), float(params["signal_max_nm"])),
        idler_window_nm=(float(params["idler_min_nm"]), float(params["idler_max_nm"])),
        n_signal=int(params["signal_points"]),
        n_idler=int(params["idler_points"]),
    )
    jsi_path = _out_path(args, "jsi.csv")
    spectrum.to_csv(jsi_path)
    sig_path = _out_path(args, "signal_marginal.csv")
    idl_path = _out_path(args, "idler_marginal.csv")
    jsa.write_marginal_csv(sig_path, spectrum.signal_nm, spectrum.signal_marginal())
    jsa.write_marginal_csv(idl_path, spectrum.idler_nm, spectrum.idler_marginal())
    outputs = [os.path.basename(p) for p in
               (jsi_path, jsi_path + ".meta.json", sig_path, idl_path)]
    _write_manifest(args.out, "jsi", params, [model_path], outputs)
    if spectrum.metadata.get("empty_overlap"):
        print("warning: grid does not overlap the phase-matched region", file=sys.stderr)
    print(f"joint spectrum: {jsi_path}")
    return 0


def cmd_set_scan(args, overrides) -> int:
    params = _jsa_params(args)
    params["seeds"] = args.seeds
    _apply_overrides(params, overrides)
    model_path, model, pump, fwm = _jsa_objects(params)
    seeds = _parse_seeds(str(params["seeds"]))
    scan = jsa.simulate_set_scan(
        pump, model, fwm, float(params["length_m"]), seeds,
        signal_window_nm=(float(params["signal_min_nm"]), float(params["signal_max_nm"])),
        idler_window_nm=(float(params["idler_min_nm"]), float(params["idler_max_nm"])),
        n_signal=int(params["signal_points"]),
        n_idler=int(params["idler_points"]),
    )
    scan_path = _out_path(args, "set_scan.csv")
    scan.to_csv(scan_path)
    errors = {f"{r.seed_nm:g}": r.error for r in scan.rows if r.error is not None}
    summary = {
        "n_seeds": len(scan.rows),
        "n_errors": len(errors),
        "errors": errors,
    }
    summary_path = _out_path(args, "set_scan_summary.json")
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(args.out, "set-scan", params, [model_path],
                    [os.path.basename(scan_path), os.path.basename(summary_path)])
    print(f"seeded scan: {scan_path} ({len(scan.rows) - len(errors)} rows, "
          f"{len(errors)} errors)")
    return 0


def _parse_seeds(spec_text: str) -> list[float]:
    if ":" in spec_text:
        parts = spec_text.split(":")
        if len(parts) != 3:
            raise ValidationError(
                f"seed range must be start:stop:count, got {spec_text!r}"
            )
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValidationError("seed count must be >= 1")
        return [float(x) for x in np.linspace(start, stop, count)]
    try:
        return [float(x) for x in spec_text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad seed list {spec_text!r}: {exc}") from exc


# -- fbg ----------------------------------------------------------------------

def cmd_fbg(args, overrides) -> int:
    params = {
        "design": args.design,
        "spec_json": args.spec,
        "bragg_nm": args.bragg,
        "fwhm_nm": args.fwhm,
        "contrast_db": args.contrast,
        "n_eff": args.neff,
        "visibility": args.visibility,
        "grid_halfspan_nm": args.grid_halfspan,
        "grid_points": args.grid_points,
    }
    _apply_overrides(params, overrides)
    inputs = []
    outputs = []
    if params["design"]:
        result = fbg.design_uniform(
            float(params["bragg_nm"]), float(params["fwhm_nm"]),
            float(params["contrast_db"]), n_eff=float(params["n_eff"]),
            visibility=float(params["visibility"]),
        )
        spec = result.spec
        spec_path = _out_path(args, "fbg.json")
        spec.to_json(spec_path)
        outputs.append(os.path.basename(spec_path))
        print(f"grating: {spec_path} (L = {spec.length_mm:.4g} mm, "
              f"achieved {result.achieved_fwhm_nm:.4g} nm / "
              f"{result.achieved_contrast_db:.4g} dB, "
              f"50 mm feasible: {result.fifty_mm_feasible})")
    else:
        if params["spec_json"] is None:
            raise ValidationError("need --design or --spec grating.json")
        spec_path = _require_file(params["spec_json"])
        inputs.append(spec_path)
        spec = fbg.GratingSpec.from_json(spec_path)
    half = float(params["grid_halfspan_nm"])
    grid = np.linspace(spec.bragg_nm - half, spec.bragg_nm + half,
                       int(params["grid_points"]))
    filt = fbg.reflectance_tmm(spec, grid, n_sections=8)
    spectrum_path = _out_path(args, "fbg_spectrum.csv")
    filt.to_csv(spectrum_path)
    outputs.append(os.path.basename(spectrum_path))
    _write_manifest(args.out, "fbg", params, inputs, outputs)
    print(f"grating spectrum: {spectrum_path}")
    return 0


# -- herald -------------------------------------------------------------------

def cmd_herald(args, overrides) -> int:
    params = {
        "jsi_csv": args.jsi,
        "filter_json": args.filter,
        "floor_db": None if args.no_floor else args.floor_db,
    }
    _apply_overrides(params, overrides)
    jsi_path = _require_file(params["jsi_csv"])
    filter_path = _require_file(params["filter_json"])
    spectrum = jsa.JointSpectrum.from_csv(jsi_path)
    spec = fbg.GratingSpec.from_json(filter_path)
    floor = params["floor_db"]
    filt = fbg.as_idler_filter(
        spec, spectrum.idler_nm,
        floor_db=None if floor is None else float(floor),
    )
    result = jsa.heralded_marginal(spectrum, filt)
    idl_path = _out_path(args, "heralded_idler.csv")
    sig_path = _out_path(args, "heralded_signal.csv")
    jsa.write_marginal_csv(idl_path, result.idler_nm, result.idler_intensity)
    jsa.write_marginal_csv(sig_path, result.signal_nm, result.signal_intensity)
    summary = {
        "idler_fwhm_nm": result.idler_fwhm_nm,
        "signal_fwhm_nm": result.signal_fwhm_nm,
        "filter_bragg_nm": spec.bragg_nm,
        "floor_db": floor,
    }
    summary_path = _out_path(args, "herald_summary.json")
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(args.out, "herald", params, [jsi_path, filter_path],
                    [os.path.basename(p) for p in (idl_path, sig_path, summary_path)])
    print(f"heralded idler FWHM: {result.idler_fwhm_nm:.4g} nm "
          f"(signal {result.signal_fwhm_nm:.4g} nm)")
    return 0


# -- counting -----------------------------------------------------------------

def _counting_config(args, params: dict, overrides: dict):
    """Resolve preset/flags/--set into a CountingConfig.

    --set keys matching config fields patch the config; remaining keys
    must match command parameters.
    """
    preset_payload = {}
    if args.preset is not None:
        config, preset_payload = cnt.load_preset(args.preset)
    else:
        config = cnt.CountingConfig()
    cfg_fields = set(cnt.CountingConfig.__dataclass_fields__)
    cfg_overrides = {k: v for k, v in overrides.items() if k in cfg_fields}
    rest = {k: v for k, v in overrides.items() if k not in cfg_fields}
    _apply_overrides(params, rest)
    if cfg_overrides:
        merged = json.loads(config.to_json())
        merged.update(cfg_overrides)
        config = cnt.CountingConfig.from_dict(merged)
    if params.get("power_mw") is not None:
        config = config.at_power_mw(float(params["power_mw"]))
    elif params.get("mean_pairs") is not None:
        config = config.with_mean_pairs(float(params["mean_pairs"]))
    return config, preset_payload


def cmd_countsim(args, overrides) -> int:
    params = {
        "preset": args.preset,
        "pulses": args.pulses,
        "seed": args.seed,
        "power_mw": args.power_mw,
        "mean_pairs": args.mu,
        "peak_halfwidth_ns": args.peak_halfwidth,
        "window_periods": args.window_periods,
    }
    config, _ = _counting_config(args, params, overrides)
    n_pulses = int(float(params["pulses"]))
    hist = cnt.simulate_pulses(
        config, n_pulses, rng_seed=int(params["seed"]),
        window_periods=int(params["window_periods"]),
    )
    hist_path = _out_path(args, "histogram.csv")
    hist.to_csv(hist_path)
    car = cnt.car_from_histogram(hist, float(params["peak_halfwidth_ns"]))
    ana = cnt.analytic_rates(config)
    summary = {
        "config": json.loads(config.to_json()),
        "n_pulses": n_pulses,
        "n_c_per_s": car.n_c_per_s,
        "n_a_per_s": car.n_a_per_s,
        "car": car.car,
        "car_sigma": car.car_sigma,
        "is_lower_bound": car.is_lower_bound,
        "analytic": {
            "singles_signal_per_s": ana.singles_signal_per_s,
            "singles_idler_per_s": ana.singles_idler_per_s,
            "coincidences_per_s": ana.coincidences_per_s,
            "accidentals_per_s": ana.accidentals_per_s,
            "car": ana.car,
        },
    }
    summary_path = _out_path(args, "car_summary.json")
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    params["resolved_config"] = json.loads(config.to_json())
    _write_manifest(args.out, "countsim", params, [],
                    [os.path.basename(hist_path), os.path.basename(summary_path)])
    print(f"histogram: {hist_path} (CAR {car.car:.2f} +- {car.car_sigma:.2f})")
    return 0


def cmd_sweep(args, overrides) -> int:
    params = {
        "preset": args.preset,
        "pulses": args.pulses,
        "seed": args.seed,
        "powers": args.powers,
        "power_mw": None,
        "mean_pairs": None,
        "peak_halfwidth_ns": args.peak_halfwidth,
        "window_periods": args.window_periods,
    }
    config, preset_payload = _counting_config(args, params, overrides)
    if params["powers"] is not None:
        powers = [float(x) for x in str(params["powers"]).split(",") if x.strip()]
    else:
        powers = preset_payload.get("sweep_powers_mw")
        if not powers:
            raise ValidationError("no --powers given and preset has no sweep_powers_mw")
    result = cnt.sweep_power(
        config, powers, n_pulses=int(float(params["pulses"])),
        rng_seed=int(params["seed"]),
        peak_halfwidth_ns=float(params["peak_halfwidth_ns"]),
        window_periods=int(params["window_periods"]),
    )
    sweep_path = _out_path(args, "sweep.csv")
    result.to_csv(sweep_path)
    params["resolved_config"] = json.loads(config.to_json())
    params["resolved_powers_mw"] = powers
    _write_manifest(args.out, "sweep", params, [],
                    [os.path.basename(sweep_path)])
    n_err = sum(1 for p in result.points if p.error is not None)
    print(f"sweep: {sweep_path} ({len(result.points)} points, {n_err} errors)")
    return 0


# -- parser -------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument("--seed", type=int, default=12345, help="random seed")
    sub.add_argument("--set", dest="set_overrides", action="append", default=[],
                     metavar="KEY=VALUE", help="override a parameter")
    sub.add_argument("--preset", default=None, help="named or file preset")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gepcf",
        description="Fiber pair-source pipeline: dispersion, phase matching, "
                    "joint spectra, grating design, and coincidence counting.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("dispersion", help="fit or synthesize a dispersion model")
    p.add_argument("--gvd", default=None, help="measured D(lambda) CSV")
    p.add_argument("--proxy", action="store_true",
                   help="build the step-index waveguide proxy model")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--reference", type=float, default=1064.0)
    p.add_argument("--pitch", type=float, default=2.25)
    p.add_argument("--hole-ratio", type=float, default=0.45)
    p.add_argument("--ge-fraction", type=float, default=0.175)
    p.add_argument("--clad-depression", type=float, default=disp.DEFAULT_CLAD_DEPRESSION)
    p.add_argument("--clad-exponent", type=float, default=disp.DEFAULT_CLAD_EXPONENT)
    p.add_argument("--curve-points", type=int, default=512)
    _add_common(p)
    p.set_defaults(func=cmd_dispersion)

    p = subs.add_parser("phasematch", help="phase-matching contour over pumps")
    p.add_argument("--model", required=True, help="dispersion model JSON")
    p.add_argument("--pump-min", type=float, default=None)
    p.add_argument("--pump-max", type=float, default=None)
    p.add_argument("--pump-points", type=int, default=31)
    p.add_argument("--gamma", type=float, default=20.0, help="1/(W km)")
    p.add_argument("--power", type=float, default=0.0, help="pump peak power, W")
    p.add_argument("--signal-min", type=float, default=None)
    p.add_argument("--signal-max", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_phasematch)

    def _jsa_flags(p):
        p.add_argument("--model", required=True, help="dispersion model JSON")
        p.add_argument("--pump-center", type=float, default=1064.0)
        p.add_argument("--pump-fwhm", type=float, default=1.0)
        p.add_argument("--pump-shape", default="gaussian",
                       choices=["gaussian", "sech2"])
        p.add_argument("--length", type=float, default=1.0, help="fiber length, m")
        p.add_argument("--gamma", type=float, default=20.0)
        p.add_argument("--power", type=float, default=0.0)
        p.add_argument("--signal-min", type=float,
                       default=jsa.DEFAULT_SIGNAL_WINDOW_NM[0])
        p.add_argument("--signal-max", type=float,
                       default=jsa.DEFAULT_SIGNAL_WINDOW_NM[1])
        p.add_argument("--signal-points", type=int, default=jsa.DEFAULT_GRID_POINTS)
        p.add_argument("--idler-min", type=float,
                       default=jsa.DEFAULT_IDLER_WINDOW_NM[0])
        p.add_argument("--idler-max", type=float,
                       default=jsa.DEFAULT_IDLER_WINDOW_NM[1])
        p.add_argument("--idler-points", type=int, default=jsa.DEFAULT_GRID_POINTS)

    p = subs.add_parser("jsi", help="joint spectral intensity grid")
    _jsa_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_jsi)

    p = subs.add_parser("set-scan", help="seeded reconstruction of the grid")
    _jsa_flags(p)
    p.add_argument("--seeds", default="1540:1570:50",
                   help="comma list or start:stop:count in nm")
    _add_common(p)
    p.set_defaults(func=cmd_set_scan)

    p = subs.add_parser("fbg", help="design a grating or evaluate a spec")
    p.add_argument("--design", action="store_true")
    p.add_argument("--spec", default=None, help="existing grating JSON")
    p.add_argument("--bragg", type=float, default=1556.0)
    p.add_argument("--fwhm", type=float, default=0.2)
    p.add_argument("--contrast", type=float, default=17.5)
    p.add_argument("--neff", type=float, default=1.45)
    p.add_argument("--visibility", type=float, default=1.0)
    p.add_argument("--grid-halfspan", type=float, default=10.0)
    p.add_argument("--grid-points", type=int, default=4001)
    _add_common(p)
    p.set_defaults(func=cmd_fbg)

    p = subs.add_parser("herald", help="filtered heralded marginals")
    p.add_argument("--jsi", required=True, help="joint spectrum matrix CSV")
    p.add_argument("--filter", required=True, help="grating spec JSON")
    p.add_argument("--floor-db", type=float, default=17.5)
    p.add_argument("--no-floor", action="store_true",
                   help="use the ideal grating reflectance")
    _add_common(p)
    p.set_defaults(func=cmd_herald)

    p = subs.add_parser("countsim", help="Monte Carlo correlation histogram")
    p.add_argument("--pulses", default="1e7")
    p.add_argument("--power-mw", type=float, default=None)
    p.add_argument("--mu", type=float, default=None,
                   help="override mean pairs per pulse")
    p.add_argument("--peak-halfwidth", type=float, default=5.0)
    p.add_argument("--window-periods", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=cmd_countsim)

    p = subs.add_parser("sweep", help="CAR and rate versus pump power")
    p.add_argument("--pulses", default="1e7")
    p.add_argument("--powers", default=None, help="comma list in mW")
    p.add_argument("--peak-halfwidth", type=float, default=5.0)
    p.add_argument("--window-periods", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = _parse_set(args.set_overrides)
        return args.func(args, overrides)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GepcfError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
