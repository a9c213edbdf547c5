"""Command-line interface: one subcommand per library operation.

Exit codes: 0 success, 1 usage error, 2 data/domain error (the error name is
printed to stderr). All numeric output is capped at 4 decimals so repeated
runs and golden files stay byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .datasets import (
    PATH_LOSS_COLUMNS,
    Environment,
    load_path_loss_csv,
    load_reflection_csv,
    paper_dataset,
    validate_dataset,
)
from .errors import MmwPropError
from .partition import (
    LinkPowerMeasurement,
    depolarization_margin,
    partition_loss,
    power_budget,
    xpd_from_path_losses,
)
from .pathloss import CiModel, ci_path_loss_db, fit_ci, fspl_db, reduce_directional
from .reflection import (
    estimate_permittivity_mmse,
    fit_linear_reflection,
    fresnel_gamma_perp,
    reflection_loss_db,
)
from .scattering import (
    ARC_LIMIT_DEG,
    DEFAULT_DIFFUSE_SOLID_ANGLE_SR,
    DEFAULT_SPECULAR_SPREAD_DEG,
    DsParameters,
    ScatterPatternPoint,
    backscatter_margin,
    classify_smooth,
    predict_pattern,
    sweep_geometries,
)


@dataclass
class CommandResult:
    exit_code: int
    stdout: str
    stderr: str


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _round4(value):
    if isinstance(value, bool) or not isinstance(value, float):
        if isinstance(value, dict):
            return {k: _round4(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [_round4(v) for v in value]
        return value
    return round(value, 4) + 0.0


def _json_payload(obj) -> str:
    return json.dumps(_round4(obj), indent=2) + "\n"


def _csv_payload(header, rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.4f}".replace("-0.0000", "0.0000")
                         if isinstance(v, float) else v for v in row])
    return out.getvalue()


def _sample_dict(s) -> dict:
    return {
        "freq_hz": s.freq_hz, "tx_id": s.tx_id, "rx_id": s.rx_id,
        "distance_m": s.distance_m, "environment": s.environment.value,
        "tx_az_deg": s.tx_az_deg, "tx_el_deg": s.tx_el_deg,
        "rx_az_deg": s.rx_az_deg, "rx_el_deg": s.rx_el_deg,
        "tx_pol": s.tx_pol.value, "rx_pol": s.rx_pol.value,
        "path_loss_db": s.path_loss_db,
    }


def _sample_row(s) -> list:
    d = _sample_dict(s)
    return [d[c] for c in PATH_LOSS_COLUMNS]


# ---------------------------------------------------------------------------
# Subcommand handlers (each returns the payload text)
# ---------------------------------------------------------------------------

def _cmd_fresnel(args) -> str:
    gamma = fresnel_gamma_perp(args.angle, args.eps)
    return _json_payload({
        "incident_angle_deg": args.angle,
        "eps_r": args.eps,
        "gamma_perp": gamma,
        "magnitude": abs(gamma),
        "loss_db": reflection_loss_db(args.angle, args.eps),
    })


def _filter_freq(samples, freq_hz):
    if freq_hz is None:
        return samples
    return [s for s in samples if s.freq_hz == freq_hz]


def _cmd_estimate_eps(args) -> str:
    samples = _filter_freq(load_reflection_csv(args.input), args.freq)
    estimate = estimate_permittivity_mmse(samples)
    return _json_payload({
        "eps_r": estimate.eps_r,
        "mse": estimate.mse,
        "samples_used": estimate.samples_used,
    })


def _cmd_fit_linear(args) -> str:
    samples = _filter_freq(load_reflection_csv(args.input), args.freq)
    fit, rmse = fit_linear_reflection(samples)
    return _json_payload({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "rmse": rmse,
        "samples_used": len(samples),
    })


def _sweep_angles(incident_angle_deg: float, step_deg: float) -> list[float]:
    count = int(round(2 * ARC_LIMIT_DEG / step_deg))
    angles = [-ARC_LIMIT_DEG + i * step_deg for i in range(count + 1)]
    angles = [a for a in angles if abs(a) <= ARC_LIMIT_DEG + 1e-9]
    if not any(abs(a - incident_angle_deg) <= 1e-6 for a in angles):
        angles.append(incident_angle_deg)
    return sorted(angles)


def _cmd_scatter_pattern(args) -> str:
    params = DsParameters(s_coeff=args.s_coeff, lambda_mix=args.lambda_mix,
                          alpha_r=args.alpha_r, alpha_i=args.alpha_i)
    geometries = sweep_geometries(
        args.incident_angle,
        _sweep_angles(args.incident_angle, args.step),
        tx_distance_m=args.tx_distance,
        rx_distance_m=args.rx_distance,
    )
    pattern = predict_pattern(
        geometries, args.eps, params, args.hpbw,
        diffuse_solid_angle_sr=args.diffuse_sr,
        specular_spread_deg=args.spread_deg,
    )
    if args.format == "csv":
        return _csv_payload(
            ("observation_angle_deg", "relative_power_db"),
            [(p.observation_angle_deg, p.relative_power_db) for p in pattern],
        )
    peak = max(pattern, key=lambda p: p.relative_power_db)
    return _json_payload({
        "incident_angle_deg": args.incident_angle,
        "peak_angle": peak.observation_angle_deg,
        "backscatter_margin_db": backscatter_margin(pattern, args.incident_angle),
        "smooth": classify_smooth(pattern, args.incident_angle),
        "pattern": [
            {"observation_angle_deg": p.observation_angle_deg,
             "relative_power_db": p.relative_power_db}
            for p in pattern
        ],
    })


def _cmd_backscatter(args) -> str:
    with open(args.input, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        rows = [(float(r["observation_angle_deg"]), float(r["relative_power_db"]))
                for r in reader]
    peak_db = max(p for _, p in rows) if rows else 0.0
    pattern = [ScatterPatternPoint(a, p - peak_db) for a, p in rows]
    peak = max(pattern, key=lambda p: p.relative_power_db) if pattern else None
    return _json_payload({
        "peak_angle": peak.observation_angle_deg if peak else None,
        "backscatter_margin_db": backscatter_margin(pattern, args.incident_angle),
        "smooth": classify_smooth(pattern, args.incident_angle),
    })


def _cmd_partition(args) -> str:
    rx_power = args.rx_power_dbm
    if args.gains_dbi:
        rx_power -= sum(args.gains_dbi)
    result = partition_loss(LinkPowerMeasurement(
        tx_power_dbm=args.tx_power_dbm,
        rx_power_dbm=rx_power,
        distance_m=args.distance_m,
        freq_hz=args.freq,
    ))
    return _json_payload({"loss_db": result.loss_db,
                          "negative_loss": result.negative_loss})


def _cmd_xpd(args) -> str:
    return _json_payload({"xpd_db": xpd_from_path_losses(args.cross_db, args.co_db)})


def _cmd_depol_margin(args) -> str:
    if args.cross_mean_db is not None:
        mean = args.cross_mean_db
    elif args.vh_db is not None and args.hv_db is not None:
        mean = (args.vh_db + args.hv_db) / 2.0
    else:
        raise _UsageError("provide --cross-mean-db or both --vh-db and --hv-db")
    return _json_payload({"margin_db": depolarization_margin(mean, args.xpd_db)})


def _cmd_budget(args) -> str:
    budget = power_budget(args.refl_db, args.part_db)
    return _json_payload({"budget": {
        "reflected": budget.reflected_fraction,
        "transmitted": budget.transmitted_fraction,
        "absorbed": budget.absorbed_fraction,
    }})


def _cmd_fspl(args) -> str:
    return _json_payload({"fspl_db": fspl_db(args.freq, args.distance_m)})


def _cmd_ci_eval(args) -> str:
    model = CiModel(freq_hz=args.freq, ple=args.ple, sigma_db=args.sigma_db)
    return _json_payload({"path_loss_db": ci_path_loss_db(model, args.distance_m)})


def _cmd_fit_ci(args) -> str:
    samples = load_path_loss_csv(args.input)
    env = args.env
    if env == "LOS":
        samples = [s for s in samples if s.environment is Environment.LOS]
    elif env == "NLOS":
        samples = [s for s in samples if s.environment is Environment.NLOS]
    elif env == "NLOS_BEST":
        samples = list(reduce_directional(samples).nlos_best)
    model = fit_ci(samples, args.freq)
    return _json_payload({
        "freq_hz": model.freq_hz,
        "env": env or "ALL",
        "ple": model.ple,
        "sigma_db": model.sigma_db,
        "n_samples": len(samples),
    })


def _cmd_reduce_directional(args) -> str:
    reduction = reduce_directional(load_path_loss_csv(args.input))
    if args.format == "csv":
        return _csv_payload(PATH_LOSS_COLUMNS,
                            [_sample_row(s) for s in reduction.nlos_best])
    return _json_payload({
        "los_count": len(reduction.los),
        "nlos_count": len(reduction.nlos_all),
        "nlos_best_count": len(reduction.nlos_best),
        "nlos_best": [_sample_dict(s) for s in reduction.nlos_best],
    })


def _paper_tables_payload() -> dict:
    data = paper_dataset()
    return {
        "I": [
            {
                "freq_hz": s.band.center_frequency_hz,
                "label": s.band.label,
                "rf_bandwidth_hz": s.rf_bandwidth_hz,
                "antennas": [{"hpbw_deg": a.hpbw_deg, "gain_dbi": a.gain_dbi}
                             for a in s.antennas],
                "xpd_db": s.xpd_db,
            }
            for s in data.sounders
        ],
        "II": [
            {"freq_hz": s.freq_hz, "incident_angle_deg": s.incident_angle_deg,
             "reflection_loss_db": s.reflection_loss_db}
            for s in data.reflection
        ],
        "III": [
            {"freq_hz": r.freq_hz, "tx_pol": r.tx_pol.value, "rx_pol": r.rx_pol.value,
             "mean_db": r.mean_loss_db, "std_db": r.std_db}
            for r in data.partition_records("clear_glass")
        ],
        "IV": [
            {"freq_hz": r.freq_hz, "tx_pol": r.tx_pol.value, "rx_pol": r.rx_pol.value,
             "mean_db": r.mean_loss_db, "std_db": r.std_db}
            for r in data.partition_records("drywall")
        ],
        "V": [
            {"freq_hz": r.freq_hz, "environment": r.environment.value,
             "ple": r.ple, "sigma_db": r.sigma_db}
            for r in data.ci_fits
        ],
    }


def _cmd_paper_tables(args) -> str:
    tables = _paper_tables_payload()
    if args.table:
        return _json_payload({args.table: tables[args.table]})
    return _json_payload(tables)


def _cmd_validate(args) -> str:
    report = validate_dataset(load_path_loss_csv(args.input))
    return _json_payload({
        "los_count": report.los_count,
        "nlos_count": report.nlos_count,
        "distance_min_m": report.distance_min,
        "distance_max_m": report.distance_max,
        "duplicates": [list(k) for k in report.duplicate_keys],
    })


# ---------------------------------------------------------------------------
# Parser / dispatch
# ---------------------------------------------------------------------------

def _add_output_options(sub, formats=False):
    sub.add_argument("--output", help="write the payload to this file instead of stdout")
    if formats:
        sub.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> _Parser:
    parser = _Parser(prog="mmwprop", description=__doc__)
    subs = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    subs.required = True

    sub = subs.add_parser("fresnel", help="Fresnel reflection coefficient and loss")
    sub.add_argument("--eps", type=float, required=True, help="relative permittivity")
    sub.add_argument("--angle", type=float, required=True, help="incidence angle, deg from normal")
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_fresnel)

    sub = subs.add_parser("estimate-eps", help="MMSE permittivity from reflection CSV")
    sub.add_argument("--input", required=True)
    sub.add_argument("--freq", type=float, help="keep only samples at this frequency, Hz")
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_estimate_eps)

    sub = subs.add_parser("fit-linear", help="linear |gamma| vs angle fit from reflection CSV")
    sub.add_argument("--input", required=True)
    sub.add_argument("--freq", type=float)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_fit_linear)

    sub = subs.add_parser("scatter-pattern", help="dual-lobe scattering + specular pattern")
    sub.add_argument("--eps", type=float, required=True)
    sub.add_argument("--incident-angle", type=float, required=True)
    sub.add_argument("--hpbw", type=float, default=8.0, help="antenna HPBW, deg")
    sub.add_argument("--s-coeff", type=float, default=DsParameters.s_coeff)
    sub.add_argument("--lambda-mix", type=float, default=DsParameters.lambda_mix)
    sub.add_argument("--alpha-r", type=int, default=DsParameters.alpha_r)
    sub.add_argument("--alpha-i", type=int, default=DsParameters.alpha_i)
    sub.add_argument("--tx-distance", type=float, default=1.5)
    sub.add_argument("--rx-distance", type=float, default=1.5)
    sub.add_argument("--step", type=float, default=10.0, help="sweep step, deg")
    sub.add_argument("--diffuse-sr", type=float, default=DEFAULT_DIFFUSE_SOLID_ANGLE_SR)
    sub.add_argument("--spread-deg", type=float, default=DEFAULT_SPECULAR_SPREAD_DEG)
    _add_output_options(sub, formats=True)
    sub.set_defaults(handler=_cmd_scatter_pattern)

    sub = subs.add_parser("backscatter", help="margin and smoothness from a pattern CSV")
    sub.add_argument("--input", required=True)
    sub.add_argument("--incident-angle", type=float, required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_backscatter)

    sub = subs.add_parser("partition", help="free-space-corrected partition loss")
    sub.add_argument("--tx-power-dbm", type=float, required=True)
    sub.add_argument("--rx-power-dbm", type=float, required=True)
    sub.add_argument("--distance-m", type=float, required=True)
    sub.add_argument("--freq", type=float, required=True)
    sub.add_argument("--gains-dbi", type=float, nargs=2, metavar=("TX", "RX"),
                     help="antenna gains to subtract from the received power")
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_partition)

    sub = subs.add_parser("xpd", help="cross-polarization discrimination")
    sub.add_argument("--co-db", type=float, required=True)
    sub.add_argument("--cross-db", type=float, required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_xpd)

    sub = subs.add_parser("depol-margin", help="cross-pol partition loss minus XPD")
    sub.add_argument("--cross-mean-db", type=float)
    sub.add_argument("--vh-db", type=float)
    sub.add_argument("--hv-db", type=float)
    sub.add_argument("--xpd-db", type=float, required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_depol_margin)

    sub = subs.add_parser("budget", help="reflected/transmitted/absorbed split")
    sub.add_argument("--refl-db", type=float, required=True)
    sub.add_argument("--part-db", type=float, required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_budget)

    sub = subs.add_parser("fspl", help="Friis free-space path loss")
    sub.add_argument("--freq", type=float, required=True)
    sub.add_argument("--distance-m", type=float, required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_fspl)

    sub = subs.add_parser("ci-eval", help="close-in model mean path loss")
    sub.add_argument("--freq", type=float, required=True)
    sub.add_argument("--ple", type=float, required=True)
    sub.add_argument("--sigma-db", type=float, default=0.0)
    sub.add_argument("--distance-m", type=float, required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_ci_eval)

    sub = subs.add_parser("fit-ci", help="fit the close-in model to a path-loss CSV")
    sub.add_argument("--input", required=True)
    sub.add_argument("--freq", type=float, required=True)
    sub.add_argument("--env", choices=("LOS", "NLOS", "NLOS_BEST"))
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_fit_ci)

    sub = subs.add_parser("reduce-directional", help="LOS/NLOS split and NLOS-best picks")
    sub.add_argument("--input", required=True)
    _add_output_options(sub, formats=True)
    sub.set_defaults(handler=_cmd_reduce_directional)

    sub = subs.add_parser("paper-tables", help="dump the embedded reference tables")
    sub.add_argument("--table", choices=("I", "II", "III", "IV", "V"))
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_paper_tables)

    sub = subs.add_parser("validate", help="summarize a path-loss CSV")
    sub.add_argument("--input", required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_validate)

    return parser


def _error_name(exc: BaseException) -> str:
    name = type(exc).__name__
    return name.removesuffix("Error")


def dispatch(argv) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        return CommandResult(1, "", str(err) + "\n")
    try:
        payload = args.handler(args)
    except _UsageError as err:
        return CommandResult(1, "", str(err) + "\n")
    except (MmwPropError, FileNotFoundError) as err:
        return CommandResult(2, "", f"{_error_name(err)}: {err}\n")
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(payload)
        return CommandResult(0, "", "")
    return CommandResult(0, payload, "")


def main(argv=None) -> int:
    result = dispatch(sys.argv[1:] if argv is None else argv)
    if result.stdout:
        sys.stdout.write(result.stdout)
    if result.stderr:
        sys.stderr.write(result.stderr)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
