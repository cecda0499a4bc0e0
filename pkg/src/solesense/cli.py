"""Operator entry point: simulate, stream, collect, analyze, calibrate, compare.

Every command is deterministic given its flags and input files: output
timestamps come from the inputs or the --epoch flag, never the wall clock
(live collection excepted). Exit codes are a stable scripting contract:
0 success, 1 usage, 2 data/validation, 3 I/O, 4 network.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
import time
from datetime import datetime

from . import plots, store
from .acquisition import DividerConfig, counts_to_sample, divider_out, quantize
from .analysis import Analyzer, GaitReport, compare_sensors
from .analysis import analyze as analyze_stream
from .datasets import comparison_stimulus
from .sensor import (
    CalibrationError,
    CalibrationPoint,
    CalibrationProfile,
    DynamicsConfig,
    Pressure,
    SensorState,
    builtin_profile,
    builtin_profile_names,
    characterize,
    fit_profile,
    read_calibration_csv,
    static_resistance,
    step,
)
from .store import SessionFormatError, SessionLog, default_header
from .synth import GaitParams, synthesize
from .telemetry import ADDR_ENV_VAR, DEFAULT_PORT, Collector, Emitter, SessionHeader
from .units import CHANNEL_ORDER, PressureSample

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3
EXIT_NETWORK = 4

FULL_SCALE_PA = 750_000.0  # top of the display color ramp


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems must exit 1, not argparse's 2
        raise _UsageError(f"{self.prog}: {message}")


def _parse_addr(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep:
        return text or "127.0.0.1", DEFAULT_PORT
    return host or "127.0.0.1", int(port)


def _default_addr() -> str:
    return os.environ.get(ADDR_ENV_VAR, f"127.0.0.1:{DEFAULT_PORT}")


def _load_profile(spec: str) -> CalibrationProfile:
    if spec.endswith(".json") and os.path.exists(spec):
        return profile_from_json_file(spec)
    return builtin_profile(spec)


def profile_to_json_dict(profile: CalibrationProfile) -> dict:
    return {
        "name": profile.name,
        "onset_pressure_pa": profile.onset_pressure.pascals,
        "fit_r2": profile.fit_r2,
        "points": [[p.pressure_pa, p.resistance_ohm] for p in profile.points],
    }


def profile_from_json_file(path) -> CalibrationProfile:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    points = [CalibrationPoint(p, r) for p, r in data["points"]]
    return fit_profile(data["name"], points, Pressure(data["onset_pressure_pa"]))


def report_json_text(report: GaitReport) -> str:
    return json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"


# --- simulate ---------------------------------------------------------------


def simulate_session(
    params: GaitParams,
    profile: CalibrationProfile,
    divider: DividerConfig = DividerConfig(),
    dynamics: DynamicsConfig | None = None,
    device_id: int = 1,
    epoch: str = store.DEFAULT_EPOCH,
) -> SessionLog:
    """Full chain: synthetic gait -> sensor dynamics -> ADC round trip.

    The stored pressures are what a collector would decode from the wire, not
    the synthetic ground truth: hysteresis, lag and quantization are all in.
    """
    if dynamics is None:
        dynamics = DynamicsConfig(sample_period=1.0 / params.sample_rate_hz)
    header = SessionHeader(
        device_id=device_id,
        epoch=epoch,
        profile_name=profile.name,
        sample_rate_hz=params.sample_rate_hz,
        divider=divider,
    )
    log = SessionLog(header=header)
    states = {channel: SensorState.at_rest(0.0) for channel in CHANNEL_ORDER}
    for truth in synthesize(params):
        counts = []
        for channel in CHANNEL_ORDER:
            states[channel], resistance = step(
                states[channel], truth.channels[channel], truth.timestamp, profile, dynamics
            )
            counts.append(quantize(divider_out(resistance, divider), divider).value)
        log.samples.append(
            counts_to_sample(truth.timestamp, tuple(counts), profile, divider)
        )
    return log


def _validate_epoch_flag(command: str, epoch: str) -> None:
    try:
        datetime.fromisoformat(epoch.replace("Z", "+00:00"))
    except ValueError:
        raise _UsageError(f"{command}: --epoch must be an RFC 3339 timestamp, got {epoch!r}") from None


def cmd_simulate(args) -> int:
    _validate_epoch_flag("simulate", args.epoch)
    try:
        params = GaitParams(
            body_mass_kg=args.mass,
            cadence_spm=args.cadence,
            stance_fraction=args.stance,
            sample_rate_hz=args.rate,
            cycles=args.cycles,
            noise_sigma_pa=args.noise,
            seed=args.seed,
            load_scale=args.load_scale,
        )
    except ValueError as exc:
        raise _UsageError(f"simulate: {exc}") from exc
    profile = _load_profile(args.profile)
    log = simulate_session(params, profile, device_id=args.device_id, epoch=args.epoch)
    store.write_session(log, args.output)
    print(f"wrote {len(log.samples)} samples to {args.output}")
    return EXIT_OK


# --- stream / collect ---------------------------------------------------------


def cmd_stream(args) -> int:
    if bool(args.input) == bool(args.simulate):
        raise _UsageError("stream: exactly one of --input or --simulate is required")
    if args.simulate:
        try:
            params = GaitParams(
                body_mass_kg=args.mass,
                cadence_spm=args.cadence,
                stance_fraction=args.stance,
                sample_rate_hz=args.rate,
                cycles=args.cycles,
                noise_sigma_pa=args.noise,
                seed=args.seed,
            )
        except ValueError as exc:
            raise _UsageError(f"stream: {exc}") from exc
        profile = _load_profile(args.profile or "measured")
        log = simulate_session(params, profile)
    else:
        log = store.read_session(args.input)
        profile = _load_profile(args.profile or log.header.profile_name)
    host, port = _parse_addr(args.addr)

    def connect():
        return socket.create_connection((host, port), timeout=10.0)

    emitter = Emitter(
        connect,
        profile=profile,
        divider=log.header.divider,
        device_id=args.device_id if args.device_id is not None else log.header.device_id,
        pace=args.pace,
    )
    try:
        sent = emitter.run(log.samples)
    finally:
        emitter.close()
    print(f"sent {sent} frames to {host}:{port}")
    return EXIT_OK


def _render_live(sample: PressureSample, width: int = 28) -> str:
    rows = []
    for channel in CHANNEL_ORDER:
        value = sample.value(channel)
        fraction = min(value / FULL_SCALE_PA, 1.0)
        r, g, b = plots.pressure_color(fraction)
        bar = "#" * round(fraction * width)
        rows.append(
            f"\x1b[38;2;{r};{g};{b}m{channel.value:>16} |{bar:<{width}}|\x1b[0m {value / 1000.0:8.1f} kPa"
        )
    return "\n".join(rows)


def cmd_collect(args) -> int:
    _validate_epoch_flag("collect", args.epoch)
    host, port = _parse_addr(args.addr)
    profile = _load_profile(args.profile)
    divider = DividerConfig()

    logs: dict[int, SessionLog] = {}
    analyzers: dict[int, Analyzer] = {}
    last_render = [0.0]

    def sink(device_id: int, sample: PressureSample) -> None:
        log = logs.get(device_id)
        if log is None:
            log = logs.setdefault(
                device_id,
                SessionLog(
                    header=SessionHeader(
                        device_id=device_id,
                        epoch=args.epoch,
                        profile_name=profile.name,
                        sample_rate_hz=0.0,
                        divider=divider,
                    )
                ),
            )
        log.samples.append(sample)
        if args.analyze:
            analyzers.setdefault(device_id, Analyzer()).update(sample)
        if args.live:
            now = time.monotonic()
            if now - last_render[0] >= 0.1:
                last_render[0] = now
                print(f"\x1b[2J\x1b[Hdevice {device_id}  t={sample.timestamp:.2f}s")
                print(_render_live(sample))

    collector = Collector(sink, profile=profile, divider=divider, host=host, port=port)
    collector.start()
    bound_host, bound_port = collector.address
    print(f"listening on {bound_host}:{bound_port}", flush=True)

    try:
        if args.once:
            while not collector.connection_closed.wait(timeout=0.2):
                pass
        else:
            while True:
                time.sleep(0.2)
    except KeyboardInterrupt:
        pass
    finally:
        collector.stop()
        _flush_collected(args, logs, analyzers)
    return EXIT_OK


def _infer_rate(samples: list[PressureSample]) -> float:
    if len(samples) < 2:
        return 0.0
    deltas = sorted(b.timestamp - a.timestamp for a, b in zip(samples, samples[1:]))
    median = deltas[len(deltas) // 2]
    return round(1.0 / median, 6) if median > 0 else 0.0


def _flush_collected(args, logs: dict[int, SessionLog], analyzers: dict[int, Analyzer]) -> None:
    if not logs:  # still produce a valid, header-only session file
        empty = SessionLog(header=default_header(epoch=args.epoch, profile_name=args.profile))
        store.write_session(empty, args.output)
        print(f"wrote 0 samples to {args.output}")
        return
    multi = len(logs) > 1
    for device_id, log in sorted(logs.items()):
        log.header = SessionHeader(
            device_id=device_id,
            epoch=args.epoch,
            profile_name=log.header.profile_name,
            sample_rate_hz=_infer_rate(log.samples),
            divider=log.header.divider,
        )
        path = args.output
        if multi:
            base, dot, ext = args.output.rpartition(".")
            path = f"{base}-dev{device_id}{dot}{ext}" if dot else f"{args.output}-dev{device_id}"
        analyzer = analyzers.get(device_id)
        if analyzer is not None:
            log.events = analyzer.events
            log.report = analyzer.report()
        store.write_session(log, path)
        print(f"wrote {len(log.samples)} samples to {path}")
        if analyzer is not None and args.report:
            report_path = args.report if not multi else f"{args.report}.dev{device_id}"
            with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(report_json_text(log.report))
            print(f"wrote report to {report_path}")


# --- analyze ------------------------------------------------------------------


def _session_plots(args, log: SessionLog, profile: CalibrationProfile) -> None:
    os.makedirs(args.plots, exist_ok=True)
    times = [s.timestamp for s in log.samples]
    pressure_series = [
        (channel.value, times, [s.value(channel) for s in log.samples])
        for channel in CHANNEL_ORDER
    ]
    plots.write_chart(
        os.path.join(args.plots, "time_vs_pressure.svg"),
        os.path.join(args.plots, "time_vs_pressure.csv"),
        pressure_series,
        title="Pressure over time",
        x_label="time [s]",
        y_label="pressure [Pa]",
        x_column="t_s",
    )
    resistance_series = []
    for channel in CHANNEL_ORDER:
        values = []
        for s in log.samples:
            r = static_resistance(profile, s.channels[channel])
            values.append(None if r.is_open else r.ohms)
        resistance_series.append((channel.value, times, values))
    plots.write_chart(
        os.path.join(args.plots, "time_vs_resistance.svg"),
        os.path.join(args.plots, "time_vs_resistance.csv"),
        resistance_series,
        title="Resistance over time",
        x_label="time [s]",
        y_label="resistance [ohm]",
        x_column="t_s",
    )
    _response_curve_plot(args, [(p.pressure_pa, p.resistance_ohm) for p in profile.points])


def _response_curve_plot(args, pairs: list[tuple[float, float]]) -> None:
    plots.write_chart(
        os.path.join(args.plots, "pressure_response_curve.svg"),
        os.path.join(args.plots, "pressure_response_curve.csv"),
        [("resistance_ohm", [p for p, _r in pairs], [r for _p, r in pairs])],
        title="Pressure response curve",
        x_label="pressure [Pa]",
        y_label="resistance [ohm]",
        x_column="pressure_pa",
    )


def _legacy_plots(args, records) -> None:
    os.makedirs(args.plots, exist_ok=True)
    times = [r.time_s for r in records]
    plots.write_chart(
        os.path.join(args.plots, "time_vs_pressure.svg"),
        os.path.join(args.plots, "time_vs_pressure.csv"),
        [("pressure_pa", times, [r.pressure_pa for r in records])],
        title="Pressure over time",
        x_label="time [s]",
        y_label="pressure [Pa]",
        x_column="t_s",
    )
    plots.write_chart(
        os.path.join(args.plots, "time_vs_resistance.svg"),
        os.path.join(args.plots, "time_vs_resistance.csv"),
        [("resistance_ohm", times, [r.resistance_ohm for r in records])],
        title="Resistance over time",
        x_label="time [s]",
        y_label="resistance [ohm]",
        x_column="t_s",
    )
    _response_curve_plot(args, [(r.pressure_pa, r.resistance_ohm) for r in records])


def cmd_analyze(args) -> int:
    kind = store.sniff_kind(args.input)
    if kind in ("session", "session_jsonl"):
        log = store.read_session(args.input)
        profile = _load_profile(args.profile or log.header.profile_name)
        _events, report = analyze_stream(log.samples)
        text = report_json_text(report)
        if args.json:
            with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if args.plots:
            _session_plots(args, log, profile)
    elif kind == "legacy":
        records = store.read_legacy_csv(args.input)
        summary = {"kind": "legacy", "records": len(records)}
        sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        if args.plots:
            _legacy_plots(args, records)
    else:  # calibration pairs
        points = read_calibration_csv(args.input)
        summary = {"kind": "calibration", "points": len(points)}
        sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        if args.plots:
            os.makedirs(args.plots, exist_ok=True)
            _response_curve_plot(args, [(p.pressure_pa, p.resistance_ohm) for p in points])
    return EXIT_OK


# --- calibrate ------------------------------------------------------------------


def cmd_calibrate(args) -> int:
    points = read_calibration_csv(args.input)
    profile = fit_profile(args.name, points, Pressure(args.onset))
    figures = characterize(profile)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(profile_to_json_dict(profile), fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"profile: {profile.name}")
    print(f"points: {len(profile.points)} (after duplicate averaging)")
    print(
        f"range: {figures.resistance_at_min_ohm:g} ohm @ {figures.pressure_min_pa:g} Pa"
        f" ... {figures.resistance_at_max_ohm:g} ohm @ {figures.pressure_max_pa:g} Pa"
    )
    print(
        f"sensitivity: {figures.sensitivity_ohm_per_pa:.6g} ohm/Pa"
        f" = {figures.sensitivity_pa_per_ohm:.6g} Pa/ohm"
    )
    if not figures.matches_nominal_sensitivity:
        print(
            f"note: computed Pa/ohm differs from the nominal"
            f" {figures.nominal_sensitivity_pa_per_ohm:g} Pa/ohm figure; trust the computed value"
        )
    print(f"response time: {figures.response_time_s * 1000.0:.1f} ms (10-90%)")
    print(f"recovery time: {figures.recovery_time_s * 1000.0:.1f} ms (10-90%)")
    print(f"hysteresis: {figures.hysteresis_fraction * 100.0:.2f} % of full scale")
    print(f"threshold band: +/- {figures.threshold_band_fraction * 100.0:.0f} %")
    return EXIT_OK


# --- compare --------------------------------------------------------------------


def _read_stimulus_csv(path) -> tuple[list[float], list[list[float]] | list[float]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise SessionFormatError(f"{path}: empty stimulus file")
    header = tuple(lines[0].split(","))
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    times = [r[0] for r in rows]
    if header == ("time_s", "sensor_pa", "fsr_pa"):
        return times, [[r[1] for r in rows], [r[2] for r in rows]]
    if header == ("time_s", "pressure_pa"):
        return times, [r[1] for r in rows]
    raise SessionFormatError(
        f"{path}: expected 'time_s,sensor_pa,fsr_pa' or 'time_s,pressure_pa', got {header!r}"
    )


def cmd_compare(args) -> int:
    sensor_profile = _load_profile(args.sensor_profile)
    fsr_profile = _load_profile(args.fsr_profile)
    if args.stimulus:
        times, stimuli = _read_stimulus_csv(args.stimulus)
    else:
        times, sensor_stim, fsr_stim = comparison_stimulus()
        stimuli = [sensor_stim, fsr_stim]
    table = compare_sensors(times, stimuli, [sensor_profile, fsr_profile])

    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("time_s,sensor_kohm,fsr_kohm\n")
        for t, row in zip(table.times_s, table.resistances_ohm):
            fh.write(f"{t!r},{row[0] / 1000.0!r},{row[1] / 1000.0!r}\n")
    print(f"wrote comparison table to {args.output}")

    if args.svg:
        plots.write_chart(
            args.svg,
            args.svg.rsplit(".", 1)[0] + ".csv",
            [
                ("sensor_kohm", list(table.times_s), [r[0] / 1000.0 for r in table.resistances_ohm]),
                ("fsr_kohm", list(table.times_s), [r[1] / 1000.0 for r in table.resistances_ohm]),
            ],
            title="Fabricated sensor vs commercial FSR",
            x_label="time [s]",
            y_label="resistance [kohm]",
            x_column="time_s",
        )
        print(f"wrote overlay to {args.svg}")
    return EXIT_OK


# --- parser --------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="solesense", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="synthesize a gait session through the full sensor chain")
    sim.add_argument("--mass", type=float, default=70.0, help="body mass [kg]")
    sim.add_argument("--cadence", type=float, default=120.0, help="steps per minute")
    sim.add_argument("--stance", type=float, default=0.6, help="stance fraction of the cycle")
    sim.add_argument("--cycles", type=int, default=10)
    sim.add_argument("--rate", type=float, default=100.0, help="sample rate [Hz]")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--noise", type=float, default=0.0, help="pressure noise sigma [Pa]")
    sim.add_argument("--load-scale", type=float, default=0.18)
    sim.add_argument("--profile", default="measured", help=f"one of {builtin_profile_names()} or a profile JSON path")
    sim.add_argument("--device-id", type=int, default=1)
    sim.add_argument("--epoch", default=store.DEFAULT_EPOCH)
    sim.add_argument("-o", "--output", required=True)
    sim.set_defaults(func=cmd_simulate)

    stream = sub.add_parser("stream", help="replay a session file (or a live simulation) to a collector")
    stream.add_argument("--input", "-i", default=None, help="session file to replay")
    stream.add_argument("--simulate", action="store_true", help="stream a live simulation instead of a file")
    stream.add_argument("--addr", default=_default_addr(), help="collector host:port")
    stream.add_argument("--device-id", type=int, default=None)
    stream.add_argument("--pace", action="store_true", help="pace frames by sample timestamps")
    stream.add_argument("--profile", default=None, help="override the session's profile")
    stream.add_argument("--mass", type=float, default=70.0, help="(--simulate) body mass [kg]")
    stream.add_argument("--cadence", type=float, default=120.0, help="(--simulate) steps per minute")
    stream.add_argument("--stance", type=float, default=0.6, help="(--simulate) stance fraction")
    stream.add_argument("--cycles", type=int, default=10, help="(--simulate) cycle count")
    stream.add_argument("--rate", type=float, default=100.0, help="(--simulate) sample rate [Hz]")
    stream.add_argument("--seed", type=int, default=0, help="(--simulate) noise seed")
    stream.add_argument("--noise", type=float, default=0.0, help="(--simulate) noise sigma [Pa]")
    stream.set_defaults(func=cmd_stream)

    collect = sub.add_parser("collect", help="run the telemetry collector server")
    collect.add_argument("--addr", default=_default_addr(), help="listen host:port (:0 for ephemeral)")
    collect.add_argument("-o", "--output", required=True, help="session file to write on shutdown")
    collect.add_argument("--analyze", action="store_true", help="attach the online gait analyzer")
    collect.add_argument("--report", default=None, help="report JSON path (with --analyze)")
    collect.add_argument("--live", action="store_true", help="render a terminal meter view")
    collect.add_argument("--once", action="store_true", help="stop after the first connection closes")
    collect.add_argument("--profile", default="measured")
    collect.add_argument("--epoch", default=store.DEFAULT_EPOCH)
    collect.set_defaults(func=cmd_collect)

    analyze_p = sub.add_parser("analyze", help="report gait metrics / render plots from a file")
    analyze_p.add_argument("input")
    analyze_p.add_argument("--json", default=None, help="write the report JSON here instead of stdout")
    analyze_p.add_argument("--plots", default=None, help="directory for SVG plots + CSV data twins")
    analyze_p.add_argument("--profile", default=None)
    analyze_p.set_defaults(func=cmd_analyze)

    cal = sub.add_parser("calibrate", help="fit a calibration CSV and characterize the model")
    cal.add_argument("input", help="CSV with pressure_pa,resistance_ohm")
    cal.add_argument("--name", default="custom")
    cal.add_argument("--onset", type=float, default=200_000.0, help="open-circuit onset pressure [Pa]")
    cal.add_argument("-o", "--output", default=None, help="profile JSON path")
    cal.set_defaults(func=cmd_calibrate)

    cmp_p = sub.add_parser("compare", help="side-by-side fabricated sensor vs FSR run")
    cmp_p.add_argument("--stimulus", default=None, help="stimulus CSV; default: built-in bench schedule")
    cmp_p.add_argument("-o", "--output", required=True, help="comparison table CSV")
    cmp_p.add_argument("--svg", default=None, help="overlay chart path")
    cmp_p.add_argument("--sensor-profile", default="bench")
    cmp_p.add_argument("--fsr-profile", default="fsr")
    cmp_p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (SessionFormatError, CalibrationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConnectionError, socket.gaierror, socket.timeout) as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
