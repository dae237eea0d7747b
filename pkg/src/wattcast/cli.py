"""Command-line surface: forecast, benchmark, resample, decompose.

Every command is a pure function of its input files, flags, and seed —
identical invocations produce byte-identical outputs (forecast CSVs,
reports, and SVG plots alike). Flags may come from a ``key = value``
config file (``--config``, or the ``WATTCAST_CONFIG`` environment
variable); explicit flags win over the file, the file wins over defaults.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 model
error, 5 when every benchmark cell failed.
"""

from __future__ import annotations

import argparse
import functools
import os
import re
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .arima import arima_fit, arima_forecast
from .errors import ConfigError, DataError, ModelError
from .evaluation import ModelSpec, benchmark
from .ingest import (
    DatasetSchema,
    _format_timestamp,
    infer_schema,
    read_energy_csv,
    write_energy_csv,
)
from .regressors import (
    MODE_ONE_STEP,
    MODE_RECURSIVE,
    GpModel,
    KnnModel,
    MlpModel,
    OlsModel,
    SvrModel,
)
from .series import TimeSeries, resample
from .svgplot import decomposition_chart, forecast_chart
from .transform import decompose, lag_embed
from .var import var_fit, var_forecast

LAG_MODELS = ("ols", "gp", "mlp", "svr", "knn")
ALL_MODELS = LAG_MODELS + ("arima", "var")

# Every tunable default in one place; --help quotes these, and benchmark
# reports embed the resolved values so runs are self-describing.
DEFAULTS = {
    "model": "svr",
    "p": 24,
    "d": 0,
    "q": 0,
    "arima_p": 2,  # order of the arima entry in benchmark suites: (arima_p, d, arima_q)
    "arima_q": 1,
    "horizon": 24,
    "models": ",".join(ALL_MODELS),
    "splits": "0.6,0.7,0.8",
    "mode": MODE_ONE_STEP,
    "period": 24,
    "seed": 0,
    "jobs": 1,
    "agg": "sum",
    "knn_k": 3,
    "gp_signal_var": 1.0,
    "gp_length_scale": 1.0,
    "gp_noise_var": 0.01,
    "svr_c": 1.0,
    "svr_epsilon": 0.1,
    "mlp_lr": 0.3,
    "mlp_momentum": 0.2,
    "mlp_epochs": 500,
}
# svr gamma and mlp hidden-layer width default to data-driven values:
# 1 / (n_features * var(X)) and ceil((n_features + 1) / 2)

_INTERVAL_RE = re.compile(r"^(\d+)([mhd])$")
_UNIT_SECONDS = {"m": 60.0, "h": 3600.0, "d": 86400.0}


def parse_interval(text: str) -> float:
    """``<integer><unit>`` with units m/h/d, or the alias "daily"."""
    text = text.strip()
    if text == "daily":
        return 86400.0
    matched = _INTERVAL_RE.match(text)
    if not matched or int(matched.group(1)) == 0:
        raise ConfigError(f"bad interval {text!r}; use <integer><m|h|d> "
                          "(e.g. 15m, 1h, 1d) or 'daily'")
    return int(matched.group(1)) * _UNIT_SECONDS[matched.group(2)]


# --- argument parsing and config resolution --------------------------------

def _dflt(key) -> str:
    return f"(default: {DEFAULTS[key]})"


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="FILE",
                   help="key=value config file; flags win over file entries "
                        "(default: $WATTCAST_CONFIG if set)")
    p.add_argument("--seed", type=int, help=f"seed for seeded models {_dflt('seed')}")


def _add_schema(p: argparse.ArgumentParser):
    p.add_argument("--timestamp-column", help="timestamp column name or index "
                                              "(default: inferred)")
    p.add_argument("--value-column", help="value column name or index "
                                          "(default: inferred)")
    p.add_argument("--timestamp-format",
                   help="'auto', 'iso', 'epoch', or a strptime pattern "
                        "(default: auto)")
    p.add_argument("--delimiter", help="CSV delimiter (default: inferred)")
    p.add_argument("--no-header", action="store_const", const=True, default=None,
                   help="file has no header row (default: inferred)")
    p.add_argument("--utc-offset", type=float, metavar="HOURS",
                   help="UTC offset of naive timestamps (default: 0)")


def _add_hyper(p: argparse.ArgumentParser):
    p.add_argument("--knn-k", type=int, help=f"neighbour count {_dflt('knn_k')}")
    p.add_argument("--gp-signal-var", type=float,
                   help=f"RBF signal variance {_dflt('gp_signal_var')}")
    p.add_argument("--gp-length-scale", type=float,
                   help=f"RBF length scale {_dflt('gp_length_scale')}")
    p.add_argument("--gp-noise-var", type=float,
                   help=f"observation noise variance {_dflt('gp_noise_var')}")
    p.add_argument("--svr-c", type=float, help=f"box constraint {_dflt('svr_c')}")
    p.add_argument("--svr-epsilon", type=float,
                   help=f"insensitive-tube half width {_dflt('svr_epsilon')}")
    p.add_argument("--svr-gamma", type=float,
                   help="RBF gamma (default: 1 / (n_features * var(X)))")
    p.add_argument("--mlp-hidden", type=int,
                   help="hidden units (default: ceil((n_features + 1) / 2))")
    p.add_argument("--mlp-lr", type=float, help=f"learning rate {_dflt('mlp_lr')}")
    p.add_argument("--mlp-momentum", type=float,
                   help=f"momentum factor {_dflt('mlp_momentum')}")
    p.add_argument("--mlp-epochs", type=int,
                   help=f"training epochs {_dflt('mlp_epochs')}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wattcast",
        description="Energy consumption forecasting toolkit: classical and "
                    "regression forecasters with a chronological benchmark.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    forecast = sub.add_parser(
        "forecast", help="fit one model on a series and forecast ahead",
        description="Fit the chosen model on the whole input series and write "
                    "the next --horizon values as canonical CSV.")
    forecast.add_argument("--input", metavar="FILE", help="energy CSV to read")
    forecast.add_argument("--model", choices=ALL_MODELS,
                          help=f"model family {_dflt('model')}")
    forecast.add_argument("--p", type=int,
                          help=f"lag order / AR order {_dflt('p')}")
    forecast.add_argument("--d", type=int,
                          help=f"differencing order (arima) {_dflt('d')}")
    forecast.add_argument("--q", type=int, help=f"MA order (arima) {_dflt('q')}")
    forecast.add_argument("--horizon", type=int,
                          help=f"steps to forecast {_dflt('horizon')}")
    forecast.add_argument("--out", metavar="FILE",
                          help="forecast CSV path (default: stdout)")
    forecast.add_argument("--plot", metavar="FILE",
                          help="write an SVG overlaying history and forecast")
    _add_hyper(forecast)
    _add_schema(forecast)
    _add_common(forecast)

    bench = sub.add_parser(
        "benchmark", help="sweep models x datasets x splits and rank by RAE",
        description="Cartesian sweep over models, datasets, chronological "
                    "splits and optional resampling intervals; failed cells "
                    "are recorded, not fatal.")
    bench.add_argument("--input", action="append", metavar="FILE",
                       help="energy CSV (repeatable)")
    bench.add_argument("--models", help=f"comma-separated families {_dflt('models')}")
    bench.add_argument("--splits",
                       help=f"comma-separated train fractions {_dflt('splits')}")
    bench.add_argument("--p", type=int, help=f"lag order {_dflt('p')}")
    bench.add_argument("--arima-p", type=int,
                       help=f"AR order of the arima entry {_dflt('arima_p')}")
    bench.add_argument("--d", type=int,
                       help=f"differencing order of the arima entry {_dflt('d')}")
    bench.add_argument("--arima-q", type=int,
                       help=f"MA order of the arima entry {_dflt('arima_q')}")
    bench.add_argument("--horizon", type=int,
                       help="cap on scored test steps (default: whole test span)")
    bench.add_argument("--mode", choices=(MODE_ONE_STEP, MODE_RECURSIVE),
                       help=f"prediction mode {_dflt('mode')}")
    bench.add_argument("--intervals",
                       help="comma-separated resampling intervals, e.g. "
                            "'native,1h,3h,daily' (default: native)")
    bench.add_argument("--jobs", type=int,
                       help=f"worker processes for sweep cells {_dflt('jobs')}")
    bench.add_argument("--report", metavar="FILE",
                       help="text report path (default: stdout)")
    bench.add_argument("--json", metavar="FILE",
                       help="also write a JSON report here")
    _add_hyper(bench)
    _add_schema(bench)
    _add_common(bench)

    resample_p = sub.add_parser(
        "resample", help="aggregate a series to a coarser interval",
        description="Aggregate to an integer multiple of the source interval "
                    "and write canonical CSV.")
    resample_p.add_argument("--input", metavar="FILE", help="energy CSV to read")
    resample_p.add_argument("--interval",
                            help="target interval: <integer><m|h|d> or 'daily'")
    resample_p.add_argument("--agg", choices=("sum", "mean"),
                            help=f"window aggregate {_dflt('agg')}")
    resample_p.add_argument("--out", metavar="FILE",
                            help="output CSV path (default: stdout)")
    _add_schema(resample_p)
    _add_common(resample_p)

    decompose_p = sub.add_parser(
        "decompose", help="split a series into trend/seasonal/residual",
        description="Classical additive decomposition; writes aligned "
                    "value, trend, seasonal and residual columns.")
    decompose_p.add_argument("--input", metavar="FILE", help="energy CSV to read")
    decompose_p.add_argument("--period", type=int,
                             help=f"seasonal period in samples {_dflt('period')}")
    decompose_p.add_argument("--out", metavar="FILE",
                             help="output CSV path (default: stdout)")
    decompose_p.add_argument("--plot", metavar="FILE",
                             help="write a stacked component SVG")
    _add_schema(decompose_p)
    _add_common(decompose_p)

    actions = {name: choice._actions
               for name, choice in sub.choices.items()}
    return parser, actions


def _parse_config_file(path: str) -> dict:
    entries = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{path}:{line_no}: expected key = value")
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


_TRUE_WORDS = ("1", "true", "yes", "on")
_FALSE_WORDS = ("0", "false", "no", "off")


def _apply_config(args, actions) -> None:
    path = args.config or os.environ.get("WATTCAST_CONFIG")
    if not path:
        return
    by_dest = {a.dest: a for a in actions if a.dest not in ("help", "config")}
    for key, text in _parse_config_file(path).items():
        if key not in by_dest:
            raise ConfigError(f"unknown config key {key!r} "
                              f"(choose from {', '.join(sorted(by_dest))})")
        if getattr(args, key) is not None:
            continue  # explicit flag wins
        action = by_dest[key]
        if action.const is True:  # boolean switch
            low = text.lower()
            if low in _TRUE_WORDS:
                value = True
            elif low in _FALSE_WORDS:
                value = None
            else:
                raise ConfigError(f"config key {key!r}: boolean expected, got {text!r}")
        elif isinstance(action, argparse._AppendAction):
            cast = action.type or str
            value = [cast(part.strip()) for part in text.split(",") if part.strip()]
        else:
            try:
                value = (action.type or str)(text)
            except ValueError:
                raise ConfigError(f"config key {key!r}: cannot parse {text!r}") from None
        setattr(args, key, value)


def _opt(args):
    def get(key):
        value = getattr(args, key, None)
        if value is not None:
            return value
        # keys absent from the table (svr_gamma, mlp_hidden) default to
        # data-driven values chosen at fit time, signalled by None
        return DEFAULTS.get(key)
    return get


# --- shared pieces ----------------------------------------------------------

def _read_input(path, args) -> TimeSeries:
    if path is None:
        raise ConfigError("--input is required")
    explicit = args.timestamp_column is not None and args.value_column is not None
    if explicit:
        schema = DatasetSchema(
            timestamp_column=args.timestamp_column,
            value_column=args.value_column,
            timestamp_format=args.timestamp_format or "auto",
            delimiter=args.delimiter or ",",
            has_header=not bool(args.no_header),
            utc_offset_hours=args.utc_offset or 0.0)
    else:
        if args.timestamp_column or args.value_column:
            raise ConfigError("--timestamp-column and --value-column "
                              "must be given together")
        schema = infer_schema(path)
        overrides = {}
        if args.timestamp_format is not None:
            overrides["timestamp_format"] = args.timestamp_format
        if args.delimiter is not None:
            overrides["delimiter"] = args.delimiter
        if args.no_header:
            overrides["has_header"] = False
        if args.utc_offset is not None:
            overrides["utc_offset_hours"] = args.utc_offset
        if overrides:
            schema = replace(schema, **overrides)
    return read_energy_csv(path, schema)


def _factory(name: str, get):
    if name == "ols":
        return OlsModel
    if name == "knn":
        return functools.partial(KnnModel, k=get("knn_k"))
    if name == "gp":
        return functools.partial(GpModel, signal_var=get("gp_signal_var"),
                                 length_scale=get("gp_length_scale"),
                                 noise_var=get("gp_noise_var"))
    if name == "svr":
        return functools.partial(SvrModel, C=get("svr_c"),
                                 epsilon=get("svr_epsilon"), gamma=get("svr_gamma"))
    if name == "mlp":
        return functools.partial(MlpModel, hidden=get("mlp_hidden"),
                                 lr=get("mlp_lr"), momentum=get("mlp_momentum"),
                                 epochs=get("mlp_epochs"), seed=get("seed"))
    raise ConfigError(f"unknown model {name!r}")


def _specs(names, get):
    specs = []
    for name in names:
        if name == "arima":
            specs.append(ModelSpec("arima", "arima",
                                   order=(get("arima_p"), get("d"), get("arima_q"))))
        elif name == "var":
            specs.append(ModelSpec("var", "var"))
        elif name in LAG_MODELS:
            specs.append(ModelSpec(name, "lag", _factory(name, get)))
        else:
            raise ConfigError(f"unknown model {name!r} "
                              f"(choose from {', '.join(ALL_MODELS)})")
    return specs


def _write_text(destination, text: str) -> None:
    if destination is None:
        sys.stdout.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


def _write_series(destination, s: TimeSeries) -> None:
    if destination is None:
        write_energy_csv(sys.stdout, s)
    else:
        with open(destination, "w", newline="", encoding="utf-8") as fh:
            write_energy_csv(fh, s)


# --- commands ---------------------------------------------------------------

def cmd_forecast(args) -> int:
    get = _opt(args)
    horizon = get("horizon")
    if horizon < 1:
        raise ConfigError(f"horizon must be >= 1, got {horizon}")
    name = get("model")
    p = get("p")
    s = _read_input(args.input, args)

    if name == "arima":
        model = arima_fit(s, p, get("d"), get("q"))
        predictions = arima_forecast(model, s, horizon)
    elif name == "var":
        model = var_fit(s, p)
        predictions = var_forecast(model, s, horizon)[:, 0]
    elif name in LAG_MODELS:
        frame = lag_embed(s, p)
        model = _factory(name, get)().fit(frame)
        predictions = model.predict_series(s.values, horizon, mode=MODE_RECURSIVE)
    else:
        raise ConfigError(f"unknown model {name!r}")

    forecast = TimeSeries(s.start + len(s) * s.interval, s.interval, predictions)
    _write_series(args.out, forecast)
    if args.plot:
        tail = s.slice(max(0, len(s) - 4 * horizon))
        _write_text(args.plot, forecast_chart(tail, forecast))
    return 0


def cmd_benchmark(args) -> int:
    get = _opt(args)
    names = [t.strip() for t in get("models").split(",") if t.strip()]
    if not names:
        raise ConfigError("no models selected")
    try:
        splits = [float(t) for t in get("splits").split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --splits value: {exc}") from None
    if not splits:
        raise ConfigError("no splits selected")

    if not args.input:
        raise ConfigError("--input is required (repeat for several datasets)")
    datasets = [(Path(path).stem, _read_input(path, args)) for path in args.input]

    intervals = [None]
    if args.intervals:
        intervals = [None if token.strip() == "native"
                     else parse_interval(token.strip())
                     for token in args.intervals.split(",") if token.strip()]

    report = benchmark(_specs(names, get), datasets, splits, p=get("p"),
                       horizon=args.horizon, mode=get("mode"),
                       intervals=intervals, jobs=get("jobs"),
                       config_extra={"seed": get("seed")})
    _write_text(args.report, report.to_text())
    if args.json:
        _write_text(args.json, report.to_json())
    if report.records and not any(r.ok for r in report.records):
        return 5
    return 0


def cmd_resample(args) -> int:
    get = _opt(args)
    if args.interval is None:
        raise ConfigError("--interval is required")
    target = parse_interval(args.interval)
    s = _read_input(args.input, args)
    _write_series(args.out, resample(s, target, mode=get("agg")))
    return 0


def cmd_decompose(args) -> int:
    get = _opt(args)
    period = get("period")
    s = _read_input(args.input, args)
    parts = decompose(s, period)

    def cell(x: float) -> str:
        return "NaN" if np.isnan(x) else repr(float(x))

    lines = ["timestamp,value,trend,seasonal,residual"]
    for i in range(len(s)):
        stamp = _format_timestamp(s.start + i * s.interval)
        lines.append(",".join([stamp, cell(s.values[i]), cell(parts.trend[i]),
                               cell(parts.seasonal[i]), cell(parts.residual[i])]))
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.plot:
        _write_text(args.plot, decomposition_chart(s, parts))
    return 0


_HANDLERS = {
    "forecast": cmd_forecast,
    "benchmark": cmd_benchmark,
    "resample": cmd_resample,
    "decompose": cmd_decompose,
}


def main(argv=None) -> int:
    parser, actions = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own diagnostics
        return int(exc.code) if exc.code else 0
    try:
        _apply_config(args, actions[args.command])
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"wattcast: configuration error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"wattcast: data error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"wattcast: data error: {exc}", file=sys.stderr)
        return 3
    except ModelError as exc:
        print(f"wattcast: model error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:  # bad hyperparameter values from constructors
        print(f"wattcast: configuration error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
