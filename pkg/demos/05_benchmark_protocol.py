"""The full benchmark protocol: seven models, chronological splits, rankings.

This is the experiment the toolkit exists to run. Each model is fitted on
a chronological train prefix and scored on the held-out suffix with RMSE,
MAE, and RAE (error relative to the naive train-mean predictor: below 1.0
means the model earned its keep). The sweep is a Cartesian product over
models and split fractions; per-dataset rankings come from mean RAE.
"""

from pathlib import Path
import tempfile

from wattcast import TimeSeries, benchmark, default_specs
from wattcast.svgplot import forecast_chart
from wattcast.synthetic import household_series
from wattcast import arima_fit, arima_forecast

dataset = household_series(1000, seed=12)
print(f"synthetic household series: {len(dataset)} hourly readings, "
      f"daily cycle + autocorrelated noise\n")

report = benchmark(default_specs(seed=0), [("household", dataset)],
                   splits=[0.6, 0.7, 0.8], p=24)

print(f"{'model':8s} {'split':>5s} {'rmse (mW)':>12s} {'rae':>7s}")
for record in report.records:
    print(f"{record.model:8s} {record.train_fraction:>5.1f} "
          f"{record.rmse:>12,.0f} {record.rae:>7.3f}")

print("\nranking by mean RAE (lower is better):")
for rank, (model, rae) in enumerate(report.rankings["household"], start=1):
    bar = "#" * int(40 * rae)
    print(f"  {rank}. {model:6s} {rae:.3f} {bar}")

failed = report.failed
print(f"\nfailed cells: {len(failed)}"
      + (f" ({[(r.model, r.error) for r in failed]})" if failed else ""))

# The same report serializes to a line-per-record text table and JSON;
# wall-clock times are deliberately excluded so reruns are byte-identical.
workdir = Path(tempfile.mkdtemp(prefix="wattcast-demo-"))
(workdir / "report.txt").write_text(report.to_text())
(workdir / "report.json").write_text(report.to_json())
print(f"reports written to {workdir}")

# Close the loop with the forecast picture: history in red, model in blue.
train = TimeSeries(dataset.start, dataset.interval, dataset.values[:800])
model = arima_fit(train, p=2, d=0, q=1)
predictions = arima_forecast(model, train, horizon=48)
future = TimeSeries(train.start + len(train) * train.interval,
                    train.interval, predictions)
tail = train.slice(len(train) - 96)
(workdir / "forecast.svg").write_text(forecast_chart(tail, future))
print(f"48h forecast chart written to {workdir / 'forecast.svg'}")
