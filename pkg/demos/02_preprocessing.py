"""The three preprocessing transforms: differencing, decomposition, lag frames.

Consumption series mix a slow trend, a strong daily cycle, and noise.
Before any model sees the data we usually either difference away the
trend, or subtract an estimated seasonal pattern — and every regressor
consumes the series through a lag-embedded supervised frame. Each
transform here is shown together with its exact inverse.
"""

import numpy as np

from wattcast import (
    TimeSeries,
    decompose,
    difference,
    fit_scaler,
    apply_scaler,
    invert_scaler,
    lag_embed,
    undifference,
)

hours = np.arange(10 * 24)
series = TimeSeries(0.0, 3600.0,
                    400_000 + 900.0 * hours                      # rising trend
                    + 80_000 * np.sin(2 * np.pi * hours / 24)    # daily cycle
                    + np.random.default_rng(0).normal(scale=6_000, size=hours.size))

# --- differencing removes the trend; undifference restores the series ----
diffed, initial = difference(series, d=1)
print(f"original mean level {series.values.mean():,.0f} mW; "
      f"differenced mean {diffed.values.mean():,.1f} mW per step")
restored = undifference(diffed, initial, d=1)
print(f"max round-trip error after undifference: "
      f"{np.max(np.abs(restored.values - series.values)):.2e}")

# --- classical decomposition samples the daily shape --------------------
parts = decompose(series, period=24)
pattern = parts.seasonal_pattern
print("\nestimated daily pattern (every 4th hour, mW):")
print("  " + "  ".join(f"{h:02d}h:{pattern[h]:+9,.0f}" for h in range(0, 24, 4)))
defined = ~np.isnan(parts.trend)
recon = parts.trend + parts.seasonal + parts.residual
print(f"trend+seasonal+residual reconstructs the series to "
      f"{np.max(np.abs(recon[defined] - series.values[defined])):.2e} mW")

# --- lag embedding turns forecasting into supervised regression ---------
frame = lag_embed(series, p=24)
print(f"\nlag frame: {frame.n_samples} samples x {frame.n_features} features "
      f"(features {frame.feature_names[0]} .. {frame.feature_names[-1]})")
print("each row predicts the value one step after its 24-hour window")

# --- standardization, fitted once and inverted exactly ------------------
scaler = fit_scaler(frame.X)
standardized = apply_scaler(scaler, frame.X)
print(f"\nstandardized columns: mean {standardized.mean(axis=0).max():.1e}, "
      f"sd {standardized.std(axis=0).mean():.3f}")
back = invert_scaler(scaler, standardized)
print(f"max scaler round-trip error: {np.max(np.abs(back - frame.X)):.2e}")
