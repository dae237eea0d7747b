"""ARIMA and VAR: the two classical statistical forecasters.

ARIMA models one series through its own lags, differences, and moving-
average shocks; VAR models several series jointly so consumption can
borrow strength from weather. Both recover known parameters from
synthetic data here, which is the cleanest way to see what estimation
actually does.
"""

import numpy as np

from wattcast import arima_fit, arima_forecast, select_var_order, var_fit, var_forecast
from wattcast.series import MultiSeries
from wattcast.synthetic import arma_series, var_series

# --- ARIMA: recover a known ARMA(1,1) process ---------------------------
true_phi, true_theta = 0.6, 0.3
series = arma_series(800, ar=(true_phi,), ma=(true_theta,), intercept=2.0,
                     noise_sd=1.0, seed=42)
model = arima_fit(series, p=1, d=0, q=1)
print("ARMA(1,1) recovery from 800 noisy observations:")
print(f"  ar    : fitted {model.ar[0]:+.3f}   true {true_phi:+.3f}")
print(f"  ma    : fitted {model.ma[0]:+.3f}   true {true_theta:+.3f}")
print(f"  noise : fitted sd {np.sqrt(model.sigma2):.3f}   true 1.000")
print(f"  stationary AR part: {model.stationary}")

forecast = arima_forecast(model, series, horizon=5)
long_run = model.intercept / (1.0 - model.ar[0])
print(f"  5-step forecast {np.round(forecast, 2)} "
      f"decays toward the long-run mean {long_run:.2f}")

# Differencing inside the model: ARIMA(0,1,0) on a trending series is a
# random walk with drift — its forecast continues the average step.
trend = arma_series(300, intercept=0.0, noise_sd=0.5, seed=7)
drifting = trend.with_values(trend.values + 0.25 * np.arange(len(trend)))
walk = arima_fit(drifting, p=0, d=1, q=0)
steps = arima_forecast(walk, drifting, horizon=3)
print(f"\nARIMA(0,1,0) drift {walk.intercept:+.3f} per step; "
      f"next 3: {np.round(steps, 2)}")

# --- VAR: consumption coupled to temperature ----------------------------
A = np.array([[0.55, 0.25],    # consumption depends on its own lag and temp
              [0.00, 0.80]])   # temperature follows its own dynamics
coupled = var_series(600, coef=A, intercept=(1.0, 0.5), noise_sd=0.3,
                     seed=3, names=("energy", "temperature"))
var_model = var_fit(coupled, p=1)
print("\nVAR(1) coefficient recovery (fitted vs true):")
for i, row_name in enumerate(coupled.names):
    fitted = " ".join(f"{v:+.3f}" for v in var_model.coef[0][i])
    true = " ".join(f"{v:+.3f}" for v in A[i])
    print(f"  {row_name:11s}: [{fitted}]  vs  [{true}]")

joint = var_forecast(var_model, coupled, horizon=4)
print("joint 4-step forecast (energy, temperature):")
for step, row in enumerate(joint, start=1):
    print(f"  +{step}: {row[0]:6.3f}, {row[1]:6.3f}")

# Order selection by information criterion, on data with known lag depth 1.
chosen = select_var_order(coupled, max_p=6)
print(f"\ninformation criterion picks lag order {chosen} (true order 1)")
