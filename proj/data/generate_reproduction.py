#!/usr/bin/env python3
"""Regenerates the synthetic two-parameter reproduction data.

Water level responds linearly to rainfall and dam discharge plus small sensor
noise. The crossing variant peaks above the 25 m flood line once; the calm
variant peaks below it. A 12-row history precedes both for calibration.
"""
import numpy as np

rng = np.random.default_rng(20120101)
BASE, K_RAIN, K_DIS, NOISE = 3.0, 0.12, 0.014, 0.05


def level(rain, dis):
    return BASE + K_RAIN * rain + K_DIS * dis + rng.normal(0.0, NOISE, len(rain))


def write(path, t, lvl, rain, dis):
    with open(path, "w") as f:
        f.write("t_min,level_m,rainfall_mmhr,discharge_m3s\n")
        for row in zip(t, lvl, rain, dis):
            f.write("%.1f,%.4f,%.3f,%.2f\n" % row)


hist_t = np.arange(-12, 0) * 60.0
hist_rain = rng.uniform(0.0, 30.0, 12)
hist_dis = rng.uniform(200.0, 900.0, 12)
write("reproduction_history.csv", hist_t, level(hist_rain, hist_dis), hist_rain, hist_dis)

t = np.arange(15) * 60.0
rain = np.array([4, 6, 9, 14, 18, 22, 27, 31, 34, 37, 39, 40, 33, 24, 15], float)
rain += rng.uniform(-0.5, 0.5, 15)
dis = np.array([300, 320, 360, 420, 500, 600, 700, 820, 950, 1080, 1200, 1270, 1180, 1050, 900], float)
dis += rng.uniform(-5.0, 5.0, 15)
write("reproduction.csv", t, level(rain, dis), rain, dis)

calm_dis = dis * 0.85
write("reproduction_calm.csv", t, level(rain * 0.9, calm_dis), rain * 0.9, calm_dis)
