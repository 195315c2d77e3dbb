"""Embedded critical values for the Johansen rank tests.

Rows are indexed by ``m - r`` (number of common trends, 1-based); columns are
the 90%, 95% and 99% quantiles.

``intercept``: constant restricted to the cointegration space
(Osterwald-Lenum 1992, Table 1*). ``none``: no deterministic terms
(MacKinnon, Haug and Michelis 1999 response surfaces, as distributed with
statsmodels).
"""

import numpy as np

LEVELS = (0.10, 0.05, 0.01)

_MAXEIG_INTERCEPT = np.array([
    [7.52, 9.24, 12.97],
    [13.75, 15.67, 20.20],
    [19.77, 22.00, 26.81],
    [25.56, 28.14, 33.24],
    [31.66, 34.40, 39.79],
    [37.45, 40.30, 46.82],
    [43.25, 46.45, 51.91],
    [48.91, 52.00, 57.95],
    [54.35, 57.42, 63.71],
    [60.25, 63.57, 69.94],
    [66.02, 69.74, 76.63],
])

_TRACE_INTERCEPT = np.array([
    [7.52, 9.24, 12.97],
    [17.85, 19.96, 24.60],
    [32.00, 34.91, 41.07],
    [49.65, 53.12, 60.16],
    [71.86, 76.07, 84.45],
    [97.18, 102.14, 111.01],
    [126.58, 131.70, 143.09],
    [159.48, 165.58, 177.20],
    [196.37, 202.92, 215.74],
    [236.54, 244.15, 257.68],
    [282.45, 291.40, 307.64],
])

_MAXEIG_NONE = np.array([
    [2.9762, 4.1296, 6.9406],
    [9.4748, 11.2246, 15.0923],
    [15.7175, 17.7961, 22.2519],
    [21.8370, 24.1592, 29.0609],
    [27.9160, 30.4428, 35.7359],
    [33.9271, 36.6301, 42.2333],
    [39.9085, 42.7679, 48.6606],
    [45.8930, 48.8795, 55.0335],
    [51.8528, 54.9629, 61.3449],
    [57.7954, 61.0404, 67.6415],
    [63.7248, 67.0756, 73.8856],
    [69.6513, 73.0946, 80.0937],
])

_TRACE_NONE = np.array([
    [2.9762, 4.1296, 6.9406],
    [10.4741, 12.3212, 16.3640],
    [21.7781, 24.2761, 29.5147],
    [37.0339, 40.1749, 46.5716],
    [56.2839, 60.0627, 67.6367],
    [79.5329, 83.9383, 92.7136],
    [106.7351, 111.7797, 121.7375],
    [137.9954, 143.6691, 154.7977],
    [173.2292, 179.5199, 191.8122],
    [212.4721, 219.4051, 232.8291],
    [255.6732, 263.2603, 277.9962],
    [302.9054, 311.1288, 326.9716],
])

_TABLES = {
    ("maxeig", "intercept"): _MAXEIG_INTERCEPT,
    ("trace", "intercept"): _TRACE_INTERCEPT,
    ("maxeig", "none"): _MAXEIG_NONE,
    ("trace", "none"): _TRACE_NONE,
}


def johansen_critical_value(stat: str, n_trends: int, deterministic: str, level: float) -> float:
    """Critical value for ``stat`` in {"trace", "maxeig"}; NaN outside the table."""
    table = _TABLES[(stat, deterministic)]
    if not 1 <= n_trends <= table.shape[0]:
        return float("nan")
    matches = [i for i, lv in enumerate(LEVELS) if abs(lv - level) < 1e-9]
    if not matches:
        raise KeyError(f"no embedded critical values at level {level}")
    col = matches[0]
    return float(table[n_trends - 1, col])
