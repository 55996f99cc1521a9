"""Synthetic manufacturing datasets with planted signal.

Two shapes are provided: a 1430 x 10 maintenance table whose priority label
is driven by downtime cost and vibration, and a larger network-aware task
table (13 columns) with injected packet-loss / latency outliers for anomaly
runs. Generators build DatasetFrame objects directly; write_csv round-trips
them through the loader format.
"""

from __future__ import annotations

import csv

import numpy as np

from .perception import DatasetFrame

PRIORITY_LABELS = ("Low", "Medium", "High")


def _zscore(values: np.ndarray) -> np.ndarray:
    return (values - values.mean()) / values.std()


def maintenance_frame(n_rows: int = 1430, seed: int = 7, noise: float = 0.05,
                      margin: float = 0.18) -> DatasetFrame:
    """Classification-shaped table: 10 columns, priority target last.

    Downtime cost and vibration drive the label; the failure-probability
    column is independent noise, so it exercises the multi-candidate target
    resolution without leaking signal. Rows whose severity score lands
    within `margin` of a class cut are resampled away so the priority bands
    are genuinely distinct.
    """
    rng = np.random.default_rng(seed)
    pool = int(n_rows * 2.5)
    temperature = rng.normal(70.0, 10.0, pool)
    vibration = rng.normal(4.0, 1.2, pool)
    pressure = rng.normal(30.0, 5.0, pool)
    acoustic = rng.normal(60.0, 8.0, pool)
    inspection = np.clip(rng.normal(3.0, 1.0, pool), 0.2, None)
    technician = rng.choice(["Yes", "No"], pool)
    downtime = rng.normal(5000.0, 1500.0, pool)
    failure_prob = np.clip(rng.normal(0.3, 0.1, pool), 0.0, 1.0)

    score = (
        0.62 * _zscore(downtime)
        + 0.55 * _zscore(vibration)
        + rng.normal(0.0, noise, pool)
    )
    cuts = np.quantile(score, [0.5, 0.8])
    clear = (np.abs(score - cuts[0]) > margin) & (np.abs(score - cuts[1]) > margin)
    keep = np.nonzero(clear)[0][:n_rows]
    if keep.shape[0] < n_rows:
        keep = np.arange(n_rows)          # margin too wide for the pool
    temperature, vibration, pressure = temperature[keep], vibration[keep], pressure[keep]
    acoustic, inspection, technician = acoustic[keep], inspection[keep], technician[keep]
    downtime, failure_prob, score = downtime[keep], failure_prob[keep], score[keep]

    priority = np.where(score > cuts[1], "High",
                        np.where(score > cuts[0], "Medium", "Low"))

    columns = [
        [f"M{i + 1:03d}" for i in range(n_rows)],
        temperature.round(2).tolist(),
        vibration.round(3).tolist(),
        pressure.round(2).tolist(),
        acoustic.round(2).tolist(),
        inspection.round(2).tolist(),
        technician.tolist(),
        downtime.round(2).tolist(),
        failure_prob.round(4).tolist(),
        priority.tolist(),
    ]
    names = [
        "Machine_ID", "Temperature", "Vibration", "Pressure", "Acoustic_Level",
        "Inspection_Duration", "Technician_Available", "Downtime_Cost",
        "Failure_Probability", "Maintenance_Priority",
    ]
    return DatasetFrame(column_names=names, columns=columns, n_rows=n_rows)


def failure_frame(n_rows: int = 1430, seed: int = 11, noise: float = 0.02,
                  degrading_share: float = 0.04) -> DatasetFrame:
    """Regression-shaped table: failure probability target driven by
    vibration and temperature.

    A small share of machines run degraded (elevated vibration and heat),
    which pushes their failure probability past the warning thresholds so a
    recommendation run has a genuine right tail to rank.
    """
    rng = np.random.default_rng(seed)
    temperature = rng.normal(70.0, 10.0, n_rows)
    vibration = rng.normal(4.0, 1.2, n_rows)
    pressure = rng.normal(30.0, 5.0, n_rows)
    acoustic = rng.normal(60.0, 8.0, n_rows)
    inspection = np.clip(rng.normal(3.0, 1.0, n_rows), 0.2, None)
    technician = rng.choice(["Yes", "No"], n_rows)
    downtime = rng.normal(5000.0, 1500.0, n_rows)
    energy = rng.normal(120.0, 15.0, n_rows)

    degraded = rng.random(n_rows) < degrading_share
    vibration[degraded] += rng.uniform(3.0, 5.0, degraded.sum())
    temperature[degraded] += rng.uniform(15.0, 25.0, degraded.sum())

    failure = np.clip(
        0.3
        + 0.08 * _zscore(vibration)
        + 0.06 * _zscore(temperature)
        + rng.normal(0.0, noise, n_rows),
        0.0, 1.0,
    )
    columns = [
        [f"M{i + 1:03d}" for i in range(n_rows)],
        temperature.round(2).tolist(),
        vibration.round(3).tolist(),
        pressure.round(2).tolist(),
        acoustic.round(2).tolist(),
        inspection.round(2).tolist(),
        technician.tolist(),
        downtime.round(2).tolist(),
        energy.round(2).tolist(),
        failure.tolist(),
    ]
    names = [
        "Machine_ID", "Temperature", "Vibration", "Pressure", "Acoustic_Level",
        "Inspection_Duration", "Technician_Available", "Downtime_Cost",
        "Energy_Consumption", "Failure_Probability",
    ]
    return DatasetFrame(column_names=names, columns=columns, n_rows=n_rows)


def network_frame(n_rows: int = 100_000, seed: int = 13, n_machines: int = 200,
                  n_outliers: int | None = None) -> DatasetFrame:
    """Task-level table: 13 columns mixing machine and network indicators.

    A handful of rows carry gross packet-loss and latency excursions so an
    anomaly run has something unambiguous to find.
    """
    rng = np.random.default_rng(seed)
    if n_outliers is None:
        n_outliers = max(1, n_rows // 100)
    machines = [f"M{rng.integers(1, n_machines + 1):03d}" for _ in range(n_rows)]
    task_type = rng.choice(["assembly", "welding", "inspection", "packaging"], n_rows)
    temperature = rng.normal(70.0, 8.0, n_rows)
    vibration = rng.normal(3.5, 1.0, n_rows)
    power = rng.normal(250.0, 30.0, n_rows)
    latency = rng.normal(12.0, 2.0, n_rows)
    packet_loss = np.clip(rng.normal(0.5, 0.15, n_rows), 0.0, None)
    reliability = np.clip(rng.normal(0.97, 0.01, n_rows), 0.0, 1.0)
    speed = rng.normal(80.0, 10.0, n_rows)
    error_rate = np.clip(rng.normal(0.02, 0.008, n_rows), 0.0, None)
    quality = np.clip(rng.normal(0.92, 0.04, n_rows), 0.0, 1.0)
    duration = np.clip(rng.normal(45.0, 12.0, n_rows), 1.0, None)

    anomalous = rng.choice(n_rows, size=min(n_outliers, n_rows), replace=False)
    latency[anomalous] += 8.0 * 2.0        # 8 sigma excursions
    packet_loss[anomalous] += 10.0 * 0.15  # 10 sigma excursions

    status_score = _zscore(speed) - _zscore(error_rate) + rng.normal(0, 0.5, n_rows)
    cuts = np.quantile(status_score, [0.33, 0.8])
    status = np.where(status_score > cuts[1], "High",
                      np.where(status_score > cuts[0], "Medium", "Low"))

    columns = [
        machines,
        task_type.tolist(),
        temperature.round(2).tolist(),
        vibration.round(3).tolist(),
        power.round(2).tolist(),
        latency.round(3).tolist(),
        packet_loss.round(4).tolist(),
        reliability.round(4).tolist(),
        speed.round(2).tolist(),
        error_rate.round(5).tolist(),
        quality.round(4).tolist(),
        duration.round(2).tolist(),
        status.tolist(),
    ]
    names = [
        "Machine_ID", "Task_Type", "Temperature", "Vibration",
        "Power_Consumption", "Network_Latency", "Packet_Loss_Rate",
        "Reliability_Score", "Production_Speed", "Error_Rate",
        "Product_Quality", "Task_Duration", "Efficiency_Status",
    ]
    return DatasetFrame(column_names=names, columns=columns, n_rows=n_rows)


def write_csv(frame: DatasetFrame, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(frame.column_names)
        for i in range(frame.n_rows):
            writer.writerow([
                "" if cell is None else cell for cell in frame.row(i)
            ])
