"""Loaders and empirical-CDF helpers for pullstream metrics CSVs.

This package is decoupled from the simulator: it only reads the documented
CSV formats (metrics.csv per-user rows, topology.csv positions), so either
side can evolve independently.
"""

import csv
import os
from dataclasses import dataclass

import numpy as np

__version__ = "0.1.0"

METRIC_COLUMNS = ("user", "mean_quality", "prebuffer_s", "rebuffer_pct")


class FiguresError(ValueError):
    """Bad input data; the message names the offending file or column."""


@dataclass
class RunSeries:
    """Per-user metric vectors of one simulation run."""

    label: str
    quality: np.ndarray
    prebuffer_s: np.ndarray
    rebuffer_pct: np.ndarray

    def __post_init__(self):
        if not (len(self.quality) == len(self.prebuffer_s) == len(self.rebuffer_pct)):
            raise FiguresError(f"run {self.label!r}: metric vectors differ in length")
        if len(self.quality) == 0:
            raise FiguresError(f"run {self.label!r}: no user rows")


def load_metrics(path, label=None) -> RunSeries:
    """Read one metrics CSV; the summary row (user == 'mean') is skipped."""
    if label is None:
        label = os.path.splitext(os.path.basename(path))[0]
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise FiguresError(f"cannot read metrics file {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in METRIC_COLUMNS:
            if col not in header:
                raise FiguresError(f"{path}: missing column {col!r}")
        quality, prebuffer, rebuffer = [], [], []
        for row in reader:
            if not row["user"].isdigit():
                continue
            quality.append(float(row["mean_quality"]))
            prebuffer.append(float(row["prebuffer_s"]))
            rebuffer.append(float(row["rebuffer_pct"]))
    return RunSeries(label, np.array(quality), np.array(prebuffer), np.array(rebuffer))


def parse_run_spec(spec: str) -> tuple:
    """Split 'path[:label]'; the label defaults to the file stem."""
    if ":" in spec:
        path, label = spec.rsplit(":", 1)
        if path and label:
            return path, label
    return spec, None


def load_runs(specs) -> list:
    runs = []
    for spec in specs:
        path, label = parse_run_spec(spec)
        runs.append(load_metrics(path, label))
    labels = [r.label for r in runs]
    if len(set(labels)) != len(labels):
        raise FiguresError(f"duplicate run labels: {labels}")
    return runs


def load_topology(path) -> dict:
    """Read helper/user positions from a topology CSV."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise FiguresError(f"cannot read topology file {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in ("kind", "id", "x", "y"):
            if col not in header:
                raise FiguresError(f"{path}: missing column {col!r}")
        points = {"helper": [], "user": []}
        for row in reader:
            kind = row["kind"]
            if kind not in points:
                raise FiguresError(f"{path}: unknown kind {kind!r}")
            points[kind].append((float(row["x"]), float(row["y"])))
    if not points["helper"] and not points["user"]:
        raise FiguresError(f"{path}: no positions found")
    return {k: np.array(v).reshape(-1, 2) for k, v in points.items()}


def empirical_cdf(values) -> tuple:
    """Sorted values and the step heights i/n of the empirical distribution."""
    x = np.sort(np.asarray(values, float))
    if x.size == 0:
        raise FiguresError("cannot build a CDF from an empty vector")
    F = np.arange(1, x.size + 1) / x.size
    return x, F


def validate_cdf(x, F):
    """Guard invariants before anything is drawn: nondecreasing, ends at 1."""
    x = np.asarray(x, float)
    F = np.asarray(F, float)
    if np.any(np.diff(x) < 0) or np.any(np.diff(F) < 0):
        raise FiguresError("CDF is not nondecreasing")
    if F[-1] != 1.0:
        raise FiguresError(f"CDF ends at {F[-1]!r}, expected 1.0")
