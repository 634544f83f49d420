"""Aggregate-CSV parsing, y-transforms and figure rendering."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

AGGREGATE_HEADER = "oracle_calls,f_mean,f_std,grad_surrogate_mean,grad_surrogate_std"
TRANSFORMS = ("log", "loglog-inner")

_LOG_FLOOR = 1e-300  # keeps log defined for nonpositive objective values
_INNER_FLOOR = 1.0 + 1e-12  # keeps the inner log positive


class PlotDataError(ValueError):
    """An input CSV or plot spec does not match the expected contract."""


@dataclass(frozen=True)
class PlotSpec:
    """One figure: labelled aggregate CSVs plus presentation options."""

    inputs: tuple  # ((csv_path, label), ...)
    output: str
    transform: str = "log"
    title: str = ""

    def __post_init__(self):
        if not self.inputs:
            raise PlotDataError("plot spec needs at least one input CSV")
        labels = [label for _, label in self.inputs]
        if len(set(labels)) != len(labels):
            raise PlotDataError(f"labels must be unique, got {labels}")
        if self.transform not in TRANSFORMS:
            raise PlotDataError(
                f"unknown transform {self.transform!r}; choose from {TRANSFORMS}"
            )


def load_spec(path) -> PlotSpec:
    """Read a plot spec document (YAML mapping)."""
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise PlotDataError("plot spec must be a mapping")
    allowed = {"inputs", "output", "transform", "title"}
    unknown = set(doc) - allowed
    if unknown:
        raise PlotDataError(f"unknown key(s) in plot spec: {sorted(unknown)}")
    raw_inputs = doc.get("inputs") or []
    inputs = []
    for entry in raw_inputs:
        if not isinstance(entry, dict) or set(entry) != {"csv", "label"}:
            raise PlotDataError(f"each input needs exactly 'csv' and 'label', got {entry}")
        inputs.append((str(entry["csv"]), str(entry["label"])))
    if "output" not in doc:
        raise PlotDataError("plot spec needs an 'output' image path")
    return PlotSpec(
        inputs=tuple(inputs),
        output=str(doc["output"]),
        transform=doc.get("transform", "log"),
        title=doc.get("title", ""),
    )


def read_aggregate_csv(path) -> dict:
    """Parse one aggregate CSV into column arrays, validating the contract."""
    lines = Path(path).read_text().strip().split("\n")
    if not lines or lines[0] != AGGREGATE_HEADER:
        raise PlotDataError(
            f"{path}: bad or missing header; expected {AGGREGATE_HEADER!r}"
        )
    names = AGGREGATE_HEADER.split(",")
    cols = {name: [] for name in names}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(names):
            raise PlotDataError(
                f"{path}:{lineno}: expected {len(names)} fields, got {len(parts)}"
            )
        for name, raw in zip(names, parts):
            if raw == "":
                cols[name].append(math.nan)
                continue
            try:
                cols[name].append(float(raw))
            except ValueError as err:
                raise PlotDataError(
                    f"{path}:{lineno}: column {name}: cannot parse {raw!r}"
                ) from err
    if not cols["oracle_calls"]:
        raise PlotDataError(f"{path}: no data rows")
    return {k: np.array(v) for k, v in cols.items()}


def apply_transform(values: np.ndarray, transform: str) -> np.ndarray:
    """Monotone y-transform used for display."""
    v = np.asarray(values, dtype=float)
    if transform == "log":
        return np.log(np.maximum(v, _LOG_FLOOR))
    if transform == "loglog-inner":
        return np.log(np.log(np.maximum(v, _INNER_FLOOR)))
    raise PlotDataError(f"unknown transform {transform!r}")


@dataclass
class SeriesTable:
    """The exact numbers a figure is drawn from, ready for inspection."""

    transform: str
    series: list = field(default_factory=list)  # (label, x, y, y_lo, y_hi)

    def serialize(self) -> str:
        """Stable text form, used for byte-exact regression comparisons."""
        out = [f"transform={self.transform}"]
        for label, x, y, lo, hi in self.series:
            out.append(f"series={label}")
            for i in range(len(x)):
                out.append(
                    "%.12g,%.12g,%.12g,%.12g" % (x[i], y[i], lo[i], hi[i])
                )
        return "\n".join(out) + "\n"


def extract_table(spec: PlotSpec) -> SeriesTable:
    """Parse every input and transform means and +-1 std band edges."""
    table = SeriesTable(transform=spec.transform)
    for path, label in spec.inputs:
        cols = read_aggregate_csv(path)
        x = cols["oracle_calls"]
        mean = cols["f_mean"]
        std = cols["f_std"]
        y = apply_transform(mean, spec.transform)
        lo = apply_transform(mean - std, spec.transform)
        hi = apply_transform(mean + std, spec.transform)
        table.series.append((label, x, y, lo, hi))
    return table


def render(spec: PlotSpec, table: SeriesTable = None) -> str:
    """Draw the figure described by ``spec``; returns the output path."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if table is None:
        table = extract_table(spec)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, x, y, lo, hi in table.series:
        ax.plot(x, y, label=label)
        ax.fill_between(x, lo, hi, alpha=0.2)
    ax.set_xlabel("oracle calls")
    if spec.transform == "log":
        ax.set_ylabel("log objective")
    else:
        ax.set_ylabel("log log objective")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    return str(out)
