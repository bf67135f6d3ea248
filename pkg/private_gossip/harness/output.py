"""
CSV and SVG writers for experiment traces.

CSV layout (LF line endings):

    # config: {...json...}
    t,relative_error,spread_min,spread_max,drift_sq,bound,baseline
    0,1,1,1,0,1,1
    ...

Floats are written with 17 significant digits so reading the file back
reproduces every value exactly.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import List, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from private_gossip.harness.schemas import COLUMNS, Trace  # noqa: E402
from private_gossip.utils.errors import InvalidParameterError, OutputError  # noqa: E402

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
CONFIG_PREFIX = "# config: "


def _number(value: float) -> str:
    return format(value, ".17g")


def config_header(traces: Sequence[Trace]) -> str:
    """One "# config:" line per trace; heads the CSV and describes the SVG."""
    return "\n".join(CONFIG_PREFIX + json.dumps({"label": t.label, **t.meta}, sort_keys=True) for t in traces)


def format_csv(trace: Trace) -> str:
    buffer = io.StringIO()
    buffer.write(config_header([trace]) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in zip(*(getattr(trace, name) for name in COLUMNS)):
        writer.writerow([str(row[0])] + [_number(v) for v in row[1:]])
    return buffer.getvalue()


def emit_csv(trace: Trace, path: PathLike) -> None:
    """Write one trace as CSV."""
    text = format_csv(trace)
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write CSV: {exc.strerror}", str(path)) from exc
    logger.info("[HARNESS] wrote %d rows to %s", len(trace.t), path)


def load_trace(path: PathLike) -> Trace:
    """Read a CSV written by emit_csv."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InvalidParameterError(f"cannot read trace {path}: {exc.strerror}") from exc
    if not lines or not lines[0].startswith(CONFIG_PREFIX):
        raise InvalidParameterError(f"{path} is missing the '# config:' line")

    meta = json.loads(lines[0][len(CONFIG_PREFIX):])
    label = meta.pop("label", "")
    reader = csv.reader(lines[1:])
    header = next(reader)
    if header != COLUMNS:
        raise InvalidParameterError(f"{path} has columns {header}, expected {COLUMNS}")

    columns: List[List] = [[] for _ in COLUMNS]
    for row in reader:
        columns[0].append(int(row[0]))
        for k, value in enumerate(row[1:], start=1):
            columns[k].append(float(value))
    return Trace(label=label, meta=meta, **dict(zip(COLUMNS, columns)))


def _masked(values: Sequence[float]) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    return np.where(array > 0.0, array, np.nan)


def emit_svg(traces: Sequence[Trace], path: PathLike, title: str = "") -> None:
    """
    Log-linear chart of relative error: one line per trace plus the baseline
    of the first trace. Rendering is deterministic (fixed hash salt, no date).
    """
    if not traces:
        raise OutputError("no traces to plot", str(path))

    with matplotlib.rc_context({"svg.hashsalt": "private-gossip", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        try:
            first = traces[0]
            ax.plot(first.t, _masked(first.baseline), color="black", linestyle="--", linewidth=1.2, label="Baseline")
            for trace in traces:
                ax.plot(trace.t, _masked(trace.relative_error), linewidth=1.2, label=trace.label or "private")
            ax.set_yscale("log")
            ax.set_xlabel("Iteration")
            ax.set_ylabel("Relative Error")
            if title:
                ax.set_title(title)
            ax.grid(True, which="both", linestyle=":", alpha=0.5)
            ax.legend(loc="upper right", fontsize=9)
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None, "Description": config_header(traces)})
        except OSError as exc:
            raise OutputError(f"cannot write SVG: {exc.strerror}", str(path)) from exc
        finally:
            plt.close(fig)
    logger.info("[HARNESS] wrote chart with %d trace(s) to %s", len(traces), path)
