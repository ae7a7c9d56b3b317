"""Writers for trace sets: CSV, JSON (with provenance) and SVG plots."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .scenario import DBSNL, TraceSet

__all__ = ["FORMATS", "write_csv", "read_csv", "write_json", "write_svg", "write_tables_csv", "emit"]

FORMATS = ("csv", "json", "svg")
SIG_DIGITS = 10


def _fmt(v) -> str:
    if v is None:
        return ""
    v = float(v)
    if math.isinf(v):
        return "-inf" if v < 0 else "inf"
    return f"{v:.{SIG_DIGITS}g}"


def write_csv(ts: TraceSet, stream) -> None:
    """One row per x value; columns are the x axis then ``key [unit]`` per trace."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow([ts.x_name] + [t.header for t in ts.traces])
    for i, x in enumerate(ts.x):
        w.writerow([_fmt(x)] + [_fmt(t.values[i]) for t in ts.traces])


def read_csv(stream):
    """Inverse of :func:`write_csv`: ``(x_name, x, {header: values})``."""
    rows = list(csv.reader(stream))
    if not rows:
        raise ValueError("empty CSV")
    header, body = rows[0], rows[1:]
    data = np.array([[float(c) for c in r] for r in body], dtype=float).reshape(len(body), len(header))
    return header[0], data[:, 0], {h: data[:, j] for j, h in enumerate(header[1:], start=1)}


def write_tables_csv(table: dict, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(table["columns"])
    for row in table["rows"]:
        w.writerow([c if isinstance(c, str) else _fmt(c) for c in row])


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, np.ndarray):
        return [_jsonable(float(x)) for x in v]
    if isinstance(v, np.generic):
        return _jsonable(v.item())
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def to_document(ts: TraceSet) -> dict:
    from . import __version__

    return _jsonable({
        "name": ts.name,
        "version": __version__,
        "config_hash": ts.config_hash,
        "preset": ts.config.get("preset"),
        "x": {"name": ts.x_name, "unit": "Hz" if ts.x_name == "frequency_hz" else "W", "values": ts.x},
        "traces": [{"key": t.key, "label": t.label, "unit": t.unit, "values": t.values} for t in ts.traces],
        "tables": ts.tables,
        "notes": ts.notes,
        "config": ts.config,
    })


def write_json(ts: TraceSet, stream) -> None:
    json.dump(to_document(ts), stream, indent=2, sort_keys=True)
    stream.write("\n")


def write_svg(ts: TraceSet, stream) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "brightsqueeze", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        try:
            if len(ts.x) and ts.traces:
                rel = [t for t in ts.traces if t.unit == DBSNL]
                absl = [t for t in ts.traces if t.unit != DBSNL]
                ax2 = ax.twinx() if rel and absl else None
                for t in absl:
                    ax.semilogx(ts.x, t.values, label=t.label)
                for t in rel:
                    (ax2 or ax).semilogx(ts.x, t.values, "--", label=t.label)
                ax.set_xlabel("frequency (Hz)" if ts.x_name == "frequency_hz" else "output power (W)")
                ax.set_ylabel(absl[0].unit if absl else DBSNL)
                if ax2 is not None:
                    ax2.set_ylabel(DBSNL)
                handles, labels = ax.get_legend_handles_labels()
                if ax2 is not None:
                    h2, l2 = ax2.get_legend_handles_labels()
                    handles, labels = handles + h2, labels + l2
                ax.legend(handles, labels, fontsize="small", loc="best")
                ax.grid(True, which="both", alpha=0.3)
            else:
                ax.axis("off")
                ax.text(0.02, 0.98, _table_text(ts), va="top", family="monospace", fontsize=8)
            ax.set_title(ts.name)
            buf = io.StringIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    stream.write(buf.getvalue())


def _table_text(ts: TraceSet) -> str:
    out = []
    for name, table in ts.tables.items():
        out.append(name)
        out.append("  " + " | ".join(table["columns"]))
        for row in table["rows"]:
            out.append("  " + " | ".join(c if isinstance(c, str) else _fmt(c) for c in row))
    return "\n".join(out)


def emit(ts: TraceSet, out_dir, formats=FORMATS) -> list[Path]:
    """Write ``ts`` into ``out_dir``; returns the paths written.

    Raises ``OSError`` naming the offending path on any I/O failure.
    """
    out_dir = Path(out_dir)
    written = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc.strerror or exc}") from exc

    def _write(path, fn, arg):
        try:
            with open(path, "w", newline="") as fh:
                fn(arg, fh)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
        written.append(path)

    for fmt in formats:
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
        if fmt == "csv":
            if len(ts.x):
                _write(out_dir / f"{ts.name}.csv", write_csv, ts)
            for tname, table in ts.tables.items():
                _write(out_dir / f"{ts.name}_{tname}.csv", write_tables_csv, table)
        elif fmt == "json":
            _write(out_dir / f"{ts.name}.json", write_json, ts)
        else:
            _write(out_dir / f"{ts.name}.svg", write_svg, ts)
    return written
