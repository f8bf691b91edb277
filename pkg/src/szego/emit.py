"""Deterministic artifact writers.

CSV uses 17-significant-digit scientific notation so drift
measurements survive a round trip through text; JSON is dumped with
sorted keys.  Identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from szego.flow import TimeSeries
from szego.hardy import FourierSymbol


def _fmt(x: float) -> str:
    if np.isnan(x):
        return "nan"
    return f"{x:.17e}"


def write_json(path: Path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def series_columns(series: TimeSeries, extra: dict | None = None):
    """Fixed column order: t, conserved, Sobolev norms, diagnostics, extras."""
    cols = [("t", series.times), ("q", series.q), ("m", series.m),
            ("e", series.e), ("moment6", series.moment6),
            ("moment8", series.moment8)]
    for s in sorted(series.hs):
        cols.append((f"hs_{s:g}", series.hs[s]))
    n = series.n_samples
    drift = series.spectrum_drift
    cols.append(("spectrum_drift", drift if drift is not None else np.full(n, np.nan)))
    lax = series.lax_residual
    cols.append(("lax_residual", lax if lax is not None else np.full(n, np.nan)))
    for name in sorted(extra or {}):
        cols.append((name, extra[name]))
    return cols


def emit_series(series: TimeSeries, out_dir, extra: dict | None = None,
                states: bool = True) -> None:
    """Write series.csv (one row per sample) and states.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cols = series_columns(series, extra)
    lines = ["# " + ",".join(name for name, _ in cols)]
    for i in range(series.n_samples):
        lines.append(",".join(_fmt(float(col[i])) for _, col in cols))
    (out / "series.csv").write_text("\n".join(lines) + "\n")
    if states:
        payload = {
            "times": [float(t) for t in series.times],
            "states": [
                json.loads(FourierSymbol(series.states[i]).to_json())
                for i in range(series.n_samples)
            ],
        }
        write_json(out / "states.json", payload)


def emit_table(path: Path, header: list, rows: list) -> None:
    """Generic CSV table with the same formatting conventions."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["# " + ",".join(header)]
    for row in rows:
        lines.append(",".join(
            _fmt(float(x)) if isinstance(x, (float, np.floating)) else str(x)
            for x in row
        ))
    path.write_text("\n".join(lines) + "\n")
