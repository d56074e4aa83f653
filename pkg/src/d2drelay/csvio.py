"""CSV emission and parsing for outage curves and relay assignments."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

from .montecarlo import OutageCurve

OUTAGE_COLUMNS = ("variation_rate", "snr_db", "trials", "outage_point", "outage_lo", "outage_hi")
ASSIGNMENT_COLUMNS = ("pair_id", "relay_id", "utility")


def _g6(x: float) -> str:
    return f"{x:.6g}"


def format_outage_csv(curves) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(OUTAGE_COLUMNS)
    for curve in curves:
        for p in curve.points:
            writer.writerow(
                [
                    _g6(curve.variation_rate),
                    _g6(p.snr_db),
                    p.trials,
                    _g6(p.estimate.point),
                    _g6(p.estimate.lo),
                    _g6(p.estimate.hi),
                ]
            )
    return buf.getvalue()


def parse_outage_csv(text: str) -> list:
    """Rows of an outage CSV as dicts with float/int values."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != OUTAGE_COLUMNS:
        raise ValueError(f"unexpected outage CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append(
            {
                "variation_rate": float(rec["variation_rate"]),
                "snr_db": float(rec["snr_db"]),
                "trials": int(rec["trials"]),
                "outage_point": float(rec["outage_point"]),
                "outage_lo": float(rec["outage_lo"]),
                "outage_hi": float(rec["outage_hi"]),
            }
        )
    return rows


def format_assignment_csv(rows) -> str:
    """`rows` is an iterable of ``(pair_id, relay_id, utility)``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ASSIGNMENT_COLUMNS)
    for pair_id, relay_id, utility in rows:
        writer.writerow([pair_id, relay_id, _g6(utility)])
    return buf.getvalue()


def parse_assignment_csv(text: str) -> list:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != ASSIGNMENT_COLUMNS:
        raise ValueError(f"unexpected assignment CSV header {reader.fieldnames}")
    return [(rec["pair_id"], rec["relay_id"], float(rec["utility"])) for rec in reader]


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename over `path`.

    Readers never see a partially written file.
    """
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_outage_csv(curves, path) -> None:
    atomic_write_text(path, format_outage_csv(curves))


def read_outage_csv(path) -> list:
    return parse_outage_csv(Path(path).read_text())
