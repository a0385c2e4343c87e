"""
reports.py — Deterministic CSV and JSON emitters

Every CSV starts with a header row; floats are written with repr() so reruns with the
same config are byte-identical. JSON is written with sorted keys and indent 2. No
timestamps or host data end up in any output file.
"""

from collections.abc import Iterable, Sequence
import csv
import json
import logging
from pathlib import Path

from pydantic import BaseModel

from .models import RunReport
from .spectral import GapProfile

log = logging.getLogger(__name__)

GAP_HEADER = ("s", "gap", "ground_energy", "ground_degeneracy")
SWEEP_HEADER = ("T", "fidelity", "infidelity", "leakage", "min_gap")
ALPHA_HEADER = ("r", "alpha_closed", "alpha_numeric")
GADGET_GAP_HEADER = ("s", "gap_closed", "gap_numeric", "bound")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """
    Writes a header row plus `rows` with RFC-4180 quoting.

    Returns:
        Path: The written file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    log.info(f"[Report] CSV geschrieben: {path}")
    return path


def write_json(path: str | Path, payload: BaseModel | dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    log.info(f"[Report] JSON geschrieben: {path}")
    return path


def gap_rows(profile: GapProfile) -> list[tuple]:
    return [(float(p.s), float(p.gap), float(p.ground_energy), int(p.ground_degeneracy)) for p in profile.samples]


def sweep_rows(reports: Sequence[RunReport]) -> list[tuple]:
    return [
        (r.total_time, r.fidelity, r.infidelity, r.leakage, r.min_gap)
        for r in sorted(reports, key=lambda r: r.total_time)
    ]


def write_gap_profile(path: str | Path, profile: GapProfile) -> Path:
    return write_csv(path, GAP_HEADER, gap_rows(profile))


def write_sweep(path: str | Path, reports: Sequence[RunReport]) -> Path:
    return write_csv(path, SWEEP_HEADER, sweep_rows(reports))
