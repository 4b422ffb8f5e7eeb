"""Append-only results CSV, training log CSV and the pivoted sweep table."""

import csv
import math
import threading
from pathlib import Path
from typing import Dict, List, Sequence, Union

from firecast.models.report import REPORT_COLUMNS, TRAIN_LOG_COLUMNS, EvalReport, TrainLogRow
from firecast.utils.errors import ErrorCategory, FirecastError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

_append_lock = threading.Lock()


def _io_error(path: Path, e: OSError) -> FirecastError:
    return FirecastError(f"failed to write {path}: {e}", category=ErrorCategory.SYSTEM, context={"path": str(path)})


def append_reports(reports: Sequence[EvalReport], path: Union[str, Path]) -> None:
    """Append rows to the results CSV, writing the header for a new file.

    Appends are serialized across threads.
    """
    target = Path(path)
    with _append_lock:
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            new_file = not target.exists() or target.stat().st_size == 0
            with target.open("a", newline="", encoding="utf-8") as handle:
                writer = csv.DictWriter(handle, fieldnames=REPORT_COLUMNS)
                if new_file:
                    writer.writeheader()
                for report in reports:
                    writer.writerow(report.to_row())
        except OSError as e:
            raise _io_error(target, e) from e
    logger.info(f"Appended {len(reports)} report rows to {target}")


def read_reports(path: Union[str, Path]) -> List[EvalReport]:
    """All rows of a results CSV; a missing file reads as empty."""
    source = Path(path)
    if not source.exists():
        return []
    with source.open(newline="", encoding="utf-8") as handle:
        return [EvalReport.from_row(row) for row in csv.DictReader(handle)]


def write_train_log(rows: Sequence[TrainLogRow], path: Union[str, Path]) -> None:
    """Write the per-epoch training log (epoch, lr, train_loss, val_auprc)."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=TRAIN_LOG_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow(row.to_row())
    except OSError as e:
        raise _io_error(target, e) from e


def pivot_reports(reports: Sequence[EvalReport]) -> Dict[tuple, Dict[int, Dict[int, float]]]:
    """Group ok rows as (model, ts) -> horizon -> radius -> AUPRC."""
    table: Dict[tuple, Dict[int, Dict[int, float]]] = {}
    for report in reports:
        if report.status != "ok" or report.auprc is None:
            continue
        table.setdefault((report.model, report.ts), {}).setdefault(report.h, {})[report.r] = report.auprc
    return table


def write_pivot(reports: Sequence[EvalReport], path: Union[str, Path]) -> None:
    """Horizon rows by radius columns, one block per (model, ts).

    Columns: model, ts, h, then r=<radius> for every radius present;
    missing cells are left empty.
    """
    target = Path(path)
    table = pivot_reports(reports)
    radii = sorted({r for rows in table.values() for cells in rows.values() for r in cells})
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["model", "ts", "h"] + [f"r={r}" for r in radii])
            for (model, ts), rows in sorted(table.items()):
                for h in sorted(rows):
                    cells = rows[h]
                    writer.writerow(
                        [model, ts, h] + [repr(cells[r]) if r in cells and not math.isnan(cells[r]) else "" for r in radii]
                    )
    except OSError as e:
        raise _io_error(target, e) from e
    logger.info(f"Wrote pivoted results for {len(table)} (model, ts) blocks to {target}")
