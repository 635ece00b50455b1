"""
Output Records
==============

The machine-readable record every CLI command prints, and its encoders.

JSON shape:
    {"command": str,
     "params": {str: number | str | bool | null},
     "results": [{"name": str, "value": number | null,
                  "stderr": number | null, "verdict": str | null}],
     "meta": {"version": str, "seed": int | null, "timestamp": str}}

Two runs with identical arguments produce identical bytes apart from
meta.timestamp. CSV carries the same numbers with 17 significant digits.
"""

import csv
import io
import math
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from concbounds.models import BoundResult, McReport

ParamValue = Union[bool, int, float, str, None]

CSV_COLUMNS = ["command", "name", "value", "stderr", "verdict"]


class ResultEntry(BaseModel):
    name: str = Field(..., description="Result field name")
    value: Optional[float] = Field(default=None, description="Numeric value, null if unavailable")
    stderr: Optional[float] = Field(default=None, description="Monte Carlo standard error")
    verdict: Optional[str] = Field(default=None, description="pass, fail, inconclusive or a flag")


class RecordMeta(BaseModel):
    version: str
    seed: Optional[int] = None
    timestamp: str


class OutputRecord(BaseModel):
    """One printed record; suite commands print one per check."""
    command: str
    params: Dict[str, ParamValue] = Field(default_factory=dict)
    results: List[ResultEntry] = Field(default_factory=list)
    meta: RecordMeta

    @classmethod
    def build(
        cls,
        command: str,
        params: Dict[str, Any],
        results: Iterable[ResultEntry],
        seed: Optional[int] = None,
    ) -> "OutputRecord":
        from concbounds import __version__

        return cls(
            command=command,
            params={k: _param(v) for k, v in params.items()},
            results=list(results),
            meta=RecordMeta(
                version=__version__,
                seed=seed,
                timestamp=datetime.now(timezone.utc).isoformat(),
            ),
        )

    @property
    def verdicts(self) -> List[str]:
        return [r.verdict for r in self.results if r.verdict is not None]

    def to_json(self) -> str:
        return self.model_dump_json()

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        return cls.model_validate_json(text)


def _param(value: Any) -> ParamValue:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.generic):
        return value.item()
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


def _finite(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


# ============================================================================
# Converters
# ============================================================================

def bound_entries(result: BoundResult, prefix: str = "") -> List[ResultEntry]:
    """radius plus c1, c2 and eps_used where the method defines them."""
    name = prefix or result.method.value
    entries = [ResultEntry(name=f"{name}.radius", value=result.radius)]
    if result.has_constants:
        entries.append(ResultEntry(name=f"{name}.c1", value=result.c1))
        entries.append(ResultEntry(name=f"{name}.c2", value=result.c2))
    if result.eps_used is not None:
        entries.append(ResultEntry(name=f"{name}.eps", value=result.eps_used))
    return entries


def report_entries(report: McReport) -> List[ResultEntry]:
    """statistic with its verdict, then interval ends and target."""
    lo, hi = report.interval
    return [
        ResultEntry(
            name="statistic",
            value=_finite(report.statistic),
            stderr=_finite(report.std_error),
            verdict=report.verdict.value,
        ),
        ResultEntry(name="interval_lower", value=_finite(lo)),
        ResultEntry(name="interval_upper", value=_finite(hi)),
        ResultEntry(name="target", value=_finite(report.target)),
    ]


def report_params(report: McReport) -> Dict[str, Any]:
    params: Dict[str, Any] = {"check": report.check, "samples": report.samples}
    if report.spec is not None:
        for key, value in report.spec.to_dict().items():
            params[f"spec.{key}"] = value
    for key, value in report.details.items():
        params[key] = value
    return params


# ============================================================================
# Encoders
# ============================================================================

def format_number(value: Optional[float]) -> str:
    return "" if value is None else format(value, ".17g")


def encode_json(records: Sequence[OutputRecord]) -> str:
    """Newline-delimited JSON, one record per line."""
    return "".join(record.to_json() + "\n" for record in records)


def encode_csv(records: Sequence[OutputRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        for entry in record.results:
            writer.writerow([
                record.command,
                entry.name,
                format_number(entry.value),
                format_number(entry.stderr),
                entry.verdict or "",
            ])
    return buffer.getvalue()


def encode_table_csv(axis: str, rows: Sequence[Tuple[float, List[BoundResult]]]) -> str:
    """Sweep table: one row per (axis value, method)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([axis, "method", "radius", "c1", "c2", "eps"])
    for value, results in rows:
        for result in results:
            writer.writerow([
                format_number(value) if axis == "delta" else int(value),
                result.method.value,
                format_number(result.radius),
                format_number(result.c1),
                format_number(result.c2),
                format_number(result.eps_used),
            ])
    return buffer.getvalue()
