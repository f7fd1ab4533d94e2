"""CSV / JSON serialisation of report records.

Records are flat dataclasses.  Exact rationals are written as ``"p/q"``; in
CSV they get a companion ``<field>_decimal`` column with 18 significant
digits.  Floats are written with 18 significant digits in CSV and with
``repr`` precision in JSON, so both parse back to the same double.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import re
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Iterable, TypeVar

T = TypeVar("T")

_RATIONAL = re.compile(r"-?\d+/\d+")


def decimal_string(x: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 18
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return format(v, ".18g")
    if isinstance(v, Enum):
        return str(v.value)
    return str(v)


def _json_value(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, Enum):
        return v.value
    return v


def _field_names(cls) -> list[str]:
    return [f.name for f in dataclasses.fields(cls)]


def to_csv(records: Iterable, cls) -> str:
    records = list(records)
    names = _field_names(cls)
    rational = {n for n in names if any(isinstance(getattr(r, n), Fraction) for r in records)}
    header = []
    for n in names:
        header.append(n)
        if n in rational:
            header.append(f"{n}_decimal")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in records:
        row = []
        for n in names:
            v = getattr(r, n)
            row.append(_csv_cell(v))
            if n in rational:
                row.append(decimal_string(v) if isinstance(v, Fraction) else _csv_cell(v))
        writer.writerow(row)
    return buf.getvalue()


def to_json(records: Iterable) -> str:
    out = [{f.name: _json_value(getattr(r, f.name)) for f in dataclasses.fields(r)} for r in records]
    return json.dumps(out, indent=1, allow_nan=False) + "\n"


def from_json(text: str, cls: type[T]) -> list[T]:
    def decode(v):
        if isinstance(v, str) and _RATIONAL.fullmatch(v):
            return Fraction(v)
        return v

    return [cls(**{k: decode(v) for k, v in item.items()}) for item in json.loads(text)]


def serialize(records: Iterable, cls, fmt: str = "csv") -> bytes:
    if fmt == "csv":
        return to_csv(records, cls).encode()
    if fmt == "json":
        return to_json(records).encode()
    raise ValueError(f"unknown format {fmt!r}")


# --- record types used only by the command line ---


@dataclasses.dataclass(frozen=True)
class PiRecord:
    d: int
    pi_q: int


@dataclasses.dataclass(frozen=True)
class DistRecord:
    kind: str
    n: int
    q: int | None
    mode: str
    k: int
    probability: Fraction | float


@dataclasses.dataclass(frozen=True)
class HqRecord:
    q: int
    x: float
    tol: float
    value: float
    oracle: float | None = None
    oracle_tail: float | None = None


@dataclasses.dataclass(frozen=True)
class MainTermRecord:
    n: int
    k: int
    q: int
    which: str
    r: float
    value: float


@dataclasses.dataclass(frozen=True)
class CheckRecord:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclasses.dataclass(frozen=True)
class TVSummaryRecord:
    n: int
    q: int
    d_tv: Fraction | float
    scaled: float
    mode: str
