"""
Output service
Every result table is a pandas DataFrame of exact text cells, written as
CSV, JSON lines, or a rich table for people.
"""

import json
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import pandas as pd
from rich import box
from rich.console import Console
from rich.table import Table

from app.core.exceptions import UsageError

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("human", "csv", "jsonl")


def fraction_text(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def decimal_text(value: Fraction, places: int) -> str:
    """Exact half-even rounding to a fixed number of places"""
    scaled = round(Fraction(value) * 10 ** places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (Fraction, int)):
        return fraction_text(Fraction(value))
    if hasattr(value, "value") and isinstance(value.value, str):
        return value.value
    if isinstance(value, (tuple, list)):
        return ",".join(cell(v) for v in value)
    return str(value)


def frame(rows: Iterable[Dict[str, Any]], columns: Sequence[str], decimals: int = 0, exact: Sequence[str] = ()) -> pd.DataFrame:
    """Text DataFrame; each column in `exact` gets a decimal twin when decimals > 0"""
    rows = list(rows)
    data: Dict[str, List[str]] = {}
    for column in columns:
        data[column] = [cell(row.get(column)) for row in rows]
        if decimals > 0 and column in exact:
            data[f"{column}~"] = [
                decimal_text(row[column], decimals) if isinstance(row.get(column), (Fraction, int)) and not isinstance(row.get(column), bool) else ""
                for row in rows
            ]
    return pd.DataFrame(data, columns=list(data.keys()), dtype=object)


def write_frame(df: pd.DataFrame, fmt: str, stream: TextIO, title: Optional[str] = None):
    if fmt == "csv":
        df.to_csv(stream, index=False, lineterminator="\n")
    elif fmt == "jsonl":
        for record in df.to_dict(orient="records"):
            stream.write(json.dumps(record, ensure_ascii=False) + "\n")
    elif fmt == "human":
        _write_table(df, stream, title)
    else:
        raise UsageError(f"unknown output format {fmt!r}; choose from {', '.join(OUTPUT_FORMATS)}")


def _write_table(df: pd.DataFrame, stream: TextIO, title: Optional[str]):
    table = Table(title=title, box=box.SIMPLE_HEAD, title_justify="left")
    for column in df.columns:
        table.add_column(str(column), overflow="fold")
    for record in df.itertuples(index=False):
        table.add_row(*(str(value) for value in record))
    console = Console(file=stream, width=160, highlight=False, color_system=None, soft_wrap=False)
    console.print(table)


def write_lines(lines: Iterable[str], stream: TextIO):
    for line in lines:
        stream.write(line + "\n")
