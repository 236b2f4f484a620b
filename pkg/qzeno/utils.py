"""
Utility functions for CSV output
"""
import contextlib
import csv
import math
import sys
from typing import Iterable, Sequence

from .core import SweepIOError

STDOUT = "-"


def format_value(value) -> str:
    """Integers verbatim, floats with 17 significant digits (-0.0 written as 0)"""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value + 0.0:.17g}"


@contextlib.contextmanager
def open_output(path: str):
    """Yield a text stream for path; "-" is standard output"""
    if path == STDOUT:
        yield sys.stdout
        sys.stdout.flush()
        return

    try:
        f = open(path, "w", newline="", encoding="utf-8")
    except OSError as e:
        raise SweepIOError(path, e.strerror or str(e))
    try:
        with f:
            yield f
    except OSError as e:
        raise SweepIOError(path, e.strerror or str(e))


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    """
    Write a header and rows as CSV

    Args:
        path: output file, or "-" for standard output
        header: column names
        rows: sequences of ints/floats/strings

    Returns:
        Number of data rows written

    Raises:
        SweepIOError: if the file cannot be opened or written
    """
    count = 0
    with open_output(path) as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else format_value(v) for v in row])
            count += 1
    return count
