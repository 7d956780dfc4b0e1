"""Report emission: JSON with 17-significant-digit floats, and CSV.

Identical inputs must produce byte-identical files, so keys are sorted and
float formatting is pinned instead of relying on repr.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence, Union

__all__ = ["dumps_report", "write_json", "write_csv", "format_float"]


def format_float(x: float) -> str:
    return format(x, ".17g")


class _Float17Encoder(json.JSONEncoder):
    """JSONEncoder printing every float with 17 significant digits."""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        if self.ensure_ascii:
            _encoder = json.encoder.encode_basestring_ascii
        else:
            _encoder = json.encoder.encode_basestring

        def floatstr(value, allow_nan=self.allow_nan):
            if math.isnan(value):
                text = "NaN"
            elif value == math.inf:
                text = "Infinity"
            elif value == -math.inf:
                text = "-Infinity"
            else:
                return format_float(value)
            if not allow_nan:
                raise ValueError(f"out of range float value: {value!r}")
            return text

        iterencoder = json.encoder._make_iterencode(
            markers,
            self.default,
            _encoder,
            self.indent,
            floatstr,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )
        return iterencoder(o, 0)


def dumps_report(obj) -> str:
    return json.dumps(obj, cls=_Float17Encoder, sort_keys=True, indent=2) + "\n"


def write_json(path: Union[str, Path], obj) -> None:
    Path(path).write_text(dumps_report(obj))


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_csv(
    target: Union[str, Path, io.TextIOBase],
    header: Sequence[str],
    rows: Iterable[Sequence],
) -> None:
    def emit(handle) -> None:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])

    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as handle:
            emit(handle)
    else:
        emit(target)
