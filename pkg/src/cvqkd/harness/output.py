"""Row sink: CSV and JSON emission plus the matching parsers."""

import csv
import io
import json
from dataclasses import astuple, dataclass, fields

HEADER = ("axis", "qber", "qber_baseline", "i_ab", "i_ae", "i_s", "frames", "bits", "mean_iterations", "seconds")
FORMATS = ("csv", "structured")


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    qber: float
    qber_baseline: float | None
    i_ab: float
    i_ae: float
    i_s: float
    frames: int
    bits: int
    mean_iterations: float
    seconds: float


_INT_FIELDS = {"frames", "bits"}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.10g}"


def _rounded(value):
    return value if value is None or isinstance(value, int) else float(_fmt(value))


def _row_dict(row: SweepRow) -> dict:
    return {name: _rounded(v) for name, v in zip(HEADER, astuple(row))}


def format_csv_row(row: SweepRow) -> str:
    return ",".join(_fmt(v) for v in astuple(row)) + "\n"


class RowWriter:
    """Incremental writer; the file is opened (and so checked) on construction."""

    def __init__(self, path, fmt: str = "csv"):
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}")
        self.path = path
        self.fmt = fmt
        self._n = 0
        try:
            self._fh = open(path, "w", newline="")
        except OSError as exc:
            raise OSError(f"cannot write output file {path}: {exc.strerror}") from exc
        self._fh.write(",".join(HEADER) + "\n" if fmt == "csv" else "[")
        self._fh.flush()

    def write(self, row: SweepRow):
        if self.fmt == "csv":
            self._fh.write(format_csv_row(row))
        else:
            sep = "," if self._n else ""
            self._fh.write(sep + "\n  " + json.dumps(_row_dict(row), allow_nan=True))
        self._n += 1
        self._fh.flush()

    def close(self):
        if self.fmt == "structured":
            self._fh.write("\n]\n" if self._n else "]\n")
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def emit(rows, path, fmt: str = "csv"):
    """Write ``rows`` to ``path`` in one go."""
    with RowWriter(path, fmt) as writer:
        for row in rows:
            writer.write(row)


def dumps(rows, fmt: str = "csv") -> str:
    buf = io.StringIO()
    if fmt == "csv":
        buf.write(",".join(HEADER) + "\n")
        for row in rows:
            buf.write(format_csv_row(row))
    else:
        buf.write(json.dumps([_row_dict(r) for r in rows], indent=2, allow_nan=True) + "\n")
    return buf.getvalue()


def _coerce(name: str, raw):
    if raw in ("", None):
        return None
    if name in _INT_FIELDS:
        return int(raw)
    return float(raw)


def parse(text: str, fmt: str = "csv") -> list[SweepRow]:
    """Inverse of :func:`emit` for either format."""
    names = [f.name for f in fields(SweepRow)]
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if tuple(header or ()) != HEADER:
            raise ValueError("unexpected CSV header")
        records = [dict(zip(HEADER, rec)) for rec in reader if rec]
    else:
        records = json.loads(text)
    return [SweepRow(*(_coerce(n, rec[h]) for n, h in zip(names, HEADER))) for rec in records]


def load(path, fmt: str = "csv") -> list[SweepRow]:
    with open(path) as fh:
        return parse(fh.read(), fmt)

