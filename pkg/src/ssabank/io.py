"""Signal and table files.

Signal formats
--------------
``*.csv`` / ``*.txt``
    One sample per line in shortest round-trip decimal form. An optional
    leading comment ``# sample_rate=<fs>`` records the sample rate.
``*.f64`` / ``*.bin``
    Raw little-endian IEEE-754 doubles, with a JSON sidecar
    ``<file>.json`` holding ``{"sample_rate": ..., "count": ..., "dtype": "<f8"}``.

All writers go through a temporary file in the target directory followed
by :func:`os.replace`, so readers never observe partial files.
"""

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import TimeSeries
from .exceptions import InvalidInputError

__all__ = [
    "read_signal",
    "write_signal",
    "write_table",
    "read_table",
    "write_json",
    "format_float",
]

TEXT_SUFFIXES = {".csv", ".txt"}
BINARY_SUFFIXES = {".f64", ".bin"}


def format_float(v):
    """Shortest decimal string that parses back to the same double."""
    return repr(float(v))


def _atomic_write(path, data):
    path = Path(path)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sidecar(path):
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_signal(path, ts):
    """Write a :class:`TimeSeries` (or 1-D array, fs = 1) to ``path``."""
    if not isinstance(ts, TimeSeries):
        ts = TimeSeries(ts)
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in BINARY_SUFFIXES:
        _atomic_write(path, ts.samples.astype("<f8").tobytes())
        meta = {"sample_rate": ts.sample_rate, "count": len(ts), "dtype": "<f8"}
        write_json(_sidecar(path), meta)
    elif suffix in TEXT_SUFFIXES:
        lines = [f"# sample_rate={format_float(ts.sample_rate)}"]
        lines += [format_float(v) for v in ts.samples]
        _atomic_write(path, "\n".join(lines) + "\n")
    else:
        raise InvalidInputError(f"unsupported signal file extension {suffix!r}")


def read_signal(path, sample_rate=None):
    """Read a signal file; ``sample_rate`` overrides the stored one."""
    path = Path(path)
    suffix = path.suffix.lower()
    try:
        if suffix in BINARY_SUFFIXES:
            samples = np.fromfile(path, dtype="<f8").astype(np.float64)
            stored = 1.0
            side = _sidecar(path)
            if side.exists():
                meta = json.loads(side.read_text())
                stored = float(meta.get("sample_rate", 1.0))
                if "count" in meta and int(meta["count"]) != samples.size:
                    raise InvalidInputError(
                        f"{path}: sidecar says {meta['count']} samples, file has {samples.size}"
                    )
        elif suffix in TEXT_SUFFIXES:
            stored = 1.0
            values = []
            for lineno, line in enumerate(path.read_text().splitlines(), 1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].partition("=")
                    if key.strip() == "sample_rate":
                        stored = float(val)
                    continue
                try:
                    values.append(float(line.split(",")[0]))
                except ValueError as exc:
                    raise InvalidInputError(f"{path}:{lineno}: not a number: {line!r}") from exc
            samples = np.array(values, dtype=np.float64)
        else:
            raise InvalidInputError(f"unsupported signal file extension {suffix!r}")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    return TimeSeries(samples, stored if sample_rate is None else sample_rate)


def write_table(path, header, columns):
    """Write equally long columns as CSV with a header row.

    Integer columns are written as integers, everything else with
    :func:`format_float`.
    """
    cols = [np.asarray(c) for c in columns]
    if len({c.shape[0] for c in cols}) > 1:
        raise InvalidInputError("table columns differ in length")
    fmt = [
        (lambda v: str(int(v))) if np.issubdtype(c.dtype, np.integer) or c.dtype == bool else format_float
        for c in cols
    ]
    rows = [",".join(header)]
    for i in range(cols[0].shape[0] if cols else 0):
        rows.append(",".join(f(c[i]) for f, c in zip(fmt, cols)))
    _atomic_write(path, "\n".join(rows) + "\n")


def read_table(path):
    """Read a table written by :func:`write_table` into ``(header, float array)``."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:] if line])
    return header, data.reshape(-1, len(header))


def write_json(path, obj):
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")
