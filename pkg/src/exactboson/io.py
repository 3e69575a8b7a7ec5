"""File formats: matrix JSON, sample streams (JSON lines / CSV), outcome tables.

Matrix file::

    {"rows": R, "cols": C, "data": [[re, im], ...], "metadata": {...}}

``data`` holds R*C entries in row-major order; ``metadata`` is optional.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np

from .distribution import OutcomeTable
from .exceptions import InputError
from .sampler import SampleRecord


def matrix_to_dict(A, metadata=None):
    A = np.asarray(A, dtype=np.complex128)
    out = {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[float(v.real), float(v.imag)] for v in A.ravel()],
    }
    if metadata is not None:
        out["metadata"] = metadata
    return out


def matrix_from_dict(obj):
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"matrix object needs integer 'rows', 'cols' and a 'data' list: {exc}") from exc
    if rows < 0 or cols < 0 or len(data) != rows * cols:
        raise InputError(f"matrix data has {len(data)} entries, expected {rows}x{cols}")
    try:
        pairs = np.array(data, dtype=np.float64).reshape(rows * cols, 2)
    except ValueError as exc:
        raise InputError("matrix entries must be [re, im] pairs") from exc
    if not np.all(np.isfinite(pairs)):
        raise InputError("matrix contains NaN or Inf entries")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(rows, cols)


def save_matrix(path, A, metadata=None):
    text = json.dumps(matrix_to_dict(A, metadata), indent=None, sort_keys=True)
    Path(path).write_text(text + "\n")


def load_matrix(path):
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read matrix file {path}: {exc}") from exc
    return matrix_from_dict(obj)


# --- samples -----------------------------------------------------------------


def sample_format(path, default="json"):
    return "csv" if str(path).lower().endswith(".csv") else default


def write_samples(records, fh, fmt="json", n=None):
    """Stream records to ``fh`` as JSON lines or CSV (z_1..z_n, prob)."""
    writer = None
    for rec in records:
        if fmt == "json":
            fh.write(json.dumps(rec.to_dict()) + "\n")
            continue
        if writer is None:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([f"z_{i}" for i in range(1, len(rec.z) + 1)] + ["prob"])
        writer.writerow(list(rec.z) + [repr(rec.probability) if rec.probability is not None else ""])
    if fmt == "csv" and writer is None and n is not None:
        csv.writer(fh, lineterminator="\n").writerow([f"z_{i}" for i in range(1, n + 1)] + ["prob"])


def _record_from_json(obj, lineno):
    try:
        z = tuple(int(v) for v in obj["z"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"line {lineno}: sample needs an integer list 'z'") from exc
    alpha = obj.get("alpha")
    return SampleRecord(
        z=z, probability=obj.get("prob"), sampler=obj.get("sampler", "B"),
        alpha=tuple(alpha) if alpha is not None else None, tries=obj.get("tries"),
    )


def read_samples(path, fmt=None):
    """Load a sample file written by ``write_samples``."""
    fmt = fmt or sample_format(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read samples from {path}: {exc}") from exc
    out = []
    if fmt == "json":
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"line {lineno}: invalid JSON") from exc
            out.append(_record_from_json(obj, lineno))
        return out
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        return out
    header = rows[0]
    zcols = [i for i, h in enumerate(header) if h.startswith("z_")]
    pcol = header.index("prob") if "prob" in header else None
    for lineno, row in enumerate(rows[1:], 2):
        try:
            z = tuple(int(row[i]) for i in zcols)
        except (ValueError, IndexError) as exc:
            raise InputError(f"line {lineno}: malformed sample row") from exc
        prob = float(row[pcol]) if pcol is not None and row[pcol] else None
        out.append(SampleRecord(z=z, probability=prob, sampler="csv"))
    return out


# --- outcome tables ------------------------------------------------------------


def write_table_csv(table, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([f"z_{i}" for i in range(1, table.n + 1)] + ["probability"])
    for z, p in table:
        writer.writerow(list(z) + [repr(float(p))])


def read_table_csv(path):
    """Read an outcome table; m is taken as the largest mode present."""
    try:
        rows = list(csv.reader(Path(path).read_text().splitlines()))
    except OSError as exc:
        raise InputError(f"cannot read table {path}: {exc}") from exc
    if len(rows) < 2 or rows[0][-1] != "probability":
        raise InputError("table CSV needs a header z_1..z_n,probability and at least one row")
    n = len(rows[0]) - 1
    outcomes, probs = [], []
    for lineno, row in enumerate(rows[1:], 2):
        try:
            outcomes.append(tuple(int(v) for v in row[:n]))
            probs.append(float(row[n]))
        except (ValueError, IndexError) as exc:
            raise InputError(f"line {lineno}: malformed table row") from exc
    probs = np.array(probs)
    if not np.all(np.isfinite(probs)) or np.any(probs < 0) or not math.isclose(probs.sum(), 1.0, abs_tol=1e-6):
        raise InputError("table probabilities must be non-negative and sum to one")
    m = max(max(z) for z in outcomes)
    return OutcomeTable(m, n, outcomes, probs)
