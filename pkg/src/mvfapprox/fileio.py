"""Deterministic file formats: sample sets, factor dumps, curve tables.

All floating point output goes through one %.17g formatter, so a float64
value round-trips exactly and repeated runs produce byte-identical files.
"""

import json

import numpy as np

from .core import MatrixClass, ParamSamples
from .errors import SampleFileError


def format_float(x):
    """Shortest decimal that reparses to the same float64."""
    return "%.17g" % float(x)


def dumps_json(obj, indent=0):
    """JSON with deterministic float formatting and stable layout."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [dumps_json(v, indent + 1) for v in obj]
        if all("\n" not in p and len(p) < 20 for p in parts) and sum(
            len(p) for p in parts
        ) < 100:
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [
            inner + json.dumps(str(k)) + ": " + dumps_json(v, indent + 1)
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _require(cond, message):
    if not cond:
        raise SampleFileError(message)


def save_samples(path, samples):
    payload = {
        "n": samples.n,
        "class": samples.matrix_class.value,
        "t": samples.t,
        "matrices": samples.matrices,
    }
    with open(path, "w") as fh:
        fh.write(dumps_json(payload) + "\n")


def load_samples(path, tol=None):
    """Read a sample file; malformed structure raises SampleFileError,
    matrices failing their class check raise ClassViolation."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SampleFileError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SampleFileError(f"{path} is not valid JSON: {exc}") from None
    _require(isinstance(raw, dict), f"{path}: top level must be an object")
    for key in ("n", "class", "t", "matrices"):
        _require(key in raw, f"{path}: missing key {key!r}")
    try:
        matrix_class = MatrixClass.from_name(raw["class"])
    except ValueError as exc:
        raise SampleFileError(f"{path}: {exc}") from None
    n = raw["n"]
    _require(isinstance(n, int) and n >= 1, f"{path}: n must be a positive integer")
    t = np.asarray(raw["t"], dtype=np.float64)
    mats = np.asarray(raw["matrices"], dtype=np.float64)
    _require(t.ndim == 1, f"{path}: t must be a flat list")
    _require(
        mats.shape == (t.size, n, n),
        f"{path}: matrices must have shape ({t.size}, {n}, {n}), got {mats.shape}",
    )
    try:
        return ParamSamples(t, mats, matrix_class, tol)
    except ValueError as exc:
        raise SampleFileError(f"{path}: {exc}") from None


def factorization_payload(kind, samples, rows):
    """JSON-ready dict for per-sample factorizations."""
    out_rows = []
    for fact in rows:
        meta = {}
        for key in ("det_q", "minors", "minor_ratio_error", "degenerate"):
            if key in fact.meta:
                meta[key] = fact.meta[key]
        out_rows.append(
            {
                "factors": [
                    {"class": cls.value, "matrix": mat}
                    for mat, cls in fact.factors
                ],
                "residual": fact.residual,
                "meta": meta,
            }
        )
    return {
        "kind": kind,
        "n": samples.n,
        "class": samples.matrix_class.value,
        "t": samples.t,
        "samples": out_rows,
    }


def curve_csv_header(n):
    names = [f"a{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return ",".join(["t"] + names)


def write_curve_csv(path, ts, mats):
    """t plus the n*n entries in row-major order, one curve point per line."""
    mats = np.asarray(mats)
    n = mats.shape[-1]
    with open(path, "w") as fh:
        fh.write(curve_csv_header(n) + "\n")
        for t, m in zip(ts, mats):
            row = [format_float(t)] + [format_float(v) for v in m.reshape(-1)]
            fh.write(",".join(row) + "\n")


def read_curve_csv(path):
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise SampleFileError(f"cannot read {path}: {exc}") from None
    _require(len(lines) >= 2, f"{path}: need a header and at least one row")
    cols = lines[0].split(",")
    _require(cols[0] == "t", f"{path}: first column must be t")
    nn = len(cols) - 1
    n = int(round(nn**0.5))
    _require(n * n == nn, f"{path}: {nn} matrix columns is not a square count")
    ts = []
    mats = []
    for ln in lines[1:]:
        vals = ln.split(",")
        _require(len(vals) == nn + 1, f"{path}: row width mismatch")
        try:
            nums = [float(v) for v in vals]
        except ValueError:
            raise SampleFileError(f"{path}: non-numeric entry") from None
        ts.append(nums[0])
        mats.append(np.array(nums[1:]).reshape(n, n))
    return np.array(ts), np.stack(mats)


def write_diagnostics_csv(path, ts, mats):
    """Structural diagnostics per curve point: determinant, leading minor
    signs, and the eigenvalues of the symmetric part in ascending order."""
    mats = np.asarray(mats)
    n = mats.shape[-1]
    header = (
        ["t", "det"]
        + [f"minor_sign_{k + 1}" for k in range(n)]
        + [f"sym_eig_{k + 1}" for k in range(n)]
    )
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for t, m in zip(ts, mats):
            minors = [
                np.linalg.det(m[: k + 1, : k + 1]) for k in range(n)
            ]
            eigs = np.linalg.eigvalsh(0.5 * (m + m.T))
            row = (
                [format_float(t), format_float(np.linalg.det(m))]
                + [str(int(np.sign(v))) for v in minors]
                + [format_float(v) for v in eigs]
            )
            fh.write(",".join(row) + "\n")


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SampleFileError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SampleFileError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SampleFileError(f"{path}: config must be a JSON object")
    return raw
