"""JSON file formats for models, statistics, and reports.

Model file::

    {"arithmetic": "rational" | "float", "tolerance": 1e-9,
     "theta_labels": [...], "sample_labels": [...], "pmf_rows": [[...], ...]}

Rational entries are strings ``"a/b"`` (integers are also accepted); float
entries are JSON numbers. Statistic and expectation files are
``{"values": [...]}`` aligned with the sample or parameter labels.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import linalg
from .characterize import Certificate
from .linalg import Matrix
from .model import StatModel


class InputError(ValueError):
    """Malformed input file; the message names the offending location."""


def _entry(value, arith, where):
    if arith.exact:
        if isinstance(value, bool) or not isinstance(value, (str, int)):
            raise InputError(f"{where}: expected a rational string 'a/b', got {value!r}")
        try:
            return linalg.parse_rational(value) if isinstance(value, str) else Fraction(value)
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def model_from_json(doc, source="<model>") -> StatModel:
    if not isinstance(doc, dict):
        raise InputError(f"{source}: top level must be an object")
    mode = doc.get("arithmetic", "rational")
    if mode == "rational":
        if "tolerance" in doc and doc["tolerance"] not in (None, 0):
            raise InputError(f"{source}: tolerance only applies to float arithmetic")
        arith = linalg.EXACT
    elif mode == "float":
        tol = doc.get("tolerance", linalg.DEFAULT_TOLERANCE)
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol < 0:
            raise InputError(f"{source}: tolerance must be a nonnegative number")
        arith = linalg.approx(float(tol))
    else:
        raise InputError(f"{source}: arithmetic must be 'rational' or 'float', got {mode!r}")
    rows = doc.get("pmf_rows")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{source}: pmf_rows must be a list of lists")
    width = len(rows[0]) if rows else 0
    body = []
    for i, r in enumerate(rows):
        if len(r) != width:
            raise InputError(f"{source}: pmf_rows[{i}] has {len(r)} entries, expected {width}")
        body.append([_entry(v, arith, f"{source}: pmf_rows[{i}][{j}]") for j, v in enumerate(r)])
    theta = doc.get("theta_labels", [str(i + 1) for i in range(len(body))])
    samples = doc.get("sample_labels", [str(j + 1) for j in range(width)])
    for key, labels, count in (("theta_labels", theta, len(body)), ("sample_labels", samples, width)):
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise InputError(f"{source}: {key} must be a list of strings")
        if len(labels) != count:
            raise InputError(f"{source}: {key} has {len(labels)} labels, expected {count}")
    P = Matrix(tuple(tuple(r) for r in body), width, arith)
    return StatModel(tuple(theta), tuple(samples), P)


def load_model(path) -> StatModel:
    return model_from_json(_read_json(path), str(path))


def model_to_json(m: StatModel) -> dict:
    doc = {"arithmetic": m.arithmetic.name}
    if not m.arithmetic.exact:
        doc["tolerance"] = m.arithmetic.tolerance
    doc["theta_labels"] = list(m.theta_labels)
    doc["sample_labels"] = list(m.sample_labels)
    doc["pmf_rows"] = [[linalg.format_scalar(v) for v in r] for r in m.rows]
    return doc


def vector_from_json(doc, arith, length, source="<vector>") -> tuple:
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), list):
        raise InputError(f"{source}: expected an object with a 'values' list")
    vals = doc["values"]
    if len(vals) != length:
        raise InputError(f"{source}: {len(vals)} values, expected {length}")
    return tuple(_entry(v, arith, f"{source}: values[{i}]") for i, v in enumerate(vals))


def load_vector(path, arith, length) -> tuple:
    return vector_from_json(_read_json(path), arith, length, str(path))


def vector_to_json(values) -> dict:
    return {"values": [linalg.format_scalar(v) for v in values]}


def certificate_to_json(cert: Certificate, m) -> dict:
    base = m.base
    return {
        "decision": "yes",
        "arithmetic": base.arithmetic.name,
        "theta0": [base.theta_labels[i] for i in cert.theta0],
        "lambda": [[linalg.format_scalar(v) for v in r] for r in cert.lambda_.rows],
        "statistic": [linalg.format_scalar(v) for v in cert.statistic],
    }


def certificate_from_json(doc, m, source="<certificate>") -> Certificate:
    base = m.base
    arith = base.arithmetic
    try:
        index = {lab: i for i, lab in enumerate(base.theta_labels)}
        theta0 = tuple(index[lab] for lab in doc["theta0"])
        lam = doc["lambda"]
        k = len(theta0)
        if len(lam) != k or any(len(r) != k for r in lam):
            raise InputError(f"{source}: lambda must be {k}x{k}")
        rows = tuple(tuple(_entry(v, arith, f"{source}: lambda[{i}][{j}]") for j, v in enumerate(r))
                     for i, r in enumerate(lam))
        stat = vector_from_json({"values": doc["statistic"]}, arith, base.n_samples, source)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{source}: malformed certificate ({exc})") from None
    return Certificate(Matrix(rows, k, arith), stat, theta0)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2)


__all__ = [
    "InputError",
    "certificate_from_json",
    "certificate_to_json",
    "dumps",
    "load_model",
    "load_vector",
    "model_from_json",
    "model_to_json",
    "vector_from_json",
    "vector_to_json",
]
