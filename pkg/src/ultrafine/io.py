"""
Operator documents and CSV output.

An operator document is JSON with ``dims`` and either a full ``matrix`` or
product ``factors``; complex entries are ``[re, im]`` pairs::

    {"dims": [2, 2],
     "factors": {"A": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
                 "B": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
     "name": "XX"}

A pair document bundles two operators as ``{"C": {...}, "L": {...}}``.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np

from .core import BipartiteOperator, ProductObservable, ValidationError

Operator = Union[BipartiteOperator, ProductObservable]

E_MALFORMED = "E_MALFORMED"
E_HERMITIAN = "E_HERMITIAN"
E_DIMS = "E_DIMS"


class OperatorDocumentError(ValidationError):
    def __init__(self, code: str, field: str, message: str):
        super().__init__(f"[{code}] {field}: {message}")
        self.code = code
        self.field = field


def _entry(x, field):
    if isinstance(x, bool):
        raise OperatorDocumentError(E_MALFORMED, field, "boolean is not a matrix entry")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise OperatorDocumentError(E_MALFORMED, field, f"entry {x!r} is not an [re, im] pair")


def _matrix(rows, field) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise OperatorDocumentError(E_MALFORMED, field, "expected a list of rows")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise OperatorDocumentError(E_DIMS, field, f"matrix is not square ({n} rows)")
    M = np.array([[_entry(x, f"{field}[{i}][{j}]") for j, x in enumerate(r)]
                  for i, r in enumerate(rows)], dtype=complex)
    dev = float(np.max(np.abs(M - M.conj().T)))
    if dev > 1e-12 * max(1.0, float(np.max(np.abs(M)))):
        raise OperatorDocumentError(E_HERMITIAN, field, f"not Hermitian (max deviation {dev:.3e})")
    return M


def operator_from_dict(doc: dict) -> Operator:
    if not isinstance(doc, dict):
        raise OperatorDocumentError(E_MALFORMED, "<document>", "expected a JSON object")
    dims = doc.get("dims")
    if (not isinstance(dims, list) or len(dims) != 2
            or not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims)):
        raise OperatorDocumentError(E_MALFORMED, "dims", "expected two positive integers")
    has_m, has_f = "matrix" in doc, "factors" in doc
    if has_m == has_f:
        raise OperatorDocumentError(E_MALFORMED, "matrix/factors",
                                    "exactly one of 'matrix' and 'factors' is required")
    if has_m:
        M = _matrix(doc["matrix"], "matrix")
        if M.shape[0] != dims[0] * dims[1]:
            raise OperatorDocumentError(E_DIMS, "matrix",
                                        f"side {M.shape[0]} does not match dims {dims}")
        return BipartiteOperator(tuple(dims), M)
    f = doc["factors"]
    if not isinstance(f, dict) or set(f) != {"A", "B"}:
        raise OperatorDocumentError(E_MALFORMED, "factors", "expected keys 'A' and 'B'")
    A, B = _matrix(f["A"], "factors.A"), _matrix(f["B"], "factors.B")
    if A.shape[0] != dims[0]:
        raise OperatorDocumentError(E_DIMS, "factors.A", f"side {A.shape[0]} != dims[0] = {dims[0]}")
    if B.shape[0] != dims[1]:
        raise OperatorDocumentError(E_DIMS, "factors.B", f"side {B.shape[0]} != dims[1] = {dims[1]}")
    return ProductObservable(A, B)


def parse_operator(text: str) -> Operator:
    """Parse one operator document; factor form is kept as :class:`ProductObservable`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OperatorDocumentError(E_MALFORMED, "<document>", f"invalid JSON: {exc}") from None
    return operator_from_dict(doc)


def _encode(M) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def operator_to_dict(op: Operator, name: Optional[str] = None,
                     comment: Optional[str] = None) -> dict:
    if isinstance(op, ProductObservable):
        doc = {"dims": list(op.dims), "factors": {"A": _encode(op.factorA), "B": _encode(op.factorB)}}
    else:
        doc = {"dims": list(op.dims), "matrix": _encode(op.matrix)}
    if name is not None:
        doc["name"] = name
    if comment is not None:
        doc["comment"] = comment
    return doc


def serialize_operator(op: Operator, name: Optional[str] = None,
                       comment: Optional[str] = None) -> str:
    return json.dumps(operator_to_dict(op, name, comment), indent=1)


def load_operator(path: str) -> Operator:
    with open(path, encoding="utf-8") as fh:
        return parse_operator(fh.read())


def load_pair(path: str):
    """Read a pair document and return ``(C, L)``."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise OperatorDocumentError(E_MALFORMED, "<document>", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "C" not in doc or "L" not in doc:
        raise OperatorDocumentError(E_MALFORMED, "<document>", "pair document needs 'C' and 'L'")
    return operator_from_dict(doc["C"]), operator_from_dict(doc["L"])


# CSV -----------------------------------------------------------------------------

def fmt(x) -> str:
    """Numbers with 10 significant digits; everything else via ``str``."""
    if isinstance(x, (bool, np.bool_)):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        s = f"{float(x):.10g}"
        return "0" if s == "-0" else s
    return str(x)


def write_csv(rows: Iterable[Sequence], header: Sequence[str], out: Union[str, TextIO]) -> None:
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, header, fh)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])


def csv_text(rows, header) -> str:
    buf = io.StringIO()
    write_csv(rows, header, buf)
    return buf.getvalue()


FIG1_HEADER = ("c", "l", "epsilon")
SCAN_HEADER = ("lambda", "eig_index", "eigenvalue", "negativity", "class")
