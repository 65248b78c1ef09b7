"""JSON document formats for maps and certificate reports.

Complex numbers are encoded as two-element [re, im] arrays throughout, so
documents stay schema-checkable without string parsing.  Rendering is
canonical (sorted keys, no whitespace, trailing newline) and parse/render
round-trip exactly; the content digest of a map document is the SHA-256 of
its canonical bytes, tying every certificate to one exact input.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .certify import Certificate
from .errors import ParseError, SchemaError
from .experiments import SweepReport
from .linalg import DEFAULT_TOL, ToleranceConfig
from .maps import MapOperator, cp_map_from_kraus, from_conjugation
from .zeros import ZeroSet

__all__ = [
    "MapDocument",
    "CertificateDocument",
    "matrix_to_payload",
    "payload_to_matrix",
    "parse_map_file",
    "render_map_document",
    "to_map_operator",
    "content_digest",
    "certificate_to_record",
    "sweep_report_to_record",
    "tolerances_to_record",
    "zero_set_summary",
    "render_certificate_document",
    "parse_certificate_document",
]

_KINDS = ("choi", "conjugation", "kraus")


@dataclass(frozen=True)
class MapDocument:
    """Validated, serialization-ready description of one map."""

    kind: str
    dim_in: int
    dim_out: int
    payload: list
    transposed: bool | None = None
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CertificateDocument:
    """Full analysis report for one map document."""

    input_digest: str
    certificates: list
    zero_set_summary: dict
    sweep: list | None
    tool_version: str
    seed: int
    tolerances: dict


def matrix_to_payload(matrix: np.ndarray) -> list:
    """Nested [re, im] lists for a 2-d complex array."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix, dtype=complex)]


def _entry_to_complex(entry, path: str) -> complex:
    if (
        not isinstance(entry, list)
        or len(entry) != 2
        or any(isinstance(p, bool) or not isinstance(p, (int, float)) for p in entry)
    ):
        raise SchemaError(path, "entries must be [re, im] number pairs")
    re, im = float(entry[0]), float(entry[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise SchemaError(path, "entries must be finite")
    return complex(re, im)


def payload_to_matrix(payload, rows: int, cols: int, path: str = "payload") -> np.ndarray:
    """Decode one rows x cols matrix of [re, im] pairs, naming bad fields."""
    if not isinstance(payload, list) or len(payload) != rows:
        raise SchemaError(path, f"expected {rows} rows")
    out = np.zeros((rows, cols), dtype=complex)
    for i, row in enumerate(payload):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{path}[{i}]", f"expected {cols} entries")
        for j, entry in enumerate(row):
            out[i, j] = _entry_to_complex(entry, f"{path}[{i}][{j}]")
    return out


def _require_dim(obj, key) -> int:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SchemaError(key, "must be a positive integer")
    return value


def _validate_payload(kind: str, n: int, m: int, payload):
    if kind == "choi":
        matrix = payload_to_matrix(payload, n * m, n * m)
        gap = float(np.linalg.norm(matrix - matrix.conj().T))
        if gap > DEFAULT_TOL.residual_rel_tol * max(1.0, float(np.linalg.norm(matrix))):
            raise SchemaError("choi", "hermiticity")
    elif kind == "conjugation":
        payload_to_matrix(payload, n, m)
    else:
        if not isinstance(payload, list) or not payload:
            raise SchemaError("payload", "expected a nonempty list of operators")
        for k, op in enumerate(payload):
            payload_to_matrix(op, m, n, path=f"payload[{k}]")


def parse_map_file(data) -> MapDocument:
    """Parse and validate map-document bytes (or text)."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8 text: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("document", "must be a JSON object")
    known = {"kind", "dim_in", "dim_out", "payload", "transposed", "meta"}
    for key in obj:
        if key not in known:
            raise SchemaError(key, "unknown field")
    kind = obj.get("kind")
    if kind not in _KINDS:
        raise SchemaError("kind", f"must be one of {', '.join(_KINDS)}")
    n = _require_dim(obj, "dim_in")
    m = _require_dim(obj, "dim_out")
    transposed = obj.get("transposed")
    if kind == "conjugation":
        if transposed is None:
            transposed = False
        if not isinstance(transposed, bool):
            raise SchemaError("transposed", "must be a boolean")
    elif transposed is not None:
        raise SchemaError("transposed", "only valid for conjugation documents")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict) or any(
        not isinstance(k, str) or not isinstance(v, str) for k, v in meta.items()
    ):
        raise SchemaError("meta", "must be an object with string values")
    if "payload" not in obj:
        raise SchemaError("payload", "missing")
    _validate_payload(kind, n, m, obj["payload"])
    return MapDocument(
        kind=kind,
        dim_in=n,
        dim_out=m,
        payload=obj["payload"],
        transposed=transposed if kind == "conjugation" else None,
        meta=meta,
    )


def _canonical_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def render_map_document(doc: MapDocument) -> bytes:
    """Canonical bytes; parse_map_file(render_map_document(doc)) == doc."""
    obj = {
        "kind": doc.kind,
        "dim_in": doc.dim_in,
        "dim_out": doc.dim_out,
        "payload": doc.payload,
        "meta": doc.meta,
    }
    if doc.transposed is not None:
        obj["transposed"] = doc.transposed
    return _canonical_bytes(obj)


def content_digest(doc: MapDocument) -> str:
    """SHA-256 of the canonical rendering."""
    return hashlib.sha256(render_map_document(doc)).hexdigest()


def to_map_operator(doc: MapDocument) -> MapOperator:
    """Realize the document as a MapOperator."""
    n, m = doc.dim_in, doc.dim_out
    if doc.kind == "choi":
        matrix = payload_to_matrix(doc.payload, n * m, n * m)
        try:
            return MapOperator(n, m, matrix)
        except ValueError as exc:
            raise SchemaError("choi", "hermiticity") from exc
    if doc.kind == "conjugation":
        return from_conjugation(payload_to_matrix(doc.payload, n, m), transposed=bool(doc.transposed))
    kraus = [payload_to_matrix(op, m, n, path=f"payload[{k}]") for k, op in enumerate(doc.payload)]
    return cp_map_from_kraus(kraus)


def certificate_to_record(cert: Certificate) -> dict:
    return {
        "claim": cert.claim,
        "verdict": cert.verdict,
        "measured_dim": cert.measured_dim,
        "required_dim": cert.required_dim,
        "irreducible_on_image": cert.irreducible_on_image,
        "conditional_note": cert.conditional_note,
    }


def sweep_report_to_record(report: SweepReport) -> dict:
    return {
        "n": report.n,
        "m": report.m,
        "rank_v": report.rank_v,
        "measured_strong_dim": report.measured_strong_dim,
        "formula_input_rule": report.formula_input_rule,
        "formula_output_rule": report.formula_output_rule,
        "strong_target": report.strong_target,
        "agrees_with": report.agrees_with,
        "seed": report.seed,
    }


def tolerances_to_record(tol: ToleranceConfig) -> dict:
    return {
        "rank_rel_tol": tol.rank_rel_tol,
        "residual_rel_tol": tol.residual_rel_tol,
        "convergence_tol": tol.convergence_tol,
        "max_iters": tol.max_iters,
    }


def zero_set_summary(zs: ZeroSet, weak_dim: int, strong_dim: int) -> dict:
    return {
        "pairs": len(zs.pairs),
        "weak_span_dim": weak_dim,
        "strong_span_dim": strong_dim,
        "saturated": zs.saturated,
    }


def render_certificate_document(doc: CertificateDocument) -> bytes:
    """Canonical bytes for a certificate document."""
    return _canonical_bytes(
        {
            "input_digest": doc.input_digest,
            "certificates": doc.certificates,
            "zero_set_summary": doc.zero_set_summary,
            "sweep": doc.sweep,
            "tool_version": doc.tool_version,
            "seed": doc.seed,
            "tolerances": doc.tolerances,
        }
    )


def parse_certificate_document(data) -> CertificateDocument:
    """Inverse of render_certificate_document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8 text: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("document", "must be a JSON object")
    required = {
        "input_digest",
        "certificates",
        "zero_set_summary",
        "sweep",
        "tool_version",
        "seed",
        "tolerances",
    }
    missing = required - obj.keys()
    if missing:
        raise SchemaError(sorted(missing)[0], "missing")
    return CertificateDocument(
        input_digest=obj["input_digest"],
        certificates=obj["certificates"],
        zero_set_summary=obj["zero_set_summary"],
        sweep=obj["sweep"],
        tool_version=obj["tool_version"],
        seed=obj["seed"],
        tolerances=obj["tolerances"],
    )
