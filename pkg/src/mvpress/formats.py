"""Binary storage formats for corpora and attention sidecars.

All multi-byte fields are little-endian. Embedding payloads are float32
row-major. Readers either return a fully validated object or raise; a bad
file never yields a partial corpus.

MVEC (token embedding corpus)
    magic "MVEC" | u32 version=1 | u32 dim | u64 doc_count
    per doc: u32 id_len | id utf-8 | u32 token_count | token_count*dim f32

MATT (attention sidecar)
    magic "MATT" | u32 version=1 | u64 doc_count
    per doc: u32 id_len | id utf-8 | u32 rows | u32 heads | u32 n
             | rows*heads*n f32   (row, head, position order)
"""

from __future__ import annotations

import hashlib
import io
import json
import struct
from pathlib import Path

import numpy as np

from .errors import CorruptionError, FormatError, ValidationError
from .model import AttentionSidecar, CompressionMeta, Corpus, DocumentRecord
from .validation import MAX_ID_BYTES

MVEC_MAGIC = b"MVEC"
MATT_MAGIC = b"MATT"
FORMAT_VERSION = 1


# low-level helpers -----------------------------------------------------------

def _read_exact(f, count: int, what: str) -> bytes:
    data = f.read(count)
    if len(data) != count:
        raise CorruptionError(
            f"truncated file: wanted {count} bytes for {what} at offset "
            f"{f.tell() - len(data)}, got {len(data)}"
        )
    return data


def _read_u32(f, what: str) -> int:
    return struct.unpack("<I", _read_exact(f, 4, what))[0]


def _read_u64(f, what: str) -> int:
    return struct.unpack("<Q", _read_exact(f, 8, what))[0]


def _read_id(f, what: str) -> str:
    id_len = _read_u32(f, f"{what} id length")
    if id_len == 0 or id_len > MAX_ID_BYTES:
        raise CorruptionError(f"impossible id length {id_len} at offset {f.tell() - 4}")
    raw = _read_exact(f, id_len, f"{what} id")
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptionError(f"id at offset {f.tell() - id_len} is not utf-8") from exc


def _read_f32_block(f, count: int, shape: tuple[int, ...], what: str) -> np.ndarray:
    raw = _read_exact(f, 4 * count, what)
    return np.frombuffer(raw, dtype="<f4").reshape(shape)


def _check_magic(f, magic: bytes, kind: str) -> None:
    got = f.read(4)
    if got != magic:
        raise FormatError(f"bad magic {got!r}, expected {magic!r} ({kind} file)")
    version = _read_u32(f, "version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported {kind} version {version}")


def _check_eof(f, kind: str) -> None:
    extra = f.read(1)
    if extra:
        raise CorruptionError(f"trailing data after last record in {kind} file")


def _write_id(out, doc_id: str) -> None:
    raw = doc_id.encode("utf-8")
    out.write(struct.pack("<I", len(raw)))
    out.write(raw)


# MVEC ------------------------------------------------------------------------

def mvec_bytes(corpus: Corpus) -> bytes:
    """Serialize a corpus to MVEC bytes. Deterministic for a given corpus."""
    out = io.BytesIO()
    out.write(MVEC_MAGIC)
    out.write(struct.pack("<II", FORMAT_VERSION, corpus.dim))
    out.write(struct.pack("<Q", len(corpus)))
    for doc in corpus:
        _write_id(out, doc.doc_id)
        out.write(struct.pack("<I", doc.token_count))
        out.write(np.ascontiguousarray(doc.embeddings, dtype="<f4").tobytes())
    return out.getvalue()


def write_mvec(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_bytes(mvec_bytes(corpus))


def read_mvec(path: str | Path) -> Corpus:
    with open(path, "rb") as f:
        _check_magic(f, MVEC_MAGIC, "MVEC")
        dim = _read_u32(f, "dim")
        if dim == 0:
            raise CorruptionError("declared dim is 0")
        doc_count = _read_u64(f, "doc count")
        docs = []
        for i in range(doc_count):
            doc_id = _read_id(f, f"doc {i}")
            n = _read_u32(f, f"doc {i} token count")
            emb = _read_f32_block(f, n * dim, (n, dim), f"doc {i} ({doc_id!r}) embeddings")
            if not np.all(np.isfinite(emb)):
                raise ValidationError(f"document {doc_id!r} has non-finite embeddings")
            docs.append(DocumentRecord(doc_id=doc_id, embeddings=emb))
        _check_eof(f, "MVEC")
    return Corpus(docs=tuple(docs), dim=dim)


def corpus_fingerprint(corpus: Corpus) -> str:
    """sha256 hex digest of the corpus's canonical MVEC serialization."""
    return hashlib.sha256(mvec_bytes(corpus)).hexdigest()


# MATT ------------------------------------------------------------------------

def matt_bytes(sidecar: AttentionSidecar, order: list[str] | None = None) -> bytes:
    """Serialize an attention sidecar. `order` fixes the doc order (default:
    insertion order of the mapping)."""
    ids = list(sidecar.weights) if order is None else list(order)
    out = io.BytesIO()
    out.write(MATT_MAGIC)
    out.write(struct.pack("<I", FORMAT_VERSION))
    out.write(struct.pack("<Q", len(ids)))
    for doc_id in ids:
        w = sidecar.for_doc(doc_id)
        rows, heads, n = w.shape
        _write_id(out, doc_id)
        out.write(struct.pack("<III", rows, heads, n))
        out.write(np.ascontiguousarray(w, dtype="<f4").tobytes())
    return out.getvalue()


def write_matt(sidecar: AttentionSidecar, path: str | Path, order: list[str] | None = None) -> None:
    Path(path).write_bytes(matt_bytes(sidecar, order=order))


def read_matt(path: str | Path) -> AttentionSidecar:
    with open(path, "rb") as f:
        _check_magic(f, MATT_MAGIC, "MATT")
        doc_count = _read_u64(f, "doc count")
        weights: dict[str, np.ndarray] = {}
        for i in range(doc_count):
            doc_id = _read_id(f, f"entry {i}")
            if doc_id in weights:
                raise ValidationError(f"duplicate attention entry for {doc_id!r}")
            rows = _read_u32(f, f"entry {i} rows")
            heads = _read_u32(f, f"entry {i} heads")
            n = _read_u32(f, f"entry {i} token count")
            if min(rows, heads, n) == 0:
                raise CorruptionError(
                    f"degenerate attention shape ({rows}, {heads}, {n}) for {doc_id!r}"
                )
            w = _read_f32_block(
                f, rows * heads * n, (rows, heads, n), f"entry {i} ({doc_id!r}) weights"
            )
            if not np.all(np.isfinite(w)):
                raise ValidationError(f"attention for {doc_id!r} has non-finite weights")
            if np.any(w < 0):
                raise ValidationError(f"attention for {doc_id!r} has negative weights")
            weights[doc_id] = w
        _check_eof(f, "MATT")
    return AttentionSidecar(weights=weights)


# compression metadata sidecar -------------------------------------------------

def meta_path_for(data_path: str | Path) -> Path:
    p = Path(data_path)
    return p.with_name(p.name + ".meta.json")


def write_meta(meta: CompressionMeta, path: str | Path) -> None:
    text = json.dumps(meta.to_json_dict(), indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def read_meta(path: str | Path) -> CompressionMeta:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"metadata file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise FormatError(f"metadata file {path} must hold a JSON object")
    return CompressionMeta.from_json_dict(payload)
