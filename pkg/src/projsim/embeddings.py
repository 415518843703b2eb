"""Word-embedding tables in the word2vec text format, and sentence tokenization.

File layout: an optional header line ``"<vocab_size> <dim>"``, then one line per
token: the token followed by ``dim`` decimal numbers, space separated, UTF-8.
Files ending in ``.gz``, ``.bz2`` or ``.xz`` are decompressed transparently.
"""

from __future__ import annotations

import bz2
import gzip
import logging
import lzma
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptySentenceGroup, EmptyTable, ParseError

log = logging.getLogger(__name__)

_OPENERS = {".gz": gzip.open, ".bz2": bz2.open, ".xz": lzma.open}
_TOKEN_RE = re.compile(r"[^\W_]+")


def _open_text(path: Path, mode: str):
    opener = _OPENERS.get(path.suffix.lower(), open)
    return opener(path, mode + "t", encoding="utf-8")


@dataclass(frozen=True)
class EmbeddingTable:
    vectors: np.ndarray
    index: dict[str, int]
    duplicates: int = 0

    def __post_init__(self):
        self.vectors.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def tokens(self) -> list[str]:
        return list(self.index)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def __getitem__(self, token: str) -> np.ndarray:
        return self.vectors[self.index[token]]

    @classmethod
    def from_dict(cls, entries: dict[str, list[float]]) -> "EmbeddingTable":
        if not entries:
            raise EmptyTable("embedding table has no entries")
        tokens = list(entries)
        vectors = np.array([entries[t] for t in tokens], dtype=np.float64)
        if vectors.ndim != 2 or not np.all(np.isfinite(vectors)):
            raise ValueError("entries must be finite vectors of equal dimension")
        if any(not t or any(c.isspace() for c in t) for t in tokens):
            raise ValueError("tokens must be nonempty and contain no whitespace")
        return cls(vectors=vectors, index={t: i for i, t in enumerate(tokens)})


def _is_header(fields: list[str]) -> bool:
    return len(fields) == 2 and all(f.isdigit() for f in fields)


def load_embeddings(path, limit: int | None = None) -> EmbeddingTable:
    """Read a word2vec-style text file.

    Keeps at most ``limit`` distinct tokens. When a token repeats, the first
    occurrence wins and the repeat is counted in ``duplicates``.
    """
    path = Path(path)
    if limit is not None and limit < 1:
        raise ValueError("limit must be positive")
    index: dict[str, int] = {}
    rows: list[np.ndarray] = []
    duplicates = 0
    dim: int | None = None
    with _open_text(path, "r") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.split()
            if not fields:
                continue
            if lineno == 1 and _is_header(fields):
                dim = int(fields[1])
                if dim < 1:
                    raise ParseError("header dimension must be positive", lineno, path)
                continue
            if dim is None:
                dim = len(fields) - 1
                if dim < 1:
                    raise ParseError("line has a token but no components", lineno, path)
            if len(fields) != dim + 1:
                raise ParseError(
                    f"expected token plus {dim} numbers, got {len(fields)} fields", lineno, path
                )
            token = fields[0]
            try:
                vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"unparseable number ({exc})", lineno, path) from None
            if not np.all(np.isfinite(vec)):
                raise ParseError("non-finite component", lineno, path)
            if token in index:
                duplicates += 1
                continue
            if limit is not None and len(index) >= limit:
                break
            index[token] = len(rows)
            rows.append(vec)
    if not rows:
        raise EmptyTable(f"{path}: no embedding entries")
    if duplicates:
        log.warning("%s: %d duplicate tokens ignored (first occurrence kept)", path, duplicates)
    return EmbeddingTable(vectors=np.vstack(rows), index=index, duplicates=duplicates)


def save_embeddings(table: EmbeddingTable, path) -> None:
    """Write ``table`` in the text format; ``repr`` floats make reloading bit-exact."""
    path = Path(path)
    with _open_text(path, "w") as fh:
        fh.write(f"{len(table)} {table.dim}\n")
        for token, i in table.index.items():
            fh.write(token + " " + " ".join(repr(float(x)) for x in table.vectors[i]) + "\n")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on anything that is not a letter or digit."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class SentenceVectors:
    group: np.ndarray
    matched_tokens: list[str] = field(default_factory=list)
    missing_tokens: list[str] = field(default_factory=list)


def sentence_to_group(tokens: list[str], table: EmbeddingTable, dedup: bool = True) -> SentenceVectors:
    """Stack the embeddings of ``tokens`` into a group, one row per matched token.

    Out-of-vocabulary tokens are listed in ``missing_tokens`` and contribute no row.
    With ``dedup`` a repeated token contributes only its first occurrence.
    """
    matched: list[str] = []
    missing: list[str] = []
    seen: set[str] = set()
    for tok in tokens:
        if tok not in table:
            missing.append(tok)
            continue
        if dedup and tok in seen:
            continue
        seen.add(tok)
        matched.append(tok)
    if not matched:
        raise EmptySentenceGroup(missing)
    group = np.vstack([table[t] for t in matched])
    return SentenceVectors(group=group, matched_tokens=matched, missing_tokens=missing)
