"""Vocabulary construction and sparse binary/TF document-term matrices."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus
from .errors import VocabularyError

BINARY = "binary"
TF = "tf"
MODES = (BINARY, TF)


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = tuple(self.terms)
        if list(terms) != sorted(set(terms)):
            raise VocabularyError("vocabulary terms must be unique and sorted")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "index", {t: i for i, t in enumerate(terms)})

    @property
    def size(self) -> int:
        return len(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def save(self, path: str | Path) -> None:
        Path(path).write_text("".join(t + "\n" for t in self.terms), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        text = Path(path).read_text(encoding="utf-8")
        return cls(tuple(line for line in text.split("\n") if line))


@dataclass(frozen=True)
class FeatureSubset:
    """Ordered column indices chosen by a selection step."""

    indices: tuple[int, ...]
    provenance: str = "manual"

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise VocabularyError("feature subset indices must be unique")
        if any(i < 0 for i in idx):
            raise VocabularyError("feature subset indices must be nonnegative")
        if self.provenance not in ("ig_filter", "forward_wrapper", "manual"):
            raise VocabularyError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)


class FeatureMatrix:
    """Immutable sparse document-term matrix.

    Rows are documents, columns vocabulary terms.  Storage is CSR with
    sorted column indices inside each row and no explicit zeros.
    """

    __slots__ = ("_csr", "mode", "row_labels")

    def __init__(self, csr: sp.spmatrix, mode: str = BINARY,
                 row_labels: Sequence[str | None] | None = None):
        if mode not in MODES:
            raise VocabularyError(f"mode must be one of {MODES}, got {mode!r}")
        m = sp.csr_matrix(csr, dtype=np.int64, copy=True)
        m.sum_duplicates()
        m.eliminate_zeros()
        m.sort_indices()
        if m.nnz and m.data.min() < 0:
            raise VocabularyError("feature values must be nonnegative")
        if mode == BINARY and m.nnz and np.any(m.data != 1):
            raise VocabularyError("binary matrix may only store the value 1")
        for arr in (m.data, m.indices, m.indptr):
            arr.setflags(write=False)
        if row_labels is not None:
            row_labels = tuple(row_labels)
            if len(row_labels) != m.shape[0]:
                raise VocabularyError("row_labels length must equal n_rows")
        self._csr = m
        self.mode = mode
        self.row_labels = row_labels

    @property
    def csr(self) -> sp.csr_matrix:
        return self._csr

    @property
    def n_rows(self) -> int:
        return self._csr.shape[0]

    @property
    def n_cols(self) -> int:
        return self._csr.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._csr.shape

    def entries(self) -> Iterator[tuple[int, int, int]]:
        m = self._csr
        for r in range(m.shape[0]):
            for k in range(m.indptr[r], m.indptr[r + 1]):
                yield r, int(m.indices[k]), int(m.data[k])

    def to_dense(self) -> np.ndarray:
        return self._csr.toarray().astype(np.float64)

    def binarize(self) -> "FeatureMatrix":
        m = self._csr.copy()
        m.data = np.ones_like(m.data)
        return FeatureMatrix(m, BINARY, self.row_labels)

    def take_rows(self, rows: Sequence[int]) -> "FeatureMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        labels = None if self.row_labels is None else [self.row_labels[i] for i in rows]
        return FeatureMatrix(self._csr[rows], self.mode, labels)

    def with_labels(self, labels: Sequence[str | None]) -> "FeatureMatrix":
        return FeatureMatrix(self._csr, self.mode, labels)

    def __eq__(self, other):
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        a, b = self._csr, other._csr
        return (self.mode == other.mode and a.shape == b.shape
                and self.row_labels == other.row_labels
                and np.array_equal(a.indptr, b.indptr)
                and np.array_equal(a.indices, b.indices)
                and np.array_equal(a.data, b.data))

    def __repr__(self):
        return f"FeatureMatrix({self.n_rows}x{self.n_cols}, mode={self.mode!r}, nnz={self._csr.nnz})"

    # text exchange format: "n_rows n_cols mode" then "row col value" lines
    def save(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8") as fh:
            fh.write(f"{self.n_rows} {self.n_cols} {self.mode}\n")
            for r, c, v in self.entries():
                fh.write(f"{r} {c} {v}\n")

    @classmethod
    def load(cls, path: str | Path) -> "FeatureMatrix":
        with Path(path).open(encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 3:
                raise VocabularyError(f"{path}: bad matrix header")
            n_rows, n_cols, mode = int(header[0]), int(header[1]), header[2]
            rows, cols, vals = [], [], []
            seen = set()
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                parts = line.split()
                if len(parts) != 3:
                    raise VocabularyError(f"{path}:{lineno}: expected 'row col value'")
                r, c, v = (int(p) for p in parts)
                if not (0 <= r < n_rows and 0 <= c < n_cols):
                    raise VocabularyError(f"{path}:{lineno}: index out of range")
                if (r, c) in seen:
                    raise VocabularyError(f"{path}:{lineno}: duplicate entry ({r}, {c})")
                seen.add((r, c))
                rows.append(r)
                cols.append(c)
                vals.append(v)
        csr = sp.csr_matrix((vals, (rows, cols)), shape=(n_rows, n_cols), dtype=np.int64)
        return cls(csr, mode)


def build_vocabulary(corpus: Corpus, min_df: int = 1) -> Vocabulary:
    """Terms whose document frequency is at least ``min_df``, sorted."""
    if min_df < 1:
        raise VocabularyError("min_df must be a positive integer")
    df: Counter[str] = Counter()
    for doc in corpus:
        df.update(set(doc.tokens))
    terms = sorted(t for t, c in df.items() if c >= min_df)
    if not terms:
        raise VocabularyError("vocabulary empty after min_df filtering")
    return Vocabulary(tuple(terms))


def vectorize(corpus: Corpus, vocab: Vocabulary, mode: str = BINARY) -> FeatureMatrix:
    """Presence (binary) or occurrence counts (tf) of each vocabulary term."""
    if mode not in MODES:
        raise VocabularyError(f"mode must be one of {MODES}, got {mode!r}")
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    index = vocab.index
    for doc in corpus:
        counts = Counter(index[t] for t in doc.tokens if t in index)
        for col in sorted(counts):
            indices.append(col)
            data.append(1 if mode == BINARY else counts[col])
        indptr.append(len(indices))
    csr = sp.csr_matrix(
        (np.asarray(data, dtype=np.int64), np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(corpus.n, vocab.size),
    )
    labels = corpus.labels
    return FeatureMatrix(csr, mode, None if all(l is None for l in labels) else labels)


def project(matrix: FeatureMatrix, subset: FeatureSubset | Sequence[int]) -> FeatureMatrix:
    """Keep only the subset's columns, in subset order."""
    idx = subset.indices if isinstance(subset, FeatureSubset) else tuple(int(i) for i in subset)
    bad = [i for i in idx if not 0 <= i < matrix.n_cols]
    if bad:
        raise VocabularyError(f"feature index out of range for {matrix.n_cols} columns: {bad}")
    cols = np.asarray(idx, dtype=np.int64)
    return FeatureMatrix(matrix.csr[:, cols], matrix.mode, matrix.row_labels)
