"""TF-IDF vectorization of bag-of-n-grams documents into sparse vectors.

The weighting variant is fixed: raw term counts, smoothed inverse document
frequency ln((1 + N) / (1 + df)) + 1, and L2 normalization of the final
vector. The smoothing keeps idf >= 1 for every vocabulary term.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .textproc import (
    DEFAULT_STOPLIST,
    Vocabulary,
    build_vocabulary,
    ngrams,
    remove_stopwords,
    tokenize,
)

TFIDF_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class SparseVector:
    """A sparse feature vector: sorted indices with non-zero finite values."""

    dimension: int
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-D and the same length")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.dimension:
                raise ValueError("index out of range for vector dimension")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
        if not np.all(np.isfinite(val)) or np.any(val == 0.0):
            raise ValueError("values must be finite and non-zero")

    @classmethod
    def from_pairs(cls, dimension: int, pairs: Iterable[tuple[int, float]]) -> "SparseVector":
        pairs = sorted(pairs)
        idx = np.array([i for i, _ in pairs], dtype=np.int64)
        val = np.array([v for _, v in pairs], dtype=np.float64)
        return cls(dimension, idx, val)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dimension)
        dense[self.indices] = self.values
        return dense

    def dot(self, weights: np.ndarray) -> float:
        """Dot product against a dense weight vector of matching dimension."""
        if weights.shape != (self.dimension,):
            raise ValueError(
                f"weight dimension {weights.shape} does not match vector "
                f"dimension {self.dimension}"
            )
        return float(np.dot(weights[self.indices], self.values))

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True)
class TfidfConfig:
    """N-gram range, document-frequency cutoffs, and stoplist switch."""

    n_min: int = 1
    n_max: int = 2
    min_df: int = 1
    max_df_ratio: float = 1.0
    use_stoplist: bool = False

    def __post_init__(self) -> None:
        if self.n_min < 1 or self.n_min > self.n_max:
            raise ValueError(f"invalid n-gram range [{self.n_min}, {self.n_max}]")
        if self.min_df < 1:
            raise ValueError(f"min_df must be >= 1, got {self.min_df}")
        if not 0.0 < self.max_df_ratio <= 1.0:
            raise ValueError(f"max_df_ratio must be in (0, 1], got {self.max_df_ratio}")

    def document_terms(self, text: str) -> list[str]:
        """Turn raw text into the n-gram terms this config counts."""
        tokens = tokenize(text)
        if self.use_stoplist:
            tokens = remove_stopwords(tokens, DEFAULT_STOPLIST)
        return ngrams(tokens, self.n_min, self.n_max)


@dataclass(frozen=True, eq=False)
class TfidfModel:
    """A fitted vectorizer: vocabulary plus per-term idf weights."""

    vocabulary: Vocabulary
    idf: np.ndarray
    config: TfidfConfig

    def __post_init__(self) -> None:
        if len(self.idf) != len(self.vocabulary):
            raise ValueError("idf length must equal vocabulary size")

    @property
    def dimension(self) -> int:
        return len(self.vocabulary)

    def transform(self, text: str) -> SparseVector:
        """Vectorize ``text``: raw count x idf per term, then L2-normalize.

        Out-of-vocabulary terms are ignored; a document with no known terms
        maps to the zero vector (full dimension, no entries).
        """
        index = self.vocabulary.index
        counts: dict[int, int] = {}
        for term in self.config.document_terms(text):
            i = index.get(term)
            if i is not None:
                counts[i] = counts.get(i, 0) + 1
        if not counts:
            return SparseVector(self.dimension, np.empty(0, np.int64), np.empty(0))
        idx = np.array(sorted(counts), dtype=np.int64)
        val = np.array([counts[i] for i in idx], dtype=np.float64) * self.idf[idx]
        val /= np.linalg.norm(val)
        return SparseVector(self.dimension, idx, val)


def fit_tfidf(documents: Sequence[str], config: TfidfConfig | None = None) -> TfidfModel:
    """Fit a TF-IDF model on raw document texts.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1 over the N input documents.
    """
    if config is None:
        config = TfidfConfig()
    if len(documents) == 0:
        raise ValueError("cannot fit TF-IDF on an empty corpus")
    term_docs = [config.document_terms(d) for d in documents]
    vocab = build_vocabulary(term_docs, config.min_df, config.max_df_ratio)
    n = vocab.n_docs
    idf = np.array(
        [math.log((1 + n) / (1 + vocab.doc_freq[t])) + 1.0 for t in vocab.terms]
    )
    return TfidfModel(vocabulary=vocab, idf=idf, config=config)


def save_tfidf(model: TfidfModel, path: str | Path) -> None:
    """Write a fitted model as versioned JSON."""
    terms = model.vocabulary.terms
    payload = {
        "format_version": TFIDF_FORMAT_VERSION,
        "config": {
            "n_min": model.config.n_min,
            "n_max": model.config.n_max,
            "min_df": model.config.min_df,
            "max_df_ratio": model.config.max_df_ratio,
            "use_stoplist": model.config.use_stoplist,
        },
        "vocabulary": terms,
        "idf": [float(x) for x in model.idf],
        "doc_freq": [model.vocabulary.doc_freq[t] for t in terms],
        "n_docs": model.vocabulary.n_docs,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_tfidf(path: str | Path) -> TfidfModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    version = payload.get("format_version")
    if version != TFIDF_FORMAT_VERSION:
        raise ValueError(f"unsupported TF-IDF model format version: {version!r}")
    terms = payload["vocabulary"]
    vocab = Vocabulary(
        index={t: i for i, t in enumerate(terms)},
        doc_freq=dict(zip(terms, payload["doc_freq"])),
        n_docs=payload["n_docs"],
    )
    return TfidfModel(
        vocabulary=vocab,
        idf=np.array(payload["idf"], dtype=np.float64),
        config=TfidfConfig(**payload["config"]),
    )
