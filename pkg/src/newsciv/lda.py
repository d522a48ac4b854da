"""Latent Dirichlet allocation by collapsed Gibbs sampling over bags of
n-gram phrases, with deterministic top-term extraction.

The sampler keeps the usual count matrices (document x topic, term x topic,
topic totals) and resamples every token's topic once per sweep using
leave-one-out counts. One shared pseudorandom stream drives both the
initialization and the sweeps, consumed in document order and token order,
so a fixed seed reproduces the final state bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .textproc import Vocabulary, build_vocabulary


@dataclass(frozen=True)
class LdaConfig:
    n_topics: int = 5
    alpha: float = 0.1       # symmetric document-topic prior
    beta: float = 0.01       # symmetric topic-term prior
    iterations: int = 1000
    seed: int = 0
    n_min: int = 2           # n-gram range used when preparing documents
    n_max: int = 3

    def __post_init__(self) -> None:
        if self.n_topics < 1:
            raise ValueError(f"n_topics must be >= 1, got {self.n_topics}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be > 0")
        if self.n_min < 1 or self.n_min > self.n_max:
            raise ValueError(f"invalid n-gram range [{self.n_min}, {self.n_max}]")


@dataclass(frozen=True)
class TopicSummary:
    topic_id: int
    terms: tuple[tuple[str, float], ...]  # (phrase, probability), descending


class LdaModel:
    """Gibbs-sampler state: token assignments and the three count arrays.

    ``doc_topic[d, k]`` counts tokens of document d assigned to topic k,
    ``term_topic[w, k]`` counts assignments of term w to topic k, and
    ``topic_totals[k]`` is the column sum of ``term_topic``. The state is
    mutated by :meth:`sweep` and should be treated as read-only once fitted.
    """

    def __init__(
        self,
        documents: Sequence[Sequence[str]],
        config: LdaConfig,
    ) -> None:
        if len(documents) == 0:
            raise ValueError("cannot fit LDA on zero documents")
        self.config = config
        self.vocabulary: Vocabulary = build_vocabulary(documents, min_df=1)
        index = self.vocabulary.index
        self.doc_words: list[np.ndarray] = [
            np.array([index[t] for t in doc], dtype=np.int64) for doc in documents
        ]
        self.n_tokens = int(sum(len(w) for w in self.doc_words))
        if self.n_tokens == 0:
            raise ValueError("all documents are empty")

        k = config.n_topics
        v = len(self.vocabulary)
        self.doc_topic = np.zeros((len(documents), k), dtype=np.int64)
        self.term_topic = np.zeros((v, k), dtype=np.int64)
        self.topic_totals = np.zeros(k, dtype=np.int64)
        self.assignments: list[np.ndarray] = []
        self._rng = np.random.default_rng(config.seed)

        # Random initial assignment, consuming the stream token by token.
        for d, words in enumerate(self.doc_words):
            zs = self._rng.integers(0, k, size=len(words))
            self.assignments.append(zs)
            for w, z in zip(words, zs):
                self.doc_topic[d, z] += 1
                self.term_topic[w, z] += 1
                self.topic_totals[z] += 1

    @property
    def n_topics(self) -> int:
        return self.config.n_topics

    def sweep(self) -> None:
        """Resample every token's topic once, in document/token order."""
        self._run_sweeps(1)

    def _run_sweeps(self, n_sweeps: int) -> None:
        # The hot loop runs on plain Python lists: for the small topic
        # counts used here that is several times faster than per-token
        # numpy calls. The numpy arrays are rebuilt on exit.
        k = self.config.n_topics
        alpha = self.config.alpha
        beta = self.config.beta
        v_beta = beta * len(self.vocabulary)
        last = k - 1
        topic_range = range(k)

        doc_topic = [row.tolist() for row in self.doc_topic]
        term_topic = self.term_topic.tolist()
        totals = self.topic_totals.tolist()
        denom = [t + v_beta for t in totals]
        doc_words = [w.tolist() for w in self.doc_words]
        assigns = [z.tolist() for z in self.assignments]
        cum = [0.0] * k

        for _ in range(n_sweeps):
            # One batch draw per sweep keeps the stream in document/token
            # order while avoiding a generator call per token.
            uniforms = self._rng.random(self.n_tokens).tolist()
            u = 0
            for d, words in enumerate(doc_words):
                zs = assigns[d]
                dt = doc_topic[d]
                for i, w in enumerate(words):
                    z = zs[i]
                    tt = term_topic[w]
                    dt[z] -= 1
                    tt[z] -= 1
                    totals[z] -= 1
                    denom[z] -= 1.0

                    total = 0.0
                    for j in topic_range:
                        total += (dt[j] + alpha) * (tt[j] + beta) / denom[j]
                        cum[j] = total
                    target = uniforms[u] * total
                    u += 1
                    z = 0
                    while z < last and cum[z] <= target:
                        z += 1

                    zs[i] = z
                    dt[z] += 1
                    tt[z] += 1
                    totals[z] += 1
                    denom[z] += 1.0

        self.doc_topic = np.array(doc_topic, dtype=np.int64)
        self.term_topic = np.array(term_topic, dtype=np.int64)
        self.topic_totals = np.array(totals, dtype=np.int64)
        self.assignments = [np.array(z, dtype=np.int64) for z in assigns]

    def topic_distribution(self, topic: int) -> np.ndarray:
        """Smoothed term distribution of one topic (sums to 1)."""
        if not 0 <= topic < self.n_topics:
            raise ValueError(f"topic {topic} out of range [0, {self.n_topics})")
        beta = self.config.beta
        counts = self.term_topic[:, topic]
        return (counts + beta) / (self.topic_totals[topic] + beta * len(self.vocabulary))


def fit_lda(documents: Sequence[Sequence[str]], config: LdaConfig | None = None) -> LdaModel:
    """Run collapsed Gibbs sampling and return the final-state point estimate."""
    if config is None:
        config = LdaConfig()
    model = LdaModel(documents, config)
    model._run_sweeps(config.iterations)
    return model


def topic_terms(model: LdaModel, topic: int, t: int = 5) -> TopicSummary:
    """Top ``t`` terms of a topic by smoothed probability.

    Equal probabilities break ties lexicographically, so output is fully
    deterministic. Asking for more terms than the vocabulary holds returns
    all of them.
    """
    phi = model.topic_distribution(topic)
    terms = model.vocabulary.terms
    ranked = sorted(zip(phi, terms), key=lambda pair: (-pair[0], pair[1]))
    return TopicSummary(
        topic_id=topic,
        terms=tuple((term, float(p)) for p, term in ranked[:t]),
    )


def topics_by_size(model: LdaModel) -> list[int]:
    """Topic ids ordered by total assigned tokens, largest first."""
    totals = model.topic_totals
    return sorted(range(model.n_topics), key=lambda k: (-totals[k], k))


def topics_to_dict(model: LdaModel, summaries: Sequence[TopicSummary]) -> dict:
    """JSON-ready dump of a fitted model's configuration and top terms."""
    cfg = model.config
    return {
        "K": cfg.n_topics,
        "alpha": cfg.alpha,
        "beta": cfg.beta,
        "iterations": cfg.iterations,
        "seed": cfg.seed,
        "topics": [
            {"id": s.topic_id, "terms": [[term, p] for term, p in s.terms]}
            for s in summaries
        ],
    }
