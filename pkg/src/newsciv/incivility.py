"""The core pipeline: aspect-label binarization, per-comment incivility
scoring, per-article incivility weights, median-threshold labeling, and the
classifier that predicts provocation from article text alone.

A comment's incivility score is the maximum of its toxicity, aggression,
and personal-attack probabilities. An article's incivility weight is the
mean score of its comments. Per source, articles whose weight strictly
exceeds the source's median weight are labeled as provoking, which makes
the two classes balanced by construction whenever weights are distinct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .corpus import AnnotatedComment, Article, Comment, train_test_split
from .features import TfidfConfig, TfidfModel, fit_tfidf
from .linmodel import (
    EvalReport,
    LogisticModel,
    TrainConfig,
    evaluate,
    scores_for,
    train_logistic,
)

ASPECTS = ("toxicity", "aggression", "attack")

# Feature settings for the comment-aspect classifiers: word unigrams and
# bigrams with a light document-frequency floor.
ASPECT_TFIDF_CONFIG = TfidfConfig(n_min=1, n_max=2, min_df=3, max_df_ratio=1.0)

# The article classifier uses bigrams of the article body only.
ARTICLE_TFIDF_CONFIG = TfidfConfig(n_min=2, n_max=2, min_df=1, max_df_ratio=1.0)


@dataclass(frozen=True)
class AspectClassifiers:
    """The three aspect models sharing one fitted vectorizer."""

    tfidf: TfidfModel
    toxicity: LogisticModel
    aggression: LogisticModel
    attack: LogisticModel

    def __post_init__(self) -> None:
        for name in ASPECTS:
            model: LogisticModel = getattr(self, name)
            if model.dimension != self.tfidf.dimension:
                raise ValueError(
                    f"{name} model dimension {model.dimension} does not match "
                    f"vectorizer dimension {self.tfidf.dimension}"
                )


@dataclass(frozen=True)
class IncivilityScore:
    """Per-comment score: the three aspect probabilities and their max."""

    toxicity: float
    aggression: float
    attack: float
    value: float

    @classmethod
    def from_components(cls, toxicity: float, aggression: float, attack: float) -> "IncivilityScore":
        return cls(
            toxicity=toxicity,
            aggression=aggression,
            attack=attack,
            value=max(toxicity, aggression, attack),
        )


@dataclass(frozen=True)
class ArticleIncivility:
    """Mean incivility of one article's comments, with the optional
    above-median label."""

    article_id: str
    weight: float
    n_comments: int
    label: bool | None = None


@dataclass(frozen=True)
class SourceThreshold:
    """Per-source labeling threshold: the median article weight."""

    source: str
    median_weight: float
    n_articles: int


@dataclass(frozen=True)
class ProvokingClassifier:
    """Article-text pipeline: bigram TF-IDF plus a logistic model."""

    tfidf: TfidfModel
    model: LogisticModel

    def __post_init__(self) -> None:
        if self.model.dimension != self.tfidf.dimension:
            raise ValueError("model dimension does not match vectorizer dimension")


def binarize_aspect(
    ac: AnnotatedComment, aspect: str, rule_threshold: float = 0.5
) -> bool:
    """Collapse per-annotator judgements to one binary aspect label.

    For the 1..5 scales (3 neutral) the positive class is "below neutral":
    the fraction of annotators rating < 3 must strictly exceed
    ``rule_threshold``. For the attack flags the fraction of True flags
    must strictly exceed it.
    """
    if aspect == "toxicity":
        ratings = ac.toxicity_ratings
    elif aspect == "aggression":
        ratings = ac.aggression_ratings
    elif aspect == "attack":
        flags = ac.attack_flags
        if not flags:
            raise ValueError(f"comment {ac.id!r} has no attack annotations")
        return sum(flags) / len(flags) > rule_threshold
    else:
        raise ValueError(f"unknown aspect {aspect!r}")
    if not ratings:
        raise ValueError(f"comment {ac.id!r} has no {aspect} ratings")
    return sum(r < 3 for r in ratings) / len(ratings) > rule_threshold


def train_aspect_classifiers(
    annotated: Sequence[AnnotatedComment],
    tfidf_config: TfidfConfig = ASPECT_TFIDF_CONFIG,
    train_config: TrainConfig | None = None,
    split_seed: int = 0,
    test_fraction: float = 0.2,
    rule_threshold: float = 0.5,
) -> tuple[AspectClassifiers, dict[str, EvalReport]]:
    """Fit the three aspect classifiers and report held-out metrics.

    One TF-IDF model is fitted on the training texts and shared by all
    three logistic models. Any aspect that collapses to a single class on
    either side of the split raises, naming the aspect.
    """
    train, test = train_test_split(list(annotated), test_fraction, split_seed)
    tfidf = fit_tfidf([ac.text for ac in train], tfidf_config)
    x_train = [tfidf.transform(ac.text) for ac in train]
    x_test = [tfidf.transform(ac.text) for ac in test]

    models: dict[str, LogisticModel] = {}
    reports: dict[str, EvalReport] = {}
    for aspect in ASPECTS:
        y_train = [binarize_aspect(ac, aspect, rule_threshold) for ac in train]
        y_test = [binarize_aspect(ac, aspect, rule_threshold) for ac in test]
        for side, ys in (("training", y_train), ("test", y_test)):
            if len(set(ys)) < 2:
                raise ValueError(
                    f"aspect {aspect!r} has a single class in the {side} split"
                )
        models[aspect] = train_logistic(x_train, y_train, train_config)
        reports[aspect] = evaluate(models[aspect], x_test, y_test)

    classifiers = AspectClassifiers(tfidf=tfidf, **models)
    return classifiers, reports


def score_comment(classifiers: AspectClassifiers, text: str) -> IncivilityScore:
    """Score one comment; the incivility value is the max aspect score."""
    x = classifiers.tfidf.transform(text)
    return IncivilityScore.from_components(
        toxicity=classifiers.toxicity.predict_proba(x),
        aggression=classifiers.aggression.predict_proba(x),
        attack=classifiers.attack.predict_proba(x),
    )


def score_comments(
    classifiers: AspectClassifiers, texts: Sequence[str]
) -> list[IncivilityScore]:
    """Batch version of :func:`score_comment` (one matrix pass per aspect)."""
    if not texts:
        return []
    x = [classifiers.tfidf.transform(t) for t in texts]
    per_aspect = {
        aspect: scores_for(getattr(classifiers, aspect), x) for aspect in ASPECTS
    }
    return [
        IncivilityScore.from_components(
            toxicity=float(per_aspect["toxicity"][i]),
            aggression=float(per_aspect["aggression"][i]),
            attack=float(per_aspect["attack"][i]),
        )
        for i in range(len(texts))
    ]


def mean_score(values: Sequence[float]) -> float:
    """Article-weight mean: fsum then clamp into [min, max] of the inputs,
    so the exact range bound survives floating-point rounding."""
    if len(values) == 0:
        raise ValueError("mean of zero scores is undefined")
    mean = math.fsum(values) / len(values)
    return min(max(mean, min(values)), max(values))


def article_weight(
    classifiers: AspectClassifiers, comments: Sequence[Comment]
) -> ArticleIncivility:
    """Mean incivility score of one article's comments.

    Undefined for zero comments; callers should drop comment-less articles
    before computing source medians.
    """
    if len(comments) == 0:
        raise ValueError("article weight is undefined for zero comments")
    ids = {c.article_id for c in comments}
    if len(ids) > 1:
        raise ValueError(f"comments span multiple articles: {sorted(ids)}")
    scores = [score_comment(classifiers, c.text).value for c in comments]
    return ArticleIncivility(
        article_id=next(iter(ids)), weight=mean_score(scores), n_comments=len(comments)
    )


def source_median(
    weights: Sequence[ArticleIncivility], source: str
) -> SourceThreshold:
    """Median incivility weight of one source's articles.

    Even counts take the mean of the two middle order statistics.
    """
    if len(weights) == 0:
        raise ValueError(f"no article weights for source {source!r}")
    values = sorted(w.weight for w in weights)
    mid = len(values) // 2
    if len(values) % 2:
        median = values[mid]
    else:
        median = (values[mid - 1] + values[mid]) / 2.0
    return SourceThreshold(source=source, median_weight=median, n_articles=len(values))


def label_articles(
    weights: Sequence[ArticleIncivility],
    threshold: SourceThreshold,
    source: str | None = None,
) -> list[ArticleIncivility]:
    """Attach the provoking label: weight strictly above the source median.

    Passing ``source`` asserts that the threshold was computed from the
    same source as the weights being labeled.
    """
    if source is not None and source != threshold.source:
        raise ValueError(
            f"threshold was computed for source {threshold.source!r}, "
            f"not {source!r}"
        )
    return [replace(w, label=w.weight > threshold.median_weight) for w in weights]


def train_provoking_classifier(
    articles: Sequence[Article],
    labels: Sequence[bool],
    tfidf_config: TfidfConfig = ARTICLE_TFIDF_CONFIG,
    train_config: TrainConfig | None = None,
    split_seed: int = 0,
    test_fraction: float = 0.2,
) -> tuple[ProvokingClassifier, EvalReport]:
    """Train the provoking-article classifier on article bodies only.

    The split is stratified on the labels; features are fitted on the
    training bodies and never see comment text.
    """
    if len(articles) != len(labels):
        raise ValueError(f"got {len(articles)} articles but {len(labels)} labels")
    if len(set(labels)) < 2:
        raise ValueError("provoking labels contain a single class")
    pairs = list(zip(articles, labels))
    train, test = train_test_split(pairs, test_fraction, split_seed, labels=labels)
    for side, part in (("training", train), ("test", test)):
        if len({lab for _, lab in part}) < 2:
            raise ValueError(f"provoking labels have a single class in the {side} split")

    tfidf = fit_tfidf([a.body for a, _ in train], tfidf_config)
    model = train_logistic(
        [tfidf.transform(a.body) for a, _ in train], [lab for _, lab in train], train_config
    )
    report = evaluate(
        model, [tfidf.transform(a.body) for a, _ in test], [lab for _, lab in test]
    )
    return ProvokingClassifier(tfidf=tfidf, model=model), report


def predict_provoking(
    pipeline: ProvokingClassifier, body: str, threshold: float = 0.5
) -> tuple[float, bool]:
    """Probability and strict-threshold label for one article body."""
    proba = pipeline.model.predict_proba(pipeline.tfidf.transform(body))
    return proba, proba > threshold


def weights_by_source(
    articles: Iterable[Article],
    weights: Iterable[ArticleIncivility],
) -> dict[str, list[ArticleIncivility]]:
    """Group article weights by their article's source."""
    source_of: Mapping[str, str] = {a.id: a.source for a in articles}
    grouped: dict[str, list[ArticleIncivility]] = {}
    for w in weights:
        if w.article_id not in source_of:
            raise ValueError(f"weight references unknown article {w.article_id!r}")
        grouped.setdefault(source_of[w.article_id], []).append(w)
    return grouped
