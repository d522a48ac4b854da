"""Data model and ingestion for news articles, reader comments, and
annotated training comments.

All corpora are JSON-lines files (one object per line, UTF-8). Loaders are
strict: malformed lines, missing fields, out-of-range ratings, and
duplicate ids raise :class:`CorpusError` naming the offending line or id.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TypeVar

from .textproc import tokenize

T = TypeVar("T")


class CorpusError(ValueError):
    """Raised for malformed or inconsistent corpus files."""


@dataclass(frozen=True)
class Article:
    id: str
    source: str
    title: str
    body: str
    tags: frozenset[str] = frozenset()
    date: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("article id must be non-empty")
        if not self.body:
            raise ValueError(f"article {self.id!r} has an empty body")
        object.__setattr__(self, "tags", frozenset(self.tags))


@dataclass(frozen=True)
class Comment:
    id: str
    article_id: str
    text: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("comment id must be non-empty")
        if not self.text:
            raise ValueError(f"comment {self.id!r} has empty text")


@dataclass(frozen=True)
class AnnotatedComment:
    """A training comment with one rating/flag per annotator.

    Toxicity and aggression use a 1..5 scale with 3 neutral; the attack
    judgement is a per-annotator boolean.
    """

    id: str
    text: str
    toxicity_ratings: tuple[int, ...]
    aggression_ratings: tuple[int, ...]
    attack_flags: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "toxicity_ratings", tuple(self.toxicity_ratings))
        object.__setattr__(self, "aggression_ratings", tuple(self.aggression_ratings))
        object.__setattr__(self, "attack_flags", tuple(self.attack_flags))
        if not self.id:
            raise ValueError("annotated comment id must be non-empty")
        for name, ratings in (
            ("toxicity", self.toxicity_ratings),
            ("aggression", self.aggression_ratings),
        ):
            if len(ratings) == 0:
                raise ValueError(f"comment {self.id!r} has no {name} ratings")
            for r in ratings:
                if not 1 <= r <= 5:
                    raise ValueError(
                        f"comment {self.id!r}: {name} rating {r} outside [1, 5]"
                    )
        if len(self.attack_flags) == 0:
            raise ValueError(f"comment {self.id!r} has no attack annotations")


@dataclass(frozen=True)
class Corpus:
    """Articles and comments joined by article id.

    The index maps each article id to the ids of its comments; comments
    whose article is not loaded are kept but not indexed.
    """

    articles: tuple[Article, ...]
    comments: tuple[Comment, ...]
    index: dict[str, tuple[str, ...]]

    @classmethod
    def build(cls, articles: Iterable[Article], comments: Iterable[Comment]) -> "Corpus":
        articles = tuple(articles)
        comments = tuple(comments)
        known = {a.id for a in articles}
        index: dict[str, list[str]] = {a.id: [] for a in articles}
        for c in comments:
            if c.article_id in known:
                index[c.article_id].append(c.id)
        return cls(
            articles=articles,
            comments=comments,
            index={k: tuple(v) for k, v in index.items()},
        )

    def comments_for(self, article_id: str) -> list[Comment]:
        ids = set(self.index.get(article_id, ()))
        return [c for c in self.comments if c.id in ids]


def _read_jsonl(path: str | Path) -> Iterable[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise CorpusError(f"line {lineno}: expected a JSON object")
            yield lineno, obj


def _require(obj: dict, fields: Sequence[str], lineno: int) -> None:
    for name in fields:
        if name not in obj:
            raise CorpusError(f"line {lineno}: missing field {name}")


def load_articles(path: str | Path) -> list[Article]:
    """Load an articles.jsonl file, preserving file order."""
    articles: list[Article] = []
    seen: set[str] = set()
    for lineno, obj in _read_jsonl(path):
        _require(obj, ("id", "source", "title", "body", "tags", "date"), lineno)
        try:
            article = Article(
                id=str(obj["id"]),
                source=str(obj["source"]),
                title=str(obj["title"]),
                body=str(obj["body"]),
                tags=frozenset(str(t) for t in obj["tags"]),
                date=str(obj["date"]),
            )
        except (TypeError, ValueError) as exc:
            raise CorpusError(f"line {lineno}: {exc}") from exc
        if article.id in seen:
            raise CorpusError(f"duplicate article id {article.id!r}")
        seen.add(article.id)
        articles.append(article)
    return articles


def load_comments(path: str | Path, min_words: int = 0) -> list[Comment]:
    """Load a comments.jsonl file, preserving file order.

    ``min_words`` optionally drops comments with fewer tokens (off by
    default; every loaded comment counts toward article weights).
    """
    comments: list[Comment] = []
    seen: set[str] = set()
    for lineno, obj in _read_jsonl(path):
        _require(obj, ("id", "article_id", "text"), lineno)
        try:
            comment = Comment(
                id=str(obj["id"]), article_id=str(obj["article_id"]), text=str(obj["text"])
            )
        except ValueError as exc:
            raise CorpusError(f"line {lineno}: {exc}") from exc
        if comment.id in seen:
            raise CorpusError(f"duplicate comment id {comment.id!r}")
        seen.add(comment.id)
        if min_words <= 0 or len(tokenize(comment.text)) >= min_words:
            comments.append(comment)
    return comments


def _as_rating_list(value, lineno: int, name: str) -> list[int]:
    items = value if isinstance(value, list) else [value]
    ratings = []
    for r in items:
        if not isinstance(r, int) or isinstance(r, bool):
            raise CorpusError(f"line {lineno}: {name} rating {r!r} is not an integer")
        if not 1 <= r <= 5:
            raise CorpusError(f"line {lineno}: {name} rating {r} outside [1, 5]")
        ratings.append(r)
    return ratings


def _as_flag_list(value, lineno: int) -> list[bool]:
    items = value if isinstance(value, list) else [value]
    flags = []
    for f in items:
        if isinstance(f, bool):
            flags.append(f)
        elif f in (0, 1):
            flags.append(bool(f))
        else:
            raise CorpusError(f"line {lineno}: attack flag {f!r} is not a boolean")
    return flags


def load_annotated(path: str | Path) -> list[AnnotatedComment]:
    """Load annotated comments, aggregating per-annotator rows by id.

    Two layouts are accepted, and may be mixed within a .jsonl file:
    one line per comment with rating arrays ({"toxicity": [3, 4], ...}),
    or one line per annotator with scalars ({"toxicity": 3, ...}).
    A .tsv file with header columns id/text/toxicity/aggression/attack is
    read as per-annotator rows.
    """
    path = Path(path)
    grouped: dict[str, dict] = {}

    def add_row(lineno: int, cid: str, text: str, tox, agg, att) -> None:
        entry = grouped.setdefault(
            cid, {"text": text, "toxicity": [], "aggression": [], "attack": []}
        )
        entry["toxicity"].extend(_as_rating_list(tox, lineno, "toxicity"))
        entry["aggression"].extend(_as_rating_list(agg, lineno, "aggression"))
        entry["attack"].extend(_as_flag_list(att, lineno))

    if path.suffix.lower() == ".tsv":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n").split("\t")
            cols = {name: i for i, name in enumerate(header)}
            for name in ("id", "text", "toxicity", "aggression", "attack"):
                if name not in cols:
                    raise CorpusError(f"line 1: missing field {name}")
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                parts = line.rstrip("\n").split("\t")
                if len(parts) < len(header):
                    raise CorpusError(f"line {lineno}: expected {len(header)} columns")
                try:
                    tox = int(parts[cols["toxicity"]])
                    agg = int(parts[cols["aggression"]])
                except ValueError as exc:
                    raise CorpusError(f"line {lineno}: non-integer rating") from exc
                att_raw = parts[cols["attack"]].strip().lower()
                if att_raw not in ("0", "1", "true", "false"):
                    raise CorpusError(f"line {lineno}: attack flag {att_raw!r} is not a boolean")
                add_row(
                    lineno,
                    parts[cols["id"]],
                    parts[cols["text"]],
                    tox,
                    agg,
                    att_raw in ("1", "true"),
                )
    else:
        for lineno, obj in _read_jsonl(path):
            _require(obj, ("id", "text", "toxicity", "aggression", "attack"), lineno)
            add_row(
                lineno, str(obj["id"]), str(obj["text"]), obj["toxicity"],
                obj["aggression"], obj["attack"],
            )

    out = []
    for cid, entry in grouped.items():
        if not (entry["toxicity"] and entry["aggression"] and entry["attack"]):
            raise CorpusError(f"comment {cid!r} has zero annotators for some aspect")
        try:
            out.append(
                AnnotatedComment(
                    id=cid,
                    text=entry["text"],
                    toxicity_ratings=tuple(entry["toxicity"]),
                    aggression_ratings=tuple(entry["aggression"]),
                    attack_flags=tuple(entry["attack"]),
                )
            )
        except ValueError as exc:
            raise CorpusError(str(exc)) from exc
    return out


def save_articles(articles: Iterable[Article], path: str | Path) -> None:
    """Write articles.jsonl; tags are serialized sorted for reproducibility."""
    with open(path, "w", encoding="utf-8") as fh:
        for a in articles:
            fh.write(
                json.dumps(
                    {
                        "id": a.id,
                        "source": a.source,
                        "title": a.title,
                        "body": a.body,
                        "tags": sorted(a.tags),
                        "date": a.date,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def save_comments(comments: Iterable[Comment], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in comments:
            fh.write(
                json.dumps(
                    {"id": c.id, "article_id": c.article_id, "text": c.text},
                    ensure_ascii=False,
                )
                + "\n"
            )


def save_annotated(annotated: Iterable[AnnotatedComment], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ac in annotated:
            fh.write(
                json.dumps(
                    {
                        "id": ac.id,
                        "text": ac.text,
                        "toxicity": list(ac.toxicity_ratings),
                        "aggression": list(ac.aggression_ratings),
                        "attack": list(ac.attack_flags),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def filter_by_keywords(articles: Iterable[Article], keywords: Iterable[str]) -> list[Article]:
    """Articles whose title or body contains at least one keyword.

    Matching is case-insensitive on whole tokens, so a keyword "election"
    does not match "electioneering".
    """
    keyset = {k.lower() for k in keywords}
    if not keyset:
        raise ValueError("keyword set must be non-empty")
    kept = []
    for a in articles:
        tokens = set(tokenize(a.title)) | set(tokenize(a.body))
        if tokens & keyset:
            kept.append(a)
    return kept


def filter_by_tag(articles: Iterable[Article], tag: str) -> list[Article]:
    """Articles carrying ``tag`` (case-insensitive) in their tag set."""
    want = tag.lower()
    return [a for a in articles if want in {t.lower() for t in a.tags}]


def train_test_split(
    items: Sequence[T],
    test_fraction: float,
    seed: int,
    labels: Sequence[bool] | None = None,
) -> tuple[list[T], list[T]]:
    """Deterministic seeded split; stratified by class when labels are given.

    Each side preserves the original item order. With labels, every class
    contributes round(test_fraction * class size) items to the test set,
    which keeps each class's share within one item of the target fraction.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if len(items) < 2:
        raise ValueError("need at least 2 items to split")
    if labels is not None and len(labels) != len(items):
        raise ValueError(f"got {len(items)} items but {len(labels)} labels")

    rng = random.Random(seed)
    if labels is None:
        groups = [list(range(len(items)))]
    else:
        pos = [i for i, lab in enumerate(labels) if lab]
        neg = [i for i, lab in enumerate(labels) if not lab]
        groups = [g for g in (neg, pos) if g]

    test_idx: set[int] = set()
    for group in groups:
        rng.shuffle(group)
        test_idx.update(group[: round(test_fraction * len(group))])

    train = [items[i] for i in range(len(items)) if i not in test_idx]
    test = [items[i] for i in sorted(test_idx)]
    return train, test


def sample_articles(articles: Sequence[Article], n: int, seed: int) -> list[Article]:
    """Seeded uniform sample without replacement, in original order."""
    if n < 0 or n > len(articles):
        raise ValueError(f"cannot sample {n} of {len(articles)} articles")
    idx = sorted(random.Random(seed).sample(range(len(articles)), n))
    return [articles[i] for i in idx]
