from __future__ import annotations

import json
import random

import pytest

from newsciv.corpus import Article, Comment
from newsciv.lda import LdaConfig
from newsciv.subtext import (
    extract_topic_phrases,
    mine_subtext,
    phrase_documents,
    report_to_dict,
    report_to_markdown,
    save_report,
)

FAST = LdaConfig(n_topics=3, iterations=40, seed=0, n_min=2, n_max=2)


def random_texts(rng: random.Random, n: int, vocab, length=12) -> list[str]:
    return [" ".join(rng.choices(vocab, k=length)) for _ in range(n)]


VOCAB = [f"term{i}" for i in range(10)]


class TestPhraseDocuments:
    def test_stopwords_removed_before_ngram_formation(self):
        docs = phrase_documents(["build the wall now"], LdaConfig(n_min=2, n_max=2))
        assert docs == [["build wall", "wall now"]]

    def test_ngram_range_follows_config(self):
        docs = phrase_documents(["alpha beta gamma"], LdaConfig(n_min=2, n_max=3))
        assert docs == [["alpha beta", "beta gamma", "alpha beta gamma"]]


class TestExtractTopicPhrases:
    def test_excluded_phrases_never_in_output(self):
        rng = random.Random(0)
        texts = random_texts(rng, 30, VOCAB)
        baseline, _ = extract_topic_phrases(texts, FAST, min_phrase_df=2)
        excluded = set(list(baseline)[:3])
        for seed in range(3):
            cfg = LdaConfig(n_topics=3, iterations=40, seed=seed, n_min=2, n_max=2)
            phrases, _ = extract_topic_phrases(
                texts, cfg, exclude=excluded, min_phrase_df=2
            )
            assert not (phrases & excluded)

    def test_single_topic_single_term(self):
        rng = random.Random(1)
        texts = random_texts(rng, 10, VOCAB)
        cfg = LdaConfig(n_topics=1, iterations=10, seed=0, n_min=2, n_max=2)
        phrases, summaries = extract_topic_phrases(
            texts, cfg, min_phrase_df=1, top_topics=1, top_terms=1
        )
        assert len(phrases) == 1
        assert len(summaries) == 1

    def test_phrase_set_bounded_by_topics_times_terms(self):
        rng = random.Random(2)
        texts = random_texts(rng, 40, VOCAB)
        phrases, summaries = extract_topic_phrases(
            texts, FAST, min_phrase_df=2, top_topics=3, top_terms=4
        )
        assert len(phrases) <= 12
        assert len(summaries) <= 3

    def test_exclusion_emptying_corpus_errors(self):
        texts = ["alpha beta", "alpha beta"]
        cfg = LdaConfig(n_topics=1, iterations=5, seed=0, n_min=2, n_max=2)
        with pytest.raises(ValueError, match="exclusion"):
            extract_topic_phrases(texts, cfg, exclude={"alpha beta"}, min_phrase_df=1)

    def test_pruning_emptying_corpus_errors(self):
        texts = ["alpha beta", "gamma delta"]
        cfg = LdaConfig(n_topics=1, iterations=5, seed=0, n_min=2, n_max=2)
        with pytest.raises(ValueError, match="min_df"):
            extract_topic_phrases(texts, cfg, min_phrase_df=5)

    def test_exclusions_are_normalized_before_matching(self):
        texts = ["alpha beta"] * 6 + ["gamma delta"] * 6
        cfg = LdaConfig(n_topics=1, iterations=5, seed=0, n_min=2, n_max=2)
        phrases, _ = extract_topic_phrases(
            texts, cfg, exclude={"  Alpha   BETA!"}, min_phrase_df=1
        )
        assert "alpha beta" not in phrases


def build_corpus(rng: random.Random, planted: str | None = None):
    """Articles and comments over a shared vocabulary; comments optionally
    carry a planted phrase that never occurs in articles."""
    articles = [
        Article(
            id=f"a{i}",
            source="daily",
            title="t",
            body=" ".join(rng.choices(VOCAB, k=20)),
            tags=frozenset({"theme"}),
        )
        for i in range(25)
    ]
    comments = []
    cid = 0
    for a in articles:
        for _ in range(6):
            words = rng.choices(a.body.split(), k=4) + rng.choices(VOCAB, k=4)
            rng.shuffle(words)
            if planted and rng.random() < 0.5:
                pos = rng.randint(0, len(words))
                words[pos:pos] = planted.split()
            comments.append(Comment(id=f"c{cid}", article_id=a.id, text=" ".join(words)))
            cid += 1
    return articles, comments


class TestMineSubtext:
    def test_planted_comment_phrase_recovered_and_disjoint(self):
        rng = random.Random(7)
        articles, comments = build_corpus(rng, planted="quartz meadow")
        report = mine_subtext(articles, comments, config=FAST, min_phrase_df=3)
        assert "quartz meadow" in report.comment_phrases
        assert not (report.content_phrases & report.comment_phrases)

    def test_disjoint_for_many_seeds(self):
        rng = random.Random(8)
        articles, comments = build_corpus(rng)
        for seed in range(4):
            cfg = LdaConfig(n_topics=3, iterations=30, seed=seed, n_min=2, n_max=2)
            report = mine_subtext(articles, comments, config=cfg, min_phrase_df=3)
            assert not (report.content_phrases & report.comment_phrases)
            assert len(report.content_phrases) <= 15
            assert len(report.comment_phrases) <= 15

    def test_identical_corpora_still_disjoint(self):
        rng = random.Random(9)
        articles, _ = build_corpus(rng)
        mirrored = [
            Comment(id=f"c{i}", article_id=a.id, text=a.body)
            for i, a in enumerate(articles)
        ]
        report = mine_subtext(articles, mirrored, config=FAST, min_phrase_df=3)
        assert not (report.content_phrases & report.comment_phrases)

    def test_deterministic_for_fixed_seeds(self):
        rng = random.Random(10)
        articles, comments = build_corpus(rng, planted="quartz meadow")
        r1 = mine_subtext(articles, comments, config=FAST, min_phrase_df=3)
        r2 = mine_subtext(articles, comments, config=FAST, min_phrase_df=3)
        assert r1 == r2
        assert report_to_dict(r1) == report_to_dict(r2)

    def test_phase_two_seed_is_derived(self):
        rng = random.Random(11)
        articles, comments = build_corpus(rng)
        report = mine_subtext(articles, comments, config=FAST, min_phrase_df=3)
        dump = report_to_dict(report)
        assert dump["content_topics"]["seed"] == FAST.seed
        assert dump["comment_topics"]["seed"] == FAST.seed + 1

    def test_empty_inputs_error(self):
        rng = random.Random(12)
        articles, comments = build_corpus(rng)
        with pytest.raises(ValueError):
            mine_subtext([], comments, config=FAST)
        with pytest.raises(ValueError):
            mine_subtext(articles, [], config=FAST)


class TestReportRendering:
    @pytest.fixture
    def report(self):
        rng = random.Random(13)
        articles, comments = build_corpus(rng, planted="quartz meadow")
        return mine_subtext(articles, comments, config=FAST, min_phrase_df=3)

    def test_json_shape(self, report):
        dump = report_to_dict(report)
        assert dump["content_phrases"] == sorted(report.content_phrases)
        assert dump["comment_phrases"] == sorted(report.comment_phrases)
        for key in ("K", "alpha", "beta", "iterations", "seed", "topics"):
            assert key in dump["content_topics"]
        topic = dump["content_topics"]["topics"][0]
        assert set(topic) == {"id", "terms"}

    def test_markdown_two_columns(self, report):
        md = report_to_markdown(report)
        lines = md.strip().splitlines()
        assert lines[0] == "| Content Topic Phrases | Comment Topic Phrases |"
        assert len(lines) == 2 + max(len(report.content_phrases), len(report.comment_phrases))

    def test_save_report_files(self, report, tmp_path):
        save_report(report, tmp_path / "subtext.json", tmp_path / "subtext.md")
        loaded = json.loads((tmp_path / "subtext.json").read_text())
        assert loaded["comment_phrases"] == sorted(report.comment_phrases)
        assert (tmp_path / "subtext.md").read_text().startswith("| Content")
