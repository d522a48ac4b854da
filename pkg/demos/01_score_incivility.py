"""Train the three comment-aspect classifiers and score some comments.

A comment's incivility value is the maximum of its toxicity, aggression,
and personal-attack probabilities. Here the training data is synthetic:
uncivil comments carry insult tokens, and annotator ratings are skewed to
match, so the classifiers have a clean planted signal to find.
"""

from newsciv import SyntheticConfig, generate_corpus, score_comment, train_aspect_classifiers
from newsciv.linmodel import TrainConfig

config = SyntheticConfig(n_articles=1, comments_per_article=1, n_annotated=600, seed=7)
_, _, annotated = generate_corpus(config)

classifiers, reports = train_aspect_classifiers(
    annotated, train_config=TrainConfig(max_iterations=200), split_seed=0
)

print("held-out metrics per aspect:")
for aspect, report in reports.items():
    print(f"  {aspect:<11} auc={report.auc:.3f}  precision={report.precision:.3f}  "
          f"recall={report.recall:.3f}  accuracy={report.accuracy:.3f}")

print("\nscoring a few comments:")
for text in (
    "honestly the detail seems worth sharing",
    "what a windbag honestly",
    "you nitwit buffoon that angle is nonsense",
):
    s = score_comment(classifiers, text)
    print(f"  {text!r}")
    print(f"    toxicity={s.toxicity:.3f} aggression={s.aggression:.3f} "
          f"attack={s.attack:.3f} -> incivility={s.value:.3f}")
