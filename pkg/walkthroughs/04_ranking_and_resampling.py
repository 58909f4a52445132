"""Answer features, class imbalance and the logistic ranker.

Run: python3 walkthroughs/04_ranking_and_resampling.py
"""
from collections import Counter

import numpy as np

from webqa import (LabeledExample, Pipeline, load_fixture_corpus, load_fixture_kb,
                   resample_balanced, sample_queries, train_logistic)
from webqa.evaluation import pr_auc
from webqa.ranking import ANSWER_FEATURES

kb = load_fixture_kb()
pipe = Pipeline(kb, load_fixture_corpus())
train, _ = sample_queries(kb, "wasBornIn", 30, 10, seed=7)

examples = pipe.ranker_examples(train, ("born", "birthplace"))
print("candidate labels:", Counter(e.label for e in examples))
for e in examples[:3]:
    print(" ", e.provenance[2], dict(zip(ANSWER_FEATURES, e.features)), "label", e.label)

balanced = resample_balanced(examples, seed=0)
print("after resampling:", Counter(e.label for e in balanced))
model = train_logistic(balanced, seed=0, feature_names=ANSWER_FEATURES)
for name, w in zip(model.feature_names, model.weights):
    print(f"  {name:<17} {w:+.2f}")
print(f"loss {model.loss_history[0]:.3f} -> {model.loss_history[-1]:.3f}")

# Imbalance on a synthetic 1:30 problem.
rng = np.random.default_rng(5)


def blobs(n_pos, n_neg):
    X = np.vstack([rng.normal(1, .6, (n_pos, 2)), rng.normal(0, .6, (n_neg, 2))])
    return X, [1] * n_pos + [0] * n_neg


X, y = blobs(20, 600)
Xt, yt = blobs(100, 3000)
data = [LabeledExample(tuple(x), t) for x, t in zip(X, y)]
for name, d in (("unbalanced", data), ("resampled", resample_balanced(data, 0))):
    m = train_logistic(d)
    p = m.predict_many(Xt)
    print(f"{name:<11} PR area {pr_auc(list(p), yt):.4f}  "
          f"positives predicted {int((p > .5).sum())} / {sum(yt)}")
