from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webqa import (DataError, DictionaryLinker, Hyperparams, LabeledExample, LogisticModel,
                   extract_answer_features, extract_candidates, load_model, predict_proba,
                   rank_answers, resample_balanced, train_logistic)
from webqa.ranking import AnswerFeatures, log_loss, loss_gradient
from webqa.linking import CandidateAnswer, LinkedMention

from test_linking import MARVIN, BORN_SNIPPET, snippets


def test_table_one_distance(kb):
    snips = snippets([BORN_SNIPPET])
    nyc = next(c for c in extract_candidates(snips, DictionaryLinker(kb), MARVIN)
               if c.entity == "New_York_City")
    f = extract_answer_features(nyc, snips, MARVIN, kb)
    # "was born in" sits between the subject and the city
    assert f.average_distance == 3
    assert f.snippet_count == 1 and f.average_rank == 1.0
    assert f.relatedness == kb.relatedness("New_York_City", "Marvin_Minsky")


def test_average_rank_and_missing_subject(kb):
    snips = snippets(["x", "Boston x", "y", "Boston y"])
    c = next(c for c in extract_candidates(snips, DictionaryLinker(kb), MARVIN))
    f = extract_answer_features(c, snips, MARVIN, kb, max_distance=50)
    assert f.average_rank == 3.0
    assert f.average_distance == 50


def test_custom_relatedness(kb):
    snips = snippets(["Marvin Minsky Boston"])
    c = extract_candidates(snips, DictionaryLinker(kb), MARVIN)[0]
    f = extract_answer_features(c, snips, MARVIN, kb, relatedness=lambda a, b: 1.0)
    assert f == AnswerFeatures(1, 1.0, 0, 1.0)


def ex(label, x=0.0, tag=None):
    return LabeledExample((x,), label, (tag,))


@pytest.mark.parametrize("npos,nneg", [(3, 90), (5, 25), (2, 60), (1, 100), (90, 3)])
def test_resample_balance(npos, nneg):
    data = [ex(1, i, i) for i in range(npos)] + [ex(0, i, i) for i in range(nneg)]
    out = resample_balanced(data, seed=4)
    counts = Counter(e.label for e in out)
    assert counts[0] == counts[1] == max(npos, nneg)
    assert out[:len(data)] == data
    assert out == resample_balanced(data, seed=4)
    minority = 1 if npos < nneg else 0
    assert all(e.label == minority for e in out[len(data):])


def test_resample_balanced_is_copy():
    data = [ex(1)] * 5 + [ex(0)] * 5
    out = resample_balanced(data, 0)
    assert out == data and out is not data


def test_resample_single_class():
    with pytest.raises(DataError, match="negative"):
        resample_balanced([ex(1), ex(1)], 0)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(120):
        n, d = int(rng.integers(1, 6)), int(rng.integers(1, 5))
        X = rng.uniform(0, 1, (n, d))
        y = rng.integers(0, 2, n).astype(float)
        w, b, l2 = rng.normal(0, 2, d), float(rng.normal()), float(rng.uniform(0, 0.1))
        gw, gb = loss_gradient(w, b, X, y, l2)
        h = 1e-6
        num = []
        for i in range(d):
            e = np.zeros(d)
            e[i] = h
            num.append((log_loss(w + e, b, X, y, l2) - log_loss(w - e, b, X, y, l2)) / (2 * h))
        num.append((log_loss(w, b + h, X, y, l2) - log_loss(w, b - h, X, y, l2)) / (2 * h))
        ana = np.append(gw, gb)
        err = np.linalg.norm(ana - num) / max(np.linalg.norm(ana) + np.linalg.norm(num), 1e-12)
        worst = max(worst, err)
    assert worst < 1e-5


def _toy(rng, n=60):
    X = rng.uniform(0, 1, (n, 2))
    y = (X[:, 0] > X[:, 1]).astype(int)
    return [LabeledExample(tuple(x), int(t)) for x, t in zip(X, y)]


def test_loss_non_increasing():
    m = train_logistic(_toy(np.random.default_rng(0)), Hyperparams(epochs=300))
    h = np.array(m.loss_history)
    assert len(h) == 301 and np.all(np.diff(h) <= 1e-12)


def test_separable_held_out():
    rng = np.random.default_rng(1)
    m = train_logistic(_toy(rng, 200), Hyperparams(epochs=5000))
    held = [e for e in _toy(rng, 200) if abs(e.features[0] - e.features[1]) > 0.2]
    p = m.predict_many([e.features for e in held])
    assert all((pi > 0.5) == bool(e.label) for pi, e in zip(p, held))


def test_one_dimensional_sign():
    m = train_logistic([LabeledExample((0.0,), 0), LabeledExample((1.0,), 1)])
    assert predict_proba(m, [0.0]) < 0.5 < predict_proba(m, [1.0])


def test_degenerate_feature():
    rng = np.random.default_rng(2)
    data = [LabeledExample((x, 7.0), int(x > 0.5)) for x in rng.uniform(0, 1, 30)]
    m = train_logistic(data)
    assert m.weights[1] == 0.0
    assert m.normalize([[3.0, 99.0]])[0, 1] == 0.0


def test_non_finite_names_provenance():
    data = [LabeledExample((0.0,), 0, ("q1",)), LabeledExample((float("nan"),), 1, ("q2",))]
    with pytest.raises(DataError, match="q2"):
        train_logistic(data)


def test_predict_proba_basics():
    zero = LogisticModel(np.zeros(2), 0.0, ("a", "b"), [(0, 1), (0, 1)])
    assert predict_proba(zero, [0.3, 9.0]) == 0.5
    with pytest.raises(ValueError):
        predict_proba(zero, [1.0])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.floats(-5, 5),
       st.lists(st.floats(0, 1), min_size=2, max_size=2))
def test_negated_model_gives_complement(wb, b, x):
    m = LogisticModel(np.array(wb[:2]), b, ("a", "b"), [(0, 1), (0, 1)])
    neg = LogisticModel(-np.array(wb[:2]), -b, ("a", "b"), [(0, 1), (0, 1)])
    assert predict_proba(m, x) + predict_proba(neg, x) == pytest.approx(1.0, abs=1e-12)


def cand(entity, n):
    m = LinkedMention(entity, 0, 1, entity.lower())
    return CandidateAnswer(entity, tuple((i, m) for i in range(n)))


def test_rank_order_and_ties():
    model = LogisticModel(np.array([1.0, 0, 0, 0]), 0.0, tuple("abcd"), [(0, 1)] * 4)
    hi = (cand("A", 1), AnswerFeatures(1, 1, 0, 0))
    lo = (cand("B", 1), AnswerFeatures(0, 1, 0, 0))
    assert [r.entity for r in rank_answers(model, [lo, hi])] == ["A", "B"]
    assert rank_answers(model, []) == []
    flat = LogisticModel(np.zeros(4), 0.0, tuple("abcd"), [(0, 1)] * 4)
    two = (cand("Z", 2), AnswerFeatures(2, 1, 0, 0))
    five = (cand("Y", 5), AnswerFeatures(5, 1, 0, 0))
    assert [r.entity for r in rank_answers(flat, [two, five])] == ["Y", "Z"]


def test_trained_ranker_monotone_in_relatedness(trained):
    r = trained["ranker"]
    assert r.weights[3] > 0
    lo = predict_proba(r, [2, 2.0, 5.0, 0.1])
    hi = predict_proba(r, [2, 2.0, 5.0, 0.9])
    assert hi > lo


def test_model_round_trip(trained, tmp_path):
    for m in trained.values():
        m.save(tmp_path / "m.json")
        again = load_model(tmp_path / "m.json")
        assert again.to_json() == m.to_json()
        assert np.array_equal(again.weights, m.weights)
