"""Answer features, balanced logistic regression, and candidate ranking.

The logistic model is shared with the snippet filter. It min-max normalizes
each feature with bounds fitted on the training set and is trained by
full-batch gradient descent on L2-regularized mean log loss, starting from
zero weights.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DataError
from .kb import KbcQuery, KnowledgeBase
from .linking import CandidateAnswer, find_entity_spans
from .snippets import Snippet
from .text import gap

__all__ = [
    "ANSWER_FEATURES",
    "DEFAULT_MAX_DISTANCE",
    "AnswerFeatures",
    "LabeledExample",
    "Hyperparams",
    "LogisticModel",
    "RankedAnswer",
    "extract_answer_features",
    "resample_balanced",
    "log_loss",
    "loss_gradient",
    "train_logistic",
    "predict_proba",
    "rank_answers",
    "load_model",
]

ANSWER_FEATURES = ("snippet_count", "average_rank", "average_distance", "relatedness")
DEFAULT_MAX_DISTANCE = 50


@dataclass(frozen=True)
class AnswerFeatures:
    snippet_count: int
    average_rank: float
    average_distance: float
    relatedness: float

    def as_vector(self) -> tuple[float, ...]:
        return (float(self.snippet_count), float(self.average_rank),
                float(self.average_distance), float(self.relatedness))


def extract_answer_features(candidate: CandidateAnswer, snippets: Sequence[Snippet],
                            query: KbcQuery, kb: KnowledgeBase,
                            max_distance: float = DEFAULT_MAX_DISTANCE,
                            relatedness: Callable[[str, str], float] | None = None,
                            ) -> AnswerFeatures:
    """Fuse snippet evidence and KB relatedness for one candidate.

    ``candidate`` mention indices refer to positions in ``snippets``. The
    distance for one snippet is the smallest token gap between any candidate
    mention and any occurrence of a subject surface form; snippets without the
    subject count as ``max_distance``.
    """
    by_snippet: dict[int, list] = {}
    for idx, m in candidate.mentions:
        by_snippet.setdefault(idx, []).append(m)
    if not by_snippet:
        raise ValueError(f"candidate {candidate.entity!r} has no mentions")

    ranks, dists = [], []
    for idx in sorted(by_snippet):
        snip = snippets[idx]
        ranks.append(snip.rank)
        subj = find_entity_spans(kb, query.subject, snip.text)
        if subj:
            dists.append(min(gap(m.span, s) for m in by_snippet[idx] for s in subj))
        else:
            dists.append(max_distance)
    rel = (relatedness or kb.relatedness)(candidate.entity, query.subject)
    return AnswerFeatures(len(ranks), sum(ranks) / len(ranks), sum(dists) / len(dists), float(rel))


@dataclass(frozen=True)
class LabeledExample:
    features: tuple[float, ...]
    label: int
    provenance: tuple = ()

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")
        object.__setattr__(self, "features", tuple(float(x) for x in self.features))


def resample_balanced(examples: Sequence[LabeledExample], seed: int) -> list[LabeledExample]:
    """Upsample the minority class with replacement to the majority count.

    Every input example is kept, in input order; the extra minority draws are
    appended. Already balanced input comes back as a copy.
    """
    pos = [e for e in examples if e.label == 1]
    neg = [e for e in examples if e.label == 0]
    if not pos or not neg:
        missing = "positive" if not pos else "negative"
        raise DataError(f"cannot balance: no {missing} examples among {len(examples)}")
    minority = pos if len(pos) < len(neg) else neg
    extra = abs(len(pos) - len(neg))
    out = list(examples)
    if extra:
        rng = np.random.default_rng(seed)
        out.extend(minority[i] for i in rng.integers(0, len(minority), size=extra))
    return out


@dataclass(frozen=True)
class Hyperparams:
    # lr 1.0 stays below 2/L for [0, 1] features (L <= (1 + n_features) / 4 + l2)
    learning_rate: float = 1.0
    epochs: int = 2000
    l2: float = 1e-4


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=float)))


def log_loss(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """Mean log loss plus ``l2/2 * |w|^2`` (bias unregularized)."""
    z = X @ w + b
    # log(1 + e^z) - y z, stable for large |z|
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * (w @ w))


def loss_gradient(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray,
                  l2: float) -> tuple[np.ndarray, float]:
    r = _sigmoid(X @ w + b) - y
    return X.T @ r / len(y) + l2 * w, float(np.mean(r))


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    feature_names: tuple[str, ...]
    normalization: tuple[tuple[float, float], ...]
    seed: int | None = None
    hyperparams: Hyperparams = field(default_factory=Hyperparams)
    classifier: str = "logistic"
    loss_history: list[float] = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.feature_names = tuple(self.feature_names)
        self.normalization = tuple((float(a), float(b)) for a, b in self.normalization)
        if not (len(self.weights) == len(self.feature_names) == len(self.normalization)):
            raise ValueError("weights, feature_names and normalization differ in length")

    def normalize(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        lo = np.array([a for a, _ in self.normalization])
        hi = np.array([b for _, b in self.normalization])
        span = hi - lo
        out = np.zeros_like(X)
        ok = span > 0
        out[:, ok] = (X[:, ok] - lo[ok]) / span[ok]
        return out

    def predict_many(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != len(self.weights):
            raise ValueError(f"expected {len(self.weights)} features, got {X.shape[1]}")
        return _sigmoid(self.normalize(X) @ self.weights + self.bias)

    def to_dict(self) -> dict:
        return {
            "classifier": self.classifier,
            "feature_names": list(self.feature_names),
            "weights": [float(w) for w in self.weights],
            "bias": float(self.bias),
            "normalization": [[a, b] for a, b in self.normalization],
            "seed": self.seed,
            "hyperparams": asdict(self.hyperparams),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_dict(cls, d: dict) -> "LogisticModel":
        if d.get("classifier", "logistic") != "logistic":
            raise DataError(f"unsupported classifier {d.get('classifier')!r}")
        return cls(d["weights"], float(d["bias"]), d["feature_names"], d["normalization"],
                   d.get("seed"), Hyperparams(**d.get("hyperparams", {})))


def load_model(path) -> LogisticModel:
    with open(path, encoding="utf-8") as fh:
        return LogisticModel.from_dict(json.load(fh))


def train_logistic(examples: Sequence[LabeledExample], hyperparams: Hyperparams | None = None,
                   seed: int | None = 0,
                   feature_names: Sequence[str] | None = None) -> LogisticModel:
    """Fit a logistic model by full-batch gradient descent.

    Call ``resample_balanced`` first; this function trains on what it is given.
    A feature that is constant over the training set normalizes to 0 and keeps
    weight 0.
    """
    hp = hyperparams or Hyperparams()
    if len(examples) < 2:
        raise DataError("need at least 2 training examples")
    X = np.array([e.features for e in examples], dtype=float)
    y = np.array([e.label for e in examples], dtype=float)
    bad = ~np.isfinite(X).all(axis=1)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DataError(f"non-finite feature in example {i} "
                        f"(provenance {examples[i].provenance!r}): {examples[i].features}")
    n_feat = X.shape[1]
    names = tuple(feature_names) if feature_names is not None else tuple(
        f"x{i}" for i in range(n_feat))
    if len(names) != n_feat:
        raise ValueError(f"{len(names)} feature names for {n_feat} features")

    lo, hi = X.min(axis=0), X.max(axis=0)
    model = LogisticModel(np.zeros(n_feat), 0.0, names, list(zip(lo, hi)), seed, hp)
    Xn = model.normalize(X)
    live = (hi - lo) > 0

    w, b = np.zeros(n_feat), 0.0
    history = [log_loss(w, b, Xn, y, hp.l2)]
    for _ in range(hp.epochs):
        gw, gb = loss_gradient(w, b, Xn, y, hp.l2)
        w = np.where(live, w - hp.learning_rate * gw, 0.0)
        b -= hp.learning_rate * gb
        history.append(log_loss(w, b, Xn, y, hp.l2))
    model.weights = w
    model.bias = float(b)
    model.loss_history = history
    return model


def predict_proba(model: LogisticModel, features: Sequence[float]) -> float:
    x = np.asarray(features, dtype=float)
    if x.ndim != 1 or len(x) != len(model.weights):
        raise ValueError(f"expected {len(model.weights)} features, got shape {x.shape}")
    return float(model.predict_many(x[None, :])[0])


@dataclass(frozen=True)
class RankedAnswer:
    entity: str
    probability: float


def rank_answers(model: LogisticModel,
                 candidates: Sequence[tuple[CandidateAnswer, AnswerFeatures]]) -> list[RankedAnswer]:
    """Order candidates by probability, then snippet count (desc), then entity id."""
    if not candidates:
        return []
    probs = model.predict_many([f.as_vector() for _, f in candidates])
    rows = sorted(zip(candidates, probs),
                  key=lambda r: (-r[1], -r[0][1].snippet_count, r[0][0].entity))
    return [RankedAnswer(c.entity, float(p)) for (c, _), p in rows]
