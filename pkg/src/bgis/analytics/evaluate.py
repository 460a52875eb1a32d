"""k-fold cross-validation with confusion-matrix reporting."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

from ..errors import InvalidField, TooFewRecords
from .dataset import LabeledRecord, Task
from .nb import nb_posterior, train_naive_bayes
from .tree import train_decision_tree, tree_predict


class Learner(Protocol):
    def fit(self, records: Sequence[LabeledRecord], task: Task) -> None: ...
    def predict(self, features: Mapping[str, str]) -> str: ...


class NaiveBayesLearner:
    def __init__(self, alpha: float = 1.0):
        self.alpha = alpha
        self.model = None

    def fit(self, records, task):
        self.model = train_naive_bayes(records, task, alpha=self.alpha)

    def predict(self, features):
        posterior = nb_posterior(self.model, features)
        # argmax with declared-class-order tie-break
        best = max(posterior.values())
        for cls in self.model.task.classes:
            if posterior[cls] == best:
                return cls


class DecisionTreeLearner:
    def __init__(self, max_depth: int = 8, min_samples_leaf: int = 1):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.model = None

    def fit(self, records, task):
        self.model = train_decision_tree(records, task, max_depth=self.max_depth,
                                         min_samples_leaf=self.min_samples_leaf)

    def predict(self, features):
        return tree_predict(self.model, features)[0]


class ConstantLearner:
    """Baseline: always predicts one fixed class."""

    def __init__(self, cls: str):
        self.cls = cls

    def fit(self, records, task):
        pass

    def predict(self, features):
        return self.cls


def make_learner(name: str, **params) -> Learner:
    if name == "nb":
        return NaiveBayesLearner(alpha=params.get("alpha", 1.0))
    if name == "tree":
        return DecisionTreeLearner(max_depth=params.get("max_depth", 8),
                                   min_samples_leaf=params.get("min_samples_leaf", 1))
    raise InvalidField(f"unknown learner {name!r}", field="learner")


@dataclass(frozen=True)
class EvaluationReport:
    k: int
    n: int
    fold_sizes: tuple[int, ...]
    fold_accuracies: tuple[float, ...]
    mean_accuracy: float  # mean of per-fold accuracies
    overall_accuracy: float  # total correct / n (fold-size independent)
    confusion: Mapping[str, Mapping[str, int]]  # actual -> predicted -> count
    precision: Mapping[str, float]
    recall: Mapping[str, float]

    def to_payload(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "fold_sizes": list(self.fold_sizes),
            "fold_accuracies": list(self.fold_accuracies),
            "mean_accuracy": self.mean_accuracy,
            "overall_accuracy": self.overall_accuracy,
            "confusion": {a: dict(p) for a, p in self.confusion.items()},
            "precision": dict(self.precision),
            "recall": dict(self.recall),
        }


def make_folds(n: int, k: int, seed: int) -> list[list[int]]:
    """Shuffle 0..n-1 deterministically and cut into k folds whose sizes
    differ by at most one (the first n % k folds get the extra record)."""
    indices = list(range(n))
    random.Random(seed).shuffle(indices)
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(indices[start:start + size])
        start += size
    return folds


def cross_validate(records: Sequence[LabeledRecord], task: Task,
                   learner: str | Learner = "nb", k: int = 5,
                   seed: int = 0, **params) -> EvaluationReport:
    if k < 2:
        raise InvalidField("k must be >= 2", field="k")
    if len(records) < k:
        raise TooFewRecords(f"need at least k={k} records, got {len(records)}")
    folds = make_folds(len(records), k, seed)
    confusion = {a: {p: 0 for p in task.classes} for a in task.classes}
    accuracies = []
    total_correct = 0
    for fold in folds:
        holdout = set(fold)
        train = [records[i] for i in range(len(records)) if i not in holdout]
        model = make_learner(learner, **params) if isinstance(learner, str) else learner
        model.fit(train, task)
        correct = 0
        for i in fold:
            predicted = model.predict(records[i].features)
            confusion[records[i].label][predicted] += 1
            if predicted == records[i].label:
                correct += 1
        total_correct += correct
        accuracies.append(correct / len(fold))
    precision = {}
    recall = {}
    for cls in task.classes:
        tp = confusion[cls][cls]
        predicted_as = sum(confusion[a][cls] for a in task.classes)
        actual = sum(confusion[cls].values())
        precision[cls] = tp / predicted_as if predicted_as else 0.0
        recall[cls] = tp / actual if actual else 0.0
    return EvaluationReport(
        k=k, n=len(records),
        fold_sizes=tuple(len(f) for f in folds),
        fold_accuracies=tuple(accuracies),
        mean_accuracy=sum(accuracies) / k,
        overall_accuracy=total_correct / len(records),
        confusion=confusion, precision=precision, recall=recall)
