"""Categorical Naive Bayes with Laplace smoothing, built on exact count tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import EmptyDataset, InvalidField
from .dataset import UNKNOWN, LabeledRecord, Task


@dataclass(frozen=True)
class NaiveBayesModel:
    task: Task
    alpha: float
    total: int
    class_counts: Mapping[str, int]
    # class -> feature -> value -> count; "unknown" values are never counted
    feature_value_counts: Mapping[str, Mapping[str, Mapping[str, int]]]

    def prior(self, cls: str) -> float:
        k = len(self.task.classes)
        return (self.class_counts[cls] + self.alpha) / (self.total + self.alpha * k)

    def likelihood(self, cls: str, feature: str, value: str) -> float:
        values = self.task.values_of(feature)
        count = self.feature_value_counts[cls][feature].get(value, 0)
        return (count + self.alpha) / (self.class_counts[cls] + self.alpha * len(values))

    def to_payload(self) -> dict:
        return {
            "type": "naive_bayes",
            "alpha": self.alpha,
            "classes": list(self.task.classes),
            "features": [[name, list(values)] for name, values in self.task.features],
            "total": self.total,
            "class_counts": dict(self.class_counts),
            "feature_value_counts": {
                cls: {f: dict(vals) for f, vals in by_feature.items()}
                for cls, by_feature in self.feature_value_counts.items()
            },
        }

    @classmethod
    def from_payload(cls, doc: dict) -> "NaiveBayesModel":
        task = Task(
            features=tuple((name, tuple(values)) for name, values in doc["features"]),
            classes=tuple(doc["classes"]))
        return cls(task=task, alpha=float(doc["alpha"]), total=int(doc["total"]),
                   class_counts={c: int(n) for c, n in doc["class_counts"].items()},
                   feature_value_counts={
                       c: {f: {v: int(n) for v, n in vals.items()}
                           for f, vals in by_feature.items()}
                       for c, by_feature in doc["feature_value_counts"].items()})


def train_naive_bayes(records: Sequence[LabeledRecord], task: Task,
                      alpha: float = 1.0) -> NaiveBayesModel:
    if not records:
        raise EmptyDataset("cannot train on an empty dataset")
    if alpha <= 0:
        raise InvalidField("alpha must be > 0", field="alpha")
    class_counts = {cls: 0 for cls in task.classes}
    fv_counts = {cls: {name: {} for name in task.feature_names}
                 for cls in task.classes}
    for record in records:
        task.check_label(record.label)
        task.check_features(record.features)
        class_counts[record.label] += 1
        table = fv_counts[record.label]
        for name in task.feature_names:
            value = record.features.get(name, UNKNOWN)
            if value == UNKNOWN:
                continue
            table[name][value] = table[name].get(value, 0) + 1
    return NaiveBayesModel(task=task, alpha=float(alpha), total=len(records),
                           class_counts=class_counts,
                           feature_value_counts=fv_counts)


def nb_posterior(model: NaiveBayesModel, features: Mapping[str, str]) -> dict[str, float]:
    """Normalized P(class | features); "unknown" feature values contribute no
    likelihood factor."""
    model.task.check_features(features)
    scores = {}
    for cls in model.task.classes:
        score = model.prior(cls)
        for name in model.task.feature_names:
            value = features.get(name, UNKNOWN)
            if value == UNKNOWN:
                continue
            score *= model.likelihood(cls, name, value)
        scores[cls] = score
    norm = sum(scores.values())
    return {cls: score / norm for cls, score in scores.items()}
