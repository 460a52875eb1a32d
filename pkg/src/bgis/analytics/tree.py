"""ID3-style decision tree over categorical features.

Split choice is maximum information gain (entropy base 2); every tie is broken
deterministically (schema order for features, declared class order for
majority labels, ascending value order for branches) so two runs on the same
data build the same tree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import EmptyDataset, InvalidField
from .dataset import UNKNOWN, LabeledRecord, Task


def entropy(label_counts: Mapping[str, int]) -> float:
    total = sum(label_counts.values())
    if total == 0:
        return 0.0
    h = 0.0
    for cls in sorted(label_counts):
        n = label_counts[cls]
        if n:
            p = n / total
            h -= p * math.log2(p)
    return h


def _label_counts(records: Sequence[LabeledRecord]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for r in records:
        counts[r.label] = counts.get(r.label, 0) + 1
    return counts


def _partition(records: Sequence[LabeledRecord], feature: str) -> dict[str, list[LabeledRecord]]:
    """Branch records by feature value; records missing the feature form an
    "unknown" branch of their own."""
    branches: dict[str, list[LabeledRecord]] = {}
    for r in records:
        value = r.features.get(feature, UNKNOWN)
        branches.setdefault(value, []).append(r)
    return branches


def information_gain(records: Sequence[LabeledRecord], task: Task, feature: str) -> float:
    """H(label) - sum_v (|S_v|/|S|) H(label | feature=v), in bits."""
    if not records:
        raise EmptyDataset("information gain of an empty dataset is undefined")
    task.values_of(feature)  # raises SchemaMismatch for unknown features
    total = len(records)
    gain = entropy(_label_counts(records))
    branches = _partition(records, feature)
    for value in sorted(branches):
        subset = branches[value]
        gain -= (len(subset) / total) * entropy(_label_counts(subset))
    return gain


def _split_score(branches: Mapping[str, list]) -> tuple[int, int]:
    """Weighted child entropy as an exact quantity.

    For a partition {S_v}, sum_v |S_v| H(S_v) = log2(num/den) with
    num = prod_v n_v^n_v and den = prod_{v,c} n_vc^n_vc, both integers.
    Comparing (num, den) pairs by cross-multiplication orders candidate
    splits exactly, so mathematically tied gains really tie (and fall to the
    schema-order rule) instead of breaking on float rounding.
    """
    num = 1
    den = 1
    for subset in branches.values():
        n_v = len(subset)
        num *= n_v ** n_v
        for n_vc in _label_counts(subset).values():
            den *= n_vc ** n_vc
    return num, den


@dataclass(frozen=True)
class TreeNode:
    support: Mapping[str, int]
    majority_class: str
    feature: str | None = None  # None marks a leaf
    children: Mapping[str, "TreeNode"] | None = None
    majority_value: str | None = None  # branch taken by "unknown" at predict

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def to_payload(self) -> dict:
        doc = {"support": dict(self.support), "majority_class": self.majority_class}
        if self.is_leaf:
            doc["leaf"] = True
        else:
            doc["leaf"] = False
            doc["feature"] = self.feature
            doc["majority_value"] = self.majority_value
            doc["children"] = {v: c.to_payload() for v, c in sorted(self.children.items())}
        return doc

    @classmethod
    def from_payload(cls, doc: dict) -> "TreeNode":
        if doc["leaf"]:
            return cls(support=dict(doc["support"]),
                       majority_class=doc["majority_class"])
        return cls(support=dict(doc["support"]),
                   majority_class=doc["majority_class"],
                   feature=doc["feature"],
                   majority_value=doc["majority_value"],
                   children={v: cls.from_payload(c)
                             for v, c in doc["children"].items()})


@dataclass(frozen=True)
class DecisionTreeModel:
    task: Task
    root: TreeNode
    max_depth: int
    min_samples_leaf: int

    def to_payload(self) -> dict:
        return {
            "type": "decision_tree",
            "classes": list(self.task.classes),
            "features": [[name, list(values)] for name, values in self.task.features],
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "root": self.root.to_payload(),
        }

    @classmethod
    def from_payload(cls, doc: dict) -> "DecisionTreeModel":
        task = Task(
            features=tuple((name, tuple(values)) for name, values in doc["features"]),
            classes=tuple(doc["classes"]))
        return cls(task=task, root=TreeNode.from_payload(doc["root"]),
                   max_depth=int(doc["max_depth"]),
                   min_samples_leaf=int(doc["min_samples_leaf"]))


def _majority_class(counts: Mapping[str, int], task: Task) -> str:
    best = max(counts.values())
    for cls in task.classes:  # earliest declared class wins ties
        if counts.get(cls, 0) == best:
            return cls
    raise AssertionError("unreachable: counts keyed outside class set")


def _majority_value(branches: Mapping[str, list]) -> str:
    return max(sorted(branches), key=lambda v: len(branches[v]))


def train_decision_tree(records: Sequence[LabeledRecord], task: Task,
                        max_depth: int, min_samples_leaf: int = 1) -> DecisionTreeModel:
    if not records:
        raise EmptyDataset("cannot train on an empty dataset")
    if max_depth < 1:
        raise InvalidField("max_depth must be >= 1", field="max_depth")
    if min_samples_leaf < 1:
        raise InvalidField("min_samples_leaf must be >= 1", field="min_samples_leaf")
    for record in records:
        task.check_label(record.label)
        task.check_features(record.features)

    def build(subset: Sequence[LabeledRecord], used: frozenset[str], depth: int) -> TreeNode:
        counts = _label_counts(subset)
        majority = _majority_class(counts, task)
        if len(counts) == 1 or depth >= max_depth:
            return TreeNode(support=counts, majority_class=majority)

        # zero-gain reference: the unsplit node, sum |S| H(S) = log2(num/den)
        n = len(subset)
        zero_num = n ** n
        zero_den = 1
        for c in counts.values():
            zero_den *= c ** c

        best_feature = None
        best_num, best_den = zero_num, zero_den
        best_branches = None
        for name in task.feature_names:
            if name in used:
                continue
            branches = _partition(subset, name)
            if len(branches) < 2:
                continue
            if min(len(b) for b in branches.values()) < min_samples_leaf:
                continue
            num, den = _split_score(branches)
            # lower weighted child entropy = higher gain; strict comparison
            # keeps the first (schema-order) feature on exact ties
            if num * best_den < best_num * den:
                best_feature, best_num, best_den = name, num, den
                best_branches = branches
        if best_feature is None:  # every candidate has gain 0
            return TreeNode(support=counts, majority_class=majority)

        children = {
            value: build(branch, used | {best_feature}, depth + 1)
            for value, branch in sorted(best_branches.items())
        }
        return TreeNode(support=counts, majority_class=majority,
                        feature=best_feature, children=children,
                        majority_value=_majority_value(best_branches))

    root = build(list(records), frozenset(), 0)
    return DecisionTreeModel(task=task, root=root, max_depth=max_depth,
                             min_samples_leaf=min_samples_leaf)


def tree_predict(model: DecisionTreeModel, features: Mapping[str, str]) -> tuple[str, dict[str, int]]:
    """Class at the reached leaf plus its support counts. A value with no
    branch stops at the node's majority class; "unknown" follows the branch
    that held the most training records."""
    model.task.check_features(features)
    node = model.root
    while not node.is_leaf:
        value = features.get(node.feature, UNKNOWN)
        if value in node.children:
            node = node.children[value]
        elif value == UNKNOWN:
            node = node.children[node.majority_value]
        else:
            return node.majority_class, dict(node.support)
    return node.majority_class, dict(node.support)
