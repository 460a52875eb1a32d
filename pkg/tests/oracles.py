"""Independent oracle implementations used to check the real ones.

Everything here is deliberately written from the contracts alone, with its
own data structures and code paths, scanning the raw records on every call
instead of reusing any production table or node type.
"""
from __future__ import annotations

import math
import random
from collections import Counter

UNKNOWN = "unknown"


# --- Naive Bayes by direct enumeration -------------------------------------

def bayes_posterior_oracle(rows, classes, schema, query, alpha=1.0):
    """rows: [(features_dict, label)]; schema: [(name, values)]; returns
    normalized class posteriors computed by scanning rows per factor."""
    value_counts = {name: len(values) for name, values in schema}
    n = len(rows)
    scores = {}
    for cls in classes:
        n_c = sum(1 for _, label in rows if label == cls)
        score = (n_c + alpha) / (n + alpha * len(classes))
        for name, _ in schema:
            v = query.get(name, UNKNOWN)
            if v == UNKNOWN:
                continue
            matches = sum(1 for feats, label in rows
                          if label == cls and feats.get(name, UNKNOWN) == v)
            score *= (matches + alpha) / (n_c + alpha * value_counts[name])
        scores[cls] = score
    total = sum(scores.values())
    return {cls: s / total for cls, s in scores.items()}


# --- information gain by plain counting -------------------------------------

def entropy_oracle(labels):
    counts = Counter(labels)
    n = len(labels)
    return -sum((c / n) * math.log2(c / n) for _, c in sorted(counts.items()))


def info_gain_oracle(rows, feature):
    labels = [label for _, label in rows]
    n = len(rows)
    by_value: dict[str, list] = {}
    for feats, label in rows:
        by_value.setdefault(feats.get(feature, UNKNOWN), []).append(label)
    child = sum((len(branch) / n) * entropy_oracle(branch)
                for _, branch in sorted(by_value.items()))
    return entropy_oracle(labels) - child


# --- greedy tree re-implementation ------------------------------------------

def _weighted_child_entropy_exact(branches):
    """sum_v n_v H(S_v) expressed exactly as the pair (num, den) with the
    quantity equal to log2(num / den)."""
    num, den = 1, 1
    for branch_labels in branches.values():
        size = len(branch_labels)
        num *= size ** size
        for count in Counter(branch_labels).values():
            den *= count ** count
    return num, den


def _majority_oracle(labels, class_order):
    counts = Counter(labels)
    top = max(counts.values())
    return next(cls for cls in class_order if counts.get(cls, 0) == top)


def tree_oracle(rows, classes, schema, max_depth, min_samples_leaf=1):
    """Greedy max-gain tree as a nested dict, matching the documented rule:
    exact gain comparison, schema order on ties, declared class order for
    majorities, ascending-value branch order, unknown as its own branch."""
    feature_order = [name for name, _ in schema]

    def grow(indices, banned, depth):
        labels = [rows[i][1] for i in indices]
        support = dict(Counter(labels))
        majority = _majority_oracle(labels, classes)
        node = {"support": support, "majority_class": majority}
        if len(support) == 1 or depth >= max_depth:
            node["leaf"] = True
            return node

        whole = {"": labels}
        base_num, base_den = _weighted_child_entropy_exact(whole)
        chosen = None
        chosen_score = (base_num, base_den)
        chosen_split = None
        for name in feature_order:
            if name in banned:
                continue
            split: dict[str, list] = {}
            for i in indices:
                split.setdefault(rows[i][0].get(name, UNKNOWN), []).append(i)
            if len(split) < 2:
                continue
            if any(len(ix) < min_samples_leaf for ix in split.values()):
                continue
            num, den = _weighted_child_entropy_exact(
                {v: [rows[i][1] for i in ix] for v, ix in split.items()})
            if num * chosen_score[1] < chosen_score[0] * den:
                chosen, chosen_score, chosen_split = name, (num, den), split
        if chosen is None:
            node["leaf"] = True
            return node

        node["leaf"] = False
        node["feature"] = chosen
        sizes = {v: len(ix) for v, ix in chosen_split.items()}
        biggest = max(sizes.values())
        node["majority_value"] = next(v for v in sorted(sizes) if sizes[v] == biggest)
        node["children"] = {
            v: grow(ix, banned | {chosen}, depth + 1)
            for v, ix in sorted(chosen_split.items())
        }
        return node

    return grow(list(range(len(rows))), frozenset(), 0)


def tree_predict_oracle(node, features):
    while not node["leaf"]:
        value = features.get(node["feature"], UNKNOWN)
        if value in node["children"]:
            node = node["children"][value]
        elif value == UNKNOWN:
            node = node["children"][node["majority_value"]]
        else:
            return node["majority_class"]
    return node["majority_class"]


# --- great-circle distance (Vincenty formula for a sphere) ------------------

EARTH_RADIUS_M = 6_371_000.0


def great_circle_oracle(a, b):
    phi1, lam1 = math.radians(a[0]), math.radians(a[1])
    phi2, lam2 = math.radians(b[0]), math.radians(b[1])
    dlam = lam2 - lam1
    y = math.hypot(math.cos(phi2) * math.sin(dlam),
                   math.cos(phi1) * math.sin(phi2)
                   - math.sin(phi1) * math.cos(phi2) * math.cos(dlam))
    x = math.sin(phi1) * math.sin(phi2) + math.cos(phi1) * math.cos(phi2) * math.cos(dlam)
    return EARTH_RADIUS_M * math.atan2(y, x)


# --- grid cell counts by per-cell scan ---------------------------------------

M_PER_DEG_LAT = 111_320.0


def cell_count_oracle(points, origin, cell_size_m, rows, cols):
    """Count (lat, lon) points per cell by scanning every point for every
    cell index, using its own floor arithmetic."""
    lon_scale = M_PER_DEG_LAT * math.cos(math.radians(origin[0]))
    grid = [[0] * cols for _ in range(rows)]
    for r in range(rows):
        for c in range(cols):
            for lat, lon in points:
                i = math.floor((lat - origin[0]) * M_PER_DEG_LAT / cell_size_m)
                j = math.floor((lon - origin[1]) * lon_scale / cell_size_m)
                if i == r and j == c:
                    grid[r][c] += 1
    return grid


# --- cross-validation fold replay --------------------------------------------

def cv_replay_oracle(rows, classes, schema, k, seed, alpha=1.0):
    """Recompute per-fold accuracies from the documented fold contract
    (seeded shuffle, contiguous folds, first n%k get the extra record) using
    the enumeration Bayes as the per-fold classifier."""
    n = len(rows)
    order = list(range(n))
    random.Random(seed).shuffle(order)
    base, extra = divmod(n, k)
    folds = []
    at = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(order[at:at + size])
        at += size
    accuracies = []
    for fold in folds:
        fold_set = set(fold)
        train = [rows[i] for i in range(n) if i not in fold_set]
        hits = 0
        for i in fold:
            post = bayes_posterior_oracle(train, classes, schema, rows[i][0], alpha)
            top = max(post.values())
            predicted = next(cls for cls in classes if post[cls] == top)
            hits += predicted == rows[i][1]
        accuracies.append(hits / len(fold))
    return folds, accuracies
