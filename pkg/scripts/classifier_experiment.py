#!/usr/bin/env python3
"""Compare Naive Bayes and decision trees on synthetic offender data with
k-fold cross-validation, sweeping the training-set size.

Usage:
    python scripts/classifier_experiment.py [--k 5] [--sizes 40 80 160 320]
"""
import argparse
import random

from bgis.analytics import (LabeledRecord, cross_validate, offender_task,
                            train_decision_tree)
from bgis.analytics.dataset import AGE_BANDS, MONTHS
from bgis.casework import YES_NO_FACTORS


def synthesize(n: int, rng: random.Random) -> list[LabeledRecord]:
    """Reoffending driven by a noisy rule over drug problems, employment and
    age band, so both learners have signal to find."""
    records = []
    for _ in range(n):
        features = {name: rng.choice(["yes", "no"]) for name in YES_NO_FACTORS}
        features["age_band"] = rng.choice(AGE_BANDS)
        features["gender"] = rng.choice(["male", "female"])
        features["residency_status"] = rng.choice(["migrant", "non_migrant"])
        features["month"] = rng.choice(MONTHS)
        score = (2 * (features["drug_problems"] == "yes")
                 + (features["employment"] == "no")
                 + (features["age_band"] in ("<18", "18-25")))
        label = "yes" if rng.random() < (0.15 + 0.2 * score) else "no"
        records.append(LabeledRecord(features, label))
    return records


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[40, 80, 160, 320])
    parser.add_argument("--max-depth", type=int, default=4)
    args = parser.parse_args()

    task = offender_task()
    rng = random.Random(args.seed)
    print(f"{'n':>5}  {'nb acc':>7}  {'tree acc':>8}")
    for n in args.sizes:
        records = synthesize(n, rng)
        nb = cross_validate(records, task, learner="nb", k=args.k, seed=args.seed)
        tree = cross_validate(records, task, learner="tree", k=args.k,
                              seed=args.seed, max_depth=args.max_depth)
        print(f"{n:>5}  {nb.overall_accuracy:>7.3f}  {tree.overall_accuracy:>8.3f}")

    records = synthesize(max(args.sizes), rng)
    model = train_decision_tree(records, task, max_depth=args.max_depth)
    print(f"\ntree trained on n={max(args.sizes)} (depth <= {args.max_depth}, "
          "first two levels):")

    def walk(node, indent=0, depth=0):
        pad = "  " * indent
        if node.is_leaf or depth == 2:
            print(f"{pad}-> {node.majority_class} {dict(node.support)}")
            return
        print(f"{pad}[{node.feature}]")
        for value, child in node.children.items():
            print(f"{pad} ={value}:")
            walk(child, indent + 1, depth + 1)

    walk(model.root)
    return 0


if __name__ == "__main__":
    import sys
    sys.exit(main())
