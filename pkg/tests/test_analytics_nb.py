import random

import pytest
from hypothesis import given, strategies as st

from bgis.analytics import (LabeledRecord, Task, nb_posterior,
                            train_naive_bayes)
from bgis.errors import EmptyDataset, InvalidField, SchemaMismatch, UnknownLabel

from fixtures import D1_TASK, d1_records, d1_rows
from oracles import bayes_posterior_oracle

TINY = Task(features=(("f", ("a", "b")),), classes=("yes", "no"))


class TestTraining:
    def test_smoothed_prior_three_to_one(self):
        records = [LabeledRecord({"f": "a"}, "yes")] * 3 \
            + [LabeledRecord({"f": "b"}, "no")]
        model = train_naive_bayes(records, TINY, alpha=1.0)
        assert model.prior("yes") == pytest.approx((3 + 1) / (4 + 2))
        assert model.prior("yes") == pytest.approx(2 / 3)

    def test_empty_dataset_rejected(self):
        with pytest.raises(EmptyDataset):
            train_naive_bayes([], TINY)

    def test_unknown_label_rejected(self):
        with pytest.raises(UnknownLabel):
            train_naive_bayes([LabeledRecord({"f": "a"}, "maybe")], TINY)

    def test_nonpositive_alpha_rejected(self):
        with pytest.raises(InvalidField):
            train_naive_bayes([LabeledRecord({"f": "a"}, "yes")], TINY, alpha=0)

    def test_d1_count_tables_match_hand_tally(self):
        model = train_naive_bayes(d1_records(), D1_TASK, alpha=1.0)
        assert model.class_counts == {"yes": 6, "no": 6}
        # tallies computed from the table before the implementation existed
        assert model.feature_value_counts["yes"]["employment"] == {"no": 5, "yes": 1}
        assert model.feature_value_counts["no"]["employment"] == {"yes": 5, "no": 1}
        assert model.feature_value_counts["yes"]["age_band"] \
            == {"18-25": 3, "26-40": 2, "<18": 1}
        assert model.feature_value_counts["no"]["age_band"] \
            == {"41-60": 2, "26-40": 3, ">60": 1}
        assert model.feature_value_counts["yes"]["residency_status"] \
            == {"migrant": 4, "non_migrant": 2}
        assert model.feature_value_counts["no"]["residency_status"] \
            == {"non_migrant": 4, "migrant": 2}

    def test_d1_counts_equal_independent_tally(self):
        model = train_naive_bayes(d1_records(), D1_TASK, alpha=1.0)
        rows = d1_rows()
        for cls in D1_TASK.classes:
            for name, _ in D1_TASK.features:
                tally = {}
                for features, label in rows:
                    if label == cls and features.get(name, "unknown") != "unknown":
                        tally[features[name]] = tally.get(features[name], 0) + 1
                assert model.feature_value_counts[cls][name] == tally

    def test_per_class_value_counts_sum_to_class_count(self):
        model = train_naive_bayes(d1_records(), D1_TASK, alpha=1.0)
        for cls in D1_TASK.classes:
            for name, _ in D1_TASK.features:
                total = sum(model.feature_value_counts[cls][name].values())
                assert total == model.class_counts[cls]


class TestPosterior:
    def test_no_evidence_equals_smoothed_prior(self):
        model = train_naive_bayes(d1_records(), D1_TASK, alpha=1.0)
        posterior = nb_posterior(model, {name: "unknown"
                                         for name in D1_TASK.feature_names})
        norm = model.prior("yes") + model.prior("no")
        assert posterior["yes"] == pytest.approx(model.prior("yes") / norm, abs=1e-12)

    def test_perfect_feature_small_alpha_limit(self):
        records = [LabeledRecord({"f": "a"}, "yes")] * 4 \
            + [LabeledRecord({"f": "b"}, "no")] * 4
        model = train_naive_bayes(records, TINY, alpha=1e-6)
        posterior = nb_posterior(model, {"f": "a"})
        assert posterior["yes"] == pytest.approx(1.0, abs=1e-3)

    def test_d1_query_matches_enumeration_oracle_frozen(self):
        model = train_naive_bayes(d1_records(), D1_TASK, alpha=1.0)
        query = {"residency_status": "migrant", "gender": "male",
                 "age_band": "18-25"}
        posterior = nb_posterior(model, query)
        # frozen from the direct-enumeration oracle (exactly 10/11)
        assert posterior["yes"] == pytest.approx(0.9090909090909091, abs=1e-9)
        live = bayes_posterior_oracle(d1_rows(), list(D1_TASK.classes),
                                      list(D1_TASK.features), query, alpha=1.0)
        for cls in D1_TASK.classes:
            assert posterior[cls] == pytest.approx(live[cls], abs=1e-9)

    def test_posterior_sums_to_one_components_open_interval(self):
        model = train_naive_bayes(d1_records(), D1_TASK, alpha=1.0)
        for features, _ in d1_rows():
            posterior = nb_posterior(model, features)
            assert sum(posterior.values()) == pytest.approx(1.0, abs=1e-12)
            assert all(0.0 < p < 1.0 for p in posterior.values())

    def test_schema_mismatch_rejected(self):
        model = train_naive_bayes(d1_records(), D1_TASK, alpha=1.0)
        with pytest.raises(SchemaMismatch):
            nb_posterior(model, {"shoe_size": "44"})
        with pytest.raises(SchemaMismatch):
            nb_posterior(model, {"gender": "other"})

    def test_argmax_invariant_under_dataset_duplication(self):
        single = train_naive_bayes(d1_records(), D1_TASK, alpha=1.0)
        double = train_naive_bayes(d1_records() * 2, D1_TASK, alpha=1.0)
        for features, _ in d1_rows():
            p1 = nb_posterior(single, features)
            p2 = nb_posterior(double, features)
            assert max(p1, key=p1.get) == max(p2, key=p2.get)


@given(data=st.data(),
       n=st.integers(2, 40),
       n_features=st.integers(1, 4),
       n_values=st.integers(2, 3),
       alpha=st.floats(0.01, 5.0))
def test_random_datasets_match_enumeration_oracle(data, n, n_features,
                                                  n_values, alpha):
    seed = data.draw(st.integers(0, 10_000))
    rng = random.Random(seed)
    schema = tuple((f"f{i}", tuple(f"v{j}" for j in range(n_values)))
                   for i in range(n_features))
    classes = ("c0", "c1")
    task = Task(features=schema, classes=classes)
    records = []
    for _ in range(n):
        features = {name: rng.choice(values) for name, values in schema}
        records.append(LabeledRecord(features, rng.choice(classes)))
    model = train_naive_bayes(records, task, alpha=alpha)
    rows = [(r.features, r.label) for r in records]
    query = {name: rng.choice(values + ("unknown",)) for name, values in schema}
    mine = nb_posterior(model, query)
    ref = bayes_posterior_oracle(rows, list(classes), list(schema), query, alpha)
    for cls in classes:
        assert mine[cls] == pytest.approx(ref[cls], abs=1e-9)
    assert sum(mine.values()) == pytest.approx(1.0, abs=1e-12)
