"""Feature schemas and labeled-record derivation for the crime classifiers.

All features are categorical: the numeric age is binned into bands and the
filing date becomes a month-of-year feature, so likelihood tables and tree
splits are exact finite tallies. The value "unknown" marks missing data and
is never part of a declared value set.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import date
from typing import TYPE_CHECKING, Mapping, Sequence

from ..casework import YES_NO_FACTORS
from ..errors import InvalidField, MalformedCsv, SchemaMismatch, UnknownLabel

if TYPE_CHECKING:
    from ..store import State

UNKNOWN = "unknown"

AGE_BANDS = ("<18", "18-25", "26-40", "41-60", ">60")
MONTHS = tuple(f"{m:02d}" for m in range(1, 13))


def band_age(age: int) -> str:
    if age < 18:
        return "<18"
    if age <= 25:
        return "18-25"
    if age <= 40:
        return "26-40"
    if age <= 60:
        return "41-60"
    return ">60"


@dataclass(frozen=True)
class Task:
    """A classification task: ordered feature schema plus ordered class set.

    Feature order breaks split-gain ties; class order breaks majority ties."""

    features: tuple[tuple[str, tuple[str, ...]], ...]
    classes: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.classes)) != len(self.classes) or not self.classes:
            raise InvalidField("classes must be a non-empty set", field="classes")
        for name, values in self.features:
            if UNKNOWN in values:
                raise InvalidField(f"feature {name}: 'unknown' cannot be a declared value",
                                   field=name)
            if len(values) < 2:
                raise InvalidField(f"feature {name} needs >=2 declared values", field=name)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.features)

    def values_of(self, feature: str) -> tuple[str, ...]:
        for name, values in self.features:
            if name == feature:
                return values
        raise SchemaMismatch(f"feature {feature!r} not in schema", feature=feature)

    def check_features(self, features: Mapping[str, str]) -> None:
        declared = dict(self.features)
        for name, value in features.items():
            if name not in declared:
                raise SchemaMismatch(f"unexpected feature {name!r}", feature=name)
            if value != UNKNOWN and value not in declared[name]:
                raise SchemaMismatch(
                    f"value {value!r} not declared for feature {name!r}",
                    feature=name, value=value)

    def check_label(self, label: str) -> None:
        if label not in self.classes:
            raise UnknownLabel(f"label {label!r} not in class set {self.classes}",
                               label=label)


@dataclass(frozen=True)
class LabeledRecord:
    features: Mapping[str, str]
    label: str


def offender_task(classes: Sequence[str] = ("yes", "no")) -> Task:
    features = tuple(
        [(name, ("yes", "no")) for name in YES_NO_FACTORS]
        + [("age_band", AGE_BANDS),
           ("gender", ("male", "female")),
           ("residency_status", ("migrant", "non_migrant")),
           ("month", MONTHS)]
    )
    return Task(features=features, classes=tuple(classes))


def residency_task(classes: Sequence[str] = ("yes", "no")) -> Task:
    return Task(features=(
        ("residency_status", ("migrant", "non_migrant")),
        ("gender", ("male", "female")),
        ("age_band", AGE_BANDS),
    ), classes=tuple(classes))


def _factor_features(vector, month: str) -> dict:
    features = {name: getattr(vector, name) for name in YES_NO_FACTORS}
    features["age_band"] = band_age(vector.age)
    features["gender"] = vector.gender
    features["residency_status"] = vector.residency_status
    features["month"] = month
    return features


def derive_reoffend_records(state: "State") -> list[LabeledRecord]:
    """One record per (case, respondent); a respondent with a later case is a
    reoffender at the time of each earlier one."""
    ordered = sorted(state.cases.values(),
                     key=lambda c: (c.date_filed, state.case_order[c.case_number]))
    records = []
    for i, case in enumerate(ordered):
        month = f"{case.date_filed.month:02d}"
        for rid in case.respondent_ids:
            vector = case.offender_factors.get(rid)
            if vector is None:
                continue
            later = any(rid in other.respondent_ids for other in ordered[i + 1:])
            records.append(LabeledRecord(
                features=_factor_features(vector, month),
                label="yes" if later else "no"))
    return records


def derive_residency_records(state: "State", today: date) -> list[LabeledRecord]:
    """One record per resident; label is whether they appear as a respondent."""
    offenders = {rid for case in state.cases.values() for rid in case.respondent_ids}
    records = []
    for r in state.residents.values():
        age = today.year - r.birthdate.year \
            - ((today.month, today.day) < (r.birthdate.month, r.birthdate.day))
        records.append(LabeledRecord(
            features={"residency_status": r.residency_status,
                      "gender": r.gender,
                      "age_band": band_age(age)},
            label="yes" if r.resident_id in offenders else "no"))
    return records


DATASET_CSV_COLUMNS = list(YES_NO_FACTORS) + [
    "age", "gender", "residency_status", "month", "label"]


def import_dataset_csv(data: bytes) -> tuple[list[LabeledRecord], Task]:
    """Load an offender-factor dataset; classes are the sorted distinct labels."""
    try:
        reader = csv.DictReader(io.StringIO(data.decode("utf-8")))
        rows = list(reader)
    except (UnicodeDecodeError, csv.Error) as exc:
        raise MalformedCsv(f"cannot parse dataset CSV: {exc}")
    if reader.fieldnames != DATASET_CSV_COLUMNS:
        raise MalformedCsv(
            f"dataset CSV header must be {','.join(DATASET_CSV_COLUMNS)}")
    records = []
    labels = set()
    for row in rows:
        features = {name: (row[name].strip() or UNKNOWN) for name in YES_NO_FACTORS}
        age_text = row["age"].strip()
        if age_text:
            try:
                features["age_band"] = band_age(int(age_text))
            except ValueError:
                raise MalformedCsv(f"bad age value {age_text!r}")
        else:
            features["age_band"] = UNKNOWN
        features["gender"] = row["gender"].strip() or UNKNOWN
        features["residency_status"] = row["residency_status"].strip() or UNKNOWN
        month = row["month"].strip()
        features["month"] = f"{int(month):02d}" if month else UNKNOWN
        label = row["label"].strip()
        if not label:
            raise MalformedCsv("missing label")
        labels.add(label)
        records.append(LabeledRecord(features=features, label=label))
    task = offender_task(classes=tuple(sorted(labels)))
    for record in records:
        task.check_features(record.features)
    return records, task
