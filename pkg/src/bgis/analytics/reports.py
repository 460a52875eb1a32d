"""Crime chart aggregation and likelihood reporting for officials."""
from __future__ import annotations

from collections import Counter
from datetime import date
from typing import TYPE_CHECKING

from ..common import DateWindow
from ..errors import InsufficientClasses, InvalidField
from .dataset import (LabeledRecord, derive_reoffend_records,
                      derive_residency_records, offender_task, residency_task)
from .nb import nb_posterior, train_naive_bayes

if TYPE_CHECKING:
    from ..store import State

CHART_GROUPINGS = ("offense_type", "zone", "month", "residency_status")


def crime_chart(state: "State", window: DateWindow = DateWindow(),
                group_by: str = "offense_type") -> dict:
    """Counts over blotter cases in the window. residency_status counts one
    per (case, respondent) pair; the other groupings count whole cases."""
    if group_by not in CHART_GROUPINGS:
        raise InvalidField(f"group_by must be one of {CHART_GROUPINGS}",
                           field="group_by")
    counts: Counter = Counter()
    for case in state.cases.values():
        if not window.contains(case.date_filed):
            continue
        if group_by == "offense_type":
            counts[case.offense_type] += 1
        elif group_by == "zone":
            counts[case.zone_id] += 1
        elif group_by == "month":
            counts[f"{case.date_filed.year:04d}-{case.date_filed.month:02d}"] += 1
        else:
            for rid in case.respondent_ids:
                vector = case.offender_factors.get(rid)
                if vector is not None:
                    counts[vector.residency_status] += 1
    return dict(sorted(counts.items(), key=lambda kv: str(kv[0])))


def _require_two_classes(records: list[LabeledRecord]) -> None:
    labels = {r.label for r in records}
    if len(labels) < 2:
        raise InsufficientClasses(
            f"need at least 2 classes in the data, found {sorted(labels)}",
            labels=sorted(labels))


def likelihood_report(state: "State", task_name: str, today: date,
                      alpha: float = 1.0) -> dict:
    """Smoothed offending/reoffending posteriors with their support counts."""
    if task_name == "offend_by_residency":
        records = derive_residency_records(state, today)
        _require_two_classes(records)
        task = residency_task()
        model = train_naive_bayes(records, task, alpha=alpha)
        groups = {}
        for group in ("migrant", "non_migrant"):
            in_group = [r for r in records
                        if r.features["residency_status"] == group]
            posterior = nb_posterior(model, {"residency_status": group})
            groups[group] = {
                "records": len(in_group),
                "offenders": sum(1 for r in in_group if r.label == "yes"),
                "posterior": posterior,
                "offend_probability": posterior["yes"],
            }
        return {"task": task_name, "classes": list(task.classes),
                "total_records": len(records), "groups": groups}

    if task_name == "reoffend":
        records = derive_reoffend_records(state)
        _require_two_classes(records)
        task = offender_task()
        model = train_naive_bayes(records, task, alpha=alpha)
        profiles: dict[tuple, dict] = {}
        for record in records:
            key = tuple(sorted(record.features.items()))
            entry = profiles.setdefault(key, {"count": 0, "reoffenders": 0})
            entry["count"] += 1
            entry["reoffenders"] += record.label == "yes"
        rows = []
        for key, entry in profiles.items():
            features = dict(key)
            posterior = nb_posterior(model, features)
            rows.append({
                "profile": features,
                "records": entry["count"],
                "reoffenders": entry["reoffenders"],
                "posterior": posterior,
                "reoffend_probability": posterior["yes"],
            })
        rows.sort(key=lambda r: (-r["reoffend_probability"], -r["records"]))
        return {"task": task_name, "classes": list(task.classes),
                "total_records": len(records), "profiles": rows}

    raise InvalidField("task must be reoffend or offend_by_residency", field="task")
