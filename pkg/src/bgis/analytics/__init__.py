from .dataset import (AGE_BANDS, DATASET_CSV_COLUMNS, UNKNOWN, LabeledRecord,
                      Task, band_age, derive_reoffend_records,
                      derive_residency_records, import_dataset_csv,
                      offender_task, residency_task)
from .evaluate import (ConstantLearner, DecisionTreeLearner, EvaluationReport,
                       NaiveBayesLearner, cross_validate, make_folds,
                       make_learner)
from .nb import NaiveBayesModel, nb_posterior, train_naive_bayes
from .reports import CHART_GROUPINGS, crime_chart, likelihood_report
from .tree import (DecisionTreeModel, TreeNode, entropy, information_gain,
                   train_decision_tree, tree_predict)

from ..errors import InvalidField


def load_model(doc: dict):
    """Rebuild a trained model from its JSON export."""
    kind = doc.get("type")
    if kind == "naive_bayes":
        return NaiveBayesModel.from_payload(doc)
    if kind == "decision_tree":
        return DecisionTreeModel.from_payload(doc)
    raise InvalidField(f"unknown model type {kind!r}", field="type")

__all__ = [
    "AGE_BANDS", "DATASET_CSV_COLUMNS", "UNKNOWN", "LabeledRecord", "Task",
    "band_age", "derive_reoffend_records", "derive_residency_records",
    "import_dataset_csv", "offender_task", "residency_task",
    "ConstantLearner", "DecisionTreeLearner", "EvaluationReport",
    "NaiveBayesLearner", "cross_validate", "make_folds", "make_learner",
    "NaiveBayesModel", "nb_posterior", "train_naive_bayes",
    "CHART_GROUPINGS", "crime_chart", "likelihood_report",
    "DecisionTreeModel", "TreeNode", "entropy", "information_gain",
    "train_decision_tree", "tree_predict", "load_model",
]
