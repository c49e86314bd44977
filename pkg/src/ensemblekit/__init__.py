"""Bagging, boosting and stacking ensembles over pluggable weak learners."""

__version__ = "0.1.0"

from .bagging import BaggingModel, fit_bagging, majority_vote, predict_bagging
from .boosting import BoostModel, fit_boosting, predict_boosting
from .data import (
    Dataset,
    SplitSpec,
    balance_classes,
    bootstrap_sample,
    load_feature_csv,
    stratified_split,
)
from .learners import LearnerSpec, fit_logreg, fit_stump, predict_label, predict_proba
from .metrics import accuracy, classification_report, confusion_matrix, per_class_prf
from .stacking import StackingModel, fit_stacking, predict_stacking

__all__ = [
    "BaggingModel", "BoostModel", "Dataset", "LearnerSpec", "SplitSpec", "StackingModel",
    "accuracy", "balance_classes", "bootstrap_sample", "classification_report", "confusion_matrix",
    "fit_bagging", "fit_boosting", "fit_logreg", "fit_stacking", "fit_stump", "load_feature_csv",
    "majority_vote", "per_class_prf", "predict_bagging", "predict_boosting", "predict_label",
    "predict_proba", "predict_stacking", "stratified_split",
]
