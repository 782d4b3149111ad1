"""From-scratch meta-learners: CART trees, bagging, boosting, logistic."""

from agestack.learners.tree import RegressionTree, TreeNode, fit_tree
from agestack.learners.boosting import GradientBoostingModel, fit_gbr
from agestack.learners.bagging import BaggingModel, fit_bagging
from agestack.learners.logistic import LogisticModel, fit_logistic
from agestack.learners.serialize import model_from_json, model_to_json

__all__ = [
    "RegressionTree",
    "TreeNode",
    "fit_tree",
    "GradientBoostingModel",
    "fit_gbr",
    "BaggingModel",
    "fit_bagging",
    "LogisticModel",
    "fit_logistic",
    "model_from_json",
    "model_to_json",
]
