"""Versioned JSON serialization for trained models.

Tree structure round-trips exactly; real values round-trip bit-exactly
because the encoder prints shortest-round-trip decimals.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from agestack.errors import UsageError
from agestack.learners.bagging import BaggingModel
from agestack.learners.boosting import GradientBoostingModel
from agestack.learners.logistic import LogisticModel
from agestack.learners.tree import RegressionTree, TreeNode

FORMAT = "agestack-model"
VERSION = 1

Model = RegressionTree | GradientBoostingModel | BaggingModel | LogisticModel


def _node_to_obj(node: TreeNode) -> dict[str, Any]:
    if node.is_leaf:
        return {"value": node.value}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_obj(node.left),
        "right": _node_to_obj(node.right),
    }


def _node_from_obj(obj: dict[str, Any]) -> TreeNode:
    if "value" in obj:
        return TreeNode(value=float(obj["value"]))
    return TreeNode(
        feature=int(obj["feature"]),
        threshold=float(obj["threshold"]),
        left=_node_from_obj(obj["left"]),
        right=_node_from_obj(obj["right"]),
    )


def _tree_to_obj(tree: RegressionTree) -> dict[str, Any]:
    return {
        "max_depth": tree.max_depth,
        "n_features": tree.n_features,
        "root": _node_to_obj(tree.root),
    }


def _tree_from_obj(obj: dict[str, Any]) -> RegressionTree:
    return RegressionTree(
        root=_node_from_obj(obj["root"]),
        n_features=int(obj["n_features"]),
        max_depth=None if obj["max_depth"] is None else int(obj["max_depth"]),
    )


def model_to_json(model: Model) -> str:
    doc: dict[str, Any] = {"format": FORMAT, "version": VERSION}
    if isinstance(model, RegressionTree):
        doc["kind"] = "tree"
        doc["tree"] = _tree_to_obj(model)
    elif isinstance(model, GradientBoostingModel):
        doc["kind"] = "gbr"
        doc["init_value"] = model.init_value
        doc["learning_rate"] = model.learning_rate
        doc["n_features"] = model.n_features
        doc["stages"] = [_tree_to_obj(stage) for stage in model.stages]
    elif isinstance(model, BaggingModel):
        doc["kind"] = "bagging"
        doc["seed"] = model.seed
        doc["n_features"] = model.n_features
        doc["members"] = [_tree_to_obj(member) for member in model.members]
    elif isinstance(model, LogisticModel):
        doc["kind"] = "logistic"
        doc["classes"] = model.classes.tolist()
        doc["weights"] = model.weights.tolist()
        doc["biases"] = model.biases.tolist()
        doc["feature_mean"] = model.feature_mean.tolist()
        doc["feature_scale"] = model.feature_scale.tolist()
        doc["l2_lambda"] = model.l2_lambda
    else:
        raise UsageError(f"cannot serialize {type(model).__name__}")
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def model_from_json(text: str) -> Model:
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise UsageError(f"not an {FORMAT} document")
    if doc.get("version") != VERSION:
        raise UsageError(f"unsupported model version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind == "tree":
        return _tree_from_obj(doc["tree"])
    if kind == "gbr":
        return GradientBoostingModel(
            init_value=float(doc["init_value"]),
            learning_rate=float(doc["learning_rate"]),
            stages=[_tree_from_obj(obj) for obj in doc["stages"]],
            n_features=int(doc["n_features"]),
        )
    if kind == "bagging":
        return BaggingModel(
            members=[_tree_from_obj(obj) for obj in doc["members"]],
            seed=int(doc["seed"]),
            n_features=int(doc["n_features"]),
        )
    if kind == "logistic":
        return LogisticModel(
            classes=np.asarray(doc["classes"], dtype=np.int64),
            weights=np.asarray(doc["weights"], dtype=np.float64),
            biases=np.asarray(doc["biases"], dtype=np.float64),
            feature_mean=np.asarray(doc["feature_mean"], dtype=np.float64),
            feature_scale=np.asarray(doc["feature_scale"], dtype=np.float64),
            l2_lambda=float(doc["l2_lambda"]),
        )
    raise UsageError(f"unknown model kind {kind!r}")
