"""Model file round trip: versioned JSON container with a kind tag.

Serialization uses sorted keys and deterministic float repr, so a
deterministic training run produces byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import CorruptModel, KindMismatch

MAGIC = "phishlens-model"
FORMAT_VERSION = 1


def save_model(model, path: str | Path) -> None:
    payload = {
        "magic": MAGIC,
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "feature_schema_version": model.feature_schema_version,
        "params": model.params(),
        "metadata": model.metadata,
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1), encoding="utf-8")


def load_model(path: str | Path, expect_kind: str | None = None):
    from .forest import RandomForestModel
    from .logistic import LogisticModel
    from .naive_bayes import NaiveBayesModel

    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CorruptModel(f"cannot read model file {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("magic") != MAGIC:
        raise CorruptModel(f"{path} is not a model file")
    try:
        kind = payload["kind"]
        if expect_kind is not None and kind != expect_kind:
            raise KindMismatch(f"expected a {expect_kind} model, found {kind}")
        loaders = {
            "naive_bayes": NaiveBayesModel.from_params,
            "logistic": LogisticModel.from_params,
            "random_forest": RandomForestModel.from_params,
        }
        if kind not in loaders:
            raise CorruptModel(f"unknown model kind {kind!r}")
        model = loaders[kind](payload["params"], payload.get("metadata", {}))
        model.feature_schema_version = payload["feature_schema_version"]
        return model
    except KindMismatch:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"model file {path} is structurally invalid: {exc}") from exc
