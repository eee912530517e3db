"""Python access to the intentrefine library."""
import json

from ._core import (
    IntentRefineError,
    detect_explicit,
    exact_match,
    infer_review_line,
    postprocess_explicit,
    request_hash,
    revert_changes,
)
from . import _core

__all__ = [
    "IntentRefineError",
    "confusion",
    "detect_explicit",
    "exact_match",
    "infer_review_line",
    "load_dataset",
    "postprocess_explicit",
    "postprocess_general",
    "request_hash",
    "revert_changes",
    "run_pipeline",
]


def postprocess_general(raw, original, intention, review_line, language=None):
    """`intention` is a dict such as {"type": "general", "kind": "change_word", ...}."""
    return _core.postprocess_general(raw, original, json.dumps(intention), review_line, language)


def confusion(tp, fp, tn, fn):
    return json.loads(_core.confusion_json(tp, fp, tn, fn))


def load_dataset(path):
    """Returns (cases, rejects) as lists of dicts."""
    d = json.loads(_core.load_dataset_json(str(path)))
    return d["cases"], d["rejects"]


def run_pipeline(dataset, output_dir, backend="replay", **options):
    """Runs extract, refine and evaluate; returns the metrics dict."""
    config = dict(options, dataset=str(dataset), output_dir=str(output_dir), backend=backend)
    for key in ("fixtures", "store", "intentions"):
        if config.get(key) is not None:
            config[key] = str(config[key])
    return json.loads(_core.run_pipeline_json(json.dumps(config)))
