"""Reading labeled corpora and writing models, configurations and reports.

Model files are a single JSON document::

    {"format_version": 1, "prep": {...}, "tokenizers": [...], "weighting": {...},
     "vocabulary": {"n_docs": N, "tokens": [[token, cf, df], ...]},
     "classifier": {"kind": "linear_svm", "classes": [...], "hyper_c": C,
                    "weights": [[...], ...], "bias": [...]}}

Floats are written with ``repr`` precision, so a reloaded model predicts
exactly like the saved one.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .classifier import LinearModel
from .pipeline import FORMAT_VERSION, TextModel
from .selection import Record
from .space import Configuration, SpaceDescriptor, from_json
from .tokenize import TokenizerSet
from .transform import PreprocessConfig
from .vectorize import Vocabulary, WeightingConfig


class DatasetError(ValueError):
    pass


class ModelFormatError(ValueError):
    pass


def _record(obj, lineno: int, require_label: bool) -> Record:
    if not isinstance(obj, dict):
        raise DatasetError(f"expected an object at line {lineno}")
    fields = ("text", "label") if require_label else ("text",)
    for name in fields:
        if name not in obj:
            raise DatasetError(f"missing field: {name} at line {lineno}")
        if not isinstance(obj[name], str):
            raise DatasetError(f"field {name} must be a string at line {lineno}")
    label = obj.get("label", "")
    if require_label and not label:
        raise DatasetError(f"empty label at line {lineno}")
    return Record(obj["text"], label if isinstance(label, str) else str(label))


def load_dataset(path, format: str = "jsonlines", require_label: bool = True) -> list[Record]:
    """Records in file order.

    ``jsonlines`` expects one object with string ``text`` and ``label`` per
    line (blank lines are skipped); ``csv`` expects a header naming the
    ``text`` and ``label`` columns.
    """
    path = Path(path)
    records: list[Record] = []
    if format == "jsonlines":
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DatasetError(f"malformed JSON at line {lineno}: {exc.msg}") from exc
                records.append(_record(obj, lineno, require_label))
    elif format == "csv":
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh, strict=True)
            try:
                header = reader.fieldnames
                if header is None:
                    raise DatasetError(f"{path} is empty")
                for name in ("text", "label") if require_label else ("text",):
                    if name not in header:
                        raise DatasetError(f"missing field: {name} at line 1")
                for row in reader:
                    if None in row or any(v is None for v in row.values()):
                        raise DatasetError(f"wrong number of columns at line {reader.line_num}")
                    records.append(_record(row, reader.line_num, require_label))
            except csv.Error as exc:
                raise DatasetError(f"malformed CSV at line {reader.line_num}: {exc}") from exc
    else:
        raise DatasetError(f"unknown dataset format: {format!r}")
    if not records:
        raise DatasetError(f"{path} contains no records")
    return records


def save_dataset(records: Sequence[Record], path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({"text": r[0], "label": r[1]}, ensure_ascii=False) + "\n")


def _dump(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def model_to_json(model: TextModel) -> dict:
    vocab, clf = model.vocab, model.classifier
    return {
        "format_version": model.format_version,
        "prep": model.prep.to_dict(),
        "tokenizers": model.tokenizers.to_list(),
        "weighting": model.weighting.to_dict(),
        "vocabulary": {
            "n_docs": vocab.n_docs,
            "tokens": [
                [t, int(cf), int(df)]
                for t, cf, df in zip(vocab.tokens, vocab.collection_freq, vocab.doc_freq)
            ],
        },
        "classifier": {
            "kind": "linear_svm",
            "classes": list(clf.classes),
            "hyper_c": clf.hyper_c,
            "weights": clf.weights.tolist(),
            "bias": clf.bias.tolist(),
        },
    }


def model_from_json(obj) -> TextModel:
    if not isinstance(obj, dict) or "format_version" not in obj:
        raise ModelFormatError("not a model document")
    if obj["format_version"] != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version: {obj['format_version']}")
    try:
        table = obj["vocabulary"]["tokens"]
        vocab = Vocabulary(
            tuple(t for t, _, _ in table),
            np.array([cf for _, cf, _ in table], dtype=np.int64),
            np.array([df for _, _, df in table], dtype=np.int64),
            int(obj["vocabulary"]["n_docs"]),
        )
        c = obj["classifier"]
        weights = np.array(c["weights"], dtype=np.float64).reshape(len(c["classes"]), len(vocab))
        clf = LinearModel(tuple(c["classes"]), weights, np.array(c["bias"], dtype=np.float64), float(c["hyper_c"]))
        return TextModel(
            PreprocessConfig.from_dict(obj["prep"]),
            TokenizerSet.of(obj["tokenizers"]),
            WeightingConfig.from_dict(obj["weighting"]),
            vocab,
            clf,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"corrupted model document: {exc}") from exc


def save_model(model: TextModel, path) -> None:
    _dump(model_to_json(model), path)


def load_model(path) -> TextModel:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"cannot parse model file {path}: {exc}") from exc
    return model_from_json(obj)


def save_config(config: Configuration, path) -> None:
    _dump(config.to_json(), path)


def load_config(path, space: SpaceDescriptor | None = None) -> Configuration:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"cannot parse configuration file {path}: {exc}") from exc
    return from_json(obj, space)


def save_report(report: dict, path) -> None:
    _dump(report, path)
