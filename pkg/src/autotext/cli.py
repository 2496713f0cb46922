"""Command-line entry point: ``autotext {optimize,train,predict,evaluate,space}``.

Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import dataio
from .metrics import score_labels
from .selection import ValidationError, ValidationScheme, fit_final, optimize
from .space import SpaceDescriptor, neighborhood, space_size
from .tokenize import ConfigurationError
from .vectorize import DegenerateVocabularyError

logger = logging.getLogger("autotext")

CLI_METRICS = ("macro_f1", "micro_f1", "accuracy")


class UsageError(Exception):
    pass


def _int_at_least(lo: int):
    def parse(s: str) -> int:
        v = int(s)
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}")
        return v

    return parse


def _open_unit(s: str) -> float:
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autotext", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="search the configuration space")
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=("jsonlines", "csv"), default="jsonlines")
    p.add_argument("--metric", choices=CLI_METRICS, default="macro_f1")
    p.add_argument("--scheme", choices=("kfold", "binary"), default="kfold")
    p.add_argument("--k", type=_int_at_least(2), default=3)
    p.add_argument("--beta", type=_open_unit, default=0.7)
    p.add_argument("--samples", type=_int_at_least(1), default=32)
    p.add_argument("--seed", type=int, default=None, help="default: $AUTOTEXT_SEED, else 0")
    p.add_argument("--threads", type=_int_at_least(1), default=os.cpu_count() or 1)
    p.add_argument("--out-config", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--timing", action="store_true", help="add wall_time to the report")

    p = sub.add_parser("train", help="fit a configuration on a full dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=("jsonlines", "csv"), default="jsonlines")
    p.add_argument("--config", required=True)
    p.add_argument("--out-model", required=True)

    p = sub.add_parser("predict", help="label texts with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=("jsonlines", "csv"), default="jsonlines")
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="score a saved model on labeled data")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=("jsonlines", "csv"), default="jsonlines")
    p.add_argument("--metric", choices=CLI_METRICS, default="macro_f1")

    p = sub.add_parser("space", help="inspect the configuration space")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--describe", action="store_true")
    g.add_argument("--size", action="store_true")
    g.add_argument("--neighbors", metavar="CONFIG_PATH")
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("AUTOTEXT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"AUTOTEXT_SEED must be an integer, got {env!r}")


def _load_config(path):
    if not os.path.exists(path):
        raise UsageError(f"configuration file not found: {path}")
    return dataio.load_config(path)


def cmd_optimize(args) -> int:
    data = dataio.load_dataset(args.data, args.format)
    scheme = ValidationScheme(
        "kfold" if args.scheme == "kfold" else "binary_partition", args.k, args.beta, _seed(args)
    )
    t0 = time.perf_counter()
    final, state = optimize(
        SpaceDescriptor.default(), data, args.samples, scheme, args.metric,
        seed=scheme.seed, threads=args.threads,
    )
    wall = time.perf_counter() - t0
    dataio.save_config(final, args.out_config)
    dataio.save_report(state.report(final, wall if args.timing else None), args.report)
    logger.info("%d evaluations in %.1fs", state.evaluations, wall)
    print(f"{state.memo[final.key()]:.6f}")
    return 0


def cmd_train(args) -> int:
    config = _load_config(args.config)
    data = dataio.load_dataset(args.data, args.format)
    model = fit_final(config, data)
    dataio.save_model(model, args.out_model)
    return 0


def cmd_predict(args) -> int:
    model = dataio.load_model(args.model)
    records = dataio.load_dataset(args.data, args.format, require_label=False)
    texts = [r.text for r in records]
    with open(args.out, "w", encoding="utf-8") as fh:
        for text, label in zip(texts, model.predict(texts)):
            fh.write(json.dumps({"text": text, "predicted": label}, ensure_ascii=False) + "\n")
    return 0


def cmd_evaluate(args) -> int:
    model = dataio.load_model(args.model)
    records = dataio.load_dataset(args.data, args.format)
    pred = model.predict([r.text for r in records])
    print(f"{score_labels(args.metric, [r.label for r in records], pred):.6f}")
    return 0


def cmd_space(args) -> int:
    space = SpaceDescriptor.default()
    if args.size:
        print(space_size(space))
    elif args.describe:
        for s in space.slots:
            print(json.dumps({"slot": s.name, "domain": list(s.domain)}))
    else:
        config = _load_config(args.neighbors)
        for c in neighborhood(config, 1):
            print(json.dumps(c.to_json()))
    return 0


COMMANDS = {
    "optimize": cmd_optimize,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "space": cmd_space,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValidationError, ConfigurationError) as exc:
        print(f"autotext: error: {exc}", file=sys.stderr)
        return 2
    except (dataio.DatasetError, dataio.ModelFormatError, DegenerateVocabularyError, OSError, ValueError) as exc:
        print(f"autotext: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
