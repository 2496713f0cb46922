"""Optimized configuration vs. a fixed word-unigram baseline on a noisy corpus.

    python scripts/desk_benchmark.py --seeds 0 1 2 3 4
"""

import argparse
import json
import logging
import time

from autotext.dataio import load_dataset
from autotext.pipeline import FeatureCache
from autotext.selection import TextScorer, ValidationScheme, optimize
from autotext.space import SpaceDescriptor
from autotext.synthetic import noisy_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--data", help="jsonlines corpus (default: synthetic noisy corpus)")
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--samples", type=int, default=32)
    ap.add_argument("--metric", default="macro_f1")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    data = load_dataset(args.data) if args.data else noisy_corpus()
    space = SpaceDescriptor.default()
    baseline = space.make(w1=True)
    cache = FeatureCache([r.text for r in data])
    print(f"{'seed':>4} {'baseline':>9} {'optimized':>9} {'evals':>6} {'secs':>6}")
    for seed in args.seeds:
        scheme = ValidationScheme("kfold", 3, seed=seed)
        t0 = time.perf_counter()
        final, state = optimize(space, data, args.samples, scheme, args.metric, seed=seed, cache=cache)
        base = TextScorer(data, scheme, args.metric, cache=cache)(baseline)
        print(f"{seed:>4} {base:9.4f} {state.memo[final.key()]:9.4f} {state.evaluations:6d} "
              f"{time.perf_counter() - t0:6.1f}")
        if args.verbose:
            print(json.dumps(final.to_json()))


if __name__ == "__main__":
    main()
