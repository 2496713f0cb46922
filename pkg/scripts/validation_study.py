"""Predicted vs. actual performance under k-fold and binary-partition scoring.

The corpus is split 70/30.  The search runs on the 70% part with each
validation scheme; the chosen configuration is then refit on that whole part
and measured on the held-out 30%.  A large gap between the search score and
the held-out score signals an over-optimistic validation scheme.

    python scripts/validation_study.py --per-class 40 --out study.json
"""

import argparse
import json

from autotext.metrics import score_labels
from autotext.selection import ValidationScheme, binary_partition, fit_final, optimize
from autotext.space import SpaceDescriptor
from autotext.synthetic import noisy_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--per-class", type=int, default=40)
    ap.add_argument("--noise", type=float, default=0.3)
    ap.add_argument("--samples", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--folds", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--betas", type=float, nargs="+", default=[0.3, 0.5, 0.7, 0.9])
    ap.add_argument("--out", help="write the rows as JSON")
    args = ap.parse_args()

    data = noisy_corpus(args.per_class, args.noise, seed=args.seed)
    train_idx, test_idx = binary_partition(data, 0.7, seed=args.seed)
    train = [data[i] for i in train_idx]
    test = [data[i] for i in test_idx]
    schemes = [ValidationScheme("kfold", k, seed=args.seed) for k in args.folds]
    schemes += [ValidationScheme("binary_partition", beta=b, seed=args.seed) for b in args.betas]

    rows = []
    print(f"{'scheme':<18} {'predicted':>9} {'actual':>9}")
    for scheme in schemes:
        final, state = optimize(SpaceDescriptor.default(), train, args.samples, scheme, seed=args.seed)
        model = fit_final(final, train)
        actual = score_labels("macro_f1", [r.label for r in test], model.predict([r.text for r in test]))
        name = f"kfold k={scheme.k}" if scheme.kind == "kfold" else f"binary beta={scheme.beta}"
        predicted = state.memo[final.key()]
        print(f"{name:<18} {predicted:9.4f} {actual:9.4f}")
        rows.append({"scheme": name, "predicted": predicted, "actual": actual, "config": final.to_json()})
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
