"""Regenerate the bundled synthetic corpora under data/."""

import argparse
from pathlib import Path

from autotext.dataio import save_dataset
from autotext.synthetic import noisy_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=Path(__file__).resolve().parent.parent / "data", type=Path)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    save_dataset(noisy_corpus(500, 0.2, seed=0), args.out_dir / "noisy_corpus.jsonl")
    save_dataset(noisy_corpus(40, 0.2, seed=1), args.out_dir / "toy.jsonl")


if __name__ == "__main__":
    main()
