#!/usr/bin/env python3
"""Compare linear against linear+dependency feature sets on a synthetic
corpus of balanced verb pairs.

Trains the multiplicative-update and naive-Bayes learners per feature
set, with the majority baseline and a backoff trigram alongside, and
prints one WER table per feature set.

    python scripts/run_feature_comparison.py --sentences 20000 --seed 11
"""
import argparse
import sys

from snowpredict.experiment import ExperimentConfig, run_experiment
from snowpredict.synth import SynthConfig, generate_corpus


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--verbs", type=int, default=20)
    parser.add_argument("--sentences", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--flip", type=float, default=0.3)
    parser.add_argument("--bare", type=float, default=0.05)
    args = parser.parse_args(argv)

    corpus = generate_corpus(
        SynthConfig(
            verbs=args.verbs,
            sentences=args.sentences,
            seed=args.seed,
            flip=args.flip,
            bare=args.bare,
        )
    )
    for feature_set in ("linear", "nonlinear"):
        config = ExperimentConfig(
            feature_set=feature_set, learners=("nb", "winnow", "trigram")
        )
        report = run_experiment(config, corpus)
        print(f"== feature set: {feature_set}")
        print(report.to_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
