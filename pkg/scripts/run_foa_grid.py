#!/usr/bin/env python3
"""Focus-of-attention study on a synthetic corpus.

Prints the regime grid for equal-frequency pairs (train/test with all
targets vs. per pair), then the phonetic-class grids built from the
generated pronunciations, uncapped and with the 98% baseline cap.

    python scripts/run_foa_grid.py --sentences 20000 --seed 11
"""
import argparse
import sys

from snowpredict.experiment import ExperimentConfig, run_experiment
from snowpredict.synth import SynthConfig, generate_corpus, pronunciation_lexicon

PAIR_GRID = (("all", "all"), ("all", "per-set"), ("per-set", "per-set"))
PC_GRID = (("all", "per-set"), ("per-set", "per-set"))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--verbs", type=int, default=20)
    parser.add_argument("--sentences", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args(argv)

    synth_config = SynthConfig(
        verbs=args.verbs, sentences=args.sentences, seed=args.seed
    )
    corpus = generate_corpus(synth_config)

    pairs = ExperimentConfig(
        feature_set="linear", learners=("nb", "winnow"), regimes=PAIR_GRID
    )
    print("== equal-frequency pairs")
    print(run_experiment(pairs, corpus).to_text())

    pronunciations = pronunciation_lexicon(synth_config)
    for cap, title in ((None, "phonetic classes"), (0.98, "phonetic classes, capped")):
        config = ExperimentConfig(
            feature_set="linear",
            learners=("nb", "winnow"),
            confusion_source="phonetic",
            pronunciations=pronunciations,
            baseline_cap=cap,
            regimes=PC_GRID,
        )
        print(f"== {title}")
        print(run_experiment(config, corpus).to_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
