"""End-to-end word-prediction experiments with a word-error-rate harness.

The pipeline: split the corpus at a sentence boundary (contiguous, in
document order), build confusion sets from target frequencies, turn
every occurrence of a target word into a prediction example (features
instantiated around the occurrence and interned -- allocation only on
the training side), train the selected learners per training regime, and
score each test regime as WER = mistakes / examples.

Regimes control the confusion set seen by the learners: training with
``all`` treats every other target as a negative example, ``per-set``
only the example's own set members; testing with ``all`` asks the
predictor to pick among all targets, ``per-set`` among the example's own
set.
"""
from __future__ import annotations

import logging
import statistics
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import learner
from .baselines import BOS, EOS, NgramTable, mle_predict
from .confusions import (
    ConfusionSet,
    all_targets_set,
    default_class_map,
    equal_frequency_pairs,
    phonetic_confusion_sets,
)
from .corpus import Sentence, read_corpus_file
from .features import FeatureType, default_feature_types, instantiate
from .learner import NBConfig, SnowNetwork, WinnowConfig
from .lexicon import Lexicon

log = logging.getLogger(__name__)

Predictor = Callable[["PredictionExample", Sequence[str]], str]


@dataclass
class ExperimentConfig:
    corpus: str | None = None
    split_fraction: float = 0.8
    feature_set: str = "linear"  # "linear" | "nonlinear" | "linear+nonlinear"
    learners: tuple[str, ...] = ("nb", "winnow")
    train_regime: str = "per-set"  # "all" | "per-set"
    test_regime: str = "per-set"
    confusion_source: str = "pairs"  # "pairs" | "phonetic" | "all"
    frequency_floor: int = 50
    baseline_cap: float | None = None
    target_pos_prefix: str = "VB"
    pronunciations: Mapping[str, Sequence[str]] | None = None
    class_map: Mapping[str, str] | None = None
    seed: int = 0
    winnow: WinnowConfig = field(default_factory=WinnowConfig)
    nb: NBConfig = field(default_factory=NBConfig)
    regimes: tuple[tuple[str, str], ...] | None = None

    def validate(self) -> None:
        if not 0 < self.split_fraction < 1:
            raise ValueError("split fraction must lie in (0, 1)")
        for name in self.learners:
            if name not in ("winnow", "nb", "trigram"):
                raise ValueError(f"unknown learner {name!r}")
        for regime in self.regime_grid():
            for value in regime:
                if value not in ("all", "per-set"):
                    raise ValueError(f"unknown regime {value!r}")
        if self.confusion_source not in ("pairs", "phonetic", "all"):
            raise ValueError(f"unknown confusion source {self.confusion_source!r}")

    def regime_grid(self) -> tuple[tuple[str, str], ...]:
        return self.regimes or ((self.train_regime, self.test_regime),)


@dataclass(frozen=True)
class PredictionExample:
    sid: int
    sentence: Sentence
    focus: int
    gold: str
    candidates: ConfusionSet
    features: frozenset[int]


@dataclass
class WerResult:
    wer: float
    mistakes: int
    total: int
    per_set: dict[tuple[str, ...], tuple[int, int]]


@dataclass
class RegimeRow:
    label: str
    cells: dict[str, float]
    examples: int


@dataclass
class EvaluationReport:
    columns: list[str]
    rows: list[RegimeRow]
    train_examples: int
    test_examples: int
    feature_count: int
    set_count: int
    set_sizes: list[int]

    def to_text(self) -> str:
        width = max([len("Regime")] + [len(r.label) for r in self.rows]) + 2
        header = "Regime".ljust(width) + "".join(c.rjust(9) for c in self.columns)
        lines = [header]
        for row in self.rows:
            cells = "".join(
                (
                    f"{100 * row.cells[c]:.2f}".rjust(9)
                    if c in row.cells
                    else "-".rjust(9)
                )
                for c in self.columns
            )
            lines.append(row.label.ljust(width) + cells)
        sizes = sorted(self.set_sizes)
        size_note = (
            f"sizes min {sizes[0]} / median {int(statistics.median(sizes))} / max {sizes[-1]}"
            if sizes
            else "no sets"
        )
        lines += [
            "",
            f"train-examples {self.train_examples}",
            f"test-examples {self.test_examples}",
            f"features {self.feature_count}",
            f"confusion-sets {self.set_count} ({size_note})",
        ]
        return "\n".join(lines) + "\n"

    def to_tsv(self) -> str:
        lines = ["\t".join(["regime"] + self.columns + ["examples"])]
        for row in self.rows:
            cells = [
                f"{row.cells[c]:.6f}" if c in row.cells else "" for c in self.columns
            ]
            lines.append("\t".join([row.label] + cells + [str(row.examples)]))
        return "\n".join(lines) + "\n"


def split_corpus(
    sentences: Sequence[Sentence], fraction: float = 0.8, seed: int = 0
) -> tuple[list[Sentence], list[Sentence]]:
    """Contiguous document-order split at the sentence boundary nearest
    the fraction; the training side keeps the extra sentence."""
    if not sentences:
        raise ValueError("empty corpus")
    if not 0 < fraction < 1:
        raise ValueError("split fraction must lie in (0, 1)")
    cut = int(len(sentences) * fraction + 0.5)
    cut = max(1, min(cut, len(sentences)))
    train, test = list(sentences[:cut]), list(sentences[cut:])
    if not test:
        log.warning("test split is empty (%d sentences total)", len(sentences))
    return train, test


def build_assignment(sets: Sequence[ConfusionSet]) -> dict[str, ConfusionSet]:
    assignment: dict[str, ConfusionSet] = {}
    for cs in sets:
        for word in cs.members:
            if word in assignment:
                raise ValueError(f"word {word!r} appears in more than one confusion set")
            assignment[word] = cs
    return assignment


def generate_examples(
    sentences: Sequence[Sentence],
    assignment: Mapping[str, ConfusionSet],
    types: Sequence[FeatureType],
    lexicon: Lexicon,
    allocate: bool,
) -> list[PredictionExample]:
    """One example per occurrence of any assigned target word.

    Identities are interned in sorted order so id allocation is
    deterministic; in no-allocate mode unseen identities are dropped.
    """
    examples = []
    for sid, sentence in enumerate(sentences):
        for token in sentence.tokens:
            candidates = assignment.get(token.form)
            if candidates is None:
                continue
            identities = sorted(instantiate(types, sentence, token.index))
            ids = frozenset(
                fid
                for fid in (lexicon.intern(name, allocate) for name in identities)
                if fid is not None
            )
            examples.append(
                PredictionExample(sid, sentence, token.index, token.form, candidates, ids)
            )
    return examples


def to_learning_examples(
    examples: Sequence[PredictionExample],
) -> list[learner.Example]:
    return [
        learner.Example(ex.features, ex.gold, ex.candidates.members) for ex in examples
    ]


def evaluate_wer(
    predict: Predictor,
    examples: Sequence[PredictionExample],
    candidates: Sequence[str] | None = None,
) -> WerResult:
    """WER of a predictor over examples, with a per-set breakdown.

    `candidates` overrides each example's own confusion set (the
    test-all regime); the example's gold label is always present.
    """
    if not examples:
        raise ValueError("no examples to evaluate")
    mistakes = 0
    per_set: dict[tuple[str, ...], list[int]] = {}
    for example in examples:
        pool = candidates if candidates is not None else example.candidates.members
        predicted = predict(example, pool)
        wrong = predicted != example.gold
        mistakes += wrong
        bucket = per_set.setdefault(example.candidates.members, [0, 0])
        bucket[0] += wrong
        bucket[1] += 1
    return WerResult(
        mistakes / len(examples),
        mistakes,
        len(examples),
        {k: (v[0], v[1]) for k, v in per_set.items()},
    )


def snow_predictor(network: SnowNetwork) -> Predictor:
    def predict(example: PredictionExample, pool: Sequence[str]) -> str:
        return network.predict(example.features, pool)[0]

    return predict


def mle_predictor(counts: Mapping[str, int]) -> Predictor:
    def predict(example: PredictionExample, pool: Sequence[str]) -> str:
        return mle_predict(pool, counts)

    return predict


def trigram_predictor(table: NgramTable, use_right: bool = False) -> Predictor:
    """Rank candidates by the trigram ending at the slot; with
    `use_right`, also add the two trigrams extending to the right."""

    def predict(example: PredictionExample, pool: Sequence[str]) -> str:
        forms = example.sentence.forms
        slot = example.focus - 1
        left = [BOS, BOS] + list(forms[:slot])
        after = list(forms[slot + 1 :]) + [EOS, EOS]

        def score(word: str) -> float:
            value = table.logprob(word, left[-2:])
            if use_right:
                value += table.logprob(after[0], (left[-1], word))
                value += table.logprob(after[1], (word, after[0]))
            return value

        return min(pool, key=lambda w: (-score(w), w))

    return predict


def _regime_tag(regime: str, source: str) -> str:
    if regime == "all":
        return "All"
    return {"pairs": "2", "phonetic": "PC", "all": "All"}[source]


def _target_counts(
    sentences: Sequence[Sentence], pos_prefix: str
) -> Counter:
    return Counter(
        t.form for s in sentences for t in s.tokens if t.pos.startswith(pos_prefix)
    )


def build_confusion_sets(
    config: ExperimentConfig,
    corpus_counts: Mapping[str, int],
    train_counts: Mapping[str, int],
) -> list[ConfusionSet]:
    """Confusion sets per the configured source, with member frequencies
    taken from the training split."""
    if config.confusion_source == "pairs":
        raw = equal_frequency_pairs(corpus_counts, config.frequency_floor)
    else:
        targets = [
            w for w, c in corpus_counts.items() if c >= config.frequency_floor
        ]
        if config.confusion_source == "all":
            raw = [all_targets_set(corpus_counts, targets)]
        else:
            if config.pronunciations is None:
                raise ValueError("phonetic confusion sets need pronunciations")
            class_map = config.class_map or default_class_map()
            raw = phonetic_confusion_sets(
                targets,
                config.pronunciations,
                class_map,
                corpus_counts,
                config.baseline_cap,
            )
    return [
        ConfusionSet(
            cs.members, cs.provenance, tuple(train_counts.get(w, 0) for w in cs.members)
        )
        for cs in raw
    ]


def run_experiment(
    config: ExperimentConfig, sentences: Sequence[Sentence] | None = None
) -> EvaluationReport:
    config.validate()
    if sentences is None:
        if config.corpus is None:
            raise ValueError("no corpus given")
        sentences = read_corpus_file(config.corpus)
    train_sents, test_sents = split_corpus(sentences, config.split_fraction)
    if not test_sents:
        raise ValueError("test split is empty")

    corpus_counts = _target_counts(sentences, config.target_pos_prefix)
    train_counts = _target_counts(train_sents, config.target_pos_prefix)
    sets = build_confusion_sets(config, corpus_counts, train_counts)
    if not sets:
        raise ValueError("no confusion sets survived construction")
    assignment = build_assignment(sets)

    types = default_feature_types(config.feature_set)
    lexicon = Lexicon()
    train_examples = generate_examples(train_sents, assignment, types, lexicon, True)
    test_examples = generate_examples(test_sents, assignment, types, lexicon, False)
    if not train_examples or not test_examples:
        raise ValueError("target words do not occur on both sides of the split")
    learn_examples = to_learning_examples(train_examples)

    all_targets = tuple(sorted(assignment))
    networks: dict[tuple[str, str], SnowNetwork] = {}
    for rule in config.learners:
        if rule == "trigram":
            continue
        for train_regime in {tr for tr, _ in config.regime_grid()}:
            net = SnowNetwork(
                rule, config.winnow if rule == "winnow" else config.nb
            )
            net.train(learn_examples, regime=train_regime)
            networks[(rule, train_regime)] = net
    table = (
        NgramTable.build([s.forms for s in train_sents])
        if "trigram" in config.learners
        else None
    )

    columns = ["Bline"]
    for rule in ("nb", "winnow", "trigram"):
        if rule in config.learners:
            columns.append({"nb": "NB", "winnow": "SNoW", "trigram": "Trigram"}[rule])

    rows = []
    for train_regime, test_regime in config.regime_grid():
        pool = all_targets if test_regime == "all" else None
        cells = {"Bline": evaluate_wer(mle_predictor(train_counts), test_examples, pool).wer}
        if "nb" in config.learners:
            cells["NB"] = evaluate_wer(
                snow_predictor(networks[("nb", train_regime)]), test_examples, pool
            ).wer
        if "winnow" in config.learners:
            cells["SNoW"] = evaluate_wer(
                snow_predictor(networks[("winnow", train_regime)]), test_examples, pool
            ).wer
        if table is not None:
            cells["Trigram"] = evaluate_wer(trigram_predictor(table), test_examples, pool).wer
        label = (
            f"Train {_regime_tag(train_regime, config.confusion_source)} "
            f"Test {_regime_tag(test_regime, config.confusion_source)}"
        )
        rows.append(RegimeRow(label, cells, len(test_examples)))

    return EvaluationReport(
        columns=columns,
        rows=rows,
        train_examples=len(train_examples),
        test_examples=len(test_examples),
        feature_count=len(lexicon),
        set_count=len(sets),
        set_sizes=[len(cs.members) for cs in sets],
    )
