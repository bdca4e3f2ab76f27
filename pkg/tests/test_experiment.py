import random

import pytest

from snowpredict.confusions import ConfusionSet
from snowpredict.corpus import Sentence, Token
from snowpredict.experiment import (
    ExperimentConfig,
    build_assignment,
    evaluate_wer,
    generate_examples,
    mle_predictor,
    run_experiment,
    snow_predictor,
    split_corpus,
    to_learning_examples,
    trigram_predictor,
)
from snowpredict.baselines import NgramTable
from snowpredict.features import default_feature_types
from snowpredict.learner import SnowNetwork
from snowpredict.lexicon import Lexicon
from snowpredict.synth import SynthConfig, generate_corpus


def simple_sentence(words, verb_position):
    tokens = []
    for i, word in enumerate(words, 1):
        if i == verb_position:
            tokens.append(Token(i, word, "VBZ", 0, ""))
        else:
            head = verb_position if i != verb_position else 0
            tokens.append(Token(i, word, "NN", head, "mod"))
    return Sentence(tokens)


class TestSplit:
    def test_eighty_twenty(self):
        sents = [simple_sentence(["w", "go"], 2) for _ in range(100)]
        train, test = split_corpus(sents, 0.8)
        assert (len(train), len(test)) == (80, 20)

    def test_single_sentence_warns(self, caplog):
        with caplog.at_level("WARNING"):
            train, test = split_corpus([simple_sentence(["go"], 1)], 0.8)
        assert (len(train), len(test)) == (1, 0)
        assert any("empty" in r.message for r in caplog.records)

    def test_nearest_boundary_gives_train_the_extra(self):
        sents = [simple_sentence(["w", "go"], 2) for _ in range(7)]
        train, test = split_corpus(sents, 0.5)
        assert (len(train), len(test)) == (4, 3)

    def test_split_is_contiguous(self):
        sents = [simple_sentence([f"w{i}", "go"], 2) for i in range(10)]
        train, test = split_corpus(sents, 0.7)
        assert train + test == sents

    def test_empty_corpus_raises(self):
        with pytest.raises(ValueError):
            split_corpus([], 0.8)

    def test_bad_fraction_raises(self):
        with pytest.raises(ValueError):
            split_corpus([simple_sentence(["go"], 1)], 1.5)


PAIR = ConfusionSet(("make", "sell"), "pair", (10, 10))


class TestGenerateExamples:
    def test_one_example_per_occurrence(self):
        sent = Sentence(
            [
                Token(1, "make", "VB", 0, ""),
                Token(2, "the", "DET", 3, "det"),
                Token(3, "offer", "NN", 1, "obj"),
            ]
        )
        examples = generate_examples(
            [sent], build_assignment([PAIR]), default_feature_types("linear"), Lexicon(), True
        )
        assert len(examples) == 1
        assert examples[0].gold == "make"
        assert examples[0].candidates is PAIR
        assert examples[0].focus == 1
        assert examples[0].features

    def test_sentence_without_targets_yields_nothing(self):
        sent = simple_sentence(["quiet", "day"], 2)
        examples = generate_examples(
            [sent], build_assignment([PAIR]), default_feature_types("linear"), Lexicon(), True
        )
        assert examples == []

    def test_two_occurrences_two_examples(self):
        sent = Sentence(
            [
                Token(1, "make", "VB", 0, ""),
                Token(2, "or", "CC", 1, "cc"),
                Token(3, "sell", "VB", 1, "conj"),
            ]
        )
        examples = generate_examples(
            [sent], build_assignment([PAIR]), default_feature_types("linear"), Lexicon(), True
        )
        assert [e.focus for e in examples] == [1, 3]
        assert [e.gold for e in examples] == ["make", "sell"]

    def test_no_allocation_in_evaluation_mode(self):
        sent = simple_sentence(["we", "make", "tea"], 2)
        lexicon = Lexicon()
        generate_examples(
            [sent], build_assignment([PAIR]), default_feature_types("linear"), lexicon, False
        )
        assert len(lexicon) == 0

    def test_duplicate_assignment_rejected(self):
        other = ConfusionSet(("make", "keep"), "pair", (5, 5))
        with pytest.raises(ValueError):
            build_assignment([PAIR, other])


class TestEvaluateWer:
    def examples(self, n):
        sent = simple_sentence(["we", "make", "tea"], 2)
        return generate_examples(
            [sent] * n, build_assignment([PAIR]), default_feature_types("linear"), Lexicon(), True
        )

    def test_perfect_predictor(self):
        result = evaluate_wer(lambda ex, pool: ex.gold, self.examples(10))
        assert result.wer == 0.0 and result.total == 10

    def test_half_wrong(self):
        examples = self.examples(10)
        flip = {id(ex): i % 2 == 0 for i, ex in enumerate(examples)}

        def predictor(ex, pool):
            return ex.gold if flip[id(ex)] else "sell"

        assert evaluate_wer(predictor, examples).wer == 0.5

    def test_empty_examples_raise(self):
        with pytest.raises(ValueError):
            evaluate_wer(lambda ex, pool: "x", [])

    def test_candidate_override_reaches_predictor(self):
        seen = []

        def predictor(ex, pool):
            seen.append(tuple(pool))
            return ex.gold

        evaluate_wer(predictor, self.examples(1), ("make", "sell", "keep"))
        assert seen == [("make", "sell", "keep")]


class TestTrigramPredictor:
    def test_left_context_ranking(self):
        table = NgramTable.build([["we", "make", "tea"]] * 5 + [["you", "sell", "cars"]])
        sent = simple_sentence(["we", "make", "tea"], 2)
        examples = generate_examples(
            [sent], build_assignment([PAIR]), default_feature_types("linear"), Lexicon(), True
        )
        assert trigram_predictor(table)(examples[0], ("make", "sell")) == "make"

    def test_right_context_option(self):
        table = NgramTable.build([["we", "make", "tea"]] * 5 + [["we", "sell", "cars"]] * 5)
        sent = simple_sentence(["we", "make", "tea"], 2)
        examples = generate_examples(
            [sent], build_assignment([PAIR]), default_feature_types("linear"), Lexicon(), True
        )
        assert trigram_predictor(table, use_right=True)(examples[0], ("make", "sell")) == "make"


SMALL_SYNTH = generate_corpus(SynthConfig(verbs=4, sentences=1200, seed=3))


def small_config(**kwargs):
    defaults = dict(feature_set="linear", learners=("nb", "winnow"), frequency_floor=50)
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


class TestRunExperiment:
    def test_report_shape_and_labels(self):
        report = run_experiment(small_config(), SMALL_SYNTH)
        assert report.columns == ["Bline", "NB", "SNoW"]
        assert [r.label for r in report.rows] == ["Train 2 Test 2"]
        assert 0.0 <= report.rows[0].cells["SNoW"] <= 1.0
        assert report.set_count == 2

    def test_nb_is_invariant_to_training_regime(self):
        report = run_experiment(
            small_config(regimes=(("all", "per-set"), ("per-set", "per-set"))), SMALL_SYNTH
        )
        by_label = {r.label: r.cells for r in report.rows}
        assert (
            by_label["Train All Test 2"]["NB"] == by_label["Train 2 Test 2"]["NB"]
        )

    def test_report_is_deterministic(self):
        config = small_config(regimes=(("all", "all"), ("per-set", "per-set")))
        first = run_experiment(config, SMALL_SYNTH)
        second = run_experiment(config, SMALL_SYNTH)
        assert first.to_text() == second.to_text()
        assert first.to_tsv() == second.to_tsv()

    def test_restricting_test_candidates_never_hurts(self):
        report = run_experiment(
            small_config(regimes=(("all", "all"), ("all", "per-set"))), SMALL_SYNTH
        )
        by_label = {r.label: r.cells for r in report.rows}
        assert (
            by_label["Train All Test 2"]["SNoW"]
            <= by_label["Train All Test All"]["SNoW"]
        )

    def test_phonetic_source_needs_pronunciations(self):
        with pytest.raises(ValueError):
            run_experiment(small_config(confusion_source="phonetic"), SMALL_SYNTH)

    def test_unknown_learner_rejected(self):
        with pytest.raises(ValueError):
            run_experiment(small_config(learners=("svm",)), SMALL_SYNTH)


class TestFoaSubsetMonotonicity:
    def test_random_gold_containing_subsets(self):
        config = small_config()
        sents = SMALL_SYNTH
        train, test = split_corpus(sents, 0.8)
        report_targets = sorted(
            {t.form for s in sents for t in s.tokens if t.pos.startswith("VB")}
        )
        from snowpredict.experiment import _target_counts, build_confusion_sets

        corpus_counts = _target_counts(sents, "VB")
        train_counts = _target_counts(train, "VB")
        sets = build_confusion_sets(config, corpus_counts, train_counts)
        assignment = build_assignment(sets)
        lexicon = Lexicon()
        types = default_feature_types("linear")
        train_ex = generate_examples(train, assignment, types, lexicon, True)
        test_ex = generate_examples(test, assignment, types, lexicon, False)
        net = SnowNetwork("winnow")
        net.train(to_learning_examples(train_ex), regime="all")
        predictor = snow_predictor(net)
        all_targets = tuple(sorted(assignment))
        base_errors = {
            id(ex): predictor(ex, all_targets) != ex.gold for ex in test_ex
        }
        rng = random.Random(17)
        for _ in range(20):
            subset = rng.sample(all_targets, rng.randint(1, len(all_targets)))
            for ex in test_ex[:80]:
                pool = tuple(sorted(set(subset) | {ex.gold}))
                wrong = predictor(ex, pool) != ex.gold
                assert wrong <= base_errors[id(ex)]


def test_mle_predictor_uses_counts():
    predictor = mle_predictor({"make": 3, "sell": 9})
    sent = simple_sentence(["we", "make", "tea"], 2)
    examples = generate_examples(
        [sent], build_assignment([PAIR]), default_feature_types("linear"), Lexicon(), True
    )
    assert predictor(examples[0], ("make", "sell")) == "sell"
