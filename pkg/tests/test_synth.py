from collections import Counter

import pytest

from snowpredict.corpus import format_corpus
from snowpredict.synth import (
    SynthConfig,
    generate_corpus,
    pair_words,
    pronunciation_lexicon,
    verb_name,
)


def test_same_seed_same_corpus():
    a = generate_corpus(SynthConfig(verbs=6, sentences=300, seed=7))
    b = generate_corpus(SynthConfig(verbs=6, sentences=300, seed=7))
    assert format_corpus(a) == format_corpus(b)


def test_different_seed_different_corpus():
    a = generate_corpus(SynthConfig(verbs=6, sentences=300, seed=7))
    b = generate_corpus(SynthConfig(verbs=6, sentences=300, seed=8))
    assert format_corpus(a) != format_corpus(b)


def test_verbs_appear_exactly_equally_often():
    sents = generate_corpus(SynthConfig(verbs=8, sentences=800, seed=1))
    counts = Counter(
        t.form for s in sents for t in s.tokens if t.pos.startswith("VB")
    )
    assert len(counts) == 8
    assert len(set(counts.values())) == 1


def test_planted_rule_determines_the_verb():
    config = SynthConfig(verbs=10, sentences=500, seed=5, bare=0.1)
    bare_seen = 0
    for sent in generate_corpus(config):
        verb = next(t for t in sent.tokens if t.pos == "VBZ")
        pair = int(verb.form[1:]) // 2
        words = pair_words(pair)
        subj, obj = sent.form(1), sent.form(7)
        if subj.startswith("nout"):
            bare_seen += 1
            continue
        first_member = subj == words["subj"][0] and obj == words["obj"][0]
        assert verb.form == verb_name(2 * pair + (0 if first_member else 1))
    assert bare_seen > 0


def test_sentence_layout_has_planted_edges():
    sent = generate_corpus(SynthConfig(verbs=2, sentences=2, seed=0, bare=0.0))[0]
    verb = sent.token(5)
    assert verb.head == 0
    assert sent.token(1).deprel == "subj" and sent.token(1).head == 5
    assert sent.token(7).deprel == "obj" and sent.token(7).head == 5
    assert sent.form(3) == sent.form(4)  # repeated weak cue


def test_filler_sentences_have_no_target_verbs():
    config = SynthConfig(verbs=4, sentences=400, seed=2, filler=0.25)
    sents = generate_corpus(config)
    with_verb = [s for s in sents if any(t.pos.startswith("VB") for t in s.tokens)]
    assert 0 < len(with_verb) < len(sents)


def test_bad_configs_rejected():
    for bad in (
        dict(verbs=3),
        dict(verbs=0),
        dict(sentences=0),
        dict(flip=1.5),
        dict(filler=1.0),
        dict(bare=-0.1),
    ):
        with pytest.raises(ValueError):
            SynthConfig(**bad).validate()
    with pytest.raises(ValueError):
        generate_corpus(SynthConfig(verbs=20, sentences=10))


def test_pronunciations_cover_all_verbs_with_a_singleton():
    config = SynthConfig(verbs=8, sentences=80)
    lexicon = pronunciation_lexicon(config)
    assert set(lexicon) == {verb_name(i) for i in range(8)}
    assert lexicon[verb_name(7)] == ("n", "Y", "n")
