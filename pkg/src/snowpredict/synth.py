"""Deterministic synthetic corpora with planted prediction cues.

Each target sentence contains exactly one verb drawn from a balanced
pair.  Which member of the pair appears is a deterministic function of
two planted cues:

* the object noun two positions after the verb (reachable by narrow
  collocations and, leftward-blind, invisible to a left-context trigram);
* the subject noun, dependency-linked to the verb but sitting outside
  the collocation window, with a same-vocabulary decoy word elsewhere in
  the sentence so that bag-of-window features cannot tell subject from
  decoy.

The verb is the pair's first member exactly when both cues take their
first value.  A weak redundant cue -- the same adverb word repeated just
before the verb -- agrees with the verb choice only most of the time
(``flip`` noise), which rewards learners that weight correlated noisy
evidence down.  Every verb of every pair appears equally often, so
majority guessing within a pair is even.

A small ``bare`` fraction of target sentences carries neutral cue words
shared by all pairs instead of the planted ones.  Those slots are a coin
flip within their pair but nearly hopeless against the full target set,
which keeps restricted candidate sets strictly easier than
all-candidates evaluation, as with real corpora.

Sentence layout (head, label)::

    1 subj   -> 5 subj      4 adv copy -> 3 mod
    2 decoy  -> 1 mod       5 VERB     -> 0 root
    3 adv    -> 5 mod       6 the      -> 7 det
                            7 obj      -> 5 obj
                            8.. filler -> mod chain
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import Sentence, Token


@dataclass(frozen=True)
class SynthConfig:
    verbs: int = 20
    sentences: int = 20000
    seed: int = 0
    flip: float = 0.3
    bare: float = 0.05  # fraction of target sentences with neutral cues
    filler: float = 0.0  # fraction of sentences with no target verb

    def validate(self) -> None:
        if self.verbs < 2 or self.verbs % 2:
            raise ValueError("verb count must be even and at least 2")
        if self.sentences < 1:
            raise ValueError("need at least one sentence")
        if not 0 <= self.flip <= 1 or not 0 <= self.bare <= 1 or not 0 <= self.filler < 1:
            raise ValueError("flip and bare must lie in [0,1], filler in [0,1)")


def verb_name(index: int) -> str:
    return f"v{index:02d}"


def pair_words(pair: int) -> dict[str, tuple[str, str]]:
    """The planted cue vocabulary of one verb pair."""
    return {
        "subj": (f"nsub{pair}", f"nalt{pair}"),
        "obj": (f"nobj{pair}", f"nneg{pair}"),
        "adv": (f"madv{pair}", f"mrev{pair}"),
    }


_FILL_POOL = [f"fill{i:02d}" for i in range(24)]
_BARE_SUBJ = [f"nout{i}" for i in range(4)]
_BARE_OBJ = [f"oout{i}" for i in range(4)]
_BARE_ADV = [f"mout{i}" for i in range(4)]


def _target_sentence(
    pair: int, parity: int, config: "SynthConfig", rng: random.Random
) -> Sentence:
    words = pair_words(pair)
    first = parity == 0
    if rng.random() < config.bare:
        subj = rng.choice(_BARE_SUBJ)
        obj = rng.choice(_BARE_OBJ)
        decoy = rng.choice(_BARE_SUBJ)
        adv = rng.choice(_BARE_ADV)
    else:
        if first:
            object_bit = subject_bit = 0
        else:
            object_bit, subject_bit = rng.choice(((1, 1), (1, 0), (0, 1)))
        subj = words["subj"][subject_bit]
        obj = words["obj"][object_bit]
        decoy = words["subj"][rng.randrange(2)]
        adv = words["adv"][0 if first else 1]
        if rng.random() < config.flip:
            adv = words["adv"][1 if first else 0]
    verb = verb_name(2 * pair + parity)
    tokens = [
        Token(1, subj, "NN", 5, "subj"),
        Token(2, decoy, "NN", 1, "mod"),
        Token(3, adv, "NN", 5, "mod"),
        Token(4, adv, "NN", 3, "mod"),
        Token(5, verb, "VBZ", 0, ""),
        Token(6, "the", "DET", 7, "det"),
        Token(7, obj, "NN", 5, "obj"),
        Token(8, rng.choice(_FILL_POOL), "NN", 7, "mod"),
    ]
    for extra in range(rng.randrange(3)):
        index = 9 + extra
        tokens.append(Token(index, rng.choice(_FILL_POOL), "NN", index - 1, "mod"))
    return Sentence(tokens)


def _filler_sentence(rng: random.Random) -> Sentence:
    length = rng.randrange(4, 8)
    return Sentence(
        [
            Token(i, rng.choice(_FILL_POOL), "NN", i - 1, "" if i == 1 else "mod")
            for i in range(1, length + 1)
        ]
    )


def generate_corpus(config: SynthConfig) -> list[Sentence]:
    """Same config, same corpus, byte for byte."""
    config.validate()
    rng = random.Random(config.seed)
    target_total = config.sentences - round(config.sentences * config.filler)
    per_verb = target_total // config.verbs
    if per_verb < 1:
        raise ValueError("too few sentences for the requested verb count")
    slots: list[tuple[int, int] | None] = [
        (pair, parity)
        for pair in range(config.verbs // 2)
        for parity in (0, 1)
        for _ in range(per_verb)
    ]
    slots.extend([None] * (config.sentences - len(slots)))
    rng.shuffle(slots)
    return [
        _target_sentence(slot[0], slot[1], config, rng)
        if slot is not None
        else _filler_sentence(rng)
        for slot in slots
    ]


def pronunciation_lexicon(config: SynthConfig) -> dict[str, tuple[str, ...]]:
    """Phoneme sequences for the synthetic verbs.

    The cycling patterns put several verbs into shared broad-class
    groups; the last verb gets a unique pattern so at least one
    singleton class exists.
    """
    patterns = (("b", "Y"), ("p", "i"), ("s", "a"), ("m", "u"))
    lexicon = {
        verb_name(i): patterns[i % len(patterns)] for i in range(config.verbs)
    }
    lexicon[verb_name(config.verbs - 1)] = ("n", "Y", "n")
    return lexicon


def save_pronunciations(path: str, lexicon: dict[str, tuple[str, ...]]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for word in sorted(lexicon):
            handle.write(f"{word}\t{' '.join(lexicon[word])}\n")
