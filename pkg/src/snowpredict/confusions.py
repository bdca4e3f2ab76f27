"""Confusion-set construction: frequency pairs, phonetic classes, all-targets.

Equal-frequency pairing sorts the eligible words by descending frequency
and pairs neighbours, which minimises the worst within-pair frequency
ratio over all perfect pairings.

Phonetic grouping transcribes each word into broad phoneme classes
(plosive P, fricative F, nasal N, approximant A, and two vowel groups
V1/V2) and groups words sharing a class string, simulating the candidate
sets a speech recognizer would produce.  The class map ships as an
editable data file.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping, Sequence

log = logging.getLogger(__name__)


class ConfusionError(ValueError):
    """Raised when confusion sets cannot be built as requested."""


@dataclass(frozen=True)
class ConfusionSet:
    """Candidate words competing for one prediction slot."""

    members: tuple[str, ...]
    provenance: str
    frequencies: tuple[int, ...]

    def __contains__(self, word: str) -> bool:
        return word in self.members

    def frequency(self, word: str) -> int:
        return self.frequencies[self.members.index(word)]

    def majority_share(self) -> float:
        total = sum(self.frequencies)
        if total == 0:
            return 1.0
        return max(self.frequencies) / total


def equal_frequency_pairs(
    counts: Mapping[str, int], floor: int = 50
) -> list[ConfusionSet]:
    """Pair words of near-equal training frequency.

    Words at or above the floor are sorted by descending count (ties
    lexicographic) and paired adjacently; an odd leftover is dropped
    with a warning.
    """
    eligible = sorted(
        (word for word, count in counts.items() if count >= floor),
        key=lambda word: (-counts[word], word),
    )
    if len(eligible) < 2:
        raise ConfusionError("fewer than two words meet the frequency floor")
    if len(eligible) % 2:
        log.warning("odd word out: dropping %r from pairing", eligible[-1])
        eligible = eligible[:-1]
    return [
        ConfusionSet(
            (first, second), "pair", (counts[first], counts[second])
        )
        for first, second in zip(eligible[::2], eligible[1::2])
    ]


def all_targets_set(counts: Mapping[str, int], targets: Iterable[str]) -> ConfusionSet:
    members = tuple(sorted(targets))
    if not members:
        raise ConfusionError("no target words")
    return ConfusionSet(members, "all", tuple(counts.get(w, 0) for w in members))


def transcribe(
    word: str,
    pronunciations: Mapping[str, Sequence[str]],
    class_map: Mapping[str, str],
) -> str:
    """Map a word's phoneme sequence symbol-wise into class symbols."""
    try:
        phones = pronunciations[word]
    except KeyError:
        raise ConfusionError(f"no pronunciation for {word!r}") from None
    if not phones:
        raise ConfusionError(f"empty pronunciation for {word!r}")
    try:
        return "_".join(class_map[p] for p in phones)
    except KeyError as err:
        raise ConfusionError(f"phoneme {err} of {word!r} missing from class map") from None


def phonetic_confusion_sets(
    targets: Iterable[str],
    pronunciations: Mapping[str, Sequence[str]],
    class_map: Mapping[str, str],
    counts: Mapping[str, int],
    baseline_cap: float | None = None,
) -> list[ConfusionSet]:
    """Group targets by class transcription.

    Words without usable pronunciations are skipped with a warning.
    When a cap is given, sets whose majority member holds at least that
    share of the training mass are dropped; singletons always are.
    """
    groups: dict[str, list[str]] = {}
    for word in sorted(set(targets)):
        try:
            key = transcribe(word, pronunciations, class_map)
        except ConfusionError as err:
            log.warning("%s; excluded from phonetic sets", err)
            continue
        groups.setdefault(key, []).append(word)
    sets = []
    for key in sorted(groups):
        members = tuple(
            sorted(groups[key], key=lambda w: (-counts.get(w, 0), w))
        )
        sets.append(
            ConfusionSet(members, f"pc:{key}", tuple(counts.get(w, 0) for w in members))
        )
    if baseline_cap is not None:
        sets = [s for s in sets if s.majority_share() < baseline_cap]
    return sets


def load_pronunciations(source: Iterable[str]) -> dict[str, tuple[str, ...]]:
    """Read `word<TAB>phoneme phoneme ...` lines."""
    lexicon: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word, _, rest = line.partition("\t")
        if not word or not rest.strip():
            raise ConfusionError(f"pronunciation line {lineno}: expected word<TAB>phonemes")
        if word not in lexicon:  # first entry wins for homographs
            lexicon[word] = tuple(rest.split())
    return lexicon


def load_class_map(source: Iterable[str]) -> dict[str, str]:
    """Read `phoneme<TAB>class` lines."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ConfusionError(f"class map line {lineno}: expected phoneme<TAB>class")
        mapping[cols[0]] = cols[1]
    return mapping


def default_class_map() -> dict[str, str]:
    text = resources.files("snowpredict").joinpath("data/phoneme_classes.tsv").read_text()
    return load_class_map(text.splitlines())


def save_sets(path: str, sets: Sequence[ConfusionSet]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for cs in sets:
            handle.write(f"{cs.provenance} {' '.join(cs.members)}\n")


def load_sets(
    source: Iterable[str], counts: Mapping[str, int] | None = None
) -> list[ConfusionSet]:
    """Read sets back; member frequencies come from `counts` when given."""
    counts = counts or {}
    sets = []
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) < 2:
            raise ConfusionError(f"sets line {lineno}: tag plus at least one member")
        members = tuple(fields[1:])
        if len(set(members)) != len(members):
            raise ConfusionError(f"sets line {lineno}: duplicate members")
        sets.append(
            ConfusionSet(members, fields[0], tuple(counts.get(w, 0) for w in members))
        )
    return sets
