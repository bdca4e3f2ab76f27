"""Annotated-corpus ingestion and per-sentence information sources.

A corpus file is UTF-8 text with one token per line and a blank line
between sentences.  Each token line has five columns::

    INDEX  FORM  POS  HEAD  DEPREL

INDEX is 1-based and contiguous within the sentence, HEAD is the index
of the governing token (0 for the root), and DEPREL is the dependency
label (``_`` when absent).  Reading tolerates any whitespace between
columns; writing always emits the canonical tab-separated form.

Each sentence exposes two views used by feature generation:

* the information source: every non-empty predicate instance, i.e.
  ``word(i)`` and ``pos(i)`` for each token plus one binary instance per
  labelled dependency edge, anchored at the dependent;
* the structural source: named directed acyclic graphs over token
  positions -- the ``linear`` adjacency chain and the ``dep`` graph of
  head-to-dependent edges.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

WORD = "word"
POS = "pos"
LINEAR = "linear"
DEP = "dep"

_ABSENT = "_"


class CorpusError(ValueError):
    """Raised for input that violates the corpus file contract."""


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    pos: str
    head: int
    deprel: str = ""


@dataclass(frozen=True)
class PredicateInstance:
    """One non-empty predicate value over token positions."""

    name: str
    args: tuple[int, ...]
    value: str


@dataclass(frozen=True)
class StructuralSource:
    """Named DAGs over the positions 1..n of one sentence."""

    n: int
    graphs: Mapping[str, tuple[tuple[int, int], ...]]

    def edges(self, name: str) -> tuple[tuple[int, int], ...]:
        try:
            return self.graphs[name]
        except KeyError:
            raise CorpusError(f"unknown structure graph {name!r}") from None


def _validate(tokens: Sequence[Token]) -> str | None:
    if not tokens:
        return "empty sentence"
    n = len(tokens)
    seen = set()
    for t in tokens:
        if t.index in seen:
            return f"duplicate token index {t.index}"
        seen.add(t.index)
    if seen != set(range(1, n + 1)):
        return "token indices are not contiguous from 1"
    if [t.index for t in tokens] != list(range(1, n + 1)):
        return "token lines out of order"
    for t in tokens:
        if not t.form or not t.pos:
            return f"empty form or pos at token {t.index}"
        if t.head < 0 or t.head > n:
            return f"head out of range at token {t.index}"
        if t.head == t.index:
            return f"self-loop at token {t.index}"
    # heads form a functional graph; reject any cycle not passing through 0
    cleared: set[int] = set()
    for start in range(1, n + 1):
        trail: set[int] = set()
        j = start
        while j != 0 and j not in cleared:
            if j in trail:
                return f"dependency cycle through token {j}"
            trail.add(j)
            j = tokens[j - 1].head
        cleared |= trail
    return None


class Sentence:
    """A validated sentence with cached predicate and structure views."""

    __slots__ = ("tokens", "_instances", "_anchored", "_sis")

    def __init__(self, tokens: Sequence[Token]):
        tokens = tuple(tokens)
        problem = _validate(tokens)
        if problem is not None:
            raise CorpusError(problem)
        self.tokens = tokens
        self._instances: tuple[PredicateInstance, ...] | None = None
        self._anchored: dict | None = None
        self._sis: StructuralSource | None = None

    def __len__(self) -> int:
        return len(self.tokens)

    def __eq__(self, other) -> bool:
        return isinstance(other, Sentence) and self.tokens == other.tokens

    def __hash__(self) -> int:
        return hash(self.tokens)

    def __repr__(self) -> str:
        return f"Sentence({' '.join(t.form for t in self.tokens)!r})"

    def token(self, position: int) -> Token:
        return self.tokens[position - 1]

    def form(self, position: int) -> str:
        return self.tokens[position - 1].form

    def pos(self, position: int) -> str:
        return self.tokens[position - 1].pos

    @property
    def forms(self) -> tuple[str, ...]:
        return tuple(t.form for t in self.tokens)

    @property
    def information_source(self) -> tuple[PredicateInstance, ...]:
        if self._instances is None:
            out = []
            for t in self.tokens:
                out.append(PredicateInstance(WORD, (t.index,), t.form))
                out.append(PredicateInstance(POS, (t.index,), t.pos))
            for t in self.tokens:
                if t.head and t.deprel:
                    head = self.tokens[t.head - 1]
                    out.append(
                        PredicateInstance(
                            t.deprel, (t.index, t.head), f"{t.form},{head.form}"
                        )
                    )
            self._instances = tuple(out)
        return self._instances

    def anchored(self, name: str, position: int) -> tuple[PredicateInstance, ...]:
        """Instances of predicate `name` whose first argument is `position`."""
        if self._anchored is None:
            index: dict[tuple[str, int], list[PredicateInstance]] = {}
            for inst in self.information_source:
                index.setdefault((inst.name, inst.args[0]), []).append(inst)
            self._anchored = index
        return tuple(self._anchored.get((name, position), ()))

    @property
    def structures(self) -> StructuralSource:
        if self._sis is None:
            n = len(self.tokens)
            linear = tuple((i, i + 1) for i in range(1, n))
            dep = tuple((t.head, t.index) for t in self.tokens if t.head)
            self._sis = StructuralSource(n, {LINEAR: linear, DEP: dep})
        return self._sis


def build_information_source(sentence: Sentence) -> tuple[PredicateInstance, ...]:
    return sentence.information_source


def build_structures(sentence: Sentence) -> StructuralSource:
    return sentence.structures


def predicate_names(sentences: Iterable[Sentence]) -> set[str]:
    """All predicate names observable over the given sentences."""
    names = {WORD, POS}
    for s in sentences:
        for t in s.tokens:
            if t.head and t.deprel:
                names.add(t.deprel)
    return names


def _parse_line(line: str) -> Token:
    cols = line.split()
    if len(cols) != 5:
        raise CorpusError(f"expected 5 columns, got {len(cols)}")
    try:
        index = int(cols[0])
        head = int(cols[3])
    except ValueError:
        raise CorpusError("INDEX and HEAD must be integers") from None
    deprel = "" if cols[4] == _ABSENT else cols[4]
    return Token(index, cols[1], cols[2], head, deprel)


def parse_corpus(
    source: Iterable[str], rejects: list[tuple[int, str]] | None = None
) -> list[Sentence]:
    """Read sentences from corpus-format lines.

    Invalid sentences are skipped: each rejection is logged with the line
    number where the problem was seen and, when `rejects` is given,
    appended to it as ``(lineno, message)``.  Processing continues with
    the next sentence.
    """
    sentences: list[Sentence] = []
    pending: list[Token] = []
    bad: tuple[int, str] | None = None
    start = 0

    def reject(lineno: int, message: str) -> None:
        log.warning("corpus line %d: %s; sentence rejected", lineno, message)
        if rejects is not None:
            rejects.append((lineno, message))

    def flush() -> None:
        nonlocal pending, bad
        if bad is not None:
            reject(*bad)
        elif pending:
            try:
                sentences.append(Sentence(pending))
            except CorpusError as err:
                reject(start, str(err))
        pending, bad = [], None

    lineno = 0
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line:
            flush()
            continue
        if not pending and bad is None:
            start = lineno
        try:
            pending.append(_parse_line(line))
        except CorpusError as err:
            if bad is None:
                bad = (lineno, str(err))
    flush()
    return sentences


def format_sentence(sentence: Sentence) -> str:
    return "\n".join(
        f"{t.index}\t{t.form}\t{t.pos}\t{t.head}\t{t.deprel or _ABSENT}"
        for t in sentence.tokens
    )


def format_corpus(sentences: Iterable[Sentence]) -> str:
    return "\n\n".join(format_sentence(s) for s in sentences) + "\n"


def read_corpus_file(
    path: str, rejects: list[tuple[int, str]] | None = None
) -> list[Sentence]:
    with open(path, encoding="utf-8") as handle:
        return parse_corpus(handle, rejects)


def write_corpus_file(path: str, sentences: Iterable[Sentence]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_corpus(sentences))
