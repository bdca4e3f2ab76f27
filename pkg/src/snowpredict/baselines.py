"""Candidate-ranking baselines: majority choice and a backoff trigram model.

The trigram model uses absolute discounting with a fixed discount: at
each order the seen counts are discounted and the freed mass is spread
over the next order down.  Unigrams are add-one estimates over the
training vocabulary, so every word -- seen or not -- gets probability at
least ``1 / (N + V)`` and the distribution over any fixed context sums
to one.
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Mapping, Sequence

BOS = "<s>"
EOS = "</s>"


def mle_predict(candidates: Sequence[str], counts: Mapping[str, int]) -> str:
    """The candidate with the highest training frequency; ties go to the
    lexicographically smaller word."""
    if not candidates:
        raise ValueError("empty candidate set")
    return min(candidates, key=lambda word: (-counts.get(word, 0), word))


class NgramTable:
    """Unigram/bigram/trigram counts with absolute-discount backoff."""

    __slots__ = (
        "discount",
        "unigrams",
        "bigrams",
        "trigrams",
        "total",
        "_bi_total",
        "_bi_kinds",
        "_tri_total",
        "_tri_kinds",
    )

    def __init__(self, discount: float = 0.5):
        if not 0 < discount < 1:
            raise ValueError("discount must lie in (0, 1)")
        self.discount = discount
        self.unigrams: Counter = Counter()
        self.bigrams: Counter = Counter()
        self.trigrams: Counter = Counter()
        self.total = 0
        self._bi_total: Counter = Counter()
        self._bi_kinds: Counter = Counter()
        self._tri_total: Counter = Counter()
        self._tri_kinds: Counter = Counter()

    @classmethod
    def build(
        cls, sequences: Iterable[Sequence[str]], discount: float = 0.5
    ) -> "NgramTable":
        table = cls(discount)
        for forms in sequences:
            forms = list(forms)
            table.unigrams.update(forms)
            table.unigrams[EOS] += 1
            padded2 = [BOS] + forms + [EOS]
            table.bigrams.update(zip(padded2, padded2[1:]))
            padded3 = [BOS, BOS] + forms + [EOS]
            table.trigrams.update(zip(padded3, padded3[1:], padded3[2:]))
        if not table.unigrams:
            raise ValueError("cannot build an n-gram table from an empty corpus")
        table._finalize()
        return table

    def _finalize(self) -> None:
        self.total = sum(self.unigrams.values())
        self._bi_total.clear()
        self._bi_kinds.clear()
        for (first, _), count in self.bigrams.items():
            self._bi_total[first] += count
            self._bi_kinds[first] += 1
        self._tri_total.clear()
        self._tri_kinds.clear()
        for (first, second, _), count in self.trigrams.items():
            self._tri_total[(first, second)] += count
            self._tri_kinds[(first, second)] += 1

    @property
    def vocabulary(self) -> set[str]:
        return set(self.unigrams)

    def unigram_prob(self, word: str) -> float:
        return (self.unigrams.get(word, 0) + 1) / (self.total + len(self.unigrams))

    def bigram_prob(self, word: str, prev: str) -> float:
        seen = self._bi_total.get(prev, 0)
        if not seen:
            return self.unigram_prob(word)
        count = self.bigrams.get((prev, word), 0)
        discounted = (count - self.discount) / seen if count else 0.0
        backoff = self.discount * self._bi_kinds[prev] / seen
        return discounted + backoff * self.unigram_prob(word)

    def prob(self, word: str, context: Sequence[str]) -> float:
        """P(word | two-word left context), backing off through the
        bigram and unigram estimates; always finite and positive."""
        padded = [BOS, BOS] + list(context)
        prev2, prev1 = padded[-2], padded[-1]
        seen = self._tri_total.get((prev2, prev1), 0)
        if not seen:
            return self.bigram_prob(word, prev1)
        count = self.trigrams.get((prev2, prev1, word), 0)
        discounted = (count - self.discount) / seen if count else 0.0
        backoff = self.discount * self._tri_kinds[(prev2, prev1)] / seen
        return discounted + backoff * self.bigram_prob(word, prev1)

    def logprob(self, word: str, context: Sequence[str]) -> float:
        return math.log(self.prob(word, context))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(f"#! discount {self.discount!r}\n")
            for order, table in ((1, self.unigrams), (2, self.bigrams), (3, self.trigrams)):
                for gram in sorted(table):
                    key = gram if order == 1 else " ".join(gram)
                    handle.write(f"{order}\t{key}\t{table[gram]}\n")

    @classmethod
    def load(cls, path: str) -> "NgramTable":
        with open(path, encoding="utf-8") as handle:
            header = handle.readline().split()
            if len(header) != 3 or header[:2] != ["#!", "discount"]:
                raise ValueError("not an n-gram table file")
            table = cls(float(header[2]))
            for lineno, raw in enumerate(handle, 2):
                line = raw.rstrip("\n")
                if not line:
                    continue
                cols = line.split("\t")
                if len(cols) != 3:
                    raise ValueError(f"line {lineno}: expected 3 columns")
                order, key, count = int(cols[0]), cols[1], int(cols[2])
                if order == 1:
                    table.unigrams[key] = count
                elif order == 2:
                    first, second = key.split(" ")
                    table.bigrams[(first, second)] = count
                elif order == 3:
                    first, second, third = key.split(" ")
                    table.trigrams[(first, second, third)] = count
                else:
                    raise ValueError(f"line {lineno}: bad n-gram order {order}")
        table._finalize()
        return table


def trigram_score(
    candidate: str, left_context: Sequence[str], table: NgramTable
) -> float:
    """Log-probability of the candidate after its two left neighbours."""
    return table.logprob(candidate, left_context)
