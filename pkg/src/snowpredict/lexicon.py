"""Feature interning: canonical identity strings to dense integer ids.

Ids are allocated on first occurrence, so the feature space grows with
the data instead of being fixed up front.  In evaluation mode
(``allocate=False``) unseen identities stay unmapped and are simply
dropped by callers.

File format: one ``id<TAB>count<TAB>identity`` line per feature, sorted
by id.
"""
from __future__ import annotations

from typing import Iterator


class LexiconError(ValueError):
    """Raised for malformed lexicon files."""


class Lexicon:
    __slots__ = ("_ids", "_names", "_counts")

    def __init__(self) -> None:
        self._ids: dict[str, int] = {}
        self._names: list[str] = []
        self._counts: list[int] = []

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, identity: str) -> bool:
        return identity in self._ids

    def intern(self, identity: str, allocate: bool = True) -> int | None:
        """Map an identity to its id, allocating a fresh one when permitted.

        With ``allocate=False`` unseen identities return None and no
        state changes; occurrence counts only grow in allocation mode.
        """
        fid = self._ids.get(identity)
        if fid is not None:
            if allocate:
                self._counts[fid] += 1
            return fid
        if not allocate:
            return None
        fid = len(self._names)
        self._ids[identity] = fid
        self._names.append(identity)
        self._counts.append(1)
        return fid

    def identity(self, fid: int) -> str:
        if not 0 <= fid < len(self._names):
            raise LexiconError(f"unknown feature id {fid}")
        return self._names[fid]

    def count(self, fid: int) -> int:
        if not 0 <= fid < len(self._counts):
            raise LexiconError(f"unknown feature id {fid}")
        return self._counts[fid]

    def items(self) -> Iterator[tuple[int, int, str]]:
        for fid, name in enumerate(self._names):
            yield fid, self._counts[fid], name

    def prune(self, min_count: int) -> "Lexicon":
        """A compacted copy keeping features seen at least min_count times.

        Ids are reassigned contiguously, so pruning is only meaningful
        between extraction passes, before anything references the ids.
        """
        kept = Lexicon()
        for fid, count, name in self.items():
            if count >= min_count:
                kept._ids[name] = len(kept._names)
                kept._names.append(name)
                kept._counts.append(count)
        return kept

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for fid, count, name in self.items():
                handle.write(f"{fid}\t{count}\t{name}\n")

    @classmethod
    def load(cls, path: str) -> "Lexicon":
        lexicon = cls()
        with open(path, encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, 1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                cols = line.split("\t")
                if len(cols) != 3:
                    raise LexiconError(f"line {lineno}: expected 3 columns")
                try:
                    fid, count = int(cols[0]), int(cols[1])
                except ValueError:
                    raise LexiconError(f"line {lineno}: bad id or count") from None
                if fid != len(lexicon._names):
                    raise LexiconError(f"line {lineno}: ids out of order")
                if count < 1:
                    raise LexiconError(f"line {lineno}: count below 1")
                lexicon._ids[cols[2]] = fid
                lexicon._names.append(cols[2])
                lexicon._counts.append(count)
        return lexicon
