"""Feature types over sentence structure and their data-driven instantiation.

A feature type is a small tree built from these node kinds:

* ``Basic`` -- one predicate takes a specific value (or, existentially,
  any value) at a position;
* ``Proximity`` -- a predicate takes a value anywhere on a chain around
  the focus word;
* ``Collocation`` -- a conjunction of basic atoms matched along a chain
  of exactly ``len(atoms)`` positions;
* ``LinkedWords`` -- conjunctions (size 1..pair_size) of the words that
  precede the focus on chains through a graph;
* ``And`` / ``Or`` / ``Not`` -- boolean composition.

Chains over the ``linear`` graph are contiguous position windows around
the focus; chains over any other graph are directed paths that contain
the focus node, presented in sentence order.  Instantiating a set of
types on a (sentence, focus) pair yields canonical identity strings: the
same pattern matched on different sentences produces byte-identical
identities, which is what lets separately extracted corpora share one
feature space.

The focus word itself is the prediction label, so its ``word`` value is
never recorded: exact word atoms fail at the focus and existential ones
record the placeholder ``X`` instead.

Types can be written in a small one-line-per-type text language::

    proximity word linear -10 10
    colloc linear -2 2 word pos
    colloc dep 2 subj verb
    linked dep 2
    or (colloc dep 2 subj verb) (colloc dep 2 subj aux_vrb verb)

``proximity`` takes a predicate, a graph name and either a window
``l r`` (linear) or a path-length bound ``k``.  ``colloc`` takes a graph
name, either a window or a chain length, and the atoms; an atom is a
predicate name, ``name=value`` for an exact test, or the reserved word
``verb`` which matches only the focus position.  ``linked`` takes a
graph name and the maximum conjunction size.  ``and``/``or``/``not``
compose parenthesized sub-expressions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .corpus import LINEAR, POS, WORD, Sentence, StructuralSource

FOCUS_VALUE = "X"
DEFAULT_PATH_NODES = 4

FOCUS_ATOM = "verb"


class FeatureError(ValueError):
    """Raised for malformed feature definitions."""


@dataclass(frozen=True)
class Basic:
    pred: str
    value: str | None = None  # None: existential


@dataclass(frozen=True)
class FocusAtom:
    """Collocation atom that matches only the focus position."""


@dataclass(frozen=True)
class Proximity:
    pred: str
    structure: str
    window: tuple[int, int] | None = None
    length: int = DEFAULT_PATH_NODES


@dataclass(frozen=True)
class Collocation:
    atoms: tuple[Basic | FocusAtom, ...]
    structure: str
    window: tuple[int, int] | None = None


@dataclass(frozen=True)
class LinkedWords:
    structure: str
    pair_size: int = 2


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Not:
    child: object


FeatureType = object  # any of the node kinds above


def linear_chain(
    sis: StructuralSource, focus: int, window: tuple[int, int]
) -> tuple[int, ...]:
    """Positions focus+l .. focus+r clipped to the sentence."""
    left, right = window
    if left > 0 or right < 0:
        raise FeatureError(f"window must satisfy l <= 0 <= r, got {window}")
    lo = max(1, focus + left)
    hi = min(sis.n, focus + right)
    return tuple(range(lo, hi + 1))


def dag_chains(
    sis: StructuralSource, graph: str, focus: int, k: int
) -> list[tuple[int, ...]]:
    """All directed paths of at most k nodes through `focus`, each given
    as a position-sorted tuple, in lexicographic order."""
    edges = sis.edges(graph)
    if k < 1:
        return []
    into: dict[int, list[int]] = {}
    out_of: dict[int, list[int]] = {}
    for a, b in edges:
        out_of.setdefault(a, []).append(b)
        into.setdefault(b, []).append(a)

    def grow(start: int, adjacency: dict[int, list[int]]) -> list[tuple[int, ...]]:
        paths: list[tuple[int, ...]] = [()]
        stack: list[tuple[tuple[int, ...], int]] = [((), start)]
        while stack:
            prefix, node = stack.pop()
            if len(prefix) + 1 >= k:
                continue
            for nxt in adjacency.get(node, ()):
                extended = prefix + (nxt,)
                paths.append(extended)
                stack.append((extended, nxt))
        return paths

    backs = grow(focus, into)
    fronts = grow(focus, out_of)
    chains = set()
    for b in backs:
        room = k - 1 - len(b)
        for f in fronts:
            if len(f) <= room:
                chains.add(tuple(sorted(b + (focus,) + f)))
    return sorted(chains)


def eval_basic(atom: Basic, sentence: Sentence, position: int) -> int:
    """1 iff the atom's predicate matches at `position` (no focus masking)."""
    if atom.pred == WORD:
        value = sentence.form(position)
    elif atom.pred == POS:
        value = sentence.pos(position)
    else:
        instances = sentence.anchored(atom.pred, position)
        if atom.value is None:
            return 1 if instances else 0
        return 1 if any(i.value == atom.value for i in instances) else 0
    if atom.value is None:
        return 1 if value else 0
    return 1 if value == atom.value else 0


def atom_label(atom: Basic | FocusAtom) -> str:
    if isinstance(atom, FocusAtom):
        return FOCUS_ATOM
    return atom.pred if atom.value is None else f"{atom.pred}={atom.value}"


def type_signature(ftype: FeatureType) -> str:
    """Structural identity of a type, with no matched values."""
    if isinstance(ftype, Basic):
        return f"basic({atom_label(ftype)})"
    if isinstance(ftype, Proximity):
        return f"prox[{ftype.structure}]({ftype.pred})"
    if isinstance(ftype, Collocation):
        atoms = ",".join(atom_label(a) for a in ftype.atoms)
        return f"colloc[{ftype.structure}]({atoms})"
    if isinstance(ftype, LinkedWords):
        return f"linked[{ftype.structure}]"
    if isinstance(ftype, And):
        return f"and({','.join(type_signature(c) for c in ftype.children)})"
    if isinstance(ftype, Or):
        return f"or({','.join(type_signature(c) for c in ftype.children)})"
    if isinstance(ftype, Not):
        return f"not({type_signature(ftype.child)})"
    raise FeatureError(f"unknown feature type {ftype!r}")


def _atom_display(
    atom: Basic | FocusAtom, sentence: Sentence, position: int, focus: int
) -> str | None:
    """The value an atom records at `position`, or None on no match."""
    if isinstance(atom, FocusAtom):
        return FOCUS_VALUE if position == focus else None
    if atom.pred == WORD:
        if position == focus:
            # the focus word is masked: exact tests fail, existential
            # ones record the placeholder
            return None if atom.value is not None else FOCUS_VALUE
        form = sentence.form(position)
        if atom.value is not None and form != atom.value:
            return None
        return form
    if atom.pred == POS:
        tag = sentence.pos(position)
        if atom.value is not None and tag != atom.value:
            return None
        return tag
    instances = sentence.anchored(atom.pred, position)
    if atom.value is not None:
        if not any(i.value == atom.value for i in instances):
            return None
    elif not instances:
        return None
    return FOCUS_VALUE if position == focus else sentence.form(position)


def _chain_positions(
    ftype: Proximity, sis: StructuralSource, focus: int
) -> set[int]:
    if ftype.structure == LINEAR and ftype.window is not None:
        return set(linear_chain(sis, focus, ftype.window))
    positions: set[int] = set()
    for chain in dag_chains(sis, ftype.structure, focus, ftype.length):
        positions.update(chain)
    return positions


def _collocation_chains(
    ftype: Collocation, sis: StructuralSource, focus: int
) -> list[tuple[int, ...]]:
    k = len(ftype.atoms)
    if ftype.window is not None:
        if ftype.structure != LINEAR:
            raise FeatureError("window form is only defined on the linear graph")
        base = linear_chain(sis, focus, ftype.window)
        return [base[i : i + k] for i in range(len(base) - k + 1)]
    return [c for c in dag_chains(sis, ftype.structure, focus, k) if len(c) == k]


def _emit(ftype: FeatureType, sentence: Sentence, focus: int, out: set[str]) -> None:
    sis = sentence.structures
    if isinstance(ftype, Basic):
        if ftype.pred == WORD:
            return  # the focus word is the label
        if ftype.pred == POS:
            tag = sentence.pos(focus)
            if ftype.value is not None:
                if tag == ftype.value:
                    out.add(f"basic({POS}={ftype.value})")
            else:
                out.add(f"basic({POS})={tag}")
            return
        instances = sentence.anchored(ftype.pred, focus)
        if ftype.value is not None:
            if any(i.value == ftype.value for i in instances):
                out.add(f"basic({ftype.pred}={ftype.value})")
        elif instances:
            # non-unary predicate values embed the focus form, so
            # existential identities record presence only
            out.add(f"basic({ftype.pred})")
        return
    if isinstance(ftype, Proximity):
        base = f"prox[{ftype.structure}]({ftype.pred})"
        for position in _chain_positions(ftype, sis, focus):
            if ftype.pred == WORD:
                if position == focus:
                    continue
                out.add(f"{base}={sentence.form(position)}")
            elif ftype.pred == POS:
                out.add(f"{base}={sentence.pos(position)}")
            elif sentence.anchored(ftype.pred, position):
                out.add(base)
        return
    if isinstance(ftype, Collocation):
        base = type_signature(ftype)
        for chain in _collocation_chains(ftype, sis, focus):
            values = []
            for atom, position in zip(ftype.atoms, chain):
                shown = _atom_display(atom, sentence, position, focus)
                if shown is None:
                    break
                values.append(shown)
            else:
                out.add(f"{base}={'-'.join(values)}")
        return
    if isinstance(ftype, LinkedWords):
        base = type_signature(ftype)
        for chain in dag_chains(sis, ftype.structure, focus, DEFAULT_PATH_NODES):
            before = [p for p in chain if p < focus]
            for size in range(1, ftype.pair_size + 1):
                for combo in combinations(before, size):
                    out.add(f"{base}={'_'.join(sentence.form(p) for p in combo)}")
        return
    if isinstance(ftype, (And, Or, Not)):
        if _holds(ftype, sentence, focus):
            out.add(type_signature(ftype))
        return
    raise FeatureError(f"unknown feature type {ftype!r}")


def _holds(ftype: FeatureType, sentence: Sentence, focus: int) -> bool:
    """Boolean value of a type at (sentence, focus), focus word masked."""
    if isinstance(ftype, Basic):
        if ftype.pred == WORD:
            return ftype.value is None
        if ftype.pred == POS:
            tag = sentence.pos(focus)
            return tag == ftype.value if ftype.value is not None else bool(tag)
        instances = sentence.anchored(ftype.pred, focus)
        if ftype.value is not None:
            return any(i.value == ftype.value for i in instances)
        return bool(instances)
    if isinstance(ftype, And):
        return all(_holds(c, sentence, focus) for c in ftype.children)
    if isinstance(ftype, Or):
        return any(_holds(c, sentence, focus) for c in ftype.children)
    if isinstance(ftype, Not):
        return not _holds(ftype.child, sentence, focus)
    scratch: set[str] = set()
    _emit(ftype, sentence, focus, scratch)
    return bool(scratch)


def instantiate(
    types: tuple[FeatureType, ...] | list[FeatureType],
    sentence: Sentence,
    focus: int,
) -> set[str]:
    """All feature identities active for `types` at (sentence, focus)."""
    if not 1 <= focus <= len(sentence):
        raise FeatureError(f"focus {focus} outside sentence of {len(sentence)} tokens")
    out: set[str] = set()
    for ftype in types:
        _emit(ftype, sentence, focus, out)
    return out


_INT = re.compile(r"-?\d+$")
_TOKEN = re.compile(r"[()]|[^()\s]+")


def _parse_atom(token: str) -> Basic | FocusAtom:
    if token == FOCUS_ATOM:
        return FocusAtom()
    name, eq, value = token.partition("=")
    if not name:
        raise FeatureError(f"bad atom {token!r}")
    return Basic(name, value if eq else None)


def _take_ints(tokens: list[str], limit: int = 2) -> list[int]:
    taken = []
    while tokens and len(taken) < limit and _INT.match(tokens[0]):
        taken.append(int(tokens.pop(0)))
    return taken

def _parse_form(tokens: list[str]) -> FeatureType:
    if not tokens:
        raise FeatureError("empty feature expression")
    op = tokens.pop(0)
    if op == "proximity":
        if len(tokens) < 2:
            raise FeatureError("proximity needs a predicate and a graph name")
        pred = tokens.pop(0)
        structure = tokens.pop(0)
        numbers = _take_ints(tokens)
        if len(numbers) == 2:
            return Proximity(pred, structure, window=(numbers[0], numbers[1]))
        if len(numbers) == 1:
            return Proximity(pred, structure, length=numbers[0])
        raise FeatureError("proximity needs a window `l r` or a length `k`")
    if op == "colloc":
        if not tokens:
            raise FeatureError("colloc needs a graph name")
        structure = tokens.pop(0)
        numbers = _take_ints(tokens)
        atoms = []
        while tokens and tokens[0] not in "()":
            atoms.append(_parse_atom(tokens.pop(0)))
        if len(atoms) < 2:
            raise FeatureError("colloc needs at least 2 atoms")
        if len(numbers) == 2:
            return Collocation(tuple(atoms), structure, window=(numbers[0], numbers[1]))
        if len(numbers) == 1:
            if numbers[0] != len(atoms):
                raise FeatureError(
                    f"colloc length {numbers[0]} does not match {len(atoms)} atoms"
                )
            return Collocation(tuple(atoms), structure)
        raise FeatureError("colloc needs a window `l r` or a chain length `k`")
    if op == "linked":
        if not tokens:
            raise FeatureError("linked needs a graph name")
        structure = tokens.pop(0)
        numbers = _take_ints(tokens, limit=1)
        return LinkedWords(structure, numbers[0] if numbers else 2)
    if op == "basic":
        if not tokens:
            raise FeatureError("basic needs an atom")
        atom = _parse_atom(tokens.pop(0))
        if isinstance(atom, FocusAtom):
            raise FeatureError("basic cannot use the focus atom")
        return atom
    if op in ("and", "or", "not"):
        children = []
        while tokens and tokens[0] == "(":
            tokens.pop(0)
            children.append(_parse_form(tokens))
            if not tokens or tokens.pop(0) != ")":
                raise FeatureError("unbalanced parentheses")
        if op == "not":
            if len(children) != 1:
                raise FeatureError("not takes exactly one sub-expression")
            return Not(children[0])
        if len(children) < 2:
            raise FeatureError(f"{op} takes at least two sub-expressions")
        return And(tuple(children)) if op == "and" else Or(tuple(children))
    raise FeatureError(f"unknown feature operator {op!r}")


def parse_feature_types(text: str) -> tuple[FeatureType, ...]:
    """Parse one feature type per non-blank, non-comment line."""
    types = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _TOKEN.findall(line)
        try:
            ftype = _parse_form(tokens)
            if tokens:
                raise FeatureError(f"trailing tokens {' '.join(tokens)!r}")
        except FeatureError as err:
            raise FeatureError(f"line {lineno}: {err}") from None
        types.append(ftype)
    return tuple(types)


def validate_types(
    types: tuple[FeatureType, ...],
    predicates: set[str],
    structures: set[str] = frozenset((LINEAR, "dep")),
) -> None:
    """Check predicate and graph references plus window/arity invariants."""

    def check(ftype: FeatureType) -> None:
        if isinstance(ftype, Basic):
            if ftype.pred not in predicates:
                raise FeatureError(f"unknown predicate {ftype.pred!r}")
        elif isinstance(ftype, Proximity):
            if ftype.pred not in predicates:
                raise FeatureError(f"unknown predicate {ftype.pred!r}")
            if ftype.structure not in structures:
                raise FeatureError(f"unknown structure {ftype.structure!r}")
            if ftype.window is not None and not (
                ftype.window[0] <= 0 <= ftype.window[1]
            ):
                raise FeatureError(f"bad window {ftype.window}")
        elif isinstance(ftype, Collocation):
            if ftype.structure not in structures:
                raise FeatureError(f"unknown structure {ftype.structure!r}")
            if len(ftype.atoms) < 2:
                raise FeatureError("collocation needs at least 2 atoms")
            if ftype.window is not None and not (
                ftype.window[0] <= 0 <= ftype.window[1]
            ):
                raise FeatureError(f"bad window {ftype.window}")
            for atom in ftype.atoms:
                if isinstance(atom, Basic) and atom.pred not in predicates:
                    raise FeatureError(f"unknown predicate {atom.pred!r}")
        elif isinstance(ftype, LinkedWords):
            if ftype.structure not in structures:
                raise FeatureError(f"unknown structure {ftype.structure!r}")
            if ftype.pair_size < 1:
                raise FeatureError("linked pair size must be >= 1")
        elif isinstance(ftype, (And, Or)):
            for child in ftype.children:
                check(child)
        elif isinstance(ftype, Not):
            check(ftype.child)
        else:
            raise FeatureError(f"unknown feature type {ftype!r}")

    for ftype in types:
        check(ftype)


LINEAR_FEATURES = """\
proximity word linear -10 10
colloc linear -2 2 word word
colloc linear -2 2 word pos
colloc linear -2 2 pos word
colloc linear -2 2 pos pos
"""

NONLINEAR_FEATURES = LINEAR_FEATURES + """\
colloc dep 2 subj verb
colloc dep 2 verb obj
linked dep 2
"""

FEATURE_SETS = {"linear": LINEAR_FEATURES, "nonlinear": NONLINEAR_FEATURES}


def default_feature_types(selector: str) -> tuple[FeatureType, ...]:
    key = "nonlinear" if selector == "linear+nonlinear" else selector
    try:
        return parse_feature_types(FEATURE_SETS[key])
    except KeyError:
        raise FeatureError(f"unknown feature set {selector!r}") from None
