"""Sparse network of per-word linear units with winner-take-all prediction.

Each candidate word owns a target node: a sparse mapping from feature id
to weight plus a threshold.  Processing an example touches only the
features active in it, so cost is independent of how many features have
ever been allocated.

Update rules:

* ``winnow`` -- mistake-driven multiplicative updates.  A positive
  example whose activation does not exceed the threshold allocates
  missing links at the initial weight and multiplies all active links by
  the promotion factor; a negative example whose activation exceeds the
  threshold multiplies active links by the demotion factor and never
  allocates.  Anything else leaves the node untouched.
* ``nb`` -- naive Bayes counting: positives increment per-feature counts
  and the prior; negative examples do not exist for this rule.
* ``perceptron`` -- additive mistake-driven updates, kept as a simple
  comparison rule.

Links only ever come from positive examples, so every weight entry of a
target corresponds to a feature seen active in at least one example
carrying its label.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

NEG_INF = float("-inf")


class ModelFormatError(ValueError):
    """Raised for unreadable model files."""


@dataclass
class WinnowConfig:
    promotion: float = 1.5
    demotion: float = 0.8
    threshold: float = 1.0
    initial_weight: float = 0.2
    epochs: int = 2

    def validate(self) -> None:
        if self.promotion <= 1:
            raise ValueError("promotion must exceed 1")
        if not 0 < self.demotion < 1:
            raise ValueError("demotion must lie in (0, 1)")
        if self.threshold <= 0 or self.initial_weight <= 0:
            raise ValueError("threshold and initial weight must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")


@dataclass
class NBConfig:
    smoothing: float = 0.1
    epochs: int = 1

    def validate(self) -> None:
        if self.smoothing <= 0:
            raise ValueError("smoothing must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")


@dataclass
class PerceptronConfig:
    step: float = 1.0
    threshold: float = 1.0
    epochs: int = 2

    def validate(self) -> None:
        if self.step <= 0 or self.threshold <= 0:
            raise ValueError("step and threshold must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")


_DEFAULT_CONFIGS = {"winnow": WinnowConfig, "nb": NBConfig, "perceptron": PerceptronConfig}


@dataclass(frozen=True)
class Example:
    """An active feature-id set with its gold label and, optionally, the
    confusion set it was drawn from."""

    features: frozenset[int]
    label: str
    candidates: tuple[str, ...] | None = None


@dataclass
class Probe:
    """Counts weight-table lookups, for sparsity checks."""

    lookups: int = 0


class TargetNode:
    __slots__ = ("label", "weights", "theta", "positives", "_mass")

    def __init__(self, label: str, theta: float = 0.0):
        self.label = label
        self.weights: dict[int, float] = {}
        self.theta = theta
        self.positives = 0
        self._mass: float | None = None

    def activation(self, active: Iterable[int], probe: Probe | None = None) -> float:
        total = 0.0
        weights = self.weights
        if probe is None:
            for fid in active:
                value = weights.get(fid)
                if value is not None:
                    total += value
        else:
            for fid in active:
                probe.lookups += 1
                value = weights.get(fid)
                if value is not None:
                    total += value
        return total

    def mass(self) -> float:
        if self._mass is None:
            self._mass = sum(self.weights.values())
        return self._mass


class SnowNetwork:
    """Target nodes over a shared sparse feature space."""

    def __init__(self, rule: str = "winnow", config=None):
        if rule not in _DEFAULT_CONFIGS:
            raise ValueError(f"unknown update rule {rule!r}")
        self.rule = rule
        self.config = config if config is not None else _DEFAULT_CONFIGS[rule]()
        self.config.validate()
        self.targets: dict[str, TargetNode] = {}
        self.probe = Probe()
        self._prior_total = 0
        self._warned: set[str] = set()

    def node(self, label: str) -> TargetNode:
        target = self.targets.get(label)
        if target is None:
            theta = getattr(self.config, "threshold", 0.0)
            target = TargetNode(label, theta)
            self.targets[label] = target
        return target

    def winnow_update(
        self, target: TargetNode, features: frozenset[int], positive: bool
    ) -> bool:
        """Apply one mistake-driven step; returns whether a mistake occurred."""
        cfg = self.config
        activation = target.activation(features, self.probe)
        if positive:
            target.positives += 1
            self._prior_total += 1
            if activation <= target.theta:
                weights = target.weights
                for fid in features:
                    weights[fid] = weights.get(fid, cfg.initial_weight) * cfg.promotion
                target._mass = None
                return True
            return False
        if activation > target.theta:
            weights = target.weights
            for fid in features:
                if fid in weights:
                    weights[fid] *= cfg.demotion
            target._mass = None
            return True
        return False

    def nb_update(self, target: TargetNode, features: frozenset[int]) -> None:
        target.positives += 1
        self._prior_total += 1
        weights = target.weights
        for fid in features:
            weights[fid] = weights.get(fid, 0.0) + 1.0
        target._mass = None

    def perceptron_update(
        self, target: TargetNode, features: frozenset[int], positive: bool
    ) -> bool:
        cfg = self.config
        activation = target.activation(features, self.probe)
        if positive:
            target.positives += 1
            self._prior_total += 1
            if activation <= target.theta:
                weights = target.weights
                for fid in features:
                    weights[fid] = weights.get(fid, 0.0) + cfg.step
                target._mass = None
                return True
            return False
        if activation > target.theta:
            weights = target.weights
            for fid in features:
                if fid in weights:
                    weights[fid] -= cfg.step
            target._mass = None
            return True
        return False

    def train(self, examples: Sequence[Example], regime: str = "per-set") -> int:
        """Run the online pass(es) in fixed example order.

        An example is positive for its label's node and negative for the
        other targets in its training confusion set: its own candidate
        set under ``per-set``, every target under ``all``.  Returns the
        total mistake count (always 0 for naive Bayes).
        """
        if regime not in ("per-set", "all"):
            raise ValueError(f"unknown training regime {regime!r}")
        for example in examples:
            if example.candidates is not None and example.label not in example.candidates:
                raise ValueError(
                    f"label {example.label!r} outside its confusion set"
                )
        for example in examples:
            self.node(example.label)
        mistakes = 0
        update = self.winnow_update if self.rule == "winnow" else self.perceptron_update
        for _ in range(self.config.epochs):
            for example in examples:
                gold = example.label
                if self.rule == "nb":
                    self.nb_update(self.targets[gold], example.features)
                    continue
                mistakes += update(self.targets[gold], example.features, True)
                if regime == "all":
                    others = [label for label in self.targets if label != gold]
                else:
                    others = [c for c in (example.candidates or ()) if c != gold]
                for label in others:
                    target = self.targets.get(label)
                    if target is None:
                        continue
                    mistakes += update(target, example.features, False)
        return mistakes

    def _nb_score(self, target: TargetNode, features: frozenset[int]) -> float:
        if target.positives == 0 or self._prior_total == 0:
            return NEG_INF
        smoothing = self.config.smoothing
        denominator = target.mass() + smoothing * len(target.weights)
        if denominator <= 0.0:
            # target trained only on featureless examples
            return NEG_INF if features else math.log(target.positives / self._prior_total)
        score = math.log(target.positives / self._prior_total)
        weights = target.weights
        for fid in features:
            self.probe.lookups += 1
            score += math.log((weights.get(fid, 0.0) + smoothing) / denominator)
        return score

    def scores(
        self, features: frozenset[int], candidates: Iterable[str]
    ) -> dict[str, float]:
        out: dict[str, float] = {}
        for label in candidates:
            target = self.targets.get(label)
            if target is None:
                if label not in self._warned:
                    log.warning("no trained target for candidate %r; scoring -inf", label)
                    self._warned.add(label)
                out[label] = NEG_INF
            elif self.rule == "nb":
                out[label] = self._nb_score(target, features)
            else:
                out[label] = target.activation(features, self.probe)
        return out

    def predict(
        self, features: frozenset[int], candidates: Sequence[str]
    ) -> tuple[str, dict[str, float]]:
        """Winner-take-all over the candidate scores.

        Exact ties go to the candidate with the higher training prior,
        then to the lexicographically smaller label.
        """
        if not candidates:
            raise ValueError("empty candidate set")
        scored = self.scores(features, candidates)

        def rank(label: str) -> tuple[float, int, str]:
            target = self.targets.get(label)
            prior = target.positives if target is not None else 0
            return (-scored[label], -prior, label)

        winner = min(candidates, key=rank)
        return winner, scored

    def top_features(self, label: str, k: int) -> list[tuple[int, float]]:
        target = self.targets.get(label)
        if target is None:
            known = ", ".join(sorted(self.targets)) or "(none)"
            raise ValueError(f"unknown target {label!r}; trained targets: {known}")
        ranked = sorted(target.weights.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[: max(k, 0)]


_MAGIC = "snowmodel"
_VERSION = 1

_PARAM_FIELDS = {
    "winnow": (
        ("promotion", float),
        ("demotion", float),
        ("threshold", float),
        ("initial_weight", float),
        ("epochs", int),
    ),
    "nb": (("smoothing", float), ("epochs", int)),
    "perceptron": (("step", float), ("threshold", float), ("epochs", int)),
}


def save_model(
    network: SnowNetwork,
    path: str,
    lexicon_path: str | None = None,
    feature_lines: Iterable[str] = (),
    regime: str | None = None,
) -> None:
    """Write the network as diff-friendly text.

    The header records the rule, its configuration, and optionally the
    training regime plus the lexicon file and feature definitions the
    model was trained with, so evaluation can rebuild the same feature
    space.
    """
    lines = [f"{_MAGIC} {_VERSION}", f"rule {network.rule}"]
    for name, _ in _PARAM_FIELDS[network.rule]:
        lines.append(f"{name} {getattr(network.config, name)!r}")
    if regime is not None:
        lines.append(f"regime {regime}")
    if lexicon_path is not None:
        lines.append(f"lexicon {lexicon_path}")
    for feature_line in feature_lines:
        lines.append(f"feature {feature_line}")
    lines.append(f"targets {len(network.targets)}")
    for label in sorted(network.targets):
        target = network.targets[label]
        lines.append(f"target {label} {target.theta!r} {target.positives}")
        for fid in sorted(target.weights):
            lines.append(f"{fid} {target.weights[fid]!r}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def load_model(path: str) -> tuple[SnowNetwork, dict]:
    """Read a model file back; returns the network and header metadata."""
    with open(path, encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle]
    lines = [line for line in lines if line]
    cursor = 0

    def next_line() -> str:
        nonlocal cursor
        if cursor >= len(lines):
            raise ModelFormatError("truncated model file")
        line = lines[cursor]
        cursor += 1
        return line

    header = next_line().split()
    if len(header) != 2 or header[0] != _MAGIC:
        raise ModelFormatError("not a model file (bad magic)")
    if header[1] != str(_VERSION):
        raise ModelFormatError(f"unsupported model version {header[1]}")
    rule_line = next_line().split()
    if len(rule_line) != 2 or rule_line[0] != "rule":
        raise ModelFormatError("missing rule line")
    rule = rule_line[1]
    if rule not in _PARAM_FIELDS:
        raise ModelFormatError(f"unknown update rule {rule!r}")
    params = {}
    for name, cast in _PARAM_FIELDS[rule]:
        key, _, value = next_line().partition(" ")
        if key != name:
            raise ModelFormatError(f"expected parameter {name!r}, found {key!r}")
        try:
            params[name] = cast(value)
        except ValueError:
            raise ModelFormatError(f"bad value for parameter {name!r}") from None
    meta = {"lexicon": None, "features": [], "regime": None}
    line = next_line()
    while not line.startswith("targets "):
        key, _, value = line.partition(" ")
        if key == "lexicon":
            meta["lexicon"] = value
        elif key == "feature":
            meta["features"].append(value)
        elif key == "regime":
            meta["regime"] = value
        else:
            raise ModelFormatError(f"unexpected header line {line!r}")
        line = next_line()
    try:
        expected = int(line.split()[1])
    except (IndexError, ValueError):
        raise ModelFormatError("bad targets line") from None
    network = SnowNetwork(rule, _DEFAULT_CONFIGS[rule](**params))
    seen = 0
    while cursor < len(lines):
        parts = next_line().split()
        if parts[0] != "target" or len(parts) != 4:
            raise ModelFormatError(f"expected a target block, found {parts[0]!r}")
        label = parts[1]
        target = network.node(label)
        try:
            target.theta = float(parts[2])
            target.positives = int(parts[3])
        except ValueError:
            raise ModelFormatError(f"bad target line for {label!r}") from None
        network._prior_total += target.positives
        seen += 1
        while cursor < len(lines) and not lines[cursor].startswith("target "):
            row = next_line().split()
            if len(row) != 2:
                raise ModelFormatError(f"bad weight row in target {label!r}")
            try:
                target.weights[int(row[0])] = float(row[1])
            except ValueError:
                raise ModelFormatError(f"bad weight row in target {label!r}") from None
    if seen != expected:
        raise ModelFormatError(f"expected {expected} targets, found {seen}")
    return network, meta
