"""Command-line front end.

Subcommands: prepare, confusions, extract, train, eval, inspect, synth.
Exit status is 0 on success, 1 on usage errors, 2 on data errors.
Diagnostics go to stderr; results go to files or stdout.  Verbosity is
controlled by the SNOWPREDICT_LOG environment variable (DEBUG, INFO,
WARNING, ...).

Every option can also come from a flat key/value config file passed with
``--config``: one ``section.key value`` pair per line, where the section
is the subcommand name.  Command-line flags override file values.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from . import baselines, confusions, corpus, experiment, features, learner, synth
from .lexicon import Lexicon

log = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(" ")
            if "." not in key or not value.strip():
                raise DataError(f"config line {lineno}: expected `section.key value`")
            values[key] = value.strip()
    return values


_TRUE = {"1", "true", "yes", "on"}


def _opt(ns, cfg: dict[str, str], section: str, name: str, default, cast=str):
    """Flag value if given, else config-file value, else default."""
    value = getattr(ns, name.replace("-", "_"))
    if value is None:
        value = cfg.get(f"{section}.{name}")
        if value is None:
            return default
    if cast is bool:
        return value if isinstance(value, bool) else str(value).lower() in _TRUE
    try:
        return cast(value)
    except ValueError:
        raise UsageError(f"bad value for --{name}: {value!r}") from None


def _read_corpus(path: str) -> list[corpus.Sentence]:
    if not os.path.exists(path):
        raise DataError(f"corpus file not found: {path}")
    sentences = corpus.read_corpus_file(path)
    if not sentences:
        raise DataError(f"no valid sentences in {path}")
    return sentences


def _counts(sentences, pos_prefix: str) -> Counter:
    return Counter(
        t.form for s in sentences for t in s.tokens if t.pos.startswith(pos_prefix)
    )


# ---------------------------------------------------------------- prepare


def _cmd_prepare(ns, cfg) -> int:
    source = _opt(ns, cfg, "prepare", "in", None)
    out = _opt(ns, cfg, "prepare", "out", None)
    if source is None:
        raise UsageError("prepare: --in is required")
    if not os.path.exists(source):
        raise DataError(f"corpus file not found: {source}")
    rejects: list[tuple[int, str]] = []
    with open(source, encoding="utf-8") as handle:
        sentences = corpus.parse_corpus(handle, rejects)
    for lineno, message in rejects:
        print(f"line {lineno}: {message}", file=sys.stderr)
    if not sentences:
        raise DataError(f"no valid sentences in {source}")
    text = corpus.format_corpus(sentences)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ------------------------------------------------------------- confusions


def _cmd_confusions(ns, cfg) -> int:
    path = _opt(ns, cfg, "confusions", "corpus", None)
    mode = _opt(ns, cfg, "confusions", "mode", "pairs")
    floor = _opt(ns, cfg, "confusions", "floor", 50, int)
    prefix = _opt(ns, cfg, "confusions", "pos-prefix", "VB")
    out = _opt(ns, cfg, "confusions", "out", None)
    if path is None:
        raise UsageError("confusions: --corpus is required")
    counts = _counts(_read_corpus(path), prefix)
    if mode == "pairs":
        sets = confusions.equal_frequency_pairs(counts, floor)
    elif mode == "all":
        targets = [w for w, c in counts.items() if c >= floor]
        sets = [confusions.all_targets_set(counts, targets)]
    elif mode == "phonetic":
        pron_path = _opt(ns, cfg, "confusions", "pronunciations", None)
        if pron_path is None:
            raise UsageError("confusions: --pronunciations is required for phonetic mode")
        with open(pron_path, encoding="utf-8") as handle:
            pron = confusions.load_pronunciations(handle)
        classes_path = _opt(ns, cfg, "confusions", "classes", None)
        if classes_path:
            with open(classes_path, encoding="utf-8") as handle:
                class_map = confusions.load_class_map(handle)
        else:
            class_map = confusions.default_class_map()
        cap = _opt(ns, cfg, "confusions", "cap", None, float)
        targets = [w for w, c in counts.items() if c >= floor]
        sets = confusions.phonetic_confusion_sets(targets, pron, class_map, counts, cap)
    else:
        raise UsageError(f"confusions: unknown mode {mode!r}")
    if not sets:
        raise DataError("no confusion sets produced")
    if out:
        confusions.save_sets(out, sets)
    else:
        for cs in sets:
            print(f"{cs.provenance} {' '.join(cs.members)}")
    return 0


# ---------------------------------------------------------------- extract

_EXAMPLES_MAGIC = "#! snowexamples 1"


def _extract_one(args):
    sid, sentence, targets, types = args
    rows = []
    for token in sentence.tokens:
        if token.form in targets:
            identities = sorted(features.instantiate(types, sentence, token.index))
            rows.append((sid, token.index, token.form, identities))
    return rows


def _cmd_extract(ns, cfg) -> int:
    corpus_path = _opt(ns, cfg, "extract", "corpus", None)
    sets_path = _opt(ns, cfg, "extract", "sets", None)
    out = _opt(ns, cfg, "extract", "out", None)
    lexicon_out = _opt(ns, cfg, "extract", "lexicon-out", None)
    lexicon_in = _opt(ns, cfg, "extract", "lexicon", None)
    no_allocate = _opt(ns, cfg, "extract", "no-allocate", False, bool)
    jobs = _opt(ns, cfg, "extract", "jobs", os.cpu_count() or 1, int)
    feature_file = _opt(ns, cfg, "extract", "features", None)
    feature_set = _opt(ns, cfg, "extract", "feature-set", None)
    for name, value in (("corpus", corpus_path), ("sets", sets_path), ("out", out)):
        if value is None:
            raise UsageError(f"extract: --{name} is required")
    if feature_file and feature_set:
        raise UsageError("extract: --features and --feature-set are mutually exclusive")
    if feature_file:
        with open(feature_file, encoding="utf-8") as handle:
            feature_text = handle.read()
    else:
        feature_text = features.FEATURE_SETS.get(feature_set or "linear")
        if feature_text is None:
            raise UsageError(f"extract: unknown feature set {feature_set!r}")
    types = features.parse_feature_types(feature_text)

    sentences = _read_corpus(corpus_path)
    features.validate_types(types, corpus.predicate_names(sentences))
    with open(sets_path, encoding="utf-8") as handle:
        sets = confusions.load_sets(handle)
    assignment = experiment.build_assignment(sets)
    set_index = {cs.members: idx for idx, cs in enumerate(sets)}

    lexicon = Lexicon.load(lexicon_in) if lexicon_in else Lexicon()
    allocate = not no_allocate
    work = [(sid, s, frozenset(assignment), types) for sid, s in enumerate(sentences)]
    if jobs > 1 and len(work) > 1:
        chunk = max(1, len(work) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = pool.map(_extract_one, work, chunksize=chunk)
            extracted = [row for batch in batches for row in batch]
    else:
        extracted = [row for item in work for row in _extract_one(item)]

    feature_lines = [ln for ln in feature_text.splitlines() if ln.strip()]
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(_EXAMPLES_MAGIC + "\n")
        for line in feature_lines:
            handle.write(f"#! feature {line}\n")
        if lexicon_out:
            rel = os.path.relpath(lexicon_out, os.path.dirname(out) or ".")
            handle.write(f"#! lexicon {rel}\n")
        for sid, focus, gold, identities in extracted:
            ids = sorted(
                fid
                for fid in (lexicon.intern(name, allocate) for name in identities)
                if fid is not None
            )
            idx = set_index[assignment[gold].members]
            id_text = ",".join(map(str, ids)) if ids else "-"
            handle.write(f"{sid}\t{focus}\t{gold}\t{idx}\t{id_text}\n")
    if lexicon_out:
        lexicon.save(lexicon_out)
    log.info("extracted %d examples, %d features", len(extracted), len(lexicon))
    return 0


def _load_examples(path: str):
    """Returns (rows, feature_lines, lexicon_path) from an examples file."""
    if not os.path.exists(path):
        raise DataError(f"examples file not found: {path}")
    rows = []
    feature_lines: list[str] = []
    lexicon_path = None
    with open(path, encoding="utf-8") as handle:
        first = handle.readline().rstrip("\n")
        if first != _EXAMPLES_MAGIC:
            raise DataError(f"{path} is not an examples file")
        for raw in handle:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#! feature "):
                feature_lines.append(line[len("#! feature ") :])
                continue
            if line.startswith("#! lexicon "):
                lexicon_path = line[len("#! lexicon ") :]
                continue
            cols = line.split("\t")
            if len(cols) != 5:
                raise DataError(f"bad examples row: {line!r}")
            ids = frozenset() if cols[4] == "-" else frozenset(map(int, cols[4].split(",")))
            rows.append((int(cols[0]), int(cols[1]), cols[2], int(cols[3]), ids))
    if lexicon_path is not None:
        lexicon_path = os.path.join(os.path.dirname(path) or ".", lexicon_path)
    return rows, feature_lines, lexicon_path


# ------------------------------------------------------------------ train


def _cmd_train(ns, cfg) -> int:
    examples_path = _opt(ns, cfg, "train", "examples", None)
    sets_path = _opt(ns, cfg, "train", "sets", None)
    out = _opt(ns, cfg, "train", "out", None)
    rule = _opt(ns, cfg, "train", "rule", "winnow")
    regime = _opt(ns, cfg, "train", "regime", "per-set")
    for name, value in (("examples", examples_path), ("sets", sets_path), ("out", out)):
        if value is None:
            raise UsageError(f"train: --{name} is required")
    rows, feature_lines, lexicon_path = _load_examples(examples_path)
    with open(sets_path, encoding="utf-8") as handle:
        sets = confusions.load_sets(handle)
    if rule == "winnow":
        config = learner.WinnowConfig(
            promotion=_opt(ns, cfg, "train", "promotion", 1.5, float),
            demotion=_opt(ns, cfg, "train", "demotion", 0.8, float),
            threshold=_opt(ns, cfg, "train", "threshold", 1.0, float),
            initial_weight=_opt(ns, cfg, "train", "initial-weight", 0.2, float),
            epochs=_opt(ns, cfg, "train", "epochs", 2, int),
        )
    elif rule == "nb":
        config = learner.NBConfig(
            smoothing=_opt(ns, cfg, "train", "smoothing", 0.1, float),
            epochs=_opt(ns, cfg, "train", "epochs", 1, int),
        )
    elif rule == "perceptron":
        config = learner.PerceptronConfig(
            step=_opt(ns, cfg, "train", "step", 1.0, float),
            threshold=_opt(ns, cfg, "train", "threshold", 1.0, float),
            epochs=_opt(ns, cfg, "train", "epochs", 2, int),
        )
    else:
        raise UsageError(f"train: unknown rule {rule!r}")
    examples = []
    for _, _, gold, set_idx, ids in rows:
        if not 0 <= set_idx < len(sets):
            raise DataError(f"examples reference set {set_idx}, sets file has {len(sets)}")
        examples.append(learner.Example(ids, gold, sets[set_idx].members))
    network = learner.SnowNetwork(rule, config)
    mistakes = network.train(examples, regime=regime)
    lexicon_rel = (
        os.path.relpath(lexicon_path, os.path.dirname(out) or ".")
        if lexicon_path
        else None
    )
    learner.save_model(network, out, lexicon_rel, feature_lines, regime=regime)
    log.info("trained %d targets with %d mistakes", len(network.targets), mistakes)
    return 0


# ------------------------------------------------------------------- eval


def _load_model(path: str):
    if not os.path.exists(path):
        raise DataError(f"model file not found: {path}")
    network, meta = learner.load_model(path)
    lexicon_path = meta.get("lexicon")
    if lexicon_path is not None:
        lexicon_path = os.path.join(os.path.dirname(path) or ".", lexicon_path)
    return network, meta, lexicon_path


def _cmd_eval(ns, cfg) -> int:
    model_path = _opt(ns, cfg, "eval", "model", None)
    test_path = _opt(ns, cfg, "eval", "test", None)
    sets_path = _opt(ns, cfg, "eval", "sets", None)
    test_regime = _opt(ns, cfg, "eval", "test-regime", "per-set")
    ngrams_path = _opt(ns, cfg, "eval", "ngrams", None)
    tsv_out = _opt(ns, cfg, "eval", "tsv", None)
    lexicon_override = _opt(ns, cfg, "eval", "lexicon", None)
    for name, value in (("model", model_path), ("test", test_path), ("sets", sets_path)):
        if value is None:
            raise UsageError(f"eval: --{name} is required")
    network, meta, lexicon_path = _load_model(model_path)
    lexicon_path = lexicon_override or lexicon_path
    if lexicon_path is None:
        raise DataError("model does not reference a lexicon; pass --lexicon")
    if not os.path.exists(lexicon_path):
        raise DataError(f"lexicon file not found: {lexicon_path}")
    lexicon = Lexicon.load(lexicon_path)
    if not meta["features"]:
        raise DataError("model does not record its feature definitions")
    types = features.parse_feature_types("\n".join(meta["features"]))

    sentences = _read_corpus(test_path)
    priors = {label: node.positives for label, node in network.targets.items()}
    with open(sets_path, encoding="utf-8") as handle:
        sets = confusions.load_sets(handle, priors)
    assignment = experiment.build_assignment(sets)
    examples = experiment.generate_examples(sentences, assignment, types, lexicon, False)
    if not examples:
        raise DataError("no target occurrences in the test corpus")
    pool = tuple(sorted(assignment)) if test_regime == "all" else None

    columns = ["Bline", "NB" if network.rule == "nb" else "SNoW"]
    cells = {
        "Bline": experiment.evaluate_wer(experiment.mle_predictor(priors), examples, pool).wer,
        columns[1]: experiment.evaluate_wer(
            experiment.snow_predictor(network), examples, pool
        ).wer,
    }
    if ngrams_path:
        table = baselines.NgramTable.load(ngrams_path)
        columns.append("Trigram")
        cells["Trigram"] = experiment.evaluate_wer(
            experiment.trigram_predictor(table), examples, pool
        ).wer
    source = "pairs"
    if sets and sets[0].provenance.startswith("pc:"):
        source = "phonetic"
    elif sets and sets[0].provenance == "all":
        source = "all"
    train_tag = (
        experiment._regime_tag(meta["regime"], source) if meta["regime"] else "?"
    )
    label = f"Train {train_tag} Test {experiment._regime_tag(test_regime, source)}"
    report = experiment.EvaluationReport(
        columns=columns,
        rows=[experiment.RegimeRow(label, cells, len(examples))],
        train_examples=0,
        test_examples=len(examples),
        feature_count=len(lexicon),
        set_count=len(sets),
        set_sizes=[len(cs.members) for cs in sets],
    )
    sys.stdout.write(report.to_text())
    if tsv_out:
        with open(tsv_out, "w", encoding="utf-8") as handle:
            handle.write(report.to_tsv())
    return 0


# ---------------------------------------------------------------- inspect


def _cmd_inspect(ns, cfg) -> int:
    model_path = _opt(ns, cfg, "inspect", "model", None)
    target = _opt(ns, cfg, "inspect", "target", None)
    top = _opt(ns, cfg, "inspect", "top", 10, int)
    lexicon_override = _opt(ns, cfg, "inspect", "lexicon", None)
    if model_path is None or target is None:
        raise UsageError("inspect: --model and --target are required")
    network, _, lexicon_path = _load_model(model_path)
    lexicon_path = lexicon_override or lexicon_path
    try:
        ranked = network.top_features(target, top)
    except ValueError as err:
        raise DataError(str(err)) from None
    lexicon = None
    if lexicon_path and os.path.exists(lexicon_path):
        lexicon = Lexicon.load(lexicon_path)
    for fid, weight in ranked:
        name = lexicon.identity(fid) if lexicon else str(fid)
        print(f"{weight:.6f}\t{fid}\t{name}")
    return 0


# ------------------------------------------------------------------ synth


def _cmd_synth(ns, cfg) -> int:
    config = synth.SynthConfig(
        verbs=_opt(ns, cfg, "synth", "verbs", 20, int),
        sentences=_opt(ns, cfg, "synth", "sentences", 20000, int),
        seed=_opt(ns, cfg, "synth", "seed", 0, int),
        flip=_opt(ns, cfg, "synth", "flip", 0.3, float),
        bare=_opt(ns, cfg, "synth", "bare", 0.05, float),
        filler=_opt(ns, cfg, "synth", "filler", 0.0, float),
    )
    out = _opt(ns, cfg, "synth", "out", None)
    pron_out = _opt(ns, cfg, "synth", "pronunciations-out", None)
    try:
        sentences = synth.generate_corpus(config)
    except ValueError as err:
        raise DataError(str(err)) from None
    text = corpus.format_corpus(sentences)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    if pron_out:
        synth.save_pronunciations(pron_out, synth.pronunciation_lexicon(config))
    return 0


# ------------------------------------------------------------------- main

_COMMANDS = {
    "prepare": _cmd_prepare,
    "confusions": _cmd_confusions,
    "extract": _cmd_extract,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "inspect": _cmd_inspect,
    "synth": _cmd_synth,
}


def build_parser() -> _Parser:
    parser = _Parser(prog="snowpredict")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, *flags: str) -> None:
        p = sub.add_parser(name)
        p.add_argument("--config")
        for flag in flags:
            if flag in ("--no-allocate",):
                p.add_argument(flag, action="store_const", const=True, default=None)
            else:
                p.add_argument(flag, default=None)

    add("prepare", "--in", "--out")
    add(
        "confusions",
        "--corpus", "--mode", "--floor", "--pos-prefix",
        "--pronunciations", "--classes", "--cap", "--out",
    )
    add(
        "extract",
        "--corpus", "--sets", "--features", "--feature-set",
        "--out", "--lexicon-out", "--lexicon", "--no-allocate", "--jobs",
    )
    add(
        "train",
        "--examples", "--sets", "--out", "--rule", "--regime",
        "--promotion", "--demotion", "--threshold", "--initial-weight",
        "--epochs", "--smoothing", "--step",
    )
    add(
        "eval",
        "--model", "--test", "--sets", "--test-regime",
        "--ngrams", "--tsv", "--lexicon",
    )
    add("inspect", "--model", "--target", "--top", "--lexicon")
    add(
        "synth",
        "--verbs", "--sentences", "--seed", "--flip", "--bare", "--filler",
        "--out", "--pronunciations-out",
    )
    return parser


def _setup_logging() -> None:
    level_name = os.environ.get("SNOWPREDICT_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = load_config(ns.config) if ns.config else {}
        return _COMMANDS[ns.command](ns, cfg)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except (
        DataError,
        corpus.CorpusError,
        features.FeatureError,
        confusions.ConfusionError,
        learner.ModelFormatError,
        ValueError,
        OSError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
