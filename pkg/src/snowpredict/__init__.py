"""Word prediction with sparse winner-take-all learners over relational
context features: corpus ingestion, feature instantiation, Winnow and
naive-Bayes training, confusion-set construction, and a WER harness."""

from .corpus import (
    Sentence,
    Token,
    build_information_source,
    build_structures,
    parse_corpus,
)
from .features import (
    default_feature_types,
    instantiate,
    parse_feature_types,
)
from .learner import Example, SnowNetwork, load_model, save_model
from .lexicon import Lexicon

__version__ = "0.1.0"

__all__ = [
    "Example",
    "Lexicon",
    "Sentence",
    "SnowNetwork",
    "Token",
    "build_information_source",
    "build_structures",
    "default_feature_types",
    "instantiate",
    "load_model",
    "parse_corpus",
    "parse_feature_types",
    "save_model",
    "__version__",
]
