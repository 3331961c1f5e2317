"""Rule-based emotion-to-prosody mapping, emitted as SSML.

Core value types and operations are re-exported here; the HTTP service lives
in ``affect_ssml.service`` and the command-line client in ``affect_ssml.cli``.
"""

from .emotion import BipolarEmotion, EmotionPoint, MaryScaleEmotion, map_to_natural_range, to_bipolar, to_mary_scale
from .errors import AffectSsmlError, DataError, KappaUndefinedError, UsageError
from .metrics import ConfusionMatrix, RatingRecord, confusion_from_ratings, evaluate, fleiss_kappa, level_to_class, uar
from .rules import (
    MaryAcoustics,
    ProsodyRanges,
    ProsodyTarget,
    WeightMatrix,
    mary_full_rules,
    mary_reduced_target,
    model_for,
    syntact_map,
)
from .ssml import SsmlDocument, ValidationReport, emit_ssml, validate_ssml

__version__ = "0.1.0"

__all__ = [
    "AffectSsmlError",
    "BipolarEmotion",
    "ConfusionMatrix",
    "DataError",
    "EmotionPoint",
    "KappaUndefinedError",
    "MaryAcoustics",
    "MaryScaleEmotion",
    "ProsodyRanges",
    "ProsodyTarget",
    "RatingRecord",
    "SsmlDocument",
    "UsageError",
    "ValidationReport",
    "WeightMatrix",
    "confusion_from_ratings",
    "emit_ssml",
    "evaluate",
    "fleiss_kappa",
    "level_to_class",
    "map_to_natural_range",
    "mary_full_rules",
    "mary_reduced_target",
    "model_for",
    "syntact_map",
    "to_bipolar",
    "to_mary_scale",
    "uar",
    "validate_ssml",
    "__version__",
]
