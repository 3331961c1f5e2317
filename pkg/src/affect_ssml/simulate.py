"""Synthetic listener ratings, so the full pipeline runs offline end to end."""

from __future__ import annotations

import random
from typing import Sequence

from .errors import UsageError
from .experiment import ManifestRow
from .metrics import RatingRecord, classes_for, level_to_class

MODE_PERFECT = "perfect"
MODE_UNIFORM = "uniform-random"
MODES = (MODE_PERFECT, MODE_UNIFORM)

DEFAULT_RATERS = 10
# chosen so the uniform-random mode lands close to chance level (kappa near 0,
# recalls near 1/3) with the default 10 raters over the default grid
DEFAULT_SEED = 20


def simulate_ratings(
    manifest_rows: Sequence[ManifestRow],
    mode: str,
    raters: int = DEFAULT_RATERS,
    seed: int = DEFAULT_SEED,
) -> list[RatingRecord]:
    """Generate one rating per (stimulus, rater), deterministically for a seed.

    ``perfect`` raters always perceive the intended class; ``uniform-random``
    raters pick uniformly among the three classes of each dimension.
    """
    if mode not in MODES:
        raise UsageError(f"unknown simulation mode {mode!r}; expected one of {MODES}")
    if raters < 1:
        raise UsageError(f"raters must be >= 1, got {raters}")
    rng = random.Random(seed)
    records = []
    for row in manifest_rows:
        spec = row.spec
        for index in range(1, raters + 1):
            if mode == MODE_PERFECT:
                arousal = level_to_class(spec.arousal_level, "arousal")
                valence = level_to_class(spec.valence_level, "valence")
            else:
                arousal = rng.choice(classes_for("arousal"))
                valence = rng.choice(classes_for("valence"))
            records.append(
                RatingRecord(
                    sample_id=spec.sample_id,
                    rater_id=f"r{index:02d}",
                    arousal_rating=arousal,
                    valence_rating=valence,
                )
            )
    return records
