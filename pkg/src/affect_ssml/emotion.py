"""Emotion-dimension value types and the rescaling steps feeding both rule models.

Emotion states live on three dimensions (valence, arousal, power), each scored
in the unit interval with 0.5 as the neutral level. The two rule models consume
different internal scales, so both rescalers are explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UsageError

DIMENSIONS = ("valence", "arousal", "power")

NEUTRAL_LEVEL = 0.5


def _checked(name: str, value: float, lo: float, hi: float) -> float:
    value = float(value)
    if not math.isfinite(value) or not (lo <= value <= hi):
        raise UsageError(f"{name} must be a finite value in [{lo}, {hi}], got {value!r}")
    return value


@dataclass(frozen=True)
class EmotionPoint:
    """An intended expressive state; every dimension in [0, 1], 0.5 neutral."""

    valence: float
    arousal: float
    power: float = NEUTRAL_LEVEL

    def __post_init__(self) -> None:
        for name in DIMENSIONS:
            object.__setattr__(self, name, _checked(name, getattr(self, name), 0.0, 1.0))


@dataclass(frozen=True)
class BipolarEmotion:
    """Emotion dimensions rescaled to [-1, 1] with 0 neutral."""

    valence: float
    arousal: float
    power: float = 0.0

    def __post_init__(self) -> None:
        for name in DIMENSIONS:
            object.__setattr__(self, name, _checked(name, getattr(self, name), -1.0, 1.0))


@dataclass(frozen=True)
class MaryScaleEmotion:
    """Emotion dimensions on the [-100, 100] scale the MARY rule set expects.

    The MARY emotion module's thresholds and offsets (accent-shape switches at
    -20 and +40, volume base of 50) only make sense on a scale of roughly a
    hundred units per direction.
    """

    valence: float
    arousal: float
    power: float = 0.0

    def __post_init__(self) -> None:
        for name in DIMENSIONS:
            object.__setattr__(self, name, _checked(name, getattr(self, name), -100.0, 100.0))


NEUTRAL_POINT = EmotionPoint(NEUTRAL_LEVEL, NEUTRAL_LEVEL, NEUTRAL_LEVEL)


def to_bipolar(point: EmotionPoint) -> BipolarEmotion:
    """Rescale each dimension from [0, 1] to [-1, 1] (d' = 2d - 1)."""
    return BipolarEmotion(
        valence=2.0 * point.valence - 1.0,
        arousal=2.0 * point.arousal - 1.0,
        power=2.0 * point.power - 1.0,
    )


def to_mary_scale(point: EmotionPoint) -> MaryScaleEmotion:
    """Rescale each dimension from [0, 1] to [-100, 100] (d' = 200d - 100)."""
    return MaryScaleEmotion(
        valence=200.0 * point.valence - 100.0,
        arousal=200.0 * point.arousal - 100.0,
        power=200.0 * point.power - 100.0,
    )


def map_to_natural_range(raw: float, halfwidth: float, out_min: float, out_max: float) -> float:
    """Affinely map ``raw`` from [-halfwidth, +halfwidth] onto [out_min, out_max].

    Zero lands on the midpoint of the output range, so a neutral input keeps
    the prosody parameter at its neutral value. The result is clamped into
    [out_min, out_max] afterwards; that only matters for raw values outside
    the theoretical span, which can happen with user-supplied weights.
    """
    for name, value in (("raw", raw), ("halfwidth", halfwidth), ("out_min", out_min), ("out_max", out_max)):
        if not math.isfinite(value):
            raise UsageError(f"{name} must be finite, got {value!r}")
    if halfwidth <= 0:
        raise UsageError(f"halfwidth must be positive, got {halfwidth!r}")
    if not out_min < out_max:
        raise UsageError(f"invalid output range [{out_min}, {out_max}]")
    mid = (out_min + out_max) / 2.0
    value = mid + (raw / halfwidth) * ((out_max - out_min) / 2.0)
    return min(max(value, out_min), out_max)
