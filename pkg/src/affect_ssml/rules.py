"""The two emotion-to-prosody rule models.

``syntact``   -- a linear weight matrix from emotion dimensions to prosody
                 parameters, mapped onto configurable natural-sounding ranges.
``schroeder`` -- the MARY TTS emotion module's rule set; the full set is
                 exposed for inspection, while the reduced variant (global
                 pitch and rate only) is what drives SSML output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .emotion import (
    DIMENSIONS,
    BipolarEmotion,
    EmotionPoint,
    MaryScaleEmotion,
    map_to_natural_range,
    to_bipolar,
    to_mary_scale,
)
from .errors import UsageError

PROSODY_PARAMS = ("pitch", "rate", "volume")

METHOD_SCHROEDER = "schroeder"
METHOD_SYNTACT = "syntact"
METHODS = (METHOD_SCHROEDER, METHOD_SYNTACT)

ACCENT_FALLING = "falling"
ACCENT_RISING = "rising"
ACCENT_ALTERNATING = "alternating"

# Span of one direction of the MARY input scale; reduced-rule halfwidths are
# coefficient sums times this.
MARY_SPAN = 100.0


@dataclass(frozen=True)
class WeightMatrix:
    """Linear coefficients from emotion dimensions to prosody parameters.

    ``coefficients[dimension][parameter]`` weighs that dimension's bipolar
    score into the raw value of that parameter. Missing entries count as 0.
    """

    coefficients: Mapping[str, Mapping[str, float]]

    def __post_init__(self) -> None:
        table: dict[str, dict[str, float]] = {d: {p: 0.0 for p in PROSODY_PARAMS} for d in DIMENSIONS}
        for dim, row in self.coefficients.items():
            if dim not in DIMENSIONS:
                raise UsageError(f"unknown emotion dimension {dim!r} in weight matrix")
            for param, value in row.items():
                if param not in PROSODY_PARAMS:
                    raise UsageError(f"unknown prosody parameter {param!r} in weight matrix")
                value = float(value)
                if not math.isfinite(value):
                    raise UsageError(f"weight {dim}.{param} must be finite, got {value!r}")
                table[dim][param] = value
        object.__setattr__(self, "coefficients", table)

    def weight(self, dimension: str, parameter: str) -> float:
        return self.coefficients[dimension][parameter]

    def halfwidth(self, parameter: str) -> float:
        """Largest |raw value| reachable for a parameter from bipolar inputs."""
        return sum(abs(self.coefficients[d][parameter]) for d in DIMENSIONS)

    @classmethod
    def default(cls) -> "WeightMatrix":
        """Unit weights on pitch<-valence and rate<-arousal, zero elsewhere."""
        return cls({"valence": {"pitch": 1.0}, "arousal": {"rate": 1.0}})


@dataclass(frozen=True)
class ProsodyRanges:
    """Natural-sounding output bounds per prosody parameter.

    Pitch bounds are semitone shifts, rate bounds are speaking-rate factors
    (1.0 neutral), volume bounds are decibel shifts. Defaults are symmetric
    about the neutral values so a neutral input maps to 0 st / 1.0 / 0 dB.
    """

    pitch_min: float = -4.0
    pitch_max: float = 4.0
    rate_min: float = 0.7
    rate_max: float = 1.3
    volume_min: float = -6.0
    volume_max: float = 6.0

    def __post_init__(self) -> None:
        for param in PROSODY_PARAMS:
            lo, hi = self.bounds(param)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise UsageError(f"{param} range must be finite, got [{lo!r}, {hi!r}]")
            if not lo < hi:
                raise UsageError(f"{param} range must satisfy min < max, got [{lo}, {hi}]")

    def bounds(self, parameter: str) -> tuple[float, float]:
        return getattr(self, f"{parameter}_min"), getattr(self, f"{parameter}_max")

    def midpoint(self, parameter: str) -> float:
        lo, hi = self.bounds(parameter)
        return (lo + hi) / 2.0


@dataclass(frozen=True)
class ProsodyTarget:
    """Resolved prosody deltas: semitone pitch shift, rate factor, dB volume shift."""

    pitch_st: float
    rate_factor: float
    volume_db: float

    def __post_init__(self) -> None:
        for name in ("pitch_st", "rate_factor", "volume_db"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise UsageError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class MaryAcoustics:
    """Full output of the MARY emotion-module rule set, on its own rule units.

    Only the global pitch and rate values feed SSML; the remaining parameters
    (dynamics, accent shape and slope, segment durations, pauses) are computed
    and exposed for inspection but never rendered. ``range_dynamics`` carries
    the raw formula value; the rule set annotates it with a minimum of 100,
    whose exact semantics are unclear, so values below the floor are flagged
    instead of silently clamped.
    """

    pitch: float
    pitch_dynamics: float
    range_semitones: float
    range_dynamics: float
    range_dynamics_below_floor: bool
    accent_prominence: float
    preferred_accent_shape: str
    accent_slope: float
    rate: float
    number_of_pauses: float
    duration: float
    vowel_duration: float
    nasal_duration: float
    liquid_duration: float
    plosive_duration: float
    fricative_duration: float
    volume: float


RANGE_DYNAMICS_FLOOR = 100.0


def syntact_map(
    emotion: BipolarEmotion,
    weights: WeightMatrix | None = None,
    ranges: ProsodyRanges | None = None,
) -> ProsodyTarget:
    """Weighted linear combination of emotion dimensions per prosody parameter.

    raw(y) = sum over dimensions d of w[d][y] * d, then mapped affinely from
    the theoretical span [-W(y), +W(y)] (W = sum of |w[d][y]|) onto the
    configured natural range. A parameter with all-zero weights stays at the
    neutral midpoint of its range.
    """
    weights = weights if weights is not None else WeightMatrix.default()
    ranges = ranges if ranges is not None else ProsodyRanges()
    values: dict[str, float] = {}
    for param in PROSODY_PARAMS:
        raw = sum(weights.weight(dim, param) * getattr(emotion, dim) for dim in DIMENSIONS)
        width = weights.halfwidth(param)
        lo, hi = ranges.bounds(param)
        values[param] = ranges.midpoint(param) if width == 0.0 else map_to_natural_range(raw, width, lo, hi)
    return ProsodyTarget(pitch_st=values["pitch"], rate_factor=values["rate"], volume_db=values["volume"])


def accent_shape_for(valence: float) -> str:
    """Accent shape from valence alone: falling below -20, alternating above 40, else rising."""
    if valence < -20.0:
        return ACCENT_FALLING
    if valence > 40.0:
        return ACCENT_ALTERNATING
    return ACCENT_RISING


def mary_full_rules(emotion: MaryScaleEmotion) -> MaryAcoustics:
    """Evaluate the complete MARY emotion-module rule set.

    Inputs are on the [-100, 100] scale; outputs are rule units except for
    ``range_semitones``. Exact formulas:

        pitch              =  0.3*arousal + 0.1*valence - 0.1*power
        pitch_dynamics     = -15 + 0.3*arousal - 0.3*power
        range_semitones    =  4 + 0.04*arousal
        range_dynamics     = -40 + 1.2*arousal + 0.4*power   (min 100 flagged)
        accent_prominence  =  0.5*arousal - 0.5*valence
        accent_slope       =  1*arousal - 0.5*valence
        rate               =  0.5*arousal + 0.2*valence
        number_of_pauses   =  0.7*arousal
        duration           = -0.2*arousal
        vowel/nasal/liquid durations   = 0.3*valence + 0.3*power
        plosive/fricative durations    = 0.5*arousal - 0.3*valence
        volume             = 50 + 0.33*arousal
    """
    a, v, p = emotion.arousal, emotion.valence, emotion.power
    sonorant_duration = 0.3 * v + 0.3 * p
    obstruent_duration = 0.5 * a - 0.3 * v
    range_dynamics = -40.0 + 1.2 * a + 0.4 * p
    return MaryAcoustics(
        pitch=0.3 * a + 0.1 * v - 0.1 * p,
        pitch_dynamics=-15.0 + 0.3 * a - 0.3 * p,
        range_semitones=4.0 + 0.04 * a,
        range_dynamics=range_dynamics,
        range_dynamics_below_floor=range_dynamics < RANGE_DYNAMICS_FLOOR,
        accent_prominence=0.5 * a - 0.5 * v,
        preferred_accent_shape=accent_shape_for(v),
        accent_slope=1.0 * a - 0.5 * v,
        rate=0.5 * a + 0.2 * v,
        number_of_pauses=0.7 * a,
        duration=-0.2 * a,
        vowel_duration=sonorant_duration,
        nasal_duration=sonorant_duration,
        liquid_duration=sonorant_duration,
        plosive_duration=obstruent_duration,
        fricative_duration=obstruent_duration,
        volume=50.0 + 0.33 * a,
    )


# Reduced rule set: the global pitch and rate rules only.
_REDUCED_PITCH_COEFFS = {"arousal": 0.3, "valence": 0.1, "power": -0.1}
_REDUCED_RATE_COEFFS = {"arousal": 0.5, "valence": 0.2}


def mary_reduced_target(emotion: MaryScaleEmotion, ranges: ProsodyRanges | None = None) -> ProsodyTarget:
    """Reduced MARY rules mapped onto natural ranges.

    Keeps only the global pitch rule (0.3*arousal + 0.1*valence - 0.1*power)
    and rate rule (0.5*arousal + 0.2*valence). Raw values are mapped from their
    theoretical spans (halfwidths 50 and 70 on the MARY scale) onto the
    configured ranges. The reduced set has no volume rule, so volume stays at
    the neutral midpoint.
    """
    ranges = ranges if ranges is not None else ProsodyRanges()
    raw_pitch = 0.3 * emotion.arousal + 0.1 * emotion.valence - 0.1 * emotion.power
    raw_rate = 0.5 * emotion.arousal + 0.2 * emotion.valence
    pitch_halfwidth = sum(abs(c) for c in _REDUCED_PITCH_COEFFS.values()) * MARY_SPAN
    rate_halfwidth = sum(abs(c) for c in _REDUCED_RATE_COEFFS.values()) * MARY_SPAN
    return ProsodyTarget(
        pitch_st=map_to_natural_range(raw_pitch, pitch_halfwidth, *ranges.bounds("pitch")),
        rate_factor=map_to_natural_range(raw_rate, rate_halfwidth, *ranges.bounds("rate")),
        volume_db=ranges.midpoint("volume"),
    )


def model_for(
    method: str,
    weights: WeightMatrix | None = None,
    ranges: ProsodyRanges | None = None,
) -> Callable[[EmotionPoint], ProsodyTarget]:
    """Return the full EmotionPoint -> ProsodyTarget pipeline for a method name."""
    if method == METHOD_SYNTACT:
        return lambda point: syntact_map(to_bipolar(point), weights, ranges)
    if method == METHOD_SCHROEDER:
        return lambda point: mary_reduced_target(to_mary_scale(point), ranges)
    raise UsageError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
