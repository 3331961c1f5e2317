"""SSML emission with canonical prosody attributes, plus a structural validator.

One ``prosody`` element wraps the whole utterance and carries exactly the
``pitch``, ``rate``, and ``volume`` attributes in canonical form:

    pitch   signed semitones, two decimals      +3.20st
    rate    non-negative integer percent        76%      (100% neutral)
    volume  signed decibels, one decimal        +0.0dB

These unit forms sit in the intersection of what common engines accept, and
fixed precision keeps emitted documents byte-stable.
"""

from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .errors import UsageError
from .rules import ProsodyTarget

PITCH_PATTERN = re.compile(r"^[+-]\d+\.\d{2}st$")
RATE_PATTERN = re.compile(r"^\d+%$")
VOLUME_PATTERN = re.compile(r"^[+-]\d+\.\d{1}dB$")

_ATTRIBUTE_PATTERNS = {"pitch": PITCH_PATTERN, "rate": RATE_PATTERN, "volume": VOLUME_PATTERN}

# Escapes beyond the defaults (& < >) so text survives attribute-ish contexts too.
_EXTRA_ESCAPES = {'"': "&quot;", "'": "&apos;"}

SSML_FILE_SUFFIX = ".ssml"


def format_pitch(pitch_st: float) -> str:
    """Canonical pitch attribute, e.g. +3.20st."""
    return f"{pitch_st + 0.0:+.2f}st"


def format_rate(rate_factor: float) -> str:
    """Canonical rate attribute: rate factor as integer percent, e.g. 76%."""
    if rate_factor < 0:
        raise UsageError(f"rate factor must be non-negative, got {rate_factor!r}")
    return f"{round(rate_factor * 100)}%"


def format_volume(volume_db: float) -> str:
    """Canonical volume attribute, e.g. -1.5dB."""
    return f"{volume_db + 0.0:+.1f}dB"


@dataclass(frozen=True)
class SsmlDocument:
    """A complete single-utterance SSML document."""

    content: str

    def __str__(self) -> str:
        return self.content


def emit_ssml(text: str, target: ProsodyTarget) -> SsmlDocument:
    """Render text into an SSML document carrying the target's prosody.

    Emission is byte-deterministic for identical inputs; the special
    characters & < > " ' in the text are escaped.
    """
    if not text or not text.strip():
        raise UsageError("text must be non-empty")
    for name in ("pitch_st", "rate_factor", "volume_db"):
        if not math.isfinite(getattr(target, name)):
            raise UsageError(f"target {name} must be finite")
    content = (
        f'<speak><prosody pitch="{format_pitch(target.pitch_st)}"'
        f' rate="{format_rate(target.rate_factor)}"'
        f' volume="{format_volume(target.volume_db)}">'
        f"{escape(text, _EXTRA_ESCAPES)}</prosody></speak>"
    )
    return SsmlDocument(content)


@dataclass
class ValidationReport:
    """Outcome of validating one document; empty violations means ok."""

    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_ssml(document: str | SsmlDocument) -> ValidationReport:
    """Check well-formedness, the speak/prosody structure, and attribute grammar.

    All violations found are reported, not just the first. Violations are
    data, not failures: a malformed document yields a report, never a raise.
    """
    report = ValidationReport()
    try:
        root = ET.fromstring(str(document))
    except ET.ParseError as exc:
        report.violations.append(f"not well-formed XML: {exc}")
        return report

    if root.tag != "speak":
        report.violations.append(f"root element is {root.tag!r}, expected 'speak'")

    prosody_elements = list(root.iter("prosody"))
    if len(prosody_elements) != 1:
        report.violations.append(f"expected exactly one prosody element, found {len(prosody_elements)}")
    for element in prosody_elements:
        for attribute, pattern in _ATTRIBUTE_PATTERNS.items():
            value = element.get(attribute)
            if value is None:
                report.violations.append(f"prosody element is missing the {attribute!r} attribute")
            elif not pattern.match(value):
                report.violations.append(
                    f"prosody {attribute}={value!r} does not match the canonical form {pattern.pattern}"
                )
        for attribute in element.keys():
            if attribute not in _ATTRIBUTE_PATTERNS:
                report.violations.append(f"prosody element carries unexpected attribute {attribute!r}")
    return report
