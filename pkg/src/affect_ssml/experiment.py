"""Stimulus-grid construction, SSML rendering, and the manifest file format.

The perceptual-experiment grid is the Cartesian product of method, voice,
sentence, and the two varied emotion dimensions at three levels each
(0.1 / 0.5 / 0.9, neutral 0.5); power is pinned to neutral. The manifest CSV
tracks one row per stimulus through rendering and synthesis.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .emotion import NEUTRAL_LEVEL, EmotionPoint
from .errors import DataError, UsageError
from .rules import METHODS, ProsodyRanges, WeightMatrix, model_for
from .ssml import SSML_FILE_SUFFIX, emit_ssml

LEVELS = (0.1, 0.5, 0.9)
VOICES = ("female", "male")

MANIFEST_COLUMNS = (
    "sample_id",
    "method",
    "voice",
    "sentence_id",
    "valence_level",
    "arousal_level",
    "ssml_path",
    "audio_path",
    "status",
)
MANIFEST_FILENAME = "manifest.csv"

STATUS_PENDING = "pending"
STATUS_OK = "ok"
STATUS_RETRYABLE = "retryable_failure"
STATUS_PERMANENT = "permanent_failure"
STATUSES = (STATUS_PENDING, STATUS_OK, STATUS_RETRYABLE, STATUS_PERMANENT)


def level_token(level: float) -> str:
    """Fixed one-decimal rendering of a grid level, used in ids and the manifest."""
    return f"{level:.1f}"


@dataclass(frozen=True)
class StimulusSpec:
    """One cell of the stimulus grid; the sample id encodes all coordinates."""

    sample_id: str
    method: str
    voice: str
    sentence_id: str
    valence_level: float
    arousal_level: float


@dataclass
class ManifestRow:
    spec: StimulusSpec
    ssml_path: str
    audio_path: str = ""
    status: str = STATUS_PENDING


def build_grid(
    sentences: Sequence[str],
    voices: Sequence[str] = VOICES,
    methods: Sequence[str] = METHODS,
    levels: Sequence[float] = LEVELS,
) -> list[StimulusSpec]:
    """Full Cartesian product in deterministic (method, voice, sentence, valence, arousal) order."""
    if not sentences:
        raise UsageError("at least one sentence is required")
    if len(set(sentences)) != len(sentences):
        raise UsageError("duplicate sentences in grid input")
    for name, values, allowed in (("voice", voices, VOICES), ("method", methods, METHODS)):
        if not values:
            raise UsageError(f"at least one {name} is required")
        if len(set(values)) != len(values):
            raise UsageError(f"duplicate {name} values: {list(values)}")
        unknown = [v for v in values if v not in allowed]
        if unknown:
            raise UsageError(f"unknown {name} values {unknown}; expected a subset of {allowed}")
    if sorted(set(levels)) != sorted(LEVELS):
        raise UsageError(f"levels must be exactly {LEVELS}, got {tuple(levels)}")

    sentence_ids = [f"s{i}" for i in range(1, len(sentences) + 1)]
    specs = [
        StimulusSpec(
            sample_id=f"{method}_{voice}_{sid}_v{level_token(valence)}_a{level_token(arousal)}",
            method=method,
            voice=voice,
            sentence_id=sid,
            valence_level=valence,
            arousal_level=arousal,
        )
        for method in sorted(methods)
        for voice in sorted(voices)
        for sid in sentence_ids
        for valence in sorted(LEVELS)
        for arousal in sorted(LEVELS)
    ]
    ids = [spec.sample_id for spec in specs]
    if len(set(ids)) != len(ids):
        raise DataError("sample id collision in grid")
    return specs


def render_grid(
    specs: Iterable[StimulusSpec],
    sentences: Sequence[str],
    out_dir: str | Path,
    weights: WeightMatrix | None = None,
    ranges: ProsodyRanges | None = None,
) -> list[ManifestRow]:
    """Write one SSML file per stimulus plus the manifest CSV; reruns are byte-identical.

    SSML files land under ``<out_dir>/ssml/``; manifest paths are relative to
    the manifest's own directory. Power is pinned to neutral, since the grid
    varies valence and arousal only.
    """
    out = Path(out_dir)
    ssml_dir = out / "ssml"
    try:
        ssml_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {ssml_dir}: {exc}") from exc

    texts = {f"s{i}": text for i, text in enumerate(sentences, start=1)}
    models = {method: model_for(method, weights, ranges) for method in METHODS}
    rows = []
    for spec in specs:
        if spec.sentence_id not in texts:
            raise DataError(f"no sentence text for {spec.sentence_id!r} (sample {spec.sample_id})")
        point = EmotionPoint(valence=spec.valence_level, arousal=spec.arousal_level, power=NEUTRAL_LEVEL)
        document = emit_ssml(texts[spec.sentence_id], models[spec.method](point))
        relative_path = f"ssml/{spec.sample_id}{SSML_FILE_SUFFIX}"
        (out / relative_path).write_bytes((document.content + "\n").encode("utf-8"))
        rows.append(ManifestRow(spec=spec, ssml_path=relative_path))
    write_manifest(rows, out / MANIFEST_FILENAME)
    return rows


def write_manifest(rows: Sequence[ManifestRow], path: str | Path) -> None:
    """Write the manifest CSV (UTF-8, LF line endings)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(MANIFEST_COLUMNS)
        for row in rows:
            spec = row.spec
            writer.writerow(
                [
                    spec.sample_id,
                    spec.method,
                    spec.voice,
                    spec.sentence_id,
                    level_token(spec.valence_level),
                    level_token(spec.arousal_level),
                    row.ssml_path,
                    row.audio_path,
                    row.status,
                ]
            )


def read_manifest(path: str | Path) -> list[ManifestRow]:
    """Read and validate a manifest CSV."""
    file = Path(path)
    if not file.is_file():
        raise UsageError(f"manifest not found: {file}")
    with open(file, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{file}: empty manifest") from None
        if tuple(header) != MANIFEST_COLUMNS:
            raise DataError(f"{file}: bad header {header!r}; expected {list(MANIFEST_COLUMNS)}")
        rows = []
        seen_ids = set()
        for record in reader:
            lineno = reader.line_num
            if len(record) != len(MANIFEST_COLUMNS):
                raise DataError(f"{file}:{lineno}: expected {len(MANIFEST_COLUMNS)} fields, got {len(record)}")
            sample_id, method, voice, sentence_id, valence, arousal, ssml_path, audio_path, status = record
            if sample_id in seen_ids:
                raise DataError(f"{file}:{lineno}: duplicate sample_id {sample_id!r}")
            seen_ids.add(sample_id)
            if method not in METHODS:
                raise DataError(f"{file}:{lineno}: unknown method {method!r}")
            if voice not in VOICES:
                raise DataError(f"{file}:{lineno}: unknown voice {voice!r}")
            if status not in STATUSES:
                raise DataError(f"{file}:{lineno}: unknown status {status!r}")
            levels = {}
            for name, token in (("valence", valence), ("arousal", arousal)):
                matches = [level for level in LEVELS if level_token(level) == token]
                if not matches:
                    raise DataError(f"{file}:{lineno}: {name} level {token!r} is not one of {LEVELS}")
                levels[name] = matches[0]
            rows.append(
                ManifestRow(
                    spec=StimulusSpec(
                        sample_id=sample_id,
                        method=method,
                        voice=voice,
                        sentence_id=sentence_id,
                        valence_level=levels["valence"],
                        arousal_level=levels["arousal"],
                    ),
                    ssml_path=ssml_path,
                    audio_path=audio_path,
                    status=status,
                )
            )
    return rows
