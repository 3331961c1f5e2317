"""Plain-text configuration files: prosody parameters, sentences, run settings.

All files share one format: UTF-8 text, ``key = value`` per line, ``#`` starts
a comment, blank lines ignored. The sentence list is even simpler (one
sentence per line). Packaged defaults live under ``affect_ssml/data/``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .emotion import DIMENSIONS
from .errors import UsageError
from .rules import PROSODY_PARAMS, ProsodyRanges, WeightMatrix

DEFAULT_PARAMS_RESOURCE = "default_params.cfg"
DEFAULT_SENTENCES_RESOURCE = "sentences.txt"


def _read_config_text(path: str | Path | None, resource: str) -> str:
    if path is None:
        return resources.files("affect_ssml").joinpath(f"data/{resource}").read_text(encoding="utf-8")
    file = Path(path)
    if not file.is_file():
        raise UsageError(f"configuration file not found: {file}")
    return file.read_text(encoding="utf-8")


def parse_kv_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse ``key = value`` lines into an ordered dict, rejecting malformed lines."""
    entries: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise UsageError(f"{source}:{lineno}: empty key")
        if key in entries:
            raise UsageError(f"{source}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise UsageError(f"value for {key!r} must be a decimal number, got {value!r}") from None


def load_prosody_params(path: str | Path | None = None) -> tuple[WeightMatrix, ProsodyRanges]:
    """Load the weight matrix and natural ranges from a config file.

    Two key shapes are accepted:
      ``<emotion>.<parameter> = w``   weight entry, e.g. ``valence.pitch = 1.0``
      ``<parameter>.min|max = x``     range bound, e.g. ``rate.max = 1.3``

    Entries override the built-in defaults key by key; omitted entries keep
    their default values. With no path, the packaged default file is used.
    """
    source = str(path) if path is not None else DEFAULT_PARAMS_RESOURCE
    entries = parse_kv_text(_read_config_text(path, DEFAULT_PARAMS_RESOURCE), source)

    weights = {dim: dict(row) for dim, row in WeightMatrix.default().coefficients.items()}
    range_values = {
        f"{param}_{bound}": getattr(ProsodyRanges(), f"{param}_{bound}")
        for param in PROSODY_PARAMS
        for bound in ("min", "max")
    }
    for key, value in entries.items():
        first, dot, second = key.partition(".")
        if not dot:
            raise UsageError(f"{source}: key {key!r} must be dotted, e.g. 'valence.pitch' or 'rate.min'")
        if first in DIMENSIONS and second in PROSODY_PARAMS:
            weights[first][second] = _parse_float(key, value)
        elif first in PROSODY_PARAMS and second in ("min", "max"):
            range_values[f"{first}_{second}"] = _parse_float(key, value)
        else:
            raise UsageError(f"{source}: unknown key {key!r}")
    return WeightMatrix(weights), ProsodyRanges(**range_values)


def load_sentences(path: str | Path | None = None) -> list[str]:
    """Load the sentence list: one sentence per line, ids assigned s1..sN in order."""
    source = str(path) if path is not None else DEFAULT_SENTENCES_RESOURCE
    sentences = []
    for raw_line in _read_config_text(path, DEFAULT_SENTENCES_RESOURCE).splitlines():
        line = raw_line.strip()
        if line and not line.startswith("#"):
            sentences.append(line)
    if not sentences:
        raise UsageError(f"{source}: no sentences found")
    if len(set(sentences)) != len(sentences):
        raise UsageError(f"{source}: duplicate sentences")
    return sentences


@dataclass
class RunConfig:
    """Defaults for the pipeline commands, loadable from a ``--config`` file."""

    out_dir: str = "out"
    params_file: str | None = None
    sentences_file: str | None = None
    endpoint: str | None = None
    voices: dict[str, str] = field(default_factory=dict)
    parallelism: int = 4

    _KEYS = ("out_dir", "params_file", "sentences_file", "endpoint", "voice.female", "voice.male", "parallelism")

    @classmethod
    def load(cls, path: str | Path | None) -> "RunConfig":
        config = cls()
        if path is None:
            return config
        entries = parse_kv_text(_read_config_text(path, ""), str(path))
        for key, value in entries.items():
            if key not in cls._KEYS:
                raise UsageError(f"{path}: unknown key {key!r} (expected one of {', '.join(cls._KEYS)})")
            if key == "parallelism":
                try:
                    config.parallelism = int(value)
                except ValueError:
                    raise UsageError(f"{path}: parallelism must be an integer, got {value!r}") from None
                if config.parallelism < 1:
                    raise UsageError(f"{path}: parallelism must be >= 1, got {config.parallelism}")
            elif key.startswith("voice."):
                config.voices[key.removeprefix("voice.")] = value
            else:
                setattr(config, key, value)
        for key in ("params_file", "sentences_file"):
            value = getattr(config, key)
            if value is not None and not Path(value).is_file():
                raise UsageError(f"{path}: {key} does not exist: {value}")
        return config
