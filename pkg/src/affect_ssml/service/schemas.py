"""Request/response models for the HTTP service.

These are the wire contract shared by the service and the command-line
client. Paths in requests are interpreted on the machine running the service.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..simulate import DEFAULT_RATERS, DEFAULT_SEED

Method = Literal["schroeder", "syntact"]
Voice = Literal["female", "male"]
SimulationMode = Literal["perfect", "uniform-random"]


class HealthResponse(BaseModel):
    status: str
    version: str


class EmitRequest(BaseModel):
    text: str
    valence: float = Field(ge=0.0, le=1.0)
    arousal: float = Field(ge=0.0, le=1.0)
    power: float = Field(default=0.5, ge=0.0, le=1.0)
    method: Method
    params_file: str | None = None


class EmitResponse(BaseModel):
    ssml: str
    pitch_st: float
    rate_factor: float
    volume_db: float


class ValidateRequest(BaseModel):
    ssml: str


class ValidateResponse(BaseModel):
    ok: bool
    violations: list[str]


class GridRequest(BaseModel):
    out_dir: str
    methods: list[Method] | None = None
    voices: list[Voice] | None = None
    sentences_file: str | None = None
    params_file: str | None = None


class GridResponse(BaseModel):
    manifest_path: str
    stimuli: int


class SynthRequest(BaseModel):
    manifest_path: str
    endpoint: str
    voices: dict[Voice, str] = Field(default_factory=dict)
    parallelism: int = Field(default=4, ge=1)
    backoff_base: float = Field(default=0.5, ge=0.0)


class SynthFailure(BaseModel):
    sample_id: str
    status: str
    attempts: int
    detail: str


class SynthResponse(BaseModel):
    manifest_path: str
    total: int
    synthesized: int
    skipped: int
    failed: int
    pending: int
    failures: list[SynthFailure]


class SimulateRequest(BaseModel):
    manifest_path: str
    out_path: str
    mode: SimulationMode
    raters: int = Field(default=DEFAULT_RATERS, ge=1)
    seed: int = DEFAULT_SEED


class SimulateResponse(BaseModel):
    ratings_path: str
    rows: int


class EvalRequest(BaseModel):
    ratings_path: str
    manifest_path: str
    out_dir: str | None = None
    drop_unknown: bool = False


class EvalResponse(BaseModel):
    report: dict
    text: str
    report_json_path: str | None = None
    report_text_path: str | None = None
