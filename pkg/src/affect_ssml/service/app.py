"""HTTP facade over the prosody toolkit.

Domain errors map to structured 400 responses with a ``kind`` of ``usage``
(bad values or configuration) or ``data`` (inconsistent inputs mid-pipeline),
so clients can distinguish caller mistakes from processing failures.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import RunConfig, load_prosody_params, load_sentences
from ..emotion import EmotionPoint
from ..errors import DataError, UsageError
from ..experiment import (
    MANIFEST_FILENAME,
    STATUS_OK,
    STATUS_PENDING,
    VOICES,
    build_grid,
    read_manifest,
    render_grid,
    write_manifest,
)
from ..metrics import evaluate, read_ratings, render_report_text, write_report, write_ratings
from ..rules import METHODS, model_for
from ..simulate import simulate_ratings
from ..ssml import emit_ssml, validate_ssml
from ..tts import synthesize_batch, transport_for
from .schemas import (
    EmitRequest,
    EmitResponse,
    EvalRequest,
    EvalResponse,
    GridRequest,
    GridResponse,
    HealthResponse,
    SimulateRequest,
    SimulateResponse,
    SynthFailure,
    SynthRequest,
    SynthResponse,
    ValidateRequest,
    ValidateResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="affect-ssml", version=__version__)

    @app.exception_handler(UsageError)
    async def usage_error_handler(request: Request, exc: UsageError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": {"kind": "usage", "message": str(exc)}})

    @app.exception_handler(DataError)
    async def data_error_handler(request: Request, exc: DataError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": {"kind": "data", "message": str(exc)}})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/emit", response_model=EmitResponse)
    def emit(request: EmitRequest) -> EmitResponse:
        weights, ranges = load_prosody_params(request.params_file)
        model = model_for(request.method, weights, ranges)
        target = model(EmotionPoint(valence=request.valence, arousal=request.arousal, power=request.power))
        document = emit_ssml(request.text, target)
        return EmitResponse(
            ssml=document.content,
            pitch_st=target.pitch_st,
            rate_factor=target.rate_factor,
            volume_db=target.volume_db,
        )

    @app.post("/validate", response_model=ValidateResponse)
    def validate(request: ValidateRequest) -> ValidateResponse:
        report = validate_ssml(request.ssml)
        return ValidateResponse(ok=report.ok, violations=report.violations)

    @app.post("/grid", response_model=GridResponse)
    def grid(request: GridRequest) -> GridResponse:
        weights, ranges = load_prosody_params(request.params_file)
        sentences = load_sentences(request.sentences_file)
        specs = build_grid(
            sentences,
            voices=request.voices or VOICES,
            methods=request.methods or METHODS,
        )
        rows = render_grid(specs, sentences, request.out_dir, weights, ranges)
        return GridResponse(manifest_path=str(Path(request.out_dir) / MANIFEST_FILENAME), stimuli=len(rows))

    @app.post("/synth", response_model=SynthResponse)
    def synth(request: SynthRequest) -> SynthResponse:
        manifest_path = Path(request.manifest_path)
        rows = read_manifest(manifest_path)
        transport = transport_for(request.endpoint)
        try:
            outcomes = synthesize_batch(
                rows,
                base_dir=manifest_path.parent,
                transport=transport,
                voices=request.voices,
                parallelism=request.parallelism,
                backoff_base=request.backoff_base,
            )
        finally:
            write_manifest(rows, manifest_path)
        skipped = sum(1 for o in outcomes if o.status == STATUS_OK and o.attempts == 0)
        synthesized = sum(1 for o in outcomes if o.status == STATUS_OK and o.attempts > 0)
        failures = [o for o in outcomes if o.status not in (STATUS_OK, STATUS_PENDING)]
        pending = sum(1 for o in outcomes if o.status == STATUS_PENDING)
        return SynthResponse(
            manifest_path=str(manifest_path),
            total=len(outcomes),
            synthesized=synthesized,
            skipped=skipped,
            failed=len(failures),
            pending=pending,
            failures=[
                SynthFailure(sample_id=o.sample_id, status=o.status, attempts=o.attempts, detail=o.detail)
                for o in failures
            ],
        )

    @app.post("/simulate-raters", response_model=SimulateResponse)
    def simulate(request: SimulateRequest) -> SimulateResponse:
        rows = read_manifest(request.manifest_path)
        records = simulate_ratings(rows, mode=request.mode, raters=request.raters, seed=request.seed)
        out_path = Path(request.out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        write_ratings(records, out_path)
        return SimulateResponse(ratings_path=str(out_path), rows=len(records))

    @app.post("/eval", response_model=EvalResponse)
    def evaluate_ratings(request: EvalRequest) -> EvalResponse:
        rows = read_manifest(request.manifest_path)
        ratings = read_ratings(request.ratings_path)
        report = evaluate(ratings, rows, drop_unknown=request.drop_unknown)
        json_path = text_path = None
        if request.out_dir is not None:
            json_path, text_path = write_report(report, request.out_dir)
        return EvalResponse(
            report=report,
            text=render_report_text(report),
            report_json_path=str(json_path) if json_path else None,
            report_text_path=str(text_path) if text_path else None,
        )

    return app


app = create_app()
