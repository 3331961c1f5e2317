"""Batch synthesis against a TTS endpoint.

The endpoint is abstracted behind a transport with one method,
``send(TtsRequest) -> TtsResponse``. Two implementations ship: a generic HTTP
POST client and an offline mock selected through ``mock://<mode>`` endpoint
URLs. Audio bytes are opaque; nothing here decodes them.
"""

from __future__ import annotations

import hashlib
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import httpx

from .errors import UsageError
from .experiment import STATUS_OK, STATUS_PENDING, STATUS_PERMANENT, STATUS_RETRYABLE, ManifestRow

TOKEN_ENV_VAR = "AFFECT_SSML_TTS_TOKEN"

DEFAULT_PARALLELISM = 4
MAX_ATTEMPTS = 3
DEFAULT_BACKOFF_BASE = 0.5

AUDIO_SUFFIX = ".wav"

MOCK_SCHEME = "mock"
MOCK_MODES = ("ok", "flaky", "denied")


@dataclass(frozen=True)
class TtsRequest:
    ssml: str
    voice: str


@dataclass(frozen=True)
class TtsResponse:
    status_code: int
    body: bytes


class TransportFailure(Exception):
    """Network-level failure (timeout, connection error); always retryable."""


class HttpTransport:
    """POSTs the SSML document to an HTTP endpoint, bearer token from the environment."""

    def __init__(self, url: str, token: str, timeout: float = 30.0):
        self.url = url
        self._headers = {"Authorization": f"Bearer {token}", "Content-Type": "application/ssml+xml"}
        self._timeout = timeout

    def send(self, request: TtsRequest) -> TtsResponse:
        try:
            response = httpx.post(
                self.url,
                content=request.ssml.encode("utf-8"),
                headers={**self._headers, "X-Voice": request.voice},
                timeout=self._timeout,
            )
        except httpx.HTTPError as exc:
            raise TransportFailure(str(exc)) from exc
        return TtsResponse(status_code=response.status_code, body=response.content)


class MockTransport:
    """Offline stand-in for a TTS endpoint.

    Modes: ``ok`` always succeeds; ``flaky`` fails the first attempt per
    request with a 503 and succeeds afterwards; ``denied`` always returns 401.
    Returned audio bytes are deterministic for a given request.
    """

    def __init__(self, mode: str = "ok"):
        if mode not in MOCK_MODES:
            raise UsageError(f"unknown mock mode {mode!r}; expected one of {MOCK_MODES}")
        self.mode = mode
        self._seen: set[str] = set()
        self._lock = threading.Lock()

    def send(self, request: TtsRequest) -> TtsResponse:
        if self.mode == "denied":
            return TtsResponse(status_code=401, body=b'{"error": "unauthorized"}')
        key = f"{request.voice}\n{request.ssml}"
        if self.mode == "flaky":
            with self._lock:
                first_attempt = key not in self._seen
                self._seen.add(key)
            if first_attempt:
                return TtsResponse(status_code=503, body=b"busy, try again")
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]
        return TtsResponse(status_code=200, body=f"MOCKAUDIO {request.voice} {digest}\n".encode("ascii"))


def transport_for(endpoint: str, token: str | None = None):
    """Build a transport from an endpoint URL; http(s) endpoints require a token.

    The token default comes from the environment so it never has to appear in
    configuration files or logs.
    """
    if endpoint.startswith(f"{MOCK_SCHEME}://"):
        return MockTransport(endpoint.removeprefix(f"{MOCK_SCHEME}://"))
    if endpoint.startswith(("http://", "https://")):
        token = token if token is not None else os.environ.get(TOKEN_ENV_VAR)
        if not token:
            raise UsageError(f"endpoint {endpoint} requires an auth token in ${TOKEN_ENV_VAR}")
        return HttpTransport(endpoint, token)
    raise UsageError(f"unsupported endpoint {endpoint!r}; expected http(s):// or mock://")


@dataclass
class SynthesisOutcome:
    sample_id: str
    status: str
    attempts: int
    detail: str = ""


def _classify(response: TtsResponse) -> str:
    if 200 <= response.status_code < 300:
        return STATUS_OK if response.body else STATUS_PERMANENT
    if response.status_code >= 500:
        return STATUS_RETRYABLE
    return STATUS_PERMANENT


def _body_excerpt(body: bytes, limit: int = 200) -> str:
    return body[:limit].decode("utf-8", errors="replace")


def _synthesize_row(
    row: ManifestRow,
    base_dir: Path,
    transport,
    voice_name: str,
    abort: threading.Event,
    max_attempts: int,
    backoff_base: float,
) -> SynthesisOutcome:
    if abort.is_set():
        return SynthesisOutcome(row.spec.sample_id, STATUS_PENDING, attempts=0, detail="skipped after abort")
    ssml_file = base_dir / row.ssml_path
    if not ssml_file.is_file():
        abort.set()
        row.status = STATUS_PERMANENT
        return SynthesisOutcome(row.spec.sample_id, STATUS_PERMANENT, attempts=0, detail=f"missing SSML file {ssml_file}")
    request = TtsRequest(ssml=ssml_file.read_text(encoding="utf-8"), voice=voice_name)

    attempts = 0
    while True:
        attempts += 1
        try:
            response = transport.send(request)
            status = _classify(response)
        except TransportFailure as exc:
            response = None
            status = STATUS_RETRYABLE
            detail = f"transport failure: {exc}"
        else:
            detail = f"HTTP {response.status_code}: {_body_excerpt(response.body)}"

        if status == STATUS_OK:
            audio_path = f"audio/{row.spec.sample_id}{AUDIO_SUFFIX}"
            target = base_dir / audio_path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(response.body)
            row.audio_path = audio_path
            row.status = STATUS_OK
            return SynthesisOutcome(row.spec.sample_id, STATUS_OK, attempts=attempts)
        if status == STATUS_PERMANENT:
            row.status = STATUS_PERMANENT
            abort.set()
            return SynthesisOutcome(row.spec.sample_id, STATUS_PERMANENT, attempts=attempts, detail=detail)
        # retryable
        if attempts >= max_attempts or abort.is_set():
            row.status = STATUS_RETRYABLE
            return SynthesisOutcome(row.spec.sample_id, STATUS_RETRYABLE, attempts=attempts, detail=detail)
        if backoff_base > 0:
            time.sleep(backoff_base * 2 ** (attempts - 1))


def synthesize_batch(
    rows: Sequence[ManifestRow],
    base_dir: str | Path,
    transport,
    voices: Mapping[str, str] | None = None,
    parallelism: int = DEFAULT_PARALLELISM,
    max_attempts: int = MAX_ATTEMPTS,
    backoff_base: float = DEFAULT_BACKOFF_BASE,
) -> list[SynthesisOutcome]:
    """Synthesize every pending manifest row, at most ``parallelism`` in flight.

    Rows already marked ok whose audio file exists are skipped, which makes
    re-running after a partial failure cheap. Retryable failures are retried
    with exponential backoff up to ``max_attempts``; the first permanent
    failure stops new work (in-flight requests finish, queued rows stay
    pending). Row order is preserved regardless of completion order; statuses
    and audio paths are updated on the rows in place.
    """
    if parallelism < 1:
        raise UsageError(f"parallelism must be >= 1, got {parallelism}")
    base = Path(base_dir)
    voices = dict(voices or {})
    abort = threading.Event()

    outcomes: dict[str, SynthesisOutcome] = {}
    pending = []
    for row in rows:
        if row.status == STATUS_OK and row.audio_path and (base / row.audio_path).is_file():
            outcomes[row.spec.sample_id] = SynthesisOutcome(
                row.spec.sample_id, STATUS_OK, attempts=0, detail="already synthesized"
            )
        else:
            pending.append(row)

    with ThreadPoolExecutor(max_workers=parallelism) as executor:
        futures = [
            executor.submit(
                _synthesize_row,
                row,
                base,
                transport,
                voices.get(row.spec.voice, row.spec.voice),
                abort,
                max_attempts,
                backoff_base,
            )
            for row in pending
        ]
        for future in futures:
            outcome = future.result()
            outcomes[outcome.sample_id] = outcome

    return [outcomes[row.spec.sample_id] for row in rows]
