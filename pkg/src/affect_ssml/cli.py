"""Command-line client for the HTTP service.

By default the service app runs in-process (no server needed, same
filesystem); ``--server URL`` or the AFFECT_SSML_SERVER environment variable
targets a running instance instead. Exit codes: 0 success, 1 data/processing
error, 2 usage/configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from pathlib import Path

import httpx

from .config import RunConfig
from .errors import UsageError
from .experiment import MANIFEST_FILENAME, VOICES
from .rules import METHODS
from .simulate import DEFAULT_RATERS, DEFAULT_SEED, MODES

SERVER_ENV_VAR = "AFFECT_SSML_SERVER"

PUBLIC_COMMANDS = "{emit,grid,synth,eval,serve}"


def _make_client(server: str | None):
    if server:
        # batch synthesis can be slow; let the server decide when to give up
        return httpx.Client(base_url=server, timeout=None)
    with warnings.catch_warnings():
        # starlette warns about its own httpx-backed test client; not actionable here
        warnings.simplefilter("ignore", UserWarning)
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app, raise_server_exceptions=False)


def _error_exit(response: httpx.Response) -> int:
    """Print the service error and map it to the exit-code contract."""
    kind = "data"
    try:
        detail = response.json().get("detail")
    except ValueError:
        detail = None
    if response.status_code == 422:
        kind = "usage"
        problems = detail if isinstance(detail, list) else []
        for problem in problems:
            location = ".".join(str(part) for part in problem.get("loc", []) if part != "body")
            print(f"error: {location}: {problem.get('msg', 'invalid value')}", file=sys.stderr)
        if not problems:
            print(f"error: invalid request: {response.text}", file=sys.stderr)
    elif isinstance(detail, dict):
        kind = detail.get("kind", "data")
        print(f"error: {detail.get('message', response.text)}", file=sys.stderr)
    else:
        print(f"error: HTTP {response.status_code}: {response.text}", file=sys.stderr)
    return 2 if kind == "usage" else 1


def _cmd_emit(client, args) -> int:
    config = RunConfig.load(args.config)
    response = client.post(
        "/emit",
        json={
            "text": args.text,
            "valence": args.valence,
            "arousal": args.arousal,
            "power": args.power,
            "method": args.method,
            "params_file": args.params or config.params_file,
        },
    )
    if response.status_code != 200:
        return _error_exit(response)
    print(response.json()["ssml"])
    return 0


def _cmd_grid(client, args) -> int:
    config = RunConfig.load(args.config)
    response = client.post(
        "/grid",
        json={
            "out_dir": args.out or config.out_dir,
            "methods": args.methods,
            "voices": args.voices,
            "sentences_file": args.sentences or config.sentences_file,
            "params_file": args.params or config.params_file,
        },
    )
    if response.status_code != 200:
        return _error_exit(response)
    payload = response.json()
    print(f"{payload['stimuli']} stimuli -> {payload['manifest_path']}")
    return 0


def _cmd_synth(client, args) -> int:
    config = RunConfig.load(args.config)
    manifest = args.manifest or str(Path(config.out_dir) / MANIFEST_FILENAME)
    endpoint = args.endpoint or config.endpoint
    if not endpoint:
        raise UsageError("no TTS endpoint given (use --endpoint or the config file)")
    voices = dict(config.voices)
    for voice in VOICES:
        override = getattr(args, f"voice_{voice}")
        if override:
            voices[voice] = override
    response = client.post(
        "/synth",
        json={
            "manifest_path": manifest,
            "endpoint": endpoint,
            "voices": voices,
            "parallelism": args.parallelism if args.parallelism is not None else config.parallelism,
            "backoff_base": args.backoff_base,
        },
    )
    if response.status_code != 200:
        return _error_exit(response)
    payload = response.json()
    print(
        f"synthesized {payload['synthesized']} | skipped {payload['skipped']} | "
        f"failed {payload['failed']} | pending {payload['pending']}"
    )
    for failure in payload["failures"]:
        print(
            f"error: {failure['sample_id']}: {failure['status']} after "
            f"{failure['attempts']} attempt(s): {failure['detail']}",
            file=sys.stderr,
        )
    return 0 if payload["failed"] == 0 and payload["pending"] == 0 else 1


def _cmd_eval(client, args) -> int:
    out_dir = args.out or str(Path(args.manifest).parent / "reports")
    response = client.post(
        "/eval",
        json={
            "ratings_path": args.ratings,
            "manifest_path": args.manifest,
            "out_dir": out_dir,
            "drop_unknown": args.drop_unknown,
        },
    )
    if response.status_code != 200:
        return _error_exit(response)
    payload = response.json()
    print(payload["text"], end="")
    print(f"report written to {payload['report_json_path']} and {payload['report_text_path']}", file=sys.stderr)
    return 0


def _cmd_simulate(client, args) -> int:
    config = RunConfig.load(args.config)
    manifest = args.manifest or str(Path(config.out_dir) / MANIFEST_FILENAME)
    out_path = args.out or str(Path(manifest).parent / "ratings.csv")
    response = client.post(
        "/simulate-raters",
        json={
            "manifest_path": manifest,
            "out_path": out_path,
            "mode": args.mode,
            "raters": args.raters,
            "seed": args.seed,
        },
    )
    if response.status_code != 200:
        return _error_exit(response)
    payload = response.json()
    print(f"{payload['rows']} ratings -> {payload['ratings_path']}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affect-ssml",
        description="Emotion-to-prosody SSML toolkit: emit markup, build stimulus grids, "
        "drive a TTS endpoint, and analyze listener ratings.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        default=os.environ.get(SERVER_ENV_VAR),
        help="base URL of a running service (default: run the service in-process)",
    )
    common.add_argument("--config", help="run configuration file (key = value lines)")

    commands = parser.add_subparsers(dest="command", metavar=PUBLIC_COMMANDS)

    emit = commands.add_parser("emit", parents=[common], help="print one SSML document for a text and emotion")
    emit.add_argument("text", help="utterance text")
    emit.add_argument("--method", required=True, choices=METHODS)
    emit.add_argument("--valence", required=True, type=float, help="valence in [0,1], 0.5 neutral")
    emit.add_argument("--arousal", required=True, type=float, help="arousal in [0,1], 0.5 neutral")
    emit.add_argument("--power", type=float, default=0.5, help="power in [0,1] (default 0.5)")
    emit.add_argument("--params", help="prosody parameters file (weights and ranges)")
    emit.set_defaults(handler=_cmd_emit)

    grid = commands.add_parser("grid", parents=[common], help="render the stimulus grid: SSML files plus manifest")
    grid.add_argument("--out", help="output directory (default from config, else 'out')")
    grid.add_argument("--methods", nargs="+", choices=METHODS, default=None)
    grid.add_argument("--voices", nargs="+", choices=VOICES, default=None)
    grid.add_argument("--sentences", help="sentence list file, one sentence per line")
    grid.add_argument("--params", help="prosody parameters file")
    grid.set_defaults(handler=_cmd_grid)

    synth = commands.add_parser("synth", parents=[common], help="synthesize audio for every pending manifest row")
    synth.add_argument("--manifest", help="manifest CSV (default <out_dir>/manifest.csv)")
    synth.add_argument("--endpoint", help="TTS endpoint URL (http(s)://... or mock://ok|flaky|denied)")
    synth.add_argument("--parallelism", type=int, default=None, help="max requests in flight (default 4)")
    synth.add_argument("--backoff-base", type=float, default=0.5, help="base retry delay in seconds")
    for voice in VOICES:
        synth.add_argument(f"--voice-{voice}", help=f"engine voice name for the {voice} voice")
    synth.set_defaults(handler=_cmd_synth)

    evaluate = commands.add_parser("eval", parents=[common], help="compute agreement, confusion, and UAR from ratings")
    evaluate.add_argument("--ratings", required=True, help="ratings CSV")
    evaluate.add_argument("--manifest", required=True, help="manifest CSV the ratings refer to")
    evaluate.add_argument("--out", help="report directory (default <manifest dir>/reports)")
    evaluate.add_argument(
        "--drop-unknown",
        action="store_true",
        help="ignore ratings whose sample_id is not in the manifest (e.g. practice stimuli)",
    )
    evaluate.set_defaults(handler=_cmd_eval)

    simulate = commands.add_parser("simulate-raters", parents=[common])
    simulate.add_argument("--manifest", help="manifest CSV (default <out_dir>/manifest.csv)")
    simulate.add_argument("--out", help="ratings CSV to write (default <manifest dir>/ratings.csv)")
    simulate.add_argument("--mode", choices=MODES, default="uniform-random")
    simulate.add_argument("--raters", type=int, default=DEFAULT_RATERS)
    simulate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    simulate.set_defaults(handler=_cmd_simulate)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(file=sys.stderr)
        return 2
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        client = _make_client(args.server)
        try:
            return args.handler(client, args)
        finally:
            client.close()
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
