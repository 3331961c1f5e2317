import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore", UserWarning)
    from fastapi.testclient import TestClient

from affect_ssml import cli
from affect_ssml.service.app import app


@pytest.fixture()
def client():
    return TestClient(app, raise_server_exceptions=False)


@pytest.fixture()
def run_cli():
    """Invoke the CLI in-process and return its exit code."""

    def run(*argv: str) -> int:
        return cli.main(list(argv))

    return run


@pytest.fixture()
def grid_dir(tmp_path, run_cli):
    """A freshly rendered default stimulus grid."""
    out = tmp_path / "grid"
    assert run_cli("grid", "--out", str(out)) == 0
    return out
