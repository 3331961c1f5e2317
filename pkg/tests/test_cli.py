import hashlib
from pathlib import Path

import pytest

from affect_ssml.tts import TOKEN_ENV_VAR

NEUTRAL_SSML = (
    '<speak><prosody pitch="+0.00st" rate="100%" volume="+0.0dB">'
    "In sieben Stunden wird es soweit sein.</prosody></speak>"
)


def tree_hashes(root: Path) -> dict[str, str]:
    return {
        str(path.relative_to(root)): hashlib.sha256(path.read_bytes()).hexdigest()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


class TestEmit:
    def test_neutral_stdout(self, run_cli, capsys):
        code = run_cli(
            "emit", "--method", "syntact", "--valence", "0.5", "--arousal", "0.5",
            "In sieben Stunden wird es soweit sein.",
        )
        assert code == 0
        assert capsys.readouterr().out == NEUTRAL_SSML + "\n"

    def test_derived_point(self, run_cli, capsys):
        code = run_cli("emit", "--method", "syntact", "--valence", ".9", "--arousal", ".1", "x")
        assert code == 0
        out = capsys.readouterr().out
        assert 'pitch="+3.20st"' in out
        assert 'rate="76%"' in out

    def test_out_of_range_value_exits_2(self, run_cli, capsys):
        code = run_cli("emit", "--method", "syntact", "--valence", "1.5", "--arousal", "0.5", "x")
        assert code == 2
        assert "valence" in capsys.readouterr().err

    def test_unknown_method_exits_2(self, run_cli):
        with pytest.raises(SystemExit) as excinfo:
            run_cli("emit", "--method", "nope", "--valence", "0.5", "--arousal", "0.5", "x")
        assert excinfo.value.code == 2

    def test_schroeder_emission(self, run_cli, capsys):
        code = run_cli("emit", "--method", "schroeder", "--valence", "0.9", "--arousal", "0.9", "x")
        assert code == 0
        out = capsys.readouterr().out
        assert 'pitch="+2.56st"' in out  # (0.3*80 + 0.1*80) / 50 * 4


class TestGrid:
    def test_default_grid(self, run_cli, capsys, tmp_path):
        out = tmp_path / "grid"
        assert run_cli("grid", "--out", str(out)) == 0
        stdout = capsys.readouterr().out
        assert stdout.startswith("72 stimuli")
        assert (out / "manifest.csv").is_file()
        assert len(list((out / "ssml").glob("*.ssml"))) == 72

    def test_single_method(self, run_cli, capsys, tmp_path):
        assert run_cli("grid", "--out", str(tmp_path / "g"), "--methods", "syntact") == 0
        assert capsys.readouterr().out.startswith("36 stimuli")

    def test_rerun_byte_identical(self, run_cli, tmp_path):
        out = tmp_path / "grid"
        assert run_cli("grid", "--out", str(out)) == 0
        before = tree_hashes(out)
        assert run_cli("grid", "--out", str(out)) == 0
        assert tree_hashes(out) == before

    def test_custom_sentences(self, run_cli, capsys, tmp_path):
        sentences = tmp_path / "sentences.txt"
        sentences.write_text("Only one sentence here.\n", encoding="utf-8")
        assert run_cli("grid", "--out", str(tmp_path / "g"), "--sentences", str(sentences)) == 0
        assert capsys.readouterr().out.startswith("36 stimuli")


class TestSynth:
    def test_mock_ok(self, run_cli, capsys, grid_dir):
        code = run_cli("synth", "--manifest", str(grid_dir / "manifest.csv"), "--endpoint", "mock://ok")
        assert code == 0
        assert "synthesized 72" in capsys.readouterr().out
        assert len(list((grid_dir / "audio").glob("*.wav"))) == 72

    def test_resume_skips_completed(self, run_cli, capsys, grid_dir):
        manifest = str(grid_dir / "manifest.csv")
        assert run_cli("synth", "--manifest", manifest, "--endpoint", "mock://ok") == 0
        capsys.readouterr()
        assert run_cli("synth", "--manifest", manifest, "--endpoint", "mock://ok") == 0
        assert "skipped 72" in capsys.readouterr().out

    def test_denied_exits_1(self, run_cli, capsys, grid_dir):
        code = run_cli(
            "synth", "--manifest", str(grid_dir / "manifest.csv"),
            "--endpoint", "mock://denied", "--parallelism", "1",
        )
        assert code == 1
        assert "permanent_failure" in capsys.readouterr().err

    def test_missing_token_exits_2_before_any_request(self, run_cli, capsys, grid_dir, monkeypatch):
        monkeypatch.delenv(TOKEN_ENV_VAR, raising=False)
        code = run_cli(
            "synth", "--manifest", str(grid_dir / "manifest.csv"), "--endpoint", "https://tts.example/v1"
        )
        assert code == 2
        assert TOKEN_ENV_VAR in capsys.readouterr().err
        assert not (grid_dir / "audio").exists()

    def test_no_endpoint_exits_2(self, run_cli, capsys, grid_dir):
        assert run_cli("synth", "--manifest", str(grid_dir / "manifest.csv")) == 2
        assert "endpoint" in capsys.readouterr().err


class TestSimulateAndEval:
    def test_perfect_pipeline(self, run_cli, capsys, grid_dir):
        manifest = str(grid_dir / "manifest.csv")
        assert run_cli("simulate-raters", "--manifest", manifest, "--mode", "perfect") == 0
        assert "720 ratings" in capsys.readouterr().out
        assert run_cli("eval", "--ratings", str(grid_dir / "ratings.csv"), "--manifest", manifest) == 0
        out = capsys.readouterr().out
        assert "Fleiss kappa" in out
        assert "1.000" in out
        assert (grid_dir / "reports" / "report.json").is_file()
        assert (grid_dir / "reports" / "report.txt").is_file()

    def test_orphan_rating_exits_1_and_names_id(self, run_cli, capsys, grid_dir):
        manifest = str(grid_dir / "manifest.csv")
        assert run_cli("simulate-raters", "--manifest", manifest, "--mode", "perfect", "--raters", "2") == 0
        with open(grid_dir / "ratings.csv", "a", encoding="utf-8") as handle:
            handle.write("practice_42,r09,low,negative\n")
        capsys.readouterr()
        code = run_cli("eval", "--ratings", str(grid_dir / "ratings.csv"), "--manifest", manifest)
        assert code == 1
        assert "practice_42" in capsys.readouterr().err

    def test_drop_unknown_allows_practice_rows(self, run_cli, capsys, grid_dir):
        manifest = str(grid_dir / "manifest.csv")
        assert run_cli("simulate-raters", "--manifest", manifest, "--mode", "perfect", "--raters", "2") == 0
        with open(grid_dir / "ratings.csv", "a", encoding="utf-8") as handle:
            handle.write("practice_42,r09,low,negative\n")
        code = run_cli(
            "eval", "--ratings", str(grid_dir / "ratings.csv"), "--manifest", manifest, "--drop-unknown"
        )
        assert code == 0


class TestRunConfig:
    def test_config_file_supplies_defaults(self, run_cli, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        config = tmp_path / "run.cfg"
        config.write_text(
            f"out_dir = {tmp_path / 'cfg_out'}\nendpoint = mock://ok\nparallelism = 2\n",
            encoding="utf-8",
        )
        assert run_cli("grid", "--config", str(config)) == 0
        assert (tmp_path / "cfg_out" / "manifest.csv").is_file()
        capsys.readouterr()
        assert run_cli("synth", "--config", str(config)) == 0
        assert "synthesized 72" in capsys.readouterr().out

    def test_unknown_config_key_exits_2(self, run_cli, capsys, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("loudness = 11\n", encoding="utf-8")
        assert run_cli("grid", "--config", str(config)) == 2
        assert "loudness" in capsys.readouterr().err

    def test_missing_config_file_exits_2(self, run_cli, tmp_path):
        assert run_cli("grid", "--config", str(tmp_path / "nope.cfg")) == 2


class TestParser:
    def test_no_command_exits_2(self, run_cli):
        assert run_cli() == 2

    def test_hidden_simulate_command_not_listed(self, run_cli, capsys):
        with pytest.raises(SystemExit):
            run_cli("--help")
        help_text = capsys.readouterr().out
        assert "simulate-raters" not in help_text
        assert "emit" in help_text
