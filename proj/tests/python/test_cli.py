import os
import pathlib
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]
CLI = os.environ.get("FXLOB_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="FXLOB_CLI not set")


def run(*args, out=None):
    env = dict(os.environ)
    if out is not None:
        env["FXLOB_OUT"] = str(out)
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=env)


def test_usage_errors(tmp_path):
    assert run("no-such-command").returncode == 1
    assert run("analyze", "--session", tmp_path, "--which", "bogus").returncode == 1


def test_missing_config_is_an_io_error(tmp_path):
    r = run("simulate", "--config", tmp_path / "nope.json", out=tmp_path)
    assert r.returncode == 3


def test_invalid_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"duration_s": -5}')
    assert run("simulate", "--config", bad, out=tmp_path).returncode == 2


def test_decode_check(tmp_path):
    for feed in (ROOT / "tests" / "golden").glob("*.feed"):
        assert run("decode-check", feed).returncode == 0
    broken = tmp_path / "broken.feed"
    broken.write_text("D,0,x\n")
    assert run("decode-check", broken).returncode == 3


def test_short_pipeline_writes_outputs(tmp_path):
    r = run("pipeline", "--duration", 300, "--seed", 4, "--no-checks", out=tmp_path)
    assert r.returncode == 0, r.stderr
    for name in ("session.json", "events.csv", "trades.csv", "session.feed", "inferred.csv",
                 "reconstruction.json", "fidelity.csv", "checks.csv"):
        assert (tmp_path / name).is_file(), name
    assert (tmp_path / "truth" / "trade_digits.csv").is_file()
    assert (tmp_path / "compare" / "trade_digits.csv").is_file()
