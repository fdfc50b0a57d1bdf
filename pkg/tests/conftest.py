"""Shared fixtures for the stepforce test suite."""

import json
import time

import pytest

from stepforce import cli


@pytest.fixture(scope="session")
def report_runs(tmp_path_factory):
    """Run the full report command twice with seed 0 and keep both outputs.

    The two runs dominate the suite's wall time, so every test that needs
    report data (byte determinism, packet reflection/transmission numbers,
    the time-evolution summaries) reads from this single fixture instead of
    re-running the pipeline.
    """
    raw = []
    elapsed = []
    for tag in ("report_run_a", "report_run_b"):
        out = tmp_path_factory.mktemp(tag)
        started = time.perf_counter()
        code = cli.main(["report", "--seed", "0", "--out", str(out)])
        elapsed.append(time.perf_counter() - started)
        assert code == 0, "report command did not exit cleanly"
        raw.append((out / "report.json").read_bytes())
        timing = (out / "report_timing.txt").read_text()
        assert timing.startswith("wall_clock_seconds ")
    return {
        "raw": raw,
        "bundle": json.loads(raw[0].decode("utf-8")),
        "elapsed": elapsed,
    }
