import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("geoft", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("geoft")

VERIFY_SEED = 0


def run_cli(*args, env=None, check=False):
    full_env = dict(os.environ)
    full_env.update(env or {})
    proc = subprocess.run([sys.executable, "-m", "geoft.cli", *map(str, args)], capture_output=True,
                          text=True, env=full_env)
    if check and proc.returncode != 0:
        raise AssertionError(f"geoft {' '.join(map(str, args))} exited {proc.returncode}: {proc.stderr}")
    return proc


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def verify_runs(tmp_path_factory):
    """Full catalog through the CLI twice, single- and multi-threaded."""
    out = tmp_path_factory.mktemp("verify")
    runs = {}
    for threads in ("1", "4"):
        path = out / f"report_{threads}.json"
        proc = run_cli("verify", "--seed", VERIFY_SEED, "--out", path, env={"GEOFT_THREADS": threads})
        runs[threads] = {"code": proc.returncode, "stdout": proc.stdout, "stderr": proc.stderr,
                         "bytes": Path(path).read_bytes()}
    return runs


@pytest.fixture(scope="session")
def catalog_reports(verify_runs):
    report = json.loads(verify_runs["1"]["bytes"])
    return {r["id"]: r for r in report["reports"]}
