import os

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=40)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))

SEED = int(os.environ.get("QCROSS_SEED", "20261015"))


def pytest_report_header(config):
    return f"qcross seed: {SEED} (set QCROSS_SEED to override)"


@pytest.fixture
def seed():
    return SEED


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


ACCEPTANCE = {}


@pytest.fixture
def record():
    def put(n, passed, detail=""):
        ACCEPTANCE[n] = (bool(passed), detail)
    return put


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    tr.write_line(f"seed: {SEED}")
    for n in range(1, 8):
        passed, detail = ACCEPTANCE.get(n, (None, "not run"))
        mark = "NOT RUN" if passed is None else ("PASS" if passed else "FAIL")
        tr.write_line(f"criterion {n}: {mark}" + (f"  ({detail})" if detail else ""))
