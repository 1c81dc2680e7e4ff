import io
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from ontoqc.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
FSL = FIXTURES / "fsl"


def run_cli(*args):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in args])
    return code, out.getvalue(), err.getvalue()


def fsl_args():
    return ["--catalog", FSL / "catalog.txt", FSL / "fsl.ttl"]


@pytest.fixture
def fixtures():
    return FIXTURES


_ACCEPTANCE = {}


def record_acceptance(n, ok, detail):
    _ACCEPTANCE[n] = ("SKIP" if ok is None else "PASS" if ok else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {detail}")
