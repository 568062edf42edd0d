"""Shared fixtures: bundled scenario paths and an in-process CLI runner."""

from __future__ import annotations

import json
from pathlib import Path
from typing import NamedTuple

import pytest

from tensorfree import cli

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


class CliResult(NamedTuple):
    code: int
    out: str
    err: str

    def json(self):
        return json.loads(self.out)


@pytest.fixture(scope="session")
def scenario_path():
    def path(name: str) -> str:
        return str(SCENARIO_DIR / f"{name}.json")

    return path


@pytest.fixture
def run_cli(capsys):
    """Run the command line entry point in process, capturing both streams."""

    def run(*argv) -> CliResult:
        code = cli.main([str(a) for a in argv])
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)

    return run
