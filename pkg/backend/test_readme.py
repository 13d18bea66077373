"""
Runs every `$ lmcost ...` example of README.md and compares the output
"""

import re
import shlex
from pathlib import Path

import pytest
from typer.testing import CliRunner

from app.cli.main import app

README = Path(__file__).parent / "README.md"
BLOCK = re.compile(r"```console\n(.*?)```", re.S)


def readme_examples():
    examples = []
    for block in BLOCK.findall(README.read_text(encoding="utf-8")):
        command, output = None, []
        for line in block.splitlines():
            if line.startswith("$ lmcost "):
                if command is not None:
                    examples.append((command, output))
                command, output = line[len("$ lmcost "):], []
            elif command is not None:
                output.append(line)
        if command is not None:
            examples.append((command, output))
    return examples


def test_readme_has_examples():
    assert len(readme_examples()) >= 5


@pytest.mark.parametrize("command,expected", readme_examples(), ids=lambda value: value if isinstance(value, str) else "")
def test_readme_example(command, expected):
    result = CliRunner(mix_stderr=False).invoke(app, shlex.split(command))
    assert result.exit_code == 0, result.stderr
    assert result.stdout.splitlines() == expected
