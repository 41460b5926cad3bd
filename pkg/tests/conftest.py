import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sphere_qed.presets import debye_sphere, drude_sphere, vacuum_sphere  # noqa: E402
from sphere_qed.thermal import SphereBaths  # noqa: E402


@pytest.fixture(scope="session")
def drude_baths():
    return SphereBaths(*drude_sphere())


@pytest.fixture(scope="session")
def debye_baths():
    return SphereBaths(*debye_sphere())


@pytest.fixture(scope="session")
def vacuum_pair():
    return vacuum_sphere()


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance_log(request):
    """Collect one status line per acceptance criterion for the terminal summary."""
    lines = request.config._acceptance_lines

    def log(line: str):
        lines.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
