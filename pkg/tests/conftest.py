import numpy as np
import pytest

from fxcomove.panel import Panel
from fxcomove.simulate import default_spec, simulate_vecm


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def sim_panel():
    """Trivariate cointegrated panel (one relation), T=300, log-level scale."""
    spec = default_spec(seed=11, T=300)
    return spec, simulate_vecm(spec)


def random_walk_panel(seed: int, T: int, m: int, scale: float = 1.0) -> Panel:
    g = np.random.default_rng(seed)
    return Panel.from_array(np.cumsum(scale * g.standard_normal((T, m)), axis=0))


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(str(v) for v in r) + "\n")
    return path


# Acceptance criteria register here; the terminal summary prints one line each.
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
