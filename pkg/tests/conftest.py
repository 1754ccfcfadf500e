import numpy as np
import pytest

from spincat import kernels
from spincat.states import DensityMatrix, PureState


def random_pure_state(n_atoms, rng) -> PureState:
    v = rng.normal(size=n_atoms + 1) + 1j * rng.normal(size=n_atoms + 1)
    return PureState(n_atoms, v / np.linalg.norm(v))


def random_density(n_atoms, rng, rank=None) -> DensityMatrix:
    dim = n_atoms + 1
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(n_atoms, rho / np.trace(rho).real)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return kernels.backend_module(request.param)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collect one status line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def log(number, title, ok, detail):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
