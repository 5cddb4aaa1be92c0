import numpy as np
import pytest
from hypothesis import strategies as st

from qslmod import qmat
from qslmod.channels import AmplitudeDamping, PhaseDamping

finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian(draw, scale=1.0):
    a, d, re, im = (draw(finite) * scale for _ in range(4))
    return np.array([[a, re + 1j * im], [re - 1j * im, d]])


@st.composite
def traceless_hermitian(draw):
    m = draw(hermitian())
    return m - 0.5 * np.trace(m) * np.eye(2)


@st.composite
def bloch_vector(draw):
    x, y, z = draw(finite), draw(finite), draw(finite)
    norm = np.sqrt(x * x + y * y + z * z)
    radius = draw(st.floats(0.0, 1.0))
    if norm == 0:
        return 0.0, 0.0, 0.0
    return tuple(radius * v / norm for v in (x, y, z))


@st.composite
def density_matrices(draw):
    return qmat.bloch_state(*draw(bloch_vector()))


@st.composite
def psd_matrices(draw):
    rho = draw(density_matrices())
    return draw(st.floats(0.0, 10.0)) * rho


def random_density_matrices(rng, n):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v *= rng.uniform(0, 1, size=(n, 1)) ** (1 / 3)
    return np.array([qmat.bloch_state(*row) for row in v])


@pytest.fixture
def rng():
    return np.random.default_rng(20161011)


MODELS = {
    "ad-markov": AmplitudeDamping(0.4),
    "ad-nonmarkov": AmplitudeDamping(20.0),
    "ad-critical": AmplitudeDamping(0.5),
    "pd-ohmic": PhaseDamping(1.0),
    "pd-sub": PhaseDamping(0.5),
    "pd-super": PhaseDamping(2.5),
}


@pytest.fixture(params=sorted(MODELS))
def model(request):
    return MODELS[request.param]


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_REPORT = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
