import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from projsim.synthetic import BUNDLED_EMBEDDINGS, BUNDLED_PAIRS

# Magnitudes below 1e-100 are flushed to zero: squaring them underflows, and
# embedding coordinates never live down there.
unit_floats = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False, width=64).map(
    lambda x: 0.0 if abs(x) < 1e-100 else x
)


@st.composite
def groups(draw, max_dim=10, max_rows=6, dim=None):
    d = dim if dim is not None else draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_rows))
    return draw(hnp.arrays(np.float64, (n, d), elements=unit_floats))


@st.composite
def group_and_query(draw, max_dim=10, max_rows=6):
    A = draw(groups(max_dim=max_dim, max_rows=max_rows))
    b = draw(hnp.arrays(np.float64, A.shape[1], elements=unit_floats))
    return A, b


def random_rotation(rng, d):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def naive_group_cosine(b, A):
    """The closed form with an explicit Gram inverse, nothing shared with the package."""
    G_inv = np.linalg.inv(A @ A.T)
    sq = b @ A.T @ G_inv @ A @ b
    return float(np.sqrt(max(sq, 0.0)) / np.sqrt(b @ b))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def bundle_paths():
    return BUNDLED_PAIRS, BUNDLED_EMBEDDINGS


# -- acceptance summary ------------------------------------------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::")[-1]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
