import json
from importlib import resources

import numpy as np
import pytest

from qrohf.core import QROHFN
from qrohf.io import parse_session
from qrohf.priority import WeightVector
from qrohf.relations import QROHFPR


def random_qrohfn(rng, q, l):
    U = np.sort(rng.uniform(0, 1, l))
    V = np.sort(rng.uniform(0, 1, l))
    top = U[-1] + V[-1]
    if top > 1:
        f = rng.uniform(0.3, 1.0) / top
        U, V = U * f, V * f
    return QROHFN(U ** (1 / q), V ** (1 / q))


def random_qrohfpr(rng, n, l, q):
    upper = {(i, j): random_qrohfn(rng, q, l) for i in range(n) for j in range(i + 1, n)}
    return QROHFPR.from_upper(upper, n, q)


def random_weights(rng, n, l, q):
    """A normalized weight vector; its generated relation has ascending grades."""
    S = np.sort(rng.uniform(0.05, 0.95, l))
    p = rng.dirichlet(np.ones(n))
    delta = rng.uniform(0, 1, n) * (1 - S[-1]) * (n - 2) / (n - 1)
    Wu = S[None, :] * p[:, None]
    Wv = S[None, :] - Wu + delta[:, None]
    return WeightVector(Wu ** (1 / q), Wv ** (1 / q))


def example_document():
    text = resources.files("qrohf").joinpath("data/worked_example.json").read_text()
    return json.loads(text)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def example_doc():
    return example_document()


@pytest.fixture
def example_panel(example_doc):
    return parse_session(example_doc)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
