import numpy as np
import pytest
from hypothesis import strategies as st

from d2dmatch import WeightedGraph


@pytest.fixture
def report(request):
    """Write one line straight to the terminal, bypassing output capture."""
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def _write(line: str) -> None:
        if tr is not None:
            tr.write_line(line)
        else:  # pragma: no cover
            print(line)

    return _write


def random_graph(rng: np.random.Generator, n_max: int = 8, real: bool = True) -> WeightedGraph:
    n = int(rng.integers(1, n_max + 1))
    p = rng.random()
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    a, b = iu[keep], ju[keep]
    w = rng.random(a.size) * 10 if real else rng.integers(1, 4, a.size).astype(float)
    return WeightedGraph.from_arrays(n, a, b, w)


@st.composite
def weighted_graphs(draw, max_n: int = 9, weights=None):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    wstrat = weights if weights is not None else st.one_of(
        st.sampled_from([1.0, 2.0, 3.0]),
        st.floats(0, 100, allow_nan=False, allow_infinity=False),
    )
    ws = [draw(wstrat) for _ in chosen]
    return WeightedGraph.from_edges(n, [(i, j, w) for (i, j), w in zip(chosen, ws)])
