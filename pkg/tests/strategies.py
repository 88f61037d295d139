"""Hypothesis strategies for small connected weighted graphs."""

import numpy as np
from hypothesis import strategies as st

from riccicore.random_graphs import random_connected_graph


@st.composite
def connected_graphs(draw, min_n=2, max_n=10, unit=False):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.floats(0.0, 0.7))
    return random_connected_graph(np.random.default_rng(seed), n, p, unit=unit)
