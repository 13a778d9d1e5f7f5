import random

import pytest
from hypothesis import strategies as st

from hamext.generators import random_embedding


@st.composite
def embeddings(draw, max_p=7, max_q=10, min_p=1):
    """Random connected rotation systems, multigraphs included."""
    seed = draw(st.integers(0, 2**32 - 1))
    multi = draw(st.booleans())
    return random_embedding(random.Random(seed), max_p, max_q, min_p=min_p, multi=multi)


@pytest.fixture
def rng():
    return random.Random(12345)
