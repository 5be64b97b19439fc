import itertools

import numpy as np
from hypothesis import strategies as st

from relayrate.source import TabularPMF


@st.composite
def pmfs(draw, min_users=2, max_users=4, max_alphabet=3):
    L = draw(st.integers(min_users, max_users))
    alph = tuple(draw(st.lists(st.integers(1, max_alphabet), min_size=L, max_size=L)))
    cells = list(itertools.product(*(range(a) for a in alph)))
    w = draw(st.lists(st.one_of(st.just(0.0), st.floats(0.01, 1.0)), min_size=len(cells), max_size=len(cells)))
    w = np.array(w)
    if w.sum() == 0:
        w[0] = 1.0
    w = w / w.sum()
    return TabularPMF(alph, tuple(zip(cells, w.tolist())))
