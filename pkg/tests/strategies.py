"""Hypothesis strategies shared by several test modules."""
from hypothesis import strategies as st

from matstrata.linalg import Matrix

import oracles


@st.composite
def jordan_data(draw, max_n=6, values=(-3, -2, -1, 0, 1, 2, 3)):
    """[(eigenvalue, [block sizes])] with distinct eigenvalues and total size <= max_n."""
    budget = draw(st.integers(1, max_n))
    eigen = draw(st.lists(st.sampled_from(values), min_size=1, max_size=3, unique=True))
    data = []
    for lam in eigen:
        if budget == 0:
            break
        blocks = []
        room = draw(st.integers(1, budget))
        while room:
            b = draw(st.integers(1, room))
            blocks.append(b)
            room -= b
        budget -= sum(blocks)
        data.append((lam, sorted(blocks, reverse=True)))
    return data


moves = st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(-2, 2)), max_size=8)


def conjugated(data, mv):
    """G^-1 J G for the Jordan matrix J of ``data`` and a unimodular G."""
    j = oracles.jordan_rows(data)
    n = len(j)
    g = oracles.unimodular(n, mv)
    ginv = oracles.unimodular_inverse(n, mv)
    rows = oracles.matmul(oracles.matmul(ginv, j), g)
    return rows, Matrix.from_rows(rows)
