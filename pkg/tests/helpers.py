"""Shared instances for the test suite, built straight from the library API."""
import itertools
import pathlib

import sympy

from mkit import Multigraph, explicit_circuits, graphic, linear, uniform
from mkit.document import load_document

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def fixture_path(name):
    return FIXTURES / f"{name}.json"


def load_fixture(name):
    doc = load_document(fixture_path(name))
    return doc, doc.build()


def named_graph(vertices, edges):
    """Multigraph plus edge labels like "v1v2" from named endpoints."""
    idx = {v: i for i, v in enumerate(vertices)}
    g = Multigraph(len(vertices), tuple((idx[u], idx[v]) for u, v in edges))
    return g, [u + v for u, v in edges]


def k4_edges(vs):
    return list(itertools.combinations(vs, 2))


def k_graph(n):
    return graphic(Multigraph(n, tuple(itertools.combinations(range(n), 2))))


def theta_graph():
    """Three internally disjoint paths between vertices 0 and 1."""
    g = Multigraph(5, ((0, 1), (0, 2), (2, 1), (0, 3), (3, 4), (4, 1)))
    return graphic(g)


def cyclic_gap(s):
    """Rank 2s matroid on 1..2s+2 whose circuits are D - {2i-1, 2i}."""
    ground = list(range(1, 2 * s + 3))
    circuits = [[x for x in ground if x not in (2 * i - 1, 2 * i)] for i in range(1, s + 2)]
    return explicit_circuits(ground, circuits)


UNBALANCED_MATRIX = [[1, 0, 0, 0, 1, 1],
                [0, 1, 0, 0, -1, 0],
                [0, 0, 1, 0, 0, -1],
                [0, 0, 0, 1, 1, 1]]


def linear_unbalanced():
    return linear(matrix=UNBALANCED_MATRIX, labels=["v1", "v2", "v3", "v4", "v5", "v6"])


def u14():
    return uniform(1, 4)


# -- independent oracles -------------------------------------------------------


def sympy_rank(columns, p=None):
    """Matrix rank of the given columns via sympy (over Q, or GF(p))."""
    if not columns:
        return 0
    mat = sympy.Matrix(columns).T
    if p is None:
        return mat.rank()
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF
    dm = DomainMatrix.from_Matrix(mat).convert_to(GF(p))
    return dm.rank()


def incidence_rank(graph, mask):
    """Cycle-matroid rank via the signed incidence matrix (loops are zero columns)."""
    cols = []
    for i, (u, v) in enumerate(graph.edges):
        if mask >> i & 1:
            col = [0] * graph.vertex_count
            if u != v:
                col[u], col[v] = 1, -1
            cols.append(col)
    return sympy_rank(cols)


def brute_circuits(m, mask=None):
    """Minimal dependent subsets by a plain subset scan."""
    mask = m.full if mask is None else mask
    idx = [i for i in range(m.n) if mask >> i & 1]
    dep = []
    for size in range(1, len(idx) + 1):
        for combo in itertools.combinations(idx, size):
            s = sum(1 << i for i in combo)
            if m.rank(s) < size and not any(c & s == c for c in dep):
                dep.append(s)
    return sorted(dep)


def brute_flats(m):
    return sorted(s for s in range(m.full + 1) if m.closure(s) == s)
