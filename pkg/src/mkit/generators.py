"""Seeded random matroids and construction trees for sweeps.

Everything is produced as a MatroidSpec-compatible JSON node so that a
corpus entry can be written to disk and replayed through the CLI.
"""
import itertools
import random

from .constructions import explicit_circuits
from .core import bits, popcount
from .document import MatroidSpec
from .errors import DomainError
from .kfold import enumerate_kfold_circuits, principal_partition

BACKENDS = ("uniform", "linear", "graphic", "count", "circuits", "dual", "restrict",
            "direct_sum", "two_sum", "parallel_connection")


def _rand_graph(rng, nv, ne, loops=True):
    edges = []
    for _ in range(ne):
        u = rng.randrange(nv)
        v = u if loops and rng.random() < 0.1 else rng.randrange(nv)
        edges.append(sorted((u, v)))
    return {"vertices": nv, "edges": edges}


def _uniform(rng, size):
    n = rng.randint(2, size)
    return {"type": "uniform", "rank": rng.randint(0, n), "size": n}


def _linear(rng, size):
    ncols = rng.randint(min(3, size), size)
    nrows = rng.randint(2, min(5, ncols))
    p = rng.choice([None, 2, 3, 5])
    if p is None:
        pool = [0, 0, 0, 1, -1, 2, "1/2", "-3/2"]
    else:
        pool = list(range(p)) + [0] * p
    node = {"type": "linear", "matrix": [[rng.choice(pool) for _ in range(ncols)] for _ in range(nrows)]}
    if p is not None:
        node["p"] = p
    return node


def _graphic(rng, size):
    return {"type": "graphic", "graph": _rand_graph(rng, rng.randint(2, 5), rng.randint(min(3, size), size))}


def _count(rng, size):
    a, b = rng.choice([(1, 0), (1, 1), (2, 1), (2, 2), (2, 3), (3, 2), (3, 5)])
    ne = rng.randint(min(3, size), size)
    nv = rng.randint(2, 5)
    return {"type": "count", "a": a, "b": b, "graph": _rand_graph(rng, nv, ne, loops=b < a)}


def _sparse_paving(rng, size):
    """Sparse paving matroid: a family of r-sets meeting pairwise in <= r-2
    elements are the circuit-hyperplanes; every other (r+1)-set is a circuit."""
    if size < 4:
        return _uniform(rng, size)  # too small for a non-uniform paving matroid
    n = rng.randint(4, min(size, 8))
    r = rng.randint(2, n - 2)
    chosen = []
    for s in rng.sample(list(itertools.combinations(range(1, n + 1), r)), k=min(12, _binom(n, r))):
        if all(len(set(s) & set(t)) <= r - 2 for t in chosen):
            chosen.append(s)
    circuits = [list(s) for s in chosen]
    for t in itertools.combinations(range(1, n + 1), r + 1):
        if not any(set(s) <= set(t) for s in chosen):
            circuits.append(list(t))
    return {"type": "circuits", "ground": list(range(1, n + 1)), "circuits": circuits}


def _binom(n, r):
    out = 1
    for i in range(r):
        out = out * (n - i) // (i + 1)
    return out


_LEAVES = (_uniform, _linear, _graphic, _count, _sparse_paving)


def _labels_of(node):
    return list(MatroidSpec.from_json(node).build().ground)


def _relabel_leaf(node, prefix):
    """Give a leaf node fresh string labels ``prefix0, prefix1, ...``."""
    node = dict(node)
    n = len(_labels_of(node))
    fresh = [f"{prefix}{i}" for i in range(n)]
    if node["type"] == "circuits":
        old = node["ground"]
        mp = dict(zip(old, fresh))
        node["ground"] = fresh
        node["circuits"] = [[mp[x] for x in c] for c in node["circuits"]]
    else:
        node["labels"] = fresh
    return node


def random_matroid(rng, max_size=10, kind=None):
    """One random matroid node with at most ``max_size`` elements."""
    kind = kind or rng.choice(BACKENDS)
    if kind == "uniform":
        return _uniform(rng, max_size)
    if kind == "linear":
        return _linear(rng, max_size)
    if kind == "graphic":
        return _graphic(rng, max_size)
    if kind == "count":
        return _count(rng, max_size)
    if kind == "circuits":
        return _sparse_paving(rng, max_size)
    if kind == "dual":
        return {"type": "dual", "of": rng.choice(_LEAVES)(rng, max_size)}
    if kind == "restrict":
        child = rng.choice(_LEAVES)(rng, max_size)
        labels = _labels_of(child)
        keep = sorted(rng.sample(range(len(labels)), rng.randint(1, len(labels))))
        return {"type": "restrict", "of": child, "to": [labels[i] for i in keep]}
    if kind == "direct_sum":
        half = max(2, max_size // 2)
        return {"type": "direct_sum",
                "parts": [_relabel_leaf(rng.choice(_LEAVES)(rng, half), "a"),
                          _relabel_leaf(rng.choice(_LEAVES)(rng, max_size - half), "b")]}
    if kind in ("two_sum", "parallel_connection"):
        for _ in range(50):
            half = max(3, (max_size + 1) // 2)
            left = _relabel_leaf(rng.choice(_LEAVES)(rng, half), "a")
            right = _relabel_leaf(rng.choice(_LEAVES)(rng, max_size + 1 - half), "b")
            node = _glue_node(rng, kind, left, right)
            if node is not None:
                return node
        return _uniform(rng, max_size)
    raise DomainError(f"unknown backend {kind!r}")


def _glue_node(rng, kind, left, right):
    ml = MatroidSpec.from_json(left).build()
    mr = MatroidSpec.from_json(right).build()
    ok_l = [x for x in ml.ground if _gluable(ml, x)]
    ok_r = [x for x in mr.ground if _gluable(mr, x)]
    if not ok_l or not ok_r:
        return None
    x, y = rng.choice(ok_l), rng.choice(ok_r)
    left = _rename(left, x, "e")
    right = _rename(right, y, "e")
    return {"type": kind, "left": left, "right": right, "element": "e"}


def _gluable(m, x):
    bit = 1 << m.index(x)
    return m.n >= 2 and m.rank(bit) == 1 and m.rank(m.full ^ bit) == m.rank()


def _rename(node, old, new):
    node = dict(node)
    if node["type"] == "circuits":
        node["ground"] = [new if g == old else g for g in node["ground"]]
        node["circuits"] = [[new if g == old else g for g in c] for c in node["circuits"]]
    else:
        node["labels"] = [new if g == old else g for g in node["labels"]]
    return node


def corpus(seed=0, count=200, max_size=10):
    """``count`` seeded random matroid nodes, cycling through every backend."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        node = random_matroid(rng, max_size, BACKENDS[i % len(BACKENDS)])
        m = MatroidSpec.from_json(node).build()
        if m.n > max_size:
            keep = [m.ground[j] for j in sorted(rng.sample(range(m.n), max_size))]
            node = {"type": "restrict", "of": node, "to": keep}
        out.append(node)
    return out


# -- construction trees with predicted principal partitions ---------------------


def circuits_leaf(m, d, prefix):
    """M|d as an explicit-circuits node with fresh labels."""
    idx = list(bits(d))
    names = {i: f"{prefix}{j}" for j, i in enumerate(idx)}
    circuits = [[names[i] for i in bits(c)] for c in m.circuits(d)]
    return {"type": "circuits", "ground": [names[i] for i in idx], "circuits": circuits}


def _leaf_kfold(rng, prefix, max_k=2, max_size=6):
    """A random small k-fold circuit, as (node, k, partition as label sets)."""
    while True:
        node = random_matroid(rng, 7, rng.choice(("uniform", "linear", "graphic", "count", "circuits")))
        m = MatroidSpec.from_json(node).build()
        k = rng.randint(1, max_k)
        found = [d for d in enumerate_kfold_circuits(m, k) if 2 <= popcount(d) <= max_size]
        if not found:
            continue
        d = rng.choice(found)
        leaf = circuits_leaf(m, d, prefix)
        sub = MatroidSpec.from_json(leaf).build()
        kf = principal_partition(sub, None)
        parts = [frozenset(sub.elements(p)) for p in kf.parts]
        return leaf, kf.k, parts


class _Counter:
    def __init__(self):
        self.n = 0

    def fresh(self, stem):
        self.n += 1
        return f"{stem}{self.n}_"


def _predict(rng, depth, ctr):
    """Recursively build a tree; returns (node, k, parts, ground size)."""
    if depth == 0 or rng.random() < 0.3:
        node, k, parts = _leaf_kfold(rng, ctr.fresh("x"))
        return node, k, parts
    op = rng.choice(("direct_sum", "two_sum", "parallel_connection"))
    left, k1, p1 = _predict(rng, depth - 1, ctr)
    right, k2, p2 = _predict(rng, depth - 1, ctr)
    if op == "direct_sum":
        return {"type": "direct_sum", "parts": [left, right]}, k1 + k2, p1 + p2
    ml = MatroidSpec.from_json(left).build()
    mr = MatroidSpec.from_json(right).build()
    ok_l = [x for x in ml.ground if _gluable(ml, x)]
    ok_r = [x for x in mr.ground if _gluable(mr, x)]
    if not ok_l or not ok_r:
        return {"type": "direct_sum", "parts": [left, right]}, k1 + k2, p1 + p2
    x, y = rng.choice(ok_l), rng.choice(ok_r)
    e = ctr.fresh("e")
    left, right = _rename_tree(left, x, e), _rename_tree(right, y, e)
    p1 = [frozenset(e if v == x else v for v in p) for p in p1]
    p2 = [frozenset(e if v == y else v for v in p) for p in p2]
    a1 = next(p for p in p1 if e in p)
    a2 = next(p for p in p2 if e in p)
    rest = [p for p in p1 if p != a1] + [p for p in p2 if p != a2]
    node = {"type": op, "left": left, "right": right, "element": e}
    if op == "two_sum":
        merged = (a1 | a2) - {e}
        parts = rest + ([merged] if merged else [])
        return node, k1 + k2 - 1, parts
    extra = [a1 - {e}, a2 - {e}, frozenset([e])]
    return node, k1 + k2, rest + [p for p in extra if p]


def _rename_tree(node, old, new):
    kind = node["type"]
    if kind in ("two_sum", "parallel_connection"):
        # a parallel connection keeps its glue element, which may be the one renamed
        element = new if node["element"] == old else node["element"]
        return dict(node, element=element, left=_rename_tree(node["left"], old, new),
                    right=_rename_tree(node["right"], old, new))
    if kind == "direct_sum":
        return dict(node, parts=[_rename_tree(p, old, new) for p in node["parts"]])
    return _rename(node, old, new)


def construction_tree(rng, depth=2, max_size=12):
    """A random tree of direct sums, 2-sums and parallel connections over small
    k-fold circuits, with the predicted k and principal partition of the whole
    ground set.  Retries until the ground set has at most ``max_size`` elements."""
    while True:
        node, k, parts = _predict(rng, depth, _Counter())
        size = sum(len(p) for p in parts)
        if size <= max_size and node["type"] != "circuits":
            return node, k, sorted(sorted(p) for p in parts)


def construction_trees(seed=0, count=100, depth=2, max_size=12):
    rng = random.Random(seed)
    return [construction_tree(rng, depth, max_size) for _ in range(count)]


def explicit_copy(m):
    """explicit_circuits(circuits(m)) on the same ground set."""
    return explicit_circuits(m.ground, [m.elements(c) for c in m.circuits()])


def matching_instances(seed=0, count=20, max_flats=6, max_size=10):
    """Seeded (matroid node, k, flats) triples with at least one rank-k flat.

    Flats are drawn as closures of random k-element independent sets, so
    they may repeat or nest; H is a multiset in general.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        node = random_matroid(rng, max_size, rng.choice(("uniform", "linear", "graphic", "count")))
        m = MatroidSpec.from_json(node).build()
        k = rng.randint(1, 3)
        if m.rank() < k:
            continue
        indep = [s for s in itertools.combinations(range(m.n), k)
                 if m.rank(sum(1 << i for i in s)) == k]
        flats = []
        for _ in range(rng.randint(1, max_flats)):
            s = rng.choice(indep)
            flats.append(list(m.elements(m.closure(sum(1 << i for i in s)))))
        out.append((node, k, flats))
    return out
