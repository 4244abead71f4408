"""Count matroids M_{a,b}(H): (a,b)-sparsity on multigraph edge sets.

Ranks come from the (a,b)-pebble game.  ``brute_force_rank`` evaluates the
sparsity definition directly and is kept as an independent oracle.
"""
from dataclasses import dataclass

import numpy as np

from .core import Matroid, bits, popcount
from .errors import DomainError, InvariantViolation
from .graphs import Multigraph


@dataclass(frozen=True)
class CountParams:
    a: int
    b: int

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int) or self.a < 1 or not 0 <= self.b < 2 * self.a:
            raise DomainError(f"count matroid needs a >= 1 and 0 <= b < 2a, got a={self.a}, b={self.b}")

    def rigid_rank(self, vertex_count):
        return self.a * vertex_count - self.b


def _params(params):
    if isinstance(params, CountParams):
        return params
    return CountParams(*params)


class PebbleGame:
    """Scratch state for one run of the (a,b)-pebble game on n vertices.

    Every vertex starts with ``a`` free pebbles.  An accepted edge is covered by
    a pebble from one endpoint and oriented out of it, so
    ``sum(free) == a*n - accepted`` throughout.
    """

    def __init__(self, a, b, n):
        self.a, self.b = a, b
        self.free = [a] * n
        self.out = [[] for _ in range(n)]
        self.accepted = 0

    def try_add(self, u, v):
        a, b = self.a, self.b
        need = b + 1
        if u == v:
            if need > a:
                return False
            while self.free[u] < need:
                if not self._pull(u, None):
                    return False
            self.free[u] -= 1
            self.out[u].append(u)
            self.accepted += 1
            return True
        while self.free[u] + self.free[v] < need:
            if self.free[u] < a and self._pull(u, v):
                continue
            if self.free[v] < a and self._pull(v, u):
                continue
            return False
        src = u if self.free[u] > 0 else v
        self.free[src] -= 1
        self.out[src].append(v if src == u else u)
        self.accepted += 1
        return True

    def _pull(self, target, keep):
        # DFS along covered edges for a free pebble not on target/keep, then
        # reverse the path so that pebble ends up on target
        parent = {target: None}
        stack = [target]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if y != keep and self.free[y] > 0:
                    self.free[y] -= 1
                    self.free[target] += 1
                    while y != target:
                        px = parent[y]
                        self.out[px].remove(y)
                        self.out[y].append(px)
                        y = px
                    return True
                stack.append(y)
        return False


def pebble_rank(params, graph, mask=None):
    """Size of a maximal (a,b)-sparse subset, inserting edges in index order."""
    p = _params(params)
    game = PebbleGame(p.a, p.b, graph.vertex_count)
    for i, (u, v) in enumerate(graph.edges):
        if mask is None or mask >> i & 1:
            game.try_add(u, v)
    return game.accepted


def _vertex_union_table(graph, idx):
    table = np.zeros(1, dtype=np.int64)
    for i in idx:
        table = np.concatenate([table, table | graph.vertex_mask(i)])
    return table


def _popcounts(arr):
    out = np.zeros_like(arr)
    x = arr.copy()
    while x.any():
        out += x & 1
        x >>= 1
    return out


def brute_force_rank(params, graph, mask=None):
    """Rank straight from the definition: the largest F such that every
    non-empty F' ⊆ F has |F'| <= a|V(F')| - b.  Exponential in |mask|."""
    p = _params(params)
    idx = [i for i in range(len(graph.edges)) if mask is None or mask >> i & 1]
    m = len(idx)
    if m == 0:
        return 0
    vunion = _vertex_union_table(graph, idx)
    nverts = _popcounts(vunion)
    sizes = _popcounts(np.arange(1 << m, dtype=np.int64))
    violates = sizes > p.a * nverts - p.b
    violates[0] = False
    # dependent iff some subset violates: OR-propagate upward along each bit
    dep = violates.reshape((2,) * m)
    for axis in range(m):
        dep = np.logical_or.accumulate(dep, axis=axis)
    dep = dep.reshape(-1)
    return int(sizes[~dep].max())


class CountMatroid(Matroid):
    def __init__(self, params, graph, labels=None):
        self.params = _params(params)
        if not isinstance(graph, Multigraph):
            graph = Multigraph.from_json(graph)
        self.graph = graph
        super().__init__(labels if labels is not None else range(len(graph.edges)))
        if self.n != len(graph.edges):
            raise DomainError("label count does not match edge count")

    def _rank(self, mask):
        return pebble_rank(self.params, self.graph, mask)

    def spanned(self, mask=None):
        return self.graph.spanned(mask)

    def is_rigid(self, s=None):
        mask = self._coerce(s)
        if mask == 0:
            raise DomainError("rigidity of the empty edge set is undefined")
        return self.rank(mask) == self.params.rigid_rank(len(self.spanned(mask)))


def ab_clique(params, n):
    """K_n^{a,b}: max(a-b, 0) loops at each vertex, 2a-b parallel edges per pair."""
    p = _params(params)
    if n < 1:
        raise DomainError("an (a,b)-clique needs at least one vertex")
    edges = []
    for u in range(n):
        edges += [(u, u)] * max(p.a - p.b, 0)
    for u in range(n):
        for v in range(u + 1, n):
            edges += [(u, v)] * (2 * p.a - p.b)
    return Multigraph(n, tuple(edges))


def _ambient(params, graph):
    """The graph's edges followed by whatever the (a,b)-clique adds on top."""
    have = {}
    for u, v in graph.edges:
        key = (min(u, v), max(u, v))
        have[key] = have.get(key, 0) + 1
    extra = []
    for u, v in ab_clique(params, graph.vertex_count).edges:
        if have.get((u, v), 0) > 0:
            have[(u, v)] -= 1
        else:
            extra.append((u, v))
    return Multigraph(graph.vertex_count, graph.edges + tuple(extra)), len(extra)


def count_matroid(params, g, labels=None, ambient="graph"):
    """M_{a,b} on the edges of ``g``.

    With ``ambient="clique"`` the ground set is g's edges followed by the
    extra edges of the (a,b)-clique on g's vertices, so closures are taken in
    the full count matroid.  g's edges keep bit positions 0..|E(g)|-1.
    """
    p = _params(params)
    if not isinstance(g, Multigraph):
        g = Multigraph.from_json(g)
    if ambient == "graph":
        return CountMatroid(p, g, labels)
    if ambient != "clique":
        raise DomainError(f"unknown ambient {ambient!r}")
    host, nextra = _ambient(p, g)
    base = list(labels) if labels is not None else list(range(len(g.edges)))
    taken = set(base)
    extra_labels = []
    for (u, v) in host.edges[len(g.edges):]:
        c = 0
        while f"{u}-{v}#{c}" in taken:
            c += 1
        lab = f"{u}-{v}#{c}"
        taken.add(lab)
        extra_labels.append(lab)
    return CountMatroid(p, host, base + extra_labels)


def full_count_matroid(params, n):
    """The count matroid on K_n^{a,b}."""
    return CountMatroid(params, ab_clique(params, n))


def is_rigid(params, g, mask=None):
    m = CountMatroid(params, g)
    return m.is_rigid(mask)


def count_closure(params, g, s=None):
    """Closure of the edge subset ``s`` of g, taken in the (a,b)-clique on g's vertices.

    Returns the closure as a Multigraph.
    """
    m = count_matroid(params, g, ambient="clique")
    mask = (1 << len(g.edges)) - 1 if s is None else (s if isinstance(s, int) else m.mask(s))
    return m.graph.subgraph(m.closure(mask))


def technicolour_vertices(m, kf):
    """Vertices of the k-fold circuit incident to edges from two or more parts.

    Checks the vertex count identity sum_i |V(D - A_i)| = (l-1)|V| + |X|
    (summing over the (k-1)-fold circuits D - A_i; the parts themselves do
    not satisfy it, e.g. when every part is a single edge).
    """
    if not isinstance(m, CountMatroid):
        raise DomainError("technicolour vertices are defined for count matroids")
    d = kf.support
    if not m.is_cyclic(d) or m.corank(d) != kf.k:
        raise DomainError("not a k-fold circuit of this matroid")
    colour = {}
    for i, part in enumerate(kf.parts):
        for e in bits(part):
            for v in m.graph.edges[e]:
                colour.setdefault(v, set()).add(i)
    x = frozenset(v for v, cs in colour.items() if len(cs) > 1)
    total = sum(len(m.spanned(d & ~part)) for part in kf.parts)
    ell = len(kf.parts)
    if total != (ell - 1) * len(m.spanned(d)) + len(x):
        raise InvariantViolation(f"vertex count identity fails: {total} != "
                                 f"{ell - 1}*{len(m.spanned(d))} + {len(x)}")
    return x
