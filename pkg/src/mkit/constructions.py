"""Matroid backends and gluing operators."""
from dataclasses import dataclass, field as dc_field

from . import linalg
from .core import Matroid, UnionFind, bits, popcount
from .errors import DomainError
from .graphs import Multigraph
from .linalg import Field

# ground sets up to this size are glued through the circuit-set definition
CIRCUIT_ROUTE_LIMIT = 12


class UniformMatroid(Matroid):
    def __init__(self, r, n, labels=None):
        if r < 0 or n < 0:
            raise DomainError("uniform matroid parameters must be nonnegative")
        if r > n:
            raise DomainError(f"U_{{{r},{n}}} needs r <= n")
        super().__init__(labels if labels is not None else range(1, n + 1))
        if self.n != n:
            raise DomainError("label count does not match n")
        self.r = r

    def _rank(self, mask):
        return min(popcount(mask), self.r)


def uniform(r, n, labels=None):
    return UniformMatroid(r, n, labels)


@dataclass(frozen=True)
class LinearMatroidSpec:
    """Column matroid data: matrix rows over Q (p=None) or GF(p)."""
    matrix: tuple
    labels: tuple = None
    p: int = None
    field: Field = dc_field(init=False, compare=False, repr=False)

    def __post_init__(self):
        fld = Field(self.p)
        rows = tuple(tuple(fld.coerce(x) for x in row) for row in self.matrix)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DomainError("matrix rows have different lengths")
        ncols = len(rows[0]) if rows else 0
        labels = tuple(self.labels) if self.labels is not None else tuple(f"v{j + 1}" for j in range(ncols))
        if len(labels) != ncols:
            raise DomainError(f"{len(labels)} labels for {ncols} columns")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "field", fld)

    @property
    def columns(self):
        return [tuple(row[j] for row in self.matrix) for j in range(len(self.labels))]


class LinearMatroid(Matroid):
    def __init__(self, spec):
        super().__init__(spec.labels)
        self.spec = spec
        self.columns = spec.columns

    def _rank(self, mask):
        return linalg.rank([self.columns[i] for i in bits(mask)], self.spec.field)


def linear(spec=None, *, matrix=None, labels=None, p=None):
    if spec is None:
        spec = LinearMatroidSpec(matrix, labels, p)
    return LinearMatroid(spec)


def subspace_intersection(spec, families):
    """Dimension of the intersection of the spans of the given column families.

    This is the rank of the intersection of closures in the ambient vector
    space, as opposed to closures inside the finite column matroid.
    """
    if not families:
        raise DomainError("need at least one column family")
    index = {lab: j for j, lab in enumerate(spec.labels)}
    cols = spec.columns
    spans = []
    for fam in families:
        try:
            spans.append([cols[index[lab]] for lab in fam])
        except KeyError as exc:
            raise DomainError(f"unknown column {exc.args[0]!r}") from None
    if any(not s for s in spans):
        return 0
    return len(linalg.intersect_spans(spans, spec.field))


class GraphicMatroid(Matroid):
    """Cycle matroid: r(S) = |V(S)| - #components of the subgraph S spans."""

    def __init__(self, graph, labels=None):
        super().__init__(labels if labels is not None else range(len(graph.edges)))
        if self.n != len(graph.edges):
            raise DomainError("label count does not match edge count")
        self.graph = graph

    def _rank(self, mask):
        edges = [self.graph.edges[i] for i in bits(mask)]
        uf = UnionFind({v for e in edges for v in e})
        r = 0
        for u, v in edges:
            if uf.find(u) != uf.find(v):
                uf.union(u, v)
                r += 1
        return r


def graphic(g, labels=None):
    if not isinstance(g, Multigraph):
        g = Multigraph.from_json(g)
    return GraphicMatroid(g, labels)


class DirectSum(Matroid):
    def __init__(self, parts):
        parts = list(parts)
        ground = [e for m in parts for e in m.ground]
        if len(set(ground)) != len(ground):
            raise DomainError("direct sum needs pairwise disjoint ground sets")
        super().__init__(ground)
        self.parts = parts
        self._offsets = []
        off = 0
        for m in parts:
            self._offsets.append(off)
            off += m.n

    def _rank(self, mask):
        return sum(m.rank((mask >> off) & m.full) for m, off in zip(self.parts, self._offsets))


def direct_sum(ms):
    return DirectSum(ms)


class CircuitMatroid(Matroid):
    """Matroid given by its complete list of circuits."""

    def __init__(self, ground, circuits, validate=True):
        super().__init__(ground)
        masks = sorted({self.mask(c) for c in circuits})
        if validate:
            _check_circuit_axioms(self, masks)
        self.circuit_masks = masks

    def _rank(self, mask):
        # greedy is exact once the circuit axioms hold
        ind = 0
        r = 0
        for i in bits(mask):
            cand = ind | (1 << i)
            if not any(c & cand == c for c in self.circuit_masks):
                ind = cand
                r += 1
        return r


def _check_circuit_axioms(m, masks):
    if 0 in masks:
        raise DomainError("the empty set cannot be a circuit")
    for a in masks:
        for b in masks:
            if a != b and a & b == a:
                raise DomainError(f"circuit {m.elements(a)} is contained in {m.elements(b)}")
    for x, a in enumerate(masks):
        for b in masks[x + 1:]:
            union = a | b
            for i in bits(a & b):
                target = union & ~(1 << i)
                if not any(c & target == c for c in masks):
                    raise DomainError(
                        f"circuit elimination fails for {m.elements(a)} and {m.elements(b)} "
                        f"at {m.ground[i]!r}")


def explicit_circuits(ground, circuits, validate=True):
    return CircuitMatroid(ground, circuits, validate)


def _check_glue(m1, m2, e):
    if e not in m1._index or e not in m2._index:
        raise DomainError(f"{e!r} must lie in both ground sets")
    shared = set(m1.ground) & set(m2.ground)
    if shared != {e}:
        raise DomainError(f"ground sets must meet exactly in {e!r}, they share {sorted(map(repr, shared))}")
    for m in (m1, m2):
        if m.n < 2:
            raise DomainError("both ground sets need at least two elements")
        bit = 1 << m.index(e)
        if m.rank(bit) == 0:
            raise DomainError(f"{e!r} is a loop")
        if m.rank(m.full ^ bit) < m.rank():
            raise DomainError(f"{e!r} is a coloop")


class _Glued(Matroid):
    """Shared machinery for parallel connection / 2-sum along ``e``.

    The parallel connection has rank
        r(X) = min(r1(X1) + r2(X2), r1(X1 + e) + r2(X2 + e) - 1)
    with Xi = X ∩ Ei; the 2-sum is its deletion of e.
    """

    keep_e = True

    def __init__(self, m1, m2, e):
        _check_glue(m1, m2, e)
        self.m1, self.m2, self.e = m1, m2, e
        ground = [x for x in m1.ground if self.keep_e or x != e] + [x for x in m2.ground if x != e]
        super().__init__(ground)
        self._e1 = 1 << m1.index(e)
        self._e2 = 1 << m2.index(e)
        # (bit in self, bit in m1, bit in m2)
        self._map = []
        for i, x in enumerate(ground):
            b1 = 1 << m1.index(x) if x in m1._index else 0
            b2 = 1 << m2.index(x) if x in m2._index else 0
            self._map.append((b1, b2))

    def _split(self, mask):
        x1 = x2 = 0
        for i in bits(mask):
            b1, b2 = self._map[i]
            x1 |= b1
            x2 |= b2
        return x1, x2

    def _rank(self, mask):
        x1, x2 = self._split(mask)
        r1, r2 = self.m1.rank, self.m2.rank
        return min(r1(x1) + r2(x2), r1(x1 | self._e1) + r2(x2 | self._e2) - 1)


class ParallelConnection(_Glued):
    keep_e = True


class TwoSum(_Glued):
    keep_e = False


def _glued_circuits(m1, m2, e, keep_e):
    c1 = [set(m1.elements(c)) for c in m1.circuits()]
    c2 = [set(m2.elements(c)) for c in m2.circuits()]
    out = []
    for c in c1 + c2:
        if keep_e or e not in c:
            out.append(c)
    for a in c1:
        if e in a:
            for b in c2:
                if e in b:
                    out.append((a | b) - {e})
    return out


def _glue(cls, m1, m2, e, route):
    if route not in ("auto", "formula", "circuits"):
        raise DomainError(f"unknown route {route!r}")
    fast = cls(m1, m2, e)
    if route == "formula" or (route == "auto" and fast.n > CIRCUIT_ROUTE_LIMIT):
        return fast
    return CircuitMatroid(fast.ground, _glued_circuits(m1, m2, e, cls.keep_e), validate=False)


def parallel_connection(m1, m2, e, route="auto"):
    """P(M1, M2) along e, on E1 ∪ E2."""
    return _glue(ParallelConnection, m1, m2, e, route)


def two_sum(m1, m2, e, route="auto"):
    """M1 ⊕_2 M2 along e, on (E1 ∪ E2) - e."""
    return _glue(TwoSum, m1, m2, e, route)
