"""Multigraphs with loops and parallel edges; edge index = ground-set element."""
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside 0..{self.vertex_count - 1}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_json(cls, data):
        try:
            return cls(int(data["vertices"]), tuple(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed multigraph: {exc}") from None

    def to_json(self):
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    def __len__(self):
        return len(self.edges)

    def vertex_mask(self, i):
        u, v = self.edges[i]
        return (1 << u) | (1 << v)

    def spanned(self, mask=None):
        """Vertex set spanned by the edges in ``mask`` (all edges by default)."""
        vs = set()
        for i, e in enumerate(self.edges):
            if mask is None or mask >> i & 1:
                vs.update(e)
        return frozenset(vs)

    def degree(self, v, mask=None):
        """Edges incident to v, each loop counted once."""
        return sum(1 for i, e in enumerate(self.edges)
                   if (mask is None or mask >> i & 1) and v in e)

    def subgraph(self, mask):
        return Multigraph(self.vertex_count, tuple(e for i, e in enumerate(self.edges) if mask >> i & 1))


def complete_graph(n):
    return Multigraph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))
