"""Write one representative of every multigraph (loops and parallel edges
allowed, no isolated vertices) with at most N edges, up to isomorphism.

    python3 tools/multigraph_classes.py 8 > fixtures/multigraphs_le8.txt

Each output line is a space-separated edge list "u-v ..." in canonical
vertex order; lines are grouped by edge count.  Needs networkx.
"""
import sys

import networkx as nx


def to_nx(edges):
    g = nx.Graph()
    for u, v in edges:
        g.add_node(u)
        g.add_node(v)
    for node in g.nodes:
        g.nodes[node]["loops"] = 0
    for u, v in edges:
        if u == v:
            g.nodes[u]["loops"] += 1
        elif g.has_edge(u, v):
            g[u][v]["mult"] += 1
        else:
            g.add_edge(u, v, mult=1)
    return g


def _key(g):
    return nx.weisfeiler_lehman_graph_hash(g, node_attr="loops", edge_attr="mult", iterations=4)


def _same(g, h):
    return nx.is_isomorphic(g, h, node_match=lambda a, b: a["loops"] == b["loops"],
                            edge_match=lambda a, b: a["mult"] == b["mult"])


def extensions(edges):
    n = 1 + max((max(e) for e in edges), default=-1)
    for u in range(n + 1):
        for v in range(u, n + 2):
            if v == n + 1 and u != n:
                continue
            yield tuple(sorted(edges + ((u, v),)))


def canonical_labels(edges):
    """Relabel vertices in first-appearance order after sorting by degree."""
    deg = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    order = sorted(deg, key=lambda x: (-deg[x], x))
    pos = {x: i for i, x in enumerate(order)}
    return tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u, v in edges))


def classes(max_edges):
    levels = [[()]]
    for _ in range(max_edges):
        buckets = {}
        out = []
        for edges in levels[-1]:
            for cand in extensions(edges):
                g = to_nx(cand)
                bucket = buckets.setdefault(_key(g), [])
                if not any(_same(g, h) for h in bucket):
                    bucket.append(g)
                    out.append(canonical_labels(cand))
        levels.append(sorted(out))
    return levels


def main():
    max_edges = int(sys.argv[1]) if len(sys.argv) > 1 else 8
    for level in classes(max_edges):
        for edges in level:
            print(" ".join(f"{u}-{v}" for u, v in edges))


if __name__ == "__main__":
    main()
