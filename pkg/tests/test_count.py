import itertools
import random

import pytest

from helpers import load_fixture
from mkit import (CountParams, DomainError, Multigraph, ab_clique, count_closure, count_matroid,
                  enumerate_kfold_circuits, full_count_matroid, is_rigid, principal_partition,
                  technicolour_vertices, balance_report)
from mkit.core import bits, popcount
from mkit.count import PebbleGame, brute_force_rank, pebble_rank
from mkit.graphs import complete_graph

PARAMS = [(1, 0), (1, 1), (2, 1), (2, 2), (2, 3), (3, 2)]
LOOSE = [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]  # the range 0 <= b <= a


def random_multigraph(rng, nv, ne, loops=True):
    edges = []
    for _ in range(ne):
        u = rng.randrange(nv)
        v = u if loops and rng.random() < 0.15 else rng.randrange(nv)
        edges.append((min(u, v), max(u, v)))
    return Multigraph(nv, tuple(edges))


def clique_subgraph(rng, params, nv, ne):
    host = ab_clique(params, nv).edges
    return Multigraph(nv, tuple(sorted(rng.sample(host, min(ne, len(host))))))


def degree(graph, v, mask):
    return graph.degree(v, mask)  # loops count once


# -- construction and examples ---------------------------------------------------------


def test_params_validation():
    CountParams(2, 3)
    for a, b in ((0, 0), (1, 2), (2, -1), (2, 4)):
        with pytest.raises(DomainError):
            CountParams(a, b)


def test_rank_examples():
    assert count_matroid((2, 3), complete_graph(4)).rank() == 5
    tree = Multigraph(5, ((0, 1), (1, 2), (1, 3), (3, 4)))
    assert count_matroid((1, 1), tree).rank() == 4
    k5 = count_matroid((2, 3), complete_graph(5))
    assert k5.rank() == 7 == brute_force_rank((2, 3), k5.graph)


def test_ab_clique_examples():
    assert ab_clique((2, 3), 4).edges == complete_graph(4).edges
    assert ab_clique((1, 0), 1).edges == ((0, 0),)
    assert ab_clique((1, 1), 3).edges == complete_graph(3).edges
    g = ab_clique((2, 1), 3)
    assert sorted(g.edges) == [(0, 0), (0, 1), (0, 1), (0, 1), (0, 2), (0, 2), (0, 2), (1, 1),
                               (1, 2), (1, 2), (1, 2), (2, 2)]
    with pytest.raises(DomainError):
        ab_clique((1, 1), 0)


def test_rigidity_examples():
    assert is_rigid((2, 3), complete_graph(4))
    two_k4 = Multigraph(8, complete_graph(4).edges + tuple((u + 4, v + 4) for u, v in complete_graph(4).edges))
    assert count_matroid((2, 3), two_k4).rank() == 10
    assert not is_rigid((2, 3), two_k4)
    with pytest.raises(DomainError):
        count_matroid((2, 3), complete_graph(4)).is_rigid(0)


@pytest.mark.parametrize("params", LOOSE)
def test_one_and_two_vertex_cliques_are_rigid(params):
    m = full_count_matroid(params, 4)
    for block in ([0], [1, 2]):
        mask = sum(1 << i for i, (u, v) in enumerate(m.graph.edges) if u in block and v in block)
        if mask:
            assert m.is_rigid(mask)


def test_count_closure_examples():
    g = complete_graph(4)
    assert count_closure((2, 3), g).edges == ab_clique((2, 3), 4).edges
    assert count_closure((2, 3), g, 0).edges == ()
    path = Multigraph(3, ((0, 1), (1, 2)))
    assert sorted(count_closure((1, 1), path).edges) == [(0, 1), (0, 2), (1, 2)]


@pytest.mark.parametrize("params", [(1, 1), (2, 1), (2, 2), (2, 3)])
def test_closure_of_rigid_graph_is_clique(params):
    rng = random.Random(sum(params))
    p = CountParams(*params)
    for _ in range(25):
        g = clique_subgraph(rng, params, rng.randint(2, 4), rng.randint(2, 8))
        m = count_matroid(params, g)
        if g.edges and m.is_rigid(m.full):
            verts = sorted(m.spanned())
            closure = count_closure(params, g)
            expect = [(u, v) for u, v in ab_clique(p, g.vertex_count).edges if u in verts and v in verts]
            assert sorted(closure.edges) == sorted(expect)


def test_clique_ambient_labels():
    g = Multigraph(3, ((0, 1),))
    m = count_matroid((1, 1), g, labels=["x"], ambient="clique")
    assert m.ground == ("x", "0-2#0", "1-2#0")
    with pytest.raises(DomainError):
        count_matroid((1, 1), g, ambient="sky")


# -- pebble game -------------------------------------------------------------------


@pytest.mark.parametrize("params", PARAMS)
def test_pebble_matches_brute_force_random(params):
    rng = random.Random(hash(params) % 1000)
    for _ in range(40):
        g = random_multigraph(rng, rng.randint(1, 5), rng.randint(0, 9), loops=params[1] < params[0])
        assert pebble_rank(params, g) == brute_force_rank(params, g)


@pytest.mark.parametrize("params", PARAMS)
def test_rank_is_insertion_order_independent(params):
    rng = random.Random(7)
    for _ in range(20):
        g = random_multigraph(rng, 5, 10, loops=params[1] < params[0])
        order = list(range(len(g.edges)))
        rng.shuffle(order)
        shuffled = Multigraph(g.vertex_count, tuple(g.edges[i] for i in order))
        assert pebble_rank(params, g) == pebble_rank(params, shuffled)


def test_pebble_state_conservation():
    rng = random.Random(3)
    for a, b in PARAMS:
        g = random_multigraph(rng, 5, 14, loops=b < a)
        game = PebbleGame(a, b, g.vertex_count)
        for u, v in g.edges:
            game.try_add(u, v)
            assert sum(game.free) == a * g.vertex_count - game.accepted
            assert all(0 <= f <= a for f in game.free)


# -- lemmas on count matroids -------------------------------------------------------------


@pytest.mark.parametrize("params", PARAMS)
def test_low_degree_vertex_extension_preserves_independence(params):
    rng = random.Random(17)
    a = params[0]
    checked = 0
    for _ in range(120):
        nv = rng.randint(2, 5)
        g = clique_subgraph(rng, params, nv, rng.randint(1, 8))
        m = count_matroid(params, g)
        for v in m.spanned():
            at_v = sum(1 << i for i, e in enumerate(g.edges) if v in e)
            if degree(g, v, m.full) <= a and m.is_independent(m.full & ~at_v):
                assert m.is_independent(m.full)
                checked += 1
    assert checked > 20


@pytest.mark.parametrize("params", PARAMS)
def test_circuits_are_connected_rigid_and_min_degree(params):
    rng = random.Random(23)
    a = params[0]
    seen = 0
    for _ in range(40):
        g = clique_subgraph(rng, params, rng.randint(1, 5), 8)
        m = count_matroid(params, g)
        for c in m.circuits():
            seen += 1
            sub = Multigraph(g.vertex_count, tuple(g.edges[i] for i in bits(c)))
            graphic_sub = __import__("mkit").graphic(sub)
            verts = m.spanned(c)
            assert graphic_sub.rank() == len(verts) - 1  # connected
            assert m.is_rigid(c)
            assert min(degree(g, v, c) for v in verts) >= a + 1
    assert seen > 0


@pytest.mark.parametrize("params", [(1, 0), (2, 0), (1, 1), (2, 1), (2, 2), (2, 3)])
def test_connected_kfold_circuits_are_rigid(params):
    rng = random.Random(31)
    for _ in range(6):
        g = clique_subgraph(rng, params, rng.randint(3, 4), 10)
        m = count_matroid(params, g)
        for k in (1, 2, 3):
            for d in enumerate_kfold_circuits(m, k):
                if params[1] == 0 or m.is_connected(d):
                    assert m.is_rigid(d)


@pytest.mark.parametrize("params", [(1, 1), (2, 1), (2, 2)])
def test_clique_union_and_cyclic_flat_structure(params):
    n = 4 if len(ab_clique(params, 4).edges) <= 16 else 3
    m = full_count_matroid(params, n)
    p = CountParams(*params)
    g = m.graph

    def block_edges(block):
        return sum(1 << i for i, (u, v) in enumerate(g.edges) if u in block and v in block)

    # (a) cliques are rigid
    for size in range(1, n + 1):
        for block in itertools.combinations(range(n), size):
            e = block_edges(block)
            if e:
                assert m.is_rigid(e)
    # (b) two intersecting rigid graphs have a rigid union
    rng = random.Random(2)
    rigid = [s for s in rng.sample(range(1, m.full + 1), min(3000, m.full)) if m.is_rigid(s)]
    for x, y in itertools.combinations(rigid[:60], 2):
        if m.spanned(x) & m.spanned(y):
            assert m.is_rigid(x | y)
    # (c) cyclic flats are unions of vertex-disjoint cliques
    from mkit.lattice import cyclic_sets
    for d in cyclic_sets(m):
        if d and m.is_flat(d):
            comps = m.components(d)
            blocks = [m.spanned(c) for c in comps]
            assert all(not (x & y) for x, y in itertools.combinations(blocks, 2))
            assert d == sum(block_edges(b) for b in blocks)
            assert all(m.rank(c) == p.rigid_rank(len(b)) for c, b in zip(comps, blocks))


@pytest.mark.parametrize("params", [(1, 1), (2, 1), (2, 2), (2, 3), (1, 0)])
def test_rigid_subcircuits_force_balance(params):
    rng = random.Random(41)
    hits = 0
    for _ in range(6):
        nv = 5 if params == (2, 3) else rng.randint(3, 4)
        g = clique_subgraph(rng, params, nv, 10)
        m = count_matroid(params, g, ambient="clique")
        for d in enumerate_kfold_circuits(m, 2, within=(1 << len(g.edges)) - 1):
            kf = principal_partition(m, d)
            if all(m.is_rigid(d & ~p) for p in kf.parts):
                hits += 1
                assert balance_report(m, kf).balanced
    assert hits > 0


# -- technicolour vertices ------------------------------------------------------------------------


def _fig(name):
    doc, m = load_fixture(name)
    return m, principal_partition(m, m.mask(doc.subset))


def test_technicolour_examples():
    m, kf = _fig("k4_seven_parts")
    assert technicolour_vertices(m, kf) == {0, 1, 2, 3}
    m, kf = _fig("k4_edge_pair")
    assert technicolour_vertices(m, kf) == {0, 1}
    m, kf = _fig("k4_disjoint_pair")
    assert technicolour_vertices(m, kf) == set()


@pytest.mark.parametrize("name", ["k4_disjoint_pair", "k4_vertex_pair", "k4_edge_pair", "k4_seven_parts"])
def test_technicolour_vertex_count_identity(name):
    m, kf = _fig(name)
    x = technicolour_vertices(m, kf)
    total = sum(len(m.spanned(kf.support & ~p)) for p in kf.parts)
    assert total == (kf.ell - 1) * len(m.spanned(kf.support)) + len(x)
    # X is also the vertex set of the intersection of the closures, as graphs
    verts = set(m.spanned())
    for p in kf.parts:
        verts &= m.spanned(m.closure(kf.support & ~p))
    assert verts == set(x)


def test_technicolour_rejects_non_count_matroids():
    from helpers import theta_graph
    m = theta_graph()
    with pytest.raises(DomainError):
        technicolour_vertices(m, principal_partition(m, None))
