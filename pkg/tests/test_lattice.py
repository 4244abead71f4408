import itertools
import json

import pytest

from helpers import brute_flats, cyclic_gap, linear_unbalanced, k_graph, theta_graph, u14
from mkit import (CapacityError, DomainError, InvariantViolation, balance_report, enumerate_kfold_circuits,
                  principal_partition, uniform, verify_kfold_property)
from mkit.document import MatroidSpec
from mkit.generators import corpus
from mkit.lattice import (FiniteLattice, boolean_rho, clique_lattice_check, cyclic_meet, cyclic_sets,
                          diminishing_increments, embedding_map, is_modular_function, is_modular_pair,
                          is_pseudomodular, lattice_of_cyclic_sets, lattice_of_flats, partial_partition_lattice,
                          partial_partitions, pseudomodular_sum_check, verify_modular_embedding)


def small_corpus(count=40, max_size=8, seed=11):
    return [MatroidSpec.from_json(n).build() for n in corpus(seed=seed, count=count, max_size=max_size)]


def brute_pseudomodular(lat, f):
    """Plain triple loop over the pseudomodular definition, independent of the vectorised checker."""
    r = lat.function(f)
    n = len(lat)
    for x, y, z in itertools.product(range(n), repeat=3):
        xz, yz = lat.join(x, z), lat.join(y, z)
        xy = lat.join(x, y)
        inc = r[xz] - r[x]
        if inc == r[yz] - r[y] == r[lat.join(xy, z)] - r[xy]:
            if r[lat.meet(xz, yz)] - r[lat.meet(x, y)] != inc:
                return False
    return True


def boolean_lattice(n, weights=None):
    weights = weights or [1] * n
    masks = sorted(range(1 << n), key=lambda s: (bin(s).count("1"), s))
    vals = [sum(w for i, w in enumerate(weights) if s >> i & 1) for s in masks]
    return FiniteLattice(masks, lambda a, b: a & b == a, {"w": vals}, "w")


# -- lattice of flats ------------------------------------------------------------------


def test_flats_examples():
    assert len(lattice_of_flats(u14())) == 2
    k3 = k_graph(3)
    lat = lattice_of_flats(k3)
    assert len(lat) == 5
    assert sorted(lat.function("r")) == [0, 1, 1, 1, 2]
    free = lattice_of_flats(uniform(3, 3))
    assert sorted(free.elements) == list(range(8))


def test_flats_match_closure_scan():
    for m in small_corpus():
        lat = lattice_of_flats(m)
        assert sorted(lat.elements) == brute_flats(m)
        lat.validate()


def test_flat_lattice_is_geometric_on_corpus():
    for m in small_corpus():
        assert all(lattice_of_flats(m).check_geometric().values())


def test_lattice_rejects_bad_order():
    with pytest.raises(DomainError):
        FiniteLattice([3, 1, 0], lambda a, b: a & b == a)
    with pytest.raises(DomainError):
        FiniteLattice([], lambda a, b: True)
    with pytest.raises(InvariantViolation):
        FiniteLattice([0, 1, 2], lambda a, b: a == b or a == 0).validate()


def test_function_registry():
    lat = boolean_lattice(2)
    with pytest.raises(DomainError):
        lat.function("nope")
    with pytest.raises(DomainError):
        lat.add_function("short", [1])
    lat.combine("twice", {"w": 2})
    assert lat.function("twice") == [2 * v for v in lat.function("w")]


# -- lattice of cyclic sets ---------------------------------------------------------------------


def test_cyclic_lattice_examples():
    k4 = k_graph(4)
    # triangles (0,1),(0,2),(1,2) and (0,1),(0,3),(1,3) share edge (0,1)
    t1, t2 = k4.mask([0, 1, 3]), k4.mask([0, 2, 4])
    assert cyclic_meet(k4, t1, t2) == 0
    lat = lattice_of_cyclic_sets(k4)
    i, j = lat.index[t1], lat.index[t2]
    assert lat.elements[lat.meet(i, j)] == 0
    assert lat.elements[lat.join(i, j)] == t1 | t2
    assert sorted(lat.elements[a] for a in lat.atoms()) == sorted(k4.circuits())


def test_cyclic_sets_are_unions_of_circuits():
    for m in small_corpus():
        sets = cyclic_sets(m)
        scan = [s for s in range(m.full + 1) if m.is_cyclic(s)]
        assert sorted(sets) == scan


def test_cyclic_lattice_grading_and_antiisomorphism():
    for m in small_corpus(30):
        lat = lattice_of_cyclic_sets(m)  # check=True runs the complementation test
        assert lat.function("rho") == [m.corank(d) for d in lat.elements]
        dual_lat = lattice_of_flats(m.dual())
        comp = {m.full & ~d: d for d in lat.elements}
        for x, y in itertools.combinations(lat.elements, 2):
            assert (x & y == x) == (comp_leq(dual_lat, m.full & ~y, m.full & ~x))
        assert len(comp) == len(dual_lat)


def comp_leq(lat, a, b):
    return lat.leq(lat.index[a], lat.index[b])


# -- modular pairs and pseudomodularity ---------------------------------------------------------


def test_modular_pair_examples():
    k3 = k_graph(3)
    lat = lattice_of_flats(k3)
    singles = [i for i, e in enumerate(lat.elements) if bin(e).count("1") == 1]
    assert is_modular_pair(lat, "r", singles[0], singles[1])
    for i in range(len(lat)):
        assert is_modular_pair(lat, "r", lat.bottom, i)
    with pytest.raises(DomainError):
        is_modular_pair(lat, "rank", 0, 1)


def test_example_4_3_closure_pairs():
    m = cyclic_gap(2)
    kf = principal_partition(m, None)
    lat = lattice_of_flats(m)
    h = [lat.index[m.closure(kf.support & ~p)] for p in kf.parts]
    # two hyperplanes meeting in a rank-2 flat are a modular pair: 3 + 3 = 4 + 2
    assert all(is_modular_pair(lat, "r", a, b) for a, b in itertools.combinations(h, 2))
    # the failure appears one step later: {5,6} against cl(D - A_3) = {1,2,3,4}
    x = lat.meet(h[0], h[1])
    assert m.elements(lat.elements[x]) == (5, 6)
    assert not is_modular_pair(lat, "r", x, h[2])


def test_pseudomodular_examples():
    assert is_pseudomodular(boolean_lattice(4), "w").passed
    assert is_pseudomodular(lattice_of_flats(k_graph(4)), "r").passed
    v = is_pseudomodular(lattice_of_flats(cyclic_gap(2)), "r")
    assert not v.passed and v.witness is not None


def test_pseudomodular_witness_violates_the_definition():
    lat = lattice_of_flats(cyclic_gap(2))
    v = is_pseudomodular(lat, "r")
    x, y, z = v.witness
    r = lat.function("r")
    xz, yz, xy = lat.join(x, z), lat.join(y, z), lat.join(x, y)
    inc = r[xz] - r[x]
    assert inc == r[yz] - r[y] == r[lat.join(xy, z)] - r[xy]
    assert r[lat.meet(xz, yz)] - r[lat.meet(x, y)] != inc


def test_vectorised_check_matches_triple_loop():
    for m in small_corpus(25, 7):
        lat = lattice_of_flats(m)
        if len(lat) <= 40:
            assert is_pseudomodular(lat, "r").passed == brute_pseudomodular(lat, "r")


def test_pseudomodular_capacity_and_sampling():
    lat = partial_partition_lattice(5)
    assert len(lat) == 203
    with pytest.raises(CapacityError):
        is_pseudomodular(lat, "r11")
    v = is_pseudomodular(lat, "r11", mode="sampled", samples=2000, seed=0)
    assert v.passed and v.checked == 2000
    again = is_pseudomodular(lat, "r11", mode="sampled", samples=2000, seed=0)
    assert again == v
    with pytest.raises(DomainError):
        is_pseudomodular(lat, "r11", mode="guess")


def test_modular_functions_are_pseudomodular():
    for weights in ([1, 1, 1], [2, 0, 5], [3, 1, 4, 1]):
        lat = boolean_lattice(len(weights), weights)
        assert is_modular_function(lat, "w")
        assert is_pseudomodular(lat, "w").passed


def test_lemma_5_2b_increments_on_flat_lattices():
    for m in small_corpus(25, 7):
        lat = lattice_of_flats(m)
        if len(lat) <= 60:
            assert diminishing_increments(lat, "r") is None


# -- sums -----------------------------------------------------------------------------------------


def test_sum_of_modular_functions():
    lat = boolean_lattice(3, [1, 2, 3])
    lat.add_function("card", [bin(e).count("1") for e in lat.elements])
    v = pseudomodular_sum_check(lat, "w", "card")
    assert v.passed and v.check == "pseudomodular_sum"


def test_clique_family_sum_for_m21():
    lat = partial_partition_lattice(4)
    lat.validate()
    v = pseudomodular_sum_check(lat, "nu", "r11", (1, 1))
    assert v.passed
    assert diminishing_increments(lat, "1*nu+1*r11") is None


def test_sum_precondition_failures_are_reported_as_such():
    lat = lattice_of_flats(cyclic_gap(2))
    lat.add_function("zero", [0] * len(lat))
    v = pseudomodular_sum_check(lat, "r", "zero")
    assert v.check == "precondition" and not v.passed
    assert "not pseudomodular" in v.detail["reasons"]
    with pytest.raises(DomainError):
        pseudomodular_sum_check(lat, "zero", "zero", (-1, 1))


def test_partial_partition_counts():
    # number of partial partitions of an n-set is the Bell number B(n+1)
    assert [len(partial_partitions(n)) for n in range(5)] == [1, 2, 5, 15, 52]


# -- modular embedding ---------------------------------------------------------------------------------


def test_embedding_conditions_on_example_4_3():
    m = cyclic_gap(2)
    v = verify_modular_embedding(m, principal_partition(m, None))
    assert v.conditions_hold
    assert not v.image_modular and not v.conclusion_holds


def test_embedding_on_balanced_circuits():
    for m in (theta_graph(), u14(), k_graph(4)):
        kf = principal_partition(m, None)
        v = verify_modular_embedding(m, kf)
        assert v.conditions_hold and v.conclusion_holds


def test_embedding_map_and_rho():
    m = theta_graph()
    kf = principal_partition(m, None)
    phi = embedding_map(m, kf)
    assert phi[-1] == m.closure(kf.support)
    rho = boolean_rho(kf)
    assert rho[0] == kf.ell - kf.k
    assert rho[-1] == m.rank(kf.support)


def test_embedding_agrees_with_balance_on_corpus():
    for m in small_corpus(60, 9):
        for k in (2, 3):
            for d in enumerate_kfold_circuits(m, k):
                kf = principal_partition(m, d)
                v = verify_modular_embedding(m, kf)
                assert v.conditions_hold
                assert v.image_modular == balance_report(m, kf).balanced


def test_embedding_capacity():
    m = uniform(1, 14)
    with pytest.raises(CapacityError):
        verify_modular_embedding(m, principal_partition(m, None))


def test_example_4_4_embedding_fails():
    m = linear_unbalanced()
    v = verify_modular_embedding(m, principal_partition(m, None))
    assert v.conditions_hold and not v.image_modular


# -- end to end ---------------------------------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4])
def test_pseudomodular_cycle_matroids_have_the_property(n):
    m = k_graph(n)
    assert is_pseudomodular(lattice_of_flats(m), "r").passed
    assert verify_kfold_property(m, 3).passed


@pytest.mark.parametrize("params", [(1, 1), (2, 1), (2, 2)])
def test_clique_lattice_check(params):
    v = clique_lattice_check(params, 3)
    assert v.passed and v.size == 15


def test_clique_lattice_check_range():
    with pytest.raises(DomainError):
        clique_lattice_check((2, 3), 3)


# -- export ---------------------------------------------------------------------------------------------


def test_json_and_dot_export():
    m = k_graph(3)
    lat = lattice_of_flats(m)
    out = lat.to_json(lambda e: list(m.elements(e)))
    assert out["elements"][0] == [] and out["functions"]["r"][-1] == 2
    assert len(out["covers"]) == 6
    json.dumps(out)
    dot = lat.to_dot()
    assert dot.startswith("digraph lattice {") and dot.count("->") == 6
