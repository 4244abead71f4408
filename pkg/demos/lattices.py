"""Pseudomodularity of lattices of flats and of the clique lattices behind
count matroids.

    python3 demos/lattices.py
"""
import itertools

from mkit import Multigraph, graphic
from mkit.lattice import clique_lattice_check, is_pseudomodular, lattice_of_flats, partial_partition_lattice


def k_graph(n):
    return graphic(Multigraph(n, tuple(itertools.combinations(range(n), 2))))


for n, mode in ((4, "exhaustive"), (5, "sampled")):
    lat = lattice_of_flats(k_graph(n))
    v = is_pseudomodular(lat, "r", mode, samples=100_000, seed=0)
    print(f"flats of M(K{n}): {len(lat)} elements, pseudomodular = {v.passed} ({v.mode}, {v.checked} triples)")

lat = partial_partition_lattice(4)
for f in ("nu", "r11"):
    v = is_pseudomodular(lat, f)
    print(f"partial partitions of 4 points ({len(lat)} elements): {f} pseudomodular = {v.passed}")

for params in ((1, 1), (2, 1), (2, 2), (3, 2)):
    v = clique_lattice_check(params, 3)
    print(f"M{params} on K_3: clique lattice check passed = {v.passed}")
