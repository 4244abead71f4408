"""Walk through the four graphs of double circuits in count matroids.

For each one: the order k, the principal partition, the rank of the
intersection flat against its upper bound l - k, and the technicolour
vertices (those touching two or more parts).

    python3 demos/double_circuits.py
"""
from pathlib import Path

from mkit import balance_report, principal_partition, technicolour_vertices
from mkit.document import load_document

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def show(name):
    doc = load_document(FIXTURES / f"{name}.json")
    m = doc.build()
    kf = principal_partition(m, m.mask(doc.subset))
    rep = balance_report(m, kf, check_pairs=True)
    print(f"{name}: {doc.description}")
    print(f"  k = {kf.k}, l = {kf.ell}, connected = {kf.connected}")
    for i, p in enumerate(kf.parts, 1):
        print(f"  A_{i} = {{{', '.join(m.elements(p))}}}")
    print(f"  r(F) = {rep.intersection_rank}, bound l - k = {rep.bound}, balanced = {rep.balanced}")
    print(f"  technicolour vertices: {sorted(technicolour_vertices(m, kf))}")
    print()


if __name__ == "__main__":
    for name in ("k4_disjoint_pair", "k4_vertex_pair", "k4_edge_pair", "k4_seven_parts"):
        show(name)
