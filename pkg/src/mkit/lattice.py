"""Finite lattices from matroids: flats, cyclic sets, modular pairs, pseudomodularity.

Elements are stored in a linear extension of the order (rank first), with the
order itself kept as two reachability bitsets per element.  The meet of x and
y is then the highest-indexed common lower bound and the join the
lowest-indexed common upper bound; ``validate`` confirms these really are
greatest/least.
"""
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .core import UnionFind, bits, check_capacity, mask_key, popcount
from .errors import CapacityError, DomainError, InvariantViolation

EXHAUSTIVE_LIMIT = 200
DEFAULT_SAMPLES = 100_000


class FiniteLattice:
    def __init__(self, elements, leq, functions=None, grading=None):
        """``elements`` must be listed in a linear extension of ``leq``."""
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        if n == 0:
            raise DomainError("a lattice needs at least one element")
        self.down = [0] * n
        self.up = [0] * n
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                if leq(x, y):
                    self.down[j] |= 1 << i
                    self.up[i] |= 1 << j
        for i in range(n):
            if self.down[i] >> (i + 1):
                raise DomainError("elements are not listed in a linear extension of the order")
        self.functions = {name: list(vals) for name, vals in (functions or {}).items()}
        self.grading = grading
        self._meet = self._join = None
        self._covers = None

    def __len__(self):
        return len(self.elements)

    @property
    def bottom(self):
        return 0

    @property
    def top(self):
        return len(self.elements) - 1

    def leq(self, i, j):
        return bool(self.down[j] >> i & 1)

    def meet(self, i, j):
        return (self.down[i] & self.down[j]).bit_length() - 1

    def join(self, i, j):
        common = self.up[i] & self.up[j]
        return (common & -common).bit_length() - 1

    def meet_table(self):
        if self._meet is None:
            n = len(self)
            self._meet = np.array([[self.meet(i, j) for j in range(n)] for i in range(n)], dtype=np.int32)
        return self._meet

    def join_table(self):
        if self._join is None:
            n = len(self)
            self._join = np.array([[self.join(i, j) for j in range(n)] for i in range(n)], dtype=np.int32)
        return self._join

    def function(self, name):
        try:
            return self.functions[name]
        except KeyError:
            raise DomainError(f"unknown lattice function {name!r}; have {sorted(self.functions)}") from None

    def add_function(self, name, values):
        values = list(values)
        if len(values) != len(self):
            raise DomainError("function needs one value per element")
        self.functions[name] = values

    def combine(self, name, coeffs):
        """Register sum(c * f) over ``coeffs`` = {function name: coefficient}."""
        vals = [0] * len(self)
        for f, c in coeffs.items():
            vals = [v + c * w for v, w in zip(vals, self.function(f))]
        self.add_function(name, vals)
        return name

    def covers(self):
        """Pairs (x, y) with y covering x."""
        if self._covers is None:
            out = []
            for x in range(len(self)):
                above = self.up[x] & ~(1 << x)
                for y in bits(above):
                    if self.down[y] & above == 1 << y:
                        out.append((x, y))
            self._covers = out
        return list(self._covers)

    def atoms(self):
        return [y for x, y in self.covers() if x == self.bottom]

    def validate(self):
        """Unique bottom/top, and meet/join are the greatest/least bounds."""
        n = len(self)
        full = (1 << n) - 1
        if self.up[0] != full or self.down[n - 1] != full:
            raise InvariantViolation("lattice lacks a unique bottom or top")
        for i in range(n):
            for j in range(i + 1, n):
                lower = self.down[i] & self.down[j]
                m = self.meet(i, j)
                if m < 0 or lower & ~self.down[m]:
                    raise InvariantViolation(f"elements {i}, {j} have no meet")
                upper = self.up[i] & self.up[j]
                jn = self.join(i, j)
                if jn < 0 or upper & ~self.up[jn]:
                    raise InvariantViolation(f"elements {i}, {j} have no join")
        return True

    def check_graded(self, name=None):
        r = self.function(name or self.grading)
        if r[self.bottom] != 0:
            return False
        return all(r[y] == r[x] + 1 for x, y in self.covers())

    def check_semimodular(self, name=None):
        r = self.function(name or self.grading)
        for i in range(len(self)):
            for j in range(i + 1, len(self)):
                if r[i] + r[j] < r[self.join(i, j)] + r[self.meet(i, j)]:
                    return False
        return True

    def check_atomistic(self):
        atoms = self.atoms()
        for x in range(len(self)):
            acc = self.bottom
            for a in atoms:
                if self.leq(a, x):
                    acc = self.join(acc, a)
            if acc != x:
                return False
        return True

    def check_geometric(self, name=None):
        name = name or self.grading
        return {"graded": self.check_graded(name), "atomistic": self.check_atomistic(),
                "semimodular": self.check_semimodular(name)}

    # -- export -------------------------------------------------------------

    def to_json(self, label=None):
        label = label or (lambda e: e)
        return {"elements": [label(e) for e in self.elements],
                "covers": [list(c) for c in self.covers()],
                "functions": {k: list(v) for k, v in sorted(self.functions.items())}}

    def to_dot(self, label=None, name="lattice"):
        label = label or str
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
        for i, e in enumerate(self.elements):
            text = json.dumps(label(e))
            lines.append(f"  n{i} [label={text}];")
        for x, y in self.covers():
            lines.append(f"  n{x} -> n{y};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _subset_lattice(masks, grading_values, grading_name):
    return FiniteLattice(masks, lambda x, y: x & y == x, {grading_name: grading_values}, grading_name)


def lattice_of_flats(m, check=True):
    """All flats of m under inclusion; meet = intersection, join = cl(union), grading r."""
    flats = m.flats()
    lat = _subset_lattice(flats, [m.rank(f) for f in flats], "r")
    lat.matroid = m
    if check:
        geo = lat.check_geometric()
        if not all(geo.values()):
            raise InvariantViolation(f"lattice of flats is not geometric: {geo}")
        for i, j in ((i, j) for i in range(len(lat)) for j in range(i + 1, len(lat))):
            if flats[lat.meet(i, j)] != flats[i] & flats[j] or \
                    flats[lat.join(i, j)] != m.closure(flats[i] | flats[j]):
                raise InvariantViolation("flat lattice operations disagree with intersection/closure")
    return lat


def cyclic_sets(m):
    """All cyclic sets: unions of circuits, plus the empty set."""
    check_capacity(m.n, "cyclic-set enumeration")
    circs = m.circuits()
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for d in frontier:
            for c in circs:
                u = d | c
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return sorted(seen, key=lambda d: (m.corank(d), mask_key(d)))


def cyclic_meet(m, d1, d2):
    """D ∧ D': the elements of D ∩ D' that are not coloops of it."""
    x = d1 & d2
    r = m.rank(x)
    out = 0
    for i in bits(x):
        if m.rank(x & ~(1 << i)) == r:
            out |= 1 << i
    return out


def lattice_of_cyclic_sets(m, check=True):
    """Cyclic sets under inclusion, graded by |D| - r(D).

    With ``check`` the meet/join are compared with the explicit formulas and
    complementation is confirmed to be an anti-isomorphism onto the flats of
    the dual, with r*(E) - r*(E - D) equal to the grading.
    """
    sets = cyclic_sets(m)
    lat = _subset_lattice(sets, [m.corank(d) for d in sets], "rho")
    lat.matroid = m
    if check:
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                if sets[lat.join(i, j)] != sets[i] | sets[j]:
                    raise InvariantViolation("join of cyclic sets is not their union")
                if sets[lat.meet(i, j)] != cyclic_meet(m, sets[i], sets[j]):
                    raise InvariantViolation("meet of cyclic sets disagrees with the coloop-free intersection")
        dual = m.dual()
        dual_flats = set(dual.flats())
        comp = {m.full & ~d for d in sets}
        if comp != dual_flats:
            raise InvariantViolation("complements of cyclic sets are not the flats of the dual")
        top = dual.rank()
        for d in sets:
            if m.corank(d) != top - dual.rank(m.full & ~d):
                raise InvariantViolation("cyclic grading does not match the dual flat grading")
    return lat


# -- modularity and pseudomodularity -----------------------------------------


def is_modular_pair(lat, f, x, y):
    r = lat.function(f)
    return r[x] + r[y] == r[lat.join(x, y)] + r[lat.meet(x, y)]


@dataclass
class LatticeVerdict:
    check: str
    passed: bool
    mode: str = "exhaustive"
    checked: int = 0
    witness: tuple = None
    detail: dict = field(default_factory=dict)

    def to_json(self, label=None):
        label = label or (lambda i: i)
        out = {"check": self.check, "passed": self.passed, "mode": self.mode, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = [label(i) for i in self.witness]
        if self.detail:
            out["detail"] = self.detail
        return out


def _pm_violations(r, J, M, xs, ys, zs):
    xz = J[xs, zs]
    yz = J[ys, zs]
    xy = J[xs, ys]
    xyz = J[xy, zs]
    inc = r[xz] - r[xs]
    hyp = (inc == r[yz] - r[ys]) & (inc == r[xyz] - r[xy])
    concl = r[M[xz, yz]] - r[M[xs, ys]] == inc
    return hyp & ~concl


def is_pseudomodular(lat, f, mode="exhaustive", samples=DEFAULT_SAMPLES, seed=0):
    """Check the diamond-prism condition on all triples (or a seeded sample).

    Whenever r(X∨Z)-r(X) = r(Y∨Z)-r(Y) = r(X∨Y∨Z)-r(X∨Y), require
    r((X∨Z)∧(Y∨Z)) - r(X∧Y) to equal that common increment.
    """
    r = np.array(lat.function(f), dtype=np.int64)
    n = len(lat)
    J, M = lat.join_table(), lat.meet_table()
    if mode == "exhaustive":
        if n > EXHAUSTIVE_LIMIT:
            raise CapacityError(f"exhaustive pseudomodularity needs at most {EXHAUSTIVE_LIMIT} elements, "
                                f"lattice has {n}; use sampled mode")
        ys, zs = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        ys, zs = ys.ravel(), zs.ravel()
        for x in range(n):
            xs = np.full_like(ys, x)
            bad = np.flatnonzero(_pm_violations(r, J, M, xs, ys, zs))
            if bad.size:
                b = bad[0]
                return LatticeVerdict("pseudomodular", False, mode, x * n * n + int(b) + 1,
                                      (x, int(ys[b]), int(zs[b])))
        return LatticeVerdict("pseudomodular", True, mode, n ** 3)
    if mode != "sampled":
        raise DomainError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    tri = rng.integers(0, n, size=(samples, 3))
    bad = np.flatnonzero(_pm_violations(r, J, M, tri[:, 0], tri[:, 1], tri[:, 2]))
    if bad.size:
        return LatticeVerdict("pseudomodular", False, mode, int(bad[0]) + 1,
                              tuple(int(v) for v in tri[bad[0]]))
    return LatticeVerdict("pseudomodular", True, mode, samples)


def diminishing_increments(lat, f):
    """First triple violating r(X∨Y∨Z) - r(X∨Y) <= r(X∨Z) - r(X), or None."""
    r = np.array(lat.function(f), dtype=np.int64)
    J = lat.join_table()
    n = len(lat)
    ys, zs = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ys, zs = ys.ravel(), zs.ravel()
    for x in range(n):
        xy = J[x, ys]
        bad = np.flatnonzero(r[J[xy, zs]] - r[xy] > r[J[x, zs]] - r[x])
        if bad.size:
            return x, int(ys[bad[0]]), int(zs[bad[0]])
    return None


def is_non_decreasing(lat, f):
    r = lat.function(f)
    return all(r[x] <= r[y] for x, y in lat.covers())


def is_modular_function(lat, f):
    return all(is_modular_pair(lat, f, i, j) for i in range(len(lat)) for j in range(i + 1, len(lat)))


def pseudomodular_sum_check(lat, f, g, coeffs=(1, 1), mode="exhaustive", seed=0):
    """c1*f + c2*g is pseudomodular whenever f and g are semimodular,
    non-decreasing and pseudomodular (positive coefficients).

    Precondition failures are reported with check="precondition" and never
    counted as a failure of the sum rule.
    """
    c1, c2 = coeffs
    if c1 < 0 or c2 < 0:
        raise DomainError("coefficients must be nonnegative")
    for h in (f, g):
        reasons = []
        if not lat.check_semimodular(h):
            reasons.append("not semimodular")
        if not is_non_decreasing(lat, h):
            reasons.append("not non-decreasing")
        pm = is_pseudomodular(lat, h, mode, seed=seed)
        if not pm.passed:
            reasons.append("not pseudomodular")
        if reasons:
            return LatticeVerdict("precondition", False, mode, witness=pm.witness,
                                  detail={"function": h, "reasons": reasons})
    name = f"{c1}*{f}+{c2}*{g}"
    lat.combine(name, {f: c1, g: c2})
    verdict = is_pseudomodular(lat, name, mode, seed=seed)
    verdict.check = "pseudomodular_sum"
    verdict.detail = {"function": name}
    if verdict.passed and diminishing_increments(lat, name) is not None:
        raise InvariantViolation("semimodular non-decreasing sum violates the increment inequality")
    return verdict


# -- modular embedding of a k-fold circuit ----------------------------------


@dataclass
class EmbeddingVerdict:
    meet_preserving: bool
    join_condition: bool
    rank_condition: bool
    homomorphism: bool
    rho_matches: bool
    image_modular: bool
    image_size: int

    @property
    def conditions_hold(self):
        return self.meet_preserving and self.join_condition and self.rank_condition

    @property
    def conclusion_holds(self):
        return self.homomorphism and self.rho_matches and self.image_modular

    def to_json(self):
        return {"meet_preserving": self.meet_preserving, "join_condition": self.join_condition,
                "rank_condition": self.rank_condition, "homomorphism": self.homomorphism,
                "rho_matches": self.rho_matches, "image_modular": self.image_modular,
                "image_size": self.image_size}


def boolean_rho(kf):
    """rho(I) = sum_{i in I} (|A_i| - 1) + l - k, for I a bitmask over part indices."""
    ell = kf.ell
    sizes = [popcount(p) - 1 for p in kf.parts]
    out = [0] * (1 << ell)
    for code in range(1 << ell):
        out[code] = sum(sizes[i] for i in range(ell) if code >> i & 1) + ell - kf.k
    return out


def embedding_map(m, kf):
    """phi(I) = intersection of cl(D - A_i) over i outside I; phi(L) = cl(D)."""
    ell = kf.ell
    closures = [m.closure(kf.support & ~p) for p in kf.parts]
    full = (1 << ell) - 1
    phi = [0] * (1 << ell)
    phi[full] = m.closure(kf.support)
    for code in range(full - 1, -1, -1):
        # add one missing index at a time: phi(I) = phi(I + i) ∩ cl(D - A_i)
        i = next(j for j in range(ell) if not code >> j & 1)
        above = code | (1 << i)
        phi[code] = closures[i] if above == full else phi[above] & closures[i]
    return phi


def verify_modular_embedding(m, kf, max_parts=12):
    """Check the local conditions (i)-(iii) on the canonical Boolean lattice of
    parts, then the global conclusions: phi is a lattice homomorphism into the
    flats, rho = r∘phi, and phi(K) is a modular sublattice."""
    ell = kf.ell
    if ell > max_parts:
        raise CapacityError(f"{ell} parts exceeds the embedding check bound {max_parts}")
    full = (1 << ell) - 1
    phi = embedding_map(m, kf)
    rho = boolean_rho(kf)
    codes = range(full + 1)
    meet_ok = all(phi[i & j] == phi[i] & phi[j] for i in codes for j in codes if i < j)
    join_ok = all(m.closure(phi[i] | phi[j]) == phi[full] for i in codes for j in codes
                  if i < j and i | j == full)
    rank_ok = all(rho[y] == m.rank(phi[y]) for y in codes if ell - popcount(y) <= 2)
    hom = meet_ok and all(m.closure(phi[i] | phi[j]) == phi[i | j] for i in codes for j in codes if i < j)
    rho_ok = all(rho[y] == m.rank(phi[y]) for y in codes)
    image = sorted(set(phi))
    image_set = set(image)
    modular = True
    for a, b in itertools.combinations(image, 2):
        meet, join = a & b, m.closure(a | b)
        if meet not in image_set or join not in image_set or \
                m.rank(a) + m.rank(b) != m.rank(meet) + m.rank(join):
            modular = False
            break
    return EmbeddingVerdict(meet_ok, join_ok, rank_ok, hom, rho_ok, modular, len(image))


# -- partial partitions and (a,b)-clique flats -----------------------------


def partial_partitions(n):
    """Every set of pairwise disjoint non-empty blocks of range(n)."""
    out = []

    def rec(i, blocks):
        if i == n:
            out.append(tuple(sorted(blocks)))
            return
        rec(i + 1, blocks)  # vertex i uncovered
        rec(i + 1, blocks + [1 << i])
        for b in range(len(blocks)):
            rec(i + 1, blocks[:b] + [blocks[b] | 1 << i] + blocks[b + 1:])

    rec(0, [])
    return out


def _refines(p, q):
    return all(any(b & c == b for c in q) for b in p)


def partial_partition_lattice(n):
    """Vertex-disjoint clique families on n labelled vertices.

    An element is a tuple of disjoint vertex blocks (single vertices allowed),
    ordered by block containment.  Functions: nu = covered vertices,
    r11 = covered vertices minus blocks (the cycle-matroid rank of the cliques).
    """
    pps = partial_partitions(n)
    pps.sort(key=lambda p: (sum(map(popcount, p)) - len(p), sum(map(popcount, p)), p))
    # nu and r11 both increase strictly along the order, so their sum gives a linear extension
    pps.sort(key=lambda p: 2 * sum(map(popcount, p)) - len(p))
    nu = [sum(map(popcount, p)) for p in pps]
    r11 = [v - len(p) for v, p in zip(nu, pps)]
    lat = FiniteLattice(pps, _refines, {"nu": nu, "r11": r11})
    return lat


def clique_edges(graph, block):
    """Edge mask of the induced subgraph of ``graph`` on the vertex bitmask ``block``."""
    mask = 0
    for i, (u, v) in enumerate(graph.edges):
        if block >> u & 1 and block >> v & 1:
            mask |= 1 << i
    return mask


@dataclass
class CliqueLatticeVerdict:
    params: tuple
    n: int
    size: int
    rank_identity: bool
    theta_meet: bool
    theta_join: bool
    image_flats: bool
    cyclic_flats_covered: bool
    pseudomodular: LatticeVerdict
    sum_rule: LatticeVerdict

    @property
    def passed(self):
        return (self.rank_identity and self.theta_meet and self.theta_join and self.image_flats
                and self.cyclic_flats_covered and self.pseudomodular.passed and self.sum_rule.passed)


def clique_lattice_check(params, n, mode="exhaustive", seed=0, cyclic_flats=True):
    """Replicate the clique-flat argument for M(a,b), 1 <= b <= a, on K_n^{a,b}.

    theta sends a block family to the union of (a,b)-cliques on its blocks.
    Checked: r_ab(theta P) = (a-b) nu(P) + b r11(P); theta preserves meets
    and joins into the flats of M(a,b); theta's image consists of flats and
    contains every cyclic flat; nu + r11 combination is pseudomodular.
    """
    from .count import CountParams, full_count_matroid

    p = params if isinstance(params, CountParams) else CountParams(*params)
    if not 1 <= p.b <= p.a:
        raise DomainError("clique lattice check needs 1 <= b <= a")
    m = full_count_matroid(p, n)
    lat = partial_partition_lattice(n)
    theta = []
    for pp in lat.elements:
        mask = 0
        for block in pp:
            mask |= clique_edges(m.graph, block)
        theta.append(mask)
    nu, r11 = lat.function("nu"), lat.function("r11")
    rank_ok = all(m.rank(t) == (p.a - p.b) * v + p.b * w for t, v, w in zip(theta, nu, r11))
    image_flats = all(m.is_flat(t) for t in theta)
    size = len(lat)
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    meet_ok = all(theta[lat.meet(i, j)] == theta[i] & theta[j] for i, j in pairs)
    join_ok = all(theta[lat.join(i, j)] == m.closure(theta[i] | theta[j]) for i, j in pairs)
    covered = True
    if cyclic_flats:
        image = set(theta)
        for d in cyclic_sets(m):
            if m.is_flat(d) and d not in image:
                covered = False
                break
    lat.combine("theta_rank", {"nu": p.a - p.b, "r11": p.b})
    pm = is_pseudomodular(lat, "theta_rank", mode, seed=seed)
    sum_rule = pseudomodular_sum_check(lat, "nu", "r11", (p.a - p.b, p.b), mode, seed)
    return CliqueLatticeVerdict((p.a, p.b), n, size, rank_ok, meet_ok, join_ok, image_flats,
                                covered, pm, sum_rule)
