"""k-fold circuits: principal partitions, ears, balancedness."""
import random
from dataclasses import dataclass, field

from .core import UnionFind, bits, check_capacity, mask_key, popcount, submasks
from .errors import CapacityError, DomainError, InvariantViolation

SCAN_LIMIT = 16
PAIR_CHECK_LIMIT = 8
MATCHING_FLAT_LIMIT = 8
MATCHING_GROUND_LIMIT = 12


@dataclass(frozen=True)
class KFoldCircuit:
    support: int
    k: int
    parts: tuple
    connected: bool

    @property
    def ell(self):
        return len(self.parts)

    def labelled(self, m):
        """Human-readable form: element tuples instead of masks."""
        return {"support": list(m.elements(self.support)), "k": self.k,
                "parts": [list(m.elements(p)) for p in self.parts],
                "connected": self.connected}


def kfold_order(m, s):
    """k = |s| - r(s) when s is cyclic, otherwise None."""
    mask = m._coerce(s)
    if not m.is_cyclic(mask):
        return None
    return m.corank(mask)


def _pair_partition(m, d):
    r = m.rank(d)
    idx = list(bits(d))
    uf = UnionFind(idx)
    for x, e in enumerate(idx):
        for f in idx[x + 1:]:
            if uf.find(e) != uf.find(f) and m.rank(d & ~(1 << e) & ~(1 << f)) == r - 1:
                uf.union(e, f)
    parts = []
    for cls in uf.classes():
        p = 0
        for i in cls:
            p |= 1 << i
        parts.append(p)
    return tuple(sorted(parts, key=mask_key))


def principal_partition(m, d, check=True):
    """Principal partition of the k-fold circuit d.

    Two elements share a part iff removing both drops the rank by exactly one
    (O(|d|^2) rank calls).  With ``check`` the result is validated against
    the structural invariants of a k-fold circuit.
    """
    mask = m._coerce(d)
    if mask == 0:
        raise DomainError("the empty set has no principal partition")
    if not m.is_cyclic(mask):
        raise DomainError(f"{m.elements(mask)} is not cyclic")
    k = m.corank(mask)
    parts = _pair_partition(m, mask)
    kf = KFoldCircuit(mask, k, parts, m.is_connected(mask))
    if check:
        _check_kfold(m, kf)
    return kf


def _check_kfold(m, kf):
    cover = 0
    for p in kf.parts:
        if p == 0 or p & cover:
            raise InvariantViolation("principal partition parts overlap or are empty")
        cover |= p
    if cover != kf.support:
        raise InvariantViolation("principal partition does not cover the support")
    if kf.ell < kf.k:
        raise InvariantViolation(f"partition has {kf.ell} parts for k = {kf.k}")
    for p in kf.parts:
        rest = kf.support & ~p
        if not m.is_cyclic(rest) or m.corank(rest) != kf.k - 1:
            raise InvariantViolation(f"D minus {m.elements(p)} is not a {kf.k - 1}-fold circuit")


def partition_by_subcircuits(m, d):
    """Principal partition from its definition: complements of the
    (k-1)-fold circuits inside d.  Exponential; used as a cross-check."""
    mask = m._coerce(d)
    k = kfold_order(m, mask)
    if k is None or mask == 0:
        raise DomainError("not a non-empty cyclic set")
    check_capacity(popcount(mask), "sub-circuit enumeration")
    parts = [mask & ~b for b in submasks(mask)
             if m.corank(b) == k - 1 and m.is_cyclic(b)]
    return tuple(sorted(parts, key=mask_key))


def is_trivial(kf, m=None):
    """True iff the partition has exactly k parts.

    With a matroid supplied, also confirms the consequences: each part is a
    circuit and the support splits as the direct sum of its parts.
    """
    trivial = kf.ell == kf.k
    if trivial and m is not None:
        for p in kf.parts:
            if not m.is_circuit(p):
                raise InvariantViolation(f"part {m.elements(p)} of a trivial k-fold circuit is not a circuit")
        if m.rank(kf.support) != sum(m.rank(p) for p in kf.parts):
            raise InvariantViolation("trivial k-fold circuit is not the direct sum of its parts")
    return trivial


# -- ear decompositions -----------------------------------------------------


@dataclass(frozen=True)
class EarDecomposition:
    circuits: tuple

    @property
    def unions(self):
        out, acc = [], 0
        for c in self.circuits:
            acc |= c
            out.append(acc)
        return tuple(out)

    @property
    def ears(self):
        out, acc = [], 0
        for c in self.circuits:
            out.append(c & ~acc)
            acc |= c
        return tuple(out)

    def __len__(self):
        return len(self.circuits)

    def check(self, m):
        """Verify (E1)-(E3) against all circuits of M|D and the rank increments."""
        d = self.unions[-1]
        allc = m.circuits(d)
        prev = self.circuits[0]
        for c, ear, cur in zip(self.circuits[1:], self.ears[1:], self.unions[1:]):
            if not c & prev:
                raise InvariantViolation("(E1) fails: circuit misses the earlier union")
            if not ear:
                raise InvariantViolation("(E2) fails: empty ear")
            for c2 in allc:
                e2 = c2 & ~prev
                if c2 & prev and e2 and e2 != ear and e2 & ear == e2:
                    raise InvariantViolation("(E3) fails: a smaller ear exists")
            if m.rank(cur) - m.rank(prev) != popcount(ear) - 1:
                raise InvariantViolation("rank increment differs from |ear| - 1")
            prev = cur
        return True


def ear_decomposition(m, d):
    """Ear decomposition of M|d for an M-connected cyclic set d.

    Starts from the lexicographically smallest circuit; each step takes,
    among circuits meeting the current union with an inclusion-minimal new
    part, the lexicographically smallest ear (then smallest circuit).
    """
    mask = m._coerce(d)
    if mask == 0:
        raise DomainError("the empty set has no ear decomposition")
    if not m.is_cyclic(mask):
        raise DomainError(f"{m.elements(mask)} is not cyclic")
    if not m.is_connected(mask):
        raise DomainError("set is not M-connected; decompose each component separately")
    allc = m.circuits(mask)
    chosen = [allc[0]]
    cur = allc[0]
    while cur != mask:
        cands = [(c & ~cur, c) for c in allc if c & cur and c & ~cur]
        ears = {e for e, _ in cands}
        minimal = [e for e in ears if not any(o != e and o & e == o for o in ears)]
        ear = min(minimal, key=mask_key)
        circ = min((c for e, c in cands if e == ear), key=mask_key)
        chosen.append(circ)
        cur |= circ
    return EarDecomposition(tuple(chosen))


# -- enumeration ------------------------------------------------------------


def cyclic_sets(m, k_max, within=None):
    """Yield (mask, k) for every non-empty cyclic subset of ``within`` with corank <= k_max."""
    region = m._coerce(within)
    check_capacity(popcount(region), "k-fold circuit enumeration")
    for s in submasks(region):
        if s and m.corank(s) <= k_max and m.is_cyclic(s):
            yield s, m.corank(s)


def _by_circuit_unions(m, k, region):
    # every k-fold circuit is D' ∪ C with D' a (k-1)-fold circuit and C a
    # circuit; dually, corank-k flats of M* are meets of k hyperplanes
    circs = m.circuits(region)
    layer = {0}
    for j in range(1, k + 1):
        nxt = set()
        for d in layer:
            for c in circs:
                u = d | c
                if u != d and u not in nxt and m.corank(u) == j:
                    nxt.add(u)
        layer = nxt
    return layer


def enumerate_kfold_circuits(m, k, within=None, strategy="auto"):
    """All k-fold circuits of m inside ``within`` (default E), sorted by mask order.

    ``strategy`` is "scan" (subset scan), "unions" (joins of circuits, the
    cyclic-set image of corank-k dual flats) or "auto" (scan up to 16 elements).
    """
    region = m._coerce(within)
    check_capacity(popcount(region), "k-fold circuit enumeration")
    if k == 0:
        return [0]
    if strategy == "auto":
        strategy = "scan" if popcount(region) <= SCAN_LIMIT else "unions"
    if strategy == "scan":
        found = [s for s, j in cyclic_sets(m, k, region) if j == k]
    elif strategy == "unions":
        found = sorted(_by_circuit_unions(m, k, region))
    else:
        raise DomainError(f"unknown strategy {strategy!r}")
    return sorted(found, key=mask_key)


# -- balancedness -----------------------------------------------------------


@dataclass
class BalanceReport:
    circuit: KFoldCircuit
    intersection_flat: int
    intersection_rank: int
    balanced: bool
    prefix_modular: bool
    pairs_modular: bool = None
    violating_modular_pair: tuple = None

    @property
    def bound(self):
        return self.circuit.ell - self.circuit.k

    def to_json(self, m):
        out = {"circuit": self.circuit.labelled(m),
               "intersection_flat": list(m.elements(self.intersection_flat)),
               "intersection_rank": self.intersection_rank,
               "bound": self.bound,
               "balanced": self.balanced,
               "prefix_modular": self.prefix_modular,
               "pairs_modular": self.pairs_modular}
        if self.violating_modular_pair is not None:
            parts, j = self.violating_modular_pair
            # 1-based, matching the part numbering A_1..A_l
            out["violating_modular_pair"] = {"I": [i + 1 for i in parts], "j": j + 1}
        return out


def _is_modular(m, x, y):
    return m.rank(x) + m.rank(y) == m.rank(m.closure(x | y)) + m.rank(x & y)


def part_closures(m, kf):
    return [m.closure(kf.support & ~p) for p in kf.parts]


def _pair_sweep(m, closures, rng):
    """First non-modular (I, j) in canonical order, or None.

    I runs over non-empty proper index subsets by bitmask value, j over
    indices outside I.  Above PAIR_CHECK_LIMIT parts only prefix pairs of
    seeded random orderings are examined.
    """
    ell = len(closures)
    if ell <= PAIR_CHECK_LIMIT:
        inter = {0: None}
        for code in range(1, (1 << ell) - 1):
            low = (code & -code).bit_length() - 1
            rest = code & (code - 1)
            inter[code] = closures[low] if rest == 0 else inter[rest] & closures[low]
            for j in range(ell):
                if not code >> j & 1 and not _is_modular(m, inter[code], closures[j]):
                    return tuple(i for i in range(ell) if code >> i & 1), j
        return None
    for _ in range(ell * ell):
        order = list(range(ell))
        rng.shuffle(order)
        acc = closures[order[0]]
        for n in range(1, ell):
            j = order[n]
            if not _is_modular(m, acc, closures[j]):
                return tuple(sorted(order[:n])), j
            acc &= closures[j]
    return None


def balance_report(m, kf, check_pairs=True, seed=0):
    """Rank of the intersection of the closures cl(D - A_i), against l - k.

    Raises InvariantViolation if the rank ever exceeds l - k.  The prefix
    modular-pair chain for the stored part order is always evaluated; with
    ``check_pairs`` every (I, j) pair is swept as well.
    """
    closures = part_closures(m, kf)
    inter = m.full
    for c in closures:
        inter &= c
    r = m.rank(inter)
    bound = kf.ell - kf.k
    if r > bound:
        raise InvariantViolation(f"intersection rank {r} exceeds l - k = {bound}")
    prefix = True
    acc = closures[0]
    for c in closures[1:]:
        if not _is_modular(m, acc, c):
            prefix = False
            break
        acc &= c
    report = BalanceReport(kf, inter, r, r == bound, prefix)
    if check_pairs:
        witness = _pair_sweep(m, closures, random.Random(seed))
        report.pairs_modular = witness is None
        if r != bound:
            report.violating_modular_pair = witness
    return report


@dataclass
class PropertyVerdict:
    k_max: int
    passed: bool
    counts: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)


def verify_kfold_property(m, k_max, within=None, check_pairs=False, strategy="auto"):
    """Check every k-fold circuit (1 <= k <= k_max) inside ``within`` for balance.

    Closures are always taken in m, so ``within`` only narrows which circuits
    are examined.
    """
    if k_max < 1:
        raise DomainError("k_max must be positive")
    region = m._coerce(within)
    counts = {}
    bad = []
    if strategy == "auto" and popcount(region) > SCAN_LIMIT:
        strategy = "unions"
    if strategy == "unions":
        found = [(d, k) for k in range(1, k_max + 1)
                 for d in enumerate_kfold_circuits(m, k, region, "unions")]
    else:
        found = sorted(cyclic_sets(m, k_max, region), key=lambda t: (t[1], mask_key(t[0])))
    for d, k in found:
        counts[k] = counts.get(k, 0) + 1
        if k == 1:
            continue  # a circuit is always balanced: cl(∅) has rank 0
        kf = principal_partition(m, d, check=False)
        rep = balance_report(m, kf, check_pairs=check_pairs)
        if not rep.balanced:
            if rep.violating_modular_pair is None and not check_pairs:
                rep = balance_report(m, kf, check_pairs=True)
            bad.append(rep)
    for k in range(1, k_max + 1):
        counts.setdefault(k, 0)
    return PropertyVerdict(k_max, not bad, dict(sorted(counts.items())), bad)


@dataclass
class ComposeVerdict:
    whole: BalanceReport
    components: list

    @property
    def consistent(self):
        return not all(c.balanced for c in self.components) or self.whole.balanced


def disconnected_compose_check(m, kf):
    """Balance of a disconnected k-fold circuit versus its M-connected components.

    Asserts only that balanced components force a balanced whole; an
    unbalanced component with a balanced whole is allowed.
    """
    if kf.connected:
        raise DomainError("k-fold circuit is connected")
    comps = []
    ksum = 0
    for comp in m.components(kf.support):
        sub = principal_partition(m, comp)
        ksum += sub.k
        comps.append(balance_report(m, sub))
    if ksum != kf.k:
        raise InvariantViolation(f"component orders sum to {ksum}, expected {kf.k}")
    verdict = ComposeVerdict(balance_report(m, kf), comps)
    if not verdict.consistent:
        raise InvariantViolation("all components balanced but the union is not")
    return verdict


# -- k-uniform matroid matching -------------------------------------------------


@dataclass
class MatchingInstance:
    matroid: object
    k: int
    flats: list
    exact_nu: int = None
    bound: int = None
    witness: tuple = None


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def exact_nu(m, k, flats):
    """Largest H' ⊆ H with r(∪H') = k|H'|.  Non-matchings are never extended,
    since adding a flat raises the rank by at most k."""
    best = ()
    level = [()]
    while level:
        nxt = []
        for combo in level:
            start = combo[-1] + 1 if combo else 0
            union = 0
            for i in combo:
                union |= flats[i]
            for j in range(start, len(flats)):
                if m.rank(union | flats[j]) == k * (len(combo) + 1):
                    nxt.append(combo + (j,))
        if nxt:
            best = nxt[0]
        level = nxt
    return len(best), best


def matching_upper_bound(inst):
    """Minimise r(Z) + Σ floor((r(Z ∪ ∪H_i) - r(Z)) / k) over flats Z and
    partitions (H_1..H_t) of H; also computes ν_k exactly and checks ν_k <= bound."""
    m, k, flats = inst.matroid, inst.k, [inst.matroid._coerce(f) for f in inst.flats]
    if len(flats) > MATCHING_FLAT_LIMIT or m.n > MATCHING_GROUND_LIMIT:
        raise CapacityError(f"matching bound search supports |H| <= {MATCHING_FLAT_LIMIT} and "
                            f"|E| <= {MATCHING_GROUND_LIMIT}, got {len(flats)} and {m.n}")
    for f in flats:
        if not m.is_flat(f) or m.rank(f) != k:
            raise DomainError(f"{m.elements(f)} is not a rank-{k} flat")
    parts_all = list(_set_partitions(list(range(len(flats)))))
    best = None
    for z in m.flats():
        rz = m.rank(z)
        cache = {}
        for part in parts_all:
            total = rz
            for block in part:
                key = tuple(block)
                if key not in cache:
                    u = z
                    for i in block:
                        u |= flats[i]
                    cache[key] = (m.rank(u) - rz) // k
                total += cache[key]
            if best is None or total < best[0]:
                best = (total, z, [list(b) for b in part])
    nu, chosen = exact_nu(m, k, flats)
    if best is None:
        best = (0, m.closure(0), [])
    if nu > best[0]:
        raise InvariantViolation(f"matching number {nu} exceeds the bound {best[0]}")
    inst.exact_nu = nu
    inst.bound = best[0]
    inst.witness = (best[1], best[2])
    return best[0], inst.witness
