"""Rank-oracle matroids over finite ground sets.

Subsets are passed around as integer bitmasks over the ground set's declared
order (bit ``i`` set means the ``i``-th element is present).  Every public
method that takes a subset also accepts an iterable of element labels; a bare
``int`` is always read as a mask.
"""
import os
import threading

from .errors import CapacityError, DomainError

DEFAULT_MAX_GROUND = 20


def max_ground():
    """Enumeration bound on |E|, overridable through ``MKIT_MAX_GROUND``."""
    value = os.environ.get("MKIT_MAX_GROUND")
    if value is None:
        return DEFAULT_MAX_GROUND
    try:
        bound = int(value)
    except ValueError:
        raise DomainError(f"MKIT_MAX_GROUND must be an integer, got {value!r}") from None
    if bound < 0:
        raise DomainError("MKIT_MAX_GROUND must be nonnegative")
    return bound


def popcount(mask):
    return bin(mask).count("1")


def bits(mask):
    """Indices of the set bits of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def submasks(mask):
    """All submasks of ``mask``, in increasing numeric order."""
    positions = list(bits(mask))
    for code in range(1 << len(positions)):
        sub = 0
        j = 0
        while code:
            if code & 1:
                sub |= 1 << positions[j]
            code >>= 1
            j += 1
        yield sub


def mask_key(mask):
    """Sort key ordering masks lexicographically by their sorted index tuples."""
    return tuple(bits(mask))


def check_capacity(size, what="enumeration"):
    bound = max_ground()
    if size > bound:
        raise CapacityError(
            f"{what} over {size} elements exceeds the enumeration bound {bound} "
            "(set MKIT_MAX_GROUND to raise it)")


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the smaller representative so classes come out ordered
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx

    def classes(self):
        groups = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return [groups[k] for k in sorted(groups)]


class Matroid:
    """A matroid given by a rank oracle.

    Subclasses implement ``_rank(mask)``.  Results are memoised per instance;
    the memo only ever caches values the oracle returned, so it is invisible to
    callers.  Instances are immutable after construction and safe to query
    from several threads (a racing duplicate evaluation stores the same value).
    """

    def __init__(self, ground):
        ground = tuple(ground)
        index = {}
        for i, e in enumerate(ground):
            if e in index:
                raise DomainError(f"duplicate ground-set element {e!r}")
            index[e] = i
        self.ground = ground
        self._index = index
        self.n = len(ground)
        self.full = (1 << self.n) - 1
        self._memo = {}
        self._lock = threading.Lock()
        self._circuit_cache = {}

    def __repr__(self):
        return f"<{type(self).__name__} on {self.n} elements, rank {self.rank()}>"

    # -- subset plumbing ----------------------------------------------------

    def mask(self, elements):
        m = 0
        for e in elements:
            try:
                m |= 1 << self._index[e]
            except (KeyError, TypeError):
                raise DomainError(f"{e!r} is not in the ground set") from None
        return m

    def elements(self, mask):
        return tuple(self.ground[i] for i in bits(mask))

    def index(self, element):
        try:
            return self._index[element]
        except (KeyError, TypeError):
            raise DomainError(f"{element!r} is not in the ground set") from None

    def _coerce(self, s):
        if s is None:
            return self.full
        if isinstance(s, int) and not isinstance(s, bool):
            if s < 0 or s & ~self.full:
                raise DomainError(f"mask {s:#x} has bits outside the ground set")
            return s
        return self.mask(s)

    # -- rank and friends ---------------------------------------------------

    def _rank(self, mask):
        raise NotImplementedError

    def rank(self, s=None):
        mask = self._coerce(s)
        try:
            return self._memo[mask]
        except KeyError:
            pass
        value = self._rank(mask)
        with self._lock:
            self._memo[mask] = value
        return value

    def dual_rank(self, s=None):
        mask = self._coerce(s)
        return self.rank(self.full ^ mask) + popcount(mask) - self.rank(self.full)

    def corank(self, s=None):
        """|S| - r(S), the nullity of S."""
        mask = self._coerce(s)
        return popcount(mask) - self.rank(mask)

    def is_independent(self, s):
        mask = self._coerce(s)
        return self.rank(mask) == popcount(mask)

    def closure(self, s):
        mask = self._coerce(s)
        r = self.rank(mask)
        cl = mask
        for i in range(self.n):
            bit = 1 << i
            if not mask & bit and self.rank(mask | bit) == r:
                cl |= bit
        return cl

    def is_flat(self, s):
        mask = self._coerce(s)
        return self.closure(mask) == mask

    def is_cyclic(self, s):
        mask = self._coerce(s)
        r = self.rank(mask)
        return all(self.rank(mask ^ (1 << i)) == r for i in bits(mask))

    def is_circuit(self, s):
        mask = self._coerce(s)
        size = popcount(mask)
        if size == 0 or self.rank(mask) != size - 1:
            return False
        return all(self.rank(mask ^ (1 << i)) == size - 1 for i in bits(mask))

    # -- enumeration --------------------------------------------------------

    def circuits(self, s=None):
        """All circuits contained in ``s`` (default: E), as sorted masks.

        Level-wise search: a set of size t is generated from an independent
        set of size t-1 by appending an element of larger index, so only
        independent sets are ever extended.
        """
        mask = self._coerce(s)
        if mask in self._circuit_cache:
            return list(self._circuit_cache[mask])
        check_capacity(popcount(mask), "circuit enumeration")
        positions = list(bits(mask))
        found = []
        level = [(0, -1)]  # (independent mask, position index of its top element)
        size = 0
        while level:
            size += 1
            nxt = []
            for ind, top in level:
                for j in range(top + 1, len(positions)):
                    cand = ind | (1 << positions[j])
                    if self.rank(cand) == size:
                        nxt.append((cand, j))
                    elif all(self.rank(cand ^ (1 << i)) == size - 1 for i in bits(cand)):
                        found.append(cand)
            level = nxt
        found.sort(key=mask_key)
        self._circuit_cache[mask] = tuple(found)
        return found

    def components(self, s=None):
        """Connected components of M|s as a list of masks, ordered by least element.

        Uses the fundamental circuits of a greedy basis B of s: two elements
        lie in a common component iff they are joined by a chain of
        fundamental circuits, so only O(|s| r(s)) rank calls are needed.
        """
        mask = self._coerce(s)
        uf = UnionFind(list(bits(mask)))
        basis = 0
        rest = []
        for i in bits(mask):
            if self.rank(basis | (1 << i)) > popcount(basis):
                basis |= 1 << i
            else:
                rest.append(i)
        r = popcount(basis)
        for e in rest:
            for b in bits(basis):
                if self.rank(basis ^ (1 << b) | (1 << e)) == r:
                    uf.union(e, b)
        parts = []
        for cls in uf.classes():
            m = 0
            for i in cls:
                m |= 1 << i
            parts.append(m)
        parts.sort(key=lambda m: m & -m)
        return parts

    def is_connected(self, s=None):
        return len(self.components(s)) <= 1

    def flats(self):
        """All flats, grown upward from cl(∅) by closing F + e."""
        check_capacity(self.n, "flat enumeration")
        bottom = self.closure(0)
        seen = {bottom}
        frontier = [bottom]
        while frontier:
            nxt = []
            for f in frontier:
                for i in range(self.n):
                    if not f >> i & 1:
                        g = self.closure(f | (1 << i))
                        if g not in seen:
                            seen.add(g)
                            nxt.append(g)
            frontier = nxt
        return sorted(seen, key=lambda f: (self.rank(f), mask_key(f)))

    # -- derived matroids ---------------------------------------------------

    def restrict(self, s):
        return Restriction(self, self._coerce(s))

    def dual(self):
        return DualMatroid(self)

    def relabel(self, mapping):
        """Same matroid with element ``e`` renamed ``mapping.get(e, e)``."""
        return Relabeled(self, [mapping.get(e, e) for e in self.ground])

    def check_axioms(self, pairs=None):
        """Check the rank axioms; exhaustive over all subset pairs by default.

        ``pairs`` may be an iterable of (S, T) mask pairs to restrict the
        submodularity sweep.  Raises DomainError naming the first failure.
        """
        if self.rank(0) != 0:
            raise DomainError("rank of the empty set is not 0")
        masks = range(self.full + 1) if self.n <= 12 else ()
        for s in masks:
            r = self.rank(s)
            for i in range(self.n):
                bit = 1 << i
                if not s & bit:
                    rr = self.rank(s | bit)
                    if not r <= rr <= r + 1:
                        raise DomainError(f"unit-increase/monotonicity fails at {self.elements(s)} + "
                                          f"{self.ground[i]!r}")
        if pairs is None:
            pairs = ((s, t) for s in masks for t in masks if s < t)
        for s, t in pairs:
            if self.rank(s) + self.rank(t) < self.rank(s | t) + self.rank(s & t):
                raise DomainError(f"submodularity fails on {self.elements(s)}, {self.elements(t)}")
        return True


class RankFunctionMatroid(Matroid):
    """Matroid from an arbitrary callable ``rank_fn(mask) -> int``."""

    def __init__(self, ground, rank_fn):
        super().__init__(ground)
        self._fn = rank_fn

    def _rank(self, mask):
        return self._fn(mask)


class Restriction(Matroid):
    def __init__(self, parent, mask):
        self.parent = parent
        self.positions = list(bits(mask))
        super().__init__(parent.ground[i] for i in self.positions)

    def to_parent(self, mask):
        pm = 0
        for i in bits(mask):
            pm |= 1 << self.positions[i]
        return pm

    def _rank(self, mask):
        return self.parent.rank(self.to_parent(mask))


class DualMatroid(Matroid):
    def __init__(self, parent):
        self.parent = parent
        super().__init__(parent.ground)

    def _rank(self, mask):
        return self.parent.dual_rank(mask)

    def dual(self):
        return self.parent


class Relabeled(Matroid):
    def __init__(self, parent, ground):
        self.parent = parent
        super().__init__(ground)
        if self.n != parent.n:
            raise DomainError("relabelling must be a bijection")

    def _rank(self, mask):
        return self.parent.rank(mask)
