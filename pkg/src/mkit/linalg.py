"""Exact linear algebra over Q (Fractions) and prime fields GF(p)."""
from fractions import Fraction

from .errors import DomainError


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Rational field when ``p`` is None, otherwise GF(p)."""

    def __init__(self, p=None):
        if p is not None and not is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return "Field(Q)" if self.p is None else f"Field(GF({self.p}))"

    def coerce(self, x):
        if self.p is None:
            if isinstance(x, float):
                raise DomainError("floating point entries are not allowed; use 'p/q' strings")
            try:
                return Fraction(x)
            except (ValueError, TypeError, ZeroDivisionError):
                raise DomainError(f"cannot read {x!r} as a rational") from None
        if isinstance(x, str):
            frac = Fraction(x)
            if frac.denominator % self.p == 0:
                raise DomainError(f"{x!r} has no value mod {self.p}")
            return frac.numerator * pow(frac.denominator, -1, self.p) % self.p
        if not isinstance(x, int) or isinstance(x, bool):
            raise DomainError(f"cannot read {x!r} as an element of GF({self.p})")
        return x % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def reduce(self, x):
        return x if self.p is None else x % self.p


def row_reduce(rows, field):
    """Reduced row echelon form of a list of row vectors.

    Returns (rref_rows, pivot_columns); zero rows are dropped.
    """
    a = [list(r) for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.reduce(x * inv) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [field.reduce(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(vectors, field):
    """Rank of a list of vectors (all the same length)."""
    vectors = list(vectors)
    if not vectors:
        return 0
    return len(row_reduce(vectors, field)[1])


def span_basis(vectors, field):
    return row_reduce(list(vectors), field)[0]


def nullspace(rows, ncols, field):
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    red, pivots = row_reduce(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.coerce(0)] * ncols
        x[f] = field.coerce(1)
        for row, pc in zip(red, pivots):
            x[pc] = field.reduce(-row[f])
        basis.append(x)
    return basis


def intersect_spans(spans, field):
    """Basis of the intersection of the spans of several vector lists.

    Pairwise: if U has basis B and W has basis C, the solutions (x, y) of
    B^T x = C^T y give U ∩ W = {B^T x}.
    """
    if not spans:
        raise DomainError("need at least one family of vectors")
    current = span_basis(spans[0], field)
    for other in spans[1:]:
        other = span_basis(other, field)
        if not current or not other:
            return []
        dim = len(current[0])
        # columns: current vectors, then negated other vectors
        system = [[current[i][d] for i in range(len(current))]
                  + [field.reduce(-other[j][d]) for j in range(len(other))]
                  for d in range(dim)]
        sols = nullspace(system, len(current) + len(other), field)
        vecs = []
        for s in sols:
            v = [field.coerce(0)] * dim
            for i, coef in enumerate(s[:len(current)]):
                if coef != 0:
                    v = [field.reduce(a + coef * b) for a, b in zip(v, current[i])]
            vecs.append(v)
        current = span_basis(vecs, field)
    return current
