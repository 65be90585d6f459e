"""Lines and planes in P^4 with canonical echelon representatives.

A line is stored as the reduced row echelon form of a 2x5 spanning matrix
plus its ten Pluecker coordinates p_ij (i < j, pair order (0,1), (0,2), ...,
(3,4)), normalized so the first nonzero one equals 1.  Representation
equality is subspace equality, which makes lines hashable census keys.
"""

from __future__ import annotations

from functools import lru_cache

from .linalg import (EchelonSpace, first_nonzero_normalize, kernel_space,
                     rref)

PAIRS = tuple((i, j) for i in range(5) for j in range(i + 1, 5))
PAIR_INDEX = {pair: k for k, pair in enumerate(PAIRS)}

# the five 3-term Pluecker relations, one per 4-subset of {0..4}
_QUADS = tuple((a, b, c, d)
               for a in range(5) for b in range(a + 1, 5)
               for c in range(b + 1, 5) for d in range(c + 1, 5))


class ProjLine:
    """A line in P^4: canonical 2x5 RREF span + normalized Plueckers."""

    __slots__ = ("field", "span", "pluecker")

    def __init__(self, field, span_rows, _validated=False):
        if _validated:
            self.field = field
            self.span = span_rows
        else:
            rank, _, rr = rref(field, [list(r) for r in span_rows], 5)
            if rank != 2:
                raise ValueError("spanning points do not span a line")
            self.field = field
            self.span = tuple(tuple(field.coerce(x) for x in row)
                              for row in rr)
        self.pluecker = _pluecker_of_span(field, self.span)

    @classmethod
    def from_points(cls, field, p, q):
        p = [field.coerce(x) for x in p]
        q = [field.coerce(x) for x in q]
        return cls(field, [p, q])

    @classmethod
    def from_pluecker(cls, field, ten):
        ten = [field.coerce(x) for x in ten]
        if all(field.is_zero(x) for x in ten):
            raise ValueError("zero Pluecker vector")
        _check_pluecker_relations(field, ten)
        # rows (p_{i a})_a and (p_{j a})_a span the line when p_ij != 0
        def entry(i, j):
            if i == j:
                return field.zero
            if i < j:
                return ten[PAIR_INDEX[(i, j)]]
            return field.neg(ten[PAIR_INDEX[(j, i)]])
        for (i, j) in PAIRS:
            if not field.is_zero(ten[PAIR_INDEX[(i, j)]]):
                row1 = [entry(i, a) for a in range(5)]
                row2 = [entry(j, a) for a in range(5)]
                line = cls(field, [row1, row2])
                got = first_nonzero_normalize(field, list(ten))
                if any(not field.eq(a, b)
                       for a, b in zip(line.pluecker, got)):
                    raise ValueError("Pluecker coordinates are inconsistent")
                return line
        raise ValueError("zero Pluecker vector")

    def points(self):
        """The two canonical spanning points (RREF rows)."""
        return self.span[0], self.span[1]

    def rational_points(self):
        """All |F| + 1 rational points, canonical representatives."""
        F = self.field
        if not F.is_finite:
            raise ValueError("rational point enumeration needs a finite field")
        P, Q = self.span
        out = []
        for tau in F.iter_elements():
            out.append(tuple(F.add(a, F.mul(tau, b)) for a, b in zip(P, Q)))
        out.append(Q)
        return out

    def point_at(self, s, t):
        F = self.field
        P, Q = self.span
        return tuple(F.add(F.mul(s, a), F.mul(t, b)) for a, b in zip(P, Q))

    def contains_point(self, x):
        F = self.field
        x = [F.coerce(v) for v in x]
        space = EchelonSpace(5, self.span, _span_pivots(F, self.span))
        return space.contains(F, x)

    def annihilator(self):
        """The 3-space of linear forms vanishing on the line (RREF rows)."""
        return kernel_space(self.field, [list(r) for r in self.span], 5)

    def key(self):
        F = self.field
        return tuple(tuple(F.sort_key(x) for x in row) for row in self.span)

    def __eq__(self, other):
        return (isinstance(other, ProjLine) and self.field == other.field
                and self.span == other.span)

    def __hash__(self):
        return hash(self.span)

    def __repr__(self):
        return f"ProjLine(span={self.span})"


def _span_pivots(field, span):
    pivots = []
    for row in span:
        for c, x in enumerate(row):
            if not field.is_zero(x):
                pivots.append(c)
                break
    return tuple(pivots)


def _pluecker_of_span(field, span):
    P, Q = span
    ten = []
    for (i, j) in PAIRS:
        ten.append(field.sub(field.mul(P[i], Q[j]), field.mul(P[j], Q[i])))
    return tuple(first_nonzero_normalize(field, ten))


def _check_pluecker_relations(field, ten):
    def p(i, j):
        if i == j:
            return field.zero
        if i < j:
            return ten[PAIR_INDEX[(i, j)]]
        return field.neg(ten[PAIR_INDEX[(j, i)]])
    for (a, b, c, d) in _QUADS:
        acc = field.mul(p(a, b), p(c, d))
        acc = field.sub(acc, field.mul(p(a, c), p(b, d)))
        acc = field.add(acc, field.mul(p(a, d), p(b, c)))
        if not field.is_zero(acc):
            raise ValueError("Pluecker relations violated")


class ProjPlane:
    """A plane in P^4: canonical 3x5 RREF span + the two cutting forms."""

    __slots__ = ("field", "span", "dual")

    def __init__(self, field, span_rows):
        rank, _, rr = rref(field, [list(r) for r in span_rows], 5)
        if rank != 3:
            raise ValueError("spanning points do not span a plane")
        self.field = field
        self.span = tuple(tuple(field.coerce(x) for x in row) for row in rr)
        ker = kernel_space(field, [list(r) for r in self.span], 5)
        self.dual = ker.rows          # two linear forms, RREF

    @classmethod
    def from_points(cls, field, p, q, r):
        return cls(field, [list(p), list(q), list(r)])

    @classmethod
    def from_dual_forms(cls, field, h1, h2):
        ker = kernel_space(field, [[field.coerce(x) for x in h1],
                                   [field.coerce(x) for x in h2]], 5)
        if ker.dim != 3:
            raise ValueError("forms do not cut a plane")
        return cls(field, [list(r) for r in ker.rows])

    def contains_line(self, line):
        F = self.field
        space = EchelonSpace(5, self.span, _span_pivots(F, self.span))
        return all(space.contains(F, list(row)) for row in line.span)

    def contains_point(self, x):
        F = self.field
        space = EchelonSpace(5, self.span, _span_pivots(F, self.span))
        return space.contains(F, [F.coerce(v) for v in x])

    def __eq__(self, other):
        return (isinstance(other, ProjPlane) and self.field == other.field
                and self.span == other.span)

    def __hash__(self):
        return hash(self.span)

    def __repr__(self):
        return f"ProjPlane(span={self.span})"


@lru_cache(maxsize=None)
def axis_plane(field, i, j):
    """The plane z_i = z_j = 0."""
    forms = []
    for a in (i, j):
        v = [field.zero] * 5
        v[a] = field.one
        forms.append(v)
    return ProjPlane.from_dual_forms(field, forms[0], forms[1])


def line_meets_plane(line, plane):
    """True when the line intersects the plane (in P^4 they may miss)."""
    F = line.field
    rows = [list(r) for r in line.span] + [list(r) for r in plane.span]
    rank, _, _ = rref(F, rows, 5)
    return rank <= 4
