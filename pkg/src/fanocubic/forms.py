"""Dense homogeneous forms in a fixed number of variables.

Coefficients are stored in *deglex* order: for fixed degree d the monomials
z0^e0 ... z_{n-1}^e_{n-1} with sum e_i = d are listed by exponent tuple
(e0, ..., e_{n-1}) in descending lexicographic order.  This is the file
interchange order; for degree 3 in five variables the full 35-entry table is

     0 (3,0,0,0,0) z0^3        12 (1,0,0,2,0) z0*z3^2    24 (0,1,0,0,2) z1*z4^2
     1 (2,1,0,0,0) z0^2*z1     13 (1,0,0,1,1) z0*z3*z4   25 (0,0,3,0,0) z2^3
     2 (2,0,1,0,0) z0^2*z2     14 (1,0,0,0,2) z0*z4^2    26 (0,0,2,1,0) z2^2*z3
     3 (2,0,0,1,0) z0^2*z3     15 (0,3,0,0,0) z1^3       27 (0,0,2,0,1) z2^2*z4
     4 (2,0,0,0,1) z0^2*z4     16 (0,2,1,0,0) z1^2*z2    28 (0,0,1,2,0) z2*z3^2
     5 (1,2,0,0,0) z0*z1^2     17 (0,2,0,1,0) z1^2*z3    29 (0,0,1,1,1) z2*z3*z4
     6 (1,1,1,0,0) z0*z1*z2    18 (0,2,0,0,1) z1^2*z4    30 (0,0,1,0,2) z2*z4^2
     7 (1,1,0,1,0) z0*z1*z3    19 (0,1,2,0,0) z1*z2^2    31 (0,0,0,3,0) z3^3
     8 (1,1,0,0,1) z0*z1*z4    20 (0,1,1,1,0) z1*z2*z3   32 (0,0,0,2,1) z3^2*z4
     9 (1,0,2,0,0) z0*z2^2     21 (0,1,1,0,1) z1*z2*z4   33 (0,0,0,1,2) z3*z4^2
    10 (1,0,1,1,0) z0*z2*z3    22 (0,1,0,2,0) z1*z3^2    34 (0,0,0,0,3) z4^3
    11 (1,0,1,0,1) z0*z2*z4    23 (0,1,0,1,1) z1*z3*z4

>>> exponents(5, 3)[0]
(3, 0, 0, 0, 0)
>>> exponents(5, 3)[9]
(1, 0, 2, 0, 0)
>>> exponents(5, 3)[-1]
(0, 0, 0, 0, 3)
>>> len(exponents(5, 3))
35

Forms are immutable; every operation returns a new HomForm.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .fields import scalar_pow


@lru_cache(maxsize=None)
def exponents(nvars, degree):
    """All exponent tuples of the given degree, descending lex."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for e0 in range(degree, -1, -1):
        for rest in exponents(nvars - 1, degree - e0):
            out.append((e0,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def exponent_index(nvars, degree):
    return {e: i for i, e in enumerate(exponents(nvars, degree))}


def space_dim(nvars, degree):
    return comb(degree + nvars - 1, nvars - 1)


@lru_cache(maxsize=None)
def multiplication_table(nvars, d1, d2):
    """Index map (i, j) -> k with monomial_i * monomial_j = monomial_k."""
    e1 = exponents(nvars, d1)
    e2 = exponents(nvars, d2)
    idx = exponent_index(nvars, d1 + d2)
    table = []
    for a in e1:
        row = []
        for b in e2:
            row.append(idx[tuple(x + y for x, y in zip(a, b))])
        table.append(tuple(row))
    return tuple(table)


class HomForm:
    """A homogeneous form of fixed degree with dense deglex coefficients."""

    __slots__ = ("field", "nvars", "degree", "coeffs")

    def __init__(self, field, nvars, degree, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != space_dim(nvars, degree):
            raise ValueError(
                f"need {space_dim(nvars, degree)} coefficients for degree "
                f"{degree} in {nvars} variables, got {len(coeffs)}")
        self.field = field
        self.nvars = nvars
        self.degree = degree
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field, nvars, degree):
        return cls(field, nvars, degree, [field.zero] * space_dim(nvars, degree))

    @classmethod
    def from_dict(cls, field, nvars, degree, terms):
        idx = exponent_index(nvars, degree)
        coeffs = [field.zero] * space_dim(nvars, degree)
        for expo, c in terms.items():
            coeffs[idx[tuple(expo)]] = field.add(coeffs[idx[tuple(expo)]],
                                                 field.coerce(c))
        return cls(field, nvars, degree, coeffs)

    @classmethod
    def monomial(cls, field, nvars, expo, coeff=None):
        expo = tuple(expo)
        degree = sum(expo)
        coeffs = [field.zero] * space_dim(nvars, degree)
        coeffs[exponent_index(nvars, degree)[expo]] = (
            field.one if coeff is None else field.coerce(coeff))
        return cls(field, nvars, degree, coeffs)

    @classmethod
    def variable(cls, field, nvars, i):
        expo = [0] * nvars
        expo[i] = 1
        return cls.monomial(field, nvars, expo)

    # -- basic structure ----------------------------------------------------

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, HomForm) and self.field == other.field
                and self.nvars == other.nvars and self.degree == other.degree
                and all(self.field.eq(a, b)
                        for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((self.nvars, self.degree, self.coeffs))

    def __add__(self, other):
        self._check_compatible(other)
        F = self.field
        return HomForm(F, self.nvars, self.degree,
                       [F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check_compatible(other)
        F = self.field
        return HomForm(F, self.nvars, self.degree,
                       [F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        F = self.field
        return HomForm(F, self.nvars, self.degree,
                       [F.neg(a) for a in self.coeffs])

    def scale(self, c):
        F = self.field
        c = F.coerce(c)
        return HomForm(F, self.nvars, self.degree,
                       [F.mul(c, a) for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, HomForm):
            return self.scale(other)
        if other.nvars != self.nvars or other.field != self.field:
            raise ValueError("incompatible forms")
        F = self.field
        table = multiplication_table(self.nvars, self.degree, other.degree)
        out = [F.zero] * space_dim(self.nvars, self.degree + other.degree)
        for i, a in enumerate(self.coeffs):
            if F.is_zero(a):
                continue
            row = table[i]
            for j, b in enumerate(other.coeffs):
                if not F.is_zero(b):
                    k = row[j]
                    out[k] = F.add(out[k], F.mul(a, b))
        return HomForm(F, self.nvars, self.degree + other.degree, out)

    def _check_compatible(self, other):
        if (self.nvars != other.nvars or self.degree != other.degree
                or self.field != other.field):
            raise ValueError("incompatible forms")

    # -- calculus and evaluation --------------------------------------------

    def partial(self, i):
        """Partial derivative with respect to variable i."""
        F = self.field
        if self.degree == 0:
            raise ValueError("cannot differentiate a constant form")
        out = [F.zero] * space_dim(self.nvars, self.degree - 1)
        tgt = exponent_index(self.nvars, self.degree - 1)
        for expo, c in zip(exponents(self.nvars, self.degree), self.coeffs):
            if expo[i] == 0 or F.is_zero(c):
                continue
            new = list(expo)
            new[i] -= 1
            k = tgt[tuple(new)]
            out[k] = F.add(out[k], F.mul(F.from_int(expo[i]), c))
        return HomForm(F, self.nvars, self.degree - 1, out)

    def gradient(self):
        return [self.partial(i) for i in range(self.nvars)]

    def evaluate(self, point):
        """Value at a point given as a scalar sequence."""
        F = self.field
        point = [F.coerce(x) for x in point]
        acc = F.zero
        for expo, c in zip(exponents(self.nvars, self.degree), self.coeffs):
            if F.is_zero(c):
                continue
            term = c
            for x, e in zip(point, expo):
                if e:
                    term = F.mul(term, scalar_pow(F, x, e))
            acc = F.add(acc, term)
        return acc

    # -- substitution -------------------------------------------------------

    def restrict(self, span_rows):
        """Pull back along the parametrization w -> sum_j w_j * span_rows[j].

        Returns a form of the same degree in len(span_rows) variables; with
        two rows this is restriction to a line, with three to a plane.
        """
        F = self.field
        m = len(span_rows)
        rows = [[F.coerce(x) for x in row] for row in span_rows]
        # linear forms in the new variables, one per old variable
        lin = []
        for i in range(self.nvars):
            lin.append([rows[j][i] for j in range(m)])
        out = [F.zero] * space_dim(m, self.degree)
        tgt = exponent_index(m, self.degree)
        lin_cache = {}
        for expo, c in zip(exponents(self.nvars, self.degree), self.coeffs):
            if F.is_zero(c):
                continue
            prod = {(0,) * m: F.one}
            for i, e in enumerate(expo):
                if e == 0:
                    continue
                key = (i, e)
                if key not in lin_cache:
                    lin_cache[key] = _linear_power(F, m, lin[i], e)
                prod = _dict_mul(F, m, prod, lin_cache[key])
            for mono, v in prod.items():
                k = tgt[mono]
                out[k] = F.add(out[k], F.mul(c, v))
        return HomForm(F, m, self.degree, out)

    def substitute_linear(self, matrix):
        """f(M z) for an invertible nvars x nvars matrix M (rows)."""
        from .linalg import rank_of
        F = self.field
        M = [[F.coerce(x) for x in row] for row in matrix]
        if len(M) != self.nvars or any(len(r) != self.nvars for r in M):
            raise ValueError("matrix shape mismatch")
        if rank_of(F, M, self.nvars) != self.nvars:
            raise ValueError("singular substitution matrix")
        # z_i -> sum_j M[i][j] z_j, i.e. restrict along the transposed rows
        cols = [[M[i][j] for i in range(self.nvars)] for j in range(self.nvars)]
        return self.restrict(cols)

    # -- misc ---------------------------------------------------------------

    def normalized(self):
        """Scale so the first nonzero deglex coefficient is 1."""
        F = self.field
        for c in self.coeffs:
            if not F.is_zero(c):
                return self.scale(F.inv(c))
        raise ValueError("cannot normalize the zero form")

    def map_coefficients(self, fn, new_field):
        return HomForm(new_field, self.nvars, self.degree,
                       [fn(c) for c in self.coeffs])

    def support(self):
        F = self.field
        return [e for e, c in zip(exponents(self.nvars, self.degree),
                                  self.coeffs) if not F.is_zero(c)]

    def __repr__(self):
        from .parser import form_to_text
        try:
            return f"HomForm({form_to_text(self)})"
        except Exception:
            return (f"HomForm(nvars={self.nvars}, degree={self.degree}, "
                    f"coeffs={self.coeffs})")


def _linear_power(F, m, lin, e):
    """(sum lin_j w_j)^e as a dict exponent tuple -> scalar."""
    acc = {(0,) * m: F.one}
    base = {}
    for j, c in enumerate(lin):
        if not F.is_zero(c):
            key = tuple(1 if t == j else 0 for t in range(m))
            base[key] = c
    for _ in range(e):
        acc = _dict_mul(F, m, acc, base)
    return acc


def _dict_mul(F, m, d1, d2):
    out = {}
    for e1, c1 in d1.items():
        for e2, c2 in d2.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            v = F.mul(c1, c2)
            if key in out:
                out[key] = F.add(out[key], v)
            else:
                out[key] = v
    return {k: v for k, v in out.items() if not F.is_zero(v)}


def poly_matrix_det(entries, zero_form):
    """Determinant of a small square matrix of HomForms (Laplace expansion)."""
    n = len(entries)
    if n == 1:
        return entries[0][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        sub = poly_matrix_det(minor, zero_form)
        term = entries[0][j] * sub
        if j % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else zero_form


def random_form(field, nvars, degree, rng):
    """Uniform random dense form (small integer coefficients over QQ)."""
    n = space_dim(nvars, degree)
    return HomForm(field, nvars, degree,
                   [field.random_element(rng) for _ in range(n)])
