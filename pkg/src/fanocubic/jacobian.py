"""The graded ring of a cubic threefold modulo its partial derivatives.

For a cubic E in five variables the partials generate a graded ideal J; the
quotient R = S/J is Artinian exactly when the cubic is smooth, with graded
dimensions (1, 5, 10, 10, 5, 1) and a one-dimensional top piece in degree 5
realizing all multiplication pairings.  This module builds that structure
with canonical monomial coset bases (the deglex-earliest monomials
completing each graded ideal piece) and implements the degree-3
multiplication operators whose kernels cut out the second-type line locus.

Smoothness is decided by the socle criterion: the graded profile matches and
the degree-6 piece of the ideal is everything.  The degree-6 statement is
equivalent to the partials having no common projective zero (Macaulay's
bound: five quadrics in five variables are a regular sequence iff they span
everything in degree 6), so no elimination theory is needed.

Rank computations over the rationals run on integer matrices via
fraction-free elimination; the single large matrix (degree 6: 350 x 210) is
instead certified full rank by a reduction mod p whenever possible, which is
exact in that direction since ranks can only drop under reduction.
"""

from __future__ import annotations

import numpy as np

from .fields import PrimeField, RationalField
from .forms import HomForm, exponent_index, exponents, multiplication_table, space_dim
from .linalg import (EchelonSpace, ReversedEchelon, first_nonzero_normalize,
                     int_forward_eliminate, kernel_space, matmul, matvec,
                     np_rank_mod_p, rref, rank_of)
from .lines import ProjLine

SMOOTH_PROFILE = (1, 5, 10, 10, 5, 1)

_CERT_PRIMES = (1048573, 1048571, 1048559)   # < 2^20, for int64-safe numpy


class _FullIdeal:
    """Stand-in for the reversed echelon of a full graded piece J_k = S^k."""

    def __init__(self, field, ncols):
        self.field = field
        self.ncols = ncols
        self.rank = ncols
        self.quotient = []

    def reduce(self, vec):
        return [self.field.zero] * self.ncols

    def coords(self, vec):
        return []


class CubicContext:
    """A cubic form with its graded Jacobian ideal and quotient data."""

    def __init__(self, E, allow_small_characteristic=False):
        if not isinstance(E, HomForm) or E.nvars != 5 or E.degree != 3:
            raise ValueError("expected a cubic form in five variables")
        if E.is_zero():
            raise ValueError("the zero cubic has no Jacobian ring")
        char = E.field.characteristic
        if char in (2, 3) and not allow_small_characteristic:
            raise ValueError("characteristic 2 and 3 rejected by default")
        self.field = E.field
        self.E = E
        self.partials = E.gradient()
        self._ranks = {}
        self._reds = {}
        self._np = {}
        self.dims = tuple(space_dim(5, k) - self._jrank(k) for k in range(7))
        self.smooth = (self.dims[:6] == SMOOTH_PROFILE and self.dims[6] == 0)

    # -- graded ideal pieces --------------------------------------------------

    def _jrows(self, k):
        """Spanning rows of J_k inside S^k (coefficient vectors)."""
        if k < 2:
            return []
        F = self.field
        n_k = space_dim(5, k)
        table = multiplication_table(5, k - 2, 2)
        rows = []
        zero = [F.zero] * n_k
        for mi in range(space_dim(5, k - 2)):
            trow = table[mi]
            for g in self.partials:
                row = zero[:]
                for j, c in enumerate(g.coeffs):
                    if not F.is_zero(c):
                        row[trow[j]] = F.add(row[trow[j]], c)
                rows.append(row)
        return rows

    def _jrank(self, k):
        if k in self._ranks:
            return self._ranks[k]
        if k < 2:
            r = 0
        else:
            rows = self._jrows(k)
            n_k = space_dim(5, k)
            if isinstance(self.field, RationalField) and k == 6:
                r = self._rational_rank_with_certificate(rows, n_k)
            else:
                r = rank_of(self.field, rows, n_k)
        self._ranks[k] = r
        return r

    def _rational_rank_with_certificate(self, rows, ncols):
        """Exact rank over QQ, cheaply certified when full.

        rank mod p <= rank over QQ always, so a full-rank reduction proves
        full rank; otherwise fall back to exact integer elimination.
        """
        int_rows = [_primitive_int_row(r) for r in rows]
        for p in _CERT_PRIMES:
            A = np.array(int_rows, dtype=np.int64) % p
            if np_rank_mod_p(A, p) == ncols:
                return ncols
        return int_forward_eliminate([list(r) for r in int_rows], ncols)[0]

    def _jred(self, k):
        """Reversed-order echelon of J_k: canonical quotient data."""
        if k in self._reds:
            return self._reds[k]
        n_k = space_dim(5, k)
        if k < 2:
            red = ReversedEchelon(self.field, [], n_k)
        elif (isinstance(self.field, RationalField)
              and self._jrank(k) == n_k and k == 6):
            red = _FullIdeal(self.field, n_k)
        else:
            red = ReversedEchelon(self.field, self._jrows(k), n_k)
            assert red.rank == self._jrank(k)
        self._reds[k] = red
        return red

    def J_space(self, k):
        """The graded ideal piece as a standard RREF EchelonSpace."""
        if k < 2:
            return EchelonSpace(space_dim(5, k), (), ())
        return EchelonSpace.from_vectors(self.field, self._jrows(k),
                                         space_dim(5, k))

    # -- quotient bases and reductions ----------------------------------------

    def basis_indices(self, k):
        """Deglex-earliest monomial indices completing J_k, a basis of R^k."""
        return list(self._jred(k).quotient)

    def basis_exponents(self, k):
        expo = exponents(5, k)
        return [expo[i] for i in self.basis_indices(k)]

    def reduce_coords(self, f):
        """Coordinates of the coset of f in the canonical basis of R^deg."""
        if f.field != self.field or f.nvars != 5:
            raise ValueError("form not over this context")
        return self._jred(f.degree).coords(f.coeffs)

    def reduce_form(self, f):
        """The canonical coset representative (normal form) of f."""
        coeffs = self._jred(f.degree).reduce(f.coeffs)
        return HomForm(self.field, 5, f.degree, coeffs)

    def socle_index(self):
        """Monomial index of the canonical basis of R^5."""
        if self.dims[5] != 1:
            raise ValueError("degree-5 piece is not one-dimensional")
        return self.basis_indices(5)[0]

    def socle_coeff(self, f):
        """Coordinate of a degree-5 form in the socle basis."""
        if f.degree != 5:
            raise ValueError("socle coordinates need a degree-5 form")
        return self.reduce_coords(f)[0]

    def socle_form(self):
        expo = exponents(5, 5)[self.socle_index()]
        return HomForm.monomial(self.field, 5, expo)

    # -- numpy caches for prime-field hot paths --------------------------------

    def _np_cache(self, key, builder):
        if key not in self._np:
            self._np[key] = builder()
        return self._np[key]

    @property
    def _is_np(self):
        return isinstance(self.field, PrimeField) and self.field.p < (1 << 20)

    def np_reduction(self, k):
        """Reduction matrix R^k-coords x S^k as an int64 array (prime p)."""
        def build():
            mat = self._jred(k).reduction_matrix()
            return np.array(mat, dtype=np.int64) % self.field.p
        return self._np_cache(("red", k), build)

    def np_partials(self):
        def build():
            return np.array([[int(c) for c in g.coeffs]
                             for g in self.partials], dtype=np.int64)
        return self._np_cache(("partials",), build)

    def np_delta_tensor(self):
        """T with shape (5, dim R^4, 35): column a of delta(xi) = T[a] @ xi."""
        def build():
            p = self.field.p
            red4 = self.np_reduction(4)
            table = multiplication_table(5, 1, 3)
            out = np.zeros((5, red4.shape[0], 35), dtype=np.int64)
            for a in range(5):
                shift = np.zeros((70, 35), dtype=np.int64)
                for j in range(35):
                    shift[table[a][j], j] = 1
                out[a] = (red4 @ shift) % p
            return out
        return self._np_cache(("delta",), build)

    def np_deg2_socle(self):
        """Matrix (15, 35): row m = socle coefficient of (monomial_m * xi)."""
        def build():
            p = self.field.p
            red5 = self.np_reduction(5)
            table = multiplication_table(5, 2, 3)
            out = np.zeros((15, 35), dtype=np.int64)
            for m in range(15):
                shift = np.zeros((126, 35), dtype=np.int64)
                for j in range(35):
                    shift[table[m][j], j] = 1
                out[m] = (red5 @ shift) % p
            return out
        return self._np_cache(("soc2",), build)

    def __repr__(self):
        return (f"CubicContext(field={self.field!r}, dims={self.dims}, "
                f"smooth={self.smooth})")


def _primitive_int_row(row):
    from fractions import Fraction
    from math import gcd
    fr = [x if isinstance(x, Fraction) else Fraction(x) for x in row]
    denom = 1
    for x in fr:
        if x:
            denom = denom // gcd(denom, x.denominator) * x.denominator
    ints = [int(x * denom) for x in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def build_context(E, allow_small_characteristic=False):
    """Build the graded ring data for a cubic form."""
    return CubicContext(E, allow_small_characteristic)


class XiClass:
    """A degree-3 class with its multiplication operator R^1 -> R^4."""

    __slots__ = ("ctx", "rep", "delta", "rank", "K1", "K2")

    def __init__(self, ctx, rep, delta, rank, K1, K2):
        self.ctx = ctx
        self.rep = rep          # canonical coset representative, HomForm
        self.delta = delta      # matrix rows: R^4 coords, columns: z_a
        self.rank = rank
        self.K1 = K1            # EchelonSpace in R^1 = S^1
        self.K2 = K2            # EchelonSpace in R^2 coordinates

    def coords(self):
        return self.ctx.reduce_coords(self.rep)

    def __repr__(self):
        return f"XiClass(rank={self.rank}, rep={self.rep!r})"


def make_xi(ctx, f):
    """Build the multiplication-by-f operator data; f must not be in J_3."""
    if f.degree != 3 or f.nvars != 5 or f.field != ctx.field:
        raise ValueError("expected a degree-3 form over the context field")
    rep = ctx.reduce_form(f)
    if rep.is_zero():
        raise ValueError("zero class: the form lies in the Jacobian ideal")
    F = ctx.field
    dim4 = ctx.dims[4]
    cols = []
    for a in range(5):
        za = HomForm.variable(F, 5, a)
        cols.append(ctx.reduce_coords(rep * za))
    delta = [[cols[a][b] for a in range(5)] for b in range(dim4)]
    rank = rank_of(F, delta, 5) if delta else 0
    K1 = kernel_space(F, delta, 5)
    if ctx.smooth:
        assert rank >= 2, "rank of a nonzero multiplication operator is >= 2"
    # kernel of R^2 -> R^5
    dim5 = ctx.dims[5]
    rows2 = []
    for expo in ctx.basis_exponents(2):
        m = HomForm.monomial(F, 5, expo)
        rows2.append(ctx.reduce_coords(rep * m))
    M = [[rows2[m][r] for m in range(len(rows2))] for r in range(dim5)]
    K2 = kernel_space(F, M, len(rows2))
    return XiClass(ctx, rep, delta, rank, K1, K2)


def xi_quadric_rank(ctx, xi):
    """Rank of the symmetric operator attached to xi, and the rank <= 2 test.

    The operator pairs z_a, z_b to the socle coefficient of z_a z_b xi; its
    rank equals the rank of delta(xi) and membership in the rank <= 2 stratum
    is equivalent to the kernel on linear forms having dimension 3.
    """
    if not ctx.smooth:
        raise ValueError("quadric rank needs a smooth context")
    F = ctx.field
    S = [[None] * 5 for _ in range(5)]
    for a in range(5):
        za = HomForm.variable(F, 5, a)
        row = xi.rep * za              # degree 4
        for b in range(a, 5):
            zb = HomForm.variable(F, 5, b)
            val = ctx.socle_coeff(row * zb)
            S[a][b] = val
            S[b][a] = val
    rank = rank_of(F, S, 5)
    return rank, rank <= 2


def sigma_line_of_xi(ctx, xi):
    """The line cut out by the 3-dimensional kernel of delta(xi)."""
    if xi.K1.dim != 3:
        raise ValueError(f"kernel dimension is {xi.K1.dim}, need 3")
    ker = kernel_space(ctx.field, [list(r) for r in xi.K1.rows], 5)
    assert ker.dim == 2
    return ProjLine(ctx.field, [list(r) for r in ker.rows])


def xi_of_line(ctx, line):
    """The unique class (up to scale) whose kernel is the forms through the line.

    Fails when the line is not of second type, i.e. when the forms through
    it multiply onto all of R^2 instead of a hyperplane.
    """
    if not ctx.smooth:
        raise ValueError("xi_of_line needs a smooth context")
    F = ctx.field
    W = line.annihilator()          # 3 linear forms, RREF rows
    prods = []
    for w in W.rows:
        wf = HomForm(F, 5, 1, list(w))
        for a in range(5):
            za = HomForm.variable(F, 5, a)
            prods.append(ctx.reduce_coords(wf * za))
    rank, _, _ = rref(F, prods, ctx.dims[2])
    if rank == ctx.dims[2]:
        raise ValueError("line is not of second type: W(r)*R^1 is all of R^2")
    if rank < ctx.dims[2] - 1:
        raise RuntimeError("W(r)*R^1 has codimension > 1 "
                           "(impossible on a smooth context)")
    B = pairing_matrix(ctx, 2)      # R^2 basis x R^3 basis
    VB = matmul(F, prods, B)
    ker = kernel_space(F, VB, ctx.dims[3])
    assert ker.dim == 1
    coords = first_nonzero_normalize(F, list(ker.rows[0]))
    rep = HomForm.zero(F, 5, 3)
    for c, expo in zip(coords, ctx.basis_exponents(3)):
        if not F.is_zero(c):
            rep = rep + HomForm.monomial(F, 5, expo, c)
    xi = make_xi(ctx, rep)
    assert xi.K1.same_space(W), "kernel of the produced class is not W(r)"
    return xi


def pairing_matrix(ctx, i):
    """Multiplication pairing R^i x R^(5-i) -> R^5 in the canonical bases."""
    if not ctx.smooth:
        raise ValueError("pairings need a smooth context (singular cubic)")
    if not 0 <= i <= 5:
        raise ValueError("degree out of range")
    F = ctx.field
    rows = []
    for ea in ctx.basis_exponents(i):
        ma = HomForm.monomial(F, 5, ea)
        row = []
        for eb in ctx.basis_exponents(5 - i):
            mb = HomForm.monomial(F, 5, eb)
            row.append(ctx.socle_coeff(ma * mb))
        rows.append(row)
    return rows
