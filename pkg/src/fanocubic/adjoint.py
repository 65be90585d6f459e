"""Wedge-square forms, the canonical-class representative, and incidence loci.

Degree-1 classes pair with lines through the Grassmannian: a decomposable
wedge H1 ^ H2 attached to a plane evaluates on a line as the corresponding
combination of Pluecker coordinates, vanishing exactly when the line meets
the plane.  For a second-type line the tangent hyperplanes along it form a
pencil whose base is a plane; the wedge form of that plane, reduced modulo
the wedges of forms vanishing on the line, represents the adjoint class.

The decision rule implemented here: the class vanishes exactly when the
line lies on the cubic (the double-line locus).  Representatives are always
scale-normalized; every assertion about them is scale-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import univariate as uv
from .binary import binary_roots
from .fields import embed_scalar, field_of_order, get_embedding
from .forms import HomForm
from .jacobian import XiClass, make_xi, sigma_line_of_xi, xi_of_line
from .linalg import (EchelonSpace, first_nonzero_normalize, kernel_space,
                     rank_of, rref)
from .linegeom import classify_line, dual_map_image, lines_through_point
from .lines import PAIRS, PAIR_INDEX, ProjLine, ProjPlane

TRIPLES = tuple((i, j, k) for i in range(5) for j in range(i + 1, 5)
                for k in range(j + 1, 5))


class TwoForm:
    """An element of the wedge square of the degree-1 piece.

    Coordinates over the basis z_i ^ z_j, pair order (0,1), (0,2), ...,
    (3,4) -- the same order as Pluecker coordinates, which is what makes
    evaluate_on_line a plain dot product.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = tuple(field.coerce(c) for c in coeffs)
        if len(coeffs) != 10:
            raise ValueError("a two-form has 10 coefficients")
        self.field = field
        self.coeffs = coeffs

    @classmethod
    def zero(cls, field):
        return cls(field, [field.zero] * 10)

    @classmethod
    def wedge(cls, field, h1, h2):
        """h1 ^ h2 for two linear forms given by coefficient vectors."""
        out = []
        for (i, j) in PAIRS:
            out.append(field.sub(field.mul(h1[i], h2[j]),
                                 field.mul(h1[j], h2[i])))
        return cls(field, out)

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.coeffs)

    def normalized(self):
        return TwoForm(self.field,
                       first_nonzero_normalize(self.field, list(self.coeffs)))

    def __add__(self, other):
        F = self.field
        return TwoForm(F, [F.add(a, b)
                           for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c):
        F = self.field
        return TwoForm(F, [F.mul(c, a) for a in self.coeffs])

    def __eq__(self, other):
        return (isinstance(other, TwoForm) and self.field == other.field
                and all(self.field.eq(a, b)
                        for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TwoForm({self.coeffs})"


def schubert_form(plane):
    """The decomposable wedge of the two forms cutting the plane.

    Well defined up to scale; normalized so the first nonzero coordinate
    is 1.  Evaluates to zero exactly on lines meeting the plane.
    """
    F = plane.field
    h1, h2 = plane.dual
    return TwoForm.wedge(F, h1, h2).normalized()


def evaluate_on_line(omega, line):
    """Pairing of a two-form with the Pluecker point of a line."""
    F = omega.field
    if line.field != F:
        raise ValueError("two-form and line live over different fields")
    acc = F.zero
    for c, p in zip(omega.coeffs, line.pluecker):
        acc = F.add(acc, F.mul(c, p))
    return acc


def embed_two_form(omega, target_field):
    emb = get_embedding(omega.field, target_field)
    return TwoForm(target_field, [emb(c) for c in omega.coeffs])


def w_spaces(line):
    """The 3-space of forms vanishing on the line and its wedge image.

    Returns (W, W2) as echelon spaces in the degree-1 piece and in the
    wedge square respectively; both have dimension 3 for every line.
    """
    F = line.field
    W = line.annihilator()
    wedges = []
    rows = list(W.rows)
    for a in range(3):
        for b in range(a + 1, 3):
            wedges.append(list(TwoForm.wedge(F, rows[a], rows[b]).coeffs))
    W2 = EchelonSpace.from_vectors(F, wedges, 10)
    assert W2.dim == 3
    return W, W2


@dataclass
class AdjointReport:
    line: ProjLine
    xi: XiClass
    W: EchelonSpace
    W2: EchelonSpace
    vanishes: bool
    representative: TwoForm          # reduced mod W2; zero when vanishes
    tangent_hyperplanes: list        # [(level, field, form coefficients)]
    base_plane: ProjPlane | None
    degeneracy: str                  # transverse | tangency | eckardt_on_line | in_F


def adjoint_class(ctx, xi_or_line, tower_bound=4):
    """The adjoint-class representative and vanishing decision for a
    rank-2 class or a second-type line.

    The class vanishes exactly when the line lies on the cubic; otherwise
    the representative is the wedge form of the dual-pencil base plane,
    reduced against the wedges of the forms through the line.  Tangency and
    Eckardt incidences reuse the same base plane but are flagged.
    """
    if not ctx.smooth:
        raise ValueError("adjoint classes need a smooth context")
    F = ctx.field
    if isinstance(xi_or_line, ProjLine):
        line = xi_or_line
        xi = xi_of_line(ctx, line)
    else:
        xi = xi_or_line
        if xi.rank != 2:
            raise ValueError(f"rank of the class is {xi.rank}, need 2")
        line = sigma_line_of_xi(ctx, xi)
    W, W2 = w_spaces(line)
    assert W.same_space(xi.K1)
    report = classify_line(ctx, line, tower_bound)
    dual = report.dual_image
    assert dual.is_line
    base_plane = dual.base_plane
    if report.in_V:
        return AdjointReport(line, xi, W, W2, True, TwoForm.zero(F), [],
                             base_plane, "in_F")
    # tangency structure of the intersection from its multiplicities
    mults = sorted((r.multiplicity for r in report.intersection.records),
                   reverse=True)
    unresolved = report.intersection.unresolved
    tangency = any(m >= 2 for m in mults) or _has_multiple_factor(unresolved)
    if report.eckardt_hits:
        degeneracy = "eckardt_on_line"
    elif tangency:
        degeneracy = "tangency"
    else:
        degeneracy = "transverse"
    omega = schubert_form(base_plane)
    reduced = W2.reduce(F, list(omega.coeffs))
    if all(F.is_zero(c) for c in reduced):
        raise AssertionError("base-plane wedge form lies in W(r)^2 "
                             "for a line off the cubic")
    representative = TwoForm(F, first_nonzero_normalize(F, reduced))
    hyperplanes = []
    for rec in report.intersection.records:
        Fk = rec.field
        if rec.level == 1:
            E_k, span = ctx.E, line.span
        else:
            emb = get_embedding(F, Fk)
            E_k = ctx.E.map_coefficients(emb, Fk)
            span = tuple(tuple(emb(x) for x in row) for row in line.span)
        s, t = rec.point
        pt = [Fk.add(Fk.mul(s, a), Fk.mul(t, b))
              for a, b in zip(span[0], span[1])]
        grad = [g.evaluate(pt) for g in E_k.gradient()]
        hyperplanes.append((rec.level, Fk,
                            tuple(first_nonzero_normalize(Fk, grad))))
    return AdjointReport(line, xi, W, W2, False, representative,
                         hyperplanes, base_plane, degeneracy)


def _has_multiple_factor(binform):
    """A repeated closure root hiding in an unresolved binary factor."""
    if binform.degree <= 1:
        return False
    from .binary import to_univariate
    F = binform.field
    a, f = to_univariate(binform)
    if a >= 2:
        return True
    d = uv.poly_derivative(F, f)
    if not d:
        return uv.poly_deg(f) > 0
    return uv.poly_deg(uv.poly_gcd(F, f, d)) > 0


@dataclass
class PrimitiveFormData:
    phi: tuple                 # wedge of the kernel 3-space, 10 coordinates
    completion: tuple          # indices (a4, a5) of the completing variables
    images: tuple              # two image vectors in R^4 coordinates
    image_space: EchelonSpace
    decomposable: bool


def primitive_form(ctx, xi):
    """Decomposability data of a rank-2 class.

    phi is the wedge of the kernel basis (up to scale); the two completing
    coordinate forms map to independent degree-4 classes and their span is
    certified equal to the image of the multiplication operator.
    """
    if xi.rank != 2:
        raise ValueError(f"rank of the class is {xi.rank}, need 2")
    F = ctx.field
    K1 = xi.K1
    rows = [list(r) for r in K1.rows]
    phi = []
    for (i, j, k) in TRIPLES:
        phi.append(_det3(F, rows, i, j, k))
    phi = tuple(first_nonzero_normalize(F, phi))
    completion = []
    work = [list(r) for r in rows]
    for a in range(5):
        e = [F.zero] * 5
        e[a] = F.one
        if rank_of(F, work + [e], 5) == len(work) + 1:
            work.append(e)
            completion.append(a)
        if len(completion) == 2:
            break
    assert len(completion) == 2
    images = []
    for a in completion:
        za = HomForm.variable(F, 5, a)
        images.append(ctx.reduce_coords(xi.rep * za))
    img_rank = rank_of(F, images, len(images[0]))
    assert img_rank == 2, "images of the completing forms are dependent"
    image_space = EchelonSpace.from_vectors(F, images, len(images[0]))
    # column space of delta(xi)
    delta_cols = [[xi.delta[b][a] for b in range(len(xi.delta))]
                  for a in range(5)]
    delta_space = EchelonSpace.from_vectors(F, delta_cols, len(xi.delta))
    decomposable = delta_space.same_space(image_space)
    return PrimitiveFormData(phi, tuple(completion),
                             tuple(tuple(v) for v in images),
                             image_space, decomposable)


def _det3(F, rows, i, j, k):
    a, b, c = rows[0][i], rows[0][j], rows[0][k]
    d, e, f = rows[1][i], rows[1][j], rows[1][k]
    g, h, l = rows[2][i], rows[2][j], rows[2][k]
    t1 = F.mul(a, F.sub(F.mul(e, l), F.mul(f, h)))
    t2 = F.mul(b, F.sub(F.mul(d, l), F.mul(f, g)))
    t3 = F.mul(c, F.sub(F.mul(d, h), F.mul(e, g)))
    return F.add(F.sub(t1, t2), t3)


@dataclass
class DrReport:
    flag: str                  # 'finite' | 'infinite'
    reason: str | None         # 'in_F' | 'eckardt' | None
    lines: list                # [(level, field, ProjLine over that field)]
    embedded: list             # lines over the compositum field
    compositum: object | None
    pluecker_span_dim: int | None   # projective dimension of the span


def d_r_lines(ctx, line, tower_bound=4):
    """Lines on the cubic meeting a given line, over extensions up to the
    tower bound.

    Any such line meets the given one inside the cubic, so the search walks
    the intersection points level by level and enumerates the finite line
    scheme through each.  The list is flagged infinite when the line lies
    on the cubic (it then meets every line of its own incidence curve) or
    when an intersection point is an Eckardt point.
    """
    F = ctx.field
    if not F.is_finite:
        raise ValueError("incidence enumeration needs a finite field")
    report = classify_line(ctx, line, min(tower_bound, 3))
    if report.in_V:
        return DrReport("infinite", "in_F", [], [], None, None)
    if report.eckardt_hits:
        return DrReport("infinite", "eckardt", [], [], None, None)
    found = []
    for level in range(1, tower_bound + 1):
        Fk = F if level == 1 else field_of_order(F.characteristic,
                                                 F.degree * level, True)
        for rec in report.intersection.records:
            if level % rec.level != 0:
                continue
            s, t = rec.point
            Fj = rec.field
            span = line.span
            if rec.level == 1:
                pt_j = [Fj.add(Fj.mul(s, a), Fj.mul(t, b))
                        for a, b in zip(span[0], span[1])]
            else:
                emb_j = get_embedding(F, Fj)
                pt_j = [Fj.add(Fj.mul(s, emb_j(a)), Fj.mul(t, emb_j(b)))
                        for a, b in zip(span[0], span[1])]
            sub = lines_through_point(ctx, pt_j, level=level,
                                      point_level=rec.level)
            if sub.flag != "finite":
                return DrReport("infinite", sub.reason, [], [], None, None)
            for ln in sub.lines:
                found.append((level, Fk, ln))
    # dedupe across levels inside the compositum
    L = 1
    for level in range(1, tower_bound + 1):
        L = L * level // _gcd(L, level)
    Fbig = F if L == 1 else field_of_order(F.characteristic, F.degree * L, True)
    seen = {}
    for (level, Fk, ln) in found:
        up = _embed_line(Fk, Fbig, ln)
        key = up.key()
        if key not in seen:
            seen[key] = ((level, Fk, ln), up)
    ordered = [seen[k] for k in sorted(seen)]
    lines = [item[0] for item in ordered]
    embedded = [item[1] for item in ordered]
    span_dim = None
    if embedded:
        mat = [list(l.pluecker) for l in embedded]
        span_dim = rank_of(Fbig, mat, 10) - 1
    return DrReport("finite", None, lines, embedded, Fbig, span_dim)


def _embed_line(src_field, dst_field, line):
    if src_field == dst_field:
        return line
    emb = get_embedding(src_field, dst_field)
    rows = [[emb(x) for x in row] for row in line.span]
    return ProjLine(dst_field, rows)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
