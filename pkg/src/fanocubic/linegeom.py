"""Line geometry on a cubic threefold.

The central dichotomy: restricting the five partial derivatives to a line
gives five binary quadrics; on a smooth cubic they span a space of dimension
2 or 3.  Dimension 2 is the special case ("second type"): the dual map sends
the line to a line, the tangent hyperplanes along it form a pencil, and the
pencil's base is a plane.  A second-type line lying on the cubic is a double
line: some plane meets the cubic in twice the line plus a residual line.

Everything here is exact; extension-field data is produced by the binary
root machinery and canonical embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import univariate as uv
from .binary import binary_gcd, binary_roots
from .fields import field_of_order, get_embedding
from .forms import HomForm, exponent_index, exponents
from .lines import ProjLine, ProjPlane
from .linalg import (EchelonSpace, first_nonzero_normalize, kernel_space,
                     rank_of, rref)


# ---------------------------------------------------------------------------
# restricted partials

def restricted_partials(ctx, line):
    """The five binary quadrics obtained by restricting the partials."""
    return [g.restrict(line.span) for g in ctx.partials]


def restricted_partial_matrix(ctx, line):
    """5 x 3 coefficient matrix of the restricted partials."""
    return [list(b.coeffs) for b in restricted_partials(ctx, line)]


# ---------------------------------------------------------------------------
# reports

@dataclass
class DualMapImage:
    is_line: bool
    degree: int | None            # 1 or 2 when is_line, else None
    image_span: tuple             # RREF rows spanning the image in dual space
    base_plane: ProjPlane | None  # base of the pencil when is_line


@dataclass
class LineReport:
    line: ProjLine
    in_V: bool
    line_type: str                # 'first' | 'second'
    J2_restricted_dim: int
    intersection: object | None   # BinaryRoots when the line is not on V
    double: bool
    witness_plane: ProjPlane | None
    residual: ProjLine | None
    triple: bool
    dual_image: DualMapImage
    eckardt_hits: list            # [(level, field, point)] on the intersection


def classify_line(ctx, line, tower_bound=3):
    """Full classification of a line against the cubic (total function)."""
    if not ctx.smooth:
        raise ValueError("classification needs a smooth context")
    F = ctx.field
    M = restricted_partial_matrix(ctx, line)
    jdim = rank_of(F, M, 3)
    assert jdim >= 2, "restricted partials span at most a point (singular?)"
    line_type = "second" if jdim == 2 else "first"
    E_l = ctx.E.restrict(line.span)
    in_V = E_l.is_zero()
    intersection = None
    eckardt_hits = []
    if not in_V:
        intersection = binary_roots(E_l, tower_bound)
        eckardt_hits = _eckardt_hits(ctx, line, intersection)
    witness_plane = residual = None
    triple = False
    double = False
    if in_V:
        witness = tangent_plane_witness(ctx, line)
        if witness is not None:
            witness_plane, residual, triple = witness
            double = True
        assert double == (line_type == "second"), \
            "tangent-plane witness disagrees with the restricted-partial rank"
    dual = dual_map_image(ctx, line)
    assert dual.is_line == (line_type == "second"), \
        "dual-map image disagrees with the restricted-partial rank"
    return LineReport(line, in_V, line_type, jdim, intersection, double,
                      witness_plane, residual, triple, dual, eckardt_hits)


def _eckardt_hits(ctx, line, roots):
    hits = []
    for rec in roots.records:
        Fk = rec.field
        if rec.level == 1:
            E_k = ctx.E
            span = line.span
        else:
            emb = get_embedding(ctx.field, Fk)
            E_k = ctx.E.map_coefficients(emb, Fk)
            span = tuple(tuple(emb(x) for x in row) for row in line.span)
        s, t = rec.point
        point = tuple(Fk.add(Fk.mul(s, a), Fk.mul(t, b))
                      for a, b in zip(span[0], span[1]))
        if eckardt_shape(E_k, point)[0]:
            hits.append((rec.level, Fk, point))
    return hits


def dual_map_image(ctx, line):
    """Image of the line under the gradient map to the dual space.

    Second-type lines map to a line (the dual pencil); the base plane is the
    common zero locus of that pencil of hyperplanes.
    """
    F = ctx.field
    quadrics = restricted_partials(ctx, line)
    M = [list(b.coeffs) for b in quadrics]
    assert any(not F.is_zero(x) for row in M for x in row), \
        "gradient vanishes along the line (singular context)"
    # the image spans the column space of M read as linear forms
    cols = [[M[i][j] for i in range(5)] for j in range(3)]
    rank, _, rr = rref(F, cols, 5)
    image_span = tuple(tuple(r) for r in rr)
    if rank == 3:
        return DualMapImage(False, None, image_span, None)
    assert rank == 2
    base_plane = ProjPlane.from_dual_forms(F, list(rr[0]), list(rr[1]))
    # degree drops to 1 exactly when the pencil of quadrics has a base point
    basis = _independent_pair(F, quadrics)
    g = binary_gcd(basis[0], basis[1])
    degree = 1 if g.degree >= 1 else 2
    return DualMapImage(True, degree, image_span, base_plane)


def _independent_pair(F, quadrics):
    rows = []
    forms = []
    for b in quadrics:
        cand = rows + [list(b.coeffs)]
        if rank_of(F, cand, 3) == len(cand):
            rows = cand
            forms.append(b)
            if len(forms) == 2:
                return forms
    raise RuntimeError("restricted partials span less than a pencil")


def tangent_plane_witness(ctx, line):
    """The plane tangent to the cubic along a line it contains, if any.

    Returns (plane, residual line, triple flag) or None for first-type
    lines.  Planes through the line are parameterized by a residual
    direction; tangency along the line is the linear condition that the
    direction annihilate the restricted partials.
    """
    F = ctx.field
    E_l = ctx.E.restrict(line.span)
    if not E_l.is_zero():
        raise ValueError("line does not lie on the cubic")
    M = restricted_partial_matrix(ctx, line)
    MT = [[M[i][j] for i in range(5)] for j in range(3)]
    ker = kernel_space(F, MT, 5)        # directions with zero u-coefficient
    line_space = EchelonSpace(5, line.span,
                              tuple(_leading_index(F, r) for r in line.span))
    if ker.dim == 2:
        assert ker.same_space(line_space)
        return None
    assert ker.dim == 3
    X = None
    for row in ker.rows:
        red = line_space.reduce(F, list(row))
        if any(not F.is_zero(x) for x in red):
            X = first_nonzero_normalize(F, red)
            break
    assert X is not None
    P, Q = line.span
    plane = ProjPlane.from_points(F, P, Q, X)
    cubic3 = ctx.E.restrict([list(P), list(Q), list(X)])
    # must vanish to order 2 along u = 0
    idx3 = exponent_index(3, 3)
    for expo, c in zip(exponents(3, 3), cubic3.coeffs):
        if expo[2] <= 1 and not F.is_zero(c):
            raise AssertionError("witness plane is not tangent along the line")
    alpha = cubic3.coeffs[idx3[(1, 0, 2)]]
    beta = cubic3.coeffs[idx3[(0, 1, 2)]]
    gamma = cubic3.coeffs[idx3[(0, 0, 3)]]
    ker_res = kernel_space(F, [[alpha, beta, gamma]], 3)
    assert ker_res.dim == 2
    pts = []
    for coeffs in ker_res.rows:
        a, b, c = coeffs
        pts.append([F.add(F.add(F.mul(a, x), F.mul(b, y)), F.mul(c, z))
                    for x, y, z in zip(P, Q, X)])
    residual = ProjLine(F, pts)
    triple = residual == line
    return plane, residual, triple


def _leading_index(F, row):
    for i, x in enumerate(row):
        if not F.is_zero(x):
            return i
    raise ValueError("zero row")


# ---------------------------------------------------------------------------
# Eckardt points

def eckardt_shape(E, point):
    """Shape test at a point of the cubic: is the tangent section a cone?

    Moves the point to (1:0:...:0) and its tangent hyperplane to z4 = 0;
    the point is an Eckardt point exactly when the normalized cubic has no
    z0-dependence outside the z4-part, i.e. equals K(z1,z2,z3) + z4*Q.
    Returns (flag, normalization matrix, normalized cubic, cone base or None).
    """
    F = E.field
    point = [F.coerce(x) for x in point]
    if not F.is_zero(E.evaluate(point)):
        raise ValueError("point does not lie on the cubic")
    grad = [g.evaluate(point) for g in E.gradient()]
    if all(F.is_zero(x) for x in grad):
        raise ValueError("singular point of the cubic")
    ker = kernel_space(F, [grad], 5)    # tangent hyperplane, contains the point
    cols = [list(point)]
    for row in ker.rows:
        cand = cols + [list(row)]
        if rank_of(F, cand, 5) == len(cand):
            cols.append(list(row))
        if len(cols) == 4:
            break
    assert len(cols) == 4
    last = None
    for a in range(5):
        if not F.is_zero(grad[a]):
            last = [F.zero] * 5
            last[a] = F.one
            break
    cols.append(last)
    M = [[cols[j][i] for j in range(5)] for i in range(5)]
    En = E.substitute_linear(M)
    ok = True
    for expo, c in zip(exponents(5, 3), En.coeffs):
        if F.is_zero(c):
            continue
        if expo[0] > 0 and expo[4] == 0:
            ok = False
            break
    cone = None
    if ok:
        rows3 = []
        for a in (1, 2, 3):
            v = [F.zero] * 5
            v[a] = F.one
            rows3.append(v)
        cone = En.restrict(rows3)
    return ok, M, En, cone


def eckardt_test(ctx, point):
    """Eckardt decision for a point on the cubic of a (smooth) context."""
    return eckardt_shape(ctx.E, point)


# ---------------------------------------------------------------------------
# lines through a point

@dataclass
class LinesThroughPoint:
    flag: str                     # 'finite' | 'infinite'
    reason: str | None            # 'eckardt' | 'positive-dimensional' | None
    lines: list                   # ProjLine over the working field
    field: object
    cone_base: object | None = None


def lines_through_point(ctx, point, level=1, point_level=1):
    """Lines on the cubic through a point, rational over the level-th
    extension of the base field.

    The point's coordinates live over the point_level-th extension (1 means
    the base field itself); point_level must divide level.  The containment
    condition reduces, after the tangent-hyperplane linear condition, to a
    conic and a cubic in a plane of directions; their intersection is solved
    exactly by a resultant and root extraction.  Eckardt points (cone
    tangent sections) are flagged as infinite families.
    """
    F0 = ctx.field
    if not F0.is_finite:
        raise ValueError("line enumeration through a point needs a finite field")
    if level % point_level != 0:
        raise ValueError("the point's field does not embed in the line field")
    if level == 1:
        F = F0
        E = ctx.E
        pt = [F.coerce(x) for x in point]
    else:
        F = field_of_order(F0.characteristic, F0.degree * level, True)
        emb = get_embedding(F0, F)
        E = ctx.E.map_coefficients(emb, F)
        if point_level == 1:
            pt = [emb(F0.coerce(x)) for x in point]
        elif point_level == level:
            pt = [F.coerce(x) for x in point]
        else:
            Fj = field_of_order(F0.characteristic,
                                F0.degree * point_level, True)
            emb_j = get_embedding(Fj, F)
            pt = [emb_j(x) for x in point]
    if not F.is_zero(E.evaluate(pt)):
        raise ValueError("point does not lie on the cubic")
    is_eck, _, _, cone = eckardt_shape(E, pt)
    if is_eck:
        return LinesThroughPoint("infinite", "eckardt", [], F, cone)
    grad = [g.evaluate(pt) for g in E.gradient()]
    ker = kernel_space(F, [grad], 5)
    # directions in the tangent hyperplane modulo the point itself
    us = []
    cols = [list(pt)]
    for row in ker.rows:
        cand = cols + [list(row)]
        if rank_of(F, cand, 5) == len(cand):
            cols.append(list(row))
            us.append(list(row))
        if len(us) == 3:
            break
    assert len(us) == 3
    # conic: second polar of the point; cubic: the restriction to directions
    grad_forms = E.gradient()
    conic = None
    for i in range(5):
        gi = grad_forms[i].restrict(us)
        term = gi.scale(pt[i])
        conic = term if conic is None else conic + term
    cubic = E.restrict(us)
    sols, degenerate = conic_cubic_intersect(conic, cubic)
    if degenerate:
        return LinesThroughPoint("infinite", "positive-dimensional", [], F)
    out = {}
    for (x, y, w) in sols:
        d = [F.add(F.add(F.mul(x, u1), F.mul(y, u2)), F.mul(w, u3))
             for u1, u2, u3 in zip(*us)]
        ln = ProjLine.from_points(F, pt, d)
        if not ctx_line_on_cubic(E, ln):
            raise AssertionError("direction solve produced a line off the cubic")
        out[ln.key()] = ln
    lines = [out[k] for k in sorted(out)]
    return LinesThroughPoint("finite", None, lines, F)


def ctx_line_on_cubic(E, line):
    return E.restrict(line.span).is_zero()


def _good_point(F, forms, dim):
    """A projective point where none of the forms vanish, scanned canonically."""
    if F.is_finite:
        candidates = _proj_points(F, dim)
    else:
        candidates = _small_rational_points(F, dim)
    for pt in candidates:
        if all(not F.is_zero(f.evaluate(pt)) for f in forms):
            return list(pt)
    raise RuntimeError("no good point found (degenerate forms)")


def _proj_points(F, dim):
    """Canonical representatives of P^dim over a finite field (generator)."""
    def rec(prefix, remaining):
        if remaining == 0:
            yield tuple(prefix)
            return
        for x in F.iter_elements():
            yield from rec(prefix + [x], remaining - 1)
    for lead in range(dim + 1):
        head = [F.zero] * lead + [F.one]
        yield from rec(head, dim - lead)


def _small_rational_points(F, dim):
    # a grid of size 8 per coordinate defeats any product of our forms
    # (total degree at most 5 < 8 in each variable)
    from itertools import product
    vals = [F.from_int(n) for n in range(0, 8)]
    for lead in range(dim + 1):
        head = [F.zero] * lead + [F.one]
        for rest in product(vals, repeat=dim - lead):
            yield tuple(head + list(rest))


def conic_cubic_intersect(conic, cubic):
    """Common zeros in P^2 of a conic and a cubic over a finite field.

    Returns (solutions, degenerate); degenerate is True when the
    intersection is positive-dimensional (shared component or a vanishing
    form).  Solutions are exact and complete: after a coordinate change
    making both leading w-coefficients nonzero, the w-resultant is a binary
    sextic whose roots are extracted level-0 exactly, and the w-coordinates
    come from the gcd of the specialized equations.
    """
    F = conic.field
    if conic.is_zero() or cubic.is_zero():
        return [], True
    v = _good_point(F, [conic, cubic], 2)
    N = _basis_through(F, v)
    Ninv = _inverse_3x3(F, N)
    c2 = conic.substitute_linear(N)
    c3 = cubic.substitute_linear(N)
    res = _resultant_w(c2, c3)
    if all(F.is_zero(c) for c in res.values()):
        return [], True
    res_form = _dict_to_binary(F, res, 6)
    rts = binary_roots(res_form, tower_bound=1)
    sols = []
    for rec in rts.records:
        x0, y0 = rec.point
        wpoly_a = _specialize_w(c2, x0, y0)
        wpoly_b = _specialize_w(c3, x0, y0)
        g = uv.poly_gcd(F, wpoly_a, wpoly_b)
        for w in uv.low_degree_roots(F, g):
            sols.append((x0, y0, w))
    # map back through the coordinate change
    out = []
    for s in sols:
        orig = [sum_mul(F, N[i], s) for i in range(3)]
        out.append(tuple(orig))
    return out, False


def sum_mul(F, row, vec):
    acc = F.zero
    for a, b in zip(row, vec):
        acc = F.add(acc, F.mul(a, b))
    return acc


def _basis_through(F, v):
    """Invertible 3x3 whose last column is v (rows convention M[i][j])."""
    cols = []
    for a in range(3):
        e = [F.zero] * 3
        e[a] = F.one
        cand = cols + [e]
        if rank_of(F, cand + [list(v)], 3) == len(cand) + 1:
            cols.append(e)
        if len(cols) == 2:
            break
    cols.append(list(v))
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def _inverse_3x3(F, M):
    aug = [list(M[i]) + [F.one if j == i else F.zero for j in range(3)]
           for i in range(3)]
    rank, _, rr = rref(F, aug, 6)
    if rank != 3:
        raise ValueError("singular matrix")
    return [row[3:] for row in rr]


def _w_coefficients(form):
    """Ternary form -> dict w-degree -> dict (x,y)-exponents -> scalar."""
    F = form.field
    out = {}
    for expo, c in zip(exponents(3, form.degree), form.coeffs):
        if F.is_zero(c):
            continue
        wdeg = expo[2]
        out.setdefault(wdeg, {})[(expo[0], expo[1])] = c
    return out


def _specialize_w(form, x0, y0):
    """Ternary form at (x0, y0, w) as a univariate polynomial in w."""
    F = form.field
    from .fields import scalar_pow
    coeffs = [F.zero] * (form.degree + 1)
    for expo, c in zip(exponents(3, form.degree), form.coeffs):
        if F.is_zero(c):
            continue
        term = c
        if expo[0]:
            term = F.mul(term, scalar_pow(F, x0, expo[0]))
        if expo[1]:
            term = F.mul(term, scalar_pow(F, y0, expo[1]))
        coeffs[expo[2]] = F.add(coeffs[expo[2]], term)
    return uv.poly_trim(F, coeffs)


def _resultant_w(c2, c3):
    """Sylvester resultant in w of a ternary conic and cubic with nonzero
    leading w-coefficients; result is a dict (x,y)-exponent -> scalar."""
    F = c2.field
    a = _w_rows(c2, 2)     # [a0, a1, a2] with ai the coeff of w^i (binary dict)
    b = _w_rows(c3, 3)
    rows = [
        [a[2], a[1], a[0], None, None],
        [None, a[2], a[1], a[0], None],
        [None, None, a[2], a[1], a[0]],
        [b[3], b[2], b[1], b[0], None],
        [None, b[3], b[2], b[1], b[0]],
    ]
    return _dict_det(F, rows)


def _w_rows(form, deg):
    F = form.field
    rows = [dict() for _ in range(deg + 1)]
    for expo, c in zip(exponents(3, form.degree), form.coeffs):
        if not F.is_zero(c):
            rows[expo[2]][(expo[0], expo[1])] = c
    return rows


def _dict_det(F, rows):
    """Laplace determinant over sparse dict polynomials; None entries are 0."""
    n = len(rows)
    if n == 1:
        return rows[0][0] if rows[0][0] is not None else {}
    acc = {}
    for j in range(n):
        e = rows[0][j]
        if e is None or not e:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        sub = _dict_det(F, minor)
        term = _dict_mul2(F, e, sub)
        if j % 2 == 1:
            term = {k: F.neg(v) for k, v in term.items()}
        for k, v in term.items():
            acc[k] = F.add(acc.get(k, F.zero), v)
    return {k: v for k, v in acc.items() if not F.is_zero(v)}


def _dict_mul2(F, d1, d2):
    out = {}
    for e1, v1 in d1.items():
        for e2, v2 in d2.items():
            k = (e1[0] + e2[0], e1[1] + e2[1])
            out[k] = F.add(out.get(k, F.zero), F.mul(v1, v2))
    return {k: v for k, v in out.items() if not F.is_zero(v)}


def _dict_to_binary(F, d, degree):
    coeffs = [F.zero] * (degree + 1)
    for (ex, ey), v in d.items():
        assert ex + ey == degree
        coeffs[ey] = v
    return HomForm(F, 2, degree, coeffs)


# ---------------------------------------------------------------------------
# Hessian restriction

def hessian_form(ctx):
    """Determinant of the matrix of second partials, a degree-5 form."""
    from .forms import poly_matrix_det
    entries = [[ctx.partials[i].partial(j) for j in range(5)]
               for i in range(5)]
    return poly_matrix_det(entries, HomForm.zero(ctx.field, 5, 5))


def hessian_on_line(ctx, line):
    """The Hessian determinant restricted to a line of the cubic.

    Returns (binary quintic, degenerate flag); the flag is set when the
    restriction vanishes identically.
    """
    from .forms import poly_matrix_det
    F = ctx.field
    if not ctx.E.restrict(line.span).is_zero():
        raise ValueError("line does not lie on the cubic")
    entries = [[ctx.partials[i].partial(j).restrict(line.span)
                for j in range(5)] for i in range(5)]
    quintic = poly_matrix_det(entries, HomForm.zero(F, 2, 5))
    return quintic, quintic.is_zero()


# ---------------------------------------------------------------------------
# plane sections

@dataclass
class PlaneFactor:
    level: int
    field: object
    dual_coords: tuple        # (alpha, beta, gamma): the form on plane coords
    multiplicity: int
    line: ProjLine | None     # the cut line in P^4, base level only


@dataclass
class PlaneSection:
    plane: ProjPlane
    section: HomForm          # the ternary cubic E restricted to the plane
    factors: list             # [PlaneFactor]
    residual: HomForm         # base-field part with no base-rational factor
    fully_split: bool
    rare: bool | None         # concurrency verdict when three lines


def plane_section(ctx, plane, tower_bound=1):
    """Factor the plane section of the cubic and judge triangle shape.

    Linear factors are found per extension level by root assembly: after a
    coordinate change making the u^3 coefficient nonzero, a linear factor
    must be u - (a s + b t) with a, b roots of the two specialized cubics.
    When the section splits into three lines, 'rare' records whether they
    are concurrent (their dual forms have rank 2).
    """
    F = ctx.field
    section = ctx.E.restrict(plane.span)
    if section.is_zero():
        raise ValueError("plane lies on the cubic (singular context)")
    factors = []
    residual = section
    # base-level extraction with actual division
    base_factors = _ternary_linear_factors(residual)
    for coeffs in base_factors:
        mult = 0
        while True:
            quot = _ternary_divide_linear(residual, coeffs)
            if quot is None:
                break
            residual = quot
            mult += 1
        assert mult >= 1
        line = _plane_coords_line(F, plane, coeffs)
        factors.append(PlaneFactor(1, F, coeffs, mult, line))
    # extension levels: detect without base division
    if F.is_finite and tower_bound > 1 and residual.degree >= 2:
        for level in range(2, tower_bound + 1):
            if residual.degree < level:
                break
            Fk = field_of_order(F.characteristic, F.degree * level, True)
            emb = get_embedding(F, Fk)
            res_k = residual.map_coefficients(emb, Fk)
            seen = set()
            for coeffs in _ternary_linear_factors(res_k):
                key = tuple(Fk.sort_key(c) for c in coeffs)
                if key in seen:
                    continue
                seen.add(key)
                if _new_factor_level(F, Fk, coeffs, level):
                    mult = 0
                    probe = res_k
                    while True:
                        quot = _ternary_divide_linear(probe, coeffs)
                        if quot is None:
                            break
                        probe = quot
                        mult += 1
                    factors.append(PlaneFactor(level, Fk, coeffs, mult, None))
    fully_split = sum(f.multiplicity for f in factors) == 3
    rare = None
    if fully_split:
        rare = _rare_verdict(F, factors)
    return PlaneSection(plane, section, factors, residual, fully_split, rare)


def _rare_verdict(F, factors):
    """Concurrency of the (multi)set of three lines: dual-form rank 2."""
    import math
    from .fields import embed_scalar
    lcm = 1
    for f in factors:
        lcm = lcm * f.level // math.gcd(lcm, f.level)
    if lcm == 1:
        Fbig = F
    else:
        Fbig = field_of_order(F.characteristic, F.degree * lcm, True)
    rows = []
    for f in factors:
        row = [embed_scalar(f.field, Fbig, c) for c in f.dual_coords]
        for _ in range(f.multiplicity):
            rows.append(list(row))
    assert len(rows) == 3
    return rank_of(Fbig, rows, 3) == 2


def _new_factor_level(F, Fk, coeffs, level):
    """True when the factor's coefficients generate exactly level over F."""
    from .fields import scalar_pow
    q0 = F.order
    for d in range(1, level):
        if level % d:
            continue
        if all(Fk.eq(scalar_pow(Fk, c, q0 ** d), c) for c in coeffs):
            return False
    return True


def _ternary_linear_factors(form):
    """Normalized dual coordinates of all linear factors over form.field."""
    F = form.field
    out = []
    d = form.degree
    # factors proportional to s or t or u are found by the same assembly
    # after a change making the u^d coefficient nonzero
    v = _good_point(F, [form], 2)
    N = _basis_through(F, v)
    Ninv = _inverse_3x3(F, N)
    g = form.substitute_linear(N)
    # root forms u = a s + b t
    ca = _specialize_uni(g, "s")
    cb = _specialize_uni(g, "t")
    cand_a = _base_roots(F, ca)
    cand_b = _base_roots(F, cb)
    for a in cand_a:
        for b in cand_b:
            rows = [[F.one, F.zero, a], [F.zero, F.one, b]]
            if g.restrict(rows).is_zero():
                # factor u - a s - b t in new coords; pull back: L(Ninv x)
                lam = [F.neg(a), F.neg(b), F.one]
                orig = [sum_mul(F, [lam[i] for i in range(3)],
                                [Ninv[i][j] for i in range(3)])
                        for j in range(3)]
                out.append(tuple(first_nonzero_normalize(F, orig)))
    # dedupe
    uniq = {}
    for c in out:
        uniq[tuple(F.sort_key(x) for x in c)] = c
    return [uniq[k] for k in sorted(uniq)]


def _specialize_uni(form, which):
    """form(1,0,u) or form(0,1,u) as a univariate polynomial in u."""
    F = form.field
    coeffs = [F.zero] * (form.degree + 1)
    for expo, c in zip(exponents(3, form.degree), form.coeffs):
        if F.is_zero(c):
            continue
        if which == "s" and expo[1] == 0:
            coeffs[expo[2]] = F.add(coeffs[expo[2]], c)
        elif which == "t" and expo[0] == 0:
            coeffs[expo[2]] = F.add(coeffs[expo[2]], c)
    return uv.poly_trim(F, coeffs)


def _base_roots(F, poly):
    if F.is_finite:
        return uv.low_degree_roots(F, poly) if uv.poly_deg(poly) <= 2 \
            else uv.roots_in_field(F, poly)
    # rational roots via the binary machinery
    from .binary import binary_roots as broots, from_univariate
    if uv.poly_deg(poly) <= 0:
        return []
    form = from_univariate(F, poly, uv.poly_deg(poly))
    recs = broots(form, tower_bound=1).records
    return [F.div(r.point[1], r.point[0]) for r in recs
            if not F.is_zero(r.point[0])]


def _ternary_divide_linear(form, dual_coords):
    """Exact division of a ternary form by a linear form, or None.

    dual_coords = (alpha, beta, gamma) defines L = alpha s + beta t + gamma u.
    """
    F = form.field
    alpha, beta, gamma = dual_coords
    # build a coordinate change sending L to the last variable
    comp = []
    for e in ((F.one, F.zero, F.zero), (F.zero, F.one, F.zero),
              (F.zero, F.zero, F.one)):
        cand = comp + [list(e)]
        if rank_of(F, cand + [[alpha, beta, gamma]], 3) == len(cand) + 1:
            comp.append(list(e))
        if len(comp) == 2:
            break
    rows = comp + [[alpha, beta, gamma]]     # maps x -> coords with L last
    Minv = _inverse_3x3(F, rows)             # columns solve back
    g = form.substitute_linear(Minv)
    # now L corresponds to the coordinate u' (last variable)
    idx_src = exponents(3, form.degree)
    quot_coeffs = [F.zero] * len(exponents(3, form.degree - 1))
    tgt = exponent_index(3, form.degree - 1)
    for expo, c in zip(idx_src, g.coeffs):
        if F.is_zero(c):
            continue
        if expo[2] == 0:
            return None
        newe = (expo[0], expo[1], expo[2] - 1)
        quot_coeffs[tgt[newe]] = c
    quot = HomForm(F, 3, form.degree - 1, quot_coeffs)
    back = [[rows[i][j] for j in range(3)] for i in range(3)]
    return quot.substitute_linear(back)


def _plane_coords_line(F, plane, dual_coords):
    ker = kernel_space(F, [list(dual_coords)], 3)
    assert ker.dim == 2
    pts = []
    for coeffs in ker.rows:
        pts.append([sum_mul(F, list(coeffs),
                            [plane.span[j][i] for j in range(3)])
                    for i in range(5)])
    return ProjLine(F, pts)
