"""Binary forms b(s, t) and their roots on the projective line.

A binary form of degree d is a HomForm with nvars=2; its coefficient c_i is
the coefficient of s^(d-i) t^i.  Points of P^1 are normalized pairs, (1, tau)
or (0, 1).

Root finding over a finite base field walks extension levels 1..tower_bound:
multiplicities come from a squarefree decomposition over the base, roots at
each level from scanning (small fields) or gcd-with-field-polynomial plus
seeded equal-degree splitting (large ones).  Roots already seen at a divisor
level are not reported twice, so the records are in bijection with the
closure roots of the resolved part.  Over the rationals only rational roots
are extracted and everything else stays in the unresolved factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import univariate as uv
from .fields import (RationalField, embed_scalar, field_of_order, get_embedding)
from .forms import HomForm


@dataclass(frozen=True)
class RootRecord:
    level: int          # degree of the root's field over the base field
    field: object       # the field the coordinates live in
    point: tuple        # normalized (s, t), either (1, tau) or (0, 1)
    multiplicity: int


@dataclass
class BinaryRoots:
    records: list       # [RootRecord], canonical order
    unresolved: HomForm  # factor over the base field with no roots <= bound
    base_field: object

    @property
    def total_multiplicity(self):
        return sum(r.multiplicity for r in self.records)

    def fully_resolved(self):
        return self.unresolved.degree == 0


def binary_form(field, coeffs):
    return HomForm(field, 2, len(coeffs) - 1, [field.coerce(c) for c in coeffs])


def eval_point(form, point):
    return form.evaluate(point)


def divide_linear(form, point):
    """Exact division of a binary form by the linear form of a root.

    point (0,1) divides by s; point (1,tau) divides by (t - tau*s).
    Raises ValueError when the point is not a root.
    """
    F = form.field
    c = list(form.coeffs)
    d = form.degree
    if F.is_zero(point[0]):
        # factor s: requires the t^d coefficient to vanish
        if not F.is_zero(c[d]):
            raise ValueError("point is not a root")
        return HomForm(F, 2, d - 1, c[:d])
    tau = F.div(point[1], point[0])
    # b = (t - tau s) q + rho s^d; backward recurrence
    q = [F.zero] * d
    q[d - 1] = c[d]
    for i in range(d - 1, 0, -1):
        q[i - 1] = F.add(c[i], F.mul(tau, q[i]))
    rho = F.add(c[0], F.mul(tau, q[0]))
    if not F.is_zero(rho):
        raise ValueError("point is not a root")
    return HomForm(F, 2, d - 1, q)


def linear_factor(field, point):
    """The linear binary form vanishing exactly at the given point."""
    if field.is_zero(point[0]):
        return binary_form(field, [field.one, field.zero])      # s
    tau = field.div(point[1], point[0])
    return binary_form(field, [field.neg(tau), field.one])      # t - tau*s


def s_multiplicity(form):
    """Largest a with s^a dividing the form (= multiplicity of (0:1))."""
    F = form.field
    top = -1
    for i, c in enumerate(form.coeffs):
        if not F.is_zero(c):
            top = i
    if top < 0:
        raise ValueError("zero form")
    return form.degree - top


def to_univariate(form):
    """(a, f) with form = s^a * homogenization of f, deg f = degree - a."""
    F = form.field
    a = s_multiplicity(form)
    top = form.degree - a
    return a, uv.poly_trim(F, list(form.coeffs[:top + 1]))


def from_univariate(field, f, degree):
    """Homogenize a univariate polynomial (in t/s) to a binary form."""
    coeffs = list(f) + [field.zero] * (degree + 1 - len(f))
    return HomForm(field, 2, degree, coeffs)


def binary_exact_div(f, g):
    """f / g for binary forms with g | f; raises ValueError otherwise."""
    F = f.field
    ag, pg = to_univariate(g)
    af, pf = to_univariate(f)
    if af < ag:
        raise ValueError("not divisible (s-multiplicity)")
    q, r = uv.poly_divmod(F, pf, pg)
    if r:
        raise ValueError("not divisible")
    return from_univariate(F, q, f.degree - g.degree)


def binary_gcd(f, g):
    """Monic-normalized gcd of two binary forms (zero forms not allowed)."""
    F = f.field
    af, pf = to_univariate(f)
    ag, pg = to_univariate(g)
    h = uv.poly_gcd(F, pf, pg)
    a = min(af, ag)
    s_form = from_univariate(F, [F.one], 1)  # just s
    out = from_univariate(F, h, uv.poly_deg(h))
    for _ in range(a):
        out = out * s_form
    return out


def binary_mul_all(field, forms, degree_zero_scale=None):
    acc = HomForm(field, 2, 0, [field.one if degree_zero_scale is None
                                else degree_zero_scale])
    for f in forms:
        acc = acc * f
    return acc


def _new_at_level(F_ell, tau, base_order, level):
    """True when tau generates exactly the degree-`level` extension."""
    from .fields import scalar_pow
    for d in range(1, level):
        if level % d == 0:
            if F_ell.eq(scalar_pow(F_ell, tau, base_order ** d), tau):
                return False
    return True


def _frobenius_orbit(F_ell, tau, base_order):
    from .fields import scalar_pow
    orbit = [tau]
    cur = scalar_pow(F_ell, tau, base_order)
    while not F_ell.eq(cur, tau):
        orbit.append(cur)
        cur = scalar_pow(F_ell, cur, base_order)
    return orbit


def binary_roots(form, tower_bound=1, seed=None):
    """Roots of a nonzero binary form over extensions up to tower_bound.

    Over a finite field F_q the records list the closure roots living in
    F_{q^l} for l <= tower_bound, each attributed to its minimal level and
    carrying its multiplicity; the unresolved factor is the base-field form
    whose roots all live strictly above the bound.  Over QQ only rational
    roots are extracted (no algebraic extensions are constructed here).
    """
    F0 = form.field
    if form.is_zero():
        raise ValueError("the zero form has every point as a root; "
                         "handle that case before calling binary_roots")
    if isinstance(F0, RationalField):
        return _rational_roots(form)
    return _finite_roots(form, tower_bound, seed)


def _finite_roots(form, tower_bound, seed):
    F0 = form.field
    p = F0.characteristic
    k0 = F0.degree
    q0 = F0.order
    records = []
    resolved_factors = []   # (base-field form, multiplicity)
    a, f = to_univariate(form)
    if a > 0:
        records.append(RootRecord(1, F0, (F0.zero, F0.one), a))
        resolved_factors.append((linear_factor(F0, (F0.zero, F0.one)), a))
    if uv.poly_deg(f) >= 1:
        decomp, _lead = uv.squarefree_decomposition(F0, f)
        for level in range(1, tower_bound + 1):
            F_ell = F0 if level == 1 else field_of_order(p, k0 * level, True)
            emb = None if level == 1 else get_embedding(F0, F_ell)
            for g, mult in decomp:
                if uv.poly_deg(g) < level:
                    continue
                g_up = g if level == 1 else [emb(c) for c in g]
                taus = uv.roots_in_field(F_ell, g_up, seed=seed)
                new = [t for t in taus
                       if level == 1 or _new_at_level(F_ell, t, q0, level)]
                seen = set()
                for tau in new:
                    key = F_ell.sort_key(tau)
                    if key in seen:
                        continue
                    orbit = _frobenius_orbit(F_ell, tau, q0)
                    assert len(orbit) == level
                    for t in orbit:
                        seen.add(F_ell.sort_key(t))
                        records.append(RootRecord(level, F_ell,
                                                  (F_ell.one, t), mult))
                    # retract the orbit product to the base field
                    prod = binary_mul_all(
                        F_ell, [linear_factor(F_ell, (F_ell.one, t))
                                for t in orbit])
                    if level == 1:
                        base_prod = prod
                    else:
                        back = [emb.preimage(c) for c in prod.coeffs]
                        if any(b is None for b in back):
                            raise RuntimeError(
                                "orbit product not defined over the base "
                                "field (impossible)")
                        base_prod = HomForm(F0, 2, level, back)
                    resolved_factors.append((base_prod, mult))
    unresolved = form
    for fac, mult in resolved_factors:
        for _ in range(mult):
            unresolved = binary_exact_div(unresolved, fac)
    records.sort(key=lambda r: (r.level, r.field.sort_key(r.point[0]),
                                r.field.sort_key(r.point[1])))
    return BinaryRoots(records, unresolved, F0)


def _int_divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _rational_roots(form):
    F0 = form.field
    records = []
    unresolved = form
    a, f = to_univariate(form)
    if a > 0:
        records.append(RootRecord(1, F0, (F0.zero, F0.one), a))
        for _ in range(a):
            unresolved = divide_linear(unresolved, (F0.zero, F0.one))
    # strip tau = 0 roots, i.e. the point (1, 0)
    m0 = 0
    while f and F0.is_zero(f[0]):
        f = f[1:]
        m0 += 1
    if m0:
        records.append(RootRecord(1, F0, (F0.one, F0.zero), m0))
        for _ in range(m0):
            unresolved = divide_linear(unresolved, (F0.one, F0.zero))
    if uv.poly_deg(f) >= 1:
        # integer-scale and apply the rational root theorem
        denom = 1
        for c in f:
            denom = denom * c.denominator // _gcd(denom, c.denominator)
        ints = [int(c * denom) for c in f]
        lead, trail = ints[-1], ints[0]
        seen = set()
        for num in _int_divisors(trail):
            for den in _int_divisors(lead):
                for sign in (1, -1):
                    tau = Fraction(sign * num, den)
                    if tau in seen:
                        continue
                    seen.add(tau)
                    if uv.poly_eval(F0, f, tau) == 0:
                        mult = 0
                        while True:
                            try:
                                unresolved = divide_linear(
                                    unresolved, (F0.one, tau))
                                mult += 1
                            except ValueError:
                                break
                        records.append(RootRecord(1, F0, (F0.one, tau), mult))
    records.sort(key=lambda r: (r.field.sort_key(r.point[0]),
                                r.field.sort_key(r.point[1])))
    return BinaryRoots(records, unresolved, F0)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a

