"""Univariate polynomial arithmetic over finite fields.

Polynomials are plain lists of field scalars [a0, a1, ..., an] (ascending
powers, trailing zeros stripped, [] is the zero polynomial).  The scalar type
is whatever the ambient field object uses (int for prime fields, tuple for
extensions); all arithmetic goes through the field object, so the routines
here are generic.

This module backs three pieces of the toolkit: construction of irreducible
moduli for extension fields, subfield embeddings (roots of a modulus in a
bigger field), and root extraction for restricted equations when exhaustive
scanning is out of budget.
"""

from __future__ import annotations

import random


def poly_trim(F, f):
    f = list(f)
    while f and F.is_zero(f[-1]):
        f.pop()
    return f


def poly_deg(f):
    return len(f) - 1  # -1 for the zero polynomial


def poly_add(F, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else F.zero
        b = g[i] if i < len(g) else F.zero
        out.append(F.add(a, b))
    return poly_trim(F, out)


def poly_sub(F, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else F.zero
        b = g[i] if i < len(g) else F.zero
        out.append(F.sub(a, b))
    return poly_trim(F, out)


def poly_scale(F, f, c):
    if F.is_zero(c):
        return []
    return [F.mul(a, c) for a in f]


def poly_mul(F, f, g):
    if not f or not g:
        return []
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return poly_trim(F, out)


def poly_divmod(F, f, g):
    """Euclidean division; g must be nonzero."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [F.zero] * max(0, len(f) - len(g) + 1)
    inv_lead = F.inv(g[-1])
    while len(f) >= len(g) and f:
        c = F.mul(f[-1], inv_lead)
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] = F.sub(f[k + i], F.mul(c, b))
        f = poly_trim(F, f)
    return poly_trim(F, q), f


def poly_mod(F, f, g):
    return poly_divmod(F, f, g)[1]


def poly_monic(F, f):
    if not f:
        return f
    inv = F.inv(f[-1])
    return [F.mul(a, inv) for a in f]


def poly_gcd(F, f, g):
    """Monic gcd."""
    f, g = list(f), list(g)
    while g:
        f, g = g, poly_mod(F, f, g)
    return poly_monic(F, f)


def poly_eval(F, f, x):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_mulmod(F, f, g, m):
    return poly_mod(F, poly_mul(F, f, g), m)


def poly_powmod(F, f, e, m):
    """f^e mod m by square and multiply."""
    result = [F.one]
    f = poly_mod(F, f, m)
    while e:
        if e & 1:
            result = poly_mulmod(F, result, f, m)
        f = poly_mulmod(F, f, f, m)
        e >>= 1
    return result


def poly_derivative(F, f):
    out = []
    for i in range(1, len(f)):
        out.append(F.mul(F.from_int(i), f[i]))
    return poly_trim(F, out)


def squarefree_decomposition(F, f):
    """Return [(g1, 1), (g2, 2), ...] with f = lead * prod gi^i, gi squarefree.

    Yun's algorithm.  Valid here because every polynomial we factor has
    degree < char(F), so f' = 0 only for constant f.
    """
    lead = f[-1]
    f = poly_monic(F, f)
    d = poly_derivative(F, f)
    if not d:
        if poly_deg(f) > 0:
            raise ValueError("inseparable polynomial: degree >= characteristic")
        return [], lead
    a = poly_gcd(F, f, d)
    b = poly_divmod(F, f, a)[0]
    c = poly_divmod(F, d, a)[0]
    out = []
    i = 1
    while poly_deg(b) > 0:
        delta = poly_sub(F, c, poly_derivative(F, b))
        g = poly_gcd(F, b, delta)
        if poly_deg(g) > 0:
            out.append((g, i))
        b = poly_divmod(F, b, g)[0]
        c = poly_divmod(F, delta, g)[0]
        i += 1
    return out, lead


def _frobenius_power(F, order, m):
    """x^order mod m."""
    return poly_powmod(F, [F.zero, F.one], order, m)


def distinct_root_count(F, f, order):
    """Number of distinct roots of f in the field with `order` elements
    containing F (order must be a power of |F|).  Pure counting, no roots."""
    f = poly_monic(F, f)
    xq = _frobenius_power(F, order, f)
    g = poly_gcd(F, poly_sub(F, xq, [F.zero, F.one]), f)
    return poly_deg(g)


def _split_root_poly(F, h, rng):
    """Cantor-Zassenhaus equal-degree splitting of h = prod of distinct
    linear factors over F.  Returns the list of roots."""
    if poly_deg(h) == 0:
        return []
    if poly_deg(h) == 1:
        # h = x + c  ->  root -c
        return [F.neg(h[0])]
    half = (F.order - 1) // 2
    while True:
        a = F.random_element(rng)
        probe = poly_powmod(F, [a, F.one], half, h)
        probe = poly_sub(F, probe, [F.one])
        g = poly_gcd(F, probe, h)
        if 0 < poly_deg(g) < poly_deg(h):
            rest = poly_divmod(F, h, g)[0]
            return _split_root_poly(F, g, rng) + _split_root_poly(F, rest, rng)


SCAN_LIMIT = 10**6


def _scan_roots_tabled(F, f):
    """Exhaustive scan of an extension field with log/exp multiplication.

    Same semantics as the naive scan; the discrete-log tables only replace
    the polynomial multiplications inside the Horner loop."""
    F.build_log_tables()
    log, exp = F._log, F._exp
    n = F.order - 1
    roots = []
    if F.is_zero(poly_eval(F, f, F.zero)):
        roots.append(F.zero)
    coeffs = list(reversed(f))
    add = F.add
    enc = F.encode
    for i in range(n):
        x = exp[i]
        acc = coeffs[0]
        for c in coeffs[1:]:
            if F.is_zero(acc):
                acc = c
            else:
                acc = exp[(log[enc(acc)] + i) % n]
                acc = add(acc, c)
        if F.is_zero(acc):
            roots.append(x)
    return sorted(roots, key=F.sort_key)


def roots_in_field(F, f, seed=None):
    """All roots of f in F (without multiplicity), sorted canonically.

    Exhaustively scans when |F| <= 10^6 and falls back to gcd with the field
    polynomial plus seeded Cantor-Zassenhaus splitting above that.  The seed
    is derived from the polynomial so results are reproducible and do not
    depend on call order.
    """
    f = poly_trim(F, f)
    if not f:
        raise ValueError("zero polynomial has every root")
    if poly_deg(f) == 0:
        return []
    if F.order <= SCAN_LIMIT:
        if hasattr(F, "build_log_tables") and F.order > 4096:
            return _scan_roots_tabled(F, f)
        roots = [x for x in F.iter_elements() if F.is_zero(poly_eval(F, f, x))]
        return sorted(roots, key=F.sort_key)
    # gcd with x^q - x isolates the F-rational part, then split it
    h = poly_gcd(F, poly_sub(F, _frobenius_power(F, F.order, poly_monic(F, f)),
                             [F.zero, F.one]), f)
    if poly_deg(h) <= 0:
        return []
    if seed is None:
        seed = hash((F.order, tuple(F.sort_key(c) for c in f))) & 0xFFFFFFFF
    rng = random.Random(seed)
    return sorted(_split_root_poly(F, poly_monic(F, h), rng), key=F.sort_key)


def roots_with_multiplicity(F, f, seed=None):
    """[(root, multiplicity)] for all roots of f in F, sorted canonically."""
    decomp, _ = squarefree_decomposition(F, f)
    out = {}
    for g, mult in decomp:
        for r in roots_in_field(F, g, seed=seed):
            out[r] = mult
    return sorted(out.items(), key=lambda t: F.sort_key(t[0]))


def _pow(F, a, e):
    out = F.one
    while e:
        if e & 1:
            out = F.mul(out, a)
        a = F.mul(a, a)
        e >>= 1
    return out


def field_sqrt(F, a):
    """A square root of a in the finite field F, or None (Tonelli-Shanks)."""
    if F.is_zero(a):
        return F.zero
    q = F.order
    if not F.eq(_pow(F, a, (q - 1) // 2), F.one):
        return None
    # write q - 1 = 2^s * t with t odd
    t, s = q - 1, 0
    while t % 2 == 0:
        t //= 2
        s += 1
    if s == 1:
        return _pow(F, a, (q + 1) // 4)
    # find a non-residue deterministically
    n = None
    for cand in F.iter_elements():
        if F.is_zero(cand):
            continue
        if not F.eq(_pow(F, cand, (q - 1) // 2), F.one):
            n = cand
            break
    c = _pow(F, n, t)
    r = _pow(F, a, (t + 1) // 2)
    u = _pow(F, a, t)
    m = s
    while not F.eq(u, F.one):
        # find least i with u^(2^i) = 1
        i = 0
        probe = u
        while not F.eq(probe, F.one):
            probe = F.mul(probe, probe)
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = F.mul(b, b)
        r = F.mul(r, b)
        c = F.mul(b, b)
        u = F.mul(u, c)
        m = i
    return r


def quadratic_roots(F, a2, a1, a0):
    """Distinct roots in F of a2 x^2 + a1 x + a0 (not all coeffs zero).

    Requires odd characteristic.  Degenerate leading coefficients fall back
    to the linear case.
    """
    if F.is_zero(a2):
        if F.is_zero(a1):
            return []
        return [F.neg(F.div(a0, a1))]
    disc = F.sub(F.mul(a1, a1), F.mul(F.from_int(4), F.mul(a2, a0)))
    if not F.is_finite:
        raise ValueError("quadratic_roots expects a finite field")
    s = field_sqrt(F, disc)
    if s is None:
        return []
    inv = F.inv(F.mul(F.from_int(2), a2))
    r1 = F.mul(F.sub(s, a1), inv)
    r2 = F.mul(F.sub(F.neg(s), a1), inv)
    if F.eq(r1, r2):
        return [r1]
    return sorted([r1, r2], key=F.sort_key)


def low_degree_roots(F, f, seed=None):
    """Roots in F of a polynomial, using closed forms through degree 2."""
    f = poly_trim(F, f)
    d = poly_deg(f)
    if d <= 0:
        return []
    if d == 1:
        return [F.neg(F.div(f[0], f[1]))]
    if d == 2 and F.is_finite:
        return quadratic_roots(F, f[2], f[1], f[0])
    return roots_in_field(F, f, seed=seed)
