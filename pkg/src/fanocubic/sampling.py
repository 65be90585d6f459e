"""Seeded random generation of cubics and classes.

All randomness in the package flows through random.Random (the Mersenne
Twister), seeded explicitly, so reports and experiments reproduce across
platforms and worker counts.
"""

from __future__ import annotations

import random

from .forms import HomForm, random_form
from .jacobian import build_context


def rng_from_seed(seed):
    return random.Random(seed)


def random_cubic(field, rng):
    return random_form(field, 5, 3, rng)


def random_smooth_context(field, rng, max_tries=200):
    """Sample cubics until one is smooth (almost always the first)."""
    for _ in range(max_tries):
        E = random_cubic(field, rng)
        if E.is_zero():
            continue
        ctx = build_context(E)
        if ctx.smooth:
            return ctx
    raise RuntimeError("no smooth cubic found (bad generator?)")


def random_nonzero_class_coords(ctx, rng):
    """Coordinates of a random nonzero degree-3 class in the quotient basis."""
    F = ctx.field
    while True:
        coords = [F.random_element(rng) for _ in range(ctx.dims[3])]
        if any(not F.is_zero(c) for c in coords):
            return coords


def class_from_coords(ctx, coords):
    F = ctx.field
    rep = HomForm.zero(F, 5, 3)
    for c, expo in zip(coords, ctx.basis_exponents(3)):
        if not F.is_zero(c):
            rep = rep + HomForm.monomial(F, 5, expo, c)
    return rep
