"""Polynomial expression parsing and printing.

Grammar (whitespace-insensitive):

    expr  := term (('+' | '-') term)*
    term  := coeff? ('*'? var ('^' int)?)*
    var   := z0 | z1 | z2 | z3 | z4
    coeff := int | int '/' int

The printer emits terms in deglex order with explicit '*' and '^', and
parse(print(f)) reproduces f coefficient for coefficient.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .forms import HomForm, exponents, space_dim

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>z[0-4])|(?P<op>[+\-*/^()]))")


class ParseError(ValueError):
    pass


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at position {pos}: "
                             f"{text[pos:pos+10]!r}")
        if m.group("num"):
            out.append(("num", int(m.group("num"))))
        elif m.group("var"):
            out.append(("var", int(m.group("var")[1])))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


def parse_form(text, field, nvars=5, degree=None):
    """Parse a homogeneous form; degree inferred unless specified."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    terms = []          # (coefficient as Fraction, exponent tuple)
    sign = 1
    i = 0
    n = len(tokens)
    first = True
    while i < n:
        sign = 1
        if tokens[i] == ("op", "+"):
            if first:
                raise ParseError("leading '+'")
            i += 1
        elif tokens[i] == ("op", "-"):
            sign = -1
            i += 1
            while i < n and tokens[i] == ("op", "-"):
                sign = -sign
                i += 1
        elif not first:
            raise ParseError("expected '+' or '-' between terms")
        first = False
        coeff = Fraction(sign)
        expo = [0] * nvars
        saw_factor = False
        expect_factor = True
        while i < n:
            kind, val = tokens[i]
            if kind == "num":
                num = val
                i += 1
                if i < n and tokens[i] == ("op", "/"):
                    i += 1
                    if i >= n or tokens[i][0] != "num":
                        raise ParseError("malformed rational coefficient")
                    den = tokens[i][1]
                    if den == 0:
                        raise ParseError("zero denominator")
                    i += 1
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
                saw_factor = True
            elif kind == "var":
                if val >= nvars:
                    raise ParseError(f"unknown variable z{val}")
                e = 1
                i += 1
                if i < n and tokens[i] == ("op", "^"):
                    i += 1
                    if i >= n or tokens[i][0] != "num":
                        raise ParseError("malformed exponent")
                    e = tokens[i][1]
                    i += 1
                expo[val] += e
                saw_factor = True
            elif (kind, val) == ("op", "*"):
                i += 1
                continue
            else:
                break
        if not saw_factor:
            raise ParseError("empty term")
        terms.append((coeff, tuple(expo)))
    degrees = {sum(e) for _, e in terms}
    if len(degrees) > 1:
        raise ParseError(f"non-homogeneous expression: degrees {sorted(degrees)}")
    d = degrees.pop()
    if degree is not None and d != degree:
        raise ParseError(f"expected degree {degree}, found degree {d}")
    coeffs = [field.zero] * space_dim(nvars, d)
    from .forms import exponent_index
    idx = exponent_index(nvars, d)
    for c, e in terms:
        try:
            scalar = field.coerce(c)
        except ZeroDivisionError as exc:
            raise ParseError(str(exc)) from exc
        coeffs[idx[e]] = field.add(coeffs[idx[e]], scalar)
    return HomForm(field, nvars, d, coeffs)


def parse_cubic(text, field):
    """Parse a homogeneous cubic in z0..z4 (the CLI entry point)."""
    return parse_form(text, field, nvars=5, degree=3)


def form_to_text(form):
    """Canonical expression text, deglex term order; parses back exactly."""
    F = form.field
    parts = []
    for expo, c in zip(exponents(form.nvars, form.degree), form.coeffs):
        if F.is_zero(c):
            continue
        cs = F.format_scalar(c)
        factors = []
        for v, e in enumerate(expo):
            if e == 1:
                factors.append(f"z{v}")
            elif e >= 2:
                factors.append(f"z{v}^{e}")
        if not factors:
            term = cs
        elif cs == "1":
            term = "*".join(factors)
        elif cs == "-1":
            term = "-" + "*".join(factors)
        else:
            term = "*".join([cs] + factors)
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for t in parts[1:]:
        if t.startswith("-"):
            out += "-" + t[1:]
        else:
            out += "+" + t
    return out


def read_coefficient_file(path, field, nvars=5, degree=3):
    """One scalar per line, deglex order, length C(degree+4, 4)."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    want = space_dim(nvars, degree)
    if len(lines) != want:
        raise ValueError(f"expected {want} coefficient lines, got {len(lines)}")
    return HomForm(field, nvars, degree,
                   [field.parse_scalar(ln) for ln in lines])


def write_coefficient_file(path, form):
    with open(path, "w") as fh:
        for c in form.coeffs:
            fh.write(form.field.format_scalar(c) + "\n")


def load_cubic(source, field):
    """A cubic from a file (expression or coefficient list) or literal text."""
    import os
    if os.path.exists(source):
        with open(source) as fh:
            content = fh.read().strip()
        if "z" in content:
            return parse_cubic(content, field)
        return read_coefficient_file(source, field)
    if "z" in source:
        return parse_cubic(source, field)
    raise ValueError(f"no such file and not an expression: {source!r}")
