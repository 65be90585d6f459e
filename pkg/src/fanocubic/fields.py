"""Exact coefficient fields: the rationals, prime fields, and their extensions.

Scalars are plain Python data and all arithmetic goes through a field object:

  * RationalField      -- scalars are fractions.Fraction
  * PrimeField(p)      -- scalars are ints in [0, p)
  * ExtensionField     -- scalars are k-tuples of ints, coefficients of
                          1, a, ..., a^(k-1) where a is a root of the modulus

Extension moduli are not chosen at random: we take the lexicographically
smallest monic irreducible polynomial of the right degree (ordering monic
x^k + c_{k-1} x^{k-1} + ... + c_0 by the integer encoding sum c_i p^i), so a
field specification determines the arithmetic bit for bit.

Characteristics 2 and 3 are rejected unless explicitly overridden: the cubic
geometry this package exists for degenerates there (Euler's identity and the
Hessian degree both involve the degree 3).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from . import univariate as uv


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class RationalField:
    """The rationals, scalars are Fraction instances."""

    characteristic = 0
    order = 0          # 0 marks an infinite field
    degree = 1
    is_finite = False

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return Fraction(1) / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def eq(self, a, b):
        return a == b

    def sort_key(self, a):
        return (a.numerator, a.denominator)

    def coerce(self, a):
        if isinstance(a, Fraction):
            return a
        if isinstance(a, int):
            return Fraction(a)
        raise TypeError(f"cannot coerce {a!r} into QQ")

    def format_scalar(self, a):
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def parse_scalar(self, text):
        return Fraction(text.strip())

    def random_element(self, rng, bound=9):
        return Fraction(rng.randint(-bound, bound))

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """F_p with scalars stored as ints in [0, p)."""

    is_finite = True
    degree = 1

    def __init__(self, p):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def from_int(self, n):
        return n % self.p

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def sort_key(self, a):
        return a % self.p

    def coerce(self, a):
        if isinstance(a, int):
            return a % self.p
        if isinstance(a, Fraction):
            if a.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (a.numerator * self.inv(a.denominator % self.p)) % self.p
        raise TypeError(f"cannot coerce {a!r} into GF({self.p})")

    def format_scalar(self, a):
        return str(a % self.p)

    def parse_scalar(self, text):
        return self.coerce(Fraction(text.strip()))

    def iter_elements(self):
        return iter(range(self.p))

    def random_element(self, rng):
        return rng.randrange(self.p)

    def encode(self, a):
        return a % self.p

    def decode(self, n):
        return n % self.p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int):
    """Coefficients (c_0, ..., c_{k-1}) of the lexicographically smallest
    monic irreducible of degree k over F_p (smallest integer encoding
    sum c_i p^i)."""
    F = PrimeField(p)
    x_poly = [0, 1]
    for enc in range(p ** k):
        coeffs = []
        e = enc
        for _ in range(k):
            coeffs.append(e % p)
            e //= p
        f = coeffs + [1]  # monic
        if _is_irreducible(F, f, p, k):
            return tuple(coeffs)
    raise RuntimeError("no irreducible polynomial found (impossible)")


def _is_irreducible(F, f, p, k):
    """Rabin's criterion: x^(p^k) = x mod f and, for every prime l | k,
    gcd(x^(p^(k/l)) - x, f) = 1 (no factor of degree dividing k/l)."""
    if k == 1:
        return True
    x = [0, 1]
    xq = uv.poly_powmod(F, x, p ** k, f)
    if uv.poly_sub(F, xq, x):
        return False
    for l in _prime_divisors(k):
        xe = uv.poly_powmod(F, x, p ** (k // l), f)
        g = uv.poly_gcd(F, uv.poly_sub(F, xe, x), f)
        if uv.poly_deg(g) != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class ExtensionField:
    """F_{p^k} = F_p[x]/(modulus); scalars are k-tuples of ints."""

    is_finite = True

    def __init__(self, p, k, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 2:
            raise ValueError("use PrimeField for degree 1")
        self.p = p
        self.k = k
        self.degree = k
        self.characteristic = p
        self.order = p ** k
        self.base = PrimeField(p)
        if modulus is None:
            modulus = smallest_irreducible(p, k)
        self.modulus = tuple(modulus)  # low coefficients, length k, monic x^k implied
        if not _is_irreducible(self.base, list(modulus) + [1], p, k):
            raise ValueError("modulus is reducible")
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)
        # reduction table: x^(k+i) mod modulus for i = 0..k-2
        red = []
        cur = [(-c) % p for c in modulus]  # x^k
        red.append(tuple(cur))
        for _ in range(k - 2):
            cur = [0] + cur
            lead = cur[k]
            cur = cur[:k]
            if lead:
                cur = [(c - lead * m) % p for c, m in zip(cur, modulus)]
            red.append(tuple(cur))
        self._red = red
        self._log = None
        self._exp = None

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        out = [c % p for c in prod[:k]]
        for i in range(k, 2 * k - 1):
            c = prod[i] % p
            if c:
                row = self._red[i - k]
                for j in range(k):
                    out[j] = (out[j] + c * row[j]) % p
        return tuple(out)

    def inv(self, a):
        if all(c == 0 for c in a):
            raise ZeroDivisionError("inverse of 0")
        # extended Euclid in F_p[x]
        F = self.base
        f = list(self.modulus) + [1]
        g = uv.poly_trim(F, list(a))
        r0, r1 = f, g
        s0, s1 = [], [F.one]
        while uv.poly_deg(r1) > 0:
            q, r = uv.poly_divmod(F, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, uv.poly_sub(F, s0, uv.poly_mul(F, q, s1))
        c = F.inv(r1[0])
        inv = [F.mul(c, x) for x in s1]
        inv = inv + [0] * (self.k - len(inv))
        return tuple(inv[:self.k])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return all(c == 0 for c in a)

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def eq(self, a, b):
        return a == b

    def sort_key(self, a):
        return self.encode(a)

    def coerce(self, a):
        if isinstance(a, tuple) and len(a) == self.k:
            return tuple(c % self.p for c in a)
        if isinstance(a, int):
            return self.from_int(a)
        if isinstance(a, Fraction):
            if a.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            num = self.from_int(a.numerator)
            den = self.from_int(a.denominator)
            return self.div(num, den)
        raise TypeError(f"cannot coerce {a!r} into GF({self.p}^{self.k})")

    def format_scalar(self, a):
        return ",".join(str(c) for c in a)

    def parse_scalar(self, text):
        parts = [int(t) for t in text.strip().split(",")]
        if len(parts) == 1:
            return self.from_int(parts[0])
        if len(parts) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(parts)}")
        return tuple(c % self.p for c in parts)

    def encode(self, a):
        """Integer encoding sum a_i p^i, used for canonical ordering."""
        n = 0
        for c in reversed(a):
            n = n * self.p + c
        return n

    def decode(self, n):
        out = []
        for _ in range(self.k):
            out.append(n % self.p)
            n //= self.p
        return tuple(out)

    def iter_elements(self):
        for n in range(self.order):
            yield self.decode(n)

    def random_element(self, rng):
        return self.decode(rng.randrange(self.order))

    def frobenius(self, a, times=1):
        """a^(p^times)."""
        out = a
        for _ in range(times):
            out = _pow_scalar(self, out, self.p)
        return out

    def in_prime_subfield(self, a):
        return all(c == 0 for c in a[1:])

    def build_log_tables(self):
        """Discrete log/exp tables for orders up to the scan limit.

        Used to speed up exhaustive evaluation loops; built lazily once."""
        if self._log is not None:
            return
        if self.order > uv.SCAN_LIMIT:
            raise ValueError("field too large for log tables")
        g = self._find_generator()
        exp = [self.one]
        cur = self.one
        for _ in range(self.order - 2):
            cur = self.mul(cur, g)
            exp.append(cur)
        log = {self.encode(e): i for i, e in enumerate(exp)}
        self._exp = exp
        self._log = log

    def _find_generator(self):
        n = self.order - 1
        divisors = _prime_divisors(n)
        for enc in range(1, self.order):
            g = self.decode(enc)
            if self.is_zero(g):
                continue
            if all(not self.eq(_pow_scalar(self, g, n // l), self.one)
                   for l in divisors):
                return g
        raise RuntimeError("no generator found (impossible)")

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.p == self.p
                and other.k == self.k and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("GF", self.p, self.k, self.modulus))


def _pow_scalar(F, a, e):
    out = F.one
    while e:
        if e & 1:
            out = F.mul(out, a)
        a = F.mul(a, a)
        e >>= 1
    return out


def scalar_pow(F, a, e):
    """a^e in F, for e >= 0."""
    return _pow_scalar(F, a, e)


@dataclass(frozen=True)
class FieldSpec:
    """Declarative description of a coefficient field.

    kind 'rational' ignores p and k; kind 'prime-power' builds F_{p^k} with
    the deterministic smallest modulus.  p in {2, 3} is rejected unless
    allow_small_characteristic is set.
    """

    kind: str = "rational"
    p: int = 0
    k: int = 1
    allow_small_characteristic: bool = False

    def __post_init__(self):
        if self.kind not in ("rational", "prime-power"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "prime-power":
            if not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            if self.p in (2, 3) and not self.allow_small_characteristic:
                raise ValueError(
                    "characteristic 2 and 3 are rejected by default; "
                    "pass allow_small_characteristic=True to experiment")
            if self.k < 1:
                raise ValueError("extension degree must be >= 1")

    def build(self):
        if self.kind == "rational":
            return RationalField()
        if self.k == 1:
            return PrimeField(self.p)
        return ExtensionField(self.p, self.k)

    def label(self):
        if self.kind == "rational":
            return "0"
        if self.k == 1:
            return str(self.p)
        return f"{self.p}^{self.k}"


def parse_field_spec(text, allow_small_characteristic=False):
    """'0' -> QQ, 'p' -> F_p, 'p^k' -> F_{p^k}."""
    text = text.strip()
    if text == "0":
        return FieldSpec("rational")
    if "^" in text:
        p_str, k_str = text.split("^", 1)
        return FieldSpec("prime-power", int(p_str), int(k_str),
                         allow_small_characteristic)
    return FieldSpec("prime-power", int(text), 1, allow_small_characteristic)


@lru_cache(maxsize=None)
def field_of_order(p, k, allow_small_characteristic=False):
    """Cached field construction (fields are stateless value objects)."""
    if k == 1:
        return PrimeField(p)
    spec = FieldSpec("prime-power", p, k, allow_small_characteristic)
    return spec.build()


class Embedding:
    """Canonical embedding F_{p^j} -> F_{p^m} for j | m.

    The image of the small field's generator is the root of its modulus in
    the big field with the smallest integer encoding, so the embedding is
    deterministic.
    """

    def __init__(self, src, dst):
        if src.characteristic != dst.characteristic:
            raise ValueError("different characteristics")
        if dst.degree % src.degree != 0:
            raise ValueError(f"{src} does not embed into {dst}")
        self.src = src
        self.dst = dst
        if src.degree == 1:
            self._powers = None
        else:
            modulus = [dst.from_int(c) for c in src.modulus] + [dst.one]
            roots = uv.roots_in_field(dst, modulus)
            if not roots:
                raise RuntimeError("modulus has no root in target (impossible)")
            theta = roots[0]
            powers = [dst.one]
            for _ in range(src.degree - 1):
                powers.append(dst.mul(powers[-1], theta))
            self._powers = powers

    def __call__(self, a):
        if self.src.degree == 1:
            return self.dst.from_int(a)
        out = self.dst.zero
        for c, pw in zip(a, self._powers):
            if c:
                out = self.dst.add(out, self.dst.mul(self.dst.from_int(c), pw))
        return out

    def preimage(self, b):
        """Inverse map for elements in the image; None if b is not in it."""
        if self.src.degree == 1:
            # constants have all higher coordinates zero only if dst rep is such
            cand = b[0] if isinstance(b, tuple) else b
            if self.dst.eq(self(cand), b):
                return cand
            return None
        # solve sum c_i powers[i] = b over F_p
        from .linalg import rref_generic
        p = self.src.characteristic
        Fp = PrimeField(p)
        m = self.dst.degree
        cols = [list(pw) for pw in self._powers]
        target = list(b)
        rows = [[cols[i][r] for i in range(len(cols))] + [target[r]]
                for r in range(m)]
        rank, pivots, rr = rref_generic(Fp, rows)
        sol = [0] * self.src.degree
        for i, c in enumerate(pivots):
            if c == len(cols):
                return None  # inconsistent
            sol[c] = rr[i][len(cols)]
        if not self.dst.eq(self(tuple(sol)), b):
            return None
        return tuple(sol)


@lru_cache(maxsize=None)
def get_embedding(src, dst):
    return Embedding(src, dst)


def embed_scalar(src, dst, a):
    if src == dst:
        return a
    return get_embedding(src, dst)(a)
