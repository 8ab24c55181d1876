"""Exact arithmetic in F_p and its extension stages F_{p^m}.

A stage F_{p^m} is represented as F_p[x]/(f) where f is the modulus picked
deterministically: the first monic irreducible of degree m when coefficient
vectors (c_0, ..., c_{m-1}) are enumerated in lexicographic order.  Elements
are coefficient vectors in the same low-to-high convention, and every
ordering exposed by the package (roots, point lists, labels) is the
lexicographic order on those vectors.

The characteristic is kept odd and below 2**31 so that equal-degree
splitting can use the classical quadratic-residue trick and single word
arithmetic stays exact.
"""

from __future__ import annotations

import random
import threading

from .errors import (
    DegreeGuardExceeded,
    IncompatibleDegrees,
    NonPrime,
    ZeroPolynomial,
)

MAX_DEGREE = 24
MAX_CHAR = 2 ** 31

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin, valid far beyond 2**31 with these bases
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# dense univariate arithmetic over Z/p on plain int tuples (low degree first)

def _trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _padd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _trim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return _trim(out)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a, b, p):
    assert b, "division by zero polynomial"
    lead = b[-1]
    inv = pow(lead, p - 2, p)
    rem = list(a)
    db = len(b) - 1
    if len(a) < len(b):
        return (), _trim(rem)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = rem[i] % p
        if c == 0:
            continue
        q = c * inv % p
        quo[i - db] = q
        for j in range(len(b)):
            rem[i - db + j] = (rem[i - db + j] - q * b[j]) % p
    return _trim(quo), _trim(rem)


def _pmulmod(a, b, mod, p):
    return _pdivmod(_pmul(a, b, p), mod, p)[1]


def _ppowmod(a, e, mod, p):
    result = (1,)
    base = _pdivmod(a, mod, p)[1]
    while e > 0:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(c * inv % p for c in a)
    return a


def _pgcdext(a, b, p):
    # returns (g, u) with u*a = g mod b, g the monic gcd
    r0, r1 = a, b
    u0, u1 = (1,), ()
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, _psub(u0, _pmul(q, u1, p), p)
    if r0:
        inv = pow(r0[-1], p - 2, p)
        r0 = tuple(c * inv % p for c in r0)
        u0 = tuple(c * inv % p for c in u0)
    return r0, u0


def _zp_is_irreducible(f, p):
    """Rabin's test for a monic polynomial over F_p, fully deterministic."""
    m = len(f) - 1
    if m < 1:
        return False
    x = (0, 1)
    # x^(p^m) == x mod f
    power = x
    for _ in range(m):
        power = _ppowmod(power, p, f, p)
    if power != _pdivmod(x, f, p)[1]:
        return False
    for ell in _prime_divisors(m):
        power = x
        for _ in range(m // ell):
            power = _ppowmod(power, p, f, p)
        g = _pgcd(_psub(power, x, p), f, p)
        if g != (1,):
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


# ---------------------------------------------------------------------------
# fields

class FieldElement:
    """An element of a PrimeField or ExtField, stored as a coefficient vector."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            raise IncompatibleDegrees(
                "elements of %r and %r do not mix" % (self.field, other.field))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        c = _padd(self.coeffs, o.coeffs, p)
        return FieldElement(self.field, self.field._pad(c))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = _psub(self.coeffs, o.coeffs, self.field.p)
        return FieldElement(self.field, self.field._pad(c))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-c) % p for c in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        c = _pmul(self.coeffs, o.coeffs, f.p)
        if f.degree > 1:
            c = _pdivmod(c, f._mod, f.p)[1]
        else:
            c = _trim(c)
        return FieldElement(f, f._pad(c))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in %r" % (self.field,))
        f = self.field
        if f.degree == 1:
            a = self.coeffs[0]
            return FieldElement(f, (pow(a, f.p - 2, f.p),))
        _, u = _pgcdext(_trim(self.coeffs), f._mod, f.p)
        return FieldElement(f, f._pad(u))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e):
        f = self.field
        if e < 0:
            return self.inverse() ** (-e)
        base = self
        result = f.one
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def label(self):
        """Canonical sortable label: the coefficient vector itself."""
        return self.coeffs

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.degree, self.coeffs))

    def __repr__(self):
        f = self.field
        if f.degree == 1:
            return "F%d(%d)" % (f.p, self.coeffs[0])
        return "F%d_%d%r" % (f.p, f.degree, list(self.coeffs))


class PrimeField:
    """The prime field F_p for an odd prime p below 2**31."""

    __slots__ = ("p", "zero", "one")
    degree = 1

    def __init__(self, p):
        if not isinstance(p, int) or not _is_prime(p):
            raise NonPrime("p = %r is not prime" % (p,))
        if not (2 < p < MAX_CHAR):
            raise NonPrime("p = %r outside the supported range 2 < p < 2**31" % (p,))
        self.p = p
        self.zero = FieldElement(self, (0,))
        self.one = FieldElement(self, (1,))

    @property
    def order(self):
        return self.p

    def _pad(self, coeffs):
        return coeffs if coeffs else (0,)

    def from_int(self, a):
        return FieldElement(self, (a % self.p,))

    def element(self, coeffs):
        assert len(coeffs) == 1
        return FieldElement(self, (coeffs[0] % self.p,))

    def __iter__(self):
        for a in range(self.p):
            yield FieldElement(self, (a,))

    def __eq__(self, other):
        if isinstance(other, PrimeField):
            return self.p == other.p
        return NotImplemented

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return "PrimeField(%d)" % self.p


class ExtField:
    """The stage F_{p^m} presented as F_p[x]/(modulus)."""

    __slots__ = ("base", "p", "degree", "_mod", "zero", "one", "gen", "_frob_gen")

    def __init__(self, base: PrimeField, degree: int, modulus):
        self.base = base
        self.p = base.p
        self.degree = degree
        self._mod = modulus  # int tuple, monic, low degree first
        self.zero = FieldElement(self, (0,) * degree)
        self.one = FieldElement(self, self._pad((1,)))
        self.gen = FieldElement(self, self._pad((0, 1))) if degree > 1 else self.one
        # image of the generator under x -> x^p, used to apply Frobenius fast
        self._frob_gen = FieldElement(self, self._pad(_ppowmod((0, 1), self.p, modulus, self.p)))

    @property
    def order(self):
        return self.p ** self.degree

    @property
    def modulus(self):
        return self._mod

    def _pad(self, coeffs):
        if len(coeffs) < self.degree:
            return tuple(coeffs) + (0,) * (self.degree - len(coeffs))
        return tuple(coeffs[: self.degree])

    def from_int(self, a):
        return FieldElement(self, self._pad((a % self.p,)))

    def element(self, coeffs):
        assert len(coeffs) <= self.degree
        return FieldElement(self, self._pad(tuple(c % self.p for c in coeffs)))

    def __iter__(self):
        # lexicographic on coefficient vectors
        def rec(prefix):
            if len(prefix) == self.degree:
                yield FieldElement(self, tuple(prefix))
                return
            for c in range(self.p):
                yield from rec(prefix + [c])
        yield from rec([])

    def __eq__(self, other):
        if isinstance(other, ExtField):
            return self.p == other.p and self.degree == other.degree and self._mod == other._mod
        return NotImplemented

    def __hash__(self):
        return hash(("ext", self.p, self.degree, self._mod))

    def __repr__(self):
        return "ExtField(%d, %d)" % (self.p, self.degree)


_FIELD_CACHE: dict = {}
_EMBED_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def make_ext_field(p: int, m: int) -> ExtField:
    """Build F_{p^m} with the deterministic modulus, memoized per (p, m)."""
    base = PrimeField(p)  # validates p
    if not isinstance(m, int) or m < 1 or m > MAX_DEGREE:
        raise DegreeGuardExceeded("extension degree m = %r outside 1..%d" % (m, MAX_DEGREE))
    with _CACHE_LOCK:
        cached = _FIELD_CACHE.get((p, m))
    if cached is not None:
        return cached
    modulus = _search_modulus(p, m)
    field = ExtField(base, m, modulus)
    with _CACHE_LOCK:
        cached = _FIELD_CACHE.setdefault((p, m), field)
    return cached


def _search_modulus(p, m):
    # enumerate coefficient vectors (c_0, ..., c_{m-1}) lexicographically;
    # for m > 1 a zero constant term forces the factor x, so that whole
    # block is skipped without changing which vector comes first
    def rec(prefix):
        if len(prefix) == m:
            f = tuple(prefix) + (1,)
            if _zp_is_irreducible(f, p):
                return f
            return None
        start = 1 if (not prefix and m > 1) else 0
        for c in range(start, p):
            got = rec(prefix + [c])
            if got is not None:
                return got
        return None

    f = rec([])
    assert f is not None, "no irreducible of degree %d over F_%d" % (m, p)
    return f


def stage_field(p: int, n: int):
    """The stage of degree n over F_p; n = 1 gives the prime stage itself."""
    if n == 1:
        return PrimeField(p)
    return make_ext_field(p, n)


def frobenius(x: FieldElement) -> FieldElement:
    """The arithmetic Frobenius a -> a^p."""
    f = x.field
    if f.degree == 1:
        return x
    # evaluate the coefficient polynomial at gen^p
    acc = f.zero
    g = f._frob_gen
    for c in reversed(x.coeffs):
        acc = acc * g + f.from_int(c)
    return acc


def embed(x: FieldElement, target) -> FieldElement:
    """Canonical embedding of x into a larger stage.

    The parent degree must divide the target degree.  The image of the
    parent generator is the label-smallest root of the parent modulus in
    the target, fixed once per pair of stages; this commutes with
    Frobenius because any ring embedding does.
    """
    src = x.field
    if src == target:
        return x
    if target.degree % src.degree != 0:
        raise IncompatibleDegrees(
            "degree %d does not divide %d" % (src.degree, target.degree))
    if src.p != target.p:
        raise IncompatibleDegrees("different characteristics %d and %d" % (src.p, target.p))
    if src.degree == 1:
        return target.from_int(x.coeffs[0])
    key = ((src.p, src.degree, src._mod), (target.p, target.degree, getattr(target, "_mod", None)))
    with _CACHE_LOCK:
        gen_img = _EMBED_CACHE.get(key)
    if gen_img is None:
        mod_poly = UniPoly(target, [target.from_int(c) for c in src._mod])
        rs = roots_in(mod_poly, target)
        assert rs, "modulus has no root in the larger stage"
        gen_img = rs[0]
        with _CACHE_LOCK:
            gen_img = _EMBED_CACHE.setdefault(key, gen_img)
    acc = target.zero
    for c in reversed(x.coeffs):
        acc = acc * gen_img + target.from_int(c)
    return acc


# ---------------------------------------------------------------------------
# univariate polynomials over any stage

class UniPoly:
    """Dense univariate polynomial with FieldElement coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        while coeffs and coeffs[-1].is_zero():
            coeffs = coeffs[:-1]
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(a) for a in ints])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = a[i] + c
        return UniPoly(self.field, a)

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = a[i] - c
        return UniPoly(self.field, a)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return UniPoly(self.field, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly(self.field, [])
        z = self.field.zero
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return UniPoly(self.field, out)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        f = self.field
        inv = other.coeffs[-1].inverse()
        rem = list(self.coeffs)
        db = other.degree
        if self.degree < db:
            return UniPoly(f, []), self
        quo = [f.zero] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c.is_zero():
                continue
            q = c * inv
            quo[i - db] = q
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] = rem[i - db + j] - q * b
        return UniPoly(f, quo), UniPoly(f, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero():
            raise ZeroPolynomial("monic of zero")
        inv = self.coeffs[-1].inverse()
        return UniPoly(self.field, [c * inv for c in self.coeffs])

    def derivative(self):
        f = self.field
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            out.append(c * f.from_int(i))
        return UniPoly(f, out)

    def evaluate(self, x: FieldElement) -> FieldElement:
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def pow_mod(self, e, mod):
        f = self.field
        result = UniPoly(f, [f.one])
        base = self % mod
        while e > 0:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def map_coefficients(self, target):
        """Push coefficients into a larger stage via the canonical embedding."""
        return UniPoly(target, [embed(c, target) for c in self.coeffs])

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        bits = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            bits.append("%r*x^%d" % (c, i))
        return "UniPoly(%s)" % " + ".join(bits)


def is_irreducible(f: UniPoly) -> bool:
    """Rabin's deterministic criterion over the coefficient stage."""
    if f.is_zero():
        raise ZeroPolynomial("irreducibility of zero")
    m = f.degree
    if m == 0:
        return False
    field = f.field
    q = field.order
    g = f.monic()
    x = UniPoly(field, [field.zero, field.one])
    power = x
    for _ in range(m):
        power = power.pow_mod(q, g)
    if (power - x) % g != UniPoly(field, []):
        return False
    for ell in _prime_divisors(m):
        power = x
        for _ in range(m // ell):
            power = power.pow_mod(q, g)
        if (power - x).gcd(g).degree != 0:
            return False
    return True


def _pth_root(f: UniPoly) -> UniPoly:
    """Inverse of c -> c^p on coefficients, for polynomials in x^p."""
    field = f.field
    p = field.p
    m = field.degree
    out = []
    for i in range(0, len(f.coeffs), p):
        c = f.coeffs[i]
        # c^(p^(m-1)) is the p-th root in F_{p^m}
        r = c
        for _ in range(m - 1):
            r = r ** p
        out.append(r)
    return UniPoly(field, out)


def _squarefree_parts(f: UniPoly):
    """Yield (squarefree factor, multiplicity) pairs for monic f, char p aware."""
    field = f.field
    p = field.p
    one = UniPoly(field, [field.one])

    def rec(g, mult):
        if g.degree < 1:
            return
        d = g.derivative()
        if d.is_zero():
            yield from rec(_pth_root(g), mult * p)
            return
        w = g.gcd(d)
        v = (g // w).monic()
        i = 1
        while v.degree > 0:
            y = v.gcd(w)
            z = (v // y).monic()
            if z.degree > 0:
                yield z, i * mult
            v = y
            w = (w // y).monic()
            i += 1
        if w.degree > 0:
            yield from rec(_pth_root(w), mult * p)

    yield from rec(f.monic(), 1)


def _distinct_degree(f: UniPoly):
    """Split squarefree monic f into products of factors of equal degree."""
    field = f.field
    q = field.order
    x = UniPoly(field, [field.zero, field.one])
    out = []
    h = x
    rest = f
    d = 0
    while rest.degree > 2 * (d + 1) - 1 and rest.degree > 0:
        d += 1
        h = h.pow_mod(q, rest)
        g = (h - x).gcd(rest)
        if g.degree > 0:
            out.append((g, d))
            rest = (rest // g).monic()
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _equal_degree_split(f: UniPoly, d: int, rng: random.Random):
    """Cantor-Zassenhaus splitting; the characteristic is odd by construction."""
    field = f.field
    q = field.order
    if f.degree == d:
        return [f]
    exponent = (q ** d - 1) // 2
    one = UniPoly(field, [field.one])
    while True:
        r = UniPoly(field, [field.element(tuple(rng.randrange(field.p)
                                                for _ in range(field.degree)))
                            for _ in range(f.degree)])
        if r.degree < 1:
            continue
        g = r.gcd(f)
        if 0 < g.degree < f.degree:
            a, b = g, (f // g).monic()
        else:
            h = r.pow_mod(exponent, f) - one
            g = h.gcd(f)
            if not (0 < g.degree < f.degree):
                continue
            a, b = g.monic(), (f // g).monic()
        return _equal_degree_split(a, d, rng) + _equal_degree_split(b, d, rng)


def factor_univariate(f: UniPoly, rng: random.Random | None = None):
    """Full factorization into monic irreducibles with multiplicities.

    Returns (unit, [(factor, multiplicity), ...]) with factors sorted by
    degree then coefficient labels, so the output does not depend on the
    random stream used for equal-degree splitting.
    """
    if f.is_zero():
        raise ZeroPolynomial("factor of zero")
    if rng is None:
        rng = random.Random(0)
    unit = f.coeffs[-1]
    work = f.monic()
    found = []
    if work.degree == 0:
        return unit, []
    for sqf, mult in _squarefree_parts(work):
        for block, d in _distinct_degree(sqf):
            for irr in _equal_degree_split(block, d, rng):
                found.append((irr, mult))
    found.sort(key=lambda fm: (fm[0].degree, tuple(c.label() for c in fm[0].coeffs)))
    return unit, found


def roots_in(f: UniPoly, field) -> list:
    """Roots of f inside the given stage, in label order.

    Coefficients of f must already live in that stage (use
    map_coefficients first when they come from a smaller one).
    """
    if f.field != field:
        f = f.map_coefficients(field)
    if f.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    if f.degree == 0:
        return []
    _, factors = factor_univariate(f)
    out = []
    for g, _ in factors:
        if g.degree == 1:
            out.append(-g.coeffs[0])
    out.sort(key=lambda r: r.label())
    return out
