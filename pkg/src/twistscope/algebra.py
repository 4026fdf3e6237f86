"""Exact arithmetic mod p: symbols, polynomials, and small extension fields.

Polynomials over F_p are coefficient lists in ascending degree with
coefficients reduced to [0, p) and no trailing zeros ([] is the zero
polynomial).  Extension fields F_{p^i} are F_p[t]/(m(t)) for a monic
irreducible m found by a deterministic scan, so equal (p, i) always
produce the same field and all derived output is reproducible.

Everything here is pure and exact; p = 2 is rejected throughout because
the curve-counting layer assumes odd characteristic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

# Cap on the field characteristic accepted by FieldSpec.  The counting
# kernels accumulate sums of up to ~8 products of residues in signed
# 64-bit integers, so p < 2^25 keeps every intermediate below 2^54.
MAX_FIELD_CHAR = 1 << 25

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@functools.lru_cache(maxsize=1 << 15)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all machine-range integers."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
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


def odd_primes(lo: int, hi: int) -> list[int]:
    """All odd primes p with lo <= p <= hi, ascending (sieve)."""
    if hi < 3:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for q in range(2, int(hi**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = b"\x00" * len(range(q * q, hi + 1, q))
    return [p for p in range(max(lo, 3) | 1, hi + 1, 2) if sieve[p]]


def _require_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p={p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, +1} via the Euler criterion."""
    _require_odd_prime(p)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for nonzero d and odd positive n.

    For odd n this is the Jacobi symbol, completely multiplicative in n,
    and equal to legendre(d, n) for prime n not dividing d.
    """
    if d == 0:
        raise ValueError("kronecker symbol undefined for d=0")
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"n={n} must be odd and positive")
    a = d % n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a mod p, or None if a is a non-residue (Tonelli-Shanks)."""
    _require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # p-1 = t * 2^s with t odd
    t, s = p - 1, 0
    while t % 2 == 0:
        t //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    g = pow(z, t, p)
    x = pow(a, (t + 1) // 2, p)
    b = pow(a, t, p)
    r = s
    while b != 1:
        m, sq = 0, b
        while sq != 1:
            sq = sq * sq % p
            m += 1
        w = pow(g, 1 << (r - m - 1), p)
        g = w * w % p
        x = x * w % p
        b = b * g % p
        r = m
    return x


# ---------------------------------------------------------------------------
# polynomials over F_p
# ---------------------------------------------------------------------------


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class PolyModP:
    """Polynomial over F_p, coefficients ascending, canonical form."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _require_odd_prime(self.p)
        object.__setattr__(self, "coeffs", _trim([c % self.p for c in self.coeffs]))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: "PolyModP") -> "PolyModP":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = (out[k] + c) % self.p
        return PolyModP(self.p, out)

    def __sub__(self, other: "PolyModP") -> "PolyModP":
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for k, c in enumerate(other.coeffs):
            out[k] = (out[k] - c) % self.p
        return PolyModP(self.p, out)

    def __mul__(self, other: "PolyModP") -> "PolyModP":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return PolyModP(self.p, ())
        out = [0] * (len(a) + len(b) - 1)
        for j, aj in enumerate(a):
            if aj:
                for k, bk in enumerate(b):
                    out[j + k] += aj * bk
        return PolyModP(self.p, out)

    def scale(self, c: int) -> "PolyModP":
        return PolyModP(self.p, [c * a for a in self.coeffs])

    def __divmod__(self, other: "PolyModP") -> tuple["PolyModP", "PolyModP"]:
        if other.is_zero:
            raise ValueError("polynomial division by zero")
        p = self.p
        inv_lead = pow(other.coeffs[-1], p - 2, p)
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return PolyModP(p, ()), self
        quo = [0] * (dq + 1)
        for shift in range(dq, -1, -1):
            c = rem[shift + other.degree] * inv_lead % p
            if c:
                quo[shift] = c
                for k, bk in enumerate(other.coeffs):
                    rem[shift + k] = (rem[shift + k] - c * bk) % p
        return PolyModP(p, quo), PolyModP(p, rem)

    def __mod__(self, other: "PolyModP") -> "PolyModP":
        return divmod(self, other)[1]

    def monic(self) -> "PolyModP":
        if self.is_zero or self.is_monic:
            return self
        return self.scale(pow(self.coeffs[-1], self.p - 2, self.p))

    def derivative(self) -> "PolyModP":
        return PolyModP(self.p, [k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc


def poly_x(p: int) -> PolyModP:
    return PolyModP(p, (0, 1))


def poly_gcd(a: PolyModP, b: PolyModP) -> PolyModP:
    """Monic gcd; poly_gcd(0, 0) is the zero polynomial."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_powmod(base: PolyModP, e: int, m: PolyModP) -> PolyModP:
    """base^e reduced mod m, by square and multiply."""
    if m.is_zero:
        raise ValueError("zero modulus")
    if e < 0:
        raise ValueError("negative exponent")
    result = PolyModP(base.p, (1,)) % m
    acc = base % m
    while e:
        if e & 1:
            result = (result * acc) % m
        acc = (acc * acc) % m
        e >>= 1
    return result


def ddf_degrees(h: PolyModP) -> list[tuple[int, int]]:
    """Degrees of the irreducible factors of a monic squarefree h mod p.

    Returns (degree, count) pairs, ascending in degree, via successive
    gcd(h, x^(p^j) - x).  The factors themselves are never materialized.
    """
    from .errors import NotSquarefreeError

    if not h.is_monic:
        raise ValueError("ddf_degrees requires a monic polynomial")
    if h.degree == 0:
        return []
    if poly_gcd(h, h.derivative()).degree != 0:
        raise NotSquarefreeError(f"polynomial {h.coeffs} is not squarefree mod {h.p}")
    p = h.p
    x = poly_x(p)
    out: list[tuple[int, int]] = []
    rest = h
    r = x % rest
    j = 0
    while rest.degree >= 2 * (j + 1):
        j += 1
        r = poly_powmod(r, p, rest)  # r = x^(p^j) mod rest
        g = poly_gcd(rest, r - x)
        if g.degree > 0:
            out.append((j, g.degree // j))
            rest = divmod(rest, g)[0]
            r = r % rest
    if rest.degree > 0:
        out.append((rest.degree, 1))
    return out


def is_irreducible(h: PolyModP) -> bool:
    """Rabin's irreducibility test for monic h of degree >= 1."""
    n = h.degree
    if n < 1 or not h.is_monic:
        return False
    if n == 1:
        return True
    p = h.p
    x = poly_x(p)
    if poly_powmod(x, p**n, h) != x % h:
        return False
    divisors = set()
    m, q = n, 2
    while q * q <= m:
        if m % q == 0:
            divisors.add(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        divisors.add(m)
    for t in divisors:
        g = poly_gcd(h, poly_powmod(x, p ** (n // t), h) - x)
        if g.degree != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# small extension fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^degree}, with a defining modulus when degree > 1."""

    p: int
    degree: int
    modulus: PolyModP | None = None

    def __post_init__(self):
        _require_odd_prime(self.p)
        if self.p >= MAX_FIELD_CHAR:
            raise ValueError(f"p={self.p} exceeds the supported cap {MAX_FIELD_CHAR}")
        if self.degree < 1:
            raise ValueError("field degree must be >= 1")
        if self.degree == 1:
            if self.modulus is not None:
                raise ValueError("prime fields carry no modulus")
        else:
            m = self.modulus
            if m is None or m.p != self.p or m.degree != self.degree or not m.is_monic:
                raise ValueError("modulus must be monic of the stated degree")
            if not is_irreducible(m):
                raise ValueError(f"modulus {m.coeffs} is reducible mod {self.p}")

    @property
    def order(self) -> int:
        return self.p**self.degree

    def element(self, coeffs) -> "FieldElement":
        vec = [c % self.p for c in coeffs]
        if len(vec) > self.degree:
            raise ValueError("coefficient vector longer than the field degree")
        vec += [0] * (self.degree - len(vec))
        return FieldElement(self, tuple(vec))

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.degree)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.degree - 1))

    def elements(self):
        """All q field elements, in base-p counter order."""
        p, i = self.p, self.degree
        for v in range(self.order):
            yield FieldElement(self, tuple((v // p**j) % p for j in range(i)))


@functools.lru_cache(maxsize=256)
def build_extension(p: int, i: int) -> FieldSpec:
    """F_{p^i} with the first irreducible modulus in the deterministic scan.

    Candidates are monic degree-i polynomials ordered by their non-leading
    coefficient vector read as a little-endian base-p counter, so the same
    (p, i) always yields the same modulus.
    """
    if i == 1:
        return FieldSpec(p, 1, None)
    _require_odd_prime(p)
    for v in range(p**i):
        low = [(v // p**j) % p for j in range(i)]
        cand = PolyModP(p, tuple(low) + (1,))
        if is_irreducible(cand):
            return FieldSpec(p, i, cand)
    raise RuntimeError("unreachable: irreducibles of every degree exist")


@dataclass(frozen=True)
class FieldElement:
    """Element of F_{p^i}: residue vector in the power basis of the modulus root."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.degree:
            raise ValueError("coefficient vector must match the field degree")

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _same_field(self, other: "FieldElement") -> None:
        if self.spec != other.spec:
            raise ValueError("elements live in different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        p = self.spec.p
        return FieldElement(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        p = self.spec.p
        return FieldElement(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        spec = self.spec
        p, i = spec.p, spec.degree
        if i == 1:
            return FieldElement(spec, ((self.coeffs[0] * other.coeffs[0]) % p,))
        prod = PolyModP(p, self.coeffs) * PolyModP(p, other.coeffs)
        red = prod % spec.modulus
        vec = list(red.coeffs) + [0] * (i - len(red.coeffs))
        return FieldElement(spec, tuple(vec))

    def scale(self, c: int) -> "FieldElement":
        p = self.spec.p
        return FieldElement(self.spec, tuple((c * a) % p for a in self.coeffs))

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            raise ValueError("negative exponent")
        result = self.spec.one()
        acc = self
        while e:
            if e & 1:
                result = result * acc
            acc = acc * acc
            e >>= 1
        return result


def quad_char(e: FieldElement) -> int:
    """Quadratic character of F_q: 0 on zero, else e^((q-1)/2) mapped to +-1."""
    if e.is_zero:
        return 0
    q = e.spec.order
    r = e ** ((q - 1) // 2)
    if r == e.spec.one():
        return 1
    minus_one = e.spec.one().scale(-1)
    if r == minus_one:
        return -1
    raise ArithmeticError("nonzero element has character outside {+-1}; field data corrupt")
