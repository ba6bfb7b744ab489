"""Arithmetic in GF(2^eta) in the polynomial basis.

Elements are plain Python ints: bit ``i`` is the coefficient of ``x^i``.
Python ints are arrays of machine words internally, so this is the packed
bit-vector representation with word-level xor and shifts for free.

Multiplication is a 4-bit windowed carry-less product followed by reduction.
Reduction folds the high half through the modulus' nonzero terms when the
modulus is sparse (at most five terms), and otherwise clears the high half a
byte at a time with a precomputed table of multiples of the modulus.  Fields
of degree at most ``LOG_TABLE_MAX_ETA`` additionally get discrete log/antilog
tables, which give the same products far faster for the desk-scale groups.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .errors import DomainError, FormatError, NoSparseIrreducibleError, ParameterError
from .rng import make_rng

SPARSE = "sparse"
ARBITRARY = "arbitrary"
KINDS = (SPARSE, ARBITRARY)

LOG_TABLE_MAX_ETA = 20

# byte -> the same bits spread to even positions (squaring in GF(2)[x])
_SPREAD = tuple(
    sum(((b >> i) & 1) << (2 * i) for i in range(8)).to_bytes(2, "little") for b in range(256)
)


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    if not b:
        return 0
    a2 = a << 1
    a3 = a2 ^ a
    a4 = a << 2
    a8 = a << 3
    tab = (0, a, a2, a3, a4, a4 ^ a, a4 ^ a2, a4 ^ a3,
           a8, a8 ^ a, a8 ^ a2, a8 ^ a3, a8 ^ a4, a8 ^ a4 ^ a, a8 ^ a4 ^ a2, a8 ^ a4 ^ a3)
    n = (b.bit_length() + 3) & ~3
    acc = 0
    while n:
        n -= 4
        acc = (acc << 4) ^ tab[(b >> n) & 15]
    return acc


def clsquare(a: int) -> int:
    """Square in GF(2)[x] by spreading bits."""
    if not a:
        return 0
    raw = a.to_bytes((a.bit_length() + 7) // 8, "little")
    return int.from_bytes(b"".join([_SPREAD[byte] for byte in raw]), "little")


def poly_mod(a: int, f: int) -> int:
    """Remainder of ``a`` modulo ``f`` in GF(2)[x] (bitwise long division)."""
    df = f.bit_length()
    while a.bit_length() >= df:
        a ^= f << (a.bit_length() - df)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


class _Reducer:
    """Reduction modulo a fixed polynomial ``f`` of degree ``eta``."""

    def __init__(self, f: int):
        self.f = f
        self.eta = f.bit_length() - 1
        self.mask = (1 << self.eta) - 1
        terms = [i for i in range(self.eta) if (f >> i) & 1]
        self.low_terms = tuple(reversed(terms))
        self.sparse = len(terms) + 1 <= 5
        if not self.sparse:
            eta = self.eta
            self.window = tuple((w << eta) | poly_mod(w << eta, f) for w in range(256))

    def __call__(self, c: int) -> int:
        eta = self.eta
        if self.sparse:
            mask = self.mask
            terms = self.low_terms
            while True:
                hi = c >> eta
                if not hi:
                    return c
                c &= mask
                for k in terms:
                    c ^= hi << k
        window = self.window
        n = c.bit_length()
        while n > eta:
            shift = n - 8 - eta
            if shift < 0:
                shift = 0
            c ^= window[c >> (shift + eta)] << shift
            n = c.bit_length()
        return c


def is_irreducible(f: int) -> bool:
    """Ben-Or test: no factor of degree ``i`` for ``i <= deg f / 2``."""
    d = f.bit_length() - 1
    if d < 1:
        raise ParameterError("polynomial must have degree >= 1")
    if d == 1:
        return True
    if not f & 1:
        return False
    reduce = _Reducer(f)
    xp = 2
    for _ in range(d // 2):
        xp = reduce(clsquare(xp))
        if poly_gcd(f, xp ^ 2) != 1:
            return False
    return True


@dataclass(frozen=True)
class IrreduciblePoly:
    """Monic modulus; ``coeffs`` bit ``i`` is the coefficient of ``x^i``."""

    degree: int
    coeffs: int
    kind: str = SPARSE

    def __post_init__(self):
        if self.coeffs.bit_length() - 1 != self.degree:
            raise ParameterError(f"coefficients do not describe a monic degree-{self.degree} polynomial")
        if self.kind not in KINDS:
            raise ParameterError(f"unknown polynomial kind {self.kind!r}")
        if self.kind == SPARSE and self.weight > 5:
            raise ParameterError("a sparse modulus has at most 5 nonzero coefficients")

    @property
    def weight(self) -> int:
        return self.coeffs.bit_count()

    @property
    def terms(self) -> tuple[int, ...]:
        """Exponents of the nonzero terms, highest first."""
        return tuple(i for i in range(self.degree, -1, -1) if (self.coeffs >> i) & 1)

    def to_hex(self) -> str:
        return format(self.coeffs, "x")

    @classmethod
    def from_hex(cls, text: str, kind: str | None = None) -> "IrreduciblePoly":
        try:
            coeffs = int(text, 16)
        except ValueError:
            raise FormatError(f"not a hexadecimal polynomial: {text!r}") from None
        if coeffs < 2:
            raise FormatError("modulus must have degree >= 1")
        if kind is None:
            kind = SPARSE if coeffs.bit_count() <= 5 else ARBITRARY
        return cls(coeffs.bit_length() - 1, coeffs, kind)

    def __str__(self):
        parts = []
        for i in self.terms:
            parts.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
        return " + ".join(parts)


def find_irreducible(eta: int, kind: str = SPARSE, seed: int = 0) -> IrreduciblePoly:
    """Irreducible polynomial of degree ``eta``.

    Sparse search scans trinomials ``x^eta + x^k + 1`` by ascending ``k``, then
    pentanomials ``x^eta + x^a + x^b + x^c + 1`` by ascending ``(a, b, c)``.
    Arbitrary search draws random monic polynomials with nonzero constant
    term from the seeded generator.
    """
    if eta < 2:
        raise ParameterError("eta must be >= 2")
    if kind == SPARSE:
        return _find_sparse(eta)
    if kind != ARBITRARY:
        raise ParameterError(f"unknown polynomial kind {kind!r}")
    return _find_arbitrary(eta, seed)


@functools.lru_cache(maxsize=None)
def _find_sparse(eta: int) -> IrreduciblePoly:
    top = 1 << eta
    for k in range(1, eta):
        f = top | (1 << k) | 1
        if is_irreducible(f):
            return IrreduciblePoly(eta, f, SPARSE)
    for a in range(3, eta):
        for b in range(2, a):
            for c in range(1, b):
                f = top | (1 << a) | (1 << b) | (1 << c) | 1
                if is_irreducible(f):
                    return IrreduciblePoly(eta, f, SPARSE)
    raise NoSparseIrreducibleError(f"no irreducible trinomial or pentanomial of degree {eta}")


@functools.lru_cache(maxsize=None)
def _find_arbitrary(eta: int, seed: int) -> IrreduciblePoly:
    rng = make_rng(seed, "irreducible", eta)
    top = 1 << eta
    while True:
        f = top | rng.getrandbits(eta) | 1
        if is_irreducible(f):
            return IrreduciblePoly(eta, f, ARBITRARY)


def encode_hex(a: int) -> str:
    return format(a, "x")


def decode_hex(text: str, eta: int) -> int:
    try:
        value = int(text, 16)
    except ValueError:
        raise FormatError(f"not a hexadecimal element: {text!r}") from None
    if value < 0 or value >> eta:
        raise FormatError(f"element {text!r} has bits at or above x^{eta}")
    return value


def _factor(n: int) -> list[int]:
    """Distinct prime factors by trial division (only used for n < 2^21)."""
    primes = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    return primes


@dataclass(eq=False)
class GF2Field:
    """The field GF(2)[x]/(f).

    ``mul`` and ``pow`` are bound per instance to the fastest available
    implementation; ``mul_poly``/``pow_poly`` are the carry-less reference
    path and always available.  Operands are assumed reduced (``< 2^eta``);
    use :meth:`element` to validate untrusted values.
    """

    poly: IrreduciblePoly
    use_log_tables: bool | None = None
    eta: int = field(init=False)
    order: int = field(init=False)

    def __post_init__(self):
        self.eta = self.poly.degree
        self.order = 1 << self.eta
        self.mask = self.order - 1
        self.reduce = _Reducer(self.poly.coeffs)
        self._exp = self._log = None
        if self.use_log_tables is None:
            self.use_log_tables = self.eta <= LOG_TABLE_MAX_ETA
        if self.use_log_tables:
            self._build_log_tables()
            self.mul = self._mul_log
            self.pow = self._pow_log
        else:
            self.mul = self.mul_poly
            self.pow = self.pow_poly

    def __repr__(self):
        return f"GF2Field(eta={self.eta}, f={self.poly.to_hex()})"

    def element(self, value: int) -> int:
        if not isinstance(value, int) or value < 0 or value >> self.eta:
            raise ParameterError(f"{value!r} is not an element of GF(2^{self.eta})")
        return value

    def add(self, a: int, b: int) -> int:
        self.element(a)
        self.element(b)
        return a ^ b

    def mul_poly(self, a: int, b: int) -> int:
        return self.reduce(clmul(a, b))

    def square(self, a: int) -> int:
        if self._log is not None:
            return self._mul_log(a, a)
        return self.reduce(clsquare(a))

    def pow_poly(self, a: int, e: int) -> int:
        if not a:
            raise DomainError("0 is not in the multiplicative group")
        if e < 0:
            raise ParameterError("exponent must be non-negative")
        e %= self.order - 1
        result = 1
        reduce = self.reduce
        for bit in bin(e)[2:]:
            result = reduce(clsquare(result))
            if bit == "1":
                result = reduce(clmul(result, a))
        return result

    def inv(self, a: int) -> int:
        return self.pow(a, self.order - 2)

    def x_power(self, i: int) -> int:
        """``x^i mod f``."""
        if i < self.eta:
            return 1 << i
        return self.pow_poly(2, i)

    # log/antilog tables for small fields

    def _build_log_tables(self):
        n = self.order - 1
        gen = self._primitive_element()
        reduce = self.reduce
        exp = [0] * (2 * n)
        log = [0] * self.order
        a = 1
        if gen == 2:
            eta, f = self.eta, self.poly.coeffs
            for i in range(n):
                exp[i] = a
                log[a] = i
                a <<= 1
                if a >> eta:
                    a ^= f
        else:
            for i in range(n):
                exp[i] = a
                log[a] = i
                a = reduce(clmul(a, gen))
        exp[n:] = exp[:n]
        self._exp, self._log, self._n = exp, log, n

    def _primitive_element(self) -> int:
        n = self.order - 1
        cofactors = [n // p for p in _factor(n)]
        for cand in range(2, self.order):
            if all(self.pow_poly(cand, c) != 1 for c in cofactors):
                return cand
        return 1  # GF(2): the group is trivial

    def _mul_log(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        log = self._log
        return self._exp[log[a] + log[b]]

    def _pow_log(self, a: int, e: int) -> int:
        if not a:
            raise DomainError("0 is not in the multiplicative group")
        if e < 0:
            raise ParameterError("exponent must be non-negative")
        return self._exp[(self._log[a] * e) % self._n]


@functools.lru_cache(maxsize=64)
def field_for(poly: IrreduciblePoly) -> GF2Field:
    """Shared field instance per modulus (log tables are built once)."""
    return GF2Field(poly)

