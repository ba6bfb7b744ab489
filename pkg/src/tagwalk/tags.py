"""Tag function, index map and the tag of a deferred product.

A tag is the tuple ``(c_0, ..., c_{t-1})`` where ``c_j`` is the coefficient of
``x^(eta-t+j)``; its integer value ``sum c_j 2^j`` is therefore simply
``a >> (eta - t)``.  The index of an element is ``1 + value mod r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, ParameterError
from .gf2 import GF2Field, clmul

TagVector = tuple  # tuple[int, ...] of 0/1 entries


@dataclass(frozen=True)
class TagParams:
    t: int
    r: int
    eta: int

    def __post_init__(self):
        if not 1 <= self.t <= self.eta:
            raise ParameterError(f"tag width t={self.t} must lie in [1, eta={self.eta}]")
        if not 2 <= self.r <= 1 << self.t:
            raise ParameterError(f"r={self.r} must lie in [2, 2^t={1 << self.t}]")

    @classmethod
    def for_r(cls, r: int, eta: int, t: int | None = None) -> "TagParams":
        """Default tag width is ``ceil(log2 r)``."""
        if r < 2:
            raise ParameterError("r must be >= 2")
        if t is None:
            t = max(1, math.ceil(math.log2(r)))
        return cls(t, r, eta)

    @property
    def shift(self) -> int:
        return self.eta - self.t


def tau(a: int, p: TagParams) -> TagVector:
    v = a >> p.shift
    return tuple((v >> j) & 1 for j in range(p.t))


def tag_value(v: TagVector) -> int:
    return sum(bit << j for j, bit in enumerate(v))


def sigma(v, p: TagParams) -> int:
    """Index in ``1..r`` of a tag (tuple or its integer value)."""
    value = v if isinstance(v, int) else tag_value(v)
    return 1 + value % p.r


def gamma(a: int, p: TagParams) -> int:
    return 1 + (a >> p.shift) % p.r


def _as_int(bits) -> int:
    if isinstance(bits, int):
        return bits
    return sum((b & 1) << i for i, b in enumerate(bits))


def tag_of_product(y_bits, tag_row: Sequence[TagVector]) -> TagVector:
    """Tag of ``Y*m`` from the bits of ``Y`` and the rows ``tau(x^i m)``.

    ``y_bits`` is an element (int) or a sequence of its coefficients.
    """
    y = _as_int(y_bits)
    if not y:
        raise DomainError("0 is not a group element")
    if y.bit_length() > len(tag_row):
        raise ParameterError("element has more coefficients than the tag row")
    acc = 0
    width = len(tag_row[0])
    i = 0
    while y:
        if y & 1:
            acc ^= tag_value(tag_row[i])
        y >>= 1
        i += 1
    return tuple((acc >> j) & 1 for j in range(width))


def tag_value_from_masks(y: int, masks: Sequence[int]) -> int:
    """Tag value of ``Y*m`` from the transposed tag row of ``m``.

    ``masks[j]`` has bit ``i`` set when ``tau(x^i m)`` has ``c_j = 1``, so each
    tag coordinate is the parity of ``Y & masks[j]``.
    """
    v = 0
    for j, w in enumerate(masks):
        v |= ((y & w).bit_count() & 1) << j
    return v


def masks_to_row(masks: Sequence[int], eta: int) -> tuple[TagVector, ...]:
    return tuple(tuple((w >> i) & 1 for w in masks) for i in range(eta))


def row_to_masks(row: Sequence[TagVector]) -> tuple[int, ...]:
    t = len(row[0])
    return tuple(sum(vec[j] << i for i, vec in enumerate(row)) for j in range(t))


def tag_row_direct(m: int, field: GF2Field, p: TagParams) -> tuple[TagVector, ...]:
    """``(tau(m), tau(x m), ..., tau(x^(eta-1) m))`` by repeated multiplication by x."""
    eta, f = field.eta, field.poly.coeffs
    row = []
    v = m
    for _ in range(eta):
        row.append(tau(v, p))
        v <<= 1
        if v >> eta:
            v ^= f
    return tuple(row)


class TagProjector:
    """Transposed tag rows ``masks(m)`` for a fixed field and tag width.

    With ``T_n`` the tag of ``x^n mod f``, coordinate ``j`` of ``tau(x^i m)``
    is ``sum_k m_k T_(i+k)[j]``: a correlation of the bits of ``m`` with the
    sequence ``T[j]``, computed as one carry-less product against ``m``
    bit-reversed.
    """

    def __init__(self, field: GF2Field, t: int):
        self.field = field
        self.eta = eta = field.eta
        self.t = t
        shift = eta - t
        f = field.poly.coeffs
        streams = [0] * t
        v = 1
        for n in range(2 * eta - 1):
            top = v >> shift
            for j in range(t):
                if (top >> j) & 1:
                    streams[j] |= 1 << n
            v <<= 1
            if v >> eta:
                v ^= f
        self.streams = tuple(streams)
        self._fmt = f"0{eta}b"
        self._mask = field.mask

    def masks(self, m: int) -> tuple[int, ...]:
        rev = int(format(m, self._fmt)[::-1], 2)
        drop = self.eta - 1
        mask = self._mask
        return tuple((clmul(s, rev) >> drop) & mask for s in self.streams)
