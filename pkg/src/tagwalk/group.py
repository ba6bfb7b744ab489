"""Prime-order subgroups of GF(2^eta)^* and discrete-log instances in them."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigurationError, FormatError, ParameterError
from .gf2 import SPARSE, GF2Field, IrreduciblePoly, decode_hex, encode_hex, field_for, find_irreducible, is_irreducible
from .rng import make_rng

# eta -> a prime divisor q of 2^eta - 1.  Each pair is re-checked on load.
CATALOGUE = {
    3: 7,
    11: 89,
    17: 131071,
    19: 524287,
    31: 2147483647,
    1023: 658812288653553079,  # divides 2^93 - 1, and 93 | 1023
}

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin with a base set that is deterministic below 2^64."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class GroupParams:
    eta: int
    f: IrreduciblePoly
    q: int
    cofactor: int
    g: int

    @property
    def field(self) -> GF2Field:
        return field_for(self.f)


@dataclass(frozen=True)
class DlpInstance:
    params: GroupParams
    h: int
    x_hidden: int | None = None

    @property
    def field(self) -> GF2Field:
        return self.params.field

    def check(self, x: int) -> bool:
        """True when ``g^x = h``."""
        return self.field.pow(self.params.g, x % self.params.q) == self.h


def catalogue_q(eta: int) -> int:
    try:
        q = CATALOGUE[eta]
    except KeyError:
        raise ConfigurationError(
            f"no catalogued subgroup for eta={eta}; supply q explicitly "
            f"(known: {sorted(CATALOGUE)})"
        ) from None
    return q


def check_subgroup(eta: int, q: int) -> int:
    """Verify ``q`` is a prime divisor of ``2^eta - 1`` and return the cofactor."""
    n = (1 << eta) - 1
    if not is_prime(q):
        raise ParameterError(f"q={q} is not prime")
    if n % q:
        raise ParameterError(f"q={q} does not divide 2^{eta}-1")
    return n // q


def derive_generator(eta: int, f: IrreduciblePoly, q: int, cofactor: int, seed: int) -> int:
    """``u^cofactor`` for random nonzero ``u``, redrawn until it is not 1."""
    if q * cofactor != (1 << eta) - 1:
        raise ParameterError("q * cofactor must equal 2^eta - 1")
    field = field_for(f)
    rng = make_rng(seed, "generator")
    while True:
        u = rng.getrandbits(eta)
        if not u:
            continue
        g = field.pow(u, cofactor)
        if g != 1:
            return g


def make_params(eta: int, kind: str = SPARSE, q: int | None = None, seed: int = 0) -> GroupParams:
    if q is None:
        q = catalogue_q(eta)
    cofactor = check_subgroup(eta, q)
    f = find_irreducible(eta, kind, seed)
    g = derive_generator(eta, f, q, cofactor, seed)
    return GroupParams(eta, f, q, cofactor, g)


def make_instance(params: GroupParams, seed: int | None = None, x: int | None = None) -> DlpInstance:
    """Instance ``h = g^x`` with ``x`` explicit or drawn from ``[1, q-1]``."""
    q = params.q
    if x is None:
        if seed is None:
            raise ParameterError("need a seed or an explicit x")
        x = make_rng(seed, "instance").randrange(1, q)
    elif not 1 <= x <= q - 1:
        raise ParameterError(f"x={x} outside [1, {q - 1}]")
    return DlpInstance(params, params.field.pow(params.g, x), x)


def validate(params: GroupParams) -> str | None:
    """First failed check as a short diagnostic, or None when valid."""
    if params.f.degree != params.eta:
        return "modulus degree differs from eta"
    if not is_irreducible(params.f.coeffs):
        return "f not irreducible"
    if not is_prime(params.q):
        return "q not prime"
    if params.q * params.cofactor != (1 << params.eta) - 1:
        return "q * cofactor != 2^eta - 1"
    if params.g >> params.eta or params.g == 0:
        return "generator not a field unit"
    if params.g == 1:
        return "generator trivial"
    if params.field.pow(params.g, params.q) != 1:
        return "generator order is not q"
    return None


def validate_instance(instance: DlpInstance) -> str | None:
    problem = validate(instance.params)
    if problem:
        return problem
    field = instance.field
    if instance.h >> field.eta or instance.h == 0 or field.pow(instance.h, instance.params.q) != 1:
        return "h not in the subgroup"
    if instance.x_hidden is not None and not instance.check(instance.x_hidden):
        return "g^x != h"
    return None


# parameter files: one key=value per line

_KEYS = ("eta", "f", "q", "cofactor", "g", "h", "x")


def dumps_instance(instance: DlpInstance, include_x: bool = True) -> str:
    p = instance.params
    lines = [
        f"eta={p.eta}",
        f"f={p.f.to_hex()}",
        f"q={p.q}",
        f"cofactor={p.cofactor}",
        f"g={encode_hex(p.g)}",
        f"h={encode_hex(instance.h)}",
    ]
    if include_x and instance.x_hidden is not None:
        lines.append(f"x={instance.x_hidden}")
    return "\n".join(lines) + "\n"


def loads_instance(text: str) -> DlpInstance:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise FormatError(f"line {lineno}: expected key=value")
        if key not in _KEYS:
            raise FormatError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise FormatError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    missing = [k for k in _KEYS[:-1] if k not in values]
    if missing:
        raise FormatError(f"missing keys: {', '.join(missing)}")
    try:
        eta = int(values["eta"])
        q = int(values["q"])
        cofactor = int(values["cofactor"])
        x = int(values["x"]) if "x" in values else None
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    f = IrreduciblePoly.from_hex(values["f"])
    if f.degree != eta:
        raise FormatError(f"modulus has degree {f.degree}, expected {eta}")
    params = GroupParams(eta, f, q, cofactor, decode_hex(values["g"], eta))
    return DlpInstance(params, decode_hex(values["h"], eta), x)


def write_instance(path, instance: DlpInstance) -> None:
    Path(path).write_text(dumps_instance(instance), encoding="utf-8")


def read_instance(path) -> DlpInstance:
    return loads_instance(Path(path).read_text(encoding="utf-8"))
