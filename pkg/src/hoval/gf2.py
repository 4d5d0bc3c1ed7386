"""Exact arithmetic in GF(2^m) and in the tower GF(2) < GF(2^h) < GF(2^hk).

Field elements are plain Python ints: bit i of the int is the coefficient
of x^i in the polynomial representative, so the constant term is the least
significant bit.  A :class:`Field` carries the modulus and lookup tables and
never wraps elements; hot loops therefore stay allocation-free.  The thin
:class:`FieldElement` wrapper exists for the typed public API and for hex
serialization, not for inner loops.

Degrees 1..24 are supported.  Fields of degree <= 16 multiply through
exp/log tables over a primitive element; larger degrees fall back to
shift-and-reduce polynomial multiplication.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    DivisionByZero,
    FieldMismatch,
    IrreducibleCheckFailed,
    ParseError,
    UnsupportedDegree,
)

MAX_DEGREE = 24
_TABLE_LIMIT = 16  # exp/log tables up to this degree


# ---------------------------------------------------------------------------
# polynomial arithmetic over GF(2), ints as coefficient bit-vectors
# ---------------------------------------------------------------------------

def _poly_deg(a: int) -> int:
    return a.bit_length() - 1


def _poly_rem(a: int, b: int) -> int:
    """Remainder of a modulo b, both coefficient bit-vectors, b != 0."""
    db = _poly_deg(b)
    while a and _poly_deg(a) >= db:
        a ^= b << (_poly_deg(a) - db)
    return a


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_rem(a, b)
    return a


def _poly_mulmod(a: int, b: int, modulus: int) -> int:
    """Shift-and-reduce product of two reduced representatives."""
    dm = _poly_deg(modulus)
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> dm:
            a ^= modulus
    return r


def _x_pow2_mod(j: int, modulus: int) -> int:
    """x^(2^j) modulo the given polynomial."""
    r = _poly_rem(2, modulus)
    for _ in range(j):
        r = _poly_mulmod(r, r, modulus)
    return r


def _prime_factors(n: int) -> list[int]:
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


def is_irreducible(modulus: int, m: int) -> bool:
    """Exact irreducibility test for a degree-m polynomial over GF(2).

    Uses the derandomized criterion: x^(2^m) == x (mod f) and, for every
    prime p dividing m, gcd(x^(2^(m/p)) - x, f) == 1.
    """
    if modulus <= 0 or _poly_deg(modulus) != m:
        return False
    if m == 1:
        return True
    if _x_pow2_mod(m, modulus) != _poly_rem(2, modulus):
        return False
    for p in _prime_factors(m):
        if _poly_gcd(_x_pow2_mod(m // p, modulus) ^ 2, modulus) != 1:
            return False
    return True


_DEFAULT_MODULI: dict[int, int] = {}


def default_modulus(m: int) -> int:
    """Lowest-lexicographic irreducible of degree m with nonzero constant term."""
    mod = _DEFAULT_MODULI.get(m)
    if mod is None:
        cand = (1 << m) | 1
        while not is_irreducible(cand, m):
            cand += 2
        _DEFAULT_MODULI[m] = mod = cand
    return mod


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class Field:
    """GF(2^m) in polynomial basis modulo a fixed irreducible.

    Parameters
    ----------
    m : int
        Extension degree over GF(2), between 1 and 24.
    modulus : int, optional
        Degree-m irreducible as a coefficient bit-vector.  Defaults to the
        lowest-lexicographic irreducible with nonzero constant term.
    """

    __slots__ = ("m", "modulus", "q", "_exp", "_log", "_generator")

    def __init__(self, m: int, modulus: int | None = None):
        if not 1 <= m <= MAX_DEGREE:
            raise UnsupportedDegree(f"degree {m} outside 1..{MAX_DEGREE}")
        if modulus is None:
            modulus = default_modulus(m)
        elif not is_irreducible(modulus, m):
            raise IrreducibleCheckFailed(
                f"0x{modulus:x} is not an irreducible of degree {m}"
            )
        self.m = m
        self.modulus = modulus
        self.q = 1 << m
        self._generator: int | None = None
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if m <= _TABLE_LIMIT:
            self._build_tables()

    # -- construction helpers -------------------------------------------

    def _order(self, a: int) -> int:
        n = self.q - 1
        order = n
        for p in _prime_factors(n):
            while order % p == 0 and self._pow_raw(a, order // p) == 1:
                order //= p
        return order

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = _poly_mulmod(r, a, self.modulus)
            a = _poly_mulmod(a, a, self.modulus)
            e >>= 1
        return r

    @property
    def generator(self) -> int:
        """Smallest primitive element (deterministic)."""
        if self._generator is None:
            for g in range(2, self.q):
                if self._order(g) == self.q - 1:
                    self._generator = g
                    break
            else:  # q == 2
                self._generator = 1
        return self._generator

    def _build_tables(self) -> None:
        n = self.q - 1
        exp = [1] * (2 * n)
        log = [0] * self.q
        g = self.generator
        acc = 1
        for idx in range(n):
            exp[idx] = acc
            log[acc] = idx
            acc = _poly_mulmod(acc, g, self.modulus)
        for idx in range(n, 2 * n):
            exp[idx] = exp[idx - n]
        self._exp = exp
        self._log = log

    # -- arithmetic ------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return _poly_mulmod(a, b, self.modulus)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        if self._exp is not None:
            return self._exp[self.q - 1 - self._log[a]]
        return self._pow_raw(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("negative power of 0")
            return 0
        e %= self.q - 1
        if self._exp is not None:
            return self._exp[self._log[a] * e % (self.q - 1)]
        return self._pow_raw(a, e)

    def frob(self, a: int, i: int = 1) -> int:
        """Frobenius power a^(2^i); i is reduced modulo m."""
        i %= self.m
        if a == 0 or i == 0:
            return a
        if self._exp is not None:
            return self._exp[(self._log[a] << i) % (self.q - 1)]
        for _ in range(i):
            a = _poly_mulmod(a, a, self.modulus)
        return a

    # -- enumeration / identity ------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def nonzero_elements(self) -> range:
        return range(1, self.q)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Field)
            and other.m == self.m
            and other.modulus == self.modulus
        )

    def __hash__(self) -> int:
        return hash((self.m, self.modulus))

    def __repr__(self) -> str:
        return f"Field(m={self.m}, modulus=0x{self.modulus:x})"


_FIELD_CACHE: dict[tuple[int, int], Field] = {}


def field_create(m: int, modulus: int | None = None) -> Field:
    """Memoized Field constructor; identical parameters share tables."""
    if modulus is None:
        modulus = default_modulus(m) if 1 <= m <= MAX_DEGREE else -1
    f = _FIELD_CACHE.get((m, modulus))
    if f is None:
        f = Field(m, modulus)
        _FIELD_CACHE[(m, modulus)] = f
    return f


# ---------------------------------------------------------------------------
# typed element wrapper (API boundary / serialization only)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class FieldElement:
    """An element of a specific field; operators check field identity."""

    value: int
    field: Field

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise ValueError(
                f"value 0x{self.value:x} outside field of degree {self.field.m}"
            )

    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.value ^ other.value, self.field)

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field.div(self.value, other.value), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def frob(self, i: int = 1) -> "FieldElement":
        return FieldElement(self.field.frob(self.value, i), self.field)

    def to_hex(self) -> str:
        return format(self.value, "x")

    @classmethod
    def from_hex(cls, text: str, field: Field) -> "FieldElement":
        try:
            value = int(text, 16)
        except ValueError as exc:
            raise ParseError(f"bad hex literal {text!r}") from exc
        if not 0 <= value < field.q:
            raise ParseError(f"hex literal {text!r} outside GF(2^{field.m})")
        return cls(value, field)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def frob_pow(a: FieldElement, i: int) -> FieldElement:
    return a.frob(i)


# ---------------------------------------------------------------------------
# field tower GF(2) < GF(2^h) < GF(2^hk)
# ---------------------------------------------------------------------------

class Tower:
    """The tower GF(2^h) inside GF(2^hk) with a fixed GF(2^h)-basis.

    The embedding sends x (class of the small modulus) to the numerically
    smallest root of the small modulus inside the big field; the basis of
    the big field over the small one is 1, beta, ..., beta^(k-1) where beta
    is the class of x modulo the big modulus.  vec/unvec convert between a
    big-field element and its coordinate vector in that basis.
    """

    __slots__ = (
        "h", "k", "hk", "small", "big", "root",
        "_embed_table", "_unembed", "basis",
        "_fwd_col", "_inv_col", "_vec_table", "_unvec_table",
    )

    def __init__(self, h: int, k: int, small: Field, big: Field):
        self.h = h
        self.k = k
        self.hk = h * k
        self.small = small
        self.big = big
        self.root = self._find_root()
        powers = [1] * h
        for b in range(1, h):
            powers[b] = big.mul(powers[b - 1], self.root)
        self._embed_table = [0] * small.q
        for a in range(small.q):
            acc = 0
            bits = a
            b = 0
            while bits:
                if bits & 1:
                    acc ^= powers[b]
                bits >>= 1
                b += 1
            self._embed_table[a] = acc
        self._unembed = {img: a for a, img in enumerate(self._embed_table)}
        beta = 2 if self.hk > 1 else 1
        self.basis = tuple(big.pow(beta, j) for j in range(k))
        self._build_vec_maps()
        self._self_check()

    # -- construction ----------------------------------------------------

    def _find_root(self) -> int:
        small, big = self.small, self.big
        if small.m == big.m:
            # degenerate tower (k == 1) over identical moduli: identity embed
            if small.modulus == big.modulus:
                return 2 if small.m > 1 else 1
        g = big.generator
        step = (big.q - 1) // (small.q - 1)
        base = big.pow(g, step)
        roots = []
        cand = 1
        for _ in range(small.q - 1):
            # evaluate the small modulus at cand with big-field arithmetic
            acc = 0
            for d in range(_poly_deg(self.small.modulus), -1, -1):
                acc = big.mul(acc, cand)
                if (small.modulus >> d) & 1:
                    acc ^= 1
            if acc == 0:
                roots.append(cand)
            cand = big.mul(cand, base)
        if not roots:
            raise IrreducibleCheckFailed(
                f"small modulus 0x{small.modulus:x} has no root in GF(2^{big.m})"
            )
        return min(roots)

    def _build_vec_maps(self) -> None:
        hk, h, k = self.hk, self.h, self.k
        fwd_col = [0] * hk
        for j in range(k):
            for b in range(h):
                fwd_col[j * h + b] = self.big.mul(
                    self._embed_table[1 << b], self.basis[j]
                )
        # invert the GF(2) matrix whose columns are fwd_col
        rows = []
        for i in range(hk):
            r = 0
            for j in range(hk):
                r |= ((fwd_col[j] >> i) & 1) << j
            rows.append(r)
        aug = [rows[i] | (1 << (hk + i)) for i in range(hk)]
        for col in range(hk):
            piv = next(
                (r for r in range(col, hk) if (aug[r] >> col) & 1), None
            )
            if piv is None:
                raise IrreducibleCheckFailed("basis does not span the big field")
            aug[col], aug[piv] = aug[piv], aug[col]
            for r in range(hk):
                if r != col and (aug[r] >> col) & 1:
                    aug[r] ^= aug[col]
        inv_rows = [aug[i] >> hk for i in range(hk)]
        inv_col = [0] * hk
        for j in range(hk):
            for i in range(hk):
                inv_col[j] |= ((inv_rows[i] >> j) & 1) << i
        self._fwd_col = fwd_col
        self._inv_col = inv_col
        if self.big.q <= 1 << 16:
            self._vec_table = [self._vec_packed_slow(t) for t in range(self.big.q)]
            self._unvec_table = None
        else:
            self._vec_table = None
            self._unvec_table = None

    def _vec_packed_slow(self, t: int) -> int:
        out = 0
        b = 0
        while t:
            if t & 1:
                out ^= self._inv_col[b]
            t >>= 1
            b += 1
        return out

    def _self_check(self) -> None:
        small, big = self.small, self.big
        if small.q <= 16:
            pairs = [(a, b) for a in range(small.q) for b in range(small.q)]
        else:
            rng = random.Random(0xC0FFEE)
            pairs = [
                (rng.randrange(small.q), rng.randrange(small.q)) for _ in range(64)
            ]
        emb = self._embed_table
        for a, b in pairs:
            if emb[a ^ b] != emb[a] ^ emb[b]:
                raise IrreducibleCheckFailed("embedding is not additive")
            if emb[small.mul(a, b)] != big.mul(emb[a], emb[b]):
                raise IrreducibleCheckFailed("embedding is not multiplicative")
        if big.q <= 1 << 12:
            sample: Iterable[int] = range(big.q)
        else:
            rng = random.Random(0xBEEF)
            sample = [rng.randrange(big.q) for _ in range(256)]
        for t in sample:
            if self.unvec_packed(self.vec_packed(t)) != t:
                raise IrreducibleCheckFailed("vec/unvec are not inverse")

    # -- maps --------------------------------------------------------------

    def embed(self, a: int) -> int:
        """Image of a small-field element in the big field."""
        return self._embed_table[a]

    def in_subfield(self, t: int) -> bool:
        return self.big.frob(t, self.h) == t

    def to_subfield(self, t: int) -> int:
        """Preimage of an embedded element; raises KeyError when outside."""
        return self._unembed[t]

    def vec_packed(self, t: int) -> int:
        """Coordinates of t in the basis, packed as k chunks of h bits."""
        if self._vec_table is not None:
            return self._vec_table[t]
        return self._vec_packed_slow(t)

    def unvec_packed(self, c: int) -> int:
        out = 0
        b = 0
        while c:
            if c & 1:
                out ^= self._fwd_col[b]
            c >>= 1
            b += 1
        return out

    def vec(self, t: int) -> tuple[int, ...]:
        packed = self.vec_packed(t)
        mask = self.small.q - 1
        return tuple((packed >> (j * self.h)) & mask for j in range(self.k))

    def unvec(self, coords: Iterable[int]) -> int:
        packed = 0
        for j, c in enumerate(coords):
            packed |= c << (j * self.h)
        return self.unvec_packed(packed)

    def frob(self, t: int, i: int = 1) -> int:
        return self.big.frob(t, i)

    def __repr__(self) -> str:
        return f"Tower(h={self.h}, k={self.k})"


_TOWER_CACHE: dict[tuple[int, int, int, int], Tower] = {}


def tower_create(
    h: int,
    k: int,
    small_modulus: int | None = None,
    big_modulus: int | None = None,
) -> Tower:
    """Build (memoized) the tower GF(2^h) < GF(2^hk)."""
    if h < 1 or k < 1 or h * k > MAX_DEGREE:
        raise UnsupportedDegree(f"tower degrees h={h}, k={k} unsupported")
    small = field_create(h, small_modulus)
    big = field_create(h * k, big_modulus)
    key = (h, k, small.modulus, big.modulus)
    t = _TOWER_CACHE.get(key)
    if t is None:
        t = Tower(h, k, small, big)
        _TOWER_CACHE[key] = t
    return t


def subfield_fixed_points(big: Field, h: int) -> Iterator[int]:
    """Elements of the big field fixed by t -> t^(2^h)."""
    for t in range(big.q):
        if big.frob(t, h) == t:
            yield t
