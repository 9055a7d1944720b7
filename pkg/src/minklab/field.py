"""Finite fields GF(p^k), the projective line, Moebius maps and the order-9 near-field.

Elements of GF(p^k) are stored as polynomials over GF(p) modulo a bundled
irreducible polynomial.  Internally every element also has an integer code
``sum(c_i * p**i)`` so that whole-field operations can run on lookup tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadField, DivisionByZero, FieldMismatch, ParseError
from .permset import PermutationSet, certify_sharply_3_transitive

# Monic irreducible polynomials, coefficients low degree first, leading 1 omitted.
IRREDUCIBLE = {
    (2, 2): (1, 1),           # t^2 + t + 1
    (2, 3): (1, 1, 0),        # t^3 + t + 1
    (2, 4): (1, 1, 0, 0),     # t^4 + t + 1
    (2, 5): (1, 0, 1, 0, 0),  # t^5 + t^2 + 1
    (3, 2): (1, 0),           # t^2 + 1
    (3, 3): (1, 2, 0),        # t^3 + 2t + 1
    (5, 2): (2, 0),           # t^2 + 2
}

MAX_ORDER = 32


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise BadField otherwise."""
    if q < 2:
        raise BadField(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    if not _is_prime(p):
        raise BadField(f"{q} is not a prime power")
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise BadField(f"{q} is not a prime power")
    return p, k


class GaloisField:
    """The field GF(p^k) given by an irreducible polynomial.

    >>> F = GaloisField.of_order(4)
    >>> t = F.element((0, 1))
    >>> (t * t).coeffs
    (1, 1)
    """

    _cache: dict[int, "GaloisField"] = {}

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | None = None):
        if not _is_prime(p) or k < 1:
            raise BadField(f"GF({p}^{k}) is not a field")
        if k > 1 and modulus is None:
            try:
                modulus = IRREDUCIBLE[(p, k)]
            except KeyError:
                raise BadField(f"no bundled irreducible polynomial for GF({p}^{k})") from None
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus) if modulus is not None else ()
        self._build_tables()

    @classmethod
    def of_order(cls, q: int) -> "GaloisField":
        p, k = prime_power(q)
        if q > MAX_ORDER:
            raise BadField(f"field order {q} exceeds the bundled table (<= {MAX_ORDER})")
        if q not in cls._cache:
            cls._cache[q] = cls(p, k)
        return cls._cache[q]

    # -- code <-> coefficients --------------------------------------------

    def coeffs_of(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def code_of(self, coeffs) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def _poly_mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        # reduce with t^k = -(modulus)
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i, m in enumerate(self.modulus):
                    prod[deg - k + i] = (prod[deg - k + i] - c * m) % p
        return tuple(prod[:k])

    def _build_tables(self):
        q, p = self.q, self.p
        coeffs = [self.coeffs_of(c) for c in range(q)]
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self.code_of((x + y) % p for x, y in zip(coeffs[a], coeffs[b]))
                mul[a, b] = self.code_of(self._poly_mul(coeffs[a], coeffs[b]))
        neg = np.array([self.code_of((-x) % p for x in coeffs[a]) for a in range(q)])
        inv = np.full(q, -1, dtype=np.int64)
        for a in range(1, q):
            (b,) = np.nonzero(mul[a] == 1)[0]
            inv[a] = b
        for table in (add, mul, neg, inv):
            table.setflags(write=False)
        self.add_table, self.mul_table, self.neg_table, self.inv_table = add, mul, neg, inv

    # -- element API ---------------------------------------------------------

    def element(self, value) -> "FieldElement":
        """Build an element from a coefficient sequence or an integer code."""
        if isinstance(value, (int, np.integer)):
            code = int(value)
            if not 0 <= code < self.q:
                raise BadField(f"code {code} out of range for GF({self.q})")
            return FieldElement(self, code)
        coeffs = tuple(int(c) for c in value)
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise BadField(f"{coeffs} is not a canonical GF({self.q}) residue vector")
        return FieldElement(self, self.code_of(coeffs))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.q)]

    @cached_property
    def squares(self) -> frozenset[int]:
        """Codes of the nonzero squares."""
        return frozenset(int(self.mul_table[a, a]) for a in range(1, self.q))

    def pow_code(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = int(self.mul_table[r, a])
        return r

    def __repr__(self):
        return f"GaloisField({self.p}^{self.k})"


@dataclass(frozen=True)
class FieldElement:
    field: GaloisField
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs_of(self.code)

    def _check(self, other: "FieldElement"):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field is not self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, int(self.field.add_table[self.code, other.code]))

    def __sub__(self, other):
        self._check(other)
        neg = int(self.field.neg_table[other.code])
        return FieldElement(self.field, int(self.field.add_table[self.code, neg]))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, int(self.field.mul_table[self.code, other.code]))

    def __truediv__(self, other):
        self._check(other)
        if other.code == 0:
            raise DivisionByZero("division by zero in " + repr(self.field))
        inv = int(self.field.inv_table[other.code])
        return FieldElement(self.field, int(self.field.mul_table[self.code, inv]))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_table[self.code]))

    def inverse(self) -> "FieldElement":
        return self.field.one / self

    def is_zero(self) -> bool:
        return self.code == 0

    def __repr__(self):
        return f"GF{self.field.q}{self.coeffs}"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements of one field."""
    if a.field is not b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    try:
        fn = {"add": FieldElement.__add__, "sub": FieldElement.__sub__,
              "mul": FieldElement.__mul__, "div": FieldElement.__truediv__}[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None
    return fn(a, b)


# -- projective line -----------------------------------------------------------


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^1(GF(q)): a finite field element, or infinity when ``value`` is None."""

    field: GaloisField
    value: FieldElement | None = None

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    @property
    def index(self) -> int:
        """Dense symbol index: field codes 0..q-1, infinity is q."""
        return self.field.q if self.value is None else self.value.code

    @classmethod
    def from_index(cls, field: GaloisField, i: int) -> "ProjPoint":
        if i == field.q:
            return cls(field, None)
        return cls(field, field.element(i))

    def __repr__(self):
        return "ProjPoint(inf)" if self.value is None else f"ProjPoint({self.value!r})"


def projective_line(field: GaloisField) -> list[ProjPoint]:
    return [ProjPoint.from_index(field, i) for i in range(field.q + 1)]


class MobiusMap:
    """x -> (a x + b) / (c x + d) with ad - bc != 0, kept in canonical scaling.

    The first nonzero coefficient of ``(a, b, c, d)`` is scaled to 1, so two
    scalar multiples of one matrix produce the same object.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement):
        F = a.field
        for x in (b, c, d):
            if x.field is not F:
                raise FieldMismatch("Moebius coefficients from different fields")
        if (a * d - b * c).is_zero():
            raise ValueError("degenerate Moebius map (ad - bc = 0)")
        lead = next(x for x in (a, b, c, d) if not x.is_zero())
        self.a, self.b, self.c, self.d = (x / lead for x in (a, b, c, d))

    @property
    def field(self) -> GaloisField:
        return self.a.field

    def key(self) -> tuple[int, int, int, int]:
        return (self.a.code, self.b.code, self.c.code, self.d.code)

    def __eq__(self, other):
        return isinstance(other, MobiusMap) and self.field is other.field and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def scaled(self, lam: FieldElement) -> "MobiusMap":
        return MobiusMap(lam * self.a, lam * self.b, lam * self.c, lam * self.d)

    def normalized(self) -> "MobiusMap":
        return MobiusMap(self.a, self.b, self.c, self.d)

    def __call__(self, x: ProjPoint) -> ProjPoint:
        return mobius_apply(self, x)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """``self o other`` (apply ``other`` first), via the matrix product."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return MobiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def as_permutation(self) -> np.ndarray:
        F = self.field
        return np.array([mobius_apply(self, x).index for x in projective_line(F)], dtype=np.int64)

    def __repr__(self):
        return f"MobiusMap(a={self.a}, b={self.b}, c={self.c}, d={self.d})"


def mobius_apply(m: MobiusMap, x: ProjPoint) -> ProjPoint:
    F = m.field
    if x.is_infinity:
        if m.c.is_zero():
            return ProjPoint(F, None)
        return ProjPoint(F, m.a / m.c)
    num = m.a * x.value + m.b
    den = m.c * x.value + m.d
    if den.is_zero():
        return ProjPoint(F, None)
    return ProjPoint(F, num / den)


def pgl2_permutations(q: int) -> np.ndarray:
    """All members of PGL(2, q) as permutations of the q+1 symbols of P^1.

    Symbol ``i < q`` is the field element with code ``i``; symbol ``q`` is infinity.
    Works on the field tables directly; rows are sorted lexicographically.
    """
    F = GaloisField.of_order(q)
    add, mul, inv = F.add_table, F.mul_table, F.inv_table
    xs = np.arange(q)
    seen = set()
    rows = []
    for a, b, c, d in itertools.product(range(q), repeat=4):
        det = add[mul[a, d], F.neg_table[mul[b, c]]]
        if det == 0:
            continue
        lead = next(x for x in (a, b, c, d) if x)
        li = inv[lead]
        key = tuple(int(mul[li, x]) for x in (a, b, c, d))
        if key in seen:
            continue
        seen.add(key)
        num = add[mul[a, xs], b]
        den = add[mul[c, xs], d]
        img = np.where(den == 0, q, mul[num, inv[den]])
        at_inf = q if c == 0 else int(mul[a, inv[c]])
        rows.append(np.append(img, at_inf))
    perms = np.array(rows, dtype=np.int64)
    order = np.lexsort(perms.T[::-1])
    return perms[order]


# -- the Dickson near-field of order 9 ----------------------------------------


class NearField9:
    """The Dickson near-field of order 9 on the additive group of GF(9).

    ``a o b = a*b`` when b is a nonzero square, ``a^3 * b`` when b is a
    non-square, and ``a o 0 = 0``.  The product is right distributive:
    ``(a + b) o c = a o c + b o c``.
    """

    def __init__(self):
        self.field = GaloisField.of_order(9)
        F = self.field
        sq = F.squares
        table = np.zeros((9, 9), dtype=np.int64)
        for a in range(9):
            cube = F.pow_code(a, 3)
            for b in range(1, 9):
                table[a, b] = F.mul_table[a, b] if b in sq else F.mul_table[cube, b]
        table.setflags(write=False)
        self.mul_table = table
        self.square_mask = np.array([b in sq for b in range(9)])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def add(self, a: int, b: int) -> int:
        return int(self.field.add_table[a, b])


def nearfield9_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Near-field product of two GF(9) elements under the Dickson multiplication."""
    if a.field.q != 9 or b.field.q != 9:
        raise FieldMismatch("near-field product needs GF(9) elements")
    nf = _nearfield()
    return a.field.element(nf.mul(a.code, b.code))


_NF = None


def _nearfield() -> NearField9:
    global _NF
    if _NF is None:
        _NF = NearField9()
    return _NF


def nearfield9_permutations() -> np.ndarray:
    """The sharply 3-transitive group on P^1(GF(9)) built from the near-field.

    Generated by the near-field affine maps x -> x o a + b (a != 0), which fix
    infinity, together with the inversion x -> 1/x of GF(9) swapping 0 and
    infinity.  The closure has 720 members.
    """
    nf = _nearfield()
    F = nf.field
    inf = 9
    gens = []
    xs = np.arange(9)
    for a in range(1, 9):
        for b in range(9):
            gens.append(np.append(F.add_table[nf.mul_table[xs, a], b], inf))
    inversion = np.array([inf] + [int(F.inv_table[x]) for x in range(1, 9)] + [0])
    gens.append(inversion)
    return closure(np.array(gens), limit=10_000)


def closure(generators: np.ndarray, limit: int | None = None) -> np.ndarray:
    """Composition closure (the generated group) of a set of permutations."""
    n = generators.shape[1]
    ident = tuple(range(n))
    seen = {ident}
    frontier = [np.arange(n)]
    gens = [np.asarray(g) for g in generators]
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                c = g[f]
                key = tuple(c.tolist())
                if key not in seen:
                    seen.add(key)
                    nxt.append(c)
                    if limit is not None and len(seen) > limit:
                        raise ValueError(f"closure exceeds {limit} elements")
        frontier = nxt
    perms = np.array(sorted(seen), dtype=np.int64)
    return perms


def enumerate_permutation_set(kind: str, q: int | None = None, path=None) -> PermutationSet:
    """Build a certified sharply 3-transitive permutation set.

    ``kind`` is ``"pgl2"`` (needs ``q``), ``"nearfield9"`` or ``"file"`` (needs ``path``).
    Raises NotSharply3Transitive when certification fails.
    """
    if kind == "pgl2":
        if q is None:
            raise BadField("pgl2 needs a field order q")
        pset = PermutationSet(pgl2_permutations(q), name=f"pgl2({q})")
    elif kind == "nearfield9":
        pset = PermutationSet(nearfield9_permutations(), name="nearfield9")
    elif kind in ("file", "from_file"):
        if path is None:
            raise ParseError("from_file needs a path")
        pset = PermutationSet.load(path)
    else:
        raise ValueError(f"unknown permutation-set kind {kind!r}")
    certify_sharply_3_transitive(pset)
    return pset
