"""Exact coefficient arithmetic and free noncommutative graded DGAs.

Coefficient rings: the integers, Laurent polynomials Z[t, t^-1], and small
finite fields GF(q).  Algebra elements are finite sums of noncommutative
words in named generators; everything is immutable and kept in a canonical
normal form so that equality is a plain syntactic comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping


# ---------------------------------------------------------------------------
# Coefficient rings
# ---------------------------------------------------------------------------

class CoefficientError(ValueError):
    """Raised on arithmetic between elements of different rings."""


# Fixed irreducible polynomials (low-degree coefficients first, over F_p)
# realizing GF(p^s).  One fixed choice per (p, s); see docs/fields.md.
_IRREDUCIBLES = {
    (2, 2): (1, 1, 1),        # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),     # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (3, 2): (1, 0, 1),        # x^2 + 1
}

_SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)


class Ring:
    """Common interface: elements are plain hashable Python values."""

    name = "ring"

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def from_int(self, n: int):
        raise NotImplementedError

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def coerce(self, value):
        """Accept ints (and ring elements) as scalars."""
        if isinstance(value, bool):
            raise CoefficientError("booleans are not ring scalars")
        if isinstance(value, int):
            return self.from_int(value)
        return value

    def __repr__(self):
        return self.name


class IntegerRing(Ring):
    name = "Z"

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, n):
        return n


@dataclass(frozen=True)
class Laurent:
    """Finitely supported integer map exponent -> coefficient, as sorted pairs."""

    terms: tuple[tuple[int, int], ...]

    @staticmethod
    def from_dict(d: Mapping[int, int]) -> "Laurent":
        return Laurent(tuple(sorted((e, c) for e, c in d.items() if c != 0)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def eval_int(self, value: int) -> int:
        total = 0
        for e, c in self.terms:
            total += c * (value**e if e >= 0 else _int_negative_power(value, e))
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            else:
                tpow = "t" if e == 1 else f"t^{e}"
                if c == 1:
                    parts.append(tpow)
                elif c == -1:
                    parts.append(f"-{tpow}")
                else:
                    parts.append(f"{c}*{tpow}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _int_negative_power(value: int, e: int) -> int:
    # only t = +-1 is ever evaluated, where t^-k = t^k
    if value in (1, -1):
        return value ** (-e)
    raise CoefficientError(f"cannot evaluate t^{e} at t={value} over Z")


class LaurentRing(Ring):
    name = "Z[t]"

    def add(self, a: Laurent, b: Laurent):
        d = a.as_dict()
        for e, c in b.terms:
            d[e] = d.get(e, 0) + c
        return Laurent.from_dict(d)

    def neg(self, a: Laurent):
        return Laurent(tuple((e, -c) for e, c in a.terms))

    def mul(self, a: Laurent, b: Laurent):
        d: dict[int, int] = {}
        for e1, c1 in a.terms:
            for e2, c2 in b.terms:
                e = e1 + e2
                d[e] = d.get(e, 0) + c1 * c2
        return Laurent.from_dict(d)

    def from_int(self, n):
        return Laurent.from_dict({0: n})

    @property
    def t(self) -> Laurent:
        return Laurent(((1, 1),))

    def t_power(self, k: int) -> Laurent:
        return Laurent(((k, 1),))


class FiniteField(Ring):
    """GF(p^s) with elements encoded as integers 0..q-1 (base-p digit vectors).

    Supported orders: p in {2,3,5,7,11,13} with s = 1, plus 4, 8, 16 and 9
    through the fixed irreducibles above.  Tables are built once per order.
    """

    def __init__(self, q: int):
        p, s = _prime_power(q)
        if p not in _SUPPORTED_PRIMES:
            raise CoefficientError(f"unsupported field characteristic {p}")
        if s > 1 and (p, s) not in _IRREDUCIBLES:
            raise CoefficientError(f"no stored irreducible for GF({q})")
        self.q = q
        self.p = p
        self.s = s
        self.name = f"F{q}"
        self._mul = _field_mul_table(q)

    def add(self, a, b):
        return _digit_add(a, b, self.p, self.s)

    def neg(self, a):
        return _digit_neg(a, self.p, self.s)

    def mul(self, a, b):
        return self._mul[a][b]

    def from_int(self, n):
        return n % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverting 0 in a finite field")
        row = self._mul[a]
        return row.index(1)

    def elements(self) -> range:
        return range(self.q)

    def pow(self, a, k: int):
        out, base = 1, a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self):
        return hash(("FiniteField", self.q))


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise CoefficientError(f"field order must be >= 2, got {q}")
    for p in _SUPPORTED_PRIMES + (17, 19, 23):
        if q % p == 0:
            s = 0
            m = q
            while m % p == 0:
                m //= p
                s += 1
            if m != 1:
                raise CoefficientError(f"{q} is not a prime power")
            return p, s
    raise CoefficientError(f"{q} is not a supported prime power")


def _digits(a: int, p: int, s: int) -> list[int]:
    out = []
    for _ in range(s):
        out.append(a % p)
        a //= p
    return out


def _undigits(ds: Iterable[int], p: int) -> int:
    out = 0
    for d in reversed(list(ds)):
        out = out * p + d
    return out


def _digit_add(a: int, b: int, p: int, s: int) -> int:
    return _undigits(
        [(x + y) % p for x, y in zip(_digits(a, p, s), _digits(b, p, s))], p
    )


def _digit_neg(a: int, p: int, s: int) -> int:
    return _undigits([(-x) % p for x in _digits(a, p, s)], p)


@lru_cache(maxsize=None)
def _field_mul_table(q: int) -> tuple[tuple[int, ...], ...]:
    p, s = _prime_power(q)
    if s == 1:
        return tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
    irz = _IRREDUCIBLES[(p, s)]
    table = []
    for a in range(q):
        da = _digits(a, p, s)
        row = []
        for b in range(q):
            db = _digits(b, p, s)
            prod = [0] * (2 * s - 1)
            for i, x in enumerate(da):
                if x:
                    for j, y in enumerate(db):
                        prod[i + j] = (prod[i + j] + x * y) % p
            # reduce modulo the irreducible (monic of degree s)
            for k in range(2 * s - 2, s - 1, -1):
                c = prod[k]
                if c:
                    prod[k] = 0
                    for j in range(s):
                        prod[k - s + j] = (prod[k - s + j] - c * irz[j]) % p
            row.append(_undigits(prod[:s], p))
        table.append(tuple(row))
    return tuple(table)


ZZ = IntegerRing()
ZT = LaurentRing()


@lru_cache(maxsize=None)
def GF(q: int) -> FiniteField:
    return FiniteField(q)


def same_ring(r1: Ring, r2: Ring) -> bool:
    if isinstance(r1, FiniteField) and isinstance(r2, FiniteField):
        return r1.q == r2.q
    return type(r1) is type(r2)


# ---------------------------------------------------------------------------
# Words and elements of the free algebra
# ---------------------------------------------------------------------------

Word = tuple[str, ...]  # ordered generator names; () is the unit


def word_key(w: Word):
    return w


@dataclass(frozen=True)
class Element:
    """Normal-form sum of words: mapping word -> nonzero coefficient."""

    ring: Ring
    terms: tuple[tuple[Word, object], ...]

    @staticmethod
    def build(ring: Ring, data: Mapping[Word, object]) -> "Element":
        clean = {}
        for w, c in data.items():
            c = ring.coerce(c)
            if not ring.is_zero(c):
                clean[tuple(w)] = c
        return Element(ring, tuple(sorted(clean.items(), key=lambda kv: kv[0])))

    @staticmethod
    def zero(ring: Ring) -> "Element":
        return Element(ring, ())

    @staticmethod
    def unit(ring: Ring, coeff=1) -> "Element":
        return Element.build(ring, {(): coeff})

    @staticmethod
    def generator(ring: Ring, name: str, coeff=1) -> "Element":
        return Element.build(ring, {(name,): coeff})

    def as_dict(self) -> dict[Word, object]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        for w, c in self.terms:
            if w == ():
                return c
        return self.ring.zero

    def words(self) -> list[Word]:
        return [w for w, _ in self.terms]

    def add(self, other: "Element") -> "Element":
        _check_rings(self, other)
        d = self.as_dict()
        for w, c in other.terms:
            acc = self.ring.add(d.get(w, self.ring.zero), c)
            if self.ring.is_zero(acc):
                d.pop(w, None)
            else:
                d[w] = acc
        return Element.build(self.ring, d)

    def neg(self) -> "Element":
        return Element(self.ring, tuple((w, self.ring.neg(c)) for w, c in self.terms))

    def scale(self, scalar) -> "Element":
        scalar = self.ring.coerce(scalar)
        return Element.build(
            self.ring, {w: self.ring.mul(scalar, c) for w, c in self.terms}
        )

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms:
            word = "*".join(w) if w else "1"
            if w and c == self.ring.one:
                parts.append(word)
            elif w:
                parts.append(f"({c})*{word}" if isinstance(c, Laurent) else f"{c}*{word}")
            else:
                parts.append(f"({c})" if isinstance(c, Laurent) else str(c))
        return " + ".join(parts)


def _check_rings(x: Element, y: Element):
    if not same_ring(x.ring, y.ring):
        raise CoefficientError(f"mixing coefficients {x.ring} and {y.ring}")


def multiply(x: Element, y: Element) -> Element:
    """Noncommutative product, unit = empty word."""
    _check_rings(x, y)
    ring = x.ring
    d: dict[Word, object] = {}
    for w1, c1 in x.terms:
        for w2, c2 in y.terms:
            w = w1 + w2
            acc = ring.add(d.get(w, ring.zero), ring.mul(c1, c2))
            if ring.is_zero(acc):
                d.pop(w, None)
            else:
                d[w] = acc
    return Element.build(ring, d)


def add(x: Element, y: Element) -> Element:
    return x.add(y)


# ---------------------------------------------------------------------------
# DGAs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    name: str
    degree: int


@dataclass(frozen=True)
class DGA:
    """Free noncommutative unital graded algebra with a differential.

    The differential is recorded on generators and extended by linearity and
    the graded Leibniz rule d(vw) = (dv)w + (-1)^|v| v(dw).
    """

    ring: Ring
    generators: tuple[Generator, ...]
    differential: Mapping[str, Element] = field(default_factory=dict)

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        clean = {k: v for k, v in dict(self.differential).items() if not v.is_zero}
        object.__setattr__(self, "differential", clean)

    @property
    def degrees(self) -> dict[str, int]:
        return {g.name: g.degree for g in self.generators}

    def generator_names(self) -> list[str]:
        return [g.name for g in self.generators]

    def generators_of_degree(self, d: int) -> list[str]:
        return [g.name for g in self.generators if g.degree == d]

    def diff_of(self, name: str) -> Element:
        if name not in self.degrees:
            raise KeyError(f"unknown generator {name!r}")
        return self.differential.get(name, Element.zero(self.ring))

    def word_degree(self, w: Word) -> int:
        degs = self.degrees
        try:
            return sum(degs[g] for g in w)
        except KeyError as exc:
            raise KeyError(f"unknown generator {exc.args[0]!r} in word {w}") from exc

    def element(self, data: Mapping[Word, object]) -> Element:
        return Element.build(self.ring, data)


def apply_differential(dga: DGA, x: Element) -> Element:
    """Extend the generator differential to x by linearity and Leibniz."""
    ring = dga.ring
    degs = dga.degrees
    out: dict[Word, object] = {}
    for w, c in x.terms:
        for g in w:
            if g not in degs:
                raise KeyError(f"unknown generator {g!r}")
        prefix_deg = 0
        for i, g in enumerate(w):
            dg = dga.diff_of(g)
            if not dg.is_zero:
                sign = -1 if prefix_deg % 2 else 1
                for wg, cg in dg.terms:
                    word = w[:i] + wg + w[i + 1 :]
                    coeff = ring.mul(c, cg)
                    if sign < 0:
                        coeff = ring.neg(coeff)
                    acc = ring.add(out.get(word, ring.zero), coeff)
                    if ring.is_zero(acc):
                        out.pop(word, None)
                    else:
                        out[word] = acc
            prefix_deg += degs[g]
    return Element.build(ring, out)


@dataclass
class ValidationReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "valid"
        return "invalid:\n" + "\n".join(f"  - {v}" for v in self.violations)


def validate(dga: DGA) -> ValidationReport:
    """Check degree purity of every d(g) and d(d(g)) = 0."""
    violations = []
    for g in dga.generators:
        dg = dga.diff_of(g.name)
        for w, _ in dg.terms:
            wd = dga.word_degree(w)
            if wd != g.degree - 1:
                violations.append(
                    f"d({g.name}) term {'*'.join(w) or '1'} has degree {wd}, "
                    f"expected {g.degree - 1}"
                )
        ddg = apply_differential(dga, dg)
        if not ddg.is_zero:
            violations.append(f"d(d({g.name})) = {ddg} != 0")
    return ValidationReport(violations)


# ---------------------------------------------------------------------------
# Coefficient changes
# ---------------------------------------------------------------------------

def reduce_scalar(ring_from: Ring, ring_to: Ring, value):
    """Map a scalar into ring_to; t goes to -1 when leaving Z[t, t^-1]."""
    if same_ring(ring_from, ring_to):
        return value
    if isinstance(ring_from, IntegerRing):
        return ring_to.from_int(value)
    if isinstance(ring_from, LaurentRing):
        if isinstance(ring_to, IntegerRing):
            return value.eval_int(-1)
        return ring_to.from_int(value.eval_int(-1))
    if isinstance(ring_from, FiniteField) and isinstance(ring_to, FiniteField):
        if ring_from.q == 2 and ring_to.p == 2:
            return value  # 0, 1 encode the prime subfield
        if ring_from.q == ring_to.p:
            return value % ring_to.p
    raise CoefficientError(f"no coefficient map {ring_from} -> {ring_to}")


def change_coefficients(dga: DGA, ring_to: Ring) -> DGA:
    """Push a DGA into another coefficient ring (t specializes to -1)."""
    diff = {}
    for name, el in dga.differential.items():
        diff[name] = Element.build(
            ring_to,
            _merge_words(
                ((w, reduce_scalar(dga.ring, ring_to, c)) for w, c in el.terms),
                ring_to,
            ),
        )
    return DGA(ring_to, dga.generators, diff)


def _merge_words(pairs, ring: Ring) -> dict[Word, object]:
    out: dict[Word, object] = {}
    for w, c in pairs:
        out[w] = ring.add(out.get(w, ring.zero), c)
    return out
