"""Graded augmentations over finite fields and augmentation-variety counts.

An augmentation assigns field values to the degree-0 generators (t, when
present, is pinned to -1) so that eps(d g) = 0 for every generator.  The
enumerator backtracks over generators ordered by equation membership with
unit propagation; plain exhaustive search is kept alongside as the oracle.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    DGA,
    Element,
    FiniteField,
    GF,
    Generator,
    change_coefficients,
    validate,
)
from .linhom import LinearizedComplex


class AugmentationError(ValueError):
    pass


@dataclass(frozen=True)
class Augmentation:
    """Values on degree-0 generators; everything else is sent to zero."""

    field: FiniteField
    values: tuple[tuple[str, int], ...]  # sorted by generator name
    t_value: int | None = None  # -1 in the field, when t exists upstream

    @staticmethod
    def build(field: FiniteField, values: dict[str, int], t_value: int | None = None):
        return Augmentation(
            field, tuple(sorted((k, v) for k, v in values.items() if v)), t_value
        )

    def value(self, name: str) -> int:
        for k, v in self.values:
            if k == name:
                return v
        return 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def evaluate(self, dga: DGA, el: Element) -> int:
        """Apply the augmentation to an element of a field DGA."""
        ring = self.field
        degs = dga.degrees
        total = ring.zero
        vals = self.as_dict()
        for word, coeff in el.terms:
            prod = coeff
            for g in word:
                if degs[g] != 0:
                    prod = ring.zero
                    break
                prod = ring.mul(prod, vals.get(g, ring.zero))
            total = ring.add(total, prod)
        return total

    def is_valid(self, dga: DGA) -> bool:
        return all(
            self.evaluate(dga, dga.diff_of(g.name)) == self.field.zero
            for g in dga.generators
        )


def _field_dga(dga: DGA, q: int) -> DGA:
    ring = GF(q)
    if isinstance(dga.ring, FiniteField) and dga.ring.q == q:
        return dga
    return change_coefficients(dga, ring)


def enumerate_augmentations(dga: DGA, q: int, oracle: bool = False) -> list[Augmentation]:
    """All graded augmentations of the DGA into GF(q), in canonical order.

    With oracle=True the plain product scan over all assignments is used
    instead of backtracking; results must agree.
    """
    ring = GF(q)
    fdga = _field_dga(dga, q)
    unknowns = sorted(fdga.generators_of_degree(0))
    equations = []
    for g in fdga.generators:
        el = fdga.diff_of(g.name)
        terms = _augmentation_terms(fdga, el)
        if terms is not None:
            equations.append(terms)
    t_val = ring.from_int(-1) if dga.ring.name == "Z[t]" else None

    if oracle:
        sols = []
        for combo in itertools.product(ring.elements(), repeat=len(unknowns)):
            assign = dict(zip(unknowns, combo))
            if all(_eval_terms(ring, eq, assign) == 0 for eq in equations):
                sols.append(assign)
    else:
        sols = _backtrack(ring, unknowns, equations)
    sols.sort(key=lambda a: tuple(a[u] for u in unknowns))
    out = [Augmentation.build(ring, s, t_val) for s in sols]
    for aug in out:
        if not aug.is_valid(fdga):
            raise AugmentationError("solver produced an invalid augmentation")
    return out


def _augmentation_terms(dga: DGA, el: Element):
    """Reduce eps(el) to monomials in degree-0 generators, or None if 0 = 0."""
    degs = dga.degrees
    terms = []
    for word, coeff in el.terms:
        if all(degs[g] == 0 for g in word):
            terms.append((word, coeff))
    if not terms:
        return None
    return terms


def _eval_terms(ring: FiniteField, terms, assign: dict[str, int]) -> int:
    total = ring.zero
    for word, coeff in terms:
        prod = coeff
        for g in word:
            prod = ring.mul(prod, assign[g])
            if prod == 0:
                break
        total = ring.add(total, prod)
    return total


def _backtrack(ring: FiniteField, unknowns: list[str], equations) -> list[dict[str, int]]:
    # order generators by how many equations mention them, ties by name
    counts = {u: 0 for u in unknowns}
    for eq in equations:
        mentioned = {g for word, _ in eq for g in word}
        for g in mentioned:
            counts[g] += 1
    order = sorted(unknowns, key=lambda u: (-counts[u], u))
    sols: list[dict[str, int]] = []
    assign: dict[str, int] = {}

    def unassigned_vars(eq):
        return {g for word, _ in eq for g in word if g not in assign}

    def linear_coeffs(eq, x: str):
        """Split eps(eq) = c*x + d when x is linear in eq, else None."""
        c = ring.zero
        d = ring.zero
        for word, coeff in eq:
            occurrences = word.count(x)
            if occurrences > 1:
                return None
            prod = coeff
            for g in word:
                if g == x:
                    continue
                prod = ring.mul(prod, assign[g])
            if occurrences:
                c = ring.add(c, prod)
            else:
                d = ring.add(d, prod)
        return c, d

    def propagate() -> tuple[list[str], bool]:
        """Assign forced values; returns (new assignments, conflict?)."""
        forced: list[str] = []
        changed = True
        while changed:
            changed = False
            for eq in equations:
                free = unassigned_vars(eq)
                if not free:
                    if _eval_terms(ring, eq, assign) != 0:
                        return forced, True
                    continue
                if len(free) == 1:
                    x = next(iter(free))
                    split = linear_coeffs(eq, x)
                    if split is None:
                        continue
                    c, d = split
                    if c == ring.zero:
                        if d != ring.zero:
                            return forced, True
                        continue
                    assign[x] = ring.mul(ring.inv(c), ring.neg(d))
                    forced.append(x)
                    changed = True
        return forced, False

    def recurse(i: int):
        forced, conflict = propagate()
        if not conflict:
            while i < len(order) and order[i] in assign:
                i += 1
            if i == len(order):
                sols.append(dict(assign))
            else:
                g = order[i]
                for v in ring.elements():
                    assign[g] = v
                    recurse(i + 1)
                del assign[g]
        for x in forced:
            del assign[x]

    recurse(0)
    return sols


# ---------------------------------------------------------------------------
# Conjugation and linearization
# ---------------------------------------------------------------------------

def conjugate(dga: DGA, eps: Augmentation) -> DGA:
    """Differential conjugated by c -> c + eps(c); kills constant terms."""
    fdga = _field_dga(dga, eps.field.q)
    if not eps.is_valid(fdga):
        raise AugmentationError("augmentation does not satisfy eps after d = 0")
    ring = eps.field
    vals = eps.as_dict()
    subs = {}
    for g in fdga.generators:
        v = vals.get(g.name, ring.zero) if g.degree == 0 else ring.zero
        subs[g.name] = Element.build(ring, {(g.name,): ring.one, (): v})
    diff = {}
    for g in fdga.generators:
        el = fdga.diff_of(g.name)
        acc = Element.zero(ring)
        for word, coeff in el.terms:
            prod = Element.unit(ring, coeff)
            for name in word:
                prod = _el_mul(prod, subs[name])
            acc = acc.add(prod)
        diff[g.name] = acc
    out = DGA(ring, fdga.generators, diff)
    report = validate(out)
    if not report.ok:
        raise AugmentationError(f"conjugated DGA failed validation: {report}")
    for g in out.generators:
        if out.diff_of(g.name).constant_term() != ring.zero:
            raise AugmentationError("conjugation left a constant term")
    return out


def _el_mul(x: Element, y: Element) -> Element:
    from .algebra import multiply

    return multiply(x, y)


def linear_part(dga: DGA) -> LinearizedComplex:
    """Word-length-1 part of a differential with no constant terms."""
    ring = dga.ring
    for g in dga.generators:
        c = dga.diff_of(g.name).constant_term()
        if c != ring.zero and not ring.is_zero(c):
            raise AugmentationError(
                f"d({g.name}) has constant term {c}; conjugate by an augmentation first"
            )
    degrees = sorted({g.degree for g in dga.generators})
    bases = {d: tuple(sorted(dga.generators_of_degree(d))) for d in degrees}
    bases = {d: b for d, b in bases.items() if b}
    mats = {}
    for d in sorted(bases):
        cols = bases[d]
        rows = bases.get(d - 1, ())
        if not rows:
            continue
        rix = {name: i for i, name in enumerate(rows)}
        m = [[0] * len(cols) for _ in rows]
        for j, name in enumerate(cols):
            for word, coeff in dga.diff_of(name).terms:
                if len(word) == 1:
                    m[rix[word[0]]][j] = coeff
        mats[d] = m
    return LinearizedComplex(ring, bases, mats)


# ---------------------------------------------------------------------------
# Polynomial systems and variety point counts
# ---------------------------------------------------------------------------

ENUMERATION_CAP = 6  # max variables for exhaustive variety counting


@dataclass(frozen=True)
class PolySystem:
    """Polynomial equations over a finite field in named variables.

    Each equation is a sum of terms (coefficient, ((var, power), ...)); the
    coefficient is an integer reduced into the field at evaluation time.
    """

    variables: tuple[str, ...]
    equations: tuple[tuple[tuple[int, tuple[tuple[str, int], ...]], ...], ...]

    def __post_init__(self):
        declared = set(self.variables)
        for eq in self.equations:
            for _, powers in eq:
                for var, _ in powers:
                    if var not in declared:
                        raise AugmentationError(f"equation uses undeclared variable {var!r}")


def parse_polysystem(text: str) -> PolySystem:
    """Parse `var a b; eq a*b + 1; eq ...;` system files; # comments allowed."""
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    statements = [s.strip() for s in body.split(";")]
    variables: list[str] = []
    equations = []
    for stmt in statements:
        if not stmt or stmt.startswith("#"):
            continue
        if stmt.startswith("var "):
            for name in stmt[4:].split():
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                    raise AugmentationError(f"bad variable name {name!r}")
                variables.append(name)
        elif stmt.startswith("eq "):
            equations.append(_parse_equation(stmt[3:]))
        else:
            raise AugmentationError(f"bad statement {stmt!r} (want var/eq)")
    return PolySystem(tuple(variables), tuple(equations))


def _parse_equation(text: str):
    text = text.replace("-", "+-")
    terms = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coeff = 1
        if chunk.startswith("-"):
            coeff = -1
            chunk = chunk[1:].strip()
        powers: dict[str, int] = {}
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise AugmentationError(f"empty factor in equation term {chunk!r}")
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?", factor)
            if m:
                powers[m.group(1)] = powers.get(m.group(1), 0) + int(m.group(2) or 1)
            elif re.fullmatch(r"-?\d+", factor):
                coeff *= int(factor)
            else:
                raise AugmentationError(f"bad factor {factor!r}")
        terms.append((coeff, tuple(sorted(powers.items()))))
    return tuple(terms)


def variety_points(system: PolySystem, q: int) -> int:
    """Exact number of GF(q) solutions by exhaustive enumeration."""
    if len(system.variables) > ENUMERATION_CAP:
        raise AugmentationError(
            f"{len(system.variables)} variables exceeds the enumeration cap "
            f"of {ENUMERATION_CAP}"
        )
    ring = GF(q)
    count = 0
    for combo in itertools.product(ring.elements(), repeat=len(system.variables)):
        assign = dict(zip(system.variables, combo))
        ok = True
        for eq in system.equations:
            total = ring.zero
            for coeff, powers in eq:
                prod = ring.from_int(coeff)
                for var, power in powers:
                    prod = ring.mul(prod, ring.pow(assign[var], power))
                total = ring.add(total, prod)
            if total != ring.zero:
                ok = False
                break
        if ok:
            count += 1
    return count


def roots_of_unity_count(k: int, q: int) -> int:
    """|{x in GF(q) : x^k = 1}| = gcd(k', q - 1), char factors stripped from k."""
    if k <= 0:
        raise AugmentationError(f"k must be positive, got {k}")
    p = GF(q).p
    while k % p == 0:
        k //= p
    return math.gcd(k, q - 1)


def torus_point_count(free_rank: int, torsion: Sequence[int], q: int) -> int:
    """(q-1)^k times the root-of-unity counts of the torsion orders."""
    count = (q - 1) ** free_rank
    for k in torsion:
        count *= roots_of_unity_count(k, q)
    return count


# ---------------------------------------------------------------------------
# Variety dimension from point counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionEstimate:
    estimate: float  # -inf for empty varieties
    stable: bool
    slopes: tuple[float, ...]


def dimension_estimate(counts: dict[int, int]) -> DimensionEstimate:
    """Slope of log|V(F_q)| against log q between the largest field orders."""
    if len(counts) < 2:
        raise AugmentationError("need counts at >= 2 field orders")
    qs = sorted(counts)
    if any(counts[q] == 0 for q in qs):
        return DimensionEstimate(float("-inf"), True, ())
    slopes = []
    for q1, q2 in zip(qs, qs[1:]):
        slopes.append(
            (math.log(counts[q2]) - math.log(counts[q1])) / (math.log(q2) - math.log(q1))
        )
    stable = len(slopes) >= 2 and abs(slopes[-1] - slopes[-2]) <= 0.2
    if len(slopes) == 1:
        stable = True
    return DimensionEstimate(slopes[-1], stable, tuple(slopes))
