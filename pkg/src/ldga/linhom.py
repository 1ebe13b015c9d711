"""Linearized complexes and their homology over finite fields and over Z.

Matrices are lists of rows with exact entries (Python ints; finite-field
entries use the table arithmetic from :mod:`ldga.algebra`).  Integer homology
goes through Smith normal form with explicit unimodular transforms U, A, V
so that U*A*V = D can be re-verified by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .algebra import FiniteField, IntegerRing, Ring, same_ring

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# Plain matrix helpers
# ---------------------------------------------------------------------------

def zero_matrix(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    n, k, m = len(a), len(b), len(b[0])
    out = zero_matrix(n, m)
    for i in range(n):
        for s in range(k):
            x = a[i][s]
            if x:
                row_b = b[s]
                row = out[i]
                for j in range(m):
                    row[j] += x * row_b[j]
    return out


def mat_shape(a: Matrix) -> tuple[int, int]:
    return len(a), len(a[0]) if a else 0


def integer_determinant(a: Matrix) -> int:
    """Fraction-free (Bareiss) determinant; exact for integer matrices."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------

@dataclass
class SmithForm:
    d: Matrix
    u: Matrix  # rows transform
    v: Matrix  # columns transform
    diagonal: list[int]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(a: Matrix) -> SmithForm:
    """Diagonalize an integer matrix: U*A*V = D with U, V unimodular.

    Pivot = globally minimal nonzero absolute value; euclidean remainders
    strictly shrink the pivot, which gives termination and the divisibility
    chain d1 | d2 | ... in one pass.
    """
    rows, cols = mat_shape(a)
    d = [row[:] for row in a]
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, mult):
        d[dst] = [x + mult * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + mult * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, mult):
        for row in d:
            row[dst] += mult * row[src]
        for row in v:
            row[dst] += mult * row[src]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = abs(d[i][j])
                if x and (best is None or x < best):
                    best, pivot = x, (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        col_entry = next((i for i in range(t + 1, rows) if d[i][t]), None)
        if col_entry is not None:
            q = d[col_entry][t] // d[t][t]
            add_row(t, col_entry, -q)
            if d[col_entry][t]:
                swap_rows(t, col_entry)
            continue
        row_entry = next((j for j in range(t + 1, cols) if d[t][j]), None)
        if row_entry is not None:
            q = d[t][row_entry] // d[t][t]
            add_col(t, row_entry, -q)
            if d[t][row_entry]:
                swap_cols(t, row_entry)
            continue

        bad_row = None
        for i in range(t + 1, rows):
            if any(d[i][j] % d[t][t] for j in range(t + 1, cols)):
                bad_row = i
                break
        if bad_row is not None:
            add_row(bad_row, t, 1)
            continue
        t += 1

    for k in range(limit):
        if d[k][k] < 0:
            for row in d:
                row[k] = -row[k]
            for row in v:
                row[k] = -row[k]
    diag = [d[i][i] for i in range(limit)]
    return SmithForm(d, u, v, diag)


def is_unimodular(m: Matrix) -> bool:
    return abs(integer_determinant(m)) == 1


# ---------------------------------------------------------------------------
# Field elimination
# ---------------------------------------------------------------------------

def field_rank(ring: FiniteField, a: Matrix) -> int:
    rows, cols = mat_shape(a)
    m = [row[:] for row in a]
    rank = 0
    for col in range(cols):
        pivot = None
        for i in range(rank, rows):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = ring.inv(m[rank][col])
        m[rank] = [ring.mul(inv, x) for x in m[rank]]
        for i in range(rows):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# Complexes and graded modules
# ---------------------------------------------------------------------------

HOMOLOGICAL = "homological"
COHOMOLOGICAL = "cohomological"


@dataclass(frozen=True)
class LinearizedComplex:
    """Per-degree bases with the degree-lowering differential d -> d-1.

    ``matrices[d]`` maps basis(d) to basis(d-1): shape (len(basis(d-1)),
    len(basis(d))), columns indexed by degree-d generators.
    """

    ring: Ring
    bases: Mapping[int, tuple[str, ...]]
    matrices: Mapping[int, Matrix]

    def __post_init__(self):
        object.__setattr__(self, "bases", dict(self.bases))
        object.__setattr__(self, "matrices", dict(self.matrices))
        for d, m in self.matrices.items():
            want = (len(self.bases.get(d - 1, ())), len(self.bases.get(d, ())))
            if mat_shape(m) != want:
                raise ValueError(f"matrix at degree {d} has shape {mat_shape(m)}, expected {want}")

    def degrees(self) -> list[int]:
        return sorted(self.bases)

    def dim(self, d: int) -> int:
        return len(self.bases.get(d, ()))

    def matrix(self, d: int) -> Matrix:
        return self.matrices.get(d, zero_matrix(self.dim(d - 1), self.dim(d)))

    def check_composition(self):
        """Consecutive matrices must compose to zero."""
        for d in self.degrees():
            m1 = self.matrix(d)       # C_d -> C_{d-1}
            m2 = self.matrix(d + 1)   # C_{d+1} -> C_d
            prod = mat_mul(m1, m2)
            if isinstance(self.ring, FiniteField):
                bad = any(self.ring.from_int(x) != 0 for row in prod for x in row)
            else:
                bad = any(x != 0 for row in prod for x in row)
            if bad:
                raise ValueError(f"differential does not square to zero at degree {d}")

    def shift(self, m: int) -> "LinearizedComplex":
        return LinearizedComplex(
            self.ring,
            {d + m: b for d, b in self.bases.items()},
            {d + m: [row[:] for row in mat] for d, mat in self.matrices.items()},
        )

    def block_sum(self, other: "LinearizedComplex", tag: str = "N") -> "LinearizedComplex":
        """Direct sum; other's basis names are suffixed to stay unique."""
        if not same_ring(self.ring, other.ring):
            raise ValueError("block sum needs a common coefficient ring")
        bases: dict[int, tuple[str, ...]] = {}
        mats: dict[int, Matrix] = {}
        for d in sorted(set(self.bases) | set(other.bases)):
            bases[d] = tuple(self.bases.get(d, ())) + tuple(
                f"{name}^{tag}" for name in other.bases.get(d, ())
            )
        for d in sorted(set(self.matrices) | set(other.matrices) | set(bases)):
            r1, c1 = len(self.bases.get(d - 1, ())), len(self.bases.get(d, ()))
            r2, c2 = len(other.bases.get(d - 1, ())), len(other.bases.get(d, ()))
            if (r1 + r2) == 0 or (c1 + c2) == 0:
                continue
            m1 = self.matrix(d)
            m2 = other.matrix(d)
            block = zero_matrix(r1 + r2, c1 + c2)
            for i in range(r1):
                for j in range(c1):
                    block[i][j] = m1[i][j]
            for i in range(r2):
                for j in range(c2):
                    block[r1 + i][c1 + j] = m2[i][j]
            mats[d] = block
        return LinearizedComplex(self.ring, bases, mats)


@dataclass(frozen=True)
class GradedModule:
    """Per-degree free rank and torsion orders, with a variance tag."""

    ring_tag: str  # "Z" or "F<q>"
    variance: str  # HOMOLOGICAL or COHOMOLOGICAL
    entries: Mapping[int, tuple[int, tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {
            d: (free, tuple(tor))
            for d, (free, tor) in dict(self.entries).items()
            if free or tor
        }
        object.__setattr__(self, "entries", clean)

    @property
    def is_field(self) -> bool:
        return self.ring_tag != "Z"

    def free_rank(self, d: int) -> int:
        return self.entries.get(d, (0, ()))[0]

    def torsion(self, d: int) -> tuple[int, ...]:
        return self.entries.get(d, (0, ()))[1]

    def dims(self) -> dict[int, int]:
        if not self.is_field:
            raise ValueError("dims() requires field coefficients")
        return {d: free for d, (free, _) in sorted(self.entries.items())}

    def degrees(self) -> list[int]:
        return sorted(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def describe(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for d in self.degrees():
            free, tor = self.entries[d]
            if self.is_field:
                parts.append(f"H_{d} = {self.ring_tag}^{free}")
            else:
                pieces = [f"Z^{free}"] if free else []
                pieces += [f"Z/{k}" for k in tor]
                parts.append(f"H_{d} = " + (" + ".join(pieces) or "0"))
        return ", ".join(parts)


@dataclass(frozen=True)
class PoincarePolynomial:
    """Laurent polynomial in t with nonnegative integer coefficients."""

    coeffs: tuple[tuple[int, int], ...]  # (degree, coefficient), sorted

    @staticmethod
    def from_dims(dims: Mapping[int, int]) -> "PoincarePolynomial":
        return PoincarePolynomial(tuple(sorted((d, c) for d, c in dims.items() if c)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def multiply_one_plus_tm(self, m: int) -> "PoincarePolynomial":
        out: dict[int, int] = {}
        for d, c in self.coeffs:
            out[d] = out.get(d, 0) + c
            out[d + m] = out.get(d + m, 0) + c
        return PoincarePolynomial.from_dims(out)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in self.coeffs:
            if d == 0:
                parts.append(str(c))
            else:
                tp = "t" if d == 1 else f"t^{d}"
                parts.append(tp if c == 1 else f"{c}{tp}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------

def homology_field(cx: LinearizedComplex) -> GradedModule:
    """dim H_d = dim ker(d: d -> d-1) - rank(d: d+1 -> d), exactly."""
    ring = cx.ring
    if not isinstance(ring, FiniteField):
        raise ValueError("homology_field needs finite-field coefficients")
    cx.check_composition()
    ranks = {d: field_rank(ring, cx.matrix(d)) for d in _relevant_degrees(cx)}
    entries = {}
    for d in cx.degrees():
        dim = cx.dim(d)
        r_out = ranks.get(d, 0)
        r_in = ranks.get(d + 1, 0)
        ker = dim - r_out
        assert ker + r_out == dim, "rank-nullity audit failed"
        h = ker - r_in
        if h:
            entries[d] = (h, ())
    return GradedModule(f"F{ring.q}", HOMOLOGICAL, entries)


def homology_integral(cx: LinearizedComplex) -> GradedModule:
    """Smith normal form homology: free ranks and torsion per degree."""
    if not isinstance(cx.ring, IntegerRing):
        raise ValueError("homology_integral needs integer coefficients")
    cx.check_composition()
    snfs: dict[int, SmithForm] = {}
    for d in _relevant_degrees(cx):
        m = cx.matrix(d)
        if mat_shape(m)[0] and mat_shape(m)[1]:
            snfs[d] = smith_normal_form(m)
    entries = {}
    for d in cx.degrees():
        dim = cx.dim(d)
        r_out = snfs[d].rank if d in snfs else 0
        incoming = snfs.get(d + 1)
        r_in = incoming.rank if incoming else 0
        free = dim - r_out - r_in
        torsion = tuple(
            x for x in (abs(v) for v in incoming.diagonal) if x > 1
        ) if incoming else ()
        if free or torsion:
            entries[d] = (free, torsion)
    return GradedModule("Z", HOMOLOGICAL, entries)


def _relevant_degrees(cx: LinearizedComplex) -> list[int]:
    ds = set(cx.degrees())
    return sorted(ds | {d + 1 for d in ds})


def uct_dualize(h: GradedModule) -> GradedModule:
    """Universal coefficients: H^d free = H_d free, H^d torsion = H_{d-1} torsion."""
    if h.is_field:
        raise ValueError("uct_dualize expects an integral homology module")
    if h.variance != HOMOLOGICAL:
        raise ValueError("uct_dualize expects homological input")
    entries: dict[int, tuple[int, tuple[int, ...]]] = {}
    degrees = set(h.degrees()) | {d + 1 for d in h.degrees()}
    for d in sorted(degrees):
        free = h.free_rank(d)
        tor = h.torsion(d - 1)
        if free or tor:
            entries[d] = (free, tor)
    return GradedModule("Z", COHOMOLOGICAL, entries)


def as_cohomological(h: GradedModule) -> GradedModule:
    """Over a field the dual complex has the same dimensions degreewise."""
    if not h.is_field:
        raise ValueError("field modules only; integral modules go through uct_dualize")
    return GradedModule(h.ring_tag, COHOMOLOGICAL, dict(h.entries))


def poincare(h: GradedModule) -> PoincarePolynomial:
    """Sum of dim H^d t^d (cohomological convention)."""
    if not h.is_field:
        raise ValueError("Poincare polynomials need field coefficients")
    return PoincarePolynomial.from_dims(h.dims())


def reduce_complex_mod_p(cx: LinearizedComplex, q: int) -> LinearizedComplex:
    """Reduce an integral complex into GF(q) entrywise."""
    ring = FiniteField(q)
    if not isinstance(cx.ring, IntegerRing):
        raise ValueError("expected an integral complex")
    mats = {
        d: [[ring.from_int(x) for x in row] for row in m]
        for d, m in cx.matrices.items()
    }
    return LinearizedComplex(ring, dict(cx.bases), mats)
