"""Exact GF(2) arithmetic: polynomials, dense bit matrices and quotient rings.

Polynomials over GF(2) are stored as nonnegative integers, bit ``i`` holding
the coefficient of ``x^i`` (lowest degree first).  The zero polynomial has
degree -1 (sentinel).  Quotient rings ``F2[x]/(p)`` embed into GL(n, 2) by
sending the class of x to a representation matrix, the companion matrix of
``p`` by default.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class NonUnitError(ValueError):
    """Inversion of a ring element that is not a unit (zero divisors exist)."""


class FormatError(ValueError):
    """A text form (polynomial, element, matrix, SLP, ...) failed to parse."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# polynomial arithmetic on int bit vectors


def poly_deg(a: int) -> int:
    """Degree of a; -1 for the zero polynomial."""
    return a.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def poly_mod(a: int, m: int) -> int:
    if m == 0:
        raise ZeroDivisionError("reduction modulo zero polynomial")
    dm = poly_deg(m)
    da = poly_deg(a)
    while da >= dm:
        a ^= m << (da - dm)
        da = poly_deg(a)
    return a


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    db = poly_deg(b)
    q = 0
    da = poly_deg(a)
    while da >= db:
        q ^= 1 << (da - db)
        a ^= b << (da - db)
        da = poly_deg(a)
    return q, a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_invmod(a: int, m: int) -> int:
    """Inverse of a modulo m; raises NonUnitError when gcd(a, m) != 1."""
    if poly_mod(a, m) == 0:
        raise NonUnitError("zero is not invertible")
    r0, r1 = m, poly_mod(a, m)
    s0, s1 = 0, 1
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ poly_mul(q, s1)
    if r0 != 1:
        raise NonUnitError(f"gcd with modulus is {poly_text(r0)}, not 1")
    return poly_mod(s0, m)


def poly_text(a: int, var: str = "x") -> str:
    """Render as monomials joined by '+', highest degree first."""
    if a == 0:
        return "0"
    parts = []
    for i in range(poly_deg(a), -1, -1):
        if (a >> i) & 1:
            if i == 0:
                parts.append("1")
            elif i == 1:
                parts.append(var)
            else:
                parts.append(f"{var}^{i}")
    return "+".join(parts)


def poly_parse(text: str, var: str = "x") -> int:
    """Parse the monomial sum form, e.g. "x^8+x^2+1".

    Repeated monomials cancel (coefficients live in GF(2)).  Negative
    exponents are rejected here; ring element parsing handles them.
    """
    a = 0
    for raw in text.split("+"):
        term = raw.strip()
        if term == "0":
            continue
        if term == "1":
            a ^= 1
        elif term == var:
            a ^= 2
        elif term.startswith(var + "^"):
            try:
                e = int(term[len(var) + 1:])
            except ValueError:
                raise FormatError(f"bad monomial {term!r}") from None
            if e < 0:
                raise FormatError(f"negative exponent in {term!r}")
            a ^= 1 << e
        else:
            raise FormatError(f"bad monomial {term!r}")
    return a


# ---------------------------------------------------------------------------
# dense matrices over GF(2)


@dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix; row i is an int with bit j = entry (i, j)."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self):
        if len(self.rows) < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        mask = (1 << self.cols) - 1
        if any(r & ~mask for r in self.rows):
            raise ValueError("row value exceeds column count")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def from_rows(cls, bits) -> "BitMatrix":
        """Build from an iterable of 0/1 row lists."""
        rows = []
        width = None
        for row in bits:
            row = list(row)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError("ragged rows")
            rows.append(sum(1 << j for j, v in enumerate(row) if v & 1))
        return cls(tuple(rows), width)

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.nrows, self.cols) != (other.nrows, other.cols):
            raise ValueError("shape mismatch")
        return BitMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.cols)

    def __mul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            acc = 0
            k = 0
            while r:
                if r & 1:
                    acc ^= other.rows[k]
                r >>= 1
                k += 1
            out.append(acc)
        return BitMatrix(tuple(out), other.cols)

    def mul_vec(self, v: int) -> int:
        """Matrix times column bit vector (bit j of v = coordinate j)."""
        acc = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                acc |= 1 << i
        return acc

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    out[j] |= 1 << i
                r >>= 1
                j += 1
        return BitMatrix(tuple(out), self.nrows)

    def matpow(self, e: int) -> "BitMatrix":
        if self.nrows != self.cols:
            raise ValueError("power of a non-square matrix")
        if e < 0:
            return self.inverse().matpow(-e)
        acc = BitMatrix.identity(self.nrows)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def inverse(self) -> "BitMatrix":
        n = self.nrows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        # Gauss-Jordan on [A | I] packed into single ints.
        work = [self.rows[i] | (1 << (n + i)) for i in range(n)]
        for col in range(n):
            piv = None
            for i in range(col, n):
                if (work[i] >> col) & 1:
                    piv = i
                    break
            if piv is None:
                raise ValueError("matrix is singular")
            work[col], work[piv] = work[piv], work[col]
            for i in range(n):
                if i != col and (work[i] >> col) & 1:
                    work[i] ^= work[col]
        return BitMatrix(tuple(w >> n for w in work), n)


def rank(m: BitMatrix) -> int:
    """Rank over GF(2) by elimination on packed rows."""
    rows = [r for r in m.rows if r]
    pivots: list[int] = []
    for r in rows:
        for p in pivots:
            r = min(r, r ^ p)
        if r:
            pivots.append(r)
    return len(pivots)


def is_invertible(m: BitMatrix) -> bool:
    return m.nrows == m.cols and rank(m) == m.nrows


def xor_count(m: BitMatrix) -> int:
    """Naive XOR cost of computing m*v: sum over rows of (weight - 1)."""
    return sum(max(0, r.bit_count() - 1) for r in m.rows)


def companion(p: int) -> BitMatrix:
    """Companion matrix of p: multiplication by x in basis 1, x, ..., x^(n-1).

    Requires constant term 1 so the result is invertible.
    """
    n = poly_deg(p)
    if n < 1:
        raise ValueError("modulus must have degree >= 1")
    if not p & 1:
        raise ValueError("modulus constant term must be 1 (companion would be singular)")
    low = p ^ (1 << n)
    rows = []
    for i in range(n):
        r = 0
        if i >= 1:
            r |= 1 << (i - 1)
        if (low >> i) & 1:
            r |= 1 << (n - 1)
        rows.append(r)
    return BitMatrix(tuple(rows), n)


# ---------------------------------------------------------------------------
# quotient rings F2[x]/(p) and their elements

_MUL_TABLE_MAX_N = 8


class QuotientRing:
    """The commutative ring F2[x]/(p(x)), p with constant term 1.

    Elements are residues (ints of degree < n).  `rep` optionally replaces the
    companion matrix as the image of x inside GL(n, 2); the ring structure is
    identical, but multiplication matrices (hence XOR counts of scalars)
    depend on the representation.

    `scalar_cost_model` selects how scalar multiplications are priced:
    "rowweight" (default) is the naive row-weight XOR count of the
    multiplication matrix; "chained" prices a power alpha^e as |e| in-place
    applications of the representation matrix (|e| * xor_count(rep)), the
    accounting used for the bundled higher-order constructions, falling back
    to row weight for elements that are not powers of alpha.
    """

    def __init__(self, modulus: int, rep: BitMatrix | None = None,
                 scalar_cost_model: str = "rowweight"):
        if isinstance(modulus, str):
            modulus = poly_parse(modulus)
        n = poly_deg(modulus)
        if n < 1:
            raise ValueError("modulus must have degree >= 1")
        if not modulus & 1:
            raise ValueError("modulus constant term must be 1")
        self.modulus = modulus
        self.n = n
        if rep is None:
            rep = companion(modulus)
        else:
            if rep.nrows != n or rep.cols != n:
                raise ValueError("representation matrix has wrong size")
            if _min_poly(rep) != modulus:
                raise ValueError("representation matrix does not satisfy the modulus")
        self.rep = rep
        if scalar_cost_model not in ("rowweight", "chained"):
            raise ValueError(f"unknown scalar cost model {scalar_cost_model!r}")
        self.scalar_cost_model = scalar_cost_model
        self._pow_mats = [BitMatrix.identity(n)]
        for _ in range(1, n):
            self._pow_mats.append(self._pow_mats[-1] * rep)
        self._mul_table: list[list[int]] | None = None
        self._unit_flags: list[bool] | None = None
        self._unit_cache: dict[int, bool] = {}
        self._inv_cache: dict[int, int] = {}
        self._elem_mat_cache: dict[int, BitMatrix] = {}
        self._xor_cache: dict[int, int] = {}

    # -- identity helpers ---------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRing)
            and self.modulus == other.modulus
            and self.rep.rows == other.rep.rows
            and self.scalar_cost_model == other.scalar_cost_model
        )

    def __hash__(self):
        return hash((self.modulus, self.rep.rows, self.scalar_cost_model))

    def __repr__(self):
        extra = "" if self.rep.rows == companion(self.modulus).rows else ", rep=..."
        return f"QuotientRing({poly_text(self.modulus)}{extra})"

    @property
    def alpha(self) -> "RingElement":
        return RingElement(self, 2)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, 1)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, 0)

    def element(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            if value.ring != self:
                raise ValueError("element belongs to a different ring")
            return value
        if isinstance(value, str):
            return RingElement(self, self.parse_element(value))
        return RingElement(self, poly_mod(value, self.modulus))

    def elements(self):
        """All residues, 0 included, as raw ints."""
        return range(1 << self.n)

    # -- raw int arithmetic (hot paths) --------------------------------------

    def mul(self, a: int, b: int) -> int:
        table = self._mul_table
        if table is not None:
            return table[a][b]
        if self.n <= _MUL_TABLE_MAX_N:
            self._build_table()
            return self._mul_table[a][b]
        return poly_mod(poly_mul(a, b), self.modulus)

    def _build_table(self):
        size = 1 << self.n
        m = self.modulus
        table = []
        for a in range(size):
            row = [0] * size
            for b in range(size):
                row[b] = poly_mod(poly_mul(a, b), m)
            table.append(row)
        self._mul_table = table

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul_rows(self):
        """Indexable multiplication table: mul_rows()[a][b] == mul(a, b).

        Materialized for n <= 8; lazy row objects beyond that.
        """
        if self.n <= _MUL_TABLE_MAX_N:
            if self._mul_table is None:
                self._build_table()
            return self._mul_table
        return _LazyMulRows(self)

    def unit_flags(self):
        """Indexable truth table: unit_flags()[a] iff a is a unit."""
        if self.n <= 16:
            if self._unit_flags is None:
                m = self.modulus
                self._unit_flags = [
                    a != 0 and poly_gcd(a, m) == 1 for a in range(1 << self.n)
                ]
            return self._unit_flags
        return _LazyUnitFlags(self)

    def is_unit(self, a: int) -> bool:
        if self._unit_flags is not None:
            return self._unit_flags[a]
        cached = self._unit_cache.get(a)
        if cached is None:
            cached = a != 0 and poly_gcd(a, self.modulus) == 1
            self._unit_cache[a] = cached
        return cached

    def inv(self, a: int) -> int:
        cached = self._inv_cache.get(a)
        if cached is None:
            cached = poly_invmod(a, self.modulus)
            self._inv_cache[a] = cached
        return cached

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        acc = 1
        while e:
            if e & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            e >>= 1
        return acc

    def element_matrix_int(self, a: int) -> BitMatrix:
        m = self._elem_mat_cache.get(a)
        if m is None:
            rows = [0] * self.n
            i = 0
            v = a
            while v:
                if v & 1:
                    pm = self._pow_mats[i]
                    rows = [r ^ p for r, p in zip(rows, pm.rows)]
                v >>= 1
                i += 1
            m = BitMatrix(tuple(rows), self.n)
            self._elem_mat_cache[a] = m
        return m

    def scalar_xor_count(self, a: int) -> int:
        c = self._xor_cache.get(a)
        if c is None:
            c = xor_count(self.element_matrix_int(a))
            if self.scalar_cost_model == "chained":
                e = self.power_of_alpha(a)
                if e is not None:
                    c = abs(e) * xor_count(self.rep)
            self._xor_cache[a] = c
        return c

    def power_of_alpha(self, value: int, max_abs: int = 16) -> int | None:
        """Smallest-|e| exponent with alpha^e == value, or None.

        Ties between e and -e resolve to the positive exponent.
        """
        if value == 1:
            return 0
        acc = 2
        inv = None
        for e in range(1, max_abs + 1):
            if acc == value:
                return e
            if inv is None:
                try:
                    inv = self.inv(2)
                    acc_neg = inv
                except NonUnitError:
                    continue
            else:
                acc_neg = self.pow(inv, e)
            if acc_neg == value:
                return -e
            acc = self.mul(acc, 2)
        return None

    # -- element text form ----------------------------------------------------

    def element_text(self, a: int) -> str:
        return poly_text(a, var="a")

    def parse_element(self, text: str) -> int:
        """Parse "a^2+a+1"; also accepts negative powers like "a^-3"."""
        acc = 0
        for raw in text.split("+"):
            term = raw.strip()
            if term == "0":
                continue
            if term == "1":
                acc ^= 1
                continue
            if term == "a":
                acc ^= 2
                continue
            if term.startswith("a^"):
                try:
                    e = int(term[2:])
                except ValueError:
                    raise FormatError(f"bad element monomial {term!r}") from None
                acc ^= self.pow(2, e)
                continue
            raise FormatError(f"bad element monomial {term!r}")
        return acc


class _LazyMulRows:
    """mul_rows() stand-in for wide rings: computes products on demand."""

    __slots__ = ("ring",)

    def __init__(self, ring):
        self.ring = ring

    def __getitem__(self, a):
        return _LazyMulRow(self.ring, a)


class _LazyMulRow:
    __slots__ = ("ring", "a")

    def __init__(self, ring, a):
        self.ring = ring
        self.a = a

    def __getitem__(self, b):
        return self.ring.mul(self.a, b)


class _LazyUnitFlags:
    __slots__ = ("ring",)

    def __init__(self, ring):
        self.ring = ring

    def __getitem__(self, a):
        return self.ring.is_unit(a)


def _min_poly(m: BitMatrix) -> int:
    """Minimal polynomial of a square GF(2) matrix (by linear dependence of powers)."""
    n = m.nrows
    powers = [BitMatrix.identity(n)]
    for _ in range(n):
        powers.append(powers[-1] * m)
    # Find least d with I, m, ..., m^d linearly dependent; solve for coefficients.
    flat = [sum(p.rows[i] << (i * n) for i in range(n)) for p in powers]
    basis: list[tuple[int, int]] = []  # (reduced vector, combination bitmask)
    for d, v in enumerate(flat):
        comb = 1 << d
        for bv, bc in basis:
            if poly_deg(v ^ bv) < poly_deg(v):
                v ^= bv
                comb ^= bc
        if v == 0:
            return comb
        basis.append((v, comb))
        basis.sort(key=lambda t: -t[0])
    raise AssertionError("minimal polynomial search failed")


class RingElement:
    """A residue in a QuotientRing.  Immutable; arithmetic via operators."""

    __slots__ = ("ring", "val")

    def __init__(self, ring: QuotientRing, val: int):
        self.ring = ring
        self.val = poly_mod(val, ring.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise ValueError("elements from different rings")
            return other.val
        if isinstance(other, int):
            return poly_mod(other, self.ring.modulus)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.val ^ v)

    __radd__ = __add__

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring.mul(self.val, v))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return RingElement(self.ring, self.ring.pow(self.val, e))

    def inverse(self) -> "RingElement":
        return RingElement(self.ring, self.ring.inv(self.val))

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.val)

    def matrix(self) -> BitMatrix:
        return self.ring.element_matrix_int(self.val)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.val == other.val
        if isinstance(other, int):
            return self.val == poly_mod(other, self.ring.modulus)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.modulus, self.val))

    def __repr__(self):
        return f"<{self.ring.element_text(self.val)} mod {poly_text(self.ring.modulus)}>"

    def text(self) -> str:
        return self.ring.element_text(self.val)


@lru_cache(maxsize=None)
def ring(modulus_text: str) -> QuotientRing:
    """Shared ring instances keyed by the modulus text form."""
    return QuotientRing(poly_parse(modulus_text))
