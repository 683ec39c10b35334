"""Multivariate polynomials over GF(2) in formal parameters.

A monomial is a sorted tuple of parameter ids, repetitions encoding
exponents (parameters range over a ring, so a*a is not reduced to a).  A
polynomial is a frozenset of monomials: coefficients live in GF(2), so
addition is symmetric difference and a repeated monomial cancels.

These polynomials carry the symbolic MDS pre-check that prunes the
implementation-tree search: if some minor of the parameterized matrix is
identically zero mod 2, no parameter assignment over any ring can make the
corresponding rows part of an MDS matrix.
"""

from __future__ import annotations

from itertools import combinations

Monomial = tuple  # sorted tuple of int parameter ids, with repetition
Poly = frozenset  # frozenset of monomials

SP_ZERO: Poly = frozenset()
SP_ONE: Poly = frozenset({()})


def sp_param(pid: int) -> Poly:
    return frozenset({(pid,)})


def sp_add(p: Poly, q: Poly) -> Poly:
    return p ^ q


def sp_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return SP_ZERO
    if p == SP_ONE:
        return q
    if q == SP_ONE:
        return p
    acc: set[Monomial] = set()
    for m1 in p:
        for m2 in q:
            m = tuple(sorted(m1 + m2))
            if m in acc:
                acc.discard(m)
            else:
                acc.add(m)
    return frozenset(acc)


def sp_mul_param(p: Poly, pid: int) -> Poly:
    """Multiply by a single fresh parameter (cannot cancel: injective on monomials)."""
    out = set()
    for m in p:
        out.add(tuple(sorted(m + (pid,))))
    return frozenset(out)


def sp_eval(p: Poly, ring, values: dict[int, int]) -> int:
    """Evaluate at concrete ring values (raw ints); missing ids default to 1."""
    acc = 0
    for m in p:
        term = 1
        for pid in m:
            term = ring.mul(term, values.get(pid, 1))
        acc ^= term
    return acc


def sp_text(p: Poly) -> str:
    """Debug form, e.g. "a3*b7 + a1^2"."""
    if not p:
        return "0"
    parts = []
    for m in sorted(p):
        if not m:
            parts.append("1")
            continue
        factors = []
        i = 0
        while i < len(m):
            j = i
            while j < len(m) and m[j] == m[i]:
                j += 1
            e = j - i
            factors.append(f"a{m[i]}" + (f"^{e}" if e > 1 else ""))
            i = j
        parts.append("*".join(factors))
    return " + ".join(parts)


class SymMatrix:
    """Rectangular grid of GF(2) parameter polynomials."""

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("matrix must be rectangular and nonempty")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]


def sym_det(m: SymMatrix) -> Poly:
    """Determinant by cofactor expansion; signs are irrelevant mod 2."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    return _det(m.rows, tuple(range(m.nrows)), tuple(range(m.ncols)), {})


def _det(rows, ridx: tuple, cidx: tuple, memo: dict) -> Poly:
    if len(ridx) == 1:
        return rows[ridx[0]][cidx[0]]
    key = (ridx, cidx)
    got = memo.get(key)
    if got is not None:
        return got
    r0 = ridx[0]
    rest = ridx[1:]
    acc = SP_ZERO
    for pos, c in enumerate(cidx):
        e = rows[r0][c]
        if not e:
            continue
        sub = _det(rows, rest, cidx[:pos] + cidx[pos + 1:], memo)
        if sub:
            acc = acc ^ sp_mul(e, sub)
    memo[key] = acc
    return acc


def mds_precheck(m: SymMatrix) -> bool:
    """True iff every square minor of every order is a nonzero polynomial.

    False is a proof that no instantiation of these rows extends to an MDS
    matrix; True promises nothing (only assignment search decides).
    """
    if m.nrows > m.ncols:
        raise ValueError("precheck expects at most as many rows as columns")
    tracker = MinorTracker(m.ncols)
    return all(tracker.add_row(row) for row in m.rows)


class MinorTracker:
    """Incrementally checks that all minors touching each new row are nonzero.

    Keeps determinants of all (row set, column set) pairs seen so far, so the
    segment-by-segment pruning of the tree search pays only for the minors the
    new row introduces.
    """

    def __init__(self, k: int):
        self.k = k
        self.rows: list[tuple] = []
        self._dets: dict[tuple[tuple, tuple], Poly] = {}

    def clone(self) -> "MinorTracker":
        c = MinorTracker.__new__(MinorTracker)
        c.k = self.k
        c.rows = list(self.rows)
        c._dets = dict(self._dets)
        return c

    def add_row(self, row) -> bool:
        row = tuple(row)
        j = len(self.rows)
        self.rows.append(row)
        dets = self._dets
        # order-1 minors of the new row
        for c in range(self.k):
            dets[((j,), (c,))] = row[c]
            if not row[c]:
                return False
        for r in range(2, j + 2):
            for rsub in combinations(range(j), r - 1):
                ridx = rsub + (j,)
                for csub in combinations(range(self.k), r):
                    acc = SP_ZERO
                    for pos, c in enumerate(csub):
                        e = row[c]
                        if not e:
                            continue
                        prev = dets[(rsub, csub[:pos] + csub[pos + 1:])] if r > 1 else SP_ONE
                        if prev:
                            acc = acc ^ sp_mul(e, prev)
                    dets[(ridx, csub)] = acc
                    if not acc:
                        return False
        return True
