"""Exact rational scalars and dense rational linear algebra.

Scalars are `fractions.Fraction` everywhere: arbitrary precision, always in
lowest terms, positive denominator, zero is 0/1.  No floating point enters
the package at any point; every computation downstream of this module is an
exact identity over the rationals.

Serialization convention: a rational renders as ``"num/den"`` with the
denominator omitted when it is 1 (``"-3/4"``, ``"7"``).  This is exactly what
``str(Fraction)`` produces; `rat` parses it back.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction


def rat(x) -> Fraction:
    """Coerce an int, a "num/den" string or a Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("cannot build an exact rational from %r" % (x,))


def rat_str(x) -> str:
    """Serialize a rational as "num/den" (denominator omitted when 1)."""
    return str(rat(x))


class RatMatrix:
    """Immutable dense matrix over the rationals.

    Entries are stored as a tuple of row tuples of Fractions; matrices are
    hashable so operator tables built from them can be memoized.
    """

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries, cols=None):
        rows = tuple(tuple(rat(e) for e in row) for row in entries)
        if rows:
            ncols = len(rows[0])
            if any(len(row) != ncols for row in rows):
                raise ValueError("matrix rows have unequal lengths")
            if cols is not None and cols != ncols:
                raise ValueError("declared column count does not match entries")
        else:
            ncols = 0 if cols is None else cols
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n, value):
        value = rat(value)
        return cls([[value if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.rows, self.cols, self.entries))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return "RatMatrix(%r)" % ([list(map(str, row)) for row in self.entries],)

    def __add__(self, other):
        self._check_same_shape(other)
        return RatMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            cols=self.cols,
        )

    def __sub__(self, other):
        self._check_same_shape(other)
        return RatMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            cols=self.cols,
        )

    def __mul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError("matrix shapes do not compose")
            cols_of_other = list(zip(*other.entries)) if other.entries else []
            return RatMatrix(
                [
                    [sum(a * b for a, b in zip(row, col)) for col in cols_of_other]
                    for row in self.entries
                ],
                cols=other.cols,
            )
        return self.scale(other)

    def scale(self, s):
        s = rat(s)
        return RatMatrix(
            [[s * a for a in row] for row in self.entries], cols=self.cols
        )

    def __pow__(self, k):
        if self.rows != self.cols:
            raise ValueError("only square matrices can be raised to a power")
        if k < 0:
            raise ValueError("negative matrix powers are not supported")
        result = RatMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def transpose(self):
        return RatMatrix(list(zip(*self.entries)) if self.entries else [], cols=self.rows)

    def is_zero(self):
        return all(a == 0 for row in self.entries for a in row)

    def apply(self, vec):
        """Matrix-vector product, vec given as a sequence of rationals."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * rat(v) for a, v in zip(row, vec)) for row in self.entries)

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def _check_same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("matrix shapes differ")

    def to_json(self):
        return [[rat_str(a) for a in row] for row in self.entries]

    @classmethod
    def from_json(cls, data, cols=None):
        return cls(data, cols=cols)


def _rref(entries, cols):
    """Row-reduce a list of row tuples in place; return pivot column indices."""
    rows = [list(row) for row in entries]
    pivots = []
    pivot_row = 0
    for col in range(cols):
        hit = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] != 0:
                hit = r
                break
        if hit is None:
            continue
        rows[pivot_row], rows[hit] = rows[hit], rows[pivot_row]
        inv = 1 / rows[pivot_row][col]
        rows[pivot_row] = [a * inv for a in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows, pivots


def rank_nullspace(m):
    """Exact rank and a deterministic nullspace basis of a rational matrix.

    Returns ``(rank, basis)`` with rank + len(basis) == m.cols and
    m.apply(v) == 0 for every basis vector v.  The basis is the canonical
    one read off the reduced row echelon form: one vector per free column f,
    with entry 1 at f and ``-rref[r][f]`` at the pivot column of row r.
    """
    reduced, pivots = _rref(m.entries, m.cols)
    rank = len(pivots)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * m.cols
        vec[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][free]
        basis.append(tuple(vec))
    return rank, basis


def rank(m):
    return rank_nullspace(m)[0]


def jordan_structure(m, eigenvalue):
    """Jordan block sizes of a square matrix at one rational eigenvalue.

    Computed from nullity jumps of powers of N = m - eigenvalue*I, restricted
    automatically to the generalized eigenspace (the nullities stabilize at
    its dimension).  Returns the sizes sorted descending; the empty list when
    the given value is not an eigenvalue.
    """
    if m.rows != m.cols:
        raise ValueError("jordan_structure requires a square matrix")
    n = m.rows
    if n == 0:
        return []
    shifted = m - RatMatrix.scalar(n, eigenvalue)
    nullities = [0]
    power = RatMatrix.identity(n)
    for _ in range(n):
        power = power * shifted
        nullities.append(n - rank(power))
    nullities.append(nullities[-1])
    blocks = []
    for k in range(1, n + 1):
        count = (nullities[k] - nullities[k - 1]) - (nullities[k + 1] - nullities[k])
        blocks.extend([k] * count)
    blocks.sort(reverse=True)
    return blocks
