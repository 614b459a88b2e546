"""Fock-space states over the current algebra of an abelian Lie algebra.

The symmetric-algebra basis is indexed by monomials in commuting variables
x_{i,j,n}: color i in 1..d picks a basis vector of the abelian algebra,
j >= 0 the power of the polynomial variable, and n >= 1 the depth of the
creation mode that the variable realizes.  A monomial carries two gradings:

* weight   = sum of the n's (the conformal-weight shift above the top space),
* nwt      = sum of the j's (the second N-grading).

States are finite rational combinations of (monomial, top-index) pairs; the
top index labels a basis vector of the finite-dimensional top space the
module is induced from.  The adjoint module (the vertex algebra itself) is
the special case of a one-dimensional top space on which all zero modes act
as zero.

Single-mode actions follow the polynomial realization: the mode with depth
-n (n > 0) multiplies by x_{i,j,n}, the mode with depth n differentiates as
n*l*d/dx_{i,j,n}, and the zero mode acts on the top index through the matrix
c^j * H_i.  The central element is never materialized; it is the level l
stored in the module description.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .exactmath import RatMatrix, rat, rat_str

KIND_ADJOINT = "adjoint"
KIND_EVALUATION = "evaluation"


class NotHomogeneousError(ValueError):
    """Raised when a state mixes terms of different bigrades."""


class GenIndex(NamedTuple):
    """A generator u^(i) t^j of the current algebra: color i, power j."""

    i: int
    j: int


class ModeOp(NamedTuple):
    """A single mode (u^(i) t^j)(n): creation for n<0, annihilation for n>0."""

    gen: GenIndex
    n: int


def mode(i, j, n):
    return ModeOp(GenIndex(i, j), n)


class Monomial(tuple):
    """Sorted multiset of creation variables, stored as (i, j, n) triples.

    The tuple is always sorted, which makes equality, hashing and the
    lexicographic order canonical.  Tables and serialized output use the
    graded order (weight, nwt, lex) exposed by `sort_key`.
    """

    __slots__ = ()

    @classmethod
    def make(cls, factors):
        factors = sorted(tuple(f) for f in factors)
        for i, j, n in factors:
            if i < 1 or j < 0 or n < 1:
                raise ValueError("invalid creation variable (%d, %d, %d)" % (i, j, n))
        return cls(tuple(f) for f in factors)

    def weight(self):
        return sum(n for _, _, n in self)

    def nwt(self):
        return sum(j for _, j, _ in self)

    def sort_key(self):
        return (self.weight(), self.nwt(), tuple(self))

    def times(self, i, j, n):
        """Multiply by one more variable x_{i,j,n}."""
        return Monomial(sorted(self + ((i, j, n),)))

    def without(self, i, j, n):
        """Remove one occurrence of x_{i,j,n} (which must be present)."""
        factors = list(self)
        factors.remove((i, j, n))
        return Monomial(factors)

    def multiplicity(self, i, j, n):
        return self.count((i, j, n))

    def distinct(self):
        """Yield ((i, j, n), multiplicity) over the distinct variables."""
        prev = None
        mult = 0
        for f in self:
            if f == prev:
                mult += 1
            else:
                if prev is not None:
                    yield prev, mult
                prev, mult = f, 1
        if prev is not None:
            yield prev, mult

    def to_json(self):
        return [list(f) for f in self]

    @classmethod
    def from_json(cls, data):
        return cls.make(tuple(f) for f in data)


EMPTY = Monomial()


class State:
    """Finite rational combination of (monomial, top-index) basis vectors.

    Elements of the vertex algebra M(l) use top index 0 throughout; module
    states over an r-dimensional top space use indices 0..r-1.  Zero
    coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, coeff in terms.items():
                coeff = rat(coeff)
                if coeff != 0:
                    clean[key] = coeff
        self.terms = clean

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def term(cls, mono, top=0, coeff=1):
        return cls({(mono, top): rat(coeff)})

    @classmethod
    def vacuum(cls, top=0):
        return cls.term(EMPTY, top)

    def is_zero(self):
        return not self.terms

    def iter_terms(self):
        """Iterate (monomial, top, coefficient) in canonical order."""
        for mono, top in sorted(self.terms, key=lambda k: (k[0].sort_key(), k[1])):
            yield mono, top, self.terms[(mono, top)]

    def __eq__(self, other):
        return isinstance(other, State) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            s = out.get(key, 0) + coeff
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        result = State.__new__(State)
        result.terms = out
        return result

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s):
        s = rat(s)
        result = State.__new__(State)
        result.terms = {} if s == 0 else {k: s * c for k, c in self.terms.items()}
        return result

    def max_abs_coeff(self):
        """Largest |coefficient|; the defect size of a difference state."""
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "State(0)"
        bits = []
        for mono, top, coeff in self.iter_terms():
            var = "*".join("x[%d,%d,%d]" % f for f in mono) or "1"
            bits.append("%s*%s@%d" % (coeff, var, top))
        return "State(%s)" % " + ".join(bits)

    def to_json(self):
        return [
            {"mono": mono.to_json(), "top": top, "coeff": rat_str(coeff)}
            for mono, top, coeff in self.iter_terms()
        ]

    @classmethod
    def from_json(cls, data):
        terms = {}
        for entry in data:
            key = (Monomial.from_json(entry["mono"]), entry.get("top", 0))
            terms[key] = terms.get(key, 0) + rat(entry["coeff"])
        return cls(terms)


FockState = State
ModuleState = State


def _check_top(r, lam, H):
    """Validate a top space: d commuting r x r matrices with H_i - lam_i*I nilpotent."""
    if len(lam) != len(H):
        raise ValueError("lambda and H must have one entry per color")
    for i, m in enumerate(H):
        if m.rows != r or m.cols != r:
            raise ValueError("H[%d] is not %d x %d" % (i, r, r))
        shifted = m - RatMatrix.scalar(r, lam[i])
        if not (shifted**r).is_zero():
            raise ValueError(
                "lambda[%d] is not the unique eigenvalue of H[%d]" % (i, i)
            )
    for a in range(len(H)):
        for b in range(a + 1, len(H)):
            if H[a] * H[b] != H[b] * H[a]:
                raise ValueError("top-space matrices H[%d], H[%d] do not commute" % (a, b))


@dataclass(frozen=True)
class ModuleSpec:
    """Which module operators act on, with all exact data needed to act.

    kind "adjoint" is the vertex algebra M(l) itself (r = 1, zero modes act
    as 0, c irrelevant).  kind "evaluation" is the module induced from the
    evaluation top space at the point c: the matrices H give the action of
    the colors u^(i) on the top space, and lam_i is the unique eigenvalue of
    H_i.  The r = 1 case with H_i = (lam_i) is the classical irreducible
    evaluation module; r > 1 with nontrivial nilpotent parts produces the
    logarithmic ones.
    """

    kind: str
    d: int
    l: Fraction
    c: Fraction | None
    r: int
    lam: tuple
    H: tuple

    def __post_init__(self):
        if self.kind not in (KIND_ADJOINT, KIND_EVALUATION):
            raise ValueError("unknown module kind %r" % (self.kind,))
        if self.d < 1:
            raise ValueError("color count must be at least 1")
        if self.l == 0:
            raise ValueError("level must be nonzero")
        if self.r < 1:
            raise ValueError("top-space dimension must be at least 1")
        if len(self.lam) != self.d:
            raise ValueError("lambda must have d entries")
        _check_top(self.r, self.lam, self.H)
        if self.kind == KIND_ADJOINT:
            if self.r != 1 or any(not m.is_zero() for m in self.H):
                raise ValueError("the adjoint module has r = 1 and trivial top action")
            if self.c is not None:
                raise ValueError("the adjoint module carries no evaluation point")
        elif self.c is None:
            raise ValueError("evaluation modules need an evaluation point c")

    @classmethod
    def adjoint(cls, d, l):
        return cls(
            kind=KIND_ADJOINT,
            d=d,
            l=rat(l),
            c=None,
            r=1,
            lam=tuple(Fraction(0) for _ in range(d)),
            H=tuple(RatMatrix.zero(1, 1) for _ in range(d)),
        )

    @classmethod
    def evaluation(cls, d, l, c, lam, H=None):
        lam = tuple(rat(x) for x in lam)
        if len(lam) != d:
            raise ValueError("lambda must have d entries")
        if H is None:
            H = tuple(RatMatrix([[x]]) for x in lam)
            r = 1
        else:
            H = tuple(m if isinstance(m, RatMatrix) else RatMatrix(m) for m in H)
            r = H[0].rows if H else 1
        return cls(kind=KIND_EVALUATION, d=d, l=rat(l), c=rat(c), r=r, lam=lam, H=H)

    def is_adjoint(self):
        return self.kind == KIND_ADJOINT

    def zero_mode_matrix(self, i, j):
        """The matrix of (u^(i) t^j)(0) on the top space: c^j * H_i."""
        if self.is_adjoint():
            return RatMatrix.zero(self.r, self.r)
        return self.H[i - 1].scale(self.c**j)

    def to_json(self):
        return {
            "kind": self.kind,
            "d": self.d,
            "l": rat_str(self.l),
            "c": None if self.c is None else rat_str(self.c),
            "lambda": [rat_str(x) for x in self.lam],
            "H": [m.to_json() for m in self.H],
        }

    @classmethod
    def from_json(cls, data):
        kind = data["kind"]
        if kind == KIND_ADJOINT:
            return cls.adjoint(data["d"], rat(data["l"]))
        return cls.evaluation(
            data["d"],
            rat(data["l"]),
            rat(data["c"]),
            [rat(x) for x in data["lambda"]],
            H=[RatMatrix.from_json(m) for m in data["H"]],
        )


@lru_cache(maxsize=None)
def _basis_tuple(d, m, n):
    """All monomials over d colors with nwt m and weight n, as a sorted tuple."""
    parts = [
        (i, j, nu)
        for i in range(1, d + 1)
        for j in range(m + 1)
        for nu in range(1, n + 1)
    ]
    results = []

    def extend(idx, rem_m, rem_n, chosen):
        if rem_m == 0 and rem_n == 0:
            results.append(Monomial(sorted(chosen)))
            return
        if idx == len(parts) or rem_n == 0:
            return
        i, j, nu = parts[idx]
        extend(idx + 1, rem_m, rem_n, chosen)
        count = 1
        while rem_m - count * j >= 0 and rem_n - count * nu >= 0:
            extend(
                idx + 1,
                rem_m - count * j,
                rem_n - count * nu,
                chosen + [(i, j, nu)] * count,
            )
            count += 1

    extend(0, m, n, [])
    results.sort()
    return tuple(results)


def enumerate_basis(d, m, n):
    """Monomial basis of the doubly homogeneous subspace (nwt m, weight n).

    Returned in canonical (lexicographic) order with no duplicates; empty
    whenever m > 0 and n = 0, since every variable has positive weight.
    """
    if d < 1 or m < 0 or n < 0:
        raise ValueError("enumerate_basis needs d >= 1 and m, n >= 0")
    return list(_basis_tuple(d, m, n))


def module_basis(spec, max_wt, max_nwt):
    """All (monomial, top) basis labels of a module within the given bounds.

    Ordered by (weight, nwt, monomial, top) so every table built from it is
    deterministic.
    """
    labels = []
    for n in range(max_wt + 1):
        for m in range(max_nwt + 1):
            for mono in enumerate_basis(spec.d, m, n):
                for top in range(spec.r):
                    labels.append((mono, top))
    return labels


def grading(s):
    """The common bigrade (weight shift, nwt) of a state.

    Raises NotHomogeneousError when terms disagree in either grading.  The
    zero state is reported as (0, 0).
    """
    result = None
    for (mono, _top) in s.terms:
        bigrade = (mono.weight(), mono.nwt())
        if result is None:
            result = bigrade
        elif result != bigrade:
            raise NotHomogeneousError(
                "state mixes bigrades %s and %s" % (result, bigrade)
            )
    return result if result is not None else (0, 0)


def apply_mode(op, w, spec):
    """Apply a single mode (u^(i) t^j)(n) to a state.

    n < 0 multiplies by x_{i,j,-n}; n > 0 acts as n*l*d/dx_{i,j,n}; n = 0
    acts on the top index through c^j * H_i (and as zero on the adjoint
    module).
    """
    (i, j), n = op
    if not 1 <= i <= spec.d:
        raise ValueError("color index %d out of range 1..%d" % (i, spec.d))
    if j < 0:
        raise ValueError("generator power must be nonnegative")
    out = State.zero()
    for (mono, top), coeff in w.terms.items():
        out += _apply_mode_term(ModeOp(GenIndex(i, j), n), mono, top, spec).scale(coeff)
    return out


@lru_cache(maxsize=None)
def _apply_mode_term(op, mono, top, spec):
    (i, j), n = op
    if n < 0:
        return State.term(mono.times(i, j, -n), top)
    if n > 0:
        mult = mono.multiplicity(i, j, n)
        if mult == 0:
            return State.zero()
        return State.term(mono.without(i, j, n), top, n * spec.l * mult)
    if spec.is_adjoint():
        return State.zero()
    matrix = spec.zero_mode_matrix(i, j)
    return State(
        {(mono, t): matrix[t, top] for t in range(spec.r) if matrix[t, top] != 0}
    )
