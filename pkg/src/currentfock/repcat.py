"""Evaluation top spaces, the generalized Casimir, vacuum spaces and Hom dimensions.

An evaluation top space is a finite-dimensional space on which each color
acts by a matrix H_i whose unique eigenvalue is lam_i; the generator u^(i)t^j
then acts as f(c) H_i with f(c) = c^j.  The generalized Casimir operator,
summed over all generator powers, converges geometrically and acts as the
exact scalar <lam, lam> / (1 - c^2).

The vacuum space of a module is the joint kernel of all annihilation modes;
for induced modules it recovers exactly the top space, which is the
computable content of the reconstruction W = M(l) (x) Omega(W).  A module is
genuinely logarithmic when L(0) restricted to the top space, the matrix
(1/(2l(1-c^2))) sum_i H_i^2, carries a Jordan block of size 2 or more.

Spaces of logarithmic intertwining operators among triples of modules
induced from evaluation top spaces at 0 are identified with the space of
linear maps T: Omega_1 -> Hom(Omega_2, Omega_3) intertwining the color
actions; their dimension is an exact nullspace computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmath import RatMatrix, jordan_structure, rank_nullspace, rat
from .fock import (
    GenIndex,
    ModeOp,
    State,
    _check_top,
    apply_mode,
    module_basis,
)


@dataclass(frozen=True)
class TopSpace:
    """A finite-dimensional top space: commuting H_i with H_i - lam_i I nilpotent."""

    r: int
    lam: tuple
    H: tuple

    def __post_init__(self):
        lam = tuple(rat(x) for x in self.lam)
        H = tuple(m if isinstance(m, RatMatrix) else RatMatrix(m) for m in self.H)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "H", H)
        if self.r < 1:
            raise ValueError("top-space dimension must be at least 1")
        _check_top(self.r, lam, H)

    @property
    def d(self):
        return len(self.lam)

    @classmethod
    def scalar(cls, lam):
        """The one-dimensional top space with weights lam."""
        lam = tuple(rat(x) for x in lam)
        return cls(r=1, lam=lam, H=tuple(RatMatrix([[x]]) for x in lam))

    def to_json(self):
        return {
            "r": self.r,
            "lambda": [str(x) for x in self.lam],
            "H": [m.to_json() for m in self.H],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            r=data["r"],
            lam=tuple(rat(x) for x in data["lambda"]),
            H=tuple(RatMatrix.from_json(m) for m in data["H"]),
        )


@dataclass(frozen=True)
class HomProblem:
    """A triple of evaluation-at-0 top spaces (source, middle, target)."""

    source: TopSpace
    middle: TopSpace
    target: TopSpace

    def __post_init__(self):
        if not (self.source.d == self.middle.d == self.target.d):
            raise ValueError("all three top spaces must share the color count d")

    def to_json(self):
        return {
            "source": self.source.to_json(),
            "middle": self.middle.to_json(),
            "target": self.target.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            source=TopSpace.from_json(data["source"]),
            middle=TopSpace.from_json(data["middle"]),
            target=TopSpace.from_json(data["target"]),
        )


def eval_action(gen, f_powers, top, c):
    """The matrix of (u^(i) f(t)) on a top space: f(c) H_i, exactly.

    f is given as a list of (exponent, coefficient) pairs.
    """
    i = gen[0] if isinstance(gen, (tuple, GenIndex)) else gen
    if not 1 <= i <= top.d:
        raise ValueError("color index %d out of range 1..%d" % (i, top.d))
    c = rat(c)
    value = sum((rat(coeff) * c**exp for exp, coeff in f_powers), Fraction(0))
    return top.H[i - 1].scale(value)


def casimir_scalar(lam, c):
    """The exact scalar <lam, lam> / (1 - c^2) by which the Casimir acts."""
    c = rat(c)
    if c**2 == 1:
        raise ValueError("the Casimir scalar needs c^2 != 1")
    norm = sum((rat(x) ** 2 for x in lam), Fraction(0))
    return norm / (1 - c**2)


def casimir_partial(lam, c, J):
    """The Casimir sum truncated at generator power J: sum_{n<=J} c^{2n} <lam, lam>.

    Summed term by term; the closed geometric form is what the tests compare
    against.
    """
    if J < 0:
        raise ValueError("truncation order must be nonnegative")
    c = rat(c)
    norm = sum((rat(x) ** 2 for x in lam), Fraction(0))
    total = Fraction(0)
    for n in range(J + 1):
        total += c ** (2 * n) * norm
    return total


def vacuum_space(spec, tr):
    """A basis of the joint kernel of all annihilation modes within tr.

    Scans the modes (u^(i) t^j)(n) for 0 < n <= tr.max_wt and j <= tr.max_nwt
    against all basis states within tr; for induced modules the result is
    exactly the top space.
    """
    basis = module_basis(spec, tr.max_wt, tr.max_nwt)
    index = {label: pos for pos, label in enumerate(basis)}
    size = len(basis)
    rows = []
    for i in range(1, spec.d + 1):
        for j in range(tr.max_nwt + 1):
            for n in range(1, tr.max_wt + 1):
                op = ModeOp(GenIndex(i, j), n)
                block = {}
                for col, (mono, top) in enumerate(basis):
                    image = apply_mode(op, State.term(mono, top), spec)
                    for key, coeff in image.terms.items():
                        row = block.setdefault(index[key], [Fraction(0)] * size)
                        row[col] = coeff
                for pos in sorted(block):
                    rows.append(block[pos])
    matrix = RatMatrix(rows, cols=size) if rows else RatMatrix.zero(0, size)
    _rank, kernel = rank_nullspace(matrix)
    states = []
    for vec in kernel:
        states.append(
            State({basis[pos]: coeff for pos, coeff in enumerate(vec) if coeff != 0})
        )
    return states


def l0_top_matrix(spec):
    """The exact matrix of L(0) on the top space: (1/(2l(1-c^2))) sum_i H_i^2."""
    if spec.is_adjoint():
        raise ValueError("l0_top_matrix applies to evaluation modules")
    if spec.c**2 == 1:
        raise ValueError("L(0) on the top space needs c^2 != 1")
    total = RatMatrix.zero(spec.r, spec.r)
    for H in spec.H:
        total = total + H * H
    return total.scale(1 / (2 * spec.l * (1 - spec.c**2)))


def is_genuine_logarithmic(spec):
    """Whether L(0) on the top space has a Jordan block of size >= 2.

    Returns (flag, block_sizes); the unique eigenvalue of the L(0) top matrix
    is computed from lam directly as <lam, lam> / (2l(1-c^2)).
    """
    matrix = l0_top_matrix(spec)
    norm = sum((x**2 for x in spec.lam), Fraction(0))
    eigenvalue = norm / (2 * spec.l * (1 - spec.c**2))
    blocks = jordan_structure(matrix, eigenvalue)
    return any(size >= 2 for size in blocks), blocks


def intertwiner_dim(problem):
    """Dimension of intertwining maps T: Omega_1 -> Hom(Omega_2, Omega_3) at c = 0.

    T must satisfy T(H1_i u) = H3_i T(u) - T(u) H2_i for every color i; at
    the evaluation point 0 the generators with j >= 1 act as zero, so these
    are the only constraints.  Computed as an exact nullspace dimension over
    the full r1*r2*r3-dimensional space of linear maps.
    """
    src, mid, tgt = problem.source, problem.middle, problem.target
    d = src.d
    r1, r2, r3 = src.r, mid.r, tgt.r

    def flat(c, b, a):
        return (c * r2 + b) * r1 + a

    unknowns = r1 * r2 * r3
    rows = []
    for i in range(d):
        H1, H2, H3 = src.H[i], mid.H[i], tgt.H[i]
        for c in range(r3):
            for b in range(r2):
                for a in range(r1):
                    row = [Fraction(0)] * unknowns
                    for a2 in range(r1):
                        row[flat(c, b, a2)] += H1[a2, a]
                    for c2 in range(r3):
                        row[flat(c2, b, a)] -= H3[c, c2]
                    for b2 in range(r2):
                        row[flat(c, b2, a)] += H2[b, b2]
                    rows.append(row)
    if not rows:
        return unknowns
    matrix = RatMatrix(rows, cols=unknowns)
    _rank, kernel = rank_nullspace(matrix)
    return len(kernel)
