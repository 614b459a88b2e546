"""Vertex-operator modes, the operators L(n) for n >= -1, and identity checks.

The vertex operator attached to a monomial a_1(-n_1)...a_k(-n_k)1 is the
normal-ordered product of the derivative fields (1/(n_t-1)!)(d/dz)^{n_t-1}
a_t(z).  Extracting the coefficient of z^{-k-1} turns each field into a sum
of single modes with integer binomial prefactors, so a vertex-operator mode
applied to a state is a finite signed sum of ordinary mode compositions.
Normal ordering places creation modes strictly left of annihilation modes;
zero modes go to the far right (they are central here, so this is only a
bookkeeping convention).

L(n) is the quadratic expression (1/2l) sum over colors, generator powers j
and splittings of n into two modes, normal ordered.  On the adjoint module
every L(n) is a finite exact sum.  On evaluation modules two infinite j-sums
appear: the doubly-zero-mode part of L(0), which is summed in closed form as
a geometric series (hence the c^2 != 1 requirement), and the creation times
zero-mode tail of L(-1), which for c != 0 is genuinely infinite and is
truncated at j <= j_max with an explicit exactness flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .exactmath import RatMatrix, rat_str
from .fock import (
    GenIndex,
    ModeOp,
    ModuleSpec,
    State,
    apply_mode,
    grading,
    module_basis,
)


@dataclass(frozen=True)
class Truncation:
    """Explicit bounds making infinite sweeps and sums finitely computable."""

    max_wt: int
    max_nwt: int
    j_max: int = 0

    def __post_init__(self):
        if self.max_wt < 0 or self.max_nwt < 0 or self.j_max < 0:
            raise ValueError("truncation bounds must be nonnegative")


class VertexModeRequest(NamedTuple):
    """A state v of M(l) labeling Y(v,z), together with one mode number k."""

    v: State
    k: int

    def apply(self, w, spec):
        return vertex_mode(self.v, self.k, w, spec)


def _gbinom(m, r):
    """Binomial coefficient C(m, r) for integer m of any sign, r >= 0."""
    num = 1
    for s in range(r):
        num *= m - s
    return Fraction(num, math.factorial(r))


def vertex_mode(v, k, w, spec):
    """The coefficient of z^{-k-1} in Y_W(v, z) applied to w.

    Linear in v and in w; exact.  The adjoint module realizes the algebra's
    own operators Y(v, z).
    """
    out = State.zero()
    for vmono, vtop, vcoeff in v.iter_terms():
        if vtop != 0:
            raise ValueError("vertex-operator labels live in M(l); top index must be 0")
        for (wmono, wtop), wcoeff in w.terms.items():
            out += _vertex_term(vmono, k, wmono, wtop, spec).scale(vcoeff * wcoeff)
    return out


@lru_cache(maxsize=None)
def _vertex_term(vmono, k, wmono, wtop, spec):
    factors = tuple(vmono)
    count = len(factors)
    if count == 0:
        # Y(1, z) is the identity field.
        return State.term(wmono, wtop) if k == -1 else State.zero()
    target = k + 1 - vmono.weight()

    pos = {}
    for i, j, q in wmono:
        pos.setdefault((i, j), set()).add(q)

    def zero_ok(i, j):
        if spec.is_adjoint() or spec.H[i - 1].is_zero():
            return False
        return j == 0 or spec.c != 0

    max_mu = []
    for i, j, _nt in factors:
        cands = pos.get((i, j))
        if cands:
            max_mu.append(max(cands))
        else:
            max_mu.append(0 if zero_ok(i, j) else -1)
    suffix_max = [0] * (count + 1)
    for t in reversed(range(count)):
        suffix_max[t] = suffix_max[t + 1] + max_mu[t]

    out = State.zero()
    assignment = []

    def descend(t, remaining):
        nonlocal out
        if t == count:
            if remaining == 0:
                out += _apply_assignment(factors, tuple(assignment), wmono, wtop, spec)
            return
        i, j, _nt = factors[t]
        lo = remaining - suffix_max[t + 1]
        for mu in range(lo, max_mu[t] + 1):
            if mu > 0 and mu not in pos.get((i, j), ()):
                continue
            if mu == 0 and not zero_ok(i, j):
                continue
            assignment.append(mu)
            descend(t + 1, remaining - mu)
            assignment.pop()

    descend(0, target)
    return out


def _apply_assignment(factors, mus, wmono, wtop, spec):
    scalar = Fraction(1)
    for (_i, _j, nt), mu in zip(factors, mus):
        r = nt - 1
        scalar *= (-1) ** r * _gbinom(mu + r, r)
        if scalar == 0:
            return State.zero()
    # Zero modes act first, then annihilation modes, then creation modes.
    ordered = sorted(
        zip(factors, mus),
        key=lambda fm: (0 if fm[1] == 0 else (1 if fm[1] > 0 else 2), fm[1]),
    )
    state = State.term(wmono, wtop, scalar)
    for (i, j, _nt), mu in ordered:
        state = apply_mode(ModeOp(GenIndex(i, j), mu), state, spec)
        if state.is_zero():
            break
    return state


def _check_level_point(spec):
    if spec.is_adjoint():
        return
    if spec.c**2 == 1 and any(not m.is_zero() for m in spec.H):
        raise ValueError(
            "L(n) on an evaluation module with nontrivial top action needs c^2 != 1"
        )


def l_apply(n, w, spec, tr=None):
    """Apply L(n), n >= -1, returning (result, exact).

    exact is False only for the j-truncated creation/zero-mode tail of L(-1)
    on evaluation modules with c != 0 and a nontrivial top action; the tail
    is cut at j <= tr.j_max.  Everything else is a finite exact sum.
    """
    if n < -1:
        raise ValueError("only the operators L(n) with n >= -1 exist here")
    _check_level_point(spec)
    j_max = tr.j_max if tr is not None else 0
    out = State.zero()
    exact = True
    for (mono, top), coeff in w.terms.items():
        term, term_exact = _l_term(n, mono, top, spec, j_max)
        out += term.scale(coeff)
        exact = exact and term_exact
    return out, exact


@lru_cache(maxsize=None)
def _l_term(n, mono, top, spec, j_max):
    l = spec.l
    out = State.zero()
    exact = True

    # creation * annihilation pairings (for n = 0 this is the weight count)
    floor = max(0, n)
    for (i, j, q), mult in mono.distinct():
        if q > floor:
            out += State.term(mono.without(i, j, q).times(i, j, q - n), top, q * mult)

    # annihilation * annihilation, both factors acting on variables of w
    if n >= 2:
        seen = {(i, j) for (i, j, _q) in mono}
        for p in range(1, n // 2 + 1):
            q = n - p
            for i, j in sorted(seen):
                mp = mono.multiplicity(i, j, p)
                mq = mono.multiplicity(i, j, q)
                if p == q:
                    if mq >= 2:
                        coeff = Fraction(p * q, 2) * l * mq * (mq - 1)
                        out += State.term(
                            mono.without(i, j, p).without(i, j, q), top, coeff
                        )
                elif mp >= 1 and mq >= 1:
                    coeff = p * q * l * mp * mq
                    out += State.term(
                        mono.without(i, j, p).without(i, j, q), top, coeff
                    )

    if spec.is_adjoint():
        return out, exact

    # zero mode * annihilation: a(n) kills all but finitely many variables
    if n >= 1:
        for (i, j, q), mult in mono.distinct():
            if q == n:
                matrix = spec.zero_mode_matrix(i, j)
                if matrix.is_zero():
                    continue
                base = mono.without(i, j, n)
                for t in range(spec.r):
                    entry = matrix[t, top]
                    if entry:
                        out += State.term(base, t, n * mult * entry)

    # doubly-zero-mode part of L(0): geometric series summed in closed form
    if n == 0:
        total = RatMatrix.zero(spec.r, spec.r)
        for H in spec.H:
            total = total + H * H
        if not total.is_zero():
            scale = 1 / (2 * l * (1 - spec.c**2))
            for t in range(spec.r):
                entry = total[t, top]
                if entry:
                    out += State.term(mono, t, scale * entry)

    # creation * zero-mode tail of L(-1): infinite in j unless c = 0
    if n == -1:
        for i in range(1, spec.d + 1):
            H = spec.H[i - 1]
            if H.is_zero():
                continue
            if spec.c == 0:
                powers = [0]
            else:
                powers = range(j_max + 1)
                exact = False
            for j in powers:
                cj = spec.c**j
                for t in range(spec.r):
                    entry = H[t, top]
                    if entry:
                        out += State.term(mono.times(i, j, 1), t, cj * entry / l)

    return out, exact


def d_apply(v):
    """The translation operator of M(l): the derivation x_{i,j,n} -> n x_{i,j,n+1}.

    Coincides with L(-1) on the adjoint module; implemented independently so
    the two can be checked against each other.
    """
    out = State.zero()
    for (mono, top), coeff in v.terms.items():
        for (i, j, q), mult in mono.distinct():
            out += State.term(
                mono.without(i, j, q).times(i, j, q + 1), top, coeff * q * mult
            )
    return out


@dataclass
class Report:
    """Outcome of one identity sweep over a truncated basis."""

    identity: str
    params: dict
    states_checked: int
    defect_zero: bool
    max_defect: Fraction
    counterexample: State | None

    def to_json(self):
        return {
            "identity": self.identity,
            "params": self.params,
            "states_checked": self.states_checked,
            "defect_zero": self.defect_zero,
            "max_defect": rat_str(self.max_defect),
            "counterexample": None
            if self.counterexample is None
            else self.counterexample.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        from .exactmath import rat

        counterexample = data.get("counterexample")
        return cls(
            identity=data["identity"],
            params=data["params"],
            states_checked=data["states_checked"],
            defect_zero=data["defect_zero"],
            max_defect=rat(data["max_defect"]),
            counterexample=None
            if counterexample is None
            else State.from_json(counterexample),
        )


def merge_reports(reports, identity, params):
    """Combine sub-reports: counts add, defects max, first counterexample wins."""
    total = 0
    max_defect = Fraction(0)
    counterexample = None
    for rep in reports:
        total += rep.states_checked
        if rep.max_defect > max_defect:
            max_defect = rep.max_defect
        if counterexample is None and rep.counterexample is not None:
            counterexample = rep.counterexample
    return Report(identity, params, total, max_defect == 0, max_defect, counterexample)


def _sweep(identity, params, spec, tr, defect_of):
    checked = 0
    max_defect = Fraction(0)
    counterexample = None
    for mono, top in module_basis(spec, tr.max_wt, tr.max_nwt):
        w = State.term(mono, top)
        defect = defect_of(w)
        checked += 1
        size = defect.max_abs_coeff()
        if size > 0:
            if counterexample is None:
                counterexample = w
            if size > max_defect:
                max_defect = size
    return Report(identity, params, checked, max_defect == 0, max_defect, counterexample)


def _exact(pair):
    state, exact = pair
    if not exact:
        raise ValueError(
            "identity check hit a truncated L(-1) tail; "
            "restrict to exact configurations (c = 0 or trivial top action)"
        )
    return state


def check_l_mode_commutator(n, gen, k, spec, tr):
    """Verify [L(n), a(k)] = -k a(n+k) on every basis state within tr."""
    i, j = gen
    a_k = ModeOp(GenIndex(i, j), k)
    a_nk = ModeOp(GenIndex(i, j), n + k)

    def defect_of(w):
        lhs = _exact(l_apply(n, apply_mode(a_k, w, spec), spec, tr)) - apply_mode(
            a_k, _exact(l_apply(n, w, spec, tr)), spec
        )
        rhs = apply_mode(a_nk, w, spec).scale(-k)
        return lhs - rhs

    params = {"n": n, "gen": [i, j], "k": k}
    return _sweep("l-mode-commutator", params, spec, tr, defect_of)


def check_virasoro(m, n, spec, tr):
    """Verify [L(m), L(n)] = (m-n) L(m+n) on every basis state within tr."""
    if m < -1 or n < -1:
        raise ValueError("Virasoro generators exist only for indices >= -1")
    if m + n < -1 and m != n:
        raise ValueError("L(%d) is not defined; need m+n >= -1 or m = n" % (m + n))

    def defect_of(w):
        lm_ln = _exact(l_apply(m, _exact(l_apply(n, w, spec, tr)), spec, tr))
        ln_lm = _exact(l_apply(n, _exact(l_apply(m, w, spec, tr)), spec, tr))
        defect = lm_ln - ln_lm
        if m != n:
            defect = defect - _exact(l_apply(m + n, w, spec, tr)).scale(m - n)
        return defect

    params = {"m": m, "n": n}
    return _sweep("virasoro", params, spec, tr, defect_of)


def check_field_commutator(n, a_state, k, spec, tr):
    """Verify [L(n), A_k] = sum_m C(n+1, m+1) (L(m)A)_{k+n-m} on basis states.

    A must be doubly homogeneous; the right side runs over m = -1..n.
    """
    grading(a_state)
    adj = spec if spec.is_adjoint() else ModuleSpec.adjoint(spec.d, spec.l)
    lm_a = [(m, _exact(l_apply(m, a_state, adj))) for m in range(-1, n + 1)]

    def defect_of(w):
        lhs = _exact(
            l_apply(n, vertex_mode(a_state, k, w, spec), spec, tr)
        ) - vertex_mode(a_state, k, _exact(l_apply(n, w, spec, tr)), spec)
        rhs = State.zero()
        for m, lma in lm_a:
            if lma.is_zero():
                continue
            rhs += vertex_mode(lma, k + n - m, w, spec).scale(math.comb(n + 1, m + 1))
        return lhs - rhs

    params = {"n": n, "A": a_state.to_json(), "k": k}
    return _sweep("field-commutator", params, spec, tr, defect_of)


def adjoint_mode_matrix(v, n, spec, tr):
    """Matrix of the contragredient mode u_n = Res_z z^n Y'(v, z) on the dual.

    Y'(v, z) pairs with Y applied to exp(z L(1)) (-z^{-2})^{L(0)} v at z^{-1};
    because L(1) strictly lowers weight the exponential terminates, and
    (-z^{-2})^{L(0)} is (-1)^{wt v} z^{-2 wt v} on a doubly homogeneous v.
    The matrix is indexed by the truncated (monomial, top) basis and its
    dual, so M[row, col] carries the dual basis vector `col` to `row`.
    """
    wt_v, _nwt_v = grading(v)
    if not spec.is_adjoint():
        if spec.c != 0 or any(x != 0 for x in spec.lam):
            raise ValueError(
                "contragredient matrices need an integer L(0) spectrum: "
                "use the adjoint module or an evaluation module with c = 0, lambda = 0"
            )
    adj = spec if spec.is_adjoint() else ModuleSpec.adjoint(spec.d, spec.l)

    expansion = []
    u = v
    power = 0
    while not u.is_zero():
        expansion.append((power, u))
        u = _exact(l_apply(1, u, adj))
        power += 1
        if power > wt_v + 1:
            raise AssertionError("L(1) expansion failed to terminate")

    basis = module_basis(spec, tr.max_wt, tr.max_nwt)
    index = {label: pos for pos, label in enumerate(basis)}
    size = len(basis)
    rows = [[Fraction(0)] * size for _ in range(size)]
    sign = (-1) ** wt_v
    for col, (mono, top) in enumerate(basis):
        w = State.term(mono, top)
        image = State.zero()
        for power, u in expansion:
            k = 2 * wt_v - n - power - 2
            image += vertex_mode(u, k, w, spec).scale(
                Fraction(sign, math.factorial(power))
            )
        for key, coeff in image.terms.items():
            row = index.get(key)
            if row is not None:
                rows[row][col] = coeff
    return RatMatrix(rows, cols=size).transpose()
