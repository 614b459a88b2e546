"""Bigraded dimension tables, strong-grading sweeps and C1 quotient dimensions.

The dimension of the doubly homogeneous subspace with nwt m and weight n is
the number of d-colored bipartite partitions (m, n) = sum_j (m_j, n_j) with
m_j >= 0 and n_j >= 1.  Three independent computations are provided and
cross-checked: explicit monomial enumeration, a dynamic program over parts,
and the coefficient extraction from the Euler product
prod_{a>=0, b>=1} (1 - q^a p^b)^{-d}.

A fourth column evaluates the constant-term expression
CT_x 1/((x^{-1}p; p)_inf (x; q)_inf), built from the two Pochhammer
expansions sum p(k,n) x^k q^n = 1/(xq; q)_inf and
sum p'(k,m) x^k q^m = 1/(x; q)_inf.  The matched-index pairing of the two
factors does not biject with multisets of pairs, so this column genuinely
differs from the other three (first at (m, n) = (2, 3): 5 against 6); it is
reported as a diagnostic with a diff column rather than silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactmath import RatMatrix, rank
from .fock import State, enumerate_basis, grading, module_basis
from .vertexops import _sweep, vertex_mode


@dataclass
class DimTable:
    """Map from bigrades (m = nwt, n = weight) to a natural number."""

    d: int
    entries: dict = field(default_factory=dict)

    def get(self, m, n):
        return self.entries.get((m, n), 0)

    def cells(self):
        """Iterate ((m, n), value) sorted by bigrade."""
        for key in sorted(self.entries):
            yield key, self.entries[key]

    def to_json(self):
        return {
            "d": self.d,
            "entries": [[m, n, v] for (m, n), v in self.cells()],
        }


def validate_dimension_table(table):
    """Check the structural facts true of any graded-dimension table."""
    if table.get(0, 0) != 1:
        raise ValueError("a graded-dimension table has a one-dimensional (0, 0) cell")
    for (m, n), value in table.cells():
        if n == 0 and m > 0 and value != 0:
            raise ValueError("positive nwt needs positive weight; cell (%d, %d)" % (m, n))


@lru_cache(maxsize=None)
def _bipartite_table(d, max_m, max_n):
    """DP table of colored bipartite partition counts up to (max_m, max_n)."""
    ways = [[0] * (max_n + 1) for _ in range(max_m + 1)]
    ways[0][0] = 1
    for j in range(max_m + 1):
        for nu in range(1, max_n + 1):
            for _color in range(d):
                # one unbounded part type per color
                for m in range(j, max_m + 1):
                    for n in range(nu, max_n + 1):
                        ways[m][n] += ways[m - j][n - nu]
    return tuple(tuple(row) for row in ways)


def bipartite_count(d, m, n):
    """Number of multisets of colored parts (color, j >= 0, nu >= 1) summing to (m, n)."""
    if d < 1 or m < 0 or n < 0:
        raise ValueError("bipartite_count needs d >= 1 and m, n >= 0")
    return _bipartite_table(d, m, n)[m][n]


class LaurentSeries2:
    """Truncated series in p and q with a bounded Laurent variable x.

    Coefficients are rationals keyed by (xpow, ppow, qpow); ppow <= P and
    qpow <= Q always, and xpow is clamped to [xmin, xmax].
    """

    __slots__ = ("coefficients", "P", "Q", "xmin", "xmax")

    def __init__(self, P, Q, xmin=0, xmax=0, coefficients=None):
        self.P = P
        self.Q = Q
        self.xmin = xmin
        self.xmax = xmax
        self.coefficients = dict(coefficients or {})

    @classmethod
    def one(cls, P, Q, xmin=0, xmax=0):
        return cls(P, Q, xmin, xmax, {(0, 0, 0): Fraction(1)})

    def mul_geometric(self, dx, dp, dq):
        """Multiply by 1/(1 - x^dx p^dp q^dq), truncated to the bounds."""
        if dp < 0 or dq < 0 or (dp == 0 and dq == 0 and dx == 0):
            raise ValueError("geometric factor must move in some bounded direction")
        out = dict(self.coefficients)
        frontier = self.coefficients
        while frontier:
            shifted = {}
            for (x, p, q), coeff in frontier.items():
                x2, p2, q2 = x + dx, p + dp, q + dq
                if p2 > self.P or q2 > self.Q or not self.xmin <= x2 <= self.xmax:
                    continue
                shifted[(x2, p2, q2)] = coeff
            for key, coeff in shifted.items():
                out[key] = out.get(key, Fraction(0)) + coeff
            frontier = shifted
        return LaurentSeries2(self.P, self.Q, self.xmin, self.xmax, out)

    def constant_x_term(self):
        """The x^0 stratum as a dict (ppow, qpow) -> coefficient."""
        return {
            (p, q): coeff
            for (x, p, q), coeff in self.coefficients.items()
            if x == 0 and coeff != 0
        }


def gf_product_count(d, P, Q):
    """Dimension table from the truncated Euler product, for weight <= P, nwt <= Q."""
    series = LaurentSeries2.one(P, Q)
    for a in range(Q + 1):
        for b in range(1, P + 1):
            for _ in range(d):
                series = series.mul_geometric(0, b, a)
    table = DimTable(d=d)
    for (p, q), coeff in series.constant_x_term().items():
        if coeff.denominator != 1:
            raise AssertionError("Euler product produced a non-integer coefficient")
        table.entries[(q, p)] = int(coeff)
    validate_dimension_table(table)
    return table


def gf_paper_ct(P, Q):
    """The constant-term table: CT_x of 1/((x^{-1}p; p)_inf (x; q)_inf), d = 1.

    Both Pochhammer reciprocals are expanded as truncated Laurent series in x
    (the x-degree is bounded by the number of parts, at most P on each side)
    and multiplied; the x^0 stratum is returned with entries keyed (m, n) =
    (q-degree, p-degree).
    """
    series = LaurentSeries2.one(P, Q, xmin=-P, xmax=P)
    # 1/(x^{-1}p; p)_inf = prod_{b>=1} (1 - x^{-1} p^b)^{-1}
    for b in range(1, P + 1):
        series = series.mul_geometric(-1, b, 0)
    # 1/(x; q)_inf = prod_{a>=0} (1 - x q^a)^{-1}
    for a in range(Q + 1):
        series = series.mul_geometric(1, 0, a)
    table = DimTable(d=1)
    for (p, q), coeff in series.constant_x_term().items():
        if coeff.denominator != 1:
            raise AssertionError("constant term produced a non-integer coefficient")
        table.entries[(q, p)] = int(coeff)
    return table


@lru_cache(maxsize=None)
def partitions_exact_parts(k, n):
    """p(k, n): partitions of n into exactly k positive parts."""
    if k == 0:
        return 1 if n == 0 else 0
    if n < k:
        return 0
    return partitions_exact_parts(k - 1, n - 1) + partitions_exact_parts(k, n - k)


def partitions_nonneg_parts(k, m):
    """p'(k, m): partitions of m into exactly k nonnegative parts.

    Adding 1 to every part gives a bijection with partitions of m + k into
    exactly k positive parts.
    """
    return partitions_exact_parts(k, m + k)


def check_strong_grading(spec, tr, sample):
    """Sweep the grading containments over sampled modes against all basis states.

    For each sampled (v, j) with v doubly homogeneous of bigrade (wt_v, m)
    and every basis state w of bigrade (wt_w, k) within tr, every term of
    v_j w must have nwt <= m + k and weight exactly wt_w + wt_v - j - 1.
    """
    graded_sample = []
    for v, j in sample:
        wt_v, nwt_v = grading(v)
        graded_sample.append((v, j, wt_v, nwt_v))

    def defect_of(w):
        wt_w, nwt_w = grading(w)
        for v, j, wt_v, nwt_v in graded_sample:
            image = vertex_mode(v, j, w, spec)
            for (mono, _top), coeff in image.terms.items():
                if mono.nwt() > nwt_v + nwt_w or mono.weight() != wt_w + wt_v - j - 1:
                    return State.term(mono, _top, coeff)
        return State.zero()

    if grading(State.vacuum()) != (0, 0):
        raise AssertionError("the vacuum must sit in bigrade (0, 0)")
    params = {
        "sample": [[v.to_json(), j] for v, j, _w, _m in graded_sample],
    }
    return _sweep("strong-grading", params, spec, tr, defect_of)


def _stratum_vectors(images, labels):
    index = {label: pos for pos, label in enumerate(labels)}
    vectors = []
    for image in images:
        vec = [Fraction(0)] * len(labels)
        for key, coeff in image.terms.items():
            vec[index[key]] = coeff
        vectors.append(vec)
    return vectors


def c1_quotient_dims(spec, tr):
    """Per-bigrade dimensions of W / C1(W) within the truncation.

    C1 generators are u_{-1} w for doubly homogeneous u of positive weight;
    for the target nwt stratum m only u with nwt(u) <= m are used, and the
    span is intersected with each bigrade exactly (dim(S cap U) computed from
    ranks).  Entries are dim W^(m)_(n) minus the span dimension.
    """
    nwt_cap = 2 * tr.max_nwt
    # labels and W-dimensions per weight stratum
    labels_by_wt = {}
    for n in range(tr.max_wt + 1):
        labels = []
        for m in range(nwt_cap + 1):
            for mono in enumerate_basis(spec.d, m, n):
                for top in range(spec.r):
                    labels.append((mono, top))
        labels_by_wt[n] = labels

    module_labels = module_basis(spec, tr.max_wt, tr.max_nwt)

    table = DimTable(d=spec.d)
    for target_m in range(tr.max_nwt + 1):
        gens = [
            u
            for wt_u in range(1, tr.max_wt + 1)
            for nwt_u in range(target_m + 1)
            for u in enumerate_basis(spec.d, nwt_u, wt_u)
        ]
        for n in range(tr.max_wt + 1):
            labels = labels_by_wt[n]
            images = []
            for u in gens:
                wt_u = u.weight()
                if wt_u > n:
                    continue
                u_state = State.term(u)
                for mono, top in module_labels:
                    if mono.weight() != n - wt_u:
                        continue
                    image = vertex_mode(u_state, -1, State.term(mono, top), spec)
                    if not image.is_zero():
                        images.append(image)
            span = _stratum_vectors(images, labels)
            bigrade_positions = [
                pos for pos, (mono, _top) in enumerate(labels) if mono.nwt() == target_m
            ]
            dim_w = len(bigrade_positions)
            if span:
                span_rank = rank(RatMatrix(span, cols=len(labels)))
                stacked = list(span)
                for pos in bigrade_positions:
                    row = [Fraction(0)] * len(labels)
                    row[pos] = Fraction(1)
                    stacked.append(row)
                sum_rank = rank(RatMatrix(stacked, cols=len(labels)))
                intersection = span_rank + dim_w - sum_rank
            else:
                intersection = 0
            table.entries[(target_m, n)] = dim_w - intersection
    return table
