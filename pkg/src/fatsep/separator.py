"""Separators of fat points, their degrees, good sets and Hilbert functions."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from .biring import Bidegree, Polynomial, RingSpec, apply_linear_change, dim_bigraded_piece
from .gbasis import (Ideal, ideal_equal, ideal_quotient, ideal_sum,
                     in_generated_piece, minimal_generators)
from .linalg import kernel
from .scheme import (FatPointScheme, PPoint, check_index, ideal_piece_dim_oracle,
                     point_ideal, point_power_ideal, reduce_multiplicity,
                     scheme_degree, scheme_ideal)


class HypothesisError(ValueError):
    """A theorem check was asked for on input that does not meet its hypotheses."""


@dataclass
class SeparatorSet:
    point_index: int
    polys: list
    degrees: list


@dataclass
class GoodSetWitness:
    """A dependence sum_k coeffs[k] * x0^a y0^b * F_k in I_Z at bidegree t."""

    t: Bidegree
    coeffs: dict  # separator position -> raw coefficient
    combination: Polynomial


@dataclass
class HilbertTable:
    rect: Bidegree
    values: list  # values[i][j] = H(i, j)

    def __getitem__(self, t):
        return self.values[t[0]][t[1]]

    def render(self) -> str:
        width = max(len(str(v)) for row in self.values for v in row)
        return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in self.values)


@dataclass
class AcmReport:
    is_acm: bool
    depth_lower_bound: int
    witness: tuple | None = None  # (L, L') certified regular sequence
    trials: int = 0


@dataclass
class CoordinateChange:
    """New coordinates are A x and B y; ``apply`` rewrites old forms."""

    A: list
    B: list
    A_inv: list
    B_inv: list

    def apply(self, f: Polynomial) -> Polynomial:
        return apply_linear_change(f, self.A_inv, self.B_inv)


# separators ----------------------------------------------------------------------

def is_separator(F: Polynomial, Z: FatPointScheme, i: int) -> bool:
    check_index(Z, i)
    if not F or not F.is_bihomogeneous():
        raise ValueError("a separator candidate must be a nonzero bihomogeneous form")
    for j, (P, k) in enumerate(Z.items, start=1):
        if j == i:
            if not point_power_ideal(P, Z.ring, k - 1).contains(F):
                return False
            if point_power_ideal(P, Z.ring, k).contains(F):
                return False
        elif not point_power_ideal(P, Z.ring, k).contains(F):
            return False
    return True


def minimal_separators(Z: FatPointScheme, i: int) -> SeparatorSet:
    """A minimal generating set of I_{Z'}/I_Z, reduced modulo I_Z and sorted
    lexicographically by bidegree."""
    check_index(Z, i)
    ring = Z.ring
    IZ = scheme_ideal(Z)
    kept = []
    for g in minimal_generators(scheme_ideal(reduce_multiplicity(Z, i))):
        if not in_generated_piece(g, kept, ring, modulo=IZ):
            kept.append(g)
    polys = [IZ.normal_form(g).monic() for g in kept]
    polys.sort(key=lambda f: f.bidegree())
    return SeparatorSet(i, polys, [f.bidegree() for f in polys])


def degree_of_point(Z: FatPointScheme, i: int) -> tuple:
    return tuple(minimal_separators(Z, i).degrees)


def _binom(a, b):
    return comb(a, b) if b >= 0 else 0


def expected_separator_count(m_i: int, N: int) -> int:
    return _binom(m_i + N - 1, m_i - 1) - _binom(m_i + N - 2, m_i - 2)


def not_acm_from_degree(Z: FatPointScheme, i: int) -> bool:
    """True certifies that Z is not ACM; False says nothing."""
    p = len(degree_of_point(Z, i))
    return p != scheme_degree(Z) - scheme_degree(reduce_multiplicity(Z, i))


# coordinates ---------------------------------------------------------------------

def _inverse(M, F):
    n = len(M)
    aug = [list(row) + [F.one() if i == j else F.zero() for j in range(n)]
           for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        s = F.inv(aug[col][col])
        aug[col] = [F.mul(v, s) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [F.sub(v, F.mul(c, w)) for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _change_matrix(coeffs, F):
    k = next(j for j, c in enumerate(coeffs) if c)
    rows = [list(coeffs)]
    for j in range(len(coeffs)):
        if j != k:
            rows.append([F.one() if c == j else F.zero() for c in range(len(coeffs))])
    return rows


def _matvec(M, v, F):
    out = []
    for row in M:
        s = F.zero()
        for a, b in zip(row, v):
            s = F.add(s, F.mul(a, b))
        out.append(s)
    return out


def _linear_coeffs(L: Polynomial, block: str):
    ring = L.ring
    size, off = (ring.n + 1, 0) if block == "x" else (ring.m + 1, ring.n + 1)
    want = Bidegree(1, 0) if block == "x" else Bidegree(0, 1)
    if not L or L.bidegree() != want:
        raise ValueError(f"{L} is not a form of bidegree {want}")
    coeffs = [ring.field.zero()] * size
    for e, c in L.terms.items():
        coeffs[e.index(1) - off] = c
    return coeffs


def normalize_coordinates(Z: FatPointScheme, L: Polynomial, Lp: Polynomial):
    """Change coordinates on each factor so that L becomes x_0 and L' becomes y_0."""
    F = Z.ring.field
    a, b = _linear_coeffs(L, "x"), _linear_coeffs(Lp, "y")
    for P in Z.points:
        if not _matvec([a], P.a, F)[0] or not _matvec([b], P.b, F)[0]:
            raise ValueError(f"{L} or {Lp} vanishes at the support point {P}")
    A, B = _change_matrix(a, F), _change_matrix(b, F)
    items = tuple((PPoint.make(Z.ring, _matvec(A, P.a, F), _matvec(B, P.b, F)), k)
                  for P, k in Z.items)
    return FatPointScheme(Z.ring, items), CoordinateChange(A, B, _inverse(A, F), _inverse(B, F))


def x0_y0_avoid_support(Z: FatPointScheme) -> bool:
    return all(P.a[0] and P.b[0] for P in Z.points)


def random_linear_forms(ring: RingSpec, rng: random.Random):
    F = ring.field
    hi = F.modulus - 1 if F.modulus else 100
    a = [rng.randint(1, hi) for _ in range(ring.n + 1)]
    b = [rng.randint(1, hi) for _ in range(ring.m + 1)]
    return ring.linear_form(a, "x"), ring.linear_form(b, "y")


def normalized(Z: FatPointScheme, S: SeparatorSet | None = None, seed: int = 0):
    """Z (and S) in coordinates where x_0 and y_0 miss the support.

    Returns ``(Z, S, change)``; ``change`` is None when nothing moved.
    """
    if x0_y0_avoid_support(Z):
        return Z, S, None
    rng = random.Random(seed)
    while True:
        L, Lp = random_linear_forms(Z.ring, rng)
        try:
            Z2, change = normalize_coordinates(Z, L, Lp)
        except ValueError:
            continue
        break
    if S is not None:
        polys = [change.apply(f) for f in S.polys]
        S = SeparatorSet(S.point_index, polys, [f.bidegree() for f in polys])
    return Z2, S, change


# good sets ----------------------------------------------------------------------

def _check_separator_set(Z, i, S):
    if not S.polys:
        raise ValueError("empty separator set")
    for f in S.polys:
        if not f or not f.is_bihomogeneous() or not is_separator(f, Z, i):
            raise ValueError(f"{f} is not a separator of P_{i}")
    IZ = scheme_ideal(Z)
    if not ideal_equal(ideal_sum(IZ, S.polys), scheme_ideal(reduce_multiplicity(Z, i))):
        raise ValueError(f"the given forms do not generate I_Z'/I_Z for P_{i}")


def is_good_set(Z: FatPointScheme, i: int, S: SeparatorSet):
    """Decide whether S is a good set of minimal separators of P_i.

    Needs x_0 and y_0 to vanish at no support point (see :func:`normalized`).
    Only bidegrees up to the componentwise maximum D of the separator degrees
    are examined: beyond D the participating separators are those of the
    clamped bidegree, and multiplication by x_0, y_0 is injective on R/I_Z.

    Returns ``(True, None)`` or ``(False, GoodSetWitness)``.
    """
    check_index(Z, i)
    if not x0_y0_avoid_support(Z):
        raise ValueError("x_0 or y_0 vanishes at a support point; normalize coordinates first")
    _check_separator_set(Z, i, S)
    ring = Z.ring
    one = ring.field.one()
    IZ = scheme_ideal(Z)
    degs = [f.bidegree() for f in S.polys]
    D = Bidegree(max(d[0] for d in degs), max(d[1] for d in degs))
    y0 = ring.n + 1
    for t1 in range(D[0] + 1):
        for t2 in range(D[1] + 1):
            t = Bidegree(t1, t2)
            idx = [k for k, d in enumerate(degs) if d.precedes(t)]
            shifted = []
            for k in idx:
                e = [0] * ring.nvars
                e[0], e[y0] = t1 - degs[k][0], t2 - degs[k][1]
                shifted.append(S.polys[k].mul_term(tuple(e), one))
            vecs = [IZ.normal_form(h).terms for h in shifted]
            deps = kernel(vecs, ring.field)
            if deps:
                coeffs = {idx[r]: c for r, c in deps[0].items()}
                comb_poly = ring.zero()
                for r, c in deps[0].items():
                    comb_poly = comb_poly + shifted[r].scale(c)
                return False, GoodSetWitness(t, coeffs, comb_poly)
    return True, None


def good_set_verdict(Z: FatPointScheme, i: int, S: SeparatorSet | None = None, seed: int = 0):
    """:func:`is_good_set` after moving to coordinates where it applies."""
    if S is None:
        S = minimal_separators(Z, i)
    Z2, S2, _ = normalized(Z, S, seed)
    return is_good_set(Z2, i, S2)


def _require_good(Z, i, seed):
    good, witness = good_set_verdict(Z, i, seed=seed)
    if not good:
        raise HypothesisError(
            f"the minimal separators of P_{i} are not a good set (dependence at {witness.t})")


# Hilbert functions ----------------------------------------------------------------

def hilbert_function(Z: FatPointScheme, rect) -> HilbertTable:
    """H_Z(t) = dim_k (R/I_Z)_t for t in [0, rect], by counting standard monomials."""
    I = scheme_ideal(Z)
    rect = Bidegree(*rect)
    values = [[I.quotient_dim((a, b)) for b in range(rect[1] + 1)] for a in range(rect[0] + 1)]
    return HilbertTable(rect, values)


def hilbert_function_oracle(Z: FatPointScheme, rect) -> HilbertTable:
    rect = Bidegree(*rect)
    values = [[dim_bigraded_piece((a, b), Z.ring) - ideal_piece_dim_oracle(Z, (a, b))
               for b in range(rect[1] + 1)] for a in range(rect[0] + 1)]
    return HilbertTable(rect, values)


def stabilization_corner(Z: FatPointScheme) -> Bidegree:
    """Smallest (k, k) with H_Z(k, k) = deg Z.

    H_Z is nondecreasing and bounded by deg Z, so it is constant from there on.
    """
    I, deg = scheme_ideal(Z), scheme_degree(Z)
    k = 0
    while I.quotient_dim((k, k)) != deg:
        k += 1
    return Bidegree(k, k)


def hilbert_relation_check(Z: FatPointScheme, i: int, rect, seed: int = 0) -> bool:
    """H_{Z'}(t) = H_Z(t) - #{d in deg_Z(P_i) : d ⪯ t} on the rectangle."""
    check_index(Z, i)
    _require_good(Z, i, seed)
    degs = degree_of_point(Z, i)
    HZ = hilbert_function(Z, rect)
    HZp = hilbert_function(reduce_multiplicity(Z, i), rect)
    for a in range(rect[0] + 1):
        for b in range(rect[1] + 1):
            count = sum(1 for d in degs if d.precedes((a, b)))
            if HZp[a, b] != HZ[a, b] - count:
                return False
    return True


def separator_count_check(Z: FatPointScheme, i: int, seed: int = 0) -> bool:
    """|deg_Z(P_i)| = deg Z - deg Z' = C(m+N-1, m-1) - C(m+N-2, m-2)."""
    check_index(Z, i)
    _require_good(Z, i, seed)
    p = len(degree_of_point(Z, i))
    N = Z.ring.n + Z.ring.m
    drop = scheme_degree(Z) - scheme_degree(reduce_multiplicity(Z, i))
    return p == drop == expected_separator_count(Z.mult(i), N)


def separator_piece_dims(Z: FatPointScheme, i: int, t):
    """dim_k (I_{Z'}/I_Z)_t by standard monomials and by the derivative oracle."""
    Zp = reduce_multiplicity(Z, i)
    by_gb = scheme_ideal(Z).quotient_dim(t) - scheme_ideal(Zp).quotient_dim(t)
    by_oracle = ideal_piece_dim_oracle(Zp, t) - ideal_piece_dim_oracle(Z, t)
    return by_gb, by_oracle


def separator_colon_check(Z: FatPointScheme, i: int, S: SeparatorSet | None = None) -> bool:
    """((I_Z, F_1, .., F_{j-1}) : F_j) = I_{P_i} for every j."""
    if S is None:
        S = minimal_separators(Z, i)
    IP = point_ideal(Z.point(i), Z.ring)
    J = scheme_ideal(Z)
    for f in S.polys:
        if not ideal_equal(ideal_quotient(J, f), IP):
            return False
        J = ideal_sum(J, f)
    return True


# ACM ---------------------------------------------------------------------------

def acm_check(Z: FatPointScheme, trials: int = 3, seed: int = 0) -> AcmReport:
    """Look for a regular sequence L, L' of bidegrees (1,0), (0,1) on R/I_Z.

    Success is a certificate; failure of every trial is evidence only.
    """
    rng = random.Random(seed)
    IZ = scheme_ideal(Z)
    for trial in range(1, trials + 1):
        L, Lp = random_linear_forms(Z.ring, rng)
        if not ideal_equal(IZ, ideal_quotient(IZ, L)):
            continue
        J = ideal_sum(IZ, L)
        if ideal_equal(J, ideal_quotient(J, Lp)):
            return AcmReport(True, 2, (L, Lp), trial)
    return AcmReport(False, 1, None, trials)
