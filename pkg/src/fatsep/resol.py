"""Minimal bigraded free resolutions of R/I via Schreyer frames.

A Groebner basis v_1..v_r of a submodule of F_{k-1} gives F_k with basis
e_1..e_r ordered by the induced (Schreyer) order: x^a e_i beats x^b e_j when
the leading term of x^a v_i beats that of x^b v_j, ties going to the smaller
index.  The reduced S-vectors are then a Groebner basis of the syzygies.
The resulting frame is made minimal by cancelling constant entries.
"""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from math import comb
from operator import add, sub

from .biring import Bidegree, Polynomial, RingSpec, dim_bigraded_piece
from .gbasis import Ideal, _divides, _lcm, _mask
from .linalg import rank
from .scheme import (FatPointScheme, check_index, point_ideal, random_point,
                     reduce_multiplicity, scheme_ideal)
from .separator import HypothesisError, acm_check, degree_of_point


@dataclass
class Resolution:
    """``modules[k]`` lists the shifts of F_k (F_0 = R); ``maps[k]`` is
    d_k : F_k -> F_{k-1} as ``{column: {row: Polynomial}}`` (``maps[0]`` is None)."""

    ring: RingSpec
    modules: list
    maps: list
    minimal: bool

    @property
    def length(self) -> int:
        return max(k for k, mod in enumerate(self.modules) if mod)

    def ranks(self):
        return [len(mod) for mod in self.modules]

    def betti(self):
        """Per homological degree, a Counter of shifts."""
        return [Counter(mod) for mod in self.modules]

    def render(self) -> str:
        lines = []
        for k, mod in enumerate(self.modules):
            if not mod:
                continue
            parts = ", ".join(f"{s}^{c}" if c > 1 else f"{s}"
                              for s, c in sorted(Counter(mod).items()))
            lines.append(f"F_{k}: rank {len(mod)}: {parts}")
        return "\n".join(lines)


# Schreyer frame ------------------------------------------------------------------

class _Level:
    """Basis of one free module F_k, with what its induced order needs."""

    def __init__(self, ring, E, chain, shifts):
        self.ring = ring
        self.E = E          # level-0 exponent of the leading term of each image
        self.chain = chain  # tie-break tuple of each basis element
        self.shifts = shifts
        rk = ring.rkey
        self._cache = {}

        def key(c, e):
            k = (c, e)
            v = self._cache.get(k)
            if v is None:
                v = (rk(tuple(map(add, e, E[c]))),) + chain[c]
                self._cache[k] = v
            return v

        self.key = key  # smaller key = larger term


def _leading(vec, key):
    return min(vec, key=lambda ce: key(*ce))


def _reduce_to_zero(vec, divisors, level, field, record):
    """Top-reduce ``vec`` (in F_{k-1}) by the basis images; ``record(l, q, c)``
    receives every quotient term c*x^q at basis element l."""
    p = field.modulus
    key = level.key
    f = dict(vec)
    heap = [(key(c, e), c, e) for c, e in f]
    heapify(heap)
    while heap:
        _, comp, e = heappop(heap)
        a = f.get((comp, e))
        if a is None:
            continue
        emask = _mask(e)
        hit = None
        for lexp, lmask, l, inv, terms in divisors.get(comp, ()):
            if not lmask & ~emask and _divides(lexp, e):
                hit = (lexp, l, inv, terms)
                break
        if hit is None:
            raise ArithmeticError("S-vector does not reduce to zero; frame is not a Groebner basis")
        lexp, l, inv, terms = hit
        q = tuple(map(sub, e, lexp))
        c = a * inv % p if p else a * inv
        record(l, q, c)
        for (tc, te), tv in terms:
            ne = tuple(map(add, te, q))
            k2 = (tc, ne)
            v = f.get(k2, 0) - c * tv
            if p:
                v %= p
            if v:
                if k2 not in f:
                    heappush(heap, (key(tc, ne), tc, ne))
                f[k2] = v
            else:
                f.pop(k2, None)


def _syzygy_level(V, level: _Level, ring):
    """Schreyer syzygies of the images ``V`` (dicts over F_{k-1}) of the basis
    of F_k, returned as dicts over F_k (sorted, not yet re-indexed)."""
    F = ring.field
    p = F.modulus
    LT = [_leading(v, level.key) for v in V]
    divisors = defaultdict(list)
    for l, (comp, lexp) in enumerate(LT):
        divisors[comp].append((lexp, _mask(lexp), l, F.inv(V[l][(comp, lexp)]),
                               list(V[l].items())))
    by_comp = defaultdict(list)
    for l, (comp, _) in enumerate(LT):
        by_comp[comp].append(l)
    out = []
    for comp, members in by_comp.items():
        for pos, i in enumerate(members):
            ei = LT[i][1]
            quots = []
            for j in members[pos + 1:]:
                quots.append((tuple(map(sub, _lcm(ei, LT[j][1]), ei)), j))
            kept = []
            for m, j in quots:
                if any(_divides(m2, m) for m2, _ in kept):
                    continue
                if any(_divides(m2, m) and m2 != m for m2, _ in quots):
                    continue
                kept.append((m, j))
            for m, j in kept:
                ej = LT[j][1]
                mj = tuple(map(sub, tuple(map(add, m, ei)), ej))
                ci = F.inv(V[i][(comp, ei)])
                cj = F.inv(V[j][(comp, ej)])
                syz = {(i, m): ci}
                syz[(j, mj)] = F.neg(cj)
                svec = {}
                for (tc, te), tv in V[i].items():
                    svec[(tc, tuple(map(add, te, m)))] = F.mul(tv, ci)
                for (tc, te), tv in V[j].items():
                    k2 = (tc, tuple(map(add, te, mj)))
                    v = F.sub(svec.get(k2, F.zero()), F.mul(tv, cj))
                    if v:
                        svec[k2] = v
                    else:
                        svec.pop(k2, None)

                def record(l, q, c, syz=syz):
                    k2 = (l, q)
                    v = syz.get(k2, 0) - c
                    if p:
                        v %= p
                    if v:
                        syz[k2] = v
                    else:
                        syz.pop(k2, None)

                _reduce_to_zero(svec, divisors, level, F, record)
                out.append(((i, m), syz))
    return out


def schreyer_frame(I: Ideal):
    """Non-minimal resolution of R/I: ``(shifts per level, maps per level)``
    with maps as lists of column vectors ``{(row, exponent): coeff}``."""
    ring = I.ring
    zero = (0,) * ring.nvars
    gb = sorted(I.groebner(), key=lambda g: tuple(-x for x in g.lm()))
    level0 = _Level(ring, [zero], [()], [Bidegree(0, 0)])
    V = [{(0, e): c for e, c in g.terms.items()} for g in gb]
    level = _Level(ring, [g.lm() for g in gb], [(c,) for c in range(len(gb))],
                   [g.bidegree() for g in gb])
    shifts = [level0.shifts, level.shifts]
    maps = [None, V]
    prev = level0
    while V:
        # the key of F_{k-1} orders the S-vectors; the key of F_k orders syzygies
        syz = _syzygy_level(V, prev, ring)
        if not syz:
            break
        syz.sort(key=lambda item: (item[0][0], tuple(-x for x in item[0][1])))
        E, chain, sh = [], [], []
        for new, ((i, m), _) in enumerate(syz):
            E.append(tuple(map(add, m, level.E[i])))
            chain.append(level.chain[i] + (new,))
            sh.append(level.shifts[i] + ring.exp_bidegree(m))
        V = [vec for _, vec in syz]
        prev, level = level, _Level(ring, E, chain, sh)
        shifts.append(sh)
        maps.append(V)
    return shifts, maps


def syzygies(gb) -> list:
    """First syzygies of a Groebner basis (as a list of column dicts
    ``{index: Polynomial}``), computed by Schreyer's construction."""
    gb = list(gb)
    if not gb:
        return []
    ring = gb[0].ring
    zero = (0,) * ring.nvars
    level0 = _Level(ring, [zero], [()], [Bidegree(0, 0)])
    V = [{(0, e): c for e, c in g.terms.items()} for g in gb]
    return [_to_column(vec, ring) for _, vec in _syzygy_level(V, level0, ring)]


def _to_column(vec, ring):
    col = defaultdict(dict)
    for (c, e), v in vec.items():
        col[c][e] = v
    return {c: Polynomial(ring, t) for c, t in col.items()}


# minimalization -----------------------------------------------------------------

def _is_constant(f: Polynomial):
    return len(f.terms) == 1 and not any(next(iter(f.terms)))


class _Sparse:
    def __init__(self, cols):
        self.cols = {j: dict(c) for j, c in cols.items()}
        self.rows = defaultdict(set)
        for j, c in self.cols.items():
            for r in c:
                self.rows[r].add(j)

    def set(self, r, j, f):
        if f:
            self.cols[j][r] = f
            self.rows[r].add(j)
        else:
            self.cols[j].pop(r, None)
            self.rows[r].discard(j)

    def drop_col(self, j):
        for r in self.cols.pop(j, {}):
            self.rows[r].discard(j)

    def drop_row(self, r):
        for j in self.rows.pop(r, set()):
            self.cols[j].pop(r, None)


def _minimalize(ring, shifts, mats):
    F = ring.field
    mats = [None] + [_Sparse(m) for m in mats[1:]]
    alive = [set(range(len(s))) for s in shifts]
    for k in range(1, len(mats)):
        M = mats[k]
        while True:
            pivot = None
            for j in sorted(M.cols):
                for r, f in M.cols[j].items():
                    if _is_constant(f):
                        pivot = (r, j, f)
                        break
                if pivot:
                    break
            if pivot is None:
                break
            r, j, f = pivot
            inv = F.inv(next(iter(f.terms.values())))
            pivot_col = dict(M.cols[j])
            for j2 in list(M.rows[r]):
                if j2 == j:
                    continue
                factor = M.cols[j2][r].scale(inv)
                for r2, g in pivot_col.items():
                    M.set(r2, j2, M.cols[j2].get(r2, ring.zero()) - g * factor)
            M.drop_col(j)
            M.drop_row(r)
            if k + 1 < len(mats):
                mats[k + 1].drop_row(j)
            if k - 1 >= 1:
                mats[k - 1].drop_col(r)
            alive[k].discard(j)
            alive[k - 1].discard(r)
    # re-index
    index = [{old: new for new, old in enumerate(sorted(a))} for a in alive]
    new_shifts = [[shifts[k][old] for old in sorted(a)] for k, a in enumerate(alive)]
    new_maps = [None]
    for k in range(1, len(mats)):
        M = mats[k]
        new_maps.append({index[k][j]: {index[k - 1][r]: f for r, f in col.items()}
                         for j, col in M.cols.items() if j in alive[k]})
    while len(new_shifts) > 1 and not new_shifts[-1]:
        new_shifts.pop()
        new_maps.pop()
    return new_shifts, new_maps


def minimal_free_resolution(I: Ideal, minimalize: bool = True) -> Resolution:
    if I.is_unit():
        raise ValueError("R/I is zero for the unit ideal")
    ring = I.ring
    shifts, vecs = schreyer_frame(I)
    mats = [None] + [{j: _to_column(v, ring) for j, v in enumerate(level)}
                     for level in vecs[1:]]
    if not minimalize:
        return Resolution(ring, shifts, mats, False)
    shifts, mats = _minimalize(ring, shifts, mats)
    return Resolution(ring, shifts, mats, True)


def pdim(I: Ideal) -> int:
    """Projective dimension of R/I."""
    return minimal_free_resolution(I).length


def tor_betti(I: Ideal):
    """Bigraded Betti numbers from the frame alone: in each shift, the ranks
    of the constant parts of the differentials decide what cancels."""
    ring = I.ring
    shifts, vecs = schreyer_frame(I)
    const_rank = [Counter() for _ in shifts] + [Counter()]
    for k in range(1, len(vecs)):
        zero = (0,) * ring.nvars
        by_shift = defaultdict(list)
        for j, vec in enumerate(vecs[k]):
            row = {c: v for (c, e), v in vec.items() if e == zero}
            by_shift[shifts[k][j]].append(row)
        for s, rows in by_shift.items():
            const_rank[k][s] = rank(rows, ring.field)
    out = []
    for k, sh in enumerate(shifts):
        cnt = Counter(sh)
        for s in list(cnt):
            cnt[s] -= const_rank[k][s] + const_rank[k + 1][s]
        out.append(+cnt)
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out


# checks ---------------------------------------------------------------------------

def compose(res: Resolution, k: int):
    """d_{k-1} ∘ d_k as a sparse matrix (should be empty)."""
    ring = res.ring
    A, B = res.maps[k - 1], res.maps[k]
    out = defaultdict(lambda: ring.zero())
    for j, col in B.items():
        for mid, f in col.items():
            for r, g in A.get(mid, {}).items():
                out[(r, j)] = out[(r, j)] + g * f
    return {key: f for key, f in out.items() if f}


def hilbert_from_betti(res: Resolution, t) -> int:
    """sum_i (-1)^i sum_{s in F_i} dim R_{t - s}."""
    total = 0
    for k, mod in enumerate(res.modules):
        sign = -1 if k % 2 else 1
        for s in mod:
            total += sign * dim_bigraded_piece((t[0] - s[0], t[1] - s[1]), res.ring)
    return total


def point_resolution_check(ring: RingSpec, seed: int = 0) -> bool:
    """The resolution of a point ends in R(-n,-m) <- R^n(-n+1,-m) + R^m(-n,-m+1)."""
    n, m, N = ring.n, ring.m, ring.n + ring.m
    P = random_point(ring, random.Random(seed))
    res = minimal_free_resolution(point_ideal(P, ring))
    if res.length != N:
        return False
    last = Counter(res.modules[N])
    before = Counter(res.modules[N - 1])
    return (last == Counter({Bidegree(n, m): 1})
            and before == Counter({Bidegree(n - 1, m): n, Bidegree(n, m - 1): m}))


def _require_acm(Z, what, seed):
    # an emptied Z' has I_Z' = R, and the hypothesis on it holds vacuously
    if Z.items and not acm_check(Z, seed=seed).is_acm:
        raise HypothesisError(f"{what} is not certified ACM")


def last_syzygy_separator_check(Z: FatPointScheme, i: int, seed: int = 0) -> bool:
    """Every d + (n, m), d in deg_Z(P_i), is a shift of the last module F_N."""
    check_index(Z, i)
    Zp = reduce_multiplicity(Z, i)
    _require_acm(Z, "Z", seed)
    _require_acm(Zp, "Z'", seed)
    ring = Z.ring
    N = ring.n + ring.m
    res = minimal_free_resolution(scheme_ideal(Z))
    if res.length != N:
        return False
    want = Counter(d + (ring.n, ring.m) for d in degree_of_point(Z, i))
    have = Counter(res.modules[N])
    return all(have[s] >= c for s, c in want.items())


def rank_bound_check(Z: FatPointScheme, seed: int = 0) -> bool:
    """rk F_N >= C(M+N-2, N-1) for M the largest multiplicity."""
    M = max(Z.mults)
    i = Z.mults.index(M) + 1
    _require_acm(Z, "Z", seed)
    _require_acm(reduce_multiplicity(Z, i), "Z'", seed)
    N = Z.ring.n + Z.ring.m
    res = minimal_free_resolution(scheme_ideal(Z))
    return res.length == N and len(res.modules[N]) >= comb(M + N - 2, N - 1)


def separator_chain_pdims(Z: FatPointScheme, i: int, seed: int = 0) -> list:
    """pdim R/(I_Z, F_1, .., F_j) for j = 1..p along the minimal separators.

    With a good separator set and Z' ACM every entry is n + m.  When Z' is
    empty the last step reaches the unit ideal and is left out.
    """
    from .gbasis import ideal_sum
    from .separator import _require_good, minimal_separators
    check_index(Z, i)
    _require_good(Z, i, seed)
    _require_acm(reduce_multiplicity(Z, i), "Z'", seed)
    J = scheme_ideal(Z)
    out = []
    for f in minimal_separators(Z, i).polys:
        J = ideal_sum(J, f)
        if not J.is_unit():
            out.append(pdim(J))
    return out
