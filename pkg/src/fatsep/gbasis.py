"""Buchberger's algorithm and the ideal operations built on it.

Pairs are selected by the normal strategy (smallest lcm degree first) and
pruned with the Gebauer-Moeller installation of Buchberger's coprime and
chain criteria.  All bases handed out are reduced.
"""
from __future__ import annotations

import threading
from heapq import heapify, heappop, heappush
from itertools import combinations_with_replacement
from operator import add, sub

from .biring import Polynomial, RingMismatch, RingSpec, monomials_of_bidegree
from .linalg import Echelon


def _mask(e):
    m = 0
    for i, k in enumerate(e):
        if k:
            m |= 1 << i
    return m


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Reducer:
    """A list of monic divisors, indexed for fast divisibility lookups."""

    def __init__(self, ring, polys=()):
        self.ring = ring
        self.entries = []  # (lm, mask, tail)
        for g in polys:
            self.append(g)

    def append(self, g: Polynomial):
        lm = g.lm()
        inv = self.ring.field.inv(g.terms[lm])
        F = self.ring.field
        tail = [(e, F.mul(c, inv)) for e, c in g.terms.items() if e != lm]
        self.entries.append((lm, _mask(lm), tail))

    def find(self, e, emask):
        for lm, mask, tail in self.entries:
            if not mask & ~emask and _divides(lm, e):
                return lm, tail
        return None

    def reduce(self, terms: dict, full=True) -> dict:
        """Remainder of ``terms`` on division by the stored divisors."""
        ring = self.ring
        p = ring.field.modulus
        rk = ring.rkey
        f = dict(terms)
        heap = [(rk(e), e) for e in f]
        heapify(heap)
        r = {}
        while heap:
            _, e = heappop(heap)
            c = f.get(e)
            if c is None:
                continue
            hit = self.find(e, _mask(e))
            if hit is None:
                r[e] = f.pop(e)
                if not full:
                    r.update(f)
                    return r
                continue
            del f[e]
            lm, tail = hit
            q = tuple(map(sub, e, lm))
            for ge, gc in tail:
                ne = tuple(map(add, ge, q))
                v = f.get(ne)
                if v is None:
                    v = -c * gc
                    if p:
                        v %= p
                    f[ne] = v
                    heappush(heap, (rk(ne), ne))
                else:
                    v = v - c * gc
                    if p:
                        v %= p
                    if v:
                        f[ne] = v
                    else:
                        del f[ne]
        return r


def _sel_degree(ring, e):
    return sum(e[:-1]) if ring.aux else sum(e)


def _spoly(f, g, lcm, ring):
    F = ring.field
    a = f.mul_term(tuple(map(sub, lcm, f.lm())), F.inv(f.lc()))
    b = g.mul_term(tuple(map(sub, lcm, g.lm())), F.inv(g.lc()))
    return a - b


def groebner(polys, ring: RingSpec) -> list[Polynomial]:
    """Reduced Groebner basis of the ideal generated by ``polys``."""
    polys = [f for f in polys if f]
    for f in polys:
        if f.ring != ring:
            raise RingMismatch(f"{f.ring} vs {ring}")
    if not polys:
        return []
    rk = ring.rkey
    basis: list[Polynomial] = []
    active: list[int] = []
    pairs: list = []  # (sel degree, rkey(lcm), i, j, lcm)
    reducer = _Reducer(ring)

    def update(h: Polynomial):
        nonlocal active, pairs
        k = len(basis)
        basis.append(h)
        reducer.append(h)
        hlm = h.lm()
        cand = [(i, _lcm(basis[i].lm(), hlm)) for i in active]
        keep = []
        for idx, (i, l) in enumerate(cand):
            if _coprime(basis[i].lm(), hlm):
                keep.append((i, l, True))
                continue
            others = [l2 for (_, l2) in cand[idx + 1:]] + [l2 for (_, l2, _) in keep]
            if not any(_divides(l2, l) for l2 in others):
                keep.append((i, l, False))
        new_pairs = []
        for deg, key, i, j, l in pairs:
            if (_divides(hlm, l) and _lcm(basis[i].lm(), hlm) != l
                    and _lcm(basis[j].lm(), hlm) != l):
                continue
            new_pairs.append((deg, key, i, j, l))
        for i, l, coprime in keep:
            if not coprime:
                new_pairs.append((_sel_degree(ring, l), rk(l), i, k, l))
        pairs = new_pairs
        active = [i for i in active if not _divides(hlm, basis[i].lm())] + [k]

    # inputs in increasing order; each reduced against what is already there
    for f in sorted(polys, key=lambda f: _sel_degree(ring, f.lm())):
        r = reducer.reduce(f.terms)
        if r:
            update(Polynomial(ring, r).monic())
    while pairs:
        best = min(range(len(pairs)), key=lambda t: (pairs[t][0], pairs[t][1]))
        _, _, i, j, l = pairs.pop(best)
        s = _spoly(basis[i], basis[j], l, ring)
        r = reducer.reduce(s.terms)
        if r:
            update(Polynomial(ring, r).monic())
    return _interreduce([basis[i] for i in active], ring)


def _interreduce(G, ring):
    G = sorted(G, key=lambda g: ring.rkey(g.lm()), reverse=True)
    minimal = []
    for g in G:  # smallest leading monomials first
        if not any(_divides(h.lm(), g.lm()) for h in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = _Reducer(ring, minimal[:idx] + minimal[idx + 1:])
        lm = g.lm()
        tail = {e: c for e, c in g.terms.items() if e != lm}
        r = others.reduce(tail)
        r[lm] = g.terms[lm]
        out.append(Polynomial(ring, r).monic())
    out.sort(key=lambda g: ring.rkey(g.lm()))
    return out


def reduce_by(f: Polynomial, G) -> Polynomial:
    return Polynomial(f.ring, _Reducer(f.ring, G).reduce(f.terms))


# ideals -------------------------------------------------------------------------

class Ideal:
    """A bihomogeneous ideal; its reduced Groebner basis is computed once,
    on first use, under a lock."""

    def __init__(self, ring: RingSpec, gens, gb=None):
        gens = [g for g in gens if g]
        for g in gens:
            if g.ring != ring:
                raise RingMismatch(f"{g.ring} vs {ring}")
            if not g.is_bihomogeneous():
                raise ValueError(f"generator {g} is not bihomogeneous")
        self.ring = ring
        self.gens = tuple(gens)
        self._gb = tuple(gb) if gb is not None else None
        self._reducer = None
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ring):
        return cls(ring, [ring.one()])

    def groebner(self) -> tuple:
        with self._lock:
            if self._gb is None:
                self._gb = tuple(groebner(self.gens, self.ring))
            return self._gb

    def reducer(self) -> _Reducer:
        gb = self.groebner()
        with self._lock:
            if self._reducer is None:
                self._reducer = _Reducer(self.ring, gb)
            return self._reducer

    def leading_monomials(self):
        return [g.lm() for g in self.groebner()]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatch(f"{f.ring} vs {self.ring}")
        return Polynomial(self.ring, self.reducer().reduce(f.terms))

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def __contains__(self, f):
        return self.contains(f)

    def is_unit(self) -> bool:
        return any(not any(g.lm()) for g in self.groebner())

    def is_subset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def standard_monomials(self, t) -> list:
        lms = [(lm, _mask(lm)) for lm in self.leading_monomials()]
        out = []
        for e in monomials_of_bidegree(t, self.ring):
            em = _mask(e)
            if not any(not mk & ~em and _divides(lm, e) for lm, mk in lms):
                out.append(e)
        return out

    def quotient_dim(self, t) -> int:
        """dim_k (R/I)_t."""
        return len(self.standard_monomials(t))

    def __add__(self, other):
        return ideal_sum(self, other)

    def __mul__(self, other):
        return ideal_product(self, other)

    def __pow__(self, k):
        return ideal_power(self, k)

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens))})"


def _same_ring(I, J):
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")


def buchberger(I: Ideal) -> tuple:
    return I.groebner()


def normal_form(f: Polynomial, I: Ideal) -> Polynomial:
    return I.normal_form(f)


def ideal_sum(I: Ideal, J) -> Ideal:
    if isinstance(J, Polynomial):
        J = Ideal(I.ring, [J])
    elif not isinstance(J, Ideal):
        J = Ideal(I.ring, list(J))
    _same_ring(I, J)
    return Ideal(I.ring, I.gens + J.gens)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.ring, [f * g for f in I.gens for g in J.gens])


def ideal_power(I: Ideal, k: int) -> Ideal:
    """Ideal generated by all k-fold products of the generators of ``I``."""
    if k < 1:
        raise ValueError("ideal power needs k >= 1")
    gens = minimal_generators(I)
    prods = []
    for combo in combinations_with_replacement(range(len(gens)), k):
        f = gens[combo[0]]
        for i in combo[1:]:
            f = f * gens[i]
        prods.append(f)
    return Ideal(I.ring, prods)


def _split_bihomogeneous(polys):
    out = []
    for f in polys:
        out.extend(f.bihomogeneous_components().values())
    return out


def ideal_intersection(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J by eliminating t from t*I + (1-t)*J."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    er = ring.with_aux()
    t = er.var("t")
    lift = lambda f: Polynomial(er, {e + (0,): c for e, c in f.terms.items()})
    gens = [t * lift(f) for f in I.gens] + [lift(g) - t * lift(g) for g in J.gens]
    # t leads the order, so a t-free leading monomial means a t-free element
    kept = [Polynomial(ring, {e[:-1]: c for e, c in g.terms.items()})
            for g in groebner(gens, er) if not g.lm()[-1]]
    if all(f.is_bihomogeneous() for f in kept):
        # the t-free part of a reduced basis is a reduced basis of I ∩ J
        return Ideal(ring, kept, gb=kept)
    return Ideal(ring, _split_bihomogeneous(kept))


def _exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g, failing loudly on a nonzero remainder."""
    ring = f.ring
    F = ring.field
    q = {}
    r = f
    glm, ginv = g.lm(), F.inv(g.lc())
    while r:
        lm = r.lm()
        if not _divides(glm, lm):
            raise ArithmeticError(f"{g} does not divide {f}")
        e = tuple(map(sub, lm, glm))
        c = F.mul(r.terms[lm], ginv)
        q[e] = c
        r = r - g.mul_term(e, c)
    return Polynomial(ring, q)


def ideal_quotient(I: Ideal, f: Polynomial) -> Ideal:
    """The colon ideal (I : f)."""
    if not f or not f.is_bihomogeneous():
        raise ValueError("colon needs a nonzero bihomogeneous element")
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    K = ideal_intersection(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, [_exact_divide(g, f) for g in K.groebner()])


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    A, B = I.groebner(), J.groebner()
    return len(A) == len(B) and all(a == b for a, b in zip(A, B))


def minimal_generators(I: Ideal) -> list[Polynomial]:
    """Trim a generating set to a minimal one.

    Candidates (the reduced basis) are visited by ascending total degree,
    then bidegree, then leading monomial; a candidate is kept unless the
    ones already kept generate it in its own bidegree.
    """
    ring = I.ring
    cands = sorted(I.groebner(), key=lambda g: ring.rkey(g.lm()), reverse=True)
    cands.sort(key=lambda g: (sum(g.bidegree()), g.bidegree()))
    kept: list[Polynomial] = []
    for g in cands:
        if not in_generated_piece(g, kept, ring):
            kept.append(g)
    return kept


def in_generated_piece(f: Polynomial, gens, ring, modulo: Ideal | None = None) -> bool:
    """Is ``f`` in (gens) (+ ``modulo``)?  Decided in the bidegree of ``f`` by
    linear algebra on monomial coordinates."""
    t = f.bidegree()
    ech = Echelon(ring.field)
    nf = modulo.normal_form if modulo is not None else (lambda h: h)
    for g in gens:
        d = g.bidegree()
        if not d.precedes(t):
            continue
        for u in monomials_of_bidegree(t - d, ring):
            h = nf(g.mul_term(u, ring.field.one()))
            if h:
                ech.add(h.terms)
    target = nf(f)
    return not target or ech.contains(target.terms)
