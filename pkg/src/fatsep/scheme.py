"""Fat point schemes Z = m_1 P_1 + ... + m_s P_s in P^n x P^m.

Point indices in this module's public functions are 1-based, so that
``i`` refers to the point written ``P_i``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

import yaml

from .biring import RingSpec, monomials_of_bidegree
from .coeff import DEFAULT_PRIME, Field
from .gbasis import Ideal, ideal_intersection, ideal_power
from .linalg import Echelon


def _normalize(coords, field):
    vals = [field(c) for c in coords]
    for v in vals:
        if v:
            inv = field.inv(v)
            return tuple(field.mul(w, inv) for w in vals)
    raise ValueError("a projective point needs a nonzero coordinate")


@dataclass(frozen=True)
class PPoint:
    """[a_0 : .. : a_n] x [b_0 : .. : b_m], stored with the first nonzero
    coordinate of each factor equal to 1."""

    a: tuple
    b: tuple

    @classmethod
    def make(cls, ring: RingSpec, a, b) -> "PPoint":
        if len(a) != ring.n + 1 or len(b) != ring.m + 1:
            raise ValueError(f"point needs {ring.n + 1} x- and {ring.m + 1} y-coordinates")
        return cls(_normalize(a, ring.field), _normalize(b, ring.field))

    @property
    def coords(self) -> tuple:
        return self.a + self.b

    def __str__(self):
        return f"[{':'.join(map(str, self.a))}]x[{':'.join(map(str, self.b))}]"


@dataclass(frozen=True)
class FatPointScheme:
    ring: RingSpec
    items: tuple  # ((PPoint, multiplicity), ...)

    def __post_init__(self):
        seen = set()
        for P, mult in self.items:
            if not isinstance(mult, int) or mult < 1:
                raise ValueError(f"multiplicity must be a positive integer, got {mult!r}")
            if P in seen:
                raise ValueError(f"point {P} appears twice")
            seen.add(P)

    @classmethod
    def from_data(cls, ring: RingSpec, data) -> "FatPointScheme":
        """``data`` is a sequence of ``(x coords, y coords, multiplicity)``."""
        return cls(ring, tuple((PPoint.make(ring, a, b), int(k)) for a, b, k in data))

    @property
    def points(self):
        return [P for P, _ in self.items]

    @property
    def mults(self):
        return [k for _, k in self.items]

    def __len__(self):
        return len(self.items)

    def point(self, i: int) -> PPoint:
        return self.items[check_index(self, i) - 1][0]

    def mult(self, i: int) -> int:
        return self.items[check_index(self, i) - 1][1]

    def with_ring(self, ring: RingSpec) -> "FatPointScheme":
        """Re-read the coordinates over another field of the same shape."""
        return FatPointScheme(ring, tuple(
            (PPoint.make(ring, [_lift(c, self.ring.field) for c in P.a],
                         [_lift(c, self.ring.field) for c in P.b]), k)
            for P, k in self.items))

    def __str__(self):
        return " + ".join(f"{k}*{P}" for P, k in self.items) or "0"


def _lift(c, field):
    return c if isinstance(c, Fraction) or not field.modulus else int(c)


def check_index(Z: FatPointScheme, i: int) -> int:
    if not isinstance(i, int) or not 1 <= i <= len(Z.items):
        raise IndexError(f"point index {i} outside 1..{len(Z.items)}")
    return i


def point_ideal(P: PPoint, ring: RingSpec) -> Ideal:
    """The linear ideal of P: a_k x_j - a_j x_k for a pivot a_k != 0, same for y."""
    F = ring.field
    gens = []
    for coords, block, off in ((P.a, "x", 0), (P.b, "y", ring.n + 1)):
        k = next(j for j, v in enumerate(coords) if v)
        for j, aj in enumerate(coords):
            if j == k:
                continue
            row = [F.zero()] * len(coords)
            row[j] = coords[k]
            row[k] = F.neg(aj)
            gens.append(ring.linear_form(row, block))
    return Ideal(ring, gens, gb=sorted((g.monic() for g in gens),
                                       key=lambda g: ring.rkey(g.lm())))


@lru_cache(maxsize=256)
def point_power_ideal(P: PPoint, ring: RingSpec, k: int) -> Ideal:
    if k == 0:
        return Ideal.unit(ring)
    I = point_ideal(P, ring)
    return I if k == 1 else ideal_power(I, k)


@lru_cache(maxsize=256)
def scheme_ideal(Z: FatPointScheme) -> Ideal:
    """I_Z = I_{P_1}^{m_1} ∩ .. ∩ I_{P_s}^{m_s}; the unit ideal if Z is empty."""
    I = None
    for P, k in Z.items:
        J = point_power_ideal(P, Z.ring, k)
        I = J if I is None else ideal_intersection(I, J)
    if I is None:
        return Ideal.unit(Z.ring)
    I.groebner()
    return I


def reduce_multiplicity(Z: FatPointScheme, i: int) -> FatPointScheme:
    """Z' : lower m_i by one, dropping P_i once it reaches zero."""
    check_index(Z, i)
    items = []
    for j, (P, k) in enumerate(Z.items, start=1):
        if j == i:
            k -= 1
        if k:
            items.append((P, k))
    return FatPointScheme(Z.ring, tuple(items))


def scheme_degree(Z: FatPointScheme) -> int:
    N = Z.ring.n + Z.ring.m
    return sum(comb(k + N - 1, k - 1) for k in Z.mults)


def _falling(e, a):
    out = 1
    for j in range(a):
        out *= e - j
    return out


def ideal_piece_dim_oracle(Z: FatPointScheme, t) -> int:
    """dim_k (I_Z)_t without Groebner bases: the number of forms of bidegree
    t all of whose partial derivatives of order < m_i vanish at each P_i."""
    ring = Z.ring
    F = ring.field
    p = F.modulus
    if Z.items and p and p <= max(Z.mults):
        raise ValueError(f"characteristic {p} too small for multiplicity {max(Z.mults)}")
    mons = monomials_of_bidegree(t, ring)
    nv = ring.nvars
    ech = Echelon(F)
    for P, k in Z.items:
        vals = P.coords
        for order in range(k):
            for combo in combinations_with_replacement(range(nv), order):
                alpha = [0] * nv
                for v in combo:
                    alpha[v] += 1
                row = {}
                for col, e in enumerate(mons):
                    c = 1
                    for ev, av, x in zip(e, alpha, vals):
                        if av > ev:
                            c = 0
                            break
                        if av:
                            c *= _falling(ev, av)
                        if ev - av:
                            c *= x ** (ev - av)
                    c = F(c) if not isinstance(c, Fraction) else c
                    if p:
                        c %= p
                    if c:
                        row[col] = c
                if row:
                    ech.add(row)
                if len(ech) == len(mons):
                    return 0
    return len(mons) - len(ech)


def random_point(ring: RingSpec, rng: random.Random, bound=None) -> PPoint:
    """A point in the affine chart x_0 = y_0 = 1 with uniform coordinates."""
    hi = (ring.field.modulus or 10**6) - 1 if bound is None else bound
    a = [1] + [rng.randint(0, hi) for _ in range(ring.n)]
    b = [1] + [rng.randint(0, hi) for _ in range(ring.m)]
    return PPoint.make(ring, a, b)


def random_scheme(ring: RingSpec, mults, rng: random.Random) -> FatPointScheme:
    items, seen = [], set()
    for k in mults:
        P = random_point(ring, rng)
        while P in seen:  # collisions are rejected, not ignored
            P = random_point(ring, rng)
        seen.add(P)
        items.append((P, k))
    return FatPointScheme(ring, tuple(items))


# scheme files -------------------------------------------------------------------

class SchemeFormatError(ValueError):
    pass


def _fail(node, msg):
    mark = getattr(node, "start_mark", None)
    where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
    raise SchemeFormatError(where + msg)


def _mapping(node, what):
    if not isinstance(node, yaml.MappingNode):
        _fail(node, f"{what} must be a mapping")
    out = {}
    for k, v in node.value:
        out[k.value] = v
    return out


def _integer(node, what):
    if not isinstance(node, yaml.ScalarNode):
        _fail(node, f"{what} must be an integer")
    try:
        return int(node.value)
    except ValueError:
        _fail(node, f"{what} must be an integer, got {node.value!r}")


def _number(node, what):
    if not isinstance(node, yaml.ScalarNode):
        _fail(node, f"{what} must be a number")
    try:
        return Fraction(node.value.strip())
    except (ValueError, ZeroDivisionError):
        _fail(node, f"{what} must be an integer or a fraction a/b, got {node.value!r}")


def parse_scheme_text(text: str, field: Field | None = None) -> FatPointScheme:
    """Read a scheme document (YAML or JSON).

    Keys: ``ring: {n, m}``, ``field: rational`` or ``field: {prime: p}``
    (default prime 32003) and ``points: [{x: [...], y: [...], mult: k}]``.
    A ``field`` argument overrides the one in the document.
    """
    override = field
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        raise SchemeFormatError(str(exc)) from None
    if root is None:
        raise SchemeFormatError("empty scheme document")
    top = _mapping(root, "scheme document")
    for key in top:
        if key not in ("ring", "field", "points"):
            _fail(root, f"unknown key {key!r}")
    if "ring" not in top or "points" not in top:
        _fail(root, "scheme document needs 'ring' and 'points'")
    rnode = _mapping(top["ring"], "ring")
    if set(rnode) != {"n", "m"}:
        _fail(top["ring"], "ring needs exactly the keys n and m")
    n, m = _integer(rnode["n"], "n"), _integer(rnode["m"], "m")
    if n < 1 or m < 1:
        _fail(top["ring"], "ring needs n >= 1 and m >= 1")
    field = Field(DEFAULT_PRIME)
    if "field" in top:
        fnode = top["field"]
        if isinstance(fnode, yaml.ScalarNode) and fnode.value == "rational":
            field = Field.rationals()
        elif isinstance(fnode, yaml.MappingNode):
            fmap = _mapping(fnode, "field")
            if set(fmap) == {"rational"}:
                field = Field.rationals()
            elif set(fmap) == {"prime"}:
                p = _integer(fmap["prime"], "prime")
                try:
                    field = Field.prime(p)
                except ValueError as exc:
                    _fail(fmap["prime"], str(exc))
            else:
                _fail(fnode, "field must be 'rational' or {prime: p}")
        else:
            _fail(fnode, "field must be 'rational' or {prime: p}")
    if override is not None:
        field = override
    ring = RingSpec(n, m, field)
    pnode = top["points"]
    if not isinstance(pnode, yaml.SequenceNode):
        _fail(pnode, "points must be a list")
    if not pnode.value:
        _fail(pnode, "a scheme needs at least one point")
    items, seen = [], {}
    for node in pnode.value:
        pm = _mapping(node, "point")
        if set(pm) != {"x", "y", "mult"}:
            _fail(node, "a point needs exactly the keys x, y and mult")
        coords = []
        for key, size in (("x", n + 1), ("y", m + 1)):
            cn = pm[key]
            if not isinstance(cn, yaml.SequenceNode) or len(cn.value) != size:
                _fail(cn, f"{key} must be a list of {size} numbers")
            coords.append([_number(v, key) for v in cn.value])
        mult = _integer(pm["mult"], "mult")
        if mult < 1:
            _fail(pm["mult"], f"mult must be positive, got {mult}")
        try:
            P = PPoint.make(ring, *coords)
        except (ValueError, ZeroDivisionError) as exc:
            _fail(node, str(exc))
        if P in seen:
            _fail(node, f"point {P} repeats the point at line {seen[P]}")
        seen[P] = node.start_mark.line + 1
        items.append((P, mult))
    return FatPointScheme(ring, tuple(items))


def load_scheme(path, field: Field | None = None) -> FatPointScheme:
    with open(path, encoding="utf-8") as fh:
        return parse_scheme_text(fh.read(), field)


def scheme_to_dict(Z: FatPointScheme) -> dict:
    F = Z.ring.field
    num = lambda c: str(c) if isinstance(c, Fraction) and c.denominator != 1 else int(c)
    return {
        "ring": {"n": Z.ring.n, "m": Z.ring.m},
        "field": {"prime": F.modulus} if F.modulus else "rational",
        "points": [{"x": [num(c) for c in P.a], "y": [num(c) for c in P.b], "mult": k}
                   for P, k in Z.items],
    }
