"""The bigraded ring k[x_0..x_n, y_0..y_m] with deg x_i = (1,0), deg y_j = (0,1).

Monomials are plain exponent tuples ``(x_0, .., x_n, y_0, .., y_m)``.  A ring
built with ``aux=True`` carries one extra variable ``t`` in the last slot,
of bidegree (0,0), ordered by a block elimination order; it exists only so
intersections can be computed by eliminating ``t``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from operator import add
from typing import NamedTuple

from .coeff import DEFAULT_PRIME, Field
from .linalg import rank


class RingMismatch(ValueError):
    pass


class Bidegree(NamedTuple):
    d1: int
    d2: int

    def __add__(self, other):
        return Bidegree(self[0] + other[0], self[1] + other[1])

    def __sub__(self, other):
        return Bidegree(self[0] - other[0], self[1] - other[1])

    def precedes(self, other) -> bool:
        """The componentwise partial order: ``self ⪯ other``."""
        return self[0] <= other[0] and self[1] <= other[1]

    def __str__(self):
        return f"({self[0]},{self[1]})"


@lru_cache(maxsize=None)
def _rkey_for(nx: int, aux: bool):
    # Variables rank x_n > .. > x_0 > y_m > .. > y_0, so grevlex looks at
    # y_0 first.  A smaller key means a larger monomial.
    if aux:
        @lru_cache(maxsize=None)
        def key(e):
            return (-e[-1], e[-1] - sum(e), e[nx:-1] + e[:nx])
    else:
        @lru_cache(maxsize=None)
        def key(e):
            return (-sum(e), e[nx:] + e[:nx])
    return key


@dataclass(frozen=True)
class RingSpec:
    n: int
    m: int
    field: Field = Field(DEFAULT_PRIME)
    aux: bool = False

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")

    @property
    def nvars(self) -> int:
        return self.n + self.m + 2 + (1 if self.aux else 0)

    @property
    def names(self) -> list[str]:
        names = [f"x{i}" for i in range(self.n + 1)] + [f"y{j}" for j in range(self.m + 1)]
        return names + ["t"] if self.aux else names

    @property
    def rkey(self):
        """Sort key under which *larger* monomials come *first*."""
        return _rkey_for(self.n + 1, self.aux)

    @property
    def order(self) -> str:
        return "BlockEliminationFirstVar" if self.aux else "GrevlexGlobal"

    def with_aux(self) -> "RingSpec":
        return RingSpec(self.n, self.m, self.field, aux=True)

    def base(self) -> "RingSpec":
        return RingSpec(self.n, self.m, self.field)

    def with_field(self, field: Field) -> "RingSpec":
        return RingSpec(self.n, self.m, field, self.aux)

    def exp_bidegree(self, e) -> Bidegree:
        k = self.n + 1
        return Bidegree(sum(e[:k]), sum(e[k:k + self.m + 1]))

    # constructors -------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def var(self, name: str) -> "Polynomial":
        idx = self.names.index(name)
        e = [0] * self.nvars
        e[idx] = 1
        return Polynomial(self, {tuple(e): self.field.one()})

    def x(self, i: int) -> "Polynomial":
        return self.var(f"x{i}")

    def y(self, j: int) -> "Polynomial":
        return self.var(f"y{j}")

    def monomial(self, e, c=1) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {tuple(e): c} if c else {})

    def linear_form(self, coeffs, block: str = "x") -> "Polynomial":
        """``sum c_i x_i`` (or ``y_i`` with ``block="y"``)."""
        off = 0 if block == "x" else self.n + 1
        terms = {}
        for i, c in enumerate(coeffs):
            c = self.field(c)
            if c:
                e = [0] * self.nvars
                e[off + i] = 1
                terms[tuple(e)] = c
        return Polynomial(self, terms)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()


class Polynomial:
    """Sparse polynomial; ``terms`` maps exponent tuples to nonzero raw
    coefficients.  Treat instances as immutable."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: RingSpec, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    # structure ------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def lm(self):
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lm = min(self.terms, key=self.ring.rkey)
        return self._lm

    def lc(self):
        return self.terms[self.lm()]

    def sorted_terms(self):
        """``(coeff, exponent)`` pairs, leading term first."""
        rk = self.ring.rkey
        return [(self.terms[e], e) for e in sorted(self.terms, key=rk)]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc()))

    def bidegree(self):
        """The common bidegree of all terms, or ``None`` if there is none."""
        if not self.terms:
            raise ValueError("the zero polynomial has no bidegree")
        bd = self.ring.exp_bidegree
        degs = {bd(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_bihomogeneous(self) -> bool:
        return not self.terms or self.bidegree() is not None

    def bihomogeneous_components(self) -> dict:
        bd = self.ring.exp_bidegree
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(bd(e), {})[e] = c
        return {d: Polynomial(self.ring, t) for d, t in parts.items()}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def evaluate(self, values):
        """Value at a point given by raw field values, one per variable."""
        F = self.ring.field
        total = F.zero()
        for e, c in self.terms.items():
            v = c
            for a, k in zip(values, e):
                if k:
                    v = F.mul(v, pow(a, k, F.modulus) if F.modulus else a ** k)
            total = F.add(total, v)
        return total

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Polynomial):
            return self.ring.const(other)
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def _combine(self, other, sign):
        other = self._check(other)
        p = self.ring.field.modulus
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + sign * c
            if p:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    __radd__ = __add__

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        F = self.ring.field
        return Polynomial(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def scale(self, c) -> "Polynomial":
        F = self.ring.field
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: F.mul(v, c) for e, v in self.terms.items()})

    def mul_term(self, e, c) -> "Polynomial":
        F = self.ring.field
        return Polynomial(self.ring, {tuple(map(add, k, e)): F.mul(v, c)
                                      for k, v in self.terms.items()})

    def __mul__(self, other):
        other = self._check(other)
        p = self.ring.field.modulus
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e, 0) + c1 * c2
                if p:
                    v %= p
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_poly(self)


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown polynomial operation {op!r}")


def bidegree_of(f: Polynomial):
    return f.bidegree()


# monomial enumeration ---------------------------------------------------------

def dim_bigraded_piece(t, ring: RingSpec) -> int:
    if t[0] < 0 or t[1] < 0:
        return 0
    return comb(t[0] + ring.n, ring.n) * comb(t[1] + ring.m, ring.m)


@lru_cache(maxsize=None)
def _block_exps(nv: int, d: int):
    out = []
    for combo in combinations_with_replacement(range(nv), d):
        e = [0] * nv
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def monomials_of_bidegree(t, ring: RingSpec) -> list:
    """Exponent tuples of bidegree ``t``, largest first."""
    if t[0] < 0 or t[1] < 0:
        return []
    tail = (0,) if ring.aux else ()
    mons = [a + b + tail for a in _block_exps(ring.n + 1, t[0])
            for b in _block_exps(ring.m + 1, t[1])]
    mons.sort(key=ring.rkey)
    return mons


# coordinate changes -----------------------------------------------------------

def _as_matrix(A, size, field):
    M = [[field(v) for v in row] for row in A]
    if len(M) != size or any(len(r) != size for r in M):
        raise ValueError(f"expected a {size}x{size} matrix")
    if rank([{j: v for j, v in enumerate(r) if v} for r in M], field) < size:
        raise ValueError("matrix is singular")
    return M


def apply_linear_change(f: Polynomial, A, B) -> Polynomial:
    """Substitute ``x_i -> sum_j A[i][j] x_j`` and ``y_i -> sum_j B[i][j] y_j``."""
    ring = f.ring
    A = _as_matrix(A, ring.n + 1, ring.field)
    B = _as_matrix(B, ring.m + 1, ring.field)
    images = [ring.linear_form(r, "x") for r in A] + [ring.linear_form(r, "y") for r in B]
    if ring.aux:
        images.append(ring.var("t"))
    powers = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] ** k
        return powers[key]

    out = ring.zero()
    for e, c in f.terms.items():
        term = ring.const(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


# text format ------------------------------------------------------------------

def _coeff_str(c, field):
    p = field.modulus
    if p and c > p // 2:
        c = c - p
    return str(c)


def format_monomial(e, ring: RingSpec) -> str:
    parts = []
    for name, k in zip(ring.names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts) if parts else "1"


def format_poly(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    out = []
    for c, e in f.sorted_terms():
        s = _coeff_str(c, f.ring.field)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = format_monomial(e, f.ring)
        if mono == "1":
            body = s
        elif s == "1":
            body = mono
        else:
            body = f"{s}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([a-z]\d*)|(.))")


class _Parser:
    def __init__(self, ring, text):
        self.ring = ring
        self.toks = []
        for num, name, sym in _TOKEN.findall(text):
            if num:
                self.toks.append(("num", num))
            elif name:
                if name not in ring.names:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                self.toks.append(("var", name))
            elif sym.strip():
                self.toks.append(("sym", sym))
        self.pos = 0
        self.text = text

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        f = self.expr()
        if self.pos != len(self.toks):
            raise ValueError(f"trailing input in {self.text!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("sym", "*"):
                self.take()
                f = f * self.factor()
            elif kind in ("num", "var") or (kind, val) == ("sym", "("):
                f = f * self.factor()
            else:
                return f

    def factor(self):
        kind, val = self.take()
        if (kind, val) == ("sym", "-"):
            return -self.factor()
        if kind == "num":
            base = self.ring.const(val)
        elif kind == "var":
            base = self.ring.var(val)
        elif (kind, val) == ("sym", "("):
            base = self.expr()
            if self.take() != ("sym", ")"):
                raise ValueError(f"unbalanced parenthesis in {self.text!r}")
        else:
            raise ValueError(f"unexpected {val!r} in {self.text!r}")
        if self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or "/" in val:
                raise ValueError(f"bad exponent in {self.text!r}")
            base = base ** int(val)
        return base
