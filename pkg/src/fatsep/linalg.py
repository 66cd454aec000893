"""Sparse Gaussian elimination over a :class:`~fatsep.coeff.Field`.

Vectors are dicts ``{column: nonzero raw value}``; columns are any mutually
comparable keys (ints, exponent tuples).
"""
from __future__ import annotations


class Echelon:
    """Incrementally grown row-echelon basis.

    Each stored row is monic at its pivot, which is its largest column, so
    elimination in descending column order terminates.  With ``track=True``
    every stored row remembers which inserted vectors it combines, which is
    what :func:`kernel` needs.
    """

    def __init__(self, field, track=False):
        self.field = field
        self.track = track
        self.rows = {}  # pivot column -> (row, combo)
        self.count = 0

    def __len__(self):
        return len(self.rows)

    def _reduce(self, vec, combo):
        F = self.field
        p = F.modulus
        vec = dict(vec)
        rows = self.rows
        while True:
            hits = [c for c in vec if c in rows]
            if not hits:
                return vec, combo
            c = max(hits)
            a = vec[c]
            row, rcombo = rows[c]
            for col, v in row.items():
                w = vec.get(col, 0) - a * v
                if p:
                    w %= p
                if w:
                    vec[col] = w
                else:
                    vec.pop(col, None)
            if combo is not None:
                for k, v in rcombo.items():
                    w = combo.get(k, 0) - a * v
                    if p:
                        w %= p
                    if w:
                        combo[k] = w
                    else:
                        combo.pop(k, None)

    def reduce(self, vec):
        return self._reduce(vec, None)[0]

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def add(self, vec):
        """Insert ``vec``.  Returns ``None`` if it was independent, else the
        dependence (a dict ``{insert index: coeff}`` summing to zero) when
        tracking, or ``{}`` when not."""
        F = self.field
        idx = self.count
        self.count += 1
        combo = {idx: F.one()} if self.track else None
        vec, combo = self._reduce(vec, combo)
        if not vec:
            return combo if self.track else {}
        c = max(vec)
        s = F.inv(vec[c])
        vec = {k: F.mul(v, s) for k, v in vec.items()}
        if combo is not None:
            combo = {k: F.mul(v, s) for k, v in combo.items()}
        self.rows[c] = (vec, combo)
        return None


def rank(vectors, field) -> int:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return len(ech)


def kernel(vectors, field):
    """A basis of ``{c : sum c_i vectors[i] = 0}`` as dicts ``{i: c_i}``."""
    ech = Echelon(field, track=True)
    out = []
    for v in vectors:
        dep = ech.add(v)
        if dep is not None:
            out.append(dep)
    return out


def in_span(target, vectors, field) -> bool:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return ech.contains(target)
