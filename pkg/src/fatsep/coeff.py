"""Exact coefficient fields: the rationals and prime fields F_p.

Polynomial code works on *raw* canonical values (``int`` residues in
``[0, p)`` for F_p, ``fractions.Fraction`` for Q) and calls the field's
methods only where the two kinds differ.  :class:`FieldElement` is the
boxed, user-facing value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2

DEFAULT_PRIME = 32003


class FieldMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """A coefficient field.  ``modulus == 0`` means Q."""

    modulus: int = 0

    def __post_init__(self):
        p = self.modulus
        if p != 0 and (p < 2 or not gmpy2.is_prime(p)):
            raise ValueError(f"modulus {p} is not a prime")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "Field":
        return cls(int(p))

    @property
    def kind(self) -> str:
        return "PrimeField" if self.modulus else "Rationals"

    @property
    def characteristic(self) -> int:
        return self.modulus

    def __str__(self):
        return f"GF({self.modulus})" if self.modulus else "QQ"

    # raw-value arithmetic -------------------------------------------------

    def __call__(self, value) -> int | Fraction:
        """Canonical raw value of an int, Fraction or ``"a/b"`` string."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        p = self.modulus
        if isinstance(value, Fraction):
            if not p:
                return value
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element used in {self}")
            return value.value
        value = int(value)
        return value % p if p else Fraction(value)

    def zero(self):
        return 0 if self.modulus else Fraction(0)

    def one(self):
        return 1 if self.modulus else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.modulus if self.modulus else a + b

    def sub(self, a, b):
        return (a - b) % self.modulus if self.modulus else a - b

    def neg(self, a):
        return -a % self.modulus if self.modulus else -a

    def mul(self, a, b):
        return a * b % self.modulus if self.modulus else a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.modulus) if self.modulus else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_str(self, a) -> str:
        return str(a)

    def element(self, value) -> "FieldElement":
        return FieldElement(self, self(value))


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int | Fraction

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field} and {other.field}")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return str(self.value)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two elements of one field."""
    if a.field != b.field:
        raise FieldMismatch(f"cannot combine {a.field} and {b.field}")
    try:
        fn = {"add": a.field.add, "sub": a.field.sub,
              "mul": a.field.mul, "div": a.field.div}[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None
    return FieldElement(a.field, fn(a.value, b.value))
