"""Exact ground fields: the rationals and prime fields."""

from __future__ import annotations

import numbers
import re
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq


class Mod:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    def _lift(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError(f"mixed characteristics {self.p} and {other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, numbers.Rational):
            return int(other.numerator) * pow(int(other.denominator), -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero mod %d" % self.p)
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) / self

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


_LITERAL = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?(?:\s+mod\s+(\d+))?\s*$")


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``rationals`` (characteristic 0) or ``prime-field``."""

    kind: str = "rationals"
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == "rationals":
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        elif self.kind == "prime-field":
            if not _is_prime(self.characteristic):
                raise ValueError(f"characteristic {self.characteristic} is not prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("rationals", 0)

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls("prime-field", p)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Accepts ``q``/``Q`` or ``f:p``/``F_p``."""
        t = text.strip()
        if t.lower() in ("q", "qq", "rationals"):
            return cls.rationals()
        m = re.match(r"^(?:f:|F_|GF\()(\d+)\)?$", t)
        if m:
            return cls.prime(int(m.group(1)))
        raise ValueError(f"cannot parse field {text!r}")

    @property
    def label(self) -> str:
        return "q" if self.characteristic == 0 else f"f:{self.characteristic}"

    def __call__(self, x):
        """Coerce into the field: ``mpq`` for the rationals, ``Mod`` otherwise."""
        if self.characteristic == 0:
            if isinstance(x, Mod):
                raise ValueError("cannot coerce a residue into the rationals")
            if isinstance(x, float):
                raise TypeError("floating point scalars are not allowed")
            return mpq(x)
        if isinstance(x, Mod):
            if x.p != self.characteristic:
                raise ValueError(f"residue mod {x.p} in a field of characteristic {self.characteristic}")
            return x
        if isinstance(x, float):
            raise TypeError("floating point scalars are not allowed")
        x = Fraction(int(x.numerator), int(x.denominator)) if isinstance(x, numbers.Rational) else Fraction(x)
        if x.denominator % self.characteristic == 0:
            raise ZeroDivisionError(f"{x} has no image mod {self.characteristic}")
        return Mod(x.numerator * pow(x.denominator, -1, self.characteristic), self.characteristic)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse_scalar(self, text: str):
        """Exact literal: ``3``, ``-3/7`` or ``2 mod 5``."""
        m = _LITERAL.match(text)
        if not m:
            raise ValueError(f"not an exact scalar literal: {text!r}")
        num, den, mod = m.groups()
        value = Fraction(int(num), int(den) if den else 1)
        if mod is not None:
            if int(mod) != self.characteristic:
                raise ValueError(f"literal {text!r} is mod {mod} but the field is {self.label}")
        return self(value)

    def format(self, x) -> str:
        if isinstance(x, Mod):
            return str(x.v)
        x = mpq(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


QQ = FieldSpec.rationals()
