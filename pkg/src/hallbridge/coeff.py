"""Exact arithmetic in Q(sqrt(q)) with v = sqrt(q), plus quantum integers.

Every coefficient in the Hall and Bridgeland algebras lives here.  An element
is stored as a pair of rationals ``(a, b)`` meaning ``a + b*sqrt(q)``; since q
is prime, sqrt(q) is irrational and the pair is unique.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

PRIMES = (2, 3, 5, 7)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class QSqrt:
    """An element ``a + b*sqrt(q)`` of Q(sqrt(q)); immutable."""

    __slots__ = ("a", "b", "q")

    def __init__(self, a=0, b=0, q: int = 2):
        if q not in PRIMES:
            raise ValueError(f"q must be one of {PRIMES}, got {q}")
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QSqrt is immutable")

    @classmethod
    def one(cls, q: int) -> QSqrt:
        return cls(1, 0, q)

    @classmethod
    def zero(cls, q: int) -> QSqrt:
        return cls(0, 0, q)

    @classmethod
    def vpow(cls, k: int, q: int) -> QSqrt:
        """v**k = q**(k/2), exact for any integer k."""
        if k >= 0:
            if k % 2 == 0:
                return cls(q ** (k // 2), 0, q)
            return cls(0, q ** ((k - 1) // 2), q)
        # v^-k = v^k / q^k
        pos = cls.vpow(-k, q)
        scale = Fraction(1, q ** (-k))
        return cls(pos.a * scale, pos.b * scale, q)

    def _coerce(self, other) -> QSqrt:
        if isinstance(other, QSqrt):
            if other.q != self.q:
                raise ValueError(f"mixing q={self.q} and q={other.q}")
            return other
        if isinstance(other, (int, Fraction)):
            return QSqrt(other, 0, self.q)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QSqrt(self.a + other.a, self.b + other.b, self.q)

    __radd__ = __add__

    def __neg__(self) -> QSqrt:
        return QSqrt(-self.a, -self.b, self.q)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QSqrt(self.a - other.a, self.b - other.b, self.q)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a = self.a * other.a + self.q * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return QSqrt(a, b, self.q)

    __rmul__ = __mul__

    def inv(self) -> QSqrt:
        norm = self.a * self.a - self.q * self.b * self.b
        if norm == 0:
            # norm vanishes only at zero because sqrt(q) is irrational
            raise ZeroDivisionError("division by zero")
        return QSqrt(self.a / norm, -self.b / norm, self.q)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, k: int) -> QSqrt:
        if k < 0:
            return self.inv() ** (-k)
        out = QSqrt.one(self.q)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_zero(self) -> bool:
        return not self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QSqrt):
            return NotImplemented
        return (self.a, self.b, self.q) == (other.a, other.b, other.q)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.q))

    def __repr__(self) -> str:
        return f"QSqrt({self.a}, {self.b}, q={self.q})"

    def __str__(self) -> str:
        return f"{_ratstr(self.a)} + {_ratstr(self.b)}*sqrt({self.q})"

    def to_json(self) -> dict:
        return {"a": _ratstr(self.a), "b": _ratstr(self.b)}

    @classmethod
    def from_json(cls, obj: dict, q: int) -> QSqrt:
        return cls(Fraction(obj["a"]), Fraction(obj["b"]), q)


def _ratstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def vpow(k: int, q: int) -> QSqrt:
    return QSqrt.vpow(k, q)


@lru_cache(maxsize=None)
def quantum_integer(s: int, q: int) -> QSqrt:
    """[s]_v = (v^s - v^-s) / (v - v^-1)."""
    if s < 0:
        return -quantum_integer(-s, q)
    total = QSqrt.zero(q)
    for k in range(s - 1, -s, -2):
        total = total + QSqrt.vpow(k, q)
    return total


@lru_cache(maxsize=None)
def quantum_factorial(n: int, q: int) -> QSqrt:
    if n < 0:
        raise ValueError("quantum factorial of a negative integer")
    out = QSqrt.one(q)
    for s in range(1, n + 1):
        out = out * quantum_integer(s, q)
    return out


@lru_cache(maxsize=None)
def quantum_binomial(n: int, t: int, q: int) -> QSqrt:
    if not 0 <= t <= n:
        raise ValueError(f"quantum binomial needs 0 <= t <= N, got N={n}, t={t}")
    return quantum_factorial(n, q) / (quantum_factorial(t, q) * quantum_factorial(n - t, q))


def qsqrt_arith(op: str, x: QSqrt, y: QSqrt | None = None, k: int | None = None) -> QSqrt:
    """Single entry point for the field operations, keyed by name."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inv()
    if op == "vpow":
        return QSqrt.vpow(k, x.q)
    raise ValueError(f"unknown operation {op!r}")
