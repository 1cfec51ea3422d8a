from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hallbridge.coeff import QSqrt, qsqrt_arith, quantum_binomial, quantum_factorial, quantum_integer, vpow

primes = st.sampled_from([2, 3, 5, 7])
rats = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


@st.composite
def elements(draw, q=None):
    q = q or draw(primes)
    return QSqrt(draw(rats), draw(rats), q)


@st.composite
def triples(draw):
    q = draw(primes)
    return draw(elements(q)), draw(elements(q)), draw(elements(q))


def test_vpow_small_values():
    assert vpow(0, 2) == 1
    assert vpow(2, 2) == 2
    assert vpow(-2, 3) == Fraction(1, 3)
    assert vpow(1, 2) == QSqrt(0, 1, 2)
    assert vpow(-1, 2) == QSqrt(0, Fraction(1, 2), 2)


def test_quantum_numbers_at_q2():
    # [2] = v + v^-1 = sqrt2 + 1/sqrt2 = (3/2) sqrt2
    assert quantum_integer(2, 2) == QSqrt(0, Fraction(3, 2), 2)
    assert quantum_integer(1, 2) == 1
    assert quantum_integer(0, 2) == 0
    assert quantum_binomial(2, 1, 2) == quantum_integer(2, 2)
    # [3] = v^2 + 1 + v^-2 = 7/2
    assert quantum_integer(3, 2) == Fraction(7, 2)
    assert quantum_factorial(3, 2) == quantum_integer(2, 2) * Fraction(7, 2)


def test_rendering_and_json():
    x = QSqrt(Fraction(1, 2), Fraction(-3, 4), 3)
    assert str(x) == "1/2 + -3/4*sqrt(3)"
    assert x.to_json() == {"a": "1/2", "b": "-3/4"}
    assert QSqrt.from_json(x.to_json(), 3) == x


def test_errors():
    with pytest.raises(ValueError):
        QSqrt(1, 0, 4)
    with pytest.raises(ZeroDivisionError):
        QSqrt.zero(2).inv()
    with pytest.raises(ValueError):
        QSqrt(1, 0, 2) + QSqrt(1, 0, 3)
    with pytest.raises(ValueError):
        quantum_binomial(2, 3, 2)
    with pytest.raises(ValueError):
        qsqrt_arith("pow", QSqrt.one(2))


def test_arith_dispatch():
    x, y = QSqrt(1, 1, 5), QSqrt(2, 0, 5)
    assert qsqrt_arith("add", x, y) == QSqrt(3, 1, 5)
    assert qsqrt_arith("mul", x, y) == QSqrt(2, 2, 5)
    assert qsqrt_arith("neg", x) == -x
    assert qsqrt_arith("inv", x) * x == 1
    assert qsqrt_arith("vpow", x, k=3) == QSqrt(0, 5, 5)


@given(triples())
def test_field_axioms(t):
    x, y, z = t
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0
    if x:
        assert x * x.inv() == 1


@given(primes, st.integers(-12, 12), st.integers(-12, 12))
def test_vpow_is_a_homomorphism(q, j, k):
    assert vpow(j, q) * vpow(k, q) == vpow(j + k, q)
    assert vpow(2, q) == q


@given(primes, st.integers(1, 8))
def test_quantum_integer_closed_form(q, s):
    v = vpow(1, q)
    assert quantum_integer(s, q) * (v - v.inv()) == vpow(s, q) - vpow(-s, q)


@given(primes, st.integers(1, 8), st.data())
def test_quantum_pascal(q, n, data):
    t = data.draw(st.integers(1, n - 1)) if n > 1 else None
    if t is None:
        return
    lhs = quantum_binomial(n, t, q)
    rhs = vpow(-t, q) * quantum_binomial(n - 1, t, q) + vpow(n - t, q) * quantum_binomial(n - 1, t - 1, q)
    assert lhs == rhs
    assert quantum_binomial(n, t, q) == quantum_binomial(n, n - t, q)
