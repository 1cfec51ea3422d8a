"""The Hall algebra H(A) and its twisted version H_tw(A)."""

from __future__ import annotations

from typing import Callable, Hashable

from .coeff import QSqrt, quantum_binomial, quantum_factorial
from .modules import ModuleCategory, ModuleClass, vadd


class Element:
    """A finite Q(sqrt q)-linear combination of basis keys; zero terms are dropped."""

    def __init__(self, q: int, terms=None):
        self.q = q
        self.terms: dict = {}
        for k, c in (terms or {}).items():
            if not isinstance(c, QSqrt):
                c = QSqrt(c, 0, q)
            if c:
                self.terms[k] = c

    def _new(self, terms) -> Element:
        return type(self)(self.q, terms)

    def __add__(self, other: Element) -> Element:
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, QSqrt.zero(self.q)) + c
        return self._new(out)

    def __neg__(self) -> Element:
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def scale(self, c) -> Element:
        return self._new({k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.q == other.q and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {c}" for k, c in sorted(self.terms.items(), key=lambda kv: str(kv[0])))
        return f"{type(self).__name__}({{{inner}}})"


class HallElement(Element):
    """Keys are :class:`ModuleClass` ids."""

    def to_json(self, modcat: ModuleCategory | None = None) -> list[dict]:
        out = []
        for cls in sorted(self.terms):
            out.append({"coeff": self.terms[cls].to_json(), "class_id": str(cls), "dim_vector": list(cls.dims)})
        return out

    @classmethod
    def from_json(cls, data: list[dict], q: int) -> HallElement:
        return cls(q, {ModuleClass.parse(t["class_id"]): QSqrt.from_json(t["coeff"], q) for t in data})


def bilinear(x: Element, y: Element, basis_product: Callable[[Hashable, Hashable], Element]) -> Element:
    acc: dict = {}
    q = x.q
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            c = ca * cb
            for k, v in basis_product(a, b).terms.items():
                acc[k] = acc.get(k, QSqrt.zero(q)) + c * v
    return type(x)(q, acc)


class HallAlgebra:
    """Products of module classes from counted extension classes.

    [M] <> [N] = sum_L |Ext^1(M, N)_L| / |Hom(M, N)| [L]; the twisted
    product multiplies by v^<M, N>.  Basis products are memoized.
    """

    def __init__(self, modcat: ModuleCategory):
        self.modcat = modcat
        self.q = modcat.q
        self._memo: dict[tuple[ModuleClass, ModuleClass, bool], HallElement] = {}

    def unit(self) -> HallElement:
        return HallElement(self.q, {self.modcat.zero(): 1})

    def basis(self, cls: ModuleClass) -> HallElement:
        return HallElement(self.q, {cls: 1})

    def basis_product(self, a: ModuleClass, b: ModuleClass, twisted: bool = True) -> HallElement:
        key = (a, b, twisted)
        if key not in self._memo:
            self.modcat.check_bound(vadd(a.dims, b.dims))
            counts, _, hom = self.modcat.ext1_middles(a, b)
            scale = QSqrt(1, 0, self.q) / (self.q ** hom)
            if twisted:
                scale = scale * QSqrt.vpow(self.modcat.euler(a.dims, b.dims), self.q)
            self._memo[key] = HallElement(self.q, {cls: scale * c for cls, c in counts.items()})
        return self._memo[key]

    def product(self, x: HallElement, y: HallElement, twisted: bool = True) -> HallElement:
        return bilinear(x, y, lambda a, b: self.basis_product(a, b, twisted))

    def power(self, x: HallElement, t: int, twisted: bool = True) -> HallElement:
        out = self.unit()
        for _ in range(t):
            out = self.product(out, x, twisted)
        return out

    def divided_power(self, x: HallElement, t: int, twisted: bool = True) -> HallElement:
        if t < 0:
            raise ValueError("divided powers need t >= 0")
        return self.power(x, t, twisted).scale(quantum_factorial(t, self.q).inv())


def serre_exponent(modcat: ModuleCategory, i: int, j: int) -> int:
    """N = 1 - (S_i, S_j) with the symmetric Euler form."""
    n = modcat.alg.n
    si = tuple(int(k == i - 1) for k in range(n))
    sj = tuple(int(k == j - 1) for k in range(n))
    return 1 - modcat.euler(si, sj, symmetric=True)


SERRE_FORMS = ("divided", "binomial")


def serre_combination(xi: Element, xj: Element, big_n: int, product, divided_power, q: int,
                      form: str = "divided") -> Element:
    """The quantum Serre combination in X_i, X_j.

    ``divided``: sum_t (-1)^t X_i^(t) X_j X_i^(N-t), the standard relation
    (equal to sum_t (-1)^t [N t]_v X_i^t X_j X_i^(N-t) divided by [N]_v!).
    ``binomial``: sum_t (-1)^t [N t]_v X_i^(t) X_j X_i^(N-t), which puts the
    binomials on top of divided powers; kept so it can be evaluated and reported.
    """
    if form not in SERRE_FORMS:
        raise ValueError(f"unknown Serre form {form!r}")
    total = type(xi)(q)
    for t in range(big_n + 1):
        term = product(product(divided_power(xi, t), xj), divided_power(xi, big_n - t))
        coeff = QSqrt((-1) ** t, 0, q)
        if form == "binomial":
            coeff = coeff * quantum_binomial(big_n, t, q)
        total = total + term.scale(coeff)
    return total


def serre_sum(hall: HallAlgebra, i: int, j: int, form: str = "divided") -> HallElement:
    if i == j:
        raise ValueError("the Serre sum needs two different vertices")
    big_n = serre_exponent(hall.modcat, i, j)
    if big_n < 0:
        raise ValueError(f"N = 1 - (S_{i}, S_{j}) = {big_n} is negative")
    mc = hall.modcat
    return serre_combination(hall.basis(mc.simple(i)), hall.basis(mc.simple(j)), big_n,
                             hall.product, hall.divided_power, hall.q, form)
