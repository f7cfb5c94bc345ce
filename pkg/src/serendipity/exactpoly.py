"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial in n variables is stored as a mapping from exponent tuples
(length n, non-negative ints) to nonzero ``fractions.Fraction``
coefficients.  All arithmetic is exact; floats only appear on the
optional floating-point evaluation path.

Two degree notions drive everything downstream:

* total degree: the sum of the exponents of a monomial, and
* superlinear degree: the sum of only those exponents that are >= 2,
  i.e. the total degree after ignoring variables that enter linearly.

For any monomial, total degree = superlinear degree + (number of
variables with exponent exactly 1).

The canonical term order is graded lexicographic: sort by total degree
first, then lexicographically on the exponent tuple itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]

__all__ = [
    "Exponents",
    "Monomial",
    "Polynomial",
    "grlex_key",
    "superlinear_degree",
    "variables",
    "integrate_box",
    "axis_moment",
]


def grlex_key(exponents: Exponents) -> tuple[int, Exponents]:
    """Sort key for graded lexicographic order on exponent tuples."""
    return (sum(exponents), exponents)


def _validate_exponents(exponents: Sequence[int]) -> Exponents:
    exps = tuple(exponents)
    for e in exps:
        if not isinstance(e, int) or isinstance(e, bool) or e < 0:
            raise ValueError(f"exponents must be non-negative ints, got {exps!r}")
    return exps


def superlinear_degree(exponents: Union[Exponents, "Monomial"]) -> int:
    """Total degree counting only variables with exponent >= 2."""
    if isinstance(exponents, Monomial):
        exponents = exponents.exponents
    return sum(e for e in exponents if e >= 2)


@dataclass(frozen=True, order=False)
class Monomial:
    """A single power product, identified by its exponent tuple."""

    exponents: Exponents

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponents", _validate_exponents(self.exponents))

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def superlinear_degree(self) -> int:
        return superlinear_degree(self.exponents)

    @property
    def linear_count(self) -> int:
        """Number of variables appearing with exponent exactly 1."""
        return sum(1 for e in self.exponents if e == 1)

    def __lt__(self, other: "Monomial") -> bool:
        return grlex_key(self.exponents) < grlex_key(other.exponents)

    def as_polynomial(self, coeff: Scalar = 1) -> "Polynomial":
        return Polynomial(len(self.exponents), {self.exponents: Fraction(coeff)})

    def __str__(self) -> str:
        if not any(self.exponents):
            return "1"
        parts = []
        for i, e in enumerate(self.exponents):
            if e == 1:
                parts.append(f"x{i + 1}")
            elif e > 1:
                parts.append(f"x{i + 1}^{e}")
        return "*".join(parts)


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients.

    Construction canonicalizes: coefficients are coerced to Fraction and
    zero terms are dropped, so two polynomials are equal iff their term
    mappings are equal.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Mapping[Sequence[int], Scalar] = ()) -> None:
        if n < 0:
            raise ValueError("number of variables must be >= 0")
        canonical: dict[Exponents, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exponents, coeff in items:
            exps = _validate_exponents(exponents)
            if len(exps) != n:
                raise ValueError(f"exponent tuple {exps!r} does not have length {n}")
            value = Fraction(coeff)
            if value:
                value = canonical.get(exps, Fraction(0)) + value
                if value:
                    canonical[exps] = value
                else:
                    del canonical[exps]
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_terms", canonical)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, {})

    @classmethod
    def one(cls, n: int) -> "Polynomial":
        return cls.constant(n, 1)

    @classmethod
    def constant(cls, n: int, value: Scalar) -> "Polynomial":
        return cls(n, {(0,) * n: Fraction(value)})

    @classmethod
    def variable(cls, n: int, index: int) -> "Polynomial":
        if not 0 <= index < n:
            raise ValueError(f"variable index {index} out of range for n={n}")
        exps = tuple(1 if i == index else 0 for i in range(n))
        return cls(n, {exps: Fraction(1)})

    @classmethod
    def from_monomial(cls, exponents: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        exps = _validate_exponents(exponents)
        return cls(len(exps), {exps: Fraction(coeff)})

    # -- inspection --------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(Monomial(e) for e, _ in self.terms())

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def degree(self) -> int:
        """Max total degree over terms; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def superlinear_degree(self) -> int:
        """Max superlinear degree over terms; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(superlinear_degree(e) for e in self._terms)

    # -- arithmetic --------------------------------------------------

    def _require_same_n(self, other: "Polynomial") -> None:
        if self._n != other._n:
            raise ValueError(
                f"polynomials live in different variable counts: {self._n} vs {other._n}"
            )

    def __add__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._n, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._require_same_n(other)
        merged = dict(self._terms)
        for exps, coeff in other._terms.items():
            merged[exps] = merged.get(exps, Fraction(0)) + coeff
        return Polynomial(self._n, merged)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self._n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._n, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self._n)
            return Polynomial(
                self._n, {e: c * other for e, c in self._terms.items()}
            )
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._require_same_n(other)
        product: dict[Exponents, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                key = tuple(a + b for a, b in zip(ea, eb))
                product[key] = product.get(key, Fraction(0)) + ca * cb
        return Polynomial(self._n, product)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Polynomial":
        if not isinstance(power, int) or power < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.one(self._n)
        for _ in range(power):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._n, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._n, frozenset(self._terms.items())))

    def __iter__(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self.terms())

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, coeff in self.terms():
            mono = str(Monomial(exps))
            if mono == "1":
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(mono)
            elif coeff == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- evaluation --------------------------------------------------

    def evaluate(self, point: Sequence[Union[Scalar, float]]) -> Union[Fraction, float]:
        """Evaluate at a point.

        If every coordinate is an int or Fraction the result is an exact
        Fraction computed term by term.  If any coordinate is a float,
        everything is converted to float and evaluated with a nested
        Horner scheme, one variable at a time, for numerical stability.
        """
        if len(point) != self._n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self._n}")
        if any(isinstance(v, float) for v in point):
            xs = [float(v) for v in point]
            items = [(e, float(c)) for e, c in self._terms.items()]
            return _horner(items, xs, 0)
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def __call__(self, *point: Union[Scalar, float]) -> Union[Fraction, float]:
        return self.evaluate(point)

    # -- serialization -----------------------------------------------

    def to_json_obj(self) -> list[dict]:
        return [
            {"exponents": list(exps), "coeff": f"{c.numerator}/{c.denominator}"}
            for exps, c in self.terms()
        ]

    @classmethod
    def from_json_obj(cls, n: int, data: Iterable[Mapping]) -> "Polynomial":
        terms: dict[Exponents, Fraction] = {}
        for record in data:
            exps = _validate_exponents(record["exponents"])
            coeff = Fraction(record["coeff"])
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return cls(n, terms)


def _horner(items: list[tuple[Exponents, float]], xs: list[float], axis: int) -> float:
    """Evaluate a float term list by recursive grouping on one variable."""
    if not items:
        return 0.0
    if axis == len(xs):
        return sum(c for _, c in items)
    groups: dict[int, list[tuple[Exponents, float]]] = {}
    for exps, c in items:
        groups.setdefault(exps[axis], []).append((exps, c))
    x = xs[axis]
    acc = 0.0
    prev: int | None = None
    for e in sorted(groups, reverse=True):
        inner = _horner(groups[e], xs, axis + 1)
        if prev is None:
            acc = inner
        else:
            acc = acc * x ** (prev - e) + inner
        prev = e
    return acc * x**prev if prev else acc


def variables(n: int) -> tuple[Polynomial, ...]:
    """The coordinate polynomials (x1, ..., xn)."""
    return tuple(Polynomial.variable(n, i) for i in range(n))


def axis_moment(exponent: int) -> Fraction:
    """Integral of t**exponent over [-1, 1]: zero for odd powers."""
    if exponent % 2:
        return Fraction(0)
    return Fraction(2, exponent + 1)


def integrate_box(p: Polynomial, free_indices: Iterable[int]) -> Polynomial:
    """Integrate over [-1, 1] in each listed variable, exactly.

    The result is a polynomial in the remaining variables, represented
    in the same ambient variable count with zero exponents on the
    integrated axes.  Integrating over no axes returns p unchanged.
    """
    free = sorted(set(free_indices))
    for i in free:
        if not 0 <= i < p.n:
            raise ValueError(f"axis {i} out of range for n={p.n}")
    out: dict[Exponents, Fraction] = {}
    for exps, coeff in p.terms():
        weight = coeff
        for i in free:
            m = axis_moment(exps[i])
            if not m:
                weight = Fraction(0)
                break
            weight *= m
        if weight:
            key = tuple(0 if i in free else e for i, e in enumerate(exps))
            out[key] = out.get(key, Fraction(0)) + weight
    return Polynomial(p.n, out)
