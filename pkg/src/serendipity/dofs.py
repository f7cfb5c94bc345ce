"""Degrees of freedom, exact rational linear algebra, unisolvence.

A degree of freedom is a face together with a polynomial weight: the
functional maps u to the integral of u times the weight over the face
(point evaluation at vertices, which carry the counting measure).

For the serendipity family the weights on a d-face span the total
degree family of degree r - 2d in the face's free variables; for the
tensor-product family, vertices carry evaluations and positive
dimensional faces carry weights of degree at most r - 2 in each free
variable.  DOFs are ordered by face dimension, then by the canonical
face order, then by graded lex on the weight monomial.

Rank and determinant computations use fraction-free Bareiss elimination
on denominator-cleared integer rows, so every intermediate value is an
exact integer minor.  Linear solves use Gauss-Jordan elimination over
Fraction.  No floating point enters any decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence, Union

from .cubegeom import Face, enumerate_faces, face_moment
from .exactpoly import Monomial, Polynomial
from .spaces import (
    SpaceBasis,
    basis_Q,
    basis_S,
    dim_P,
    monomials_max_degree_at_most,
    monomials_total_degree_at_most,
)

__all__ = [
    "SingularMatrixError",
    "RationalMatrix",
    "DofFunctional",
    "dofs_S",
    "dofs_Q",
    "apply_dof",
    "dof_matrix",
    "UnisolvenceResult",
    "check_unisolvence",
    "nodal_basis",
    "LayoutRow",
    "LayoutReport",
    "dof_layout",
]


class SingularMatrixError(ArithmeticError):
    """Raised when an exact solve meets a rank-deficient matrix."""


class RationalMatrix:
    """Dense immutable matrix of Fractions with exact algorithms."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, entries: Sequence[Sequence[Union[int, Fraction]]]) -> None:
        rows = tuple(tuple(Fraction(v) for v in row) for row in entries)
        if rows:
            width = len(rows[0])
            if any(len(row) != width for row in rows):
                raise ValueError("rows have unequal lengths")
        else:
            width = 0
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def identity(cls, k: int) -> "RationalMatrix":
        return cls([[Fraction(int(i == j)) for j in range(k)] for i in range(k)])

    def entry(self, i: int, j: int) -> Fraction:
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [[self._rows[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        cols = other.transpose()._rows
        return RationalMatrix(
            [
                [sum(a * b for a, b in zip(row, col)) for col in cols]
                for row in self._rows
            ]
        )

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols})"

    # -- fraction-free elimination ------------------------------------

    def _cleared_integer_rows(self) -> tuple[list[list[int]], int]:
        """Scale each row to integers; return rows and the product of scales.

        Row scaling changes the determinant by the scale product and the
        rank not at all.
        """
        rows: list[list[int]] = []
        scale = 1
        for row in self._rows:
            mult = 1
            for v in row:
                mult = lcm(mult, v.denominator)
            rows.append([int(v * mult) for v in row])
            scale *= mult
        return rows, scale

    def rank(self) -> int:
        """Exact rank via fraction-free Bareiss with column skipping."""
        m, _ = self._cleared_integer_rows()
        nrows, ncols = self.rows, self.cols
        r = 0
        prev = 1
        for c in range(ncols):
            if r == nrows:
                break
            piv = next((i for i in range(r, nrows) if m[i][c]), None)
            if piv is None:
                continue
            if piv != r:
                m[r], m[piv] = m[piv], m[r]
            pivot = m[r][c]
            base = m[r]
            for i in range(r + 1, nrows):
                row = m[i]
                f = row[c]
                for j in range(c + 1, ncols):
                    num = pivot * row[j] - f * base[j]
                    q, rem = divmod(num, prev)
                    if rem:
                        raise AssertionError("fraction-free division left a remainder")
                    row[j] = q
                row[c] = 0
            prev = pivot
            r += 1
        return r

    def det(self) -> Fraction:
        """Exact determinant via fraction-free Bareiss."""
        if self.rows != self.cols:
            raise ValueError("determinant requires a square matrix")
        k = self.rows
        if k == 0:
            return Fraction(1)
        m, scale = self._cleared_integer_rows()
        sign = 1
        prev = 1
        for c in range(k - 1):
            piv = next((i for i in range(c, k) if m[i][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                sign = -sign
            pivot = m[c][c]
            base = m[c]
            for i in range(c + 1, k):
                row = m[i]
                f = row[c]
                for j in range(c + 1, k):
                    num = pivot * row[j] - f * base[j]
                    q, rem = divmod(num, prev)
                    if rem:
                        raise AssertionError("fraction-free division left a remainder")
                    row[j] = q
                row[c] = 0
            prev = pivot
        return Fraction(sign * m[k - 1][k - 1], scale)

    # -- Fraction elimination ------------------------------------------

    def solve(self, rhs: "RationalMatrix") -> "RationalMatrix":
        """Solve self @ X = rhs exactly; raise SingularMatrixError if singular."""
        if self.rows != self.cols:
            raise ValueError("solve requires a square matrix")
        if rhs.rows != self.rows:
            raise ValueError("right hand side has the wrong number of rows")
        k = self.rows
        width = k + rhs.cols
        aug = [list(self._rows[i]) + list(rhs._rows[i]) for i in range(k)]
        for col in range(k):
            piv = next((i for i in range(col, k) if aug[i][col]), None)
            if piv is None:
                raise SingularMatrixError(f"matrix of size {k} is singular")
            if piv != col:
                aug[col], aug[piv] = aug[piv], aug[col]
            base = aug[col]
            inv = 1 / base[col]
            for j in range(col, width):
                base[j] *= inv
            for i in range(k):
                if i == col:
                    continue
                row = aug[i]
                f = row[col]
                if f:
                    for j in range(col, width):
                        row[j] -= f * base[j]
        return RationalMatrix([row[k:] for row in aug])

    def rref(self) -> tuple["RationalMatrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot column indices."""
        m = [list(row) for row in self._rows]
        nrows, ncols = self.rows, self.cols
        pivots: list[int] = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = next((i for i in range(r, nrows) if m[i][c]), None)
            if piv is None:
                continue
            if piv != r:
                m[r], m[piv] = m[piv], m[r]
            base = m[r]
            inv = 1 / base[c]
            for j in range(c, ncols):
                base[j] *= inv
            for i in range(nrows):
                if i == r:
                    continue
                row = m[i]
                f = row[c]
                if f:
                    for j in range(c, ncols):
                        row[j] -= f * base[j]
            pivots.append(c)
            r += 1
        return RationalMatrix(m), tuple(pivots)

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        """A basis of the right kernel, one vector per free column."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        free_cols = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for fc in free_cols:
            v = [Fraction(0)] * self.cols
            v[fc] = Fraction(1)
            for row_idx, pc in enumerate(pivots):
                v[pc] = -reduced.entry(row_idx, fc)
            basis.append(tuple(v))
        return basis


@dataclass(frozen=True)
class DofFunctional:
    """Moment of the argument against a weight over one face."""

    face: Face
    weight: Polynomial
    index: int

    def __str__(self) -> str:
        return f"dof[{self.index}] on {self.face}: weight {self.weight!r}"

    def to_json_obj(self) -> dict:
        return {
            "index": self.index,
            "face": self.face.to_json_obj(),
            "weight": self.weight.to_json_obj(),
        }


@lru_cache(maxsize=None)
def dofs_S(n: int, r: int) -> tuple[DofFunctional, ...]:
    """Serendipity DOF set: degree r - 2d moments on each d-face."""
    if n < 1 or r < 1:
        raise ValueError("serendipity DOFs require n >= 1 and r >= 1")
    out: list[DofFunctional] = []
    for d in range(n + 1):
        s = r - 2 * d
        if s < 0:
            break
        for face in enumerate_faces(n, d):
            for exps in monomials_total_degree_at_most(n, face.free_indices, s):
                out.append(
                    DofFunctional(face, Polynomial.from_monomial(exps), len(out))
                )
    return tuple(out)


@lru_cache(maxsize=None)
def dofs_Q(n: int, r: int) -> tuple[DofFunctional, ...]:
    """Tensor-product DOF set: vertex values plus per-axis degree r - 2
    moments on positive dimensional faces."""
    if n < 1 or r < 1:
        raise ValueError("tensor-product DOFs require n >= 1 and r >= 1")
    out: list[DofFunctional] = []
    for d in range(n + 1):
        for face in enumerate_faces(n, d):
            if d == 0:
                weights = [(0,) * n]
            else:
                weights = monomials_max_degree_at_most(n, face.free_indices, r - 2)
            for exps in weights:
                out.append(
                    DofFunctional(face, Polynomial.from_monomial(exps), len(out))
                )
    return tuple(out)


def apply_dof(functional: DofFunctional, p: Polynomial) -> Fraction:
    """Evaluate one functional on a polynomial, exactly."""
    if p.n != functional.face.n:
        raise ValueError("polynomial and functional have different variable counts")
    total = Fraction(0)
    for wexps, wcoeff in functional.weight.terms():
        for pexps, pcoeff in p.terms():
            combined = tuple(a + b for a, b in zip(wexps, pexps))
            total += wcoeff * pcoeff * face_moment(functional.face, combined)
    return total


def dof_matrix(
    basis: Union[SpaceBasis, Sequence[Monomial]],
    functionals: Iterable[DofFunctional],
) -> RationalMatrix:
    """Matrix with entry (i, j) = functional i applied to basis monomial j."""
    monomials = basis.monomials if isinstance(basis, SpaceBasis) else tuple(basis)
    rows = []
    for functional in functionals:
        wterms = functional.weight.terms()
        face = functional.face
        row = []
        for m in monomials:
            val = Fraction(0)
            for wexps, wcoeff in wterms:
                combined = tuple(a + b for a, b in zip(m.exponents, wexps))
                val += wcoeff * face_moment(face, combined)
            row.append(val)
        rows.append(row)
    return RationalMatrix(rows)


@dataclass(frozen=True)
class UnisolvenceResult:
    n: int
    r: int
    dim: int
    rank: int
    facet_factor_ok: bool

    @property
    def matrix_full_rank(self) -> bool:
        return self.rank == self.dim

    @property
    def unisolvent(self) -> bool:
        return self.matrix_full_rank and self.facet_factor_ok

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "dim": self.dim,
            "rank": self.rank,
            "matrix_full_rank": self.matrix_full_rank,
            "facet_factor_ok": self.facet_factor_ok,
            "unisolvent": self.unisolvent,
        }


@lru_cache(maxsize=None)
def _dof_matrix_S(n: int, r: int) -> RationalMatrix:
    return dof_matrix(basis_S(n, r), dofs_S(n, r))


def check_unisolvence(n: int, r: int, include_facet_check: bool = True) -> UnisolvenceResult:
    """Verify the serendipity DOFs determine the space uniquely.

    Two independent computations: the square DOF matrix must have full
    rank exactly, and the joint kernel of all facet DOFs must be the
    facet-bubble multiples of the total degree r - 2n family (empty when
    r < 2n).
    """
    basis = basis_S(n, r)
    functionals = dofs_S(n, r)
    if len(functionals) != basis.dim:
        raise AssertionError(
            f"{len(functionals)} functionals for a space of dimension {basis.dim}"
        )
    rank = _dof_matrix_S(n, r).rank()
    if include_facet_check:
        from . import decomp

        facet_ok = decomp.facet_kernel_check(n, r).ok
    else:
        facet_ok = True
    return UnisolvenceResult(n=n, r=r, dim=basis.dim, rank=rank, facet_factor_ok=facet_ok)


@lru_cache(maxsize=None)
def nodal_basis(n: int, r: int) -> tuple[Polynomial, ...]:
    """The dual basis: polynomial j takes value 1 on DOF j and 0 on the rest."""
    basis = basis_S(n, r)
    matrix = _dof_matrix_S(n, r)
    coeffs = matrix.solve(RationalMatrix.identity(basis.dim))
    polys = []
    for j in range(basis.dim):
        terms = {
            basis.monomials[k].exponents: coeffs.entry(k, j)
            for k in range(basis.dim)
        }
        polys.append(Polynomial(n, terms))
    return tuple(polys)


@dataclass(frozen=True)
class LayoutRow:
    face_dim: int
    face_count: int
    per_face: int

    @property
    def subtotal(self) -> int:
        return self.face_count * self.per_face


@dataclass(frozen=True)
class LayoutReport:
    family: str
    n: int
    r: int
    rows: tuple[LayoutRow, ...]

    @property
    def total(self) -> int:
        return sum(row.subtotal for row in self.rows)

    def to_json_obj(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "r": self.r,
            "rows": [
                {
                    "face_dim": row.face_dim,
                    "face_count": row.face_count,
                    "per_face": row.per_face,
                    "subtotal": row.subtotal,
                }
                for row in self.rows
            ],
            "total": self.total,
        }


def dof_layout(n: int, r: int, family: str = "S") -> LayoutReport:
    """Count DOFs per face dimension without materializing them."""
    if family not in ("S", "Q"):
        raise ValueError("layouts exist for families S and Q")
    if n < 1 or r < 1:
        raise ValueError("layouts require n >= 1 and r >= 1")
    rows = []
    for d in range(n + 1):
        count = len(enumerate_faces(n, d))
        if family == "S":
            per_face = dim_P(d, r - 2 * d)
        else:
            per_face = 1 if d == 0 else (r - 1) ** d
        rows.append(LayoutRow(face_dim=d, face_count=count, per_face=per_face))
    return LayoutReport(family=family, n=n, r=r, rows=tuple(rows))
