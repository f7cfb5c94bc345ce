"""Two-element conformity: matching shared DOFs forces equal traces.

The pair is two copies of the reference cube glued along one axis: the
left element exposes its {x_axis = +1} facet, the right its
{x_axis = -1} facet, and the identification between the two local
coordinate systems is the identity on the remaining n - 1 coordinates.
DOFs supported on the shared facet (or any of its subfaces) pair up
across the elements with identical weight polynomials, so giving paired
DOFs equal values must produce equal traces.  Axes are 0-based here and
1-based in serialized reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cubegeom import Face, face_contains, restrict_to_face
from .dofs import DofFunctional, dofs_S, nodal_basis
from .exactpoly import Polynomial
from .spaces import dim_S_formula

__all__ = [
    "ElementPair",
    "shared_dof_pairs",
    "interpolate",
    "ContinuityReport",
    "check_continuity",
    "trace_locality_check",
]


@dataclass(frozen=True)
class ElementPair:
    """Two unit cubes adjacent along one axis (right = left shifted by 2)."""

    n: int
    axis: int

    def __post_init__(self) -> None:
        if not 0 <= self.axis < self.n:
            raise ValueError(f"axis {self.axis} out of range for n={self.n}")

    @property
    def left_shared_face(self) -> Face:
        return Face(self.n, ((self.axis, 1),))

    @property
    def right_shared_face(self) -> Face:
        return Face(self.n, ((self.axis, -1),))

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "axis": self.axis + 1,
            "left_shared_face": self.left_shared_face.to_json_obj(),
            "right_shared_face": self.right_shared_face.to_json_obj(),
        }


def _mirror_face(face: Face, axis: int) -> Face:
    """Same face with the glue-axis constraint flipped in sign."""
    flipped = tuple(
        (i, -s) if i == axis else (i, s) for i, s in face.fixed
    )
    return Face(face.n, flipped)


def shared_dof_pairs(
    n: int, r: int, axis: int = 0
) -> tuple[tuple[DofFunctional, DofFunctional], ...]:
    """Pair each left DOF on the shared facet with its right counterpart.

    Both sides carry the same weight monomial in the n - 1 shared
    coordinates; the pairing is a bijection whose size equals the DOF
    count of the (n - 1)-dimensional element of the same degree.
    """
    pair = ElementPair(n, axis)
    functionals = dofs_S(n, r)
    left = [
        L for L in functionals if face_contains(pair.left_shared_face, L.face)
    ]
    right_lookup = {
        (R.face, tuple(R.weight.terms())): R
        for R in functionals
        if face_contains(pair.right_shared_face, R.face)
    }
    pairs = []
    for L in left:
        key = (_mirror_face(L.face, axis), tuple(L.weight.terms()))
        R = right_lookup.pop(key, None)
        if R is None:
            raise AssertionError(f"no right-side partner for {L}")
        pairs.append((L, R))
    if right_lookup:
        raise AssertionError("unmatched right-side DOFs remain")
    if n >= 2 and len(pairs) != dim_S_formula(n - 1, r):
        raise AssertionError("shared DOF count does not match the facet element")
    return tuple(pairs)


def interpolate(values: Sequence[Fraction], n: int, r: int) -> Polynomial:
    """The unique member of the space with the prescribed DOF values."""
    phis = nodal_basis(n, r)
    if len(values) != len(phis):
        raise ValueError(f"expected {len(phis)} DOF values, got {len(values)}")
    total = Polynomial.zero(n)
    for value, phi in zip(values, phis):
        if value:
            total = total + value * phi
    return total


@dataclass(frozen=True)
class ContinuityReport:
    n: int
    r: int
    axis: int
    trials: int
    seed: int
    shared_count: int
    trial_traces_equal: tuple[bool, ...]
    perturbations_detected: tuple[bool, ...]

    @property
    def ok(self) -> bool:
        return all(self.trial_traces_equal) and all(self.perturbations_detected)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "axis": self.axis + 1,
            "trials": self.trials,
            "seed": self.seed,
            "shared_count": self.shared_count,
            "trial_traces_equal": list(self.trial_traces_equal),
            "perturbations_detected": list(self.perturbations_detected),
            "ok": self.ok,
        }


def _random_values(rng: random.Random, count: int) -> list[Fraction]:
    return [Fraction(rng.randint(-9, 9)) for _ in range(count)]


def check_continuity(
    n: int, r: int, axis: int = 0, trials: int = 25, seed: int = 0
) -> ContinuityReport:
    """Seeded trials of the conformity property, plus negative controls.

    Each trial draws independent DOF values for both elements, copies
    the shared values from left to right, and compares the two facet
    traces exactly.  The controls then bump one shared DOF at a time on
    the right element; every bump must break trace equality.
    """
    pair = ElementPair(n, axis)
    functionals = dofs_S(n, r)
    pairs = shared_dof_pairs(n, r, axis)
    rng = random.Random(seed)

    results = []
    last_left_vals: list[Fraction] = []
    last_right_vals: list[Fraction] = []
    for _ in range(max(1, trials)):
        left_vals = _random_values(rng, len(functionals))
        right_vals = _random_values(rng, len(functionals))
        for L, R in pairs:
            right_vals[R.index] = left_vals[L.index]
        trace_left = restrict_to_face(
            interpolate(left_vals, n, r), pair.left_shared_face
        )
        trace_right = restrict_to_face(
            interpolate(right_vals, n, r), pair.right_shared_face
        )
        results.append(trace_left == trace_right)
        last_left_vals, last_right_vals = left_vals, right_vals

    reference_trace = restrict_to_face(
        interpolate(last_left_vals, n, r), pair.left_shared_face
    )
    detections = []
    for _, R in pairs:
        bumped = list(last_right_vals)
        bumped[R.index] += 1
        trace = restrict_to_face(interpolate(bumped, n, r), pair.right_shared_face)
        detections.append(trace != reference_trace)

    return ContinuityReport(
        n=n,
        r=r,
        axis=axis,
        trials=max(1, trials),
        seed=seed,
        shared_count=len(pairs),
        trial_traces_equal=tuple(results),
        perturbations_detected=tuple(detections),
    )


def trace_locality_check(n: int, r: int, axis: int = 0, seed: int = 0) -> bool:
    """Zeroing every DOF away from the shared facet leaves the trace alone."""
    pair = ElementPair(n, axis)
    functionals = dofs_S(n, r)
    on_face = {
        L.index
        for L in functionals
        if face_contains(pair.left_shared_face, L.face)
    }
    rng = random.Random(seed)
    values = _random_values(rng, len(functionals))
    stripped = [
        v if i in on_face else Fraction(0) for i, v in enumerate(values)
    ]
    full_trace = restrict_to_face(interpolate(values, n, r), pair.left_shared_face)
    stripped_trace = restrict_to_face(
        interpolate(stripped, n, r), pair.left_shared_face
    )
    return full_trace == stripped_trace
