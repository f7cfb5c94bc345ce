"""Two-element conformity: shared DOFs, trace equality, negative controls."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from serendipity.assembly import (
    ContinuityReport,
    ElementPair,
    check_continuity,
    interpolate,
    shared_dof_pairs,
    trace_locality_check,
)
from serendipity.cubegeom import Face, face_contains, restrict_to_face
from serendipity.dofs import dofs_S
from serendipity.spaces import dim_S_formula


class TestElementPair:
    def test_shared_faces(self):
        pair = ElementPair(3, 1)
        assert pair.left_shared_face == Face(3, ((1, 1),))
        assert pair.right_shared_face == Face(3, ((1, -1),))

    def test_axis_validation(self):
        with pytest.raises(ValueError):
            ElementPair(2, 2)
        with pytest.raises(ValueError):
            ElementPair(2, -1)

    def test_json_uses_one_based_axis(self):
        obj = ElementPair(2, 0).to_json_obj()
        assert obj["axis"] == 1
        assert obj["left_shared_face"]["fixed"] == [{"index": 1, "sign": 1}]


class TestSharedDofPairs:
    @pytest.mark.parametrize(
        "n, r, axis, count",
        [
            (2, 2, 0, 3),   # 2 vertices + 1 edge moment
            (2, 1, 0, 2),   # 2 vertices
            (3, 4, 2, 17),  # 4 vertices + 4 edges x P_2 + 1 face moment
            (2, 2, 1, 3),
        ],
    )
    def test_counts(self, n, r, axis, count):
        pairs = shared_dof_pairs(n, r, axis)
        assert len(pairs) == count

    def test_count_equals_facet_element_dimension(self):
        for n in (2, 3):
            for r in range(1, 6):
                for axis in range(n):
                    pairs = shared_dof_pairs(n, r, axis)
                    assert len(pairs) == dim_S_formula(n - 1, r)

    def test_pairs_share_weights_and_mirror_faces(self):
        for L, R in shared_dof_pairs(3, 4, 0):
            assert L.weight == R.weight
            assert L.face.sign_of(0) == 1
            assert R.face.sign_of(0) == -1
            left_rest = tuple(p for p in L.face.fixed if p[0] != 0)
            right_rest = tuple(p for p in R.face.fixed if p[0] != 0)
            assert left_rest == right_rest

    def test_every_left_facet_dof_is_paired(self):
        n, r, axis = 3, 3, 1
        pair = ElementPair(n, axis)
        expected = {
            L.index
            for L in dofs_S(n, r)
            if face_contains(pair.left_shared_face, L.face)
        }
        got = {L.index for L, _ in shared_dof_pairs(n, r, axis)}
        assert got == expected

    def test_breakdown_for_cube_face(self):
        # shared 2-face of a cube at r=4: the face moment budget is
        # r - 2*2 = 0, one moment; each edge carries 3, each vertex 1
        pairs = shared_dof_pairs(3, 4, 2)
        by_dim: dict[int, int] = {}
        for L, _ in pairs:
            by_dim[L.face.dim] = by_dim.get(L.face.dim, 0) + 1
        assert by_dim == {0: 4, 1: 12, 2: 1}


class TestInterpolate:
    def test_reproduces_dof_values(self):
        from serendipity.dofs import apply_dof

        rng = random.Random(40)
        n, r = 2, 3
        functionals = dofs_S(n, r)
        values = [Fraction(rng.randint(-9, 9)) for _ in functionals]
        u = interpolate(values, n, r)
        for L, v in zip(functionals, values):
            assert apply_dof(L, u) == v

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            interpolate([Fraction(1)], 2, 2)


class TestContinuity:
    @pytest.mark.parametrize("n, r", [(1, 3), (2, 1), (2, 3), (3, 2)])
    def test_matched_dofs_give_equal_traces(self, n, r):
        report = check_continuity(n, r, axis=0, trials=8, seed=123)
        assert report.ok
        assert all(report.trial_traces_equal)
        assert all(report.perturbations_detected)

    def test_axis_choice_does_not_matter(self):
        for axis in range(3):
            assert check_continuity(3, 2, axis=axis, trials=4, seed=9).ok

    def test_every_perturbation_is_detected(self):
        report = check_continuity(2, 4, axis=1, trials=3, seed=77)
        assert len(report.perturbations_detected) == report.shared_count
        assert all(report.perturbations_detected)

    def test_one_dimensional_elements_share_a_vertex_value(self):
        report = check_continuity(1, 4, axis=0, trials=5, seed=3)
        assert report.ok
        assert report.shared_count == 1

    def test_unmatched_dofs_generally_break_traces(self):
        # direct negative experiment, independent of the built-in controls
        n, r, axis = 2, 3, 0
        rng = random.Random(55)
        functionals = dofs_S(n, r)
        pair = ElementPair(n, axis)
        left = [Fraction(rng.randint(-9, 9)) for _ in functionals]
        right = [Fraction(rng.randint(-9, 9)) for _ in functionals]
        trace_left = restrict_to_face(interpolate(left, n, r), pair.left_shared_face)
        trace_right = restrict_to_face(
            interpolate(right, n, r), pair.right_shared_face
        )
        assert trace_left != trace_right

    def test_report_serialization(self):
        report = check_continuity(2, 2, axis=0, trials=4, seed=5)
        obj = report.to_json_obj()
        assert obj["ok"] is True
        assert obj["axis"] == 1
        assert obj["seed"] == 5
        assert len(obj["trial_traces_equal"]) == 4

    def test_deterministic_for_fixed_seed(self):
        a = check_continuity(2, 3, axis=0, trials=6, seed=42)
        b = check_continuity(2, 3, axis=0, trials=6, seed=42)
        assert a == b


class TestTraceLocality:
    @pytest.mark.parametrize("n, r", [(2, 2), (2, 4), (3, 3)])
    def test_off_face_dofs_never_touch_the_trace(self, n, r):
        for axis in range(n):
            assert trace_locality_check(n, r, axis=axis, seed=axis)
