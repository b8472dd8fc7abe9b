from __future__ import annotations

import numpy as np
import pytest

from bcfb.errors import ArgumentError
from bcfb.polytope.system import (
    LinIneqSystem,
    SystemBuilder,
    eliminate_all,
    fm_eliminate,
    infeasible,
    project,
    remove_redundant,
)


def _make_square(extra: list[tuple[dict[str, float], float]] | None = None) -> LinIneqSystem:
    b = SystemBuilder(("x", "y")).nonnegative().le({"x": 1.0}, 1.0).le({"y": 1.0}, 1.0)
    for coeffs, bound in extra or []:
        b.le(coeffs, bound)
    return b.build()


# ── construction ────────────────────────────────────────────────────────


class TestLinIneqSystem:
    def test_from_rows(self) -> None:
        sys = LinIneqSystem.from_rows(("x", "y"), [({"x": 1.0, "y": 2.0}, 3.0)])
        np.testing.assert_allclose(sys.a, [[1.0, 2.0]])
        np.testing.assert_allclose(sys.b, [3.0])
        assert sys.rows() == [({"x": 1.0, "y": 2.0}, 3.0)]

    def test_unknown_variable(self) -> None:
        with pytest.raises(ArgumentError, match="unknown variable"):
            LinIneqSystem.from_rows(("x",), [({"z": 1.0}, 0.0)])

    def test_duplicate_variables(self) -> None:
        with pytest.raises(ArgumentError, match="duplicate"):
            LinIneqSystem.empty(("x", "x"))

    def test_non_finite_rejected(self) -> None:
        with pytest.raises(ArgumentError, match="NaN"):
            LinIneqSystem(("x",), np.array([[np.nan]]), np.array([1.0]))

    def test_row_count_mismatch(self) -> None:
        with pytest.raises(ArgumentError, match="bounds"):
            LinIneqSystem(("x",), np.array([[1.0], [2.0]]), np.array([1.0]))

    def test_builder_equality_is_two_rows(self) -> None:
        sys = SystemBuilder(("x",)).eq({"x": 1.0}, 2.0).build()
        assert sys.n_rows == 2
        assert sys.satisfied([2.0])
        assert not sys.satisfied([2.1])

    def test_reorder(self) -> None:
        sys = LinIneqSystem.from_rows(("x", "y"), [({"x": 1.0}, 1.0)])
        flipped = sys.reorder(("y", "x"))
        np.testing.assert_allclose(flipped.a, [[0.0, 1.0]])
        with pytest.raises(ArgumentError):
            sys.reorder(("x", "z"))

    def test_with_rows_aligns_variables(self) -> None:
        a = LinIneqSystem.from_rows(("x", "y"), [({"x": 1.0}, 1.0)])
        b = LinIneqSystem.from_rows(("y", "x"), [({"y": 1.0}, 2.0)])
        joined = a.with_rows(b)
        assert joined.n_rows == 2
        np.testing.assert_allclose(joined.a[1], [0.0, 1.0])


# ── redundancy removal ──────────────────────────────────────────────────


class TestRemoveRedundant:
    def test_drops_implied_rows(self) -> None:
        sys = _make_square([({"x": 1.0}, 2.0), ({"x": 1.0, "y": 1.0}, 5.0)])
        reduced = remove_redundant(sys)
        assert reduced.n_rows == 4
        for point in ([0.0, 0.0], [1.0, 1.0], [0.5, 0.2]):
            assert reduced.satisfied(point)
        assert not reduced.satisfied([1.5, 0.0])

    def test_keeps_tightest_parallel_row(self) -> None:
        sys = LinIneqSystem.from_rows(("x",), [({"x": 2.0}, 4.0), ({"x": 1.0}, 1.0)])
        reduced = remove_redundant(sys)
        assert reduced.n_rows == 1
        assert reduced.satisfied([1.0])
        assert not reduced.satisfied([1.5])

    def test_empty_system_collapses_to_marker(self) -> None:
        sys = LinIneqSystem.from_rows(("x",), [({"x": 1.0}, 0.0), ({"x": -1.0}, -1.0)])
        assert remove_redundant(sys).is_infeasible_marker()

    def test_constant_infeasible_row(self) -> None:
        sys = LinIneqSystem(("x",), np.array([[0.0]]), np.array([-0.5]))
        assert remove_redundant(sys).is_infeasible_marker()

    def test_constant_trivial_row_dropped(self) -> None:
        sys = LinIneqSystem(("x",), np.array([[0.0]]), np.array([3.0]))
        assert remove_redundant(sys).n_rows == 0

    def test_infeasible_marker(self) -> None:
        assert infeasible(("a", "b")).is_infeasible_marker()
        assert not _make_square().is_infeasible_marker()


# ── Fourier-Motzkin ─────────────────────────────────────────────────────


class TestFourierMotzkin:
    def test_eliminate_from_triangle(self) -> None:
        tri = SystemBuilder(("x", "y")).nonnegative().le({"x": 1.0, "y": 1.0}, 1.0).build()
        out = fm_eliminate(tri, "y")
        assert out.variables == ("x",)
        assert out.satisfied([0.5])
        assert out.satisfied([1.0])
        assert not out.satisfied([1.2])
        assert not out.satisfied([-0.1])

    def test_rate_split_projection(self) -> None:
        # R1 <= S, R2 + S <= 2 with S free in [0, inf) projects to R1 + R2 <= 2
        sys = (
            SystemBuilder(("R1", "R2", "S"))
            .nonnegative()
            .le({"R1": 1.0, "S": -1.0}, 0.0)
            .le({"R2": 1.0, "S": 1.0}, 2.0)
            .build()
        )
        out = project(sys, ("R1", "R2"))
        assert out.variables == ("R1", "R2")
        assert out.satisfied([1.0, 1.0])
        assert out.satisfied([2.0, 0.0])
        assert not out.satisfied([1.5, 1.0])

    def test_project_reorders(self) -> None:
        out = project(_make_square([({"x": 1.0, "y": 1.0}, 1.5)]), ("y", "x"))
        assert out.variables == ("y", "x")

    def test_project_unknown_variable(self) -> None:
        with pytest.raises(ArgumentError):
            project(_make_square(), ("z",))

    def test_eliminate_all_keeps_feasibility(self) -> None:
        sys = _make_square([({"x": 1.0, "y": 1.0}, 1.5)])
        out = eliminate_all(sys, ["y"])
        assert out.variables == ("x",)
        assert out.satisfied([1.0])
        assert not out.satisfied([1.1])

    def test_unbounded_direction_carried(self) -> None:
        sys = LinIneqSystem.from_rows(("x", "y"), [({"x": 1.0, "y": -1.0}, 0.0)])
        out = fm_eliminate(sys, "y")
        assert out.n_rows == 0
