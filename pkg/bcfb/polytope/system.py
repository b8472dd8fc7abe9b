"""Named-variable linear inequality systems and Fourier-Motzkin elimination.

A system is the set ``{x : A x <= b}`` over an ordered tuple of variable
names.  Strict inequalities are not represented; callers back off by a
margin when they need an interior point.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from bcfb.config.defaults import setting
from bcfb.errors import ArgumentError

log = logging.getLogger(__name__)

def geo_tol(tol: float | None = None) -> float:
    """*tol*, or the active ``numerics.tau_geo`` when it is None."""
    return float(setting("numerics", "tau_geo")) if tol is None else tol


# linprog status codes
_LP_OPTIMAL = 0
_LP_INFEASIBLE = 2
_LP_UNBOUNDED = 3


@dataclass(frozen=True, slots=True, eq=False)
class LinIneqSystem:
    """Rows ``a . x <= b`` over ``variables``."""

    variables: tuple[str, ...]
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise ArgumentError(f"duplicate variable names: {variables}")
        a = np.array(self.a, dtype=float, copy=True).reshape(-1, len(variables))
        b = np.array(self.b, dtype=float, copy=True).reshape(-1)
        if a.shape[0] != b.shape[0]:
            raise ArgumentError(f"{a.shape[0]} coefficient rows but {b.shape[0]} bounds")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ArgumentError("inequality system contains NaN or infinite entries")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def empty(cls, variables: Sequence[str]) -> LinIneqSystem:
        return cls(tuple(variables), np.zeros((0, len(variables))), np.zeros(0))

    @classmethod
    def from_rows(
        cls, variables: Sequence[str], rows: Iterable[tuple[Mapping[str, float], float]]
    ) -> LinIneqSystem:
        """Build from ``({name: coeff}, bound)`` pairs meaning ``coeff . x <= bound``."""
        variables = tuple(variables)
        a_rows: list[np.ndarray] = []
        b_rows: list[float] = []
        for coeffs, bound in rows:
            row = np.zeros(len(variables))
            for name, value in coeffs.items():
                if name not in variables:
                    raise ArgumentError(f"unknown variable {name!r}; have {variables}")
                row[variables.index(name)] += value
            a_rows.append(row)
            b_rows.append(float(bound))
        a = np.vstack(a_rows) if a_rows else np.zeros((0, len(variables)))
        return cls(variables, a, np.asarray(b_rows))

    @property
    def n_rows(self) -> int:
        return int(self.a.shape[0])

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise ArgumentError(f"variable {var!r} not in {self.variables}") from None

    def rows(self) -> list[tuple[dict[str, float], float]]:
        return [
            ({v: float(c) for v, c in zip(self.variables, row) if c != 0.0}, float(bound))
            for row, bound in zip(self.a, self.b)
        ]

    def with_rows(self, other: LinIneqSystem) -> LinIneqSystem:
        """Concatenate rows of a system over the same variables."""
        if other.variables != self.variables:
            other = other.reorder(self.variables)
        return LinIneqSystem(
            self.variables, np.vstack([self.a, other.a]), np.concatenate([self.b, other.b])
        )

    def reorder(self, variables: Sequence[str]) -> LinIneqSystem:
        variables = tuple(variables)
        if sorted(variables) != sorted(self.variables):
            raise ArgumentError(f"cannot reorder {self.variables} as {variables}")
        perm = [self.index(v) for v in variables]
        return LinIneqSystem(variables, self.a[:, perm], self.b)

    def satisfied(self, point: Sequence[float], tol: float | None = None) -> bool:
        x = np.asarray(point, dtype=float)
        return bool(np.all(self.a @ x <= self.b + geo_tol(tol) * (1.0 + np.abs(self.b))))

    def is_infeasible_marker(self) -> bool:
        """True for the canonical empty system (a single ``0 <= -1`` row)."""
        return self.n_rows == 1 and not np.any(self.a[0]) and self.b[0] < 0


class SystemBuilder:
    """Incremental construction with ``<=``, ``>=`` and ``==`` rows."""

    def __init__(self, variables: Sequence[str]) -> None:
        self.variables = tuple(variables)
        self._rows: list[tuple[dict[str, float], float]] = []

    def le(self, coeffs: Mapping[str, float], bound: float) -> SystemBuilder:
        self._rows.append((dict(coeffs), float(bound)))
        return self

    def ge(self, coeffs: Mapping[str, float], bound: float) -> SystemBuilder:
        self._rows.append(({k: -v for k, v in coeffs.items()}, -float(bound)))
        return self

    def eq(self, coeffs: Mapping[str, float], bound: float) -> SystemBuilder:
        return self.le(coeffs, bound).ge(coeffs, bound)

    def nonnegative(self, names: Iterable[str] | None = None) -> SystemBuilder:
        for name in self.variables if names is None else names:
            self.ge({name: 1.0}, 0.0)
        return self

    def build(self) -> LinIneqSystem:
        return LinIneqSystem.from_rows(self.variables, self._rows)


def infeasible(variables: Sequence[str]) -> LinIneqSystem:
    """The canonical empty system ``0 <= -1``."""
    variables = tuple(variables)
    return LinIneqSystem(variables, np.zeros((1, len(variables))), np.array([-1.0]))


# ── Redundancy removal ──────────────────────────────────────────────────


def _tol(bound: float, tol: float) -> float:
    return tol * (1.0 + abs(bound))


def _drop_trivial_rows(
    a: np.ndarray, b: np.ndarray, tol: float
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Drop ``0 <= b`` rows with ``b >= 0``; report whether a ``0 <= b < 0`` row exists."""
    zero = ~np.any(np.abs(a) > tol, axis=1)
    infeasible_row = bool(np.any(b[zero] < -tol))
    return a[~zero], b[~zero], infeasible_row


def _dedupe_parallel(a: np.ndarray, b: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Keep the tightest of each family of positively parallel rows."""
    scale = np.max(np.abs(a), axis=1)
    an = a / scale[:, None]
    bn = b / scale
    keep: list[int] = []
    for i in range(len(bn)):
        merged = False
        for pos, j in enumerate(keep):
            if np.all(np.abs(an[i] - an[j]) <= tol):
                if bn[i] < bn[j]:
                    keep[pos] = i
                merged = True
                break
        if not merged:
            keep.append(i)
    return an[keep], bn[keep]


def _is_feasible(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape[0] == 0:
        return True
    res = linprog(
        np.zeros(a.shape[1]), A_ub=a, b_ub=b, bounds=[(None, None)] * a.shape[1], method="highs"
    )
    return res.status != _LP_INFEASIBLE


def remove_redundant(sys: LinIneqSystem, tol: float | None = None) -> LinIneqSystem:
    """Same feasible set with implied rows removed.

    A row is dropped only when maximizing its left-hand side over the
    remaining rows stays within its bound. Empty systems collapse to the
    canonical ``0 <= -1`` row.
    """
    tol = geo_tol(tol)
    n = len(sys.variables)
    a, b, bad_constant = _drop_trivial_rows(sys.a, sys.b, tol)
    if bad_constant:
        return infeasible(sys.variables)
    if a.shape[0] == 0:
        return LinIneqSystem.empty(sys.variables)
    a, b = _dedupe_parallel(a, b, tol)
    if not _is_feasible(a, b):
        return infeasible(sys.variables)

    active = list(range(a.shape[0]))
    for k in range(a.shape[0]):
        others = [i for i in active if i != k]
        if not others:
            continue
        res = linprog(
            -a[k],
            A_ub=a[others],
            b_ub=b[others],
            bounds=[(None, None)] * n,
            method="highs",
        )
        if res.status == _LP_OPTIMAL and -res.fun <= b[k] + _tol(b[k], tol):
            active.remove(k)
        elif res.status == _LP_INFEASIBLE:
            return infeasible(sys.variables)
    log.debug("remove_redundant: %d -> %d rows", sys.n_rows, len(active))
    return LinIneqSystem(sys.variables, a[active], b[active])


# ── Fourier-Motzkin ─────────────────────────────────────────────────────


def fm_eliminate(
    sys: LinIneqSystem, var: str, tol: float | None = None, reduce: bool = True
) -> LinIneqSystem:
    """Project out ``var``.

    Every (positive, negative) pair of rows on ``var`` is combined so the
    variable cancels; rows without ``var`` are carried over.
    """
    tol = geo_tol(tol)
    k = sys.index(var)
    col = sys.a[:, k]
    pos = np.flatnonzero(col > tol)
    neg = np.flatnonzero(col < -tol)
    null = np.flatnonzero(np.abs(col) <= tol)

    new_a: list[np.ndarray] = [sys.a[i] for i in null]
    new_b: list[float] = [float(sys.b[i]) for i in null]
    for p in pos:
        for q in neg:
            wp, wq = -col[q], col[p]
            new_a.append(wp * sys.a[p] + wq * sys.a[q])
            new_b.append(float(wp * sys.b[p] + wq * sys.b[q]))

    keep = [i for i in range(len(sys.variables)) if i != k]
    variables = tuple(sys.variables[i] for i in keep)
    if new_a:
        a = np.vstack(new_a)[:, keep]
        a[np.abs(a) <= tol] = 0.0
    else:
        a = np.zeros((0, len(variables)))
    out = LinIneqSystem(variables, a, np.asarray(new_b))
    log.debug(
        "fm_eliminate %s: %d rows (+%d, -%d, 0:%d) -> %d",
        var,
        sys.n_rows,
        len(pos),
        len(neg),
        len(null),
        out.n_rows,
    )
    return remove_redundant(out, tol) if reduce else out


def eliminate_all(
    sys: LinIneqSystem, variables: Iterable[str], tol: float | None = None
) -> LinIneqSystem:
    for var in variables:
        sys = fm_eliminate(sys, var, tol)
    return sys


def project(sys: LinIneqSystem, keep: Sequence[str], tol: float | None = None) -> LinIneqSystem:
    """Projection onto ``keep`` (in that order)."""
    for name in keep:
        sys.index(name)
    drop = [v for v in sys.variables if v not in keep]
    return eliminate_all(sys, drop, tol).reorder(keep)
