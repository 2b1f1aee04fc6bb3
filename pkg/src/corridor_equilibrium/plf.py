"""Exact piecewise-linear and piecewise-constant functions, and interval sets.

All operations work on breakpoints; nothing is sampled.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-12


def _dedupe(xs: np.ndarray) -> np.ndarray:
    xs = np.unique(xs)
    if xs.size < 2:
        return xs
    keep = np.concatenate([[True], np.diff(xs) > TOL])
    return xs[keep]


class PiecewiseLinearFn:
    """Continuous function, linear between strictly increasing breakpoints."""

    __slots__ = ("xs", "ys")

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("need matching 1-d breakpoint and value arrays of length >= 2")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        self.xs = xs
        self.ys = ys

    @classmethod
    def constant(cls, value: float, lo: float, hi: float) -> PiecewiseLinearFn:
        return cls([lo, hi], [value, value])

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if np.any(t_arr < lo - 1e-9) or np.any(t_arr > hi + 1e-9):
            raise ValueError(f"evaluation outside domain [{lo}, {hi}]")
        out = np.interp(t_arr, self.xs, self.ys)
        return float(out) if out.ndim == 0 else out

    def __repr__(self):
        return f"PiecewiseLinearFn({len(self.xs)} breakpoints on [{self.xs[0]:g}, {self.xs[-1]:g}])"

    def slopes(self) -> np.ndarray:
        return np.diff(self.ys) / np.diff(self.xs)

    def derivative_at(self, t):
        """Slope of the segment containing ``t`` (right-hand at breakpoints); vectorised."""
        k = np.clip(np.searchsorted(self.xs, t, side="right") - 1, 0, len(self.xs) - 2)
        out = self.slopes()[k]
        return float(out) if np.ndim(out) == 0 else out

    def _common(self, other: PiecewiseLinearFn) -> np.ndarray:
        lo = max(self.xs[0], other.xs[0])
        hi = min(self.xs[-1], other.xs[-1])
        if hi - lo <= TOL:
            raise ValueError("operand domains do not overlap")
        xs = np.concatenate([self.xs, other.xs])
        xs = xs[(xs >= lo) & (xs <= hi)]
        return _dedupe(np.concatenate([[lo, hi], xs]))

    def __add__(self, other):
        if isinstance(other, PiecewiseLinearFn):
            xs = self._common(other)
            return PiecewiseLinearFn(xs, self(xs) + other(xs))
        return PiecewiseLinearFn(self.xs, self.ys + float(other))

    def __sub__(self, other):
        if isinstance(other, PiecewiseLinearFn):
            xs = self._common(other)
            return PiecewiseLinearFn(xs, self(xs) - other(xs))
        return PiecewiseLinearFn(self.xs, self.ys - float(other))

    def __rsub__(self, other):
        return PiecewiseLinearFn(self.xs, float(other) - self.ys)

    def __neg__(self):
        return PiecewiseLinearFn(self.xs, -self.ys)

    def __mul__(self, a: float):
        return PiecewiseLinearFn(self.xs, self.ys * float(a))

    __rmul__ = __mul__

    def maximum(self, c: float) -> PiecewiseLinearFn:
        """Pointwise ``max(f, c)``; crossing points become breakpoints."""
        xs, ys = self.xs, self.ys
        d = ys - c
        cross = []
        for k in range(len(xs) - 1):
            if d[k] * d[k + 1] < 0:
                cross.append(xs[k] + (xs[k + 1] - xs[k]) * d[k] / (d[k] - d[k + 1]))
        new_x = _dedupe(np.concatenate([xs, cross]))
        new_y = np.maximum(np.interp(new_x, xs, ys), c)
        return PiecewiseLinearFn(new_x, new_y)

    def clamp_nonnegative(self) -> PiecewiseLinearFn:
        return self.maximum(0.0)

    def restrict(self, lo: float, hi: float) -> PiecewiseLinearFn:
        lo = max(lo, self.xs[0])
        hi = min(hi, self.xs[-1])
        inner = self.xs[(self.xs > lo) & (self.xs < hi)]
        xs = np.concatenate([[lo], inner, [hi]])
        return PiecewiseLinearFn(xs, self(xs))

    def integral(self, lo: float | None = None, hi: float | None = None) -> float:
        f = self if lo is None and hi is None else self.restrict(
            self.xs[0] if lo is None else lo, self.xs[-1] if hi is None else hi
        )
        return float(np.sum(0.5 * (f.ys[1:] + f.ys[:-1]) * np.diff(f.xs)))

    def is_zero(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.ys) <= tol))

    def simplify(self, tol: float = 1e-12) -> PiecewiseLinearFn:
        """Drop breakpoints where the function is locally linear."""
        keep = [0]
        for k in range(1, len(self.xs) - 1):
            x0, y0 = self.xs[keep[-1]], self.ys[keep[-1]]
            x1, y1 = self.xs[k + 1], self.ys[k + 1]
            pred = y0 + (y1 - y0) * (self.xs[k] - x0) / (x1 - x0)
            if abs(pred - self.ys[k]) > tol:
                keep.append(k)
        keep.append(len(self.xs) - 1)
        return PiecewiseLinearFn(self.xs[keep], self.ys[keep])


class StepFunction:
    """Piecewise-constant function: ``values[j]`` on ``[edges[j], edges[j+1])``.

    Zero outside ``[edges[0], edges[-1]]``.
    """

    __slots__ = ("edges", "values")

    def __init__(self, edges, values):
        edges = np.asarray(edges, dtype=float)
        values = np.asarray(values, dtype=float)
        if edges.size != values.size + 1:
            raise ValueError("need one more edge than values")
        if edges.size > 1 and np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be strictly increasing")
        self.edges = edges
        self.values = values

    @classmethod
    def zero(cls) -> StepFunction:
        return cls([0.0], [])

    def __repr__(self):
        return f"StepFunction({self.values.size} pieces)"

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if self.values.size == 0:
            out = np.zeros_like(t_arr)
        else:
            k = np.searchsorted(self.edges, t_arr, side="right") - 1
            inside = (k >= 0) & (k < self.values.size)
            out = np.where(inside, self.values[np.clip(k, 0, self.values.size - 1)], 0.0)
        return float(out) if out.ndim == 0 else out

    def integral(self) -> float:
        return float(np.sum(self.values * np.diff(self.edges))) if self.values.size else 0.0

    def integral_with(self, fn: PiecewiseLinearFn) -> float:
        """Exact integral of ``self(t) * fn(t)``."""
        total = 0.0
        for a, b, v in zip(self.edges[:-1], self.edges[1:], self.values):
            if v != 0.0:
                total += v * fn.integral(a, b)
        return total

    def support(self) -> IntervalSet:
        pieces = [(a, b) for a, b, v in zip(self.edges[:-1], self.edges[1:], self.values) if v != 0.0]
        return IntervalSet(pieces)


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, disjoint closed intervals; merged on construction."""

    intervals: tuple[tuple[float, float], ...]

    def __init__(self, intervals=()):
        ivs = sorted((float(a), float(b)) for a, b in intervals)
        merged: list[list[float]] = []
        for a, b in ivs:
            if b < a:
                raise ValueError(f"empty interval [{a}, {b}]")
            if merged and a <= merged[-1][1] + TOL:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        object.__setattr__(self, "intervals", tuple((a, b) for a, b in merged))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_convex(self) -> bool:
        return len(self.intervals) <= 1

    @property
    def hull(self) -> tuple[float, float] | None:
        return (self.intervals[0][0], self.intervals[-1][1]) if self.intervals else None

    def contains(self, t: float, tol: float = TOL) -> bool:
        return any(a - tol <= t <= b + tol for a, b in self.intervals)

    def intersect(self, other: IntervalSet, keep_points: bool = False) -> IntervalSet:
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if hi > lo + TOL or (keep_points and hi >= lo - TOL):
                    out.append((lo, max(lo, hi)))
        return IntervalSet(out)

    def clip(self, lo: float, hi: float) -> IntervalSet:
        return self.intersect(IntervalSet([(lo, hi)]), keep_points=True)

    def is_subset(self, other: IntervalSet, tol: float = 1e-9) -> bool:
        return all(
            any(c - tol <= a and b <= d + tol for c, d in other.intervals) for a, b in self.intervals
        )

    def endpoints(self) -> list[float]:
        return [x for iv in self.intervals for x in iv]
