"""The Suzuki curve y^q + y = x^q0 (x^q + x) over F_q, q = 2^(2m+1), q0 = 2^m.

Parameters and point counts come from closed forms; points over F_q and
F_{q^4} are enumerated explicitly.  The coordinate functions use plus signs:
z = x^(2q0+1) + y^(2q0) and w = x y^(2q0) + z^(2q0) (characteristic 2).
"""
from __future__ import annotations

import functools
import hashlib
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator

import galois
import numpy as np

from errors import CurveError
from gf2e import DEFAULT_TABLE_BUDGET, FieldCtx, suzuki_fields

if TYPE_CHECKING:
    from riemann_roch import Monomial

log = logging.getLogger(__name__)

# F_{q^4} has 2^12 elements at m=1 and 2^20 at m=2; m=3 would need 2^28
ENUMERATION_M = (1, 2)
_CHUNK = 1 << 16


@dataclass(frozen=True)
class SuzukiParams:
    m: int
    q0: int
    q: int
    g: int
    gens: tuple[int, int, int, int]
    N1: int
    N4: int
    nE: int

    @classmethod
    def for_m(cls, m: int) -> SuzukiParams:
        if m < 1:
            raise CurveError(f"m must be at least 1, got {m}")
        q0 = 2**m
        q = 2 ** (2 * m + 1)
        g = q0 * (q - 1)
        N1 = q**2 + 1
        N4 = q**4 + 1 + 2 * q0 * q**2 * (q - 1)
        return cls(
            m=m,
            q0=q0,
            q=q,
            g=g,
            gens=(q, q + q0, q + 2 * q0, q + 2 * q0 + 1),
            N1=N1,
            N4=N4,
            nE=N4 - N1,
        )

    def point_count(self, j: int) -> int:
        """N_j from the L-polynomial (1 + 2 q0 t + q t^2)^g.

        Its reciprocal roots are q0(-1 + i) and q0(-1 - i), each g times, so
        N_j = q^j + 1 - 2 g q0^j Re((-1 + i)^j).
        """
        if j < 1:
            raise CurveError(f"extension degree must be positive, got {j}")
        re, im = 1, 0
        for _ in range(j):
            re, im = -re - im, re - im
        return self.q**j + 1 - 2 * self.g * self.q0**j * re

    def l_polynomial(self) -> list[int]:
        """Coefficients of (1 + 2 q0 t + q t^2)^g, constant term first."""
        coeffs = [1]
        factor = (1, 2 * self.q0, self.q)
        for _ in range(self.g):
            out = [0] * (len(coeffs) + 2)
            for i, c in enumerate(coeffs):
                for k, f in enumerate(factor):
                    out[i + k] += c * f
            coeffs = out
        return coeffs

    def is_maximal(self, j: int) -> bool:
        """Whether N_j meets the Hasse-Weil upper bound q^j + 1 + 2 g q^(j/2)."""
        if j % 2:
            return False
        return self.point_count(j) == self.q**j + 1 + 2 * self.g * self.q ** (j // 2)


def pole_order(params: SuzukiParams, mono: Monomial) -> int:
    """Pole order at P_inf of x^a y^b z^c w^d (x^q + x)^r."""
    q, q0 = params.q, params.q0
    return mono.a * q + mono.b * (q + q0) + mono.c * (q + 2 * q0) + mono.d * (q + 2 * q0 + 1) + mono.r * q**2


@dataclass(frozen=True)
class CurvePoint:
    """An affine point over F_{q^j}, or P_inf when ``x`` and ``y`` are None."""

    j: int
    x: int | None = None
    y: int | None = None

    @classmethod
    def infinity(cls, j: int = 4) -> CurvePoint:
        return cls(j)

    @property
    def is_infinity(self) -> bool:
        return self.x is None


@dataclass(frozen=True, eq=False)
class PointSet:
    """Points of one field in canonical order: P_inf first (when present), then affine by (x, y)."""

    j: int
    ctx: FieldCtx
    xs: np.ndarray
    ys: np.ndarray
    with_infinity: bool = True
    keys: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        keys = self.xs * self.ctx.order + self.ys
        if np.any(np.diff(keys) <= 0):
            raise CurveError("points are not in canonical order")
        for arr in (self.xs, self.ys, keys):
            arr.flags.writeable = False
        object.__setattr__(self, "keys", keys)

    def __len__(self) -> int:
        return len(self.xs) + int(self.with_infinity)

    @property
    def n_affine(self) -> int:
        return len(self.xs)

    def __iter__(self) -> Iterator[CurvePoint]:
        if self.with_infinity:
            yield CurvePoint.infinity(self.j)
        for x, y in zip(self.xs.tolist(), self.ys.tolist()):
            yield CurvePoint(self.j, x, y)

    def affine_index(self, xs, ys) -> np.ndarray:
        """Positions of the given affine points among ``xs``/``ys``; -1 where absent."""
        keys = np.asarray(xs, dtype=np.int64) * self.ctx.order + np.asarray(ys, dtype=np.int64)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, len(self.keys) - 1)
        return np.where(self.keys[pos] == keys, pos, -1)

    def x_array(self) -> galois.FieldArray:
        return self.ctx.GF(self.xs)

    def y_array(self) -> galois.FieldArray:
        return self.ctx.GF(self.ys)

    def to_lines(self) -> list[str]:
        lines = [f"j={self.j} inf"] if self.with_infinity else []
        width = (self.ctx.e + 3) // 4
        lines.extend(f"j={self.j} x={x:0{width}x} y={y:0{width}x}" for x, y in zip(self.xs.tolist(), self.ys.tolist()))
        return lines

    def order_hash(self) -> str:
        return hashlib.sha256("\n".join(self.to_lines()).encode()).hexdigest()


class SuzukiCurve:
    """The curve X_m together with its fields F_q and F_{q^4}."""

    def __init__(self, params: SuzukiParams, small: FieldCtx, big: FieldCtx):
        if small.order != params.q or big.order != params.q**4 or big.subfield is not small:
            raise CurveError("field contexts do not match the curve parameters")
        self.params = params
        self.small = small
        self.big = big
        self._points: dict[int, PointSet] = {}
        self._E: PointSet | None = None

    def __repr__(self) -> str:
        return f"SuzukiCurve(m={self.params.m}, q={self.params.q})"

    def field(self, j: int) -> FieldCtx:
        if j == 1:
            return self.small
        if j == 4:
            return self.big
        raise CurveError(f"points are only handled over F_q and F_(q^4), not j={j}")

    def on_curve(self, x: int, y: int, j: int = 4) -> bool:
        ctx = self.field(j)
        p = self.params
        lhs = ctx.pow(y, p.q) ^ y
        rhs = ctx.mul(ctx.pow(x, p.q0), ctx.pow(x, p.q) ^ x)
        return lhs == rhs

    def on_curve_array(self, x: galois.FieldArray, y: galois.FieldArray) -> np.ndarray:
        p = self.params
        return (y**p.q + y) == x**p.q0 * (x**p.q + x)

    def _artin_schreier_rhs(self, x: galois.FieldArray) -> galois.FieldArray:
        p = self.params
        return x**p.q0 * (x**p.q + x)

    def _require_enumerable(self) -> None:
        if self.params.m not in ENUMERATION_M:
            raise CurveError(f"point enumeration supports m in {ENUMERATION_M}, got m={self.params.m}")

    def splitting_x_values(self) -> np.ndarray:
        """The alphas in F_{q^4} over which y^q + y = alpha^q0 (alpha^q + alpha) splits, ascending."""
        self._require_enumerable()
        big = self.big
        found = []
        for lo in range(0, big.order, _CHUNK):
            alpha = big.GF(np.arange(lo, min(lo + _CHUNK, big.order)))
            trace = big.trace_array(self._artin_schreier_rhs(alpha))
            found.append(alpha[trace == 0].view(np.ndarray).astype(np.int64))
        return np.concatenate(found)

    def enumerate_points(self, j: int) -> PointSet:
        """P_inf followed by every affine point over F_{q^j}, j in {1, 4}."""
        if j not in (1, 4):
            raise CurveError(f"points are only enumerated over F_q and F_(q^4), not j={j}")
        if j not in self._points:
            self._require_enumerable()
            points = self._enumerate_small() if j == 1 else self._enumerate_big()
            expected = self.params.N1 if j == 1 else self.params.N4
            if len(points) != expected:
                raise CurveError(f"found {len(points)} points over F_(q^{j}), expected {expected}")
            self._points[j] = points
            log.info("enumerated %d points over F_(q^%d) for m=%d", len(points), j, self.params.m)
        return self._points[j]

    def _enumerate_small(self) -> PointSet:
        ctx = self.small
        xs, ys = np.divmod(np.arange(ctx.order**2, dtype=np.int64), ctx.order)
        keep = self.on_curve_array(ctx.GF(xs), ctx.GF(ys))
        return PointSet(1, ctx, xs[keep], ys[keep])

    def _enumerate_big(self) -> PointSet:
        big, q = self.big, self.params.q
        kernel = big.subfield_elements()
        xs, ys = [], []
        for lo in range(0, big.order, _CHUNK):
            alpha = big.GF(np.arange(lo, min(lo + _CHUNK, big.order)))
            rhs = self._artin_schreier_rhs(alpha)
            split = big.trace_array(rhs) == 0
            y0, solvable = big.solve_artin_schreier_array(rhs[split])
            if not solvable.all():
                raise CurveError("trace-zero right-hand side without an Artin-Schreier solution")
            xs.append(np.repeat(alpha[split].view(np.ndarray).astype(np.int64), q))
            ys.append((y0[:, np.newaxis] ^ kernel[np.newaxis, :]).ravel())
        xs = np.concatenate(xs)
        ys = np.concatenate(ys)
        order = np.lexsort((ys, xs))
        xs, ys = xs[order], ys[order]
        if not self.on_curve_array(big.GF(xs), big.GF(ys)).all():
            raise CurveError("enumerated point fails the curve equation")
        return PointSet(4, big, xs, ys)

    def rational_points_E(self) -> PointSet:
        """Supp(E): the affine F_{q^4}-points whose x lies outside F_q, in canonical order."""
        if self._E is None:
            points = self.enumerate_points(4)
            outside = ~np.isin(points.xs, self.big.subfield_elements())
            self._E = PointSet(4, self.big, points.xs[outside], points.ys[outside], with_infinity=False)
            if len(self._E) != self.params.nE:
                raise CurveError(f"Supp(E) has {len(self._E)} points, expected {self.params.nE}")
        return self._E

    def eval_xyzw(self, point: CurvePoint) -> tuple[int, int, int, int]:
        if point.is_infinity:
            raise CurveError("x, y, z, w have a pole at P_inf")
        ctx = self.field(point.j)
        q0 = self.params.q0
        x, y = ctx.check(point.x), ctx.check(point.y)
        y2q0 = ctx.pow(y, 2 * q0)
        z = ctx.pow(x, 2 * q0 + 1) ^ y2q0
        w = ctx.mul(x, y2q0) ^ ctx.pow(z, 2 * q0)
        return x, y, z, w

    def eval_xyzw_array(self, x: galois.FieldArray, y: galois.FieldArray) -> tuple[galois.FieldArray, ...]:
        q0 = self.params.q0
        y2q0 = y ** (2 * q0)
        z = x ** (2 * q0 + 1) + y2q0
        w = x * y2q0 + z ** (2 * q0)
        return x, y, z, w


@functools.lru_cache(maxsize=None)
def suzuki_curve(m: int, table_budget: int = DEFAULT_TABLE_BUDGET) -> SuzukiCurve:
    small, big = suzuki_fields(m, table_budget)
    return SuzukiCurve(SuzukiParams.for_m(m), small, big)
