"""Explicit basis of L(ℓD), D the sum of all F_q-rational points.

The Weierstrass semigroup at P_inf is generated by the pole orders
q, q+q0, q+2q0, q+2q0+1 of x, y, z, w.  Every semigroup element n up to
ℓ(q^2+1) has exactly one representation

    n = a q + b (q+q0) + c (q+2q0) + d (q+2q0+1) + r' q^2

with 0 <= a < q, b in {0,1}, 0 <= c, d < q0, found by a remainder cascade.
The monomial x^a y^b z^c w^d (x^q+x)^r' lies in L(ℓ(q^2+1)P_inf); dividing
by (x^q+x)^ℓ moves it to L(ℓD) with r = ℓ - r'.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import galois
import numpy as np

from curve import CurvePoint, PointSet, SuzukiCurve, SuzukiParams, pole_order
from errors import CurveError, LevelError

log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Monomial:
    """Exponents of x^a y^b z^c w^d (x^q + x)^(-r), or of the (x^q + x)^r form when read as S'."""

    a: int
    b: int
    c: int
    d: int
    r: int

    def flip(self, ell: int) -> Monomial:
        """Switch between the L(ℓD) form and the L(ℓ(q^2+1)P_inf) form (r -> ℓ - r)."""
        return Monomial(self.a, self.b, self.c, self.d, ell - self.r)

    def in_range(self, params: SuzukiParams, ell: int) -> bool:
        return (
            0 <= self.a < params.q
            and 0 <= self.b <= 1
            and 0 <= self.c < params.q0
            and 0 <= self.d < params.q0
            and 0 <= self.r <= ell
        )

    def pole_order_s_prime(self, params: SuzukiParams, ell: int) -> int:
        """Pole order at P_inf of the S' partner of this L(ℓD) monomial."""
        return pole_order(params, self.flip(ell))


def max_level(params: SuzukiParams) -> int:
    return params.q**2 - 1


def check_level(params: SuzukiParams, ell: int) -> None:
    if not 1 <= ell <= max_level(params):
        raise LevelError(
            f"level ℓ={ell} is outside 1..{max_level(params)}; the explicit basis of L(ℓD) needs ℓ ≤ q^2 - 1"
        )


def expected_dimension(params: SuzukiParams, ell: int) -> int:
    """dim L(ℓD) = ℓ(q^2+1) - g + 1 (deg ℓD > 2g - 2 for every ℓ >= 1)."""
    return ell * (params.q**2 + 1) - params.g + 1


@dataclass(frozen=True, eq=False)
class Semigroup:
    generators: tuple[int, ...]
    bound: int
    members: np.ndarray
    gaps: tuple[int, ...]

    @property
    def gap_count(self) -> int:
        return len(self.gaps)

    @property
    def largest_gap(self) -> int:
        return self.gaps[-1] if self.gaps else -1

    def is_member(self, n: int) -> bool:
        if n < 0:
            return False
        return n > self.bound or bool(self.members[n])

    def count_upto(self, j: int) -> int:
        """#{n in P : n <= j}."""
        if j < 0:
            return 0
        if j <= self.bound:
            return int(self.members[: j + 1].sum())
        return int(self.members.sum()) + (j - self.bound)


def semigroup_build(params: SuzukiParams, bound: int) -> Semigroup:
    """Membership of every n <= bound in <q, q+q0, q+2q0, q+2q0+1>."""
    if bound < 2 * params.g:
        raise LevelError(f"semigroup bound {bound} is below 2g = {2 * params.g}")
    gens = params.gens
    step = min(gens)
    members = np.zeros(bound + 1, dtype=bool)
    members[0] = True
    # a block shorter than the smallest generator only looks back at finished entries
    for start in range(1, bound + 1, step):
        n = np.arange(start, min(start + step, bound + 1))
        block = np.zeros(len(n), dtype=bool)
        for gen in gens:
            back = n - gen
            valid = back >= 0
            block[valid] |= members[back[valid]]
        members[n] = block
    gaps = tuple(int(v) for v in np.flatnonzero(~members))
    members.flags.writeable = False
    return Semigroup(tuple(gens), bound, members, gaps)


def decompose(params: SuzukiParams, n: int, ell: int) -> Monomial | None:
    """The unique S' exponents of pole order n, or None when n is a gap.

    The result is returned in S' form (its ``r`` is the power of x^q + x).
    """
    if not 0 <= ell <= max_level(params):
        raise LevelError(f"level ℓ={ell} is outside 0..{max_level(params)}")
    if not 0 <= n <= ell * (params.q**2 + 1):
        raise LevelError(f"pole order {n} is outside 0..ℓ(q^2+1) for ℓ={ell}")
    q, q0 = params.q, params.q0

    d = n % q0
    n_d = (n - d * (q + 2 * q0 + 1)) // q0
    if n_d < 0:
        return None
    b = n_d % 2
    n_b = (n_d - b * (2 * q0 + 1)) // 2
    if n_b < 0:
        return None
    c = n_b % q0
    n_c = (n_b - c * (q0 + 1)) // q0
    if n_c < 0:
        return None
    a = n_c % q
    r = (n_c - a) // q

    mono = Monomial(a, b, c, d, r)
    if not mono.in_range(params, ell) or pole_order(params, mono) != n:
        return None
    return mono


@dataclass(frozen=True)
class RRBasis:
    """Basis of L(ℓD) in L(ℓD) form, ordered by the pole order of the S' partner."""

    ell: int
    monomials: tuple[Monomial, ...]
    pole_orders: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.monomials)

    def s_prime(self) -> list[Monomial]:
        return [mono.flip(self.ell) for mono in self.monomials]


def basis(params: SuzukiParams, ell: int) -> RRBasis:
    check_level(params, ell)
    monomials, orders = [], []
    for n in range(ell * (params.q**2 + 1) + 1):
        mono = decompose(params, n, ell)
        if mono is None:
            continue
        monomials.append(mono.flip(ell))
        orders.append(n)
    result = RRBasis(ell, tuple(monomials), tuple(orders))
    if result.k != expected_dimension(params, ell):
        raise LevelError(f"basis of L({ell}D) has {result.k} elements, expected {expected_dimension(params, ell)}")
    log.info("basis of L(%dD) for m=%d: %d monomials", ell, params.m, result.k)
    return result


class MonomialEvaluator:
    """Evaluates L(ℓD) monomials at points of Supp(E).

    x, y, z, w and u = x^q + x are computed once per point; rows are products
    of power tables built in the constructor (u and 1/u up to max_level).
    """

    def __init__(self, curve: SuzukiCurve, points: PointSet, row_chunk: int = 512):
        if points.j != 4 or points.with_infinity:
            raise CurveError("monomials are evaluated at affine F_(q^4)-points")
        self.curve = curve
        self.points = points
        self.row_chunk = row_chunk
        GF = curve.big.GF
        p = curve.params
        x, y, z, w = curve.eval_xyzw_array(points.x_array(), points.y_array())
        u = x**p.q + x
        if np.any(u == 0):
            raise CurveError("an evaluation point has x in F_q, so it is not in Supp(E)")
        self.GF = GF
        self._x = self._powers(x, p.q)
        self._y = self._powers(y, 2)
        self._z = self._powers(z, p.q0)
        self._w = self._powers(w, p.q0)
        self._u = self._powers(u, max_level(p) + 1)
        self._u_inv = self._powers(u**-1, max_level(p) + 1)

    def _powers(self, base: galois.FieldArray, count: int) -> galois.FieldArray:
        table = self.curve.big.GF.Ones((count, len(base)))
        for i in range(1, count):
            table[i] = table[i - 1] * base
        return table

    @property
    def n(self) -> int:
        return self.points.n_affine

    def row(self, mono: Monomial) -> galois.FieldArray:
        return self.rows([mono])[0]

    def rows(self, monomials) -> galois.FieldArray:
        """Rows of x^a y^b z^c w^d / u^r (L(ℓD) form)."""
        return self._evaluate(monomials, self._u_inv)

    def one_point_rows(self, monomials) -> galois.FieldArray:
        """Rows of x^a y^b z^c w^d u^r (S' form, the L(ℓ(q^2+1)P_inf) basis)."""
        return self._evaluate(monomials, self._u)

    def _evaluate(self, monomials, u_table: galois.FieldArray) -> galois.FieldArray:
        monomials = list(monomials)
        out = self.GF.Zeros((len(monomials), self.n))
        if not monomials:
            return out
        exps = np.array([(m.a, m.b, m.c, m.d, m.r) for m in monomials], dtype=np.int64)
        if exps[:, 4].max() >= len(u_table):
            raise LevelError(f"u exponent {int(exps[:, 4].max())} exceeds {len(u_table) - 1}")
        for lo in range(0, len(exps), self.row_chunk):
            e = exps[lo : lo + self.row_chunk]
            out[lo : lo + len(e)] = self._x[e[:, 0]] * self._y[e[:, 1]] * self._z[e[:, 2]] * self._w[e[:, 3]] * u_table[e[:, 4]]
        return out


def eval_monomial(curve: SuzukiCurve, mono: Monomial, ell: int, point: CurvePoint) -> int:
    """x^a y^b z^c w^d / (x^q + x)^r at a single point of Supp(E)."""
    params = curve.params
    if not mono.in_range(params, ell):
        raise LevelError(f"{mono} is outside the exponent ranges for ℓ={ell}")
    if point.is_infinity or point.j != 4:
        raise CurveError("basis functions are evaluated at affine F_(q^4)-points")
    ctx = curve.big
    x, y, z, w = curve.eval_xyzw(point)
    u = ctx.pow(x, params.q) ^ x
    if u == 0:
        raise CurveError("x^q + x vanishes: the point is F_q-rational, not in Supp(E)")
    value = ctx.mul(ctx.pow(x, mono.a), ctx.pow(y, mono.b))
    value = ctx.mul(value, ctx.pow(z, mono.c))
    value = ctx.mul(value, ctx.pow(w, mono.d))
    return ctx.mul(value, ctx.pow(u, -mono.r))
