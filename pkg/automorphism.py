"""Affine automorphisms of the Suzuki curve and the code invariance they imply.

Every map here has the normal form T_c o Tr_{a,b} with a, b, c in F_q, c != 0:

    Tr_{a,b}(x, y) = (x + a, y + a^q0 x + b)
    T_c(x, y)      = (c x, c^(q0+1) y)

so (x, y) -> (c(x + a), c^(q0+1)(y + a^q0 x + b)).  These fix P_inf, form a
group of order q^2(q-1) and act on D and on Supp(E).  Parameters are stored as
F_q integers and embedded into F_{q^4} when acting on F_{q^4}-points.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import galois
import numpy as np

from agcode import SuzukiCode, contains_many, encode_many, random_messages
from curve import CurvePoint, PointSet, SuzukiCurve
from errors import AutomorphismError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AffineAut:
    a: int
    b: int
    c: int

    @classmethod
    def identity(cls) -> AffineAut:
        return cls(0, 0, 1)

    @classmethod
    def translation(cls, a: int, b: int) -> AffineAut:
        return cls(a, b, 1)

    @classmethod
    def torus(cls, c: int) -> AffineAut:
        return cls(0, 0, c)

    @classmethod
    def random(cls, rng: np.random.Generator, q: int) -> AffineAut:
        a, b = (int(v) for v in rng.integers(0, q, size=2))
        return cls(a, b, int(rng.integers(1, q)))

    @property
    def is_identity(self) -> bool:
        return self == AffineAut.identity()

    def validate(self, curve: SuzukiCurve) -> AffineAut:
        q = curve.params.q
        if not (0 <= self.a < q and 0 <= self.b < q and 0 <= self.c < q):
            raise AutomorphismError(f"{self} has a parameter outside F_{q}")
        if self.c == 0:
            raise AutomorphismError(f"{self} has c = 0")
        return self

    def compose(self, other: AffineAut, curve: SuzukiCurve) -> AffineAut:
        """self o other: apply ``other`` first."""
        F = curve.small
        q0 = curve.params.q0
        self.validate(curve)
        other.validate(curve)
        # move T_{c2} left past Tr_{a1,b1}, then merge the two translations
        c2_inv = F.inv(other.c)
        a1 = F.mul(self.a, c2_inv)
        b1 = F.mul(self.b, F.pow(c2_inv, q0 + 1))
        a = a1 ^ other.a
        b = b1 ^ other.b ^ F.mul(F.pow(a1, q0), other.a)
        return AffineAut(a, b, F.mul(self.c, other.c))

    def inverse(self, curve: SuzukiCurve) -> AffineAut:
        F = curve.small
        q0 = curve.params.q0
        self.validate(curve)
        undo_translation = AffineAut.translation(self.a, self.b ^ F.pow(self.a, q0 + 1))
        return undo_translation.compose(AffineAut.torus(F.inv(self.c)), curve)


def _params_in(curve: SuzukiCurve, sigma: AffineAut, j: int) -> tuple[int, int, int]:
    sigma.validate(curve)
    if j == 1:
        return sigma.a, sigma.b, sigma.c
    big = curve.big
    return big.embed(sigma.a), big.embed(sigma.b), big.embed(sigma.c)


def apply(curve: SuzukiCurve, sigma: AffineAut, point: CurvePoint) -> CurvePoint:
    if point.is_infinity:
        return point
    F = curve.field(point.j)
    q0 = curve.params.q0
    a, b, c = _params_in(curve, sigma, point.j)
    x, y = F.check(point.x), F.check(point.y)
    new_x = F.mul(c, x ^ a)
    new_y = F.mul(F.pow(c, q0 + 1), y ^ F.mul(F.pow(a, q0), x) ^ b)
    return CurvePoint(point.j, new_x, new_y)


def apply_array(
    curve: SuzukiCurve, sigma: AffineAut, x: galois.FieldArray, y: galois.FieldArray, j: int = 4
) -> tuple[galois.FieldArray, galois.FieldArray]:
    """Images of the affine points (x, y) over F_{q^j}."""
    GF = curve.field(j).GF
    q0 = curve.params.q0
    a, b, c = (GF(v) for v in _params_in(curve, sigma, j))
    return c * (x + a), c ** (q0 + 1) * (y + a**q0 * x + b)


def certify(
    curve: SuzukiCurve, sigma: AffineAut, samples: int = 1000, rng: np.random.Generator | None = None
) -> bool:
    """Check that sigma keeps sampled F_{q^4}-points of the curve on the curve."""
    rng = rng or np.random.default_rng(0)
    points = curve.enumerate_points(4)
    idx = rng.integers(0, points.n_affine, size=samples)
    x, y = apply_array(curve, sigma, points.x_array()[idx], points.y_array()[idx])
    return bool(curve.on_curve_array(x, y).all())


def point_permutation(curve: SuzukiCurve, sigma: AffineAut, points: PointSet) -> np.ndarray:
    """perm[i] = index of sigma(P_i) in ``points``.

    P_inf, when present, is position 0 and stays there.
    """
    x, y = apply_array(curve, sigma, points.x_array(), points.y_array(), j=points.j)
    images = points.affine_index(x.view(np.ndarray), y.view(np.ndarray))
    if np.any(images < 0):
        missing = int(np.flatnonzero(images < 0)[0])
        raise AutomorphismError(f"{sigma} maps point {missing} outside the point list")
    offset = int(points.with_infinity)
    perm = np.concatenate([np.zeros(offset, dtype=np.int64), images + offset])
    if len(np.unique(perm)) != len(perm):
        raise AutomorphismError(f"{sigma} does not permute the point list")
    return perm


def permutation_order(perm: np.ndarray) -> int:
    """Order of the permutation: lcm of its cycle lengths."""
    seen = np.zeros(len(perm), dtype=bool)
    order = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = int(perm[i])
            length += 1
        order = math.lcm(order, length)
    return order


def translation_orbit(curve: SuzukiCurve, point: CurvePoint) -> set[tuple[int, int]]:
    """Images of ``point`` under all q^2 translations Tr_{a,b}."""
    q = curve.params.q
    orbit = set()
    for a in range(q):
        for b in range(q):
            image = apply(curve, AffineAut.translation(a, b), point)
            orbit.add((image.x, image.y))
    return orbit


@dataclass(frozen=True)
class InvarianceReport:
    sigma: AffineAut
    fixes_D: bool
    permutes_E: bool
    trials: int
    failures: int
    counterexample: tuple[int, ...] | None = None  # first codeword whose image left the code

    @property
    def passed(self) -> bool:
        return self.fixes_D and self.permutes_E and self.failures == 0


def invariance_check(code: SuzukiCode, sigma: AffineAut, trials: int, rng: np.random.Generator) -> InvarianceReport:
    """Permute random codewords by sigma and test membership with the parity checks.

    The permuted word is w o sigma^(-1): its coordinate at sigma(P_i) is w_i.
    """
    curve = code.curve
    small_points = curve.enumerate_points(1)
    fixes_D = True
    try:
        point_permutation(curve, sigma, small_points)
    except AutomorphismError:
        fixes_D = False
    try:
        perm = point_permutation(curve, sigma, code.points)
    except AutomorphismError:
        return InvarianceReport(sigma, fixes_D, False, trials, trials)

    words = encode_many(code, random_messages(code, trials, rng))
    permuted = code.GF.Zeros(words.shape)
    permuted[:, perm] = words
    ok = contains_many(code, permuted)
    failures = int((~ok).sum())
    counterexample = None
    if failures:
        log.warning("%s: %d of %d permuted codewords left the code", sigma, failures, trials)
        counterexample = tuple(words[int(np.argmin(ok))].view(np.ndarray).tolist())
    return InvarianceReport(sigma, fixes_D, True, trials, failures, counterexample)
