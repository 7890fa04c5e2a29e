"""The codes C_{m,ℓ} = C_L(E, ℓD) over F_{q^4}, their duals and erasure decoding.

E is the sum of the F_{q^4}-rational points that are not F_q-rational and D
the sum of the F_q-rational points.  Coordinates follow the canonical order of
Supp(E); rows of the generator matrix follow the canonical basis order
(ascending pole order of the S' partner).

Duality.  With t(X) the product of (X - alpha) over the splitting set T and
u = x^q + x, the residues of f g u^(q^2+2g-1) dx / t(x) vanish in total for
f in L(ℓD) and g in L(ℓ'D), ℓ' = q^2 + 2g - 2 - ℓ.  Hence the dual code is
the level-ℓ' code scaled coordinate-wise by h = u^(q^2+2g-1) / t'(x).
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Sequence

import galois
import numpy as np

from curve import PointSet, SuzukiCurve, SuzukiParams
from errors import CodeError, InconsistentWordError, LevelError, RankDeficientError
from linalg import rank as matrix_rank
from linalg import row_reduce, solve
from riemann_roch import Monomial, MonomialEvaluator, RRBasis, basis, check_level

log = logging.getLogger(__name__)

DEFAULT_MEMORY_BUDGET = 1 << 30


@dataclass(frozen=True)
class CodeParams:
    m: int
    ell: int
    n: int
    k: int
    dstar: int
    t: int

    @property
    def rate(self) -> float:
        return self.k / self.n


def compute_params(m: int, ell: int) -> CodeParams:
    p = SuzukiParams.for_m(m)
    check_level(p, ell)
    q, q0 = p.q, p.q0
    n = q**4 + 2 * q0 * q**2 * (q - 1) - q**2
    k = ell * (q**2 + 1) - p.g + 1
    dstar = n - ell * (q**2 + 1)
    return CodeParams(m=m, ell=ell, n=n, k=k, dstar=dstar, t=(dstar - 1) // 2)


def family_rate(m: int) -> float:
    """Rate of C_m = C_{m, q^2-1}; tends to 1 as m grows."""
    p = SuzukiParams.for_m(m)
    return compute_params(m, p.q**2 - 1).rate


def dual_level(params: SuzukiParams, ell: int) -> int | None:
    """ℓ' with C_{m,ℓ}^perp equivalent to C_{m,ℓ'}, when ℓ' is itself a valid level."""
    check_level(params, ell)
    if ell < 2 * params.g - 1:
        return None
    return params.q**2 + 2 * params.g - 2 - ell


def isodual_level(params: SuzukiParams) -> int:
    return params.q**2 // 2 + params.g - 1


def iso_orthogonal(params: SuzukiParams, ell: int) -> bool:
    return ell <= isodual_level(params)


class SuzukiCode:
    """C_{m,ℓ} with its generator matrix G[j, i] = f_j(P_i). Not modified after build."""

    def __init__(
        self,
        curve: SuzukiCurve,
        params: CodeParams,
        points: PointSet,
        rr: RRBasis,
        G: galois.FieldArray,
        evaluator: MonomialEvaluator,
    ):
        self.curve = curve
        self.params = params
        self.points = points
        self.basis = rr
        self.G = G
        self.evaluator = evaluator

    def __repr__(self) -> str:
        p = self.params
        return f"SuzukiCode(m={p.m}, ℓ={p.ell}, [{p.n}, {p.k}, >={p.dstar}])"

    @property
    def GF(self) -> type[galois.FieldArray]:
        return self.curve.big.GF

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    def constant_row(self) -> int:
        """Row index of the constant function 1 (S' pole order ℓ q^2)."""
        return self.basis.monomials.index(Monomial(0, 0, 0, 0, 0))

    @functools.cached_property
    def scaling(self) -> galois.FieldArray:
        return dual_scaling_vector(self)

    @functools.cached_property
    def H(self) -> galois.FieldArray:
        """The dual level's evaluation matrix scaled by h; rows span the dual code."""
        ell_dual = dual_level(self.curve.params, self.params.ell)
        if ell_dual is None:
            raise LevelError(
                f"ℓ={self.params.ell} < 2g-1={2 * self.curve.params.g - 1}: the dual is not a code of this family"
            )
        dual_basis = basis(self.curve.params, ell_dual)
        return self.evaluator.rows(dual_basis.monomials) * self.scaling[np.newaxis, :]

    @functools.cached_property
    def systematic(self) -> tuple[galois.FieldArray, list[int]]:
        R, pivots = row_reduce(self.G)
        return R, pivots


def build_code(curve: SuzukiCurve, ell: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> SuzukiCode:
    params = compute_params(curve.params.m, ell)
    needed = params.k * params.n * 4
    if needed > memory_budget:
        raise CodeError(
            f"generator matrix {params.k}x{params.n} needs about {needed / 2**30:.1f} GiB, budget is "
            f"{memory_budget / 2**30:.1f} GiB"
        )
    points = curve.rational_points_E()
    rr = basis(curve.params, ell)
    evaluator = MonomialEvaluator(curve, points)
    G = evaluator.rows(rr.monomials)
    log.info("built generator matrix %dx%d for m=%d, ℓ=%d", params.k, params.n, params.m, ell)
    return SuzukiCode(curve, params, points, rr, G, evaluator)


def _as_vector(code: SuzukiCode, values, length: int, what: str) -> galois.FieldArray:
    if isinstance(values, galois.FieldArray):
        vector = values
    else:
        vector = code.GF(np.asarray(values, dtype=np.int64))
    if vector.shape != (length,):
        raise CodeError(f"{what} must have length {length}, got {vector.shape[0] if vector.ndim else 0}")
    return vector


def encode(code: SuzukiCode, msg, systematic: bool = False) -> galois.FieldArray:
    """msg . G; message symbol j is the coefficient of the j-th basis function.

    With ``systematic=True`` the row-reduced generator is used instead, so the
    message appears unchanged on the information set.
    """
    vector = _as_vector(code, msg, code.k, "message")
    if systematic:
        R, _ = code.systematic
        return vector @ R
    return vector @ code.G


def encode_many(code: SuzukiCode, msgs: galois.FieldArray) -> galois.FieldArray:
    if msgs.ndim != 2 or msgs.shape[1] != code.k:
        raise CodeError(f"messages must be an array of shape (count, {code.k})")
    return msgs @ code.G


def random_messages(code: SuzukiCode, count: int, rng: np.random.Generator) -> galois.FieldArray:
    """``count`` uniformly random nonzero messages."""
    msgs = rng.integers(0, code.GF.order, size=(count, code.k))
    zero = ~msgs.any(axis=1)
    msgs[zero, 0] = 1
    return code.GF(msgs)


def sample_weights(code: SuzukiCode, count: int, rng: np.random.Generator, batch: int = 50) -> np.ndarray:
    """Hamming weights of ``count`` random nonzero codewords."""
    weights = []
    for lo in range(0, count, batch):
        words = encode_many(code, random_messages(code, min(batch, count - lo), rng))
        weights.append(np.count_nonzero(words.view(np.ndarray), axis=1))
    return np.concatenate(weights) if weights else np.zeros(0, dtype=np.int64)


def erasure_decode(code: SuzukiCode, received: Sequence[int | None]) -> galois.FieldArray:
    """The unique message whose codeword agrees with every non-erased symbol.

    Raises InconsistentWordError when no codeword agrees and RankDeficientError
    when the surviving coordinates do not pin the message down.
    """
    if len(received) != code.n:
        raise CodeError(f"received word must have length {code.n}, got {len(received)}")
    known = np.array([i for i, v in enumerate(received) if v is not None], dtype=np.int64)
    values = code.GF(np.array([received[i] for i in known], dtype=np.int64))
    if len(known) < code.k:
        raise RankDeficientError(len(known), code.k)
    columns = code.G[:, known]
    msg, rank = solve(columns.T, values)
    if msg is None:
        raise InconsistentWordError(f"no codeword matches the {len(known)} surviving symbols")
    if rank < code.k:
        raise RankDeficientError(rank, code.k)
    if np.any(msg @ columns != values):
        raise InconsistentWordError("re-encoded message disagrees with the surviving symbols")
    log.debug("decoded %d erasures at ℓ=%d", code.n - len(known), code.params.ell)
    return msg


@dataclass(frozen=True)
class ErasurePattern:
    """Erased coordinate indices of a received word."""

    indices: frozenset[int]

    @classmethod
    def random(cls, n: int, count: int, rng: np.random.Generator) -> ErasurePattern:
        return cls(frozenset(rng.choice(n, size=count, replace=False).tolist()))

    def __len__(self) -> int:
        return len(self.indices)

    def guaranteed(self, code: SuzukiCode) -> bool:
        """Whether d* alone guarantees recovery from this many erasures."""
        return len(self) <= code.params.dstar - 1

    def apply(self, word) -> list[int | None]:
        received = [int(v) for v in np.asarray(word).tolist()]
        if self.indices and max(self.indices) >= len(received):
            raise CodeError(f"erasure index {max(self.indices)} is outside a word of length {len(received)}")
        for i in self.indices:
            received[i] = None
        return received


@dataclass(frozen=True)
class ErasureTrial:
    erasures: int
    outcome: str  # "recovered", "rank-deficient", "inconsistent" or "wrong"
    rank: int | None = None

    @property
    def silent_failure(self) -> bool:
        return self.outcome == "wrong"


def erasure_trial(code: SuzukiCode, erasures: int, rng: np.random.Generator) -> ErasureTrial:
    """Erase ``erasures`` random coordinates of a random codeword and try to recover the message."""
    msg = random_messages(code, 1, rng)[0]
    pattern = ErasurePattern.random(code.n, erasures, rng)
    try:
        decoded = erasure_decode(code, pattern.apply(encode(code, msg).view(np.ndarray)))
    except RankDeficientError as exc:
        return ErasureTrial(erasures, "rank-deficient", exc.rank)
    except InconsistentWordError:
        return ErasureTrial(erasures, "inconsistent")
    outcome = "recovered" if np.array_equal(decoded, msg) else "wrong"
    return ErasureTrial(erasures, outcome, code.k)


@functools.lru_cache(maxsize=None)
def splitting_derivative(curve: SuzukiCurve) -> tuple[np.ndarray, np.ndarray]:
    """(T, t'(T)): the splitting set and the derivative of prod_{alpha in T}(X - alpha) on it."""
    big = curve.big
    T = curve.splitting_x_values()
    N = big.order - 1
    derivative = np.empty(len(T), dtype=np.int64)
    for i, alpha in enumerate(T.tolist()):
        diffs = T ^ alpha
        derivative[i] = big.exp(int(big.log_array(diffs[diffs != 0]).sum() % N))
    return T, derivative


def splitting_derivative_is_constant(curve: SuzukiCurve) -> bool:
    _, derivative = splitting_derivative(curve)
    return bool(np.all(derivative == derivative[0]))


def dual_scaling_vector(code: SuzukiCode) -> galois.FieldArray:
    """h_i = (x_i^q + x_i)^(q^2+2g-1) / t'(x_i); every entry is nonzero on Supp(E)."""
    p = code.curve.params
    x = code.points.x_array()
    u = x**p.q + x
    T, derivative = splitting_derivative(code.curve)
    correction = code.GF(derivative[np.searchsorted(T, code.points.xs)])
    h = u ** (p.q**2 + 2 * p.g - 1) / correction
    if np.any(h == 0):
        raise CodeError("dual scaling vanishes at a point of Supp(E)")
    return h


def parity_check(code: SuzukiCode) -> galois.FieldArray:
    """k' x n matrix whose rows span the dual of ``code`` (cached on the code)."""
    return code.H


def systematic_generator(code: SuzukiCode) -> tuple[galois.FieldArray, list[int]]:
    """Reduced row echelon form of G and its information set."""
    return code.systematic


def contains(code: SuzukiCode, word) -> bool:
    """Membership via the dual code's rows as parity checks (needs ℓ >= 2g-1)."""
    vector = _as_vector(code, word, code.n, "word")
    return not np.any(code.H @ vector)


def contains_many(code: SuzukiCode, words: galois.FieldArray) -> np.ndarray:
    syndromes = code.H @ words.T
    return ~np.any(syndromes.view(np.ndarray), axis=0)


@dataclass(frozen=True)
class DualityReport:
    ell: int
    ell_dual: int
    n: int
    k: int
    k_dual: int
    samples: int
    failures: int
    first_counterexample: tuple[int, int] | None
    full_checked: bool = False
    full_zero: bool | None = None

    @property
    def dimensions_add_up(self) -> bool:
        return self.k + self.k_dual == self.n

    @property
    def passed(self) -> bool:
        return self.dimensions_add_up and self.failures == 0 and self.full_zero is not False


def verify_duality(code: SuzukiCode, samples: int, rng: np.random.Generator, full: bool = False) -> DualityReport:
    """Check k + k' = n and sum_i f(P_i) g(P_i) h_i = 0 on sampled basis pairs (all pairs with ``full``)."""
    ell = code.params.ell
    ell_dual = dual_level(code.curve.params, ell)
    if ell_dual is None:
        raise LevelError(f"ℓ={ell} has no dual level; need 2g-1 <= ℓ")
    dual_basis = basis(code.curve.params, ell_dual)
    f_idx = rng.integers(0, code.k, size=samples)
    g_idx = rng.integers(0, dual_basis.k, size=samples)
    checks = code.evaluator.rows([dual_basis.monomials[j] for j in g_idx.tolist()]) * code.scaling[np.newaxis, :]
    products = np.add.reduce(code.G[f_idx] * checks, axis=1)
    bad = np.flatnonzero(products.view(np.ndarray))
    first = (int(f_idx[bad[0]]), int(g_idx[bad[0]])) if bad.size else None

    full_zero = None
    if full:
        gram = code.G @ code.H.T
        full_zero = not np.any(gram.view(np.ndarray))
    report = DualityReport(
        ell=ell,
        ell_dual=ell_dual,
        n=code.n,
        k=code.k,
        k_dual=dual_basis.k,
        samples=samples,
        failures=int(bad.size),
        first_counterexample=first,
        full_checked=full,
        full_zero=full_zero,
    )
    log.info("duality ℓ=%d vs ℓ'=%d: %d/%d sampled pairs failed", ell, ell_dual, report.failures, samples)
    return report


def one_point_scaling(code: SuzukiCode) -> galois.FieldArray:
    """u_i^ℓ with u = x^q + x, the column scaling from C_L(E, ℓD) to C_L(E, ℓ(q^2+1)P_inf)."""
    x = code.points.x_array()
    return (x**code.curve.params.q + x) ** code.params.ell


def one_point_generator(code: SuzukiCode) -> galois.FieldArray:
    """Generator of the one-point code C_L(E, ℓ(q^2+1)P_inf), rows in the order of G.

    Multiplying by u^ℓ maps L(ℓD) onto L(ℓ(q^2+1)P_inf) since D ~ (q^2+1)P_inf,
    so this equals G * one_point_scaling(code) column by column.
    """
    return code.evaluator.one_point_rows(code.basis.s_prime())


def rank_check(code: SuzukiCode) -> int:
    return matrix_rank(code.G)


def shorten(code: SuzukiCode, dropped: Sequence[int]) -> tuple[galois.FieldArray, np.ndarray]:
    """Generator of the subcode vanishing on ``dropped``, restricted to the other coordinates.

    Returns the generator rows and the kept coordinate indices.
    """
    dropped = np.unique(np.asarray(dropped, dtype=np.int64))
    keep = np.setdiff1d(np.arange(code.n), dropped)
    combos = code.G[:, dropped].T.null_space()
    return combos @ code.G[:, keep], keep


def genmat_lines(code: SuzukiCode) -> list[str]:
    p = code.params
    ctx = code.curve.big
    width = (ctx.e + 3) // 4
    header = (
        f"# m={p.m} ell={p.ell} n={p.n} k={p.k} modulus={ctx.modulus:x} "
        f"point_order_sha256={code.points.order_hash()}"
    )
    rows = code.G.view(np.ndarray)
    return [header] + [" ".join(f"{v:0{width}x}" for v in row.tolist()) for row in rows]
