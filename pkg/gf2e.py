"""Arithmetic in binary extension fields GF(2^e).

A :class:`FieldCtx` owns one field.  Scalar elements are plain ints read as
bit-vectors (bit i is the coefficient of u^i); bulk work goes through
``ctx.GF``, the matching galois FieldArray class.  A context may designate a
subfield F_q, in which case it also carries the embedding F_q -> F_{q^j},
the trace down to F_q and a solver for the Artin-Schreier equation
y^q + y = c.
"""
from __future__ import annotations

import functools
import logging

import galois
import numpy as np

from errors import FieldError
from linalg import row_reduce

log = logging.getLogger(__name__)

# u^3+u+1, u^5+u^2+1, u^12+u^6+u^4+u+1, u^20+u^3+1
DEFAULT_MODULI = {
    3: 0xB,
    5: 0x25,
    12: 0x1053,
    20: 0x100009,
}

DEFAULT_TABLE_BUDGET = 2**20
# galois only builds lookup tables up to this order
_GALOIS_LOOKUP_LIMIT = 2**20


def schoolbook_mul(a: int, b: int, modulus: int) -> int:
    """Carry-less product of two residues reduced modulo ``modulus``."""
    e = modulus.bit_length() - 1
    product = 0
    while b:
        if b & 1:
            product ^= a
        b >>= 1
        a <<= 1
    for bit in range(product.bit_length() - 1, e - 1, -1):
        if product >> bit & 1:
            product ^= modulus << (bit - e)
    return product


class FieldCtx:
    """GF(2^e) with an optional designated subfield.

    Immutable after construction; safe to share.
    """

    def __init__(
        self,
        e: int,
        modulus: int | None = None,
        subfield: FieldCtx | None = None,
        table_budget: int = DEFAULT_TABLE_BUDGET,
    ):
        if e < 1:
            raise FieldError(f"extension degree must be positive, got {e}")
        if modulus is None:
            modulus = DEFAULT_MODULI.get(e)
        if modulus is None:
            modulus = int(galois.primitive_poly(2, e))
        if modulus.bit_length() - 1 != e:
            raise FieldError(f"modulus {modulus:#x} does not have degree {e}")
        if not galois.Poly.Int(modulus).is_irreducible():
            raise FieldError(f"modulus {modulus:#x} is reducible over GF(2)")

        self.e = e
        self.modulus = modulus
        self.order = 2**e
        self.table_budget = table_budget
        compile_mode = "jit-lookup" if self.order <= min(table_budget, _GALOIS_LOOKUP_LIMIT) else "jit-calculate"
        self.GF = galois.GF(2**e, irreducible_poly=modulus, compile=compile_mode)

        self.log_table: np.ndarray | None = None
        self.antilog_table: np.ndarray | None = None
        if self.order <= table_budget:
            alpha = self.GF.primitive_element
            antilog = (alpha ** np.arange(self.order - 1)).view(np.ndarray).astype(np.int64)
            logs = np.zeros(self.order, dtype=np.int64)
            logs[antilog] = np.arange(self.order - 1)
            self.antilog_table = antilog
            self.log_table = logs
            self.antilog_table.flags.writeable = False
            self.log_table.flags.writeable = False

        self.subfield = subfield
        if subfield is not None:
            self._init_subfield(subfield)
        log.info("built %s (tables: %s)", self, self.has_tables)

    def __repr__(self) -> str:
        sub = f", subfield=GF(2^{self.subfield.e})" if self.subfield is not None else ""
        return f"FieldCtx(GF(2^{self.e}), modulus={self.modulus:#x}{sub})"

    @property
    def has_tables(self) -> bool:
        return self.log_table is not None

    @property
    def subfield_degree(self) -> int | None:
        return None if self.subfield is None else self.subfield.e

    def describe(self) -> dict:
        return {"e": self.e, "modulus": f"{self.modulus:x}", "subfield_degree": self.subfield_degree}

    # -- validation and serialisation ---------------------------------------

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise FieldError(f"{a:#x} is not an element of GF(2^{self.e})")
        return a

    def to_hex(self, a: int) -> str:
        return format(self.check(a), f"0{(self.e + 3) // 4}x")

    def from_hex(self, text: str) -> int:
        try:
            value = int(text, 16)
        except ValueError as exc:
            raise FieldError(f"not a hex field element: {text!r}") from exc
        return self.check(value)

    # -- scalar arithmetic --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.check(a) ^ self.check(b)

    def mul(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        if a == 0 or b == 0:
            return 0
        if self.log_table is None:
            return schoolbook_mul(a, b, self.modulus)
        return int(self.antilog_table[(self.log_table[a] + self.log_table[b]) % (self.order - 1)])

    def inv(self, a: int) -> int:
        if self.check(a) == 0:
            raise FieldError("zero has no multiplicative inverse")
        return self.pow(a, -1)

    def pow(self, a: int, n: int) -> int:
        a = self.check(a)
        if a == 0:
            if n < 0:
                raise FieldError("zero has no multiplicative inverse")
            return 1 if n == 0 else 0
        n %= self.order - 1
        if self.log_table is not None:
            return int(self.antilog_table[(int(self.log_table[a]) * n) % (self.order - 1)])
        result = 1
        while n:
            if n & 1:
                result = schoolbook_mul(result, a, self.modulus)
            a = schoolbook_mul(a, a, self.modulus)
            n >>= 1
        return result

    def frobenius(self, a: int, k: int) -> int:
        """a^(2^k)."""
        if k < 0:
            raise FieldError(f"frobenius power must be non-negative, got {k}")
        a = self.check(a)
        if a == 0:
            return 0
        return self.pow(a, pow(2, k, self.order - 1))

    def log(self, a: int) -> int:
        if self.check(a) == 0:
            raise FieldError("log of zero")
        if self.log_table is None:
            return int(np.log(self.GF(a)))
        return int(self.log_table[a])

    def self_check(self, pairs: int = 10_000, rng: np.random.Generator | None = None) -> None:
        """Cross-check table arithmetic against schoolbook multiplication.

        Raises FieldError on the first disagreement.
        """
        rng = np.random.default_rng(0) if rng is None else rng
        if self.log_table is not None:
            if self.log_table[1] != 0:
                raise FieldError("log[1] != 0")
            nonzero = np.arange(1, self.order)
            if not np.array_equal(self.antilog_table[self.log_table[nonzero]], nonzero):
                raise FieldError("antilog[log[a]] != a")
        a = rng.integers(1, self.order, size=pairs)
        b = rng.integers(1, self.order, size=pairs)
        fast = (self.GF(a) * self.GF(b)).view(np.ndarray)
        for x, y, z in zip(a.tolist(), b.tolist(), fast.tolist()):
            expected = schoolbook_mul(x, y, self.modulus)
            if self.mul(x, y) != expected or z != expected:
                raise FieldError(f"multiplication mismatch at {x:#x} * {y:#x}")

    # -- subfield machinery -------------------------------------------------

    def _init_subfield(self, sub: FieldCtx) -> None:
        if self.e % sub.e:
            raise FieldError(f"GF(2^{sub.e}) is not a subfield of GF(2^{self.e})")
        self.q = sub.order
        self.degree_over_subfield = self.e // sub.e

        # a root of the subfield modulus among the elements fixed by x -> x^q
        step = (self.order - 1) // (sub.order - 1)
        root = None
        for i in range(sub.order - 1):
            candidate = self.pow(self._generator(), step * i)
            if self._eval_poly(sub.modulus, candidate) == 0:
                root = candidate if root is None else min(root, candidate)
        if root is None:
            raise FieldError(f"modulus {sub.modulus:#x} has no root in GF(2^{self.e})")

        powers = [self.pow(root, i) for i in range(sub.e)]
        table = np.zeros(sub.order, dtype=np.int64)
        for a in range(1, sub.order):
            image = 0
            for i in range(sub.e):
                if a >> i & 1:
                    image ^= powers[i]
            table[a] = image
        restrict = np.full(self.order, -1, dtype=np.int64)
        restrict[table] = np.arange(sub.order)
        self._embed_table = table
        self._restrict_table = restrict
        self._embed_table.flags.writeable = False
        self._restrict_table.flags.writeable = False
        self._as_system = self._artin_schreier_system()

    def _generator(self) -> int:
        return int(self.GF.primitive_element)

    def log_array(self, c) -> np.ndarray:
        """Discrete logs (base the primitive element) of nonzero elements."""
        values = np.asarray(c, dtype=np.int64)
        if np.any(values == 0):
            raise FieldError("log of zero")
        if self.log_table is not None:
            return self.log_table[values]
        return np.asarray(np.log(self.GF(values)), dtype=np.int64)

    def exp(self, k: int) -> int:
        """The primitive element raised to ``k``."""
        return self.pow(self._generator(), k)

    def _eval_poly(self, poly: int, x: int) -> int:
        # Horner over GF(2) coefficients
        acc = 0
        for bit in range(poly.bit_length() - 1, -1, -1):
            acc = self.mul(acc, x) ^ (poly >> bit & 1)
        return acc

    def _require_subfield(self) -> FieldCtx:
        if self.subfield is None:
            raise FieldError(f"{self} has no designated subfield")
        return self.subfield

    def embed(self, a: int) -> int:
        """Image of ``a`` in F_q under the fixed embedding F_q -> this field."""
        sub = self._require_subfield()
        return int(self._embed_table[sub.check(a)])

    def restrict(self, c: int) -> int:
        """Inverse of :meth:`embed`; ``c`` must lie in the image of F_q."""
        self._require_subfield()
        a = int(self._restrict_table[self.check(c)])
        if a < 0:
            raise FieldError(f"{c:#x} does not lie in the subfield GF(2^{self.subfield.e})")
        return a

    def in_subfield(self, c: int) -> bool:
        self._require_subfield()
        return bool(self._restrict_table[self.check(c)] >= 0)

    def subfield_elements(self) -> np.ndarray:
        """The embedded copy of F_q, in the order of the subfield's integer encoding."""
        self._require_subfield()
        return self._embed_table.copy()

    def trace_to_subfield(self, c: int) -> int:
        """c + c^q + ... + c^(q^(j-1)) as an element of F_q."""
        sub = self._require_subfield()
        total = 0
        for i in range(self.degree_over_subfield):
            total ^= self.frobenius(c, sub.e * i)
        return self.restrict(total)

    def artin_schreier_map(self, y: int) -> int:
        return self.frobenius(y, self._require_subfield().e) ^ self.check(y)

    def _artin_schreier_system(self) -> tuple[galois.FieldArray, list[int]]:
        """Row-reduce the GF(2) matrix of y -> y^q + y once; keep the transform and pivots."""
        e = self.e
        images = [self.artin_schreier_map(1 << i) for i in range(e)]
        A = np.array([[img >> r & 1 for img in images] for r in range(e)], dtype=np.uint8)
        augmented = galois.GF2(np.hstack([A, np.eye(e, dtype=np.uint8)]))
        R, pivots = row_reduce(augmented, ncols=e)
        transform = R[:, e:]
        expected_rank = e - self.subfield.e
        if len(pivots) != expected_rank:
            raise FieldError(f"y^q + y has rank {len(pivots)} over GF(2), expected {expected_rank}")
        return transform, pivots

    def solve_artin_schreier(self, c: int) -> int | None:
        """Some y with y^q + y = c, or None when the trace of c is nonzero.

        The full solution set is ``y + F_q``.
        """
        ys, ok = self.solve_artin_schreier_array(self.GF([self.check(c)]))
        return int(ys[0]) if ok[0] else None

    # -- vectorised forms ---------------------------------------------------

    def elements(self) -> galois.FieldArray:
        return self.GF(np.arange(self.order))

    def embed_array(self, a) -> galois.FieldArray:
        self._require_subfield()
        return self.GF(self._embed_table[np.asarray(a, dtype=np.int64)])

    def restrict_array(self, c) -> np.ndarray:
        self._require_subfield()
        out = self._restrict_table[np.asarray(c, dtype=np.int64)]
        if np.any(out < 0):
            raise FieldError("value outside the designated subfield")
        return out

    def trace_array(self, c: galois.FieldArray) -> galois.FieldArray:
        """Trace to F_q, left inside this field (the result is fixed by x -> x^q)."""
        q = self._require_subfield().order
        total = c.copy()
        power = c
        for _ in range(self.degree_over_subfield - 1):
            power = power**q
            total = total + power
        return total

    def solve_artin_schreier_array(self, c: galois.FieldArray) -> tuple[np.ndarray, np.ndarray]:
        """Batched Artin-Schreier solve.

        Returns ``(ys, solvable)``: int array of solutions (0 where unsolvable)
        and the boolean mask of right-hand sides with trace zero.  Every
        returned solution is re-checked against the equation.
        """
        self._require_subfield()
        transform, pivots = self._as_system
        values = c.view(np.ndarray).astype(np.int64)
        shifts = np.arange(self.e, dtype=np.int64)
        bits = galois.GF2(((values[:, np.newaxis] >> shifts) & 1).astype(np.uint8))
        reduced = (bits @ transform.T).view(np.ndarray).astype(np.int64)
        rank = len(pivots)
        solvable = ~np.any(reduced[:, rank:], axis=1)
        weights = np.left_shift(np.int64(1), np.asarray(pivots, dtype=np.int64))
        ys = reduced[:, :rank] @ weights
        ys[~solvable] = 0
        check = self.GF(ys[solvable])
        if np.any((check ** self.subfield.order + check) != c[solvable]):
            raise FieldError("Artin-Schreier solution failed verification")
        return ys, solvable


@functools.lru_cache(maxsize=None)
def suzuki_fields(m: int, table_budget: int = DEFAULT_TABLE_BUDGET) -> tuple[FieldCtx, FieldCtx]:
    """(F_q, F_{q^4}) for q = 2^(2m+1), with F_q designated inside F_{q^4}."""
    if m < 1:
        raise FieldError(f"m must be at least 1, got {m}")
    s = 2 * m + 1
    small = FieldCtx(s, table_budget=table_budget)
    big = FieldCtx(4 * s, subfield=small, table_budget=table_budget)
    return small, big
