"""Dense exact matrices over GF(p) and the rationals.

Provides multiplication, powers, rank (deterministic pivoting: leftmost
column, topmost nonzero row), kernels, inverses, the Jordan shape of a
nilpotent matrix via its rank sequence, and exact nilpotent Jordanization
with an explicit change of basis.

GF(p) arithmetic is routed through numpy int64 kernels when the entries are
small enough for exact accumulation; rationals always use Fraction.
"""

from __future__ import annotations

import numpy as np

from .fields import Element, FieldSpec, QQ
from .partitions import Partition, conjugate

__all__ = [
    "ExactMatrix",
    "NotNilpotent",
    "jordan_matrix",
    "jordanize_nilpotent",
    "batched_rank_sequences",
    "block_matrix",
]


class NotNilpotent(ValueError):
    """Raised when an operation requires a nilpotent matrix."""


def _np_safe(field: FieldSpec, n: int) -> bool:
    """True if GF(p) products of size n accumulate exactly in int64."""
    if not field.is_finite or n == 0:
        return field.is_finite
    return n * (field.order - 1) ** 2 < 2**62


class ExactMatrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: FieldSpec, rows, *, ncols: int | None = None, _canon: bool = True):
        if _canon:
            rows = tuple(tuple(field.canon(x) for x in r) for r in rows)
        else:
            rows = tuple(tuple(r) for r in rows)
        if rows:
            ncols = len(rows[0])
        elif ncols is None:
            ncols = 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("ExactMatrix is immutable")

    # -- construction ----------------------------------------------------

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "ExactMatrix":
        z = field.zero()
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols=ncols, _canon=False)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        z, o = field.zero(), field.one()
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], _canon=False)

    # -- basics -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.ncols == other.ncols
        )

    def __hash__(self) -> int:
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field.name}, {self.nrows}x{self.ncols})"

    def entry(self, i: int, j: int) -> Element:
        return self.rows[i][j]

    def tolists(self) -> list[list[Element]]:
        return [list(r) for r in self.rows]

    def is_zero(self) -> bool:
        z = self.field.zero()
        return all(x == z for r in self.rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.field,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            ncols=self.nrows,
            _canon=False,
        )

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "ExactMatrix":
        return ExactMatrix(
            self.field, [r[c0:c1] for r in self.rows[r0:r1]], ncols=max(c1 - c0, 0), _canon=False
        )

    # -- arithmetic ---------------------------------------------------------

    def _require_same_field(self, other: "ExactMatrix") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field.name} vs {other.field.name}")

    def add(self, other: "ExactMatrix") -> "ExactMatrix":
        self._require_same_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("dimension mismatch in add")
        f = self.field
        return ExactMatrix(
            f,
            [[f.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            _canon=False,
        )

    def sub(self, other: "ExactMatrix") -> "ExactMatrix":
        self._require_same_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("dimension mismatch in sub")
        f = self.field
        return ExactMatrix(
            f,
            [[f.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            _canon=False,
        )

    def mul(self, other: "ExactMatrix") -> "ExactMatrix":
        """Exact product; raises on dimension or field mismatch."""
        self._require_same_field(other)
        if self.ncols != other.nrows:
            raise ValueError(
                f"dimension mismatch in mul: {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        f = self.field
        if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
            return ExactMatrix.zeros(f, self.nrows, other.ncols)
        if f.is_finite and _np_safe(f, self.ncols):
            a = np.array(self.rows, dtype=np.int64)
            b = np.array(other.rows, dtype=np.int64)
            c = (a @ b) % f.order
            return ExactMatrix(f, c.tolist(), _canon=False)
        bt = other.transpose().rows
        z = f.zero()
        out = []
        for ra in self.rows:
            out.append([sum((x * y for x, y in zip(ra, cb)), z) for cb in bt])
        if f.is_finite:
            p = f.order
            out = [[x % p for x in r] for r in out]
        return ExactMatrix(f, out, _canon=False)

    def __mul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self.mul(other)

    def neg(self) -> "ExactMatrix":
        f = self.field
        return ExactMatrix(f, [[f.neg(x) for x in r] for r in self.rows], _canon=False)

    def power(self, e: int) -> "ExactMatrix":
        """Iterated multiplication with early exit once a power hits zero."""
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if e < 0:
            raise ValueError("negative power")
        acc = ExactMatrix.identity(self.field, self.nrows)
        for _ in range(e):
            if acc.is_zero():
                return acc
            acc = acc.mul(self)
        return acc

    def matvec(self, v: list[Element]) -> list[Element]:
        f = self.field
        z = f.zero()
        out = [sum((x * y for x, y in zip(row, v)), z) for row in self.rows]
        if f.is_finite:
            p = f.order
            out = [x % p for x in out]
        return out

    # -- elimination -------------------------------------------------------

    def rank(self) -> int:
        """Rank by exact Gaussian elimination, leftmost column / topmost row pivots."""
        f = self.field
        if self.nrows == 0 or self.ncols == 0:
            return 0
        if f.is_finite and f.order == 2:
            return _rank_gf2(_pack_gf2(self.rows))
        if f.is_finite and _np_safe(f, 1):
            return _rank_gf_np(self.rows, f.order)
        return _rank_python(self.tolists(), f)

    def _rref_rows(self, pivot_limit: int | None = None) -> tuple[list[list[Element]], list[int]]:
        f = self.field
        if self.nrows == 0 or self.ncols == 0:
            return self.tolists(), []
        if f.is_finite and f.order == 2:
            bits, pivots = _rref_gf2(_pack_gf2(self.rows), self.ncols, pivot_limit)
            return _unpack_gf2(bits, self.ncols), pivots
        if f.is_finite and _np_safe(f, 1):
            return _rref_gf_np(self.rows, f.order, self.ncols, pivot_limit)
        return _rref_python(self.tolists(), f, pivot_limit)

    def rref(self) -> tuple["ExactMatrix", list[int]]:
        """Reduced row echelon form and its pivot columns."""
        rows, pivots = self._rref_rows()
        return ExactMatrix(self.field, rows, ncols=self.ncols, _canon=False), pivots

    def kernel_basis(self) -> list[list[Element]]:
        """Deterministic basis of the right kernel (free columns set to one)."""
        f = self.field
        rows, pivots = self._rref_rows()
        pivot_set = set(pivots)
        basis = []
        one, zero = f.one(), f.zero()
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [zero] * self.ncols
            v[free] = one
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(rows[r][free])
            basis.append(v)
        return basis

    def inverse(self) -> "ExactMatrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        f = self.field
        n = self.nrows
        if n == 0:
            return self
        aug = ExactMatrix(
            f,
            [list(r) + [f.one() if i == j else f.zero() for j in range(n)] for i, r in enumerate(self.rows)],
            _canon=False,
        )
        rows, pivots = aug._rref_rows(pivot_limit=n)
        if pivots != list(range(n)):
            raise ValueError("matrix is singular")
        return ExactMatrix(f, [r[n:] for r in rows], _canon=False)

    def rank_sequence(self) -> list[int]:
        """Ranks [rk(A^0), rk(A^1), ...] down to the first zero power.

        Raises NotNilpotent if A^n is still nonzero.
        """
        if not self.is_square():
            raise ValueError("rank sequence of a non-square matrix")
        n = self.nrows
        if n == 0:
            return [0]
        f = self.field
        if f.is_finite and f.order == 2:
            seq = [n]
            bits = _pack_gf2(self.rows)
            power = bits
            for _ in range(n):
                r = _rank_gf2(power)
                seq.append(r)
                if r == 0:
                    return seq
                power = _mul_gf2(power, bits, n)
            raise NotNilpotent("matrix is not nilpotent")
        if f.is_finite and _np_safe(f, n):
            p = f.order
            a = np.array(self.rows, dtype=np.int64)
            powers = []
            power = a
            for _ in range(n):
                powers.append(power)
                if not power.any():
                    break
                power = (power @ a) % p
            else:
                raise NotNilpotent("matrix is not nilpotent")
            ranks = _batched_rank_modp(np.stack(powers), p)
            return [n] + [int(r) for r in ranks]
        seq = [n]
        power = self
        for _ in range(n):
            r = power.rank()
            seq.append(r)
            if r == 0:
                return seq
            power = power.mul(self)
        raise NotNilpotent("matrix is not nilpotent")

    def is_nilpotent(self) -> bool:
        if not self.is_square():
            return False
        return self.power(self.nrows).is_zero()

    def nilpotent_shape(self) -> Partition:
        """Jordan shape of a nilpotent matrix via its Weyr (rank difference) sequence."""
        seq = self.rank_sequence()
        weyr = [seq[i] - seq[i + 1] for i in range(len(seq) - 1)]
        return conjugate(Partition(weyr))

    # -- JSON ---------------------------------------------------------------

    def to_json_dict(self) -> dict:
        f = self.field
        return {"field": f.name, "rows": [[f.entry_to_json(x) for x in r] for r in self.rows]}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ExactMatrix":
        from .fields import parse_field

        field = parse_field(doc["field"])
        rows = [[field.entry_from_json(v) for v in r] for r in doc["rows"]]
        return cls(field, rows, _canon=False)


# -- elimination kernels ----------------------------------------------------
#
# GF(2) matrices are bit-packed into one int per row (LSB = column 0), which
# keeps the brute-force harness and the reduction pipeline cheap; other prime
# fields use numpy int64 row operations; the rationals use plain Fractions.


def _pack_gf2(rows) -> list[int]:
    return [sum(1 << j for j, v in enumerate(row) if v) for row in rows]


def _rank_gf2(bits: list[int]) -> int:
    table: dict[int, int] = {}
    rank = 0
    for b in bits:
        while b:
            c = (b & -b).bit_length() - 1
            other = table.get(c)
            if other is None:
                table[c] = b
                rank += 1
                break
            b ^= other
    return rank


def _rref_gf2(bits: list[int], ncols: int, pivot_limit: int | None = None) -> tuple[list[int], list[int]]:
    rows = list(bits)
    m = len(rows)
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        idx = next((i for i in range(r, m) if (rows[i] >> c) & 1), None)
        if idx is None:
            continue
        rows[r], rows[idx] = rows[idx], rows[r]
        pr = rows[r]
        for i in range(m):
            if i != r and (rows[i] >> c) & 1:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
    return rows, pivots


def _unpack_gf2(bits: list[int], ncols: int) -> list[list[int]]:
    return [[(b >> j) & 1 for j in range(ncols)] for b in bits]


def _mul_gf2(a_bits: list[int], b_bits: list[int], n: int) -> list[int]:
    out = []
    for ab in a_bits:
        acc = 0
        while ab:
            low = ab & -ab
            acc ^= b_bits[low.bit_length() - 1]
            ab ^= low
        out.append(acc)
    return out


def _batched_rref_modp(mats: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Gauss-Jordan over GF(p) for a stack of matrices.

    mats is (B, m, n) int64; returns (rref stack, pivot-column mask (B, n)).
    """
    work = mats % p
    b, m, n = work.shape
    pivmask = np.zeros((b, n), dtype=bool)
    if b == 0 or m == 0 or n == 0:
        return work, pivmask
    inv_table = np.array([0] + [pow(i, p - 2, p) for i in range(1, p)], dtype=np.int64)
    pivot_row = np.zeros(b, dtype=np.int64)
    bidx = np.arange(b)
    rowidx = np.arange(m)[None, :]
    for col in range(n):
        colvals = work[:, :, col]
        avail = (rowidx >= pivot_row[:, None]) & (colvals != 0)
        has = avail.any(axis=1)
        if not has.any():
            continue
        pick = np.where(has, avail.argmax(axis=1), 0)
        pr = pivot_row
        tmp = work[bidx, pick].copy()
        sel = bidx[has]
        work[sel, pick[has]] = work[sel, pr[has]]
        work[sel, pr[has]] = tmp[has]
        pivinv = inv_table[work[bidx, pr, col]]
        work[sel, pr[has]] = (work[sel, pr[has]] * pivinv[has, None]) % p
        colnow = work[:, :, col]
        elim = (rowidx != pr[:, None]) & (colnow != 0) & has[:, None]
        factor = np.where(elim, colnow, 0)
        work = (work - factor[:, :, None] * work[bidx, pr][:, None, :]) % p
        pivmask[:, col] = has
        pivot_row += has
    return work, pivmask


def _batched_rank_modp(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices over GF(p); mats is (B, m, n) int64 mod p."""
    _, pivmask = _batched_rref_modp(mats, p)
    return pivmask.sum(axis=1).astype(np.int64)


def _rank_gf_np(rows, p: int) -> int:
    a = np.array(rows, dtype=np.int64) % p
    m, n = a.shape
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        below = a[r + 1 :, col]
        mask = below != 0
        if mask.any():
            factors = (below[mask] * inv) % p
            a[r + 1 :][mask] = (a[r + 1 :][mask] - factors[:, None] * a[r][None, :]) % p
        r += 1
    return r


def _rref_gf_np(
    rows, p: int, ncols: int, pivot_limit: int | None = None
) -> tuple[list[list[int]], list[int]]:
    a = np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p
    m, n = a.shape
    limit = n if pivot_limit is None else pivot_limit
    r = 0
    pivots: list[int] = []
    for col in range(limit):
        if r == m:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        pv = int(a[r, col])
        if pv != 1:
            a[r] = (a[r] * pow(pv, p - 2, p)) % p
        col_vals = a[:, col].copy()
        col_vals[r] = 0
        mask = col_vals != 0
        if mask.any():
            a[mask] = (a[mask] - col_vals[mask, None] * a[r][None, :]) % p
        pivots.append(col)
        r += 1
    return a.tolist(), pivots


def _rank_python(rows: list[list[Element]], f: FieldSpec) -> int:
    m = len(rows)
    n = len(rows[0]) if rows else 0
    zero = f.zero()
    r = 0
    for col in range(n):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if rows[i][col] != zero), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = f.inv(rows[r][col])
        for i in range(r + 1, m):
            v = rows[i][col]
            if v != zero:
                factor = f.mul(v, inv)
                rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def _rref_python(
    rows: list[list[Element]], f: FieldSpec, pivot_limit: int | None = None
) -> tuple[list[list[Element]], list[int]]:
    m = len(rows)
    n = len(rows[0]) if rows else 0
    limit = n if pivot_limit is None else pivot_limit
    zero = f.zero()
    pivots: list[int] = []
    r = 0
    for col in range(limit):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if rows[i][col] != zero), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = f.inv(rows[r][col])
        if rows[r][col] != f.one():
            rows[r] = [f.mul(inv, x) for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][col] != zero:
                factor = rows[i][col]
                rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return rows, pivots


# -- Jordan machinery ---------------------------------------------------------


def jordan_matrix(shape: Partition, field: FieldSpec = QQ) -> ExactMatrix:
    """Block-diagonal upper-triangular nilpotent Jordan matrix with the given block sizes."""
    n = shape.n
    m = [[field.zero()] * n for _ in range(n)]
    one = field.one()
    off = 0
    for part in shape:
        for i in range(part - 1):
            m[off + i][off + i + 1] = one
        off += part
    return ExactMatrix(field, m, _canon=False)


class _SpanTracker:
    """Incremental echelon basis used for independence tests."""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.rows: dict[int, list[Element]] = {}
        self._p = field.order if field.is_finite else None

    def add(self, vec: list[Element]) -> bool:
        p = self._p
        v = list(vec)
        if p is not None:
            while True:
                piv = next((i for i, x in enumerate(v) if x), None)
                if piv is None:
                    return False
                row = self.rows.get(piv)
                if row is None:
                    inv = pow(v[piv], p - 2, p)
                    self.rows[piv] = [(inv * x) % p for x in v]
                    return True
                factor = v[piv]
                v = [(x - factor * y) % p for x, y in zip(v, row)]
        f = self.field
        zero = f.zero()
        while True:
            piv = next((i for i, x in enumerate(v) if x != zero), None)
            if piv is None:
                return False
            row = self.rows.get(piv)
            if row is None:
                inv = f.inv(v[piv])
                self.rows[piv] = [f.mul(inv, x) for x in v]
                return True
            factor = v[piv]
            v = [f.sub(x, f.mul(factor, y)) for x, y in zip(v, row)]


def jordanize_nilpotent(m: ExactMatrix, validate: bool = False) -> tuple[ExactMatrix, Partition]:
    """Jordan basis of a nilpotent matrix via the standard kernel-chain construction.

    Returns (P, shape) with P invertible and P^-1 * m * P == jordan_matrix(shape).
    With validate=True the postcondition is checked by exact multiplication.
    """
    if not m.is_square():
        raise ValueError("jordanize expects a square matrix")
    n = m.nrows
    f = m.field
    if n == 0:
        return ExactMatrix.identity(f, 0), Partition()

    if f.is_finite and _np_safe(f, n):
        kernels, apply_power = _kernel_tower_gf(m)
    else:
        kernels, apply_power = _kernel_tower_generic(m)
    q = len(kernels) - 1  # nilpotency index

    heads: list[tuple[list[Element], int]] = []  # (vector, chain length)
    for level in range(q, 0, -1):
        tracker = _SpanTracker(f)
        for v in kernels[level - 1]:
            tracker.add(v)
        for h, lev in heads:
            tracker.add(apply_power(lev - level, h))
        for v in kernels[level]:
            if tracker.add(v):
                heads.append((v, level))

    chains = []
    for h, lev in heads:
        chains.append([apply_power(lev - 1 - i, h) for i in range(lev)])
    chains.sort(key=len, reverse=True)

    cols: list[list[Element]] = []
    for chain in chains:
        cols.extend(chain)
    p_mat = ExactMatrix(f, [[cols[j][i] for j in range(n)] for i in range(n)], _canon=False)
    shape = Partition(sorted((len(c) for c in chains), reverse=True))

    if validate:
        j = jordan_matrix(shape, f)
        if p_mat.inverse().mul(m).mul(p_mat) != j:
            raise AssertionError("jordanize postcondition failed")
    return p_mat, shape


def _kernel_tower_generic(m: ExactMatrix):
    n = m.nrows
    powers = [ExactMatrix.identity(m.field, n)]
    while not powers[-1].is_zero():
        if len(powers) > n:
            raise NotNilpotent("matrix is not nilpotent")
        powers.append(powers[-1].mul(m))
    kernels = [[]] + [powers[i].kernel_basis() for i in range(1, len(powers))]

    def apply_power(e: int, v: list[Element]) -> list[Element]:
        return powers[e].matvec(v)

    return kernels, apply_power


def _kernel_tower_gf(m: ExactMatrix):
    """Kernel bases of all powers via one batched elimination (GF(p) fast path)."""
    n = m.nrows
    p = m.field.order
    a = np.array(m.rows, dtype=np.int64) % p
    powers = [np.eye(n, dtype=np.int64)]
    while powers[-1].any():
        if len(powers) > n:
            raise NotNilpotent("matrix is not nilpotent")
        powers.append((powers[-1] @ a) % p)
    q = len(powers) - 1
    rrefs, pivmask = _batched_rref_modp(np.stack(powers[1:]), p)
    kernels: list[list[list[int]]] = [[]]
    for idx in range(q):
        rr = rrefs[idx]
        piv = np.nonzero(pivmask[idx])[0]
        basis = []
        piv_list = [int(c) for c in piv]
        piv_set = set(piv_list)
        for free in range(n):
            if free in piv_set:
                continue
            v = [0] * n
            v[free] = 1
            for r, pc in enumerate(piv_list):
                v[pc] = int(-rr[r][free]) % p
            basis.append(v)
        kernels.append(basis)

    def apply_power(e: int, v: list[int]) -> list[int]:
        out = (powers[e] @ np.array(v, dtype=np.int64)) % p
        return [int(x) for x in out]

    return kernels, apply_power


def batched_rank_sequences(mats: list[ExactMatrix]) -> list[list[int]]:
    """Rank sequences of several nilpotent matrices, batched over one elimination.

    All matrices must be square over the same field.  Falls back to
    per-matrix computation outside the GF(p) fast path.
    """
    if not mats:
        return []
    f = mats[0].field
    n = mats[0].nrows
    if any(m.field != f or m.nrows != n or m.ncols != n for m in mats):
        raise ValueError("batched_rank_sequences needs same-size square matrices over one field")
    if n == 0:
        return [[0] for _ in mats]
    if not (f.is_finite and _np_safe(f, n)):
        return [m.rank_sequence() for m in mats]
    p = f.order
    all_powers: list[np.ndarray] = []
    counts: list[int] = []
    for m in mats:
        a = np.array(m.rows, dtype=np.int64)
        cur = a
        cnt = 0
        for _ in range(n):
            all_powers.append(cur)
            cnt += 1
            if not cur.any():
                break
            cur = (cur @ a) % p
        else:
            raise NotNilpotent("matrix is not nilpotent")
        counts.append(cnt)
    ranks = _batched_rank_modp(np.stack(all_powers), p)
    out: list[list[int]] = []
    pos = 0
    for cnt in counts:
        out.append([n] + [int(r) for r in ranks[pos : pos + cnt]])
        pos += cnt
    return out


def block_matrix(field: FieldSpec, blocks: list[list[ExactMatrix]]) -> ExactMatrix:
    """Assemble a matrix from a 2-D grid of conforming blocks."""
    rows: list[list[Element]] = []
    width = sum(b.ncols for b in blocks[0]) if blocks else 0
    for block_row in blocks:
        height = block_row[0].nrows
        for b in block_row:
            if b.nrows != height:
                raise ValueError("inconsistent block heights")
            if b.field != field:
                raise ValueError("block field mismatch")
        for i in range(height):
            row: list[Element] = []
            for b in block_row:
                row.extend(b.rows[i])
            rows.append(row)
    return ExactMatrix(field, rows, ncols=width, _canon=False)
