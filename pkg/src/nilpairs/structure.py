"""Block structure of matrices that commute with / annihilate a Jordan matrix.

For B = J_mu the commuting matrices are exactly the block upper-triangular
Toeplitz ones; the mutually annihilating ones additionally vanish outside a
single corner per block.  This module exposes both the product-based and the
structural (pattern) predicates, the list of free coordinates, and
exhaustive / seeded generation of candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from . import rng
from .fields import FieldSpec
from .matrix import ExactMatrix, jordan_matrix
from .partitions import Partition, split_core

__all__ = [
    "BlockGrid",
    "FreeCoordinates",
    "BudgetExceeded",
    "is_commuting_form",
    "matches_commuting_pattern",
    "is_annihilating_form",
    "matches_annihilating_pattern",
    "free_coordinates",
    "enumerate_candidates",
    "candidate_at",
    "candidate_count",
    "sample_candidate",
    "sample_nilpotent_candidate",
]

DEFAULT_BUDGET = 2**24


class BudgetExceeded(RuntimeError):
    """Enumeration would exceed the configured candidate budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} candidates, budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class BlockGrid:
    """Row/column partitions with cumulative block offsets."""

    row_partition: Partition
    col_partition: Partition

    @property
    def row_offsets(self) -> tuple[int, ...]:
        return _offsets(self.row_partition)

    @property
    def col_offsets(self) -> tuple[int, ...]:
        return _offsets(self.col_partition)

    def row_index(self, block: int, pos: int) -> int:
        """Absolute 0-based row of 1-based (block, pos)."""
        return self.row_offsets[block - 1] + pos - 1

    def col_index(self, block: int, pos: int) -> int:
        return self.col_offsets[block - 1] + pos - 1


def _offsets(p: Partition) -> tuple[int, ...]:
    out = [0]
    for part in p:
        out.append(out[-1] + part)
    return tuple(out)


@dataclass(frozen=True)
class FreeCoordinates:
    """Positions (0-based) that may be nonzero for A with A*J_mu = J_mu*A = 0."""

    mu: Partition
    positions: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.positions)


def free_coordinates(mu: Partition) -> FreeCoordinates:
    """Free positions, row-major: k^2 core corners, k*m in A12, m*k in A21, m^2 in A22."""
    split = split_core(mu)
    core, m = split.core, split.ones
    k = len(core)
    off = _offsets(core)
    n = mu.n
    base = n - m  # ones block start
    pos: list[tuple[int, int]] = []
    for i in range(k):
        row = off[i]  # first row of core block i
        for j in range(k):
            pos.append((row, off[j + 1] - 1))  # last column of core block j
        for j in range(m):
            pos.append((row, base + j))
    for i in range(m):
        row = base + i
        for j in range(k):
            pos.append((row, off[j + 1] - 1))
        for j in range(m):
            pos.append((row, base + j))
    pos.sort()
    return FreeCoordinates(mu=mu, positions=tuple(pos))


# -- predicates ---------------------------------------------------------------


def is_commuting_form(a: ExactMatrix, mu: Partition) -> bool:
    """True iff a commutes with J_mu (checked by exact products)."""
    _require_size(a, mu)
    j = jordan_matrix(mu, a.field)
    return a.mul(j) == j.mul(a)


def matches_commuting_pattern(a: ExactMatrix, mu: Partition) -> bool:
    """Structural twin of is_commuting_form: every block upper-triangular Toeplitz.

    Block (i, j) of sizes r x c may be nonzero only on the diagonals
    q - p >= c - min(r, c), with constant values along each diagonal.
    """
    _require_size(a, mu)
    off = _offsets(mu)
    t = len(mu)
    for bi in range(t):
        for bj in range(t):
            r, c = mu[bi], mu[bj]
            lo = c - min(r, c)
            for p in range(r):
                for q in range(c):
                    v = a.rows[off[bi] + p][off[bj] + q]
                    if q - p < lo:
                        if v != a.field.zero():
                            return False
                    elif p + 1 < r and q + 1 < c:
                        if v != a.rows[off[bi] + p + 1][off[bj] + q + 1]:
                            return False
    return True


def is_annihilating_form(a: ExactMatrix, mu: Partition) -> bool:
    """True iff a * J_mu == 0 and J_mu * a == 0 (checked by exact products)."""
    _require_size(a, mu)
    j = jordan_matrix(mu, a.field)
    return a.mul(j).is_zero() and j.mul(a).is_zero()


def matches_annihilating_pattern(a: ExactMatrix, mu: Partition) -> bool:
    """Structural twin of is_annihilating_form: support inside the free coordinates."""
    _require_size(a, mu)
    allowed = set(free_coordinates(mu).positions)
    zero = a.field.zero()
    for i, row in enumerate(a.rows):
        for j, v in enumerate(row):
            if v != zero and (i, j) not in allowed:
                return False
    return True


def _require_size(a: ExactMatrix, mu: Partition) -> None:
    n = mu.n
    if a.nrows != n or a.ncols != n:
        raise ValueError(f"matrix is {a.nrows}x{a.ncols}, expected {n}x{n} for mu={tuple(mu)}")


# -- generation ---------------------------------------------------------------


def candidate_count(mu: Partition, field: FieldSpec) -> int:
    """Number of candidates |F|^((k+m)^2) of the exhaustive enumeration."""
    if not field.is_finite:
        raise ValueError("exhaustive enumeration needs a finite field")
    return field.order ** len(free_coordinates(mu))


def candidate_at(mu: Partition, field: FieldSpec, index: int) -> ExactMatrix:
    """Candidate at a given odometer position.

    Coordinates are row-major; the first coordinate is the most significant
    digit, so the last free coordinate cycles fastest.
    """
    free = free_coordinates(mu)
    q = field.order
    total = q ** len(free)
    if not 0 <= index < total:
        raise ValueError(f"candidate index {index} out of range [0, {total})")
    n = mu.n
    rows = [[0] * n for _ in range(n)]
    for r, c in reversed(free.positions):
        index, digit = divmod(index, q)
        rows[r][c] = digit
    return ExactMatrix(field, rows, _canon=False)


def enumerate_candidates(
    mu: Partition, field: FieldSpec, budget: int = DEFAULT_BUDGET
) -> Iterator[ExactMatrix]:
    """Yield every annihilating-form candidate exactly once (odometer order).

    Raises BudgetExceeded up front when |F|^((k+m)^2) > budget.  Candidates
    are not filtered for nilpotency.
    """
    total = candidate_count(mu, field)
    if total > budget:
        raise BudgetExceeded(total, budget)
    free = free_coordinates(mu)
    q = field.order
    n = mu.n
    coords = free.positions
    digits = [0] * len(coords)
    rows = [[0] * n for _ in range(n)]
    while True:
        yield ExactMatrix(field, [list(r) for r in rows], _canon=False)
        # odometer increment, last coordinate fastest
        i = len(coords) - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] < q:
                rows[coords[i][0]][coords[i][1]] = digits[i]
                break
            digits[i] = 0
            rows[coords[i][0]][coords[i][1]] = 0
            i -= 1
        if i < 0:
            return


def sample_candidate(mu: Partition, field: FieldSpec, seed: int, index: int = 0) -> ExactMatrix:
    """Deterministic pseudorandom assignment to the free coordinates.

    Sample `index` draws splitmix64 stream positions [index*F, (index+1)*F)
    of the stream keyed by `seed`, so a (seed, index) pair pins the matrix.
    Not necessarily nilpotent.
    """
    free = free_coordinates(mu)
    vals = rng.values_mod(seed, index * len(free), len(free), field.order)
    n = mu.n
    rows = [[0] * n for _ in range(n)]
    for (r, c), v in zip(free.positions, vals):
        rows[r][c] = v
    return ExactMatrix(field, rows, _canon=False)


def sample_nilpotent_candidate(mu: Partition, field: FieldSpec, seed: int) -> ExactMatrix:
    """Seeded annihilating-form candidate that is guaranteed nilpotent.

    An annihilating-form matrix is nilpotent exactly when its ones-block A22
    is, so A22 starts strictly upper triangular and is scrambled by seeded
    elementary conjugations and diagonal rescalings (similarity preserves
    nilpotency); the remaining free coordinates are drawn directly.
    """
    split = split_core(mu)
    m = split.ones
    q = field.order
    free = free_coordinates(mu)
    n = mu.n
    base = n - m
    rows = [[0] * n for _ in range(n)]
    outer = [(r, c) for (r, c) in free.positions if r < base or c < base]
    vals = rng.values_mod(seed, 0, len(outer), q)
    for (r, c), v in zip(outer, vals):
        rows[r][c] = v
    if m:
        cursor = len(outer)
        strict = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                strict[i][j] = rng.splitmix64(seed, cursor) % q
                cursor += 1
        # scramble by elementary conjugations E = I + xi*e[p,q]; stays nilpotent
        for step in range(3 * m):
            p = rng.splitmix64(seed, cursor) % m
            qq = rng.splitmix64(seed, cursor + 1) % m
            xi = rng.splitmix64(seed, cursor + 2) % q
            cursor += 3
            if p == qq or xi == 0:
                continue
            rq = strict[qq]
            strict[p] = [(x + xi * y) % q for x, y in zip(strict[p], rq)]
            for row in strict:
                row[qq] = (row[qq] - xi * row[p]) % q
        for i in range(m):
            alpha = 1 + rng.splitmix64(seed, cursor) % (q - 1) if q > 2 else 1
            cursor += 1
            if alpha != 1:
                inv = pow(alpha, q - 2, q)
                strict[i] = [(alpha * x) % q for x in strict[i]]
                for row in strict:
                    row[i] = (row[i] * inv) % q
        for i in range(m):
            for j in range(m):
                rows[base + i][base + j] = strict[i][j]
    return ExactMatrix(field, rows, _canon=False)
