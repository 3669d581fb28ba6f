"""Similarity reduction of an annihilating-form matrix to its normal pattern.

Given A with A*J_mu = J_mu*A = 0 and A nilpotent, `reduce` conjugates A into
the reduced form:

  * A11 supported on core corners only,
  * A12 a 0/1 partial permutation on the (core block, lambda block) corner
    grid, pivot columns first within each run of equal lambda parts,
  * A21 corner-supported with its corner matrix in (reduced) column echelon
    form,
  * A22 equal to J_lambda,

while accumulating the exact similarity transform.  Every elementary move
keeps the matrix inside the annihilating pattern for (mu, 1^m); the stages
only ever touch statically-zero rows/columns on the silent side of each
conjugation, which is re-verified defensively before returning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import FieldSpec
from .matrix import ExactMatrix, batched_rank_sequences, jordan_matrix, jordanize_nilpotent
from .partitions import Partition, from_core, split_core
from .structure import BlockGrid, matches_annihilating_pattern

__all__ = [
    "PreconditionViolated",
    "ReductionError",
    "ReducedPair",
    "elementary_conjugation",
    "reduce",
    "is_reduced",
]


class PreconditionViolated(ValueError):
    """Input is not an annihilating-form nilpotent matrix."""


class ReductionError(AssertionError):
    """The pipeline produced a matrix failing its own postconditions (a bug)."""


# -- elementary conjugations on mutable row lists -----------------------------
#
# E = I + xi*e[p,q] acts by A -> E A E^-1, realized as the paired operation
# "row p += xi * row q" followed by "col q -= xi * col p" (on the updated
# matrix).  The transform accumulates the same row operation.


def _conj_add(field, a, t, ti, p: int, q: int, xi) -> None:
    """A <- E A E^-1, T <- E T, T^-1 <- T^-1 E^-1 for E = I + xi*e[p,q]."""
    if p == q:
        raise ValueError("elementary conjugation needs distinct positions")
    if xi == field.zero():
        return
    if field.is_finite:
        mod = field.order
        rq = a[q]
        a[p] = [(x + xi * y) % mod for x, y in zip(a[p], rq)]
        for row in a:
            row[q] = (row[q] - xi * row[p]) % mod
        tq = t[q]
        t[p] = [(x + xi * y) % mod for x, y in zip(t[p], tq)]
        if ti is not None:
            for row in ti:
                row[q] = (row[q] - xi * row[p]) % mod
        return
    mul, sub, add = field.mul, field.sub, field.add
    rq = a[q]
    a[p] = [add(x, mul(xi, y)) for x, y in zip(a[p], rq)]
    for row in a:
        row[q] = sub(row[q], mul(xi, row[p]))
    tq = t[q]
    t[p] = [add(x, mul(xi, y)) for x, y in zip(t[p], tq)]
    if ti is not None:
        for row in ti:
            row[q] = sub(row[q], mul(xi, row[p]))


def _conj_swap(a, t, ti, p: int, q: int) -> None:
    if p == q:
        return
    a[p], a[q] = a[q], a[p]
    for row in a:
        row[p], row[q] = row[q], row[p]
    t[p], t[q] = t[q], t[p]
    if ti is not None:
        for row in ti:
            row[p], row[q] = row[q], row[p]


def _conj_scale(field, a, t, ti, p: int, alpha) -> None:
    if alpha == field.one():
        return
    mul = field.mul
    inv = field.inv(alpha)
    a[p] = [mul(alpha, x) for x in a[p]]
    for row in a:
        row[p] = mul(inv, row[p])
    t[p] = [mul(alpha, x) for x in t[p]]
    if ti is not None:
        for row in ti:
            row[p] = mul(inv, row[p])


def elementary_conjugation(
    a: ExactMatrix, i: int, ri: int, j: int, rj: int, xi, grid: BlockGrid
) -> ExactMatrix:
    """Conjugate by E = I + xi*e at 1-based block position (i, ri; j, rj).

    Returns E * a * E^-1, computed by the paired row/column operation.
    """
    if not (1 <= i <= len(grid.row_partition) and 1 <= ri <= grid.row_partition[i - 1]):
        raise ValueError(f"invalid block coordinate ({i},{ri})")
    if not (1 <= j <= len(grid.row_partition) and 1 <= rj <= grid.row_partition[j - 1]):
        raise ValueError(f"invalid block coordinate ({j},{rj})")
    p = grid.row_index(i, ri)
    q = grid.row_index(j, rj)
    if p == q:
        raise ValueError("elementary conjugation needs distinct positions")
    work = a.tolists()
    t = ExactMatrix.identity(a.field, a.nrows).tolists()
    _conj_add(a.field, work, t, None, p, q, a.field.canon(xi))
    return ExactMatrix(a.field, work, _canon=False)


# -- reduced pair --------------------------------------------------------------


@dataclass(frozen=True)
class ReducedPair:
    """A matrix in reduced form together with its block data and transform."""

    mu_core: Partition
    ones: int
    lam: Partition
    matrix: ExactMatrix
    transform: ExactMatrix

    @property
    def mu(self) -> Partition:
        return from_core(self.mu_core, self.ones)

    @property
    def n(self) -> int:
        return self.matrix.nrows

    @property
    def k(self) -> int:
        return len(self.mu_core)

    @property
    def field(self) -> FieldSpec:
        return self.matrix.field

    def _core_offsets(self) -> list[int]:
        off = [0]
        for part in self.mu_core:
            off.append(off[-1] + part)
        return off

    def _lam_offsets(self) -> list[int]:
        off = [0]
        for part in self.lam:
            off.append(off[-1] + part)
        return off

    def a11(self) -> ExactMatrix:
        b = self.n - self.ones
        return self.matrix.submatrix(0, b, 0, b)

    def a12(self) -> ExactMatrix:
        b = self.n - self.ones
        return self.matrix.submatrix(0, b, b, self.n)

    def a21(self) -> ExactMatrix:
        b = self.n - self.ones
        return self.matrix.submatrix(b, self.n, 0, b)

    def a22(self) -> ExactMatrix:
        b = self.n - self.ones
        return self.matrix.submatrix(b, self.n, b, self.n)

    def x_corner(self) -> ExactMatrix:
        """k x l matrix of A12 corner entries (first core row, first lambda column)."""
        co, lo = self._core_offsets(), self._lam_offsets()
        b = self.n - self.ones
        rows = [[self.matrix.rows[co[t]][b + lo[j]] for j in range(len(self.lam))] for t in range(self.k)]
        return ExactMatrix(self.field, rows, _canon=False)

    def y_corner(self) -> ExactMatrix:
        """l x k matrix of A21 corner entries (last lambda row, last core column)."""
        co, lo = self._core_offsets(), self._lam_offsets()
        b = self.n - self.ones
        rows = [
            [self.matrix.rows[b + lo[j + 1] - 1][co[t + 1] - 1] for t in range(self.k)]
            for j in range(len(self.lam))
        ]
        return ExactMatrix(self.field, rows, _canon=False)

    def to_json_dict(self) -> dict:
        from .partitions import format_partition

        return {
            "mu": format_partition(self.mu),
            "lambda": format_partition(self.lam),
            "matrix": self.matrix.to_json_dict(),
            "transform": self.transform.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, doc: dict, validate: bool = True) -> "ReducedPair":
        from .partitions import parse_partition

        mu = parse_partition(doc["mu"])
        lam = parse_partition(doc["lambda"])
        matrix = ExactMatrix.from_json_dict(doc["matrix"])
        transform = ExactMatrix.from_json_dict(doc["transform"])
        split = split_core(mu)
        pair = cls(mu_core=split.core, ones=split.ones, lam=lam, matrix=matrix, transform=transform)
        if validate and not is_reduced(matrix, mu, lam):
            raise ValueError("matrix is not in reduced form for the given mu, lambda")
        return pair


# -- the pipeline ---------------------------------------------------------------


def reduce(a: ExactMatrix, mu: Partition, validate: bool = True, _stage_hook=None) -> ReducedPair:
    """Conjugate an annihilating-form nilpotent matrix into reduced form.

    Stages: (0) Jordanize A22, (1) clear A12 to corner columns, (2) clear A21
    to corner rows, (3) Gaussian elimination on the A12 corner matrix with
    cross-block column moves repaired back into the pattern, (4) swaps of
    equal lambda blocks so pivot columns come first in each run, (5) column
    echelon reduction of the A21 corner matrix.  The returned pair always
    satisfies transform * a * transform^-1 == matrix exactly.
    """
    mu = Partition(mu)
    n = mu.n
    f = a.field
    if a.nrows != n or a.ncols != n:
        raise PreconditionViolated(f"matrix is {a.nrows}x{a.ncols}, mu sums to {n}")
    if not matches_annihilating_pattern(a, mu):
        raise PreconditionViolated("matrix does not annihilate J_mu")
    split = split_core(mu)
    core, m = split.core, split.ones
    k = len(core)
    base = n - m

    a22_in = a.submatrix(base, n, base, n)
    if not a22_in.is_nilpotent():
        raise PreconditionViolated("matrix is not nilpotent")

    # stage 0: bring A22 to Jordan form
    if m:
        p2, lam = jordanize_nilpotent(a22_in)
        p2inv = p2.inverse()
        q_rows = [
            [f.one() if i == j else f.zero() for j in range(n)] for i in range(n)
        ]
        qinv_rows = [row[:] for row in q_rows]
        for i in range(m):
            for j in range(m):
                q_rows[base + i][base + j] = p2inv.rows[i][j]
                qinv_rows[base + i][base + j] = p2.rows[i][j]
        q = ExactMatrix(f, q_rows, _canon=False)
        qinv = ExactMatrix(f, qinv_rows, _canon=False)
        current = q.mul(a).mul(qinv)
        trans, trans_inv = q, qinv
    else:
        lam = Partition()
        current = a
        trans = ExactMatrix.identity(f, n)
        trans_inv = trans

    work = current.tolists()
    tw = trans.tolists()
    ti = trans_inv.tolists()
    l = len(lam)

    def _stage(name: str) -> None:
        if _stage_hook is not None:
            _stage_hook(name, ExactMatrix(f, [list(r) for r in work], _canon=False))

    _stage("jordanize-a22")

    co = [0]
    for part in core:
        co.append(co[-1] + part)
    lo = [0]
    for part in lam:
        lo.append(lo[-1] + part)

    def core_first(t: int) -> int:
        return co[t]

    def core_last(t: int) -> int:
        return co[t + 1] - 1

    def lam_pos(j: int, i: int) -> int:
        return base + lo[j] + i

    zero, one = f.zero(), f.one()

    # stage 1: zero A12 outside the first column of each lambda block
    for t in range(k):
        p = core_first(t)
        for j in range(l):
            for i in range(1, lam[j]):
                v = work[p][lam_pos(j, i)]
                if v != zero:
                    _conj_add(f, work, tw, ti, p, lam_pos(j, i - 1), f.neg(v))

    _stage("clear-a12")

    # stage 2: zero A21 outside the last row of each lambda block
    for t in range(k):
        qcol = core_last(t)
        for j in range(l):
            for i in range(lam[j] - 1):
                v = work[lam_pos(j, i)][qcol]
                if v != zero:
                    _conj_add(f, work, tw, ti, lam_pos(j, i + 1), qcol, v)

    _stage("clear-a21")

    # stage 3: Gaussian elimination on the A12 corner matrix X
    pivots: list[tuple[int, int]] = []  # (core row, lambda column)
    pivot_rows: set[int] = set()
    for j in range(l):
        support = [
            t for t in range(k) if t not in pivot_rows and work[core_first(t)][base + lo[j]] != zero
        ]
        if not support:
            # dependent column: zero it against earlier pivot columns
            for pr, pc in pivots:
                v = work[core_first(pr)][base + lo[j]]
                if v == zero:
                    continue
                # X column j -= v * X column pc via the block embedding move
                for i in range(lam[j]):
                    _conj_add(f, work, tw, ti, lam_pos(pc, i), lam_pos(j, i), v)
                if lam[pc] > lam[j]:
                    # the move parked v * Y[j] in a middle row of block pc; clear it
                    junk_row = lam_pos(pc, lam[j] - 1)
                    for t in range(k):
                        v2 = work[junk_row][core_last(t)]
                        if v2 != zero:
                            _conj_add(f, work, tw, ti, lam_pos(pc, lam[j]), core_last(t), v2)
            continue
        rho = len(pivots)
        t_star = support[0]
        if t_star != rho:
            _conj_swap(work, tw, ti, core_first(t_star), core_first(rho))
        v = work[core_first(rho)][base + lo[j]]
        if v != one:
            _conj_scale(f, work, tw, ti, core_first(rho), f.inv(v))
        for r in range(k):
            if r != rho:
                w = work[core_first(r)][base + lo[j]]
                if w != zero:
                    _conj_add(f, work, tw, ti, core_first(r), core_first(rho), f.neg(w))
        pivots.append((rho, j))
        pivot_rows.add(rho)

    _stage("eliminate-x")

    # stage 4: within each run of equal lambda parts, move pivot columns first
    pivot_cols = {pc for _, pc in pivots}
    j0 = 0
    while j0 < l:
        j1 = j0
        while j1 + 1 < l and lam[j1 + 1] == lam[j0]:
            j1 += 1
        run = list(range(j0, j1 + 1))
        desired = [c for c in run if c in pivot_cols] + [c for c in run if c not in pivot_cols]
        slot_content = list(run)  # slot position -> original column living there
        for pos, want in enumerate(desired):
            cur = slot_content.index(want)
            if cur != pos:
                b1, b2 = run[pos], run[cur]
                for i in range(lam[j0]):
                    _conj_swap(work, tw, ti, lam_pos(b1, i), lam_pos(b2, i))
                slot_content[pos], slot_content[cur] = slot_content[cur], slot_content[pos]
        j0 = j1 + 1

    _stage("reorder-runs")

    # stage 5: column echelon reduction of the A21 corner matrix Y
    cur = 0
    for i in range(l):
        if cur == k:
            break
        row = lam_pos(i, lam[i] - 1)
        cand = [c for c in range(cur, k) if work[row][core_last(c)] != zero]
        if not cand:
            continue
        if cand[0] != cur:
            _conj_swap(work, tw, ti, core_last(cand[0]), core_last(cur))
        v = work[row][core_last(cur)]
        if v != one:
            _conj_scale(f, work, tw, ti, core_last(cur), v)
        for c in range(k):
            if c != cur:
                w = work[row][core_last(c)]
                if w != zero:
                    _conj_add(f, work, tw, ti, core_last(cur), core_last(c), w)
        cur += 1

    _stage("echelon-y")

    matrix = ExactMatrix(f, work, _canon=False)
    transform = ExactMatrix(f, tw, _canon=False)
    pair = ReducedPair(mu_core=core, ones=m, lam=lam, matrix=matrix, transform=transform)

    if validate:
        _verify(pair, a, mu, ExactMatrix(f, ti, _canon=False))
    return pair


def _verify(pair: ReducedPair, original: ExactMatrix, mu: Partition, tinv: ExactMatrix | None = None) -> None:
    matrix, transform = pair.matrix, pair.transform
    if not is_reduced(matrix, mu, pair.lam):
        raise ReductionError("pipeline output is not in reduced form")
    if tinv is None:
        try:
            tinv = transform.inverse()
        except ValueError as exc:  # pragma: no cover
            raise ReductionError("accumulated transform is singular") from exc
    elif transform.mul(tinv) != ExactMatrix.identity(matrix.field, matrix.nrows):
        raise ReductionError("accumulated inverse transform is wrong")  # pragma: no cover
    if transform.mul(original).mul(tinv) != matrix:
        raise ReductionError("conjugation relation transform*a*transform^-1 failed")
    seq_in, seq_out = batched_rank_sequences([original, matrix])
    if seq_in != seq_out:
        raise ReductionError("rank sequence changed during reduction")  # pragma: no cover


# -- the reduced-form predicate ---------------------------------------------------


def is_reduced(a: ExactMatrix, mu: Partition, lam: Partition) -> bool:
    """Reduced-form predicate: corner supports, partial-permutation A12 with the
    prefix-rank run conditions, column-echelon A21 corner matrix, A22 == J_lambda."""
    mu = Partition(mu)
    lam = Partition(lam)
    n = mu.n
    if a.nrows != n or a.ncols != n:
        return False
    split = split_core(mu)
    core, m = split.core, split.ones
    if lam.n != m:
        return False
    if not matches_annihilating_pattern(a, mu):
        return False
    f = a.field
    zero, one = f.zero(), f.one()
    k = len(core)
    l = len(lam)
    base = n - m

    co = [0]
    for part in core:
        co.append(co[-1] + part)
    lo = [0]
    for part in lam:
        lo.append(lo[-1] + part)

    # A22 == J_lambda
    j_lam = jordan_matrix(lam, f)
    for i in range(m):
        for j in range(m):
            if a.rows[base + i][base + j] != j_lam.rows[i][j]:
                return False

    # A12 supported on corner grid only, entries all 1, count == rank
    x_rows = [[a.rows[co[t]][base + lo[j]] for j in range(l)] for t in range(k)]
    first_cols = {base + lo[j] for j in range(l)}
    nonzeros = 0
    for t in range(k):
        r = co[t]
        for c in range(base, n):
            v = a.rows[r][c]
            if v != zero:
                if c not in first_cols:
                    return False
                if v != one:
                    return False
                nonzeros += 1
    x_mat = ExactMatrix(f, x_rows, _canon=False) if k and l else None
    x_rank = x_mat.rank() if x_mat is not None else 0
    if nonzeros != x_rank:
        return False

    # prefix-rank conditions per run of equal lambda parts
    e1 = [0] * (l + 1)
    if x_mat is not None:
        for i in range(1, l + 1):
            e1[i] = x_mat.submatrix(0, k, 0, i).rank()
    elif l:
        e1 = [0] * (l + 1)
    j0 = 0
    while j0 < l:
        j1 = j0
        while j1 + 1 < l and lam[j1 + 1] == lam[j0]:
            j1 += 1
        s = j1 - j0 + 1
        t1 = j0 + 1  # 1-based index of the first run column
        ok = False
        for i in range(0, s + 1):
            if t1 + i > l:
                break
            if e1[t1 + i] == e1[t1] + i and e1[t1 + s - 1] == e1[t1 + i]:
                ok = True
                break
        if not ok:
            return False
        j0 = j1 + 1

    # A21 supported on corner grid only, corner matrix in column echelon form
    last_rows = {base + lo[j + 1] - 1: j for j in range(l)}
    for r in range(base, n):
        for t in range(k):
            if a.rows[r][co[t + 1] - 1] != zero and r not in last_rows:
                return False
    y_rows = [[a.rows[base + lo[j + 1] - 1][co[t + 1] - 1] for t in range(k)] for j in range(l)]
    lead: list[int | None] = []
    for c in range(k):
        nz = next((r for r in range(l) if y_rows[r][c] != zero), None)
        lead.append(nz)
    seen_zero = False
    prev = -1
    for c in range(k):
        if lead[c] is None:
            seen_zero = True
        else:
            if seen_zero:
                return False
            if lead[c] <= prev:
                return False
            prev = lead[c]
    return True
