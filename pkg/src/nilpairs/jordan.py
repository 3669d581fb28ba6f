"""Closed-form Jordan shape of a reduced matrix via chain-count ranks.

For a reduced pair with core block count k and ones shape lambda, the shape
is recovered from prefix ranks of the A12 corner columns (e1), of the A21
corner rows (e2), and the pairing ranks f(s) of the designated columns of
A12 * J^(s-2) * A21.  Each lambda part of size s contributes f(s+1) chains of
length s+2, g(s+1) of length s+1, and the rest of length s; the extra
2-chains are recovered by rank accounting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import ExactMatrix, block_matrix, jordan_matrix
from .partitions import Partition, ord_parts
from .reduction import ReducedPair

__all__ = ["InternalInconsistency", "ChainProfile", "power_blocks", "chain_profile", "rank_formula", "shape_of_reduced"]


class InternalInconsistency(AssertionError):
    """The chain counts are impossible; the input was not a valid reduced pair."""


@dataclass(frozen=True)
class ChainProfile:
    """Prefix ranks e1/e2 (index 0..l) and the pairing counts f, g (keys 2..lam_1+1)."""

    e1: tuple[int, ...]
    e2: tuple[int, ...]
    f: dict[int, int]
    g: dict[int, int]
    lam: Partition
    k: int

    def to_json_dict(self) -> dict:
        return {
            "e1": list(self.e1),
            "e2": list(self.e2),
            "f": {str(s): v for s, v in sorted(self.f.items())},
            "g": {str(s): v for s, v in sorted(self.g.items())},
        }


def _lam_transpose_at(lam: Partition, s: int) -> int:
    """Number of lambda parts >= s (zero beyond lam_1)."""
    if s < 1:
        raise ValueError("transpose index must be >= 1")
    return sum(1 for p in lam if p >= s)


def power_blocks(r: ReducedPair, s: int) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix, ExactMatrix]:
    """The four blocks of A^(s+1) for a reduced matrix, s >= 1.

    Returns (A12*J^(s-1)*A21, A12*J^s, J^s*A21, J^(s+1)); assembling them
    reproduces matrix^(s+1) exactly.
    """
    if s < 1:
        raise ValueError("power_blocks needs s >= 1")
    a12, a21 = r.a12(), r.a21()
    j = jordan_matrix(r.lam, r.field)
    js1 = j.power(s - 1)
    js = js1.mul(j)
    return (a12.mul(js1).mul(a21), a12.mul(js), js.mul(a21), js.mul(j))


def assemble_power(r: ReducedPair, s: int) -> ExactMatrix:
    """Block assembly of A^(s+1) from power_blocks."""
    tl, tr, bl, br = power_blocks(r, s)
    return block_matrix(r.field, [[tl, tr], [bl, br]])


def chain_profile(r: ReducedPair) -> ChainProfile:
    """Prefix ranks of X columns / Y rows and the pairing counts f, g."""
    lam = r.lam
    l = len(lam)
    k = r.k
    x = r.x_corner()
    y = r.y_corner()
    e1 = tuple(x.submatrix(0, k, 0, i).rank() if k else 0 for i in range(l + 1))
    e2 = tuple(y.submatrix(0, i, 0, k).rank() if k else 0 for i in range(l + 1))

    a12, a21 = r.a12(), r.a21()
    j = jordan_matrix(lam, r.field)
    co = r._core_offsets()
    f_map: dict[int, int] = {}
    g_map: dict[int, int] = {}
    top = lam[0] if lam else 0
    j_pow = ExactMatrix.identity(r.field, lam.n)  # J^(s-2), updated incrementally
    for s in range(2, top + 2):
        if s > 2:
            j_pow = j_pow.mul(j)
        z = a12.mul(j_pow).mul(a21)
        start = e2[_lam_transpose_at(lam, s)]
        cols = [co[t + 1] - 1 for t in range(start, k)]
        if cols:
            sub = ExactMatrix(r.field, [[z.rows[i][c] for c in cols] for i in range(z.nrows)], _canon=False)
            f_map[s] = sub.rank()
        else:
            f_map[s] = 0
        lt_prev = _lam_transpose_at(lam, s - 1)
        lt_here = _lam_transpose_at(lam, s)
        g_map[s] = e1[lt_prev] - e1[lt_here] + e2[lt_prev] - e2[lt_here] - 2 * f_map[s]
    return ChainProfile(e1=e1, e2=e2, f=f_map, g=g_map, lam=lam, k=k)


def rank_formula(r: ReducedPair, s: int, profile: ChainProfile | None = None) -> int:
    """Closed form for rk(A^(s+1)), s >= 1: rk(J^(s+1)) + e1 + e2 at lambda^T_(s+1), plus f(s+1)."""
    if s < 1:
        raise ValueError("rank_formula needs s >= 1")
    prof = profile if profile is not None else chain_profile(r)
    lam = r.lam
    tail = sum(max(p - (s + 1), 0) for p in lam)
    idx = _lam_transpose_at(lam, s + 1) if lam else 0
    return tail + prof.e1[idx] + prof.e2[idx] + prof.f.get(s + 1, 0)


def shape_of_reduced(r: ReducedPair, profile: ChainProfile | None = None) -> Partition:
    """Jordan shape of the reduced matrix from its chain profile.

    Raises InternalInconsistency when the counts are impossible, which
    signals a reduction bug rather than bad user input.
    """
    prof = profile if profile is not None else chain_profile(r)
    lam = r.lam
    lengths: list[int] = []
    seen: set[int] = set()
    for part in lam:
        if part in seen:
            continue
        seen.add(part)
        mult = sum(1 for p in lam if p == part)
        nf = prof.f.get(part + 1, 0)
        ng = prof.g.get(part + 1, 0)
        rem = mult - nf - ng
        if ng < 0 or rem < 0:
            raise InternalInconsistency(
                f"impossible chain counts for part {part}: mult={mult} f={nf} g={ng}"
            )
        lengths.extend([part + 2] * nf + [part + 1] * ng + [part] * rem)
    rank_a = r.matrix.rank()
    used_rank = sum(length - 1 for length in lengths)
    c = rank_a - used_rank
    if c < 0:
        raise InternalInconsistency(f"negative 2-chain count: rank {rank_a}, chains use {used_rank}")
    d = r.n - 2 * c - sum(lengths)
    if d < 0:
        raise InternalInconsistency(f"negative 1-chain count: n={r.n}, c={c}, lengths={lengths}")
    return ord_parts(lengths + [2] * c + [1] * d)
