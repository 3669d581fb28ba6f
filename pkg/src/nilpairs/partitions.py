"""Integer partitions: construction, conjugation, enumeration, core/ones split.

Partitions are the shapes of nilpotent matrices throughout this package.
The canonical enumeration and sort order is reverse lexicographic, i.e.
(4) > (3,1) > (2,2) > (2,1,1) > (1,1,1,1), which coincides with descending
tuple comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class Partition(tuple):
    """Weakly decreasing tuple of positive integers.  Immutable, hashable.

    The empty partition (of 0) is a first-class value.
    """

    def __new__(cls, parts: Iterable[int] = ()) -> "Partition":
        t = tuple(int(x) for x in parts)
        for i, v in enumerate(t):
            if v < 1:
                raise ValueError(f"partition parts must be positive, got {v}")
            if i and t[i - 1] < v:
                raise ValueError(f"partition parts must be weakly decreasing: {t}")
        return super().__new__(cls, t)

    @property
    def n(self) -> int:
        """Total being partitioned (sum of parts)."""
        return sum(self)

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"


@dataclass(frozen=True)
class CoreSplit:
    """A partition written as (core, 1^ones) with every core part >= 2."""

    core: Partition
    ones: int

    def reassemble(self) -> Partition:
        return Partition(tuple(self.core) + (1,) * self.ones)


def conjugate(p: Partition) -> Partition:
    """Conjugate (transposed) partition: result[i-1] = #{j : p[j] >= i}."""
    if not p:
        return Partition()
    cols = [0] * p[0]
    for part in p:
        for i in range(part):
            cols[i] += 1
    return Partition(cols)


def ord_parts(seq: Iterable[int]) -> Partition:
    """Sort a sequence of nonnegative integers weakly decreasing, dropping zeros."""
    kept = sorted((int(x) for x in seq if int(x) != 0), reverse=True)
    if any(x < 0 for x in kept):
        raise ValueError("ord_parts expects nonnegative integers")
    return Partition(kept)


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of n in reverse lexicographic order, (n) first, (1^n) last."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for part in range(min(cap, remaining), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def iter_partitions(n: int) -> Iterator[Partition]:
    """Iterator variant of enumerate_partitions (same order)."""
    return iter(enumerate_partitions(n))


def split_core(p: Partition) -> CoreSplit:
    """Split p into the core of parts >= 2 and the count of trailing 1-parts."""
    ones = 0
    for part in reversed(p):
        if part == 1:
            ones += 1
        else:
            break
    return CoreSplit(core=Partition(p[: len(p) - ones]), ones=ones)


def from_core(core: Partition, ones: int) -> Partition:
    """Inverse of split_core."""
    if ones < 0:
        raise ValueError("ones must be nonnegative")
    if core and core[-1] < 2:
        raise ValueError("core parts must all be >= 2")
    return Partition(tuple(core) + (1,) * ones)


def parse_partition(text: str) -> Partition:
    """Parse the CLI text form, e.g. "3,3,2,1^8" (exponent shorthand expanded).

    The empty string parses to the empty partition.
    """
    text = text.strip()
    if text in ("", "()"):
        return Partition()
    parts: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"empty component in partition string {text!r}")
        if "^" in chunk:
            base_s, exp_s = chunk.split("^", 1)
            base, exp = int(base_s), int(exp_s)
            if exp < 0:
                raise ValueError(f"negative exponent in {chunk!r}")
            parts.extend([base] * exp)
        else:
            parts.append(int(chunk))
    return Partition(parts)


def format_partition(p: Partition) -> str:
    """Canonical text form: comma-separated parts, no exponents; "" for empty."""
    return ",".join(str(x) for x in p)


def canonical_sorted(shapes: Iterable[Partition]) -> list[Partition]:
    """Sort shapes in the canonical (reverse lexicographic) order."""
    return sorted(shapes, reverse=True)
