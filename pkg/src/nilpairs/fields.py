"""Exact coefficient fields: GF(p) for prime p, and arbitrary-precision rationals.

GF(p) elements are canonical ints in [0, p); rational elements are
fractions.Fraction.  FieldSpec instances are values (hashable, comparable)
and carry the element arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

Element = Any  # int for GF(p), Fraction for the rationals


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either a prime field GF(p) (kind="gf", modulus p) or the rationals."""

    kind: str  # "gf" | "rational"
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "gf":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"GF modulus must be prime, got {self.p}")
        elif self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    # -- names ---------------------------------------------------------

    @property
    def name(self) -> str:
        if self.kind == "rational":
            return "rational"
        return "gf2" if self.p == 2 else f"gf:{self.p}"

    @property
    def is_finite(self) -> bool:
        return self.kind == "gf"

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("rational field is infinite")
        assert self.p is not None
        return self.p

    # -- element arithmetic --------------------------------------------

    def canon(self, x: Any) -> Element:
        """Canonical representative of x in this field."""
        if self.kind == "gf":
            return int(x) % self.p  # type: ignore[operator]
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def zero(self) -> Element:
        return 0 if self.kind == "gf" else Fraction(0)

    def one(self) -> Element:
        return 1 if self.kind == "gf" else Fraction(1)

    def add(self, a: Element, b: Element) -> Element:
        return (a + b) % self.p if self.kind == "gf" else a + b

    def sub(self, a: Element, b: Element) -> Element:
        return (a - b) % self.p if self.kind == "gf" else a - b

    def mul(self, a: Element, b: Element) -> Element:
        return (a * b) % self.p if self.kind == "gf" else a * b

    def neg(self, a: Element) -> Element:
        return (-a) % self.p if self.kind == "gf" else -a

    def inv(self, a: Element) -> Element:
        if self.kind == "gf":
            if a % self.p == 0:  # type: ignore[operator]
                raise ZeroDivisionError("inverse of zero in GF(p)")
            return pow(a, self.p - 2, self.p)  # type: ignore[arg-type]
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a

    def elements(self) -> list[Element]:
        """All field elements in canonical order (finite fields only)."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite field")
        return list(range(self.p))  # type: ignore[arg-type]

    # -- JSON entry encoding -------------------------------------------

    def entry_to_json(self, x: Element) -> Any:
        if self.kind == "gf":
            return int(x)
        f = Fraction(x)
        return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    def entry_from_json(self, v: Any) -> Element:
        if self.kind == "gf":
            if not isinstance(v, int):
                raise ValueError(f"GF(p) entries must be integers, got {v!r}")
            return v % self.p  # type: ignore[operator]
        if isinstance(v, (int, str)):
            return Fraction(v)
        raise ValueError(f"rational entries must be ints or 'num/den' strings, got {v!r}")


QQ = FieldSpec("rational")
GF2 = FieldSpec("gf", 2)
GF3 = FieldSpec("gf", 3)


def GF(p: int) -> FieldSpec:
    return FieldSpec("gf", p)


def parse_field(name: str) -> FieldSpec:
    """Parse "gf2", "gf:<p>" or "rational"."""
    name = name.strip().lower()
    if name == "rational":
        return QQ
    if name == "gf2":
        return GF2
    if name.startswith("gf:"):
        return FieldSpec("gf", int(name[3:]))
    raise ValueError(f"unknown field name {name!r}")
