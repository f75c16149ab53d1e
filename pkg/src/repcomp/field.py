"""Base fields: the rationals and prime fields F_p."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Scalar = Union[int, Fraction]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A perfect base field: ``kind`` is ``"rational"`` or ``"prime"``.

    Scalars are canonical: :class:`fractions.Fraction` in lowest terms over Q,
    the least nonnegative residue (a plain ``int``) over F_p.
    """

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == "prime":
            if self.p is None or not _is_prime(int(self.p)):
                raise ValueError(f"modulus must be a prime >= 2, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", int(p))

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    @property
    def order(self) -> int | None:
        """Number of elements, or ``None`` for Q."""
        return self.p

    @property
    def characteristic(self) -> int:
        return self.p if self.is_prime else 0

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_prime else Fraction(1)

    def __call__(self, x) -> Scalar:
        """Coerce ``x`` (int, Fraction or decimal string) into canonical form."""
        if isinstance(x, str):
            return self.parse(x)
        if self.is_prime:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def parse(self, s: str) -> Scalar:
        s = s.strip()
        try:
            return self(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad scalar {s!r}: {exc}") from None

    def format(self, x: Scalar) -> str:
        return str(x)

    def inv(self, x: Scalar) -> Scalar:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime:
            return pow(x, -1, self.p)
        return 1 / x

    def elements(self) -> Iterator[int]:
        if not self.is_prime:
            raise ValueError("Q is infinite")
        return iter(range(self.p))

    def random_element(self, rng: random.Random, bound: int = 5) -> Scalar:
        if self.is_prime:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-bound, bound))

    def to_json(self) -> dict:
        if self.is_prime:
            return {"type": "prime", "p": self.p}
        return {"type": "rational"}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        kind = obj.get("type")
        if kind == "rational":
            return cls.rational()
        if kind == "prime":
            return cls.prime(obj["p"])
        raise ValueError(f"unknown field type {kind!r}")

    def __str__(self) -> str:
        return f"F_{self.p}" if self.is_prime else "Q"


QQ = FieldSpec.rational()


def GF(p: int) -> FieldSpec:
    return FieldSpec.prime(p)
