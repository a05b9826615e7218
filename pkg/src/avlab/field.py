"""Coefficient fields: a prime field F_p or the rationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_PRIME = 32003


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldConfig:
    """Either ``FieldConfig.prime(p)`` or ``FieldConfig.rationals()``.

    Prime-field elements are plain ints in ``[0, p)``; rational elements are
    :class:`fractions.Fraction` (always reduced, positive denominator).
    """

    kind: str = "prime"
    p: int | None = DEFAULT_PRIME

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"{self.p!r} is not prime")
        elif self.kind == "rationals":
            if self.p is not None:
                raise ValueError("rationals take no modulus")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "FieldConfig":
        return cls("prime", p)

    @classmethod
    def rationals(cls) -> "FieldConfig":
        return cls("rationals", None)

    @classmethod
    def parse(cls, text: str) -> "FieldConfig":
        """Parse ``prime:32003`` / ``prime`` / ``rationals``."""
        text = text.strip().lower()
        if text in ("rationals", "qq", "q"):
            return cls.rationals()
        if text.startswith("prime"):
            _, _, p = text.partition(":")
            return cls.prime(int(p) if p else DEFAULT_PRIME)
        raise ValueError(f"cannot parse field {text!r}")

    def __str__(self):
        return "rationals" if self.kind == "rationals" else f"prime:{self.p}"

    @property
    def modulus(self) -> int | None:
        """The modulus for the arithmetic fast paths, or None over QQ."""
        return self.p if self.kind == "prime" else None

    # element operations -----------------------------------------------------

    def __call__(self, value) -> int | Fraction:
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.kind == "prime":
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        return Fraction(value)

    def zero(self):
        return 0 if self.kind == "prime" else Fraction(0)

    def one(self):
        return 1 if self.kind == "prime" else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "prime" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "prime" else a - b

    def mul(self, a, b):
        return a * b % self.p if self.kind == "prime" else a * b

    def neg(self, a):
        return -a % self.p if self.kind == "prime" else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "prime":
            return pow(a, -1, self.p)
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        """Least non-negative residue or reduced fraction."""
        return str(a)

    def signed(self, a) -> int | Fraction:
        """Symmetric representative, used only for pretty printing."""
        if self.kind == "prime" and a > self.p // 2:
            return a - self.p
        return a
