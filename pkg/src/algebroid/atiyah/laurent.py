"""Laurent polynomials in one variable with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping


class Laurent:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self.terms = {e: Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, e: int, c=1) -> "Laurent":
        return cls({e: c})

    def __add__(self, other: "Laurent") -> "Laurent":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out)

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + other.scale(-1)

    def __neg__(self) -> "Laurent":
        return self.scale(-1)

    def __mul__(self, other: "Laurent") -> "Laurent":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return Laurent(out)

    def scale(self, c) -> "Laurent":
        return Laurent({e: c * v for e, v in self.terms.items()})

    def shift(self, k: int) -> "Laurent":
        return Laurent({e + k: c for e, c in self.terms.items()})

    def deriv(self) -> "Laurent":
        return Laurent({e - 1: e * c for e, c in self.terms.items()})

    def invert(self) -> "Laurent":
        """Substitute the variable by its inverse."""
        return Laurent({-e: c for e, c in self.terms.items()})

    def coeff(self, e: int) -> Fraction:
        return self.terms.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        return all(e >= 0 for e in self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*t^{e}" for e, c in sorted(self.terms.items()))


ZERO = Laurent()
ONE = Laurent.monomial(0)
