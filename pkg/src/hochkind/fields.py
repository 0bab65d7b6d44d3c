"""Exact coefficient fields: the rationals and prime fields F_p.

Scalars are plain Python objects (fractions.Fraction for Q, ints in [0, p)
for F_p); the field object supplies the arithmetic.  No floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SchemaError

__all__ = ["Rationals", "PrimeField", "field_from_string", "QQ"]


class Rationals:
    name = "Q"
    char = 0
    finite = False

    zero = Fraction(0)
    one = Fraction(1)

    def of(self, n, d=1):
        return Fraction(n, d)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def is_zero(self, a):
        return a == 0

    def parse(self, s):
        try:
            return Fraction(str(s).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational literal {s!r}") from exc

    def format(self, a):
        return str(a)

    def elements(self):
        raise NotImplementedError("Q is infinite")

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    finite = True

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise SchemaError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.char = p
        self.zero = 0
        self.one = 1 % p

    def of(self, n, d=1):
        return n * self.inv(d % self.p) % self.p if d != 1 else n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def parse(self, s):
        text = str(s).strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                return self.div(int(num), int(den))
            except ValueError as exc:
                raise SchemaError(f"bad field literal {s!r}") from exc
        try:
            return int(text) % self.p
        except ValueError as exc:
            raise SchemaError(f"bad field literal {s!r}") from exc

    def format(self, a):
        return str(a % self.p)

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return self.name


QQ = Rationals()


def field_from_string(s):
    """Parse a field tag: "Q" or "F<p>" (e.g. "F5")."""
    text = str(s).strip()
    if text == "Q":
        return QQ
    if text.startswith("F"):
        try:
            return PrimeField(int(text[1:]))
        except ValueError as exc:
            raise SchemaError(f"bad field tag {s!r}") from exc
    raise SchemaError(f"bad field tag {s!r}")
