"""Exact Laurent-polynomial arithmetic and q-combinatorics.

Coefficients are arbitrary-precision integers throughout; there is no
floating point anywhere.  Divisions are performed by long division with a
zero-remainder check, so any inexact division raises instead of rounding.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache

from .errors import DomainError, InvariantError

__all__ = [
    "LaurentPoly",
    "QBase",
    "BASE_Q",
    "BASE_NEG_Q",
    "BASE_Q2",
    "q_integer",
    "q_factorial",
    "q_binomial",
    "d_number",
    "d_bullet_number",
    "odd_product",
    "check_q_identity",
]


class LaurentPoly:
    """A Laurent polynomial in one variable q with integer coefficients.

    Stored as a dict mapping exponent to nonzero coefficient.  Instances
    are immutable by convention; all operations return new objects.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            data = {}
        elif isinstance(terms, int):
            data = {0: terms} if terms else {}
        elif isinstance(terms, dict):
            data = {int(e): int(c) for e, c in terms.items() if c}
        else:
            raise TypeError(f"cannot build LaurentPoly from {type(terms).__name__}")
        object.__setattr__(self, "terms", data)

    # -- constructors -------------------------------------------------

    @classmethod
    def gen(cls):
        """The variable q itself."""
        return cls({1: 1})

    @classmethod
    def monomial(cls, coeff, exp):
        return cls({exp: coeff})

    @classmethod
    def from_pairs(cls, pairs):
        data = {}
        for e, c in pairs:
            data[int(e)] = data.get(int(e), 0) + int(c)
        return cls(data)

    # -- basic protocol -----------------------------------------------

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"LaurentPoly({self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "q" if e == 1 else f"q^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return LaurentPoly(other)
        if isinstance(other, LaurentPoly):
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        data = dict(self.terms)
        for e, c in other.terms.items():
            data[e] = data.get(e, 0) + c
        return LaurentPoly(data)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        data = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                data[e] = data.get(e, 0) + c1 * c2
        return LaurentPoly(data)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("LaurentPoly powers must be nonnegative integers")
        out = LaurentPoly(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure -----------------------------------------------------

    def degree(self):
        if not self.terms:
            return None
        return max(self.terms)

    def valuation(self):
        if not self.terms:
            return None
        return min(self.terms)

    def shift(self, k):
        """Multiply by q^k."""
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def constant_value(self):
        """The value of a constant polynomial, or a DomainError."""
        if not self.terms:
            return 0
        if set(self.terms) != {0}:
            raise DomainError("polynomial is not constant")
        return self.terms[0]

    def divexact(self, divisor):
        """Exact division; raises InvariantError on any remainder.

        Because every division performed by this package is exact by
        theory, a failure here means a formula was implemented wrong.
        """
        divisor = self._coerce(divisor)
        if divisor is None or not isinstance(divisor, LaurentPoly):
            raise TypeError("divisor must be a LaurentPoly or int")
        if not divisor:
            raise InvariantError("division by zero polynomial")
        if not self:
            return LaurentPoly(0)
        # Normalize both to honest polynomials with the divisor's leading
        # term explicit, then run classical descending long division with
        # an integer-divisibility check at each step.
        vf, vg = self.valuation(), divisor.valuation()
        rem = dict(self.shift(-vf).terms)
        g = divisor.shift(-vg).terms
        dg = max(g)
        lead_g = g[dg]
        quot = {}
        while rem:
            dr = max(rem)
            if dr < dg:
                raise InvariantError("inexact polynomial division (remainder)")
            c, r = divmod(rem[dr], lead_g)
            if r:
                raise InvariantError("inexact polynomial division (coefficient)")
            e = dr - dg
            quot[e] = c
            for eg, cg in g.items():
                k = e + eg
                nc = rem.get(k, 0) - c * cg
                if nc:
                    rem[k] = nc
                else:
                    rem.pop(k, None)
        return LaurentPoly(quot).shift(vf - vg)

    # -- evaluation ----------------------------------------------------

    def eval_at(self, value):
        """Exact evaluation at an int or Fraction point."""
        if isinstance(value, int) and (not self.terms or min(self.terms) >= 0):
            return sum(c * value**e for e, c in self.terms.items())
        t = Fraction(value)
        return sum(Fraction(c) * t**e for e, c in self.terms.items())

    def eval_mod(self, qv, p):
        """Evaluation modulo a prime p (negative exponents use inverses)."""
        total = 0
        inv = None
        for e, c in self.terms.items():
            if e >= 0:
                total += c * pow(qv, e, p)
            else:
                if inv is None:
                    inv = pow(qv, -1, p)
                total += c * pow(inv, -e, p)
        return total % p

    # -- serialization ---------------------------------------------------

    def to_pairs(self):
        """Sorted [[exponent, coefficient], ...] with no zero entries."""
        return [[e, self.terms[e]] for e in sorted(self.terms)]


class QBase:
    """A substitution base for q-integers: one of q, -q, q^2, or an
    integer constant."""

    __slots__ = ("poly", "label")

    def __init__(self, poly, label):
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("QBase is immutable")

    @classmethod
    def integer(cls, c):
        if c == 1:
            raise DomainError("base 1 makes q-integer quotients degenerate")
        return cls(LaurentPoly(c), str(c))

    def __eq__(self, other):
        if not isinstance(other, QBase):
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"QBase({self.label})"


_GEN = LaurentPoly.gen()
BASE_Q = QBase(_GEN, "q")
BASE_NEG_Q = QBase(-_GEN, "-q")
BASE_Q2 = QBase(_GEN * _GEN, "q^2")


@cache
def q_integer(n, base=BASE_Q):
    """The n-th q-integer 1 + b + ... + b^(n-1); by convention 1 at n=0."""
    if n < 0:
        raise DomainError("q-integer index must be nonnegative")
    if n == 0:
        return LaurentPoly(1)
    out = LaurentPoly(1)
    power = LaurentPoly(1)
    for _ in range(n - 1):
        power = power * base.poly
        out = out + power
    return out


@cache
def q_factorial(n, base=BASE_Q):
    if n < 0:
        raise DomainError("q-factorial index must be nonnegative")
    if n == 0:
        return LaurentPoly(1)
    return q_factorial(n - 1, base) * q_integer(n, base)


@cache
def q_binomial(n, m, base=BASE_Q):
    """Gaussian binomial [n choose m] in the given base."""
    if n < 0 or m < 0 or m > n:
        raise DomainError(f"q-binomial ({n}, {m}) is out of range")
    num = q_factorial(n, base)
    den = q_factorial(m, base) * q_factorial(n - m, base)
    return num.divexact(den)


def _sign(k):
    """(-1)**k for any integer k, without float surprises."""
    return 1 if k % 2 == 0 else -1


def _neg_q_pow(k):
    """(-q)^k as a LaurentPoly (k may be any nonnegative integer)."""
    return LaurentPoly({k: _sign(k)})


@cache
def d_number(r):
    """The degree-r alternating sum of odd multiples of base -q binomials.

    d_r = sum over 0 <= t <= r of (-1)^t (2t+1) q^(t(t+1)) [2r+1 choose r-t]
    taken in base -q.  d_0 = 1, d_1 = -2q^2 - q + 1.
    """
    if r < 0:
        raise DomainError("d-number index must be nonnegative")
    total = LaurentPoly(0)
    for t in range(r + 1):
        term = q_binomial(2 * r + 1, r - t, BASE_NEG_Q).shift(t * (t + 1))
        total = total + _sign(t) * (2 * t + 1) * term
    return total


@cache
def d_bullet_number(r):
    """The companion of d_r obtained by a two-step exact division by q+1.

    d-bullet_r = (d_r + ((-q)^(r+1) - 1)/(q+1) * product over odd
    exponents) / (q+1).  Both divisions are exact for every r; a
    remainder would raise.
    """
    if r < 0:
        raise DomainError("d-number index must be nonnegative")
    q_plus_one = _GEN + 1
    correction = (_neg_q_pow(r + 1) - 1).divexact(q_plus_one)
    inner = d_number(r) + correction * odd_product(r, "even")
    return inner.divexact(q_plus_one)


@cache
def odd_product(r, variant="even"):
    """Product of (q^e + 1) over the first r odd exponents.

    variant 'even' uses exponents 1, 3, ..., 2r-1; variant 'odd' uses
    3, 5, ..., 2r+1.  Empty product is 1.
    """
    if r < 0:
        raise DomainError("odd-product length must be nonnegative")
    if variant not in ("even", "odd"):
        raise DomainError(f"unknown odd-product variant {variant!r}")
    out = LaurentPoly(1)
    for i in range(1, r + 1):
        e = 2 * i - 1 if variant == "even" else 2 * i + 1
        out = out * (LaurentPoly({e: 1}) + 1)
    return out


def _gauss_lhs(k):
    total = LaurentPoly(0)
    for d in range(-k, k + 1):
        total = total + q_binomial(2 * k, k - d, BASE_NEG_Q).shift(d * d)
    return total


def _weighted_lhs(k):
    total = LaurentPoly(0)
    for d in range(-k - 1, k + 1):
        term = q_binomial(2 * k + 1, k - d, BASE_NEG_Q).shift(d * d + d)
        total = total + _sign(d) * d * term
    for d in range(-k, k + 1):
        term = q_binomial(2 * k, k - d, BASE_NEG_Q).shift(d * d + d)
        total = total - _sign(d) * d * term
    return total


def _signed_lhs(k):
    total = LaurentPoly(0)
    for d in range(-k, k + 1):
        term = q_binomial(2 * k, k - d, BASE_NEG_Q).shift(d * d + d)
        total = total + _sign(d) * term
    return total


def _odd_chain_sides(k):
    lhs = LaurentPoly(0)
    for d in range(k + 1):
        lhs = lhs + d_number(d) * q_binomial(k, d, BASE_Q2).shift((k - d) ** 2)
    rhs = LaurentPoly({k * (k + 2): 1})
    q_plus_one = _GEN + 1
    for d in range(1, k + 1):
        coeff = q_plus_one * d_number(d) + _neg_q_pow(d + 1) * odd_product(d, "even")
        rhs = rhs + coeff * q_binomial(k, d, BASE_Q2).shift((k - d) * (k - d + 2))
    return lhs, rhs


def check_q_identity(which, k):
    """Return LHS - RHS of a named q-identity (zero iff it holds).

    Supported names:
      gauss     -- unsigned base -q binomial sum against the odd product
      weighted  -- index-weighted alternating sum, consecutive widths
      signed    -- alternating base -q binomial sum
      odd_chain -- d-number recursion against base q^2 binomials
    """
    if k < 0:
        raise DomainError("identity index must be nonnegative")
    if which == "gauss":
        return _gauss_lhs(k) - odd_product(k, "even")
    if which == "weighted":
        return _weighted_lhs(k) - _neg_q_pow(k) * odd_product(k, "even")
    if which == "signed":
        return _signed_lhs(k) - _neg_q_pow(k) * odd_product(k, "even")
    if which == "odd_chain":
        lhs, rhs = _odd_chain_sides(k)
        return lhs - rhs
    raise DomainError(f"unknown identity {which!r}")
