"""Symmetric Laurent polynomials and twisted character formulas.

The ring modeled here is generated by r variables m_1, ..., m_r (each
standing for a paired diagonal entry plus its inverse), an auxiliary
invertible variable lam, and Laurent-polynomial coefficients in q.  Twisted
characters of the exterior-power representations are computed both from a
closed form and by brute-force expansion over index subsets; the two must
always agree.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cache
from math import comb

from .errors import DomainError, InvariantError
from .qcalc import LaurentPoly

__all__ = [
    "SymLaurent",
    "elem_sym",
    "character",
    "character_bruteforce",
    "check_lambda_identity",
]


def _as_coeff(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, int):
        return LaurentPoly(value)
    raise TypeError(f"cannot use {type(value).__name__} as a coefficient")


class SymLaurent:
    """Polynomial in m_1..m_rank and lam^{+-1} with LaurentPoly coefficients.

    terms maps (monomial, lam_exponent) to a nonzero LaurentPoly, where
    monomial is a tuple of rank nonnegative integers.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, rank, terms=None):
        if rank < 0:
            raise DomainError("rank must be nonnegative")
        data = {}
        for (mono, lam), coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != rank or any(e < 0 for e in mono):
                raise DomainError(f"bad monomial {mono} for rank {rank}")
            coeff = _as_coeff(coeff)
            if coeff:
                key = (mono, int(lam))
                if key in data:
                    coeff = data[key] + coeff
                if coeff:
                    data[key] = coeff
                else:
                    data.pop(key, None)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("SymLaurent is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, rank):
        return cls(rank)

    @classmethod
    def one(cls, rank):
        return cls.const(rank, 1)

    @classmethod
    def const(cls, rank, c):
        return cls(rank, {((0,) * rank, 0): _as_coeff(c)})

    @classmethod
    def gen(cls, rank, i):
        """The i-th variable m_i (1-based)."""
        if not 1 <= i <= rank:
            raise DomainError(f"variable index {i} outside 1..{rank}")
        mono = tuple(1 if j == i - 1 else 0 for j in range(rank))
        return cls(rank, {(mono, 0): 1})

    @classmethod
    def lam_power(cls, rank, k):
        return cls(rank, {((0,) * rank, int(k)): 1})

    # -- protocol ------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def _coerce(self, other):
        if isinstance(other, SymLaurent):
            if other.rank != self.rank:
                raise DomainError("rank mismatch")
            return other
        if isinstance(other, (int, LaurentPoly)):
            return SymLaurent.const(self.rank, other)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __repr__(self):
        return f"SymLaurent(rank={self.rank}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, lam in sorted(self.terms, key=lambda k: (k[0], k[1])):
            coeff = self.terms[(mono, lam)]
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(f"m{i + 1}")
                elif e > 1:
                    factors.append(f"m{i + 1}^{e}")
            if lam == 1:
                factors.append("lam")
            elif lam:
                factors.append(f"lam^{lam}")
            cs = str(coeff)
            if factors and cs == "1":
                cs = ""
            elif factors and cs == "-1":
                cs = "-"
            elif (" " in cs or cs.startswith("-")) and factors:
                cs = f"({cs})"
            body = "*".join(factors)
            if cs in ("", "-"):
                parts.append(cs + body)
            elif body:
                parts.append(f"{cs}*{body}")
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        data = dict(self.terms)
        for key, coeff in other.terms.items():
            cur = data.get(key)
            new = coeff if cur is None else cur + coeff
            if new:
                data[key] = new
            else:
                data.pop(key, None)
        out = SymLaurent(self.rank)
        object.__setattr__(out, "terms", data)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = SymLaurent(self.rank)
        object.__setattr__(out, "terms", {k: -c for k, c in self.terms.items()})
        return out

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
        for (m1, l1), c1 in self.terms.items():
            for (m2, l2), c2 in other.terms.items():
                key = (tuple(a + b for a, b in zip(m1, m2)), l1 + l2)
                prod = c1 * c2
                cur = data.get(key)
                new = prod if cur is None else cur + prod
                if new:
                    data[key] = new
                else:
                    data.pop(key, None)
        out = SymLaurent(self.rank)
        object.__setattr__(out, "terms", data)
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("SymLaurent powers must be nonnegative integers")
        out = SymLaurent.one(self.rank)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure -----------------------------------------------------

    def coeff_lambda(self, k):
        """The coefficient of lam^k, as a lam-free SymLaurent."""
        data = {
            (mono, 0): coeff
            for (mono, lam), coeff in self.terms.items()
            if lam == k
        }
        return SymLaurent(self.rank, data)

    def is_symmetric(self):
        """True when invariant under all permutations of m_1..m_rank."""
        for i in range(self.rank - 1):
            swapped = {}
            for (mono, lam), coeff in self.terms.items():
                m = list(mono)
                m[i], m[i + 1] = m[i + 1], m[i]
                swapped[(tuple(m), lam)] = coeff
            if swapped != self.terms:
                return False
        return True

    def eval_fraction(self, m_values, lam_value=Fraction(1), q_value=None):
        """Exact evaluation with Fractions; q_value may be omitted when
        every coefficient is constant."""
        if len(m_values) != self.rank:
            raise DomainError("wrong number of variable values")
        ms = [Fraction(v) for v in m_values]
        lv = Fraction(lam_value)
        total = Fraction(0)
        for (mono, lam), coeff in self.terms.items():
            c = (
                coeff.eval_at(Fraction(q_value))
                if q_value is not None
                else Fraction(coeff.constant_value())
            )
            term = Fraction(c)
            for v, e in zip(ms, mono):
                term *= v**e
            term *= lv**lam
            total += term
        return total

    def eval_mod(self, m_values, p, q_value=1, lam_value=1):
        """Evaluation modulo a prime p."""
        if len(m_values) != self.rank:
            raise DomainError("wrong number of variable values")
        ms = [int(v) % p for v in m_values]
        lv = int(lam_value) % p
        total = 0
        for (mono, lam), coeff in self.terms.items():
            term = coeff.eval_mod(q_value, p)
            for v, e in zip(ms, mono):
                term = term * pow(v, e, p) % p
            if lam >= 0:
                term = term * pow(lv, lam, p) % p
            else:
                term = term * pow(pow(lv, -1, p), -lam, p) % p
            total = (total + term) % p
        return total

    def to_entries(self):
        """Sorted [[monomial, lam_exp, coeff_pairs], ...] serialization."""
        out = []
        for mono, lam in sorted(self.terms, key=lambda k: (k[0], k[1])):
            out.append([list(mono), lam, self.terms[(mono, lam)].to_pairs()])
        return out


def elem_sym(rank, delta):
    """Elementary symmetric polynomial of degree delta in m_1..m_rank."""
    if not 0 <= delta <= rank:
        raise DomainError(f"elementary symmetric degree {delta} outside 0..{rank}")
    # Row of the DP for prod_i (1 + x m_i).
    rows = [SymLaurent.one(rank)] + [SymLaurent.zero(rank)] * delta
    for i in range(1, rank + 1):
        mi = SymLaurent.gen(rank, i)
        for d in range(min(i, delta), 0, -1):
            rows[d] = rows[d] + rows[d - 1] * mi
    return rows[delta]


@cache
def character(N, delta):
    """Twisted character of the delta-th exterior-power pair, closed form.

    Expressed in the elementary symmetric polynomials of m_1..m_r with
    r = floor(N/2); binomial weights depend on the parity of N.
    """
    r = N // 2
    if N < 1:
        raise DomainError("N must be at least 1")
    if not 0 <= delta <= r:
        raise DomainError(f"delta {delta} outside 0..{r}")
    total = SymLaurent.zero(r)
    if N % 2 == 0:
        for j in range(delta // 2 + 1):
            total = total + comb(r - delta + 2 * j, j) * elem_sym(r, delta - 2 * j)
    else:
        for i in range(delta + 1):
            total = total + comb(r - delta + i, i // 2) * elem_sym(r, delta - i)
    return total


def _fold_counts(counts, rank):
    """Rewrite a pairing-symmetric Laurent series in y_1..y_rank as a
    polynomial in m_i = y_i + 1/y_i, one variable at a time."""
    terms = counts
    for pos in range(rank):
        grouped = {}
        for key, c in terms.items():
            rest = key[:pos] + key[pos + 1 :]
            grouped.setdefault(rest, {}).setdefault(key[pos], 0)
            grouped[rest][key[pos]] += c
        new_terms = {}
        for rest, oned in grouped.items():
            top = max(abs(e) for e in oned)
            for e in range(1, top + 1):
                if oned.get(e, 0) != oned.get(-e, 0):
                    raise InvariantError(
                        "expansion is not symmetric under inversion"
                    )
            # y^e + y^-e as a polynomial in m, by the three-term recursion.
            folded = {0: oned.get(0, 0)}
            prev = {0: 2}
            cur = {1: 1}
            for e in range(1, top + 1):
                a = oned.get(e, 0)
                if a:
                    for me, mc in cur.items():
                        folded[me] = folded.get(me, 0) + a * mc
                if e < top:
                    nxt = {}
                    for me, mc in cur.items():
                        nxt[me + 1] = nxt.get(me + 1, 0) + mc
                    for me, mc in prev.items():
                        nxt[me] = nxt.get(me, 0) - mc
                    prev, cur = cur, nxt
            for me, mc in folded.items():
                if mc:
                    new_key = rest[:pos] + (me,) + rest[pos:]
                    new_terms[new_key] = new_terms.get(new_key, 0) + mc
        terms = new_terms
    return terms


@cache
def character_bruteforce(N, delta):
    """Twisted character computed straight from its subset-sum definition.

    Serves as the independent cross-check for character(); it expands the
    full sum over index subsets and then folds inverse pairs.
    """
    r = N // 2
    if N < 1:
        raise DomainError("N must be at least 1")
    if not 0 <= delta <= r:
        raise DomainError(f"delta {delta} outside 0..{r}")
    counts = {}
    for subset in itertools.combinations(range(1, N + 1), delta):
        v = [0] * r
        for i in subset:
            if i <= r:
                v[i - 1] += 1
            elif i >= N + 1 - r:
                v[N - i] -= 1
        key = tuple(v)
        counts[key] = counts.get(key, 0) + 1
    folded = _fold_counts(counts, r)
    return SymLaurent(r, {(mono, 0): c for mono, c in folded.items() if c})


def _alt_chunk(rank, delta):
    """(lam^(delta+1) + lam^(-delta)) / (lam + 1) as a SymLaurent."""
    poly = LaurentPoly({2 * delta + 1: 1, 0: 1}).divexact(LaurentPoly({1: 1, 0: 1}))
    return SymLaurent(
        rank,
        {((0,) * rank, e - delta): c for e, c in poly.terms.items()},
    )


def _sym_chunk(rank, delta):
    """(lam^delta - lam^(-delta)) / (lam - lam^(-1)) as a SymLaurent."""
    if delta == 0:
        return SymLaurent.zero(rank)
    poly = LaurentPoly({2 * delta: 1, 0: -1}).divexact(LaurentPoly({2: 1, 0: -1}))
    return SymLaurent(
        rank,
        {((0,) * rank, e - (delta - 1)): c for e, c in poly.terms.items()},
    )


def _lam_plus_inverse(rank):
    return SymLaurent.lam_power(rank, 1) + SymLaurent.lam_power(rank, -1)


def check_lambda_identity(n, which):
    """Return LHS - RHS of a named lam-identity (zero iff it holds).

    Supported names (n is the rank parameter N except where noted):
      even_sum        -- full product over lam + 1/lam + m_i, N even
      even_derivative -- sum of products omitting one factor, N even
      odd             -- full product against alternating lam chunks, N odd
      odd_binomial    -- the pure-lam binomial identity; n is the exponent
    """
    if which == "even_sum":
        if n < 2 or n % 2:
            raise DomainError("even_sum needs an even n >= 2")
        r = n // 2
        lhs = SymLaurent.one(r)
        for i in range(1, r + 1):
            lhs = lhs * (_lam_plus_inverse(r) + SymLaurent.gen(r, i))
        rhs = character(n, r)
        for delta in range(1, r + 1):
            chunk = SymLaurent.lam_power(r, delta) + SymLaurent.lam_power(r, -delta)
            rhs = rhs + character(n, r - delta) * chunk
        return lhs - rhs
    if which == "even_derivative":
        if n < 2 or n % 2:
            raise DomainError("even_derivative needs an even n >= 2")
        r = n // 2
        lhs = SymLaurent.zero(r)
        for j in range(1, r + 1):
            prod = SymLaurent.one(r)
            for i in range(1, r + 1):
                if i != j:
                    prod = prod * (_lam_plus_inverse(r) + SymLaurent.gen(r, i))
            lhs = lhs + prod
        rhs = SymLaurent.zero(r)
        for delta in range(1, r + 1):
            rhs = rhs + delta * character(n, r - delta) * _sym_chunk(
                r, delta
            )
        return lhs - rhs
    if which == "odd":
        if n < 1 or n % 2 == 0:
            raise DomainError("odd needs an odd n >= 1")
        r = n // 2
        lhs = SymLaurent.one(r)
        for i in range(1, r + 1):
            lhs = lhs * (_lam_plus_inverse(r) + SymLaurent.gen(r, i))
        rhs = SymLaurent.zero(r)
        for delta in range(r + 1):
            rhs = rhs + character(n, r - delta) * _alt_chunk(r, delta)
        return lhs - rhs
    if which == "odd_binomial":
        if n < 0:
            raise DomainError("odd_binomial needs n >= 0")
        lhs = SymLaurent.zero(0)
        for delta in range(n + 1):
            lhs = lhs + comb(n, (n - delta) // 2) * _alt_chunk(0, delta)
        rhs = _lam_plus_inverse(0) ** n
        return lhs - rhs
    raise DomainError(f"unknown lambda identity {which!r}")

