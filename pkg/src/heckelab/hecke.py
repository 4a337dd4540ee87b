"""Hecke elements, the Satake transform, named operators, and parameter
predicates.

Elements of the two spherical Hecke algebras are stored by their
coordinates in the standard double-coset basis indexed by 0 <= delta <= r.
No convolution product is implemented: every composite operator used here
enters through its known expansion in that basis.  The Satake transform is
computed by solving the lower-unitriangular linear system that relates
scaled twisted characters to the basis images.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache

from .charring import SymLaurent, character
from .errors import DomainError
from .qcalc import (
    BASE_NEG_Q,
    LaurentPoly,
    d_bullet_number,
    d_number,
    odd_product,
    q_binomial,
)

__all__ = [
    "HeckeElement",
    "SatakeParam",
    "SatakeMatrix",
    "EvalContext",
    "satake_transform",
    "named_operator",
    "eval_phi",
    "char_poly",
    "tensor_param",
    "satake_condition",
    "semantic_condition",
    "decomposed_generic",
    "verify_satake_identity",
    "random_inert_param",
]

_Q = LaurentPoly.gen()


def _neg_q_pow(k):
    return LaurentPoly({k: 1 if k % 2 == 0 else -1})


class HeckeElement:
    """A linear combination of basis double cosets of one flavor.

    coeffs maps delta to a nonzero LaurentPoly coefficient.
    """

    __slots__ = ("N", "flavor", "coeffs")

    def __init__(self, N, flavor, coeffs):
        if N < 1:
            raise DomainError("rank must be at least 1")
        if flavor not in ("circ", "bullet"):
            raise DomainError(f"unknown flavor {flavor!r}")
        r = N // 2
        data = {}
        for delta, c in coeffs.items():
            if not 0 <= delta <= r:
                raise DomainError(f"basis index {delta} outside 0..{r}")
            if isinstance(c, int):
                c = LaurentPoly(c)
            if c:
                data[delta] = c
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "flavor", flavor)
        object.__setattr__(self, "coeffs", data)

    def __setattr__(self, name, value):
        raise AttributeError("HeckeElement is immutable")

    @classmethod
    def basis(cls, N, delta, flavor="circ"):
        return cls(N, flavor, {delta: 1})

    @classmethod
    def unit(cls, N, flavor="circ"):
        return cls.basis(N, 0, flavor)

    def _check_compatible(self, other):
        if self.N != other.N or self.flavor != other.flavor:
            raise DomainError("mismatched rank or flavor")

    def __add__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        self._check_compatible(other)
        data = dict(self.coeffs)
        for d, c in other.coeffs.items():
            data[d] = data.get(d, LaurentPoly(0)) + c
        return HeckeElement(self.N, self.flavor, data)

    def __sub__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return HeckeElement(
            self.N, self.flavor, {d: -c for d, c in self.coeffs.items()}
        )

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, LaurentPoly)):
            return NotImplemented
        return HeckeElement(
            self.N, self.flavor, {d: c * scalar for d, c in self.coeffs.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return (
            self.N == other.N
            and self.flavor == other.flavor
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.N, self.flavor, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"HeckeElement(N={self.N}, {self.flavor}, {len(self.coeffs)} terms)"

    def to_entries(self):
        """Sorted [[delta, coeff_pairs], ...] serialization."""
        return [[d, self.coeffs[d].to_pairs()] for d in sorted(self.coeffs)]


class SatakeMatrix:
    """The lower-unitriangular change of basis between scaled characters
    and Satake images of the basis elements."""

    __slots__ = ("N", "rows")

    def __init__(self, N):
        if N < 1:
            raise DomainError("rank must be at least 1")
        r = N // 2
        rows = []
        for d in range(r + 1):
            rows.append(
                [q_binomial(N - 2 * i, d - i, BASE_NEG_Q) for i in range(d + 1)]
            )
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("SatakeMatrix is immutable")

    def entry(self, delta, i):
        if not 0 <= i <= delta <= self.N // 2:
            raise DomainError("matrix index out of triangular range")
        return self.rows[delta][i]

    def to_entries(self):
        return [
            [d, i, self.rows[d][i].to_pairs()]
            for d in range(len(self.rows))
            for i in range(d + 1)
        ]


@cache
def _sat_basis(N, delta):
    """Satake image of the delta-th circ basis element, by forward
    substitution through the unitriangular system."""
    r = N // 2
    mat = SatakeMatrix(N)
    image = LaurentPoly({delta * (N - delta): 1}) * character(N, delta)
    for i in range(delta):
        image = image - mat.entry(delta, i) * _sat_basis(N, i)
    return image


def satake_transform(e):
    """Satake image of a circ-flavor element, in the m-variables."""
    if not isinstance(e, HeckeElement):
        raise TypeError("expected a HeckeElement")
    if e.flavor != "circ":
        raise DomainError("the transform is only computed for circ flavor")
    out = SymLaurent.zero(e.N // 2)
    for d, c in e.coeffs.items():
        out = out + c * _sat_basis(e.N, d)
    return out


def named_operator(name, N):
    """One of the distinguished basis combinations, exactly as tabulated.

    Icirc exists for every rank; Rcirc, TcircEven, Rbullet, TbulletEven
    need even rank; Tstar, TbulletOdd need odd rank.
    """
    r = N // 2
    if N < 1:
        raise DomainError("rank must be at least 1")
    if name == "Icirc":
        variant = "even" if N % 2 == 0 else "odd"
        coeffs = {r - d: odd_product(d, variant) for d in range(r + 1)}
        return HeckeElement(N, "circ", coeffs)
    if name in ("Rcirc", "Rbullet"):
        if N % 2:
            raise DomainError(f"{name} needs even rank")
        q_plus_one = _Q + 1
        coeffs = {}
        for d in range(r):
            ratio = (LaurentPoly(1) - _neg_q_pow(r - d)).divexact(q_plus_one)
            coeffs[d] = ratio * odd_product(r - d, "even")
        flavor = "circ" if name == "Rcirc" else "bullet"
        return HeckeElement(N, flavor, coeffs)
    if name in ("TcircEven", "TbulletEven"):
        if N % 2:
            raise DomainError(f"{name} needs even rank")
        coeffs = {d: d_bullet_number(r - d) for d in range(r)}
        flavor = "circ" if name == "TcircEven" else "bullet"
        return HeckeElement(N, flavor, coeffs)
    if name == "TbulletOdd":
        if N % 2 == 0:
            raise DomainError("TbulletOdd needs odd rank")
        coeffs = {d: d_bullet_number(r - d) for d in range(r)}
        return HeckeElement(N, "bullet", coeffs)
    if name == "Tstar":
        if N % 2 == 0:
            raise DomainError("Tstar needs odd rank")
        coeffs = {d: d_number(r - d) for d in range(r + 1)}
        return HeckeElement(N, "circ", coeffs)
    raise DomainError(f"unknown operator name {name!r}")


# ---------------------------------------------------------------------
# Satake parameters and evaluation


def _inv(x, p):
    if p is None:
        x = Fraction(x)
        if x == 0:
            raise DomainError("zero is not invertible")
        return 1 / x
    try:
        return pow(int(x), -1, p)
    except ValueError:
        raise DomainError(f"{x} is not invertible modulo {p}") from None


def _norm(x, p):
    return Fraction(x) if p is None else int(x) % p


class SatakeParam:
    """An abstract Satake parameter: an ordered inert multiset with the
    pairing entry_i * entry_(N+1-i) = 1, or a split pair of multisets.

    Entries live in the rationals (p=None) or in the prime field F_p.
    """

    __slots__ = ("kind", "entries", "p")

    def __init__(self, kind, entries, p):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("SatakeParam is immutable")

    @classmethod
    def inert(cls, entries, p=None):
        vals = tuple(_norm(x, p) for x in entries)
        N = len(vals)
        if N < 1:
            raise DomainError("parameter must have positive rank")
        one = _norm(1, p)
        for i in range(N):
            prod = vals[i] * vals[N - 1 - i]
            if _norm(prod, p) != one:
                raise DomainError(
                    f"pairing violated: entries {i + 1} and {N - i} do not multiply to 1"
                )
        if N % 2 and vals[N // 2] != one:
            raise DomainError("middle entry of an odd-rank parameter must be 1")
        return cls("inert", vals, p)

    @classmethod
    def split(cls, entries1, entries2, p=None):
        v1 = tuple(_norm(x, p) for x in entries1)
        v2 = tuple(_norm(x, p) for x in entries2)
        if len(v1) != len(v2) or not v1:
            raise DomainError("split parameter needs two multisets of equal positive size")
        if any(x == 0 for x in v1 + v2):
            raise DomainError("parameter entries must be invertible")
        return cls("split", (v1, v2), p)

    @property
    def rank(self):
        if self.kind == "inert":
            return len(self.entries)
        return len(self.entries[0])

    def multiplicity(self, x):
        if self.kind != "inert":
            raise DomainError("multiplicity is defined for inert parameters")
        x = _norm(x, self.p)
        return sum(1 for e in self.entries if e == x)

    def is_unitary(self):
        """Functional-equation test on the characteristic polynomial(s)."""
        if self.kind == "inert":
            coeffs = char_poly(self)
            N = self.rank
            sign = 1 if N % 2 == 0 else -1
            zero = _norm(0, self.p)
            return all(
                _norm(coeffs[k] - sign * coeffs[N - k], self.p) == zero
                for k in range(N + 1)
            )
        c1 = _poly_from_roots(self.entries[0], self.p)
        c2 = _poly_from_roots(self.entries[1], self.p)
        N = self.rank
        # c1(T) = c * T^N * c2(1/T) for some unit c; matching T^N forces
        # c = 1/c2[0], provided c2[0] is a unit.
        if _norm(c2[0], self.p) == _norm(0, self.p):
            return False
        c = _inv(c2[0], self.p)
        zero = _norm(0, self.p)
        return all(
            _norm(c1[k] - c * c2[N - k], self.p) == zero for k in range(N + 1)
        )

    def __repr__(self):
        return f"SatakeParam({self.kind}, rank={self.rank})"


def _poly_from_roots(roots, p):
    coeffs = [_norm(1, p)]
    for a in roots:
        coeffs = [_norm(0, p)] + coeffs
        for k in range(len(coeffs) - 1):
            coeffs[k] = _norm(coeffs[k] - a * coeffs[k + 1], p)
    return coeffs


def char_poly(alpha):
    """Monic characteristic polynomial, ascending coefficients c_0..c_N."""
    if not isinstance(alpha, SatakeParam) or alpha.kind != "inert":
        raise DomainError("char_poly needs an inert parameter")
    return _poly_from_roots(alpha.entries, alpha.p)


def tensor_param(a, b):
    """Tensor product of two parameters of the same kind."""
    if not isinstance(a, SatakeParam) or not isinstance(b, SatakeParam):
        raise TypeError("expected SatakeParam inputs")
    if a.kind != b.kind:
        raise DomainError("cannot tensor parameters of different kinds")
    if a.p != b.p:
        raise DomainError("parameters live over different fields")
    if a.kind == "inert":
        # Row-major products preserve the pairing order.
        prods = [x * y for x in a.entries for y in b.entries]
        return SatakeParam.inert(prods, p=a.p)
    e1 = [x * y for x in a.entries[0] for y in b.entries[0]]
    e2 = [x * y for x in a.entries[1] for y in b.entries[1]]
    return SatakeParam.split(e1, e2, p=a.p)


class EvalContext:
    """Where to evaluate: a q-value in the rationals (p=None) or in F_p."""

    __slots__ = ("q_value", "p")

    def __init__(self, q_value, p=None):
        object.__setattr__(self, "q_value", q_value)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("EvalContext is immutable")


def eval_phi(e, alpha, ctx):
    """Evaluate a circ element at an inert parameter: Satake image with
    m_i sent to entry_i + 1/entry_i and q sent to ctx.q_value."""
    if not isinstance(e, HeckeElement):
        raise TypeError("expected a HeckeElement")
    if e.flavor != "circ":
        raise DomainError("evaluation is defined for circ flavor")
    if not isinstance(alpha, SatakeParam) or alpha.kind != "inert":
        raise DomainError("evaluation needs an inert parameter")
    if alpha.rank != e.N:
        raise DomainError("parameter rank does not match the element")
    if alpha.p != ctx.p:
        raise DomainError("parameter and context fields differ")
    p = ctx.p
    if _norm(ctx.q_value, p) == _norm(0, p):
        raise DomainError("q-value must be invertible")
    r = e.N // 2
    ms = [
        _norm(alpha.entries[i] + _inv(alpha.entries[i], p), p) for i in range(r)
    ]
    sat = satake_transform(e)
    if p is None:
        return sat.eval_fraction(ms, q_value=Fraction(ctx.q_value))
    return sat.eval_mod(ms, p, q_value=int(ctx.q_value))


# ---------------------------------------------------------------------
# Predicates on parameters and polynomials


def _parity_name(N):
    return "even" if N % 2 == 0 else "odd"


def _check_parity(which, N, parity):
    par = _parity_name(N)
    if parity is not None and parity != par:
        raise DomainError(f"declared parity {parity!r} but degree {N} is {par}")
    needs = {"tate_generic": "odd", "level_raising_special": "even"}.get(which)
    if needs and par != needs:
        raise DomainError(f"{which} is defined for {needs} degree only")


def _peval(coeffs, x, p):
    total = _norm(0, p)
    for c in reversed(coeffs):
        total = _norm(total * x + c, p)
    return total


def _pderiv_eval(coeffs, x, p):
    total = _norm(0, p)
    for k in range(len(coeffs) - 1, 0, -1):
        total = _norm(total * x + k * coeffs[k], p)
    return total


def satake_condition(P, qv, which, parity=None, p=None):
    """Polynomial-level genericity predicate.

    P is the ascending coefficient list of a monic degree-N polynomial
    satisfying P(T) = (-T)^N P(1/T); qv is the residue-cardinality image.
    """
    N = len(P) - 1
    if N < 1:
        raise DomainError("polynomial must have positive degree")
    coeffs = [_norm(c, p) for c in P]
    one = _norm(1, p)
    zero = _norm(0, p)
    if coeffs[N] != one:
        raise DomainError("polynomial must be monic")
    sign = 1 if N % 2 == 0 else -1
    for k in range(N + 1):
        if _norm(coeffs[k] - sign * coeffs[N - k], p) != zero:
            raise DomainError("polynomial violates the functional equation")
    _check_parity(which, N, parity)
    qv = _norm(qv, p)
    if which == "tate_generic":
        return _pderiv_eval(coeffs, one, p) != zero
    if which == "level_raising_special":
        if qv == zero:
            raise DomainError("residue value must be invertible")
        return (
            _peval(coeffs, qv, p) == zero
            and _pderiv_eval(coeffs, qv, p) != zero
        )
    if which == "intertwining_generic":
        point = _norm(-qv, p) if N % 2 else _norm(-1, p)
        if N % 2 and qv == zero:
            raise DomainError("residue value must be invertible")
        return _peval(coeffs, point, p) != zero
    raise DomainError(f"unknown condition {which!r}")


def semantic_condition(alpha, qv, which, parity=None):
    """Multiset-level reformulation of satake_condition.

    Over a field with qv^2 != 1 the two predicates agree on unitary
    parameters.
    """
    if not isinstance(alpha, SatakeParam) or alpha.kind != "inert":
        raise DomainError("semantic conditions need an inert parameter")
    p = alpha.p
    N = alpha.rank
    _check_parity(which, N, parity)
    qv = _norm(qv, p)
    one = _norm(1, p)
    if which == "tate_generic":
        return alpha.multiplicity(one) == 1
    if which == "level_raising_special":
        qinv = _inv(qv, p)
        if qv == qinv:
            pairs = alpha.multiplicity(qv) // 2
        else:
            pairs = min(alpha.multiplicity(qv), alpha.multiplicity(qinv))
        return pairs == 1
    if which == "intertwining_generic":
        if N % 2:
            x = _norm(-qv, p)
            y = _norm(-_inv(qv, p), p)
            if x == y:
                return alpha.multiplicity(x) < 2
            return alpha.multiplicity(x) == 0 or alpha.multiplicity(y) == 0
        return alpha.multiplicity(_norm(-1, p)) < 2
    raise DomainError(f"unknown condition {which!r}")


def decomposed_generic(roots, qv, p=None):
    """True when no ordered pair of the supplied roots has ratio qv."""
    vals = [_norm(x, p) for x in roots]
    if any(v == _norm(0, p) for v in vals):
        raise DomainError("roots must be invertible")
    qv = _norm(qv, p)
    for i, x in enumerate(vals):
        for j, y in enumerate(vals):
            if i != j and x == _norm(qv * y, p):
                return False
    return True


def random_inert_param(N, p, rng, force_value=None):
    """Seeded random unitary inert parameter over F_p.

    The first half is drawn uniformly from invertible elements, partners
    are set to inverses, and the middle entry is 1 for odd N.  When
    force_value is given it is planted as the first entry, so callers can
    rig parameters that contain a chosen special value.
    """
    r = N // 2
    half = [rng.randrange(1, p) for _ in range(r)]
    if force_value is not None and r >= 1:
        half[0] = int(force_value) % p
        if half[0] == 0:
            raise DomainError("forced value must be invertible")
    entries = list(half)
    if N % 2:
        entries.append(1)
    entries.extend(pow(x, -1, p) for x in reversed(half))
    return SatakeParam.inert(entries, p=p)


# ---------------------------------------------------------------------
# Symbolic identity checks


def _shifted_gen(r, i, shift_coeff):
    return SymLaurent.gen(r, i) + SymLaurent.const(r, shift_coeff)


def verify_satake_identity(which, r):
    """Return LHS - RHS of a named evaluation identity (zero iff it holds).

    even1, even2, even4 live at rank 2r; odd1, odd2 at rank 2r+1.  The
    left side is a product over the m-variables scaled by a power of q;
    the right side is a combination of Satake basis images.
    """
    if r < 1:
        raise DomainError("r must be at least 1")
    minus_q_pair = LaurentPoly({1: -1, -1: -1})
    if which in ("even1", "even2", "even4"):
        N = 2 * r
        images = [_sat_basis(N, i) for i in range(r + 1)]
        if which == "even1":
            lhs = SymLaurent.const(r, LaurentPoly({r * r: 1}))
            for i in range(1, r + 1):
                lhs = lhs * _shifted_gen(r, i, LaurentPoly(2))
            rhs = images[r]
            for d in range(1, r + 1):
                rhs = rhs + odd_product(d, "even") * images[r - d]
            return lhs - rhs
        if which == "even2":
            lhs = SymLaurent.const(r, LaurentPoly({r * r: 1}))
            for i in range(1, r + 1):
                lhs = lhs * _shifted_gen(r, i, minus_q_pair)
            rhs = images[r]
            for d in range(1, r + 1):
                rhs = rhs + _neg_q_pow(d) * odd_product(d, "even") * images[r - d]
            return lhs - rhs
        lhs = SymLaurent.zero(r)
        for j in range(1, r + 1):
            prod = SymLaurent.one(r)
            for i in range(1, r + 1):
                if i != j:
                    prod = prod * _shifted_gen(r, i, minus_q_pair)
            lhs = lhs + prod
        lhs = LaurentPoly({r * r + 1: 1, r * r - 1: -1}) * lhs
        rhs = SymLaurent.zero(r)
        for d in range(1, r + 1):
            coeff = _neg_q_pow(d) * odd_product(d, "even") - d_number(d)
            rhs = rhs + coeff * images[r - d]
        return lhs - rhs
    if which in ("odd1", "odd2"):
        N = 2 * r + 1
        images = [_sat_basis(N, i) for i in range(r + 1)]
        scale = LaurentPoly({r * r + r: 1})
        if which == "odd1":
            lhs = SymLaurent.const(r, scale)
            plus_q_pair = LaurentPoly({1: 1, -1: 1})
            for i in range(1, r + 1):
                lhs = lhs * _shifted_gen(r, i, plus_q_pair)
            rhs = images[r]
            for d in range(1, r + 1):
                rhs = rhs + odd_product(d, "odd") * images[r - d]
            return lhs - rhs
        lhs = SymLaurent.const(r, scale)
        for i in range(1, r + 1):
            lhs = lhs * _shifted_gen(r, i, LaurentPoly(-2))
        rhs = SymLaurent.zero(r)
        for d in range(r + 1):
            rhs = rhs + d_number(d) * images[r - d]
        return lhs - rhs
    raise DomainError(f"unknown identity {which!r}")
