"""Truncated intersection calculus on projective space.

A class on projective m-space is an integer polynomial in the hyperplane
class eta, truncated by the relation eta^(m+1) = 0; integration reads off
the coefficient of eta^m.  Vector bundles enter through their rank and
total Chern class, and the constructions implemented here (Whitney sums
and kernels, twisting by a line bundle, p-power pullback) are exactly the
ones needed to evaluate the three excess-intersection integrals and to
tie them back to the d-number sequence from qcalc.
"""

from math import comb

from .errors import DomainError, InvariantError
from .qcalc import LaurentPoly, d_bullet_number, d_number, odd_product


class ChowClass:
    """An integer polynomial in the hyperplane class, truncated at eta^dim.

    coeffs holds the coefficients of 1, eta, ..., eta^dim; anything the
    caller supplies beyond that is cut off, which is the ring law rather
    than data loss.
    """

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim, coeffs=None):
        if not isinstance(dim, int) or dim < 0:
            raise DomainError("ambient dimension must be a nonnegative integer")
        if coeffs is None:
            data = []
        elif isinstance(coeffs, int):
            data = [coeffs]
        else:
            data = [int(c) for c in coeffs]
        data = data[: dim + 1]
        data.extend([0] * (dim + 1 - len(data)))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", tuple(data))

    def __setattr__(self, name, value):
        raise AttributeError("ChowClass is immutable")

    @classmethod
    def one(cls, dim):
        return cls(dim, 1)

    @classmethod
    def hyperplane(cls, dim):
        return cls(dim, [0, 1])

    # -- protocol ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return ChowClass(self.dim, other)
        if isinstance(other, ChowClass):
            if other.dim != self.dim:
                raise DomainError("ambient dimension mismatch")
            return other
        return None

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, self.coeffs))

    def __repr__(self):
        return f"ChowClass(dim={self.dim}, {list(self.coeffs)})"

    def __str__(self):
        if not any(self.coeffs):
            return "0"
        chunks = []
        for e, c in enumerate(self.coeffs):
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "eta" if e == 1 else f"eta^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ChowClass(
            self.dim, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.dim, [-c for c in self.coeffs])

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
        data = [0] * (self.dim + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: self.dim + 1 - i]):
                data[i + j] += a * b
        return ChowClass(self.dim, data)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("ChowClass powers must be nonnegative integers")
        out = ChowClass.one(self.dim)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure -----------------------------------------------------

    def coefficient(self, j):
        """The coefficient of eta^j; zero above the ambient dimension."""
        if j < 0:
            raise DomainError("coefficient index must be nonnegative")
        if j > self.dim:
            return 0
        return self.coeffs[j]

    def integrate(self):
        """Integral over the ambient space: the top coefficient."""
        return self.coeffs[self.dim]

    def inverse(self):
        """Multiplicative inverse in the truncated ring.

        Over the integers only classes with constant term 1 or -1 are
        units; the coefficients then satisfy a triangular recurrence.
        """
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise DomainError("inverse needs constant term 1 or -1")
        out = [c0]
        for j in range(1, self.dim + 1):
            acc = sum(self.coeffs[i] * out[j - i] for i in range(1, j + 1))
            out.append(-c0 * acc)
        return ChowClass(self.dim, out)


class BundleClass:
    """A vector bundle seen through its rank and total Chern class.

    Construction re-checks the two structural facts every operation must
    preserve: the total class starts at 1, and nothing survives above the
    rank.  A violation means the input data cannot come from a bundle.
    """

    __slots__ = ("rank", "total")

    def __init__(self, rank, total):
        if not isinstance(total, ChowClass):
            raise TypeError("total must be a ChowClass")
        if not isinstance(rank, int) or rank < 0:
            raise DomainError("rank must be a nonnegative integer")
        if total.coefficient(0) != 1:
            raise DomainError("total class must have constant term 1")
        for j in range(rank + 1, total.dim + 1):
            if total.coefficient(j):
                raise DomainError(
                    f"Chern class c_{j} is nonzero above the rank {rank}"
                )
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "total", total)

    def __setattr__(self, name, value):
        raise AttributeError("BundleClass is immutable")

    @classmethod
    def trivial(cls, dim, rank):
        return cls(rank, ChowClass.one(dim))

    @classmethod
    def line(cls, dim, k):
        """The degree-k line bundle, total class 1 + k*eta."""
        return cls(1, ChowClass(dim, [1, k]))

    @property
    def dim(self):
        return self.total.dim

    def chern(self, j):
        return self.total.coefficient(j)

    def __eq__(self, other):
        if not isinstance(other, BundleClass):
            return NotImplemented
        return self.rank == other.rank and self.total == other.total

    def __hash__(self):
        return hash((self.rank, self.total))

    def __repr__(self):
        return f"BundleClass(rank={self.rank}, total={self.total})"


def direct_sum(a, b):
    """Whitney sum: ranks add, total classes multiply."""
    if not isinstance(a, BundleClass) or not isinstance(b, BundleClass):
        raise TypeError("expected BundleClass inputs")
    if a.dim != b.dim:
        raise DomainError("ambient dimension mismatch")
    return BundleClass(a.rank + b.rank, a.total * b.total)


def kernel_bundle(middle, quotient):
    """The sub-bundle in a short exact sequence with the given middle and
    quotient, recovered by the Whitney formula.

    The constructor's rank-vanishing check then certifies that the data
    is consistent with an actual sub-bundle.
    """
    if not isinstance(middle, BundleClass) or not isinstance(quotient, BundleClass):
        raise TypeError("expected BundleClass inputs")
    if middle.dim != quotient.dim:
        raise DomainError("ambient dimension mismatch")
    rank = middle.rank - quotient.rank
    if rank < 0:
        raise DomainError("quotient rank exceeds the middle rank")
    return BundleClass(rank, middle.total * quotient.total.inverse())


def tautological_sub(n):
    """The kernel of the evaluation map from n trivial sections onto the
    degree-1 line bundle on projective (n-1)-space.

    rank n-1 with total class the truncation of (1+eta)^(-1).
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError("need at least one section")
    dim = n - 1
    middle = BundleClass.trivial(dim, n)
    return kernel_bundle(middle, BundleClass.line(dim, 1))


def twist(e, k):
    """Tensor with the degree-k line bundle.

    c_j of the twist is the binomial mixture
    sum_i binom(rank - i, j - i) * c_i(e) * k^(j-i).
    """
    if not isinstance(e, BundleClass):
        raise TypeError("expected a BundleClass")
    if not isinstance(k, int):
        raise DomainError("twist degree must be an integer")
    data = []
    for j in range(e.dim + 1):
        acc = 0
        for i in range(min(j, e.rank) + 1):
            acc += comb(e.rank - i, j - i) * e.chern(i) * k ** (j - i)
        data.append(acc)
    return BundleClass(e.rank, ChowClass(e.dim, data))


def frobenius(e, p):
    """Pullback along the p-power map on the ambient space: c_i picks up
    a factor p^i because the hyperplane bundle pulls back to degree p."""
    if not isinstance(e, BundleClass):
        raise TypeError("expected a BundleClass")
    if not isinstance(p, int) or p < 2:
        raise DomainError("characteristic must be an integer >= 2")
    data = [e.chern(j) * p**j for j in range(e.dim + 1)]
    return BundleClass(e.rank, ChowClass(e.dim, data))


def _exact_div(num, den):
    quot, rem = divmod(num, den)
    if rem:
        raise InvariantError(f"expected value {num}/{den} is not integral")
    return quot


def check_excess_integral(which, n, p):
    """One excess-intersection integral against its closed form.

    I1 integrates the top Chern class of the kernel of r degree-1
    sections onto a degree-(p+1) line bundle, on projective (r-1)-space;
    I2 does the same after twisting the kernel down by one degree; I3
    integrates c_d of the p-power pullback of the tautological sub-bundle
    twisted up by one degree, on projective d-space.  Returns the pair
    (computed, expected) and raises InvariantError if they ever differ.
    """
    if not isinstance(p, int) or p < 2:
        raise DomainError("characteristic must be an integer >= 2")
    if which in ("I1", "I2"):
        r = n
        if not isinstance(r, int) or r < 1:
            raise DomainError(f"{which} needs r >= 1")
        dim = r - 1
        middle = BundleClass.trivial(dim, 0)
        for _ in range(r):
            middle = direct_sum(middle, BundleClass.line(dim, 1))
        sub = kernel_bundle(middle, BundleClass.line(dim, p + 1))
        if which == "I1":
            computed = sub.total.integrate()
            expected = _exact_div(1 - (-p) ** r, p + 1)
        else:
            computed = twist(sub, -1).total.integrate()
            expected = (-p) ** (r - 1)
    elif which == "I3":
        d = n
        if not isinstance(d, int) or d < 0:
            raise DomainError("I3 needs d >= 0")
        pulled = frobenius(tautological_sub(d + 1), p)
        computed = twist(pulled, 1).total.integrate()
        expected = _exact_div(1 - (-p) ** (d + 1), p + 1)
    else:
        raise DomainError(f"unknown integral {which!r}")
    if computed != expected:
        raise InvariantError(
            f"{which} at n={n}, p={p}: computed {computed}, expected {expected}"
        )
    return computed, expected


def check_bridge_identity(r):
    """LHS - RHS of the exact relation tying the two d-number sequences
    to the signed odd product (zero iff it holds).

    (q+1) * dbullet_r - d_r = ((-q)^(r+1) - 1)/(q+1) * prod(q^(2i-1) + 1).
    """
    if r < 0:
        raise DomainError("rank must be nonnegative")
    q = LaurentPoly.gen()
    lhs = (q + 1) * d_bullet_number(r) - d_number(r)
    correction = ((-q) ** (r + 1) - 1).divexact(q + 1)
    return lhs - correction * odd_product(r, "even")
