"""Hermitian geometry over GF(q^2) and lattice counting in a chain-ring window.

Three layers live here:

* small table-based finite fields GF(q^2) with their conjugation, and
  hermitian spaces over them, with exhaustive enumeration of totally
  isotropic subspaces;
* point counts of two families of subspace varieties attached to a
  semilinear pairing (a single subspace containing its right orthogonal
  complement, and a flag pair squeezed between the complements), over the
  base field and its quadratic extension;
* lattices between ``pi*P`` and ``pi^(-1)*P`` for the standard self-dual
  lattice ``P``, modeled as submodules of ``R^N`` for the length-two chain
  ring ``R = GF(q^2)[pi]/(pi^2)``, with exact duality, classification into
  self-dual ("circ"), almost self-dual ("bullet") and other lattices, and
  the counting functions built on top.

Every enumeration is exhaustive and budget-guarded: when a requested range
would exceed a hard cap the function raises ResourceError naming the bound,
never silently truncating.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import DomainError, InvariantError, ResourceError

_MAX_TABLE_FIELD = 1024
_ISOTROPIC_BUDGET = 3**20
_SUBSPACE_BUDGET = 2_000_000
_WINDOW_BUDGET = 200_000
_MEMBER_BUDGET = 65_536


# ---------------------------------------------------------------------------
# table-based finite fields


def _ptrim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _pmod(a, f, p):
    """Remainder of polynomial a modulo the monic polynomial f, over F_p."""
    a = list(a)
    d = len(f) - 1
    while len(a) > d:
        top = a.pop()
        if top:
            for i in range(d):
                a[len(a) - d + i] = (a[len(a) - d + i] - top * f[i]) % p
    return _ptrim(a)


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _pmod(out, f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        inv = pow(b[-1], p - 2, p)
        monic = [(c * inv) % p for c in b]
        a, b = monic, _pmod(a, monic, p)
    return a


def _is_irreducible(f, p, d):
    """Irreducibility of the monic degree-d polynomial f over F_p, by the
    standard Frobenius power criterion."""
    power = [0, 1]
    for i in range(1, d + 1):
        power = _ppowmod(power, p, f, p)
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        diff = _ptrim(diff)
        if i <= d // 2 and (not diff or len(_pgcd(f, diff, p)) > 1):
            return False
        if i == d and diff:
            return False
    return True


class _TableField:
    """GF(p^d) with dense arithmetic tables.

    Elements are integers in [0, p^d) encoding coefficient tuples of
    F_p[t]/(f) in little-endian base p, for the lexicographically first
    irreducible monic f of degree d.
    """

    __slots__ = ("p", "d", "size", "modulus", "add_t", "mul_t", "neg_t", "inv_t")

    def __init__(self, p, d):
        size = p**d
        if size > _MAX_TABLE_FIELD:
            raise ResourceError(
                f"field table budget exceeded: order {size} is above the cap "
                f"{_MAX_TABLE_FIELD}"
            )
        self.p = p
        self.d = d
        self.size = size
        self.modulus = self._find_modulus(p, d)
        self._build_tables()

    @staticmethod
    def _find_modulus(p, d):
        if d == 1:
            return (0, 1)
        for tail in itertools.product(range(p), repeat=d):
            f = list(tail) + [1]
            if _is_irreducible(f, p, d):
                return tuple(f)
        raise InvariantError(f"no irreducible polynomial of degree {d} over F_{p}")

    def _build_tables(self):
        p, d, size = self.p, self.d, self.size
        f = list(self.modulus)

        def decode(a):
            out = []
            for _ in range(d):
                a, r = divmod(a, p)
                out.append(r)
            return out

        def encode(coeffs):
            val = 0
            for c in reversed(coeffs):
                val = val * p + c
            return val

        polys = [decode(a) for a in range(size)]
        self.add_t = tuple(
            tuple(
                encode([(x + y) % p for x, y in zip(polys[a], polys[b])])
                for b in range(size)
            )
            for a in range(size)
        )
        self.neg_t = tuple(encode([(-x) % p for x in polys[a]]) for a in range(size))
        mul_rows = []
        for a in range(size):
            pa = _ptrim(polys[a])
            row = []
            for b in range(size):
                prod = _pmulmod(pa, _ptrim(polys[b]), f, p)
                row.append(encode(prod + [0] * (d - len(prod))))
            mul_rows.append(tuple(row))
        self.mul_t = tuple(mul_rows)
        inv = [0] * size
        for a in range(1, size):
            inv[a] = self.mul_t[a].index(1)
        self.inv_t = tuple(inv)


@lru_cache(maxsize=None)
def _table_field(p, d):
    return _TableField(p, d)


class _Ops:
    """Thin arithmetic facade over a table field."""

    __slots__ = ("_tf",)
    zero = 0
    one = 1

    def __init__(self, tf):
        self._tf = tf

    @property
    def size(self):
        return self._tf.size

    @property
    def p(self):
        return self._tf.p

    @property
    def elements(self):
        return range(self._tf.size)

    def add(self, a, b):
        return self._tf.add_t[a][b]

    def neg(self, a):
        return self._tf.neg_t[a]

    def sub(self, a, b):
        return self._tf.add_t[a][self._tf.neg_t[b]]

    def mul(self, a, b):
        return self._tf.mul_t[a][b]

    def inv(self, a):
        if a == 0:
            raise DomainError("zero is not invertible")
        return self._tf.inv_t[a]

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result


_ALLOWED_Q = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2)}


class Fq2(_Ops):
    """The field GF(q^2) together with its order-two conjugation x -> x^q.

    Supported sizes are prime powers q <= 9.  Elements are plain integers in
    [0, q^2); 0 and 1 are the additive and multiplicative identities.
    """

    __slots__ = ("q", "k", "_conj", "_eps")

    def __init__(self, q):
        if not isinstance(q, int) or q not in _ALLOWED_Q:
            raise DomainError(f"q must be a prime power at most 9, got {q!r}")
        p, k = _ALLOWED_Q[q]
        super().__init__(_table_field(p, 2 * k))
        self.q = q
        self.k = k
        conj = list(range(self.size))
        for _ in range(k):
            conj = [self.pow(x, p) for x in conj]
        self._conj = tuple(conj)
        fixed = sum(1 for x in range(self.size) if self._conj[x] == x)
        if fixed != q or any(self._conj[self._conj[x]] != x for x in range(self.size)):
            raise InvariantError("conjugation tables are inconsistent")
        if p == 2:
            self._eps = 1
        else:
            self._eps = next(
                e for e in range(1, self.size) if self._conj[e] == self.neg(e)
            )

    def conj(self, a):
        return self._conj[a]

    def epsilon(self):
        """A fixed nonzero element with conj(eps) == -eps (1 when q is even)."""
        return self._eps


@lru_cache(maxsize=None)
def _fq2(q):
    return Fq2(q)


# ---------------------------------------------------------------------------
# linear algebra over a table field


def _rref(fld, rows):
    """Reduced row echelon form; returns (rows, pivots) without zero rows."""
    kept = []  # list of [pivot, row-list]
    for row in rows:
        row = list(row)
        for piv, prow in kept:
            c = row[piv]
            if c:
                row = [fld.sub(x, fld.mul(c, y)) for x, y in zip(row, prow)]
        piv = next((i for i, c in enumerate(row) if c), None)
        if piv is None:
            continue
        scale = fld.inv(row[piv])
        row = [fld.mul(scale, x) for x in row]
        for entry in kept:
            c = entry[1][piv]
            if c:
                entry[1] = [fld.sub(x, fld.mul(c, y)) for x, y in zip(entry[1], row)]
        kept.append([piv, row])
    kept.sort(key=lambda e: e[0])
    return tuple(tuple(r) for _, r in kept), tuple(p for p, _ in kept)


def _reduce_with_coeffs(fld, vec, rows, pivots):
    """Reduce vec against RREF rows; returns (residue, coefficients)."""
    vec = list(vec)
    coeffs = []
    for row, piv in zip(rows, pivots):
        c = vec[piv]
        coeffs.append(c)
        if c:
            vec = [fld.sub(x, fld.mul(c, y)) for x, y in zip(vec, row)]
    return tuple(vec), tuple(coeffs)


def _in_span(fld, vec, rows, pivots):
    residue, _ = _reduce_with_coeffs(fld, vec, rows, pivots)
    return not any(residue)


def _rank(fld, rows):
    return len(_rref(fld, rows)[0])


def _nullspace(fld, rows, ncols):
    """RREF basis of the right kernel {z : rows . z = 0}."""
    rref, pivots = _rref(fld, rows)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = [fld.zero] * ncols
        vec[free] = fld.one
        for row, piv in zip(rref, pivots):
            vec[piv] = fld.neg(row[free])
        basis.append(vec)
    return _rref(fld, basis)[0]


def _try_solve(fld, rows, rhs, ncols):
    """One solution x of rows . x = rhs with free coordinates set to zero,
    or None when the system is inconsistent."""
    aug = [list(row) + [r] for row, r in zip(rows, rhs)]
    kept = []
    for row in aug:
        for piv, prow in kept:
            c = row[piv]
            if c:
                row = [fld.sub(x, fld.mul(c, y)) for x, y in zip(row, prow)]
        piv = next((i for i, c in enumerate(row[:ncols]) if c), None)
        if piv is None:
            if row[ncols]:
                return None
            continue
        scale = fld.inv(row[piv])
        row = [fld.mul(scale, x) for x in row]
        for entry in kept:
            c = entry[1][piv]
            if c:
                entry[1] = [fld.sub(x, fld.mul(c, y)) for x, y in zip(entry[1], row)]
        kept.append([piv, row])
    out = [fld.zero] * ncols
    for piv, row in kept:
        out[piv] = row[ncols]
    return tuple(out)


def _solve(fld, rows, rhs, ncols):
    """One solution x of rows . x = rhs; the system must be consistent."""
    out = _try_solve(fld, rows, rhs, ncols)
    if out is None:
        raise InvariantError("inconsistent linear system")
    return out


@lru_cache(maxsize=None)
def _gauss_count(n, k, base):
    """Number of k-dimensional subspaces of an n-space over a field of the
    given order, via the Pascal-style recurrence."""
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    return _gauss_count(n - 1, k - 1, base) + base**k * _gauss_count(n - 1, k, base)


def _enumerate_subspaces(fld, n, d):
    """Generator of all d-dimensional subspaces as RREF row tuples."""
    if d == 0:
        yield ()
        return
    size = fld.size
    for pivots in itertools.combinations(range(n), d):
        pivset = set(pivots)
        frees = [[c for c in range(piv + 1, n) if c not in pivset] for piv in pivots]
        total_free = sum(len(f) for f in frees)
        for flat in itertools.product(range(size), repeat=total_free):
            rows = []
            pos = 0
            for piv, free in zip(pivots, frees):
                row = [fld.zero] * n
                row[piv] = fld.one
                for c in free:
                    row[c] = flat[pos]
                    pos += 1
                rows.append(tuple(row))
            yield tuple(rows)


# ---------------------------------------------------------------------------
# hermitian spaces and isotropic subspace counts


class HermSpace:
    """A nondegenerate hermitian space of dimension N over GF(q^2).

    The Gram matrix defaults to the antidiagonal identity; a custom matrix
    must be conjugate-symmetric and invertible.
    """

    __slots__ = ("q", "N", "field", "gram", "_default")

    def __init__(self, q, N, gram=None):
        if not isinstance(N, int) or N < 1:
            raise DomainError(f"dimension must be a positive integer, got {N!r}")
        field = _fq2(q)
        if gram is None:
            gram = tuple(
                tuple(field.one if i + j == N - 1 else field.zero for j in range(N))
                for i in range(N)
            )
            self._default = True
        else:
            gram = _check_matrix(field, N, gram)
            self._default = False
        for i in range(N):
            for j in range(N):
                if gram[j][i] != field.conj(gram[i][j]):
                    raise DomainError("Gram matrix is not conjugate-symmetric")
        if _rank(field, gram) != N:
            raise DomainError("Gram matrix is singular")
        self.q = q
        self.N = N
        self.field = field
        self.gram = gram

    def herm(self, u, v):
        """The hermitian form of two coordinate vectors."""
        field = self.field
        if self._default:
            n = self.N
            total = field.zero
            for s, us in enumerate(u):
                if us:
                    c = field.conj(v[n - 1 - s])
                    if c:
                        total = field.add(total, field.mul(us, c))
            return total
        total = field.zero
        for s, us in enumerate(u):
            if not us:
                continue
            row = self.gram[s]
            for t, vt in enumerate(v):
                if vt and row[t]:
                    total = field.add(
                        total, field.mul(us, field.mul(row[t], field.conj(vt)))
                    )
        return total

    def is_isotropic_vector(self, v):
        return self.herm(v, v) == self.field.zero


def _check_matrix(field, n, gram):
    rows = tuple(tuple(row) for row in gram)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise DomainError(f"Gram matrix must be {n} x {n}")
    for row in rows:
        for c in row:
            if not isinstance(c, int) or not 0 <= c < field.size:
                raise DomainError(f"matrix entry {c!r} is not a field element")
    return rows


def _isotropic_by_pivot(space):
    """Isotropic vectors with leading coefficient one, grouped by pivot."""
    field, n = space.field, space.N
    by_pivot = []
    for piv in range(n):
        bucket = []
        for tail in itertools.product(field.elements, repeat=n - piv - 1):
            v = (field.zero,) * piv + (field.one,) + tail
            if space.herm(v, v) == field.zero:
                bucket.append(v)
        by_pivot.append(bucket)
    return by_pivot


def _isotropic_fill(space, pivots, depth, rows, out):
    """Extend a partial isotropic RREF matrix one row at a time.

    Rows beyond the first are found by solving the linear pairing conditions
    against all previous rows, then filtering by the quadratic self-pairing.
    """
    if depth == len(pivots):
        out.append(tuple(rows))
        return
    field, n = space.field, space.N
    piv = pivots[depth]
    pivset = set(pivots)
    frees = [c for c in range(piv + 1, n) if c not in pivset]
    # herm(prev, w) is linear in y_c := conj(w_c) over the free columns
    cond_rows = []
    rhs = []
    for prev in rows:
        alpha = [field.zero] * n
        for s, us in enumerate(prev):
            if not us:
                continue
            grow = space.gram[s]
            for t in range(n):
                if grow[t]:
                    alpha[t] = field.add(alpha[t], field.mul(us, grow[t]))
        cond_rows.append([alpha[c] for c in frees])
        rhs.append(field.neg(alpha[piv]))
    particular = _try_solve(field, cond_rows, rhs, len(frees))
    if particular is None:
        return
    kernel = _nullspace(field, cond_rows, len(frees))
    for coeffs in itertools.product(field.elements, repeat=len(kernel)):
        y = list(particular)
        for c, basis in zip(coeffs, kernel):
            if c:
                y = [field.add(a, field.mul(c, b)) for a, b in zip(y, basis)]
        w = [field.zero] * n
        w[piv] = field.one
        for c, val in zip(frees, y):
            w[c] = field.conj(val)
        w = tuple(w)
        if space.herm(w, w) != field.zero:
            continue
        rows.append(w)
        _isotropic_fill(space, pivots, depth + 1, rows, out)
        rows.pop()


def _enumerate_isotropic_impl(space, dim):
    by_pivot = _isotropic_by_pivot(space)
    out = []
    for pivots in itertools.combinations(range(space.N), dim):
        rest = set(pivots[1:])
        for first in by_pivot[pivots[0]]:
            if any(first[c] for c in rest):
                continue
            _isotropic_fill(space, pivots, 1, [first], out)
    out.sort()
    return out


@lru_cache(maxsize=64)
def _isotropic_cached(q, n, dim):
    return tuple(_enumerate_isotropic_impl(HermSpace(q, n), dim))


def enumerate_isotropic(space, dim):
    """All totally isotropic subspaces of the given dimension, as a sorted
    list of reduced-echelon basis row tuples."""
    if not isinstance(space, HermSpace):
        raise DomainError("expected a HermSpace")
    if not isinstance(dim, int) or dim < 0:
        raise DomainError(f"dimension must be a nonnegative integer, got {dim!r}")
    if dim == 0:
        return [()]
    if dim > space.N // 2:
        # the Witt index of a nondegenerate hermitian space is floor(N/2)
        return []
    cost = space.q ** (2 * space.N * dim)
    if cost > _ISOTROPIC_BUDGET:
        raise ResourceError(
            f"isotropic enumeration budget exceeded: q**(2*N*dim) = {cost} "
            f"is above the cap {_ISOTROPIC_BUDGET}"
        )
    if space._default:
        return list(_isotropic_cached(space.q, space.N, dim))
    return _enumerate_isotropic_impl(space, dim)


def count_max_isotropic(q, n):
    """Number of maximal totally isotropic subspaces, by enumeration."""
    return len(enumerate_isotropic(HermSpace(q, n), n // 2))


def count_meeting(q, n, s):
    """Number of maximal isotropics meeting a fixed one in corank s.

    The fixed subspace is the span of the first floor(N/2) coordinate
    vectors, which is isotropic for the default antidiagonal form.
    """
    r = n // 2
    if not isinstance(s, int) or s < 0 or s > r:
        raise DomainError(f"corank must satisfy 0 <= s <= {r}, got {s!r}")
    space = HermSpace(q, n)
    field = space.field
    base_rows = tuple(
        tuple(field.one if j == i else field.zero for j in range(n)) for i in range(r)
    )
    count = 0
    for rows in enumerate_isotropic(space, r):
        inter = 2 * r - _rank(field, base_rows + rows)
        if inter == r - s:
            count += 1
    return count


def _isotropic_closed(q, n, d):
    """Closed-form count of d-dimensional totally isotropic subspaces."""
    num = 1
    for i in range(n - 2 * d + 1, n + 1):
        num *= q**i - (-1) ** i
    den = 1
    for i in range(1, d + 1):
        den *= q ** (2 * i) - 1
    if num % den:
        raise InvariantError("isotropic closed form is not integral")
    return num // den


def _meeting_closed(q, n, s):
    r = n // 2
    shift = s * (s + 2) if n % 2 else s * s
    return q**shift * _gauss_count(r, s, q * q)


# ---------------------------------------------------------------------------
# semilinear pairings and subspace variety point counts


class SemilinearPair:
    """A pairing on GF(q^2)^N twisted by conjugation in the first variable,
    whose matrix J satisfies conj(J)^T = -J.  Degenerate J is allowed; the
    dimension of the radical is exposed for emptiness criteria."""

    __slots__ = ("q", "N", "field", "gram", "radical_rank")

    def __init__(self, q, N, gram=None):
        if not isinstance(N, int) or N < 1:
            raise DomainError(f"dimension must be a positive integer, got {N!r}")
        field = _fq2(q)
        if gram is None:
            eps = field.epsilon()
            gram = tuple(
                tuple(eps if i + j == N - 1 else field.zero for j in range(N))
                for i in range(N)
            )
        else:
            gram = _check_matrix(field, N, gram)
        for i in range(N):
            for j in range(N):
                if field.conj(gram[j][i]) != field.neg(gram[i][j]):
                    raise DomainError("pairing matrix must satisfy conj(J)^T = -J")
        self.q = q
        self.N = N
        self.field = field
        self.gram = gram
        self.radical_rank = N - _rank(field, gram)


def _embedding_table(base, ext):
    """Table embedding GF(q^2) into a larger table field, via a root of the
    base field's defining polynomial.  Checked for multiplicativity."""
    coeffs = base._tf.modulus
    root = None
    for beta in range(ext.size):
        acc = ext.zero
        power = ext.one
        for c in coeffs:
            if c:
                acc = ext.add(acc, ext.mul(c, power))
            power = ext.mul(power, beta)
        if acc == ext.zero:
            root = beta
            break
    if root is None:
        raise InvariantError("no embedding root found in the extension field")
    p = base.p
    table = []
    for x in range(base.size):
        digits = []
        y = x
        for _ in range(2 * base.k):
            y, r = divmod(y, p)
            digits.append(r)
        acc = ext.zero
        power = ext.one
        for c in digits:
            if c:
                acc = ext.add(acc, ext.mul(c, power))
            power = ext.mul(power, root)
        table.append(acc)
    for a in range(base.size):
        for b in range(base.size):
            if table[base.mul(a, b)] != ext.mul(table[a], table[b]):
                raise InvariantError("field embedding fails multiplicativity")
    if len(set(table)) != base.size:
        raise InvariantError("field embedding is not injective")
    return tuple(table)


def _dl_context(pair, e):
    """Extension field, q-power table and embedded pairing matrix."""
    base = pair.field
    if e == 1:
        ext = base
        embed = tuple(range(base.size))
    else:
        ext = _Ops(_table_field(base.p, 2 * base.k * e))
        embed = _embedding_table(base, ext)
    sigma = tuple(ext.pow(x, pair.q) for x in range(ext.size))
    jrows = tuple(tuple(embed[c] for c in row) for row in pair.gram)
    return ext, sigma, jrows


def _perp_rows(fld, sigma, jrows, rows, n):
    """RREF basis of {y : sigma(x)^T J y = 0 for all x in the row span}."""
    conditions = []
    for row in rows:
        cond = [fld.zero] * n
        for s, xs in enumerate(row):
            c = sigma[xs]
            if c:
                jrow = jrows[s]
                for t in range(n):
                    if jrow[t]:
                        cond[t] = fld.add(cond[t], fld.mul(c, jrow[t]))
        conditions.append(cond)
    return _nullspace(fld, conditions, n)


def _pivots_of(rows):
    return tuple(next(i for i, c in enumerate(row) if c) for row in rows)


def dl_points(pair, h, e):
    """Number of rank-h subspaces H over the degree-e extension whose right
    orthogonal complement is contained in H."""
    if not isinstance(pair, SemilinearPair):
        raise DomainError("expected a SemilinearPair")
    if e not in (1, 2):
        raise DomainError(f"extension degree must be 1 or 2, got {e!r}")
    if not isinstance(h, int) or h < 0:
        raise DomainError(f"rank must be a nonnegative integer, got {h!r}")
    n = pair.N
    if h > n:
        return 0
    ext, sigma, jrows = _dl_context(pair, e)
    total = _gauss_count(n, h, ext.size)
    if total > _SUBSPACE_BUDGET:
        raise ResourceError(
            f"subspace enumeration budget exceeded: {total} subspaces is "
            f"above the cap {_SUBSPACE_BUDGET}"
        )
    count = 0
    for rows in _enumerate_subspaces(ext, n, h):
        pivots = _pivots_of(rows)
        perp = _perp_rows(ext, sigma, jrows, rows, n)
        if all(_in_span(ext, v, rows, pivots) for v in perp):
            count += 1
    return count


def dl_bullet_points(pair, e):
    """Number of flag pairs (H1, H2) of ranks (ceil(N/2), ceil(N/2) - 1)
    with the radical inside H2 inside H1, H2 inside the complement of H1,
    and H1 inside the complement of H2, over the degree-e extension."""
    if not isinstance(pair, SemilinearPair):
        raise DomainError("expected a SemilinearPair")
    if e not in (1, 2):
        raise DomainError(f"extension degree must be 1 or 2, got {e!r}")
    n = pair.N
    h1 = (n + 1) // 2
    h2 = h1 - 1
    ext, sigma, jrows = _dl_context(pair, e)
    rad = _nullspace(ext, jrows, n)
    if len(rad) >= h1:
        return 0
    bound = _gauss_count(n, h2, ext.size) * _gauss_count(n, h1, ext.size)
    if bound > _SUBSPACE_BUDGET:
        raise ResourceError(
            f"subspace enumeration budget exceeded: {bound} flag candidates "
            f"is above the cap {_SUBSPACE_BUDGET}"
        )
    count = 0
    for h2rows in _enumerate_subspaces(ext, n, h2):
        pivots2 = _pivots_of(h2rows)
        if not all(_in_span(ext, v, h2rows, pivots2) for v in rad):
            continue
        perp2 = _perp_rows(ext, sigma, jrows, h2rows, n)
        ppiv2 = _pivots_of(perp2)
        if not all(_in_span(ext, v, perp2, ppiv2) for v in h2rows):
            continue
        # complement basis of H2 inside its own complement
        comp = []
        for v in perp2:
            residue, _ = _reduce_with_coeffs(ext, v, h2rows, pivots2)
            if any(residue):
                comp.append(residue)
        comp, _ = _rref(ext, comp)
        t = len(comp)
        # one candidate H1 per line in the quotient perp(H2) / H2
        for lead in range(t):
            for tail in itertools.product(range(ext.size), repeat=t - lead - 1):
                coeffs = (0,) * lead + (1,) + tail
                w = [ext.zero] * n
                for c, vec in zip(coeffs, comp):
                    if c:
                        w = [ext.add(x, ext.mul(c, y)) for x, y in zip(w, vec)]
                h1rows, _ = _rref(ext, h2rows + (tuple(w),))
                perp1 = _perp_rows(ext, sigma, jrows, h1rows, n)
                ppiv1 = _pivots_of(perp1)
                if all(_in_span(ext, v, perp1, ppiv1) for v in h2rows):
                    count += 1
    return count


# ---------------------------------------------------------------------------
# chain rings


class _ChainRing:
    """GF(q^2)[pi]/(pi^m) with integer-coded elements, base q*q digits."""

    __slots__ = ("q", "m", "E", "field", "_mod")

    def __init__(self, q, m):
        self.q = q
        self.m = m
        self.field = _fq2(q)
        self.E = q * q
        self._mod = self.E**m

    def decode(self, a):
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.E)
            out.append(r)
        return out

    def encode(self, digits):
        val = 0
        for d in reversed(digits):
            val = val * self.E + d
        return val

    def add(self, a, b):
        f = self.field
        return self.encode(
            [f.add(x, y) for x, y in zip(self.decode(a), self.decode(b))]
        )

    def neg(self, a):
        f = self.field
        return self.encode([f.neg(x) for x in self.decode(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        f = self.field
        da, db = self.decode(a), self.decode(b)
        out = [0] * self.m
        for i, x in enumerate(da):
            if not x:
                continue
            for j, y in enumerate(db):
                if y and i + j < self.m:
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
        return self.encode(out)

    def sigma(self, a):
        f = self.field
        return self.encode([f.conj(x) for x in self.decode(a)])

    def val(self, a):
        if a == 0:
            return self.m
        return next(i for i, d in enumerate(self.decode(a)) if d)

    def times_pi(self, a):
        return (a * self.E) % self._mod

    def div_pi(self, a, k):
        if a % self.E**k:
            raise InvariantError("inexact division by a power of pi")
        return a // self.E**k

    def inv_unit(self, a):
        if self.val(a) != 0:
            raise InvariantError("inverse of a non-unit requested")
        order = (self.E - 1) * self.E ** (self.m - 1)
        result = 1
        base = a
        e = order - 1
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        if self.mul(result, a) != 1:
            raise InvariantError("unit inversion failed")
        return result


@lru_cache(maxsize=None)
def _chain_ring(q, m):
    return _ChainRing(q, m)


def _smith_valuations(ring, matrix):
    """Pi-adic valuations of the diagonal of a Smith form over the chain
    ring, by minimum-valuation pivoting."""
    mat = [list(row) for row in matrix]
    size = min(len(mat), len(mat[0]) if mat else 0)
    vals = []
    k = 0
    while k < size:
        best = None
        bestv = ring.m
        for i in range(k, len(mat)):
            for j in range(k, len(mat[0])):
                v = ring.val(mat[i][j])
                if v < bestv:
                    bestv, best = v, (i, j)
        if best is None:
            vals.extend([ring.m] * (size - k))
            break
        bi, bj = best
        mat[k], mat[bi] = mat[bi], mat[k]
        for row in mat:
            row[k], row[bj] = row[bj], row[k]
        unit = ring.div_pi(mat[k][k], bestv)
        scale = ring.inv_unit(unit)
        mat[k] = [ring.mul(scale, x) for x in mat[k]]
        for i in range(len(mat)):
            if i == k or mat[i][k] == 0:
                continue
            factor = ring.div_pi(mat[i][k], bestv)
            mat[i] = [ring.sub(x, ring.mul(factor, y)) for x, y in zip(mat[i], mat[k])]
        for j in range(len(mat[0])):
            if j == k or mat[k][j] == 0:
                continue
            factor = ring.div_pi(mat[k][j], bestv)
            for i in range(len(mat)):
                mat[i][j] = ring.sub(mat[i][j], ring.mul(factor, mat[i][k]))
        vals.append(bestv)
        k += 1
    return vals


# ---------------------------------------------------------------------------
# window lattices over GF(q^2)[pi]/(pi^2)


def _b_form(field, u, w):
    """The antidiagonal sesquilinear form sum_s u_s * conj(w_{n-1-s})."""
    n = len(u)
    total = field.zero
    for s, us in enumerate(u):
        if us:
            c = field.conj(w[n - 1 - s])
            if c:
                total = field.add(total, field.mul(us, c))
    return total


def _perp_b(field, rows, n):
    """RREF basis of the right perp of a row span under the antidiagonal
    form: {w : b(u, w) = 0 for all u in the span}."""
    if not rows:
        return _identity_rows(field, n)
    nulls = _nullspace(field, rows, n)
    basis = [tuple(field.conj(nu[n - 1 - j]) for j in range(n)) for nu in nulls]
    return _rref(field, basis)[0]


def _solve_b(field, rows, rhs, n):
    """One solution y of b(row_i, y) = rhs_i for the antidiagonal form."""
    # b(a, y) = sum_s a_s conj(y_{n-1-s}); substituting z_s = conj(y_{n-1-s})
    # turns this into the plain linear system rows . z = rhs
    z = _solve(field, rows, rhs, n)
    return tuple(field.conj(z[n - 1 - t]) for t in range(n))


def _identity_rows(field, n):
    return tuple(
        tuple(field.one if j == i else field.zero for j in range(n)) for i in range(n)
    )


def _std_rows(field, n, k):
    return tuple(
        tuple(field.one if j == i else field.zero for j in range(n)) for i in range(k)
    )


def _split_triple(field, n, rows2):
    rref, pivots = _rref(field, rows2)
    v0, phi, v1 = [], [], []
    for row, piv in zip(rref, pivots):
        if piv < n:
            v0.append(tuple(row[:n]))
            phi.append(tuple(row[n:]))
        else:
            v1.append(tuple(row[n:]))
    v0piv = {next(i for i, c in enumerate(row) if c) for row in v0}
    v1piv = {next(i for i, c in enumerate(row) if c) for row in v1}
    if not v0piv <= v1piv:
        raise InvariantError("module reduction is not contained in its socle content")
    return tuple(v0), tuple(phi), tuple(v1)


class WindowLattice:
    """A lattice between pi*R^N and R^N for R = GF(q^2)[pi]/(pi^2), in a
    canonical normal form.

    Internally the module is stored as a triple: the reduction V0 of the
    module mod pi, the socle content V1 = {v : pi*v lies in the module},
    and one carry vector per V0 basis row recording the lift.  The public
    ``rows`` render this as a sorted echelon generating matrix whose
    entries are (low, high) digit pairs."""

    __slots__ = ("q", "N", "m", "_field", "_v0", "_phi", "_v1", "_rows", "_dual")

    def __init__(self, q, N, generators, m=2):
        if m != 2:
            raise DomainError("only window exponent m=2 lattices can be constructed")
        field = _fq2(q)
        if not isinstance(N, int) or N < 1:
            raise DomainError(f"dimension must be a positive integer, got {N!r}")
        rows2 = []
        zero = [field.zero] * N
        for row in generators:
            row = tuple(row)
            if len(row) != N:
                raise DomainError(f"generator rows must have length {N}")
            g0, g1 = [], []
            for entry in row:
                if not isinstance(entry, (tuple, list)) or len(entry) != 2:
                    raise DomainError(f"entry {entry!r} is not a digit pair")
                lo, hi = entry
                if not (isinstance(lo, int) and isinstance(hi, int)):
                    raise DomainError(f"entry {entry!r} is not a pair of integers")
                if not (0 <= lo < field.size and 0 <= hi < field.size):
                    raise DomainError(f"entry {entry!r} is out of range")
                g0.append(lo)
                g1.append(hi)
            if any(g0):
                rows2.append(g0 + g1)
                rows2.append(zero + g0)
            elif any(g1):
                rows2.append(zero + g1)
        self.q = q
        self.N = N
        self.m = 2
        self._field = field
        self._set_triple(*_split_triple(field, N, rows2))

    def _set_triple(self, v0, phi, v1):
        self._v0 = v0
        self._phi = phi
        self._v1 = v1
        self._rows = None
        self._dual = None

    @classmethod
    def _raw(cls, q, N, v0, phi, v1):
        obj = object.__new__(cls)
        obj.q = q
        obj.N = N
        obj.m = 2
        obj._field = _fq2(q)
        obj._set_triple(v0, phi, v1)
        return obj

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_generators(cls, q, N, generators):
        """Lattice generated by rows of (low, high) digit pairs."""
        return cls(q, N, generators)

    @classmethod
    def standard_circ(cls, q, N):
        """The standard self-dual lattice (the center of the window)."""
        field = _fq2(q)
        return cls._raw(q, N, (), (), _identity_rows(field, N))

    @classmethod
    def standard_bullet(cls, q, N):
        """The standard almost self-dual lattice."""
        field = _fq2(q)
        r = N // 2
        zeros = tuple(tuple([field.zero] * N) for _ in range(r))
        return cls._raw(q, N, _std_rows(field, N, r), zeros, _identity_rows(field, N))

    @classmethod
    def full_window(cls, q, N):
        """The top lattice of the window (the rescaled standard lattice)."""
        field = _fq2(q)
        ident = _identity_rows(field, N)
        zeros = tuple(tuple([field.zero] * N) for _ in range(N))
        return cls._raw(q, N, ident, zeros, ident)

    @classmethod
    def standard_disc(cls, q, N, delta):
        """A standard self-dual lattice at index distance 2*delta from the
        window center."""
        r = N // 2
        if not isinstance(delta, int) or not 0 <= delta <= r:
            raise DomainError(f"distance parameter must satisfy 0 <= delta <= {r}")
        field = _fq2(q)
        zeros = tuple(tuple([field.zero] * N) for _ in range(delta))
        return cls._raw(
            q, N, _std_rows(field, N, delta), zeros, _std_rows(field, N, N - delta)
        )

    # -- normal form and comparisons -------------------------------------------

    @property
    def rows(self):
        if self._rows is None:
            field = self._field
            n = self.N
            entries = []
            pivset = set()
            for row, carry in zip(self._v0, self._phi):
                piv = next(i for i, c in enumerate(row) if c)
                pivset.add(piv)
                entries.append((piv, tuple((row[t], carry[t]) for t in range(n))))
            for row in self._v1:
                piv = next(i for i, c in enumerate(row) if c)
                if piv in pivset:
                    continue
                entries.append((piv, tuple((field.zero, row[t]) for t in range(n))))
            entries.sort()
            self._rows = tuple(r for _, r in entries)
        return self._rows

    def __eq__(self, other):
        if not isinstance(other, WindowLattice):
            return NotImplemented
        return (
            self.q == other.q
            and self.N == other.N
            and self._v0 == other._v0
            and self._phi == other._phi
            and self._v1 == other._v1
        )

    def __hash__(self):
        return hash((self.q, self.N, self._v0, self._phi, self._v1))

    def __lt__(self, other):
        return self.rows < other.rows

    def __repr__(self):
        return f"WindowLattice(q={self.q}, N={self.N}, rows={self.rows!r})"

    # -- module structure -------------------------------------------------------

    def length(self):
        """Length of the module over the chain ring."""
        return len(self._v0) + len(self._v1)

    def _gen_rows2(self):
        n = self.N
        zero = [self._field.zero] * n
        rows = []
        for v, c in zip(self._v0, self._phi):
            rows.append(list(v) + list(c))
            rows.append(zero + list(v))
        for u in self._v1:
            rows.append(zero + list(u))
        return rows

    def _member(self, g0, g1):
        field = self._field
        v0piv = _pivots_of(self._v0)
        residue, coeffs = _reduce_with_coeffs(field, g0, self._v0, v0piv)
        if any(residue):
            return False
        carry = list(g1)
        for c, crow in zip(coeffs, self._phi):
            if c:
                carry = [field.sub(x, field.mul(c, y)) for x, y in zip(carry, crow)]
        v1piv = _pivots_of(self._v1)
        residue, _ = _reduce_with_coeffs(field, carry, self._v1, v1piv)
        return not any(residue)

    def contains(self, other):
        """Whether this lattice contains the other one."""
        if not isinstance(other, WindowLattice):
            raise DomainError("expected a WindowLattice")
        if (self.q, self.N) != (other.q, other.N):
            raise DomainError("lattices live in different windows")
        zero = [self._field.zero] * self.N
        for v, c in zip(other._v0, other._phi):
            if not self._member(v, c):
                return False
        for u in other._v1:
            if not self._member(zero, u):
                return False
        return True

    def sum(self, other):
        """Smallest lattice containing both."""
        if not isinstance(other, WindowLattice):
            raise DomainError("expected a WindowLattice")
        if (self.q, self.N) != (other.q, other.N):
            raise DomainError("lattices live in different windows")
        rows2 = self._gen_rows2() + other._gen_rows2()
        return WindowLattice._raw(
            self.q, self.N, *_split_triple(self._field, self.N, rows2)
        )

    def intersect(self, other):
        """Largest lattice contained in both, via double duality."""
        joined = self.dual_in_window().sum(other.dual_in_window())
        return joined.dual_in_window()

    def pi_multiple(self):
        """The image of the module under multiplication by pi."""
        return WindowLattice._raw(self.q, self.N, (), (), self._v0)

    def members(self, budget=_MEMBER_BUDGET):
        """Every element of the module, as tuples of (low, high) digit pairs."""
        field = self._field
        n = self.N
        total = (self.q * self.q) ** self.length()
        if total > budget:
            raise ResourceError(
                f"member listing budget exceeded: {total} elements is above "
                f"the cap {budget}"
            )
        out = []
        for lam in itertools.product(field.elements, repeat=len(self._v0)):
            x0 = [field.zero] * n
            base1 = [field.zero] * n
            for c, v, carry in zip(lam, self._v0, self._phi):
                if c:
                    x0 = [field.add(x, field.mul(c, y)) for x, y in zip(x0, v)]
                    base1 = [
                        field.add(x, field.mul(c, y)) for x, y in zip(base1, carry)
                    ]
            for mu in itertools.product(field.elements, repeat=len(self._v1)):
                x1 = list(base1)
                for c, u in zip(mu, self._v1):
                    if c:
                        x1 = [field.add(x, field.mul(c, y)) for x, y in zip(x1, u)]
                out.append(tuple(zip(x0, x1)))
        out.sort()
        return out

    # -- duality ----------------------------------------------------------------

    def dual_in_window(self):
        """The dual lattice under the rescaled hermitian pairing.

        The ambient hermitian pairing, rescaled by the uniformizer, induces
        a perfect chain-ring pairing on the window; the dual of a module M
        is {y : B(x, y) = 0 for all x in M}."""
        if self._dual is not None:
            return self._dual
        field = self._field
        n = self.N
        v0_new = _perp_b(field, self._v1, n)
        v1_new = _perp_b(field, self._v0, n)
        v1piv = _pivots_of(v1_new)
        phi_new = []
        for y0 in v0_new:
            rhs = [field.neg(_b_form(field, c, y0)) for c in self._phi]
            if self._v0:
                y1 = _solve_b(field, self._v0, rhs, n)
            else:
                y1 = tuple([field.zero] * n)
            rep, _ = _reduce_with_coeffs(field, y1, v1_new, v1piv)
            phi_new.append(rep)
        dual = WindowLattice._raw(self.q, n, v0_new, tuple(phi_new), v1_new)
        self._dual = dual
        return dual


def classify(lattice):
    """Classify a window lattice as "circ", "bullet" or "other".

    A lattice is "circ" when it equals its dual, and "bullet" when pi times
    the module sits inside the dual with quotient length N - 2*floor(N/2)."""
    if not isinstance(lattice, WindowLattice):
        raise DomainError("expected a WindowLattice")
    dual = lattice.dual_in_window()
    if dual == lattice:
        return "circ"
    shrunk = lattice.pi_multiple()
    if (
        dual.contains(shrunk)
        and dual.length() - shrunk.length() == lattice.N - 2 * (lattice.N // 2)
    ):
        return "bullet"
    return "other"


def disc(lat1, lat2):
    """Total length of (L1 + L2) / (L1 intersect L2)."""
    if not isinstance(lat1, WindowLattice) or not isinstance(lat2, WindowLattice):
        raise DomainError("expected WindowLattice arguments")
    if (lat1.q, lat1.N) != (lat2.q, lat2.N):
        raise DomainError("lattices live in different windows")
    meet = lat1.intersect(lat2)
    return lat1.length() + lat2.length() - 2 * meet.length()


def _window_predicted(q, n):
    big = q * q
    total = 0
    for d1 in range(n + 1):
        for d0 in range(d1 + 1):
            total += (
                _gauss_count(n, d1, big)
                * _gauss_count(d1, d0, big)
                * big ** (d0 * (n - d1))
            )
    return total


@lru_cache(maxsize=8)
def _window_cached(q, n):
    field = _fq2(q)
    out = []
    for d1 in range(n + 1):
        for v1 in _enumerate_subspaces(field, n, d1):
            free_cols = [c for c in range(n) if c not in set(_pivots_of(v1))]
            for d0 in range(d1 + 1):
                for coeff_rows in _enumerate_subspaces(field, d1, d0):
                    ambient = []
                    for crow in coeff_rows:
                        vec = [field.zero] * n
                        for c, base in zip(crow, v1):
                            if c:
                                vec = [
                                    field.add(x, field.mul(c, y))
                                    for x, y in zip(vec, base)
                                ]
                        ambient.append(vec)
                    v0, _ = _rref(field, ambient)
                    for fills in itertools.product(
                        itertools.product(field.elements, repeat=len(free_cols)),
                        repeat=d0,
                    ):
                        phi = []
                        for fill in fills:
                            carry = [field.zero] * n
                            for c, val in zip(free_cols, fill):
                                carry[c] = val
                            phi.append(tuple(carry))
                        out.append(WindowLattice._raw(q, n, v0, tuple(phi), v1))
    out.sort(key=lambda lat: lat.rows)
    return tuple(out)


def enumerate_window(q, n):
    """Every lattice of the window, sorted by normal form."""
    if q not in (2, 3) or not isinstance(n, int) or not 1 <= n <= 4:
        raise ResourceError(
            f"window enumeration budget covers q in (2, 3) and N <= 4, "
            f"got q={q!r}, N={n!r}"
        )
    predicted = _window_predicted(q, n)
    if predicted > _WINDOW_BUDGET:
        raise ResourceError(
            f"window enumeration budget exceeded: {predicted} lattices is "
            f"above the cap {_WINDOW_BUDGET}"
        )
    return list(_window_cached(q, n))


def count_bullet_between(lat1, lat2):
    """Number of almost self-dual lattices within one step of both
    arguments: candidates contain each argument and their pi-multiple lies
    inside each argument.

    Both arguments must classify as "circ" and the first must be the
    standard window center, since the window model is anchored there."""
    if not isinstance(lat1, WindowLattice) or not isinstance(lat2, WindowLattice):
        raise DomainError("expected WindowLattice arguments")
    if (lat1.q, lat1.N) != (lat2.q, lat2.N):
        raise DomainError("lattices live in different windows")
    q, n = lat1.q, lat1.N
    if classify(lat1) != "circ" or classify(lat2) != "circ":
        raise DomainError("both lattices must be self-dual")
    if lat1 != WindowLattice.standard_circ(q, n):
        raise DomainError("the first lattice must be the standard window center")
    if not lat1.contains(lat2.pi_multiple()) or not lat2.contains(lat1.pi_multiple()):
        raise DomainError("lattices are not within one step of each other")
    if q not in (2, 3) or n > 4:
        raise ResourceError(
            f"bullet counting budget covers q in (2, 3) and N <= 4, "
            f"got q={q!r}, N={n!r}"
        )
    field = _fq2(q)
    r = n // 2
    ident = _identity_rows(field, n)
    zeros = tuple(tuple([field.zero] * n) for _ in range(r))
    count = 0
    # candidates containing the center have full socle content and no carry,
    # and the almost self-dual ones among them have reduction rank r exactly
    for v0 in _enumerate_subspaces(field, n, r):
        cand = WindowLattice._raw(q, n, v0, zeros, ident)
        if classify(cand) != "bullet":
            continue
        if cand.contains(lat2) and lat2.contains(cand.pi_multiple()):
            count += 1
    return count


def mixed_counts(q, n, delta, gamma):
    """Counts of almost self-dual lattices above, and self-dual lattices
    below, a self-dual lattice sitting at distance gamma from the standard
    almost self-dual lattice, with prescribed quotient size delta.

    Returns a pair (bullet count, circ count).  Only N = 3 is supported;
    the result is (0, 0) when gamma exceeds delta."""
    if n != 3:
        raise DomainError(f"mixed counts are defined for N = 3 only, got {n!r}")
    r = 1
    if not isinstance(delta, int) or not 0 <= delta <= r:
        raise DomainError(f"delta must satisfy 0 <= delta <= {r}, got {delta!r}")
    if not isinstance(gamma, int) or not 0 <= gamma <= r:
        raise DomainError(f"gamma must satisfy 0 <= gamma <= {r}, got {gamma!r}")
    if q not in (2, 3):
        raise ResourceError(f"mixed counting budget covers q in (2, 3), got q={q!r}")
    if gamma > delta:
        return (0, 0)
    field = _fq2(q)
    bullet_ref = WindowLattice.standard_bullet(q, n)
    if gamma == 0:
        base = WindowLattice.standard_circ(q, n)
    else:
        zero, one = field.zero, field.one
        base = WindowLattice._raw(
            q,
            n,
            ((zero, zero, one),),
            ((zero, zero, zero),),
            ((zero, one, zero), (zero, zero, one)),
        )
    if classify(base) != "circ":
        raise InvariantError("reference lattice is not self-dual")
    joined = base.sum(bullet_ref)
    if joined.length() - bullet_ref.length() != gamma or not bullet_ref.contains(
        joined.pi_multiple()
    ):
        raise InvariantError("reference lattice has the wrong relative position")
    bullet_len = n + n // 2
    c_bullet = 0
    c_circ = 0
    for cand in _window_cached(q, n):
        clen = cand.length()
        if clen == bullet_len and cand.contains(base) and classify(cand) == "bullet":
            grown = cand.sum(bullet_ref)
            if grown.length() - bullet_len == delta and bullet_ref.contains(
                grown.pi_multiple()
            ):
                c_bullet += 1
        if (
            clen == n
            and bullet_ref.contains(cand)
            and classify(cand) == "circ"
            and cand.contains(base.pi_multiple())
        ):
            meet = base.intersect(cand)
            if base.length() - meet.length() == delta:
                c_circ += 1
    return (c_bullet, c_circ)


def window_pairing(q, n, x, y):
    """The rescaled pairing of two window vectors, as a (low, high) pair."""
    ring = _chain_ring(q, 2)
    field = ring.field
    if len(x) != n or len(y) != n:
        raise DomainError(f"vectors must have length {n}")

    def code(entry):
        if not isinstance(entry, (tuple, list)) or len(entry) != 2:
            raise DomainError(f"entry {entry!r} is not a digit pair")
        lo, hi = entry
        if not (0 <= lo < field.size and 0 <= hi < field.size):
            raise DomainError(f"entry {entry!r} is out of range")
        return lo + ring.E * hi

    xc = [code(e) for e in x]
    yc = [code(e) for e in y]
    total = 0
    for s in range(n):
        total = ring.add(total, ring.mul(xc[s], ring.sigma(yc[n - 1 - s])))
    lo, hi = ring.decode(total)
    return (lo, hi)


def smith_dual_lengths(lattice):
    """Relative position of a lattice against its dual, recomputed from the
    Smith form of the rescaled Gram matrix on a lifted basis.

    Returns the pair (length of the dual modulo the intersection, length of
    the lattice modulo the intersection).  This is an independent check of
    dual_in_window: it never touches the window pairing code path."""
    if not isinstance(lattice, WindowLattice):
        raise DomainError("expected a WindowLattice")
    n = lattice.N
    ring = _chain_ring(lattice.q, 6)
    E = ring.E
    basis = []
    used = set()
    for v, c in zip(lattice._v0, lattice._phi):
        basis.append([v[t] + E * c[t] for t in range(n)])
        used.add(next(i for i, x in enumerate(v) if x))
    for u in lattice._v1:
        piv = next(i for i, x in enumerate(u) if x)
        if piv in used:
            continue
        basis.append([E * u[t] for t in range(n)])
        used.add(piv)
    for t in range(n):
        if t not in used:
            row = [0] * n
            row[t] = E * E
            basis.append(row)
    if len(basis) != n:
        raise InvariantError("lifted basis has the wrong size")
    gram = []
    for bi in basis:
        row = []
        for bj in basis:
            total = 0
            for s in range(n):
                total = ring.add(total, ring.mul(bi[s], ring.sigma(bj[n - 1 - s])))
            row.append(total)
        gram.append(row)
    vals = _smith_valuations(ring, gram)
    if any(v > 4 for v in vals):
        raise InvariantError("Smith valuations escape the window range")
    dual_over = sum(max(0, v - 2) for v in vals)
    self_over = sum(max(0, 2 - v) for v in vals)
    return (dual_over, self_over)


def _window3_bullet_count(q, n, delta):
    """Recount of count_bullet_between inside the wider three-step window,
    with set-based module arithmetic and a brute-force dual.

    Supported for q = 2, N = 2 only.  The candidate family here is strictly
    larger than the two-step window (it reaches above its top lattice), so
    agreement with the two-step count shows the narrow window loses
    nothing."""
    if (q, n) != (2, 2):
        raise DomainError("the three-step crosscheck is defined for q=2, N=2")
    r = n // 2
    if not isinstance(delta, int) or not 0 <= delta <= r:
        raise DomainError(f"distance parameter must satisfy 0 <= delta <= {r}")
    ring = _chain_ring(q, 3)
    field = ring.field
    E = ring.E
    codes = range(E**3)
    # reference lattice at index distance 2*delta, in three-step coordinates:
    # the first delta slots hold pi*R, the middle n-2*delta slots pi^2*R and
    # the last delta slots only zero
    slot_sets = []
    ref_gens = []
    for t in range(n):
        if t < delta:
            slot_sets.append([c for c in codes if ring.val(c) >= 1])
            gen_code = E
        elif t < n - delta:
            slot_sets.append([c for c in codes if ring.val(c) >= 2])
            gen_code = E * E
        else:
            slot_sets.append([0])
            gen_code = None
        if gen_code is not None:
            vec = [0] * n
            vec[t] = gen_code
            ref_gens.append(tuple(vec))
    ref_set = set(itertools.product(*slot_sets))
    # the window center in three-step coordinates
    center_set = set(
        itertools.product([c for c in codes if ring.val(c) >= 2], repeat=n)
    )
    # residue generators of (reference scaled up by 1/pi) / reference
    res_gens = []
    for t in range(n):
        vec = [0] * n
        if t < delta:
            vec[t] = 1
        elif t < n - delta:
            vec[t] = E
        else:
            vec[t] = E * E
        res_gens.append(tuple(vec))

    def vec_add(a, b):
        return tuple(ring.add(x, y) for x, y in zip(a, b))

    def vec_scale(c, a):
        return tuple(ring.mul(c, x) for x in a)

    def pairing(a, b):
        total = 0
        for s in range(n):
            total = ring.add(total, ring.mul(a[s], ring.sigma(b[n - 1 - s])))
        return total

    all_vectors = list(itertools.product(codes, repeat=n))
    want_ratio = (q * q) ** (n - 2 * r)
    count = 0
    for d in range(n + 1):
        for rows in _enumerate_subspaces(field, n, d):
            lift = [tuple([0] * n)]
            for row in rows:
                vec = tuple([0] * n)
                for t, c in enumerate(row):
                    if c:
                        vec = vec_add(vec, vec_scale(c, res_gens[t]))
                lift = [
                    vec_add(x, vec_scale(c, vec))
                    for x in lift
                    for c in field.elements
                ]
            module = {vec_add(x, m) for x in lift for m in ref_set}
            # betweenness against the reference, then containment of the
            # window center (which does not hold automatically here)
            pi_module = {tuple(ring.times_pi(c) for c in v) for v in module}
            if not pi_module <= ref_set:
                continue
            if not center_set <= module:
                continue
            gens = list(lift) + list(ref_gens)
            dual_set = {
                y for y in all_vectors if all(pairing(g, y) == 0 for g in gens)
            }
            # almost self-dual: module inside its (pi-shifted) dual with the
            # parity-forced quotient ratio
            if module <= dual_set and len(dual_set) == len(module) * want_ratio:
                count += 1
    return count


# ---------------------------------------------------------------------------
# census


def census(kind, q, n):
    """Census rows for one counting family: a list of dicts with keys q, N,
    parameter, count, closed_form and match."""
    rows = []

    def row(parameter, count, closed):
        rows.append(
            {
                "q": q,
                "N": n,
                "parameter": parameter,
                "count": count,
                "closed_form": closed,
                "match": (count == closed) if closed is not None else None,
            }
        )

    if kind == "isotropic":
        space = HermSpace(q, n)
        for dim in range(n // 2 + 1):
            count = len(enumerate_isotropic(space, dim))
            row(f"dim={dim}", count, _isotropic_closed(q, n, dim))
    elif kind == "meeting":
        for s in range(n // 2 + 1):
            row(f"s={s}", count_meeting(q, n, s), _meeting_closed(q, n, s))
    elif kind == "dl":
        pair = SemilinearPair(q, n)
        for h in range(n + 1):
            row(f"h={h},e=1", dl_points(pair, h, 1), None)
    elif kind == "dlbullet":
        pair = SemilinearPair(q, n)
        for e in (1, 2):
            row(f"e={e}", dl_bullet_points(pair, e), None)
    elif kind == "window":
        window = enumerate_window(q, n)
        kinds = {"circ": 0, "bullet": 0, "other": 0}
        for lat in window:
            kinds[classify(lat)] += 1
        # each isotropic d-subspace yields q**(d*d) self-dual lattices, one
        # per transverse maximal isotropic in the attached hyperbolic 2d-space
        closed_circ = sum(
            _isotropic_closed(q, n, d) * q ** (d * d) for d in range(n // 2 + 1)
        )
        row("total", len(window), _window_predicted(q, n))
        row("circ", kinds["circ"], closed_circ)
        row("bullet", kinds["bullet"], None)
        row("other", kinds["other"], None)
    else:
        raise DomainError(f"unknown census kind {kind!r}")
    return rows
