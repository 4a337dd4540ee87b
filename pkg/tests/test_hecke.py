"""Tests for Hecke elements, the Satake transform, and parameter predicates.

Oracles used here:
  * the defining unitriangular system itself (forward-multiplying solved
    images must reproduce the scaled characters, which test_charring.py
    validated against raw subset sums);
  * hand-expanded frozen images for small ranks;
  * direct product formulas recomputed with plain Fractions or modular
    integers inside the tests.
"""

import random
from fractions import Fraction

import pytest

from heckelab.charring import SymLaurent, character
from heckelab.errors import DomainError
from heckelab.hecke import (
    EvalContext,
    HeckeElement,
    SatakeMatrix,
    SatakeParam,
    char_poly,
    decomposed_generic,
    eval_phi,
    named_operator,
    random_inert_param,
    satake_condition,
    satake_transform,
    semantic_condition,
    tensor_param,
    verify_satake_identity,
)
from heckelab.qcalc import BASE_NEG_Q, LaurentPoly, q_binomial

Q = LaurentPoly.gen()


def qpow(e, c=1):
    return LaurentPoly({e: c})


class TestHeckeElement:
    def test_unit_and_basis(self):
        u = HeckeElement.unit(4)
        assert u == HeckeElement.basis(4, 0)
        assert u.coeffs == {0: LaurentPoly(1)}
        b = HeckeElement.basis(5, 2, "bullet")
        assert b.flavor == "bullet"

    def test_arithmetic(self):
        a = HeckeElement.basis(4, 1)
        b = HeckeElement.basis(4, 2)
        e = (Q + 1) * a - b * 3
        assert e.coeffs[1] == Q + 1
        assert e.coeffs[2] == LaurentPoly(-3)
        assert a + b - a == b

    def test_flavor_mismatch(self):
        with pytest.raises(DomainError):
            HeckeElement.basis(4, 1) + HeckeElement.basis(4, 1, "bullet")
        with pytest.raises(DomainError):
            HeckeElement.basis(4, 1) + HeckeElement.basis(6, 1)

    def test_delta_range(self):
        with pytest.raises(DomainError):
            HeckeElement.basis(4, 3)
        with pytest.raises(DomainError):
            HeckeElement.basis(4, -1)

    def test_serialization(self):
        e = (Q + 1) * HeckeElement.basis(4, 0) + HeckeElement.basis(4, 2)
        assert e.to_entries() == [[0, [[0, 1], [1, 1]]], [2, [[0, 1]]]]


class TestSatakeMatrix:
    def test_entries_and_unitriangularity(self):
        for N in range(1, 9):
            mat = SatakeMatrix(N)
            r = N // 2
            for d in range(r + 1):
                assert mat.entry(d, d) == LaurentPoly(1)
                for i in range(d + 1):
                    assert mat.entry(d, i) == q_binomial(
                        N - 2 * i, d - i, BASE_NEG_Q
                    )

    def test_out_of_range(self):
        mat = SatakeMatrix(4)
        with pytest.raises(DomainError):
            mat.entry(1, 2)


class TestSatakeTransform:
    def test_unit_maps_to_one(self):
        for N in (2, 3, 5, 8):
            got = satake_transform(HeckeElement.unit(N))
            assert got == SymLaurent.one(N // 2)

    def test_frozen_small_images(self):
        m1 = SymLaurent.gen(1, 1)
        # Rank-1 images solved by hand from the 2x2 systems.
        assert satake_transform(HeckeElement.basis(2, 1)) == Q * m1 + (Q - 1)
        assert satake_transform(HeckeElement.basis(3, 1)) == (Q**2) * m1 + (
            Q - 1
        )

    def test_frozen_rank_two_images(self):
        m1 = SymLaurent.gen(2, 1)
        m2 = SymLaurent.gen(2, 2)
        got1 = satake_transform(HeckeElement.basis(4, 1))
        want1 = qpow(3) * (m1 + m2) + SymLaurent.const(
            2, LaurentPoly({3: 1, 2: -1, 1: 1, 0: -1})
        )
        assert got1 == want1
        got2 = satake_transform(HeckeElement.basis(4, 2))
        want2 = (
            qpow(4) * (m1 * m2)
            + (qpow(4) - qpow(3)) * (m1 + m2)
            + SymLaurent.const(2, LaurentPoly({4: 2, 3: -1, 1: -1}))
        )
        assert got2 == want2

    def test_solves_defining_system(self):
        # Forward-multiplying the solved images through the matrix must
        # reproduce the scaled characters exactly.
        for N in range(2, 8):
            r = N // 2
            mat = SatakeMatrix(N)
            images = [
                satake_transform(HeckeElement.basis(N, i)) for i in range(r + 1)
            ]
            for d in range(r + 1):
                total = SymLaurent.zero(r)
                for i in range(d + 1):
                    total = total + mat.entry(d, i) * images[i]
                assert total == qpow(d * (N - d)) * character(N, d)

    def test_linearity(self):
        a = HeckeElement.basis(4, 1)
        b = HeckeElement.basis(4, 2)
        combo = (Q**2 - 3) * a + (Q + 1) * b
        assert satake_transform(combo) == (Q**2 - 3) * satake_transform(a) + (
            Q + 1
        ) * satake_transform(b)

    def test_bullet_rejected(self):
        with pytest.raises(DomainError):
            satake_transform(HeckeElement.basis(4, 1, "bullet"))


class TestNamedOperators:
    def test_intertwining_small(self):
        assert named_operator("Icirc", 2) == HeckeElement.basis(2, 1) + (
            Q + 1
        ) * HeckeElement.basis(2, 0)
        assert named_operator("Icirc", 3) == HeckeElement.basis(3, 1) + (
            Q**3 + 1
        ) * HeckeElement.basis(3, 0)

    def test_intertwining_general_shape(self):
        e = named_operator("Icirc", 6)
        assert e.coeffs[3] == LaurentPoly(1)
        assert e.coeffs[2] == Q + 1
        assert e.coeffs[1] == (Q + 1) * (Q**3 + 1)
        assert e.coeffs[0] == (Q + 1) * (Q**3 + 1) * (Q**5 + 1)
        o = named_operator("Icirc", 7)
        assert o.coeffs[2] == Q**3 + 1
        assert o.coeffs[0] == (Q**3 + 1) * (Q**5 + 1) * (Q**7 + 1)

    def test_rcirc_small(self):
        assert named_operator("Rcirc", 2) == (Q + 1) * HeckeElement.basis(2, 0)

    def test_tstar_small(self):
        got = named_operator("Tstar", 3)
        assert got == HeckeElement.basis(3, 1) + LaurentPoly(
            {2: -2, 1: -1, 0: 1}
        ) * HeckeElement.basis(3, 0)

    def test_bullet_flavors(self):
        assert named_operator("Rbullet", 4).flavor == "bullet"
        assert named_operator("TbulletOdd", 3) == LaurentPoly(
            {1: -1}
        ) * HeckeElement.basis(3, 0, "bullet")
        # Bullet and circ d-weighted operators share coefficients.
        even_b = named_operator("TbulletEven", 6)
        even_c = named_operator("TcircEven", 6)
        assert even_b.coeffs == even_c.coeffs

    def test_parity_enforced(self):
        for name in ("Rcirc", "TcircEven", "Rbullet", "TbulletEven"):
            with pytest.raises(DomainError):
                named_operator(name, 5)
        for name in ("Tstar", "TbulletOdd"):
            with pytest.raises(DomainError):
                named_operator(name, 4)
        with pytest.raises(DomainError):
            named_operator("Xcirc", 4)


class TestSatakeIdentities:
    @pytest.mark.parametrize("which", ["even1", "even2", "even4"])
    def test_even_identities(self, which):
        for r in (1, 2, 3):
            assert not verify_satake_identity(which, r)

    @pytest.mark.parametrize("which", ["odd1", "odd2"])
    def test_odd_identities(self, which):
        for r in (1, 2, 3):
            assert not verify_satake_identity(which, r)

    def test_bad_input(self):
        with pytest.raises(DomainError):
            verify_satake_identity("even3", 2)
        with pytest.raises(DomainError):
            verify_satake_identity("even1", 0)


class TestEvalPhi:
    def test_rational_small_rank(self):
        a = Fraction(3, 2)
        alpha = SatakeParam.inert([a, 1 / a])
        ctx = EvalContext(Fraction(5))
        got = eval_phi(named_operator("Icirc", 2), alpha, ctx)
        assert got == 5 * (a + 1 / a + 2)

    def test_rational_odd_rank(self):
        a = Fraction(7, 3)
        alpha = SatakeParam.inert([a, 1, 1 / a])
        ctx = EvalContext(Fraction(5))
        got = eval_phi(named_operator("Icirc", 3), alpha, ctx)
        assert got == 25 * (a + 1 / a + 5 + Fraction(1, 5))

    def test_combination_formula(self):
        # (q+1) R - I evaluates to minus the shifted product.
        a = Fraction(2)
        alpha = SatakeParam.inert([a, 1 / a])
        qv = Fraction(7)
        ctx = EvalContext(qv)
        e = (Q + 1) * named_operator("Rcirc", 2) - named_operator("Icirc", 2)
        got = eval_phi(e, alpha, ctx)
        assert got == -qv * (a + 1 / a - qv - 1 / qv)

    def test_evaluation_props_modular(self):
        # All five product formulas checked against direct modular
        # products at seeded random unitary parameters.
        p = 10007
        rng = random.Random(20260814)
        for r in (1, 2, 3, 4):
            for parity in ("even", "odd"):
                N = 2 * r if parity == "even" else 2 * r + 1
                alpha = random_inert_param(N, p, rng)
                qv = rng.randrange(2, p - 1)
                ctx = EvalContext(qv, p=p)
                half = [int(x) for x in alpha.entries[:r]]
                ms = [(x + pow(x, -1, p)) % p for x in half]
                qinv = pow(qv, -1, p)
                if parity == "even":
                    shift = pow(qv, r * r, p)
                    want1 = shift
                    want2 = shift
                    for m in ms:
                        want1 = want1 * (m + 2) % p
                        want2 = want2 * (m - qv - qinv) % p
                    got1 = eval_phi(named_operator("Icirc", N), alpha, ctx)
                    assert got1 == want1
                    e2 = (Q + 1) * named_operator("Rcirc", N) - named_operator(
                        "Icirc", N
                    )
                    assert eval_phi(e2, alpha, ctx) == -want2 % p
                    e3 = named_operator("Rcirc", N) + (Q + 1) * named_operator(
                        "TcircEven", N
                    )
                    scale = (pow(qv, r * r + 1, p) - pow(qv, r * r - 1, p)) % p
                    want3 = 0
                    for j in range(r):
                        prod = 1
                        for i in range(r):
                            if i != j:
                                prod = prod * (ms[i] - qv - qinv) % p
                        want3 = (want3 + prod) % p
                    assert eval_phi(e3, alpha, ctx) == -scale * want3 % p
                else:
                    shift = pow(qv, r * r + r, p)
                    want1 = shift
                    want2 = shift
                    for m in ms:
                        want1 = want1 * (m + qv + qinv) % p
                        want2 = want2 * (m - 2) % p
                    assert (
                        eval_phi(named_operator("Icirc", N), alpha, ctx) == want1
                    )
                    assert (
                        eval_phi(named_operator("Tstar", N), alpha, ctx) == want2
                    )

    def test_noninvertible_q_rejected(self):
        alpha = SatakeParam.inert([3, pow(3, -1, 7)], p=7)
        with pytest.raises(DomainError):
            eval_phi(named_operator("Icirc", 2), alpha, EvalContext(0, p=7))

    def test_bullet_rejected(self):
        alpha = SatakeParam.inert([Fraction(2), Fraction(1, 2)])
        with pytest.raises(DomainError):
            eval_phi(
                named_operator("Rbullet", 2), alpha, EvalContext(Fraction(3))
            )


class TestSatakeParam:
    def test_pairing_validated(self):
        SatakeParam.inert([Fraction(2), Fraction(1, 2)])
        SatakeParam.inert([3, 1, pow(3, -1, 11)], p=11)
        with pytest.raises(DomainError):
            SatakeParam.inert([Fraction(2), Fraction(2)])
        with pytest.raises(DomainError):
            SatakeParam.inert([2, 2, pow(2, -1, 11)], p=11)

    def test_char_poly_vieta(self):
        a = Fraction(3)
        alpha = SatakeParam.inert([a, 1 / a])
        assert char_poly(alpha) == [1, -(a + 1 / a), 1]

    def test_char_poly_rank_one(self):
        assert char_poly(SatakeParam.inert([1])) == [-1, 1]

    def test_unitarity_functional_equation(self):
        rng = random.Random(99)
        p = 10007
        for _ in range(50):
            N = rng.randrange(1, 9)
            alpha = random_inert_param(N, p, rng)
            coeffs = char_poly(alpha)
            # Functional equation: c_k = (-1)^N c_{N-k} mod p.
            sign = 1 if N % 2 == 0 else -1
            for k in range(N + 1):
                assert (coeffs[k] - sign * coeffs[N - k]) % p == 0
            assert alpha.is_unitary()

    def test_unitary_multiset_criterion(self):
        # Independent criterion: inversion-closed and product 1.
        entries = [3, 5, pow(5, -1, 11), pow(3, -1, 11)]
        alpha = SatakeParam.inert(entries, p=11)
        assert alpha.is_unitary()
        prod = 1
        for x in entries:
            prod = prod * x % 11
        assert prod == 1

    def test_split_params(self):
        a = SatakeParam.split([Fraction(2), Fraction(3)], [
            Fraction(1, 2),
            Fraction(1, 3),
        ])
        assert a.kind == "split"
        assert a.is_unitary()
        b = SatakeParam.split([Fraction(2), Fraction(3)], [
            Fraction(1, 2),
            Fraction(1, 5),
        ])
        assert not b.is_unitary()

    def test_tensor_inert(self):
        a = Fraction(2)
        b = Fraction(3)
        x = SatakeParam.inert([a, 1 / a])
        y = SatakeParam.inert([b, 1, 1 / b])
        t = tensor_param(x, y)
        assert t.rank == 6
        assert sorted(t.entries) == sorted(
            [a * b, a, a / b, b / a, 1 / a, 1 / (a * b)]
        )
        assert t.is_unitary()

    def test_tensor_preserves_unitarity_random(self):
        rng = random.Random(4242)
        p = 10007
        for _ in range(25):
            n0 = rng.randrange(1, 5)
            n1 = rng.randrange(1, 5)
            x = random_inert_param(n0, p, rng)
            y = random_inert_param(n1, p, rng)
            t = tensor_param(x, y)
            assert t.rank == n0 * n1
            assert t.is_unitary()

    def test_tensor_kind_mismatch(self):
        x = SatakeParam.inert([Fraction(2), Fraction(1, 2)])
        y = SatakeParam.split([Fraction(2)], [Fraction(1, 2)])
        with pytest.raises(DomainError):
            tensor_param(x, y)


class TestConditions:
    def test_tate_generic(self):
        p = 101
        a = 5
        alpha = SatakeParam.inert([a, 1, pow(a, -1, p)], p=p)
        P = char_poly(alpha)
        assert satake_condition(P, 3, "tate_generic", p=p)
        double_one = SatakeParam.inert([1, 1, 1], p=p)
        assert not satake_condition(char_poly(double_one), 3, "tate_generic", p=p)

    def test_level_raising_special(self):
        p = 101
        qv = 7
        alpha = SatakeParam.inert([qv, pow(qv, -1, p)], p=p)
        assert satake_condition(char_poly(alpha), qv, "level_raising_special", p=p)
        twice = SatakeParam.inert(
            [qv, qv, pow(qv, -1, p), pow(qv, -1, p)], p=p
        )
        assert not satake_condition(
            char_poly(twice), qv, "level_raising_special", p=p
        )
        assert not semantic_condition(twice, qv, "level_raising_special")

    def test_intertwining_even(self):
        p = 101
        alpha = SatakeParam.inert([p - 1, p - 1], p=p)
        assert not satake_condition(char_poly(alpha), 7, "intertwining_generic", p=p)
        assert not semantic_condition(alpha, 7, "intertwining_generic")

    def test_functional_equation_enforced(self):
        with pytest.raises(DomainError):
            satake_condition([5, 1, 1], 3, "tate_generic", p=101)

    def test_parity_argument(self):
        p = 101
        alpha = SatakeParam.inert([3, 1, pow(3, -1, p)], p=p)
        P = char_poly(alpha)
        assert satake_condition(P, 3, "tate_generic", parity="odd", p=p)
        with pytest.raises(DomainError):
            satake_condition(P, 3, "tate_generic", parity="even", p=p)
        with pytest.raises(DomainError):
            satake_condition(P, 3, "level_raising_special", p=p)

    def test_equivalence_on_random_samples(self):
        p = 10007
        rng = random.Random(123)
        names = ["tate_generic", "level_raising_special", "intertwining_generic"]
        for trial in range(150):
            N = rng.randrange(1, 9)
            # Mix generic parameters with ones rigged to contain the
            # special values, so both outcomes are exercised.
            special = rng.random() < 0.5
            qv = rng.randrange(2, p - 1)
            if qv * qv % p == 1:
                continue
            force = rng.choice([qv, 1, p - qv, p - 1]) if special else None
            alpha = random_inert_param(N, p, rng, force_value=force)
            P = char_poly(alpha)
            for which in names:
                odd_only = which == "tate_generic"
                even_only = which == "level_raising_special"
                if odd_only and N % 2 == 0:
                    continue
                if even_only and N % 2 == 1:
                    continue
                assert satake_condition(P, qv, which, p=p) == semantic_condition(
                    alpha, qv, which
                )

    def test_decomposed_generic(self):
        assert decomposed_generic([Fraction(1)], Fraction(3))
        a = Fraction(5)
        assert not decomposed_generic([a, 3 * a], Fraction(3))
        assert decomposed_generic([a, 2 * a], Fraction(3))
        with pytest.raises(DomainError):
            decomposed_generic([Fraction(0), a], Fraction(3))

    def test_decomposed_generic_modular(self):
        p = 101
        assert not decomposed_generic([5, 15], 3, p=p)
        assert decomposed_generic([5, 16], 3, p=p)

    def test_decomposed_generic_random(self):
        rng = random.Random(7)
        p = 10007
        qv = 5
        for _ in range(100):
            roots = []
            while len(roots) < 6:
                x = rng.randrange(1, p)
                if all(
                    x != qv * y % p and y != qv * x % p for y in roots
                ) and x not in roots:
                    roots.append(x)
            assert decomposed_generic(roots, qv, p=p)
