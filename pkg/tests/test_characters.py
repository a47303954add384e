"""Character layer: unit groups, evaluation, transforms, products, fitting.

The unit-group decomposition is checked against a brute-force enumeration,
and the fitting search against hand-computed tables (including one where no
character of small modulus exists and one that is genuinely ambiguous).
"""

from fractions import Fraction as Q
from math import gcd

import pytest

from twistctl.errors import (
    Ambiguous,
    IncompatibleSupports,
    MissingValue,
    NotCoprime,
    NotRootOfUnity,
)
from twistctl.numberfield import field_make
from twistctl.characters import (
    char_eval,
    char_fit,
    char_from_json,
    char_mul,
    char_to_json,
    char_transform,
    characters_mod,
    dirichlet_character,
    fit_all,
    table_character,
    trivial_character,
    unit_group_structure,
)


def gaussian_field():
    return field_make([1, 0, 1], [[0, 1], [0, -1]])


def biquadratic_field():
    return field_make(
        [9, 0, -2, 0, 1],
        [[0, 1, 0, 0],
         [0, Q(-2, 3), 0, Q(1, 3)],
         [0, Q(2, 3), 0, Q(-1, 3)],
         [0, -1, 0, 0]])


def primes_upto(bound):
    return [p for p in range(2, bound) if all(p % k for k in range(2, p))]


def euler_phi(n):
    return sum(1 for v in range(1, n + 1) if gcd(v, n) == 1)


# ---------------------------------------------------------------------------
# unit group structure
# ---------------------------------------------------------------------------

class TestUnitGroup:
    def test_frozen_examples(self):
        assert unit_group_structure(1) == []
        assert unit_group_structure(2) == []
        assert unit_group_structure(4) == [(3, 2)]
        assert unit_group_structure(8) == [(7, 2), (5, 2)]
        assert unit_group_structure(15) == [(11, 2), (7, 4)]

    @pytest.mark.parametrize("N", range(1, 101))
    def test_generates_all_units_exactly_once(self, N):
        gens = unit_group_structure(N)
        sizes = 1
        for g, d in gens:
            assert gcd(g, N) == 1
            assert pow(g, d, N) == 1
            for q in {f for f in range(2, d + 1) if d % f == 0 and
                      all(f % k for k in range(2, f))}:
                assert pow(g, d // q, N) != 1, (N, g, d)
            sizes *= d
        assert sizes == euler_phi(N)
        from itertools import product
        seen = set()
        for exps in product(*(range(d) for _, d in gens)):
            r = 1 % N
            for (g, _), e in zip(gens, exps):
                r = r * pow(g, e, N) % N
            seen.add(r)
        assert seen == {v % N for v in range(1, N + 1) if gcd(v, N) == 1}


# ---------------------------------------------------------------------------
# evaluation, transforms, products
# ---------------------------------------------------------------------------

class TestEvalAndAlgebra:
    def test_trivial(self):
        K = gaussian_field()
        chi = trivial_character(K)
        for v in [2, 3, 97]:
            assert char_eval(chi, v) == 1
        assert chi.is_trivial() and chi.order() == 1 and chi.conductor() == 1

    def test_mod4_quadratic(self):
        K = gaussian_field()
        chi = dirichlet_character(K, 4, [K.from_rational(-1)])
        assert char_eval(chi, 7) == -1
        assert char_eval(chi, 13) == 1
        assert chi.order() == 2 and chi.conductor() == 4
        with pytest.raises(NotCoprime):
            char_eval(chi, 6)

    def test_order_four_table(self):
        K = gaussian_field()
        i = K.element([0, 1])
        chi = dirichlet_character(K, 5, [i])
        got = {r: v.coords for r, v in sorted(chi.table.items())}
        assert got == {1: (1, 0), 2: (0, 1), 3: (0, -1), 4: (-1, 0)}
        assert chi.order() == 4

    def test_value_table_kind(self):
        K = gaussian_field()
        chi = table_character(K, {3: K.element([0, 1]), 7: K.from_rational(-1)})
        assert char_eval(chi, 3) == K.element([0, 1])
        with pytest.raises(MissingValue):
            char_eval(chi, 11)

    def test_rejects_bad_generator_image(self):
        K = gaussian_field()
        with pytest.raises(NotRootOfUnity):
            dirichlet_character(K, 4, [K.from_rational(2)])
        with pytest.raises(NotRootOfUnity):
            dirichlet_character(K, 4, [K.element([0, 1])])   # i has order 4, not 2

    def test_transform_fixes_quadratic(self):
        K = gaussian_field()
        chi = dirichlet_character(K, 4, [K.from_rational(-1)])
        assert char_transform(K, 1, chi) == chi
        assert char_transform(K, 0, chi) == chi

    def test_transform_inverts_order_four(self):
        K = gaussian_field()
        chi = dirichlet_character(K, 5, [K.element([0, 1])])
        conj = char_transform(K, 1, chi)
        assert conj == char_mul(chi, char_mul(chi, chi))   # chi^{-1} = chi^3
        assert conj == chi.inverse()
        assert conj != chi

    def test_transform_composes_along_table(self):
        K = biquadratic_field()
        i = K.element([0, Q(1, 6), 0, Q(1, 6)])
        chi = dirichlet_character(K, 5, [i])
        for a in range(4):
            for b in range(4):
                lhs = char_transform(K, a, char_transform(K, b, chi))
                rhs = char_transform(K, K.compose(a, b), chi)
                assert lhs == rhs

    def test_mul_identity_and_involution(self):
        K = gaussian_field()
        chi = dirichlet_character(K, 4, [K.from_rational(-1)])
        assert char_mul(chi, trivial_character(K)) == chi
        assert char_mul(chi, chi) == trivial_character(K)

    def test_mul_crt(self):
        K = gaussian_field()
        chi4 = dirichlet_character(K, 4, [K.from_rational(-1)])
        chi3 = dirichlet_character(K, 3, [K.from_rational(-1)])
        prod = char_mul(chi4, chi3)
        assert prod.modulus == 12 and prod.conductor() == 12
        for p in primes_upto(50):
            if p in (2, 3):
                continue
            assert char_eval(prod, p) == char_eval(chi4, p) * char_eval(chi3, p)

    def test_mul_is_commutative_and_associative(self):
        K = gaussian_field()
        i = K.element([0, 1])
        a = dirichlet_character(K, 5, [i])
        b = dirichlet_character(K, 4, [K.from_rational(-1)])
        c = dirichlet_character(K, 3, [K.from_rational(-1)])
        assert char_mul(a, b) == char_mul(b, a)
        assert char_mul(char_mul(a, b), c) == char_mul(a, char_mul(b, c))

    def test_mul_incompatible(self):
        K = gaussian_field()
        tab = table_character(K, {3: K.one()})
        other = table_character(K, {5: K.one()})
        with pytest.raises(IncompatibleSupports):
            char_mul(tab, other)
        with pytest.raises(IncompatibleSupports):
            char_mul(tab, trivial_character(K))

    def test_induced_character_equals_primitive(self):
        K = gaussian_field()
        chi4 = dirichlet_character(K, 4, [K.from_rational(-1)])
        induced = char_mul(chi4, trivial_character(K))
        lifted = dirichlet_character(
            K, 12, {g: char_eval(chi4, g) for g, _ in unit_group_structure(12)})
        assert lifted.modulus == 12
        assert lifted.conductor() == 4
        assert lifted == chi4
        assert lifted.primitive().modulus == 4
        assert induced == chi4

    def test_values_satisfy_order(self):
        K = gaussian_field()
        for chi in [dirichlet_character(K, 5, [K.element([0, 1])]),
                    dirichlet_character(K, 8, [K.from_rational(-1), K.one()]),
                    trivial_character(K)]:
            n = chi.order()
            for v in chi.table.values():
                assert v ** n == 1


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

class TestFitting:
    def test_legendre_mod_four(self):
        K = gaussian_field()
        vals = {p: K.from_rational(1 if p % 4 == 1 else -1)
                for p in primes_upto(50) if p != 2}
        chi = char_fit(vals, 12, 2)
        assert chi is not None
        assert chi.conductor() == 4 and chi.order() == 2
        assert char_eval(chi, 3) == -1

    def test_all_ones_gives_trivial(self):
        K = gaussian_field()
        vals = {p: K.one() for p in primes_upto(50) if p != 2}
        chi = char_fit(vals, 12, 2)
        assert chi == trivial_character(K) and chi.conductor() == 1

    def test_no_character_fits(self):
        K = gaussian_field()
        one, mone = K.one(), K.from_rational(-1)
        assert char_fit({3: one, 7: mone, 11: one, 17: mone}, 8, 2) is None

    def test_ambiguous_pair_of_quartic_characters(self):
        # 19 and 29 are 4 mod 5, where both order-4 characters mod 5 take the
        # value -1; nothing of smaller conductor matches.
        K = gaussian_field()
        mone = K.from_rational(-1)
        with pytest.raises(Ambiguous):
            char_fit({19: mone, 29: mone}, 8, 4, field=K)

    def test_order_bound_disambiguates(self):
        K = gaussian_field()
        mone = K.from_rational(-1)
        chi = char_fit({19: mone, 29: mone}, 8, 2, field=K)
        assert chi.conductor() == 8 and chi.order() == 2
        assert char_eval(chi, 3) == -1
        assert char_eval(chi, 5) == -1
        assert char_eval(chi, 7) == 1

    def test_determined_place_excludes_modulus(self):
        # a nonzero ratio at v = 3 rules out every modulus divisible by 3
        K = gaussian_field()
        fits = fit_all({3: K.from_rational(-1)}, 12, 2, field=K)
        assert all(f.modulus % 3 != 0 for f in fits)

    def test_not_root_of_unity(self):
        K = gaussian_field()
        with pytest.raises(NotRootOfUnity):
            char_fit({3: K.from_rational(2)}, 8, 4)
        with pytest.raises(NotRootOfUnity):
            char_fit({3: K.element([0, 1])}, 8, 2)   # order 4 above the bound

    @pytest.mark.parametrize("modulus,images_spec", [
        (4, [-1]), (3, [-1]), (8, [-1, 1]), (8, [1, -1]), (8, [-1, -1]),
        (5, ["i"]), (12, [-1, -1]), (16, [-1, "i"]),
    ])
    def test_round_trip_recovery(self, modulus, images_spec):
        K = gaussian_field()
        i = K.element([0, 1])
        images = [i if s == "i" else K.from_rational(s) for s in images_spec]
        chi = dirichlet_character(K, modulus, images)
        vals = {p: char_eval(chi, p) for p in primes_upto(200)
                if gcd(p, modulus) == 1}
        got = char_fit(vals, max(modulus, 4), 4)
        assert got == chi.primitive()
        for p, v in vals.items():
            assert char_eval(got, p) == v

    def test_character_count_mod_five(self):
        K = gaussian_field()
        assert len(list(characters_mod(K, 5))) == 4
        assert len(list(characters_mod(K, 5, order_bound=2))) == 2
        assert len(list(characters_mod(K, 8))) == 4


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

class TestJson:
    def test_dirichlet_round_trip(self):
        K = gaussian_field()
        chi = dirichlet_character(K, 5, [K.element([0, 1])])
        doc = char_to_json(chi)
        assert doc == {"kind": "dirichlet", "modulus": 5,
                       "values_on_generators": {"2": ["0", "1"]}}
        back = char_from_json(K, doc)
        assert back == chi and char_to_json(back) == doc

    def test_table_round_trip(self):
        K = gaussian_field()
        chi = table_character(K, {3: K.element([0, Q(1, 2)]), 7: K.one()})
        doc = char_to_json(chi)
        back = char_from_json(K, doc)
        assert char_to_json(back) == doc
        assert back.table == chi.table
