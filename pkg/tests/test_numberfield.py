"""Number-field layer: arithmetic, automorphism tables, Galois machinery.

Composition tables are cross-checked against an independent sympy oracle
(polynomial substitution reduced mod the defining polynomial), and place
decompositions against distinct-degree factorization of the modulus.
"""

from fractions import Fraction as Q

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from twistctl.errors import (
    NotAnAutomorphism,
    NotClosed,
    NotInvertible,
    NotIrreducible,
    Ramified,
)
from twistctl.polynomials import QPoly, ddf_mod_p
from twistctl.numberfield import (
    FieldElement,
    Subgroup,
    field_from_json,
    field_make,
    field_to_json,
    fixed_field,
    frobenius_at,
    generated_subgroup,
    element_order,
    place_decomposition,
    roots_of_unity,
    stabilizer,
    subgroup_make,
)


def gaussian_field():
    """Q(i) with the identity and complex conjugation."""
    return field_make([1, 0, 1], [[0, 1], [0, -1]])


def eisenstein_field():
    """Q(w), w a primitive cube root of unity; w -> w^2 = -1 - w."""
    return field_make([1, 1, 1], [[0, 1], [-1, -1]])


def sqrt2_field():
    return field_make([-2, 0, 1], [[0, 1], [0, -1]])


def biquadratic_field():
    """Q(sqrt2, i), generator a = sqrt2 + i with a^4 - 2a^2 + 9 = 0.

    In the power basis: sqrt2 = (5a - a^3)/6 and i = (a + a^3)/6, so the
    four automorphisms send a to a, (-2a + a^3)/3, (2a - a^3)/3, -a
    (identity, negate sqrt2, negate i, negate both).
    """
    return field_make(
        [9, 0, -2, 0, 1],
        [[0, 1, 0, 0],
         [0, Q(-2, 3), 0, Q(1, 3)],
         [0, Q(2, 3), 0, Q(-1, 3)],
         [0, -1, 0, 0]])


def rational_field():
    """Q itself as a degree-1 field (modulus x, generator 0)."""
    return field_make([0, 1], [[0]])


ALL_FIELDS = [gaussian_field, eisenstein_field, sqrt2_field,
              biquadratic_field, rational_field]


def all_subgroups(field):
    """Every subgroup, by filtering subsets through the validator."""
    from itertools import combinations
    d = field.degree
    out = []
    rest = [i for i in range(d) if i != 0]
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            try:
                out.append(subgroup_make(field, (0,) + extra))
            except NotClosed:
                pass
    return out


def sympy_compose_oracle(field):
    """Composition table computed independently: the image of the generator
    under sigma_i then sigma_j is e_j(e_i(x)) reduced mod the modulus."""
    x = sympy.symbols("x")
    def to_expr(coords):
        return sum(sympy.Rational(c.numerator, c.denominator) * x ** k
                   for k, c in enumerate(coords))
    phi = sympy.Poly(to_expr(field.min_poly.coeffs), x, domain="QQ")
    images = [to_expr(img.coords) for img in field.aut_images]
    canon = [sympy.Poly(e, x, domain="QQ").rem(phi) for e in images]
    table = []
    for i in range(field.degree):
        row = []
        for j in range(field.degree):
            comp = sympy.Poly(images[j].subs(x, images[i]), x, domain="QQ").rem(phi)
            row.append(canon.index(comp))
        table.append(tuple(row))
    return tuple(table)


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

class TestConstruction:
    def test_gaussian_basics(self):
        K = gaussian_field()
        z = K.element([3, 2])
        assert K.apply_aut(1, z) == K.element([3, -2])
        assert z * K.apply_aut(1, z) == 13
        assert z.inverse() == K.element([Q(3, 13), Q(-2, 13)])
        assert (z * z.inverse()) == 1

    def test_biquadratic_structure(self):
        K = biquadratic_field()
        s2 = K.element([0, Q(5, 6), 0, Q(-1, 6)])
        i = K.element([0, Q(1, 6), 0, Q(1, 6)])
        assert s2 * s2 == 2
        assert i * i == -1
        assert (s2 * i) ** 2 == -2
        assert K.is_abelian
        assert sorted(K.aut_order(k) for k in range(4)) == [1, 2, 2, 2]

    @pytest.mark.parametrize("make", ALL_FIELDS)
    def test_composition_table_matches_sympy(self, make):
        K = make()
        assert K.composition_table == sympy_compose_oracle(K)

    @pytest.mark.parametrize("make", ALL_FIELDS)
    def test_group_axioms(self, make):
        K = make()
        d = K.degree
        t = K.composition_table
        for i in range(d):
            assert t[0][i] == i and t[i][0] == i
            assert t[i][K.inverse_index(i)] == 0
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    assert t[t[i][j]][k] == t[i][t[j][k]]

    def test_rejects_non_monic(self):
        with pytest.raises(NotIrreducible):
            field_make([1, 0, 2], [[0, 1], [0, -1]])

    def test_rejects_reducible(self):
        with pytest.raises(NotIrreducible):
            field_make([-1, 0, 1], [[0, 1], [0, -1]])

    def test_rejects_non_root_image(self):
        with pytest.raises(NotAnAutomorphism):
            field_make([1, 0, 1], [[0, 1], [1, 1]])

    def test_rejects_missing_identity(self):
        with pytest.raises(NotClosed):
            field_make([1, 0, 1], [[0, -1], [0, 1]])

    def test_rejects_duplicate_images(self):
        with pytest.raises(NotClosed):
            field_make([1, 0, 1], [[0, 1], [0, 1]])

    def test_zero_has_no_inverse(self):
        K = gaussian_field()
        with pytest.raises(NotInvertible):
            K.zero().inverse()

    def test_degree_one_field(self):
        K = rational_field()
        assert K.degree == 1
        a = K.from_rational(Q(7, 3))
        assert (a * a).as_fraction() == Q(49, 9)
        assert a.inverse().as_fraction() == Q(3, 7)
        assert frobenius_at(K, 5).index == 0

    def test_json_round_trip(self):
        K = biquadratic_field()
        K2 = field_from_json(field_to_json(K))
        assert K2.min_poly == K.min_poly
        assert K2.composition_table == K.composition_table
        assert [img.coords for img in K2.aut_images] == \
               [img.coords for img in K.aut_images]


# ---------------------------------------------------------------------------
# automorphisms as homomorphisms
# ---------------------------------------------------------------------------

small_coords = st.fractions(min_value=-5, max_value=5, max_denominator=4)


class TestAutomorphismAction:
    @given(st.lists(small_coords, min_size=4, max_size=4),
           st.lists(small_coords, min_size=4, max_size=4),
           st.integers(min_value=0, max_value=3))
    @settings(max_examples=40, deadline=None)
    def test_ring_homomorphism(self, xc, yc, k):
        K = biquadratic_field()
        x, y = K.element(xc), K.element(yc)
        s = lambda v: K.apply_aut(k, v)
        assert s(x + y) == s(x) + s(y)
        assert s(x * y) == s(x) * s(y)

    @given(st.lists(small_coords, min_size=4, max_size=4),
           st.integers(min_value=0, max_value=3),
           st.integers(min_value=0, max_value=3))
    @settings(max_examples=40, deadline=None)
    def test_composition_consistent_with_table(self, xc, i, j):
        K = biquadratic_field()
        x = K.element(xc)
        assert K.apply_aut(i, K.apply_aut(j, x)) == \
               K.apply_aut(K.compose(i, j), x)

    def test_generated_subgroup(self):
        K = biquadratic_field()
        assert generated_subgroup(K, [1]).member_indices == (0, 1)
        assert generated_subgroup(K, [1, 2]).member_indices == (0, 1, 2, 3)
        assert generated_subgroup(K, []).member_indices == (0,)

    def test_subgroup_validation(self):
        K = biquadratic_field()
        assert subgroup_make(K, [0, 3]).order == 2
        with pytest.raises(NotClosed):
            subgroup_make(K, [1, 2])       # no identity
        with pytest.raises(NotClosed):
            subgroup_make(K, [0, 1, 2])    # not closed, bad order


# ---------------------------------------------------------------------------
# stabilizers and fixed fields
# ---------------------------------------------------------------------------

class TestGaloisCorrespondence:
    def test_stabilizers(self):
        K = biquadratic_field()
        s2 = K.element([0, Q(5, 6), 0, Q(-1, 6)])
        i = K.element([0, Q(1, 6), 0, Q(1, 6)])
        assert stabilizer(K, [s2]).member_indices == (0, 2)
        assert stabilizer(K, [i]).member_indices == (0, 1)
        assert stabilizer(K, [K.gen()]).member_indices == (0,)
        assert stabilizer(K, [K.one()]).member_indices == (0, 1, 2, 3)
        assert stabilizer(K, [s2, i]).member_indices == (0,)

    def test_fixed_field_sqrt2(self):
        K = biquadratic_field()
        d = fixed_field(K, subgroup_make(K, [0, 2]))
        assert d.degree == 2
        assert d.min_poly == QPoly([-8, 0, 1])    # primitive element 2*sqrt2

    def test_fixed_field_gaussian_part(self):
        K = biquadratic_field()
        d = fixed_field(K, subgroup_make(K, [0, 1]))
        assert d.degree == 2
        assert d.min_poly == QPoly([4, 0, 1])     # primitive element 2i

    def test_fixed_field_sqrt_minus2(self):
        K = biquadratic_field()
        d = fixed_field(K, subgroup_make(K, [0, 3]))
        assert d.degree == 2
        assert d.min_poly == QPoly([36, -4, 1])   # primitive element 2 + 4*sqrt(-2)

    def test_fixed_field_extremes(self):
        K = biquadratic_field()
        full = fixed_field(K, subgroup_make(K, range(4)))
        assert full.degree == 1 and full.min_poly == QPoly([-1, 1])
        triv = fixed_field(K, subgroup_make(K, [0]))
        assert triv.degree == 4 and triv.min_poly == K.min_poly

    @pytest.mark.parametrize("make", ALL_FIELDS)
    def test_correspondence_round_trip(self, make):
        K = make()
        for S in all_subgroups(K):
            d = fixed_field(K, S)
            assert d.degree * S.order == K.degree
            assert stabilizer(K, [d.primitive_element]) == S
            assert d.min_poly.evaluate(d.primitive_element).is_zero()


# ---------------------------------------------------------------------------
# Frobenius elements and places
# ---------------------------------------------------------------------------

def odd_primes(bound):
    sieve = [True] * bound
    out = []
    for n in range(3, bound, 2):
        if sieve[n]:
            out.append(n)
            for m in range(n * n, bound, n):
                sieve[m] = False
    return out


class TestFrobenius:
    def test_gaussian_pointwise(self):
        K = gaussian_field()
        assert frobenius_at(K, 5) == (0, False)
        assert frobenius_at(K, 13) == (0, False)
        assert frobenius_at(K, 3) == (1, False)
        assert frobenius_at(K, 7) == (1, False)
        with pytest.raises(Ramified):
            frobenius_at(K, 2)

    def test_gaussian_law_mod_four(self):
        K = gaussian_field()
        for p in odd_primes(1000):
            expected = 0 if p % 4 == 1 else 1
            assert frobenius_at(K, p).index == expected, p

    def test_eisenstein_law_mod_three(self):
        K = eisenstein_field()
        for p in odd_primes(500):
            if p == 3:
                continue
            assert frobenius_at(K, p).index == (0 if p % 3 == 1 else 1), p

    def test_biquadratic_pointwise(self):
        K = biquadratic_field()
        assert frobenius_at(K, 17).index == 0    # 17 = 1 mod 8, splits
        assert frobenius_at(K, 7).index == 2     # fixes sqrt2, negates i
        assert frobenius_at(K, 5).index == 1     # fixes i, negates sqrt2
        assert frobenius_at(K, 23).index == 2    # 23 = 7 mod 8
        assert frobenius_at(K, 41).index == 0
        with pytest.raises(Ramified):
            frobenius_at(K, 2)
        with pytest.raises(Ramified):
            frobenius_at(K, 3)   # 3 divides the model discriminant

    @pytest.mark.parametrize("make", [gaussian_field, eisenstein_field,
                                      sqrt2_field, biquadratic_field])
    def test_places_match_factorization(self, make):
        """Residue degrees of places over the trivial subgroup must agree
        with distinct-degree factorization of the modulus mod p."""
        K = make()
        triv = subgroup_make(K, [0])
        for p in odd_primes(200):
            try:
                places = place_decomposition(K, triv, p)
            except Ramified:
                continue
            mine = sorted(pl.residue_degree for pl in places)
            degs = ddf_mod_p(K.min_poly, p)
            expected = sorted(d for d, c in degs for _ in range(c))
            assert mine == expected, (p, mine, expected)

    def test_gaussian_places(self):
        K = gaussian_field()
        triv = subgroup_make(K, [0])
        assert [pl.residue_degree for pl in place_decomposition(K, triv, 13)] == [1, 1]
        assert [pl.residue_degree for pl in place_decomposition(K, triv, 7)] == [2]

    def test_subfield_places(self):
        K = biquadratic_field()
        sqrt2_group = subgroup_make(K, [0, 2])   # fixed field Q(sqrt2)
        assert [pl.residue_degree
                for pl in place_decomposition(K, sqrt2_group, 7)] == [1, 1]
        assert [pl.residue_degree
                for pl in place_decomposition(K, sqrt2_group, 5)] == [2]
        full = subgroup_make(K, range(4))        # fixed field Q
        assert [pl.residue_degree
                for pl in place_decomposition(K, full, 7)] == [1]


# ---------------------------------------------------------------------------
# roots of unity
# ---------------------------------------------------------------------------

class TestRootsOfUnity:
    def test_counts(self):
        assert len(roots_of_unity(gaussian_field())) == 4
        assert len(roots_of_unity(eisenstein_field())) == 6
        assert len(roots_of_unity(sqrt2_field())) == 2
        assert len(roots_of_unity(biquadratic_field())) == 8
        assert len(roots_of_unity(rational_field())) == 2

    def test_gaussian_contents(self):
        K = gaussian_field()
        got = {mu.coords for mu in roots_of_unity(K)}
        assert got == {(1, 0), (-1, 0), (0, 1), (0, -1)}

    def test_all_verified(self):
        K = biquadratic_field()
        for mu in roots_of_unity(K):
            assert element_order(mu, 8) is not None

    def test_element_order(self):
        K = gaussian_field()
        i = K.element([0, 1])
        assert element_order(i, 10) == 4
        assert element_order(K.from_rational(-1), 10) == 2
        assert element_order(K.one(), 10) == 1
        assert element_order(K.from_rational(2), 10) is None
        assert element_order(K.element([1, 1]), 10) is None
