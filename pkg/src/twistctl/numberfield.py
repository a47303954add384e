"""Explicit Galois number fields with a validated automorphism table.

A field is Q[x]/(Phi) for a monic irreducible Phi of degree d, elements are
coordinate vectors in the power basis 1, alpha, ..., alpha^(d-1), and the
automorphism group is supplied as the d images of alpha and then validated
(annihilation, distinctness, closure).  On top of that sit the Galois-theory
workhorses: stabilizers, fixed subfields with primitive elements, Frobenius
elements at unramified primes, and place decompositions via double cosets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    NotAnAutomorphism,
    NotClosed,
    NotInvertible,
    NotIrreducible,
    Ramified,
)
from .polynomials import (
    QPoly,
    ddf_mod_p,
    discriminant,
    cyclotomic,
    irreducibility_over_q,
    pmod_gcd,
    pmod_pow_mod,
    pmod_reduce,
    poly_from_strings,
    poly_to_strings,
    poly_xgcd,
)

Q = Fraction


class FieldElement:
    """Element of a NumberField in power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field: "NumberField", coords: Sequence[Fraction]):
        coords = tuple(Q(c) for c in coords)
        if len(coords) != field.degree:
            raise ValueError(
                f"expected {field.degree} coordinates, got {len(coords)}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):
        raise AttributeError("FieldElement is immutable")

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coords[0]

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field,
                            [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [a * other for a in self.coords])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field._mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise NotInvertible("division by zero in number field")
        g, u, _ = poly_xgcd(QPoly(self.coords), self.field.min_poly)
        if g.degree != 0:
            raise NotInvertible("element shares a factor with the modulus")
        inv = u % self.field.min_poly
        return self.field.element([inv[i] for i in range(self.field.degree)])

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.coords == other.coords and self.field.min_poly == other.field.min_poly
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"FieldElement({list(self.coords)})"


class NumberField:
    """Q[x]/(min_poly) with an explicit, validated automorphism table."""

    def __init__(self, min_poly: QPoly, aut_images: Sequence[Sequence[Fraction]],
                 _validate: bool = True):
        if not min_poly.is_monic():
            raise NotIrreducible("minimal polynomial must be monic")
        d = min_poly.degree
        if d < 1:
            raise NotIrreducible("minimal polynomial must have degree >= 1")
        self.min_poly = min_poly
        self.degree = d
        self.irreducibility_warning = False
        verdict = irreducibility_over_q(min_poly)
        if verdict == "reducible":
            raise NotIrreducible(f"{min_poly!r} factors over Q")
        if verdict == "unknown":
            self.irreducibility_warning = True

        # power-basis reduction rows for alpha^d .. alpha^(2d-2)
        rows = []
        current = [-c for c in min_poly.coeffs[:-1]]  # alpha^d
        rows.append(tuple(current))
        for _ in range(d - 2):
            shifted = [Q(0)] + list(current[:-1])
            top = current[-1]
            current = [s + top * r for s, r in zip(shifted, rows[0])]
            rows.append(tuple(current))
        self._reduction_rows = tuple(rows)

        if len(aut_images) != d:
            raise NotClosed(f"expected {d} automorphism images, got {len(aut_images)}")
        self.aut_images = tuple(self.element(c) for c in aut_images)
        self._mu_cache = None
        self._sympy_field = None

        if _validate:
            self._validate_automorphisms()
        self.composition_table = self._build_composition_table()
        self.inverse_table = self._build_inverse_table()
        self.is_abelian = all(
            self.composition_table[i][j] == self.composition_table[j][i]
            for i in range(d) for j in range(d))

    # -- construction helpers ---------------------------------------------

    def element(self, coords: Sequence[Fraction]) -> FieldElement:
        return FieldElement(self, coords)

    def from_rational(self, c) -> FieldElement:
        return self.element([Q(c)] + [Q(0)] * (self.degree - 1))

    def zero(self) -> FieldElement:
        return self.from_rational(0)

    def one(self) -> FieldElement:
        return self.from_rational(1)

    def gen(self) -> FieldElement:
        if self.degree == 1:
            return self.from_rational(-self.min_poly[0])
        return self.element([0, 1] + [0] * (self.degree - 2))

    # -- core arithmetic ----------------------------------------------------

    def _mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        d = self.degree
        prod = [Q(0)] * (2 * d - 1)
        for i, a in enumerate(x.coords):
            if a == 0:
                continue
            for j, b in enumerate(y.coords):
                prod[i + j] += a * b
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c == 0:
                continue
            row = self._reduction_rows[k - d]
            for i in range(d):
                out[i] += c * row[i]
        return self.element(out)

    # -- automorphisms -------------------------------------------------------

    def apply_aut(self, index: int, x: FieldElement) -> FieldElement:
        """Image of x under the automorphism with the given index."""
        if not 0 <= index < self.degree:
            raise IndexError(f"automorphism index {index} out of range")
        if index == 0:
            return x
        image = self.aut_images[index]
        acc = self.from_rational(x.coords[-1])
        for c in reversed(x.coords[:-1]):
            acc = acc * image + c
        return acc

    def compose(self, i: int, j: int) -> int:
        """Index of sigma_i o sigma_j (apply j first)."""
        return self.composition_table[i][j]

    def inverse_index(self, i: int) -> int:
        return self.inverse_table[i]

    def aut_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.compose(cur, i)
            k += 1
        return k

    def _validate_automorphisms(self):
        d = self.degree
        alpha = self.gen()
        if self.aut_images[0] != alpha:
            raise NotClosed("automorphism index 0 must be the identity")
        seen = set()
        for i, img in enumerate(self.aut_images):
            if not self.min_poly.evaluate(img).is_zero():
                raise NotAnAutomorphism(
                    f"image {i} does not annihilate the minimal polynomial")
            if img.coords in seen:
                raise NotClosed(f"automorphism image {i} repeats an earlier one")
            seen.add(img.coords)

    def _build_composition_table(self) -> tuple[tuple[int, ...], ...]:
        d = self.degree
        index_of = {img.coords: k for k, img in enumerate(self.aut_images)}
        table = []
        for i in range(d):
            row = []
            for j in range(d):
                composed = self.apply_aut(i, self.aut_images[j])
                k = index_of.get(composed.coords)
                if k is None:
                    raise NotClosed(
                        f"composition of automorphisms {i} and {j} leaves the given set")
                row.append(k)
            table.append(tuple(row))
        return tuple(table)

    def _build_inverse_table(self) -> tuple[int, ...]:
        d = self.degree
        inv = [None] * d
        for i in range(d):
            for j in range(d):
                if self.composition_table[i][j] == 0:
                    inv[i] = j
                    break
            if inv[i] is None:
                raise NotClosed(f"automorphism {i} has no inverse in the set")
        return tuple(inv)

    # -- misc ---------------------------------------------------------------

    def discriminant(self) -> Fraction:
        return discriminant(self.min_poly)

    def __eq__(self, other):
        if not isinstance(other, NumberField):
            return NotImplemented
        return (self.min_poly == other.min_poly
                and all(a.coords == b.coords
                        for a, b in zip(self.aut_images, other.aut_images)))

    def __hash__(self):
        return hash((self.min_poly, tuple(img.coords for img in self.aut_images)))

    def __repr__(self):
        return f"NumberField({self.min_poly!r}, degree={self.degree})"


def field_make(min_poly: QPoly | Sequence, aut_images: Sequence[Sequence]) -> NumberField:
    """Build and validate a Galois number field from generator images."""
    if not isinstance(min_poly, QPoly):
        min_poly = QPoly(min_poly)
    return NumberField(min_poly, aut_images)


def apply_aut(field: NumberField, index: int, x: FieldElement) -> FieldElement:
    return field.apply_aut(index, x)


# --------------------------------------------------------------------------
# subgroups and fixed fields
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    """Subgroup of the automorphism group, as a sorted index tuple."""

    member_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "member_indices",
                           tuple(sorted(set(self.member_indices))))

    @property
    def order(self) -> int:
        return len(self.member_indices)

    def __contains__(self, i: int) -> bool:
        return i in self.member_indices

    def __iter__(self):
        return iter(self.member_indices)


def subgroup_make(field: NumberField, indices: Iterable[int]) -> Subgroup:
    s = Subgroup(tuple(indices))
    if 0 not in s:
        raise NotClosed("subgroup must contain the identity")
    members = set(s.member_indices)
    for i in members:
        for j in members:
            if field.compose(i, j) not in members:
                raise NotClosed(f"subgroup not closed: {i} o {j} escapes")
    if field.degree % s.order != 0:
        raise NotClosed("subgroup order does not divide the group order")
    return s


def generated_subgroup(field: NumberField, generators: Iterable[int]) -> Subgroup:
    members = {0}
    frontier = set(generators) | {0}
    while frontier:
        new = set()
        for i in frontier | members:
            for j in frontier | members:
                k = field.compose(i, j)
                if k not in members and k not in frontier:
                    new.add(k)
        members |= frontier
        frontier = new
    return Subgroup(tuple(members))


def stabilizer(field: NumberField, elems: Iterable[FieldElement]) -> Subgroup:
    """Subgroup of automorphisms fixing every element of elems."""
    elems = list(elems)
    members = []
    for i in range(field.degree):
        if all(field.apply_aut(i, x) == x for x in elems):
            members.append(i)
    return Subgroup(tuple(members))


@dataclass(frozen=True)
class SubfieldDescriptor:
    subgroup: Subgroup
    primitive_element: FieldElement
    min_poly: QPoly
    degree: int


def _candidate_elements(field: NumberField):
    """Deterministic candidates: alpha plus small nonnegative combinations of
    the higher power-basis monomials, enumerated by total size."""
    d = field.degree
    alpha = field.gen()
    powers = [alpha ** m for m in range(2, d)]
    yield alpha
    if not powers:
        return
    s = 1
    while True:
        for tup in _compositions(s, len(powers)):
            x = alpha
            for t, pw in zip(tup, powers):
                if t:
                    x = x + t * pw
            yield x
        s += 1


def _compositions(total: int, parts: int):
    """Tuples of nonnegative ints summing to total, lexicographically
    descending, so (total, 0, ..., 0) comes first."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def fixed_field(field: NumberField, subgroup: Subgroup) -> SubfieldDescriptor:
    """Fixed subfield with a primitive element of exact stabilizer."""
    d = field.degree
    index = d // subgroup.order
    if index == 1:
        one = field.one()
        return SubfieldDescriptor(subgroup, one, QPoly([-1, 1]), 1)
    for cand in _candidate_elements(field):
        beta = field.zero()
        for s in subgroup:
            beta = beta + field.apply_aut(s, cand)
        if stabilizer(field, [beta]) != subgroup:
            continue
        reps = _left_coset_reps(field, subgroup)
        conjugates = [field.apply_aut(g, beta) for g in reps]
        poly = _product_of_linear(field, conjugates)
        coeffs = []
        for c in poly:
            if not c.is_rational():
                raise NotClosed("minimal polynomial of fixed-field element "
                                "has irrational coefficients; group data bad")
            coeffs.append(c.as_fraction())
        return SubfieldDescriptor(subgroup, beta, QPoly(coeffs), index)
    raise AssertionError("unreachable: primitive element search must terminate")


def _left_coset_reps(field: NumberField, subgroup: Subgroup) -> list[int]:
    seen = set()
    reps = []
    for g in range(field.degree):
        coset = frozenset(field.compose(g, s) for s in subgroup)
        if coset not in seen:
            seen.add(coset)
            reps.append(g)
    return reps


def _product_of_linear(field: NumberField, roots: list[FieldElement]):
    """Coefficients (ascending) of prod (x - r) with FieldElement entries."""
    coeffs = [field.one()]
    for r in roots:
        new = [field.zero()] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - c * r
        coeffs = new
    return coeffs


# --------------------------------------------------------------------------
# Frobenius elements and place decomposition
# --------------------------------------------------------------------------

class FrobeniusResult(NamedTuple):
    index: int
    ambiguous: bool


def frobenius_at(field: NumberField, p: int) -> FrobeniusResult:
    """The automorphism acting as x -> x^p modulo a prime above p.

    Works inside F_p[x]/(Phi) without factoring: sigma_i is a Frobenius for
    the primes corresponding to irreducible factors of gcd(Phi, e_i - x^p).
    For abelian groups the answer is independent of that choice; otherwise
    the smallest matching index is returned with the ambiguous flag set.
    """
    disc = field.discriminant()
    if disc == 0 or disc.numerator % p == 0 or disc.denominator % p == 0:
        raise Ramified(f"prime {p} is ramified (or bad) for this field")
    phi_p = pmod_reduce(field.min_poly, p)
    xp = pmod_pow_mod([0, 1], p, phi_p, p)
    matches = []
    for i, img in enumerate(field.aut_images):
        if any(c.denominator % p == 0 for c in img.coords):
            raise Ramified(f"prime {p} divides an automorphism-image denominator")
        img_p = [c.numerator * pow(c.denominator, -1, p) % p for c in img.coords]
        width = max(len(img_p), len(xp), 1)
        diff = [( (img_p[k] if k < len(img_p) else 0)
                 - (xp[k] if k < len(xp) else 0)) % p for k in range(width)]
        while diff and diff[-1] == 0:
            diff.pop()
        if not diff:
            matches.append(i)
            continue
        g = pmod_gcd(phi_p, diff, p)
        if len(g) - 1 > 0:
            matches.append(i)
    if not matches:
        raise Ramified(f"no Frobenius found at {p}; data inconsistent")
    index = min(matches)
    ambiguous = not field.is_abelian and len(matches) > 1
    return FrobeniusResult(index, ambiguous)


@dataclass(frozen=True)
class Place:
    """A place of the fixed field E^S above p, as a double coset."""

    representative: int
    residue_degree: int


def place_decomposition(field: NumberField, subgroup: Subgroup, p: int) -> list[Place]:
    """Places of E^subgroup above p: double cosets S\\G/<sigma_p>, with the
    residue degree given by the orbit size of each right coset under sigma_p."""
    sigma = frobenius_at(field, p).index
    cosets = {}
    for g in range(field.degree):
        coset = frozenset(field.compose(s, g) for s in subgroup)
        cosets.setdefault(coset, g)
    unseen = dict(cosets)
    places = []
    while unseen:
        coset, rep = next(iter(unseen.items()))
        orbit = [coset]
        current = coset
        while True:
            current = frozenset(field.compose(c, sigma) for c in current)
            if current == coset:
                break
            orbit.append(current)
        for c in orbit:
            unseen.pop(c, None)
        places.append(Place(min(min(c) for c in orbit), len(orbit)))
    places.sort(key=lambda pl: pl.representative)
    total = sum(pl.residue_degree for pl in places)
    assert total == field.degree // subgroup.order, "place degrees must sum to subfield degree"
    return places


# --------------------------------------------------------------------------
# roots of unity (sympy-backed search, exact in-house verification)
# --------------------------------------------------------------------------

def _phi(n: int) -> int:
    result, k = 1, 2
    m = n
    while k * k <= m:
        if m % k == 0:
            e = 0
            while m % k == 0:
                m //= k
                e += 1
            result *= (k - 1) * k ** (e - 1)
        k += 1
    if m > 1:
        result *= m - 1
    return result


def _split_primes(field: NumberField, how_many: int = 3) -> list[int]:
    found = []
    p = 2
    while len(found) < how_many and p < 10000:
        p = _next_prime(p)
        try:
            degs = ddf_mod_p(field.min_poly, p)
        except Exception:
            continue
        if degs == [(1, field.degree)]:
            found.append(p)
    return found


def _next_prime(p: int) -> int:
    q = p + 1
    while True:
        if all(q % r for r in range(2, int(q ** 0.5) + 1)):
            return q
        q += 1


def roots_of_unity(field: NumberField) -> list[FieldElement]:
    """All roots of unity in the field, verified by exact exponentiation."""
    if field._mu_cache is not None:
        return list(field._mu_cache)
    d = field.degree
    mu = {field.one().coords, (-field.one()).coords}
    integral = all(c.denominator == 1 for c in field.min_poly.coeffs)
    if integral and d > 1:
        split = _split_primes(field)
        bound = 2 * (d + 1) ** 2
        for k in range(3, bound + 1):
            if d % _phi(k) != 0:
                continue
            if any(p % k != 1 for p in split):
                continue
            for root in _roots_in_field_sympy(field, cyclotomic(k)):
                if (root ** k) == field.one():
                    mu.add(root.coords)
    elems = sorted(mu)
    field._mu_cache = tuple(field.element(c) for c in elems)
    return list(field._mu_cache)


def element_order(x: FieldElement, bound: int) -> int | None:
    """Multiplicative order of x if it is at most bound, else None."""
    acc = x
    for k in range(1, bound + 1):
        if acc == x.field.one():
            return k
        acc = acc * x
    return None


def _sympy_field(field: NumberField):
    if field._sympy_field is not None:
        return field._sympy_field
    import sympy
    from sympy import QQ as SQQ

    x = sympy.symbols("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i
               for i, c in enumerate(field.min_poly.coeffs))
    root = sympy.CRootOf(sympy.Poly(expr, x), 0)
    K = SQQ.algebraic_field(root)
    mod = K.mod.to_list()  # descending
    mine = list(reversed([c for c in field.min_poly.coeffs]))
    if len(mod) != len(mine) or any(Q(int(a.numerator), int(a.denominator)) != b
                                    for a, b in zip(mod, mine)):
        field._sympy_field = (None, None)
        return field._sympy_field
    field._sympy_field = (K, x)
    return field._sympy_field


def _roots_in_field_sympy(field: NumberField, poly: QPoly) -> list[FieldElement]:
    """Roots of a rational polynomial inside the field, via factorization
    over the algebraic field; each root is re-verified by the caller."""
    import sympy

    K, x = _sympy_field(field)
    if K is None:
        return []
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i
               for i, c in enumerate(poly.coeffs))
    try:
        _, factors = sympy.Poly(expr, x, domain=K).factor_list()
    except Exception:
        return []
    out = []
    d = field.degree
    for fac, _ in factors:
        if fac.degree() != 1:
            continue
        lead, const = fac.rep.to_list()
        root_anp = -const / lead
        coeffs = list(reversed(root_anp.to_list()))  # ascending now
        coords = [Q(int(c.numerator), int(c.denominator)) for c in coeffs]
        coords += [Q(0)] * (d - len(coords))
        out.append(field.element(coords))
    return out


# --------------------------------------------------------------------------
# JSON (bit-exact round trip)
# --------------------------------------------------------------------------

def field_to_json(field: NumberField) -> dict:
    return {
        "min_poly": poly_to_strings(field.min_poly),
        "aut_images": [[str(c) for c in img.coords] for img in field.aut_images],
    }


def field_from_json(doc: dict) -> NumberField:
    min_poly = poly_from_strings(doc["min_poly"])
    images = [[Q(s) for s in img] for img in doc["aut_images"]]
    return field_make(min_poly, images)
