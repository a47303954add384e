"""Twist detection and the group structure on the detected twists.

An inner twist is a pair (sigma, chi) with sigma(a_v) = chi(v) a_v (and, for
n = 3, sigma(b_v) = chi(v)^{-1} b_v) at every good place; an outer twist
(tau, eta) relates the data to its dual: tau(a_v) = eta(v) b_v and
tau(b_v) = eta(v)^{-1} a_v.  Detection is certified only up to a norm bound
and each twist records the bound it was verified at.

Composition: applying (tau, eta) first and (sigma, chi) second yields
(sigma tau, chi^s * sigma(eta)) where s = -1 when the second factor of the
pair, the one applied first, is outer, and +1 otherwise.  The sign comes from
dualizing: (rho ox chi)^dual is rho^dual ox chi^{-1}, so passing a dual
through the left twist inverts its character.  Inverses: inner (sigma, chi)
has inverse (sigma^{-1}, sigma^{-1}(chi)^{-1}); outer (tau, eta) has inverse
(tau^{-1}, tau^{-1}(eta)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .characters import (
    Character,
    char_eval,
    char_fit,
    char_mul,
    char_to_json,
    char_transform,
    fit_all,
    table_character,
    trivial_character,
)
from .eigensystem import EigenSystem
from .errors import (
    Ambiguous,
    DuplicateAutomorphism,
    InsufficientData,
    MissingValue,
    NotClosed,
    NotCoprime,
    NotRootOfUnity,
)
from .numberfield import (
    NumberField,
    SubfieldDescriptor,
    Subgroup,
    element_order,
    fixed_field,
    roots_of_unity,
    stabilizer,
    subgroup_make,
)

DEFAULT_MIN_PLACES = 10
DEFAULT_RAW_ORDER_BOUND = 24


@dataclass(frozen=True)
class ExtraTwist:
    kind: str                      # "inner" or "outer"
    aut_index: int
    character: Character
    verified_bound: int
    undetermined_places: tuple     # places where every defining relation is 0 = 0

    def is_identity(self) -> bool:
        return (self.kind == "inner" and self.aut_index == 0
                and self.character.is_trivial())


@dataclass(frozen=True)
class TwistGroup:
    field: NumberField
    twists: tuple
    inner_subgroup: Subgroup
    full_subgroup: Subgroup

    @property
    def order(self) -> int:
        return len(self.twists)

    @property
    def inner_order(self) -> int:
        return self.inner_subgroup.order

    def twist_at(self, aut_index: int) -> ExtraTwist:
        for t in self.twists:
            if t.aut_index == aut_index:
                return t
        raise KeyError(aut_index)

    def has_outer(self) -> bool:
        return any(t.kind == "outer" for t in self.twists)


def default_n_max(sys: EigenSystem) -> int:
    norms = [v for v in sys.bad_places if isinstance(v, int)]
    return 16 * prod(norms) if norms else 16


def _order_bound(sys: EigenSystem, override: int | None) -> int:
    if override is not None:
        return override
    if sys.is_normalized:
        return sys.n
    if sys.omega is not None and not sys.omega.is_trivial():
        return sys.n * sys.omega.order()
    return DEFAULT_RAW_ORDER_BOUND


def _check_detection_input(sys: EigenSystem):
    if not sys.is_normalized and sys.n != 2:
        raise ValueError("detection on raw data is supported for n = 2 only; "
                         "normalize the system first")


def _power_ok(sys: EigenSystem, chi: Character) -> bool:
    """Unit-determinant systems force chi^n = 1 on every twist character."""
    if not sys.is_normalized:
        return True
    one = chi.field.one()
    return all(v ** sys.n == one for v in chi.table.values())


def _values_ok(chi: Character, order_bound: int) -> bool:
    mu = len(roots_of_unity(chi.field))
    bound = min(order_bound, mu)
    return all(element_order(v, bound) is not None for v in chi.table.values())


# ---------------------------------------------------------------------------
# composition law
# ---------------------------------------------------------------------------

def compose_twists(field: NumberField, left: ExtraTwist,
                   right: ExtraTwist) -> tuple[str, int, Character]:
    """Kind, automorphism index, and character of left o right (right acts
    first).  A dual on the right inverts the left character in passing."""
    kind = "inner" if left.kind == right.kind else "outer"
    index = field.compose(left.aut_index, right.aut_index)
    lchar = left.character if right.kind == "inner" else left.character.inverse()
    char = char_mul(lchar, char_transform(field, left.aut_index, right.character))
    return kind, index, char


def inverse_twist(field: NumberField, t: ExtraTwist) -> tuple[str, int, Character]:
    inv = field.inverse_index(t.aut_index)
    moved = char_transform(field, inv, t.character)
    char = moved.inverse() if t.kind == "inner" else moved
    return t.kind, inv, char


# ---------------------------------------------------------------------------
# detection
# ---------------------------------------------------------------------------

def find_inner(sys: EigenSystem, bound: int, n_max: int | None = None,
               min_places: int = DEFAULT_MIN_PLACES,
               order_bound: int | None = None) -> list[ExtraTwist]:
    """Inner twists (sigma, chi) verified at all good places of norm <= bound.

    chi is fitted from the ratios sigma(a_v)/a_v at places with a_v != 0 and
    then re-checked against both coefficient relations everywhere.  Places
    where every relation degenerates to 0 = 0 are recorded on the twist."""
    _check_detection_input(sys)
    if n_max is None:
        n_max = default_n_max(sys)
    ob = _order_bound(sys, order_bound)
    field = sys.field
    places = sys.places(bound)
    a_support = [v for v in places if not sys.coeffs[v].a.is_zero()]
    if len(a_support) < min_places:
        raise InsufficientData(
            f"{len(a_support)} places have a_v != 0; at least {min_places} "
            f"are needed to pin down a character")
    if sys.n == 3:
        undetermined = tuple(v for v in places
                             if sys.coeffs[v].a.is_zero()
                             and sys.coeffs[v].b.is_zero())
    else:
        undetermined = tuple(v for v in places if sys.coeffs[v].a.is_zero())

    out = []
    for sigma in range(field.degree):
        if sigma == 0:
            # ratios are identically 1, so the minimal fit is the trivial
            # character and both relations hold tautologically
            chi = trivial_character(field)
        elif sys.base_field_label == "Q":
            chi = _inner_dirichlet(sys, sigma, places, a_support, n_max, ob)
        else:
            chi = _inner_table(sys, sigma, places, ob)
        if chi is not None and _power_ok(sys, chi):
            out.append(ExtraTwist("inner", sigma, chi, bound, undetermined))
    return out


def _inner_dirichlet(sys, sigma, places, a_support, n_max, ob):
    field = sys.field
    ratios = {}
    for v in a_support:
        a = sys.coeffs[v].a
        ratios[v] = field.apply_aut(sigma, a) / a
    try:
        chi = char_fit(ratios, n_max, ob, field=field)
    except NotRootOfUnity:
        return None
    if chi is None or not _verify_inner(sys, sigma, chi, places):
        return None
    return chi


def _inner_table(sys, sigma, places, ob):
    """Value-table character over a non-rational base: chi(v) is read off
    whichever coefficient relation determines it, cross-checked when both do."""
    field = sys.field
    table = {}
    for v in places:
        pd = sys.coeffs[v]
        val = None
        if not pd.a.is_zero():
            val = field.apply_aut(sigma, pd.a) / pd.a
        if sys.n == 3 and not pd.b.is_zero():
            from_b = pd.b / field.apply_aut(sigma, pd.b)
            if val is None:
                val = from_b
            elif val != from_b:
                return None
        if val is not None:
            table[v] = val
    chi = table_character(field, table)
    return chi if _values_ok(chi, ob) else None


def _verify_inner(sys: EigenSystem, sigma: int, chi: Character, places) -> bool:
    field = sys.field
    for v in places:
        pd = sys.coeffs[v]
        try:
            if not pd.a.is_zero():
                if field.apply_aut(sigma, pd.a) != char_eval(chi, v) * pd.a:
                    return False
            if sys.n == 3 and not pd.b.is_zero():
                if field.apply_aut(sigma, pd.b) * char_eval(chi, v) != pd.b:
                    return False
        except (NotCoprime, MissingValue):
            return False
    return True


def find_outer(sys: EigenSystem, bound: int, n_max: int | None = None,
               min_places: int = DEFAULT_MIN_PLACES,
               order_bound: int | None = None,
               aut_indices: tuple[int, ...] | None = None) -> list[ExtraTwist]:
    """Outer twists (tau, eta) with tau(a_v) = eta(v) b_v at good v <= bound.

    eta is fitted from tau(a_v)/b_v at places with b_v != 0; the mirrored
    relation tau(b_v) = eta(v)^{-1} a_v is then checked everywhere, which in
    particular rejects any tau when exactly one of a_v, b_v vanishes.  By
    default every automorphism of the coefficient field is tried; pass
    aut_indices to restrict the scan."""
    if sys.n != 3:
        raise ValueError("outer twists are defined for n = 3 data only")
    if not sys.is_normalized:
        raise ValueError("outer detection expects a normalized system")
    if n_max is None:
        n_max = default_n_max(sys)
    ob = _order_bound(sys, order_bound)
    field = sys.field
    places = sys.places(bound)
    b_support = [v for v in places if not sys.coeffs[v].b.is_zero()]
    if len(b_support) < min_places:
        raise InsufficientData(
            f"{len(b_support)} places have b_v != 0; at least {min_places} "
            f"are needed to pin down a character")
    undetermined = tuple(v for v in places
                         if sys.coeffs[v].a.is_zero() and sys.coeffs[v].b.is_zero())

    out = []
    taus = range(field.degree) if aut_indices is None else aut_indices
    for tau in taus:
        eta = (_outer_dirichlet(sys, tau, places, b_support, n_max, ob)
               if sys.base_field_label == "Q"
               else _outer_table(sys, tau, places, ob))
        if eta is not None and _power_ok(sys, eta):
            out.append(ExtraTwist("outer", tau, eta, bound, undetermined))
    return out


def _outer_dirichlet(sys, tau, places, b_support, n_max, ob):
    field = sys.field
    ratios = {}
    for v in b_support:
        pd = sys.coeffs[v]
        ratios[v] = field.apply_aut(tau, pd.a) / pd.b
    try:
        eta = char_fit(ratios, n_max, ob, field=field)
    except NotRootOfUnity:
        return None
    if eta is None or not _verify_outer(sys, tau, eta, places):
        return None
    return eta


def _outer_table(sys, tau, places, ob):
    field = sys.field
    table = {}
    for v in places:
        pd = sys.coeffs[v]
        if pd.a.is_zero() and pd.b.is_zero():
            continue
        if pd.a.is_zero() or pd.b.is_zero():
            return None
        val = field.apply_aut(tau, pd.a) / pd.b
        if pd.a != val * field.apply_aut(tau, pd.b):
            return None
        table[v] = val
    eta = table_character(field, table)
    return eta if _values_ok(eta, ob) else None


def _verify_outer(sys: EigenSystem, tau: int, eta: Character, places) -> bool:
    field = sys.field
    for v in places:
        pd = sys.coeffs[v]
        if pd.a.is_zero() and pd.b.is_zero():
            continue
        try:
            ev = char_eval(eta, v)
        except (NotCoprime, MissingValue):
            return False
        if field.apply_aut(tau, pd.a) != ev * pd.b:
            return False
        if field.apply_aut(tau, pd.b) * ev != pd.a:
            return False
    return True


# ---------------------------------------------------------------------------
# group assembly
# ---------------------------------------------------------------------------

def assemble_group(inners, outers, field: NumberField) -> TwistGroup:
    """Close the detected twists into a group, verifying the composition law,
    kind parity, and that the inner twists sit at index at most 2."""
    twists = tuple(inners) + tuple(outers)
    seen = {}
    for t in twists:
        if t.aut_index in seen:
            raise DuplicateAutomorphism(
                f"automorphism {t.aut_index} carries both a "
                f"{seen[t.aut_index].kind} and an {t.kind} twist")
        seen[t.aut_index] = t
    if 0 not in seen or seen[0].kind != "inner" or not seen[0].character.is_trivial():
        raise NotClosed("the identity twist is missing")

    for left in twists:
        for right in twists:
            kind, index, char = compose_twists(field, left, right)
            if index not in seen:
                raise NotClosed(
                    f"composing automorphisms {left.aut_index} and "
                    f"{right.aut_index} lands on {index}, which carries no "
                    f"detected twist")
            target = seen[index]
            if target.kind != kind:
                raise NotClosed(
                    f"kind parity violated at ({left.aut_index}, {right.aut_index})")
            if target.character != char:
                raise NotClosed(
                    f"character mismatch composing {left.aut_index} "
                    f"and {right.aut_index}")

    full = subgroup_make(field, seen.keys())
    inner = subgroup_make(field, [t.aut_index for t in twists if t.kind == "inner"])
    if full.order % inner.order != 0 or full.order // inner.order > 2:
        raise NotClosed("inner twists must form a subgroup of index 1 or 2")
    return TwistGroup(field, twists, inner, full)


def fixed_fields(group: TwistGroup,
                 field: NumberField) -> tuple[SubfieldDescriptor, SubfieldDescriptor]:
    """(F, F_inn): the subfields fixed by all twist automorphisms and by the
    inner ones.  F_inn is a quadratic extension of F exactly when outer
    twists are present."""
    F = fixed_field(field, group.full_subgroup)
    F_inn = fixed_field(field, group.inner_subgroup)
    expected = 2 * F.degree if group.has_outer() else F.degree
    assert F_inn.degree == expected
    return F, F_inn


# ---------------------------------------------------------------------------
# coefficient-field consistency and the general-type verdict
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentReport:
    inner_stabilizer: Subgroup
    full_stabilizer: Subgroup
    inner_matches: bool
    full_matches: bool
    inclusion_holds: bool
    b_insufficiency: bool
    kernel_places: tuple
    bound: int


def coefficient_field_check(sys: EigenSystem, group: TwistGroup, bound: int) -> CentReport:
    """Coefficient-field check over kernel places.

    At places where every detected character evaluates to 1 the twist
    relations fix a_v under inner automorphisms and a_v + b_v under all of
    them, so the a_v should generate the field fixed by the inner subgroup
    and the sums the field fixed by everything.  Stabilizers are compared to
    the detected subgroups; discrepancies are reported, not raised.  A strict
    inclusion with no contradiction is flagged as possible bound
    insufficiency.  For n = 2 both stabilizers read the a_v."""
    field = sys.field
    kernel = []
    for v in sys.places(bound):
        try:
            if all(char_eval(t.character, v) == 1 for t in group.twists):
                kernel.append(v)
        except (NotCoprime, MissingValue):
            continue
    a_vals = [sys.coeffs[v].a for v in kernel]
    if sys.n == 3:
        sum_vals = [sys.coeffs[v].a + sys.coeffs[v].b for v in kernel]
    else:
        sum_vals = a_vals
    stab_a = stabilizer(field, a_vals)
    stab_sum = stabilizer(field, sum_vals)
    inner_ok = stab_a == group.inner_subgroup
    full_ok = stab_sum == group.full_subgroup
    inclusion = all(i in stab_a for i in group.inner_subgroup)
    return CentReport(
        inner_stabilizer=stab_a,
        full_stabilizer=stab_sum,
        inner_matches=inner_ok,
        full_matches=full_ok,
        inclusion_holds=inclusion,
        b_insufficiency=inclusion and not inner_ok,
        kernel_places=tuple(kernel),
        bound=bound,
    )


@dataclass(frozen=True)
class GeneralTypeVerdict:
    kind: str             # "general-type" | "self-twist" | "essentially-self-dual"
    witness: Character | None
    bound: int


def general_type_verdict(sys: EigenSystem, bound: int,
                         n_max: int | None = None,
                         min_places: int = DEFAULT_MIN_PLACES) -> GeneralTypeVerdict:
    """Classify the system up to the bound: self-twist when a nontrivial
    character fixes it, essentially self-dual when it matches its own dual up
    to a character, general type otherwise.

    A self-twist character is trivial at every place with a_v != 0, so only a
    vanishing pattern in the data can witness a nontrivial one; candidates
    that are trivial at all recorded zero places are discarded.  Self-twist
    wins when both degeneracies hold.  Rank-2 systems are always essentially
    self-dual after determinant normalization, and the self-twist scan runs
    over the rational base field only."""
    _check_detection_input(sys)
    if n_max is None:
        n_max = default_n_max(sys)
    ob = _order_bound(sys, None)
    places = sys.places(bound)
    determined = [v for v in places if not sys.coeffs[v].a.is_zero()]
    if len(determined) < min_places:
        raise InsufficientData(
            f"{len(determined)} places have a_v != 0; at least {min_places} "
            f"are needed for a verdict")
    zeros = [v for v in places if sys.coeffs[v].a.is_zero()]

    if sys.base_field_label == "Q":
        ones = {v: sys.field.one() for v in determined}
        for cand in fit_all(ones, n_max, ob, field=sys.field):
            if cand.is_trivial() or not _power_ok(sys, cand):
                continue
            if not _witnessed_by_zeros(cand, zeros):
                continue
            if _verify_inner(sys, 0, cand, places):
                return GeneralTypeVerdict("self-twist", cand, bound)

    if sys.n == 2:
        return GeneralTypeVerdict("essentially-self-dual",
                                  trivial_character(sys.field), bound)
    try:
        for t in find_outer(sys, bound, n_max, min_places, aut_indices=(0,)):
            return GeneralTypeVerdict("essentially-self-dual",
                                      t.character, bound)
    except (InsufficientData, Ambiguous):
        pass
    return GeneralTypeVerdict("general-type", None, bound)


def _witnessed_by_zeros(chi: Character, zeros) -> bool:
    for v in zeros:
        try:
            if char_eval(chi, v) != 1:
                return True
        except (NotCoprime, MissingValue):
            continue
    return False


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetectionResult:
    group: TwistGroup
    fixed: SubfieldDescriptor
    fixed_inner: SubfieldDescriptor
    cent: CentReport
    verdict: GeneralTypeVerdict
    bound: int


def detect(sys: EigenSystem, bound: int, n_max: int | None = None,
           min_places: int = DEFAULT_MIN_PLACES,
           order_bound: int | None = None) -> DetectionResult:
    """Full pipeline: find twists, assemble the group, compute fixed fields
    and the coefficient-field report.

    Outer twists enter the group only for general-type data; a degenerate
    system keeps its inner-twist group and the verdict carries the witness."""
    inners = find_inner(sys, bound, n_max, min_places, order_bound)
    verdict = general_type_verdict(sys, bound, n_max, min_places)
    if sys.n == 3 and verdict.kind == "general-type":
        outers = find_outer(sys, bound, n_max, min_places, order_bound)
    else:
        outers = []
    group = assemble_group(inners, outers, sys.field)
    F, F_inn = fixed_fields(group, sys.field)
    cent = coefficient_field_check(sys, group, bound)
    return DetectionResult(group, F, F_inn, cent, verdict, bound)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def twist_to_json(t: ExtraTwist) -> dict:
    return {
        "kind": t.kind,
        "aut_index": t.aut_index,
        "character": char_to_json(t.character),
        "verified_bound": t.verified_bound,
        "undetermined_places": [str(v) for v in t.undetermined_places],
    }


def detection_to_json(result: DetectionResult) -> dict:
    from .polynomials import poly_to_strings
    g = result.group
    return {
        "twists": [twist_to_json(t) for t in g.twists],
        "group_order": g.order,
        "inner_order": g.inner_order,
        "fixed_field": {
            "min_poly": poly_to_strings(result.fixed.min_poly),
            "degree": result.fixed.degree,
        },
        "inner_fixed_field": {
            "min_poly": poly_to_strings(result.fixed_inner.min_poly),
            "degree": result.fixed_inner.degree,
        },
        "coefficient_field_check": {
            "inner_matches": result.cent.inner_matches,
            "full_matches": result.cent.full_matches,
            "inclusion_holds": result.cent.inclusion_holds,
            "b_insufficiency": result.cent.b_insufficiency,
            "kernel_place_count": len(result.cent.kernel_places),
        },
        "verdict": {
            "kind": result.verdict.kind,
            "witness": None if result.verdict.witness is None
            else char_to_json(result.verdict.witness),
        },
        "bound": result.bound,
    }
