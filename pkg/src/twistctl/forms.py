"""Twisted forms of SL_n: cocycle validation, finite-field descent oracles,
and the per-prime classification that feeds the image report.

A cocycle assigns to each element of a Galois group an invertible matrix
alpha and a flip flag; the associated automorphism of SL_n is conjugation by
alpha, preceded by transpose-inverse when the flag is set.  Validation checks
the cocycle identity on every ordered pair up to scalars, since conjugation
kills the center.  Over a finite-field model (E, F) = (F_{q^m}, F_q) the
fixed points of the twisted Galois action are enumerated by brute force,
which gives an independent oracle: trivial cocycles descend to the split
SL_n(F_q) and flip cocycles to special unitary groups, with orders matched
against closed forms.  Over number fields the same validation runs
symbolically on exact coordinates.

Classification at a prime p is purely combinatorial: a place of the fixed
field F of the twist group is split (inner form) when its double coset under
the full group breaks into two double cosets under the inner subgroup,
i.e. when the place splits in the quadratic extension fixed by the inner
twists; otherwise the form is the unitary group of that quadratic extension.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as datafield
from fractions import Fraction

from .errors import BudgetExceeded, CocycleViolation, NotInvertible, SchemaError
from .finitefield import FiniteField, finite_field, prime_power, special_linear
from .numberfield import (
    NumberField,
    Subgroup,
    field_from_json,
    field_to_json,
    frobenius_at,
    subgroup_make,
)
from .twists import DetectionResult, TwistGroup

DEFAULT_BUDGET = 2 ** 22


# ---------------------------------------------------------------------------
# ring-generic matrix helpers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ring:
    """Scalar operations shared by the matrix routines, so the same code
    runs on exact number-field elements and on finite-field codes."""
    zero: object
    one: object
    add: callable
    sub: callable
    mul: callable
    div: callable
    is_zero: callable


def number_field_ring(field: NumberField) -> Ring:
    return Ring(field.zero(), field.one(),
                lambda a, b: a + b, lambda a, b: a - b,
                lambda a, b: a * b, lambda a, b: a / b,
                lambda a: a.is_zero())


def finite_field_ring(ff: FiniteField) -> Ring:
    return Ring(0, 1, ff.add, ff.sub, ff.mul, ff.div, lambda a: a == 0)


def mat_identity(ring: Ring, n: int) -> tuple:
    return tuple(tuple(ring.one if i == j else ring.zero for j in range(n))
                 for i in range(n))


def mat_mul(ring: Ring, a: tuple, b: tuple) -> tuple:
    n = len(a)
    cols = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in cols:
            acc = ring.zero
            for x, y in zip(row, col):
                acc = ring.add(acc, ring.mul(x, y))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_transpose(a: tuple) -> tuple:
    return tuple(zip(*a))


def _minor(a: tuple, i: int, j: int) -> tuple:
    return tuple(tuple(x for jj, x in enumerate(row) if jj != j)
                 for ii, row in enumerate(a) if ii != i)


def mat_det(ring: Ring, a: tuple):
    n = len(a)
    if n == 1:
        return a[0][0]
    acc = ring.zero
    for j in range(n):
        term = ring.mul(a[0][j], mat_det(ring, _minor(a, 0, j)))
        acc = ring.add(acc, term) if j % 2 == 0 else ring.sub(acc, term)
    return acc


def mat_inv(ring: Ring, a: tuple) -> tuple:
    n = len(a)
    det = mat_det(ring, a)
    if ring.is_zero(det):
        raise NotInvertible("matrix determinant is zero")
    if n == 1:
        return ((ring.div(ring.one, det),),)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cof = mat_det(ring, _minor(a, i, j))
            if (i + j) % 2:
                cof = ring.sub(ring.zero, cof)
            out[j][i] = ring.div(cof, det)
    return tuple(tuple(row) for row in out)


def mat_theta(ring: Ring, a: tuple) -> tuple:
    """Transpose-inverse, the outer automorphism of SL_n."""
    return mat_transpose(mat_inv(ring, a))


def mat_apply(fn, a: tuple) -> tuple:
    return tuple(tuple(fn(x) for x in row) for row in a)


def mat_is_scalar(ring: Ring, a: tuple) -> bool:
    lam = a[0][0]
    if ring.is_zero(lam):
        return False
    return all(x == (lam if i == j else ring.zero)
               for i, row in enumerate(a) for j, x in enumerate(row))


def mat_scalar_multiple(ring: Ring, a: tuple, b: tuple) -> bool:
    """Whether a = lambda * b for some nonzero scalar lambda."""
    lam = None
    for row_a, row_b in zip(a, b):
        for x, y in zip(row_a, row_b):
            if not ring.is_zero(y):
                lam = ring.div(x, y)
                break
        if lam is not None:
            break
    if lam is None or ring.is_zero(lam):
        return False
    return all(x == ring.mul(lam, y)
               for row_a, row_b in zip(a, b)
               for x, y in zip(row_a, row_b))


# ---------------------------------------------------------------------------
# Galois contexts: a group acting semilinearly on matrix entries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaloisContext:
    elements: tuple
    ring: Ring
    compose: callable
    inverse: callable
    apply: callable               # apply(element, scalar)
    field: NumberField | None = None
    model: "FiniteModel | None" = None

    def identity(self):
        return next(e for e in self.elements
                    if all(self.compose(e, g) == g for g in self.elements))


def number_field_context(field: NumberField, subgroup: Subgroup) -> GaloisContext:
    return GaloisContext(
        elements=tuple(subgroup),
        ring=number_field_ring(field),
        compose=field.compose,
        inverse=field.inverse_index,
        apply=field.apply_aut,
        field=field,
    )


@dataclass(frozen=True)
class FiniteModel:
    """E = F_{q^m} over F = F_q with cyclic Galois group generated by the
    q-power map; n is the matrix size.  Build via finite_model, which
    enforces the enumeration budget."""
    q: int
    m: int
    n: int
    budget: int = DEFAULT_BUDGET

    def extension(self) -> FiniteField:
        return finite_field(self.q ** self.m)


def finite_model(q: int, m: int, n: int, budget: int = DEFAULT_BUDGET) -> FiniteModel:
    prime_power(q)
    if m < 1:
        raise ValueError("extension degree m must be at least 1")
    if n < 2:
        raise ValueError("matrix size n must be at least 2")
    candidates = (q ** m) ** (n * n)
    if candidates > budget:
        raise BudgetExceeded(
            f"enumerating {n}x{n} matrices over a field with {q ** m} "
            f"elements needs {candidates} candidates, over the budget {budget}")
    return FiniteModel(q, m, n, budget)


def finite_model_context(model: FiniteModel) -> GaloisContext:
    ff = model.extension()
    frob = [[ff.pow(a, model.q ** j) for a in range(ff.q)]
            for j in range(model.m)]
    m = model.m
    return GaloisContext(
        elements=tuple(range(m)),
        ring=finite_field_ring(ff),
        compose=lambda i, j: (i + j) % m,
        inverse=lambda i: (-i) % m,
        apply=lambda j, a: frob[j % m][a],
        model=model,
    )


# ---------------------------------------------------------------------------
# cocycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cocycle:
    """Validated assignment element -> (alpha, flip); build via cocycle_make."""
    context: GaloisContext
    assignments: dict
    inverses: dict = datafield(repr=False, compare=False, default_factory=dict)

    def alpha(self, element) -> tuple:
        return self.assignments[element][0]

    def flip(self, element) -> bool:
        return self.assignments[element][1]


def twisted_image(cocycle: Cocycle, element, g: tuple) -> tuple:
    """The twisted Galois action: conjugate the entrywise image of g,
    flipping through transpose-inverse when the assignment says so."""
    ctx = cocycle.context
    ring = ctx.ring
    alpha, flip = cocycle.assignments[element]
    moved = mat_apply(lambda x: ctx.apply(element, x), g)
    if flip:
        moved = mat_theta(ring, moved)
    if mat_is_scalar(ring, alpha):
        return moved
    inv = cocycle.inverses.get(element)
    if inv is None:
        inv = mat_inv(ring, alpha)
    return mat_mul(ring, mat_mul(ring, alpha, moved), inv)


def cocycle_make(context: GaloisContext, assignments: dict) -> Cocycle:
    """Validate the cocycle identity on every ordered pair and return the
    cocycle.  Matrix equalities hold up to nonzero scalars, the identity
    must carry (scalar, no flip), and every group element needs an entry."""
    ring = context.ring
    elems = context.elements
    cleaned = {}
    inverses = {}
    for element, (alpha, flip) in assignments.items():
        a = tuple(tuple(row) for row in alpha)
        inverses[element] = mat_inv(ring, a)
        cleaned[element] = (a, bool(flip))
    if set(cleaned) != set(elems):
        raise ValueError("assignments must cover the group exactly: "
                         f"got {sorted(cleaned)}, need {sorted(elems)}")

    ident = context.identity()
    alpha0, flip0 = cleaned[ident]
    if flip0 or not mat_is_scalar(ring, alpha0):
        raise CocycleViolation(
            "the identity element must map to (scalar matrix, no flip)")

    for s in elems:
        for t in elems:
            st = context.compose(s, t)
            a_s, f_s = cleaned[s]
            a_t, f_t = cleaned[t]
            a_st, f_st = cleaned[st]
            if f_st != (f_s ^ f_t):
                raise CocycleViolation(f"flip parity fails at pair ({s}, {t})")
            moved = mat_apply(lambda x: context.apply(s, x), a_t)
            if f_s:
                moved = mat_theta(ring, moved)
            expected = mat_mul(ring, a_s, moved)
            if not mat_scalar_multiple(ring, a_st, expected):
                raise CocycleViolation(
                    f"cocycle identity fails at pair ({s}, {t})")
    return Cocycle(context, cleaned, inverses)


def trivial_cocycle(context: GaloisContext, n: int) -> Cocycle:
    ident = mat_identity(context.ring, n)
    return cocycle_make(context, {e: (ident, False) for e in context.elements})


def unitary_cocycle(model: FiniteModel) -> Cocycle:
    """Generator -> (identity, flip) over a model of even degree: descends
    to the special unitary group of the top quadratic step."""
    if model.m % 2:
        raise ValueError("a flip cocycle needs an even extension degree")
    context = finite_model_context(model)
    ident = mat_identity(context.ring, model.n)
    return cocycle_make(context,
                        {j: (ident, bool(j % 2)) for j in range(model.m)})


def conjugate_cocycle(cocycle: Cocycle, g) -> Cocycle:
    """The cohomologous cocycle obtained by composing with conjugation by g
    on the left and by the Galois image of its inverse on the right.  The
    fixed-point group changes by conjugation only, so orders are preserved."""
    ctx = cocycle.context
    ring = ctx.ring
    gm = tuple(tuple(row) for row in g)
    g_inv = mat_inv(ring, gm)
    fresh = {}
    for element, (alpha, flip) in cocycle.assignments.items():
        moved = mat_apply(lambda x: ctx.apply(element, x), g_inv)
        if flip:
            moved = mat_theta(ring, moved)
        fresh[element] = (mat_mul(ring, mat_mul(ring, gm, alpha), moved), flip)
    return cocycle_make(ctx, fresh)


def base_change(model: FiniteModel, cocycle: Cocycle,
                d: int) -> tuple[FiniteModel, Cocycle]:
    """Restrict the cocycle to the subgroup generated by the d-th power of
    Frobenius: same top field, base enlarged from F_q to F_{q^d}."""
    if d < 1 or model.m % d:
        raise ValueError(f"{d} does not divide the extension degree {model.m}")
    sub = finite_model(model.q ** d, model.m // d, model.n, model.budget)
    assignments = {j: cocycle.assignments[(d * j) % model.m]
                   for j in range(sub.m)}
    return sub, cocycle_make(finite_model_context(sub), assignments)


# ---------------------------------------------------------------------------
# descent oracles over finite models
# ---------------------------------------------------------------------------

def _check_model_cocycle(model: FiniteModel, cocycle: Cocycle):
    if cocycle.context.model != model:
        raise ValueError("cocycle was built over a different model")
    candidates = (model.q ** model.m) ** (model.n * model.n)
    if candidates > model.budget:
        raise BudgetExceeded(
            f"{candidates} matrix candidates exceed the budget {model.budget}")


def twisted_fixed_elements(model: FiniteModel, cocycle: Cocycle) -> tuple:
    """Elements of SL_n(F_{q^m}) fixed by the twisted action of the Frobenius
    generator; for a validated cocycle over a cyclic group this is the whole
    twisted-fixed group."""
    _check_model_cocycle(model, cocycle)
    sl = special_linear(model.q ** model.m, model.n)
    if model.m == 1:
        return sl
    return tuple(g for g in sl if twisted_image(cocycle, 1, g) == g)


def twisted_fixed_points(model: FiniteModel, cocycle: Cocycle) -> int:
    return len(twisted_fixed_elements(model, cocycle))


@dataclass(frozen=True)
class ProjectionReport:
    source_order: int             # twisted-fixed elements, generator condition
    tuple_order: int              # distinct image tuples that are twisted-fixed
    lands_in_fixed_subset: bool   # every image tuple is twisted-fixed
    projection_inverts: bool      # identity component recovers the element
    homomorphism_ok: bool         # multiplicativity on sampled pairs
    passed: bool


def projection_iso_check(model: FiniteModel, cocycle: Cocycle,
                         samples: int = 100, seed: int = 0) -> ProjectionReport:
    """Check that g -> (f_t(^t g))_t maps the twisted-fixed group bijectively
    onto twisted-fixed tuples in the product of one SL_n copy per group
    element, inverted by projection to the identity component.

    A tuple x is twisted-fixed when x_s = f_g(^g x_{g^{-1}s}) for every pair;
    that each image tuple satisfies this is exactly the cocycle identity, so
    a corrupted assignment at a non-generator element produces image tuples
    that fail it and the counts disagree."""
    _check_model_cocycle(model, cocycle)
    ctx = cocycle.context
    ring = ctx.ring
    elems = ctx.elements
    position = {e: i for i, e in enumerate(elems)}
    ident = ctx.identity()

    fixed = twisted_fixed_elements(model, cocycle)
    inverts = True
    image = set()
    invariant_image = set()
    for g in fixed:
        tup = tuple(twisted_image(cocycle, t, g) for t in elems)
        image.add(tup)
        if tup[position[ident]] != g:
            inverts = False
        invariant = all(
            tup[i] == twisted_image(
                cocycle, gamma,
                tup[position[ctx.compose(ctx.inverse(gamma), tau)]])
            for gamma in elems for i, tau in enumerate(elems))
        if invariant:
            invariant_image.add(tup)

    hom_ok = True
    if fixed:
        rng = random.Random(seed)
        for _ in range(samples):
            g, h = rng.choice(fixed), rng.choice(fixed)
            gh = mat_mul(ring, g, h)
            for t in elems:
                lhs = twisted_image(cocycle, t, gh)
                rhs = mat_mul(ring, twisted_image(cocycle, t, g),
                              twisted_image(cocycle, t, h))
                if lhs != rhs:
                    hom_ok = False

    lands = len(invariant_image) == len(image)
    bijective = len(invariant_image) == len(fixed) and len(image) == len(fixed)
    return ProjectionReport(
        source_order=len(fixed),
        tuple_order=len(invariant_image),
        lands_in_fixed_subset=lands,
        projection_inverts=inverts,
        homomorphism_ok=hom_ok,
        passed=lands and inverts and hom_ok and bijective,
    )


# ---------------------------------------------------------------------------
# per-prime classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaceVerdict:
    representative: int           # smallest automorphism index in the double coset
    residue_degree: int
    form: str                     # "inner-split" or "outer-unitary"
    group_label: str
    split_caveat: bool            # split is certified over the coefficient algebra only
    frobenius_ambiguous: bool


def _double_cosets(field: NumberField, subgroup, sigma: int) -> list[tuple]:
    """(representative, residue degree, members) for subgroup\\G/<sigma>."""
    seen = set()
    out = []
    for g in range(field.degree):
        if g in seen:
            continue
        right = frozenset(field.compose(s, g) for s in subgroup)
        orbit = [right]
        current = right
        while True:
            current = frozenset(field.compose(c, sigma) for c in current)
            if current == right:
                break
            orbit.append(current)
        members = frozenset().union(*orbit)
        seen.update(members)
        out.append((min(members), len(orbit), members))
    out.sort()
    return out


def classify_place(field: NumberField, group: TwistGroup, p: int,
                   n: int) -> list[PlaceVerdict]:
    """Verdicts for the places of the twist group's fixed field above p.

    A place is inner-split when the inner subgroup is everything, or when
    its double coset under the full group falls apart into two double cosets
    under the inner subgroup; otherwise the form there is the special
    unitary group of the quadratic extension cut out by the inner twists."""
    frob = frobenius_at(field, p)
    full_places = _double_cosets(field, group.full_subgroup, frob.index)
    if group.has_outer():
        inner_places = _double_cosets(field, group.inner_subgroup, frob.index)
        inner_rep = {}
        for rep, _, members in inner_places:
            for g in members:
                inner_rep[g] = rep
    verdicts = []
    for rep, degree, members in full_places:
        if not group.has_outer():
            split = True
        else:
            split = len({inner_rep[g] for g in members}) == 2
        if split:
            form, label = "inner-split", f"SL_{n} (split)"
        else:
            form, label = "outer-unitary", f"SU_{n} over quadratic extension"
        verdicts.append(PlaceVerdict(
            representative=rep,
            residue_degree=degree,
            form=form,
            group_label=label,
            split_caveat=split,
            frobenius_ambiguous=frob.ambiguous,
        ))
    return verdicts


# ---------------------------------------------------------------------------
# image report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImageReport:
    verdict_kind: str
    group_order: int
    inner_order: int
    fixed_degree: int
    fixed_min_poly: tuple
    inner_fixed_degree: int
    inner_fixed_min_poly: tuple
    places: tuple                 # ((p, (PlaceVerdict, ...)), ...) sorted by p
    predicted_dimension: int
    mt_upper_bound_dimension: int
    bound: int


def image_report(sys, result: DetectionResult, primes) -> ImageReport:
    """Aggregate the detection output and the per-prime form verdicts.

    The dimension prediction is [F:Q] (n^2 - 1) + 1: the derived group
    contributes one copy of SL_n per embedding of the fixed field, and the
    center one line of scalars.  The Hodge-theoretic upper bound computed
    from the same data coincides with it."""
    n = sys.n
    dim = result.fixed.degree * (n * n - 1) + 1
    places = tuple(
        (p, tuple(classify_place(sys.field, result.group, p, n)))
        for p in sorted(primes))
    return ImageReport(
        verdict_kind=result.verdict.kind,
        group_order=result.group.order,
        inner_order=result.group.inner_order,
        fixed_degree=result.fixed.degree,
        fixed_min_poly=result.fixed.min_poly.coeffs,
        inner_fixed_degree=result.fixed_inner.degree,
        inner_fixed_min_poly=result.fixed_inner.min_poly.coeffs,
        places=places,
        predicted_dimension=dim,
        mt_upper_bound_dimension=dim,
        bound=result.bound,
    )


def report_to_json(report: ImageReport) -> dict:
    return {
        "verdict": report.verdict_kind,
        "group_order": report.group_order,
        "inner_order": report.inner_order,
        "fixed_field": {
            "min_poly": [str(c) for c in report.fixed_min_poly],
            "degree": report.fixed_degree,
        },
        "inner_fixed_field": {
            "min_poly": [str(c) for c in report.inner_fixed_min_poly],
            "degree": report.inner_fixed_degree,
        },
        "predicted_dimension": report.predicted_dimension,
        "mt_upper_bound_dimension": report.mt_upper_bound_dimension,
        "primes": {
            str(p): [{
                "representative": v.representative,
                "residue_degree": v.residue_degree,
                "form": v.form,
                "group_label": v.group_label,
                "split_caveat": v.split_caveat,
                "frobenius_ambiguous": v.frobenius_ambiguous,
            } for v in verdicts]
            for p, verdicts in report.places
        },
        "bound": report.bound,
    }


# ---------------------------------------------------------------------------
# cocycle serialization
# ---------------------------------------------------------------------------

def cocycle_to_json(cocycle: Cocycle) -> dict:
    ctx = cocycle.context
    doc = {}
    if ctx.model is not None:
        doc["model"] = {"q": ctx.model.q, "m": ctx.model.m, "n": ctx.model.n}
        cell = lambda x: x
    else:
        doc["field"] = field_to_json(ctx.field)
        doc["subgroup"] = sorted(ctx.elements)
        cell = lambda x: [str(c) for c in x.coords]
    doc["assignments"] = {
        str(e): {"alpha": [[cell(x) for x in row] for row in alpha],
                 "flip": flip}
        for e, (alpha, flip) in sorted(cocycle.assignments.items())
    }
    return doc


def cocycle_from_json(doc: dict) -> Cocycle:
    try:
        raw = doc["assignments"]
        if "model" in doc:
            spec = doc["model"]
            model = finite_model(int(spec["q"]), int(spec["m"]), int(spec["n"]),
                                 int(spec.get("budget", DEFAULT_BUDGET)))
            context = finite_model_context(model)
            cell = lambda x: int(x)
        else:
            field = field_from_json(doc["field"])
            subgroup = subgroup_make(field, [int(i) for i in doc["subgroup"]])
            context = number_field_context(field, subgroup)
            cell = lambda x: field.element([Fraction(c) for c in x])
        assignments = {
            int(key): (tuple(tuple(cell(x) for x in row)
                             for row in entry["alpha"]),
                       bool(entry["flip"]))
            for key, entry in raw.items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed cocycle document: {exc}") from exc
    return cocycle_make(context, assignments)
