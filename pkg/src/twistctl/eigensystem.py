"""Coefficient systems: per-place characteristic-polynomial data.

An EigenSystem carries, for each good place, the coefficients (a_v, and b_v
when n = 3) of the degree-n characteristic polynomial, together with the
central-character data (m, omega) needed to trivialize the determinant.
A NormalizedSystem is the determinant-1 version: the polynomial at every
place is X^n - a X^(n-1) + ... + (-1)^(n-1) b X + (-1)^n.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

from .characters import Character, char_eval, char_from_json, char_to_json
from .errors import (
    CoefficientDimensionMismatch,
    DuplicatePlace,
    MissingValue,
    NontrivialNebentypus,
    NotDivisible,
    SchemaError,
)
from .numberfield import FieldElement, NumberField, field_from_json, field_to_json


class PlaceData(NamedTuple):
    norm: int
    a: FieldElement
    b: FieldElement | None


@dataclass(frozen=True)
class EigenSystem:
    """Raw coefficient data with central character |.|^m omega."""

    n: int
    field: NumberField
    base_field_label: str
    m: int | None
    omega: Character | None
    bad_places: tuple
    coeffs: dict

    @property
    def is_normalized(self) -> bool:
        return False

    def places(self, bound: int | None = None) -> list:
        """Good places present in the data, sorted, optionally norm-capped."""
        out = [v for v, pd in self.coeffs.items()
               if bound is None or pd.norm <= bound]
        return sorted(out, key=lambda v: (str(type(v)), v))


@dataclass(frozen=True)
class NormalizedSystem(EigenSystem):
    """Determinant-1 coefficient data: constant term (-1)^n at every place."""

    @property
    def is_normalized(self) -> bool:
        return True


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n ** 0.5) + 1))


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True


def _parse_coords(field: NumberField, raw, what: str) -> FieldElement:
    if not isinstance(raw, (list, tuple)):
        raise SchemaError(f"{what} must be a coordinate list")
    if len(raw) != field.degree:
        raise CoefficientDimensionMismatch(
            f"{what} has {len(raw)} coordinates, field degree is {field.degree}")
    try:
        return field.element([Fraction(str(c)) for c in raw])
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"bad rational in {what}: {e}")


def _parse_place_label(key, base_field: str):
    if isinstance(key, int):
        return key
    try:
        return int(key)
    except (TypeError, ValueError):
        if base_field == "Q":
            raise SchemaError(f"place label {key!r} must be a prime over Q")
        return str(key)


def load_system(doc: dict) -> EigenSystem:
    """Validate and construct a system from its JSON document."""
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    for key in ("n", "base_field", "field", "central_character",
                "bad_places", "coefficients"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    n = doc["n"]
    if n not in (2, 3):
        raise SchemaError(f"n must be 2 or 3, got {n!r}")
    field = field_from_json(doc["field"])
    base = str(doc["base_field"])

    cc = doc["central_character"]
    if cc == "normalized":
        normalized, m, omega = True, None, None
    elif isinstance(cc, dict) and "m" in cc and "omega" in cc:
        normalized = False
        m = cc["m"]
        if not isinstance(m, int):
            raise SchemaError("central character exponent m must be an integer")
        omega = None if cc["omega"] == "trivial" else char_from_json(field, cc["omega"])
    else:
        raise SchemaError("central_character must be 'normalized' or {m, omega}")

    bad = tuple(sorted(_parse_place_label(v, base) for v in doc["bad_places"]))
    if not isinstance(doc["coefficients"], dict):
        raise SchemaError("coefficients must be an object")

    coeffs = {}
    for key, entry in doc["coefficients"].items():
        place = _parse_place_label(key, base)
        if place in bad:
            raise DuplicatePlace(f"place {place} is listed among the bad places")
        if place in coeffs:
            raise DuplicatePlace(f"place {place} appears twice")
        if not isinstance(entry, dict) or "norm" not in entry or "a" not in entry:
            raise SchemaError(f"entry at {place} must carry norm and a")
        norm = entry["norm"]
        if not isinstance(norm, int) or not _is_prime_power(norm):
            raise SchemaError(f"norm at {place} must be a prime power")
        if base == "Q":
            if norm != place or not _is_prime(norm):
                raise SchemaError(
                    f"over Q the place label must be the prime itself; got "
                    f"label {place}, norm {norm}")
        a = _parse_coords(field, entry["a"], f"a at place {place}")
        if n == 3:
            if "b" not in entry:
                raise SchemaError(f"n = 3 requires b at place {place}")
            b = _parse_coords(field, entry["b"], f"b at place {place}")
        else:
            if "b" in entry:
                raise SchemaError(f"n = 2 forbids b at place {place}")
            b = None
        coeffs[place] = PlaceData(norm, a, b)

    cls = NormalizedSystem if normalized else EigenSystem
    return cls(n=n, field=field, base_field_label=base, m=m, omega=omega,
               bad_places=bad, coeffs=coeffs)


def serialize(sys: EigenSystem) -> dict:
    """JSON document; load_system(serialize(s)) reproduces s bit-exactly."""
    if sys.is_normalized:
        cc = "normalized"
    else:
        cc = {"m": sys.m,
              "omega": "trivial" if sys.omega is None else char_to_json(sys.omega)}
    coeffs = {}
    for place in sys.places():
        pd = sys.coeffs[place]
        entry = {"norm": pd.norm, "a": [str(c) for c in pd.a.coords]}
        if pd.b is not None:
            entry["b"] = [str(c) for c in pd.b.coords]
        coeffs[str(place)] = entry
    return {
        "n": sys.n,
        "base_field": sys.base_field_label,
        "field": field_to_json(sys.field),
        "central_character": cc,
        "bad_places": [v for v in sys.bad_places],
        "coefficients": coeffs,
    }


def load_csv(text: str, *, n: int, field: NumberField, base_field: str = "Q",
             m: int = 0, omega: Character | None = None,
             bad_places=()) -> EigenSystem:
    """Ingest coefficient rows: place, norm, a_0..a_{d-1}[, b_0..b_{d-1}]."""
    d = field.degree
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise SchemaError("empty CSV")
    expected = ["place", "norm"] + [f"a_{i}" for i in range(d)]
    if n == 3:
        expected += [f"b_{i}" for i in range(d)]
    if [h.strip() for h in header] != expected:
        raise SchemaError(f"CSV header must be {','.join(expected)}")
    coeff_doc = {}
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(expected):
            raise SchemaError(f"row for place {row[0]!r} has {len(row)} columns")
        place = row[0].strip()
        if place in coeff_doc:
            raise DuplicatePlace(f"place {place} appears twice")
        entry = {"norm": int(row[1]), "a": [c.strip() for c in row[2:2 + d]]}
        if n == 3:
            entry["b"] = [c.strip() for c in row[2 + d:2 + 2 * d]]
        coeff_doc[place] = entry
    doc = {
        "n": n,
        "base_field": base_field,
        "field": field_to_json(field),
        "central_character": {"m": m, "omega": "trivial" if omega is None
                              else char_to_json(omega)},
        "bad_places": list(bad_places),
        "coefficients": coeff_doc,
    }
    return load_system(doc)


def normalize(sys: EigenSystem, scalings: dict | None = None) -> NormalizedSystem:
    """Rescale roots so the characteristic polynomials have determinant 1.

    Without explicit scalings this requires n | m and trivial omega, and
    divides a_v by norm^(m/n) (and b_v by norm^(2m/3) for n = 3).  With a
    scalings map place -> c_v, each c_v must satisfy c_v^n = norm^m * omega(v)
    exactly; a_v / c_v and b_v / c_v^2 are stored.
    """
    if isinstance(sys, NormalizedSystem):
        return sys
    new = {}
    if scalings is None:
        if sys.omega is not None and not sys.omega.is_trivial():
            raise NontrivialNebentypus(
                "omega is nontrivial; supply per-place scalings")
        if sys.m % sys.n != 0:
            raise NotDivisible(f"n = {sys.n} does not divide m = {sys.m}")
        k = sys.m // sys.n
        for v, pd in sys.coeffs.items():
            a = pd.a / Fraction(pd.norm ** k)
            b = None if pd.b is None else pd.b / Fraction(pd.norm ** (2 * k))
            new[v] = PlaceData(pd.norm, a, b)
    else:
        for v, pd in sys.coeffs.items():
            if v not in scalings:
                raise MissingValue(f"no scaling supplied for place {v}")
            c = scalings[v]
            if not isinstance(c, FieldElement):
                c = sys.field.from_rational(c)
            det = sys.field.from_rational(Fraction(pd.norm) ** sys.m)
            if sys.omega is not None:
                det = det * char_eval(sys.omega, v)
            if c ** sys.n != det:
                raise SchemaError(
                    f"scaling at place {v} does not satisfy c^n = norm^m * omega(v)")
            a = pd.a / c
            b = None if pd.b is None else pd.b / (c * c)
            new[v] = PlaceData(pd.norm, a, b)
    return NormalizedSystem(n=sys.n, field=sys.field,
                            base_field_label=sys.base_field_label,
                            m=None, omega=None, bad_places=sys.bad_places,
                            coeffs=new)


def dualize(nsys: NormalizedSystem) -> NormalizedSystem:
    """Coefficient data of the dual system: a and b trade places (n = 3)."""
    if not isinstance(nsys, NormalizedSystem):
        raise ValueError("dualize expects a normalized system")
    if nsys.n == 2:
        return nsys
    swapped = {v: PlaceData(pd.norm, pd.b, pd.a) for v, pd in nsys.coeffs.items()}
    return replace(nsys, coeffs=swapped)


def charpoly_coeffs(nsys: NormalizedSystem, place) -> tuple:
    """Ascending coefficients of the normalized characteristic polynomial."""
    pd = nsys.coeffs[place]
    one = nsys.field.one()
    if nsys.n == 2:
        return (one, -pd.a, one)
    return (-one, pd.b, -pd.a, one)
