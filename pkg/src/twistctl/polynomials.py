"""Dense univariate polynomials over Q, plus mod-p kernels.

Coefficients are `fractions.Fraction`, stored ascending with trailing zeros
stripped, so equal polynomials compare equal structurally.  The zero
polynomial has an empty coefficient tuple and degree -1.

The mod-p helpers at the bottom work on plain lists of ints (ascending) and
back the distinct-degree factorization used for splitting behaviour of primes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Sequence

from .errors import BadReduction, NotSeparableModP

Q = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


class QPoly:
    """Polynomial over Q with exact arithmetic."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("QPoly is immutable")

    # -- basic structure ------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            return Q(0)
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Q(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "QPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x" if c != 1 else "x")
            else:
                terms.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        return "QPoly(" + " + ".join(terms) + ")"

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly([other])
        if not isinstance(other, QPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return QPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly([other])
        if not isinstance(other, QPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPoly([c * other for c in self.coeffs])
        if not isinstance(other, QPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return QPoly()
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = QPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        dd = other.degree
        lead_inv = Q(1) / dv[-1]
        quot = [Q(0)] * max(0, len(rem) - dd)
        for i in range(len(rem) - dd - 1, -1, -1):
            c = rem[i + dd] * lead_inv
            if c == 0:
                continue
            quot[i] = c
            for j, d in enumerate(dv):
                rem[i + j] -= c * d
        return QPoly(quot), QPoly(rem[:dd])

    def __mod__(self, other: "QPoly") -> "QPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "QPoly") -> "QPoly":
        return self.divmod(other)[0]

    def exact_div(self, other: "QPoly") -> "QPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        inv = Q(1) / self.coeffs[-1]
        return QPoly([c * inv for c in self.coeffs])

    def derivative(self) -> "QPoly":
        return QPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        """Horner evaluation; x may be a Fraction, int, or any ring element
        supporting addition/multiplication with Fractions."""
        if not self.coeffs:
            return x * 0
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    # -- gcd and friends --------------------------------------------------

    def gcd(self, other: "QPoly") -> "QPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def squarefree(self) -> bool:
        if self.degree <= 1:
            return True
        return self.gcd(self.derivative()).degree == 0


def poly_xgcd(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """Extended Euclid over Q: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = a, b
    u0, u1 = QPoly([1]), QPoly()
    v0, v1 = QPoly(), QPoly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if r0.is_zero():
        return r0, u0, v0
    lead = r0.leading()
    inv = Q(1) / lead
    return r0.monic(), u0 * inv, v0 * inv


def poly_from_strings(items: Sequence[str | int]) -> QPoly:
    return QPoly([_as_fraction(s) for s in items])


def poly_to_strings(p: QPoly) -> list[str]:
    return [str(c) for c in p.coeffs]


def resultant(f: QPoly, g: QPoly) -> Fraction:
    """Resultant over Q via fraction-exact Gaussian elimination of the
    Sylvester matrix.  Degrees here are tiny, so no subresultant tricks."""
    n, m = f.degree, g.degree
    if n < 0 or m < 0:
        return Q(0)
    if n == 0:
        return f.coeffs[0] ** m
    if m == 0:
        return g.coeffs[0] ** n
    size = n + m
    rows = []
    fc = list(reversed(f.coeffs))  # descending
    gc = list(reversed(g.coeffs))
    for i in range(m):
        rows.append([Q(0)] * i + fc + [Q(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Q(0)] * i + gc + [Q(0)] * (size - m - 1 - i))
    det = Q(1)
    for col in range(size):
        pivot = None
        for r in range(col, size):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Q(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = Q(1) / rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col] == 0:
                continue
            factor = rows[r][col] * inv
            for c in range(col, size):
                rows[r][c] -= factor * rows[col][c]
    return det


def discriminant(f: QPoly) -> Fraction:
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.leading()


def cyclotomic(n: int) -> QPoly:
    """n-th cyclotomic polynomial by exact division of x^n - 1."""
    if n < 1:
        raise ValueError("n must be positive")
    num = QPoly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num = num.exact_div(cyclotomic(d))
    return num


# --------------------------------------------------------------------------
# mod-p kernels (dense int lists, ascending)
# --------------------------------------------------------------------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def pmod_reduce(f: QPoly, p: int) -> list[int]:
    """Reduce a rational polynomial mod p.  Raises BadReduction if any
    denominator or the leading coefficient vanishes mod p."""
    out = []
    for c in f.coeffs:
        if c.denominator % p == 0:
            raise BadReduction(f"denominator divisible by {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    if f.coeffs and out and len(_ptrim(list(out))) != len(out):
        raise BadReduction(f"leading coefficient vanishes mod {p}")
    return out


def pmod_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def pmod_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError
    rem = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    quot = [0] * max(0, len(rem) - db)
    for i in range(len(rem) - db - 1, -1, -1):
        c = rem[i + db] * inv % p
        if c:
            quot[i] = c
            for j, d in enumerate(b):
                rem[i + j] = (rem[i + j] - c * d) % p
    return _ptrim(quot), _ptrim(rem[:db])


def pmod_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, pmod_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def pmod_pow_mod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = pmod_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = pmod_divmod(pmod_mul(result, b, p), mod, p)[1]
        b = pmod_divmod(pmod_mul(b, b, p), mod, p)[1]
        e >>= 1
    return result


def ddf_mod_p(f: QPoly, p: int) -> list[tuple[int, int]]:
    """Distinct-degree factorization degrees of f mod p.

    Returns a sorted list of (degree, count) pairs with
    sum(degree * count) == deg f.  Requires f to be p-integral with p-unit
    leading coefficient and separable mod p.
    """
    fp = pmod_reduce(f, p)
    if len(fp) - 1 < 1:
        return []
    deriv = _ptrim([i * c % p for i, c in enumerate(fp)][1:])
    if len(pmod_gcd(fp, deriv, p)) - 1 != 0:
        raise NotSeparableModP(f"polynomial is not separable mod {p}")
    # make monic
    inv = pow(fp[-1], -1, p)
    work = [c * inv % p for c in fp]
    out: list[tuple[int, int]] = []
    x = [0, 1]
    xq = x  # x^(p^i) mod work, updated each round
    d = 0
    while len(work) - 1 > 0:
        d += 1
        if 2 * d > len(work) - 1:
            # what is left is a single irreducible factor
            out.append((len(work) - 1, 1))
            break
        xq = pmod_pow_mod(xq, p, work, p)
        width = max(len(xq), len(x))
        pad_xq = list(xq) + [0] * (width - len(xq))
        pad_x = list(x) + [0] * (width - len(x))
        diff = _ptrim([(a - b) % p for a, b in zip(pad_xq, pad_x)])
        g = pmod_gcd(work, diff, p)
        if len(g) - 1 > 0:
            deg_total = len(g) - 1
            out.append((d, deg_total // d))
            work = pmod_divmod(work, g, p)[0]
            xq = pmod_divmod(xq, work, p)[1]
    return sorted(out)


def pmod_roots(f: QPoly, p: int) -> list[int]:
    """All roots of f in F_p by direct scan (p is small here)."""
    fp = pmod_reduce(f, p)
    return [r for r in range(p) if _peval(fp, r, p) == 0]


def _peval(f: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


# --------------------------------------------------------------------------
# irreducibility over Q (rational roots + mod-p degree patterns)
# --------------------------------------------------------------------------

def _rational_roots(f: QPoly) -> list[Fraction]:
    """Candidate rational roots by the rational-root theorem, verified."""
    if f.is_zero():
        return []
    lcm = 1
    for c in f.coeffs:
        lcm = lcm * c.denominator // int_gcd(lcm, c.denominator)
    ic = [int(c * lcm) for c in f.coeffs]
    lead, const = ic[-1], ic[0]
    if const == 0:
        return [Q(0)] + _rational_roots(QPoly(f.coeffs[1:]))
    roots = []
    for pnum in _divisors(abs(const)):
        for qden in _divisors(abs(lead)):
            for s in (1, -1):
                cand = Q(s * pnum, qden)
                if f.evaluate(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113]


def _monic_integer_model(f: QPoly) -> list[int]:
    """For monic f over Q, the integer coefficients of lam^d f(y/lam) with
    lam = lcm of denominators; irreducibility is preserved."""
    lam = 1
    for c in f.coeffs:
        lam = lam * c.denominator // int_gcd(lam, c.denominator)
    d = f.degree
    return [int(f.coeffs[i] * lam ** (d - i)) for i in range(d + 1)]


def _monic_quartic_splits_quadratic(ic: list[int]) -> bool:
    """Whether an integer monic quartic with no rational root factors as a
    product of two monic integer quadratics (Gauss: rational factors of a
    monic integer polynomial are integral)."""
    s0, s1, s2, s3 = ic[0], ic[1], ic[2], ic[3]
    if s0 == 0:
        return False  # has the root 0; handled elsewhere
    for c in _divisors(abs(s0)):
        for c1 in (c, -c):
            if s0 % c1 != 0:
                continue
            c2 = s0 // c1
            if c1 != c2:
                num = s1 - s3 * c2
                den = c1 - c2
                if num % den != 0:
                    continue
                b1 = num // den
                b2 = s3 - b1
                if b1 * b2 + c1 + c2 == s2:
                    return True
            else:
                # b1 + b2 = s3, b1 b2 = s2 - 2 c1, consistency s1 = s3 c1
                if s1 != s3 * c1:
                    continue
                disc = s3 * s3 - 4 * (s2 - 2 * c1)
                if disc >= 0 and _is_square(disc) and (s3 + _isqrt(disc)) % 2 == 0:
                    return True
    return False


def _isqrt(n: int) -> int:
    from math import isqrt
    return isqrt(n)


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = _isqrt(n)
    return r * r == n


def irreducibility_over_q(f: QPoly, max_primes: int = 12) -> str:
    """Returns "irreducible", "reducible", or "unknown".

    Strategy: rational-root test (decisive through degree 3), an exact
    quadratic-split test for quartics, then degree patterns of factorizations
    mod several good primes.  The possible degrees of a rational factor must
    be subset sums of every mod-p pattern; an empty intersection certifies
    irreducibility.  A surviving pattern after the prime budget yields
    "unknown" rather than an expensive certificate.
    """
    d = f.degree
    if d <= 0:
        return "reducible"
    if d == 1:
        return "irreducible"
    if _rational_roots(f):
        return "reducible"
    if d <= 3:
        return "irreducible"  # no rational root and degree <= 3
    if d == 4 and f.is_monic():
        return "reducible" if _monic_quartic_splits_quadratic(_monic_integer_model(f)) else "irreducible"
    possible = set(range(1, d))  # proper factor degrees still in play
    tried = 0
    for p in _SMALL_PRIMES:
        if tried >= max_primes:
            break
        try:
            degs = ddf_mod_p(f, p)
        except (BadReduction, NotSeparableModP):
            continue
        tried += 1
        if degs == [(d, 1)]:
            return "irreducible"
        # subset sums of the multiset of factor degrees mod p
        sums = {0}
        for deg, count in degs:
            for _ in range(count):
                sums |= {s + deg for s in sums}
        possible &= sums
        if not possible:
            return "irreducible"
    return "unknown"
