"""Small finite fields with table-based arithmetic.

The descent oracles enumerate matrix spaces of size (q^m)^(n^2), so the
fields involved never hold more than a few dozen elements.  Elements are
integer codes 0..q-1 whose base-p digits are the coordinates in F_p[x]/(f)
for a monic irreducible f found by search; all products and sums are
precomputed into q x q tables at construction.  Code 0 is zero and code 1 is
one in every field.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .polynomials import pmod_gcd, pmod_pow_mod


def prime_power(q: int) -> tuple[int, int]:
    """(p, k) with q = p^k, or ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, t = 0, q
    while t % p == 0:
        t //= p
        k += 1
    if t != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


def _is_irreducible(f: list[int], p: int, k: int) -> bool:
    x = [0, 1]
    if pmod_pow_mod(x, p ** k, f, p) != x:
        return False
    for r in {d for d in range(2, k + 1) if k % d == 0 and
              all(d % e for e in range(2, d))}:
        t = pmod_pow_mod(x, p ** (k // r), f, p)
        diff = [(a - b) % p for a, b in
                zip(t + [0] * 2, x + [0] * len(t))][:max(len(t), 2)]
        while diff and diff[-1] == 0:
            diff.pop()
        if len(pmod_gcd(f, diff, p)) - 1 > 0:
            return False
    return True


def _find_irreducible(p: int, k: int) -> list[int]:
    for tail in product(range(p), repeat=k):
        f = list(tail) + [1]
        if _is_irreducible(f, p, k):
            return f
    raise AssertionError("unreachable: irreducible polynomials exist")


class FiniteField:
    """The field with q = p^k elements; obtain instances via finite_field."""

    __slots__ = ("q", "p", "k", "modulus", "add_table", "mul_table",
                 "neg_table", "inv_table")

    def __init__(self, q: int):
        p, k = prime_power(q)
        self.q, self.p, self.k = q, p, k
        self.modulus = [0, 1] if k == 1 else _find_irreducible(p, k)
        polys = [self._decode(c) for c in range(q)]
        self.add_table = [[self._encode([(a + b) % p for a, b in zip(u, v)])
                           for v in polys] for u in polys]
        self.neg_table = [self._encode([(-a) % p for a in u]) for u in polys]
        self.mul_table = [[self._encode(self._polymul(u, v)) for v in polys]
                          for u in polys]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if self.mul_table[a][b] == 1)
        self.inv_table = inv

    def _decode(self, code: int) -> list[int]:
        digits = []
        for _ in range(self.k):
            code, d = divmod(code, self.p)
            digits.append(d)
        return digits

    def _encode(self, digits) -> int:
        code = 0
        for d in reversed(list(digits)):
            code = code * self.p + d % self.p
        return code

    def _polymul(self, u, v) -> list[int]:
        p, k, f = self.p, self.k, self.modulus
        prod_ = [0] * (2 * k - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    prod_[i + j] = (prod_[i + j] + a * b) % p
        for i in range(2 * k - 2, k - 1, -1):
            c = prod_[i]
            if c:
                prod_[i] = 0
                for j in range(k):
                    prod_[i - k + j] = (prod_[i - k + j] - c * f[j]) % p
        return prod_[:k]

    # -- arithmetic on codes --------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_table[result][base]
            base = self.mul_table[base][base]
            e >>= 1
        return result

    def subfield_codes(self, q_sub: int) -> tuple[int, ...]:
        """Codes of the subfield with q_sub elements (fixed by x -> x^q_sub)."""
        return tuple(a for a in range(self.q) if self.pow(a, q_sub) == a)


@lru_cache(maxsize=None)
def finite_field(q: int) -> FiniteField:
    return FiniteField(q)


@lru_cache(maxsize=None)
def special_linear(q: int, n: int) -> tuple:
    """All of SL_n(F_q) as tuples of rows of codes, in lexicographic order."""
    ff = finite_field(q)
    add, mul, neg = ff.add_table, ff.mul_table, ff.neg_table
    codes = range(q)
    out = []
    if n == 2:
        for a, b, c, d in product(codes, repeat=4):
            if add[mul[a][d]][neg[mul[b][c]]] == 1:
                out.append(((a, b), (c, d)))
    elif n == 3:
        cells = list(product(codes, repeat=3))
        for d, e, f in cells:
            for g, h, i in cells:
                m1 = add[mul[e][i]][neg[mul[f][h]]]
                m2 = add[mul[d][i]][neg[mul[f][g]]]
                m3 = add[mul[d][h]][neg[mul[e][g]]]
                row23 = ((d, e, f), (g, h, i))
                for a, b, c in cells:
                    det = add[add[mul[a][m1]][neg[mul[b][m2]]]][mul[c][m3]]
                    if det == 1:
                        out.append(((a, b, c),) + row23)
    else:
        raise ValueError("matrix enumeration is implemented for n = 2, 3")
    out.sort()
    return tuple(out)


def split_order(q: int, n: int) -> int:
    """|SL_n(F_q)| in closed form."""
    order = q ** (n * (n - 1) // 2)
    for k in range(2, n + 1):
        order *= q ** k - 1
    return order


def unitary_order(q: int, n: int) -> int:
    """|SU_n(F_q)|, the special unitary group of the quadratic extension."""
    order = q ** (n * (n - 1) // 2)
    for k in range(2, n + 1):
        order *= q ** k - (-1) ** k
    return order
