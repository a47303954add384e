"""Build the committed LMFDB response cache from local computations.

Network-free tests need cached responses for a few newforms whose exact
eigenvalues are classical enough to recompute from scratch:

* 11.2.a.a  -- weight 2, level 11, rational: counting points on the curve
  y^2 + y = x^3 - x^2 - 10x - 20 gives a_p = p + 1 - #E(F_p), and the Hecke
  recursions fill in prime powers and composites.
* 16.3.c.a  -- weight 3, level 16, rational with a quadratic nebentypus:
  the eta product q prod (1 - q^{4n})^6 expanded directly.
* 47.1.b.a  -- weight 1, level 47, Hecke field Q(sqrt 5): a combination of
  theta series of the three reduced binary quadratic forms of discriminant
  -47, with coefficients written in the power basis of x^2 - x - 1.

Each cache entry mirrors the two-endpoint response shape the client caches
after a live fetch, plus a sidecar marking it as locally computed.

Usage: python3 scripts/build_lmfdb_cache.py [outdir]
"""

import json
import sys
import time
from pathlib import Path

BOUND = 500


def primes_up_to(limit):
    sieve = bytearray([1]) * (limit + 1)
    out = []
    for p in range(2, limit + 1):
        if sieve[p]:
            out.append(p)
            for k in range(p * p, limit + 1, p):
                sieve[k] = 0
    return out


def hecke_expand(ap, level, weight, chi, bound):
    """a_n for n <= bound from prime values via the standard recursions.

    a_{p^r} = a_p a_{p^{r-1}} - chi(p) p^{weight-1} a_{p^{r-2}} at good p,
    a_{p^r} = a_p^r at bad p, and multiplicativity across coprime factors."""
    a = {1: 1}
    for p, value in ap.items():
        a[p] = value
        pk = p * p
        while pk <= bound:
            if level % p == 0:
                a[pk] = a[p] * a[pk // p]
            else:
                a[pk] = a[p] * a[pk // p] - chi(p) * p ** (weight - 1) * a[pk // p // p]
            pk *= p
    for n in range(2, bound + 1):
        if n in a:
            continue
        p = min(q for q in ap if n % q == 0)
        pk = p
        while n % (pk * p) == 0:
            pk *= p
        a[n] = a[pk] * a[n // pk]
    return [a[n] for n in range(1, bound + 1)]


# ---------------------------------------------------------------------------
# 11.2.a.a: point counts on y^2 + y = x^3 - x^2 - 10x - 20
# ---------------------------------------------------------------------------

def curve_ap(p):
    """Trace of Frobenius at a prime of good or multiplicative reduction.

    At good p the count is over the affine points plus one at infinity.  At
    p = 11 the reduction has a node at (5, 5); the tangent cone there is
    y'^2 = c x'^2 with c a square mod 11 exactly when the node is split, and
    a_11 = +1 for split, -1 for non-split."""
    if p == 11:
        # shift the node to the origin: with x = u + 5, y = v + 5 the curve
        # becomes v^2 + 11v = u^3 + 14u^2 mod 11, i.e. v^2 = 3u^2 (1 + ...)
        c = 3 % 11
        return 1 if pow(c, (11 - 1) // 2, 11) == 1 else -1
    if p == 2:
        count = 1 + sum((y * y + y - (x ** 3 - x * x - 10 * x - 20)) % 2 == 0
                        for x in range(2) for y in range(2))
        return p + 1 - count
    # complete the square: (2y + 1)^2 = 4 rhs + 1, so the number of y over
    # rhs is 1 plus the Legendre symbol of 4 rhs + 1
    count = 1
    for x in range(p):
        t = (4 * (x * x * x - x * x - 10 * x - 20) + 1) % p
        if t == 0:
            count += 1
        elif pow(t, (p - 1) // 2, p) == 1:
            count += 2
    return p + 1 - count


def build_11_2_a_a():
    ap = {p: curve_ap(p) for p in primes_up_to(BOUND)}
    an = hecke_expand(ap, level=11, weight=2, chi=lambda p: 1, bound=BOUND)
    return {
        "label": "11.2.a.a",
        "level": 11,
        "weight": 2,
        "field_poly": [0, 1],
        "char_values": [1, 1, [], []],
        "inner_twists": [],
    }, [[n] for n in an]


# ---------------------------------------------------------------------------
# 16.3.c.a: the eta product q prod (1 - q^{4n})^6
# ---------------------------------------------------------------------------

def eta_power_series(scale, power, bound):
    """Coefficients of q * prod_{n>=1} (1 - q^{scale*n})^power up to q^bound."""
    series = [0] * (bound + 1)
    series[0] = 1
    for n in range(1, bound // scale + 1):
        step = scale * n
        for _ in range(power):
            for k in range(bound, step - 1, -1):
                series[k] -= series[k - step]
    shifted = [0] * (bound + 1)
    for k in range(bound):
        shifted[k + 1] = series[k]
    return shifted


def build_16_3_c_a():
    series = eta_power_series(scale=4, power=6, bound=BOUND)
    an = series[1:BOUND + 1]
    # nebentypus: the quadratic character of conductor 4 seen mod 16, written
    # on the generators 15 and 5 of the unit group mod 16
    chi_vals = [16, 2, [15, 5], [((15 % 4) - 1) // 2 % 2, ((5 % 4) - 1) // 2 % 2]]
    return {
        "label": "16.3.c.a",
        "level": 16,
        "weight": 3,
        "field_poly": [0, 1],
        "char_values": chi_vals,
        "inner_twists": [["4.b", 2, True]],
    }, [[n] for n in an]


# ---------------------------------------------------------------------------
# 47.1.b.a: theta series for discriminant -47, Hecke field Q(sqrt 5)
# ---------------------------------------------------------------------------

def theta_counts(a, b, c, bound):
    """r(n) = #{(x, y) : a x^2 + b x y + c y^2 = n} for n <= bound."""
    counts = [0] * (bound + 1)
    disc = 4 * a * c - b * b
    ymax = int((4 * a * bound / disc) ** 0.5) + 1
    for y in range(-ymax, ymax + 1):
        # a x^2 + (b y) x + (c y^2 - n) = 0 has real roots only while
        # 4 a n >= disc y^2, which also bounds the x window
        radicand = 4 * a * bound - disc * y * y
        if radicand < 0:
            continue
        half = radicand ** 0.5 / (2 * a)
        center = -b * y / (2 * a)
        for x in range(int(center - half) - 1, int(center + half) + 2):
            n = a * x * x + b * x * y + c * y * y
            if 0 <= n <= bound:
                counts[n] += 1
    return counts


def build_47_1_b_a():
    # class group of discriminant -47 is cyclic of order 5; the three reduced
    # forms give two distinct theta series beyond the principal one (inverse
    # classes share a theta series)
    r0 = theta_counts(1, 1, 12, BOUND)
    r1 = theta_counts(2, 1, 6, BOUND)
    r2 = theta_counts(3, 1, 4, BOUND)
    # a_n = (1/2) [ r0(n) + (beta - 1) r1(n) - beta r2(n) ] with
    # beta = (1 + sqrt 5)/2, expressed in the basis (1, beta):
    # rational part (r0 - r1)/2, beta part (r1 - r2)/2
    an = []
    for n in range(1, BOUND + 1):
        rational = (r0[n] - r1[n]) // 2
        betapart = (r1[n] - r2[n]) // 2
        assert (r0[n] - r1[n]) % 2 == 0 and (r1[n] - r2[n]) % 2 == 0
        an.append([rational, betapart])
    # nebentypus: the quadratic character mod 47 on the generator 5
    assert pow(5, 23, 47) == 46  # 5 generates the units mod 47
    chi_vals = [47, 2, [5], [1]]
    return {
        "label": "47.1.b.a",
        "level": 47,
        "weight": 1,
        "field_poly": [-1, -1, 1],
        "char_values": chi_vals,
        "inner_twists": [["47.b", 2, True]],
    }, an


def write_entry(outdir, meta, an):
    label = meta["label"]
    doc = {
        "newform": {"data": [meta]},
        "eigenvalues": {"data": [{
            "label": label,
            "hecke_ring_power_basis": True,
            "an": an,
        }]},
    }
    path = outdir / f"{label}.v1.json"
    path.write_text(json.dumps(doc, sort_keys=True))
    sidecar = outdir / f"{label}.v1.meta.json"
    sidecar.write_text(json.dumps({
        "label": label,
        "version": "v1",
        "fetched_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "source": ["local computation: scripts/build_lmfdb_cache.py"],
    }, sort_keys=True))
    print(f"wrote {path} ({len(an)} coefficients)")


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else \
        Path(__file__).resolve().parent.parent / "tests" / "data" / "lmfdb_cache"
    outdir.mkdir(parents=True, exist_ok=True)
    for builder in (build_11_2_a_a, build_16_3_c_a, build_47_1_b_a):
        meta, an = builder()
        write_entry(outdir, meta, an)


if __name__ == "__main__":
    main()
