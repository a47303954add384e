"""Exact arithmetic for coefficient-field symmetries of Galois eigenvalue data.

The package detects multiplicative symmetries of Hecke-eigenvalue systems
(automorphism/character pairs relating a system to itself or to its dual),
assembles them into a group, computes the fixed subfields that control the
shape of the associated matrix group, and classifies, prime by prime, whether
that group looks split or unitary.  Small finite-field models let every
structural claim be checked by brute-force enumeration.
"""

__version__ = "0.1.0"
