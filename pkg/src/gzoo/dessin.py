"""Bicolored-map data of a two-generator permutation input: signature,
cycle-structure passport, genus, and hyperbolic-polygon invariants for
quotients of the modular group.

The first generator in the input is the black one; faces come from the
left-to-right product of the two generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotModularQuotient, OddEuler
from .permgroup import cycle_lengths, pmul
from .textio import PermutationInput


@dataclass(frozen=True)
class DessinSignature:
    black: int
    white: int
    faces: int
    genus: int
    n_edges: int

    def as_tuple(self):
        return (self.black, self.white, self.faces, self.genus)


@dataclass(frozen=True)
class Passport:
    """Cycle-type partitions (descending) of gen1, gen2 and their product."""
    black: tuple
    white: tuple
    faces: tuple

    def as_strings(self):
        return tuple(format_partition(p) for p in (self.black, self.white, self.faces))


@dataclass(frozen=True)
class ModularInvariants:
    n: int
    genus: int
    nu2: int   # fixed points of the involution
    nu3: int   # fixed points of the order-3 generator
    cusps: int
    fractions: int

    def as_tuple(self):
        return (self.n, self.genus, self.nu2, self.nu3, self.cusps, self.fractions)


def format_partition(part) -> str:
    """(6,6,3,1,1) -> '6^2 3 1^2'."""
    out = []
    i = 0
    while i < len(part):
        j = i
        while j < len(part) and part[j] == part[i]:
            j += 1
        mult = j - i
        out.append(f"{part[i]}^{mult}" if mult > 1 else f"{part[i]}")
        i = j
    return " ".join(out)


def _two_generators(pi: PermutationInput):
    if len(pi.images) != 2:
        raise ValueError("need exactly two generators")
    return pi.images[0], pi.images[1]


def signature(pi: PermutationInput) -> DessinSignature:
    g1, g2 = _two_generators(pi)
    n = pi.degree
    b = len(cycle_lengths(g1))
    w = len(cycle_lengths(g2))
    f = len(cycle_lengths(pmul(g1, g2)))
    euler = b + w + f - n
    if euler % 2:
        raise OddEuler(f"B+W+F-n = {euler} is odd")
    return DessinSignature(black=b, white=w, faces=f, genus=(2 - euler) // 2, n_edges=n)


def passport(pi: PermutationInput) -> Passport:
    g1, g2 = _two_generators(pi)
    parts = tuple(tuple(sorted(cycle_lengths(p), reverse=True))
                  for p in (g1, g2, pmul(g1, g2)))
    return Passport(black=parts[0], white=parts[1], faces=parts[2])


def modular_invariants(pi: PermutationInput) -> ModularInvariants:
    """Polygon invariants for a quotient of the group <x,y | x^2, y^3>.

    Requires gen1^2 = gen2^3 = 1.  The fraction count comes from the black
    count of the order-3 generator via fractions = cycles(gen2) + 1 - nu3.
    """
    g1, g2 = _two_generators(pi)
    n = pi.degree
    if pmul(g1, g1) != tuple(range(n)):
        raise NotModularQuotient("first generator must square to the identity")
    if pmul(pmul(g2, g2), g2) != tuple(range(n)):
        raise NotModularQuotient("second generator must cube to the identity")
    nu2 = sum(1 for i in range(n) if g1[i] == i)
    nu3 = sum(1 for i in range(n) if g2[i] == i)
    cusps = len(cycle_lengths(pmul(g1, g2)))
    black = len(cycle_lengths(g2))
    white = len(cycle_lengths(g1))
    euler = black + white + cusps - n
    genus = (2 - euler) // 2
    fractions = black + 1 - nu3
    return ModularInvariants(n=n, genus=genus, nu2=nu2, nu3=nu3,
                             cusps=cusps, fractions=fractions)
