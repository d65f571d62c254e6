"""Permutation groups: base and strong generating set, orbits, stabilizers,
rank profile, and two-point stabilizer classification.

Permutations are tuples of 0-based images.  Composition is left to right:
(p * q) sends x to q[p[x]].  All user-facing text converts to 1-based points.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .errors import NotTransitive, SamePoint
from .textio import PermutationInput

FINGERPRINT_ENUM_LIMIT = 20000


def identity_perm(n):
    return tuple(range(n))


def pmul(p, q):
    """Apply p, then q."""
    return tuple(q[i] for i in p)


def pinv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycle_lengths(p):
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        j = i
        c = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            c += 1
        out.append(c)
    return out


def porder(p):
    o = 1
    for c in cycle_lengths(p):
        o = lcm(o, c)
    return o


def word_image(word, gen_images):
    """Permutation image of a free-group word, multiplying left to right."""
    n = len(gen_images[0])
    p = identity_perm(n)
    for l in word.letters:
        g = gen_images[abs(l) - 1]
        p = pmul(p, g if l > 0 else pinv(g))
    return p


def _orbit_transversal(point, gens, degree):
    """BFS orbit with transversal perms t mapping point -> orbit point."""
    trans = {point: identity_perm(degree)}
    queue = [point]
    while queue:
        nxt = []
        for x in queue:
            tx = trans[x]
            for g in gens:
                y = g[x]
                if y not in trans:
                    trans[y] = pmul(tx, g)
                    nxt.append(y)
        queue = nxt
    return trans


class PermutationGroup:
    """Group with a deterministic base and strong generating set."""

    def __init__(self, degree, generators, base_hint=()):
        self.degree = degree
        ident = identity_perm(degree)
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != degree:
                raise ValueError("generator degree mismatch")
            if sorted(g) != list(range(degree)):
                raise ValueError("generator is not a bijection")
            if g != ident and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)
        self._base = []
        self._level_gens = []
        self._transversals = []
        self._build(base_hint)

    # -- construction -----------------------------------------------------

    def _extend_base(self, point):
        self._base.append(point)
        self._level_gens.append([])
        self._transversals.append({point: identity_perm(self.degree)})

    def _rebuild_level(self, i):
        self._transversals[i] = _orbit_transversal(
            self._base[i], self._level_gens[i], self.degree)

    def _strip(self, p, start=0):
        """Sift p through levels >= start; returns (residue, level reached)."""
        for i in range(start, len(self._base)):
            img = p[self._base[i]]
            t = self._transversals[i].get(img)
            if t is None:
                return p, i
            p = pmul(p, pinv(t))
        return p, len(self._base)

    def _smallest_moved(self, p):
        for x in range(self.degree):
            if p[x] != x:
                return x
        return None

    def _build(self, base_hint):
        for pt in base_hint:
            if pt not in self._base:
                self._extend_base(pt)
        for g in self.generators:
            self._insert(g, 0)
        # bottom-up verification of the strong generating property
        i = len(self._base) - 1
        while i >= 0:
            j = self._verify_level(i)
            i = i - 1 if j is None else j

    def _insert(self, g, from_level):
        """Record g as a strong generator at levels from_level..j, where j is
        the first level whose base point g moves (extending the base if g
        fixes all current base points)."""
        if g == identity_perm(self.degree):
            return from_level
        j = from_level
        while True:
            if j == len(self._base):
                self._extend_base(self._smallest_moved(g))
            if g[self._base[j]] != self._base[j]:
                break
            j += 1
        for l in range(from_level, j + 1):
            self._level_gens[l].append(g)
            self._rebuild_level(l)
        return j

    def _verify_level(self, i):
        """Sift all Schreier generators of level i.

        Returns None when the level verifies; otherwise inserts the failing
        residue and returns the level where re-verification must restart.
        """
        ident = identity_perm(self.degree)
        trans = self._transversals[i]
        for pt in sorted(trans):
            t = trans[pt]
            for g in self._level_gens[i]:
                tg = pmul(t, g)
                u = trans[tg[self._base[i]]]
                schreier = pmul(tg, pinv(u))
                residue, _ = self._strip(schreier, i + 1)
                if residue != ident:
                    return self._insert(residue, i + 1)
        return None

    # -- queries -----------------------------------------------------------

    @property
    def base(self):
        return tuple(self._base)

    def order(self):
        o = 1
        for t in self._transversals:
            o *= len(t)
        return o

    def __contains__(self, p):
        residue, _ = self._strip(tuple(p))
        return residue == identity_perm(self.degree)

    def elements(self):
        """All elements, deterministically ordered; use only on small groups."""
        out = [identity_perm(self.degree)]
        for i in reversed(range(len(self._base))):
            trans = self._transversals[i]
            out = [pmul(h, trans[pt]) for h in out for pt in sorted(trans)]
        return out

    def orbit(self, point):
        orb = {point}
        queue = [point]
        while queue:
            x = queue.pop()
            for g in self.generators:
                if g[x] not in orb:
                    orb.add(g[x])
                    queue.append(g[x])
        return orb

    def orbits(self):
        seen = set()
        out = []
        for x in range(self.degree):
            if x in seen:
                continue
            orb = self.orbit(x)
            seen |= orb
            out.append(sorted(orb))
        return out

    def is_transitive(self):
        return self.degree > 0 and len(self.orbit(0)) == self.degree

    def stabilizer(self, point):
        """Stabilizer of one point, with its own strong generating set."""
        chain = PermutationGroup(self.degree, self.generators, base_hint=(point,))
        gens = [g for g in chain.strong_generators() if g[point] == point]
        return PermutationGroup(self.degree, gens)

    def strong_generators(self):
        seen = []
        for lg in self._level_gens:
            for g in lg:
                if g not in seen:
                    seen.append(g)
        return seen

    def transversal(self, level=0):
        return dict(self._transversals[level]) if self._transversals else {}


def group_from(pi: PermutationInput) -> PermutationGroup:
    return PermutationGroup(pi.degree, pi.images)


def two_point_stabilizer(g: PermutationGroup, alpha, beta) -> PermutationGroup:
    if alpha == beta:
        raise SamePoint(f"points must differ, got {alpha + 1} twice")
    chain = PermutationGroup(g.degree, g.generators, base_hint=(alpha, beta))
    gens = [s for s in chain.strong_generators()
            if s[alpha] == alpha and s[beta] == beta]
    return PermutationGroup(g.degree, gens)


def subgroups_equal(g1: PermutationGroup, g2: PermutationGroup) -> bool:
    if g1.degree != g2.degree:
        return False
    if g1.order() != g2.order():
        return False
    return (all(g in g2 for g in g1.generators)
            and all(g in g1 for g in g2.generators))


def fingerprint(g: PermutationGroup):
    """(order, element-order multiset) when small, else a coarse signature.

    Returns (tag, data) with tag 'full' or 'coarse'; coarse results set the
    fingerprint-only flag in reports.
    """
    order = g.order()
    if order <= FINGERPRINT_ENUM_LIMIT:
        orders = tuple(sorted(porder(p) for p in g.elements()))
        return ("full", order, orders)
    orbits = tuple(sorted(len(o) for o in g.orbits()))
    return ("coarse", order, orbits)


@dataclass(frozen=True)
class RankProfile:
    """Suborbit data of a transitive group.

    rank follows the reference-table convention: the fixed point, one class
    for any further points fixed by the point stabilizer, and one per larger
    suborbit.  orbital_count is the plain number of point-stabilizer orbits.
    """
    rank: int
    subdegrees: tuple
    orbital_count: int
    suborbits: tuple


def _suborbits(stab_gens, degree):
    assigned = [None] * degree
    orbs = []
    for x in range(degree):
        if assigned[x] is not None:
            continue
        orb = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for g in stab_gens:
                if g[y] not in orb:
                    orb.add(g[y])
                    queue.append(g[y])
        for y in orb:
            assigned[y] = len(orbs)
        orbs.append(tuple(sorted(orb)))
    return orbs


def rank_profile(g: PermutationGroup) -> RankProfile:
    if not g.is_transitive():
        raise NotTransitive("rank profile needs a transitive group")
    stab = g.stabilizer(0)
    orbs = _suborbits(stab.generators, g.degree)
    sizes = sorted(len(o) for o in orbs)
    extra_fixed = sum(1 for o in orbs if len(o) == 1) - 1
    big = sum(1 for o in orbs if len(o) >= 2)
    rank = 1 + (1 if extra_fixed > 0 else 0) + big
    return RankProfile(rank=rank, subdegrees=tuple(sizes),
                       orbital_count=len(orbs), suborbits=tuple(orbs))


@dataclass(frozen=True)
class StabilizerClass:
    order: int
    fingerprint: tuple
    fingerprint_only: bool
    representative: tuple      # one (alpha, beta) pair, 0-based
    suborbit_reps: tuple       # smallest point of each member suborbit
    suborbit_sizes: tuple
    is_point_stabilizer: bool  # equals the full stabilizer of alpha


@dataclass(frozen=True)
class StabilizerClassification:
    degree: int
    classes: tuple             # StabilizerClass, largest stabilizer first
    m: int                     # reference-table class count (see notes below)
    pair_class_count: int      # unordered pair-orbit count, trivial ones too
    point_stabilizer_order: int
    point_stabilizer_fingerprint: tuple


def classify_two_point_stabilizers(g: PermutationGroup, check=False) -> StabilizerClassification:
    """Group unordered point pairs by the fingerprint of their stabilizer.

    The reported m follows the reference tables: the point stabilizer counts
    as a class of its own, the trivial-stabilizer pairs count only when they
    form a single pair-orbit, and pair-orbits whose stabilizer fingerprint
    coincides (including with the point stabilizer) merge.
    """
    if not g.is_transitive() or g.degree < 2:
        raise NotTransitive("classification needs a transitive group of degree >= 2")
    chain = PermutationGroup(g.degree, g.generators, base_hint=(0,))
    stab_gens = [s for s in chain.strong_generators() if s[0] == 0]
    orbs = _suborbits(stab_gens, g.degree)
    trans = chain.transversal(0)

    suborbit_of = {}
    for i, o in enumerate(orbs):
        for x in o:
            suborbit_of[x] = i

    # merge each orbital with its transpose
    merged = []
    seen = set()
    for i, o in enumerate(orbs):
        beta = o[0]
        if beta == 0 and len(o) == 1:
            continue
        if i in seen:
            continue
        t = trans[beta]
        gamma = pinv(t)[0]
        j = suborbit_of[gamma]
        seen.add(i)
        seen.add(j)
        members = (i,) if j == i else (i, j)
        merged.append(members)

    pstab = PermutationGroup(g.degree, stab_gens)
    pstab_order = pstab.order()
    pstab_fp = fingerprint(pstab)

    entries = []
    for members in merged:
        beta = orbs[members[0]][0]
        st = two_point_stabilizer(g, 0, beta)
        fp = fingerprint(st)
        if check:
            beta2 = orbs[members[-1]][min(1, len(orbs[members[-1]]) - 1)]
            fp2 = fingerprint(two_point_stabilizer(g, 0, beta2))
            assert fp2 == fp, "stabilizer fingerprint not constant on orbital"
        entries.append({
            "order": st.order(),
            "fp": fp,
            "members": members,
            "beta": beta,
        })

    # fingerprint-merge pair-orbit entries into classes
    by_fp = {}
    for e in entries:
        by_fp.setdefault(e["fp"], []).append(e)
    classes = []
    for fp, group_entries in by_fp.items():
        reps = tuple(sorted(orbs[i][0] for e in group_entries for i in e["members"]))
        sizes = tuple(sorted(len(orbs[i]) for e in group_entries for i in e["members"]))
        order = group_entries[0]["order"]
        classes.append(StabilizerClass(
            order=order,
            fingerprint=fp,
            fingerprint_only=(fp[0] == "coarse"),
            representative=(0, group_entries[0]["beta"]),
            suborbit_reps=reps,
            suborbit_sizes=sizes,
            is_point_stabilizer=(order == pstab_order and 1 in sizes),
        ))
    classes.sort(key=lambda c: (-c.order, c.suborbit_reps))

    # reference-table m
    fps = {pstab_fp}
    trivial_entries = [e for e in entries if e["order"] == 1]
    for e in entries:
        if e["order"] > 1:
            fps.add(e["fp"])
    if len(trivial_entries) == 1:
        fps.add(trivial_entries[0]["fp"])
    return StabilizerClassification(
        degree=g.degree,
        classes=tuple(classes),
        m=len(fps),
        pair_class_count=len(entries),
        point_stabilizer_order=pstab_order,
        point_stabilizer_fingerprint=pstab_fp,
    )


def pairs_of_class(g: PermutationGroup, cls: StabilizerClass):
    """All unordered point pairs in the class, as a set of frozensets."""
    pairs = set()
    for beta in cls.suborbit_reps:
        start = frozenset((0, beta))
        if start in pairs:
            continue
        queue = [start]
        pairs.add(start)
        while queue:
            fs = queue.pop()
            x, y = tuple(fs)
            for gen in g.generators:
                img = frozenset((gen[x], gen[y]))
                if img not in pairs:
                    pairs.add(img)
                    queue.append(img)
    return pairs
