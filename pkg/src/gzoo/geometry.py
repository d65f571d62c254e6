"""Point-line incidence geometries built from two-point stabilizer classes,
their classification (configuration, strongly regular graph, spectrum,
nearest-point type, generalized polygon, duality), hyperplanes with their
closure under complement-of-symmetric-difference, and the closed-form
symplectic polar-space predictor.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import BudgetExceeded, Disconnected, TrivialClass
from .graphs import Graph, maximal_cliques, spectrum, srg_parameters, srg_spectrum
from .permgroup import (PermutationGroup, StabilizerClassification, pairs_of_class,
                        pinv, pmul, two_point_stabilizer)


@dataclass(frozen=True)
class IncidenceGeometry:
    n: int
    lines: tuple              # frozensets of 0-based points; order is meaningful
    mode: str                 # "stabilized" or "defined"
    source_order: int | None = None   # stabilizer order of the class used
    flags: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    @property
    def line_count(self):
        return len(self.lines)

    def point_degrees(self):
        deg = Counter()
        for line in self.lines:
            for p in line:
                deg[p] += 1
        return tuple(deg.get(p, 0) for p in range(self.n))

    def is_partial_linear(self):
        seen = set()
        for line in self.lines:
            pts = sorted(line)
            for i, x in enumerate(pts):
                for y in pts[i + 1:]:
                    if (x, y) in seen:
                        return False
                    seen.add((x, y))
        return True

    def collinearity_graph(self) -> Graph:
        edges = set()
        for line in self.lines:
            pts = sorted(line)
            for i, x in enumerate(pts):
                for y in pts[i + 1:]:
                    edges.add((x, y))
        return Graph.from_edges(self.n, edges)


@dataclass(frozen=True)
class ConfigurationParams:
    points: int
    point_degrees: tuple      # sorted multiset of degrees (t+1 each)
    lines: int
    line_sizes: tuple         # sorted multiset of sizes (s+1 each)
    uniform: bool

    def label(self) -> str:
        """'[15_3, 15_3]' style; multiset shown when not uniform."""
        def side(count, mult):
            if len(set(mult)) == 1 and mult:
                return f"{count}_{mult[0]}"
            return f"{count}_{{{','.join(map(str, sorted(set(mult))))}}}"
        return f"[{side(self.points, self.point_degrees)}, {side(self.lines, self.line_sizes)}]"


def configuration(geom: IncidenceGeometry) -> ConfigurationParams:
    degs = tuple(sorted(geom.point_degrees()))
    sizes = tuple(sorted(len(l) for l in geom.lines))
    assert sum(degs) == sum(sizes), "incidence double count failed"
    uniform = len(set(degs)) <= 1 and len(set(sizes)) <= 1
    return ConfigurationParams(points=geom.n, point_degrees=degs,
                               lines=len(geom.lines), line_sizes=sizes,
                               uniform=uniform)


@dataclass(frozen=True)
class GraphStats:
    n: int
    degree_sequence: tuple
    connected: bool
    diameter: int | None
    girth: int | None
    srg: tuple | None         # (n, k, lam, mu)
    spectrum: tuple           # ((eigenvalue, multiplicity), ...)
    edge_count: int


def graph_stats(geom: IncidenceGeometry) -> GraphStats:
    g = geom.collinearity_graph()
    params = srg_parameters(g)
    spec = spectrum(g)
    if params is not None:
        exact = srg_spectrum(params)
        if exact is not None:
            assert spec == exact, "eigensolver disagrees with srg spectrum"
            spec = exact
    connected = g.is_connected()
    return GraphStats(n=g.n,
                      degree_sequence=tuple(sorted(g.degrees())),
                      connected=connected,
                      diameter=g.diameter() if connected else None,
                      girth=g.girth(),
                      srg=params,
                      spectrum=spec,
                      edge_count=g.edge_count)


@dataclass(frozen=True)
class GuClassification:
    u: int | None             # set when every external point-line pair agrees
    histogram: dict
    diameter: int

    @property
    def near_polygon(self):
        return self.u == 1


# -- construction --------------------------------------------------------------


def _pair_orbit_with_witnesses(g: PermutationGroup, beta):
    """Ordered orbit of (0, beta) with one group element per pair mapping
    (0, beta) onto it; returned keyed by the sorted pair, deterministic."""
    ident = tuple(range(g.degree))
    seen = {(0, beta): ident}
    queue = [(0, beta)]
    while queue:
        nxt = []
        for pair in queue:
            w = seen[pair]
            for gen in g.generators:
                img = (gen[pair[0]], gen[pair[1]])
                if img not in seen:
                    seen[img] = pmul(w, gen)
                    nxt.append(img)
        queue = nxt
    out = {}
    for (x, y), w in sorted(seen.items()):
        key = (x, y) if x < y else (y, x)
        out.setdefault(key, w)
    return out, seen


def _find_swap(g: PermutationGroup, x, y):
    """An element mapping (x, y) to (y, x), or None."""
    ident = tuple(range(g.degree))
    seen = {(x, y): ident}
    queue = [(x, y)]
    while queue:
        pair = queue.pop()
        w = seen[pair]
        for gen in g.generators:
            img = (gen[pair[0]], gen[pair[1]])
            if img not in seen:
                seen[img] = pmul(w, gen)
                if img == (y, x):
                    return seen[img]
                queue.append(img)
    return seen.get((y, x))


def build_stabilized_geometry(g: PermutationGroup, cls: StabilizerClassification,
                              class_index: int, on_trivial="error") -> IncidenceGeometry:
    """Group the class's pairs by literal stabilizer subgroup; each group's
    point union is a line.

    A trivial class (stabilizer order 1) would produce one line holding every
    point; on_trivial selects 'error' (default), 'setwise' (group by the
    literal setwise pair stabilizer instead), or 'force'.

    Grouping uses one base stabilizer per member orbital plus orbit
    witnesses: the stabilizer of a translated pair is the conjugate of the
    base one, and two conjugates coincide exactly when conjugating by the
    witness quotient normalizes the base subgroup.
    """
    sc = cls.classes[class_index]
    flags = []
    setwise = False
    if sc.order == 1:
        if on_trivial == "error":
            raise TrivialClass("class stabilizer has order 1; pass "
                               "on_trivial='setwise' or 'force' to build anyway")
        if on_trivial == "setwise":
            setwise = True
            flags.append("setwise-grouping")
        else:
            flags.append("trivial-class-forced")

    groups = {}
    done_pairs = set()
    for beta in sc.suborbit_reps:
        if (0, beta) in done_pairs or (beta, 0) in done_pairs:
            continue
        witnesses, _ = _pair_orbit_with_witnesses(g, beta)
        base = two_point_stabilizer(g, 0, beta)
        base_gens = list(base.generators)
        if setwise:
            swap = _find_swap(g, 0, beta)
            if swap is not None:
                base = PermutationGroup(g.degree, base_gens + [swap])
                base_gens = list(base.generators)
        fixed0 = frozenset(p for p in range(g.degree)
                           if all(s[p] == p for s in base_gens))
        reps = []          # (witness, bucket id) per distinct subgroup
        buckets = {}       # fixed set -> list of rep ids
        for pair in sorted(witnesses):
            if pair in done_pairs:
                continue
            done_pairs.add(pair)
            w = witnesses[pair]
            fixed = frozenset(w[p] for p in fixed0)
            rep_id = None
            for cand in buckets.get(fixed, ()):
                u = pmul(w, pinv(reps[cand]))
                uinv = pinv(u)
                if all(pmul(pmul(uinv, s), u) in base for s in base_gens):
                    rep_id = cand
                    break
            if rep_id is None:
                rep_id = len(reps)
                reps.append(w)
                buckets.setdefault(fixed, []).append(rep_id)
            groups.setdefault((beta, rep_id), set()).add(pair)

    lines = {frozenset(p for pr in prs for p in pr) for prs in groups.values()}
    lines = tuple(sorted(lines, key=sorted))
    geom = IncidenceGeometry(n=g.degree, lines=lines, mode="stabilized",
                             source_order=sc.order, flags=tuple(flags))
    if not geom.is_partial_linear():
        geom = IncidenceGeometry(n=g.degree, lines=geom.lines, mode="stabilized",
                                 source_order=sc.order,
                                 flags=geom.flags + ("not-partial-linear",))
    return geom


def build_defined_geometry(g: PermutationGroup, cls: StabilizerClassification,
                           class_index: int, clique_budget=1_000_000) -> IncidenceGeometry:
    """Lines are the maximal cliques of the class's collinearity graph."""
    sc = cls.classes[class_index]
    pairs = pairs_of_class(g, sc)
    graph = Graph.from_edges(g.degree, pairs)
    lines = tuple(sorted((c for c in maximal_cliques(graph, budget=clique_budget)
                          if len(c) >= 2), key=sorted))
    geom = IncidenceGeometry(n=g.degree, lines=lines, mode="defined",
                             source_order=sc.order)
    if not geom.is_partial_linear():
        geom = IncidenceGeometry(n=g.degree, lines=geom.lines, mode="defined",
                                 source_order=sc.order,
                                 flags=("not-partial-linear",))
    return geom


# -- classification -------------------------------------------------------------


def classify_gu(geom: IncidenceGeometry) -> GuClassification:
    """Count, for every non-incident point-line pair, the points of the line
    at minimum distance from the point."""
    g = geom.collinearity_graph()
    if not g.is_connected():
        raise Disconnected("collinearity graph is not connected")
    hist = Counter()
    dists = [g.bfs_distances(v) for v in range(g.n)]
    for line in geom.lines:
        pts = sorted(line)
        for x in range(geom.n):
            if x in line:
                continue
            dmin = min(dists[x][y] for y in pts)
            hist[sum(1 for y in pts if dists[x][y] == dmin)] += 1
    u = None
    if len(hist) == 1:
        u = next(iter(hist))
    return GuClassification(u=u, histogram=dict(sorted(hist.items())),
                            diameter=g.diameter())


def incidence_graph(geom: IncidenceGeometry) -> Graph:
    """Bipartite graph on points 0..n-1 and lines n..n+l-1."""
    edges = []
    for li, line in enumerate(geom.lines):
        for p in line:
            edges.append((p, geom.n + li))
    return Graph.from_edges(geom.n + len(geom.lines), edges)


def classify_generalized_polygon(geom: IncidenceGeometry):
    """N when the geometry is a generalized N-gon with s,t > 1, else None.

    Checks: uniform order (s, t) with s > 1 and t > 1, incidence graph of
    girth 2N and diameter N, and the unique-nearest-point property.
    """
    cfg = configuration(geom)
    if not cfg.uniform or not geom.lines:
        return None
    s = cfg.line_sizes[0] - 1
    t = cfg.point_degrees[0] - 1
    if s < 2 or t < 2:
        return None
    g = incidence_graph(geom)
    if not g.is_connected():
        return None
    d = g.diameter()
    girth = g.girth()
    if girth != 2 * d:
        return None
    gu = classify_gu(geom)
    if not gu.near_polygon:
        return None
    return d


def polygon_label(n_gon, geom: IncidenceGeometry):
    cfg = configuration(geom)
    s = cfg.line_sizes[0] - 1
    t = cfg.point_degrees[0] - 1
    names = {4: "GQ", 6: "GH", 8: "GO"}
    if n_gon in names:
        return f"{names[n_gon]}({s},{t})"
    return f"generalized {n_gon}-gon of order ({s},{t})"


def dual_geometry(geom: IncidenceGeometry) -> IncidenceGeometry:
    """Interchange points and lines."""
    lines = []
    for p in range(geom.n):
        on = frozenset(li for li, line in enumerate(geom.lines) if p in line)
        if on:
            lines.append(on)
    return IncidenceGeometry(n=len(geom.lines), lines=tuple(lines),
                             mode=geom.mode, source_order=geom.source_order,
                             flags=geom.flags + ("dual",))


# -- hyperplanes ----------------------------------------------------------------


def basic_hyperplanes(geom: IncidenceGeometry, far="auto"):
    """One candidate hyperplane per vertex: the closed neighborhood united,
    when far applies, with the points at distance equal to the diameter.

    far: 'auto' adds the far points only when the diameter is at least 3
    (on a diameter-2 graph they would fill the whole point set), True always
    adds them, False never does.  Duplicates are removed.
    """
    g = geom.collinearity_graph()
    if not g.is_connected():
        raise Disconnected("collinearity graph is not connected")
    diam = g.diameter()
    add_far = far is True or (far == "auto" and diam >= 3)
    out = []
    seen = set()
    for x in range(g.n):
        dist = g.bfs_distances(x)
        h = {y for y in range(g.n) if dist[y] <= 1}
        if add_far:
            h |= {y for y in range(g.n) if dist[y] == diam}
        fs = frozenset(h)
        if fs not in seen:
            seen.add(fs)
            out.append(fs)
    return sorted(out, key=sorted)


def veldkamp_closure(basics, universe, budget=1 << 20):
    """Closure of the family under H (+) H' = complement of the symmetric
    difference, partitioned by size.

    On characteristic vectors, H (+) H' = H xor H' xor ones, so complementing
    turns the operation into plain GF(2) addition; the closure is the
    complement of the linear span of the complemented inputs.
    """
    if not basics:
        raise ValueError("need at least one starting set")
    mask = (1 << universe) - 1
    basis = {}
    for h in basics:
        v = (~_set_to_mask(h)) & mask
        while v:
            lead = v.bit_length() - 1
            if lead in basis:
                v ^= basis[lead]
            else:
                basis[lead] = v
                break
    dim = len(basis)
    if 1 << dim > budget:
        raise BudgetExceeded(f"closure has 2^{dim} elements")
    span = [0]
    for b in basis.values():
        span += [v ^ b for v in span]
    closure = [v ^ mask for v in span]
    by_size = {}
    for v in closure:
        by_size.setdefault(v.bit_count(), []).append(v)
    classes = {size: sorted(_mask_to_set(v) for v in vs)
               for size, vs in sorted(by_size.items())}
    return VeldkampFamily(universe=universe, total=len(closure),
                          dimension=dim, classes=classes)


def veldkamp_sum(h1, h2, universe):
    """Complement of the symmetric difference, on point sets."""
    full = frozenset(range(universe))
    return frozenset(full - (h1 ^ h2))


@dataclass(frozen=True)
class VeldkampFamily:
    universe: int
    total: int
    dimension: int
    classes: dict             # size -> list of point sets


def _set_to_mask(s):
    m = 0
    for p in s:
        m |= 1 << p
    return m


def _mask_to_set(m):
    out = []
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        out.append(v)
    return frozenset(out)


# -- polar-space predictor -------------------------------------------------------


@dataclass(frozen=True)
class PolarPrediction:
    p: int
    n: int
    points: int               # sigma(p^(2n-1))
    b: int                    # sigma(p^(2n-3))
    generators: int           # prod (1 + p^i), i = 1..n
    spread_size: int          # p^n + 1
    srg: tuple                # (points, p*b, b-2, b)
    point_degree: int         # generators through a point: prod to n-1
    line_size: int            # (p^n - 1) / (p - 1)

    def configuration_label(self):
        return f"[{self.points}_{self.point_degree}, {self.generators}_{self.line_size}]"


def _sigma_geom(p, k):
    """Divisor sum of p^k for prime p: 1 + p + ... + p^k."""
    return (p ** (k + 1) - 1) // (p - 1)


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def predict_polar_space(p: int, n: int) -> PolarPrediction:
    """Counting data of the rank-n symplectic polar structure over GF(p)."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _sigma_geom(p, 2 * n - 1)
    b = _sigma_geom(p, 2 * n - 3) if n >= 2 else 1
    gens = 1
    for i in range(1, n + 1):
        gens *= 1 + p ** i
    pdeg = 1
    for i in range(1, n):
        pdeg *= 1 + p ** i
    spread = p ** n + 1
    assert spread * (p ** n - 1) == p ** (2 * n) - 1
    return PolarPrediction(p=p, n=n, points=a, b=b, generators=gens,
                           spread_size=spread,
                           srg=(a, p * b, b - 2, b),
                           point_degree=pdeg,
                           line_size=(p ** n - 1) // (p - 1))
