"""Undirected graph helpers: distances, diameter, girth, strongly regular
parameter detection, spectra, and maximal-clique enumeration.

Vertices are 0..n-1.  Neighbor sets are kept both as int bitmasks (for clique
and common-neighbor work) and as sorted tuples (for traversal).
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple        # sorted tuple of neighbor tuples
    masks: tuple      # neighbor bitmasks

    @classmethod
    def from_edges(cls, n, edges):
        nbrs = [set() for _ in range(n)]
        for e in edges:
            x, y = tuple(e)
            if x == y:
                continue
            nbrs[x].add(y)
            nbrs[y].add(x)
        adj = tuple(tuple(sorted(s)) for s in nbrs)
        masks = tuple(sum(1 << v for v in s) for s in adj)
        return cls(n=n, adj=adj, masks=masks)

    @property
    def edge_count(self):
        return sum(len(a) for a in self.adj) // 2

    def edges(self):
        return [(x, y) for x in range(self.n) for y in self.adj[x] if x < y]

    def degrees(self):
        return tuple(len(a) for a in self.adj)

    def bfs_distances(self, start):
        dist = [-1] * self.n
        dist[start] = 0
        q = deque([start])
        while q:
            v = q.popleft()
            for w in self.adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
        return dist

    def is_connected(self):
        if self.n == 0:
            return True
        return all(d >= 0 for d in self.bfs_distances(0))

    def diameter(self):
        best = 0
        for v in range(self.n):
            dist = self.bfs_distances(v)
            if any(d < 0 for d in dist):
                return None
            best = max(best, max(dist))
        return best

    def girth(self):
        """Length of a shortest cycle, or None for a forest.  BFS per vertex."""
        best = None
        for s in range(self.n):
            dist = [-1] * self.n
            parent = [-1] * self.n
            dist[s] = 0
            q = deque([s])
            while q:
                v = q.popleft()
                for w in self.adj[v]:
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        parent[w] = v
                        q.append(w)
                    elif w != parent[v] and dist[w] >= dist[v]:
                        cyc = dist[v] + dist[w] + 1
                        if best is None or cyc < best:
                            best = cyc
        return best


def srg_parameters(g: Graph):
    """(n, k, lam, mu) when the graph is strongly regular, else None.

    Requires regular, connected, non-complete, mu >= 1, and constant
    common-neighbor counts over adjacent and non-adjacent pairs.
    """
    n = g.n
    if n < 2:
        return None
    degs = set(g.degrees())
    if len(degs) != 1:
        return None
    k = degs.pop()
    if k in (0, n - 1):
        return None
    if not g.is_connected():
        return None
    lam = mu = None
    for x in range(n):
        mx = g.masks[x]
        for y in range(x + 1, n):
            common = (mx & g.masks[y]).bit_count()
            if (mx >> y) & 1:
                if lam is None:
                    lam = common
                elif common != lam:
                    return None
            else:
                if mu is None:
                    mu = common
                elif common != mu:
                    return None
    if lam is None or mu is None or mu < 1:
        return None
    if k * (k - lam - 1) != (n - k - 1) * mu:
        return None
    return (n, k, lam, mu)


def srg_spectrum(params):
    """Exact integer spectrum ((eig, mult), ...) from srg parameters, or None
    when the eigenvalues are irrational (conference-graph case)."""
    n, k, lam, mu = params
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    s = int(round(disc ** 0.5))
    if s * s != disc:
        return None
    if (lam - mu + s) % 2:
        return None
    r = (lam - mu + s) // 2
    t = (lam - mu - s) // 2
    if r == t:
        return None
    f = ((n - 1) * (-t) - k) // (r - t)
    g = n - 1 - f
    # multiplicities must reproduce trace 0
    if k + f * r + g * t != 0:
        return None
    spec = [(k, 1), (r, f), (t, g)]
    spec.sort(key=lambda p: -p[0])
    return tuple((e, m) for e, m in spec if m > 0)


SPECTRUM_TOL = 1e-6


def spectrum(g: Graph, tol=SPECTRUM_TOL):
    """Adjacency eigenvalues with multiplicities, sorted descending.

    Eigenvalues within tol of an integer are reported as ints; others as
    rounded floats (legal for graphs that are not strongly regular).
    """
    if g.n == 0:
        return ()
    a = np.zeros((g.n, g.n))
    for x in range(g.n):
        for y in g.adj[x]:
            a[x, y] = 1.0
    eig = np.linalg.eigvalsh(a)
    vals = []
    for e in eig:
        r = round(float(e))
        vals.append(r if abs(e - r) <= tol else round(float(e), 6))
    counts = Counter(vals)
    return tuple(sorted(counts.items(), key=lambda p: -p[0]))


def format_spectrum(spec) -> str:
    return "[" + ", ".join(f"{e}^{m}" for e, m in spec) + "]"


def maximal_cliques(g: Graph, budget=1_000_000):
    """All maximal cliques via pivoting, deterministic order of discovery."""
    out = []
    masks = g.masks
    all_mask = (1 << g.n) - 1

    def expand(r, p, x):
        if not p and not x:
            out.append(r)
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} maximal cliques")
            return
        both = p | x
        pivot = -1
        best = -1
        m = both
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            cnt = (p & masks[u]).bit_count()
            if cnt > best:
                best = cnt
                pivot = u
        cand = p & ~masks[pivot]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            bit = 1 << v
            expand(r | bit, p & masks[v], x & masks[v])
            p &= ~bit
            x |= bit

    expand(0, all_mask, 0)
    cliques = []
    for mask in out:
        members = []
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            members.append(v)
        cliques.append(frozenset(members))
    return sorted(cliques, key=lambda c: sorted(c))
