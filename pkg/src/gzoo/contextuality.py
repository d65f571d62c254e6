"""Contextuality parameter of a geometry with respect to the coset
representative words of its generating coset table.

An edge of the collinearity graph is contextual when the permutation images
of its two coset representatives do not commute; kappa is the contextual
fraction.  Edges at coset 0 always commute (its representative is the
identity word), so kappa < 1 on any geometry with such an edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cosets import CosetTable, table_to_permutations
from .errors import DegreeMismatch
from .geometry import IncidenceGeometry
from .permgroup import pmul, word_image


@dataclass(frozen=True)
class KappaReport:
    edge_count: int
    contextual_count: int
    kappa: Fraction
    edges: tuple              # ((i, j, contextual), ...) with i < j, 0-based

    @property
    def kappa_str(self):
        return f"{float(self.kappa):.3f}"


def kappa(table: CosetTable, geom: IncidenceGeometry, group=None) -> KappaReport:
    """Contextuality report for geom, whose points must be table's cosets."""
    if geom.n != table.n:
        raise DegreeMismatch(f"geometry on {geom.n} points, table has {table.n} cosets")
    images = table_to_permutations(table).images
    reps = [word_image(w, images) for w in table.representatives]
    graph = geom.collinearity_graph()
    edges = []
    contextual = 0
    for i, j in graph.edges():
        pi, pj = reps[i], reps[j]
        is_ctx = pmul(pi, pj) != pmul(pj, pi)
        if is_ctx:
            contextual += 1
        if i == 0 or j == 0:
            assert not is_ctx, "edge at the identity coset cannot be contextual"
        edges.append((i, j, is_ctx))
    total = len(edges)
    value = Fraction(contextual, total) if total else Fraction(0)
    return KappaReport(edge_count=total, contextual_count=contextual,
                       kappa=value, edges=tuple(edges))


def kappa_summary(reports) -> str:
    """Fixed-width text rows; deterministic order as given."""
    lines = ["edges  contextual  kappa"]
    for r in reports:
        lines.append(f"{r.edge_count:>5}  {r.contextual_count:>10}  {r.kappa_str}")
    return "\n".join(lines)
