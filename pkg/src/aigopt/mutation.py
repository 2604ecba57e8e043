"""The class-level mutation graph and the size-difference bound over it.

Vertices are NPN classes; an edge joins two classes whenever some member of
one differs from some member of the other in exactly one truth-table row.
Because NPN transforms preserve Hamming distance, flipping each row of the
canonical representative reaches every neighbouring class, so edges are
computed from representatives only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .npn import NpnClass, NpnClassTable
from .synthesis import Status


@dataclass(frozen=True, slots=True)
class MutationEdge:
    """Edge between classes a < b.

    ``delta`` is the absolute difference of exact optimal sizes, or None when
    either endpoint lacks an exact value.  ``multiplicity`` counts how many
    distinct representative bit flips realize the pair; it is diagnostic only
    and excluded from all histogram accounting.
    """

    a: int
    b: int
    delta: int | None
    multiplicity: int = 1


@dataclass(frozen=True)
class GraphSummary:
    edge_total: int
    exact_edge_total: int
    max_delta: int | None
    mean_abs_delta: float | None
    share_delta_le_2: float | None


@dataclass(frozen=True)
class MutationGraph:
    n: int
    classes: tuple[NpnClass, ...]
    edges: tuple[MutationEdge, ...]
    histogram: dict[int, int]
    summary: GraphSummary


class IncompleteStoreError(KeyError):
    """A class required by graph construction has no synthesis result."""

    def __init__(self, missing: list[str]):
        super().__init__(f"{len(missing)} classes missing from the result store")
        self.missing = missing


def class_neighbors(cls: NpnClass, table: NpnClassTable) -> set[int]:
    """Indices of classes one bit flip away from ``cls`` (self excluded)."""
    out = set()
    for row in range(cls.canon.rows):
        neighbor = table.classify(cls.canon.flip_bit(row))
        if neighbor != cls.class_index:
            out.add(neighbor)
    return out


def _neighbor_multiplicity(cls: NpnClass, table: NpnClassTable) -> dict[int, int]:
    counts: dict[int, int] = {}
    for row in range(cls.canon.rows):
        neighbor = table.classify(cls.canon.flip_bit(row))
        if neighbor != cls.class_index:
            counts[neighbor] = counts.get(neighbor, 0) + 1
    return counts


def build_graph(table: NpnClassTable, opt_store) -> MutationGraph:
    """Assemble the graph joining classes with synthesis results.

    ``opt_store`` maps canonical table bits to any object with ``size`` and
    ``status`` attributes (an OptResult or a store record).  Every class must
    be present; deltas are defined only between two Exact endpoints.
    """
    missing = [c.canon.hex() for c in table if c.canon.bits not in opt_store]
    if missing:
        raise IncompleteStoreError(missing)

    def exact_size(cls: NpnClass) -> int | None:
        rec = opt_store[cls.canon.bits]
        status = rec.status if isinstance(rec.status, Status) else Status(rec.status)
        return rec.size if status is Status.EXACT else None

    pair_multiplicity: dict[tuple[int, int], int] = {}
    for cls in table:
        for neighbor, count in _neighbor_multiplicity(cls, table).items():
            a, b = sorted((cls.class_index, neighbor))
            key = (a, b)
            # Each unordered pair is met from both sides; keep the max so the
            # multiplicity annotation stays side-independent.
            pair_multiplicity[key] = max(pair_multiplicity.get(key, 0), count)

    edges = []
    histogram: dict[int, int] = {}
    for (a, b), mult in sorted(pair_multiplicity.items()):
        sa = exact_size(table[a])
        sb = exact_size(table[b])
        delta = abs(sa - sb) if sa is not None and sb is not None else None
        if delta is not None:
            histogram[delta] = histogram.get(delta, 0) + 1
        edges.append(MutationEdge(a, b, delta, mult))

    return MutationGraph(
        n=table.n,
        classes=tuple(table),
        edges=tuple(edges),
        histogram=histogram,
        summary=summarize_edges(edges),
    )


def summarize_edges(edges) -> GraphSummary:
    deltas = [e.delta for e in edges if e.delta is not None]
    return GraphSummary(
        edge_total=len(edges),
        exact_edge_total=len(deltas),
        max_delta=max(deltas) if deltas else None,
        mean_abs_delta=sum(deltas) / len(deltas) if deltas else None,
        share_delta_le_2=(
            sum(1 for d in deltas if d <= 2) / len(deltas) if deltas else None
        ),
    )


@dataclass(frozen=True)
class BoundReport:
    holds: bool
    max_delta: int | None
    violations: tuple[MutationEdge, ...]


def verify_bound(g: MutationGraph) -> BoundReport:
    """Check every defined delta against the n * d_H bound (d_H = 1 here).

    A violation would indicate an implementation bug, not a property of the
    functions: the bound is constructive.
    """
    violations = tuple(
        e for e in g.edges if e.delta is not None and e.delta > g.n
    )
    return BoundReport(
        holds=not violations,
        max_delta=g.summary.max_delta,
        violations=violations,
    )


def summary_stats(g: MutationGraph) -> dict[str, float]:
    if g.summary.exact_edge_total == 0:
        raise ValueError("no edges with exact sizes at both endpoints")
    assert g.summary.mean_abs_delta is not None
    assert g.summary.share_delta_le_2 is not None
    return {
        "mean_abs_delta": g.summary.mean_abs_delta,
        "share_delta_le_2": g.summary.share_delta_le_2,
    }
