"""Similar-task social network: resources linked by the similarity of their work profiles."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .._validation import check_event_log, check_fraction
from ..log.model import RESOURCE
from ..petri.dot import attr_list, quote

logger = logging.getLogger(__name__)


class NoResourceError(ValueError):
    pass


@dataclass(frozen=True)
class SocialNetwork:
    nodes: tuple
    weight: dict
    edges: frozenset
    profiles: dict = field(default_factory=dict)
    skipped_events: int = 0

    def to_dot(self) -> str:
        """Undirected graph; edge width and darkness follow the similarity."""
        lines = ['graph "similar task" {', '  node [shape=ellipse style=filled fillcolor="#DDE8FF" fontname="Helvetica" fontsize=10];']
        for r in self.nodes:
            lines.append(f"  {quote(r)} {attr_list({'label': r})};")
        for r1, r2 in sorted(tuple(sorted(e)) for e in self.edges):
            w = self.weight[(r1, r2)]
            level = int(round(180 * (1 - w)))
            attrs = {"label": f"{w:.2f}", "penwidth": f"{1 + 4 * w:.2f}", "color": f"#{level:02X}{level:02X}{level:02X}"}
            lines.append(f"  {quote(r1)} -- {quote(r2)} {attr_list(attrs)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _cosine(profiles):
    norms = np.linalg.norm(profiles, axis=1)
    norms[norms == 0] = 1.0
    unit = profiles / norms[:, None]
    return np.clip(unit @ unit.T, -1.0, 1.0)


def social_network_similar_task(log, resource_key=RESOURCE, similarity_threshold=0.75) -> SocialNetwork:
    """Link resources whose activity-execution profiles have cosine similarity at least ``similarity_threshold``.

    Events without ``resource_key`` are skipped and counted.

    Raises
    ------
    NoResourceError
        If no event carries ``resource_key``.
    """
    check_fraction("similarity_threshold", similarity_threshold)
    log = check_event_log(log)
    counts: dict = {}
    skipped = 0
    for trace in log.traces:
        for event in trace.events:
            r = event.attributes.get(resource_key)
            if r is None:
                skipped += 1
                continue
            per = counts.setdefault(str(r), {})
            a = log.label_of(event)
            per[a] = per.get(a, 0) + 1
    if not counts:
        raise NoResourceError(f"no event carries the resource attribute {resource_key!r}")
    if skipped:
        logger.info("social network: %d events without %r skipped", skipped, resource_key)
    nodes = tuple(sorted(counts))
    acts = sorted({a for per in counts.values() for a in per})
    col = {a: j for j, a in enumerate(acts)}
    matrix = np.zeros((len(nodes), len(acts)))
    for i, r in enumerate(nodes):
        for a, n in counts[r].items():
            matrix[i, col[a]] = n
    sim = _cosine(matrix)
    weight, edges = {}, set()
    for i, r1 in enumerate(nodes):
        for j, r2 in enumerate(nodes):
            if i == j:
                continue
            w = float(sim[min(i, j), max(i, j)])
            weight[(r1, r2)] = w
            if i < j and w >= similarity_threshold:
                edges.add(frozenset((r1, r2)))
    return SocialNetwork(nodes, weight, frozenset(edges), {r: dict(counts[r]) for r in nodes}, skipped)


class SimilarTaskMiner(BaseEstimator):
    def __init__(self, resource_key=RESOURCE, similarity_threshold=0.75, classifier=None):
        self.resource_key = resource_key
        self.similarity_threshold = similarity_threshold
        self.classifier = classifier

    def fit(self, X, y=None):
        log = check_event_log(X, self.classifier)
        self.network_ = social_network_similar_task(log, self.resource_key, self.similarity_threshold)
        return self
