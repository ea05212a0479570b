# -*- coding: utf-8 -*-
"""Directed graphs, topology generators and root-set analysis.

An edge (j, i) means node j can send information to node i. Graphs carry no
weights and no self-loops; self-influence is a weight-matrix concern.

This module provides:
- DirectedGraph value type with neighbor queries and edge-list I/O
- Ring, Erdos-Renyi, multi-sub-ring and spanning-tree-pair generators
- root_set / common_roots for checking the common-root condition

Example:
    >>> from core.digraph import gen_ring, root_set
    >>> g = gen_ring(3, bidirectional=False)
    >>> sorted(root_set(g))
    [0, 1, 2]

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import logging

import networkx as nx
import numpy as np

from .errors import SimulationError, DimensionError

logger = logging.getLogger(__name__)

DEFAULT_MAX_ATTEMPTS = 1000


# Custom Exceptions

class GraphError(SimulationError):
    """Base exception for graph errors."""
    pass


class InvalidSizeError(GraphError):
    """Raised when a generator receives an impossible size.

    Attributes:
        n (int): Requested node count
    """

    def __init__(self, n, requirement):
        self.n = n
        self.requirement = requirement
        super(InvalidSizeError, self).__init__(
            "Invalid graph size n={}: {}".format(n, requirement))


class GenerationFailureError(GraphError):
    """Raised when a randomized generator runs out of attempts.

    Attributes:
        attempts (int): Number of attempts made
    """

    def __init__(self, generator, attempts):
        self.generator = generator
        self.attempts = attempts
        super(GenerationFailureError, self).__init__(
            "{} failed to produce a valid graph after {} attempts".format(generator, attempts))


class RootSet(frozenset):
    """Set of nodes from which every node of a graph is reachable."""

    @property
    def roots(self):
        """frozenset: The root nodes."""
        return frozenset(self)

    def __repr__(self):
        return "RootSet({})".format(sorted(self))


class DirectedGraph(object):
    """Immutable directed graph on nodes 0..n-1.

    Attributes:
        n (int): Node count
        edges (frozenset): Ordered pairs (j, i), j sends to i
    """

    def __init__(self, n, edges=()):
        """Initialize DirectedGraph.

        Args:
            n (int): Positive node count
            edges (iterable): Pairs (j, i); self-loops are dropped

        Raises:
            InvalidSizeError: If n < 1
            GraphError: If an edge references a node outside [0, n)
        """
        if int(n) != n or n < 1:
            raise InvalidSizeError(n, "need n >= 1")
        self._n = int(n)

        clean = set()
        for edge in edges:
            j, i = int(edge[0]), int(edge[1])
            if not (0 <= j < self._n and 0 <= i < self._n):
                raise GraphError("Edge ({}, {}) outside node range [0, {})".format(j, i, self._n))
            if j != i:
                clean.add((j, i))
        self._edges = frozenset(clean)

        in_lists = [[] for _ in range(self._n)]
        out_lists = [[] for _ in range(self._n)]
        for j, i in sorted(self._edges):
            out_lists[j].append(i)
            in_lists[i].append(j)
        self._in = tuple(tuple(sorted(nbrs)) for nbrs in in_lists)
        self._out = tuple(tuple(sorted(nbrs)) for nbrs in out_lists)

    @property
    def n(self):
        return self._n

    @property
    def edges(self):
        return self._edges

    def in_neighbors(self, i):
        """Nodes j with an edge (j, i)."""
        return self._in[i]

    def out_neighbors(self, j):
        """Nodes i with an edge (j, i)."""
        return self._out[j]

    def in_degree(self, i):
        return len(self._in[i])

    def out_degree(self, j):
        return len(self._out[j])

    def reverse(self):
        """Return the graph with every edge direction flipped."""
        return DirectedGraph(self._n, ((i, j) for j, i in self._edges))

    def is_symmetric(self):
        """True when every edge (j, i) has its reverse (i, j)."""
        return all((i, j) in self._edges for j, i in self._edges)

    def is_strongly_connected(self):
        return nx.is_strongly_connected(self.to_networkx())

    def to_networkx(self):
        """Return a networkx.DiGraph with all n nodes present."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self._n))
        graph.add_edges_from(self._edges)
        return graph

    @classmethod
    def from_matrix(cls, A, tol=0.0):
        """Build the induced graph of a weight matrix.

        A[i, j] > tol with i != j yields the edge (j, i): node i receives
        from node j.

        Args:
            A (array_like): Square nonnegative matrix
            tol (float): Entries at or below tol are treated as zero

        Returns:
            DirectedGraph: Induced graph
        """
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionError("Weight matrix must be square", actual=A.shape)
        rows, cols = np.nonzero(A > tol)
        return cls(A.shape[0], ((j, i) for i, j in zip(rows.tolist(), cols.tolist())))

    # Edge-list text format: first line n, then one "j i" pair per line

    def to_edge_list(self):
        """Serialize to the edge-list text format."""
        lines = [str(self._n)]
        lines.extend("{} {}".format(j, i) for j, i in sorted(self._edges))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text):
        """Parse the edge-list text format.

        Raises:
            GraphError: If the text is malformed
        """
        lines = [line.strip() for line in text.splitlines()]
        lines = [line for line in lines if line and not line.startswith('#')]
        if not lines:
            raise GraphError("Empty edge list")
        try:
            n = int(lines[0])
            edges = []
            for number, line in enumerate(lines[1:], start=2):
                parts = line.split()
                if len(parts) != 2:
                    raise GraphError("Malformed edge on line {}: '{}'".format(number, line))
                edges.append((int(parts[0]), int(parts[1])))
        except ValueError as e:
            raise GraphError("Malformed edge list: {}".format(e))
        return cls(n, edges)

    def save_to_file(self, file_path):
        with open(file_path, 'w') as f:
            f.write(self.to_edge_list())
        logger.debug("Saved graph with {} edges to {}".format(len(self._edges), file_path))

    @classmethod
    def load_from_file(cls, file_path):
        with open(file_path, 'r') as f:
            return cls.from_edge_list(f.read())

    def __len__(self):
        return len(self._edges)

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return "DirectedGraph(n={}, edges={})".format(self._n, len(self._edges))


def gen_ring(n, bidirectional=False):
    """Directed cycle i -> (i+1) mod n, optionally with reverse edges.

    Args:
        n (int): Node count, n >= 1
        bidirectional (bool): Add the reverse of every edge

    Returns:
        DirectedGraph: The ring

    Raises:
        InvalidSizeError: If n < 1
    """
    if n < 1:
        raise InvalidSizeError(n, "a ring needs at least one node")
    edges = set()
    for i in range(n):
        j = (i + 1) % n
        edges.add((i, j))
        if bidirectional:
            edges.add((j, i))
    return DirectedGraph(n, edges)


def gen_erdos_renyi(n, p, rng, max_attempts=DEFAULT_MAX_ATTEMPTS):
    """Sample directed Erdos-Renyi graphs until one is strongly connected.

    Each ordered pair (j, i), j != i, is included independently with
    probability p.

    Args:
        n (int): Node count
        p (float): Edge probability in (0, 1]
        rng (numpy.random.Generator): Seeded stream
        max_attempts (int): Maximum number of samples

    Returns:
        DirectedGraph: A strongly connected sample

    Raises:
        InvalidSizeError: If n < 1
        GraphError: If p is outside (0, 1]
        GenerationFailureError: If no sample is strongly connected
    """
    if n < 1:
        raise InvalidSizeError(n, "need n >= 1")
    if not 0.0 < p <= 1.0:
        raise GraphError("Edge probability must be in (0, 1], got {}".format(p))

    off_diagonal = ~np.eye(n, dtype=bool)
    for attempt in range(1, max_attempts + 1):
        # mask[j, i] decides the edge (j, i)
        mask = (rng.random((n, n)) < p) & off_diagonal
        if n > 1 and not (mask.any(axis=0).all() and mask.any(axis=1).all()):
            # A node without in- or out-edges cannot be strongly connected
            continue
        senders, receivers = np.nonzero(mask)
        graph = DirectedGraph(n, zip(senders.tolist(), receivers.tolist()))
        if graph.is_strongly_connected():
            logger.debug("Erdos-Renyi graph (n={}, p={}) connected after {} attempt(s)".format(
                n, p, attempt))
            return graph
    logger.error("Erdos-Renyi generation exhausted {} attempts".format(max_attempts))
    raise GenerationFailureError('gen_erdos_renyi', max_attempts)


def gen_multi_subring(n, k):
    """k directed sub-rings sharing hub node 0.

    Nodes 1..n-1 are split into k consecutive groups whose sizes differ by at
    most one; each group forms the ring 0 -> g[0] -> ... -> g[-1] -> 0.

    Args:
        n (int): Node count
        k (int): Number of sub-rings, 1 <= k < n

    Returns:
        DirectedGraph: Strongly connected multi-sub-ring graph

    Raises:
        InvalidSizeError: If k < 1 or n <= k
    """
    if k < 1:
        raise InvalidSizeError(n, "need at least one sub-ring, got k={}".format(k))
    if n <= k:
        raise InvalidSizeError(n, "need n >= k + 1 for k={} sub-rings".format(k))

    edges = set()
    for group in np.array_split(np.arange(1, n), k):
        cycle = [0] + group.tolist()
        for position, node in enumerate(cycle):
            edges.add((node, cycle[(position + 1) % len(cycle)]))
    return DirectedGraph(n, edges)


def gen_spanning_tree_pair(n, rng):
    """Random spanning tree rooted at 0, as a (pull, push) graph pair.

    The pull graph points parent -> child so children pull from parents. The
    push graph is its reverse (child -> parent), so G_{Cᵀ} is the same tree
    and both share root 0.

    Args:
        n (int): Node count
        rng (numpy.random.Generator): Seeded stream

    Returns:
        tuple: (pull DirectedGraph, push DirectedGraph)
    """
    if n < 1:
        raise InvalidSizeError(n, "need n >= 1")
    attached = [0]
    edges = []
    for child in (rng.permutation(n - 1) + 1).tolist():
        parent = attached[int(rng.integers(len(attached)))]
        edges.append((parent, child))
        attached.append(child)
    pull = DirectedGraph(n, edges)
    return pull, pull.reverse()


def root_set(g):
    """Nodes from which every node of g is reachable.

    The roots are the members of the unique source component of the
    condensation; with more than one source component there are none.

    Args:
        g (DirectedGraph): Graph to analyse

    Returns:
        RootSet: The roots, possibly empty
    """
    condensed = nx.condensation(g.to_networkx())
    sources = [c for c in condensed.nodes if condensed.in_degree(c) == 0]
    if len(sources) != 1:
        return RootSet()
    return RootSet(condensed.nodes[sources[0]]['members'])


def common_roots(g_pull, g_push):
    """Roots shared by the pull graph and the reversed push graph.

    The common-root condition holds iff the result is nonempty.

    Raises:
        DimensionError: If the graphs have different node counts
    """
    if g_pull.n != g_push.n:
        raise DimensionError("Pull and push graphs differ in size", expected=g_pull.n, actual=g_push.n)
    return RootSet(root_set(g_pull) & root_set(g_push.reverse()))
