"""Minimum spanning trees and optimal path queries.

Paths are ranked by their descending sorted weight vectors: the path whose
vector is lexicographically smaller wins, and on an equal common prefix the
shorter path wins.  Weight ties are broken by edge id, which makes the edge
order total, the MST unique, and Kruskal and Prim bit-for-bit comparable.
Under this order the optimal path between any two vertices is the unique path
on the MST, and its cost (largest edge weight) is the minimax bottleneck.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels as K
from .disorder import WeightedEdgeGraph
from .lattice import _csr

LESS, EQUAL, GREATER = -1, 0, 1

_BRUTE_FORCE_LIMIT = 20


@dataclass(eq=False)
class SpanningTree:
    """Spanning tree with rooted parent/depth arrays for path queries."""

    edges: np.ndarray                 # (E, 2) of the parent graph
    w_edge: np.ndarray                # (E,) of the parent graph
    edge_ids: np.ndarray              # (V-1,) tree edges
    in_tree: np.ndarray               # (E,) bool
    parent: np.ndarray                # (V,)
    parent_edge: np.ndarray           # (V,)
    depth: np.ndarray                 # (V,)
    total_weight: float
    growth_order: Optional[np.ndarray] = None

    @property
    def n_vertices(self) -> int:
        return self.parent.shape[0]


@dataclass(eq=False)
class LatticePath:
    """A simple path: vertex sequence, edge sequence, and sorted weights."""

    vertices: np.ndarray              # (L+1,) or (1,) for the empty path
    edge_ids: np.ndarray              # (L,)
    weights: Optional[np.ndarray]     # (L,) edge weights in path order

    @property
    def length(self) -> int:
        return self.edge_ids.shape[0]

    @cached_property
    def sorted_weights(self) -> np.ndarray:
        """Edge weights in non-increasing order."""
        return self._sort_key[0]

    @cached_property
    def _sort_key(self):
        if self.weights is None:
            raise ValueError("path carries no weights")
        order = np.lexsort((-self.edge_ids, -self.weights))
        return self.weights[order], self.edge_ids[order]

    def cost(self) -> float:
        return path_cost(self)


def _make_path(verts, eids, w_edge) -> LatticePath:
    eids = np.asarray(eids, dtype=np.int64)
    weights = None if w_edge is None else w_edge[eids]
    return LatticePath(vertices=np.asarray(verts, dtype=np.int64),
                       edge_ids=eids, weights=weights)


def edge_order(graph: WeightedEdgeGraph) -> np.ndarray:
    """Edges sorted ascending by (weight, edge id)."""
    return np.argsort(graph.w_edge, kind="stable")


def kruskal(graph: WeightedEdgeGraph) -> SpanningTree:
    """The unique MST under the tie-broken edge order."""
    order = edge_order(graph)
    mask, added = K.kruskal_select(order, graph.edges[:, 0], graph.edges[:, 1],
                                   graph.n_vertices)
    if added != graph.n_vertices - 1:
        raise ValueError("graph is disconnected; no spanning tree exists")
    return _tree_from_mask(graph, mask, growth_order=None)


def prim(graph: WeightedEdgeGraph, root: int = 0) -> SpanningTree:
    """Prim growth from `root`; same edge set as kruskal, growth order kept."""
    if not 0 <= root < graph.n_vertices:
        raise ValueError(f"invalid root vertex {root}")
    indptr, adj_v, adj_e = _csr(graph.edges[:, 0], graph.edges[:, 1],
                                np.arange(graph.w_edge.shape[0]),
                                graph.n_vertices)
    mask, growth, added = K.prim_select(indptr, adj_v, adj_e, graph.w_edge,
                                        graph.edges[:, 0], graph.edges[:, 1],
                                        root, graph.n_vertices)
    if added != graph.n_vertices - 1:
        raise ValueError("graph is disconnected; no spanning tree exists")
    return _tree_from_mask(graph, mask, growth_order=growth)


def _tree_from_mask(graph, mask, growth_order) -> SpanningTree:
    eids = np.nonzero(mask)[0]
    indptr, adj_v, adj_e = _csr(graph.edges[eids, 0], graph.edges[eids, 1],
                                eids, graph.n_vertices)
    parent, parent_edge, depth, reached = K.bfs_tree(indptr, adj_v, adj_e,
                                                     mask, 0,
                                                     graph.n_vertices)
    if reached != graph.n_vertices:
        raise ValueError("graph is disconnected; no spanning tree exists")
    return SpanningTree(edges=graph.edges, w_edge=graph.w_edge,
                        edge_ids=eids, in_tree=mask, parent=parent,
                        parent_edge=parent_edge, depth=depth,
                        total_weight=float(graph.w_edge[eids].sum()),
                        growth_order=growth_order)


def compare_paths(g1: LatticePath, g2: LatticePath) -> int:
    """LESS / EQUAL / GREATER under the sorted-weight-vector order.

    Entries are compared as (weight, edge id) pairs so the order is total;
    on an equal common prefix the shorter path is smaller.
    """
    w1, e1 = g1._sort_key
    w2, e2 = g2._sort_key
    n = min(w1.shape[0], w2.shape[0])
    for k in range(n):
        if w1[k] != w2[k]:
            return LESS if w1[k] < w2[k] else GREATER
        if e1[k] != e2[k]:
            return LESS if e1[k] < e2[k] else GREATER
    if w1.shape[0] == w2.shape[0]:
        return EQUAL
    return LESS if w1.shape[0] < w2.shape[0] else GREATER


def tree_path(tree: SpanningTree, i: int, j: int) -> LatticePath:
    """The unique path on the tree between i and j (empty when i == j)."""
    if i == j:
        return _make_path([i], [], tree.w_edge)
    verts, eids = K.tree_path_arrays(tree.parent, tree.parent_edge,
                                     tree.depth, i, j)
    return _make_path(verts, eids, tree.w_edge)


def path_cost(g: LatticePath) -> float:
    """Largest edge weight on the path (the bottleneck value)."""
    if g.length == 0:
        raise ValueError("cost of an empty path is undefined")
    return float(g.sorted_weights[0])


def brute_force_optimal_path(graph: WeightedEdgeGraph, i: int,
                             j: int) -> LatticePath:
    """Minimum over all simple i-j paths by exhaustive enumeration.

    Independent oracle; guarded to small instances.
    """
    best = brute_force_all_targets(graph, i).get(j)
    if best is None:
        raise ValueError(f"no path from {i} to {j}")
    return best


def brute_force_all_targets(graph: WeightedEdgeGraph, i: int) -> dict:
    """Optimal simple paths from i to every reachable vertex, by DFS."""
    n = graph.n_vertices
    if n > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"instance too large for brute force "
                         f"({n} > {_BRUTE_FORCE_LIMIT} vertices)")
    adj = [[] for _ in range(n)]
    for e, (u, v) in enumerate(graph.edges):
        adj[u].append((int(v), e))
        adj[v].append((int(u), e))

    best: dict[int, LatticePath] = {}
    verts = [i]
    eids: list[int] = []
    on_path = np.zeros(n, dtype=bool)
    on_path[i] = True
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * n + 100))

    def visit(v):
        cand = _make_path(list(verts), list(eids), graph.w_edge)
        if v not in best or compare_paths(cand, best[v]) == LESS:
            best[v] = cand
        for (u, e) in adj[v]:
            if on_path[u]:
                continue
            on_path[u] = True
            verts.append(u)
            eids.append(e)
            visit(u)
            eids.pop()
            verts.pop()
            on_path[u] = False

    visit(i)
    sys.setrecursionlimit(limit)
    return best


def connected(tree: SpanningTree, graph: WeightedEdgeGraph, i: int,
              j: int) -> bool:
    """True when the optimal i-j path has strictly negative cost.

    The empty path (i == j) counts as connected (cost convention -inf).
    Cross-checked against union-find over the strictly negative edges; the
    two characterizations must agree.
    """
    if i == j:
        return True
    by_path = path_cost(tree_path(tree, i, j)) < 0.0
    neg = np.nonzero(graph.w_edge < 0.0)[0]
    labels = K.component_labels(neg, graph.edges[:, 0], graph.edges[:, 1],
                                graph.n_vertices)
    by_cluster = labels[i] == labels[j]
    if by_path != by_cluster:
        raise RuntimeError("negative-edge clusters disagree with path costs; "
                           "tree or weights are corrupted")
    return by_path


def optimal_crossing_path(tree: SpanningTree, bottom: Sequence[int],
                          top: Sequence[int]) -> LatticePath:
    """Minimum over tree paths from any bottom vertex to any top vertex.

    Recursive bottleneck decomposition: insert tree edges in ascending order
    until the two sets first connect.  Every optimal path crosses that edge,
    and the two halves are independent subproblems of the same shape (the
    order is additive in the large-beta exponential representation).
    """
    bottom = np.asarray(list(bottom), dtype=np.int64)
    top = np.asarray(list(top), dtype=np.int64)
    if bottom.size == 0 or top.size == 0:
        raise ValueError("crossing sets must be non-empty")
    if np.intersect1d(bottom, top).size:
        raise ValueError("crossing sets must be disjoint")

    n = tree.n_vertices
    eu = tree.edges[:, 0]
    ev = tree.edges[:, 1]
    tree_sorted = tree.edge_ids[np.argsort(tree.w_edge[tree.edge_ids],
                                           kind="stable")]

    def solve(eids, s_flag, t_flag):
        k = K.first_connect(eids, eu, ev, s_flag, t_flag, n)
        if k == -2:
            v = int(np.nonzero(s_flag & t_flag)[0][0])
            return [v], []
        if k == -1:
            raise ValueError("crossing sets are not connected by the tree")
        e = int(eids[k])
        labels = K.component_labels(eids[:k], eu, ev, n)
        u, v = int(eu[e]), int(ev[e])
        if (s_flag & (labels == labels[u])).any():
            pu, pv = u, v
        else:
            pu, pv = v, u
        comp_u = labels == labels[pu]
        comp_v = labels == labels[pv]
        sub_u = eids[:k][comp_u[eu[eids[:k]]]]
        sub_v = eids[:k][comp_v[eu[eids[:k]]]]
        lv, le = solve(sub_u, s_flag & comp_u, _single(n, pu))
        rv, re = solve(sub_v, _single(n, pv), t_flag & comp_v)
        assert lv[-1] == pu and rv[0] == pv
        return lv + rv, le + [e] + re

    s_flag = np.zeros(n, dtype=np.bool_)
    t_flag = np.zeros(n, dtype=np.bool_)
    s_flag[bottom] = True
    t_flag[top] = True
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        verts, eids = solve(tree_sorted, s_flag, t_flag)
    finally:
        sys.setrecursionlimit(limit)
    return _make_path(verts, eids, tree.w_edge)


def _single(n, v):
    flag = np.zeros(n, dtype=np.bool_)
    flag[v] = True
    return flag


def f_beta_order_check(g1: LatticePath, g2: LatticePath,
                       beta_max: float) -> bool:
    """Verify the exponential cost sum reproduces the path order.

    For g1 < g2 there must be a beta with sum(exp(beta * w)) smaller for g1,
    and the inequality must persist on a geometric beta grid up to beta_max.
    Sums are compared in log space; float-equal logs count as non-violations
    (at very large beta both sums collapse onto the common prefix).
    """
    if compare_paths(g1, g2) != LESS:
        raise ValueError("f_beta_order_check expects g1 < g2")
    w1 = g1.sorted_weights
    w2 = g2.sorted_weights

    def log_f(w, beta):
        a = beta * w
        m = a.max()
        return m + np.log(np.exp(a - m).sum())

    betas = []
    beta = 1.0
    while beta <= beta_max:
        betas.append(beta)
        beta *= 2.0
    found = None
    for k, beta in enumerate(betas):
        l1, l2 = log_f(w1, beta), log_f(w2, beta)
        if found is None and l1 < l2:
            found = k
        if found is not None and l1 > l2:
            return False
    return found is not None


def cut_property_check(graph: WeightedEdgeGraph, tree: SpanningTree,
                       subset: Iterable[int]) -> bool:
    """True when the lightest edge crossing (subset, complement) is in the tree."""
    inside = np.zeros(graph.n_vertices, dtype=bool)
    inside[np.asarray(list(subset), dtype=np.int64)] = True
    if not inside.any() or inside.all():
        raise ValueError("subset must be proper and non-empty")
    crossing = inside[graph.edges[:, 0]] != inside[graph.edges[:, 1]]
    ids = np.nonzero(crossing)[0]
    if ids.size == 0:
        raise ValueError("no crossing edges; graph is disconnected")
    best = ids[np.lexsort((ids, graph.w_edge[ids]))[0]]
    return bool(tree.in_tree[best])
