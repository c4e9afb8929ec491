"""Numba kernels for the hot loops: union-find, tree building, walks, floods."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def kruskal_select(order, eu, ev, n_vertices):
    """Edge mask of the minimum spanning forest, edges taken in `order`."""
    parent = np.arange(n_vertices, dtype=np.int64)
    mask = np.zeros(eu.shape[0], dtype=np.bool_)
    added = 0
    for k in range(order.shape[0]):
        e = order[k]
        ru = _find(parent, eu[e])
        rv = _find(parent, ev[e])
        if ru != rv:
            parent[rv] = ru
            mask[e] = True
            added += 1
            if added == n_vertices - 1:
                break
    return mask, added


@njit(cache=True)
def prim_select(indptr, adj_v, adj_e, w, eu, ev, root, n_vertices):
    """Prim growth from `root`; returns (edge mask, growth order, count).

    The frontier heap orders edges by (weight, edge id), matching the total
    order used by Kruskal, so the selected edge set is the unique MST.
    """
    n_edges = w.shape[0]
    heap_w = np.empty(2 * n_edges + 1, dtype=np.float64)
    heap_e = np.empty(2 * n_edges + 1, dtype=np.int64)
    size = 0
    visited = np.zeros(n_vertices, dtype=np.bool_)
    mask = np.zeros(n_edges, dtype=np.bool_)
    growth = np.empty(n_vertices - 1, dtype=np.int64)
    added = 0

    visited[root] = True
    for k in range(indptr[root], indptr[root + 1]):
        e = adj_e[k]
        size = _heap_push(heap_w, heap_e, size, w[e], e)

    while size > 0 and added < n_vertices - 1:
        we, e, size = _heap_pop(heap_w, heap_e, size)
        u, v = eu[e], ev[e]
        if visited[u] and visited[v]:
            continue
        fresh = v if visited[u] else u
        visited[fresh] = True
        mask[e] = True
        growth[added] = e
        added += 1
        for k in range(indptr[fresh], indptr[fresh + 1]):
            e2 = adj_e[k]
            if not visited[adj_v[k]]:
                size = _heap_push(heap_w, heap_e, size, w[e2], e2)
    return mask, growth, added


@njit(cache=True)
def _heap_push(hw, he, size, w, e):
    i = size
    hw[i] = w
    he[i] = e
    while i > 0:
        p = (i - 1) // 2
        if hw[p] < hw[i] or (hw[p] == hw[i] and he[p] < he[i]):
            break
        hw[p], hw[i] = hw[i], hw[p]
        he[p], he[i] = he[i], he[p]
        i = p
    return size + 1


@njit(cache=True)
def _heap_pop(hw, he, size):
    w0, e0 = hw[0], he[0]
    size -= 1
    hw[0], he[0] = hw[size], he[size]
    i = 0
    while True:
        l, r = 2 * i + 1, 2 * i + 2
        m = i
        if l < size and (hw[l] < hw[m] or (hw[l] == hw[m] and he[l] < he[m])):
            m = l
        if r < size and (hw[r] < hw[m] or (hw[r] == hw[m] and he[r] < he[m])):
            m = r
        if m == i:
            break
        hw[m], hw[i] = hw[i], hw[m]
        he[m], he[i] = he[i], he[m]
        i = m
    return w0, e0, size


@njit(cache=True)
def bfs_tree(indptr, adj_v, adj_e, in_tree, root, n_vertices):
    """Parent/depth arrays of the tree rooted at `root` (tree edges only)."""
    parent = np.full(n_vertices, -1, dtype=np.int64)
    parent_edge = np.full(n_vertices, -1, dtype=np.int64)
    depth = np.zeros(n_vertices, dtype=np.int64)
    queue = np.empty(n_vertices, dtype=np.int64)
    queue[0] = root
    parent[root] = root
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(indptr[u], indptr[u + 1]):
            e = adj_e[k]
            if not in_tree[e]:
                continue
            v = adj_v[k]
            if parent[v] == -1:
                parent[v] = u
                parent_edge[v] = e
                depth[v] = depth[u] + 1
                queue[tail] = v
                tail += 1
    parent[root] = -1
    return parent, parent_edge, depth, tail


@njit(cache=True)
def tree_path_arrays(parent, parent_edge, depth, i, j):
    """Vertex and edge sequences of the unique tree path from i to j."""
    na = 0
    nb = 0
    a = i
    b = j
    while depth[a] > depth[b]:
        a = parent[a]
        na += 1
    while depth[b] > depth[a]:
        b = parent[b]
        nb += 1
    while a != b:
        a = parent[a]
        b = parent[b]
        na += 1
        nb += 1
    total = na + nb
    verts = np.empty(total + 1, dtype=np.int64)
    eids = np.empty(total, dtype=np.int64)
    a = i
    for k in range(na):
        verts[k] = a
        eids[k] = parent_edge[a]
        a = parent[a]
    verts[na] = a
    b = j
    for k in range(nb):
        verts[total - k] = b
        eids[total - 1 - k] = parent_edge[b]
        b = parent[b]
    return verts, eids


@njit(cache=True)
def flood_components(n_faces, indptr, adj_f, adj_e, wall):
    """Label connected components of the face graph, walls blocking edges."""
    labels = np.full(n_faces, -1, dtype=np.int64)
    stack = np.empty(n_faces, dtype=np.int64)
    ncomp = 0
    for seed in range(n_faces):
        if labels[seed] != -1:
            continue
        labels[seed] = ncomp
        stack[0] = seed
        top = 1
        while top > 0:
            top -= 1
            f = stack[top]
            for k in range(indptr[f], indptr[f + 1]):
                if wall[adj_e[k]]:
                    continue
                g = adj_f[k]
                if labels[g] == -1:
                    labels[g] = ncomp
                    stack[top] = g
                    top += 1
        ncomp += 1
    return labels, ncomp


@njit(cache=True)
def component_labels(eids, eu, ev, n_vertices):
    """Union-find labels after inserting the given edges."""
    parent = np.arange(n_vertices, dtype=np.int64)
    for k in range(eids.shape[0]):
        e = eids[k]
        ru = _find(parent, eu[e])
        rv = _find(parent, ev[e])
        if ru != rv:
            parent[rv] = ru
    labels = np.empty(n_vertices, dtype=np.int64)
    for v in range(n_vertices):
        labels[v] = _find(parent, v)
    return labels


@njit(cache=True)
def first_connect(eids, eu, ev, s_flag, t_flag, n_vertices):
    """Position in `eids` of the first edge whose union joins an s-flagged
    component with a t-flagged one; -1 if they never connect."""
    parent = np.arange(n_vertices, dtype=np.int64)
    has_s = s_flag.copy()
    has_t = t_flag.copy()
    for v in range(n_vertices):
        if has_s[v] and has_t[v]:
            return -2
    for k in range(eids.shape[0]):
        e = eids[k]
        ru = _find(parent, eu[e])
        rv = _find(parent, ev[e])
        if ru == rv:
            continue
        if (has_s[ru] or has_s[rv]) and (has_t[ru] or has_t[rv]):
            return k
        parent[rv] = ru
        has_s[ru] = has_s[ru] or has_s[rv]
        has_t[ru] = has_t[ru] or has_t[rv]
    return -1


@njit(cache=True)
def winding_parity(px, py, poly_x, poly_y):
    """Even-odd crossing parity of the point against a closed polygon."""
    n = poly_x.shape[0]
    inside = False
    for k in range(n):
        x1, y1 = poly_x[k], poly_y[k]
        x2, y2 = poly_x[(k + 1) % n], poly_y[(k + 1) % n]
        if (y1 > py) != (y2 > py):
            xc = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if xc > px:
                inside = not inside
    return inside


@njit(cache=True)
def crossing_best(sorted_eids, eu, ev, bottom_flag, top_flag,
                  parent, parent_edge, depth, n_vertices):
    """Optimal bottom-to-top path on a tree under the sorted-vector order.

    Builds the ascending merge dendrogram of the tree edges.  The connector
    at the first merge joining a bottom-flagged component with a top-flagged
    one is the path's largest edge; the remaining edges follow by walking up
    from each connector endpoint to the first ancestor whose sibling subtree
    carries the wanted flag, the in-between pieces being plain tree paths.
    Returns (vertices, edge ids) oriented bottom -> top.
    """
    nv = n_vertices
    n_nodes = 2 * nv
    node_parent = np.full(n_nodes, -1, dtype=np.int64)
    child0 = np.full(n_nodes, -1, dtype=np.int64)
    child1 = np.full(n_nodes, -1, dtype=np.int64)
    node_edge = np.full(n_nodes, -1, dtype=np.int64)
    has_b = np.zeros(n_nodes, dtype=np.bool_)
    has_t = np.zeros(n_nodes, dtype=np.bool_)
    has_b[:nv] = bottom_flag
    has_t[:nv] = top_flag

    uf = np.arange(nv, dtype=np.int64)
    comp_node = np.arange(nv, dtype=np.int64)
    nxt = nv
    first_both = -1
    for k in range(sorted_eids.shape[0]):
        e = sorted_eids[k]
        ru = _find(uf, eu[e])
        rv = _find(uf, ev[e])
        c0 = comp_node[ru]
        c1 = comp_node[rv]
        node_parent[c0] = nxt
        node_parent[c1] = nxt
        child0[nxt] = c0            # side of eu[e]
        child1[nxt] = c1
        node_edge[nxt] = e
        has_b[nxt] = has_b[c0] or has_b[c1]
        has_t[nxt] = has_t[c0] or has_t[c1]
        uf[rv] = ru
        comp_node[ru] = nxt
        if has_b[nxt] and has_t[nxt]:
            first_both = nxt
            break
        nxt += 1
    if first_both == -1:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))

    e_star = node_edge[first_both]
    if has_b[child0[first_both]]:
        anchor_b, anchor_t = eu[e_star], ev[e_star]
    else:
        anchor_b, anchor_t = ev[e_star], eu[e_star]

    lv, le = _best_to_flag(anchor_b, has_b, bottom_flag, node_parent,
                           child0, child1, node_edge, eu, ev,
                           parent, parent_edge, depth, nv)
    rv_, re_ = _best_to_flag(anchor_t, has_t, top_flag, node_parent,
                             child0, child1, node_edge, eu, ev,
                             parent, parent_edge, depth, nv)

    total_e = le.shape[0] + 1 + re_.shape[0]
    verts = np.empty(total_e + 1, dtype=np.int64)
    eids = np.empty(total_e, dtype=np.int64)
    nl = lv.shape[0]
    verts[:nl] = lv
    eids[:nl - 1] = le
    eids[nl - 1] = e_star
    for i in range(rv_.shape[0]):
        verts[nl + i] = rv_[rv_.shape[0] - 1 - i]
    for i in range(re_.shape[0]):
        eids[nl + i] = re_[re_.shape[0] - 1 - i]
    return verts, eids


@njit(cache=True)
def _best_to_flag(anchor, node_flag, leaf_flag, node_parent, child0, child1,
                  node_edge, eu, ev, parent, parent_edge, depth, nv):
    """Best path from a flagged vertex to `anchor`, returned source->anchor."""
    conn = np.empty(nv, dtype=np.int64)        # connector edges, outer first
    seg_off = np.empty(nv + 1, dtype=np.int64)
    seg_v = np.empty(2 * nv, dtype=np.int64)   # tree-path pieces, q -> anchor
    seg_e = np.empty(2 * nv, dtype=np.int64)
    n_pieces = 0
    seg_off[0] = 0
    vtop = 0

    cur = anchor
    while not leaf_flag[cur]:
        node = cur
        while True:
            par = node_parent[node]
            if par == -1:
                raise ValueError("flagged vertex unreachable inside subtree")
            sib = child1[par] if child0[par] == node else child0[par]
            if node_flag[sib]:
                break
            node = par
        e = node_edge[par]
        if child0[par] == sib:
            p, q = eu[e], ev[e]
        else:
            p, q = ev[e], eu[e]
        pv, pe = tree_path_arrays(parent, parent_edge, depth, q, cur)
        conn[n_pieces] = e
        for i in range(pv.shape[0]):
            seg_v[vtop + i] = pv[i]
        for i in range(pe.shape[0]):
            seg_e[vtop - n_pieces + i] = pe[i]
        vtop += pv.shape[0]
        n_pieces += 1
        seg_off[n_pieces] = vtop
        cur = p

    # assemble from the flagged source back out to the anchor
    n_edges = vtop - n_pieces + n_pieces      # segment edges + connectors
    verts = np.empty(n_edges + 1, dtype=np.int64)
    eids = np.empty(n_edges, dtype=np.int64)
    verts[0] = cur
    wv = 1
    we = 0
    for piece in range(n_pieces - 1, -1, -1):
        eids[we] = conn[piece]
        we += 1
        lo, hi = seg_off[piece], seg_off[piece + 1]
        for i in range(lo, hi):
            verts[wv] = seg_v[i]
            wv += 1
        for i in range(lo - piece, hi - piece - 1):
            eids[we] = seg_e[i]
            we += 1
    return verts[:wv], eids[:we]
