"""Planar square and honeycomb lattices on a rectangle.

Both tilings consist of ``a_cells x b_cells`` plaquettes.  Geometry is stored
in continuous units: the rectangle spans ``[0, a_cells] x [0, b_cells * pitch]``
where the pitch is 1 for the square tiling and sqrt(3)/2 for the honeycomb.
The honeycomb is drawn in its brick-wall embedding (two vertical edges per
hexagon, odd rows shifted right by half a cell), which keeps every vertex at
degree <= 3 and all interior faces hexagonal.

Every perimeter edge is backed by one ghost face placed just outside the
rectangle, so every edge of the graph separates exactly two faces.  The ghost
faces form a single counterclockwise cycle around the domain.  Two marker
edges, s on the bottom and t on the top, split that cycle into a left arc and
a right arc; boundary constraints attach to the arcs.  The marker transition
vertices (``s_vertex``, ``t_vertex``) are the shared endpoints of a marker
edge and its counterclockwise successor.  On the honeycomb the markers are
chosen so the transition vertex is a degree-2 mid-edge vertex of a single
brick, which makes the percolation interface at the transition unambiguous.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

SQUARE = "square"
HONEYCOMB = "honeycomb"
KINDS = (SQUARE, HONEYCOMB)

HONEYCOMB_PITCH = float(np.sqrt(3.0) / 2.0)

# ghost side labels
SIDE_BOTTOM, SIDE_RIGHT, SIDE_TOP, SIDE_LEFT = 0, 1, 2, 3
# boundary arc labels
ARC_LEFT, ARC_RIGHT = 0, 1


@dataclass(eq=False)
class PlanarLattice:
    """Immutable planar tiling with ghost boundary faces and s/t markers.

    Interior faces carry ids ``0 .. n_interior_faces-1``; ghost faces continue
    from ``n_interior_faces`` in counterclockwise boundary order.
    ``edge_faces[e] = (left, right)`` relative to the canonical direction
    ``u -> v`` with ``u < v``.
    """

    kind: str
    a_cells: int
    b_cells: int
    pitch: float
    vertex_pos: np.ndarray            # (V, 2) float64
    edges: np.ndarray                 # (E, 2) int64, u < v
    face_cycles: List[np.ndarray]     # interior faces, ccw vertex cycles
    face_centroid: np.ndarray         # (F_int + P, 2), ghost centroids appended
    n_interior_faces: int
    edge_faces: np.ndarray            # (E, 2) face ids
    boundary_edges: np.ndarray        # (P,) perimeter edge ids, ccw cycle
    boundary_faces: np.ndarray        # (P,) ghost face ids, parallel
    boundary_verts: np.ndarray        # (P,) shared vertex of bedges[i], bedges[i+1]
    ghost_side: np.ndarray            # (P,) SIDE_* labels
    ghost_arc: np.ndarray             # (P,) ARC_* labels
    s_pos: int                        # cycle position of the s marker edge
    t_pos: int
    adj_indptr: np.ndarray            # vertex adjacency CSR
    adj_vertex: np.ndarray
    adj_edge: np.ndarray
    face_adj_indptr: np.ndarray       # interior face adjacency CSR
    face_adj_face: np.ndarray
    face_adj_edge: np.ndarray
    bottom_vertices: np.ndarray
    top_vertices: np.ndarray
    boundary_pos: Dict[int, int] = field(repr=False, default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return self.vertex_pos.shape[0]

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def n_ghosts(self) -> int:
        return self.boundary_edges.shape[0]

    @property
    def n_faces_total(self) -> int:
        return self.n_interior_faces + self.n_ghosts

    @property
    def width(self) -> float:
        return float(self.a_cells)

    @property
    def height(self) -> float:
        return float(self.b_cells) * self.pitch

    @property
    def s_marker(self) -> int:
        return int(self.boundary_edges[self.s_pos])

    @property
    def t_marker(self) -> int:
        return int(self.boundary_edges[self.t_pos])

    @property
    def s_vertex(self) -> int:
        return int(self.boundary_verts[self.s_pos])

    @property
    def t_vertex(self) -> int:
        return int(self.boundary_verts[self.t_pos])

    def ghost_ids(self, arc: int) -> np.ndarray:
        """Ghost face ids on one arc (ARC_LEFT or ARC_RIGHT)."""
        return self.boundary_faces[self.ghost_arc == arc]

    def incident_edges(self, v: int) -> np.ndarray:
        return self.adj_edge[self.adj_indptr[v]:self.adj_indptr[v + 1]]

    def left_face(self, u: int, v: int) -> int:
        """Face on the left of the directed edge u -> v."""
        e = self._edge_lookup[(min(u, v), max(u, v))]
        return int(self.edge_faces[e, 0] if u < v else self.edge_faces[e, 1])

    def __post_init__(self) -> None:
        self._edge_lookup = {
            (int(u), int(v)): i for i, (u, v) in enumerate(self.edges)
        }


def build_lattice(kind: str, a_cells: int, b_cells: int) -> PlanarLattice:
    """Construct a lattice of the given kind covering a_cells x b_cells plaquettes.

    ``a_cells`` must be even so the s and t markers sit at well-defined
    midpoints of the bottom and top sides.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown lattice kind {kind!r}; expected one of {KINDS}")
    if a_cells < 2 or b_cells < 2:
        raise ValueError(
            f"lattice size too small: need a_cells >= 2 and b_cells >= 2, "
            f"got {a_cells} x {b_cells}"
        )
    if a_cells % 2 != 0:
        raise ValueError(
            f"odd width rejected: a_cells must be even so the s/t markers sit "
            f"at the bottom/top midpoints, got a_cells={a_cells}"
        )
    if kind == SQUARE:
        pos, edges, cycles, centroids, s_xy, t_xy = _square_geometry(a_cells, b_cells)
        pitch = 1.0
    else:
        pos, edges, cycles, centroids, s_xy, t_xy = _honeycomb_geometry(a_cells, b_cells)
        pitch = HONEYCOMB_PITCH
    return _finalize(kind, a_cells, b_cells, pitch, pos, edges, cycles,
                     centroids, s_xy, t_xy)


def _square_geometry(a: int, b: int):
    def vid(i, j):
        return j * (a + 1) + i

    pos = np.empty(((a + 1) * (b + 1), 2))
    for j in range(b + 1):
        for i in range(a + 1):
            pos[vid(i, j)] = (float(i), float(j))

    edges = []
    for j in range(b + 1):
        for i in range(a):
            edges.append((vid(i, j), vid(i + 1, j)))
    for j in range(b):
        for i in range(a + 1):
            edges.append((vid(i, j), vid(i, j + 1)))

    cycles, centroids = [], []
    for j in range(b):
        for i in range(a):
            cycles.append(np.array(
                [vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)],
                dtype=np.int64))
            centroids.append((i + 0.5, j + 0.5))

    s_xy = (a / 2.0, 0.0)
    t_xy = (a / 2.0, float(b))
    return pos, edges, cycles, np.asarray(centroids), s_xy, t_xy


def _honeycomb_geometry(a: int, b: int):
    """Brick-wall honeycomb: row r holds a bricks of width 1, shifted by
    (r % 2) / 2; each brick boundary has six vertices (corners plus the
    midpoints of its top and bottom sides)."""
    h = HONEYCOMB_PITCH
    d = [r % 2 for r in range(b)]          # row offsets in half-cells

    lo = [0] * (b + 1)
    hi = [0] * (b + 1)
    lo[0], hi[0] = 0, 2 * a
    for line in range(1, b):
        lo[line], hi[line] = 0, 2 * a + 1
    lo[b], hi[b] = d[b - 1], 2 * a + d[b - 1]

    starts = [0] * (b + 2)
    for line in range(b + 1):
        starts[line + 1] = starts[line] + (hi[line] - lo[line] + 1)

    def vid(line, m):
        return starts[line] + (m - lo[line])

    pos = np.empty((starts[b + 1], 2))
    for line in range(b + 1):
        for m in range(lo[line], hi[line] + 1):
            pos[vid(line, m)] = (m / 2.0, line * h)

    edges = []
    for line in range(b + 1):
        for m in range(lo[line], hi[line]):
            edges.append((vid(line, m), vid(line, m + 1)))
    for r in range(b):
        for c in range(a + 1):
            m = 2 * c + d[r]
            edges.append((vid(r, m), vid(r + 1, m)))

    cycles, centroids = [], []
    for r in range(b):
        for c in range(a):
            m0 = 2 * c + d[r]
            cycles.append(np.array(
                [vid(r, m0), vid(r, m0 + 1), vid(r, m0 + 2),
                 vid(r + 1, m0 + 2), vid(r + 1, m0 + 1), vid(r + 1, m0)],
                dtype=np.int64))
            centroids.append((c + d[r] / 2.0 + 0.5, (r + 0.5) * h))

    # markers: transition vertices are brick mid-vertices nearest x = a/2,
    # ties broken toward smaller x (bottom row has offset 0, so the s vertex
    # sits at a/2 - 1/2; the t vertex lands exactly at a/2 when b is even).
    c_star = a // 2 - 1
    s_xy = (c_star + 0.5, 0.0)
    dt = d[b - 1]
    t_xy = (c_star + dt / 2.0 + 0.5, b * h)
    return pos, edges, cycles, np.asarray(centroids), s_xy, t_xy


def _finalize(kind, a, b, pitch, pos, edge_list, cycles, centroids, s_xy, t_xy):
    edges = np.asarray(
        [(u, v) if u < v else (v, u) for (u, v) in edge_list], dtype=np.int64)
    n_edges = edges.shape[0]
    n_vertices = pos.shape[0]
    n_int = len(cycles)
    edge_id = {(int(u), int(v)): i for i, (u, v) in enumerate(edges)}

    # register faces on the left of each directed boundary pair
    edge_faces = np.full((n_edges, 2), -1, dtype=np.int64)
    for f, cyc in enumerate(cycles):
        k = len(cyc)
        for s in range(k):
            p, q = int(cyc[s]), int(cyc[(s + 1) % k])
            e = edge_id[(min(p, q), max(p, q))]
            slot = 0 if p < q else 1
            if edge_faces[e, slot] != -1:
                raise RuntimeError("face registration conflict; bad tiling")
            edge_faces[e, slot] = f

    missing = edge_faces == -1
    perim_mask = missing.any(axis=1)
    if (missing.sum(axis=1) > 1).any():
        raise RuntimeError("edge with no adjacent face; bad tiling")

    # counterclockwise perimeter walk: direct each perimeter edge so its
    # interior face is on the left
    next_hop = {}
    for e in np.nonzero(perim_mask)[0]:
        u, v = int(edges[e, 0]), int(edges[e, 1])
        p, q = (u, v) if edge_faces[e, 0] >= 0 else (v, u)
        if p in next_hop:
            raise RuntimeError("boundary walk is not a simple cycle")
        next_hop[p] = (q, int(e))

    start = min(next_hop, key=lambda w: (pos[w, 1], pos[w, 0]))
    bedges, bverts = [], []
    cur = start
    while True:
        nxt, e = next_hop[cur]
        bedges.append(e)
        bverts.append(nxt)
        cur = nxt
        if cur == start:
            break
    if len(bedges) != int(perim_mask.sum()):
        raise RuntimeError("perimeter edges do not form a single cycle")
    bedges = np.asarray(bedges, dtype=np.int64)
    bverts = np.asarray(bverts, dtype=np.int64)
    n_ghosts = bedges.shape[0]

    # ghost faces, centroids pushed outward from the edge midpoint
    ghost_centroids = np.empty((n_ghosts, 2))
    height = b * pitch
    for i, e in enumerate(bedges):
        u, v = edges[e]
        ghost = n_int + i
        if edge_faces[e, 0] >= 0:
            p, q = pos[u], pos[v]          # interior on left of u -> v
            edge_faces[e, 1] = ghost
        else:
            p, q = pos[v], pos[u]
            edge_faces[e, 0] = ghost
        mid = 0.5 * (p + q)
        dvec = q - p
        normal = np.array([dvec[1], -dvec[0]])   # right of the ccw direction
        normal /= np.hypot(*normal)
        ghost_centroids[i] = mid + normal * (pitch / 2.0)

    face_centroid = np.vstack([np.asarray(centroids), ghost_centroids])

    # marker positions in the boundary cycle
    def find_vertex(xy):
        hit = np.nonzero(np.isclose(pos[:, 0], xy[0]) & np.isclose(pos[:, 1], xy[1]))[0]
        if hit.size != 1:
            raise RuntimeError(f"marker vertex lookup failed at {xy}")
        return int(hit[0])

    s_vertex = find_vertex(s_xy)
    t_vertex = find_vertex(t_xy)
    s_pos = int(np.nonzero(bverts == s_vertex)[0][0])
    t_pos = int(np.nonzero(bverts == t_vertex)[0][0])

    # arcs: right arc is traversed ccw from the s transition vertex to the t
    # transition vertex, i.e. cycle positions s_pos+1 .. t_pos inclusive
    ghost_arc = np.full(n_ghosts, ARC_LEFT, dtype=np.uint8)
    span = (t_pos - s_pos) % n_ghosts
    idx = (np.arange(n_ghosts) - s_pos) % n_ghosts
    ghost_arc[(idx >= 1) & (idx <= span)] = ARC_RIGHT

    # side classification by edge midpoint
    ghost_side = np.empty(n_ghosts, dtype=np.uint8)
    for i, e in enumerate(bedges):
        u, v = edges[e]
        mx, my = 0.5 * (pos[u] + pos[v])
        if np.isclose(my, 0.0):
            ghost_side[i] = SIDE_BOTTOM
        elif np.isclose(my, height):
            ghost_side[i] = SIDE_TOP
        elif mx < a / 2.0:
            ghost_side[i] = SIDE_LEFT
        else:
            ghost_side[i] = SIDE_RIGHT

    adj_indptr, adj_vertex, adj_edge = _csr(edges[:, 0], edges[:, 1],
                                            np.arange(n_edges), n_vertices)

    interior = (edge_faces[:, 0] < n_int) & (edge_faces[:, 1] < n_int)
    ie = np.nonzero(interior)[0]
    face_adj_indptr, face_adj_face, face_adj_edge = _csr(
        edge_faces[ie, 0], edge_faces[ie, 1], ie, n_int)

    bottom_vertices = np.nonzero(np.isclose(pos[:, 1], 0.0))[0].astype(np.int64)
    top_vertices = np.nonzero(np.isclose(pos[:, 1], height))[0].astype(np.int64)

    lat = PlanarLattice(
        kind=kind, a_cells=a, b_cells=b, pitch=pitch,
        vertex_pos=pos, edges=edges, face_cycles=cycles,
        face_centroid=face_centroid, n_interior_faces=n_int,
        edge_faces=edge_faces, boundary_edges=bedges,
        boundary_faces=np.arange(n_int, n_int + n_ghosts, dtype=np.int64),
        boundary_verts=bverts, ghost_side=ghost_side, ghost_arc=ghost_arc,
        s_pos=s_pos, t_pos=t_pos,
        adj_indptr=adj_indptr, adj_vertex=adj_vertex, adj_edge=adj_edge,
        face_adj_indptr=face_adj_indptr, face_adj_face=face_adj_face,
        face_adj_edge=face_adj_edge,
        bottom_vertices=bottom_vertices, top_vertices=top_vertices,
        boundary_pos={int(v): i for i, v in enumerate(bverts)},
    )
    return lat


def _csr(left, right, labels, n):
    """Symmetric CSR over n nodes from (left[i], right[i]) pairs carrying labels."""
    ends = np.concatenate([left, right]).astype(np.int64)
    other = np.concatenate([right, left]).astype(np.int64)
    lab = np.concatenate([labels, labels]).astype(np.int64)
    order = np.argsort(ends, kind="stable")
    counts = np.bincount(ends, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, other[order], lab[order]


def boundary_arcs(lattice: PlanarLattice):
    """Split the ghost cycle into the two arcs delimited by the s/t markers.

    Returns ``(arc_a, arc_b)`` as arrays of ghost face ids: ``arc_a`` is the
    arc traversed counterclockwise from s to t (the right side of the domain),
    ``arc_b`` is its complement (the left side).
    """
    if lattice.s_pos == lattice.t_pos:
        raise ValueError("s and t markers coincide")
    arc_a = lattice.ghost_ids(ARC_RIGHT)
    arc_b = lattice.ghost_ids(ARC_LEFT)
    return arc_a, arc_b


def euler_characteristic(lattice: PlanarLattice) -> int:
    """V - E + F with the ghost faces merged into the single outer face."""
    return (lattice.n_vertices - lattice.n_edges
            + lattice.n_interior_faces + 1)
