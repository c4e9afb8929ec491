"""Critical site percolation on the lattice faces and its exploration path.

Faces are colored occupied/empty by thresholding their disorder weights.
Under honeycomb sle_like boundary conditions (one boundary arc occupied, the
other empty) the occupied/empty interface contains a unique simple edge path
from the s transition vertex to the t transition vertex.  Because the marker
transition vertices of the honeycomb are degree-2 mid-edge vertices, every
vertex touches at most two interface edges and the walk from s is forced at
every step, ending at t.  This path is constructed from the coloring alone
and serves as the independent oracle for the MST path between s and t.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disorder import DisorderInstance
from .lattice import ARC_LEFT, ARC_RIGHT, HONEYCOMB, PlanarLattice
from .spanning import LatticePath


@dataclass(eq=False)
class FaceColoring:
    """Per-face occupation flags: True where omega exceeds the threshold."""

    lattice: PlanarLattice
    color: np.ndarray        # (F_int + P,) bool


def color_faces(instance: DisorderInstance) -> FaceColoring:
    """Threshold the face weights of one instance."""
    return FaceColoring(lattice=instance.lattice,
                        color=instance.omega > instance.theta)


def exploration_path(coloring: FaceColoring,
                     lattice: PlanarLattice) -> LatticePath:
    """The interface walk from the s marker to the t marker.

    Every step of the returned path separates an occupied face from an empty
    face, with the occupied side fixed by the color of the left boundary arc.
    The path carries no weights; index the inducing graph's weights with
    ``path.edge_ids`` where costs are needed.
    """
    if lattice.kind != HONEYCOMB:
        raise ValueError("exploration path is defined on the honeycomb "
                         f"lattice only, got {lattice.kind!r}")
    color = coloring.color
    left = color[lattice.ghost_ids(ARC_LEFT)]
    right = color[lattice.ghost_ids(ARC_RIGHT)]
    if not (left.size and right.size and
            (left == left[0]).all() and (right == right[0]).all()
            and left[0] != right[0]):
        raise ValueError("boundary coloring incompatible with a start at s: "
                         "each arc must be uniformly colored, arcs opposite")

    ef = lattice.edge_faces
    interface = color[ef[:, 0]] != color[ef[:, 1]]

    def step_from(v, used_edge):
        hits = [int(e) for e in lattice.incident_edges(v)
                if interface[e] and e != used_edge]
        return hits

    v_s, v_t = lattice.s_vertex, lattice.t_vertex
    start = step_from(v_s, -1)
    if len(start) != 1:
        raise RuntimeError(f"expected a unique interface edge at s, "
                           f"found {len(start)}")
    verts = [v_s]
    eids = []
    cur, prev_edge = v_s, -1
    for _ in range(lattice.n_edges + 1):
        if cur == v_t and eids:
            break
        hits = step_from(cur, prev_edge)
        if len(hits) != 1:
            raise RuntimeError(f"interface walk stuck at vertex {cur} "
                               f"with {len(hits)} continuations")
        e = hits[0]
        u, v = lattice.edges[e]
        cur = int(v if u == cur else u)
        verts.append(cur)
        eids.append(e)
        prev_edge = e
    else:
        raise RuntimeError("interface walk failed to terminate")

    path = LatticePath(vertices=np.asarray(verts, dtype=np.int64),
                       edge_ids=np.asarray(eids, dtype=np.int64),
                       weights=None)
    _check_orientation(path, lattice, color, occupied_left=bool(left[0]))
    return path


def _check_orientation(path, lattice, color, occupied_left):
    """The occupied faces must sit on one fixed side of the walk."""
    for k in range(path.length):
        u, v = int(path.vertices[k]), int(path.vertices[k + 1])
        lf = lattice.left_face(u, v)
        rf = lattice.left_face(v, u)
        if color[lf] == color[rf]:
            raise RuntimeError("exploration step does not separate colors")
        if color[lf] != occupied_left:
            raise RuntimeError("exploration step has the occupied face on "
                               "the wrong side")
