"""Plaquette disorder ensembles and the induced edge weights.

Interior face weights are i.i.d. uniform on [0, 1).  Ghost face weights
depend on the boundary condition:

* ``free``       -- ghosts drawn from the bulk law,
* ``sle_like``   -- left-arc ghosts above the threshold, right-arc below,
* ``sle_free``   -- right-side ghosts above, left-side below, top and bottom
                    from the bulk law,
* ``repulsive``  -- all ghosts above the threshold.

Each edge then receives the weight ``(omega(f1) - theta) * (omega(f2) - theta)``
of its two adjacent faces, which is negative exactly on the percolation color
boundary at threshold theta.  The ``random`` model bypasses faces entirely and
draws i.i.d. edge weights.

Sampling is keyed by a counter-based generator (Philox) so that a sample is a
pure function of its seed, independent of scheduling.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lattice import (ARC_LEFT, ARC_RIGHT, SIDE_BOTTOM, SIDE_LEFT, SIDE_RIGHT,
                      SIDE_TOP, HONEYCOMB, SQUARE, PlanarLattice)

BC_FREE = "free"
BC_SLE_LIKE = "sle_like"
BC_SLE_FREE = "sle_free"
BC_REPULSIVE = "repulsive"
BOUNDARY_CONDITIONS = (BC_FREE, BC_SLE_LIKE, BC_SLE_FREE, BC_REPULSIVE)

PROV_INDUCED = "induced"
PROV_RANDOM = "random_model"

THETA_CRITICAL = {HONEYCOMB: 0.5, SQUARE: 0.5927463}

ORIENT_LEFT_HIGH = "left_high"
ORIENT_RIGHT_HIGH = "right_high"


@dataclass(eq=False)
class DisorderInstance:
    """One disorder sample: per-face weights, threshold and boundary tag."""

    lattice: PlanarLattice
    omega: np.ndarray            # (F_int + P,) in [0, 1)
    theta: float
    bc: str
    seed: int
    orientation: str = ORIENT_LEFT_HIGH


@dataclass(eq=False)
class WeightedEdgeGraph:
    """Edge-weighted graph, either face-induced or the random edge model."""

    edges: np.ndarray            # (E, 2) int64, u < v
    n_vertices: int
    w_edge: np.ndarray           # (E,) float64
    provenance: str
    lattice: Optional[PlanarLattice] = None


def derive_key(master_seed: int, cell_id: str, sample_index: int) -> int:
    """128-bit Philox key from (master seed, cell id, sample index).

    The mixing function is SHA-256 over the canonical string
    ``"{master_seed}:{cell_id}:{sample_index}"``, truncated to 128 bits.
    """
    text = f"{master_seed}:{cell_id}:{sample_index}".encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:16], "big")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed % (1 << 128)))


def sample_instance(lattice: PlanarLattice, bc: str, theta: float, seed: int,
                    orientation: str = ORIENT_LEFT_HIGH) -> DisorderInstance:
    """Draw one disorder instance; identical arguments reproduce it bit-for-bit."""
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if bc not in BOUNDARY_CONDITIONS:
        raise ValueError(f"unknown boundary condition {bc!r}; "
                         f"expected one of {BOUNDARY_CONDITIONS}")
    if orientation not in (ORIENT_LEFT_HIGH, ORIENT_RIGHT_HIGH):
        raise ValueError(f"unknown orientation {orientation!r}")

    u = _rng(seed).random(lattice.n_faces_total)
    omega = u.copy()
    f0 = lattice.n_interior_faces
    gpos = np.arange(lattice.n_ghosts)

    def constrain(mask, high):
        ids = f0 + gpos[mask]
        if high:
            w = theta + (1.0 - theta) * u[ids]
            w[w == theta] = np.nextafter(theta, 1.0)   # keep strictly above
        else:
            w = theta * u[ids]
        omega[ids] = w

    high_arc = ARC_LEFT if orientation == ORIENT_LEFT_HIGH else ARC_RIGHT
    low_arc = ARC_RIGHT if high_arc == ARC_LEFT else ARC_LEFT
    if bc == BC_SLE_LIKE:
        constrain(lattice.ghost_arc == high_arc, high=True)
        constrain(lattice.ghost_arc == low_arc, high=False)
    elif bc == BC_SLE_FREE:
        high_side = SIDE_RIGHT if orientation == ORIENT_LEFT_HIGH else SIDE_LEFT
        low_side = SIDE_LEFT if high_side == SIDE_RIGHT else SIDE_RIGHT
        constrain(lattice.ghost_side == high_side, high=True)
        constrain(lattice.ghost_side == low_side, high=False)
    elif bc == BC_REPULSIVE:
        constrain(np.ones(lattice.n_ghosts, dtype=bool), high=True)

    return DisorderInstance(lattice=lattice, omega=omega, theta=theta,
                            bc=bc, seed=seed, orientation=orientation)


def induce_edge_weights(instance: DisorderInstance) -> WeightedEdgeGraph:
    """Edge weights (omega(f1) - theta) * (omega(f2) - theta) for every edge."""
    lat = instance.lattice
    dev = instance.omega - instance.theta
    w = dev[lat.edge_faces[:, 0]] * dev[lat.edge_faces[:, 1]]
    return WeightedEdgeGraph(edges=lat.edges, n_vertices=lat.n_vertices,
                             w_edge=w, provenance=PROV_INDUCED, lattice=lat)


def sample_random_edge_weights(lattice: PlanarLattice,
                               seed: int) -> WeightedEdgeGraph:
    """The random model: i.i.d. uniform edge weights, faces ignored."""
    w = _rng(seed).random(lattice.n_edges)
    return WeightedEdgeGraph(edges=lattice.edges, n_vertices=lattice.n_vertices,
                             w_edge=w, provenance=PROV_RANDOM, lattice=lattice)
