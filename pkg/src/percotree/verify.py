"""Fast built-in verification suite behind ``percotree verify``.

Each check prints one PASS/FAIL line.  These are quick spot checks of the
central equivalences; the full test suite lives in tests/.
"""
from __future__ import annotations

import numpy as np

from .disorder import (BOUNDARY_CONDITIONS, BC_SLE_LIKE, derive_key,
                       induce_edge_weights, sample_instance,
                       sample_random_edge_weights)
from .lattice import HONEYCOMB, SQUARE, build_lattice, euler_characteristic
from .observables import gauss_2f1_negz, schramm_lpp
from .percolation import color_faces, exploration_path
from .spanning import (LESS, brute_force_all_targets, compare_paths, kruskal,
                       prim, tree_path)


def run_all(emit=print) -> bool:
    checks = [
        ("lattice euler characteristic", _check_euler),
        ("kruskal equals prim", _check_kruskal_prim),
        ("tree paths equal brute force", _check_brute),
        ("exploration path equals tree path", _check_exploration),
        ("left-passage kernel identities", _check_kernel),
    ]
    ok = True
    for name, fn in checks:
        try:
            fn()
            emit(f"PASS {name}")
        except Exception as exc:
            ok = False
            emit(f"FAIL {name}: {exc}")
    return ok


def _check_euler():
    for kind in (SQUARE, HONEYCOMB):
        for a in (2, 4, 6):
            for b in (2, 3, 5):
                lat = build_lattice(kind, a, b)
                if euler_characteristic(lat) != 2:
                    raise AssertionError(f"{kind} {a}x{b}")


def _check_kruskal_prim():
    for kind in (SQUARE, HONEYCOMB):
        lat = build_lattice(kind, 8, 8)
        for i, bc in enumerate(BOUNDARY_CONDITIONS):
            inst = sample_instance(lat, bc, 0.55, derive_key(1, f"v{i}", 0))
            graph = induce_edge_weights(inst)
            t1, t2 = kruskal(graph), prim(graph, root=3)
            if not np.array_equal(t1.edge_ids, t2.edge_ids):
                raise AssertionError(f"{kind} {bc}")
        graph = sample_random_edge_weights(lat, derive_key(1, "vr", 0))
        if not np.array_equal(kruskal(graph).edge_ids,
                              prim(graph).edge_ids):
            raise AssertionError(f"{kind} random")


def _check_brute():
    lat = build_lattice(SQUARE, 2, 2)
    for s in range(5):
        graph = sample_random_edge_weights(lat, derive_key(2, "b", s))
        tree = kruskal(graph)
        for i in range(lat.n_vertices):
            best = brute_force_all_targets(graph, i)
            for j in range(lat.n_vertices):
                if compare_paths(tree_path(tree, i, j), best[j]) != 0:
                    raise AssertionError(f"seed {s} pair ({i},{j})")


def _check_exploration():
    lat = build_lattice(HONEYCOMB, 16, 16)
    for s in range(10):
        inst = sample_instance(lat, BC_SLE_LIKE, 0.5, derive_key(3, "e", s))
        graph = induce_edge_weights(inst)
        walk = exploration_path(color_faces(inst), lat)
        mst = tree_path(kruskal(graph), lat.s_vertex, lat.t_vertex)
        if not np.array_equal(np.sort(walk.edge_ids), np.sort(mst.edge_ids)):
            raise AssertionError(f"seed {s}")
        if graph.w_edge[walk.edge_ids].max() >= 0:
            raise AssertionError(f"seed {s}: non-negative interface edge")


def _check_kernel():
    for kappa in (2.0, 4.0, 6.0):
        if abs(schramm_lpp(0.0, kappa) - 0.5) > 1e-12:
            raise AssertionError("P(0) != 1/2")
    ts = np.linspace(-1.4, 1.4, 29)
    s = schramm_lpp(ts, 6.0) + schramm_lpp(-ts, 6.0)
    if np.abs(s - 1.0).max() > 1e-12:
        raise AssertionError("symmetry broken")
    closed = 0.5 + ts / np.pi
    if np.abs(schramm_lpp(ts, 4.0) - closed).max() > 1e-10:
        raise AssertionError("kappa=4 closed form")
    u = np.array([0.3, 1.0, 2.5])
    if np.abs(gauss_2f1_negz(1.0, u * u)
              - np.arctan(u) / u).max() > 1e-12:
        raise AssertionError("arctan identity")
    if np.abs(gauss_2f1_negz(0.5, u * u)
              - np.arcsinh(u) / u).max() > 1e-12:
        raise AssertionError("asinh identity")
