"""Experiment orchestration: configs, seeding, parallel sampling, output.

Configuration documents are UTF-8 ``key = value`` lines ('#' starts a
comment).  Recognized keys:

    lattice     square | honeycomb                        (required)
    bc          free | sle_like | sle_free | repulsive | random   (required)
    sizes       comma list of widths (a_cells), ascending (default: 32)
    aspects     comma list of geometric height/width ratios, or 'cells'
                for an equal number of plaquette rows (default: cells)
    theta       threshold in (0, 1) (default: critical value of the lattice)
    selector    stot | crossing (default: stot)
    samples     samples per grid cell, >= 1 (default: 100)
    seed        master seed, integer (default: 0)
    observables comma list from: lengths, left_passage, displacement,
                triple_point (default: lengths)
    fit_window  angle window for the kappa fit (default: 1.3)
    out         output directory (default: percotree_out)
    workers     process count (default: 1)

Every sample is keyed by SHA-256(master seed, cell id, sample index), so a
run is a pure function of (config, seed): summaries are byte-identical
regardless of the worker count.  Outputs are one RFC-4180 CSV of per-sample
records per grid cell plus a single JSON summary with stable key order.
"""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import observables as obs
from .disorder import (BOUNDARY_CONDITIONS, THETA_CRITICAL, derive_key,
                       induce_edge_weights, sample_instance,
                       sample_random_edge_weights)
from .lattice import HONEYCOMB, KINDS, SQUARE, PlanarLattice, build_lattice
from .observables import (SELECTOR_CROSSING, SELECTOR_STOT, SELECTORS,
                          LeftPassageField, accumulate_left_passage,
                          displacement_scaling, fit_kappa, fractal_dimension,
                          horizontal_displacement, make_left_passage_field,
                          make_triple_histogram, rotation_symmetry_statistic,
                          triple_point)
from .conformal import make_disk_map, rect_to_disk_equilateral
from .spanning import kruskal, optimal_crossing_path, path_cost, tree_path

SCHEMA_VERSION = 1
BC_RANDOM = "random"
ALL_BC = BOUNDARY_CONDITIONS + (BC_RANDOM,)
OBSERVABLES = ("lengths", "left_passage", "displacement", "triple_point")
ASPECT_CELLS = "cells"
_CHUNK = 200     # fixed work unit so results never depend on the worker count


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    lattice: str
    bc: str
    sizes: List[int]
    aspects: List[object] = dc_field(default_factory=lambda: [ASPECT_CELLS])
    theta: Optional[float] = None
    selector: str = SELECTOR_STOT
    samples: int = 100
    seed: int = 0
    observables: Tuple[str, ...] = ("lengths",)
    fit_window: float = obs.DEFAULT_FIT_WINDOW
    out: str = "percotree_out"
    workers: int = 1

    def theta_value(self) -> float:
        if self.theta is not None:
            return self.theta
        return THETA_CRITICAL[self.lattice]


@dataclass
class SampleRecord:
    """One sample's scalar results; reproducible from (config, index)."""

    index: int
    seed: int
    length: int
    cost: float
    x_start: float
    y_start: float
    x_end: float
    y_end: float
    dx_norm: Optional[float] = None
    triple_re: Optional[float] = None
    triple_im: Optional[float] = None


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a key-value config document."""
    raw: Dict[str, str] = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {ln}: expected 'key = value', got {body!r}")
        key, value = (part.strip() for part in body.split("=", 1))
        if key in raw:
            raise ConfigError(f"line {ln}: duplicate key {key!r}")
        raw[key] = value

    valid = {"lattice", "bc", "sizes", "aspects", "theta", "selector",
             "samples", "seed", "observables", "fit_window", "out", "workers"}
    for key in raw:
        if key not in valid:
            raise ConfigError(f"unknown key {key!r}; valid keys: "
                              f"{', '.join(sorted(valid))}")
    for req in ("lattice", "bc"):
        if req not in raw:
            raise ConfigError(f"missing required key {req!r}")

    lattice = raw["lattice"].lower()
    if lattice not in KINDS:
        raise ConfigError(f"lattice must be one of {KINDS}, got {lattice!r}")
    bc = raw["bc"].lower()
    if bc not in ALL_BC:
        raise ConfigError(f"bc must be one of {ALL_BC}, got {bc!r}")

    def parse_int(key, default, minimum):
        if key not in raw:
            return default
        try:
            v = int(raw[key])
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw[key]!r}")
        if v < minimum:
            raise ConfigError(f"{key} must be >= {minimum}, got {v}")
        return v

    sizes = [32]
    if "sizes" in raw:
        try:
            sizes = [int(s) for s in raw["sizes"].split(",") if s.strip()]
        except ValueError:
            raise ConfigError(f"sizes must be integers, got {raw['sizes']!r}")
        if not sizes:
            raise ConfigError("sizes must not be empty")
        if sizes != sorted(sizes):
            raise ConfigError("sizes must be ascending")
        if any(s < 2 or s % 2 for s in sizes):
            raise ConfigError("every size must be an even integer >= 2")

    aspects: List[object] = [ASPECT_CELLS]
    if "aspects" in raw:
        aspects = []
        for tok in raw["aspects"].split(","):
            tok = tok.strip()
            if not tok:
                continue
            if tok == ASPECT_CELLS:
                aspects.append(ASPECT_CELLS)
                continue
            try:
                v = float(tok)
            except ValueError:
                raise ConfigError(f"aspects must be numbers or 'cells', "
                                  f"got {tok!r}")
            if v <= 0:
                raise ConfigError(f"aspect ratios must be positive, got {v}")
            aspects.append(v)
        if not aspects:
            raise ConfigError("aspects must not be empty")

    theta = None
    if "theta" in raw:
        try:
            theta = float(raw["theta"])
        except ValueError:
            raise ConfigError(f"theta must be a number, got {raw['theta']!r}")
        if not 0.0 < theta < 1.0:
            raise ConfigError(f"theta must lie in (0, 1), got {theta}")

    selector = raw.get("selector", SELECTOR_STOT).lower()
    if selector not in SELECTORS:
        raise ConfigError(f"selector must be one of {SELECTORS}, "
                          f"got {selector!r}")

    observables = ("lengths",)
    if "observables" in raw:
        toks = tuple(t.strip() for t in raw["observables"].split(",")
                     if t.strip())
        for t in toks:
            if t not in OBSERVABLES:
                raise ConfigError(f"unknown observable {t!r}; valid: "
                                  f"{', '.join(OBSERVABLES)}")
        observables = toks or observables

    fit_window = obs.DEFAULT_FIT_WINDOW
    if "fit_window" in raw:
        try:
            fit_window = float(raw["fit_window"])
        except ValueError:
            raise ConfigError("fit_window must be a number")
        if not 0.1 <= fit_window < math.pi / 2:
            raise ConfigError("fit_window must lie in [0.1, pi/2)")

    return ExperimentConfig(
        lattice=lattice, bc=bc, sizes=sizes, aspects=aspects, theta=theta,
        selector=selector,
        samples=parse_int("samples", 100, 1),
        seed=parse_int("seed", 0, -(1 << 62)),
        observables=observables, fit_window=fit_window,
        out=raw.get("out", "percotree_out"),
        workers=parse_int("workers", 1, 1))


def cells_of(config: ExperimentConfig):
    """The (size, aspect) grid with derived row counts and cell ids."""
    out = []
    for size in config.sizes:
        for aspect in config.aspects:
            if aspect == ASPECT_CELLS:
                b_cells = size
            else:
                pitch = 1.0 if config.lattice == SQUARE else \
                    float(np.sqrt(3.0) / 2.0)
                b_cells = max(2, round(aspect * size / pitch))
            cell_id = (f"{config.lattice}_{config.bc}_{config.selector}"
                       f"_a{size}_b{b_cells}")
            out.append((size, b_cells, cell_id))
    return out


# ---------------------------------------------------------------------------
# sampling

_WORKER_CACHE: Dict[str, object] = {}


def _cell_context(config: ExperimentConfig, a_cells: int, b_cells: int):
    """Build (and cache, per process) the immutable per-cell structures."""
    key = (config.lattice, a_cells, b_cells, config.selector,
           "left_passage" in config.observables,
           "triple_point" in config.observables)
    ctx = _WORKER_CACHE.get(key)
    if ctx is None:
        lattice = build_lattice(config.lattice, a_cells, b_cells)
        fieldacc = None
        if "left_passage" in config.observables:
            fieldacc = make_left_passage_field(lattice, config.selector)
        disk_map = None
        corners = None
        if "triple_point" in config.observables:
            disk_map = make_disk_map(lattice.width, lattice.height)
            corners = _corner_vertices(lattice)
        ctx = (lattice, fieldacc, disk_map, corners)
        _WORKER_CACHE[key] = ctx
    return ctx


def _corner_vertices(lattice: PlanarLattice):
    pos = lattice.vertex_pos
    targets = [(0.0, 0.0), (0.0, lattice.height), (lattice.width, 0.0)]
    out = []
    for tx, ty in targets:
        d2 = (pos[:, 0] - tx) ** 2 + (pos[:, 1] - ty) ** 2
        out.append(int(np.argmin(d2)))
    return tuple(out)


def _run_chunk(config: ExperimentConfig, a_cells: int, b_cells: int,
               cell_id: str, start: int, stop: int):
    lattice, proto_field, disk_map, corners = _cell_context(
        config, a_cells, b_cells)
    fieldacc = None
    if proto_field is not None:
        fieldacc = make_left_passage_field(lattice, config.selector)
    records: List[SampleRecord] = []
    theta = config.theta_value()
    aspect = lattice.height / lattice.width

    for index in range(start, stop):
        seed = derive_key(config.seed, cell_id, index)
        if config.bc == BC_RANDOM:
            graph = sample_random_edge_weights(lattice, seed)
        else:
            inst = sample_instance(lattice, config.bc, theta, seed)
            graph = induce_edge_weights(inst)
        tree = kruskal(graph)
        if config.selector == SELECTOR_STOT:
            path = tree_path(tree, lattice.s_vertex, lattice.t_vertex)
        else:
            path = optimal_crossing_path(tree, lattice.bottom_vertices,
                                         lattice.top_vertices)
        x0, y0 = lattice.vertex_pos[path.vertices[0]]
        x1, y1 = lattice.vertex_pos[path.vertices[-1]]
        rec = SampleRecord(index=index, seed=seed, length=path.length,
                           cost=path_cost(path),
                           x_start=float(x0), y_start=float(y0),
                           x_end=float(x1), y_end=float(y1))
        if config.selector == SELECTOR_CROSSING and \
                "displacement" in config.observables:
            rec.dx_norm = horizontal_displacement(path, lattice)
        if fieldacc is not None:
            accumulate_left_passage(path, lattice, fieldacc)
        if corners is not None:
            tp = triple_point(tree, *corners)
            x, y = lattice.vertex_pos[tp]
            w = rect_to_disk_equilateral(complex(x, y), disk_map)
            rec.triple_re, rec.triple_im = float(w.real), float(w.imag)
        records.append(rec)
    return records, fieldacc, aspect


def _run_cell(config: ExperimentConfig, a_cells: int, b_cells: int,
              cell_id: str, pool: Optional[ProcessPoolExecutor]):
    chunks = [(config, a_cells, b_cells, cell_id, lo,
               min(lo + _CHUNK, config.samples))
              for lo in range(0, config.samples, _CHUNK)]
    if pool is None:
        results = [_run_chunk(*c) for c in chunks]
    else:
        results = list(pool.map(_chunk_star, chunks))

    records: List[SampleRecord] = []
    fieldacc: Optional[LeftPassageField] = None
    aspect = None
    for recs, fld, asp in results:
        records.extend(recs)
        aspect = asp
        if fld is not None:
            if fieldacc is None:
                fieldacc = fld
            else:
                fieldacc.merge(fld)
    records.sort(key=lambda r: r.index)
    return records, fieldacc, aspect


def _chunk_star(args):
    return _run_chunk(*args)


# ---------------------------------------------------------------------------
# experiment driver

def run_experiment(config: ExperimentConfig) -> Dict[str, str]:
    """Run the full grid; returns the paths of the files written."""
    os.makedirs(config.out, exist_ok=True)
    pool = None
    if config.workers > 1:
        pool = ProcessPoolExecutor(max_workers=config.workers)
    try:
        summary: Dict[str, object] = {
            "schema_version": SCHEMA_VERSION,
            "config": {
                "lattice": config.lattice, "bc": config.bc,
                "sizes": config.sizes,
                "aspects": [str(a) for a in config.aspects],
                "theta": config.theta_value(), "selector": config.selector,
                "samples": config.samples, "seed": config.seed,
                "observables": list(config.observables),
                "fit_window": config.fit_window,
            },
            "cells": [],
        }
        paths: Dict[str, str] = {}
        per_size_lengths: Dict[int, float] = {}
        disp_records: List[Tuple[float, float]] = []

        for size, b_cells, cell_id in cells_of(config):
            records, fieldacc, aspect = _run_cell(config, size, b_cells,
                                                  cell_id, pool)
            csv_path = os.path.join(config.out, f"{cell_id}.csv")
            _write_records(csv_path, records)
            paths[cell_id] = csv_path

            mean_len = sum(r.length for r in records) / len(records)
            cell_summary: Dict[str, object] = {
                "cell_id": cell_id, "a_cells": size, "b_cells": b_cells,
                "aspect": aspect, "n_samples": len(records),
                "mean_length": mean_len,
                "mean_cost": _ordered_mean([r.cost for r in records]),
            }
            per_size_lengths.setdefault(size, mean_len)

            dxs = [r.dx_norm for r in records if r.dx_norm is not None]
            if dxs:
                dx2 = [d * d for d in dxs]
                cell_summary["mean_dx2"] = _ordered_mean(dx2)
                disp_records.extend((aspect, v) for v in dx2)

            if fieldacc is not None:
                try:
                    fit = fit_kappa(fieldacc, window=config.fit_window)
                    cell_summary["kappa_fit"] = {
                        "kappa_hat": fit.kappa_hat, "stderr": fit.stderr,
                        "residual": fit.residual,
                        "noise_floor": fit.noise_floor,
                        "verdict": fit.verdict, "n_probes": fit.n_probes,
                    }
                except ValueError as exc:
                    cell_summary["kappa_fit"] = {
                        "verdict": "insufficient_statistics",
                        "detail": str(exc),
                    }
            if "triple_point" in config.observables:
                pts = [complex(r.triple_re, r.triple_im) for r in records
                       if r.triple_re is not None]
                if len(pts) >= 1000:
                    hist = make_triple_histogram(pts)
                    rot = rotation_symmetry_statistic(hist)
                    cell_summary["rotation_test"] = {
                        "statistic": rot.statistic, "p_value": rot.p_value,
                        "n_points": rot.n_points,
                    }
            summary["cells"].append(cell_summary)

        if len(per_size_lengths) >= 3:
            fit = fractal_dimension(sorted(per_size_lengths.items()))
            summary["fractal_dimension"] = {
                "slope": fit.slope, "stderr": fit.stderr,
                "sizes": list(fit.sizes), "mean_lengths": list(fit.means),
            }
        if disp_records:
            try:
                disp = displacement_scaling(disp_records)
                summary["displacement"] = {
                    "exponent": disp.exponent.slope,
                    "exponent_stderr": disp.exponent.stderr,
                    "plateau_mean": disp.plateau_mean,
                    "plateau_stderr": disp.plateau_stderr,
                }
            except ValueError:
                pass         # grid has no exponent-range aspects

        summary_path = os.path.join(config.out, "summary.json")
        with open(summary_path, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, sort_keys=True, indent=1)
            fh.write("\n")
        paths["summary"] = summary_path
        return paths
    finally:
        if pool is not None:
            pool.shutdown()


def _ordered_mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


_CSV_FIELDS = ["index", "seed", "length", "cost", "x_start", "y_start",
               "x_end", "y_end", "dx_norm", "triple_re", "triple_im"]


def _write_records(path: str, records: Sequence[SampleRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_FIELDS)
        for r in records:
            writer.writerow([
                r.index, f"{r.seed:032x}", r.length, repr(r.cost),
                repr(r.x_start), repr(r.y_start), repr(r.x_end),
                repr(r.y_end),
                "" if r.dx_norm is None else repr(r.dx_norm),
                "" if r.triple_re is None else repr(r.triple_re),
                "" if r.triple_im is None else repr(r.triple_im),
            ])
