"""Path observables: left-passage statistics, scaling fits, displacement,
and the triple-point rotation test.

Left passage counts classify every interior face centroid as left or right
of a boundary-to-boundary path.  The partition is computed by flooding the
face adjacency graph with the path edges as walls; the side of each flood
component is decided by the even-odd winding parity of a representative
centroid against the path closed through the left boundary arc (probes with
odd parity are "left").  Face centroids never lie on the path itself, so no
probe is ever discarded.

Fits against the left-passage prediction for chordal traces compare the
empirical probability that the path passes to the left of a probe (the probe
sits in the right region) with

    P(t, kappa) = 1/2 + Gamma(4/kappa) / (sqrt(pi) Gamma((8-kappa)/(2 kappa)))
                  * tan(t) * 2F1(1/2, 4/kappa; 3/2; -tan(t)^2)

where t is the probe angle from the vertical in the half plane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from . import _kernels as K
from .conformal import (halfplane_angle, make_halfplane_map,
                        rect_to_halfplane)
from .lattice import ARC_LEFT, PlanarLattice
from .spanning import LatticePath, SpanningTree, tree_path

SELECTOR_STOT = "stot"
SELECTOR_CROSSING = "crossing"
SELECTORS = (SELECTOR_STOT, SELECTOR_CROSSING)

VERDICT_FIT = "fit"
VERDICT_NO_FIT = "no_fit"

DEFAULT_FIT_WINDOW = 1.3
NO_FIT_FACTOR = 5.0

_SERIES_TOL = 1e-14
_LARGE_TAN = 50.0


# ---------------------------------------------------------------------------
# special-function kernel

def gauss_2f1_negz(b: float, u2) -> np.ndarray | float:
    """2F1(1/2, b; 3/2; -u2) for u2 >= 0.

    Pfaff transformation maps the argument into [0, 1):
    (1 + u2)^(-b) * 2F1(1, b; 3/2; u2 / (1 + u2)), summed to relative
    increment 1e-14.
    """
    u2 = np.asarray(u2, dtype=float)
    if np.any(u2 < 0):
        raise ValueError("u2 must be non-negative")
    x = u2 / (1.0 + u2)
    total = np.ones_like(x)
    term = np.ones_like(x)
    n = 0
    while True:
        term = term * (b + n) / (1.5 + n) * x
        total += term
        n += 1
        if np.all(np.abs(term) <= _SERIES_TOL * np.abs(total)) or n > 200000:
            break
    out = (1.0 + u2) ** (-b) * total
    if out.ndim == 0:
        return float(out)
    return out


def _hyp_series(a: float, b: float, c: float, x: float) -> float:
    """Plain Gauss series for |x| < 1 (used by the large-angle branch)."""
    total, term, n = 1.0, 1.0, 0
    while True:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x
        total += term
        n += 1
        if abs(term) <= _SERIES_TOL * abs(total) or n > 100000:
            return total


def schramm_lpp(t, kappa: float):
    """Left-passage probability of a chordal trace at angle t, parameter kappa.

    t is measured from the positive imaginary axis toward the positive real
    axis, t in (-pi/2, pi/2); kappa in (0, 8).  P(0) = 1/2 exactly and
    P(t) + P(-t) = 1.
    """
    if not 0.0 < kappa < 8.0:
        raise ValueError(f"kappa must lie in (0, 8), got {kappa}")
    scalar = np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t_arr) >= np.pi / 2):
        raise ValueError("t must lie in (-pi/2, pi/2)")
    b = 4.0 / kappa                       # b > 1/2 for every kappa < 8
    coef = math.gamma(b) / (math.sqrt(math.pi) * math.gamma(b - 0.5))
    u = np.tan(t_arr)
    out = np.empty_like(t_arr)

    small = np.abs(u) <= _LARGE_TAN
    if small.any():
        us = u[small]
        out[small] = 0.5 + coef * us * gauss_2f1_negz(b, us * us)
    large = ~small
    if large.any():
        vals = np.array([_large_angle_value(abs(ui), b, coef)
                         for ui in u[large]])
        out[large] = np.where(u[large] >= 0, vals, 1.0 - vals)
    if scalar:
        return float(out[0])
    return out


def _large_angle_value(u: float, b: float, coef: float) -> float:
    """P at large positive tan t via the connection formula at -infinity.

    2F1(1/2, b; 3/2; -u^2) = A / u + B u^(-2b) 2F1(b, b-1/2; b+1/2; -1/u^2)
    with coef * A = 1/2 exactly, so P -> 1 as t -> pi/2.
    """
    from scipy.special import gamma as _g
    tail = 0.0
    half_minus_b = 0.5 - b
    dist = abs(half_minus_b - round(half_minus_b))
    if dist > 1e-3:
        B = (_g(1.5) * _g(half_minus_b)) / (_g(0.5) * _g(1.5 - b))
        series = _hyp_series(b, b - 0.5, b + 0.5, -1.0 / (u * u))
        tail = coef * float(B) * u ** (1.0 - 2.0 * b) * series
    elif b >= 1.5:
        tail = 0.0          # pole of the connection term; remainder O(u^-2)
    else:
        # fall back to the plain Pfaff series, slow but safe
        return 0.5 + coef * u * float(gauss_2f1_negz(b, u * u))
    return 1.0 + tail


# ---------------------------------------------------------------------------
# left-passage field

@dataclass(eq=False)
class LeftPassageField:
    """Tallies of left-of-path classifications over the probe grid.

    Probes are the interior face centroids; their half-plane angles are
    precomputed per selector.  Counts merge by integer addition, so merges
    are exact and order-independent.
    """

    kind: str
    a_cells: int
    b_cells: int
    selector: str
    probe_xy: np.ndarray          # (F, 2)
    probe_angle: np.ndarray       # (F,)
    counts_left: np.ndarray       # (F,) int64
    counts_total: np.ndarray      # (F,) int64
    n_samples: int = 0
    n_on_path: int = 0            # centroid probes never lie on a path
    meta: Dict[str, object] = field(default_factory=dict)

    def merge(self, other: "LeftPassageField") -> None:
        if (self.kind, self.a_cells, self.b_cells, self.selector) != \
                (other.kind, other.a_cells, other.b_cells, other.selector):
            raise ValueError("cannot merge fields from different runs")
        self.counts_left += other.counts_left
        self.counts_total += other.counts_total
        self.n_samples += other.n_samples
        self.n_on_path += other.n_on_path


def make_left_passage_field(lattice: PlanarLattice,
                            selector: str) -> LeftPassageField:
    """Empty field with probe angles for the given path selector."""
    if selector not in SELECTORS:
        raise ValueError(f"unknown selector {selector!r}")
    xy = lattice.face_centroid[:lattice.n_interior_faces].copy()
    if selector == SELECTOR_STOT:
        mapping = make_halfplane_map(lattice.width, lattice.height)
        w = rect_to_halfplane(xy[:, 0] + 1j * xy[:, 1], mapping)
        angle = halfplane_angle(w)
    else:
        angle = np.pi * (xy[:, 0] / lattice.width - 0.5)
    n = xy.shape[0]
    return LeftPassageField(
        kind=lattice.kind, a_cells=lattice.a_cells, b_cells=lattice.b_cells,
        selector=selector, probe_xy=xy, probe_angle=np.asarray(angle),
        counts_left=np.zeros(n, dtype=np.int64),
        counts_total=np.zeros(n, dtype=np.int64))


def left_side_faces(path: LatticePath, lattice: PlanarLattice) -> np.ndarray:
    """Boolean mask over interior faces: True where the face lies left of
    the oriented path (closed through the left boundary arc, odd winding)."""
    vb, vt = int(path.vertices[0]), int(path.vertices[-1])
    if vb not in lattice.boundary_pos or vt not in lattice.boundary_pos:
        raise ValueError("path endpoints must be boundary vertices")
    wall = np.zeros(lattice.n_edges, dtype=np.bool_)
    wall[path.edge_ids] = True
    labels, ncomp = K.flood_components(
        lattice.n_interior_faces, lattice.face_adj_indptr,
        lattice.face_adj_face, lattice.face_adj_edge, wall)

    poly = _closed_polygon(path, lattice, vb, vt)
    left_comp = np.zeros(ncomp, dtype=bool)
    seen = np.zeros(ncomp, dtype=bool)
    for f in range(lattice.n_interior_faces):
        c = labels[f]
        if seen[c]:
            continue
        seen[c] = True
        px, py = lattice.face_centroid[f]
        left_comp[c] = K.winding_parity(px, py, poly[:, 0], poly[:, 1])
    return left_comp[labels]


def _closed_polygon(path, lattice, vb, vt):
    """Path vertices followed by the left boundary arc from vt back to vb."""
    pts = [lattice.vertex_pos[v] for v in path.vertices]
    p_b = lattice.boundary_pos[vb]
    p_t = lattice.boundary_pos[vt]
    n = lattice.n_ghosts
    i = p_t
    while i != p_b:
        i = (i + 1) % n
        pts.append(lattice.vertex_pos[lattice.boundary_verts[i]])
    return np.asarray(pts)


def accumulate_left_passage(path: LatticePath, lattice: PlanarLattice,
                            fieldacc: LeftPassageField) -> LeftPassageField:
    """Tally one path into the field (updated in place and returned)."""
    left = left_side_faces(path, lattice)
    fieldacc.counts_left += left
    fieldacc.counts_total += 1
    fieldacc.n_samples += 1
    return fieldacc


# ---------------------------------------------------------------------------
# fits

@dataclass
class KappaFit:
    """Best-fit kappa of a left-passage field and its verdict."""

    kappa_hat: float
    stderr: float
    residual: float               # mean squared residual at the optimum
    noise_floor: float            # mean binomial variance of the probes
    verdict: str
    n_probes: int


@dataclass
class ScalingFit:
    """Log-log regression of means against a size-like variable."""

    sizes: np.ndarray
    means: np.ndarray
    slope: float
    stderr: float
    intercept: float


@dataclass
class DisplacementSummary:
    exponent: ScalingFit
    plateau_mean: Optional[float]
    plateau_stderr: Optional[float]


def fit_kappa(fieldacc: LeftPassageField,
              window: float = DEFAULT_FIT_WINDOW,
              no_fit_factor: float = NO_FIT_FACTOR) -> KappaFit:
    """Least-squares fit of the left-passage prediction over probe angles.

    Unweighted least squares on probability residuals restricted to probes
    with |t| < window.  The fitted probability is that the path passes left
    of the probe, i.e. one minus the field's left-region frequency.  The
    verdict is no_fit when the minimized mean squared residual exceeds
    ``no_fit_factor`` times the binomial noise floor of the probes.
    """
    sel = np.abs(fieldacc.probe_angle) < window
    n_i = fieldacc.counts_total[sel]
    if sel.sum() < 4:
        raise ValueError("not enough probes inside the fit window")
    if n_i.min() < 100:
        raise ValueError("insufficient statistics: need at least 100 counts "
                         f"per probe, found {int(n_i.min())}")
    t_i = fieldacc.probe_angle[sel]
    q_i = 1.0 - fieldacc.counts_left[sel] / n_i     # path left of probe

    def msr(kappa):
        r = q_i - schramm_lpp(t_i, kappa)
        return float(np.mean(r * r))

    grid = np.linspace(0.15, 7.85, 78)
    values = [msr(k) for k in grid]
    k0 = grid[int(np.argmin(values))]
    res = optimize.minimize_scalar(
        msr, bounds=(max(0.05, k0 - 0.5), min(7.95, k0 + 0.5)),
        method="bounded", options={"xatol": 1e-6})
    kappa_hat = float(res.x)
    best = float(res.fun)

    h = 1e-4
    dp = (schramm_lpp(t_i, kappa_hat + h)
          - schramm_lpp(t_i, max(kappa_hat - h, 1e-6))) / (2 * h)
    sigma2 = np.maximum(q_i * (1.0 - q_i), 0.25 / n_i.max()) / n_i
    denom = float(np.sum(dp * dp))
    stderr = float(np.sqrt(np.sum(dp * dp * sigma2)) / denom) if denom > 0 \
        else float("inf")
    floor = float(np.mean(sigma2))
    verdict = VERDICT_FIT if best <= no_fit_factor * floor else VERDICT_NO_FIT
    return KappaFit(kappa_hat=kappa_hat, stderr=stderr, residual=best,
                    noise_floor=floor, verdict=verdict,
                    n_probes=int(sel.sum()))


def fractal_dimension(samples: Sequence[Tuple[float, float]]) -> ScalingFit:
    """Slope of log(mean length) against log(size); needs >= 3 sizes."""
    if len(samples) < 3:
        raise ValueError("need at least 3 sizes for a scaling fit")
    sizes = np.asarray([s for s, _ in samples], dtype=float)
    means = np.asarray([m for _, m in samples], dtype=float)
    if np.any(sizes <= 0) or np.any(means <= 0):
        raise ValueError("sizes and means must be positive")
    coeffs, cov = np.polyfit(np.log(sizes), np.log(means), 1, cov=True)
    return ScalingFit(sizes=sizes, means=means, slope=float(coeffs[0]),
                      stderr=float(np.sqrt(cov[0, 0])),
                      intercept=float(coeffs[1]))


def kappa_from_dimension(d: float) -> float:
    """Invert the dimension relation d = 1 + kappa / 8."""
    if not 1.0 < d <= 2.0:
        raise ValueError(f"fractal dimension must lie in (1, 2], got {d}")
    return 8.0 * (d - 1.0)


def horizontal_displacement(path: LatticePath,
                            lattice: PlanarLattice) -> float:
    """Normalized abscissa difference of a bottom-to-top crossing path."""
    x0, y0 = lattice.vertex_pos[path.vertices[0]]
    x1, y1 = lattice.vertex_pos[path.vertices[-1]]
    if not (np.isclose(y0, 0.0) and np.isclose(y1, lattice.height)):
        raise ValueError("path must run from the bottom side to the top side")
    return float((x1 - x0) / lattice.width)


def displacement_scaling(records: Iterable[Tuple[float, float]],
                         low_cut: float = 0.25,
                         high_cut: float = 4.0) -> DisplacementSummary:
    """Exponent of <dx^2> against the aspect ratio, plus the tall plateau.

    ``records`` are (aspect, dx^2) samples.  The exponent is fit on aspect
    ratios <= low_cut, which must span at least one decade; the plateau is
    the mean over samples with aspect >= high_cut (None when absent).
    """
    by_aspect: Dict[float, List[float]] = {}
    for aspect, dx2 in records:
        by_aspect.setdefault(float(aspect), []).append(float(dx2))
    aspects = np.array(sorted(by_aspect))
    means = np.array([np.mean(by_aspect[a]) for a in aspects])

    low = aspects[aspects <= low_cut]
    if low.size < 3 or low.max() / low.min() < 10.0:
        raise ValueError("aspect ratios below the cut must span at least one "
                         "decade with three or more values")
    sel = aspects <= low_cut
    coeffs, cov = np.polyfit(np.log(aspects[sel]), np.log(means[sel]), 1,
                             cov=True)
    exponent = ScalingFit(sizes=aspects[sel], means=means[sel],
                          slope=float(coeffs[0]),
                          stderr=float(np.sqrt(cov[0, 0])),
                          intercept=float(coeffs[1]))

    plateau_mean = plateau_se = None
    high_samples = [x for a, xs in by_aspect.items() if a >= high_cut
                    for x in xs]
    if high_samples:
        arr = np.asarray(high_samples)
        plateau_mean = float(arr.mean())
        plateau_se = float(arr.std(ddof=1) / np.sqrt(arr.size)) \
            if arr.size > 1 else float("inf")
    return DisplacementSummary(exponent=exponent, plateau_mean=plateau_mean,
                               plateau_stderr=plateau_se)


# ---------------------------------------------------------------------------
# triple point

def triple_point(tree: SpanningTree, c1: int, c2: int, c3: int) -> int:
    """The unique tree vertex joining c1, c2, c3 by edge-disjoint paths.

    It is the point where the paths c1->c2 and c1->c3 separate, and is
    invariant under permutations of the three vertices.
    """
    if len({c1, c2, c3}) != 3:
        raise ValueError("corner vertices must be distinct")
    p12 = tree_path(tree, c1, c2).vertices
    pos = {int(v): k for k, v in enumerate(p12)}
    p13 = tree_path(tree, c1, c3).vertices
    meet = int(c1)
    for v in p13:
        if int(v) in pos:
            meet = int(v)
        else:
            break
    return meet


@dataclass(eq=False)
class TriplePointHistogram:
    """Polar histogram of mapped triple points in the unit disk.

    Radial bins are uniform in r^2 (equal area) and the angular bin count is
    a multiple of 3, so a rotation by 2*pi/3 permutes bins exactly.
    """

    n_r: int
    n_phi: int
    counts: np.ndarray            # (n_r, n_phi) int64

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def make_triple_histogram(points, n_r: int = 8,
                          n_phi: int = 24) -> TriplePointHistogram:
    if n_phi % 3 != 0:
        raise ValueError("angular bin count must be a multiple of 3")
    w = np.asarray(points, dtype=complex)
    r2 = np.clip(np.abs(w) ** 2, 0.0, np.nextafter(1.0, 0.0))
    phi = np.angle(w)              # [-pi, pi]
    ir = np.minimum((r2 * n_r).astype(np.int64), n_r - 1)
    ip = np.floor((phi + np.pi) / (2 * np.pi) * n_phi).astype(np.int64) % n_phi
    counts = np.zeros((n_r, n_phi), dtype=np.int64)
    np.add.at(counts, (ir, ip), 1)
    return TriplePointHistogram(n_r=n_r, n_phi=n_phi, counts=counts)


@dataclass
class RotationTest:
    statistic: float              # total variation to the symmetrized law
    p_value: float
    n_points: int


def rotation_symmetry_statistic(hist: TriplePointHistogram,
                                n_resample: int = 999,
                                seed: int = 0) -> RotationTest:
    """Total-variation distance to the 3-fold symmetrized histogram, with a
    resampling p-value against the symmetric null."""
    n = hist.total
    if n < 1000:
        raise ValueError("need at least 1000 histogram entries")
    shift = hist.n_phi // 3
    p = hist.counts / n
    p_sym = (p + np.roll(p, shift, axis=1) + np.roll(p, 2 * shift, axis=1)) / 3.0
    stat = 0.5 * float(np.abs(p - p_sym).sum())

    rng = np.random.Generator(np.random.Philox(key=seed))
    flat = p_sym.ravel()
    flat = flat / flat.sum()
    count_ge = 0
    for _ in range(n_resample):
        sim = rng.multinomial(n, flat).reshape(hist.counts.shape) / n
        sim_sym = (sim + np.roll(sim, shift, axis=1)
                   + np.roll(sim, 2 * shift, axis=1)) / 3.0
        if 0.5 * float(np.abs(sim - sim_sym).sum()) >= stat:
            count_ge += 1
    p_value = (1 + count_ge) / (n_resample + 1)
    return RotationTest(statistic=stat, p_value=p_value, n_points=n)
