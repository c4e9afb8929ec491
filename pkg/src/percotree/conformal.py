"""Conformal maps from the rectangle [0, a] x [0, b].

Three maps are provided:

* ``rect_to_halfplane`` -- Jacobi-elliptic map onto the upper half plane with
  anchors (a/2, 0) -> 0, (0, 0) -> -1, (a, 0) -> +1 and (a/2, b) -> infinity.
  The modulus is fixed by the aspect ratio through the elliptic nome.
* ``rect_to_halfannulus`` -- the exponential map sending horizontal lines to
  concentric semicircles, with (0, b/2) -> -1 and (a, b/2) -> +1.
* ``rect_to_disk_equilateral`` -- half-plane map followed by the Moebius
  transformation that places the corners (0,0), (0,b), (a,0) on the cube
  roots of unity inscribed in the unit disk.

Angles in the half plane are measured from the positive imaginary axis,
positive toward the positive real axis, so the two boundary rays sit at
-pi/2 and +pi/2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from scipy import special

HALF_PLANE = "half_plane"
HALF_ANNULUS = "half_annulus"
DISK_EQUILATERAL = "disk_equilateral"

_SERIES_TOL = 1e-14


@dataclass(eq=False)
class RectangleMap:
    """Precomputed constants of one conformal map of the a x b rectangle."""

    a: float
    b: float
    kind: str
    params: Dict[str, object] = field(default_factory=dict)


def _theta_functions(q: float):
    """Jacobi theta constants theta2(q), theta3(q) by nome series."""
    s2, n = 0.0, 0
    while True:
        term = q ** ((n + 0.5) ** 2)
        s2 += term
        if term < _SERIES_TOL * max(s2, 1.0):
            break
        n += 1
    s3, n = 0.0, 1
    while True:
        term = q ** (n * n)
        s3 += term
        if term < _SERIES_TOL:
            break
        n += 1
    return 2.0 * s2, 1.0 + 2.0 * s3


def make_halfplane_map(a: float, b: float) -> RectangleMap:
    """Elliptic parameters for the rectangle -> upper half plane map."""
    rho = 2.0 * b / a                       # K'/K fixed by the aspect ratio
    q = float(np.exp(-np.pi * rho))
    t2, t3 = _theta_functions(q)
    k = (t2 / t3) ** 2
    m = k * k
    K = float(special.ellipk(m))
    Kp = float(special.ellipk(1.0 - m))
    return RectangleMap(a=float(a), b=float(b), kind=HALF_PLANE,
                        params={"m": m, "k": k, "K": K, "Kp": Kp})


def _halfplane_eval(z, mapping: RectangleMap):
    """Half-plane map values plus the mask of points at the (a/2, b) pole."""
    z = np.asarray(z, dtype=complex)
    a, b = mapping.a, mapping.b
    m, K, Kp = mapping.params["m"], mapping.params["K"], mapping.params["Kp"]
    u = (2.0 * z.real / a - 1.0) * K
    v = (z.imag / b) * Kp
    pole = np.isclose(u, 0.0, atol=1e-12 * K) & \
        np.isclose(v, Kp, rtol=0, atol=1e-12 * Kp)
    sn_u, cn_u, dn_u, _ = special.ellipj(u, m)
    sn_v, cn_v, dn_v, _ = special.ellipj(v, 1.0 - m)
    denom = cn_v ** 2 + m * (sn_u * sn_v) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (sn_u * dn_v + 1j * cn_u * dn_u * sn_v * cn_v) / denom
    return w, pole


def rect_to_halfplane(z, mapping: RectangleMap):
    """Evaluate the half-plane map at rectangle points (complex, vectorized)."""
    if mapping.kind != HALF_PLANE:
        raise ValueError("mapping is not a half-plane map")
    w, pole = _halfplane_eval(z, mapping)
    if pole.any():
        raise ZeroDivisionError("map has a pole at (a/2, b)")
    if w.ndim == 0:
        return complex(w)
    return w


def halfplane_angle(w):
    """Angle from the positive imaginary axis, positive toward +Re."""
    w = np.asarray(w, dtype=complex)
    if np.any(w.imag <= 0):
        raise ValueError("angle is defined for points with Im(w) > 0")
    t = np.arctan2(w.real, w.imag)
    if t.ndim == 0:
        return float(t)
    return t


def make_halfannulus_map(a: float, b: float) -> RectangleMap:
    return RectangleMap(a=float(a), b=float(b), kind=HALF_ANNULUS)


def rect_to_halfannulus(z, mapping: RectangleMap):
    """Exponential map; the midline y = b/2 lands on the unit semicircle."""
    if mapping.kind != HALF_ANNULUS:
        raise ValueError("mapping is not a half-annulus map")
    z = np.asarray(z, dtype=complex)
    a, b = mapping.a, mapping.b
    w = np.exp(1j * np.pi * (a - z.real) / a + np.pi * (z.imag - b / 2.0) / a)
    if w.ndim == 0:
        return complex(w)
    return w


def _mobius_from_triple(src, dst):
    """Moebius coefficients sending the three src points to the dst points."""
    def ratio_matrix(z1, z2, z3):
        # M(z) = (z - z1)(z2 - z3) / ((z - z3)(z2 - z1)) as a 2x2 matrix
        return np.array([[z2 - z3, -z1 * (z2 - z3)],
                         [z2 - z1, -z3 * (z2 - z1)]], dtype=complex)

    s = ratio_matrix(*src)
    d = ratio_matrix(*dst)
    mat = np.linalg.inv(d) @ s
    return mat / np.sqrt(np.linalg.det(mat))


def make_disk_map(a: float, b: float) -> RectangleMap:
    """Half-plane map composed with the Moebius map putting the corners
    (0,0), (0,b), (a,0) on the cube roots of unity."""
    base = make_halfplane_map(a, b)
    k = base.params["k"]
    w3 = np.exp(2j * np.pi / 3.0)
    # boundary images in increasing real order, targets counterclockwise
    src = (-1.0 / k, -1.0, 1.0)
    dst = (w3 ** 2, 1.0 + 0j, w3)
    mat = _mobius_from_triple(src, dst)
    return RectangleMap(a=float(a), b=float(b), kind=DISK_EQUILATERAL,
                        params={"base": base, "mobius": mat,
                                "corner_images": dict(zip(["bottom_left",
                                                           "top_left",
                                                           "bottom_right"],
                                                          dst))})


def mobius_apply(mat, z):
    a, b = mat[0]
    c, d = mat[1]
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (a * z + b) / (c * z + d)
    w = np.where(np.isinf(z), a / c, w)
    if w.ndim == 0:
        return complex(w)
    return w


def rect_to_disk_equilateral(z, mapping: RectangleMap):
    """Composite map into the closed unit disk.

    The pole of the half-plane stage at (a/2, b) is a regular point here; it
    lands on the Moebius image of infinity.
    """
    if mapping.kind != DISK_EQUILATERAL:
        raise ValueError("mapping is not a disk map")
    zeta, pole = _halfplane_eval(z, mapping.params["base"])
    mat = mapping.params["mobius"]
    w = np.asarray(mobius_apply(mat, zeta))
    if pole.any():
        w = np.where(pole, mat[0, 0] / mat[1, 0], w)
    bad = ~np.isfinite(w)
    if bad.any():
        w = np.where(bad, mat[0, 0] / mat[1, 0], w)
    if w.ndim == 0:
        return complex(w)
    return w
