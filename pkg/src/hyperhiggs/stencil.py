"""Periodic finite-difference kernels and deterministic reductions.

All stencils are centered (2nd or 4th order) on the periodic cube.  Kernels
parallelize over x-slabs with disjoint writes, so results are bitwise
reproducible regardless of thread count; reductions are Kahan-compensated
sequential sums.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

__all__ = [
    "diff1",
    "gradient3",
    "laplacian",
    "kahan_sum",
    "masked_kahan_sum",
]

# 4th-order first derivative: (u[-2] - 8 u[-1] + 8 u[+1] - u[+2]) / (12 dx)
# 4th-order second derivative: (-u[-2] + 16 u[-1] - 30 u[0] + 16 u[+1] - u[+2]) / (12 dx^2)


@njit(cache=True, parallel=True)
def _diff1_axis0(u, inv_dx, order, out):
    n0, n1, n2 = u.shape
    for i in prange(n0):
        im1 = (i - 1) % n0
        ip1 = (i + 1) % n0
        im2 = (i - 2) % n0
        ip2 = (i + 2) % n0
        for j in range(n1):
            for k in range(n2):
                if order == 4:
                    out[i, j, k] = (
                        u[im2, j, k] - 8.0 * u[im1, j, k] + 8.0 * u[ip1, j, k] - u[ip2, j, k]
                    ) * (inv_dx / 12.0)
                else:
                    out[i, j, k] = (u[ip1, j, k] - u[im1, j, k]) * (0.5 * inv_dx)
    return out


@njit(cache=True, parallel=True)
def _diff1_axis1(u, inv_dx, order, out):
    n0, n1, n2 = u.shape
    for i in prange(n0):
        for j in range(n1):
            jm1 = (j - 1) % n1
            jp1 = (j + 1) % n1
            jm2 = (j - 2) % n1
            jp2 = (j + 2) % n1
            for k in range(n2):
                if order == 4:
                    out[i, j, k] = (
                        u[i, jm2, k] - 8.0 * u[i, jm1, k] + 8.0 * u[i, jp1, k] - u[i, jp2, k]
                    ) * (inv_dx / 12.0)
                else:
                    out[i, j, k] = (u[i, jp1, k] - u[i, jm1, k]) * (0.5 * inv_dx)
    return out


@njit(cache=True, parallel=True)
def _diff1_axis2(u, inv_dx, order, out):
    n0, n1, n2 = u.shape
    for i in prange(n0):
        for j in range(n1):
            for k in range(n2):
                km1 = (k - 1) % n2
                kp1 = (k + 1) % n2
                km2 = (k - 2) % n2
                kp2 = (k + 2) % n2
                if order == 4:
                    out[i, j, k] = (
                        u[i, j, km2] - 8.0 * u[i, j, km1] + 8.0 * u[i, j, kp1] - u[i, j, kp2]
                    ) * (inv_dx / 12.0)
                else:
                    out[i, j, k] = (u[i, j, kp1] - u[i, j, km1]) * (0.5 * inv_dx)
    return out


@njit(cache=True, parallel=True)
def _laplacian(u, inv_dx2, order, out):
    n0, n1, n2 = u.shape
    for i in prange(n0):
        im1 = (i - 1) % n0
        ip1 = (i + 1) % n0
        im2 = (i - 2) % n0
        ip2 = (i + 2) % n0
        for j in range(n1):
            jm1 = (j - 1) % n1
            jp1 = (j + 1) % n1
            jm2 = (j - 2) % n1
            jp2 = (j + 2) % n1
            for k in range(n2):
                km1 = (k - 1) % n2
                kp1 = (k + 1) % n2
                km2 = (k - 2) % n2
                kp2 = (k + 2) % n2
                c = u[i, j, k]
                if order == 4:
                    axx = (
                        -u[im2, j, k]
                        + 16.0 * u[im1, j, k]
                        - 30.0 * c
                        + 16.0 * u[ip1, j, k]
                        - u[ip2, j, k]
                    )
                    ayy = (
                        -u[i, jm2, k]
                        + 16.0 * u[i, jm1, k]
                        - 30.0 * c
                        + 16.0 * u[i, jp1, k]
                        - u[i, jp2, k]
                    )
                    azz = (
                        -u[i, j, km2]
                        + 16.0 * u[i, j, km1]
                        - 30.0 * c
                        + 16.0 * u[i, j, kp1]
                        - u[i, j, kp2]
                    )
                    out[i, j, k] = (axx + ayy + azz) * (inv_dx2 / 12.0)
                else:
                    axx = u[im1, j, k] - 2.0 * c + u[ip1, j, k]
                    ayy = u[i, jm1, k] - 2.0 * c + u[i, jp1, k]
                    azz = u[i, j, km1] - 2.0 * c + u[i, j, kp1]
                    out[i, j, k] = (axx + ayy + azz) * inv_dx2
    return out


_DIFF1 = (_diff1_axis0, _diff1_axis1, _diff1_axis2)


def diff1(u, axis, dx, order=4, out=None):
    """First derivative along `axis` on the periodic cube."""
    if order not in (2, 4):
        raise ValueError(f"stencil order must be 2 or 4, got {order}")
    if out is None:
        out = np.empty_like(u)
    return _DIFF1[axis](u, 1.0 / dx, order, out)


def gradient3(u, dx, order=4, out=None):
    """All three first derivatives, stacked on a new leading axis."""
    if out is None:
        out = np.empty((3,) + u.shape, dtype=u.dtype)
    for axis in range(3):
        diff1(u, axis, dx, order=order, out=out[axis])
    return out


def laplacian(u, dx, order=4, out=None):
    """Three-axis Laplacian in one fused pass."""
    if order not in (2, 4):
        raise ValueError(f"stencil order must be 2 or 4, got {order}")
    if out is None:
        out = np.empty_like(u)
    return _laplacian(u, 1.0 / (dx * dx), order, out)


@njit(cache=True)
def _kahan_sum(a):
    total = 0.0
    comp = 0.0
    for i in range(a.size):
        y = a[i] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def kahan_sum(a) -> float:
    """Compensated sequential sum; deterministic for a fixed array layout."""
    return float(_kahan_sum(np.ascontiguousarray(a, dtype=np.float64).ravel()))


@njit(cache=True)
def _masked_kahan_sum(a, mask):
    total = 0.0
    comp = 0.0
    for i in range(a.size):
        if mask[i]:
            y = a[i] - comp
            t = total + y
            comp = (t - total) - y
            total = t
    return total


def masked_kahan_sum(a, mask) -> float:
    a = np.ascontiguousarray(a, dtype=np.float64).ravel()
    mask = np.ascontiguousarray(mask, dtype=np.bool_).ravel()
    return float(_masked_kahan_sum(a, mask))
