"""Dirac-representation gamma matrices and the exact spinor algebra built on them.

Conventions used throughout the package:

* metric eta = diag(-1, +1, +1, +1), so {gamma^mu, gamma^nu} = -2 eta^{mu nu} I,
* gamma^0 = diag(I2, -I2), gamma^i has the Pauli blocks off-diagonal,
* gamma5 = i gamma^0 gamma^1 gamma^2 gamma^3,
* index lowering: gamma_0 = -gamma^0, gamma_a = gamma^a for spatial a.

Spinors are plain complex ndarrays with leading axis of length 4 (a single
point is shape (4,), a grid field is shape (4, nx, ny, nz)); all operations
here broadcast over the trailing axes.  Matrices are dense 4x4 complex arrays
with exact half-integer entries, constructed once and frozen, so algebraic
test suites can demand errors at the rounding level.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ETA",
    "IDENTITY4",
    "PAULI",
    "GAMMA",
    "GAMMA5",
    "PROJ_LEFT",
    "PROJ_RIGHT",
    "gamma",
    "gamma_lower",
    "projectors",
    "project_left",
    "lower4",
    "raise4",
    "minkowski_dot",
    "weyl_split",
    "weyl_join",
    "cholesky_factor",
    "cholesky_factor_clifford",
    "apply_cholesky",
    "modified_boost_matrix",
    "apply_matrix",
    "bilinear",
]

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
ETA.setflags(write=False)

_I2 = np.eye(2, dtype=np.complex128)
_Z2 = np.zeros((2, 2), dtype=np.complex128)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def _block(a, b, c, d):
    m = np.block([[a, b], [c, d]])
    m.setflags(write=False)
    return m


IDENTITY4 = _block(_I2, _Z2, _Z2, _I2)

GAMMA = (
    _block(_I2, _Z2, _Z2, -_I2),
    _block(_Z2, PAULI[0], -PAULI[0], _Z2),
    _block(_Z2, PAULI[1], -PAULI[1], _Z2),
    _block(_Z2, PAULI[2], -PAULI[2], _Z2),
)

GAMMA5 = 1j * (GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3])
GAMMA5.setflags(write=False)

PROJ_LEFT = 0.5 * (IDENTITY4 - GAMMA5)
PROJ_LEFT.setflags(write=False)
PROJ_RIGHT = 0.5 * (IDENTITY4 + GAMMA5)
PROJ_RIGHT.setflags(write=False)

for p in PAULI:
    p.setflags(write=False)


def gamma(mu: int) -> np.ndarray:
    """Dirac-representation gamma^mu (read-only view)."""
    if mu not in (0, 1, 2, 3):
        raise ValueError(f"gamma index must be in 0..3, got {mu!r}")
    return GAMMA[mu]


def gamma_lower(mu: int) -> np.ndarray:
    """gamma_mu = eta_{mu nu} gamma^nu."""
    return ETA[mu, mu] * gamma(mu)


def projectors() -> tuple[np.ndarray, np.ndarray]:
    """Chiral projectors (P_L, P_R) = (1/2)(I -/+ gamma5)."""
    return PROJ_LEFT, PROJ_RIGHT


def lower4(vec):
    """Lower a 4-vector index with eta: (v^0, v^i) -> (-v^0, v^i).

    `vec` is indexable by 0..3 (array of shape (4, ...) or a sequence); the
    single place in the package where the metric touches vector components.
    """
    v = np.asarray(vec)
    out = v.copy()
    out[0] = -out[0]
    return out


def raise4(vec):
    """Raise a 4-covector index with eta (same sign flip as lower4)."""
    return lower4(vec)


def minkowski_dot(u, v):
    """eta_{mu nu} u^mu v^nu = -u^0 v^0 + u.v for broadcastable components."""
    u = np.asarray(u)
    v = np.asarray(v)
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]


def apply_matrix(m: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Apply a 4x4 spinor matrix to a (4, ...) field."""
    return np.einsum("ab,b...->a...", m, psi)


def bilinear(psi: np.ndarray, m: np.ndarray, phi: np.ndarray | None = None) -> np.ndarray:
    """psi^* m phi contracted over the spinor axis (phi defaults to psi)."""
    if phi is None:
        phi = psi
    return np.einsum("a...,ab,b...->...", psi.conj(), m, phi)


def weyl_split(psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split psi = (u+v, u-v) into the Weyl pair (u, v).

    u = (upper + lower)/2, v = (upper - lower)/2; exact inverse of weyl_join.
    """
    psi = np.asarray(psi)
    upper, lower = psi[:2], psi[2:]
    return 0.5 * (upper + lower), 0.5 * (upper - lower)


def weyl_join(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Assemble the Dirac spinor (u+v, u-v) from a Weyl pair."""
    return np.concatenate([np.asarray(u) + v, np.asarray(u) - v], axis=0)


def _check_cone_direction(n, sigma, tol):
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {n.shape}")
    nn = float(n @ n)
    if nn >= 1.0:
        raise ValueError(f"|n| = {np.sqrt(nn):.6g} >= 1: point outside the light cone")
    sig = np.sqrt(1.0 - nn)
    if sigma is None:
        return n, sig
    if abs(sigma - sig) > tol:
        raise ValueError(
            f"sigma = {sigma!r} inconsistent with sqrt(1-|n|^2) = {sig!r} (tol {tol:g})"
        )
    return n, float(sigma)


def cholesky_factor(n, sigma: float | None = None, tol: float = 1e-12) -> np.ndarray:
    """Lower-triangular factor P with P^* P = I + n_j gamma^0 gamma^j.

    `n` plays the role of x/t for a point inside the light cone (|n| < 1) and
    `sigma` the ratio s/t = sqrt(1-|n|^2); passing sigma explicitly lets slice
    callers reuse their square roots, and consistency is asserted to `tol`.
    """
    n, sig = _check_cone_direction(n, sigma, tol)
    n1, n2, n3 = n
    return np.array(
        [
            [sig, 0, 0, 0],
            [0, sig, 0, 0],
            [n3, n1 - 1j * n2, 1, 0],
            [n1 + 1j * n2, -n3, 0, 1],
        ],
        dtype=np.complex128,
    )


def cholesky_factor_clifford(n, sigma: float | None = None, tol: float = 1e-12) -> np.ndarray:
    """Same factor written in the Clifford basis.

    P = ((sigma+1)/2) I + ((sigma-1)/2) gamma^0 + (1/2) n_j (gamma^0 gamma^j - gamma^j).
    The combination (gamma^0 gamma^j - gamma^j)/2 keeps only the lower-left
    Pauli block, which is what makes P lower triangular.
    """
    n, sig = _check_cone_direction(n, sigma, tol)
    p = 0.5 * (sig + 1.0) * IDENTITY4 + 0.5 * (sig - 1.0) * GAMMA[0]
    for j in (1, 2, 3):
        p = p + 0.5 * n[j - 1] * (GAMMA[0] @ GAMMA[j] - GAMMA[j])
    return p


def apply_cholesky(n1, n2, n3, sigma, psi: np.ndarray) -> np.ndarray:
    """Apply the factor of cholesky_factor((n1,n2,n3), sigma) componentwise.

    Vectorized over grids: n1..n3, sigma and psi[k] must broadcast together.
    """
    out = np.empty_like(psi)
    out[0] = sigma * psi[0]
    out[1] = sigma * psi[1]
    out[2] = n3 * psi[0] + (n1 - 1j * n2) * psi[1] + psi[2]
    out[3] = (n1 + 1j * n2) * psi[0] - n3 * psi[1] + psi[3]
    return out


def modified_boost_matrix(a: int) -> np.ndarray:
    """Constant matrix part of the boost that commutes with the Dirac operator.

    Returns -1/2 gamma^0 gamma^a, i.e. +1/2 gamma_0 gamma_a with lowered
    indices; this is the unique sign for which [L_a + M_a, i gamma^nu d_nu] = 0
    (the opposite sign doubles the commutator instead of cancelling it).
    """
    if a not in (1, 2, 3):
        raise ValueError(f"boost index must be in 1..3, got {a!r}")
    return -0.5 * (GAMMA[0] @ GAMMA[a])


def project_left(psi: np.ndarray) -> np.ndarray:
    """P_L psi, written blockwise: ((u-l)/2, (l-u)/2) for psi = (u, l)."""
    psi = np.asarray(psi)
    w = 0.5 * (psi[:2] - psi[2:])
    return np.concatenate([w, -w], axis=0)
