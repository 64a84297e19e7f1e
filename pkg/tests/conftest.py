"""Shared fixtures: synthetic slice datasets and cached evolution runs."""

from __future__ import annotations

import numpy as np
import pytest

from hyperhiggs.geometry import HyperboloidSlice, _empty_slice
from hyperhiggs.grid import Grid3


def random_smooth_field(rng, coords, nbumps=3, scale=1.0, complex_valued=True):
    """Sum of random Gaussian bumps, compactly concentrated inside the box."""
    x, y, z = coords
    out = np.zeros(x.shape, dtype=np.complex128 if complex_valued else np.float64)
    for _ in range(nbumps):
        c = rng.uniform(-1.5, 1.5, 3)
        w = rng.uniform(0.6, 1.5)
        amp = rng.normal() * scale
        if complex_valued:
            amp = amp + 1j * rng.normal() * scale
        out += amp * np.exp(-(((x - c[0]) ** 2 + (y - c[1]) ** 2 + (z - c[2]) ** 2) / w**2))
    return out


def synthetic_slice(rng, n=16, dx=0.35, s=3.0, with_scalar=True) -> HyperboloidSlice:
    """A hyperboloid slice carrying random smooth compactly supported data.

    Field values and 'derivative' arrays are drawn independently: every
    identity under test is pointwise-algebraic in the sampled values, so no
    consistency between them is required.
    """
    grid = Grid3(n=n, dx=dx)
    slc = _empty_slice(grid, s, r0=1.0, t0=2.0, has_A=with_scalar, has_chi=with_scalar)
    coords = slc.coords()

    def spinor():
        return np.stack([random_smooth_field(rng, coords) for _ in range(4)])

    slc.psi = spinor()
    slc.psit = spinor()
    if with_scalar:
        slc.chi = random_smooth_field(rng, coords)
        slc.chit = random_smooth_field(rng, coords)
        slc.chitt = random_smooth_field(rng, coords)
        slc.A = np.stack(
            [random_smooth_field(rng, coords, complex_valued=False) for _ in range(4)]
        )
        slc.At = np.stack(
            [random_smooth_field(rng, coords, complex_valued=False) for _ in range(4)]
        )
        slc.att = np.stack(
            [random_smooth_field(rng, coords, complex_valued=False) for _ in range(4)]
        )
    return slc


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
