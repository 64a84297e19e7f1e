"""Hyperboloidal foliation of the interior light cone.

Covers cone membership, the semi-hyperboloidal frame and its transition
matrices, slice normals and flat-measure integrals, interpolation of evolved
constant-t grid data onto the hyperboloids H_s = {t^2 - r^2 = s^2}, and
Lorentz-boost field operators applied by nested finite differencing.

Slice sampling happens on a cubic sub-box of the evolution grid clipped to
the capture radius where H_s meets the support ball; samples outside the
support region are identically zero.  Interpolation in time is 4-point
Lagrange (cubic), either one-shot from a buffer that spans the whole slice
(`interpolate_to_slice`, test scale) or incrementally while the evolution
crosses each point's slice time (`SliceRecorder`, production scale).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import clifford as cl
from . import stencil
from .errors import NonFiniteSampleError, OutsideConeError, StalenessError
from .grid import Grid3

__all__ = [
    "ConePoint",
    "FrameMatrices",
    "HyperboloidSlice",
    "SliceRecorder",
    "in_cone",
    "cone_interior_mask",
    "frame",
    "normal_and_measure",
    "slice_integral",
    "interpolate_to_slice",
    "capture_radius",
    "lagrange4_weights",
    "AnalyticSampler",
    "BufferSampler",
    "time_derivative_sampler",
    "spatial_derivative",
    "underline_derivative",
    "boost_apply",
    "dump_slice_csv",
]


def in_cone(t: float, x) -> bool:
    """Membership in the interior cone K = {r < t - 1}."""
    r = float(np.linalg.norm(np.asarray(x, dtype=float)))
    return r < t - 1.0


def cone_interior_mask(grid: Grid3, t: float) -> np.ndarray:
    """Boolean mask of grid points strictly inside the cone at time t."""
    return grid.radius() < t - 1.0


@dataclass(frozen=True)
class ConePoint:
    """A point of the interior cone, with its radius and slice parameter."""

    t: float
    x: tuple[float, float, float]

    def __post_init__(self):
        if not in_cone(self.t, self.x):
            raise OutsideConeError(f"point t={self.t}, x={self.x} is outside r < t - 1")

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.x))

    @property
    def s(self) -> float:
        return float(np.sqrt(self.t**2 - self.r**2))


@dataclass(frozen=True)
class FrameMatrices:
    """Transition matrices between the Cartesian and semi-hyperboloidal frames."""

    phi: np.ndarray
    psi: np.ndarray


def frame(point: ConePoint) -> FrameMatrices:
    """Phi with first column (1, x/t), identity elsewhere; Psi its inverse."""
    ratios = np.asarray(point.x) / point.t
    phi = np.eye(4)
    psi = np.eye(4)
    phi[1:, 0] = ratios
    psi[1:, 0] = -ratios
    return FrameMatrices(phi=phi, psi=psi)


def normal_and_measure(point: ConePoint):
    """Unit normal n and measure factor w with dsigma = w dx on the slice.

    n = (t^2+r^2)^{-1/2} (t, -x), w = t^{-1}(t^2+r^2)^{1/2}; the product
    n^0 w = 1, which is why all slice integrals reduce to the flat measure.
    """
    t = point.t
    x = np.asarray(point.x, dtype=float)
    root = np.sqrt(t * t + x @ x)
    n = np.concatenate([[t], -x]) / root
    return n, root / t


def capture_radius(s: float, r0: float, t0: float) -> float:
    """Radius where H_s exits the support ball r <= r0 + (t - t0).

    Solving r = r0 + sqrt(s^2 + r^2) - t0 for r (requires t0 > r0; beyond
    this radius every sample on the slice is identically zero).
    """
    d = t0 - r0
    if d <= 0:
        return np.inf
    if s <= d:
        return 0.0
    return (s * s - d * d) / (2.0 * d)


_FIELD_NAMES = ("A", "At", "chi", "chit", "psi")
_DERIV_CAPTURE = {"psi": "psit", "At": "att", "chit": "chitt"}


@dataclass
class HyperboloidSlice:
    """Fields and first time derivatives sampled on H_s over a grid sub-box.

    Arrays live on the sub-box `shape` placed at `offset` inside the parent
    grid; `mask` marks samples inside the capture radius.  Spatial stencils
    applied to slice arrays give the hyperboloid-tangent derivatives
    underline_a directly, since d/dx^a f(sqrt(s^2+r^2), x) = underline_a f.
    """

    s: float
    grid: Grid3
    offset: tuple[int, int, int]
    shape: tuple[int, int, int]
    mask: np.ndarray
    truncated: bool = False
    order: int = 4
    A: np.ndarray | None = None
    At: np.ndarray | None = None
    att: np.ndarray | None = None
    chi: np.ndarray | None = None
    chit: np.ndarray | None = None
    chitt: np.ndarray | None = None
    psi: np.ndarray | None = None
    psit: np.ndarray | None = None
    _coords: tuple | None = field(default=None, repr=False)

    @property
    def dx(self) -> float:
        return self.grid.dx

    @property
    def weight(self) -> float:
        return self.grid.cell_volume

    def coords(self):
        if self._coords is None:
            ax = self.grid.axis()
            xs = [ax[self.offset[d] : self.offset[d] + self.shape[d]] for d in range(3)]
            self._coords = np.meshgrid(*xs, indexing="ij")
        return self._coords

    @property
    def r(self) -> np.ndarray:
        x, y, z = self.coords()
        return np.sqrt(x * x + y * y + z * z)

    @property
    def t(self) -> np.ndarray:
        return np.sqrt(self.s**2 + self.r**2)

    def x_over_t(self) -> np.ndarray:
        t = self.t
        return np.stack([c / t for c in self.coords()])

    def s_over_t(self) -> np.ndarray:
        return self.s / self.t

    def underline(self, arr: np.ndarray, axis: int) -> np.ndarray:
        """underline_a derivative of a slice-sampled field (stencil in x^a).

        Slice arrays are zero-padded, not wrapped: fields vanish at the
        capture edge, so zero extension is exact up to the support taper.
        """
        return _subbox_diff(arr, axis, self.dx, self.order)

    def cartesian_spatial(self, arr: np.ndarray, arr_t: np.ndarray, axis: int) -> np.ndarray:
        """d_a = underline_a - (x^a/t) d_t on slice data."""
        return self.underline(arr, axis) - (self.coords()[axis] / self.t) * arr_t

    def boost_field(self, arr: np.ndarray, a: int) -> np.ndarray:
        """L_a f on the slice: since L_a = t underline_a, one stencil suffices."""
        return self.t * self.underline(arr, a - 1)

    def modified_boost_field(self, psi_arr: np.ndarray, a: int) -> np.ndarray:
        """Lhat_a psi = t underline_a psi + (matrix part) psi on the slice."""
        return self.boost_field(psi_arr, a) + cl.apply_matrix(
            cl.modified_boost_matrix(a), psi_arr
        )

    def boost_pair(self, f: np.ndarray, f_t: np.ndarray, a: int, f_tt: np.ndarray | None = None):
        """(L_a f, d_t(L_a f)) from the pair (f, d_t f).

        L_a f = t underline_a f; d_t(L_a f) = x^a f_tt + t d_a f_t + d_a f,
        which closes on slice data when the second time derivative f_tt is
        known (captured for At/chit, i.e. for the wave-type fields).
        """
        la_f = self.t * self.underline(f, a - 1)
        if f_tt is None:
            return la_f, None
        x_a = self.coords()[a - 1]
        la_ft = x_a * f_tt + self.t * self.cartesian_spatial(f_t, f_tt, a - 1)
        return la_f, la_ft + self.cartesian_spatial(f, f_t, a - 1)


def _subbox_diff(arr, axis, dx, order):
    """Stencil derivative on a non-periodic sub-box by zero padding."""
    pad = 2 if order == 4 else 1
    widths = [(0, 0)] * (arr.ndim - 3) + [(0, 0)] * 3
    ax = arr.ndim - 3 + axis
    widths[ax] = (pad, pad)
    padded = np.pad(arr, widths)
    if arr.ndim == 3:
        out = stencil.diff1(padded, axis, dx, order=order)
        sl = [slice(None)] * 3
        sl[axis] = slice(pad, padded.shape[ax] - pad)
        return out[tuple(sl)]
    lead = arr.shape[:-3]
    flat = padded.reshape((-1,) + padded.shape[-3:])
    outs = np.empty_like(flat)
    for k in range(flat.shape[0]):
        stencil.diff1(flat[k], axis, dx, order=order, out=outs[k])
    sl = [slice(None)] * padded.ndim
    sl[ax] = slice(pad, padded.shape[ax] - pad)
    return outs.reshape(padded.shape)[tuple(sl)]


def slice_integral(slc: HyperboloidSlice, integrand: np.ndarray) -> float:
    """Flat-measure Riemann sum of a per-sample scalar over the slice.

    The flat measure is dx^3 exactly (the n^0 component of the normal times
    the induced measure is 1); summation is compensated and fixed-order.
    """
    integrand = np.asarray(integrand)
    vals = np.where(slc.mask, integrand, 0.0)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = np.argwhere(bad)[0]
        gidx = tuple(int(i + o) for i, o in zip(idx[-3:], slc.offset))
        raise NonFiniteSampleError(f"non-finite slice sample at grid index {gidx}", index=gidx)
    return stencil.kahan_sum(vals) * slc.weight


def lagrange4_weights(ts: np.ndarray, t: np.ndarray):
    """Four-point Lagrange weights and their first derivatives at t.

    ts has shape (4,), t any shape; returns (w, dw) each of shape (4,) + t.shape.
    """
    t = np.asarray(t, dtype=float)
    w = np.empty((4,) + t.shape)
    dw = np.empty((4,) + t.shape)
    for i in range(4):
        others = [j for j in range(4) if j != i]
        denom = np.prod([ts[i] - ts[j] for j in others])
        diffs = [t - ts[j] for j in others]
        w[i] = diffs[0] * diffs[1] * diffs[2] / denom
        dw[i] = (
            diffs[1] * diffs[2] + diffs[0] * diffs[2] + diffs[0] * diffs[1]
        ) / denom
    return w, dw


def _slice_subbox(grid: Grid3, s, r0, t0, margin_cells=6):
    r_cap = capture_radius(s, r0, t0)
    half_cells = int(np.ceil((r_cap + margin_cells * grid.dx) / grid.dx))
    c = grid.n // 2
    lo = max(0, c - half_cells)
    hi = min(grid.n, c + half_cells + 1)
    truncated = r_cap > grid.half_width
    return (lo, lo, lo), (hi - lo, hi - lo, hi - lo), r_cap, truncated


def _empty_slice(grid: Grid3, s, r0, t0, has_A, has_chi, order=4, margin_cells=6):
    offset, shape, r_cap, truncated = _slice_subbox(grid, s, r0, t0, margin_cells)
    slc = HyperboloidSlice(
        s=float(s),
        grid=grid,
        offset=offset,
        shape=shape,
        mask=np.zeros(shape, dtype=bool),
        truncated=truncated,
        order=order,
    )
    slc.mask = slc.r <= min(r_cap + (margin_cells - 2) * grid.dx, grid.half_width)
    f8, c16 = np.float64, np.complex128
    if has_A:
        slc.A = np.zeros((4,) + shape, dtype=f8)
        slc.At = np.zeros((4,) + shape, dtype=f8)
        slc.att = np.zeros((4,) + shape, dtype=f8)
    if has_chi:
        slc.chi = np.zeros(shape, dtype=c16)
        slc.chit = np.zeros(shape, dtype=c16)
        slc.chitt = np.zeros(shape, dtype=c16)
    slc.psi = np.zeros((4,) + shape, dtype=c16)
    slc.psit = np.zeros((4,) + shape, dtype=c16)
    return slc


class SliceRecorder:
    """Incrementally captures one hyperboloid while the evolution crosses it.

    Grid points are pre-sorted by their slice time t*(x) = sqrt(s^2 + r^2);
    every advance of the time buffer finalizes the contiguous block of points
    whose t* fell inside the freshly covered window, using 4-level Lagrange
    interpolation (values, plus d/dt for the fields lacking a stored time
    derivative).
    """

    def __init__(self, grid: Grid3, s: float, r0: float, t0: float, has_A=True, has_chi=True, order=4):
        self.slice = _empty_slice(grid, s, r0, t0, has_A, has_chi, order=order)
        self.grid = grid
        self.s = float(s)
        tstar = self.slice.t
        flat_ok = self.slice.mask.ravel()
        order_idx = np.argsort(tstar.ravel(), kind="stable")
        order_idx = order_idx[flat_ok[order_idx]]
        self._sorted_local = order_idx
        self._sorted_t = tstar.ravel()[order_idx]
        self._next = 0
        self._done_hi = -np.inf
        # parent-grid flat indices of the sorted sub-box points
        sub_idx = np.unravel_index(order_idx, self.slice.shape)
        parent = tuple(sub_idx[d] + self.slice.offset[d] for d in range(3))
        self._parent_flat = np.ravel_multi_index(parent, grid.shape)

    @property
    def complete(self) -> bool:
        return self._next >= self._sorted_local.size

    @property
    def t_max(self) -> float:
        return float(self._sorted_t[-1]) if self._sorted_t.size else -np.inf

    def capture(self, times, states, final=False):
        """Capture every pending point bracketed by the buffered levels.

        times: ascending array of >= 4 level times; states: matching sequence
        with attributes A, At, chi, chit, psi (full parent-grid arrays).
        """
        if len(times) < 4 or self.complete:
            return 0
        ts = np.asarray(times[-4:], dtype=float)
        hi = ts[3] + 1e-9 if final else ts[2]
        i0 = self._next
        i1 = int(np.searchsorted(self._sorted_t, hi, side="right"))
        self._done_hi = hi
        if i1 <= i0:
            return 0
        sel = slice(i0, i1)
        tstars = self._sorted_t[sel]
        if tstars[0] < ts[0] - 1e-9:
            raise StalenessError(
                f"slice s={self.s}: point time {tstars[0]:.6g} below buffer range",
                required=(float(tstars[0]), hi),
                available=(float(ts[0]), float(ts[3])),
            )
        w, dw = lagrange4_weights(ts, tstars)
        flat = self._parent_flat[sel]
        local = self._sorted_local[sel]
        slc = self.slice
        last4 = states[-4:]

        def gather(name):
            return [getattr(st, name) for st in last4]

        def interp(levels, weights):
            lead = levels[0].shape[:-3]
            vals = 0.0
            for lv, wl in zip(levels, weights):
                flatlv = lv.reshape(lead + (-1,))
                vals = vals + wl * flatlv[..., flat]
            return vals

        if slc.A is not None:
            a_levels = gather("A")
            at_levels = gather("At")
            slc.A.reshape((4, -1))[:, local] = interp(a_levels, w)
            slc.At.reshape((4, -1))[:, local] = interp(at_levels, w)
            slc.att.reshape((4, -1))[:, local] = interp(at_levels, dw)
        if slc.chi is not None:
            chi_levels = gather("chi")
            chit_levels = gather("chit")
            slc.chi.reshape(-1)[local] = interp(chi_levels, w)
            slc.chit.reshape(-1)[local] = interp(chit_levels, w)
            slc.chitt.reshape(-1)[local] = interp(chit_levels, dw)
        psi_levels = gather("psi")
        slc.psi.reshape((4, -1))[:, local] = interp(psi_levels, w)
        slc.psit.reshape((4, -1))[:, local] = interp(psi_levels, dw)
        self._next = i1
        return i1 - i0


def interpolate_to_slice(times, states, s, grid: Grid3, r0: float, t0: float, order=4) -> HyperboloidSlice:
    """One-shot slice interpolation from a buffer spanning the slice's range.

    Raises StalenessError (with the required range) when the buffered levels
    do not cover [min t*, max t*] over the capture region.
    """
    times = np.asarray(times, dtype=float)
    if times.size < 4:
        raise StalenessError("need at least 4 buffered time levels", available=tuple(times))
    has_A = getattr(states[-1], "A", None) is not None
    has_chi = getattr(states[-1], "chi", None) is not None
    rec = SliceRecorder(grid, s, r0, t0, has_A=has_A, has_chi=has_chi, order=order)
    tmin = float(rec._sorted_t[0]) if rec._sorted_t.size else s
    tmax = rec.t_max
    if tmin < times[0] - 1e-9 or tmax > times[-1] + 1e-9:
        raise StalenessError(
            f"slice s={s}: needs t in [{tmin:.6g}, {tmax:.6g}], "
            f"buffer covers [{times[0]:.6g}, {times[-1]:.6g}]",
            required=(tmin, tmax),
            available=(float(times[0]), float(times[-1])),
        )
    for k in range(3, len(times)):
        rec.capture(times[: k + 1], states[: k + 1], final=(k == len(times) - 1))
    return rec.slice


# ---------------------------------------------------------------------------
# field samplers and nested-difference operators


class AnalyticSampler:
    """Samples a closed-form field fn(t, X, Y, Z) -> array on the grid."""

    def __init__(self, fn, grid: Grid3):
        self.fn = fn
        self.grid = grid
        self._xyz = grid.coords()

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.fn(t, *self._xyz))


class BufferSampler:
    """Cubic time interpolation over stored levels of one field stack."""

    def __init__(self, times, arrays, grid: Grid3):
        self.times = np.asarray(times, dtype=float)
        self.arrays = list(arrays)
        self.grid = grid
        if self.times.size < 4:
            raise StalenessError("buffer sampler needs >= 4 levels")

    def __call__(self, t: float) -> np.ndarray:
        ts = self.times
        if t < ts[0] - 1e-12 or t > ts[-1] + 1e-12:
            raise StalenessError(
                f"time {t:.6g} outside buffered range [{ts[0]:.6g}, {ts[-1]:.6g}]",
                required=(t, t),
                available=(float(ts[0]), float(ts[-1])),
            )
        k = int(np.clip(np.searchsorted(ts, t) - 2, 0, ts.size - 4))
        sub = ts[k : k + 4]
        w, _ = lagrange4_weights(sub, np.asarray(t))
        out = w[0] * self.arrays[k]
        for i in (1, 2, 3):
            out = out + w[i] * self.arrays[k + i]
        return out


def time_derivative_sampler(sampler, dt: float, order: int = 4):
    """d_t via centered differencing of any sampler, as a new sampler."""

    def call(t):
        if order == 4:
            return (
                sampler(t - 2 * dt)
                - 8.0 * sampler(t - dt)
                + 8.0 * sampler(t + dt)
                - sampler(t + 2 * dt)
            ) / (12.0 * dt)
        return (sampler(t + dt) - sampler(t - dt)) / (2.0 * dt)

    call.grid = sampler.grid
    return call


def spatial_derivative(sampler, axis: int, order: int = 4):
    """d_a via the periodic grid stencil, as a new sampler."""

    def call(t):
        f = sampler(t)
        lead = f.shape[:-3]
        if not lead:
            return stencil.diff1(f, axis, sampler.grid.dx, order=order)
        flat = f.reshape((-1,) + f.shape[-3:])
        out = np.empty_like(flat)
        for k in range(flat.shape[0]):
            stencil.diff1(flat[k], axis, sampler.grid.dx, order=order, out=out[k])
        return out.reshape(f.shape)

    call.grid = sampler.grid
    return call


def underline_derivative(sampler, a: int, t: float, dt: float, order: int = 4) -> np.ndarray:
    """underline_a f = (x^a/t) d_t f + d_a f evaluated on the grid at time t."""
    grid = sampler.grid
    xa = grid.coords()[a - 1]
    ft = time_derivative_sampler(sampler, dt, order)(t)
    fa = spatial_derivative(sampler, a - 1, order)(t)
    return (xa / t) * ft + fa


def boost_apply(sampler, J, t: float, dt: float, order: int = 4, modified: bool = False):
    """Apply a composition of boosts L_a (indices in J, up to |J| = 2).

    With modified=True each factor adds the constant spinor matrix part of
    clifford.modified_boost_matrix (field must have leading spinor axis 4).
    """
    J = tuple(J)
    if len(J) > 2:
        raise ValueError(f"boost order capped at 2, got |J| = {len(J)}")
    grid = sampler.grid
    coords = grid.coords()

    def lift(base, a):
        def call(tt):
            xa = coords[a - 1]
            ft = time_derivative_sampler(base, dt, order)(tt)
            fa = spatial_derivative(base, a - 1, order)(tt)
            out = xa * ft + tt * fa
            if modified:
                out = out + cl.apply_matrix(cl.modified_boost_matrix(a), base(tt))
            return out

        call.grid = grid
        return call

    cur = sampler
    for a in J:
        cur = lift(cur, a)
    return cur(t)


def dump_slice_csv(slc: HyperboloidSlice, path):
    """Write slice samples as CSV rows (s, i, j, k, t, field_id, re, im, weight)."""
    idx = np.argwhere(slc.mask)
    t = slc.t
    fields = []
    if slc.A is not None:
        fields += [(f"A{nu}", slc.A[nu]) for nu in range(4)]
    if slc.chi is not None:
        fields.append(("chi", slc.chi))
    fields += [(f"psi{k}", slc.psi[k]) for k in range(4)]
    with open(path, "w") as fh:
        fh.write("s,i,j,k,t,field_id,re,im,weight\n")
        for i, j, k in idx:
            ti = t[i, j, k]
            gi, gj, gk = (int(v + o) for v, o in zip((i, j, k), slc.offset))
            for name, arr in fields:
                val = complex(arr[i, j, k])
                fh.write(
                    f"{slc.s:.17g},{gi},{gj},{gk},{ti:.17g},{name},"
                    f"{val.real:.17g},{val.imag:.17g},{slc.weight:.17g}\n"
                )
