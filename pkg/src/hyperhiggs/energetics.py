"""Energy functionals on flat snapshots and hyperboloid slices.

The same Dirac energy is evaluated three independent ways (defining integrand,
half-sum-of-squares form, Cholesky-factored form) and the Klein-Gordon energy
in its three frame rewritings; the pairwise agreement of these routes is the
backbone of the algebraic test suite.  All integrals use the flat measure
dx^3 with compensated fixed-order summation.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from . import clifford as cl
from . import stencil
from .geometry import HyperboloidSlice, slice_integral

__all__ = [
    "EnergyReport",
    "energy_flat",
    "energy_hyperboloidal",
    "energy_plus_form",
    "energy_cholesky_form",
    "energy_lower_bound",
    "kg_energy_forms",
    "second_order_energy",
    "weyl_energy",
    "weyl_pair_energies",
    "energy_report",
    "energy_estimate_check",
]


def energy_flat(psi: np.ndarray, cell_volume: float, mask=None) -> float:
    """Flat-slice L^2 mass of the spinor: int psi^* psi dx on t = const."""
    dens = np.zeros(psi.shape[1:], dtype=np.float64)
    for k in range(psi.shape[0]):
        dens += (psi[k].conj() * psi[k]).real
    if mask is not None:
        return stencil.masked_kahan_sum(dens, mask) * cell_volume
    return stencil.kahan_sum(dens) * cell_volume


def _gamma0_gamma_dot(n1, n2, n3, psi):
    """(n_j gamma^0 gamma^j) psi: both Pauli blocks act off-diagonally."""
    u0, u1, l0, l1 = psi[0], psi[1], psi[2], psi[3]
    out = np.empty_like(psi)
    out[0] = n3 * l0 + (n1 - 1j * n2) * l1
    out[1] = (n1 + 1j * n2) * l0 - n3 * l1
    out[2] = n3 * u0 + (n1 - 1j * n2) * u1
    out[3] = (n1 + 1j * n2) * u0 - n3 * u1
    return out


def _abs2_sum(arr) -> np.ndarray:
    dens = (arr[0].conj() * arr[0]).real.astype(np.float64, copy=True)
    for k in range(1, arr.shape[0]):
        dens += (arr[k].conj() * arr[k]).real
    return dens


def energy_hyperboloidal(slc: HyperboloidSlice, psi=None) -> float:
    """E^H(s, psi) = int (psi^* psi - (x_i/t) psi^* g0 g^i psi) dx."""
    psi = slc.psi if psi is None else psi
    X = slc.x_over_t()
    gpsi = _gamma0_gamma_dot(X[0], X[1], X[2], psi)
    dens = _abs2_sum(psi)
    for k in range(4):
        dens -= (psi[k].conj() * gpsi[k]).real
    return slice_integral(slc, dens)


def energy_plus_form(slc: HyperboloidSlice, psi=None) -> float:
    """E^+ with the minus-sign bracket: int |psi - (x_i/t) g0 g^i psi|^2 dx.

    This is the bracket consistent with E^H = E^+/2 + (1/2)int (s/t)^2 |psi|^2.
    """
    psi = slc.psi if psi is None else psi
    X = slc.x_over_t()
    br = psi - _gamma0_gamma_dot(X[0], X[1], X[2], psi)
    return slice_integral(slc, _abs2_sum(br))


def energy_cholesky_form(slc: HyperboloidSlice, psi=None) -> float:
    """E^H as a manifest square int |P psi|^2 dx.

    The lower-triangular factor satisfies P^*P = I + n_j g0 g^j, so matching
    the E^H integrand (which carries -x_i/t) means evaluating P at n = -x/t.
    """
    psi = slc.psi if psi is None else psi
    X = slc.x_over_t()
    z = cl.apply_cholesky(-X[0], -X[1], -X[2], slc.s_over_t(), psi)
    return slice_integral(slc, _abs2_sum(z))


def energy_lower_bound(slc: HyperboloidSlice, psi=None) -> float:
    """int (s/t)^2 psi^* psi dx, the norm E^H controls from below (x2)."""
    psi = slc.psi if psi is None else psi
    return slice_integral(slc, slc.s_over_t() ** 2 * _abs2_sum(psi))


def kg_energy_forms(slc: HyperboloidSlice, w, wt, m: float, dw=None):
    """The Klein-Gordon slice energy in its three equivalent forms.

    form 1: |wt|^2 + sum |d_a w|^2 + 2 (x^a/t) Re(wt^* d_a w) + m^2 |w|^2
    form 2: |(s/t) wt|^2 + sum |underline_a w|^2 + m^2 |w|^2
    form 3: |underline_perp w|^2 + sum |(s/t) d_a w|^2
            + sum_{a<b} |t^{-1} Omega_ab w|^2 + m^2 |w|^2

    `dw` may supply the Cartesian spatial derivatives (3, ...); otherwise they
    are built from slice stencils via d_a = underline_a - (x^a/t) d_t.
    """
    w = np.asarray(w)
    wt = np.asarray(wt)
    if dw is None:
        dw = np.stack([slc.cartesian_spatial(w, wt, a) for a in range(3)])
    X = slc.x_over_t()
    sigma = slc.s_over_t()
    m2w2 = m * m * (w.conj() * w).real

    f1 = (wt.conj() * wt).real + m2w2
    for a in range(3):
        f1 += (dw[a].conj() * dw[a]).real + 2.0 * X[a] * (wt.conj() * dw[a]).real

    f2 = (sigma * abs(wt)) ** 2 + m2w2
    for a in range(3):
        ua = dw[a] + X[a] * wt
        f2 += (ua.conj() * ua).real

    perp = wt + X[0] * dw[0] + X[1] * dw[1] + X[2] * dw[2]
    f3 = (perp.conj() * perp).real + m2w2
    for a in range(3):
        f3 += (sigma * abs(dw[a])) ** 2
    xs = slc.coords()
    for a in range(3):
        for b in range(a + 1, 3):
            om = (xs[a] * dw[b] - xs[b] * dw[a]) / slc.t
            f3 += (om.conj() * om).real

    return (
        slice_integral(slc, f1),
        slice_integral(slc, f2),
        slice_integral(slc, f3),
    )


def second_order_energy(slc: HyperboloidSlice, M: float, psi=None, psit=None) -> float:
    """Wave-equation energy of the spinor components with mass M (appears squared).

    int (|d_t psi|^2 + sum_i |d_i psi|^2 + M^2 |psi|^2
         + 2 (x^i/t) Re[d_t psi d_i psi^*]) dx
    """
    psi = slc.psi if psi is None else psi
    psit = slc.psit if psit is None else psit
    X = slc.x_over_t()
    dens = _abs2_sum(psit) + M * M * _abs2_sum(psi)
    for a in range(3):
        dpa = np.stack([slc.cartesian_spatial(psi[k], psit[k], a) for k in range(4)])
        dens += _abs2_sum(dpa)
        for k in range(4):
            dens += 2.0 * X[a] * (psit[k] * dpa[k].conj()).real
    return slice_integral(slc, dens)


def weyl_energy(slc: HyperboloidSlice, u: np.ndarray, sign: int) -> float:
    """E^sigma_+- (s, u) = int (u^*u +- (x_j/t) u^* sigma^j u) dx for a 2-spinor field."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    X = slc.x_over_t()
    z01 = u[0].conj() * u[1]
    dens = _abs2_sum(u) + sign * (
        X[0] * 2.0 * z01.real
        + X[1] * 2.0 * z01.imag
        + X[2] * ((u[0].conj() * u[0]).real - (u[1].conj() * u[1]).real)
    )
    return slice_integral(slc, dens)


def weyl_pair_energies(slc: HyperboloidSlice, psi=None):
    """(E^sigma_-(s,u), E^sigma_+(s,v)) for the split psi = (u+v, u-v).

    The contraction oracle fixes the pairing: E^H(psi) = 2(E^-(u) + E^+(v)).
    """
    psi = slc.psi if psi is None else psi
    u, v = cl.weyl_split(psi)
    return weyl_energy(slc, u, -1), weyl_energy(slc, v, +1)


@dataclass
class EnergyReport:
    """One energies.csv row: every functional evaluated on a single slice."""

    s: float
    E_flat: float
    E_hyp: float
    E_plus: float
    E_chol: float
    E_second: float
    E_kg_1: float
    E_kg_2: float
    E_kg_3: float
    E_weyl_p: float
    E_weyl_m: float
    lower_bound: float

    @staticmethod
    def csv_header() -> str:
        return ",".join(f.name for f in fields(EnergyReport))

    def csv_row(self) -> str:
        return ",".join(f"{getattr(self, f.name):.17g}" for f in fields(EnergyReport))


def energy_report(slc: HyperboloidSlice, dirac_mass: float, scalar_mass: float | None = None) -> EnergyReport:
    """Evaluate the full functional family on one completed slice."""
    em, ep = weyl_pair_energies(slc)
    if slc.chi is not None and scalar_mass is not None:
        kg1, kg2, kg3 = kg_energy_forms(slc, slc.chi, slc.chit, scalar_mass)
    else:
        kg1 = kg2 = kg3 = 0.0
    flat_l2 = slice_integral(slc, _abs2_sum(slc.psi))
    return EnergyReport(
        s=slc.s,
        E_flat=flat_l2,
        E_hyp=energy_hyperboloidal(slc),
        E_plus=energy_plus_form(slc),
        E_chol=energy_cholesky_form(slc),
        E_second=second_order_energy(slc, dirac_mass),
        E_kg_1=kg1,
        E_kg_2=kg2,
        E_kg_3=kg3,
        E_weyl_p=ep,
        E_weyl_m=em,
        lower_bound=energy_lower_bound(slc),
    )


def energy_estimate_check(s_values, eh_values, source_l2):
    """Margins of the first-order energy inequality between sampled slices.

    sqrt(E^H(s)) <= sqrt(E^H(s0)) + int_{s0}^{s} ||F||_{L2_f} dsigma; the
    integral is a trapezoid over the sampled s grid using source_l2(s).
    Returns (margins, lhs, rhs) with margin = rhs - lhs, one entry per s.
    """
    s_values = np.asarray(s_values, dtype=float)
    lhs = np.sqrt(np.maximum(np.asarray(eh_values, dtype=float), 0.0))
    fnorm = np.array([float(source_l2(s)) for s in s_values])
    integral = np.concatenate([[0.0], np.cumsum(0.5 * (fnorm[1:] + fnorm[:-1]) * np.diff(s_values))])
    rhs = lhs[0] + integral
    return rhs - lhs, lhs, rhs
