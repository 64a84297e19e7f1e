"""Model sources and algebraic transformations for the evolved systems.

Everything here is a pure pointwise function of field values and first
derivatives, broadcasting over arbitrary trailing grid axes.  Index raising
and lowering always goes through clifford.raise4/lower4 (eta = diag(-1,1,1,1))
so the sign conventions live in exactly one place.

Derivative stacks follow the layout d[mu] = partial_mu applied to the field,
e.g. dchi has shape (4, ...) and dpsi has shape (4, 4, ...) with dpsi[mu] a
spinor field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import clifford as cl

__all__ = [
    "CouplingParams",
    "DiracProcaMasses",
    "PointState",
    "higgs_quadratic",
    "chi_pm",
    "chi_mass_term",
    "bilinear_vector",
    "bilinear_scalar",
    "null_q0",
    "q_A",
    "q_chi",
    "q_psi",
    "apply_dirac_coupling",
    "q_chi_plus",
    "q_chi_minus",
    "chi_pm_sources_from_q_chi",
    "transform_A",
    "q_tilde_A",
    "transform_chi_plus",
    "q_tilde_chi_plus",
    "dirac_second_order_source",
    "dp_sources",
    "random_point_state",
]


@dataclass(frozen=True)
class CouplingParams:
    """Couplings (q, g, lambda, v) and the masses they induce.

    m_q^2 = 2 q^2 v^2, m_lambda^2 = 4 lambda v^2, m_g = g v^2.  The ground
    state phi0 defaults to the real value v but stays symbolic everywhere so
    a complex choice remains testable.  With theorem_regime set, the mass
    ordering m_g <= min(m_q, m_lambda) is enforced.
    """

    q: float
    g: float
    lam: float
    v: float
    phi0: complex = None  # type: ignore[assignment]
    theorem_regime: bool = False

    def __post_init__(self):
        if self.v <= 0:
            raise ValueError(f"vacuum expectation value must be positive, got {self.v}")
        if self.phi0 is None:
            object.__setattr__(self, "phi0", complex(self.v))
        if abs(abs(complex(self.phi0)) - self.v) > 1e-12 * max(1.0, self.v):
            raise ValueError(f"|phi0| = {abs(self.phi0)} must equal v = {self.v}")
        if self.q == 0:
            raise ValueError("m_q^2 = 2 q^2 v^2 must be positive: q = 0 not allowed")
        if self.lam <= 0:
            raise ValueError(f"m_lambda^2 = 4 lambda v^2 must be positive, got lambda = {self.lam}")
        if self.m_g < 0:
            raise ValueError("m_g = g v^2 must be >= 0")
        if self.theorem_regime and self.m_g > min(self.m_q, self.m_lambda) + 1e-12:
            raise ValueError(
                f"theorem regime requires m_g <= min(m_q, m_lambda): "
                f"m_g={self.m_g:.6g}, m_q={self.m_q:.6g}, m_lambda={self.m_lambda:.6g}"
            )

    @property
    def m_q(self) -> float:
        return np.sqrt(2.0) * abs(self.q) * self.v

    @property
    def m_lambda(self) -> float:
        return 2.0 * np.sqrt(abs(self.lam)) * self.v

    @property
    def m_g(self) -> float:
        return self.g * self.v**2


@dataclass(frozen=True)
class DiracProcaMasses:
    """Mass pair (m, M) of the Dirac-Proca model: boson m > 0, fermion M >= 0."""

    m: float
    M: float = 0.0

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError(f"Proca mass must be positive, got {self.m}")
        if self.M < 0:
            raise ValueError(f"Dirac mass must be >= 0, got {self.M}")


@dataclass
class PointState:
    """Field values and first derivatives at one point (or any grid of points)."""

    A: np.ndarray  # (4, ...)
    dA: np.ndarray  # (4, 4, ...), dA[mu, nu] = d_mu A^nu
    chi: np.ndarray  # (...)
    dchi: np.ndarray  # (4, ...)
    psi: np.ndarray  # (4, ...)
    dpsi: np.ndarray  # (4, 4, ...), dpsi[mu] a spinor field

    @classmethod
    def zeros(cls, shape=()) -> "PointState":
        return cls(
            A=np.zeros((4,) + shape),
            dA=np.zeros((4, 4) + shape),
            chi=np.zeros(shape, dtype=np.complex128),
            dchi=np.zeros((4,) + shape, dtype=np.complex128),
            psi=np.zeros((4,) + shape, dtype=np.complex128),
            dpsi=np.zeros((4, 4) + shape, dtype=np.complex128),
        )


def random_point_state(rng, shape=(), scale=1.0) -> PointState:
    """Generic random state for algebraic property tests."""

    def cplx(*s):
        return scale * (rng.standard_normal(s + shape) + 1j * rng.standard_normal(s + shape))

    return PointState(
        A=scale * rng.standard_normal((4,) + shape),
        dA=scale * rng.standard_normal((4, 4) + shape),
        chi=cplx(),
        dchi=cplx(4),
        psi=cplx(4),
        dpsi=cplx(4, 4),
    )


def higgs_quadratic(chi, p: CouplingParams):
    """phi0^* chi + chi^* phi0 + chi^* chi, the real combination in Q_psi/Q_A."""
    z = np.conj(p.phi0) * chi
    return 2.0 * z.real + (chi.conj() * chi).real


def chi_pm(chi, p: CouplingParams):
    """(chi_+, chi_-) = (phi0^* chi + chi^* phi0, phi0^* chi - chi^* phi0)."""
    z = np.asarray(np.conj(p.phi0) * chi)
    return z + z.conj(), z - z.conj()


def chi_mass_term(chi, p: CouplingParams):
    """Linear mass operator of the chi equation (everything but Box chi and Q_chi).

    Box chi - (phi0 / 2 v^2)(m_q^2 chi_- + m_lambda^2 chi_+) = Q_chi, so this
    returns (phi0 / 2 v^2)(m_q^2 chi_- + m_lambda^2 chi_+).
    """
    plus, minus = chi_pm(chi, p)
    return (p.phi0 / (2.0 * p.v**2)) * (p.m_q**2 * minus + p.m_lambda**2 * plus)


def bilinear_vector(psi) -> np.ndarray:
    """b^nu = psi^* gamma^0 gamma^nu psi, a real 4-vector field."""
    psi = np.asarray(psi)
    out = np.empty((4,) + psi.shape[1:], dtype=np.float64)
    u0, u1, l0, l1 = psi[0], psi[1], psi[2], psi[3]
    out[0] = (abs(u0) ** 2 + abs(u1) ** 2 + abs(l0) ** 2 + abs(l1) ** 2).real
    z03 = u0.conj() * l1
    z12 = u1.conj() * l0
    out[1] = 2.0 * (z03 + z12).real
    out[2] = 2.0 * (z03 - z12).imag
    out[3] = 2.0 * (u0.conj() * l0 - u1.conj() * l1).real
    return out


def bilinear_scalar(psi) -> np.ndarray:
    """c = psi^* gamma^0 psi, real."""
    psi = np.asarray(psi)
    return (
        abs(psi[0]) ** 2 + abs(psi[1]) ** 2 - abs(psi[2]) ** 2 - abs(psi[3]) ** 2
    ).real


def null_q0(dPhi, dPsi):
    """Null form Q_0(Phi, Psi) = (d_0 Phi)^* d_0 Psi - (grad Phi)^* . grad Psi.

    Inputs are derivative stacks with leading axis mu = 0..3; any further
    component axes are left to the caller (elementwise result).
    """
    dPhi = np.asarray(dPhi)
    dPsi = np.asarray(dPsi)
    prod = dPhi.conj() * dPsi
    return prod[0] - prod[1] - prod[2] - prod[3]


def _gamma_A_apply(A, psi):
    """(gamma^mu A_mu) psi with A_mu = eta A^nu, written blockwise for speed."""
    u0, u1, l0, l1 = psi[0], psi[1], psi[2], psi[3]
    a0, a1, a2, a3 = A[0], A[1], A[2], A[3]
    # sigma . a acting on a 2-spinor (w0, w1):
    #   (a3 w0 + (a1 - i a2) w1, (a1 + i a2) w0 - a3 w1)
    su0 = a3 * l0 + (a1 - 1j * a2) * l1
    su1 = (a1 + 1j * a2) * l0 - a3 * l1
    sl0 = a3 * u0 + (a1 - 1j * a2) * u1
    sl1 = (a1 + 1j * a2) * u0 - a3 * u1
    out = np.empty_like(psi)
    # gamma^mu A_mu = -A^0 gamma^0 + A^i gamma^i
    out[0] = -a0 * u0 + su0
    out[1] = -a0 * u1 + su1
    out[2] = -a0 * l0 - sl0
    out[3] = -a0 * l1 - sl1
    return out


def q_A(state: PointState, nu: int, p: CouplingParams) -> np.ndarray:
    """Source of (Box - m_q^2) A^nu: the cubic U(1) nonlinearity.

    iq(chi^* d^nu chi - (d^nu chi^*) chi)
    + 2 q^2 A^nu (phi0^* chi + chi^* phi0 + chi^* chi) + q psi^* g0 g^nu psi.
    """
    dchi_up = cl.raise4(state.dchi)
    current = -2.0 * p.q * (state.chi.conj() * dchi_up[nu]).imag
    quad = 2.0 * p.q**2 * state.A[nu] * higgs_quadratic(state.chi, p)
    return current + quad + p.q * bilinear_vector(state.psi)[nu]


def q_chi(state: PointState, p: CouplingParams) -> np.ndarray:
    """Source of the chi equation (complex)."""
    a_dot_dchi = np.einsum("m...,m...->...", state.A, state.dchi)
    plus, minus = chi_pm(state.chi, p)
    aa = cl.minkowski_dot(state.A, state.A)
    csq = (state.chi.conj() * state.chi).real
    return (
        2j * p.q * a_dot_dchi
        + p.q**2 * state.chi * minus
        + p.q**2 * aa * (p.phi0 + state.chi)
        + 2.0 * p.lam * csq * p.phi0
        + 2.0 * p.lam * state.chi * (plus + csq)
        - p.g * (p.phi0 + state.chi) * bilinear_scalar(state.psi)
    )


def q_psi(state: PointState, p: CouplingParams) -> np.ndarray:
    """Source of i gamma^mu d_mu psi - m_g psi = Q_psi.

    Q_psi = g (phi0^* chi + chi^* phi0 + chi^* chi) psi - q gamma^mu A_mu psi.
    """
    h = higgs_quadratic(state.chi, p)
    return p.g * h * state.psi - p.q * _gamma_A_apply(state.A, state.psi)


def apply_dirac_coupling(state: PointState, p: CouplingParams, psi=None) -> np.ndarray:
    """H psi for H = g(phi0^* chi + chi^* phi0 + chi^* chi) - q gamma^mu A_mu.

    Q_psi = H psi; exposed separately because the gamma^0-hermiticity of H is
    what conserves both the flat and hyperboloidal Dirac energies.
    """
    if psi is None:
        psi = state.psi
    h = higgs_quadratic(state.chi, p)
    return p.g * h * psi - p.q * _gamma_A_apply(state.A, psi)


def q_chi_plus(state: PointState, p: CouplingParams) -> np.ndarray:
    """Source of (Box - m_lambda^2) chi_+ (real)."""
    plus, minus = chi_pm(state.chi, p)
    dminus = np.conj(p.phi0) * state.dchi - state.dchi.conj() * p.phi0
    a_dot_dminus = np.einsum("m...,m...->...", state.A.astype(np.complex128), dminus)
    aa = cl.minkowski_dot(state.A, state.A)
    csq = (state.chi.conj() * state.chi).real
    c = bilinear_scalar(state.psi)
    out = (
        2j * p.q * a_dot_dminus
        + p.q**2 * minus**2
        + p.q**2 * aa * (2.0 * p.v**2 + plus)
        + 4.0 * p.lam * p.v**2 * csq
        + 2.0 * p.lam * plus**2
        + 2.0 * p.lam * plus * csq
        - p.g * (2.0 * p.v**2 + plus) * c
    )
    return out.real


def q_chi_minus(state: PointState, p: CouplingParams) -> np.ndarray:
    """Source of (Box - m_q^2) chi_- (purely imaginary)."""
    plus, minus = chi_pm(state.chi, p)
    dplus = np.conj(p.phi0) * state.dchi + state.dchi.conj() * p.phi0
    a_dot_dplus = np.einsum("m...,m...->...", state.A.astype(np.complex128), dplus)
    aa = cl.minkowski_dot(state.A, state.A)
    csq = (state.chi.conj() * state.chi).real
    c = bilinear_scalar(state.psi)
    return (
        2j * p.q * a_dot_dplus
        + p.q**2 * minus * plus
        + p.q**2 * aa * minus
        + 2.0 * p.lam * minus * plus
        + 2.0 * p.lam * minus * csq
        - p.g * minus * c
    )


def chi_pm_sources_from_q_chi(state: PointState, p: CouplingParams):
    """(Q_chi+, Q_chi-) via the conjugation route phi0^* Q_chi +/- Q_chi^* phi0.

    Independent of the expanded expressions above; the two routes must agree
    identically, which pins every sign in the expansion.
    """
    qc = q_chi(state, p)
    z = np.conj(p.phi0) * qc
    return z + z.conj(), z - z.conj()


def transform_A(state: PointState, nu: int, p: CouplingParams) -> np.ndarray:
    """Transformed vector variable A^nu + (q/m_q^2) psi^* g0 g^nu psi."""
    if p.m_q == 0:
        raise ValueError("transformation undefined for m_q = 0")
    return state.A[nu] + (p.q / p.m_q**2) * bilinear_vector(state.psi)[nu]


def transform_chi_plus(chi, psi, p: CouplingParams) -> np.ndarray:
    """Transformed scalar chi_+ - (2 m_g / m_lambda^2) psi^* g0 psi (real)."""
    plus, _ = chi_pm(chi, p)
    return plus.real - (2.0 * p.m_g / p.m_lambda**2) * bilinear_scalar(psi)


def dirac_second_order_source(state: PointState, p: CouplingParams) -> np.ndarray:
    """W with Box psi - m_g^2 psi = W, i.e. W = m_g Q_psi + i gamma^mu d_mu Q_psi.

    d_mu Q_psi is expanded by the product rule (Q_psi contains no derivatives),
    so only the first derivatives carried by the state are needed.
    """
    h = higgs_quadratic(state.chi, p)
    qpsi = p.g * h * state.psi - p.q * _gamma_A_apply(state.A, state.psi)
    w = p.m_g * qpsi.astype(np.complex128)
    tot = p.phi0 + state.chi
    for mu in range(4):
        dh = 2.0 * (tot.conj() * state.dchi[mu]).real
        dq_mu = (
            p.g * dh * state.psi
            + p.g * h * state.dpsi[mu]
            - p.q * _gamma_A_apply(state.dA[mu], state.psi)
            - p.q * _gamma_A_apply(state.A, state.dpsi[mu])
        )
        w = w + 1j * cl.apply_matrix(cl.GAMMA[mu], dq_mu)
    return w


def _null_q0_bilinear(dpsi, matrix):
    """Q_0(psi, M psi) = (d_0 psi)^* M d_0 psi - sum_i (d_i psi)^* M d_i psi."""
    out = cl.bilinear(dpsi[0], matrix, dpsi[0])
    for i in (1, 2, 3):
        out = out - cl.bilinear(dpsi[i], matrix, dpsi[i])
    return out


def q_tilde_A(state: PointState, nu: int, p: CouplingParams) -> np.ndarray:
    """Source of (Box - m_q^2) Atilde^nu along solutions (real).

    Derived by the product rule from Box(psi^* G psi) with G = g0 g^nu and
    Box psi = m_g^2 psi + W: the q psi^* G psi piece of Q_A cancels and the
    surviving undifferentiated bilinear carries the factor m_g^2.
    """
    if p.m_q == 0:
        raise ValueError("transformation undefined for m_q = 0")
    gmat = cl.GAMMA[0] @ cl.GAMMA[nu]
    b_nu = bilinear_vector(state.psi)[nu]
    w = dirac_second_order_source(state, p)
    cross = 2.0 * cl.bilinear(state.psi, gmat, w).real
    q0 = _null_q0_bilinear(state.dpsi, gmat).real
    remainder = q_A(state, nu, p) - p.q * b_nu
    return (
        remainder
        + (2.0 * p.q * p.m_g**2 / p.m_q**2) * b_nu
        + (p.q / p.m_q**2) * cross
        - (2.0 * p.q / p.m_q**2) * q0
    )


def q_tilde_chi_plus(state: PointState, p: CouplingParams) -> np.ndarray:
    """Source of (Box - m_lambda^2) chi_tilde_+ along solutions (real).

    The +2 m_g psi^* g0 psi contribution cancels the -2 g v^2 psi^* g0 psi
    piece of Q_chi+ (2 m_g = 2 g v^2), leaving the bilinear with an m_g^3
    coefficient only.
    """
    c = bilinear_scalar(state.psi)
    w = dirac_second_order_source(state, p)
    cross = 2.0 * cl.bilinear(state.psi, cl.GAMMA[0], w).real
    q0 = _null_q0_bilinear(state.dpsi, cl.GAMMA[0]).real
    ml2 = p.m_lambda**2
    return (
        q_chi_plus(state, p)
        + 2.0 * p.m_g * c
        - (4.0 * p.m_g**3 / ml2) * c
        - (2.0 * p.m_g / ml2) * cross
        + (4.0 * p.m_g / ml2) * q0
    )


def dp_sources(state: PointState, masses: DiracProcaMasses):
    """Right-hand sides of the Dirac-Proca system, exactly as displayed:

    (Box - m^2) A^nu = -psi^* g0 g^nu (P_L psi)
    -i gamma^mu d_mu psi + M psi = -gamma^mu A_mu (P_L psi)
    """
    psi_l = cl.project_left(state.psi)
    w = psi_l[:2]  # P_L psi = (w, -w)
    a_src = np.empty((4,) + np.asarray(state.psi).shape[1:], dtype=np.float64)
    # psi^* g0 g^0 P_L psi = psi^* P_L psi = 2 w^* w
    a_src[0] = -2.0 * (w[0].conj() * w[0] + w[1].conj() * w[1]).real
    # psi^* g0 g^i P_L psi = -2 w^* sigma^i w, so the A-source is +2 w^* sigma^i w
    z01 = w[0].conj() * w[1]
    a_src[1] = 4.0 * z01.real
    a_src[2] = 4.0 * z01.imag
    a_src[3] = 2.0 * (w[0].conj() * w[0] - w[1].conj() * w[1]).real
    psi_src = -_gamma_A_apply(state.A, psi_l)
    return a_src, psi_src
