"""Exact Wigner-function evolution in a finite-temperature reservoir.

The channel acts by Gaussian convolution,

    W(z, tau) = (2 / (pi Tbar)) Int d^2a W(a) exp(-2 |z - a e^{-tau}|^2 / Tbar),

with T = 1 - e^{-2 tau} and Tbar = (1 + 2 nbar) T.  Applied to a branch of the
static closed form (Gaussian times Hermite series, see `wigner.SeriesBranch`)
the integral is again a Gaussian times a finite Hermite series:

    W(z, tau) = K * 2/(Tbar sqrt(disc)) * exp(P(z))
                * sum_j (m!)^2 (base + Y)^{m-j} / ((j!)^2 (m-j)!)
                        * M_j(Q/2, S1) * M_j(R/2, S2)

where M_j is the scaled Hermite polynomial and the scalars follow from one
application of the standard Gaussian integral

    Int d^2b exp(A|b|^2 + Bb + Cb* + Db^2 + Eb*^2)
        = pi / sqrt(A^2 - 4DE) * exp((-ABC + B^2 E + C^2 D) / (A^2 - 4DE)).

The per-order coefficient (base + Y)^{m-j} is the binomial collapse of the
published-style double series over the static order and the kernel-coupling
order; collapsing it is what keeps the evaluation cancellation-free at large
m (the expanded double sum loses ~10 digits for m >= 8 near the decay
thresholds).

The exponent is assembled as P = (theta(z) - 2 Tbar e^{2 tau} |z|^2) / den
with den = e^{-2 tau} - quad_abs * Tbar + Tbar^2 e^{2 tau}, an algebraically
identical but cancellation-free form of B/A - 2|z|^2/Tbar that stays stable
as tau -> 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, QuadratureError, RealnessError
from .specialfn import CompensatedSum, LogComplex, hermite_ladder, log_factorial
from .states import CompassStateSpec, ReservoirSpec, normalization, reservoir_constants
from .wigner import (
    CHESS_IMAG_RTOL,
    TOTAL_IMAG_ATOL,
    SeriesBranch,
    _as_grid,
    _scalar_ok,
    chess_branches,
    cross_branch,
    eval_branch_static,
    wigner_total,
)

TAU_MIN = 1e-6  # below this the kernel degenerates to a delta; use the static path

EVOLVED_IMAG_RTOL = 1e-8
EVOLVED_TOTAL_IMAG_ATOL = 1e-9

_GH_NODE_LADDER = (48, 72, 108, 160, 240, 360, 520)
_GL_NODE_LADDER = (64, 96, 144, 216, 324)


@dataclass(frozen=True)
class _EvolvedFrame:
    """Reservoir- and branch-dependent scalars of the evolved series."""

    disc: float
    den: float
    tbar: float
    u1: complex
    u2: complex
    coupling: complex  # Y: kernel-induced coupling between the two Hermite slots
    g: complex  # base + Y, the collapsed per-order expansion parameter


def _evolved_frame(branch: SeriesBranch, res: ReservoirSpec) -> _EvolvedFrame:
    _, tbar = reservoir_constants(res)
    em2 = math.exp(-2.0 * res.tau)
    ep2 = math.exp(2.0 * res.tau)
    a_full = branch.quad_abs - 2.0 * em2 / tbar
    den = em2 - branch.quad_abs * tbar + tbar * tbar * ep2
    disc = (4.0 * em2 / (tbar * tbar)) * den
    d, e = branch.quad_z2, branch.quad_zc2
    u1 = 4.0 * (-a_full * branch.a1 * branch.b1 + branch.a1**2 * e + branch.b1**2 * d) / disc
    u2 = 4.0 * (-a_full * branch.a2 * branch.b2 + branch.a2**2 * e + branch.b2**2 * d) / disc
    coupling = (
        -4.0 * a_full * (branch.a1 * branch.b2 + branch.a2 * branch.b1)
        + 8.0 * branch.a1 * branch.a2 * e
        + 8.0 * branch.b1 * branch.b2 * d
    ) / disc
    return _EvolvedFrame(
        disc=disc, den=den, tbar=tbar, u1=u1, u2=u2, coupling=coupling, g=branch.base + coupling
    )


def eval_branch_evolved(branch: SeriesBranch, zeta, res: ReservoirSpec):
    """Evaluate one evolved branch at zeta (complex scalar or array)."""
    if res.tau < TAU_MIN:
        raise ParameterError(
            f"evolved series needs tau >= {TAU_MIN}; dispatch smaller times to the static path"
        )
    frame = _evolved_frame(branch, res)
    z = _as_grid(zeta)
    zc = np.conj(z)
    abs2 = z.real**2 + z.imag**2
    em = math.exp(-res.tau)
    ep2 = math.exp(2.0 * res.tau)
    theta = branch.quad_abs * abs2 + branch.quad_z2 * z**2 + branch.quad_zc2 * zc**2
    exponent = (theta - 2.0 * frame.tbar * ep2 * abs2) / frame.den
    a_full = branch.quad_abs - 2.0 * em * em / frame.tbar
    b0 = 2.0 * em * zc / frame.tbar
    c0 = 2.0 * em * z / frame.tbar
    d, e = branch.quad_z2, branch.quad_zc2
    q = (
        -2.0 * a_full * (branch.a1 * c0 + branch.b1 * b0)
        + 4.0 * branch.a1 * b0 * e
        + 4.0 * branch.b1 * c0 * d
    ) / frame.disc
    r_ = (
        -2.0 * a_full * (branch.a2 * c0 + branch.b2 * b0)
        + 4.0 * branch.a2 * b0 * e
        + 4.0 * branch.b2 * c0 * d
    ) / frame.disc
    s1 = 1.0 - frame.u1
    s2 = 1.0 - frame.u2
    log_scale = branch.log_scale.scaled(
        math.log(2.0 / (frame.tbar * math.sqrt(frame.disc)))
    )
    series = _evolved_series_sum(branch.m, frame.g, s1, s2, q / 2.0, r_ / 2.0, log_scale)
    return np.exp(exponent) * series


def _evolved_series_sum(m, g, s1, s2, w1, w2, log_scale):
    lad1 = hermite_ladder(m, w1, s1)
    lad2 = hermite_ladder(m, w2, s2)
    acc = CompensatedSum(np.asarray(w1, dtype=complex) * 0.0)
    lf_m = log_factorial(m)
    for j in range(m + 1):
        coeff = log_scale.scaled(
            2.0 * lf_m - 2.0 * log_factorial(j) - log_factorial(m - j)
        ).power_times(g, m - j)
        acc.add(coeff.value() * lad1[j] * lad2[j])
    return acc.total()


def _project_real_evolved(values, what: str):
    values = np.asarray(values)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if residue > EVOLVED_IMAG_RTOL * max(1.0, scale):
        raise RealnessError(
            f"{what}: imaginary residue {residue:g} exceeds {EVOLVED_IMAG_RTOL:g} x scale {scale:g}"
        )
    return values.real


def _evolved_chess(variant: str, zeta, m: int, r: float, res: ReservoirSpec):
    bp, bm = chess_branches(variant, m, r)
    vals = eval_branch_evolved(bp, zeta, res) + eval_branch_evolved(bm, zeta, res)
    return _scalar_ok(zeta, _project_real_evolved(vals, f"evolved {variant} chess"))


def evolved_pa_chess(zeta, m: int, r: float, res: ReservoirSpec):
    """Evolved chessboard component of the photon-added state."""
    return _evolved_chess("pa", zeta, m, r, res)


def evolved_ps_chess(zeta, m: int, r: float, res: ReservoirSpec):
    """Evolved chessboard component of the photon-subtracted state."""
    return _evolved_chess("ps", zeta, m, r, res)


def evolved_pa_cross(zeta, m: int, r: float, res: ReservoirSpec):
    """Evolved cross component of the photon-added state (complex)."""
    vals = eval_branch_evolved(cross_branch("pa", m, r), zeta, res)
    return complex(vals) if np.asarray(zeta).ndim == 0 else vals


def evolved_ps_cross(zeta, m: int, r: float, res: ReservoirSpec):
    """Evolved cross component of the photon-subtracted state (complex)."""
    vals = eval_branch_evolved(cross_branch("ps", m, r), zeta, res)
    return complex(vals) if np.asarray(zeta).ndim == 0 else vals


def evolved_total(zeta, spec: CompassStateSpec, res: ReservoirSpec):
    """Normalized evolved Wigner function; static path below TAU_MIN."""
    if res.tau < TAU_MIN:
        return wigner_total(zeta, spec)
    z = _as_grid(zeta)
    bp, bm = chess_branches(spec.variant, spec.m, spec.r)
    cx = cross_branch(spec.variant, spec.m, spec.r)
    n2 = normalization(spec) ** 2
    chess = np.asarray(eval_branch_evolved(bp, z, res) + eval_branch_evolved(bm, z, res))
    residue = float(np.max(np.abs(n2 * chess.imag)))
    if residue > EVOLVED_TOTAL_IMAG_ATOL:
        raise RealnessError(
            f"normalized evolved chess residue {residue:g} exceeds {EVOLVED_TOTAL_IMAG_ATOL:g}"
        )
    cross = np.asarray(eval_branch_evolved(cx, z, res))
    return _scalar_ok(zeta, n2 * (chess.real + 2.0 * cross.real))


def thermal_wigner(zeta, nbar: float):
    """Stationary thermal Wigner function, the tau -> infinity channel limit.

    Normalized like every other Wigner value here (vacuum peak 2/pi, unit
    integral over d^2z); at nbar = 0 this is exactly the vacuum Gaussian.
    """
    if nbar < 0.0:
        raise ParameterError(f"nbar must be >= 0, got {nbar!r}")
    z = _as_grid(zeta)
    width = 1.0 + 2.0 * nbar
    out = 2.0 / (math.pi * width) * np.exp(-2.0 * (z.real**2 + z.imag**2) / width)
    return _scalar_ok(zeta, out)


# --- reference quadrature -------------------------------------------------


def convolve_reference(wigner_fn, zeta, res: ReservoirSpec, tol: float = 1e-9,
                       half_width: float = 14.0):
    """Evolve a pointwise Wigner function by direct adaptive quadrature.

    Independent of the closed forms above: integrates the Gaussian channel
    kernel against `wigner_fn` (which must be bounded with Gaussian decay
    inside |a| <= half_width).  For narrow kernels the integral is recentred
    exactly onto Gauss-Hermite nodes; once the kernel is wider than the state
    support it switches to panel Gauss-Legendre on the original variable.
    Node counts increase along a fixed ladder until two consecutive levels
    agree within tol; raises QuadratureError otherwise.  Complex-valued
    integrands are allowed (used for cross components); real input gives a
    real result.
    """
    if res.tau < TAU_MIN:
        raise ParameterError(f"convolve_reference needs tau >= {TAU_MIN}")
    _, tbar = reservoir_constants(res)
    zeta = complex(zeta)
    spread = math.exp(res.tau) * math.sqrt(tbar / 2.0)

    if spread <= 0.5 * half_width:
        ladder = _GH_NODE_LADDER

        def evaluate(n):
            return _convolve_gauss_hermite(wigner_fn, zeta, res.tau, tbar, n)

    else:
        ladder = _GL_NODE_LADDER

        def evaluate(n):
            return _convolve_gauss_legendre(wigner_fn, zeta, res.tau, tbar, n, half_width)

    prev = None
    for n in ladder:
        cur = evaluate(n)
        if prev is not None and abs(cur - prev) < tol:
            return _maybe_real(cur)
        prev = cur
    raise QuadratureError(
        f"reference convolution did not converge to {tol:g} at zeta={zeta}, tau={res.tau}"
    )


def _maybe_real(value: complex):
    if abs(value.imag) <= 1e-12 * max(1.0, abs(value.real)):
        return value.real
    return value


def _convolve_gauss_hermite(fn, zeta, tau, tbar, nodes):
    """Recentred form: W(z,tau) = e^{2 tau}/pi Int fn(z e^tau + e^tau sqrt(Tbar/2) u) e^{-|u|^2} d^2u."""
    x, w = np.polynomial.hermite.hermgauss(nodes)
    scale = math.exp(tau) * math.sqrt(tbar / 2.0)
    uu = x[:, None] + 1j * x[None, :]
    vals = fn(zeta * math.exp(tau) + scale * uu)
    acc = np.einsum("i,j,ij->", w, w, np.asarray(vals, dtype=complex))
    return complex(math.exp(2.0 * tau) / math.pi * acc)


def _convolve_gauss_legendre(fn, zeta, tau, tbar, nodes, half_width):
    """Original-variable form over [-half_width, half_width]^2 (wide-kernel regime)."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = x * half_width
    w = w * half_width
    aa = (x[:, None] + 1j * x[None, :]) / math.sqrt(2.0)
    kern = np.exp(-2.0 * np.abs(zeta - aa * math.exp(-tau)) ** 2 / tbar)
    vals = np.asarray(fn(aa), dtype=complex)
    acc = np.einsum("i,j,ij->", w, w, vals * kern)
    # d^2a = dx dp / 2 with a = (x + i p)/sqrt(2)
    return complex(2.0 / (math.pi * tbar) * 0.5 * acc)


# --- published substitution set ------------------------------------------


@dataclass(frozen=True)
class ChannelCoefficients:
    """The channel substitution constants at one phase-space point.

    Diagnostic record: the evolved evaluators derive the same quantities from
    the branch data; tests pin the correspondence field by field.
    """

    zbar_plus: complex
    zbar_minus: complex
    A_plus: float
    A_minus: float
    B1_plus: complex
    B1_minus: complex
    C1_plus: complex
    C1_minus: complex
    D1_plus: complex
    D1_minus: complex
    E1: float
    G1_plus: complex
    G1_minus: complex
    chi1: complex
    Theta1: complex
    Lambda_plus: complex
    Lambda_minus: complex
    B2_plus: complex
    B2_minus: complex
    C2: complex
    D2: complex
    E2: float
    G2: complex
    chi2: complex
    Theta2: complex
    C3_plus: complex
    C3_minus: complex
    D3_plus: complex
    D3_minus: complex
    E3: float
    G3_plus: complex
    G3_minus: complex
    chi3: complex
    Theta3: complex
    C4: complex
    D4: complex
    E4: float
    G4: complex
    chi4: complex
    Theta4: complex


def coefficients(zeta, r: float, res: ReservoirSpec) -> ChannelCoefficients:
    """All substitution constants for squeezing r at phase-space point zeta."""
    if res.tau < TAU_MIN:
        raise ParameterError(f"coefficients need tau >= {TAU_MIN}; use the static path below")
    z = complex(zeta)
    zc = z.conjugate()
    tau = res.tau
    _, tb = reservoir_constants(res)
    em, em2, em3, em4 = (math.exp(-tau), math.exp(-2 * tau), math.exp(-3 * tau),
                         math.exp(-4 * tau))
    ep2 = math.exp(2 * tau)
    c, s = math.cosh(r), math.sinh(r)
    c2 = math.cosh(2 * r)
    t2 = math.tanh(2 * r)
    zb_p = z * c - zc * s
    zb_m = z * c + zc * s
    a_p = 4.0 * em2 / tb**2 * (em2 + 2.0 * tb * c2 + tb**2 * ep2)
    a_m = 4.0 * em2 / tb**2 * (em2 + 2.0 * tb / c2 + tb**2 * ep2)
    b1_p = 8.0 * em4 / tb**3 * (abs(z) ** 2 + tb * ep2 * abs(zb_m) ** 2)
    b1_m = 8.0 * em4 / tb**3 * (abs(z) ** 2 + tb * ep2 * abs(zb_p) ** 2)
    root_cothp = cmath.sqrt(2.0 / math.tanh(r))
    root_cothm = cmath.sqrt(-2.0 / math.tanh(r))
    c1_p = 8j * em3 * root_cothp / tb**2 * (zb_p.conjugate() + tb * ep2 * zb_m.conjugate())
    c1_m = 8j * em3 * root_cothm / tb**2 * (zb_m.conjugate() + tb * ep2 * zb_p.conjugate())
    d1_p = -8j * em3 * root_cothp / tb**2 * (zb_p + tb * ep2 * zb_m)
    d1_m = -8j * em3 * root_cothm / tb**2 * (zb_m + tb * ep2 * zb_p)
    e1 = 16.0 * em2 * c * c / tb
    g1_p = 16.0 / math.tanh(r) * (1.0 + em2 * c2 / tb)
    g1_m = -g1_p
    chi1 = e1 - a_p
    theta1 = 1.0 / (2.0 * cmath.sqrt(a_p * chi1))
    lam_p = 2.0 / c2 * abs(z) ** 2 + (z**2 - zc**2) * t2
    lam_m = -2.0 / c2 * abs(z) ** 2 + (z**2 - zc**2) * t2
    b2_p = em4 / tb**3 * (8.0 * abs(z) ** 2 + 4.0 * tb * ep2 * lam_p)
    b2_m = em4 / tb**3 * (8.0 * abs(z) ** 2 - 4.0 * tb * ep2 * lam_m)
    om_pa = math.sqrt(t2) / s
    om_ps = math.sqrt(t2) / c
    c2_ = -8j * em3 * om_pa / tb**2 * (zb_p.conjugate() + tb * ep2 * zb_m.conjugate())
    d2_ = 8.0 * em3 * om_pa / tb**2 * (zb_m + tb * ep2 * zb_p)
    e2 = 4.0 * em2 * om_pa**2 * math.sinh(2 * r) / tb
    g2 = -8j * om_pa**2 / tb * (em2 + tb * c2)
    chi2 = e2 - a_m
    theta2 = 1.0 / (2.0 * cmath.sqrt(a_m * chi2))
    root_tanhp = cmath.sqrt(2.0 * math.tanh(r))
    root_tanhm = cmath.sqrt(-2.0 * math.tanh(r))
    c3_p = 8j * em3 * root_tanhp / tb**2 * (zb_p.conjugate() + tb * ep2 * zb_m.conjugate())
    c3_m = 8j * em3 * root_tanhm / tb**2 * (zb_m.conjugate() + tb * ep2 * zb_p.conjugate())
    d3_p = -8j * em3 * root_tanhp / tb**2 * (zb_p + tb * ep2 * zb_m)
    d3_m = -8j * em3 * root_tanhm / tb**2 * (zb_m + tb * ep2 * zb_p)
    e3 = 16.0 * em2 * s * s / tb
    g3_p = 16.0 * math.tanh(r) * (1.0 + em2 * c2 / tb)
    g3_m = -g3_p
    chi3 = e3 - a_p
    theta3 = 1.0 / (2.0 * cmath.sqrt(a_p * chi3))
    c4 = -8j * em3 * om_ps / tb**2 * (zb_m.conjugate() + tb * ep2 * zb_p.conjugate())
    d4 = 8.0 * em3 * om_ps / tb**2 * (zb_p + tb * ep2 * zb_m)
    e4 = 4.0 * em2 * om_ps**2 * math.sinh(2 * r) / tb
    g4 = -8j * om_ps**2 / tb * (em2 + tb * c2)
    chi4 = e4 - a_m
    theta4 = 1.0 / (2.0 * cmath.sqrt(a_m * chi4))
    return ChannelCoefficients(
        zbar_plus=zb_p, zbar_minus=zb_m, A_plus=a_p, A_minus=a_m,
        B1_plus=b1_p, B1_minus=b1_m, C1_plus=c1_p, C1_minus=c1_m,
        D1_plus=d1_p, D1_minus=d1_m, E1=e1, G1_plus=g1_p, G1_minus=g1_m,
        chi1=chi1, Theta1=theta1, Lambda_plus=lam_p, Lambda_minus=lam_m,
        B2_plus=b2_p, B2_minus=b2_m, C2=c2_, D2=d2_, E2=e2, G2=g2,
        chi2=chi2, Theta2=theta2, C3_plus=c3_p, C3_minus=c3_m,
        D3_plus=d3_p, D3_minus=d3_m, E3=e3, G3_plus=g3_p, G3_minus=g3_m,
        chi3=chi3, Theta3=theta3, C4=c4, D4=d4, E4=e4, G4=g4,
        chi4=chi4, Theta4=theta4,
    )
