"""Zero-time Wigner functions of the compasslike states.

Every closed form here is a Gaussian envelope times a finite Hermite series

    W(z) = K * exp(theta(z)) * sum_j  (m!)^2 base^{m-j} / ((j!)^2 (m-j)!)
                                      * H_j(x1(z)) * H_j(x2(z))

with theta a quadratic form in (z, z*) and x1, x2 linear forms.  The chessboard
part is a sum of two such branches (one per squeezed component of the
superposition); the cross part is a single complex-valued branch whose doubled
real part carries the outlying interference fringes.

Branch bookkeeping: x2 is the analytic partner of x1, i.e. the coefficient
pair obtained by continuing the modulus-square of the positive-squeezing
branch, not an elementwise conjugate.  For negative arguments under the square
root the two readings differ by (-1)^j, and only the analytic pairing matches
the displaced-parity evaluation in the number basis.

Convention: values are normalized so a pure state's Wigner function peaks at
2/pi and integrates to one over d^2z (dx dp / 2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, RealnessError
from .specialfn import CompensatedSum, LogComplex, hermite_ladder, log_factorial
from .states import CompassStateSpec, normalization

R_MIN_CLOSED = 1e-3  # coth(r) prefactors blow up below this; no closed-form path
ZETA_MAX = 30.0

# imaginary residue allowed on analytically real sums, relative to series scale
CHESS_IMAG_RTOL = 1e-8
# absolute residue allowed on the normalized total (|W| <= 2/pi scale)
TOTAL_IMAG_ATOL = 1e-10


@dataclass(frozen=True)
class SeriesBranch:
    """One Gaussian-times-Hermite-series branch of a Wigner closed form.

    x1(z) = a1 z + b1 z*,  x2(z) = a2 z + b2 z*,
    theta(z) = quad_abs |z|^2 + quad_z2 z^2 + quad_zc2 z*^2.
    """

    m: int
    a1: complex
    b1: complex
    a2: complex
    b2: complex
    quad_abs: float
    quad_z2: complex
    quad_zc2: complex
    base: complex
    log_scale: LogComplex


def _as_grid(zeta):
    z = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(z) > ZETA_MAX):
        raise ParameterError(f"|zeta| exceeds the supported range {ZETA_MAX}")
    return z


def _require_closed_form_r(r: float) -> None:
    if not R_MIN_CLOSED < r:
        raise ParameterError(
            f"closed-form evaluators need r > {R_MIN_CLOSED}; got r = {r!r}"
        )


def series_sum(m: int, g: complex, s1, s2, w1, w2, log_scale: LogComplex):
    """The shared Hermite-series kernel.

    Computes sum_j (m!)^2 g^{m-j} / ((j!)^2 (m-j)!) M_j(w1, s1) M_j(w2, s2)
    times exp(log_scale), where M_j is the scaled Hermite polynomial.  The
    static series is the case s1 = s2 = 1 (plain Hermite values).  Per-j
    coefficients stay in log space; terms accumulate with compensated
    summation because neighbouring orders can differ by many decades and
    alternate in sign.
    """
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


def eval_branch_static(branch: SeriesBranch, zeta):
    """Evaluate one branch at zeta (complex scalar or array); complex result."""
    z = _as_grid(zeta)
    zc = np.conj(z)
    theta = branch.quad_abs * (z.real**2 + z.imag**2) + branch.quad_z2 * z**2 + branch.quad_zc2 * zc**2
    x1 = branch.a1 * z + branch.b1 * zc
    x2 = branch.a2 * z + branch.b2 * zc
    return np.exp(theta) * series_sum(branch.m, branch.base, 1.0, 1.0, x1, x2, branch.log_scale)


def _chess_branch(m: int, r: float, sgn: int, hyper: float) -> SeriesBranch:
    """Chessboard branch for squeezing sign sgn, with hyper = coth r (pa) or tanh r (ps)."""
    k = cmath.sqrt(sgn * 2.0 * hyper)
    c, s = math.cosh(r), math.sinh(r)
    log_scale = LogComplex(
        math.log(2.0 / math.pi) + m * math.log(math.sinh(2.0 * r) / 4.0),
        (1.0 if sgn > 0 else -1.0) ** m + 0.0j,
    )
    return SeriesBranch(
        m=m,
        a1=-1j * k * c,
        b1=sgn * 1j * k * s,
        a2=-sgn * 1j * k * s,
        b2=1j * k * c,
        quad_abs=-2.0 * math.cosh(2.0 * r),
        quad_z2=sgn * math.sinh(2.0 * r),
        quad_zc2=sgn * math.sinh(2.0 * r),
        base=-sgn * 2.0 * hyper,
        log_scale=log_scale,
    )


def chess_branches(variant: str, m: int, r: float) -> tuple[SeriesBranch, SeriesBranch]:
    _require_closed_form_r(r)
    hyper = 1.0 / math.tanh(r) if variant == "pa" else math.tanh(r)
    return _chess_branch(m, r, +1, hyper), _chess_branch(m, r, -1, hyper)


def cross_branch(variant: str, m: int, r: float) -> SeriesBranch:
    """Interference (cross) branch between the two squeezed components."""
    _require_closed_form_r(r)
    t2 = math.tanh(2.0 * r)
    c, s = math.cosh(r), math.sinh(r)
    # scale = 2 (-i tanh 2r)^m / (pi 4^m cosh r sqrt(1 + tanh^2 r)); the same
    # (-i)^m phase applies to both variants (the +i^m alternative flips the
    # sign of the real part and fails the number-basis check)
    log_scale = LogComplex(
        math.log(2.0 / math.pi)
        + m * math.log(t2 / 4.0)
        - 0.5 * math.log(c * c + s * s),
        (-1j) ** m,
    )
    if variant == "pa":
        om = math.sqrt(t2) / s
        a1, b1 = -1j * om * c, 1j * om * s
        a2, b2 = -om * s + 0j, -om * c + 0j
        base = -2j / math.tanh(r)
    else:
        om = math.sqrt(t2) / c
        a1, b1 = om * c + 0j, -om * s + 0j
        a2, b2 = -1j * om * s, -1j * om * c
        base = 2j * math.tanh(r)
    return SeriesBranch(
        m=m,
        a1=a1,
        b1=b1,
        a2=a2,
        b2=b2,
        quad_abs=-2.0 / math.cosh(2.0 * r),
        quad_z2=-t2,
        quad_zc2=t2,
        base=base,
        log_scale=log_scale,
    )


def _project_real(values, rtol: float, what: str):
    mags = np.abs(values)
    scale = float(np.max(mags)) if mags.size else 0.0
    residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if residue > rtol * max(1.0, scale):
        raise RealnessError(
            f"{what}: imaginary residue {residue:g} exceeds {rtol:g} x scale {scale:g}"
        )
    return values.real


def _scalar_ok(zeta, values):
    return float(values) if np.isscalar(zeta) or np.asarray(zeta).ndim == 0 else values


def wigner_svs(zeta, r: float):
    """Wigner function of a single squeezed vacuum: (2/pi) exp(-2 |zbar|^2)."""
    z = _as_grid(zeta)
    zbar = z * math.cosh(r) - np.conj(z) * math.sinh(r)
    out = (2.0 / math.pi) * np.exp(-2.0 * (zbar.real**2 + zbar.imag**2))
    return _scalar_ok(zeta, out)


def _chess(variant: str, zeta, m: int, r: float):
    bp, bm = chess_branches(variant, m, r)
    z = _as_grid(zeta)
    vals = eval_branch_static(bp, z) + eval_branch_static(bm, z)
    return _scalar_ok(zeta, _project_real(np.asarray(vals), CHESS_IMAG_RTOL, f"{variant} chess"))


def wigner_pa_chess(zeta, m: int, r: float):
    """Chessboard component of the photon-added state (both squeezing branches)."""
    return _chess("pa", zeta, m, r)


def wigner_ps_chess(zeta, m: int, r: float):
    """Chessboard component of the photon-subtracted state."""
    return _chess("ps", zeta, m, r)


def wigner_pa_cross(zeta, m: int, r: float):
    """Cross component of the photon-added state; use 2 Re for the total."""
    vals = eval_branch_static(cross_branch("pa", m, r), _as_grid(zeta))
    return complex(vals) if np.asarray(zeta).ndim == 0 else vals


def wigner_ps_cross(zeta, m: int, r: float):
    """Cross component of the photon-subtracted state; use 2 Re for the total."""
    vals = eval_branch_static(cross_branch("ps", m, r), _as_grid(zeta))
    return complex(vals) if np.asarray(zeta).ndim == 0 else vals


def wigner_total(zeta, spec: CompassStateSpec):
    """Full normalized Wigner function N^2 [W_chess + 2 Re W_cross]."""
    z = _as_grid(zeta)
    bp, bm = chess_branches(spec.variant, spec.m, spec.r)
    cx = cross_branch(spec.variant, spec.m, spec.r)
    n2 = normalization(spec) ** 2
    chess = np.asarray(eval_branch_static(bp, z) + eval_branch_static(bm, z))
    # once normalized the chess part sits on the |W| <= 2/pi scale, where the
    # typed absolute residue bound applies
    residue = float(np.max(np.abs(n2 * chess.imag)))
    if residue > TOTAL_IMAG_ATOL:
        raise RealnessError(
            f"normalized chess residue {residue:g} exceeds {TOTAL_IMAG_ATOL:g}"
        )
    cross = np.asarray(eval_branch_static(cx, z))
    out = n2 * (chess.real + 2.0 * cross.real)
    return _scalar_ok(zeta, out)
