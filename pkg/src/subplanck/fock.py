"""Brute-force verification stack in a truncated number basis.

Deliberately the slow, trusted path: states are built from the squeezing
generator by matrix exponential (so no amplitude formula is shared with the
closed forms), the reservoir is integrated directly from its master-equation
generator, and Wigner values come from the displaced parity kernel

    W(z) = (2/pi) tr[rho D(z) Pi D(z)^dag],  Pi = (-1)^{a^dag a}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre

from .errors import ParameterError, StepControlError, TruncationError, TruncationWarning
from .specialfn import log_factorial
from .states import CompassStateSpec, ReservoirSpec

TAIL_MASS_TOL = 1e-10
_TAIL_WINDOW = 8


def default_dim(spec: CompassStateSpec) -> int:
    """Heuristic truncation floor; the tail-mass check is the real gate."""
    return max(64, 4 * spec.m + math.ceil(16.0 * math.cosh(2.0 * spec.r)))


@dataclass(frozen=True)
class FockVector:
    """Normalized state vector in the number basis."""

    dim: int
    amplitudes: np.ndarray

    def tail_mass(self) -> float:
        return float(np.sum(np.abs(self.amplitudes[self.dim - _TAIL_WINDOW:]) ** 2))


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator in the number basis."""

    dim: int
    elements: np.ndarray

    def validate(self, *, herm_tol=1e-12, trace_tol=1e-10, eig_floor=-1e-10) -> None:
        mat = self.elements
        if float(np.max(np.abs(mat - mat.conj().T))) > herm_tol:
            raise ParameterError("density matrix is not Hermitian within tolerance")
        if abs(float(np.trace(mat).real) - 1.0) > trace_tol:
            raise ParameterError(f"trace {np.trace(mat).real!r} is not 1 within {trace_tol}")
        eigs = np.linalg.eigvalsh(mat)
        if float(eigs.min()) < eig_floor:
            raise ParameterError(f"negative eigenvalue {eigs.min():g} below {eig_floor:g}")


def squeeze_vacuum(r: float, dim: int) -> np.ndarray:
    """S(r)|0> from the generator exp[(r/2)(a^dag^2 - a^2)], truncated at dim."""
    gen = np.zeros((dim, dim))
    for k in range(dim - 2):
        gen[k + 2, k] = 0.5 * r * math.sqrt((k + 1) * (k + 2))
    gen -= gen.T
    return expm(gen)[:, 0].astype(complex)


def raw_compass_state(spec: CompassStateSpec, dim: int) -> np.ndarray:
    """Unnormalized (a^dag)^m or a^m applied to S(r)|0> + S(-r)|0>."""
    psi = squeeze_vacuum(spec.r, dim) + squeeze_vacuum(-spec.r, dim)
    root_n = np.sqrt(np.arange(1, dim))
    for _ in range(spec.m):
        out = np.zeros_like(psi)
        if spec.variant == "pa":
            out[1:] = psi[:-1] * root_n
        else:
            out[:-1] = psi[1:] * root_n
        psi = out
    return psi


def build_compass_state(spec: CompassStateSpec, dim: int | None = None) -> FockVector:
    """Construct and normalize the compasslike state; gate on tail mass."""
    if dim is None:
        dim = default_dim(spec)
    if dim < 4 * spec.m + 16:
        raise ParameterError(f"dim {dim} below the truncation floor for m={spec.m}")
    psi = raw_compass_state(spec, dim)
    norm2 = float(np.vdot(psi, psi).real)
    if norm2 <= 0.0:
        raise TruncationError(f"state vanished in truncation dim={dim} for {spec}")
    vec = FockVector(dim=dim, amplitudes=psi / math.sqrt(norm2))
    tail = vec.tail_mass()
    if tail > TAIL_MASS_TOL:
        raise TruncationError(
            f"tail mass {tail:g} above {TAIL_MASS_TOL:g} at dim={dim}; enlarge the basis"
        )
    return vec


def displacement_matrix(beta: complex, dim: int) -> np.ndarray:
    """<j|D(beta)|n> from the associated-Laguerre closed form.

    Envelope factors sqrt(n!/j!) beta^{j-n} e^{-|beta|^2/2} are assembled in
    log magnitude so large offsets neither overflow nor underflow prematurely.
    """
    beta = complex(beta)
    x = abs(beta) ** 2
    if x > 120.0:
        raise ParameterError("displacement too large for a stable Laguerre evaluation")
    out = np.zeros((dim, dim), dtype=complex)
    lf = np.array([math.lgamma(n + 1) for n in range(dim)])
    phase = beta / abs(beta) if beta != 0 else 1.0 + 0.0j
    n_all = np.arange(dim)
    for d in range(dim):
        if beta == 0 and d > 0:
            break
        n = n_all[: dim - d]
        lag = eval_genlaguerre(n, d, x)
        log_env = 0.5 * (lf[n] - lf[n + d]) - 0.5 * x
        if d > 0:
            log_env = log_env + d * math.log(abs(beta))
        env = np.exp(log_env)
        out[n + d, n] = env * phase**d * lag
        if d > 0:
            out[n, n + d] = env * (-np.conj(phase)) ** d * lag
    return out


def _support_top(amplitudes: np.ndarray, cut: float = 1e-12) -> int:
    idx = np.nonzero(np.abs(amplitudes) > cut)[0]
    return int(idx[-1]) if idx.size else 0


def _warn_if_displaced_out(dim: int, top: int, beta: complex) -> None:
    reach = (math.sqrt(top) + abs(beta)) ** 2
    if reach > dim - _TAIL_WINDOW:
        warnings.warn(
            f"displaced support ~{reach:.0f} photons approaches truncation dim={dim}",
            TruncationWarning,
            stacklevel=3,
        )


def wigner_from_state(state: FockVector | np.ndarray, zeta: complex) -> float:
    """Displaced-parity Wigner value of a pure state."""
    psi = state.amplitudes if isinstance(state, FockVector) else np.asarray(state)
    dim = len(psi)
    _warn_if_displaced_out(dim, _support_top(psi), zeta)
    disp = displacement_matrix(zeta, dim)
    phi = disp.conj().T @ psi
    signs = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
    return float(2.0 / math.pi * np.sum(signs * np.abs(phi) ** 2))


def wigner_from_density(rho: DensityMatrix | np.ndarray, zeta: complex) -> float:
    """Displaced-parity Wigner value of a density operator."""
    mat = rho.elements if isinstance(rho, DensityMatrix) else np.asarray(rho)
    dim = mat.shape[0]
    _warn_if_displaced_out(dim, _support_top(np.sqrt(np.abs(np.diag(mat)))), zeta)
    disp = displacement_matrix(zeta, dim)
    signs = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
    diag = np.einsum("jn,jn->n", disp.conj(), mat @ disp)
    return float(2.0 / math.pi * np.sum(signs * diag).real)


def density_from_state(state: FockVector | np.ndarray) -> DensityMatrix:
    psi = state.amplitudes if isinstance(state, FockVector) else np.asarray(state)
    return DensityMatrix(dim=len(psi), elements=np.outer(psi, psi.conj()))


def thermal_density(nbar: float, dim: int) -> DensityMatrix:
    """Geometric-series thermal state truncated (and renormalized) at dim."""
    if nbar < 0:
        raise ParameterError("nbar must be >= 0")
    if nbar == 0:
        pops = np.zeros(dim)
        pops[0] = 1.0
    else:
        ratio = nbar / (1.0 + nbar)
        pops = ratio ** np.arange(dim) / (1.0 + nbar)
        pops /= pops.sum()
    return DensityMatrix(dim=dim, elements=np.diag(pops).astype(complex))


def _lindblad_rhs(nbar: float):
    """Master-equation generator in dimensionless time tau = kappa t."""

    def rhs(mat: np.ndarray, n: np.ndarray, root_n: np.ndarray) -> np.ndarray:
        lower = np.zeros_like(mat)
        lower[:-1, :] = mat[1:, :] * root_n[1:, None]
        a_rho_adag = np.zeros_like(mat)
        a_rho_adag[:, :-1] = lower[:, 1:] * root_n[None, 1:]
        upper = np.zeros_like(mat)
        upper[1:, :] = mat[:-1, :] * root_n[1:, None]
        adag_rho_a = np.zeros_like(mat)
        adag_rho_a[:, 1:] = upper[:, :-1] * root_n[None, 1:]
        anti_n = mat * n[:, None] + mat * n[None, :]
        anti_n1 = mat * (n + 1.0)[:, None] + mat * (n + 1.0)[None, :]
        return (nbar + 1.0) * (2.0 * a_rho_adag - anti_n) + nbar * (2.0 * adag_rho_a - anti_n1)

    return rhs


def _rk4_run(mat: np.ndarray, rhs, n, root_n, tau: float, steps: int) -> np.ndarray:
    h = tau / steps
    x = mat.copy()
    for _ in range(steps):
        k1 = rhs(x, n, root_n)
        k2 = rhs(x + 0.5 * h * k1, n, root_n)
        k3 = rhs(x + 0.5 * h * k2, n, root_n)
        k4 = rhs(x + h * k3, n, root_n)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


def evolve_density(rho: DensityMatrix | np.ndarray, res: ReservoirSpec, *,
                   tol: float = 1e-10, max_doublings: int = 6):
    """Integrate the thermal master equation with step-halving control.

    Fixed-step classical RK4; the step is halved until one full halving
    changes no matrix element by more than tol.  Returns the same container
    type it was given.
    """
    wrap = isinstance(rho, DensityMatrix)
    mat = (rho.elements if wrap else np.asarray(rho)).astype(complex)
    if res.tau == 0.0:
        return DensityMatrix(dim=mat.shape[0], elements=mat.copy()) if wrap else mat.copy()
    dim = mat.shape[0]
    n = np.arange(dim, dtype=float)
    root_n = np.sqrt(n)
    rhs = _lindblad_rhs(res.nbar)
    # RK4 stability needs |h lambda_max| < 2.8 with lambda_max ~ 4 (nbar+1) dim
    steps = max(16, math.ceil(res.tau * 2.0 * (res.nbar + 1.0) * dim))
    coarse = _rk4_run(mat, rhs, n, root_n, res.tau, steps)
    for _ in range(max_doublings):
        steps *= 2
        fine = _rk4_run(mat, rhs, n, root_n, res.tau, steps)
        if float(np.max(np.abs(fine - coarse))) <= tol:
            return DensityMatrix(dim=dim, elements=fine) if wrap else fine
        coarse = fine
    raise StepControlError(
        f"step halving did not converge to {tol:g} after {max_doublings} doublings"
    )
