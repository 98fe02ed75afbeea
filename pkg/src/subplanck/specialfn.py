"""Stable special-function kernels shared by every closed-form expression.

All polynomial evaluations go through three-term recurrences, which are
cancellation-free for the argument magnitudes this package produces
(|z| <= ~30 at grid edges).  Factorial-heavy prefactors are assembled in
log-magnitude + phase form (`LogComplex`) and only exponentiated once per
summand.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

MAX_POLY_ORDER = 64
MAX_FACTORIAL_ARG = 170


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z) for complex scalar or array z.

    Uses H_{n+1}(z) = 2 z H_n(z) - 2 n H_{n-1}(z).
    """
    if n < 0 or n > MAX_POLY_ORDER:
        raise ParameterError(f"hermite order {n} outside [0, {MAX_POLY_ORDER}]")
    one = np.ones_like(z) if isinstance(z, np.ndarray) else 1.0 + 0.0j
    if n == 0:
        return one
    h_prev, h = one, 2 * z * one
    for k in range(1, n):
        h_prev, h = h, 2 * z * h - 2 * k * h_prev
    return h


def hermite_scaled(n: int, w, chi):
    """Scaled Hermite chi^{n/2} H_n(w / sqrt(chi)), evaluated branch-free.

    The scaling turns the usual recurrence into a polynomial in (w, chi):
    M_{n+1} = 2 w M_n - 2 n chi M_{n-1}.  It stays finite and smooth through
    chi = 0, where the plain formulation would divide by a vanishing root.
    """
    if n < 0 or n > MAX_POLY_ORDER:
        raise ParameterError(f"hermite order {n} outside [0, {MAX_POLY_ORDER}]")
    one = np.ones_like(w) if isinstance(w, np.ndarray) else 1.0 + 0.0j
    if n == 0:
        return one
    h_prev, h = one, 2 * w * one
    for k in range(1, n):
        h_prev, h = h, 2 * w * h - 2 * k * chi * h_prev
    return h


def hermite_ladder(n_max: int, w, chi):
    """All scaled Hermite values M_0..M_{n_max} at once (list indexed by order)."""
    if n_max < 0 or n_max > MAX_POLY_ORDER:
        raise ParameterError(f"hermite order {n_max} outside [0, {MAX_POLY_ORDER}]")
    one = np.ones_like(w) if isinstance(w, np.ndarray) else 1.0 + 0.0j
    out = [one]
    if n_max == 0:
        return out
    out.append(2 * w * one)
    for k in range(1, n_max):
        out.append(2 * w * out[k] - 2 * k * chi * out[k - 1])
    return out


def legendre(n: int, z):
    """Legendre polynomial P_n(z) by the Bonnet recurrence.

    Valid for complex z, including |z| > 1 and purely imaginary arguments
    (both occur in the normalization constants).
    """
    if n < 0 or n > MAX_POLY_ORDER:
        raise ParameterError(f"legendre order {n} outside [0, {MAX_POLY_ORDER}]")
    one = np.ones_like(z) if isinstance(z, np.ndarray) else 1.0 + 0.0j
    if n == 0:
        return one
    p_prev, p = one, z * one
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * z * p - k * p_prev) / (k + 1)
    return p


def log_factorial(n: int) -> float:
    """ln(n!) via lgamma; exact enough (<= 1e-12 relative) over the guard range."""
    if n < 0 or n > MAX_FACTORIAL_ARG:
        raise ParameterError(f"log_factorial argument {n} outside [0, {MAX_FACTORIAL_ARG}]")
    return math.lgamma(n + 1)


@dataclass(frozen=True)
class LogComplex:
    """A complex value stored as exp(log_abs) * phase with |phase| = 1.

    Keeps products of factorials, 2^{2m} and sinh(2r)^m factors in a finite
    representation; `value()` is only called once per assembled summand.
    """

    log_abs: float
    phase: complex

    @staticmethod
    def from_value(z: complex) -> "LogComplex":
        mag = abs(z)
        if mag == 0.0:
            return LogComplex(float("-inf"), 1.0 + 0.0j)
        return LogComplex(math.log(mag), z / mag)

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_abs + other.log_abs, self.phase * other.phase)

    def scaled(self, log_abs: float, phase: complex = 1.0 + 0.0j) -> "LogComplex":
        return LogComplex(self.log_abs + log_abs, self.phase * phase)

    def power_times(self, z: complex, k: int) -> "LogComplex":
        """self * z**k without forming z**k directly."""
        if k == 0:
            return self
        mag = abs(z)
        if mag == 0.0:
            return LogComplex(float("-inf"), 1.0 + 0.0j)
        return LogComplex(self.log_abs + k * math.log(mag), self.phase * (z / mag) ** k)

    def value(self) -> complex:
        if self.log_abs == float("-inf"):
            return 0.0 + 0.0j
        return cmath.exp(self.log_abs) * self.phase


class CompensatedSum:
    """Kahan-Neumaier accumulator; works for scalars and numpy arrays alike."""

    def __init__(self, template):
        self._sum = np.zeros_like(template)
        self._comp = np.zeros_like(template)

    def add(self, term) -> None:
        t = self._sum + term
        big = np.where(np.abs(self._sum) >= np.abs(term), self._sum, term)
        small = np.where(np.abs(self._sum) >= np.abs(term), term, self._sum)
        self._comp = self._comp + ((big - t) + small)
        self._sum = t

    def total(self):
        return self._sum + self._comp
