"""
Complex 2x2 algebra for a single spin-1/2.

Operators are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype
``complex128``; states are arrays of shape ``(2,)`` holding the amplitudes
``(c_up, c_down)``.  The basis order is ``|up>, |down>`` throughout.

Powers of an operator are built from its eigenvalues.  Writing the operator
as ``h*I + (M - h*I)`` with ``h`` half the trace, one has

    M**n = P_n * I + B_n * (M - h*I)

where ``P_n = (x+**n + x-**n)/2`` and ``B_n = (x+**n - x-**n)/(x+ - x-)``.
``B_n`` is evaluated in a form that stays accurate when the two eigenvalues
nearly coincide and reduces to ``n * x**(n-1)`` when they do.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)

UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)

# slack allowed above unit norm for sub-normalized (lossy) states
NORM_SLACK = 1e-9


def as_operator(m) -> np.ndarray:
    """Return ``m`` as a finite complex 2x2 array, or raise DomainError."""
    arr = np.asarray(m, dtype=complex)
    if arr.shape != (2, 2):
        raise DomainError(f"expected a 2x2 operator, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("operator has non-finite entries")
    return arr


def spin_state(up, down=0.0) -> np.ndarray:
    """Build a (possibly sub-normalized) spin state from two amplitudes."""
    psi = np.array([up, down], dtype=complex)
    if not np.all(np.isfinite(psi)):
        raise DomainError("state has non-finite amplitudes")
    norm2 = float(np.vdot(psi, psi).real)
    if norm2 > 1.0 + NORM_SLACK:
        raise DomainError(f"state norm^2 = {norm2!r} exceeds 1")
    return psi


def pauli_decompose(m) -> np.ndarray:
    """Coefficients ``(s0, sx, sy, sz)`` with ``M = s0 I + sx X + sy Y + sz Z``."""
    m = as_operator(m)
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    return np.array([(a + d) / 2, (b + c) / 2, 1j * (b - c) / 2, (a - d) / 2])


def pauli_reconstruct(coeffs) -> np.ndarray:
    s0, sx, sy, sz = np.asarray(coeffs, dtype=complex)
    return np.array([[s0 + sz, sx - 1j * sy], [sx + 1j * sy, s0 - sz]])


def rotation(theta_step: float) -> np.ndarray:
    """Propagator ``exp(-i theta_step sigma_x)`` of one field region."""
    if not math.isfinite(theta_step):
        raise DomainError(f"rotation angle must be finite, got {theta_step!r}")
    c, s = math.cos(theta_step), math.sin(theta_step)
    return np.array([[c, -1j * s], [-1j * s, c]])


def split_eigenvalues(half_trace: complex, disc: complex, det: complex):
    """Eigenvalues ``h +/- sqrt(disc)`` and their difference.

    The root of smaller modulus is recovered from ``det`` to avoid
    cancellation.  Returns ``(xi_plus, xi_minus, xi_plus - xi_minus)``; the
    ``+`` label always belongs to the principal square root branch.
    """
    q = cmath.sqrt(disc)
    plus, minus = half_trace + q, half_trace - q
    if abs(plus) >= abs(minus):
        if plus != 0:
            minus = det / plus
    else:
        plus = det / minus
    return plus, minus, 2 * q


def eigenvalues(m) -> tuple[complex, complex]:
    """Eigenvalues ``(xi_plus, xi_minus) = tr/2 +/- sqrt((tr/2)**2 - det)``.

    >>> eigenvalues(SIGMA_Z)
    ((1+0j), (-1+0j))
    """
    m = as_operator(m)
    a, b, c, d = (complex(v) for v in m.ravel())
    # (tr/2)^2 - det written without the cancellation between its two terms
    disc = ((a - d) / 2) ** 2 + b * c
    plus, minus, _ = split_eigenvalues((a + d) / 2, disc, a * d - b * c)
    return plus, minus


def cpow(z: complex, n: int) -> complex:
    """``z**n`` evaluated as ``exp(n log z)`` (underflows cleanly to zero)."""
    if n == 0:
        return 1.0 + 0j
    if z == 0:
        return 0j
    return cmath.exp(n * cmath.log(z))


def cexpm1(z: complex) -> complex:
    """``exp(z) - 1`` accurate for small complex ``z``."""
    x, y = z.real, z.imag
    s = math.sin(y / 2)
    return complex(math.expm1(x) * math.cos(y) - 2 * s * s, math.exp(x) * math.sin(y))


def clog1p(z: complex) -> complex:
    """``log(1 + z)`` accurate for small complex ``z``."""
    x, y = z.real, z.imag
    return complex(0.5 * math.log1p(x * (2 + x) + y * y), math.atan2(y, 1 + x))


def divided_power(xp: complex, xm: complex, n: int, diff: complex | None = None) -> complex:
    """``(xp**n - xm**n) / (xp - xm)``, symmetric in its two arguments.

    ``diff`` may carry an accurately known ``xp - xm``.  At coincidence the
    confluent value ``n * xp**(n-1)`` is returned.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return 0j
    if diff is None:
        diff = xp - xm
    if abs(xp) >= abs(xm):
        big, small, gap = xp, xm, diff
    else:
        big, small, gap = xm, xp, -diff
    if big == 0:
        return 1.0 + 0j if n == 1 else 0j
    # ratio r = small/big has |r| <= 1; delta = r - 1
    delta = -gap / big
    if delta == 0:
        ratio = complex(n)
    elif abs(delta) < 0.5:
        ratio = cexpm1(n * clog1p(delta)) / delta
    else:
        r = small / big
        ratio = (1 - cpow(r, n)) / (-delta)
    return cpow(big, n - 1) * ratio


def matrix_power(m, n: int, method: str = "closed") -> np.ndarray:
    """``M**n`` for ``n >= 1``.

    Parameters
    ----------
    m : array_like, shape (2, 2)
    n : int
        Number of stages; ``n = 0`` is rejected.
    method : {"closed", "iterate"}
        ``"closed"`` uses the eigenvalue decomposition, ``"iterate"`` plain
        repeated multiplication.
    """
    m = as_operator(m)
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"power must be a positive integer, got {n!r}")
    n = int(n)
    if method == "iterate":
        out = m.copy()
        for _ in range(n - 1):
            out = out @ m
        return out
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    a, b, c, d = (complex(v) for v in m.ravel())
    half = (a + d) / 2
    disc = ((a - d) / 2) ** 2 + b * c
    xp, xm, diff = split_eigenvalues(half, disc, a * d - b * c)
    p_n = (cpow(xp, n) + cpow(xm, n)) / 2
    b_n = divided_power(xp, xm, n, diff)
    return p_n * I2 + b_n * (m - half * I2)


def is_unitary(m, atol: float = 1e-12) -> bool:
    m = as_operator(m)
    return bool(np.allclose(m.conj().T @ m, I2, rtol=0, atol=atol))
