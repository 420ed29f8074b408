"""
Survival probability after ``N`` stages of spin rotation followed by a mirror.

A run rotates the spin by ``theta/N`` about x, then splits it at a mirror,
``N`` times over, and reports the probability of reaching the detector in the
transmitted channel.  Four routes are provided:

* ``survival_exact_*``: closed form from the eigenvalues of the per-stage
  transfer operator ``T @ U``;
* ``survival_oracle``: brute-force propagation of the state, with a ledger of
  the probability leaving at each mirror;
* ``survival_first_order``: expansion to first order in the small
  transmission amplitudes;
* ``survival_dominant``: transmission loss factor times the ideal result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spin
from .errors import DomainError, NumericalConsistencyError
from .mirrors import DiagonalMirror, IdealMirror, MirrorModel, SpinFlipMirror, as_spinflip

# raw closed-form values are accepted within this band of [0, 1] before clamping
PROB_SLACK = 1e-12


@dataclass(frozen=True)
class ZenoRun:
    """One experiment: total half-angle ``theta``, ``n_stages`` mirrors."""

    theta: float
    n_stages: int
    mirror: MirrorModel = IdealMirror()

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise DomainError(f"theta must be finite, got {self.theta!r}")
        if isinstance(self.n_stages, bool) or int(self.n_stages) != self.n_stages or self.n_stages < 1:
            raise DomainError(f"n_stages must be a positive integer, got {self.n_stages!r}")
        object.__setattr__(self, "n_stages", int(self.n_stages))

    @property
    def beyond_standard_regime(self) -> bool:
        """True when ``theta`` lies outside ``[0, pi/2]``."""
        return not (0.0 <= self.theta <= math.pi / 2)

    @property
    def step(self) -> float:
        return self.theta / self.n_stages


@dataclass(frozen=True)
class BranchLedger:
    """Where the probability went: detector, each mirror exit, absorption."""

    detected: float
    reflected: tuple[float, ...]
    absorbed: float

    @property
    def total(self) -> float:
        return math.fsum((self.detected, *self.reflected, self.absorbed))


@dataclass(frozen=True)
class ABCoefficients:
    a_n: complex
    b_n: complex


def _checked_probability(raw: float) -> float:
    if not (-PROB_SLACK <= raw <= 1 + PROB_SLACK):
        raise NumericalConsistencyError(f"closed-form probability {raw!r} outside [0, 1]")
    return min(1.0, max(0.0, raw))


def _log_cos2n(theta: float, n: int) -> float:
    """``2n log|cos(theta/n)|`` without the rounding of ``cos`` near 1."""
    half = math.sin(theta / (2 * n))
    arg = -2.0 * half * half
    if arg > -0.5:
        return 2 * n * math.log1p(arg)
    c = abs(math.cos(theta / n))
    return 2 * n * math.log(c) if c > 0 else -math.inf


def survival_ideal(theta: float, n: int) -> float:
    """Ideal-mirror survival ``cos(theta/n)**(2n)``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return min(1.0, math.exp(_log_cos2n(theta, n)))


def survival_dominant(theta: float, t_up_mod2: float, n: int) -> float:
    """Leading behaviour ``|T_up|**(2n) * cos(theta/n)**(2n)``."""
    if not (0.0 < t_up_mod2 <= 1.0):
        raise DomainError(f"|T_up|^2 must lie in (0, 1], got {t_up_mod2!r}")
    if n < 1:
        raise DomainError("n must be >= 1")
    return min(1.0, math.exp(n * math.log(t_up_mod2) + _log_cos2n(theta, n)))


def transfer_operator(mirror: MirrorModel, theta: float, n: int) -> np.ndarray:
    """Per-stage operator: rotation by ``theta/n`` then transmission."""
    return mirror.transmit_operator() @ spin.rotation(theta / n)


def transfer_eigenvalues_diagonal(t_up: complex, t_down: complex, step: float):
    """``(xi_plus, xi_minus, xi_plus - xi_minus)`` for a flip-free mirror.

    ``xi = [(Tu + Td) cos - / + sqrt((Tu + Td)^2 cos^2 - 4 Tu Td)] / 2``; the
    radicand is used in the equivalent form ``(Tu - Td)^2 cos^2 - 4 Tu Td sin^2``.
    """
    c, s = math.cos(step), math.sin(step)
    half = (t_up + t_down) * c / 2
    disc = ((t_up - t_down) * c / 2) ** 2 - t_up * t_down * s * s
    return spin.split_eigenvalues(half, disc, t_up * t_down)


def transfer_eigenvalues_spinflip(t: np.ndarray, step: float):
    """Eigenvalues ``C +/- sqrt(C^2 - det T)`` of ``T @ U`` with spin flips."""
    c, s = math.cos(step), math.sin(step)
    t_uu, t_ud, t_du, t_dd = (complex(v) for v in np.asarray(t).ravel())
    half = ((t_uu + t_dd) * c - 1j * (t_ud + t_du) * s) / 2
    det = t_uu * t_dd - t_ud * t_du
    # C^2 - det expanded in the entries of T @ U so nothing cancels
    diff_diag = ((t_uu - t_dd) * c - 1j * (t_ud - t_du) * s) / 2
    off = (t_ud * c - 1j * t_uu * s) * (t_du * c - 1j * t_dd * s)
    return spin.split_eigenvalues(half, diff_diag ** 2 + off, det)


def ab_coefficients(xi_plus: complex, xi_minus: complex, n: int,
                    diff: complex | None = None) -> ABCoefficients:
    """``A(N) = (x+^(N+1) - x-^(N+1))/(x+ - x-)`` and ``B(N)`` with power ``N``."""
    return ABCoefficients(
        a_n=spin.divided_power(xi_plus, xi_minus, n + 1, diff),
        b_n=spin.divided_power(xi_plus, xi_minus, n, diff),
    )


def _diagonal_amplitudes(mirror: MirrorModel) -> tuple[complex, complex]:
    if isinstance(mirror, IdealMirror):
        return 1 + 0j, 0j
    if isinstance(mirror, DiagonalMirror):
        return mirror.t_up, mirror.t_down
    raise DomainError(f"expected an ideal or diagonal mirror, got {type(mirror).__name__}")


def survival_exact_diagonal(run: ZenoRun) -> float:
    """Exact survival for a mirror without spin flips.

    ``P = |A - B Td cos|^2 + |B Td sin|^2`` with ``cos``, ``sin`` of ``theta/N``.
    """
    t_up, t_down = _diagonal_amplitudes(run.mirror)
    n, step = run.n_stages, run.step
    xp, xm, diff = transfer_eigenvalues_diagonal(t_up, t_down, step)
    ab = ab_coefficients(xp, xm, n, diff)
    c, s = math.cos(step), math.sin(step)
    raw = abs(ab.a_n - ab.b_n * t_down * c) ** 2 + abs(ab.b_n * t_down * s) ** 2
    return _checked_probability(raw)


def survival_exact_spinflip(run: ZenoRun) -> float:
    """Exact survival for a mirror that may flip the spin.

    ``P = |A - B (Tdd cos - i Tdu sin)|^2 + |B (Tdd sin + i Tdu cos)|^2``.
    """
    t = as_spinflip(run.mirror).t_matrix
    t_du, t_dd = complex(t[1, 0]), complex(t[1, 1])
    n, step = run.n_stages, run.step
    xp, xm, diff = transfer_eigenvalues_spinflip(t, step)
    ab = ab_coefficients(xp, xm, n, diff)
    c, s = math.cos(step), math.sin(step)
    raw = (abs(ab.a_n - ab.b_n * (t_dd * c - 1j * t_du * s)) ** 2
           + abs(ab.b_n * (t_dd * s + 1j * t_du * c)) ** 2)
    return _checked_probability(raw)


def survival_exact(run: ZenoRun) -> float:
    if isinstance(run.mirror, SpinFlipMirror):
        return survival_exact_spinflip(run)
    return survival_exact_diagonal(run)


def survival_oracle(run: ZenoRun) -> tuple[float, BranchLedger]:
    """Propagate the state stage by stage and account for every exit.

    Independent of the eigenvalue route: only the rotation, transmit and
    reflect matrices are used, applied one stage at a time.
    """
    c, s = math.cos(run.step), math.sin(run.step)
    (t00, t01), (t10, t11) = (tuple(complex(v) for v in row) for row in run.mirror.transmit_operator())
    (r00, r01), (r10, r11) = (tuple(complex(v) for v in row) for row in run.mirror.reflect_operator())
    up, down = 1 + 0j, 0j
    reflected = []
    for _ in range(run.n_stages):
        up, down = c * up - 1j * s * down, c * down - 1j * s * up
        ru, rd = r00 * up + r01 * down, r10 * up + r11 * down
        reflected.append(abs(ru) ** 2 + abs(rd) ** 2)
        up, down = t00 * up + t01 * down, t10 * up + t11 * down
    detected = abs(up) ** 2 + abs(down) ** 2
    absorbed = 1.0 - math.fsum((detected, *reflected))
    return detected, BranchLedger(detected, tuple(reflected), absorbed)


def survival_first_order(run: ZenoRun) -> float:
    """First-order expansion in the small transmission amplitudes.

    For a flip-free mirror
    ``|Tu|^(2N) cos^(2N) [1 - 2 Re(Td/Tu) (N-1) tan^2]``; with spin flips the
    bracket gains ``2 Im(Tud/Tuu) N tan + 2 Im(Tdu/Tuu) (N-1) tan``.  All
    trigonometric functions take ``theta/N``.  Only defined for ``N >= 2``.
    """
    n = run.n_stages
    if n < 2:
        raise DomainError("first-order expansion needs N >= 2; use survival_exact for N = 1")
    t = as_spinflip(run.mirror).t_matrix
    t_uu, t_ud, t_du, t_dd = (complex(v) for v in t.ravel())
    if t_uu == 0:
        raise DomainError("expansion requires T_up != 0")
    ratio = t_dd / t_uu
    if abs(ratio) >= 1:
        raise DomainError(f"expansion requires |T_down/T_up| < 1, got {abs(ratio)!r}")
    tan = math.tan(run.step)
    bracket = (1 - 2 * ratio.real * (n - 1) * tan * tan
               + 2 * (t_ud / t_uu).imag * n * tan
               + 2 * (t_du / t_uu).imag * (n - 1) * tan)
    value = survival_dominant(run.theta, abs(t_uu) ** 2, n) * bracket
    return min(1.0, max(0.0, value))
