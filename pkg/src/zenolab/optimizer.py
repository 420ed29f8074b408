"""
Optimal number of mirror stages.

With lossy mirrors the survival probability first rises with ``N`` (Zeno
suppression of the rotation) and then decays as ``|T_up|**(2N)``.  This module
locates the maximum by exhaustive integer search and by the large-``N``
estimates, and evaluates the general lossy-measurement model in which each
stage spends time in free evolution and time in a lossy decomposition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import optimize as _opt

from .engine import ZenoRun, survival_exact
from .errors import DomainError, OutOfRegimeError
from .mirrors import MirrorModel

# maximum number of traverses reported for the neutron resonator
DEFAULT_CEILING = 4000


class SearchResult(NamedTuple):
    n_opt: int
    p_opt: float
    n_max: int
    ceiling_hit: bool


@dataclass(frozen=True)
class OptimumReport:
    n_opt_exact: int
    p_at_exact: float
    n_opt_estimate: Optional[int]
    p_estimate: Optional[float]
    search_ceiling: int
    ceiling_hit: bool
    note: str = ""


def n_opt_search(survival: Callable[[int], float], n_max: int) -> SearchResult:
    """Scan ``N = 1..n_max`` and return the smallest maximizer."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    best_n, best_p = 1, survival(1)
    for n in range(2, n_max + 1):
        p = survival(n)
        if p > best_p:
            best_n, best_p = n, p
    return SearchResult(best_n, best_p, n_max, best_n == n_max)


def _round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def n_opt_estimate(theta: float, t_up_mod2: float) -> int:
    """Closest integer to ``theta / sqrt(1 - |T_up|^2)``, at least 1."""
    if not (0.0 < t_up_mod2 <= 1.0):
        raise DomainError(f"|T_up|^2 must lie in (0, 1), got {t_up_mod2!r}")
    if t_up_mod2 == 1.0:
        raise DomainError("no finite optimum; ideal QZE")
    return max(1, _round_half_away(theta / math.sqrt(1.0 - t_up_mod2)))


def p_opt_estimate(theta: float, t_up_mod2: float) -> float:
    """Large-``N`` maximum ``1 - 2 theta sqrt(1 - |T_up|^2)``."""
    if not (0.0 < t_up_mod2 <= 1.0):
        raise DomainError(f"|T_up|^2 must lie in (0, 1], got {t_up_mod2!r}")
    value = 1.0 - 2.0 * theta * math.sqrt(1.0 - t_up_mod2)
    if not 0.0 <= value <= 1.0:
        raise OutOfRegimeError(f"asymptotic maximum {value!r} is not a probability")
    return value


def default_ceiling(t_up_mod2: float, theta: float = math.pi / 2) -> int:
    if t_up_mod2 >= 1.0:
        return DEFAULT_CEILING
    return max(4 * n_opt_estimate(theta, t_up_mod2), DEFAULT_CEILING)


def optimize(theta: float, mirror: MirrorModel, n_max: Optional[int] = None,
             survival: Callable[[ZenoRun], float] = survival_exact) -> OptimumReport:
    """Exact integer optimum of ``survival`` together with the estimates."""
    t_up2 = mirror.transmission_up2
    lossless = t_up2 >= 1.0
    if n_max is None:
        n_max = default_ceiling(t_up2, theta)
    found = n_opt_search(lambda n: survival(ZenoRun(theta, n, mirror)), n_max)
    if lossless:
        return OptimumReport(found.n_opt, found.p_opt, None, None, n_max, found.ceiling_hit,
                             note="no finite optimum; ideal QZE")
    note = ""
    try:
        p_est = p_opt_estimate(theta, t_up2)
    except OutOfRegimeError as exc:
        p_est, note = None, str(exc)
    return OptimumReport(found.n_opt, found.p_opt, n_opt_estimate(theta, t_up2), p_est,
                         n_max, found.ceiling_hit, note)


def x_opt_approx(theta: float, a: float) -> float:
    """``2 theta / sqrt(ln a^-2)``, the large-``x`` maximizer of ``a^x cos^x(2 theta/x)``."""
    return 2.0 * theta / math.sqrt(-2.0 * math.log(a))


def x_opt_root(theta: float, a: float) -> float:
    """Maximizer of ``f(x) = a^x cos^x(2 theta / x)`` found by bisection.

    Solves ``a cos(2 theta/x) = exp(-(2 theta/x) tan(2 theta/x))``, whose
    left minus right side is positive below the maximum and negative above.
    """
    if not 0.0 < a < 1.0:
        raise DomainError(f"a must lie in (0, 1), got {a!r}")
    if not theta > 0.0:
        raise DomainError(f"theta must be positive, got {theta!r}")

    def g(x):
        u = 2.0 * theta / x
        return a * math.cos(u) - math.exp(-u * math.tan(u))

    lo = 2.0 * theta / (math.pi / 2) * (1 + 1e-9)
    hi = 10.0 * x_opt_approx(theta, a)
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo > 0 > g_hi):
        raise ArithmeticError(f"no sign change on [{lo!r}, {hi!r}]: g = ({g_lo!r}, {g_hi!r})")
    return _opt.bisect(g, lo, hi, xtol=1e-10, maxiter=200)


@dataclass(frozen=True)
class LossModel:
    """Stage survival ``[L(t1/N) p(t2/N)]**N`` with ``L(t) = a + b t + c t^2``.

    ``t1 = alpha1 t_total`` is spent in lossy decompositions and
    ``t2 = alpha2 t_total`` in free evolution with ``p(t) = 1 - (t/tau_z)^2``.
    """

    a: float
    b: float = 0.0
    c: float = 0.0
    tau_z: float = 1.0
    alpha1: float = 1e-9
    alpha2: float = 1.0 - 1e-9
    t_total: float = math.pi / 2

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c, self.tau_z,
                                               self.alpha1, self.alpha2, self.t_total)):
            raise DomainError("loss model parameters must be finite")
        if not 0.0 <= self.a <= 1.0:
            raise DomainError(f"a must lie in [0, 1], got {self.a!r}")
        if self.a == 1.0 and self.b > 0.0:
            raise DomainError("a = 1 requires b <= 0")
        if not (0.0 < self.alpha1 < 1.0 and 0.0 < self.alpha2 < 1.0):
            raise DomainError("alpha1 and alpha2 must lie in (0, 1)")
        if abs(self.alpha1 + self.alpha2 - 1.0) > 1e-12:
            raise DomainError("alpha1 + alpha2 must equal 1")
        if self.tau_z <= 0.0 or self.t_total <= 0.0:
            raise DomainError("tau_z and t_total must be positive")
        grid = np.linspace(0.0, self.t_total, 1000)
        values = self.a + self.b * grid + self.c * grid ** 2
        if values.min() < 0.0 or values.max() > 1.0:
            raise DomainError("L(t) leaves [0, 1] on [0, t_total]")

    @property
    def t1(self) -> float:
        return self.alpha1 * self.t_total

    @property
    def t2(self) -> float:
        return self.alpha2 * self.t_total

    def loss(self, t: float) -> float:
        return self.a + self.b * t + self.c * t * t

    def loss_rate(self, t: float) -> float:
        return self.b + 2.0 * self.c * t

    def survival(self, t: float) -> float:
        return max(0.0, 1.0 - (t / self.tau_z) ** 2)

    def survival_rate(self, t: float) -> float:
        return -2.0 * t / self.tau_z ** 2

    def log_probability(self, n: float) -> float:
        """``N ln L(t1/N) + N ln p(t2/N)``; ``-inf`` where a factor vanishes."""
        lv, pv = self.loss(self.t1 / n), self.survival(self.t2 / n)
        if lv <= 0.0 or pv <= 0.0:
            return -math.inf
        return n * (math.log(lv) + math.log(pv))


def general_n_opt(model: LossModel) -> float:
    """Continuous optimal stage count ``t / tau_opt``.

    Returns ``inf`` for ``a = 1``: lossless decompositions favour infinitely
    frequent stages.
    """
    a = model.a
    if a == 1.0:
        return math.inf
    if a == 0.0:
        raise OutOfRegimeError("a = 0 leaves nothing to detect")
    ratio = model.alpha1 / model.alpha2
    radicand = 1.0 - model.tau_z ** 2 * ratio ** 2 * (model.c / a - model.b ** 2 / (2 * a * a))
    if radicand <= 0.0:
        raise OutOfRegimeError(f"negative radicand {radicand!r} in the optimal-frequency formula")
    rate = model.alpha2 / (model.tau_z * math.sqrt(-math.log(a))) * math.sqrt(radicand)
    return model.t_total * rate


def general_p_opt(model: LossModel) -> float:
    """Maximal survival ``a^(2 N_opt) exp(b t1 / a)``; ``exp(-|b| t1)`` at ``a = 1``."""
    if model.a == 1.0:
        return math.exp(-abs(model.b) * model.t1)
    n = general_n_opt(model)
    return math.exp(2.0 * n * math.log(model.a) + model.b * model.t1 / model.a)


def stationarity_residual(model: LossModel, n: float) -> float:
    """``d/dN ln P`` at ``n``; zero at an exact stationary point."""
    x1, x2 = model.t1 / n, model.t2 / n
    lv, pv = model.loss(x1), model.survival(x2)
    if lv <= 0.0 or pv <= 0.0:
        raise OutOfRegimeError(f"loss or survival factor vanishes at N = {n!r}")
    return (math.log(lv) + math.log(pv)
            - x1 * model.loss_rate(x1) / lv
            - x2 * model.survival_rate(x2) / pv)


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-8) -> float:
    """Maximizer of a unimodal ``f`` on ``[lo, hi]`` to absolute tolerance ``tol``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
    return (lo + hi) / 2.0


def numeric_optimum(model: LossModel, n_lo: float = 1.0, n_hi: float = 1e6,
                    rtol: float = 1e-8) -> tuple[float, float]:
    """Directly maximize the stage product over continuous ``N``.

    The search runs in ``log N`` so the tolerance is relative in ``N``.
    Returns ``(N*, P(N*))``.
    """
    u = golden_section_max(lambda v: model.log_probability(math.exp(v)),
                           math.log(n_lo), math.log(n_hi), rtol)
    n_star = math.exp(u)
    return n_star, math.exp(model.log_probability(n_star))
