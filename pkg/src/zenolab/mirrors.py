"""
Magnetic-mirror stages: the spin-resolved split into a transmitted and a
reflected branch.

Every mirror exposes a transmit operator and a reflect operator.  Operator
entries are indexed ``[out, in]`` so that ``T[0, 1]`` is the amplitude for an
incoming down spin to leave transmitted as up.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError

# tolerance on the unitarity bound |T|^2 + |R|^2 <= 1
UNITARITY_TOL = 1e-9


def coefficient(mod2: float, phase: float = 0.0) -> complex:
    """Complex amplitude from its squared modulus and phase (radians)."""
    if not (math.isfinite(mod2) and math.isfinite(phase)):
        raise DomainError("coefficient must be finite")
    if mod2 < 0:
        raise DomainError(f"squared modulus must be >= 0, got {mod2!r}")
    return cmath.rect(math.sqrt(mod2), phase)


def _finite(*values: complex) -> None:
    for v in values:
        if not cmath.isfinite(v):
            raise DomainError(f"mirror coefficient {v!r} is not finite")


def _column_budget(*amps: complex) -> float:
    total = sum(abs(a) ** 2 for a in amps)
    if total > 1 + UNITARITY_TOL:
        raise DomainError(f"mirror column carries probability {total!r} > 1")
    return total


@dataclass(frozen=True)
class IdealMirror:
    """Perfect projective split: up is transmitted, down is reflected."""

    def transmit_operator(self) -> np.ndarray:
        return np.diag([1, 0]).astype(complex)

    def reflect_operator(self) -> np.ndarray:
        return np.diag([0, 1]).astype(complex)

    def is_conservative(self) -> bool:
        return True

    @property
    def transmission_up2(self) -> float:
        return 1.0


@dataclass(frozen=True)
class DiagonalMirror:
    """Lossy mirror without spin flips.

    ``t_up``/``t_down`` are transmission and ``r_up``/``r_down`` reflection
    amplitudes for each spin.  Columns may fall short of unit probability;
    the missing part is absorbed.
    """

    t_up: complex
    t_down: complex = 0j
    r_up: complex = 0j
    r_down: complex = 1 + 0j

    def __post_init__(self):
        for name in ("t_up", "t_down", "r_up", "r_down"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        _finite(self.t_up, self.t_down, self.r_up, self.r_down)
        _column_budget(self.t_up, self.r_up)
        _column_budget(self.t_down, self.r_down)

    @classmethod
    def from_transmission(cls, t_up2: float, t_down2: float = 0.0,
                          phase_up: float = 0.0, phase_down: float = 0.0) -> "DiagonalMirror":
        """Conservative mirror with real reflection amplitudes filling the budget."""
        return cls(
            t_up=coefficient(t_up2, phase_up),
            t_down=coefficient(t_down2, phase_down),
            r_up=math.sqrt(max(0.0, 1.0 - t_up2)),
            r_down=math.sqrt(max(0.0, 1.0 - t_down2)),
        )

    def transmit_operator(self) -> np.ndarray:
        return np.diag([self.t_up, self.t_down])

    def reflect_operator(self) -> np.ndarray:
        return np.diag([self.r_up, self.r_down])

    def is_conservative(self) -> bool:
        return (abs(abs(self.t_up) ** 2 + abs(self.r_up) ** 2 - 1) <= UNITARITY_TOL
                and abs(abs(self.t_down) ** 2 + abs(self.r_down) ** 2 - 1) <= UNITARITY_TOL)

    @property
    def transmission_up2(self) -> float:
        return abs(self.t_up) ** 2


@dataclass(frozen=True)
class SpinFlipMirror:
    """Mirror whose transmitted and reflected branches may flip the spin.

    ``t_matrix[i, j]`` is the transmission amplitude from spin ``j`` to spin
    ``i`` (0 = up, 1 = down); likewise ``r_matrix``.
    """

    t_matrix: np.ndarray = field(compare=False)
    r_matrix: np.ndarray = field(compare=False)

    def __post_init__(self):
        t = np.array(self.t_matrix, dtype=complex)
        r = np.array(self.r_matrix, dtype=complex)
        if t.shape != (2, 2) or r.shape != (2, 2):
            raise DomainError("spin-flip mirror needs two 2x2 matrices")
        _finite(*t.ravel(), *r.ravel())
        t.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "t_matrix", t)
        object.__setattr__(self, "r_matrix", r)
        for col in (0, 1):
            _column_budget(t[0, col], t[1, col], r[0, col], r[1, col])
        # columns may also interfere: the stage must be a contraction overall
        top = np.linalg.eigvalsh(self.gram())[-1]
        if top > 1 + UNITARITY_TOL:
            raise DomainError(f"mirror amplifies probability (largest gain {top!r} > 1)")

    @classmethod
    def from_entries(cls, t_uu, t_ud, t_du, t_dd, r_uu, r_ud, r_du, r_dd) -> "SpinFlipMirror":
        """Build from the eight amplitudes; ``t_ud`` is down -> up."""
        return cls(np.array([[t_uu, t_ud], [t_du, t_dd]]),
                   np.array([[r_uu, r_ud], [r_du, r_dd]]))

    def transmit_operator(self) -> np.ndarray:
        return self.t_matrix.copy()

    def reflect_operator(self) -> np.ndarray:
        return self.r_matrix.copy()

    def gram(self) -> np.ndarray:
        """``T^dagger T + R^dagger R``; the identity for a lossless mirror."""
        t, r = self.t_matrix, self.r_matrix
        return t.conj().T @ t + r.conj().T @ r

    def is_conservative(self) -> bool:
        return bool(np.all(np.abs(self.gram() - np.eye(2)) <= UNITARITY_TOL))

    @property
    def transmission_up2(self) -> float:
        return abs(self.t_matrix[0, 0]) ** 2


MirrorModel = Union[IdealMirror, DiagonalMirror, SpinFlipMirror]


def transmit_operator(m: MirrorModel) -> np.ndarray:
    return m.transmit_operator()


def reflect_operator(m: MirrorModel) -> np.ndarray:
    return m.reflect_operator()


def is_conservative(m: MirrorModel) -> bool:
    return m.is_conservative()


def as_spinflip(m: MirrorModel) -> SpinFlipMirror:
    """Embed any mirror into the general spin-flip form."""
    if isinstance(m, SpinFlipMirror):
        return m
    return SpinFlipMirror(m.transmit_operator(), m.reflect_operator())
