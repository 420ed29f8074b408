import numpy as np
import pytest

from zenolab.mirrors import DiagonalMirror, SpinFlipMirror


def _phase(rng):
    return np.exp(1j * rng.uniform(0, 2 * np.pi))


def make_diagonal(rng, conservative):
    amps = []
    for _ in range(2):
        t2 = rng.uniform()
        r2 = 1.0 - t2 if conservative else rng.uniform(0.0, 1.0 - t2)
        amps.append((np.sqrt(t2) * _phase(rng), np.sqrt(r2) * _phase(rng)))
    (t_up, r_up), (t_down, r_down) = amps
    return DiagonalMirror(t_up, t_down, r_up, r_down)


def make_spinflip(rng, conservative):
    # columns of a Haar isometry, optionally shrunk column by column
    z = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    q, _ = np.linalg.qr(z)
    if not conservative:
        q = q * np.sqrt(rng.uniform(size=2))
    return SpinFlipMirror(q[:2], q[2:])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
