"""
Freezing a spin with ideal mirrors
==================================

A spin starts up and is rotated by a total angle ``theta`` about x.  Splitting
the rotation into ``N`` stages, each followed by a perfect mirror that passes
only spin up, keeps the spin up with probability ``cos(theta/N)**(2N)``.
"""
import math

from zenolab import ZenoRun, survival_exact, survival_ideal
from zenolab.mirrors import IdealMirror

theta = math.pi / 2

# With a single stage the spin is fully flipped and nothing is detected.
print("N = 1:", survival_ideal(theta, 1))

# More stages freeze the spin; the exact closed form agrees with cos^(2N).
for n in (2, 5, 10, 100, 1000):
    exact = survival_exact(ZenoRun(theta, n, IdealMirror()))
    print(f"N = {n:5d}  P = {exact:.6f}  1 - P = {1 - exact:.2e}  theta^2/N = {theta ** 2 / n:.2e}")
