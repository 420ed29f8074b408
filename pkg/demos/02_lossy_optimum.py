"""
Lossy mirrors and the optimal number of stages
==============================================

A real mirror transmits spin up with probability ``|T_up|^2 < 1``.  Adding
stages then costs transmission, so the survival probability peaks at a finite
``N``.  The exhaustive search is compared with the large-``N`` estimates.
"""
import math

from zenolab import DiagonalMirror, optimize

theta = math.pi / 2

print(" |T_up|^2   N est  N exact   P est   P exact")
for t_up2 in (0.99, 0.999, 0.9999):
    report = optimize(theta, DiagonalMirror.from_transmission(t_up2))
    print(f"{t_up2:9.4f}  {report.n_opt_estimate:6d}  {report.n_opt_exact:7d}"
          f"  {report.p_estimate:6.3f}  {report.p_at_exact:8.3f}")

# A down-spin leak barely matters: compare T_down = 0 with |T_down|^2 = 1e-2.
for t_down2 in (0.0, 1e-2):
    report = optimize(theta, DiagonalMirror.from_transmission(0.999, t_down2))
    print(f"|T_down|^2 = {t_down2:g}: N = {report.n_opt_exact}, P = {report.p_at_exact:.4f}")
