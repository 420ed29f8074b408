"""
General lossy measurements
==========================

Each stage spends a fraction ``alpha1`` of its time in a lossy decomposition
with survival ``L(t) = a + b t + c t^2`` and the rest in free evolution with
``p(t) = 1 - (t/tau_z)^2``.  The analytic optimum is compared with a direct
golden-section maximization of the stage product.
"""
import math

from zenolab.optimizer import LossModel, general_n_opt, general_p_opt, numeric_optimum

for a, b, alpha1 in ((0.9999, 0.0, 1e-9), (0.999, -0.05, 0.1), (0.99, -0.1, 0.3)):
    model = LossModel(a=a, b=b, alpha1=alpha1, alpha2=1 - alpha1, tau_z=1.0, t_total=math.pi / 2)
    n_star, p_star = numeric_optimum(model)
    print(f"a={a} b={b} alpha1={alpha1}: analytic N={general_n_opt(model):.2f} P={general_p_opt(model):.4f}"
          f" | numeric N={n_star:.2f} P={p_star:.4f}")

# Lossless decompositions: no finite optimum, only the linear loss term survives.
model = LossModel(a=1.0, b=-0.1, alpha1=0.5, alpha2=0.5, t_total=2.0)
print("a = 1:", general_n_opt(model), general_p_opt(model), math.exp(-0.1))
