"""
Mirrors that flip the spin
==========================

A mirror may also convert up to down (or back) on transmission.  The exact
survival is checked against stage-by-stage propagation, which additionally
reports where the lost probability went.
"""
import math

from zenolab import ZenoRun, survival_exact, survival_first_order, survival_oracle
from zenolab.mirrors import SpinFlipMirror

t_uu = math.sqrt(0.9999)
mirror = SpinFlipMirror.from_entries(
    t_uu, 2e-4j, -1e-4j, 0.0,
    0.0, 0.0, 0.0, math.sqrt(0.999),
)
# part of each stage is absorbed rather than reflected
print("conservative:", mirror.is_conservative())

run = ZenoRun(math.pi / 2, 157, mirror)
exact = survival_exact(run)
brute, ledger = survival_oracle(run)
print(f"exact {exact:.12f}  propagated {brute:.12f}  first order {survival_first_order(run):.12f}")

# Every bit of probability is accounted for.
print(f"detected {ledger.detected:.6f}  reflected {sum(ledger.reflected):.6f}"
      f"  absorbed {ledger.absorbed:.1e}  total {ledger.total:.15f}")
