"""How fast a GHZ probe loses its Heisenberg advantage with no correction.

Prints Q / t^2 against gamma t for a few sizes, next to the short-time
expansion, and the time at which the exact QFI peaks.
"""

import numpy as np

from ghzqfi import SystemParams, qfi_noec_exact, qfi_noec_taylor

gamma, omega = 1.0, 100.0
for n in (1, 3, 10):
    print(f"n = {n}")
    for gt in (1e-3, 1e-2, 1e-1, 0.5):
        params = SystemParams(n, omega, gamma, tau=gt / gamma)
        exact = qfi_noec_exact(params)
        approx = qfi_noec_taylor(params)
        print(f"  gamma t = {gt:<6g} Q/(n t)^2 = {exact.normalized:.5f}   short-time {approx.normalized:.5f}")
    ts = np.linspace(0.01, 6.0, 600) / (n * gamma)
    q = [qfi_noec_exact(SystemParams(n, omega, gamma, tau=t)).qfi for t in ts]
    print(f"  peak at n gamma t = {n * gamma * ts[int(np.argmax(q))]:.2f}")
