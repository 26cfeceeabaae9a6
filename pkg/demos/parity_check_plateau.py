"""Repeated parity checks hold the QFI near the Heisenberg limit.

Compares the exact recurrence with the long-time series while the number of
rounds grows, then spoils the ancilla and the correction step.
"""

from ghzqfi import SystemParams, qfi_case1_series, qfi_exact, qfi_noec_exact

n, gamma, tau = 10, 1.0, 1e-3
omega = 20 * gamma
print("rounds  exact Q/(n t)^2  series   no correction")
for rounds in (1, 10, 100, 1000, 10000):
    params = SystemParams(n, omega, gamma, tau=tau, rounds=rounds)
    exact = qfi_exact(params).normalized
    series = qfi_case1_series(params).normalized
    bare = qfi_noec_exact(params).normalized
    print(f"{rounds:>6}  {exact:>15.6f}  {series:.6f}  {bare:.3e}")

print()
base = SystemParams(n, omega, gamma, tau=tau, rounds=1000)
for xi, p in ((0.0, 0.0), (1e-3, 0.0), (0.0, 0.01), (1e-3, 0.01)):
    q = qfi_exact(base.with_(xi=xi, p=p))
    print(f"xi = {xi:<6g} p = {p:<5g} -> Q/(n t)^2 = {q.normalized:.5f}  [{q.scenario.value}]")
