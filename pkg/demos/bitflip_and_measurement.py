"""Bit-flip code on the sensing qubits, then a product measurement.

The Fisher information of measuring every qubit in the alpha basis reaches
the QFI when alpha is tuned to the accumulated phase.
"""

import math

from ghzqfi import PovmAngle, SystemParams, fisher_povm, qfi_bitflip
from ghzqfi.ecc import bitflip_state

params = SystemParams(n=3, omega=2.0, gamma=0.5, tau=0.05, rounds=20)
state = bitflip_state(params)
qfi = qfi_bitflip(params).qfi
print(f"R = {state.R:.6f}  theta = {state.theta:.6f}  QFI = {qfi:.6f}")

for offset in (0.0, math.pi / 8, math.pi / 4, math.pi / 2 - 1e-3):
    alpha = PovmAngle(state.theta - math.pi / 2 + offset)
    f = fisher_povm(state, alpha)
    print(f"alpha offset {offset:.3f}: F = {f:.6f}  F/QFI = {f / qfi:.4f}")
