"""Bit-serial multi-bit products, one plane pair per cycle.

A K-bit-entry matrix occupies K adjacent columns per entry; an L-bit
vector is fed one bit plane per cycle. Two doubling accumulators in
each row ALU reassemble the full product in exactly K*L cycles: the
first serializes the vector planes, the second the matrix planes.
Signed (two's complement) formats negate the most significant plane's
contribution on its way into the accumulator.
"""

import numpy as np

from pimarray import ArrayGeometry, NumberFormat, Simulator, Mvp, oracle

rng = np.random.default_rng(3)

# 4-bit unsigned matrix times 4-bit unsigned vector: 16 cycles.
M, J, K, L = 4, 8, 4, 4
A = rng.integers(0, 16, size=(M, J))
x = rng.integers(0, 16, size=J)

sim = Simulator(ArrayGeometry(words=M, word_bits=J * K))
sim.load_matrix(A, NumberFormat.uint(K))
mode = Mvp(NumberFormat.uint(K), NumberFormat.uint(L))
sim.prepare_mode(mode)
result = sim.run_mvp(mode, x, record=True)

print(f"A ({M}x{J}, {K}-bit) times x ({L}-bit):")
print("  simulated:", result.decoded.tolist())
print("  reference:", oracle.mvp(A, x))
print(f"  cycles: {result.cycles} (= K*L = {K}*{L})")

print("\nper-cycle accumulator trace (row 0):")
for entry in result.trace or []:
    if entry.completed:
        print(f"  after {entry.completed:<8} vec_acc={int(entry.vec_acc[0]):>6}"
              f" mat_acc={int(entry.mat_acc[0]):>8}")

# Signed formats: an int4 matrix against an int4 vector.
A2 = rng.integers(-8, 8, size=(M, J))
x2 = rng.integers(-8, 8, size=J)
sim2 = Simulator(ArrayGeometry(M, J * 4))
sim2.load_matrix(A2, NumberFormat.int_(4))
mode2 = Mvp(NumberFormat.int_(4), NumberFormat.int_(4))
sim2.prepare_mode(mode2)
res2 = sim2.run_mvp(mode2, x2)
print("\nsigned 4-bit product:", res2.decoded.tolist(),
      "| reference:", oracle.mvp(A2, x2))

# A per-row bias rides on the programmable thresholds (dense layers).
bias = rng.integers(-10, 11, size=M)
res3 = sim2.run_mvp(mode2, x2, bias=bias)
print("with bias", bias.tolist(), "->", res3.decoded.tolist())

# The odd-integer format: -1/+1 levels at every plane weight, so a
# 2-bit word covers {-3, -1, +1, +3}. Useful for Hadamard-like
# transforms where a 1-bit signed matrix meets a multi-bit vector.
H = np.array(
    [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]
)
v = rng.integers(-8, 8, size=4)
sim4 = Simulator(ArrayGeometry(4, 4))
sim4.load_matrix(H, NumberFormat.oddint(1))
mode4 = Mvp(NumberFormat.oddint(1), NumberFormat.int_(4))
sim4.prepare_mode(mode4)
res4 = sim4.run_mvp(mode4, v)
print("\n4-point transform of", v.tolist(), "->", res4.decoded.tolist(),
      f"({res4.cycles} cycles)")
print("reference:", oracle.mvp(H, v))
