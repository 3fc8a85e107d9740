"""Matrix-vector products over the two-element field.

Multiplication over GF(2) is AND and addition is XOR, so each output
bit is the parity of an AND popcount: the row ALU output's least
significant bit, which is only usable because the popcounts are exact
integers. The demo encodes words of a short linear block code and
checks received words against its parity matrix.
"""

import numpy as np

from pimarray import ArrayGeometry, NumberFormat, Simulator, oracle

# The (7,4) single-error-correcting code: generator and parity-check.
G = np.array([
    [1, 0, 0, 0, 1, 1, 0],
    [0, 1, 0, 0, 1, 0, 1],
    [0, 0, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 1],
])
H = np.array([
    [1, 1, 0, 1, 1, 0, 0],
    [1, 0, 1, 1, 0, 1, 0],
    [0, 1, 1, 1, 0, 0, 1],
])

uint1 = NumberFormat.uint(1)

# Encode: codeword = message times G (over GF(2)). The array stores G
# transposed so each codeword bit is one row's parity.
encoder = Simulator(ArrayGeometry(words=7, word_bits=4))
encoder.load_matrix(G.T, uint1)

message = np.array([1, 0, 1, 1], dtype=bool)
codeword = np.array(encoder.run_gf2(message).decoded, dtype=bool)
print("message: ", message.astype(int).tolist())
print("codeword:", codeword.astype(int).tolist())
assert codeword.astype(int).tolist() == oracle.gf2_mvp(G.T, message)

# Check: the syndrome of a clean codeword is zero.
checker = Simulator(ArrayGeometry(words=3, word_bits=7))
checker.load_matrix(H, uint1)
syndrome = checker.run_gf2(codeword).decoded
print("syndrome (clean):  ", syndrome.tolist())

# Flip one bit; the syndrome becomes the column index pattern.
corrupted = codeword.copy()
corrupted[5] = ~corrupted[5]
syndrome = np.array(checker.run_gf2(corrupted).decoded)
print("syndrome (bit 5 hit):", syndrome.tolist())
column = next(
    j for j in range(7) if (H[:, j] == syndrome).all()
)
print("syndrome points at position", column)

# All three parity bits of every received word cost one cycle total.
print("\ncycles per syndrome:", checker.run_gf2(corrupted).cycles)
