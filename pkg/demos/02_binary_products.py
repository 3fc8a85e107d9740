"""One-bit matrix-vector products in all four level pairings.

With -1/+1 operand levels a dot product folds into a similarity count:
<a, x> = 2*hsim(a, x) - N, computed from XNOR popcounts in one cycle.
Mixed pairings (one side -1/+1, the other 0/1) add a per-matrix stored
correction term; plain 0/1 pairs come straight out of AND popcounts.
This is the arithmetic behind binarized neural network layers.
"""

import numpy as np

from pimarray import ArrayGeometry, NumberFormat, Simulator, Mvp, oracle

rng = np.random.default_rng(2)

M, N = 6, 32
uint1 = NumberFormat.uint(1)
oddint1 = NumberFormat.oddint(1)

pairings = [
    ("-1/+1 matrix, -1/+1 vector", oddint1, oddint1),
    ("0/1 matrix, 0/1 vector", uint1, uint1),
    ("-1/+1 matrix, 0/1 vector", oddint1, uint1),
    ("0/1 matrix, -1/+1 vector", uint1, oddint1),
]

for name, mat_fmt, vec_fmt in pairings:
    def sample(fmt, size):
        if fmt is oddint1:
            return 2 * rng.integers(0, 2, size=size) - 1
        return rng.integers(0, 2, size=size)

    A = sample(mat_fmt, (M, N))
    x = sample(vec_fmt, N)

    sim = Simulator(ArrayGeometry(M, N))
    sim.load_matrix(A, mat_fmt)
    mode = Mvp(mat_fmt, vec_fmt)
    sim.prepare_mode(mode)  # one-time probe per matrix for mixed pairs
    result = sim.run_mvp(mode, x)

    reference = oracle.mvp(A, x)
    status = "ok" if list(result.decoded) == reference else "MISMATCH"
    print(f"{name}:")
    print(f"  simulated {result.decoded.tolist()}")
    print(f"  reference {reference}  [{status}]")
    print(f"  cycles per product: {result.cycles}\n")

# The stored correction for mixed pairs is a similarity against the
# all-ones (or all-zeros) word; captured once, reused for every vector.
sim = Simulator(ArrayGeometry(1, 8))
sim.load_matrix([[1, -1, 1, 1, -1, -1, 1, -1]], oddint1)
sim.prepare_mode(Mvp(oddint1, uint1))
print("stored all-ones similarity for the mixed pairing:",
      int(sim.alu.stored_count[0]), "(number of +1 entries)")
