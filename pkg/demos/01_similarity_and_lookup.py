"""Word similarity and content-addressable lookup.

Stores a small dictionary of binary words and queries it three ways:
per-word similarity scores, exact-match lookup, and threshold lookup
(approximate matching). All M words are scored in a single array cycle.
"""

import numpy as np

from pimarray import ArrayGeometry, NumberFormat, Simulator

rng = np.random.default_rng(1)

M, N = 8, 16  # eight stored words, sixteen bits each
words = rng.integers(0, 2, size=(M, N))

sim = Simulator(ArrayGeometry(words=M, word_bits=N))
sim.load_matrix(words, NumberFormat.uint(1))

# Take one stored word and flip two of its bits.
query = words[3].astype(bool).copy()
query[[2, 9]] = ~query[[2, 9]]

print("stored words:")
for m, w in enumerate(words):
    print(f"  {m}: {''.join(map(str, w))}")
print("query:  ", "".join(str(int(b)) for b in query), "(word 3, 2 bits flipped)")

# Similarity mode: scores count the agreeing bit positions.
scores = sim.run_hamming(query)
print("\nsimilarity scores:", scores.decoded, f"(max possible {N})")
print("nearest word:", int(np.argmax(scores.decoded)))

# Complete-match lookup: no word equals the corrupted query.
exact = sim.run_cam(query)
print("\nexact matches:", np.flatnonzero(exact.decoded).tolist() or "none")

# Threshold lookup: allow up to two disagreeing bits.
close = sim.run_cam(query, thresholds=N - 2)
print(f"matches within distance 2:", np.flatnonzero(close.decoded).tolist())

# The raw row outputs are similarity minus threshold; a match is any
# nonnegative output, so the sign bit alone decides.
print("raw outputs (score - threshold):", close.y)
print("\neach query costs 1 array cycle for all", M, "words",
      f"(+{2} cycles pipeline latency)")
