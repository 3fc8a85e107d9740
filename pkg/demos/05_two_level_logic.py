"""Two-level Boolean logic out of thresholds and bank counts.

Each row evaluates one first-stage term: it stores HI at its literal
columns (a variable and its complement ride on separate columns) and
thresholds its AND popcount - |literals| for AND, 1 for OR, half for
majority. Each bank then counts asserting rows, and the second-stage
gate reads that count. One assignment costs one array cycle for every
bank at once.
"""

from pimarray import (
    ArrayGeometry,
    BankProgram,
    Gate,
    Literal,
    PlaProgram,
    Simulator,
    Term,
    oracle,
)

# Bank 0: f0 = (x0 AND x1) OR (NOT x2)      -- sum of min-terms
# Bank 1: f1 = (x0 OR x2) AND (x1 OR !x0)   -- product of max-terms
# Bank 2: f2 = MAJ(x0, x1, x2)              -- majority vote
program = PlaProgram(
    num_vars=3,
    banks=(
        BankProgram(
            terms=(
                Term(Gate.AND, (Literal(0), Literal(1))),
                Term(Gate.AND, (Literal(2, negated=True),)),
            ),
            output_gate=Gate.OR,
        ),
        BankProgram(
            terms=(
                Term(Gate.OR, (Literal(0), Literal(2))),
                Term(Gate.OR, (Literal(1), Literal(0, negated=True))),
            ),
            output_gate=Gate.AND,
        ),
        BankProgram(
            terms=(Term(Gate.MAJ, (Literal(0), Literal(1), Literal(2))),),
            output_gate=Gate.OR,
        ),
    ),
)

sim = Simulator(ArrayGeometry(words=6, word_bits=6, banks=3))
sim.program_pla(program)

print("x0 x1 x2 | f0 f1 f2   (reference)")
for code in range(8):
    assignment = [bool((code >> i) & 1) for i in range(3)]
    outs = sim.run_pla(assignment).decoded
    ref = oracle.pla(program, assignment)
    a = " ".join(str(int(v)) for v in assignment)
    o = "  ".join(str(int(v)) for v in outs)
    r = "".join(str(int(v)) for v in ref)
    mark = "" if list(outs) == ref else "  <-- MISMATCH"
    print(f" {a}  |  {o}   ({r}){mark}")

res = sim.run_pla([True, True, False])
print("\nbank counts for (1,1,0):", res.bank_counts.tolist(),
      "(asserting terms per bank)")
print("row thresholds:", sim.thresholds.tolist(),
      "(unused rows hold word_bits+1 so they never assert)")
