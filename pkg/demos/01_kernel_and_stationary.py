"""Build small Burnside kernels, inspect their exact entries, and check the
stationary law by hand.

Run:  python3 demos/01_kernel_and_stationary.py
"""

from burnside_lab import RngStream, State, build_kernel, run_chain
from burnside_lab.chain import kernel_entry, stationary_probability

# The binary chain on two coordinates: four states 00, 10, 01, 11
# (little-endian indexing: state index = x1 + 2*x2).
kernel = build_kernel(2, 2)
print("K_2 rows (states 00, 10, 01, 11):")
for row in kernel.matrix.data:
    print("   ", [str(v) for v in row])
print("stationary law:", [str(p) for p in kernel.stationary])
print()

# Entries come from a closed form in the pair counts n_ab; the stationary
# mass of a state is 1/(number of orbits * orbit size).
x = State.from_string("0011")
y = State.from_string("0101")
print("K(0011, 0101) =", kernel_entry(x, y))
print("pi(0011) =", stationary_probability(x))
print()

# A three-letter alphabet works the same way; rows still sum to one exactly.
k3 = build_kernel(2, 3)
print("K_2 over {0,1,2}: row from state 00:")
print("   ", [str(v) for v in k3.matrix.data[0]])
print("row sum:", sum(k3.matrix.data[0]))
print()

# The sampler implements the literal two-stage move: a uniform permutation
# fixing the state, then uniform labels on its cycles.  Streams replay.
trajectory = run_chain(State.from_string("000111"), 8, RngStream(seed=7))
print("8 steps from 000111:", " -> ".join(str(s) for s in trajectory))
