"""The full eigen-picture at n = 3: subset eigenvectors, the orthogonal
tableau basis, eigenvalues, and norms.

Run:  python3 demos/02_spectral_basis.py
"""

from burnside_lab import build_basis, build_kernel, multiplicity_table
from burnside_lab.chain import State
from burnside_lab.spectral import beta, pi_weights, subset_vector

n = 3
kernel = build_kernel(n, 2)

print("eigenvalues and multiplicities:")
for lam, mult in sorted(multiplicity_table(n).items(), reverse=True):
    print("   beta = %-5s multiplicity %d" % (lam, mult))
print()

# The subset vectors f_S diagonalize K but are not orthogonal.
v12 = subset_vector(n, (1, 2))
print("f_{1,2} over states 000..111 (by index):", [str(c) for c in v12])
image = kernel.matrix.matvec(v12)
print("K f_{1,2} == beta_1 f_{1,2}:",
      image == [beta(1) * c for c in v12])
print()

# The tableau-indexed family is orthogonal, with closed-form norms.
basis = build_basis(n, check_kernel=kernel)
states = ["000", "001", "010", "011", "100", "101", "110", "111"]
print("m l  tableau     eigenvalue  norm^2   coordinates (states %s)" % " ".join(states))
for vec in sorted(basis, key=lambda v: (v.m + v.ell, v.m)):
    fig = [vec.coordinates[State.from_string(t).index()] for t in states]
    print("%d %d  %-10s %-10s %-7s %s"
          % (vec.m, vec.ell, vec.tableau.second_row, vec.eigenvalue.value,
             vec.squared_norm, [str(c) for c in fig]))

weights = pi_weights(n)
parseval = all(
    sum(v.coordinates[x] ** 2 / v.squared_norm for v in basis) * weights[x] == 1
    for x in range(1 << n))
print("\nParseval sum f-bar(x)^2 = 1/pi(x) at every state:", parseval)
