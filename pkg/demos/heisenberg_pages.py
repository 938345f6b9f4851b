"""
The Heisenberg algebra as an extension of the plane
===================================================

heis3 is the central extension of the abelian plane by a line, with
[e1, e2] = e3. Filtering its forms by the number of plane slots gives a
spectral sequence whose second page has two rows (1, 2, 1) and whose only
nontrivial differential kills the corner classes.
"""

from algebroid.core import Cochain, abelian
from algebroid.extension import build_extension, pair_from_data, trivial_coupling
from algebroid.linalg import MatrixQ
from algebroid.spectral import ExtensionComplex, convergence_check, run_spectral_sequence

# the lifting pair: zero action, rho(e1, e2) = e3
coupling = trivial_coupling(abelian(2), abelian(1))
pair = pair_from_data(coupling, [MatrixQ(1, 1)] * 2, Cochain(2, 2, 1, {(0, 1): (1,)}))
E = build_extension(pair)
X = ExtensionComplex(E)
seq = run_spectral_sequence(X.filtered)


def show(page):
    for q in (1, 0):
        print(f"  q={q}  " + "  ".join(str(page.cells[(p, q)].dim) for p in range(3)))


# E1 is the plane's forms tensored with the line's cohomology
print("E1")
show(seq.pages[1])

# d1 vanishes because the action is trivial, so E2 = E1
print("E2")
show(seq.pages[2])

# d2 : E2^{0,1} -> E2^{2,0} is the extension cocycle, with a sign from the conventions
d2 = seq.pages[2].differentials[(0, 1)]
print("d2 on the corner:", [[str(x) for x in row] for row in d2.to_dense()])

print("E3")
show(seq.pages[3])

# the surviving classes add up to the cohomology of heis3 itself
conv = convergence_check(X.filtered, seq)
print("E_infinity totals", conv["e_infinity"], "direct", conv["direct"])

# the split extension has the same first page but nothing ever moves
split = ExtensionComplex(build_extension(pair_from_data(coupling, [MatrixQ(1, 1)] * 2, Cochain(2, 2, 1))))
print("split totals", convergence_check(split.filtered, run_spectral_sequence(split.filtered))["direct"])
