"""
Obstructions: a local failure and a glued extension
===================================================

First a lifting pair over heis3 whose bracket breaks Jacobi. Its obstruction
cochain is the volume form, which is exact, so a different lifting pair
repairs it. Then a coupling over a hollow triangle, where local pairs are
glued into a global extension after the class is shown to vanish.
"""

import random

from algebroid.cech import (
    Nerve,
    build_lifting_triple,
    global_obstruction_class,
    glue_extension,
    obstruction_triple,
    perturb_triple,
    trivialization,
    verify_cocycle,
)
from algebroid.core import Cochain, abelian, heisenberg
from algebroid.core.catalog import CATALOG
from algebroid.extension import (
    Coupling,
    build_extension,
    change_lifting_pair,
    obstruction_class,
    obstruction_cochain,
    pair_from_data,
    trivial_coupling,
)
from algebroid.linalg import MatrixQ
from algebroid.sampling import random_etas, random_one_form

# heis3 acting on a line through e1, with rho(e2, e3) = 1
mats = (MatrixQ(1, 1, {(0, 0): 1}), MatrixQ(1, 1), MatrixQ(1, 1))
c = Coupling(heisenberg(), abelian(1), mats)
pair = pair_from_data(c, mats, Cochain(2, 3, 1, {(1, 2): (1,)}))

failure = build_extension(pair)
print("Jacobi fails on", failure.labels)
print("lambda on (e1, e2, e3):", obstruction_cochain(pair).values[(0, 1, 2)][0])

# the class is zero, and the primitive says how to fix rho
oc = obstruction_class(c, pair)
print("class is zero:", oc.is_zero, " primitive on (e2, e3):", oc.primitive.values[(1, 2)][0])

# lambda does not see a change of lifting pair
rng = random.Random(0)
for _ in range(3):
    other = change_lifting_pair(pair, random_one_form(rng, pair.B, pair.L))
    print("lambda after a random change:", obstruction_cochain(other) == obstruction_cochain(pair))

# over a circle made of three charts
nerve = Nerve.hollow_triangle()
coupling = trivial_coupling(CATALOG["abelian2"](), CATALOG["heis3"]())
triple = perturb_triple(build_lifting_triple(nerve, coupling), random_etas(rng, coupling, nerve.vertices))
residuals = verify_cocycle(obstruction_triple(triple))
print("cocycle residuals:", {k: len(v) for k, v in residuals.items()})

G = global_obstruction_class(nerve, coupling)
print("global class zero:", G.is_zero)

a, m = trivialization(triple)
glued = glue_extension(triple, a, m)
print("glued: bracket failures", len(glued.morphism_failures()), " cocycle failures", len(glued.cocycle_failures()))
