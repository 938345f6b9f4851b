"""
The Atiyah algebroid of O(n) on the projective line
===================================================

Two charts, Laurent polynomials on the overlap, and a weight window that
keeps everything finite. The forms of the algebroid sit in an exact sequence
with the de Rham complex of the line on both ends, and the connecting map is
cup product with the Chern class. For n != 0 that map is an isomorphism and
almost everything cancels.
"""

from algebroid.atiyah import (
    atiyah_data,
    build_p1_model,
    degeneration_check,
    hypercohomology_atiyah,
    les_connecting,
    line_bundle_cohomology,
)

# sheaf cohomology of line bundles, straight from the Čech complex
for m in range(-3, 3):
    print(f"H(O({m})) =", line_bundle_cohomology(m, abs(m) + 3))

for n in (-2, -1, 0, 1, 2):
    model = build_p1_model(n, abs(n) + 3)        # raises if the window is too small
    print(f"\nn = {n}, window [-{model.D}, {model.D}]")

    # the transition form is the logarithmic derivative of z^n
    print("  phi01 =", atiyah_data(n).phi01)

    # connecting map on pinned generators, two ways
    les = les_connecting(model)
    print("  chase", les["chase"][0][0, 0], " cup", les["cup"][0][0, 0])

    hyp = hypercohomology_atiyah(model, les)
    print("  hypercohomology", hyp["direct"], " from the sequence", hyp["formula"])

    deg = degeneration_check(model, les)
    print("  d1 on generators", deg["d1_on_generators"], " d2 = 0:", deg["d2_zero"],
          " E2 totals", deg["E2_totals"])
