"""Acceptance gate.

Each test decides one criterion and records a single PASS/FAIL line, which
conftest.py prints in the terminal summary.  Run with ``pytest
tests/test_acceptance.py -v``.
"""

import random
import time
from math import comb
from pathlib import Path

from algebroid.atiyah import (
    build_p1_model,
    d1_well_defined_residual,
    degeneration_check,
    hypercohomology_atiyah,
    les_connecting,
    random_d0_cocycle,
    random_family,
    truncation_certificate,
)
from algebroid.cech import cocycle_is_zero, obstruction_triple, verify_cocycle
from algebroid.cli.schema import extension, load_document
from algebroid.core import Cochain, validate_lie_rinehart
from algebroid.extension import (
    ExtensionStructure,
    JacobiFailure,
    build_extension,
    change_lifting_pair,
    difference_class,
    extensions_equivalent,
    obstruction_cochain,
    torsor_action,
)
from algebroid.sampling import FIBRES, random_coupling, random_lifting_triple, random_nerve, random_one_form
from algebroid.spectral import convergence_check, e1_isomorphism_check, random_d0_cocycle as d0_cocycle
from algebroid.spectral import random_splitting_family

from oracles import ce_dims, simplicial_betti
from test_extension import central_extension, random_abelian_fibre_pair, random_inner_pair
from test_spectral import FIXTURES as SPECTRAL_FIXTURES, cell_dims, fixture as spectral_fixture

FIX = Path(__file__).resolve().parent.parent / "fixtures"
RESULTS: dict = {}
DEGREES = (-2, -1, 0, 1, 2)


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def load_pair(name):
    doc, _ = load_document((FIX / name).read_bytes())
    return extension(doc["extension"], "extension")


def test_criterion_1_obstruction_cocycles_close():
    t0 = time.perf_counter()
    rng = random.Random(20261016)
    bad, fibres, max_vertices = 0, set(), 0
    runs = 120
    for _ in range(runs):
        fibre = rng.choice(FIBRES)
        nv = random_nerve(rng, 4)
        lt = random_lifting_triple(rng, nv, random_coupling(rng, fibre=fibre))
        fibres.add(fibre)
        max_vertices = max(max_vertices, nv.vertices)
        if not cocycle_is_zero(verify_cocycle(obstruction_triple(lt))):
            bad += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 60 and fibres == set(FIBRES) and max_vertices <= 4
    record(1, ok, f"{runs} triples, {bad} nonzero residuals, fibres {sorted(fibres)}, {dt:.1f}s")


def test_criterion_2_lambda_is_invariant():
    rng = random.Random(2)
    changed = 0
    runs = 120
    for i in range(runs):
        p = random_abelian_fibre_pair(rng) if i % 2 else random_inner_pair(rng)
        q = change_lifting_pair(p, random_one_form(rng, p.B, p.L))
        if obstruction_cochain(q) != obstruction_cochain(p):
            changed += 1
    record(2, changed == 0, f"{runs} random changes of lifting pair, lambda changed {changed} times")


def test_criterion_3_jacobi_exactly_when_lambda_vanishes():
    out = build_extension(load_pair("heis3-base.json"))
    base_ok = isinstance(out, JacobiFailure) and out.labels == ("e1", "e2", "e3")
    zero_ok = []
    for name in ("split-abelian.json", "heis3-extension.json"):
        p = load_pair(name)
        E = build_extension(p)
        zero_ok.append(obstruction_cochain(p).is_zero() and isinstance(E, ExtensionStructure)
                       and validate_lie_rinehart(E.total) == [])
    doc, _ = load_document((FIX / "classify-pair.json").read_bytes())
    for i, x in enumerate(doc["extensions"]):
        E = build_extension(extension(x, f"extensions[{i}]"))
        zero_ok.append(isinstance(E, ExtensionStructure) and validate_lie_rinehart(E.total) == [])
    ok = base_ok and all(zero_ok)
    record(3, ok, f"heis3-base fails on {getattr(out, 'labels', None)}, {sum(zero_ok)}/{len(zero_ok)} lambda = 0 fixtures valid")


def test_criterion_4_torsor():
    rng = random.Random(4)
    trips = 0
    for _ in range(25):
        E = central_extension(rng.randint(-3, 3))
        g = rng.randint(-4, 4)
        E2 = torsor_action(E, Cochain(2, 2, 1, {(0, 1): (g,)} if g else {}))
        trips += difference_class(E, E2).coordinates == (g,)
    # bijection with H^2 = Q: the class of c relative to c = 0 is c, and equal classes are equivalent
    classes = [difference_class(central_extension(0), central_extension(c)).coordinates for c in range(-3, 4)]
    injective = classes == [(c,) for c in range(-3, 4)]
    equiv = all((extensions_equivalent(central_extension(a), central_extension(b)) is not None) == (a == b)
                for a in range(-2, 3) for b in range(-2, 3))
    ok = trips == 25 and injective and equiv
    record(4, ok, f"{trips}/25 round trips, classes {[str(c[0]) for c in classes]}, equivalence matches classes: {equiv}")


def test_criterion_5_hochschild_serre():
    X, seq = spectral_fixture("heis")
    E2 = seq.pages[2]
    cells_ok = cell_dims(E2, 0) == [1, 2, 1] and cell_dims(E2, 1) == [1, 2, 1]
    d2 = E2.differentials[(0, 1)]
    iso = d2.shape == (1, 1) and not d2.is_zero()
    conv = convergence_check(X.filtered, seq)
    direct = ce_dims({(0, 1): (0, 0, 1)}, 3)
    ok = cells_ok and iso and conv["e_infinity"] == conv["direct"] == direct == [1, 2, 2, 1]
    record(5, ok, f"E2 rows {cell_dims(E2, 0)} {cell_dims(E2, 1)}, d2 iso {iso}, E_inf {conv['e_infinity']}, oracle {direct}")


def e1_oracle(X):
    """E_1^{p,q} = sum_a H^a(nerve) * C(nB, p) * H^{q-a}(L) for constant data over Q."""
    hL = ce_dims(dict(X.L.structure), X.nL)
    nv = X.nerve
    hN = simplicial_betti(nv.vertices, [s for s in nv.simplices if len(s) > 1]) if len(nv.simplices) > 1 else [1]
    return lambda p, q: comb(X.nB, p) * sum(hN[a] * hL[q - a] for a in range(len(hN)) if 0 <= q - a < len(hL))


def test_criterion_6_first_page():
    bad = []
    for name in sorted(SPECTRAL_FIXTURES):
        X, seq = spectral_fixture(name)
        want = e1_oracle(X)
        cells = seq.pages[1].cells
        if not e1_isomorphism_check(X, seq.pages[1])["ok"] or any(c.dim != want(p, q) for (p, q), c in cells.items()):
            bad.append(name)
    for n in DEGREES:
        if not degeneration_check(build_p1_model(n, abs(n) + 3, certify=False))["E1_agree"]:
            bad.append(f"P1 n={n}")
    total = len(SPECTRAL_FIXTURES) + len(DEGREES)
    record(6, not bad, f"{total - len(bad)}/{total} fixtures agree with the direct fibre cohomology {bad or ''}")


def test_criterion_7_d1_well_defined():
    rng = random.Random(7)
    pairs, bad = {}, []
    for name in sorted(SPECTRAL_FIXTURES):
        X, _ = spectral_fixture(name)
        for _ in range(50):
            f1, f2 = random_splitting_family(X, rng), random_splitting_family(X, rng)
            for k in range(X.total.top + 1):
                for p in range(k + 1):
                    xi = d0_cocycle(X, p, k, rng)
                    if xi and any(X.d1_well_defined_residual(f1, f2, p, k, xi)):
                        bad.append(name)
        pairs[name] = 50
    for n in DEGREES:
        for _ in range(50):
            fam, fam2 = random_family(rng), random_family(rng)
            for k in range(4):
                if d1_well_defined_residual(n, fam, fam2, k, random_d0_cocycle(rng, k)):
                    bad.append(f"P1 n={n}")
        pairs[f"P1 n={n}"] = 50
    record(7, not bad, f"{sum(pairs.values())} family pairs over {len(pairs)} fixtures, nonzero residuals {sorted(set(bad)) or 0}")


def test_criterion_8_projective_line():
    t0 = time.perf_counter()
    rows = []
    ok = True
    for n in DEGREES:
        model = build_p1_model(n, abs(n) + 3)
        les = les_connecting(model)
        hyp = hypercohomology_atiyah(model, les)
        deg = degeneration_check(model, les)
        cert = truncation_certificate(model)
        want = [1, 1, 1, 1] if n == 0 else [1, 0, 0, 1]
        times_n = les["chase"][0].to_dense() == [[n]] and les["cup"][0].to_dense() == [[n]]
        good = (hyp["direct"] == want and hyp["agree"] and times_n and les["exact"]
                and deg["d2_zero"] and deg["E2_totals"] == hyp["direct"] and cert["stable"])
        ok = ok and good
        rows.append(f"n={n}:{''.join(map(str, hyp['direct']))}{'' if good else '!'}")
    dt = time.perf_counter() - t0
    ok = ok and dt < 120
    record(8, ok, f"H dims {' '.join(rows)}, connecting = x n both ways, d2 = 0, D = |n|+3 stable, {dt:.1f}s")


def test_criterion_9_substitution():
    # holomorphic results on a general compact Kaehler manifold and Hodge weights are out of
    # reach of exact desk-scale computation; the criterion is the substitution by 6-8
    for n, check in ((6, test_criterion_6_first_page), (7, test_criterion_7_d1_well_defined),
                     (8, test_criterion_8_projective_line)):
        if n not in RESULTS:
            try:
                check()
            except AssertionError:
                pass
    covered = all(RESULTS[n].startswith(f"criterion {n}: PASS") for n in (6, 7, 8))
    record(9, covered, "Kaehler/Hodge-weight statements not computed; substituted by criteria 6-8"
           + (" (all passed)" if covered else " (a substitute failed)"))
