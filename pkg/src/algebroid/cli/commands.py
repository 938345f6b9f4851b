"""One function per subcommand; each returns a RunReport."""

from __future__ import annotations

import hashlib
import json
from typing import Optional

from .. import atiyah, sampling
from ..cech import (
    build_lifting_triple,
    cech_cohomology,
    cocycle_is_zero,
    constant_form_complex,
    glue_extension,
    global_obstruction_class,
    les_crosscheck,
    trivialization,
    verify_cocycle,
    SheafData,
)
from ..core import cohomology, trivial_coefficients, validate_lie_rinehart
from ..extension import (
    ExtensionStructure,
    JacobiFailure,
    build_extension,
    change_lifting_pair,
    difference_class,
    extensions_equivalent,
    obstruction_class,
    torsor_action,
)
from ..spectral import (
    ExtensionComplex,
    convergence_check,
    e1_isomorphism_check,
    random_d0_cocycle,
    random_splitting_family,
    run_spectral_sequence,
)
from . import schema
from .report import RunReport
from .schema import ParseError


def _failures(A) -> list[str]:
    return [f.describe(A.labels, A.base.labels) for f in validate_lie_rinehart(A)]


def cmd_validate(doc: dict, digest: str, seed: Optional[int] = None) -> RunReport:
    res, ok = {}, True
    if not any(k in doc for k in ("algebroid", "coupling", "extension")):
        raise ParseError("expected 'algebroid', 'coupling' or 'extension'", "$")
    if "algebroid" in doc:
        A = schema.algebroid(doc["algebroid"], "$.algebroid")
        fails = _failures(A)
        res["algebroid"] = {"name": A.name, "rank": A.rank, "base_dim": A.base.dim, "valid": not fails, "failures": fails}
        ok &= not fails
    if "coupling" in doc:
        c = schema.coupling(doc["coupling"], "$.coupling")
        probs = _failures(c.B) + _failures(c.L) + c.validate()
        res["coupling"] = {"valid": not probs, "problems": probs}
        ok &= not probs
    if "extension" in doc:
        p = schema.extension(doc["extension"], "$.extension")
        probs = p.coupling.validate() + p.validate()
        out = {"pair_problems": probs}
        if not probs:
            E = build_extension(p)
            if isinstance(E, JacobiFailure):
                out.update(valid=False, jacobi_triple=list(E.labels), lambda_=E.obstruction)
            else:
                out.update(valid=True, total_rank=E.total.rank, failures=_failures(E.total))
        else:
            out["valid"] = False
        res["extension"] = {k.rstrip("_"): v for k, v in out.items()}
        ok &= out["valid"]
    return RunReport("validate", digest, ok, res)


def cmd_cohomology(doc: dict, digest: str, seed: Optional[int] = None) -> RunReport:
    res = {}
    if "algebroid" in doc:
        A = schema.algebroid(doc["algebroid"], "$.algebroid")
        M, conn = trivial_coefficients(A)
        res["algebroid"] = {"name": A.name, "H": [cohomology(A, conn, M, p).dim for p in range(A.rank + 1)]}
    nerve = schema.nerve(doc["nerve"], "$.nerve") if "nerve" in doc else None
    if nerve is not None:
        res["nerve"] = {"simplices": [list(s) for s in nerve.simplices],
                        "constant_H": [h.dim for h in cech_cohomology(nerve, SheafData.constant(nerve, 1))]}
        if "sheaf" in doc["nerve"]:
            sh = schema.sheaf(doc["nerve"]["sheaf"], "$.nerve.sheaf", nerve)
            res["nerve"]["sheaf_H"] = [h.dim for h in cech_cohomology(nerve, sh)]
    c = None
    if "coupling" in doc:
        c = schema.coupling(doc["coupling"], "$.coupling")
    elif "extension" in doc:
        c = schema.extension(doc["extension"], "$.extension").coupling
    if c is not None:
        Z = c.center
        out = {"center_dim": Z.module.dim, "H": [Z.cohomology(p).dim for p in range(c.B.rank + 1)]}
        if nerve is not None:
            K = constant_form_complex(nerve, Z)
            out["hyper"] = K.total(0).complex.betti()
            out["hyper_truncated"] = K.total(1).complex.betti()
            cross = les_crosscheck(K, 1)
            out["les_agree"] = cross["agree"] and cross["exact"]
        res["center"] = out
    if not res:
        raise ParseError("expected 'algebroid', 'nerve', 'coupling' or 'extension'", "$")
    return RunReport("cohomology", digest, True, res)


def _p1_obstruction(n: int, D: int) -> dict:
    model = atiyah.build_p1_model(n, D)
    lift = atiyah.lifting_report(model)
    glue = atiyah.glue_check(model)
    return {"degree": n, "truncation": D, "lifting": lift, "class": [], "class_is_zero": True,
            "gluing": {"ok": glue["ok"], "g01": model.g}}


def cmd_obstruction(doc: dict, digest: str, seed: Optional[int] = None) -> RunReport:
    if "p1" in doc:
        n, D = schema.p1_params(doc["p1"], "$.p1")
        out = _p1_obstruction(n, D)
        return RunReport("obstruction", digest, out["gluing"]["ok"], out)
    p = schema.extension(doc.get("extension") or {"coupling": doc.get("coupling")}, "$.extension" if "extension" in doc else "$")
    c = p.coupling
    probs = c.validate()
    if probs:
        return RunReport("obstruction", digest, False, {"coupling_problems": probs})
    rng = sampling.rng_for(seed)
    if "nerve" in doc:
        nerve = schema.nerve(doc["nerve"], "$.nerve")
        perturb = sampling.random_etas(rng, c, nerve.vertices) if seed is not None else None
        G = global_obstruction_class(nerve, c, perturb)
        ot = G.triple
        res = verify_cocycle(ot)
        out = {"lambda": {str(i): v for i, v in ot.lam.items()},
               "t": ot.t, "q": ot.q,
               "residuals_zero": cocycle_is_zero(res),
               "class": G.coordinates, "class_is_zero": G.is_zero}
        if G.is_zero:
            lt = build_lifting_triple(nerve, c)
            a, m = trivialization(lt)
            glued = glue_extension(lt, a, m)
            out["gluing"] = {"morphism_failures": len(glued.morphism_failures()),
                             "cocycle_failures": len(glued.cocycle_failures())}
        return RunReport("obstruction", digest, G.is_zero, out)
    oc = obstruction_class(c, p)
    out = {"lambda": oc.cochain, "class": oc.coordinates, "class_is_zero": oc.is_zero,
           "primitive": oc.primitive}
    if seed is not None:
        trials = []
        for _ in range(5):
            q = change_lifting_pair(p, sampling.random_one_form(rng, c.B, c.L))
            trials.append(obstruction_class(c, q).coordinates == oc.coordinates)
        out["perturbation_invariant"] = all(trials)
    return RunReport("obstruction", digest, oc.is_zero, out)


def _build(p, where: str) -> ExtensionStructure:
    E = build_extension(p)
    if isinstance(E, JacobiFailure):
        raise _MathFailure({"jacobi_failure": where, "triple": list(E.labels)})
    return E


class _MathFailure(Exception):
    def __init__(self, payload: dict):
        self.payload = payload


def cmd_classify(doc: dict, digest: str, seed: Optional[int] = None) -> RunReport:
    exts = doc.get("extensions")
    if not isinstance(exts, list) or not exts:
        raise ParseError("expected a nonempty list 'extensions'", "$")
    pairs = [schema.extension(x, f"$.extensions[{i}]") for i, x in enumerate(exts)]
    try:
        built = [_build(p, f"extensions[{i}]") for i, p in enumerate(pairs)]
    except _MathFailure as e:
        return RunReport("classify", digest, False, e.payload)
    E0 = built[0]
    H2 = E0.coupling.center.cohomology(2)
    rows = []
    for i, E in enumerate(built):
        dc = difference_class(E0, E)
        rows.append({"index": i, "difference_class": dc.coordinates,
                     "equivalent_to_first": extensions_equivalent(E0, E) is not None})
    classes = sorted({tuple(r["difference_class"]) for r in rows})
    out = {"H2_dim": H2.dim, "extensions": rows, "distinct_classes": len(classes)}
    if seed is not None:
        rng = sampling.rng_for(seed)
        trips = []
        for _ in range(5):
            gamma = sampling.random_center_cocycle(rng, E0.coupling)
            E2 = torsor_action(E0, gamma)
            Z = E0.coupling.center
            want = H2.coordinates(Z.to_center(gamma).to_vector()) if H2.ambient_dim else ()
            trips.append(tuple(difference_class(E0, E2).coordinates) == tuple(want))
        out["torsor_round_trip"] = all(trips)
    return RunReport("classify", digest, True, out)


def _page_tables(seq, upto: int, top: int) -> list:
    out = []
    for r in range(min(upto, len(seq.pages) - 1) + 1):
        pg = seq.pages[r]
        diffs = {pq: m for pq, m in sorted(pg.differentials.items()) if not m.is_zero()}
        out.append({"r": r, "grid": pg.grid(top), "nonzero_differentials": diffs})
    return out


def cmd_spectral(doc: dict, digest: str, seed: Optional[int] = None, pages: int = 3) -> RunReport:
    if "p1" in doc:
        n, D = schema.p1_params(doc["p1"], "$.p1")
        model = atiyah.build_p1_model(n, D)
        deg = atiyah.degeneration_check(model)
        seq = deg["pages"]
        ok = all(deg[k] for k in ("E1_agree", "E2_agree", "d1_agree", "d2_zero", "totals_agree"))
        out = {"pages": _page_tables(seq, pages, model.top),
               "convergence": {"direct": deg["direct"], "e_infinity": seq.infinity.totals(model.top),
                               "degenerate_from": deg["degenerate_from"]},
               "checks": {k: deg[k] for k in ("E1_agree", "E2_agree", "d1_agree", "d2_zero", "totals_agree")}}
        return RunReport("spectral", digest, ok, out)
    if "extension" not in doc:
        raise ParseError("expected 'extension' or 'p1'", "$")
    p = schema.extension(doc["extension"], "$.extension")
    try:
        E = _build(p, "extension")
    except _MathFailure as e:
        return RunReport("spectral", digest, False, e.payload)
    if E.total.base.dim != 1:
        raise ParseError("the spectral command needs R = Q", "$.extension")
    nerve = schema.nerve(doc["nerve"], "$.nerve") if "nerve" in doc else None
    X = ExtensionComplex(E, nerve)
    seq = run_spectral_sequence(X.filtered)
    conv = convergence_check(X.filtered, seq)
    e1 = e1_isomorphism_check(X, seq.pages[1])
    out = {"pages": _page_tables(seq, pages, X.total.top),
           "convergence": {k: conv[k] for k in ("direct", "e_infinity", "agree", "degenerate_from")},
           "e1_identification": e1["ok"]}
    ok = conv["agree"] and e1["ok"]
    if seed is not None:
        rng = sampling.rng_for(seed)
        zero = True
        for _ in range(5):
            f1, f2 = random_splitting_family(X, rng), random_splitting_family(X, rng)
            for k in range(X.total.top + 1):
                for pp in range(k + 1):
                    xi = random_d0_cocycle(X, pp, k, rng)
                    if xi and any(X.d1_well_defined_residual(f1, f2, pp, k, xi)):
                        zero = False
        out["d1_well_defined"] = zero
        ok &= zero
    return RunReport("spectral", digest, ok, out)


def cmd_atiyah_p1(n: int, D: int, seed: Optional[int] = None) -> RunReport:
    digest = hashlib.sha256(json.dumps({"degree": n, "truncation": D}, sort_keys=True).encode()).hexdigest()
    model = atiyah.build_p1_model(n, D)
    les = atiyah.les_connecting(model)
    hyp = atiyah.hypercohomology_atiyah(model, les)
    deg = atiyah.degeneration_check(model, les)
    data = atiyah.atiyah_data(n)
    cert = model.certificate
    checks = {
        "connecting_agree": les["agree"],
        "les_exact": les["exact"],
        "hyper_formula_agree": hyp["agree"],
        "E1_agree": deg["E1_agree"],
        "E2_agree": deg["E2_agree"],
        "d1_agree": deg["d1_agree"],
        "d2_zero": deg["d2_zero"],
        "E2_totals_agree": deg["totals_agree"],
        "truncation_stable": cert["stable"],
        "restrictions_injective": cert["injective_restrictions"],
        "gluing_ok": atiyah.glue_check(model)["ok"],
    }
    if seed is not None:
        rng = sampling.rng_for(seed)
        zero = True
        for _ in range(10):
            f1, f2 = atiyah.random_family(rng), atiyah.random_family(rng)
            for k in range(3):
                xi = atiyah.random_d0_cocycle(rng, k)
                zero &= not atiyah.d1_well_defined_residual(n, f1, f2, k, xi)
                zero &= not atiyah.d1_decomposition_residual(n, f1, k, xi)
        checks["d1_independent_of_splitting"] = zero
    out = {
        "degree": n, "truncation": D,
        "sheaf_cohomology": atiyah.sheaf_dims(model),
        "phi01": data.phi01,
        "chern_class": atiyah.chern_class(model),
        "connecting": {"chase": les["chase"], "cup": les["cup"]},
        "hypercohomology": {"direct": hyp["direct"], "formula": hyp["formula"]},
        "pages": _page_tables(deg["pages"], 2, model.top),
        "checks": checks,
    }
    return RunReport("atiyah-p1", digest, all(checks.values()), out)
