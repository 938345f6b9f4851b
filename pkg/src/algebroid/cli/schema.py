"""Loading the JSON description files.

Every number may be an integer or a string "p/q".  Locations in errors are
either "line L column C" (syntax) or a path such as "$.coupling.outer[1]".
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from ..cech import MissingRestriction, Nerve, SheafData
from ..core import BaseAlgebra, Derivation, LieRinehart
from ..core.catalog import CATALOG
from ..core.forms import Cochain
from ..extension import Coupling, LiftingPair, lift_coupling, pair_from_data
from ..linalg import MatrixQ


class ParseError(ValueError):
    def __init__(self, message: str, location: str):
        super().__init__(f"{location}: {message}")
        self.message = message
        self.location = location


def load_document(raw: bytes) -> tuple[dict, str]:
    """Parse bytes into a JSON object; returns (document, sha256 digest)."""
    digest = hashlib.sha256(raw).hexdigest()
    text = raw.decode("utf-8", errors="strict") if raw else ""
    if not text.strip():
        raise ParseError("empty file", "line 1 column 1")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"line {e.lineno} column {e.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "$")
    return doc, digest


def _need(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path)
    if key not in obj:
        raise ParseError(f"missing key '{key}'", path)
    return obj[key]


def number(x: Any, path: str) -> Fraction:
    if isinstance(x, bool):
        raise ParseError("expected a number", path)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational: {x!r}", path) from None
    raise ParseError("expected an integer or a 'p/q' string", path)


def integer(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError("expected an integer", path)
    return x


def vector(x: Any, path: str, length: int | None = None) -> tuple:
    if not isinstance(x, list):
        raise ParseError("expected a list", path)
    if length is not None and len(x) != length:
        raise ParseError(f"expected {length} entries, got {len(x)}", path)
    return tuple(number(v, f"{path}[{i}]") for i, v in enumerate(x))


def matrix(x: Any, path: str, rows: int, cols: int) -> MatrixQ:
    if not isinstance(x, list) or len(x) != rows:
        raise ParseError(f"expected {rows} rows", path)
    return MatrixQ.from_rows([vector(r, f"{path}[{i}]", cols) for i, r in enumerate(x)], cols)


def base_algebra(x: Any, path: str) -> BaseAlgebra:
    if not isinstance(x, dict):
        raise ParseError("expected an object", path)
    if x.get("rationals"):
        return BaseAlgebra.rationals()
    if "truncated_polynomials" in x:
        k = integer(x["truncated_polynomials"], f"{path}.truncated_polynomials")
        if k < 1:
            raise ParseError("order must be positive", f"{path}.truncated_polynomials")
        return BaseAlgebra.truncated_polynomials(k)
    unit = vector(_need(x, "unit", path), f"{path}.unit")
    n = len(unit)
    table = _need(x, "table", path)
    if not isinstance(table, list) or len(table) != n:
        raise ParseError(f"expected {n} rows", f"{path}.table")
    mult = [[vector(table[i][j], f"{path}.table[{i}][{j}]", n) for j in range(n)] for i in range(n)]
    R = BaseAlgebra.from_table(mult, unit, x.get("labels"))
    problems = R.validate()
    if problems:
        raise ParseError(problems[0], path)
    return R


def algebroid(x: Any, path: str) -> LieRinehart:
    if not isinstance(x, dict):
        raise ParseError("expected an object", path)
    if "catalog" in x:
        name = x["catalog"]
        if name not in CATALOG:
            raise ParseError(f"unknown catalog entry {name!r}; known: {sorted(CATALOG)}", f"{path}.catalog")
        return CATALOG[name]()
    if "lie_algebra" in x:
        la = x["lie_algebra"]
        p = f"{path}.lie_algebra"
        dim = integer(_need(la, "dim", p), f"{p}.dim")
        br = {}
        for i, entry in enumerate(la.get("brackets", [])):
            q = f"{p}.brackets[{i}]"
            if not isinstance(entry, list) or len(entry) != 3:
                raise ParseError("expected [i, j, value]", q)
            u, v = integer(entry[0], f"{q}[0]"), integer(entry[1], f"{q}[1]")
            if not (0 <= u < dim and 0 <= v < dim) or u == v:
                raise ParseError("bad basis indices", q)
            val = vector(entry[2], f"{q}[2]", dim)
            br[(u, v) if u < v else (v, u)] = val if u < v else tuple(-c for c in val)
        labels = la.get("labels") or [f"e{i + 1}" for i in range(dim)]
        return LieRinehart.lie_algebra(br, dim, labels, la.get("name", ""))
    if "lie_rinehart" in x:
        lr = x["lie_rinehart"]
        p = f"{path}.lie_rinehart"
        R = base_algebra(_need(lr, "base", p), f"{p}.base")
        rank = integer(_need(lr, "rank", p), f"{p}.rank")
        br = {}
        for i, entry in enumerate(lr.get("brackets", [])):
            q = f"{p}.brackets[{i}]"
            if not isinstance(entry, list) or len(entry) != 3 or not isinstance(entry[2], list) or len(entry[2]) != rank:
                raise ParseError("expected [i, j, [coefficient per generator]]", q)
            u, v = integer(entry[0], f"{q}[0]"), integer(entry[1], f"{q}[1]")
            br[(u, v)] = [vector(c, f"{q}[2][{k}]", R.dim) for k, c in enumerate(entry[2])]
        anchors = None
        if "anchors" in lr:
            anchors = [Derivation(matrix(m, f"{p}.anchors[{i}]", R.dim, R.dim)) for i, m in enumerate(lr["anchors"])]
            if len(anchors) != rank:
                raise ParseError(f"expected {rank} anchors", f"{p}.anchors")
        labels = lr.get("labels") or [f"e{i + 1}" for i in range(rank)]
        try:
            return LieRinehart.from_basis_data(R, rank, br, anchors, labels, lr.get("name", ""))
        except ValueError as e:
            raise ParseError(str(e), p) from None
    raise ParseError("expected one of 'catalog', 'lie_algebra', 'lie_rinehart'", path)


def coupling(x: Any, path: str) -> Coupling:
    B = algebroid(_need(x, "B", path), f"{path}.B")
    L = algebroid(_need(x, "L", path), f"{path}.L")
    if "outer" in x:
        outer = x["outer"]
        if not isinstance(outer, list) or len(outer) != B.rank:
            raise ParseError(f"expected {B.rank} matrices", f"{path}.outer")
        mats = tuple(matrix(m, f"{path}.outer[{i}]", L.dim, L.dim) for i, m in enumerate(outer))
    else:
        mats = tuple(MatrixQ(L.dim, L.dim) for _ in range(B.rank))
    return Coupling(B, L, mats)


def cochain(x: Any, path: str, degree: int, rank: int, width: int) -> Cochain:
    if not isinstance(x, list):
        raise ParseError("expected a list of [indices, values]", path)
    vals = {}
    for i, entry in enumerate(x):
        q = f"{path}[{i}]"
        if not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], list):
            raise ParseError("expected [indices, values]", q)
        idx = tuple(integer(t, f"{q}[0]") for t in entry[0])
        if len(idx) != degree or any(not 0 <= t < rank for t in idx):
            raise ParseError(f"expected {degree} indices below {rank}", f"{q}[0]")
        vals[idx] = vector(entry[1], f"{q}[1]", width)
    return Cochain(degree, rank, width, vals)


def extension(x: Any, path: str) -> LiftingPair:
    c = coupling(_need(x, "coupling", path), f"{path}.coupling")
    if "alpha" not in x and "rho" not in x:
        return lift_coupling(c)
    B, L = c.B, c.L
    alpha = x.get("alpha")
    if alpha is None:
        mats = list(c.outer)
    else:
        if not isinstance(alpha, list) or len(alpha) != B.rank:
            raise ParseError(f"expected {B.rank} matrices", f"{path}.alpha")
        mats = [matrix(m, f"{path}.alpha[{i}]", L.dim, L.dim) for i, m in enumerate(alpha)]
    rho = cochain(x.get("rho", []), f"{path}.rho", 2, B.rank, L.dim)
    return pair_from_data(c, mats, rho)


def nerve(x: Any, path: str) -> Nerve:
    n = integer(_need(x, "vertices", path), f"{path}.vertices")
    maximal = x.get("maximal", [])
    if not isinstance(maximal, list):
        raise ParseError("expected a list of simplices", f"{path}.maximal")
    simp = []
    for i, s in enumerate(maximal):
        if not isinstance(s, list):
            raise ParseError("expected a list of vertices", f"{path}.maximal[{i}]")
        t = [integer(v, f"{path}.maximal[{i}]") for v in s]
        if any(not 0 <= v < n for v in t):
            raise ParseError("vertex out of range", f"{path}.maximal[{i}]")
        simp.append(t)
    return Nerve.from_maximal(n, simp)


def p1_params(x: Any, path: str) -> tuple[int, int]:
    n = integer(_need(x, "degree", path), f"{path}.degree")
    D = integer(x.get("truncation", abs(n) + 3), f"{path}.truncation")
    return n, D


def _simplex(x: Any, path: str) -> tuple:
    if isinstance(x, int) and not isinstance(x, bool):
        return (x,)
    if not isinstance(x, list) or not x:
        raise ParseError("expected a vertex list", path)
    return tuple(sorted(integer(v, path) for v in x))


def sheaf(x: Any, path: str, nv: Nerve) -> SheafData:
    """{"dims": [[simplex, n], ...], "restrictions": [[face, simplex, matrix], ...]}."""
    dims = {}
    for i, entry in enumerate(_need(x, "dims", path)):
        q = f"{path}.dims[{i}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise ParseError("expected [simplex, dimension]", q)
        s = _simplex(entry[0], q)
        if s not in nv.simplices:
            raise ParseError(f"{list(s)} is not a simplex of the nerve", q)
        dims[s] = integer(entry[1], q)
    missing = [list(s) for s in nv.simplices if s not in dims]
    if missing:
        raise ParseError(f"no dimension given for {missing}", f"{path}.dims")
    res = {}
    for i, entry in enumerate(x.get("restrictions", [])):
        q = f"{path}.restrictions[{i}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise ParseError("expected [face, simplex, matrix]", q)
        f, s = _simplex(entry[0], q), _simplex(entry[1], q)
        if f not in dims or s not in dims or not set(f) < set(s):
            raise ParseError("face must be a proper face of the simplex", q)
        res[(f, s)] = matrix(entry[2], f"{q}[2]", dims[s], dims[f])
    sh = SheafData(nv, dims, res)
    try:
        bad = sh.functoriality_failures()
    except MissingRestriction as e:
        raise ParseError(f"missing restriction {e}", f"{path}.restrictions") from None
    if bad:
        raise ParseError(f"restrictions do not compose on {bad[0]}", f"{path}.restrictions")
    return sh
