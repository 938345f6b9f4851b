"""Deterministic JSON reports with exact rationals as strings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..atiyah import Laurent
from ..core.forms import Cochain
from ..linalg import MatrixQ


def encode(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, MatrixQ):
        return {"shape": [x.rows, x.cols], "rows": [[str(v) for v in r] for r in x.to_dense()]}
    if isinstance(x, Cochain):
        return {"degree": x.degree, "entries": [[list(k), [str(v) for v in val]] for k, val in sorted(x.values.items())]}
    if isinstance(x, Laurent):
        return [[e, str(c)] for e, c in sorted(x.terms.items())]
    if isinstance(x, dict):
        return {_key(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return ",".join(str(v) for v in k)
    return str(k)


@dataclass
class RunReport:
    command: str
    input_digest: str
    ok: bool
    results: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {"command": self.command, "input_digest": self.input_digest,
               "status": "ok" if self.ok else "failure", "results": encode(self.results)}
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def parse(text: str) -> dict:
        return json.loads(text)


def decode_rational(s: str) -> Fraction:
    return Fraction(s)
