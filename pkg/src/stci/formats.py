"""Serialization of equation systems: text, LaTeX, JSON, Macaulay2, Singular."""

from __future__ import annotations

import json
from typing import Any

from .equations import EquationSystem
from .polyring import Poly, to_latex, to_text
from .semigroup import DecompositionPair
from .verify import VerificationReport

FORMATS = ("text", "json", "latex", "m2", "singular")


def pair_to_dict(pair: DecompositionPair, admitted_by: str | None = None) -> dict[str, Any]:
    p, s = pair.positive, pair.signed
    flags: dict[str, Any] = {"sufficient": pair.sufficient, "gamma_condition": pair.gamma_condition}
    if admitted_by is not None:
        flags["admitted_by"] = admitted_by
    return {
        "level": pair.level,
        "positive": {"a": str(p.a), "b": str(p.b), "c": str(p.c)},
        "signed": {"alpha": str(s.alpha), "beta": str(s.beta), "gamma": str(s.gamma)},
        "flags": flags,
    }


def poly_to_dict(name: str, P: Poly) -> dict[str, Any]:
    return {
        "name": name,
        "terms": [{"coeff": str(c), "exponents": [str(k) for k in e]} for c, e in P.terms],
    }


def poly_from_dict(d: dict[str, Any]) -> Poly:
    terms = [(int(t["coeff"]), tuple(int(k) for k in t["exponents"])) for t in d["terms"]]
    nvars = len(terms[0][1]) if terms else 0
    return Poly(nvars, terms)


def system_to_dict(system: EquationSystem, report: VerificationReport | None = None) -> dict[str, Any]:
    admitted = {d.level: d.admitted_by for d in system.diagnostics}
    out: dict[str, Any] = {
        "curve": [str(m) for m in system.curve.exponents],
        "decompositions": [pair_to_dict(system.pairs[l], admitted[l]) for l in sorted(system.pairs)],
        "polynomials": [poly_to_dict(name, P) for name, P in zip(system.names, system.polys)],
    }
    if report is not None:
        out["verification"] = report.to_dict()
    return out


def _variables(system: EquationSystem) -> list[str]:
    return [f"x{j}" for j in range(system.curve.n + 1)]


def _parametrization(system: EquationSystem) -> list[str]:
    mn = system.curve.exponents[-1]
    out = []
    for m in system.curve.weights:
        parts = [f"u^{mn - m}" if mn - m > 1 else ("u" if mn - m == 1 else ""),
                 f"v^{m}" if m > 1 else ("v" if m == 1 else "")]
        out.append("*".join(p for p in parts if p) or "1")
    return out


def render_system(system: EquationSystem, fmt: str, report: VerificationReport | None = None) -> str:
    names = system.names
    if fmt == "text":
        return "".join(to_text(P) + "\n" for P in system.polys)
    if fmt == "latex":
        return "".join(f"F_{{{j}}} = {to_latex(P)}\n" for j, P in enumerate(system.polys, start=1))
    if fmt == "json":
        return json.dumps(system_to_dict(system, report), indent=2) + "\n"
    variables = ",".join(_variables(system))
    images = ", ".join(_parametrization(system))
    if fmt == "m2":
        lines = [f"-- equations for the monomial curve {system.curve}", f"R = QQ[{variables}];"]
        lines += [f"{name} = {to_text(P)};" for name, P in zip(names, system.polys)]
        lines.append(f"I = ideal({', '.join(names)});")
        lines += [
            "-- cross-check (not run automatically):",
            "-- S = QQ[u,v];",
            f"-- J = ker map(S, R, {{{images}}});",
            "-- radical I == J",
        ]
        return "\n".join(lines) + "\n"
    if fmt == "singular":
        lines = [f"// equations for the monomial curve {system.curve}", f"ring R = 0,({variables}),dp;"]
        lines += [f"poly {name} = {to_text(P)};" for name, P in zip(names, system.polys)]
        lines.append(f"ideal I = {', '.join(names)};")
        lines += [
            "// cross-check (not run automatically): compare radical(I) from primdec.lib",
            f"// with the kernel of x0..x{system.curve.n} -> {images}",
        ]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
