"""
Report documents.

Reports are plain JSON trees: exact rationals become "p/q" strings, floats
are rendered with repr so that output is byte-stable, and keys are sorted on
dump. ``render`` produces either the tree or a tabulate view of it.
"""

import json
import logging
from dataclasses import asdict, is_dataclass
from enum import Enum
from typing import Any, Dict, List

import sympy
from sympy import Rational
from tabulate import tabulate

from app.criteria import Verdict
from app.linalg import RatVec, format_rational
from app.observability import observability

logger = logging.getLogger(__name__)


def to_tree(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Rational):
        return format_rational(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, RatVec):
        return value.to_strings()
    if isinstance(value, sympy.Basic):
        return str(value)
    if is_dataclass(value):
        return to_tree(asdict(value))
    if isinstance(value, dict):
        return {str(to_tree(k)) if not isinstance(k, str) else k: to_tree(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_tree(v) for v in value]
    return str(value)


def verdict_section(verdict: Verdict) -> Dict[str, Any]:
    return {
        "kind": verdict.kind.value,
        "witnesses": [
            {
                "w": wt.w,
                "J": list(wt.J),
                "chi": wt.chi,
                "generator": wt.generator,
                "coefficient": wt.coefficient,
                "reason": wt.reason,
            }
            for wt in verdict.witnesses
        ],
        "warnings": list(verdict.warnings),
        "rows": list(verdict.rows),
    }


def analysis_report(analysis) -> Dict[str, Any]:
    ds, reps = analysis.descendent, analysis.reps
    restricted = [
        {
            "root": alpha,
            "fiber_size": len(ds.fibers[alpha]),
            "MG": ds.MG[alpha],
            "MH": ds.MH[alpha],
            "m_theta": ds.m_theta[alpha],
        }
        for alpha in ds.restricted.positive_roots
    ]
    return to_tree({
        "pair": analysis.label,
        "descendent": {
            "type": ds.restricted.type_label(),
            "h_type": ds.h_system.type_label(),
            "restricted_roots": restricted,
            "simple": list(ds.simple),
            "h_simple": list(ds.h_simple),
            "theta_minus": list(ds.theta_minus),
            "restriction_map": dict(sorted(ds.restriction_map.items())),
            "theta_permutation": dict(sorted(analysis.theta_permutation.items())),
        },
        "half_sums": {"rho_G": ds.rho_G, "rho_G_plus": ds.rho_G_plus, "rho_H": ds.rho_H},
        "weyl": {
            "WGH_order": reps.WGH.order,
            "WH_order": reps.WH.order,
            "transversal_size": len(reps.transversal),
            "transversal": [w.label for w in reps.transversal],
        },
        "characters": [{"w": w.label, "rho": reps.rho_w[w]} for w in reps.transversal],
        "parabolics": [{"J": list(p.J), "I": list(p.I)} for p in analysis.parabolics],
        "verdict": verdict_section(analysis.verdict),
    })


def exponents_report(analysis, profile, verdict: Verdict) -> Dict[str, Any]:
    return to_tree({
        "pair": analysis.label,
        "coordinates": profile.coordinates,
        "profile": [
            {"J": list(J), "exponents": list(vectors)}
            for J, vectors in sorted(profile.entries.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ],
        "discarded": [
            {"J": list(J), "chi": i, "part": part}
            for (J, i), part in sorted(profile.discarded.items())
        ],
        "verdict": verdict_section(verdict),
    })


def oracle_report(analysis, run) -> Dict[str, Any]:
    decomp, report = run.decomposition, run.report
    return to_tree({
        "pair": analysis.label,
        "decomposition": {
            "rank": decomp.rank,
            "central_rank": decomp.central_rank,
            "scales": list(decomp.scales),
            "generators": [list(g) for g in decomp.generators],
            "pairing_table": [list(row) for row in decomp.pairing_table],
            "index": decomp.index,
            "transversal": [list(e) for e in decomp.transversal],
        },
        "q": report.q,
        "depth": report.depth,
        "entries": [
            {
                "w": e.w,
                "J": list(e.J),
                "chi": e.chi,
                "exponents": {str(a): x for a, x in e.exponents},
                "central": e.central,
                "converges": e.converges,
                "partial_sums": {str(a): s for a, s in e.partial_sums},
            }
            for e in report.entries
        ],
        "converges": report.converges,
        "criterion": verdict_section(run.criterion),
        "agreement": True,
        "cone_sums": {
            "box": run.box,
            "values": [{"w": s.w, "chi": s.chi, "weight": s.exponent, "sum": s.value} for s in run.cone_sums],
        },
    })


def families_report(descriptions: List[Dict[str, Any]]) -> Dict[str, Any]:
    return to_tree({"families": descriptions})


def attach_timings(document: Dict[str, Any]) -> Dict[str, Any]:
    """Stage timings are volatile; only attached on request."""
    document = dict(document)
    document["timings"] = to_tree(observability.snapshot()["metrics"])
    return document


# ==================== RENDERING ====================

def render_tree(document: Dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)


def _cell(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, ensure_ascii=False)
    return "" if value is None else str(value)


def _tables(prefix: str, value: Any, out: List[str]) -> List[tuple]:
    """Collect scalar (path, value) pairs; lists of records become their own tables."""
    scalars = []
    if isinstance(value, dict):
        for key in sorted(value):
            path = f"{prefix}.{key}" if prefix else key
            item = value[key]
            if isinstance(item, list) and item and all(isinstance(r, dict) for r in item):
                headers = sorted({k for r in item for k in r})
                rows = [[_cell(r.get(h)) for h in headers] for r in item]
                out.append(f"{path}\n" + tabulate(rows, headers=headers, tablefmt="github"))
            elif isinstance(item, dict):
                scalars += _tables(path, item, out)
            else:
                scalars.append((path, _cell(item)))
    return scalars


def render_table(document: Dict[str, Any]) -> str:
    sections: List[str] = []
    scalars = _tables("", document, sections)
    head = tabulate(scalars, headers=["field", "value"], tablefmt="github") if scalars else ""
    return "\n\n".join(s for s in [head] + sections if s)


def render(document: Dict[str, Any], fmt: str = "tree") -> str:
    if fmt == "table":
        return render_table(document)
    return render_tree(document)
