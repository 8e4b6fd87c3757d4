"""
Orchestration of the engine stages behind the CLI subcommands.

analyze_pair:   build_descendent -> coset_transversal -> relative_test_characters
                -> theta_parabolics -> classify_pair
check_exponents: analysis + exponent profile -> h_integrability
run_oracle:     analysis + exponent profile -> convergence_oracle, checked
                against the strict criterion
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

from app.conelattice import (
    ConeDecomposition,
    ConvergenceReport,
    convergence_oracle,
    dual_generators,
    naive_cone_sum,
    weighted_cone_sum,
)
from app.config import get_config
from app.criteria import (
    ExponentProfile,
    ThetaParabolic,
    Verdict,
    classify_pair,
    h_integrability,
    theta_parabolics,
)
from app.errors import COUNT_MISMATCH, ORACLE_DISAGREEMENT, ConsistencyError
from app.linalg import RatVec
from app.schemas import ExponentProfileDocument, PairDescriptor
from app.sympair import (
    CosetReps,
    DescendentSystem,
    build_descendent,
    check_cone_inclusions,
    coset_transversal,
    relative_test_characters,
    theta_minus_permutation,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PairAnalysis:
    label: str
    descendent: DescendentSystem
    reps: CosetReps
    parabolics: Tuple[ThetaParabolic, ...]
    theta_permutation: Dict[int, int]
    verdict: Verdict

    @property
    def characters(self) -> Dict:
        return self.reps.rho_w


def analyze_pair(
    descriptor: PairDescriptor,
    size_cap: Optional[int] = None,
    parabolic_cap: Optional[int] = None,
) -> PairAnalysis:
    datum, inv = descriptor.build()
    ds = build_descendent(datum, inv)
    reps = coset_transversal(ds, size_cap)
    reps = replace(reps, rho_w=relative_test_characters(ds, reps))
    parabolics = tuple(theta_parabolics(ds, parabolic_cap))
    permutation = theta_minus_permutation(datum, inv)
    check_cone_inclusions(ds, reps)
    verdict = classify_pair(ds, reps)
    logger.info(f"✅ Analysis of {descriptor.label}: {verdict.kind.value}")
    return PairAnalysis(descriptor.label, ds, reps, parabolics, permutation, verdict)


def load_profile(analysis: PairAnalysis, document: ExponentProfileDocument) -> ExponentProfile:
    return ExponentProfile.ingest(analysis.descendent, document.vectors(), document.coordinates)


def check_exponents(analysis: PairAnalysis, document: ExponentProfileDocument, strict: bool = True) -> Tuple[ExponentProfile, Verdict]:
    profile = load_profile(analysis, document)
    return profile, h_integrability(analysis.descendent, analysis.reps, profile, strict)


@dataclass(frozen=True)
class ConeSum:
    w: str
    chi: Optional[int]
    exponent: RatVec
    value: object


@dataclass(frozen=True, eq=False)
class OracleRun:
    profile: ExponentProfile
    decomposition: ConeDecomposition
    report: ConvergenceReport
    criterion: Verdict
    box: int
    cone_sums: Tuple[ConeSum, ...]


def run_oracle(
    analysis: PairAnalysis,
    document: ExponentProfileDocument,
    q: Optional[int] = None,
    depth: Optional[int] = None,
    box: Optional[int] = None,
) -> OracleRun:
    config = get_config()
    q = config.default_q if q is None else q
    depth = config.default_depth if depth is None else depth
    box = config.default_box if box is None else box

    ds, reps = analysis.descendent, analysis.reps
    profile = load_profile(analysis, document)
    decomp = dual_generators(ds)
    report = convergence_oracle(ds, reps, profile, q=q, depth=depth, decomp=decomp)
    criterion = h_integrability(ds, reps, profile, strict=True)

    expected = {(row["w"], tuple(row["J"]), row["chi"]): row["holds"] for row in criterion.rows}
    observed = report.verdicts()
    mismatched = sorted(k for k in set(expected) | set(observed) if expected.get(k) != observed.get(k))
    if mismatched:
        raise ConsistencyError(
            ORACLE_DISAGREEMENT,
            f"oracle and criterion disagree on {len(mismatched)} direction(s)",
            {"directions": [{"w": w, "J": list(J), "chi": chi} for w, J, chi in mismatched]},
        )

    sums = _cone_sums(ds, reps, profile, decomp, q, box)
    logger.info(f"🔮 Oracle agrees with the criterion on {len(expected)} direction(s)")
    return OracleRun(profile, decomp, report, criterion, box, sums)


def _cone_sums(
    ds: DescendentSystem,
    reps: CosetReps,
    profile: ExponentProfile,
    decomp: ConeDecomposition,
    q: int,
    box: int,
) -> Tuple[ConeSum, ...]:
    """Truncated sums over the whole dominant cone for the J = () exponents (or chi = 0)."""
    exponents: List[Tuple[Optional[int], RatVec]] = list(enumerate(profile.entries.get((), ())))
    if not exponents:
        exponents = [(None, RatVec.zero(ds.dim))]
    sums = []
    for w in reps.transversal:
        for i, chi in exponents:
            lam = reps.rho_w[w] + chi
            value = weighted_cone_sum(decomp, lam, q, box)
            if value != naive_cone_sum(decomp, lam, q, box):
                raise ConsistencyError(
                    COUNT_MISMATCH,
                    f"coset decomposition and direct enumeration give different cone sums for {w.label}",
                    {"w": w.label, "chi": i, "box": box},
                )
            sums.append(ConeSum(w.label, i, lam, value))
    return tuple(sums)
