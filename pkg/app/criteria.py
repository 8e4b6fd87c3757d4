"""
Positivity verdicts.

Every verdict reduces to one computation: expand a vector on a basis of
simple roots, split off its central part, and inspect the coefficients on the
simple roots outside a face J.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Rational

from app.config import get_config
from app.errors import (
    DIMENSION_MISMATCH,
    SIZE_CAP_EXCEEDED,
    UNKNOWN_PARABOLIC,
    InputError,
)
from app.linalg import RatVec, eigenprojection, orthogonal_split, projection_coefficients
from app.observability import track_stage
from app.rootsys import WeylElement
from app.sympair import CosetReps, DescendentSystem, RootDatumG, relative_test_characters

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]


class VerdictKind(str, Enum):
    INTEGRABLE = "Integrable"
    NOT_INTEGRABLE = "NotIntegrable"
    SQUARE_INTEGRABLE = "SquareIntegrable"
    TEMPERED = "Tempered"
    NEITHER = "NeitherTemperedNorSI"
    STRONGLY_TEMPERED = "StronglyTempered"
    STRONGLY_DISCRETE = "StronglyDiscrete"
    INCONCLUSIVE = "Inconclusive"


NEGATIVE_KINDS = {VerdictKind.NOT_INTEGRABLE, VerdictKind.NEITHER, VerdictKind.INCONCLUSIVE}


@dataclass(frozen=True)
class Witness:
    w: str
    J: Face
    chi: Optional[int]
    generator: Optional[int]
    coefficient: Optional[Rational]
    reason: str

    def sort_key(self):
        return (self.J, self.chi if self.chi is not None else -1, self.w, self.generator if self.generator is not None else -1)


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    witnesses: Tuple[Witness, ...] = ()
    warnings: Tuple[str, ...] = ()
    rows: Tuple[dict, ...] = ()

    def __post_init__(self):
        if self.kind in NEGATIVE_KINDS and not self.witnesses:
            raise ValueError(f"{self.kind.value} verdict needs at least one witness")


@dataclass(frozen=True)
class PositivityResult:
    holds: bool
    coefficients: Tuple[Tuple[int, Rational], ...]
    central: RatVec
    reason: Optional[str] = None

    def failing(self, strict: bool) -> List[Tuple[int, Rational]]:
        if strict:
            return [(i, c) for i, c in self.coefficients if c <= 0]
        return [(i, c) for i, c in self.coefficients if c < 0]


def face_coefficients(lam: RatVec, simple: Sequence[RatVec], face: Face, strict: bool) -> PositivityResult:
    """Coefficients of lam on the simple roots outside ``face``, after splitting off the central part.

    A non-zero central part is reported as "OutsideSpan" with holds=False.
    """
    coeffs, central = projection_coefficients(lam, simple)
    free = tuple((i, coeffs[i]) for i in range(len(simple)) if i not in face)
    if not central.is_zero():
        return PositivityResult(False, free, central, "OutsideSpan")
    if strict:
        holds = all(c > 0 for _, c in free)
    else:
        holds = all(c >= 0 for _, c in free)
    return PositivityResult(holds, free, central, None if holds else "NonPositiveCoefficient")


# ==================== THETA-STABLE PARABOLICS ====================

@dataclass(frozen=True)
class ThetaParabolic:
    """Standard theta-stable parabolic indexed by J, a subset of Delta^{G/H}."""

    J: Face
    I: Face
    basis: Tuple[RatVec, ...] = field(repr=False)
    DeltaGH_M: Tuple[RatVec, ...] = field(repr=False)

    @property
    def free(self) -> Face:
        return tuple(i for i in range(len(self.basis)) if i not in self.J)


def _restrict_to_face(simple: Sequence[RatVec], J: Face) -> Tuple[RatVec, ...]:
    wall = [simple[i] for i in J]
    return tuple(orthogonal_split(simple[i], wall)[1] for i in range(len(simple)) if i not in J)


@track_stage("theta_parabolics")
def theta_parabolics(ds: DescendentSystem, cap: Optional[int] = None) -> List[ThetaParabolic]:
    cap = cap if cap is not None else get_config().parabolic_cap
    t = len(ds.simple)
    if t > cap:
        raise InputError(
            SIZE_CAP_EXCEEDED,
            f"{t} restricted simple roots give 2^{t} parabolics, above the cap of {cap}",
            {"rank": t, "cap": cap},
        )
    parabolics = []
    for size in range(t + 1):
        for J in itertools.combinations(range(t), size):
            I = tuple(sorted(
                set(ds.theta_minus) | {i for i, j in ds.restriction_map.items() if j in J}
            ))
            parabolics.append(ThetaParabolic(J, I, ds.simple, _restrict_to_face(ds.simple, J)))
    return parabolics


def parabolic_for(ds: DescendentSystem, J: Sequence[int]) -> ThetaParabolic:
    key = tuple(sorted(set(J)))
    t = len(ds.simple)
    if len(key) != len(J) or any(i < 0 or i >= t for i in key):
        raise InputError(
            UNKNOWN_PARABOLIC,
            f"J = {list(J)} is not a subset of the {t} restricted simple roots",
            {"J": list(J), "rank": t},
        )
    I = tuple(sorted(set(ds.theta_minus) | {i for i, j in ds.restriction_map.items() if j in key}))
    return ThetaParabolic(key, I, ds.simple, _restrict_to_face(ds.simple, key))


def relative_positivity(lam: RatVec, par: ThetaParabolic, strict: bool = True) -> PositivityResult:
    """M-relative (strict) or weak positivity of lam on the face of ``par``."""
    return face_coefficients(lam, par.basis, par.J, strict)


def relative_positivity_all(lam: RatVec, parabolics: Sequence[ThetaParabolic], strict: bool = True) -> Dict[Face, PositivityResult]:
    return {par.J: relative_positivity(lam, par, strict) for par in parabolics}


# ==================== EXPONENT PROFILES ====================

@dataclass(frozen=True)
class ExponentProfile:
    """Real parts of exponents per parabolic, in restricted coordinates.

    ``discarded`` keeps the theta^- part removed on ingestion, keyed by
    (J, exponent index).
    """

    entries: Mapping[Face, Tuple[RatVec, ...]]
    coordinates: str = "full"
    discarded: Mapping[Tuple[Face, int], RatVec] = field(default_factory=dict)

    @classmethod
    def ingest(
        cls,
        ds: DescendentSystem,
        raw: Mapping[Sequence[int], Sequence[RatVec]],
        coordinates: str = "full",
    ) -> "ExponentProfile":
        entries: Dict[Face, Tuple[RatVec, ...]] = {}
        discarded: Dict[Tuple[Face, int], RatVec] = {}
        for J, vectors in raw.items():
            key = parabolic_for(ds, J).J
            projected = []
            for i, v in enumerate(vectors):
                if v.dim != ds.dim:
                    raise InputError(
                        DIMENSION_MISMATCH,
                        f"exponent {i} for J = {list(key)} has dimension {v.dim}, expected {ds.dim}",
                        {"J": list(key), "index": i},
                    )
                plus = eigenprojection(v, ds.involution.theta, 1)
                if plus != v:
                    if coordinates == "restricted":
                        raise InputError(
                            DIMENSION_MISMATCH,
                            f"exponent {i} for J = {list(key)} is declared restricted but is not theta-fixed",
                            {"J": list(key), "index": i},
                        )
                    discarded[(key, i)] = v - plus
                projected.append(plus)
            entries[key] = entries.get(key, ()) + tuple(projected)
        return cls(entries, coordinates, discarded)


def _characters(ds: DescendentSystem, reps: CosetReps) -> Mapping[WeylElement, RatVec]:
    return reps.rho_w if reps.rho_w else relative_test_characters(ds, reps)


@track_stage("h_integrability")
def h_integrability(
    ds: DescendentSystem,
    reps: CosetReps,
    profile: ExponentProfile,
    strict: bool = True,
) -> Verdict:
    rho = _characters(ds, reps)
    listed = set(profile.entries)
    warnings = []
    if not profile.entries:
        warnings.append(
            "WARNING: empty exponent profile; the verdict holds vacuously and says nothing about any representation"
        )
    else:
        missing = [
            list(J) for size in range(len(ds.simple) + 1)
            for J in itertools.combinations(range(len(ds.simple)), size)
            if J not in listed
        ]
        if missing:
            warnings.append(
                f"WARNING: no exponents supplied for {len(missing)} parabolic(s) {missing}; treated as vacuously passing"
            )
    for (J, i), part in sorted(profile.discarded.items()):
        warnings.append(f"discarded theta^- part {part} of exponent {i} at J = {list(J)}")

    rows, witnesses = [], []
    for J in sorted(profile.entries, key=lambda k: (len(k), k)):
        par = parabolic_for(ds, J)
        for i, chi in enumerate(profile.entries[J]):
            for w in reps.transversal:
                result = relative_positivity(rho[w] + chi, par, strict)
                rows.append({
                    "w": w.label,
                    "J": list(J),
                    "chi": i,
                    "coefficients": {idx: c for idx, c in result.coefficients},
                    "central": result.central,
                    "holds": result.holds,
                })
                if result.holds:
                    continue
                if result.reason == "OutsideSpan":
                    witnesses.append(Witness(w.label, J, i, None, None, "OutsideSpan"))
                for idx, c in result.failing(strict):
                    witnesses.append(Witness(w.label, J, i, idx, c, "NonPositiveCoefficient"))

    kind = VerdictKind.NOT_INTEGRABLE if witnesses else VerdictKind.INTEGRABLE
    logger.info(f"⚖️ H-integrability: {kind.value} ({len(rows)} checks, {len(witnesses)} witnesses)")
    return Verdict(kind, tuple(sorted(witnesses, key=Witness.sort_key)), tuple(warnings), tuple(rows))


def casselman_classify(datum: RootDatumG, exponents: Mapping[Sequence[int], Sequence[RatVec]]) -> Verdict:
    """Square-integrability / temperedness from exponents on standard parabolics of G."""
    simple = datum.simple_roots
    rows, strict_fail, weak_fail = [], [], []
    for I in sorted((tuple(sorted(k)) for k in exponents), key=lambda k: (len(k), k)):
        if len(set(I)) != len(I) or any(i < 0 or i >= len(simple) for i in I):
            raise InputError(UNKNOWN_PARABOLIC, f"I = {list(I)} is not a subset of the simple roots of G")
        vectors = next(v for k, v in exponents.items() if tuple(sorted(k)) == I)
        for i, chi in enumerate(vectors):
            if chi.dim != datum.rank:
                raise InputError(DIMENSION_MISMATCH, f"exponent {i} for I = {list(I)} has dimension {chi.dim}")
            strict = face_coefficients(chi, simple, I, strict=True)
            weak = face_coefficients(chi, simple, I, strict=False)
            rows.append({
                "I": list(I),
                "chi": i,
                "coefficients": {idx: c for idx, c in strict.coefficients},
                "square_integrable": strict.holds,
                "tempered": weak.holds,
            })
            if strict.reason == "OutsideSpan":
                strict_fail.append(Witness("e", I, i, None, None, "OutsideSpan"))
                weak_fail.append(Witness("e", I, i, None, None, "OutsideSpan"))
                continue
            strict_fail += [Witness("e", I, i, idx, c, "NonPositiveCoefficient") for idx, c in strict.failing(True)]
            weak_fail += [Witness("e", I, i, idx, c, "NegativeCoefficient") for idx, c in weak.failing(False)]

    if not strict_fail:
        return Verdict(VerdictKind.SQUARE_INTEGRABLE, rows=tuple(rows))
    if not weak_fail:
        return Verdict(VerdictKind.TEMPERED, tuple(sorted(strict_fail, key=Witness.sort_key)), rows=tuple(rows))
    return Verdict(VerdictKind.NEITHER, tuple(sorted(weak_fail, key=Witness.sort_key)), rows=tuple(rows))


def casselman_implies_relative(ds: DescendentSystem, par: ThetaParabolic, lam: RatVec) -> Tuple[bool, bool]:
    """(lam in the Casselman cone of P_I, lam^+ M-relatively positive)."""
    casselman = face_coefficients(lam, ds.datum.simple_roots, par.I, strict=True).holds
    relative = relative_positivity(eigenprojection(lam, ds.involution.theta, 1), par, strict=True).holds
    return casselman, relative


@track_stage("classify_pair")
def classify_pair(ds: DescendentSystem, reps: CosetReps) -> Verdict:
    """Sufficient test on the minimal face: never concludes "not strongly tempered"."""
    rho = _characters(ds, reps)
    par = parabolic_for(ds, ())
    rows, strict_ok, weak_ok, witnesses = [], True, True, []
    for w in reps.transversal:
        strict = relative_positivity(rho[w], par, strict=True)
        weak = relative_positivity(rho[w], par, strict=False)
        strict_ok &= strict.holds
        weak_ok &= weak.holds
        rows.append({
            "w": w.label,
            "rho": rho[w],
            "coefficients": {idx: c for idx, c in strict.coefficients},
            "strict": strict.holds,
            "weak": weak.holds,
        })
        witnesses += [Witness(w.label, (), None, idx, c, "NegativeCoefficient") for idx, c in weak.failing(False)]

    warnings = []
    if ds.anisotropic:
        warnings.append("WARNING: no restricted roots (anisotropic modulo the centre); the positivity test holds vacuously")
    if strict_ok:
        kind = VerdictKind.STRONGLY_TEMPERED
    elif weak_ok:
        kind = VerdictKind.STRONGLY_DISCRETE
    else:
        kind = VerdictKind.INCONCLUSIVE
        warnings.append("the relative test characters are not weakly positive; the sufficient condition is silent")
    logger.info(f"🏷️ Pair classified as {kind.value}")
    return Verdict(kind, tuple(sorted(witnesses, key=Witness.sort_key)), tuple(warnings), tuple(rows))
