"""
The theta-machinery of a symmetric pair at root-datum level.

- ``build_descendent``: restricted roots, fibers, multiplicities M^G, M^H and
  trace multiplicities, the H-root system and half-sums
- ``theta_minus_permutation``: the involutive permutation of the simple roots
  not killed by restriction
- ``coset_transversal``: distinguished coset representatives
- ``relative_test_characters``: rho^w computed two ways and cross-checked
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy import ImmutableMatrix, Rational

from app.config import get_config
from app.errors import (
    CONE_INCLUSION_FAILURE,
    COUNT_MISMATCH,
    DIMENSION_MISMATCH,
    FORMULA_MISMATCH,
    INVOLUTION_INVALID,
    NO_SOLUTION,
    NOT_A_ROOT_SYSTEM,
    PARITY_VIOLATION,
    ConsistencyError,
    InputError,
)
from app.linalg import (
    IntVec,
    RatVec,
    apply_matrix,
    eigenprojection,
    integer_kernel_basis,
    require_involution,
    solve_in_span,
    vector_sum,
)
from app.observability import track_stage
from app.rootsys import (
    RootSystem,
    WeylElement,
    WeylGroup,
    chamber_test,
    dominance_probe,
    simple_roots_of,
)

logger = logging.getLogger(__name__)


# ==================== INPUT DATA ====================

@dataclass(frozen=True, eq=False)
class RootDatumG:
    """Roots of G relative to A_0 in X^*(A_0) = Z^rank, with root-space dimensions."""

    rank: int
    system: RootSystem

    @classmethod
    def create(
        cls,
        rank: int,
        roots: Sequence[Sequence],
        simple_roots: Sequence[Sequence],
        mult: Optional[Mapping[Tuple, int]] = None,
    ) -> "RootDatumG":
        vectors = [RatVec(tuple(r)) for r in roots]
        simple = [RatVec(tuple(s)) for s in simple_roots]
        for v in vectors + simple:
            if v.dim != rank:
                raise InputError(DIMENSION_MISMATCH, f"root {v} is not of dimension {rank}")
            if not v.is_integral():
                raise InputError(DIMENSION_MISMATCH, f"root {v} is not an integer vector")
        if len(set(vectors)) != len(vectors):
            raise InputError(NOT_A_ROOT_SYSTEM, "duplicate roots in the root list")
        for s in simple:
            if s not in set(vectors):
                raise InputError(NOT_A_ROOT_SYSTEM, f"simple root {s} is not in the root list")
        multiplicities = {RatVec(tuple(k)): int(m) for k, m in (mult or {}).items()}
        system = RootSystem.from_roots(rank, vectors, simple, multiplicities)
        if len(system.roots) != len(vectors):
            raise InputError(NOT_A_ROOT_SYSTEM, "root list is not symmetric under negation")
        for r in system.positive_roots:
            if system.mult[r] != system.mult[-r]:
                raise InputError(NOT_A_ROOT_SYSTEM, f"roots {r} and its negative have different multiplicities")
        return cls(rank, system.validate())

    @property
    def roots(self) -> Tuple[RatVec, ...]:
        return self.system.roots

    @property
    def positive_roots(self) -> Tuple[RatVec, ...]:
        return self.system.positive_roots

    @property
    def simple_roots(self) -> Tuple[RatVec, ...]:
        return self.system.simple_roots

    @property
    def mult(self) -> Mapping[RatVec, int]:
        return self.system.mult


@dataclass(frozen=True, eq=False)
class InvolutionData:
    """theta on Z^rank and the trace of theta on each theta-fixed root space."""

    theta: ImmutableMatrix
    fixed_trace: Mapping[RatVec, int] = field(default_factory=dict)

    @classmethod
    def create(cls, theta: Sequence[Sequence[int]], fixed_trace: Optional[Mapping[Tuple, int]] = None) -> "InvolutionData":
        traces = {RatVec(tuple(k)): int(t) for k, t in (fixed_trace or {}).items()}
        return cls(ImmutableMatrix(theta), traces)

    def apply(self, v: RatVec) -> RatVec:
        return apply_matrix(self.theta, v)

    def restrict(self, v: RatVec) -> RatVec:
        return eigenprojection(v, self.theta, 1)


def validate_involution(datum: RootDatumG, inv: InvolutionData) -> None:
    """Raise InvolutionInvalid or ParityViolation unless inv is compatible with datum."""
    theta = inv.theta
    if theta.shape != (datum.rank, datum.rank):
        raise InputError(
            DIMENSION_MISMATCH,
            f"theta of shape {theta.shape} does not act on rank {datum.rank}",
        )
    if any(x.q != 1 for x in theta):
        raise InputError(INVOLUTION_INVALID, "theta must have integer entries")
    require_involution(theta)
    if theta.T != theta:
        raise InputError(INVOLUTION_INVALID, "theta must be orthogonal for the standard pairing")

    roots = set(datum.roots)
    fixed = []
    for beta in datum.roots:
        image = inv.apply(beta)
        if image not in roots:
            raise InputError(
                INVOLUTION_INVALID,
                f"theta maps the root {beta} to the non-root {image}",
                {"root": beta.to_strings()},
            )
        if datum.mult[image] != datum.mult[beta]:
            raise InputError(INVOLUTION_INVALID, f"theta does not preserve the multiplicity of {beta}")
        if image == beta:
            fixed.append(beta)

    missing = [b for b in fixed if b not in inv.fixed_trace]
    if missing:
        raise InputError(
            INVOLUTION_INVALID,
            f"no trace given for the theta-fixed root {missing[0]}",
            {"missing": [b.to_strings() for b in missing]},
        )
    extra = [b for b in inv.fixed_trace if b not in set(fixed)]
    if extra:
        raise InputError(
            INVOLUTION_INVALID,
            f"trace given for {extra[0]}, which is not a theta-fixed root",
            {"extra": [b.to_strings() for b in extra]},
        )
    for beta in fixed:
        t, m = inv.fixed_trace[beta], datum.mult[beta]
        if abs(t) > m or (m - t) % 2:
            raise InputError(
                PARITY_VIOLATION,
                f"trace {t} is not a sum of {m} signs on the root space of {beta}",
                {"root": beta.to_strings(), "trace": t, "mult": m},
            )
        if inv.fixed_trace[-beta] != t:
            raise InputError(INVOLUTION_INVALID, f"traces on {beta} and its negative differ")

    restrictions = {inv.restrict(b) for b in datum.positive_roots} - {RatVec.zero(datum.rank)}
    for a in restrictions:
        if -a in restrictions:
            raise InputError(
                INVOLUTION_INVALID,
                "positive roots of G restrict to both a and -a; the simple roots are not adapted to theta",
                {"restricted_root": a.to_strings()},
            )


def fixed_cocharacter_lattice(datum: RootDatumG, inv: InvolutionData) -> List[IntVec]:
    """Z-basis of X_*(A_0^+) = {x in Z^rank : theta x = x}."""
    shifted = inv.theta - sympy.eye(datum.rank)
    rows = [[int(shifted[i, j]) for j in range(datum.rank)] for i in range(datum.rank)]
    return integer_kernel_basis(rows, datum.rank)


# ==================== DESCENDENT SYSTEM ====================

@dataclass(frozen=True, eq=False)
class DescendentSystem:
    datum: RootDatumG
    involution: InvolutionData
    restricted: RootSystem
    fibers: Mapping[RatVec, Tuple[RatVec, ...]]
    MG: Mapping[RatVec, int]
    MH: Mapping[RatVec, int]
    m_theta: Mapping[RatVec, int]
    h_system: RootSystem
    theta_minus: Tuple[int, ...]
    restriction_map: Mapping[int, int]
    rho_G: RatVec
    rho_G_plus: RatVec
    rho_H: RatVec

    @property
    def dim(self) -> int:
        return self.datum.rank

    @property
    def simple(self) -> Tuple[RatVec, ...]:
        """Delta^{G/H}, ordered by the first simple root of G restricting to each."""
        return self.restricted.simple_roots

    @property
    def h_simple(self) -> Tuple[RatVec, ...]:
        return self.h_system.simple_roots

    @property
    def anisotropic(self) -> bool:
        return not self.restricted.simple_roots


@track_stage("build_descendent")
def build_descendent(datum: RootDatumG, inv: InvolutionData) -> DescendentSystem:
    validate_involution(datum, inv)
    n = datum.rank
    zero = RatVec.zero(n)
    restriction = {beta: inv.restrict(beta) for beta in datum.roots}

    positives: List[RatVec] = []
    for beta in datum.positive_roots:
        alpha = restriction[beta]
        if alpha != zero and alpha not in positives:
            positives.append(alpha)
    all_restricted = positives + [-a for a in positives]

    fibers, MG, MH, m_theta = {}, {}, {}, {}
    for alpha in all_restricted:
        fiber = tuple(b for b in datum.roots if restriction[b] == alpha)
        fibers[alpha] = fiber
        MG[alpha] = sum(datum.mult[b] for b in fiber)
        m_theta[alpha] = sum(inv.fixed_trace[b] for b in fiber if inv.apply(b) == b)
        doubled = MG[alpha] + m_theta[alpha]
        if doubled % 2 or doubled < 0:
            raise InputError(
                PARITY_VIOLATION,
                f"M^H = ({MG[alpha]} + {m_theta[alpha]})/2 is not a non-negative integer for {alpha}",
                {"restricted_root": alpha.to_strings(), "MG": MG[alpha], "m_theta": m_theta[alpha]},
            )
        MH[alpha] = doubled // 2

    theta_minus = tuple(i for i, s in enumerate(datum.simple_roots) if restriction[s] == zero)
    images: List[RatVec] = []
    restriction_map: Dict[int, int] = {}
    for i, s in enumerate(datum.simple_roots):
        if i in theta_minus:
            continue
        if restriction[s] not in images:
            images.append(restriction[s])
        restriction_map[i] = images.index(restriction[s])

    if set(images) != set(simple_roots_of(positives)):
        raise InputError(
            NOT_A_ROOT_SYSTEM,
            "restrictions of the simple roots of G do not form a basis of the restricted roots",
            {"restricted_simple": [a.to_strings() for a in images]},
        )
    restricted = RootSystem.from_positive(n, positives, images, MG).validate()

    h_positive = [a for a in restricted.positive_roots if MH[a] > 0]
    h_system = RootSystem.from_positive(n, h_positive, simple_roots_of(h_positive), MH).validate()

    rho_G = vector_sum((b * datum.mult[b] for b in datum.positive_roots), n) / 2
    rho_H = vector_sum((a * MH[a] for a in h_system.positive_roots), n) / 2

    ds = DescendentSystem(
        datum=datum,
        involution=inv,
        restricted=restricted,
        fibers=fibers,
        MG=MG,
        MH=MH,
        m_theta=m_theta,
        h_system=h_system,
        theta_minus=theta_minus,
        restriction_map=restriction_map,
        rho_G=rho_G,
        rho_G_plus=inv.restrict(rho_G),
        rho_H=rho_H,
    )
    logger.info(
        f"🧭 Descendent system {restricted.type_label()} (H-roots {h_system.type_label()}), "
        f"{len(positives)} positive restricted roots"
    )
    return ds


def half_sums(ds: DescendentSystem) -> Tuple[RatVec, RatVec, RatVec]:
    """(rho_0^G, its +1-projection, rho_0^H)."""
    return ds.rho_G, ds.rho_G_plus, ds.rho_H


def theta_minus_permutation(datum: RootDatumG, inv: InvolutionData) -> Dict[int, int]:
    """For each simple root a with theta(a) != -a, the simple b with theta(a) - b in X_0."""
    theta_minus = [i for i, s in enumerate(datum.simple_roots) if inv.apply(s) == -s]
    x0 = [datum.simple_roots[i] for i in theta_minus]
    others = [i for i in range(len(datum.simple_roots)) if i not in theta_minus]
    perm: Dict[int, int] = {}
    for i in others:
        image = inv.apply(datum.simple_roots[i])
        matches = [
            j for j in others
            if solve_in_span(image - datum.simple_roots[j], x0) is not None
        ]
        if len(matches) != 1:
            raise InputError(
                NO_SOLUTION,
                f"theta of simple root {i + 1} matches {len(matches)} simple roots modulo X_0",
                {"simple_root": i, "matches": matches},
            )
        perm[i] = matches[0]
    for i, j in perm.items():
        if perm[j] != i:
            raise InputError(NO_SOLUTION, "induced permutation of simple roots is not an involution", {"perm": perm})
    return perm


# ==================== COSET REPRESENTATIVES ====================

@dataclass(frozen=True, eq=False)
class CosetReps:
    WGH: WeylGroup
    WH: WeylGroup
    transversal: Tuple[WeylElement, ...]
    rho_w: Mapping[WeylElement, RatVec] = field(default_factory=dict)

    @property
    def identity(self) -> WeylElement:
        return self.WGH.identity


@track_stage("coset_transversal")
def coset_transversal(ds: DescendentSystem, size_cap: Optional[int] = None) -> CosetReps:
    cap = size_cap if size_cap is not None else get_config().weyl_size_cap
    WGH = WeylGroup(ds.dim, ds.simple, roots=ds.restricted.roots, size_cap=cap)
    WH = WeylGroup(ds.dim, ds.h_simple, roots=ds.h_system.roots, size_cap=cap)
    representatives = WGH.minimal_coset_representatives(ds.h_simple)

    probe = dominance_probe(ds.restricted.positive_roots, ds.dim)
    for w in representatives:
        if not chamber_test(w.inverse(), probe, ds.h_simple, strict=True):
            raise ConsistencyError(
                COUNT_MISMATCH,
                f"representative {w.label} does not map the open chamber into the H-chamber",
                {"w": w.label},
            )
    if len(representatives) * WH.order != WGH.order:
        raise ConsistencyError(
            COUNT_MISMATCH,
            f"|transversal| * |W^H| = {len(representatives)} * {WH.order} != |W^G/H| = {WGH.order}",
            {"transversal": len(representatives), "WH": WH.order, "WGH": WGH.order},
        )
    transversal = tuple(sorted(representatives, key=WeylElement.matrix_key))
    logger.info(f"📐 Transversal of size {len(transversal)} (|W^G/H| = {WGH.order}, |W^H| = {WH.order})")
    return CosetReps(WGH, WH, transversal)


@track_stage("relative_test_characters")
def relative_test_characters(ds: DescendentSystem, reps: CosetReps) -> Dict[WeylElement, RatVec]:
    """rho^w = (rho_0^G)^+ - 2 w(rho_0^H), checked against -1/2 sum m_{theta, w^-1 a} a."""
    characters: Dict[WeylElement, RatVec] = {}
    for w in reps.transversal:
        by_half_sums = ds.rho_G_plus - w.apply(ds.rho_H) * 2
        w_inv = w.inverse()
        total = RatVec.zero(ds.dim)
        for alpha in ds.restricted.positive_roots:
            pulled = w_inv.image(alpha)
            if pulled not in ds.m_theta:
                raise ConsistencyError(
                    FORMULA_MISMATCH,
                    f"w^-1 maps {alpha} outside the restricted roots",
                    {"w": w.label, "root": alpha.to_strings()},
                )
            total = total + alpha * ds.m_theta[pulled]
        by_traces = total * Rational(-1, 2)
        if by_half_sums != by_traces:
            raise ConsistencyError(
                FORMULA_MISMATCH,
                f"rho^w disagrees between the half-sum and trace formulas for w = {w.label}",
                {
                    "w": w.label,
                    "half_sums": by_half_sums.to_strings(),
                    "traces": by_traces.to_strings(),
                },
            )
        characters[w] = by_half_sums
    return characters


def check_cone_inclusions(ds: DescendentSystem, reps: CosetReps) -> None:
    """Delta^H and every w(Sigma^{H,>0}) lie in the closed cone of Delta^{G/H}."""
    for beta in ds.h_simple:
        coeffs = solve_in_span(beta, ds.simple)
        if coeffs is None or any(c < 0 for c in coeffs):
            raise ConsistencyError(
                CONE_INCLUSION_FAILURE,
                f"simple H-root {beta} is outside the non-negative cone of the restricted simple roots",
                {"root": beta.to_strings()},
            )
    for w in reps.transversal:
        for alpha in ds.h_system.positive_roots:
            coeffs = solve_in_span(w.image(alpha), ds.simple)
            if coeffs is None or any(c < 0 for c in coeffs):
                raise ConsistencyError(
                    CONE_INCLUSION_FAILURE,
                    f"{w.label} maps the positive H-root {alpha} out of the non-negative cone",
                    {"w": w.label, "root": alpha.to_strings()},
                )
