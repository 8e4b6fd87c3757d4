"""
Cone-lattice decomposition and the convergence oracle.

Points of X_* = X_*(A_0^+) / X_*(A_G^+) are represented by their pairing
vector (<a_1, x>, ..., <a_t, x>) against the restricted simple roots; the
image of the fixed cocharacter lattice is a full-rank lattice in Z^t and the
dominant cone is its non-negative orthant.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from math import lcm
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy
from sympy import Matrix, Rational

from app.errors import BAD_PARAMETERS, COUNT_MISMATCH, EMPTY_SIMPLE_SET, ConsistencyError, InputError
from app.linalg import (
    IntVec,
    LatticeQuotient,
    RatVec,
    integer_echelon,
    lattice_contains,
    lattice_coordinates,
    lattice_quotient,
    orthogonal_split,
)
from app.observability import track_stage
from app.sympair import CosetReps, DescendentSystem, fixed_cocharacter_lattice, relative_test_characters

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConeDecomposition:
    simple_roots: Tuple[RatVec, ...]
    lattice_basis: Tuple[IntVec, ...]
    pairing_basis: Tuple[IntVec, ...]
    central_rank: int
    scales: Tuple[int, ...]
    generators: Tuple[IntVec, ...]
    dual_vectors: Tuple[RatVec, ...]
    quotient: LatticeQuotient
    transversal: Tuple[IntVec, ...]
    pairing_table: Tuple[Tuple[Rational, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def index(self) -> int:
        return self.quotient.index

    def coefficient_functional(self, weight: RatVec) -> Tuple[Rational, ...]:
        """Coefficients of weight on the simple roots, read off by pairing with the dual vectors."""
        return tuple(weight.dot(y) / c for y, c in zip(self.dual_vectors, self.scales))


@track_stage("dual_generators")
def dual_generators(ds: DescendentSystem) -> ConeDecomposition:
    simple = ds.simple
    t = len(simple)
    if t == 0:
        raise InputError(
            EMPTY_SIMPLE_SET,
            "no restricted simple roots: the pair is anisotropic modulo the centre",
        )
    basis = fixed_cocharacter_lattice(ds.datum, ds.involution)
    s = len(basis)
    # pairing of a restricted root with a theta-fixed cocharacter is integral
    pairings = [[simple[i].dot(RatVec(b)) for i in range(t)] for b in basis]
    augmented = [
        [int(p) for p in pairings[j]] + [1 if k == j else 0 for k in range(s)]
        for j in range(s)
    ]
    echelon, central = integer_echelon(augmented, t)
    if len(echelon) != t:
        raise ConsistencyError(
            COUNT_MISMATCH,
            f"pairing lattice has rank {len(echelon)}, expected {t}",
        )
    pairing_basis = [tuple(int(x) for x in row[:t]) for row in echelon]
    transforms = [np.array(row[t:], dtype=object) for row in echelon]

    H = Matrix(pairing_basis)
    H_inv = H.inv()
    scales, generators = [], []
    for a in range(t):
        coords = [H_inv[a, k] for k in range(t)]
        scale = lcm(*[int(Rational(c).q) for c in coords])
        target = [scale if k == a else 0 for k in range(t)]
        u = lattice_coordinates(pairing_basis, target)
        combination = sum((ui * tr for ui, tr in zip(u, transforms)), np.zeros(s, dtype=object))
        lift = sum(
            (int(combination[j]) * np.array(basis[j], dtype=object) for j in range(s)),
            np.zeros(ds.dim, dtype=object),
        )
        scales.append(scale)
        generators.append(tuple(int(x) for x in lift))

    dual_vectors = tuple(orthogonal_split(RatVec(g), simple)[0] for g in generators)
    table = tuple(tuple(simple[a].dot(RatVec(generators[b])) for b in range(t)) for a in range(t))

    y_coords = [lattice_coordinates(pairing_basis, [scales[a] if k == a else 0 for k in range(t)]) for a in range(t)]
    quotient = lattice_quotient(t, y_coords)
    points = set()
    for u in quotient.transversal:
        p = sum((ui * np.array(row, dtype=object) for ui, row in zip(u, pairing_basis)), np.zeros(t, dtype=object))
        points.add(tuple(int(p[a]) % scales[a] for a in range(t)))
    if len(points) != quotient.index:
        raise ConsistencyError(
            COUNT_MISMATCH,
            f"dominant adjustment produced {len(points)} coset representatives for index {quotient.index}",
        )
    decomp = ConeDecomposition(
        simple_roots=simple,
        lattice_basis=tuple(basis),
        pairing_basis=tuple(pairing_basis),
        central_rank=len(central),
        scales=tuple(scales),
        generators=tuple(generators),
        dual_vectors=dual_vectors,
        quotient=quotient,
        transversal=tuple(sorted(points)),
        pairing_table=table,
    )
    logger.info(f"🧱 Cone decomposition: scales {decomp.scales}, index {decomp.index}")
    return decomp


# ==================== LATTICE POINTS ====================

def decomposition_points(decomp: ConeDecomposition, box: int) -> List[IntVec]:
    """Points of the disjoint union of e + Y^{>=0} with pairing coordinates at most ``box``."""
    points = []
    for e in decomp.transversal:
        ranges = [range(e[a], box + 1, decomp.scales[a]) for a in range(decomp.rank)]
        points.extend(itertools.product(*ranges))
    return points


def naive_dominant_points(decomp: ConeDecomposition, box: int) -> List[IntVec]:
    """Dominant lattice points in the box, found by membership tests alone."""
    return [
        p for p in itertools.product(range(box + 1), repeat=decomp.rank)
        if lattice_contains(decomp.pairing_basis, p)
    ]


def _exponent_counts(decomp: ConeDecomposition, weight: RatVec, points: List[IntVec]) -> Counter:
    coeffs = decomp.coefficient_functional(weight)
    return Counter(sum((c * p for c, p in zip(coeffs, point)), Rational(0)) for point in points)


def _q_sum(counts: Counter, q: int):
    base = Rational(q)
    return sympy.Add(*[n * base ** (-e) for e, n in sorted(counts.items())])


def weighted_cone_sum(decomp: ConeDecomposition, weight_exponent: RatVec, q: int, box: int):
    """Exact sum of q^{-<weight, x>} over dominant x in the box, via the coset decomposition."""
    if box < 0:
        raise InputError(BAD_PARAMETERS, f"box must be non-negative, got {box}")
    return _q_sum(_exponent_counts(decomp, weight_exponent, decomposition_points(decomp, box)), q)


def naive_cone_sum(decomp: ConeDecomposition, weight_exponent: RatVec, q: int, box: int):
    return _q_sum(_exponent_counts(decomp, weight_exponent, naive_dominant_points(decomp, box)), q)


# ==================== ORACLE ====================

@dataclass(frozen=True)
class OracleEntry:
    w: str
    J: Tuple[int, ...]
    chi: int
    exponents: Tuple[Tuple[int, Rational], ...]
    central: RatVec
    converges: bool
    partial_sums: Tuple[Tuple[int, float], ...]


@dataclass(frozen=True)
class ConvergenceReport:
    q: int
    depth: int
    entries: Tuple[OracleEntry, ...]

    def verdicts(self) -> Dict[Tuple[str, Tuple[int, ...], int], bool]:
        return {(e.w, e.J, e.chi): e.converges for e in self.entries}

    @property
    def converges(self) -> bool:
        return all(e.converges for e in self.entries)


def geometric_partial_sum(exponent: Rational, q: int, depth: int) -> float:
    """Illustrative numeric value of sum_{k<=depth} q^{-k*exponent}."""
    steps = np.arange(depth + 1, dtype=float)
    return float(np.sum(np.power(float(q), -float(exponent) * steps)))


@track_stage("convergence_oracle")
def convergence_oracle(
    ds: DescendentSystem,
    reps: CosetReps,
    profile,
    q: int = 2,
    depth: int = 20,
    decomp: Optional[ConeDecomposition] = None,
) -> ConvergenceReport:
    """Exact exponents <lambda, y_a> per (w, J, chi); converges iff all are positive and no central part."""
    if q < 2:
        raise InputError(BAD_PARAMETERS, f"q must be at least 2, got {q}")
    if depth < 0:
        raise InputError(BAD_PARAMETERS, f"depth must be non-negative, got {depth}")
    decomp = decomp or dual_generators(ds)
    rho = reps.rho_w or relative_test_characters(ds, reps)
    entries = []
    for J in sorted(profile.entries, key=lambda k: (len(k), k)):
        for i, chi in enumerate(profile.entries[J]):
            for w in reps.transversal:
                lam = rho[w] + chi
                _, central = orthogonal_split(lam, decomp.simple_roots)
                exponents = tuple(
                    (a, lam.dot(decomp.dual_vectors[a]))
                    for a in range(decomp.rank) if a not in J
                )
                converges = central.is_zero() and all(e > 0 for _, e in exponents)
                sums = tuple((a, geometric_partial_sum(e, q, depth)) for a, e in exponents)
                entries.append(OracleEntry(w.label, J, i, exponents, central, converges, sums))
    report = ConvergenceReport(q, depth, tuple(entries))
    logger.info(f"🔮 Oracle: {sum(e.converges for e in entries)}/{len(entries)} directions converge")
    return report
