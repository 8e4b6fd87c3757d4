"""
Root systems and their Weyl groups.

Root systems may be non-reduced (type BC): both a and 2a are stored, the
simple system keeps the indivisible member. Weyl group elements are kept as
permutations of an indexed root list; their exact matrices are materialised
on demand. Coset representatives are enumerated by an ascending
breadth-first search, so large groups are never listed in full.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy import ImmutableMatrix, Matrix, Rational

from app.config import get_config
from app.errors import (
    DEPENDENT_GENERATORS,
    NOT_A_ROOT_SYSTEM,
    NOT_POSITIVE_SYSTEM,
    SIZE_CAP_EXCEEDED,
    InputError,
)
from app.linalg import RatVec, apply_matrix, span_projector, vector_sum

logger = logging.getLogger(__name__)


def reflect(alpha: RatVec, v: RatVec) -> RatVec:
    return v - alpha * (2 * v.dot(alpha) / alpha.dot(alpha))


def reflection_matrix(alpha: RatVec) -> ImmutableMatrix:
    a = alpha.as_column()
    return ImmutableMatrix(sympy.eye(alpha.dim) - a * a.T * (2 / alpha.dot(alpha)))


def simple_roots_of(positive_roots: Sequence[RatVec]) -> Tuple[RatVec, ...]:
    """Positive roots that are not a sum of two positive roots."""
    positives = set(positive_roots)
    for r in positives:
        if -r in positives:
            raise InputError(
                NOT_POSITIVE_SYSTEM,
                f"positive system contains both {r} and its negative",
                {"root": r.to_strings()},
            )
    simple = [
        r for r in positives
        if not any((r - a) in positives for a in positives)
    ]
    return tuple(sorted(simple, key=RatVec.sort_key))


def dominance_probe(positive_roots: Sequence[RatVec], dim: int) -> RatVec:
    """Sum of the positive roots: strictly dominant and regular."""
    return vector_sum(positive_roots, dim)


# ==================== ROOT SYSTEMS ====================

@dataclass(frozen=True, eq=False)
class RootSystem:
    dim: int
    positive_roots: Tuple[RatVec, ...]
    simple_roots: Tuple[RatVec, ...]
    mult: Mapping[RatVec, int] = field(default_factory=dict)

    @classmethod
    def from_positive(
        cls,
        dim: int,
        positive_roots: Sequence[RatVec],
        simple_roots: Optional[Sequence[RatVec]] = None,
        mult: Optional[Mapping[RatVec, int]] = None,
    ) -> "RootSystem":
        simple = tuple(simple_roots) if simple_roots is not None else simple_roots_of(positive_roots)
        projector = _simple_projector(simple, dim)

        def order(root: RatVec):
            coeffs, _ = projector.coefficients(root)
            return (sum(coeffs), tuple(-c for c in coeffs))

        positive = tuple(sorted(set(positive_roots), key=order))
        full_mult = {}
        for r in positive:
            m = (mult or {}).get(r, 1)
            full_mult[r] = m
            full_mult[-r] = (mult or {}).get(-r, m)
        return cls(dim, positive, simple, full_mult)

    @classmethod
    def from_roots(
        cls,
        dim: int,
        roots: Sequence[RatVec],
        simple_roots: Sequence[RatVec],
        mult: Optional[Mapping[RatVec, int]] = None,
    ) -> "RootSystem":
        """Split a root set into positives and negatives by a simple system."""
        projector = _simple_projector(tuple(simple_roots), dim)
        positive = []
        for r in roots:
            coeffs, rest = projector.coefficients(r)
            if not rest.is_zero():
                raise InputError(NOT_A_ROOT_SYSTEM, f"root {r} lies outside the span of the simple roots")
            if all(c >= 0 for c in coeffs):
                positive.append(r)
            elif not all(c <= 0 for c in coeffs):
                raise InputError(
                    NOT_POSITIVE_SYSTEM,
                    f"root {r} is neither a non-negative nor a non-positive combination of simple roots",
                    {"root": r.to_strings()},
                )
        return cls.from_positive(dim, positive, simple_roots, mult)

    @cached_property
    def roots(self) -> Tuple[RatVec, ...]:
        return self.positive_roots + tuple(-r for r in self.positive_roots)

    @cached_property
    def index(self) -> Dict[RatVec, int]:
        return {r: i for i, r in enumerate(self.roots)}

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    def coefficients(self, v: RatVec) -> Optional[Tuple[Rational, ...]]:
        coeffs, rest = _simple_projector(self.simple_roots, self.dim).coefficients(v)
        return coeffs if rest.is_zero() else None

    def is_positive(self, root: RatVec) -> bool:
        return root in set(self.positive_roots)

    def is_reduced(self) -> bool:
        roots = set(self.roots)
        return not any(r * 2 in roots for r in self.positive_roots)

    def cartan_matrix(self) -> List[List[int]]:
        return [
            [int(2 * a.dot(b) / b.dot(b)) for b in self.simple_roots]
            for a in self.simple_roots
        ]

    def validate(self) -> "RootSystem":
        """Root-system axioms; raises NotARootSystem or NotPositiveSystem."""
        positives = set(self.positive_roots)
        for r in positives:
            if r.is_zero():
                raise InputError(NOT_A_ROOT_SYSTEM, "the zero vector is not a root")
            if -r in positives:
                raise InputError(NOT_POSITIVE_SYSTEM, f"both {r} and its negative are positive")
        for s in self.simple_roots:
            if s not in positives:
                raise InputError(NOT_A_ROOT_SYSTEM, f"simple root {s} is not a positive root")
        for r in self.positive_roots:
            coeffs = self.coefficients(r)
            if coeffs is None or any(c < 0 or c.q != 1 for c in coeffs):
                raise InputError(
                    NOT_A_ROOT_SYSTEM,
                    f"positive root {r} is not a non-negative integer combination of the simple roots",
                    {"root": r.to_strings()},
                )
        roots = self.roots
        root_set = set(roots)
        for a in roots:
            aa = a.dot(a)
            for b in roots:
                n = 2 * b.dot(a) / aa
                if n.q != 1:
                    raise InputError(
                        NOT_A_ROOT_SYSTEM,
                        f"Cartan number 2(b,a)/(a,a) = {n} is not an integer",
                        {"a": a.to_strings(), "b": b.to_strings()},
                    )
        for s in self.simple_roots:
            for r in roots:
                if reflect(s, r) not in root_set:
                    raise InputError(
                        NOT_A_ROOT_SYSTEM,
                        f"roots are not closed under the reflection in {s}",
                        {"simple": s.to_strings(), "root": r.to_strings()},
                    )
        for r in roots:
            if int(self.mult.get(r, 0)) < 1:
                raise InputError(NOT_A_ROOT_SYSTEM, f"root {r} needs a positive multiplicity")
        return self

    def weyl_group(self, size_cap: Optional[int] = None) -> "WeylGroup":
        return WeylGroup(self.dim, self.simple_roots, roots=self.roots, size_cap=size_cap)

    def type_label(self) -> str:
        return cartan_type_label(self)


def _simple_projector(simple: Tuple[RatVec, ...], dim: int):
    try:
        return span_projector(tuple(simple), dim)
    except InputError as e:
        if e.kind == DEPENDENT_GENERATORS:
            raise InputError(NOT_A_ROOT_SYSTEM, "simple roots are linearly dependent", e.details) from e
        raise


def cartan_type_label(system: RootSystem) -> str:
    """Label such as "BC1", "C2" or "A2xA1"; "A0" for the empty system."""
    simple = list(system.simple_roots)
    if not simple:
        return "A0"
    roots = set(system.roots)
    seen = set()
    labels = []
    for start in range(len(simple)):
        if start in seen:
            continue
        component, queue = [], [start]
        seen.add(start)
        while queue:
            i = queue.pop()
            component.append(i)
            for j in range(len(simple)):
                if j not in seen and simple[i].dot(simple[j]) != 0:
                    seen.add(j)
                    queue.append(j)
        labels.append(_component_label(sorted(component), simple, roots))
    return "x".join(labels)


def _component_label(component: List[int], simple: List[RatVec], roots) -> str:
    k = len(component)
    vectors = [simple[i] for i in component]
    if any(v * 2 in roots for v in vectors):
        return f"BC{k}"
    lengths = [v.dot(v) for v in vectors]
    longest, shortest = max(lengths), min(lengths)
    if longest == shortest:
        degree = {
            i: sum(1 for j in component if j != i and simple[i].dot(simple[j]) != 0)
            for i in component
        }
        branch = [i for i in component if degree[i] == 3]
        if not branch:
            return f"A{k}"
        arms = _arm_lengths(branch[0], component, simple)
        return f"D{k}" if sorted(arms)[:2] == [1, 1] else f"E{k}"
    if longest == 3 * shortest:
        return "G2"
    short = sum(1 for x in lengths if x == shortest)
    if k == 2:
        return "C2"
    if short == 1:
        return f"B{k}"
    if short == k - 1:
        return f"C{k}"
    return f"F{k}"


def _arm_lengths(center: int, component: List[int], simple: List[RatVec]) -> List[int]:
    arms = []
    for start in component:
        if start == center or simple[start].dot(simple[center]) == 0:
            continue
        length, prev, cur = 1, center, start
        while True:
            nxt = [
                j for j in component
                if j not in (prev, cur) and simple[cur].dot(simple[j]) != 0
            ]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return arms


# ==================== WEYL GROUPS ====================

@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element, stored as the permutation it induces on the root list."""

    perm: Tuple[int, ...]
    group: "WeylGroup" = field(compare=False, repr=False, hash=False)
    word: Tuple[int, ...] = field(default=(), compare=False)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(
            tuple(self.perm[i] for i in other.perm),
            self.group,
            self.word + other.word,
        )

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return WeylElement(tuple(inv), self.group, tuple(reversed(self.word)))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    @property
    def label(self) -> str:
        if not self.word:
            return "e"
        return "".join(f"s{i + 1}" for i in self.word)

    @cached_property
    def matrix(self) -> ImmutableMatrix:
        return self.group.matrix_of(self.perm)

    def apply(self, v: RatVec) -> RatVec:
        return apply_matrix(self.matrix, v)

    def image(self, root: RatVec) -> RatVec:
        return self.group.roots[self.perm[self.group.index[root]]]

    def sort_key(self):
        return (len(self.word), self.word)

    def matrix_key(self):
        """Word length first, then the matrix entries row by row; the identity sorts first."""
        return (len(self.word), tuple(self.matrix))


class WeylGroup:
    """
    Reflection group generated by simple roots, acting on a W-stable root list.

    The root list defaults to the orbit of the simple roots; pass the full
    (possibly non-reduced) root set to act on all of it.
    """

    def __init__(
        self,
        dim: int,
        simple_roots: Sequence[RatVec],
        roots: Optional[Sequence[RatVec]] = None,
        size_cap: Optional[int] = None,
    ):
        self.dim = dim
        self.simple_roots = tuple(simple_roots)
        self.size_cap = size_cap if size_cap is not None else get_config().weyl_size_cap
        self._projector = _simple_projector(self.simple_roots, dim)
        self.roots = tuple(roots) if roots is not None else _orbit(self.simple_roots)
        self.index = {r: i for i, r in enumerate(self.roots)}
        self.simple_index = []
        for s in self.simple_roots:
            if s not in self.index:
                raise InputError(NOT_A_ROOT_SYSTEM, f"simple root {s} is missing from the root list")
            self.simple_index.append(self.index[s])
        self.positive = tuple(self._is_positive(r) for r in self.roots)
        self.generators = tuple(
            WeylElement(self._reflection_perm(s), self, (i,))
            for i, s in enumerate(self.simple_roots)
        )

    def _is_positive(self, root: RatVec) -> bool:
        coeffs, rest = self._projector.coefficients(root)
        if not rest.is_zero():
            raise InputError(NOT_A_ROOT_SYSTEM, f"root {root} lies outside the span of the simple roots")
        return all(c >= 0 for c in coeffs)

    def _reflection_perm(self, alpha: RatVec) -> Tuple[int, ...]:
        perm = []
        for r in self.roots:
            image = reflect(alpha, r)
            if image not in self.index:
                raise InputError(
                    NOT_A_ROOT_SYSTEM,
                    f"root list is not stable under the reflection in {alpha}",
                    {"simple": alpha.to_strings(), "root": r.to_strings()},
                )
            perm.append(self.index[image])
        return tuple(perm)

    @property
    def identity(self) -> WeylElement:
        return WeylElement(tuple(range(len(self.roots))), self, ())

    def matrix_of(self, perm: Sequence[int]) -> ImmutableMatrix:
        """Exact matrix: the permutation on the root span, identity on its complement."""
        if not self.simple_roots:
            return ImmutableMatrix(sympy.eye(self.dim))
        S = Matrix.hstack(*[s.as_column() for s in self.simple_roots])
        images = Matrix.hstack(*[self.roots[perm[i]].as_column() for i in self.simple_index])
        return ImmutableMatrix(sympy.eye(self.dim) + (images - S) * self._projector.pinv)

    def element_from_word(self, word: Sequence[int]) -> WeylElement:
        w = self.identity
        for i in word:
            w = w * self.generators[i]
        return w

    @cached_property
    def order(self) -> int:
        return weyl_order(self.simple_roots, self.dim)

    def minimal_coset_representatives(
        self,
        subsystem_simple_roots: Sequence[RatVec],
        cap: Optional[int] = None,
    ) -> List[WeylElement]:
        """
        Elements w with w(b) > 0 for every b in the subsystem basis.

        The subsystem basis must be the simple system of a reflection
        subgroup with respect to this group's positive roots. Removing a
        left factor keeps an element in the set, so an ascending search by
        left multiplication with simple reflections reaches all of them.
        """
        cap = cap if cap is not None else self.size_cap
        sub_index = []
        for b in subsystem_simple_roots:
            if b not in self.index:
                raise InputError(NOT_A_ROOT_SYSTEM, f"subsystem root {b} is not a root of this group")
            sub_index.append(self.index[b])

        start = self.identity
        found = {start.perm: start}
        frontier = deque([start])
        while frontier:
            w = frontier.popleft()
            inv = w.inverse().perm
            for i, s in enumerate(self.generators):
                if not self.positive[inv[self.simple_index[i]]]:
                    continue
                candidate = WeylElement(
                    tuple(s.perm[j] for j in w.perm), self, (i,) + w.word
                )
                if candidate.perm in found:
                    continue
                if all(self.positive[candidate.perm[j]] for j in sub_index):
                    found[candidate.perm] = candidate
                    frontier.append(candidate)
                    if len(found) > cap:
                        raise InputError(
                            SIZE_CAP_EXCEEDED,
                            f"coset enumeration exceeded the cap of {cap} elements",
                            {"cap": cap},
                        )
        return sorted(found.values(), key=WeylElement.sort_key)

    @cached_property
    def elements(self) -> Tuple[WeylElement, ...]:
        if self.order > self.size_cap:
            raise InputError(
                SIZE_CAP_EXCEEDED,
                f"Weyl group of order {self.order} exceeds the cap of {self.size_cap}",
                {"order": self.order, "cap": self.size_cap},
            )
        return tuple(self.minimal_coset_representatives(()))


def _orbit(simple_roots: Tuple[RatVec, ...]) -> Tuple[RatVec, ...]:
    seen = list(simple_roots)
    known = set(seen)
    queue = deque(seen)
    while queue:
        r = queue.popleft()
        for s in simple_roots:
            image = reflect(s, r)
            if image not in known:
                known.add(image)
                seen.append(image)
                queue.append(image)
    return tuple(seen)


def weyl_order(simple_roots: Sequence[RatVec], dim: Optional[int] = None) -> int:
    """|W(D)| = |W(D)/W(D minus a)| * |W(D minus a)|, counted without listing W."""
    simple = tuple(simple_roots)
    if not simple:
        return 1
    dim = dim if dim is not None else simple[0].dim
    group = WeylGroup(dim, simple, size_cap=10**12)
    cosets = len(group.minimal_coset_representatives(simple[:-1]))
    return cosets * weyl_order(simple[:-1], dim)


def weyl_closure(
    simple_roots: Sequence[RatVec],
    roots: Optional[Sequence[RatVec]] = None,
    size_cap: Optional[int] = None,
    dim: Optional[int] = None,
) -> WeylGroup:
    """Group with its element list enumerated breadth-first."""
    simple = tuple(simple_roots)
    if dim is None:
        dim = simple[0].dim if simple else (roots[0].dim if roots else 0)
    group = WeylGroup(dim, simple, roots=roots, size_cap=size_cap)
    logger.debug(f"Weyl closure of rank {len(simple)}: {len(group.elements)} elements")
    return group


def chamber_test(w: WeylElement, probe: RatVec, simple_roots: Sequence[RatVec], strict: bool = True) -> bool:
    image = w.apply(probe)
    if strict:
        return all(a.dot(image) > 0 for a in simple_roots)
    return all(a.dot(image) >= 0 for a in simple_roots)
