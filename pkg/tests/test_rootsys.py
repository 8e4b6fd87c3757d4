"""Root systems, Weyl group orders and minimal coset representatives."""

import pytest

from app.errors import NOT_A_ROOT_SYSTEM, NOT_POSITIVE_SYSTEM, SIZE_CAP_EXCEEDED, InputError
from app.linalg import RatVec
from app.rootsys import (
    RootSystem,
    WeylGroup,
    chamber_test,
    dominance_probe,
    reflect,
    simple_roots_of,
    weyl_closure,
    weyl_order,
)

A2_POSITIVE = [RatVec.of(1, -1, 0), RatVec.of(0, 1, -1), RatVec.of(1, 0, -1)]
B2_POSITIVE = [RatVec.of(1, 0), RatVec.of(0, 1), RatVec.of(1, 1), RatVec.of(1, -1)]
A3_SIMPLE = [RatVec.of(1, -1, 0, 0), RatVec.of(0, 1, -1, 0), RatVec.of(0, 0, 1, -1)]


@pytest.fixture
def a2():
    return RootSystem.from_positive(3, A2_POSITIVE).validate()


class TestSimpleRoots:

    def test_a2_simple_roots(self):
        assert simple_roots_of(A2_POSITIVE) == (RatVec.of(0, 1, -1), RatVec.of(1, -1, 0))

    def test_b2_simple_roots(self):
        assert set(simple_roots_of(B2_POSITIVE)) == {RatVec.of(0, 1), RatVec.of(1, -1)}

    def test_non_reduced_keeps_indivisible_root(self):
        system = RootSystem.from_positive(1, [RatVec.of(1), RatVec.of(2)]).validate()
        assert system.simple_roots == (RatVec.of(1),)
        assert not system.is_reduced()
        assert system.type_label() == "BC1"

    def test_root_and_negative_both_positive(self):
        with pytest.raises(InputError) as exc:
            simple_roots_of([RatVec.of(1, -1), RatVec.of(-1, 1)])
        assert exc.value.kind == NOT_POSITIVE_SYSTEM


class TestRootSystem:

    def test_positive_roots_ordered_by_height(self, a2):
        assert a2.positive_roots[-1] == RatVec.of(1, 0, -1)
        assert len(a2.roots) == 6

    def test_cartan_matrix(self, a2):
        assert a2.cartan_matrix() == [[2, -1], [-1, 2]]

    @pytest.mark.parametrize("positive, dim, label", [
        (A2_POSITIVE, 3, "A2"),
        (B2_POSITIVE, 2, "C2"),
        ([RatVec.of(1, 0), RatVec.of(0, 1)], 2, "A1xA1"),
        ([], 2, "A0"),
    ])
    def test_type_labels(self, positive, dim, label):
        assert RootSystem.from_positive(dim, positive).type_label() == label

    def test_not_closed_under_reflection(self):
        system = RootSystem.from_positive(2, [RatVec.of(1, 0), RatVec.of(1, 1)])
        with pytest.raises(InputError) as exc:
            system.validate()
        assert exc.value.kind == NOT_A_ROOT_SYSTEM

    def test_zero_multiplicity_rejected(self):
        system = RootSystem.from_positive(1, [RatVec.of(1)], mult={RatVec.of(1): 0})
        with pytest.raises(InputError) as exc:
            system.validate()
        assert exc.value.kind == NOT_A_ROOT_SYSTEM

    def test_from_roots_rejects_mixed_signs(self):
        roots = A2_POSITIVE + [-r for r in A2_POSITIVE]
        with pytest.raises(InputError) as exc:
            RootSystem.from_roots(3, roots, [RatVec.of(1, -1, 0), RatVec.of(1, 0, -1)])
        assert exc.value.kind == NOT_POSITIVE_SYSTEM

    def test_from_roots_splits_by_simple_system(self, a2):
        roots = A2_POSITIVE + [-r for r in A2_POSITIVE]
        system = RootSystem.from_roots(3, roots, a2.simple_roots)
        assert set(system.positive_roots) == set(A2_POSITIVE)

    def test_coefficients(self, a2):
        assert a2.coefficients(RatVec.of(1, 0, -1)) == (1, 1)
        assert a2.coefficients(RatVec.of(1, 1, 1)) is None


class TestWeylGroup:

    @pytest.mark.parametrize("simple, order", [
        ([RatVec.of(1, -1, 0), RatVec.of(0, 1, -1)], 6),
        ([RatVec.of(1, -1), RatVec.of(0, 1)], 8),
        ([RatVec.of(1, -1), RatVec.of(0, 2)], 8),
        (A3_SIMPLE, 24),
        ([RatVec.of(1, 0), RatVec.of(0, 1)], 4),
        ([], 1),
    ])
    def test_orders(self, simple, order):
        assert weyl_order(simple, 2 if not simple else None) == order

    def test_closure_lists_every_element(self, a2):
        group = weyl_closure(a2.simple_roots)
        assert len(group.elements) == 6
        assert len({w.perm for w in group.elements}) == 6

    def test_reflection_action(self, a2):
        group = a2.weyl_group()
        s = group.element_from_word([1])
        assert s.apply(RatVec.of(1, 0, 0)) == reflect(RatVec.of(1, -1, 0), RatVec.of(1, 0, 0))
        assert s.apply(RatVec.of(1, 0, 0)) == RatVec.of(0, 1, 0)
        # identity on the orthogonal complement of the root span
        assert s.apply(RatVec.of(1, 1, 1)) == RatVec.of(1, 1, 1)

    def test_words_and_inverses(self, a2):
        group = a2.weyl_group()
        w = group.element_from_word([0, 1])
        assert w.label == "s1s2"
        assert w.inverse().label == "s2s1"
        assert (w * w.inverse()).is_identity()
        assert (group.generators[0] * group.generators[0]).is_identity()
        assert group.identity.label == "e"

    def test_minimal_coset_reps_match_filtered_group(self):
        group = weyl_closure(A3_SIMPLE)
        sub = [A3_SIMPLE[0], A3_SIMPLE[2]]
        reps = group.minimal_coset_representatives(sub)
        expected = {
            w.perm for w in group.elements
            if all(group.positive[w.perm[group.index[b]]] for b in sub)
        }
        assert {w.perm for w in reps} == expected
        assert len(reps) * weyl_order(sub, 4) == weyl_order(A3_SIMPLE)

    def test_reps_are_sorted_by_length(self, a2):
        reps = a2.weyl_group().minimal_coset_representatives(())
        lengths = [len(w.word) for w in reps]
        assert lengths == sorted(lengths)
        assert reps[0].is_identity()

    def test_size_cap(self, a2):
        group = WeylGroup(3, a2.simple_roots, size_cap=2)
        with pytest.raises(InputError) as exc:
            group.elements
        assert exc.value.kind == SIZE_CAP_EXCEEDED
        with pytest.raises(InputError):
            group.minimal_coset_representatives((), cap=2)

    def test_subsystem_root_must_belong_to_group(self, a2):
        group = a2.weyl_group()
        with pytest.raises(InputError) as exc:
            group.minimal_coset_representatives([RatVec.of(1, 1, -2)])
        assert exc.value.kind == NOT_A_ROOT_SYSTEM


class TestChamberTest:

    def test_dominant_probe_is_strictly_dominant(self, a2):
        probe = dominance_probe(a2.positive_roots, 3)
        group = a2.weyl_group()
        assert probe == RatVec.of(2, 0, -2)
        assert chamber_test(group.identity, probe, a2.simple_roots)
        assert not chamber_test(group.element_from_word([1]), probe, a2.simple_roots)

    def test_weak_chamber_accepts_walls(self, a2):
        group = a2.weyl_group()
        on_wall = RatVec.of(1, 1, 0)
        assert not chamber_test(group.identity, on_wall, a2.simple_roots, strict=True)
        assert chamber_test(group.identity, on_wall, a2.simple_roots, strict=False)
