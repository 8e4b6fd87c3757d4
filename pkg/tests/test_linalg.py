"""Exact vectors, span solves and integer lattices."""

import itertools

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st
from sympy import ImmutableMatrix, Matrix, Rational

from app.errors import (
    DEPENDENT_GENERATORS,
    DIMENSION_MISMATCH,
    INFINITE_INDEX,
    INVOLUTION_INVALID,
    SCHEMA_INVALID,
    InputError,
)
from app.linalg import (
    RatVec,
    eigenprojection,
    format_rational,
    hermite_basis,
    int_matrix,
    integer_echelon,
    integer_kernel_basis,
    lattice_contains,
    lattice_coordinates,
    lattice_quotient,
    orthogonal_split,
    parse_rational,
    projection_coefficients,
    require_involution,
    solve_in_span,
)


class TestRationals:

    @pytest.mark.parametrize("raw, expected", [
        (3, Rational(3)),
        ("-7", Rational(-7)),
        ("3/6", Rational(1, 2)),
        (" 2/3 ", Rational(2, 3)),
    ])
    def test_parse_accepts_exact_forms(self, raw, expected):
        assert parse_rational(raw) == expected

    @pytest.mark.parametrize("raw", [0.5, True, "abc", None, [1]])
    def test_parse_rejects_inexact_or_garbage(self, raw):
        with pytest.raises(InputError) as exc:
            parse_rational(raw)
        assert exc.value.kind == SCHEMA_INVALID

    def test_format_is_canonical(self):
        assert format_rational(Rational(4, 8)) == "1/2"
        assert format_rational(Rational(-6, 3)) == "-2"


class TestRatVec:

    def test_arithmetic_is_exact(self):
        v = RatVec.of(1, "1/2")
        w = RatVec.of("1/3", 0)
        assert v + w == RatVec.of("4/3", "1/2")
        assert v - w == RatVec.of("2/3", "1/2")
        assert 2 * v == RatVec.of(2, 1)
        assert v / 2 == RatVec.of("1/2", "1/4")
        assert v.dot(w) == Rational(1, 3)
        assert -v == RatVec.of(-1, "-1/2")

    def test_dimension_mismatch_raises(self):
        with pytest.raises(InputError) as exc:
            RatVec.of(1, 2) + RatVec.of(1, 2, 3)
        assert exc.value.kind == DIMENSION_MISMATCH

    def test_integrality(self):
        assert RatVec.of(2, -1).as_ints() == (2, -1)
        assert not RatVec.of("1/2", 0).is_integral()
        with pytest.raises(InputError):
            RatVec.of("1/2", 0).as_ints()

    def test_hashable_and_equal_by_value(self):
        assert {RatVec.of("2/4"): 1}[RatVec.of("1/2")] == 1

    def test_string_rendering(self):
        assert RatVec.of(1, "-1/2").to_strings() == ["1", "-1/2"]
        assert str(RatVec.of(0, 3)) == "(0, 3)"


class TestInvolutions:

    def test_swap_symmetrizes(self):
        swap = int_matrix([[0, 1], [1, 0]])
        assert eigenprojection(RatVec.of(1, 0), swap, 1) == RatVec.of("1/2", "1/2")
        assert eigenprojection(RatVec.of(1, 0), swap, -1) == RatVec.of("1/2", "-1/2")

    def test_projections_add_up(self):
        theta = int_matrix([[0, 0, -1], [0, -1, 0], [-1, 0, 0]])
        v = RatVec.of(3, -2, 5)
        assert eigenprojection(v, theta, 1) + eigenprojection(v, theta, -1) == v

    def test_non_involution_rejected(self):
        with pytest.raises(InputError) as exc:
            require_involution(int_matrix([[1, 1], [0, 1]]))
        assert exc.value.kind == INVOLUTION_INVALID

    def test_non_square_rejected(self):
        with pytest.raises(InputError) as exc:
            require_involution(ImmutableMatrix([[1, 0, 0], [0, 1, 0]]))
        assert exc.value.kind == DIMENSION_MISMATCH

    def test_non_integer_entries_rejected(self):
        with pytest.raises(InputError):
            int_matrix([[1, 0.5], [0, 1]])


class TestSpanSolves:

    def test_unique_coefficients(self):
        gens = [RatVec.of(1, -1, 0), RatVec.of(0, 1, -1)]
        assert solve_in_span(RatVec.of(1, 0, -1), gens) == (1, 1)

    def test_outside_span_returns_none(self):
        gens = [RatVec.of(1, -1, 0), RatVec.of(0, 1, -1)]
        assert solve_in_span(RatVec.of(1, 1, 1), gens) is None

    def test_orthogonal_split_isolates_central_part(self):
        gens = [RatVec.of(1, -1)]
        inside, rest = orthogonal_split(RatVec.of(2, 0), gens)
        assert inside == RatVec.of(1, -1)
        assert rest == RatVec.of(1, 1)

    def test_projection_coefficients_on_partial_span(self):
        coeffs, rest = projection_coefficients(RatVec.of(3, 1), [RatVec.of(1, -1)])
        assert coeffs == (1,)
        assert rest == RatVec.of(2, 2)

    def test_dependent_generators_raise(self):
        with pytest.raises(InputError) as exc:
            solve_in_span(RatVec.of(1, 0), [RatVec.of(1, 1), RatVec.of(2, 2)])
        assert exc.value.kind == DEPENDENT_GENERATORS

    def test_empty_span(self):
        assert solve_in_span(RatVec.of(0, 0), []) == ()
        assert solve_in_span(RatVec.of(1, 0), []) is None


class TestLattices:

    def test_echelon_carries_transforms(self):
        rows = [[2, 4, 1, 0], [1, 3, 0, 1]]
        echelon, vanished = integer_echelon(rows, 2)
        assert not vanished
        for row in echelon:
            # the augmented part reproduces the row from the originals
            combo = [row[2] * a + row[3] * b for a, b in zip(rows[0][:2], rows[1][:2])]
            assert combo == [int(x) for x in row[:2]]
        assert [int(x) for x in echelon[0][:2]] == [1, 1]
        assert [int(x) for x in echelon[1][:2]] == [0, 2]

    def test_hermite_basis_of_checkerboard(self):
        assert hermite_basis([(1, 1), (1, -1)], 2) == [(1, 1), (0, 2)]

    def test_coordinates_and_membership(self):
        basis = hermite_basis([(1, 1), (1, -1)], 2)
        assert lattice_coordinates(basis, (3, 1)) == [3, -1]
        assert lattice_contains(basis, (2, 0))
        assert not lattice_contains(basis, (1, 0))
        assert not lattice_contains(basis, (Rational(1, 2), Rational(1, 2)))

    def test_kernel_is_saturated(self):
        # x - y = 0 in Z^3: kernel spanned by (1, 1, 0) and (0, 0, 1)
        kernel = integer_kernel_basis([[1, -1, 0]])
        assert len(kernel) == 2
        assert lattice_contains(kernel, (1, 1, 0))
        assert lattice_contains(kernel, (0, 0, 1))
        assert not lattice_contains(kernel, (1, 0, 0))

    def test_kernel_of_doubled_row_is_saturated(self):
        kernel = integer_kernel_basis([[2, -2]])
        assert kernel == [(1, 1)]

    def test_empty_matrix_kernel_is_everything(self):
        assert integer_kernel_basis([], 2) == [(1, 0), (0, 1)]

    def test_quotient_index_and_transversal(self):
        quotient = lattice_quotient(2, [(2, 0), (0, 3)])
        assert quotient.index == 6
        assert len(set(quotient.transversal)) == 6
        assert quotient.reduce((5, -4)) == (1, 2)
        assert quotient.contains((4, 9))

    def test_quotient_of_checkerboard(self):
        quotient = lattice_quotient(2, [(1, 1), (1, -1)])
        assert quotient.index == 2
        assert not quotient.contains((1, 0))

    def test_rank_deficient_sublattice_has_infinite_index(self):
        with pytest.raises(InputError) as exc:
            lattice_quotient(2, [(1, 1), (2, 2)])
        assert exc.value.kind == INFINITE_INDEX


@st.composite
def full_rank_sublattices(draw):
    rank = draw(st.integers(2, 3))
    row = st.lists(st.integers(-3, 3), min_size=rank, max_size=rank)
    generators = draw(st.lists(row, min_size=rank, max_size=rank))
    assume(Matrix(generators).det() != 0)
    return rank, generators


class TestLatticeQuotientBox:

    @settings(
        max_examples=20,
        derandomize=True,
        deadline=None,
        suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow, HealthCheck.filter_too_much],
    )
    @given(sublattice=full_rank_sublattices())
    def test_box_points_meet_exactly_one_representative(self, sublattice):
        rank, generators = sublattice
        quotient = lattice_quotient(rank, generators)
        assert quotient.index == abs(Matrix(generators).det())

        representatives = set(quotient.transversal)
        for t in quotient.transversal:
            assert quotient.reduce(t) == t
        for t1, t2 in itertools.combinations(quotient.transversal, 2):
            assert not quotient.contains(tuple(a - b for a, b in zip(t1, t2)))

        for x in itertools.product(range(-6, 7), repeat=rank):
            r = quotient.reduce(x)
            assert r in representatives
            assert quotient.contains(tuple(a - b for a, b in zip(x, r)))
