"""Descendent systems, involution checks, coset transversals and rho^w."""

from math import comb

import pytest
from sympy import Rational

from app.errors import (
    DIMENSION_MISMATCH,
    INVOLUTION_INVALID,
    PARITY_VIOLATION,
    SIZE_CAP_EXCEEDED,
    InputError,
)
from app.families import FamilySpec, instantiate
from app.linalg import RatVec, solve_in_span
from app.sympair import (
    InvolutionData,
    RootDatumG,
    build_descendent,
    check_cone_inclusions,
    coset_transversal,
    fixed_cocharacter_lattice,
    half_sums,
    relative_test_characters,
    theta_minus_permutation,
    validate_involution,
)
from tests.conftest import half


def _pair(family, **params):
    return instantiate(FamilySpec(family=family, params=params))


def _a1_datum():
    return RootDatumG.create(2, [(1, -1), (-1, 1)], [(1, -1)])


class TestRootDatum:

    def test_negatives_required(self):
        with pytest.raises(InputError):
            RootDatumG.create(2, [(1, -1)], [(1, -1)])

    def test_dimension_checked(self):
        with pytest.raises(InputError) as exc:
            RootDatumG.create(2, [(1, -1, 0), (-1, 1, 0)], [(1, -1, 0)])
        assert exc.value.kind == DIMENSION_MISMATCH

    def test_simple_root_must_be_a_root(self):
        with pytest.raises(InputError):
            RootDatumG.create(2, [(1, -1), (-1, 1)], [(1, 1)])


class TestInvolutionValidation:

    def test_trace_parity(self):
        inv = InvolutionData.create([[1, 0], [0, 1]], {(1, -1): 0, (-1, 1): 0})
        with pytest.raises(InputError) as exc:
            validate_involution(_a1_datum(), inv)
        assert exc.value.kind == PARITY_VIOLATION

    def test_trace_larger_than_multiplicity(self):
        inv = InvolutionData.create([[1, 0], [0, 1]], {(1, -1): 3, (-1, 1): 3})
        with pytest.raises(InputError) as exc:
            validate_involution(_a1_datum(), inv)
        assert exc.value.kind == PARITY_VIOLATION

    @pytest.mark.parametrize("theta", [
        [[1, 1], [0, 1]],       # not an involution
        [[1, 0], [1, -1]],      # involution, not orthogonal
        [[-1, 0], [0, 1]],      # maps the root to a non-root
    ])
    def test_bad_theta(self, theta):
        with pytest.raises(InputError) as exc:
            validate_involution(_a1_datum(), InvolutionData.create(theta))
        assert exc.value.kind == INVOLUTION_INVALID

    def test_missing_trace_on_fixed_root(self):
        with pytest.raises(InputError) as exc:
            validate_involution(_a1_datum(), InvolutionData.create([[1, 0], [0, 1]]))
        assert exc.value.kind == INVOLUTION_INVALID
        assert exc.value.details["missing"]

    def test_trace_on_non_fixed_root(self):
        inv = InvolutionData.create([[0, 1], [1, 0]], {(1, -1): 1})
        with pytest.raises(InputError) as exc:
            validate_involution(_a1_datum(), inv)
        assert exc.value.kind == INVOLUTION_INVALID

    def test_wrong_shape(self):
        with pytest.raises(InputError) as exc:
            validate_involution(_a1_datum(), InvolutionData.create([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
        assert exc.value.kind == DIMENSION_MISMATCH

    def test_family_pairs_validate(self):
        for family, params in [
            ("gl_orthogonal", {"n": 4, "r": 2}),
            ("sp_unitary", {"n": 3}),
            ("unitary_orthogonal", {"n": 5, "r": 2}),
            ("gl2n_gln_E", {"n": 2}),
            ("group_case", {"cartan_type": "B", "n": 2}),
        ]:
            validate_involution(*_pair(family, **params))


class TestDescendentSystem:

    def test_gl4_split_orthogonal(self):
        ds = build_descendent(*_pair("gl_orthogonal", n=4, r=2))
        assert ds.restricted.type_label() == "C2"
        assert ds.simple == (half(1, -1, 1, -1), RatVec.of(0, 1, -1, 0))
        assert ds.h_system.type_label() == "A1xA1"
        assert ds.theta_minus == ()
        assert ds.restriction_map == {0: 0, 1: 1, 2: 0}

    def test_gl3_non_reduced(self):
        ds = build_descendent(*_pair("gl_orthogonal", n=3, r=1))
        eta = half(1, 0, -1)
        assert ds.restricted.type_label() == "BC1"
        assert ds.simple == (eta,)
        assert (ds.MG[eta], ds.MH[eta], ds.m_theta[eta]) == (2, 1, 0)
        assert (ds.MG[eta * 2], ds.MH[eta * 2], ds.m_theta[eta * 2]) == (1, 0, -1)
        assert len(ds.fibers[eta]) == 2

    def test_multiplicity_identity(self):
        # M^H = (M^G + m_theta) / 2 on every restricted root
        ds = build_descendent(*_pair("sp_unitary", n=4))
        for alpha in ds.restricted.roots:
            assert 2 * ds.MH[alpha] == ds.MG[alpha] + ds.m_theta[alpha]

    def test_theta_minus_block(self):
        ds = build_descendent(*_pair("gl_orthogonal", n=4, r=1))
        assert ds.theta_minus == (1,)
        assert ds.restriction_map == {0: 0, 2: 0}

    def test_anisotropic_pair(self):
        ds = build_descendent(*_pair("gl2n_gln_E", n=1))
        assert ds.anisotropic
        assert ds.restricted.type_label() == "A0"

    def test_half_sums(self):
        ds = build_descendent(*_pair("gl_orthogonal", n=3, r=1))
        rho_G, rho_plus, rho_H = half_sums(ds)
        assert rho_G == RatVec.of(1, 0, -1)
        assert rho_plus == RatVec.of(1, 0, -1)
        assert rho_H == RatVec.of(Rational(1, 4), 0, Rational(-1, 4))

    def test_fixed_cocharacters(self):
        assert fixed_cocharacter_lattice(*_pair("gl_orthogonal", n=2, r=1)) == [(1, -1)]
        assert fixed_cocharacter_lattice(*_pair("galois_doubling", cartan_type="A", n=1)) == [(1, 0), (0, 1)]


class TestThetaPermutation:

    def test_outer_simple_roots_swap(self):
        assert theta_minus_permutation(*_pair("gl_orthogonal", n=4, r=2)) == {0: 2, 1: 1, 2: 0}

    def test_across_a_theta_minus_block(self):
        assert theta_minus_permutation(*_pair("gl_orthogonal", n=4, r=1)) == {0: 2, 2: 0}

    def test_trivial_when_theta_fixes_a0(self):
        perm = theta_minus_permutation(*_pair("sp_gln", n=2))
        assert perm == {0: 0, 1: 1}


class TestTransversal:

    @pytest.mark.parametrize("family, params, size", [
        ("gl_orthogonal", {"n": 4, "r": 2}, 2),
        ("gl_orthogonal", {"n": 3, "r": 1}, 1),
        ("gl_orthogonal", {"n": 2, "r": 1}, 2),
        ("gl_linear", {"n1": 1, "n2": 1}, 2),
        ("gl_linear", {"n1": 2, "n2": 2}, 6),
        ("gl_linear", {"n1": 2, "n2": 3}, 10),
        ("galois_doubling", {"cartan_type": "C", "n": 2}, 1),
        ("unitary_orthogonal", {"n": 4, "r": 2}, 2),
        ("unitary_orthogonal", {"n": 5, "r": 2}, 1),
    ])
    def test_sizes(self, family, params, size):
        ds = build_descendent(*_pair(family, **params))
        reps = coset_transversal(ds)
        assert len(reps.transversal) == size
        assert len(reps.transversal) * reps.WH.order == reps.WGH.order

    def test_labels_and_orders(self):
        ds = build_descendent(*_pair("gl_orthogonal", n=4, r=2))
        reps = coset_transversal(ds)
        assert [w.label for w in reps.transversal] == ["e", "s2"]
        assert (reps.WGH.order, reps.WH.order) == (8, 4)
        assert reps.transversal[0] == reps.identity

    @pytest.mark.parametrize("family, params", [
        ("gl_linear", {"n1": 2, "n2": 3}),
        ("gl_orthogonal", {"n": 6, "r": 3}),
        ("sp_gln", {"n": 3}),
    ])
    def test_ordered_by_length_then_matrix(self, family, params):
        reps = coset_transversal(build_descendent(*_pair(family, **params)))
        keys = [(len(w.word), tuple(w.matrix)) for w in reps.transversal]
        assert keys == sorted(keys)
        assert reps.transversal[0].is_identity()

    def test_representatives_keep_h_simple_roots_positive(self):
        ds = build_descendent(*_pair("gl_linear", n1=2, n2=3))
        reps = coset_transversal(ds)
        for w in reps.transversal:
            for beta in ds.h_simple:
                assert ds.restricted.is_positive(w.image(beta))
        check_cone_inclusions(ds, reps)

    def test_size_cap(self):
        ds = build_descendent(*_pair("gl_linear", n1=2, n2=2))
        with pytest.raises(InputError) as exc:
            coset_transversal(ds, size_cap=3)
        assert exc.value.kind == SIZE_CAP_EXCEEDED


class TestRelativeCharacters:

    def _characters(self, family, **params):
        ds = build_descendent(*_pair(family, **params))
        reps = coset_transversal(ds)
        return ds, reps, relative_test_characters(ds, reps)

    def test_gl4_split_orthogonal(self):
        ds, reps, rho = self._characters("gl_orthogonal", n=4, r=2)
        for w in reps.transversal:
            assert rho[w] == half(1, 1, -1, -1)
            assert solve_in_span(rho[w], ds.simple) == (1, 1)

    def test_gl3_single_coset(self):
        ds, reps, rho = self._characters("gl_orthogonal", n=3, r=1)
        assert rho[reps.identity] == half(1, 0, -1)

    def test_trace_formula(self):
        ds, reps, rho = self._characters("gl_linear", n1=2, n2=2)
        for w in reps.transversal:
            w_inv = w.inverse()
            total = RatVec.zero(ds.dim)
            for alpha in ds.restricted.positive_roots:
                total = total + alpha * ds.m_theta[w_inv.image(alpha)]
            assert rho[w] == total * Rational(-1, 2)

    @pytest.mark.parametrize("n1, n2", [(1, 1), (1, 2), (2, 2), (2, 3), (1, 4)])
    def test_shuffle_closed_form(self, n1, n2):
        # coefficient of the k-th simple root: k(N-k)/2 - e(n1-e) - (k-e)(n2-k+e),
        # e = number of first-block positions sent to {1..k}
        N = n1 + n2
        ds, reps, rho = self._characters("gl_linear", n1=n1, n2=n2)
        assert len(reps.transversal) == comb(N, n1)
        for w in reps.transversal:
            positions = [
                next(j for j, x in enumerate(w.apply(RatVec.unit(i, N))) if x == 1) + 1
                for i in range(N)
            ]
            for k in range(1, N):
                e = sum(1 for p in positions[:n1] if p <= k)
                expected = Rational(k * (N - k), 2) - e * (n1 - e) - (k - e) * (n2 - (k - e))
                assert sum(rho[w][:k]) == expected

    def test_gl22_has_a_wall(self):
        ds, reps, rho = self._characters("gl_linear", n1=2, n2=2)
        assert rho[reps.identity] == half(1, 3, -3, -1)
        coefficients = {solve_in_span(rho[w], ds.simple) for w in reps.transversal}
        assert (Rational(1, 2), 2, Rational(1, 2)) in coefficients
        assert (Rational(1, 2), 0, Rational(1, 2)) in coefficients

    def test_group_case_characters_vanish(self):
        ds, reps, rho = self._characters("group_case", cartan_type="A", n=2)
        assert [w.label for w in reps.transversal] == ["e"]
        assert rho[reps.identity].is_zero()
