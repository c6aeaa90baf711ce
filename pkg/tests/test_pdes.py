"""The explicit invariant equations, their evaluations, and the verifiers."""

import random
from fractions import Fraction
from itertools import permutations
from math import comb

import pytest

from contactpde.errors import PreconditionError
from contactpde.minorpoly import (
    GaussianRational,
    IMAG_UNIT,
    MinorPolynomial,
    SymmetricMatrix,
    variable_pairs,
)
from contactpde.pdes import (
    B3Data,
    BinaryForm,
    SymplecticFrame,
    b3_data,
    chow_transform_g2,
    evaluate_q,
    evaluate_qn,
    pde_type_A,
    pde_type_D,
    principal_minor_trace,
    subadjoint_degree,
    sylvester_resultant,
    verify_b3_membership,
    verify_invariance,
    SUBADJOINT_FORMULAS,
)
from contactpde.rootsys import CartanType


def _ct(name):
    return CartanType.parse(name)


def _rand_sym(n, rng, lo=-9, hi=9):
    vals = {p: rng.randint(lo, hi) for p in variable_pairs(n)}
    return SymmetricMatrix.from_upper(n, vals)


class TestTypeA:
    def test_n1(self):
        assert pde_type_A(1).to_text() == "u11"

    def test_n2(self):
        assert pde_type_A(2).to_text() == "u11*u22 - u12^2"

    def test_n3_expansion(self):
        p = pde_type_A(3)
        # six signed permutation products collapse to five monomials in the
        # symmetric chart; the two odd 3-cycles coincide
        signed = 0
        for perm in permutations(range(3)):
            signed += 1
        assert signed == 6
        assert len(p.terms) == 5
        assert p.terms[(0, 1, 1, 0, 1, 0)] == 2
        ident = SymmetricMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert p.evaluate(ident) == 1

    def test_matches_numeric_determinant(self):
        rng = random.Random(4)
        p = pde_type_A(3)
        for _ in range(5):
            m = _rand_sym(3, rng)
            rows = [[Fraction(m.entry(i + 1, j + 1)) for j in range(3)]
                    for i in range(3)]
            det = (
                rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
            )
            assert p.evaluate(m) == det

    def test_pluecker_degree_one(self):
        assert pde_type_A(2).pluecker_degree == 1

    def test_rejects_nonpositive(self):
        with pytest.raises(PreconditionError):
            pde_type_A(0)


class TestPrincipalMinorTrace:
    def test_order_zero_is_one(self):
        assert principal_minor_trace(3, 0) == MinorPolynomial.constant(3, 1)
        m = SymmetricMatrix([[2, 1], [1, 2]])
        assert principal_minor_trace(m, 0) == 1

    def test_order_one_is_trace(self):
        t = principal_minor_trace(3, 1)
        expected = sum(
            (MinorPolynomial.variable(3, i, i) for i in (2, 3)),
            MinorPolynomial.variable(3, 1, 1),
        )
        assert t == expected

    def test_top_order_is_determinant(self):
        assert principal_minor_trace(2, 2) == pde_type_A(2)
        assert principal_minor_trace(4, 4) == pde_type_A(4)

    def test_order_n_minus_one_is_cofactor_trace(self):
        rng = random.Random(11)
        m = _rand_sym(3, rng)
        rows = [[Fraction(m.entry(i + 1, j + 1)) for j in range(3)]
                for i in range(3)]
        cof_trace = sum(
            rows[(k + 1) % 3][(k + 1) % 3] * rows[(k + 2) % 3][(k + 2) % 3]
            - rows[(k + 1) % 3][(k + 2) % 3] * rows[(k + 2) % 3][(k + 1) % 3]
            for k in range(3)
        )
        assert principal_minor_trace(m, 2) == cof_trace

    def test_symbolic_matches_numeric(self):
        rng = random.Random(23)
        for _ in range(3):
            m = _rand_sym(3, rng)
            for i in range(4):
                assert principal_minor_trace(3, i).evaluate(m) == \
                    principal_minor_trace(m, i)

    def test_out_of_range_rejected(self):
        with pytest.raises(PreconditionError):
            principal_minor_trace(3, 4)
        with pytest.raises(PreconditionError):
            principal_minor_trace(3, -1)
        with pytest.raises(PreconditionError):
            principal_minor_trace(SymmetricMatrix([[1]]), 2)


class TestTypeD:
    def test_n4_closed_form_identity(self):
        t = [principal_minor_trace(4, i) for i in range(5)]
        rhs = 2 * (t[4] - 4 * (t[1] * t[3]) + 3 * (t[2] * t[2]))
        assert pde_type_D(4) == rhs

    def test_n4_at_identity(self):
        ident = SymmetricMatrix([[int(i == j) for j in range(4)] for i in range(4)])
        expected = sum(
            (-1) ** i * comb(4, i) * comb(4, i) * comb(4, 4 - i) for i in range(5)
        )
        assert pde_type_D(4).evaluate(ident) == expected == 90

    def test_pluecker_degree_two(self):
        assert pde_type_D(4).pluecker_degree == 2

    @pytest.mark.slow
    def test_n6_against_defining_sum(self):
        p = pde_type_D(6)
        rng = random.Random(6)
        for _ in range(3):
            m = _rand_sym(6, rng, lo=-4, hi=4)
            expected = sum(
                (-1) ** i * comb(6, i)
                * principal_minor_trace(m, i) * principal_minor_trace(m, 6 - i)
                for i in range(7)
            )
            assert p.evaluate(m) == expected

    def test_odd_and_small_rejected(self):
        for bad in (5, 3, 2, 0):
            with pytest.raises(PreconditionError):
                pde_type_D(bad)


class TestEvaluateQ:
    def test_all_arguments_equal_vanishes(self):
        v = ((1, 2), (3, 4, 5))
        assert evaluate_q(v, v, v, v) == GaussianRational(0)

    def test_orthonormal_quadruple_bracket_values(self):
        e1, e2 = (1, 0, 0), (0, 1, 0)
        up, down = (1, 0), (0, 1)
        # e-parts paired 1-3 / 2-4 give the +1 branch of the bracket
        assert evaluate_q((up, e1), (down, e2), (up, e1), (down, e2),
                          symmetrize=False) == GaussianRational(1)
        # paired 1-4 / 2-3 give the -1 branch
        assert evaluate_q((up, e1), (down, e2), (up, e2), (down, e1),
                          symmetrize=False) == GaussianRational(-1)

    def test_symmetrized_value_permutation_invariant(self):
        args = [((1, 2), (1, 0, 3)), ((0, 1), (2, 1, 1)),
                ((1, 1), (0, 2, 1)), ((2, 3), (1, 1, 1))]
        base = evaluate_q(*args)
        for perm in permutations(range(4)):
            assert evaluate_q(*(args[k] for k in perm)) == base

    def test_multilinear_in_each_slot(self):
        a = ((1, 2), (1, 0))
        b = ((2, 1), (0, 1))
        doubled = ((2, 4), (1, 0))
        assert evaluate_q(doubled, b, a, b) == 2 * evaluate_q(a, b, a, b)

    def test_flat_vectors_accepted(self):
        # (xi0*e, xi1*e) laid out as the 2n-coordinate row pair
        pure = ((1, 2), (1, 1))
        flat = (1, 1, 2, 2)
        assert evaluate_q(pure, pure, pure, pure) == \
            evaluate_q(flat, flat, flat, flat)

    def test_complex_entries(self):
        v = ((1, IMAG_UNIT), (1, 0))
        w = ((0, 1), (0, 1))
        val = evaluate_q(v, w, v, w, symmetrize=False)
        assert val == GaussianRational(1)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(PreconditionError):
            evaluate_q(((1, 0), (1, 0)), ((1, 0), (1, 0, 0)),
                       ((1, 0), (1, 0)), ((1, 0), (1, 0)))


class TestSymplecticFrame:
    def test_diagonal_frames_are_lagrangian(self):
        fr = SymplecticFrame.diagonal([(1, 2), (3, 4), (5, 6)])
        assert fr.n == 3
        assert fr.is_lagrangian()

    def test_non_lagrangian_detected(self):
        # <e1> x <e1> spans a symplectically nondegenerate pair
        fr = SymplecticFrame.from_vectors([(1, 0, 0, 0), (0, 0, 1, 0)])
        assert not fr.is_lagrangian()
        with pytest.raises(PreconditionError):
            evaluate_qn(fr)

    def test_wrong_vector_count_rejected(self):
        with pytest.raises(PreconditionError):
            SymplecticFrame.from_vectors([(1, 0, 0, 0, 0, 0)])

    def test_symplectic_product(self):
        fr = SymplecticFrame.from_vectors([(1, 0, 0, 0), (0, 0, 1, 0)])
        assert fr.symplectic_product(0, 1) == GaussianRational(1)


class TestEvaluateQn:
    def test_all_xi_equal_vanishes(self):
        fr = SymplecticFrame.diagonal([(1, 1)] * 3)
        assert evaluate_qn(fr) == GaussianRational(0)

    def test_fast_equals_general_n3(self):
        fr = SymplecticFrame.diagonal([(1, 2), (3, 1), (2, 5)])
        assert evaluate_qn(fr, method="diagonal") == \
            evaluate_qn(fr, method="general")

    def test_fast_equals_general_n4(self):
        fr = SymplecticFrame.diagonal([(1, 2), (3, 1), (2, 5), (1, -1)])
        assert evaluate_qn(fr, method="diagonal") == \
            evaluate_qn(fr, method="general")

    def test_fast_equals_general_random(self):
        rng = random.Random(17)
        for n in (3, 4):
            xis = [(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(n)]
            fr = SymplecticFrame.diagonal(xis)
            assert evaluate_qn(fr, method="diagonal") == \
                evaluate_qn(fr, method="general")

    def test_sign_normalized_positivity(self):
        rng = random.Random(29)
        for n in (3, 4):
            for _ in range(4):
                while True:
                    xis = [(Fraction(rng.randint(-6, 6)),
                            Fraction(rng.randint(-6, 6))) for _ in range(n)]
                    eps = [xis[i][0] * xis[j][1] - xis[i][1] * xis[j][0]
                           for i in range(n) for j in range(i + 1, n)]
                    if all(e != 0 for e in eps):
                        break
                val = evaluate_qn(SymplecticFrame.diagonal(xis))
                normalized = val if n % 2 == 0 else -val
                assert normalized.imag == 0
                assert normalized.real > 0

    def test_auto_uses_general_for_non_orthonormal(self):
        # pure tensors on a non-orthonormal spatial basis still Lagrangian
        # when the off-diagonal dot products vanish pairwise
        es = [(2, 0, 0), (0, 1, 0), (0, 0, 1)]
        fr = SymplecticFrame.diagonal([(1, 2), (3, 1), (2, 5)], es)
        assert fr.is_lagrangian()
        assert evaluate_qn(fr) == evaluate_qn(fr, method="general")
        with pytest.raises(PreconditionError):
            evaluate_qn(fr, method="diagonal")

    def test_size_cap(self):
        fr = SymplecticFrame.diagonal([(1, k) for k in range(6)])
        with pytest.raises(PreconditionError):
            evaluate_qn(fr)

    def test_unknown_method_rejected(self):
        fr = SymplecticFrame.diagonal([(1, 2), (3, 1), (2, 5)])
        with pytest.raises(PreconditionError):
            evaluate_qn(fr, method="fastest")


class TestChowTransform:
    def test_equals_printed_quintic(self):
        expected = MinorPolynomial.from_text(
            2,
            "27*u11^2 - u12^2*u22^2 + u11*u22^3 + 16*u12^3 - 18*u11*u12*u22",
        )
        assert chow_transform_g2() == expected

    def test_pluecker_degree_matches_variety_degree(self):
        r = chow_transform_g2()
        assert r.pluecker_degree == 3
        assert r.pluecker_degree == subadjoint_degree(_ct("G2"))

    def test_specialization_u12_u22_zero(self):
        r = chow_transform_g2()
        kept = {m: c for m, c in r.terms.items() if m[1] == 0 and m[2] == 0}
        assert kept == {(2, 0, 0): 27}
        # oracle: resultant of s^3 - u11 t^3 against 3 s^2 directly
        one = MinorPolynomial.constant(2, 1)
        zero = MinorPolynomial.zero(2)
        u11 = MinorPolynomial.variable(2, 1, 1)
        f = BinaryForm(3, (one, zero, zero, -u11))
        g = BinaryForm(2, (MinorPolynomial.constant(2, 3), zero, zero))
        assert sylvester_resultant(f, g) == 27 * (u11 * u11)

    def test_specialization_u11_u22_zero(self):
        r = chow_transform_g2()
        kept = {m: c for m, c in r.terms.items() if m[0] == 0 and m[2] == 0}
        assert kept == {(0, 3, 0): 16}
        one = MinorPolynomial.constant(2, 1)
        zero = MinorPolynomial.zero(2)
        u12 = MinorPolynomial.variable(2, 1, 2)
        f = BinaryForm(3, (one, zero, -u12, zero))
        g = BinaryForm(2, (MinorPolynomial.constant(2, 3), zero, u12))
        assert sylvester_resultant(f, g) == 16 * (u12 ** 3)

    def test_normalized_output(self):
        r = chow_transform_g2()
        assert r.content() == 1
        assert r.terms[r.leading_monomial()] > 0

    def test_binary_form_validation(self):
        with pytest.raises(PreconditionError):
            BinaryForm(2, (MinorPolynomial.zero(2),))


class TestB3Data:
    def test_invariant_shape(self):
        inv = b3_data().invariant
        assert len(inv.terms) == 123
        assert all(sum(m) == 6 for m in inv.terms)
        assert inv.content() == 1
        assert inv.pluecker_degree == 4
        assert inv.pluecker_degree == subadjoint_degree(_ct("B3"))

    def test_printed_first_and_last_terms(self):
        inv = b3_data().invariant
        assert inv.terms[(0, 6, 0, 0, 0, 0)] == 4
        assert inv.terms[(2, 0, 2, 1, 0, 1)] == -10

    def test_scalar_matrices_satisfy_equation(self):
        inv = b3_data().invariant
        for c in (1, 5, Fraction(-2, 3)):
            scal = SymmetricMatrix([[c if i == j else 0 for j in range(3)]
                                    for i in range(3)])
            assert inv.evaluate(scal) == 0

    def test_six_generators_and_quadrics(self):
        data = b3_data()
        assert isinstance(data, B3Data)
        assert len(data.ideal_generators) == 6
        assert len(data.quadrics) == 6

    def test_q1_matches_substitution_by_hand(self):
        u = {(i, j): MinorPolynomial.variable(3, i, j)
             for i in (1, 2, 3) for j in (1, 2, 3) if i <= j}
        expected = {
            (2, 0, 0): u[(1, 2)],
            (1, 1, 0): u[(2, 2)] - u[(1, 1)],
            (1, 0, 1): u[(2, 3)],
            (0, 2, 0): -u[(1, 2)],
            (0, 1, 1): -u[(1, 3)],
        }
        assert b3_data().quadrics[0] == expected

    def test_q4_is_x_dot_ux(self):
        u = {(i, j): MinorPolynomial.variable(3, i, j)
             for i in (1, 2, 3) for j in (1, 2, 3) if i <= j}
        expected = {
            (2, 0, 0): u[(1, 1)],
            (0, 2, 0): u[(2, 2)],
            (0, 0, 2): u[(3, 3)],
            (1, 1, 0): 2 * u[(1, 2)],
            (1, 0, 1): 2 * u[(1, 3)],
            (0, 1, 1): 2 * u[(2, 3)],
        }
        assert b3_data().quadrics[3] == expected

    def test_q5_is_spatial_norm(self):
        one = MinorPolynomial.constant(3, 1)
        expected = {(2, 0, 0): one, (0, 2, 0): one, (0, 0, 2): one}
        assert b3_data().quadrics[4] == expected

    def test_q6_row_norm_expansion(self):
        q6 = b3_data().quadrics[5]
        u = {(i, j): MinorPolynomial.variable(3, min(i, j), max(i, j))
             for i in (1, 2, 3) for j in (1, 2, 3)}
        # coefficient of (x^1)^2 in sum_i (u_i1 x^1 + u_i2 x^2 + u_i3 x^3)^2
        expected_200 = sum(
            (u[(i, 1)] * u[(i, 1)] for i in (2, 3)), u[(1, 1)] * u[(1, 1)]
        )
        expected_110 = sum(
            (2 * (u[(i, 1)] * u[(i, 2)]) for i in (2, 3)),
            2 * (u[(1, 1)] * u[(1, 2)]),
        )
        assert q6[(2, 0, 0)] == expected_200
        assert q6[(1, 1, 0)] == expected_110


class TestMembership:
    def test_conic_parameterization_identity(self):
        for p in (Fraction(0), Fraction(3, 7), Fraction(-11, 2), Fraction(9)):
            z = (1 - p * p) ** 2 + (IMAG_UNIT * (1 + p * p)) ** 2 + (2 * p) ** 2
            assert z == GaussianRational(0)

    def test_small_run_all_zero(self):
        rep = verify_b3_membership(60, seed=3)
        assert rep.samples == 60
        assert rep.on_variety_zeros == 60
        assert rep.off_variety_nonzero == 60
        assert rep.ok

    def test_deterministic_given_seed(self):
        a = verify_b3_membership(25, seed=12)
        b = verify_b3_membership(25, seed=12)
        assert a == b

    def test_rejects_empty_run(self):
        with pytest.raises(PreconditionError):
            verify_b3_membership(0, seed=1)


class TestInvariance:
    def test_d4_orthogonal_generators(self):
        signed_perm = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
        rot = [
            [Fraction(3, 5), Fraction(4, 5), 0, 0],
            [Fraction(-4, 5), Fraction(3, 5), 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]
        rep = verify_invariance(
            pde_type_D(4),
            [("orthogonal", signed_perm), ("orthogonal", rot)],
            samples=6,
            seed=3,
        )
        assert rep.ok
        for action in rep.actions:
            assert action.exponent == 0
            assert action.multiplier == 1

    def test_b3_invariant_fractional_law(self):
        rep = verify_invariance(
            b3_data().invariant,
            [("fractional", 1, 2, 1, 3)],
            samples=5,
            seed=11,
        )
        assert rep.ok
        assert rep.actions[0].exponent == 4
        assert rep.actions[0].multiplier == 1

    def test_determinant_borel_law(self):
        # lower-triangular fractional generators leave the chart hyperplane
        # at infinity fixed, where det obeys a clean multiplier law
        rep = verify_invariance(
            pde_type_A(3),
            [("fractional", 2, 1, 0, Fraction(1, 2))],
            samples=6,
            seed=5,
        )
        assert rep.ok
        assert rep.actions[0].exponent == 1
        assert rep.actions[0].multiplier == Fraction(1, 8)

    def test_d4_full_fractional_reported_inconsistent(self):
        # the printed quadratic-minor polynomial is orthogonally invariant
        # but obeys no single multiplier law under the full fractional
        # action; the fitter must say so rather than raise
        rep = verify_invariance(
            pde_type_D(4), [("fractional", 1, 2, 1, 3)], samples=5, seed=3
        )
        assert not rep.ok
        assert rep.actions[0].exponent is None

    def test_rejects_non_orthogonal(self):
        with pytest.raises(PreconditionError):
            verify_invariance(
                pde_type_D(4),
                [("orthogonal", [[1, 1, 0, 0], [0, 1, 0, 0],
                                 [0, 0, 1, 0], [0, 0, 0, 1]])],
                samples=3,
                seed=0,
            )

    def test_rejects_non_unimodular(self):
        with pytest.raises(PreconditionError):
            verify_invariance(
                pde_type_A(2), [("fractional", 2, 0, 0, 2)], samples=3, seed=0
            )

    def test_rejects_too_few_samples(self):
        with pytest.raises(PreconditionError):
            verify_invariance(
                pde_type_A(2), [("fractional", 1, 0, 0, 1)], samples=2, seed=0
            )


class TestSubadjointDegree:
    @pytest.mark.parametrize(
        "name,expected",
        [
            ("A2", 2), ("A3", 2), ("A5", 2),
            ("B3", 4), ("B4", 8), ("B5", 12),
            ("D4", 6), ("D5", 10), ("D6", 14),
            ("E6", 42), ("E7", 286), ("E8", 13188),
            ("F4", 16), ("G2", 3),
        ],
    )
    def test_values(self, name, expected):
        assert subadjoint_degree(_ct(name)) == expected

    def test_orthogonal_series_follows_grading(self):
        # degree 2(n-1) read off the contact grading's n
        from contactpde.contact import contact_grading

        for name in ("B3", "B4", "D4", "D5", "D6"):
            ct = _ct(name)
            n = contact_grading(ct).n
            assert subadjoint_degree(ct) == 2 * (n - 1)

    def test_type_c_rejected(self):
        for name in ("C2", "C3", "C4"):
            with pytest.raises(PreconditionError):
                subadjoint_degree(_ct(name))

    def test_degenerate_orthogonal_ranks_rejected(self):
        with pytest.raises(PreconditionError):
            subadjoint_degree(_ct("B2"))
        with pytest.raises(PreconditionError):
            subadjoint_degree(_ct("D3"))

    def test_formula_table_covers_families(self):
        assert set(SUBADJOINT_FORMULAS) == {
            "A", "B", "D", "E6", "E7", "E8", "F4", "G2"
        }
