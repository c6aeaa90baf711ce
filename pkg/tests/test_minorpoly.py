"""Exact arithmetic and canonical-form behavior of the polynomial layer."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactpde.errors import PreconditionError
from contactpde.minorpoly import (
    GaussianRational,
    IMAG_UNIT,
    MinorPolynomial,
    SymmetricMatrix,
    variable_pairs,
)


class TestGaussianRational:
    def test_imag_unit_squares_to_minus_one(self):
        assert IMAG_UNIT * IMAG_UNIT == GaussianRational(-1)

    def test_field_operations(self):
        a = GaussianRational(Fraction(1, 2), Fraction(3, 4))
        b = GaussianRational(2, -1)
        assert (a + b) - b == a
        assert (a * b) / b == a
        assert a * b == b * a
        assert -a + a == GaussianRational(0)

    def test_division_uses_conjugate(self):
        z = GaussianRational(3, 4)
        assert z * z.conjugate() == GaussianRational(25)
        assert GaussianRational(1) / z == GaussianRational(
            Fraction(3, 25), Fraction(-4, 25)
        )

    def test_mixed_arithmetic_with_ints_and_fractions(self):
        z = GaussianRational(1, 1)
        assert 2 * z == GaussianRational(2, 2)
        assert z + Fraction(1, 2) == GaussianRational(Fraction(3, 2), 1)
        assert Fraction(1, 2) - z == GaussianRational(Fraction(-1, 2), -1)

    def test_equality_and_hash_against_rationals(self):
        assert GaussianRational(Fraction(7, 3)) == Fraction(7, 3)
        assert hash(GaussianRational(5)) == hash(5)

    def test_truthiness(self):
        assert not GaussianRational(0)
        assert GaussianRational(0, Fraction(1, 9))

    def test_rejects_floats(self):
        with pytest.raises(PreconditionError):
            GaussianRational.coerce(0.5)


class TestSymmetricMatrix:
    def test_rejects_asymmetric(self):
        with pytest.raises(PreconditionError):
            SymmetricMatrix([[1, 2], [3, 4]])

    def test_rejects_nonsquare(self):
        with pytest.raises(PreconditionError):
            SymmetricMatrix([[1, 2, 3], [2, 1, 0]])

    def test_entry_is_one_based_and_checked(self):
        m = SymmetricMatrix([[1, 2], [2, 5]])
        assert m.entry(1, 2) == 2
        assert m.entry(2, 2) == 5
        with pytest.raises(PreconditionError):
            m.entry(0, 1)
        with pytest.raises(PreconditionError):
            m.entry(1, 3)

    def test_from_upper(self):
        m = SymmetricMatrix.from_upper(2, {(1, 1): 1, (1, 2): -3, (2, 2): 2})
        assert m == SymmetricMatrix([[1, -3], [-3, 2]])


def _poly_strategy(n):
    nvars = n * (n + 1) // 2
    mono = st.tuples(*([st.integers(min_value=0, max_value=3)] * nvars))
    coeff = st.integers(min_value=-40, max_value=40).filter(lambda c: c != 0)
    return st.dictionaries(mono, coeff, min_size=0, max_size=8).map(
        lambda d: MinorPolynomial(n, d)
    )


class TestMinorPolynomial:
    def test_variable_pairs_order(self):
        assert variable_pairs(3) == ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))

    def test_variable_accepts_either_index_order(self):
        assert MinorPolynomial.variable(3, 3, 1) == MinorPolynomial.variable(3, 1, 3)

    def test_zero_coefficients_dropped(self):
        p = MinorPolynomial(2, {(1, 0, 0): 0, (0, 1, 0): 2})
        assert p.terms == {(0, 1, 0): 2}

    def test_ring_identities(self):
        a = MinorPolynomial.variable(2, 1, 1)
        b = MinorPolynomial.variable(2, 1, 2)
        assert (a + b) * (a - b) == a * a - b * b
        assert (a + b) ** 2 == a * a + 2 * (a * b) + b * b
        assert a - a == MinorPolynomial.zero(2)
        assert a * MinorPolynomial.zero(2) == MinorPolynomial.zero(2)

    def test_canonical_order_degree_then_lex(self):
        u11 = MinorPolynomial.variable(2, 1, 1)
        u12 = MinorPolynomial.variable(2, 1, 2)
        u22 = MinorPolynomial.variable(2, 2, 2)
        p = u11 + u12 * u12 + u22
        # the quadratic monomial outranks both linear ones
        assert p.leading_monomial() == (0, 2, 0)
        q = u11 * u22 + u12 * u12
        # same degree: u11-leading exponent vector wins
        assert q.leading_monomial() == (1, 0, 1)

    def test_total_degree(self):
        p = MinorPolynomial(2, {(2, 1, 0): 1, (0, 0, 1): -1})
        assert p.total_degree() == 3

    def test_normalized_content_and_sign(self):
        p = MinorPolynomial(2, {(1, 0, 0): -6, (0, 1, 0): -9}, pluecker_degree=2)
        q = p.normalized()
        assert q.terms == {(1, 0, 0): 2, (0, 1, 0): 3}
        assert q.content() == 1
        assert q.pluecker_degree == 2

    def test_evaluate_exact(self):
        p = MinorPolynomial(2, {(1, 0, 1): 1, (0, 2, 0): -1})
        m = SymmetricMatrix([[Fraction(1, 3), 2], [2, 9]])
        assert p.evaluate(m) == Fraction(1, 3) * 9 - 4
        assert p.evaluate({(1, 1): 1, (1, 2): 0, (2, 2): 1}) == 1

    def test_text_examples(self):
        p = MinorPolynomial(2, {(1, 0, 1): 1, (0, 2, 0): -1})
        assert p.to_text() == "u11*u22 - u12^2"
        assert MinorPolynomial.from_text(2, "u11*u22 - u12^2") == p
        assert MinorPolynomial.zero(3).to_text() == "0"
        assert MinorPolynomial.constant(1, -7).to_text() == "-7"

    def test_from_text_rejects_junk(self):
        for bad in ("u11 +", "u11 * * u12", "u14", "3..5*u11", "u11 u12", ""):
            with pytest.raises(PreconditionError):
                MinorPolynomial.from_text(2, bad)

    @given(_poly_strategy(2))
    def test_text_round_trip_n2(self, p):
        assert MinorPolynomial.from_text(2, p.to_text()) == p

    @given(_poly_strategy(3))
    @settings(max_examples=50)
    def test_text_round_trip_n3(self, p):
        assert MinorPolynomial.from_text(3, p.to_text()) == p

    @given(_poly_strategy(3))
    @settings(max_examples=50)
    def test_json_round_trip(self, p):
        blob = p.to_json_dict()
        assert all(isinstance(v, str) for v in blob.values())
        assert MinorPolynomial.from_json_dict(3, blob) == p

    def test_json_canonical_key_order(self):
        p = MinorPolynomial(2, {(0, 0, 1): 1, (2, 0, 0): 3, (1, 1, 0): -2})
        keys = list(p.to_json_dict())
        assert keys == ["2,0,0", "1,1,0", "0,0,1"]

    def test_pow(self):
        b = MinorPolynomial.variable(2, 1, 2) + 1
        assert b ** 0 == MinorPolynomial.constant(2, 1)
        assert b ** 3 == b * b * b
        with pytest.raises(PreconditionError):
            b ** -1

    def test_mismatched_sizes_rejected(self):
        with pytest.raises(PreconditionError):
            MinorPolynomial.variable(2, 1, 1) + MinorPolynomial.variable(3, 1, 1)
