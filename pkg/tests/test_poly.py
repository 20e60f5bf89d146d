"""Polynomial arithmetic, grading, substitution, and the text format."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ikernel.poly import (
    Monomial,
    ParseError,
    Polynomial,
    VarSystem,
    VarSystemMismatch,
    format_polynomial,
    monomials_of_degree,
    parse_polynomial,
)

VS = VarSystem(("x1", "y1", "z"))
X, Y, Z = (VS.variable(n) for n in ("x1", "y1", "z"))
T1 = X * X + X * Z


def test_varsys_rejects_duplicates_and_bad_names():
    with pytest.raises(ValueError):
        VarSystem(("x", "x"))
    with pytest.raises(ValueError):
        VarSystem(("x y",))


def test_add_identity_and_cancellation():
    assert T1 + VS.zero() == T1
    assert (X * X + X * Z) + (-(X * Z)) == X * X
    assert T1 + T1 == 2 * X * X + 2 * X * Z


def test_add_requires_shared_system():
    other = VarSystem(("x1", "y1"))
    with pytest.raises(VarSystemMismatch):
        X + other.variable("x1")


def test_mul_identity_and_products():
    assert T1 * VS.one() == T1
    assert X * (X + Z) == T1
    assert (X + Z) * (X - Z) == X * X - Z * Z


def test_degree_additivity():
    f = X * X + Y
    g = Z * Z * Z - X
    assert (f * g).degree() == f.degree() + g.degree()


def test_substitute_shear():
    extended = VS.extend(("t",))
    shear = {"z": extended.variable("z") + extended.variable("t") * extended.variable("y1")}
    assert Z.substitute(shear) == extended.parse("z + t*y1")
    assert T1.substitute({}, target=VS) == T1
    assert T1.substitute(shear) == extended.parse("x1^2 + x1*z + t*x1*y1")


def test_substitute_missing_target_variable():
    smaller = VarSystem(("x1",))
    with pytest.raises(VarSystemMismatch):
        (X + Y).substitute({"x1": smaller.variable("x1")})


def test_substitution_composes():
    sigma = {"x1": X + Z}
    tau = {"z": Z * Z}
    f = X * Y + Z
    once = f.substitute(sigma).substitute(tau)
    composed = {"x1": (X + Z).substitute(tau), "z": Z.substitute(tau)}
    assert once == f.substitute(composed)


def test_homogeneous_component():
    assert T1.homogeneous_component(2) == T1
    assert T1.homogeneous_component(1).is_zero()
    assert (Z + X * Y).homogeneous_component(2) == X * Y
    f = X * X * Y - 3 * Z + VS.constant(Fraction(1, 2))
    assert sum(f.homogeneous_components().values(), VS.zero()) == f


def test_parameters_carry_degree_zero():
    extended = VS.extend(("t",))
    f = extended.parse("t^3*x1 + t*y1")
    assert f.degree() == 1
    assert f.is_homogeneous(1)
    assert f.total_degree() == 4


def test_partial_derivative():
    assert T1.partial("x1") == 2 * X + Z
    assert T1.partial("y1").is_zero()
    assert (X ** 3).partial("x1") == 3 * X * X


def test_monomials_of_degree_counts_and_order():
    monos = monomials_of_degree(VS, 2)
    assert len(monos) == 6
    assert monos[0] == VS.monomial({"x1": 2})
    assert monos[-1] == VS.monomial({"z": 2})
    assert monomials_of_degree(VS, 0) == (VS.unit_monomial(),)
    assert [len(monomials_of_degree(VS, d, ("x1", "y1"))) for d in range(4)] == [1, 2, 3, 4]


def test_coefficients_in_parameters():
    extended = VS.extend(("t",))
    f = extended.parse("x1^2 + x1*z + t*x1*y1")
    parts = f.coefficients_in(("t",))
    assert parts[(0,)] == T1
    assert parts[(1,)] == X * Y


def test_parse_examples():
    assert parse_polynomial("x1^2 + x1*z", VS) == T1
    assert parse_polynomial("x1^2+x1 z", VS) == T1
    assert parse_polynomial("-x1 + 1/2", VS) == -X + Fraction(1, 2)
    assert parse_polynomial("(x1+z)*(x1-z)", VS) == X * X - Z * Z
    assert parse_polynomial("0", VS).is_zero()


def test_parse_rejects_garbage():
    for text in ("x2", "x1^", "x1^-2", "1//2", "x1 +", "(x1", "x1$"):
        with pytest.raises(ParseError):
            parse_polynomial(text, VS)


def test_format_canonical():
    assert format_polynomial(T1) == "x1^2 + x1*z"
    assert format_polynomial(VS.zero()) == "0"
    assert format_polynomial(-X + Fraction(3, 2) * Y) == "-x1 + 3/2*y1"


def _coeffs():
    return st.fractions(
        min_value=-4, max_value=4, max_denominator=6
    ).filter(lambda c: c != 0)


def _monomials():
    return st.tuples(
        st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)
    ).map(Monomial)


def _polys():
    return st.dictionaries(_monomials(), _coeffs(), max_size=5).map(
        lambda terms: Polynomial(VS, terms)
    )


@settings(max_examples=60, deadline=None)
@given(_polys(), _polys(), _polys())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h


@settings(max_examples=40, deadline=None)
@given(_polys(), _polys())
def test_no_zero_divisors(f, g):
    if f and g:
        product = f * g
        assert product
        assert product.degree() == f.degree() + g.degree()


@settings(max_examples=40, deadline=None)
@given(_polys(), _polys())
def test_substitute_is_a_homomorphism(f, g):
    images = {"x1": Y + Z, "z": X * X - 1}
    assert (f * g).substitute(images, target=VS) == f.substitute(
        images, target=VS
    ) * g.substitute(images, target=VS)
    assert (f + g).substitute(images, target=VS) == f.substitute(
        images, target=VS
    ) + g.substitute(images, target=VS)


@settings(max_examples=80, deadline=None)
@given(_polys())
def test_text_round_trip(f):
    assert parse_polynomial(format_polynomial(f), VS) == f
