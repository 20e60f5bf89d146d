"""Derivations: Leibniz rule, invariance of subalgebras, graded kernels."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ikernel.derivation import (
    Derivation,
    InhomogeneousDerivation,
    kernel_graded_basis,
    preserves_subalgebra,
)
from ikernel.exactlin import RationalMatrix, SpanBasis
from ikernel.poly import Monomial, Polynomial, VarSystem, monomials_of_degree

VS = VarSystem(("x1", "y1", "z"))
D1 = Derivation(VS, {"z": VS.variable("y1")})


def test_apply_examples():
    assert D1.apply(VS.variable("z")) == VS.variable("y1")
    assert D1.apply(VS.variable("x1")).is_zero()
    assert D1.apply(VS.parse("x1^2 + x1*z")) == VS.parse("x1*y1")


def test_linear_and_kills_constants():
    f, g = VS.parse("x1*z^2"), VS.parse("y1*z")
    assert D1.apply(f + 3 * g) == D1.apply(f) + 3 * D1.apply(g)
    assert D1.apply(VS.constant(Fraction(7, 3))).is_zero()


def _polys():
    coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(bool)
    monos = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)).map(Monomial)
    return st.dictionaries(monos, coeffs, max_size=4).map(lambda t: Polynomial(VS, t))


@settings(max_examples=50, deadline=None)
@given(_polys(), _polys())
def test_leibniz_rule(f, g):
    assert D1.apply(f * g) == f * D1.apply(g) + g * D1.apply(f)


def test_kernel_examples(inst11):
    vs = inst11.varsys
    k1 = kernel_graded_basis([inst11.translation_derivation], vs, 1)
    assert [str(p) for p in k1.polynomials()] == ["x1", "y1"]
    k2 = kernel_graded_basis(
        [inst11.translation_derivation, inst11.scaling_derivation], vs, 2
    )
    assert [str(p) for p in k2.polynomials()] == ["x1^2"]
    k0 = kernel_graded_basis([], vs, 1)
    assert k0.dim == 3


def test_kernel_soundness(inst11):
    family = [inst11.translation_derivation, inst11.scaling_derivation]
    for d in range(6):
        for basis_poly in kernel_graded_basis(family, inst11.varsys, d).polynomials():
            for drv in family:
                assert drv.apply(basis_poly).is_zero()


def test_kernel_completeness_vs_brute_force(inst11):
    """Oracle: nullspace assembled monomial-by-monomial, no frame reuse."""
    drv = inst11.translation_derivation
    vs = inst11.varsys
    for d in range(6):
        frame = monomials_of_degree(vs, d)
        images = [drv.apply(Polynomial(vs, {m: Fraction(1)})) for m in frame]
        out_monos = sorted(
            {m for img in images for m in img.terms}, key=Monomial.sort_key
        )
        rows = [[img.coeff(m) for img in images] for m in out_monos]
        if rows:
            expected_dim = len(frame) - RationalMatrix(rows, ncols=len(frame)).rank()
        else:
            expected_dim = len(frame)
        assert kernel_graded_basis([drv], vs, d).dim == expected_dim


def test_kernel_is_z_free_span(inst21):
    vs = inst21.varsys
    for d in range(5):
        kernel = kernel_graded_basis([inst21.translation_derivation], vs, d)
        zfree = monomials_of_degree(vs, d, inst21.x_names + inst21.y_names)
        expected = SpanBasis.from_polynomials(
            vs,
            [Polynomial(vs, {m: Fraction(1)}) for m in zfree],
            frame=zfree,
            track_sources=False,
        )
        assert kernel.spans_same(expected)


def test_kernel_inside_subalgebra(inst11, mono11):
    from ikernel.algebra import graded_piece

    for d in range(7):
        inside = kernel_graded_basis(
            [inst11.translation_derivation], inst11.algebra, d
        )
        assert inside.spans_same(graded_piece(mono11, d))


def test_inhomogeneous_images_rejected():
    bad = Derivation(VS, {"z": VS.parse("y1 + y1^2")})
    with pytest.raises(InhomogeneousDerivation):
        kernel_graded_basis([bad], VS, 2)


def test_preserves_subalgebra(inst11):
    result = preserves_subalgebra(inst11.translation_derivation, inst11.algebra)
    assert result.preserved
    assert set(result.certificates) == {"y1", "z", "t1", "u1", "x1y1"}
    for cert in result.certificates.values():
        assert cert.verify()

    ddx = Derivation(inst11.varsys, {"x1": inst11.varsys.one()})
    result = preserves_subalgebra(ddx, inst11.algebra)
    assert not result.preserved
    label, witness = result.failure
    assert label == "t1"
    assert witness == inst11.varsys.parse("2*x1 + z")


def test_bounded_nilpotency(inst11):
    drv = inst11.translation_derivation
    rng = random.Random(3)
    vs = inst11.varsys
    for _ in range(10):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            mono = vs.monomial(
                {"x1": rng.randint(0, 2), "y1": rng.randint(0, 2), "z": rng.randint(0, 3)}
            )
            terms[mono] = Fraction(rng.randint(-3, 3))
        f = Polynomial(vs, terms)
        zdeg = max((m.exponents[vs.index("z")] for m in f.terms), default=0)
        steps = drv.power_annihilates(f, zdeg + 1)
        assert steps is not None and steps <= zdeg + 1
    # The scaling derivation is not locally nilpotent: y1 reproduces itself.
    assert inst11.scaling_derivation.power_annihilates(vs.variable("y1"), 10) is None
