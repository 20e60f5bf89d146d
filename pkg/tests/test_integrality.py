"""Integral/algebraic relation searches, localization, and the conclusive
non-integrality arguments."""

import pytest

from ikernel.algebra import NotHomogeneous, SubalgebraSpec, membership
from ikernel.integrality import (
    algebraic_relation_search,
    integral_relation_search,
    localization_contains,
    non_integrality_by_specialization,
    transcendental_over_constants,
    verify_localization_json,
    verify_relation_json,
)


def test_integral_relation_for_x1(inst11):
    vs = inst11.varsys
    relation = integral_relation_search(vs.variable("x1"), inst11.algebra, 3)
    assert relation is not None and relation.monic and relation.degree == 2
    coeffs = {c.power: c.polynomial for c in relation.coefficients}
    assert coeffs[1] == vs.variable("z")
    assert coeffs[0] == -vs.parse("x1^2 + x1*z")
    assert relation.verify()


def test_integral_relation_minimality(inst11):
    # No monic degree-1 relation exists: x1 itself is not a member.
    vs = inst11.varsys
    assert membership(inst11.algebra, vs.variable("x1")) is None
    relation = integral_relation_search(vs.variable("x1"), inst11.algebra, 1)
    assert relation is None


def test_integral_relation_for_generator(inst11):
    vs = inst11.varsys
    relation = integral_relation_search(vs.variable("y1"), inst11.algebra, 3)
    assert relation is not None and relation.degree == 1
    coeffs = {c.power: c.polynomial for c in relation.coefficients}
    assert coeffs[0] == -vs.variable("y1")
    assert relation.verify()


def test_integral_search_rejects_inhomogeneous(inst11):
    with pytest.raises(NotHomogeneous):
        integral_relation_search(inst11.varsys.parse("x1 + z^2"), inst11.algebra, 2)


def test_no_integral_relation_over_monomial_algebra(inst11, mono11):
    vs = inst11.varsys
    x1 = vs.variable("x1")
    assert integral_relation_search(x1, mono11, 5) is None
    assert non_integrality_by_specialization(x1, mono11, inst11.y_names)
    # The same argument does not apply over the full subalgebra: z survives.
    assert not non_integrality_by_specialization(x1, inst11.algebra, inst11.y_names)


def test_algebraic_relation_over_monomial_algebra(inst11, mono11):
    vs = inst11.varsys
    relation = algebraic_relation_search(vs.variable("x1"), mono11, 5, 8)
    assert relation is not None and not relation.monic and relation.degree == 1
    coeffs = {c.power: c.polynomial for c in relation.coefficients}
    assert coeffs[1] == vs.variable("y1")
    assert coeffs[0] == -vs.parse("x1*y1")
    assert relation.verify()
    y_relation = algebraic_relation_search(vs.variable("y1"), mono11, 5, 8)
    assert y_relation is not None and y_relation.degree == 1 and y_relation.verify()


def test_algebraic_relation_over_constants(inst11):
    vs = inst11.varsys
    trivial = SubalgebraSpec(vs, [], homogeneous=True)
    x1 = vs.variable("x1")
    assert algebraic_relation_search(x1, trivial, 4, 6) is None
    assert integral_relation_search(x1, trivial, 4) is None
    assert transcendental_over_constants(x1, trivial)
    assert not transcendental_over_constants(vs.constant(3), trivial)
    assert not transcendental_over_constants(x1, inst11.algebra)


def test_algebraic_relation_for_generator(inst11):
    vs = inst11.varsys
    relation = algebraic_relation_search(vs.variable("z"), inst11.algebra, 3, 6)
    assert relation is not None and relation.degree == 1
    coeffs = {c.power: c.polynomial for c in relation.coefficients}
    assert coeffs[1] == vs.one() and coeffs[0] == -vs.variable("z")
    assert relation.verify()


def test_relation_json_round_trip(inst11):
    vs = inst11.varsys
    relation = integral_relation_search(vs.variable("x1"), inst11.algebra, 3)
    data = relation.to_json_dict()
    assert verify_relation_json(data)
    tampered = dict(data)
    tampered["degree"] = 3
    assert not verify_relation_json(tampered)


def test_localization_examples(inst11):
    vs = inst11.varsys
    x1, y1, z = (vs.variable(n) for n in ("x1", "y1", "z"))
    found = localization_contains(x1, inst11.algebra, y1, 4)
    assert found is not None and found.power == 1
    assert found.membership.target == vs.parse("x1*y1")
    assert found.verify()
    assert localization_contains(z, inst11.algebra, y1, 4).power == 0
    assert localization_contains(x1, inst11.algebra, z, 4) is None
    with pytest.raises(ValueError):
        localization_contains(y1, inst11.algebra, x1, 2)  # x1 not a member
    assert verify_localization_json(found.to_json_dict())


def test_cusp_instance(cusp):
    vs = cusp.varsys
    u = vs.variable("u")
    relation = integral_relation_search(u, cusp.kernel_subalgebra, 2)
    assert relation is not None and relation.degree == 2
    coeffs = {c.power: c.polynomial for c in relation.coefficients}
    assert coeffs[0] == -vs.parse("u^2")
    assert 1 not in coeffs  # pure u^2 - (u^2) shape
    assert relation.verify()
    for d in range(2, 7):
        member = integral_relation_search(u ** d, cusp.kernel_subalgebra, 2)
        assert member is not None and member.degree == 1 and member.verify()


def test_every_certificate_re_evaluates(inst11, mono11):
    vs = inst11.varsys
    searches = [
        integral_relation_search(vs.variable("x1"), inst11.algebra, 3),
        algebraic_relation_search(vs.variable("x1"), mono11, 5, 8),
        integral_relation_search(vs.variable("y1"), mono11, 3),
    ]
    for relation in searches:
        assert relation is not None
        assert relation.evaluate().is_zero()
        for coeff in relation.coefficients:
            assert coeff.membership.verify()
