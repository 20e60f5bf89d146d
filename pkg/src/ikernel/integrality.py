"""Integral and algebraic dependence searches with machine-checkable
certificates.

For a homogeneous element x of degree e, a monic degree-n relation may be
assumed homogeneous with coefficient degrees e*(n-i): inhomogeneous
relations split into homogeneous ones.  That turns each candidate degree
into one exact linear system over a monomial frame.  Negative answers from
the bounded searches mean "none up to the stated bounds"; the only
conclusive negatives are the specialization and constants arguments below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import (
    MembershipCertificate,
    NotHomogeneous,
    SubalgebraSpec,
    membership,
    verify_membership_json,
)
from .exactlin import RationalMatrix, solve_columns
from .poly import Monomial, Polynomial, VarSystem, monomials_of_degree


@dataclass(frozen=True)
class RelationCoefficient:
    power: int
    polynomial: Polynomial
    membership: MembershipCertificate


@dataclass(frozen=True)
class RelationCertificate:
    """A dependence relation sum_i a_i x^i = 0 with coefficients in a
    subalgebra (plus a leading x^degree term when monic), every coefficient
    carrying its own membership certificate."""

    element: Polynomial
    algebra: SubalgebraSpec
    degree: int
    monic: bool
    coefficients: tuple[RelationCoefficient, ...]

    def evaluate(self) -> Polynomial:
        total = self.element.varsys.zero()
        if self.monic:
            total = total + self.element ** self.degree
        for coeff in self.coefficients:
            total = total + coeff.polynomial * self.element ** coeff.power
        return total

    def verify(self) -> bool:
        if not self.evaluate().is_zero():
            return False
        for coeff in self.coefficients:
            cert = coeff.membership
            if cert.target != coeff.polynomial or not cert.verify():
                return False
        return True

    def leading_coefficient(self) -> Polynomial:
        if self.monic:
            return self.element.varsys.one()
        for coeff in self.coefficients:
            if coeff.power == self.degree:
                return coeff.polynomial
        return self.element.varsys.zero()

    def to_json_dict(self) -> dict:
        return {
            "cert_type": "relation",
            "degree": self.degree,
            "monic": self.monic,
            "element": str(self.element),
            "variables": list(self.element.varsys.names),
            "coefficients": [
                {
                    "i": coeff.power,
                    "polynomial": str(coeff.polynomial),
                    "certificate": coeff.membership.to_json_dict(),
                }
                for coeff in self.coefficients
            ],
        }


def verify_relation_json(data: Mapping) -> bool:
    """Re-check a serialized relation certificate with poly arithmetic only."""
    varsys = VarSystem(tuple(data["variables"]))
    element = varsys.parse(data["element"])
    total = varsys.zero()
    if data["monic"]:
        total = total + element ** int(data["degree"])
    for entry in data["coefficients"]:
        poly = varsys.parse(entry["polynomial"])
        cert = entry["certificate"]
        if cert["target"] != entry["polynomial"] or not verify_membership_json(cert):
            return False
        total = total + poly * element ** int(entry["i"])
    return total.is_zero()


def _require_homogeneous(x: Polynomial, minimum_degree: int = 1) -> int:
    if not x.is_homogeneous():
        raise NotHomogeneous("search input must be homogeneous")
    e = x.degree()
    if e < minimum_degree:
        raise NotHomogeneous(f"search input must have degree >= {minimum_degree}")
    return e


def _vector(f: Polynomial, index: dict[Monomial, int], width: int) -> list[Fraction]:
    vec = [Fraction(0)] * width
    for m, c in f.terms.items():
        vec[index[m]] = c
    return vec


def integral_relation_search(
    x: Polynomial, algebra: SubalgebraSpec, max_degree: int
) -> RelationCertificate | None:
    """Least-degree monic relation x^n + a_{n-1} x^{n-1} + ... + a_0 = 0 with
    homogeneous coefficients a_i in the subalgebra, for n <= max_degree.

    None means no such relation up to the bound (not a proof that x fails
    to be integral; see `non_integrality_by_specialization` for the
    conclusive route).
    """
    e = _require_homogeneous(x)
    basisdata = algebra.graded_basis()
    powers = [algebra.varsys.one()]
    for _ in range(max_degree):
        powers.append(powers[-1] * x)

    for n in range(1, max_degree + 1):
        frame = monomials_of_degree(algebra.varsys, e * n)
        index = {m: i for i, m in enumerate(frame)}
        width = len(frame)
        columns: list[list[Fraction]] = []
        owners: list[tuple[int, Polynomial]] = []
        for i in range(n - 1, -1, -1):
            piece = basisdata.piece(e * (n - i))
            for basis_poly in piece.polynomials():
                columns.append(_vector(basis_poly * powers[i], index, width))
                owners.append((i, basis_poly))
        target = _vector(-powers[n], index, width)
        solution = solve_columns(columns, target)
        if solution is None:
            continue
        by_power: dict[int, Polynomial] = {}
        for value, (i, basis_poly) in zip(solution, owners):
            if value:
                by_power[i] = by_power.get(i, algebra.varsys.zero()) + basis_poly * value
        coefficients = []
        for i in sorted(by_power, reverse=True):
            poly = by_power[i]
            if poly.is_zero():
                continue
            cert = membership(algebra, poly)
            if cert is None:
                raise RuntimeError("internal error: solved coefficient not in algebra")
            coefficients.append(RelationCoefficient(i, poly, cert))
        return RelationCertificate(x, algebra, n, True, tuple(coefficients))
    return None


def algebraic_relation_search(
    x: Polynomial,
    algebra: SubalgebraSpec,
    max_degree: int,
    max_coeff_degree: int,
) -> RelationCertificate | None:
    """Least nonzero relation b_n x^n + ... + b_0 = 0 with coefficients in
    the subalgebra and b_n != 0, minimizing n and then coefficient degree.

    Homogeneous weights: for x of degree e the candidate of weight w uses
    b_i of degree w - i*e, scanned for w up to max_coeff_degree.
    """
    if x.is_homogeneous() and x.degree() == 0 and not x.is_zero():
        # Constants are algebraic outright: x - c = 0.
        c = x.constant_coefficient()
        one_cert = membership(algebra, algebra.varsys.one())
        neg_cert = membership(algebra, algebra.varsys.constant(-c))
        assert one_cert is not None and neg_cert is not None
        coefficients = (
            RelationCoefficient(1, algebra.varsys.one(), one_cert),
            RelationCoefficient(0, algebra.varsys.constant(-c), neg_cert),
        )
        return RelationCertificate(x, algebra, 1, False, coefficients)
    e = _require_homogeneous(x)
    basisdata = algebra.graded_basis()
    powers = [algebra.varsys.one()]
    for _ in range(max_degree):
        powers.append(powers[-1] * x)

    for n in range(1, max_degree + 1):
        for weight in range(n * e, max_coeff_degree + 1):
            top_dim = basisdata.piece(weight - n * e).dim
            if top_dim == 0:
                continue
            frame = monomials_of_degree(algebra.varsys, weight)
            index = {m: i for i, m in enumerate(frame)}
            width = len(frame)
            columns: list[list[Fraction]] = []
            owners: list[tuple[int, Polynomial]] = []
            for i in range(n, -1, -1):
                piece = basisdata.piece(weight - i * e)
                for basis_poly in piece.polynomials():
                    columns.append(_vector(basis_poly * powers[i], index, width))
                    owners.append((i, basis_poly))
            rows = [[col[k] for col in columns] for k in range(width)]
            kernel = RationalMatrix(rows, ncols=len(columns)).nullspace()
            for vec in kernel:
                if not any(vec[:top_dim]):
                    continue
                by_power: dict[int, Polynomial] = {}
                for value, (i, basis_poly) in zip(vec, owners):
                    if value:
                        by_power[i] = (
                            by_power.get(i, algebra.varsys.zero()) + basis_poly * value
                        )
                top = by_power.get(n)
                if top is None or top.is_zero():
                    continue
                # Normalize so the top coefficient has leading coefficient 1.
                scale = 1 / top.terms[top.leading_monomial()]
                coefficients = []
                for i in sorted(by_power, reverse=True):
                    poly = by_power[i] * scale
                    if poly.is_zero():
                        continue
                    cert = membership(algebra, poly)
                    if cert is None:
                        raise RuntimeError(
                            "internal error: solved coefficient not in algebra"
                        )
                    coefficients.append(RelationCoefficient(i, poly, cert))
                return RelationCertificate(x, algebra, n, False, tuple(coefficients))
    return None


@dataclass(frozen=True)
class LocalizationCertificate:
    """Witness that f lies in A[1/g]: the least power k with f*g^k in A."""

    numerator: Polynomial
    localizing: Polynomial
    power: int
    membership: MembershipCertificate

    def verify(self) -> bool:
        product = self.numerator * self.localizing ** self.power
        return self.membership.target == product and self.membership.verify()

    def to_json_dict(self) -> dict:
        return {
            "cert_type": "localization",
            "numerator": str(self.numerator),
            "localizing": str(self.localizing),
            "power": self.power,
            "certificate": self.membership.to_json_dict(),
        }


def verify_localization_json(data: Mapping) -> bool:
    cert = data["certificate"]
    varsys = VarSystem(tuple(cert["variables"]))
    numerator = varsys.parse(data["numerator"])
    localizing = varsys.parse(data["localizing"])
    product = numerator * localizing ** int(data["power"])
    if varsys.parse(cert["target"]) != product:
        return False
    return verify_membership_json(cert)


def localization_contains(
    f: Polynomial, algebra: SubalgebraSpec, g: Polynomial, max_power: int
) -> LocalizationCertificate | None:
    """Least k <= max_power with f*g^k in the algebra, certifying that f
    belongs to the localization at g.  Requires g itself to be a member."""
    _require_homogeneous(f, minimum_degree=0)
    _require_homogeneous(g)
    if membership(algebra, g) is None:
        raise ValueError("localizing element is not in the algebra")
    product = f
    for k in range(max_power + 1):
        cert = membership(algebra, product)
        if cert is not None:
            return LocalizationCertificate(f, g, k, cert)
        product = product * g
    return None


def non_integrality_by_specialization(
    x: Polynomial, algebra: SubalgebraSpec, vanishing: Sequence[str]
) -> bool:
    """Conclusive non-integrality via a coordinate specialization.

    If sending the listed variables to zero kills every generator while
    leaving x nonconstant, then a monic relation of any degree would
    specialize to a monic polynomial identity over the constants for a
    nonconstant element of a polynomial ring, which is impossible.  True
    means x is certainly not integral over the algebra (no degree bound
    involved).
    """
    vs = algebra.varsys
    images = {name: vs.constant(0) for name in vanishing}
    for _, generator in algebra.generators:
        if not generator.substitute(images, target=vs).is_zero():
            return False
    return x.substitute(images, target=vs).degree() >= 1


def transcendental_over_constants(x: Polynomial, algebra: SubalgebraSpec) -> bool:
    """Conclusive transcendence when the algebra is just the constants.

    A nonconstant element of a polynomial ring satisfying a nonzero
    polynomial over the ground field would be invertible, and the only
    units are the constants; so no algebraic relation exists at all.
    """
    return not algebra.generators and x.degree() >= 1
