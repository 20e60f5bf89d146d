"""Finitely generated graded subalgebras of a polynomial ring.

Graded-piece bases, exact membership with evaluable certificates,
intersections with coordinate subrings, indecomposable generators, and the
fast path for monomial algebras.  Everything here is exact per degree:
positive homogeneous generators make each graded piece a finite linear
algebra problem, with no truncation error.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .exactlin import Echelon, SpanBasis
from .poly import (
    Monomial,
    Polynomial,
    VarSystem,
    VarSystemMismatch,
    monomials_of_degree,
)


class NotHomogeneous(ValueError):
    """A generator (or search input) violates a homogeneity requirement."""


class SubalgebraSpec:
    """A subalgebra given by labeled generators over a fixed variable system.

    With the `homogeneous` flag set (the only mode the graded machinery
    accepts), every generator must be total-degree homogeneous of positive
    degree; this is verified at construction.  `complete_through` marks a
    generator list that is only faithful up to some degree (used for
    algebras that are not finitely generated); graded queries beyond it are
    rejected rather than silently wrong.
    """

    __slots__ = (
        "varsys",
        "generators",
        "homogeneous",
        "y_names",
        "complete_through",
        "label_system",
        "_graded",
    )

    def __init__(
        self,
        varsys: VarSystem,
        generators: Sequence[tuple[str, Polynomial]],
        homogeneous: bool = True,
        y_names: Sequence[str] | None = None,
        complete_through: int | None = None,
    ):
        gens = tuple((label, poly) for label, poly in generators)
        labels = [label for label, _ in gens]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be distinct")
        param_idx = set(varsys.parameter_indices)
        for label, poly in gens:
            if poly.varsys != varsys:
                raise VarSystemMismatch(f"generator {label!r} over a different system")
            if poly.is_zero():
                raise ValueError(f"generator {label!r} is zero")
            if any(m.exponents[i] for m in poly.terms for i in param_idx):
                raise ValueError(f"generator {label!r} involves parameters")
            if homogeneous and not (poly.is_homogeneous() and poly.degree() >= 1):
                raise NotHomogeneous(
                    f"generator {label!r} is not homogeneous of positive degree"
                )
        self.varsys = varsys
        self.generators = gens
        self.homogeneous = homogeneous
        self.y_names = tuple(y_names) if y_names is not None else None
        self.complete_through = complete_through
        self.label_system = VarSystem(tuple(labels))
        self._graded: GradedBasis | None = None

    def generator(self, label: str) -> Polynomial:
        for name, poly in self.generators:
            if name == label:
                return poly
        raise KeyError(label)

    def generator_degrees(self) -> tuple[int, ...]:
        return tuple(sorted({poly.degree() for _, poly in self.generators}))

    def graded_basis(self) -> GradedBasis:
        if self._graded is None:
            self._graded = GradedBasis(self)
        return self._graded

    def __repr__(self) -> str:
        return f"<SubalgebraSpec {len(self.generators)} generators over {self.varsys!r}>"


class GradedBasis:
    """Memoized degreewise bases of a homogeneous subalgebra.

    The degree-d piece is spanned by (lower piece) x (generator) products,
    which is complete because positive homogeneous grading rules out
    cancellation from higher products.  Tracked pieces additionally carry,
    for each basis row, a formal polynomial in the generator labels that
    evaluates to it (the raw material for membership certificates).
    """

    def __init__(self, algebra: SubalgebraSpec):
        if not algebra.homogeneous:
            raise NotHomogeneous("graded bases need the homogeneous flag")
        self.algebra = algebra
        self._pieces: dict[int, SpanBasis] = {}
        self._tracked: dict[int, tuple[SpanBasis, tuple[Polynomial, ...]]] = {}

    def _check_degree(self, degree: int) -> None:
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        cap = self.algebra.complete_through
        if cap is not None and degree > cap:
            raise ValueError(
                f"generator list is only faithful through degree {cap}; "
                f"degree {degree} requested"
            )

    def _products(self, degree: int, tracked: bool):
        """Yield (polynomial, label-expression) spanning the degree-d piece."""
        alg = self.algebra
        one_expr = alg.label_system.one() if tracked else None
        for e in alg.generator_degrees():
            if e > degree:
                break
            if e == degree:
                lower: Sequence[tuple[Polynomial, Polynomial | None]] = [
                    (alg.varsys.one(), one_expr)
                ]
            elif tracked:
                basis, exprs = self.tracked_piece(degree - e)
                lower = list(zip(basis.polynomials(), exprs))
            else:
                lower = [(p, None) for p in self.piece(degree - e).polynomials()]
            for label, gen in alg.generators:
                if gen.degree() != e:
                    continue
                glabel = alg.label_system.variable(label) if tracked else None
                for base_poly, base_expr in lower:
                    expr = base_expr * glabel if tracked else None
                    yield base_poly * gen, expr

    def piece(self, degree: int) -> SpanBasis:
        self._check_degree(degree)
        if degree in self._pieces:
            return self._pieces[degree]
        vs = self.algebra.varsys
        frame = monomials_of_degree(vs, degree)
        if degree == 0:
            basis = SpanBasis.from_polynomials(
                vs, [vs.one()], frame=frame, track_sources=False
            )
        else:
            index = {m: i for i, m in enumerate(frame)}
            ech = Echelon(len(frame))
            for poly, _ in self._products(degree, tracked=False):
                vec = [Fraction(0)] * len(frame)
                for m, c in poly.terms.items():
                    vec[index[m]] = c
                ech.insert(vec)
            vectors, pivots, _ = ech.emit()
            basis = SpanBasis(vs, frame, vectors, pivots)
        self._pieces[degree] = basis
        return basis

    def tracked_piece(self, degree: int) -> tuple[SpanBasis, tuple[Polynomial, ...]]:
        self._check_degree(degree)
        if degree in self._tracked:
            return self._tracked[degree]
        alg = self.algebra
        vs = alg.varsys
        frame = monomials_of_degree(vs, degree)
        if degree == 0:
            basis = SpanBasis.from_polynomials(
                vs, [vs.one()], frame=frame, track_sources=False
            )
            result = (basis, (alg.label_system.one(),))
        else:
            index = {m: i for i, m in enumerate(frame)}
            ech = Echelon(len(frame), track=True)
            formals: list[Polynomial] = []
            for poly, expr in self._products(degree, tracked=True):
                vec = [Fraction(0)] * len(frame)
                for m, c in poly.terms.items():
                    vec[index[m]] = c
                ech.insert(vec)
                formals.append(expr)
            vectors, pivots, exprs = ech.emit()
            assert exprs is not None
            row_exprs = []
            for combo in exprs:
                total = alg.label_system.zero()
                for ordinal, c in sorted(combo.items()):
                    total = total + formals[ordinal] * c
                row_exprs.append(total)
            basis = SpanBasis(vs, frame, vectors, pivots)
            result = (basis, tuple(row_exprs))
        self._tracked[degree] = result
        return result

    def dimensions(self, max_degree: int) -> list[int]:
        return [self.piece(d).dim for d in range(max_degree + 1)]


class MembershipCertificate:
    """A formal polynomial in generator labels that evaluates to the target.

    Soundness is checkable by anyone: substitute the generators for their
    labels and compare with the target using plain polynomial arithmetic.
    """

    __slots__ = ("algebra", "target", "expression")

    def __init__(self, algebra: SubalgebraSpec, target: Polynomial, expression: Polynomial):
        self.algebra = algebra
        self.target = target
        self.expression = expression

    def evaluate(self) -> Polynomial:
        images = {label: poly for label, poly in self.algebra.generators}
        return self.expression.substitute(images, target=self.algebra.varsys)

    def verify(self) -> bool:
        return self.evaluate() == self.target

    def to_json_dict(self) -> dict:
        return {
            "cert_type": "membership",
            "variables": list(self.algebra.varsys.names),
            "generators": [[label, str(poly)] for label, poly in self.algebra.generators],
            "target": str(self.target),
            "expression": str(self.expression),
        }

    def __repr__(self) -> str:
        return f"<MembershipCertificate {self.target} = {self.expression}>"


def verify_membership_json(data: Mapping) -> bool:
    """Re-check a serialized membership certificate with poly arithmetic only."""
    varsys = VarSystem(tuple(data["variables"]))
    generators = [(label, varsys.parse(text)) for label, text in data["generators"]]
    label_system = VarSystem(tuple(label for label, _ in generators))
    expression = label_system.parse(data["expression"])
    target = varsys.parse(data["target"])
    evaluated = expression.substitute(dict(generators), target=varsys)
    return evaluated == target


def graded_piece(algebra: SubalgebraSpec, degree: int) -> SpanBasis:
    """Basis of the degree-d piece (span of all generator products of total
    degree exactly d; constants alone in degree 0)."""
    return algebra.graded_basis().piece(degree)


def membership(algebra: SubalgebraSpec, f: Polynomial) -> MembershipCertificate | None:
    """Exact membership test with an evaluable certificate on success.

    The input is split into homogeneous components; it belongs to the
    algebra iff every component does.  A None answer is definitive.
    """
    if not algebra.homogeneous:
        raise NotHomogeneous("membership needs homogeneous generators")
    if f.varsys != algebra.varsys:
        raise VarSystemMismatch("candidate over a different system")
    expression = algebra.label_system.zero()
    basisdata = algebra.graded_basis()
    for degree, component in f.homogeneous_components().items():
        if degree == 0:
            expression = expression + component.constant_coefficient()
            continue
        basis, exprs = basisdata.tracked_piece(degree)
        coords = basis.coordinates_of(component)
        if coords is None:
            return None
        for c, expr in zip(coords, exprs):
            if c:
                expression = expression + expr * c
    certificate = MembershipCertificate(algebra, f, expression)
    if not certificate.verify():
        raise RuntimeError("internal error: certificate failed to re-evaluate")
    return certificate


def intersect_with_subring(
    algebra: SubalgebraSpec, names: Sequence[str], degree: int
) -> SpanBasis:
    """Basis of (A ∩ k[names])_d, computed as a span intersection."""
    piece = graded_piece(algebra, degree)
    vs = algebra.varsys
    monos = monomials_of_degree(vs, degree, names)
    subring = SpanBasis.from_polynomials(
        vs,
        [Polynomial(vs, {m: Fraction(1)}) for m in monos],
        frame=monos,
        track_sources=False,
    )
    return piece.intersect(subring)


def monomial_membership(algebra: SubalgebraSpec, mono: Monomial) -> bool:
    """Closed-form membership for the y-positive monomial algebra.

    Its span is exactly the constants plus all monomials with positive
    total degree in the designated y variables; this is the independent
    fast path cross-checked against the generic engine.
    """
    if algebra.y_names is None:
        raise ValueError("algebra carries no y-variable marker")
    if len(mono.exponents) != algebra.varsys.nvars:
        raise VarSystemMismatch("monomial length does not match system")
    if mono.degree() == 0:
        return True
    ydeg = sum(mono.exponents[algebra.varsys.index(nm)] for nm in algebra.y_names)
    return ydeg >= 1


def _monomial_label(mono: Monomial, varsys: VarSystem) -> str:
    parts = []
    for name, e in zip(varsys.names, mono.exponents):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}e{e}")
    return "m_" + "_".join(parts)


def y_positive_monomial_algebra(
    varsys: VarSystem,
    x_names: Sequence[str],
    y_names: Sequence[str],
    max_degree: int,
) -> SubalgebraSpec:
    """The algebra spanned by monomials in x and y with positive y-degree.

    It is not finitely generated, so the generator list is truncated at
    `max_degree`; the result is marked accordingly and exact up to there
    (every spanning monomial of degree <= max_degree is itself a
    generator).
    """
    generators: list[tuple[str, Polynomial]] = []
    y_idx = [varsys.index(nm) for nm in y_names]
    for degree in range(1, max_degree + 1):
        for mono in monomials_of_degree(varsys, degree, tuple(x_names) + tuple(y_names)):
            if sum(mono.exponents[i] for i in y_idx) >= 1:
                generators.append(
                    (_monomial_label(mono, varsys), Polynomial(varsys, {mono: Fraction(1)}))
                )
    return SubalgebraSpec(
        varsys,
        generators,
        homogeneous=True,
        y_names=y_names,
        complete_through=max_degree,
    )


def decomposable_span(algebra: SubalgebraSpec, degree: int) -> SpanBasis:
    """Basis of (A+ . A+)_d: products of two positive-degree members."""
    if degree < 1:
        raise ValueError("degree must be positive")
    vs = algebra.varsys
    frame = monomials_of_degree(vs, degree)
    index = {m: i for i, m in enumerate(frame)}
    ech = Echelon(len(frame))
    basisdata = algebra.graded_basis()
    for e in range(1, degree // 2 + 1):
        left = basisdata.piece(e).polynomials()
        right = basisdata.piece(degree - e).polynomials()
        for b in left:
            for c in right:
                product = b * c
                vec = [Fraction(0)] * len(frame)
                for m, coeff in product.terms.items():
                    vec[index[m]] = coeff
                ech.insert(vec)
    vectors, pivots, _ = ech.emit()
    return SpanBasis(vs, frame, vectors, pivots)


def indecomposable_generators(algebra: SubalgebraSpec, degree: int) -> SpanBasis:
    """A basis of a complement of (A+ . A+)_d inside A_d.

    Its dimension is the number of new generators the algebra needs in
    degree d; representatives are chosen deterministically from the
    canonical basis of A_d.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    vs = algebra.varsys
    frame = monomials_of_degree(vs, degree)
    index = {m: i for i, m in enumerate(frame)}
    decomposable = decomposable_span(algebra, degree)
    ech = Echelon(len(frame))
    for vec in decomposable.vectors:
        ech.insert(vec)
    representatives = []
    for poly in graded_piece(algebra, degree).polynomials():
        vec = [Fraction(0)] * len(frame)
        for m, c in poly.terms.items():
            vec[index[m]] = c
        if ech.insert(vec):
            representatives.append(poly)
    return SpanBasis.from_polynomials(vs, representatives, frame=frame, track_sources=False)
