"""k-derivations on polynomial rings.

Application via the Leibniz rule, invariance of subalgebras, and graded
kernel computation: the engine that turns rings of invariants into
degreewise linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import MembershipCertificate, SubalgebraSpec, graded_piece, membership
from .exactlin import RationalMatrix, SpanBasis
from .poly import Polynomial, VarSystem, VarSystemMismatch, monomials_of_degree


class InhomogeneousDerivation(ValueError):
    """The graded kernel machinery needs homogeneous images of one shift."""


class Derivation:
    """A k-derivation given by its images on variables (missing image = 0)."""

    __slots__ = ("varsys", "images")

    def __init__(self, varsys: VarSystem, images: Mapping[str, Polynomial]):
        clean: dict[str, Polynomial] = {}
        for name, poly in images.items():
            varsys.index(name)
            if poly.varsys != varsys:
                raise VarSystemMismatch(f"image of {name!r} over a different system")
            if not poly.is_zero():
                clean[name] = poly
        self.varsys = varsys
        self.images = clean

    def apply(self, f: Polynomial) -> Polynomial:
        """d(f) = sum over variables of image * df/dvariable, exactly."""
        if f.varsys != self.varsys:
            raise VarSystemMismatch("polynomial over a different system")
        result = self.varsys.zero()
        for name, image in self.images.items():
            part = f.partial(name)
            if part:
                result = result + image * part
        return result

    def homogeneous_shift(self) -> int | None:
        """Degree shift of the induced graded map, or None for the zero map.

        Requires every image homogeneous and all shifts equal; otherwise the
        derivation does not map graded pieces to graded pieces.
        """
        shifts = set()
        for name, image in self.images.items():
            if not image.is_homogeneous():
                raise InhomogeneousDerivation(f"image of {name!r} is inhomogeneous")
            shifts.add(image.degree() - 1)
        if not shifts:
            return None
        if len(shifts) > 1:
            raise InhomogeneousDerivation("images have different degree shifts")
        return shifts.pop()

    def power_annihilates(self, f: Polynomial, max_iterations: int) -> int | None:
        """Least N <= max_iterations with d^N(f) = 0, or None if not reached."""
        current = f
        for n in range(max_iterations + 1):
            if current.is_zero():
                return n
            current = self.apply(current)
        return None

    def to_json_dict(self) -> dict[str, str]:
        return {name: str(poly) for name, poly in sorted(self.images.items())}

    def __repr__(self) -> str:
        inside = ", ".join(f"{n} -> {p}" for n, p in sorted(self.images.items()))
        return f"<Derivation {inside or '0'}>"


def kernel_graded_basis(
    derivations: Sequence[Derivation],
    ambient: VarSystem | SubalgebraSpec,
    degree: int,
) -> SpanBasis:
    """Basis of the joint kernel of a derivation family in one graded piece.

    Over the full ring this is a nullspace over the monomial frame; inside a
    subalgebra it is the full-ring kernel intersected with the subalgebra's
    graded piece (legitimate whenever the family preserves the subalgebra).
    """
    if isinstance(ambient, SubalgebraSpec):
        varsys: VarSystem = ambient.varsys
    else:
        varsys = ambient
    frame = monomials_of_degree(varsys, degree)
    frame_polys = [Polynomial(varsys, {m: Fraction(1)}) for m in frame]

    rows: list[list[Fraction]] = []
    for drv in derivations:
        if drv.varsys != varsys:
            raise VarSystemMismatch("derivation over a different system")
        shift = drv.homogeneous_shift()
        if shift is None:
            continue
        out_frame = monomials_of_degree(varsys, degree + shift)
        if not out_frame:
            continue
        out_index = {m: i for i, m in enumerate(out_frame)}
        columns = []
        for mono_poly in frame_polys:
            image = drv.apply(mono_poly)
            col = [Fraction(0)] * len(out_frame)
            for m, c in image.terms.items():
                col[out_index[m]] = c
            columns.append(col)
        for k in range(len(out_frame)):
            rows.append([columns[j][k] for j in range(len(frame))])

    if rows:
        kernel = RationalMatrix(rows, ncols=len(frame)).nullspace()
    else:
        kernel = tuple(
            tuple(Fraction(int(i == j)) for j in range(len(frame)))
            for i in range(len(frame))
        )
    members = []
    for vec in kernel:
        terms = {m: c for m, c in zip(frame, vec) if c}
        members.append(Polynomial(varsys, terms))
    basis = SpanBasis.from_polynomials(varsys, members, frame=frame, track_sources=False)
    if isinstance(ambient, SubalgebraSpec):
        basis = basis.intersect(graded_piece(ambient, degree))
    return basis


@dataclass(frozen=True)
class PreservationResult:
    """Outcome of an invariance check d(A) ⊆ A on the generators."""

    preserved: bool
    certificates: dict[str, MembershipCertificate]
    failure: tuple[str, Polynomial] | None = None


def preserves_subalgebra(
    derivation: Derivation,
    algebra: SubalgebraSpec,
    max_image_degree: int | None = None,
) -> PreservationResult:
    """Decide d(A) ⊆ A exactly, generator by generator.

    Returns a membership certificate per generator, or the first failing
    generator together with its image as a witness.  `max_image_degree`
    optionally caps the degrees this check is allowed to touch; exceeding
    it is an error rather than a silent truncation.
    """
    certificates: dict[str, MembershipCertificate] = {}
    for label, generator in algebra.generators:
        image = derivation.apply(generator)
        if max_image_degree is not None and image.degree() > max_image_degree:
            raise ValueError(
                f"image of generator {label!r} exceeds the declared degree cap"
            )
        certificate = membership(algebra, image)
        if certificate is None:
            return PreservationResult(False, certificates, (label, image))
        certificates[label] = certificate
    return PreservationResult(True, certificates)
