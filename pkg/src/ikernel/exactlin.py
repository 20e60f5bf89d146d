"""Exact rational linear algebra over bases of monomials.

Dense matrices of `Fraction` entries at the API; internally rows are scaled
to primitive integer vectors so elimination stays in machine-fast integer
arithmetic while remaining exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .poly import Monomial, Polynomial, VarSystem, VarSystemMismatch

_STRIP_LIMIT = 1 << 64  # strip row content once entries grow past this


def _content(row: Sequence[int]) -> int:
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class Echelon:
    """Gauss-Jordan accumulator over exact integer rows.

    Rows are kept primitive with positive leading entry, distinct pivot
    columns, and mutually reduced, so emitting (rows divided by their
    pivots) yields the unique reduced row echelon basis of the span.
    With `track=True` every stored row also carries its expression as an
    exact linear combination of the inserted vectors, keyed by insertion
    ordinal.
    """

    __slots__ = ("width", "rows", "pivots", "exprs", "inserted")

    def __init__(self, width: int, track: bool = False):
        self.width = width
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []
        self.exprs: list[dict[int, Fraction]] | None = [] if track else None
        self.inserted = 0

    @property
    def dim(self) -> int:
        return len(self.rows)

    def insert(self, vec: Sequence[Fraction | int]) -> bool:
        """Add one vector to the span; True iff the rank grew."""
        if len(vec) != self.width:
            raise ValueError("vector width mismatch")
        ordinal = self.inserted
        self.inserted += 1

        scale = 1
        for v in vec:
            if isinstance(v, Fraction) and v.denominator != 1:
                scale = lcm(scale, v.denominator)
        row = [int(v * scale) for v in vec]
        expr: dict[int, Fraction] | None = None
        if self.exprs is not None:
            expr = {ordinal: Fraction(scale)}

        for k in range(len(self.rows)):
            p = self.pivots[k]
            a = row[p]
            if not a:
                continue
            other = self.rows[k]
            lead = other[p]
            row = [lead * x - a * y for x, y in zip(row, other)]
            if expr is not None:
                oexpr = self.exprs[k]
                expr = {j: lead * c for j, c in expr.items()}
                for j, c in oexpr.items():
                    expr[j] = expr.get(j, Fraction(0)) - a * c
            if max(map(abs, row), default=0) > _STRIP_LIMIT:
                g = _content(row)
                if g > 1:
                    row = [x // g for x in row]
                    if expr is not None:
                        expr = {j: c / g for j, c in expr.items()}

        pivot = next((i for i, v in enumerate(row) if v), None)
        if pivot is None:
            return False

        g = _content(row)
        if row[pivot] < 0:
            g = -g
        if g != 1:
            row = [x // g for x in row]
            if expr is not None:
                expr = {j: c / g for j, c in expr.items()}

        # Clear the new pivot column from the existing rows.
        lead = row[pivot]
        for k in range(len(self.rows)):
            b = self.rows[k][pivot]
            if not b:
                continue
            updated = [lead * x - b * y for x, y in zip(self.rows[k], row)]
            gk = _content(updated)
            if gk > 1:
                updated = [x // gk for x in updated]
            self.rows[k] = updated
            if self.exprs is not None and expr is not None:
                merged = {j: lead * c for j, c in self.exprs[k].items()}
                for j, c in expr.items():
                    merged[j] = merged.get(j, Fraction(0)) - b * c
                if gk > 1:
                    merged = {j: c / gk for j, c in merged.items()}
                self.exprs[k] = merged

        at = 0
        while at < len(self.pivots) and self.pivots[at] < pivot:
            at += 1
        self.rows.insert(at, row)
        self.pivots.insert(at, pivot)
        if self.exprs is not None:
            self.exprs.insert(at, expr if expr is not None else {})
        return True

    def emit(
        self,
    ) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[int, ...], tuple[dict[int, Fraction], ...] | None]:
        """Reduced echelon rows (pivots normalized to 1), pivot columns, expressions."""
        vectors = []
        exprs_out = [] if self.exprs is not None else None
        for k, row in enumerate(self.rows):
            lead = row[self.pivots[k]]
            vectors.append(tuple(Fraction(x, lead) for x in row))
            if exprs_out is not None:
                exprs_out.append({j: c / lead for j, c in self.exprs[k].items()})
        return tuple(vectors), tuple(self.pivots), (
            tuple(exprs_out) if exprs_out is not None else None
        )


class RationalMatrix:
    """Dense matrix of exact rationals."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Sequence[Fraction | int]], ncols: int | None = None):
        data = []
        for row in rows:
            data.append(tuple(v if isinstance(v, Fraction) else Fraction(v) for v in row))
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            width = widths.pop()
            if ncols is not None and ncols != width:
                raise ValueError("ncols disagrees with row width")
            ncols = width
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        self.rows = tuple(data)
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(
            [[Fraction(int(i == j)) for j in range(n)] for i in range(n)], ncols=n
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.rows == other.rows and self.ncols == other.ncols

    def __repr__(self) -> str:
        return f"RationalMatrix({[list(map(str, r)) for r in self.rows]})"

    def rref(self) -> tuple[RationalMatrix, tuple[int, ...]]:
        """Reduced row echelon form (same shape, zero rows at the bottom)
        together with the pivot columns."""
        ech = Echelon(self.ncols)
        for row in self.rows:
            ech.insert(row)
        vectors, pivots, _ = ech.emit()
        zero = (Fraction(0),) * self.ncols
        padded = vectors + (zero,) * (self.nrows - len(vectors))
        return RationalMatrix(padded, ncols=self.ncols), pivots

    def rank(self) -> int:
        ech = Echelon(self.ncols)
        for row in self.rows:
            ech.insert(row)
        return ech.dim

    def nullspace(self) -> tuple[tuple[Fraction, ...], ...]:
        """Canonical nullspace basis: one vector per free column, ascending."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        out = []
        for j in range(self.ncols):
            if j in pivot_set:
                continue
            vec = [Fraction(0)] * self.ncols
            vec[j] = Fraction(1)
            for i, p in enumerate(pivots):
                vec[p] = -reduced.rows[i][j]
            out.append(tuple(vec))
        return tuple(out)


def solve_columns(
    columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]
) -> tuple[Fraction, ...] | None:
    """One exact solution of  sum_j c_j * columns[j] = target,  or None.

    Deterministic: the reduced-echelon particular solution with every free
    unknown set to zero.
    """
    m = len(target)
    for col in columns:
        if len(col) != m:
            raise ValueError("column height mismatch")
    n = len(columns)
    rows = [[columns[j][k] for j in range(n)] + [target[k]] for k in range(m)]
    reduced, pivots = RationalMatrix(rows, ncols=n + 1).rref()
    solution = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        if p == n:
            return None  # inconsistent
        solution[p] = reduced.rows[i][n]
    return tuple(solution)


class SpanBasis:
    """A subspace of polynomials presented over an explicit monomial frame.

    `vectors` are the unique reduced-echelon basis rows over `ambient`
    (canonical order), so representation of any member is unique.  When the
    basis was built from an explicit spanning family, `source_coords`
    expresses each echelon row in terms of that family.
    """

    __slots__ = ("varsys", "ambient", "vectors", "pivots", "source_coords", "_polys")

    def __init__(
        self,
        varsys: VarSystem,
        ambient: Sequence[Monomial],
        vectors: Sequence[Sequence[Fraction]],
        pivots: Sequence[int],
        source_coords: Sequence[Sequence[Fraction]] | None = None,
    ):
        self.varsys = varsys
        self.ambient = tuple(ambient)
        self.vectors = tuple(tuple(v) for v in vectors)
        self.pivots = tuple(pivots)
        self.source_coords = (
            tuple(tuple(c) for c in source_coords) if source_coords is not None else None
        )
        self._polys: tuple[Polynomial, ...] | None = None

    @classmethod
    def from_polynomials(
        cls,
        varsys: VarSystem,
        polys: Sequence[Polynomial],
        frame: Sequence[Monomial] | None = None,
        track_sources: bool = True,
    ) -> SpanBasis:
        for f in polys:
            if f.varsys != varsys:
                raise VarSystemMismatch("spanning polynomial over a different system")
        if frame is None:
            seen = set()
            for f in polys:
                seen.update(f.terms)
            frame = sorted(seen, key=Monomial.sort_key)
        frame = tuple(frame)
        index = {m: i for i, m in enumerate(frame)}
        ech = Echelon(len(frame), track=track_sources)
        for f in polys:
            vec = [Fraction(0)] * len(frame)
            for m, c in f.terms.items():
                if m not in index:
                    raise ValueError("polynomial has a monomial outside the frame")
                vec[index[m]] = c
            ech.insert(vec)
        vectors, pivots, exprs = ech.emit()
        coords = None
        if exprs is not None:
            coords = [
                tuple(e.get(j, Fraction(0)) for j in range(len(polys))) for e in exprs
            ]
        return cls(varsys, frame, vectors, pivots, coords)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def polynomials(self) -> tuple[Polynomial, ...]:
        if self._polys is None:
            out = []
            for vec in self.vectors:
                terms = {m: c for m, c in zip(self.ambient, vec) if c}
                out.append(Polynomial(self.varsys, terms))
            self._polys = tuple(out)
        return self._polys

    def coordinates_of(self, f: Polynomial) -> tuple[Fraction, ...] | None:
        """Exact coordinates of f over the echelon basis rows, or None.

        Monomials of f outside the ambient frame behave as zero columns of
        the basis, so they force a negative answer unless they cancel.
        """
        if f.varsys != self.varsys:
            raise VarSystemMismatch("target over a different system")
        residual = f
        coords = []
        basis = self.polynomials()
        for row_poly, pivot in zip(basis, self.pivots):
            c = residual.coeff(self.ambient[pivot])
            coords.append(c)
            if c:
                residual = residual - row_poly * c
        if residual.is_zero():
            return tuple(coords)
        return None

    def source_coordinates_of(self, f: Polynomial) -> tuple[Fraction, ...] | None:
        """Coordinates of f over the originally supplied spanning family."""
        if self.source_coords is None:
            raise ValueError("basis was built without source tracking")
        coords = self.coordinates_of(f)
        if coords is None:
            return None
        n = len(self.source_coords[0]) if self.source_coords else 0
        out = [Fraction(0)] * n
        for c, row in zip(coords, self.source_coords):
            if c:
                for j, t in enumerate(row):
                    out[j] += c * t
        return tuple(out)

    def contains(self, f: Polynomial) -> bool:
        return self.coordinates_of(f) is not None

    def spans_same(self, other: SpanBasis) -> bool:
        if self.varsys != other.varsys or self.dim != other.dim:
            return False
        return all(self.contains(p) for p in other.polynomials())

    def _unified_frame(self, other: SpanBasis) -> tuple[Monomial, ...]:
        return tuple(sorted(set(self.ambient) | set(other.ambient), key=Monomial.sort_key))

    def plus(self, other: SpanBasis) -> SpanBasis:
        """Span of the union (subspace sum)."""
        if self.varsys != other.varsys:
            raise VarSystemMismatch("bases over different systems")
        frame = self._unified_frame(other)
        return SpanBasis.from_polynomials(
            self.varsys,
            self.polynomials() + other.polynomials(),
            frame=frame,
            track_sources=False,
        )

    def intersect(self, other: SpanBasis) -> SpanBasis:
        """Intersection via the kernel of the stacked bases."""
        if self.varsys != other.varsys:
            raise VarSystemMismatch("bases over different systems")
        frame = self._unified_frame(other)
        index = {m: i for i, m in enumerate(frame)}
        mine = self.polynomials()
        theirs = other.polynomials()

        def as_column(f: Polynomial, negate: bool) -> list[Fraction]:
            col = [Fraction(0)] * len(frame)
            for m, c in f.terms.items():
                col[index[m]] = -c if negate else c
            return col

        columns = [as_column(f, False) for f in mine]
        columns += [as_column(f, True) for f in theirs]
        if not columns:
            return SpanBasis.from_polynomials(self.varsys, [], frame=frame, track_sources=False)
        rows = [[col[k] for col in columns] for k in range(len(frame))]
        kernel = RationalMatrix(rows, ncols=len(columns)).nullspace()
        members = []
        for vec in kernel:
            member = self.varsys.zero()
            for c, f in zip(vec[: len(mine)], mine):
                if c:
                    member = member + f * c
            members.append(member)
        return SpanBasis.from_polynomials(
            self.varsys, members, frame=frame, track_sources=False
        )


def rref(matrix: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    return matrix.rref()


def solve_in_span(basis: SpanBasis, target: Polynomial) -> tuple[Fraction, ...] | None:
    """Exact coordinates of target in the span, or None if it is not there.

    When the basis tracks its original spanning family the coordinates are
    over that family; otherwise they are over the reduced echelon rows.
    """
    if basis.source_coords is not None:
        return basis.source_coordinates_of(target)
    return basis.coordinates_of(target)


def intersect_spans(u: SpanBasis, v: SpanBasis) -> SpanBasis:
    return u.intersect(v)
