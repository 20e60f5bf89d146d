"""Exact sparse multivariate polynomial arithmetic over the rationals.

All values are immutable after construction and every operation is a pure
function, so they may be shared freely across threads.  Coefficients are
arbitrary-precision `fractions.Fraction`; nothing in this module rounds.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

COORDINATE = "coordinate"
PARAMETER = "parameter"

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class VarSystemMismatch(ValueError):
    """Operands do not live over compatible variable systems."""


class ParseError(ValueError):
    """Malformed polynomial text."""


class VarSystem:
    """An ordered list of distinct variable names, each tagged with a role.

    Coordinates carry grading weight 1; parameters (formal group
    parameters) carry weight 0.  The declared order is fixed forever and
    defines the canonical graded-lexicographic monomial order.
    """

    __slots__ = ("names", "roles", "_index", "_coord_idx", "_param_idx")

    def __init__(self, names: Sequence[str], roles: Sequence[str] | None = None):
        names = tuple(names)
        roles = tuple(roles) if roles is not None else (COORDINATE,) * len(names)
        if len(roles) != len(names):
            raise ValueError("need exactly one role per variable")
        for role in roles:
            if role not in (COORDINATE, PARAMETER):
                raise ValueError(f"unknown variable role {role!r}")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        for name in names:
            if not _NAME_RE.fullmatch(name):
                raise ValueError(f"invalid variable name {name!r}")
        self.names = names
        self.roles = roles
        self._index = {name: i for i, name in enumerate(names)}
        self._coord_idx = tuple(i for i, r in enumerate(roles) if r == COORDINATE)
        self._param_idx = tuple(i for i, r in enumerate(roles) if r == PARAMETER)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def coordinate_names(self) -> tuple[str, ...]:
        return tuple(self.names[i] for i in self._coord_idx)

    @property
    def parameter_names(self) -> tuple[str, ...]:
        return tuple(self.names[i] for i in self._param_idx)

    @property
    def coordinate_indices(self) -> tuple[int, ...]:
        return self._coord_idx

    @property
    def parameter_indices(self) -> tuple[int, ...]:
        return self._param_idx

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise VarSystemMismatch(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VarSystem):
            return NotImplemented
        return self.names == other.names and self.roles == other.roles

    def __hash__(self) -> int:
        return hash((self.names, self.roles))

    def __repr__(self) -> str:
        return f"VarSystem({list(self.names)!r})"

    def degree_of(self, mono: Monomial) -> int:
        """Grading degree of a monomial: parameters weigh zero."""
        exps = mono.exponents
        if len(exps) != self.nvars:
            raise VarSystemMismatch("monomial length does not match system")
        return sum(exps[i] for i in self._coord_idx)

    def extend(self, names: Iterable[str], role: str = PARAMETER) -> VarSystem:
        extra = tuple(names)
        return VarSystem(self.names + extra, self.roles + (role,) * len(extra))

    def drop(self, names: Iterable[str]) -> VarSystem:
        gone = set(names)
        keep = [i for i, nm in enumerate(self.names) if nm not in gone]
        return VarSystem(
            tuple(self.names[i] for i in keep), tuple(self.roles[i] for i in keep)
        )

    def unit_monomial(self) -> Monomial:
        return Monomial((0,) * self.nvars)

    def monomial(self, exponents: Mapping[str, int]) -> Monomial:
        exps = [0] * self.nvars
        for name, e in exponents.items():
            exps[self.index(name)] = e
        return Monomial(exps)

    def variable(self, name: str) -> Polynomial:
        return Polynomial(self, {self.monomial({name: 1}): Fraction(1)})

    def constant(self, value) -> Polynomial:
        return Polynomial(self, {self.unit_monomial(): Fraction(value)})

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)


class Monomial:
    """An exponent vector; one entry per variable of some VarSystem."""

    __slots__ = ("exponents", "_hash")

    def __init__(self, exponents: Iterable[int]):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be nonnegative")
        self.exponents = exps
        self._hash = hash(exps)

    def degree(self) -> int:
        return sum(self.exponents)

    def mul(self, other: Monomial) -> Monomial:
        if len(self.exponents) != len(other.exponents):
            raise VarSystemMismatch("monomials over different systems")
        return Monomial(a + b for a, b in zip(self.exponents, other.exponents))

    def divides(self, other: Monomial) -> bool:
        if len(self.exponents) != len(other.exponents):
            return False
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def divide(self, other: Monomial) -> Monomial:
        """Exact quotient self / other; other must divide self."""
        if not other.divides(self):
            raise ValueError("monomial does not divide")
        return Monomial(a - b for a, b in zip(self.exponents, other.exponents))

    def sort_key(self) -> tuple:
        # Ascending sort under this key lists monomials in graded-lex
        # descending order (highest degree first, earlier variables heavier).
        return (-self.degree(), tuple(-e for e in self.exponents))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        return self.exponents == other.exponents

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Monomial({list(self.exponents)!r})"


class Polynomial:
    """Sparse polynomial: a finite map Monomial -> nonzero Fraction.

    Canonical form holds by construction: no stored coefficient is zero,
    and equality is equality of term maps over equal variable systems.
    """

    __slots__ = ("varsys", "terms")

    def __init__(self, varsys: VarSystem, terms: Mapping[Monomial, object]):
        nv = varsys.nvars
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in terms.items():
            if len(mono.exponents) != nv:
                raise VarSystemMismatch("monomial length does not match system")
            c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
            if c:
                clean[mono] = c
        self.varsys = varsys
        self.terms = clean

    # -- predicates and views -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def constant_coefficient(self) -> Fraction:
        return self.coeff(self.varsys.unit_monomial())

    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(sorted(self.terms, key=Monomial.sort_key))

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return min(self.terms, key=Monomial.sort_key)

    def degree(self) -> int:
        """Grading (coordinate total) degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(self.varsys.degree_of(m) for m in self.terms)

    def total_degree(self) -> int:
        """Total degree counting every variable, parameters included."""
        if not self.terms:
            return -1
        return max(m.degree() for m in self.terms)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        if not self.terms:
            return True
        degs = {self.varsys.degree_of(m) for m in self.terms}
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def homogeneous_component(self, degree: int) -> Polynomial:
        vs = self.varsys
        return Polynomial(
            vs, {m: c for m, c in self.terms.items() if vs.degree_of(m) == degree}
        )

    def homogeneous_components(self) -> dict[int, Polynomial]:
        vs = self.varsys
        split: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            split.setdefault(vs.degree_of(m), {})[m] = c
        return {d: Polynomial(vs, t) for d, t in sorted(split.items())}

    # -- ring operations ------------------------------------------------------

    def _coerce(self, other) -> Polynomial | None:
        if isinstance(other, Polynomial):
            if other.varsys != self.varsys:
                raise VarSystemMismatch("polynomials over different systems")
            return other
        if isinstance(other, (int, Fraction)):
            return self.varsys.constant(other)
        return None

    def __add__(self, other) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in rhs.terms.items():
            new = terms.get(m, Fraction(0)) + c
            if new:
                terms[m] = new
            else:
                terms.pop(m, None)
        return Polynomial(self.varsys, terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.varsys, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.varsys.zero()
            return Polynomial(self.varsys, {m: c * other for m, c in self.terms.items()})
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in rhs.terms.items():
                m = m1.mul(m2)
                new = terms.get(m, Fraction(0)) + c1 * c2
                if new:
                    terms[m] = new
                else:
                    terms.pop(m, None)
        return Polynomial(self.varsys, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.varsys.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.varsys.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.varsys == other.varsys and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]  # mutable mapping inside

    # -- calculus and substitution --------------------------------------------

    def partial(self, name: str) -> Polynomial:
        """Formal partial derivative with respect to one variable."""
        i = self.varsys.index(name)
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m.exponents[i]
            if e:
                exps = list(m.exponents)
                exps[i] = e - 1
                mono = Monomial(exps)
                new = terms.get(mono, Fraction(0)) + c * e
                if new:
                    terms[mono] = new
                else:
                    terms.pop(mono, None)
        return Polynomial(self.varsys, terms)

    def substitute(
        self,
        images: Mapping[str, Polynomial],
        target: VarSystem | None = None,
    ) -> Polynomial:
        """Ring-homomorphism evaluation: replace variables by polynomials.

        Variables without an image map to the same-named variable of the
        target system (identity default).  All images must share one target
        system; a variable that has no image and is absent from the target
        is an error.
        """
        for name in images:
            self.varsys.index(name)
        if target is None:
            target = next(iter(images.values())).varsys if images else self.varsys
        for name, img in images.items():
            if img.varsys != target:
                raise VarSystemMismatch(f"image of {name!r} is not over the target system")

        occurring: set[int] = set()
        for m in self.terms:
            for i, e in enumerate(m.exponents):
                if e:
                    occurring.add(i)
        base: dict[int, Polynomial] = {}
        for i in occurring:
            name = self.varsys.names[i]
            if name in images:
                base[i] = images[name]
            elif name in target:
                base[i] = target.variable(name)
            else:
                raise VarSystemMismatch(f"variable {name!r} absent from the target system")

        powers: dict[int, list[Polynomial]] = {i: [target.one()] for i in base}
        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * base[i])
            return cache[e]

        result = target.zero()
        for m, c in self.terms.items():
            term = target.constant(c)
            for i, e in enumerate(m.exponents):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def embed(self, target: VarSystem) -> Polynomial:
        """Reinterpret over a larger (or reordered) system, matching by name."""
        if target == self.varsys:
            return self
        mapping = [target.index(name) for name in self.varsys.names]
        nv = target.nvars
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            exps = [0] * nv
            for i, e in enumerate(m.exponents):
                if e:
                    exps[mapping[i]] = e
            terms[Monomial(exps)] = c
        return Polynomial(target, terms)

    def coefficients_in(self, names: Sequence[str]) -> dict[tuple[int, ...], Polynomial]:
        """Collect terms by their exponents on `names`.

        Returns a map from exponent tuples (in the order given) to
        coefficient polynomials over the system with `names` removed.
        """
        idxs = [self.varsys.index(nm) for nm in names]
        gone = set(idxs)
        rest_vs = self.varsys.drop(names)
        split: dict[tuple[int, ...], dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            key = tuple(m.exponents[i] for i in idxs)
            rest = Monomial(e for i, e in enumerate(m.exponents) if i not in gone)
            split.setdefault(key, {})[rest] = c
        return {k: Polynomial(rest_vs, t) for k, t in sorted(split.items())}

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"<Polynomial {format_polynomial(self)}>"


def monomials_of_degree(
    varsys: VarSystem, degree: int, names: Sequence[str] | None = None
) -> tuple[Monomial, ...]:
    """All monomials of the given grading degree in the chosen coordinates.

    Defaults to every coordinate of the system; parameters never appear.
    The result is in canonical (graded-lex descending) order.
    """
    if degree < 0:
        return ()
    if names is None:
        idxs = list(varsys.coordinate_indices)
    else:
        idxs = [varsys.index(nm) for nm in names]
        for i in idxs:
            if varsys.roles[i] != COORDINATE:
                raise ValueError(f"{varsys.names[i]!r} is not a coordinate")
    nv = varsys.nvars
    out: list[Monomial] = []

    def descend(pos: int, remaining: int, exps: list[int]) -> None:
        if pos == len(idxs) - 1:
            exps[idxs[pos]] = remaining
            out.append(Monomial(exps))
            exps[idxs[pos]] = 0
            return
        for e in range(remaining, -1, -1):
            exps[idxs[pos]] = e
            descend(pos + 1, remaining - e, exps)
        exps[idxs[pos]] = 0

    if not idxs:
        return (Monomial((0,) * nv),) if degree == 0 else ()
    descend(0, degree, [0] * nv)
    out.sort(key=Monomial.sort_key)
    return tuple(out)


# -- text format --------------------------------------------------------------
#
# ASCII with `^` for powers and optional `*`; exact rational coefficients as
# p/q.  `format_polynomial` and `parse_polynomial` round-trip bit-exactly.

def format_monomial(mono: Monomial, varsys: VarSystem) -> str:
    parts = []
    for name, e in zip(varsys.names, mono.exponents):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    chunks: list[str] = []
    for mono in f.monomials():
        c = f.terms[mono]
        mono_str = format_monomial(mono, f.varsys)
        mag = abs(c)
        if mono_str == "1":
            body = str(mag)
        elif mag == 1:
            body = mono_str
        else:
            body = f"{mag}*{mono_str}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()/]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:]!r}")
        if match.lastgroup is None:
            break
        tokens.append((match.lastgroup, match.group(match.lastgroup)))
        pos = match.end()
    if text[pos:].strip():
        raise ParseError(f"unexpected trailing text: {text[pos:]!r}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], varsys: VarSystem):
        self.tokens = tokens
        self.pos = 0
        self.varsys = varsys

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r}, found {tok[1]!r}")

    def parse_expression(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        result = self.parse_term() * sign
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                break
            self.take()
            term = self.parse_term()
            result = result + term if tok[1] == "+" else result - term
        return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok == ("op", "*"):
                self.take()
                result = result * self.parse_factor()
            elif tok[0] in ("int", "name") or tok == ("op", "("):
                result = result * self.parse_factor()  # implicit product
            else:
                break
        return result

    def parse_factor(self) -> Polynomial:
        base = self.parse_primary()
        tok = self.peek()
        if tok == ("op", "^"):
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "int":
                raise ParseError(f"expected integer exponent, found {exp_tok[1]!r}")
            return base ** int(exp_tok[1])
        return base

    def parse_primary(self) -> Polynomial:
        kind, value = self.take()
        if kind == "int":
            numerator = int(value)
            if self.peek() == ("op", "/"):
                self.take()
                den_tok = self.take()
                if den_tok[0] != "int" or int(den_tok[1]) == 0:
                    raise ParseError("malformed rational coefficient")
                return self.varsys.constant(Fraction(numerator, int(den_tok[1])))
            return self.varsys.constant(numerator)
        if kind == "name":
            if value not in self.varsys:
                raise ParseError(f"unknown variable {value!r}")
            return self.varsys.variable(value)
        if (kind, value) == ("op", "("):
            inner = self.parse_expression()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {value!r}")


def parse_polynomial(text: str, varsys: VarSystem) -> Polynomial:
    parser = _Parser(_tokenize(text), varsys)
    result = parser.parse_expression()
    if parser.peek() is not None:
        raise ParseError(f"unexpected token {parser.peek()[1]!r}")
    return result
