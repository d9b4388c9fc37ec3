"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a map from exponent vectors to nonzero ``Fraction``
coefficients, attached to a :class:`VariableContext` that fixes the variable
set, the monomial order and which variables are invertible.  Invertible
(Laurent) variables may carry negative exponents; all other variables are
restricted to exponents >= 0.  Everything is immutable and exact: there is no
floating point anywhere in this package.

The module also provides simultaneous substitution maps whose images may be
Laurent monomial multiples (:class:`SubstitutionMap`), weighted-degree
computation (:func:`weight_of`), partial derivatives, and a small text format
for polynomials (``4*x*z - y^2 - l^3*w^2``) that round-trips bit-exactly
through :func:`VariableContext.parse` / ``str``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

Exponent = tuple[int, ...]

GREVLEX = ("grevlex",)
LEX = ("lex",)


def elimination_order(block_size: int) -> tuple:
    """Block order eliminating the first ``block_size`` context variables.

    Monomials are compared grevlex on the leading block first, then grevlex
    on the tail, so any monomial involving a leading-block variable beats
    every monomial that avoids the block.
    """
    if block_size < 1:
        raise ValueError("elimination block must contain at least one variable")
    return ("elim", block_size)


class PolyError(ValueError):
    """Base error for polynomial construction and arithmetic."""


class ContextMismatch(PolyError):
    """Operands live in different variable contexts."""


class NotHomogeneous(PolyError):
    """Signal raised when a polynomial has terms of distinct weighted degree."""


class ParseError(PolyError):
    """Malformed polynomial text."""


def _grevlex_key(exp: Exponent):
    return (sum(exp), tuple(-e for e in reversed(exp)))


@dataclass(frozen=True)
class VariableContext:
    """Ordered variable set with a monomial order and invertibility flags.

    Contexts compare by value, so two independently built contexts with the
    same data are interchangeable.  The order tag is one of ``GREVLEX``,
    ``LEX`` or ``elimination_order(n)``.
    """

    names: tuple[str, ...]
    invertible: frozenset[str] = frozenset()
    order: tuple = GREVLEX

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "invertible", frozenset(self.invertible))
        if len(set(self.names)) != len(self.names):
            raise PolyError(f"duplicate variable names in {self.names}")
        unknown = self.invertible - set(self.names)
        if unknown:
            raise PolyError(f"invertible variables not in context: {sorted(unknown)}")
        tag = self.order[0] if self.order else None
        if tag not in ("grevlex", "lex", "elim"):
            raise PolyError(f"unknown monomial order {self.order!r}")
        if tag == "elim" and not (1 <= self.order[1] <= len(self.names)):
            raise PolyError("elimination block size out of range")

    # -- bookkeeping -------------------------------------------------------

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PolyError(f"unknown variable {name!r} in context {self.names}") from None

    def monomial_key(self, exp: Exponent):
        """Sort key; larger key means larger monomial under the context order."""
        tag = self.order[0]
        if tag == "grevlex":
            return _grevlex_key(exp)
        if tag == "lex":
            return exp
        nb = self.order[1]
        return (_grevlex_key(exp[:nb]), _grevlex_key(exp[nb:]))

    def with_order(self, order: tuple) -> "VariableContext":
        return VariableContext(self.names, self.invertible, order)

    def extend(self, names: Iterable[str], invertible: Iterable[str] = ()) -> "VariableContext":
        return VariableContext(
            self.names + tuple(names), self.invertible | frozenset(invertible), self.order
        )

    # -- constructors ------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, value) -> "Polynomial":
        c = Fraction(value)
        if c == 0:
            return self.zero()
        return Polynomial(self, {(0,) * len(self.names): c})

    def var(self, name: str) -> "Polynomial":
        return self.monomial(1, {name: 1})

    def monomial(self, coeff, powers: Mapping[str, int]) -> "Polynomial":
        exp = [0] * len(self.names)
        for name, e in powers.items():
            exp[self.index(name)] = e
        return Polynomial(self, {tuple(exp): Fraction(coeff)})

    def from_terms(self, terms: Mapping[Exponent, Fraction]) -> "Polynomial":
        return Polynomial(self, dict(terms))

    def parse(self, text: str) -> "Polynomial":
        return _parse(self, text)


class Polynomial:
    """Immutable sparse polynomial over Q attached to a VariableContext.

    Stored terms never have zero coefficients; exponents on non-invertible
    variables are >= 0.  Equality is exact equality of the normalized term
    maps within one context.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: VariableContext, terms: Mapping[Exponent, Fraction]):
        n = len(ring.names)
        clean: dict[Exponent, Fraction] = {}
        for exp, coeff in terms.items():
            c = Fraction(coeff)
            if c == 0:
                continue
            if len(exp) != n:
                raise PolyError(f"exponent vector {exp} does not match {ring.names}")
            for name, e in zip(ring.names, exp):
                if e < 0 and name not in ring.invertible:
                    raise PolyError(f"negative exponent on non-invertible variable {name!r}")
            clean[tuple(exp)] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover - guards immutability
        raise AttributeError("Polynomial is immutable")

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def is_unit_monomial(self) -> bool:
        """True for a single term supported only on invertible variables."""
        if len(self.terms) != 1:
            return False
        (exp,) = self.terms
        return all(
            e == 0 or name in self.ring.invertible for name, e in zip(self.ring.names, exp)
        )

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise PolyError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, name: str) -> int:
        """Largest exponent of ``name`` over all terms (0 for the zero poly)."""
        i = self.ring.index(name)
        if not self.terms:
            return 0
        return max(exp[i] for exp in self.terms)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        exp = max(self.terms, key=self.ring.monomial_key)
        return exp, self.terms[exp]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        _, lc = self.leading_term()
        if lc == 1:
            return self
        return self / lc

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: self.ring.monomial_key(t[0]), reverse=True)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ContextMismatch(
                    f"contexts differ: {self.ring.names} vs {other.ring.names}"
                )
            return other
        return self.ring.const(other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp, Fraction(0)) + c
            if v == 0:
                out.pop(exp, None)
            else:
                out[exp] = v
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(exp, Fraction(0)) + c1 * c2
                if v == 0:
                    out.pop(exp, None)
                else:
                    out[exp] = v
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Polynomial":
        c = Fraction(scalar)
        if c == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return Polynomial(self.ring, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, power: int) -> "Polynomial":
        if not isinstance(power, int):
            raise PolyError("polynomial powers must be integers")
        if power < 0:
            if not self.is_unit_monomial():
                raise PolyError("negative power of a non-unit polynomial")
            (exp,), (coeff,) = zip(*self.terms.items())
            return Polynomial(
                self.ring, {tuple(e * power for e in exp): Fraction(1) / coeff ** (-power)}
            )
        result = self.ring.one()
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


# -- unit normalization ----------------------------------------------------


def unit_content(p: Polynomial) -> Exponent:
    """Componentwise minimum exponent of each invertible variable over p.

    Zero on non-invertible variables and for the zero polynomial.
    """
    n = len(p.ring.names)
    if not p.terms:
        return (0,) * n
    inv = [name in p.ring.invertible for name in p.ring.names]
    mins = [0] * n
    for i in range(n):
        if inv[i]:
            mins[i] = min(exp[i] for exp in p.terms)
    return tuple(mins)


def strip_unit_content(p: Polynomial) -> Polynomial:
    """Divide out the Laurent monomial content on invertible variables.

    The result has minimum exponent exactly 0 in every invertible variable,
    which is the canonical representative of p up to unit monomials.
    """
    content = unit_content(p)
    if not any(content):
        return p
    return Polynomial(
        p.ring,
        {tuple(e - c for e, c in zip(exp, content)): v for exp, v in p.terms.items()},
    )


# -- derivations of the ring structure --------------------------------------


def derivative(p: Polynomial, name: str) -> Polynomial:
    """Partial derivative; valid for Laurent exponents as well."""
    i = p.ring.index(name)
    out: dict[Exponent, Fraction] = {}
    for exp, c in p.terms.items():
        e = exp[i]
        if e == 0:
            continue
        nexp = exp[:i] + (e - 1,) + exp[i + 1 :]
        v = out.get(nexp, Fraction(0)) + c * e
        if v == 0:
            out.pop(nexp, None)
        else:
            out[nexp] = v
    return Polynomial(p.ring, out)


def weighted_degree(p: Polynomial, weights: Mapping[str, int]) -> int:
    """Maximum weighted degree over the terms of p (0 for the zero poly)."""
    wvec = [weights.get(name, 0) for name in p.ring.names]
    if not p.terms:
        return 0
    return max(sum(e * w for e, w in zip(exp, wvec)) for exp in p.terms)


def primitive_integer_form(p: Polynomial) -> Polynomial:
    """Rescale to integer coefficients with content 1 and positive leading sign."""
    if not p.terms:
        return p
    from math import gcd, lcm

    denom = lcm(*(c.denominator for c in p.terms.values()))
    numer = gcd(*(abs(c.numerator) for c in p.terms.values()))
    scale = Fraction(denom, numer)
    if p.leading_term()[1] < 0:
        scale = -scale
    return p * scale


def weight_of(p: Polynomial, weights: Mapping[str, int]) -> int:
    """Common weighted degree of all terms of p.

    Raises :class:`NotHomogeneous` when terms disagree.  Missing variables
    weigh 0; the zero polynomial has weight 0.
    """
    wvec = [weights.get(name, 0) for name in p.ring.names]
    seen: int | None = None
    for exp in p.terms:
        d = sum(e * w for e, w in zip(exp, wvec))
        if seen is None:
            seen = d
        elif d != seen:
            raise NotHomogeneous(
                f"terms of weight {seen} and {d} in {format_polynomial(p)}"
            )
    return 0 if seen is None else seen


# -- substitution -----------------------------------------------------------


@dataclass(frozen=True)
class SubstitutionMap:
    """Simultaneous substitution sending each source variable to a polynomial.

    Every source variable must be assigned; images live in one target
    context (which may equal the source).  Images of invertible source
    variables must be unit monomials so that negative exponents resolve.
    """

    source: VariableContext
    target: VariableContext
    assignments: Mapping[str, Polynomial] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "assignments", dict(self.assignments))
        missing = set(self.source.names) - set(self.assignments)
        if missing:
            raise PolyError(f"unassigned variables: {sorted(missing)}")
        extra = set(self.assignments) - set(self.source.names)
        if extra:
            raise PolyError(f"assignments for unknown variables: {sorted(extra)}")
        for name, img in self.assignments.items():
            if img.ring != self.target:
                raise PolyError(f"image of {name!r} lives outside the target context")
            # Invertible variables need single-term images so negative powers
            # can resolve; inverting a non-invertible monomial fails at apply
            # time, when a negative exponent actually occurs.
            if name in self.source.invertible and len(img.terms) != 1:
                raise PolyError(
                    f"invertible variable {name!r} must map to a unit monomial, got "
                    f"{format_polynomial(img)}"
                )

    @staticmethod
    def identity(ring: VariableContext) -> "SubstitutionMap":
        return SubstitutionMap(ring, ring, {n: ring.var(n) for n in ring.names})

    def __call__(self, name: str) -> Polynomial:
        return self.assignments[name]

    def apply(self, p: Polynomial) -> Polynomial:
        if p.ring != self.source:
            raise ContextMismatch("polynomial does not live in the substitution source")
        powers: dict[str, dict[int, Polynomial]] = {n: {} for n in self.source.names}

        def power(name: str, e: int) -> Polynomial:
            cache = powers[name]
            if e not in cache:
                cache[e] = self.assignments[name] ** e
            return cache[e]

        result = self.target.zero()
        for exp, coeff in p.terms.items():
            term = self.target.const(coeff)
            for name, e in zip(self.source.names, exp):
                if e:
                    term = term * power(name, e)
            result = result + term
        return result

    def then(self, other: "SubstitutionMap") -> "SubstitutionMap":
        """Composite map applying self first, then other."""
        if self.target != other.source:
            raise ContextMismatch("composition requires matching middle context")
        return SubstitutionMap(
            self.source,
            other.target,
            {n: other.apply(img) for n, img in self.assignments.items()},
        )


def substitute(p: Polynomial, s: SubstitutionMap) -> Polynomial:
    """Fully expanded simultaneous substitution of s into p."""
    return s.apply(p)


# -- text format -------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    return tokens


class _Parser:
    def __init__(self, ring: VariableContext, tokens: list[tuple[str, str]]):
        self.ring = ring
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self) -> Polynomial:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                nxt = self.term()
                result = result + (nxt if val == "+" else -nxt)
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.factor()
            elif kind in ("name",) or (kind == "op" and val == "("):
                result = result * self.factor()  # juxtaposition
            else:
                return result

    def factor(self) -> Polynomial:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            base = base ** self.exponent()
        return base

    def exponent(self) -> int:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            sign = -1
        kind, val = self.take()
        if kind != "int":
            raise ParseError(f"expected integer exponent, got {val!r}")
        return sign * int(val)

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "int":
            num = int(val)
            k2, v2 = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3 = self.take()
                if k3 != "int":
                    raise ParseError("expected denominator after '/'")
                return self.ring.const(Fraction(num, int(v3)))
            return self.ring.const(num)
        if kind == "name":
            return self.ring.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            k2, v2 = self.take()
            if not (k2 == "op" and v2 == ")"):
                raise ParseError("missing closing parenthesis")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def _parse(ring: VariableContext, text: str) -> Polynomial:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    parser = _Parser(ring, tokens)
    result = parser.expr()
    if parser.pos != len(tokens):
        raise ParseError(f"trailing input near {tokens[parser.pos][1]!r}")
    return result


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form: terms in descending monomial order.

    The output re-parses to an equal polynomial in the same context.
    """
    if not p.terms:
        return "0"
    pieces = []
    for exp, coeff in p.sorted_terms():
        factors = []
        for name, e in zip(p.ring.names, exp):
            if e == 0:
                continue
            factors.append(name if e == 1 else f"{name}^{e}")
        mag = abs(coeff)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag)] + factors)
        pieces.append(("-" if coeff < 0 else "+", body))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
