"""Ideal arithmetic: Groebner bases, normal forms, membership, elimination.

The engine is a plain Buchberger implementation with the product and chain
criteria, full interreduction and monic normalization, so every basis it
returns is the reduced Groebner basis under the context's monomial order.
Generators carrying Laurent monomial content on invertible variables are
unit-normalized before the computation; "equality up to units" of ideals is
decided generator by generator after the same normalization.

All computations run under an explicit step budget and raise
:class:`ResourceLimitExceeded` instead of truncating silently.  The default
budget can be overridden through the ``QHV_BUDGET`` environment variable.
"""

from __future__ import annotations

import itertools
import os
from fractions import Fraction
from typing import Iterable, Sequence

from .polyring import (
    Exponent,
    Polynomial,
    PolyError,
    ContextMismatch,
    VariableContext,
    derivative,
    elimination_order,
    strip_unit_content,
)

DEFAULT_STEP_BUDGET = 2_000_000

_budget_override: int | None = None


class ResourceLimitExceeded(RuntimeError):
    """A Groebner computation exceeded its step budget."""


def set_step_budget(steps: int | None):
    """Process-wide default budget override (stronger than QHV_BUDGET)."""
    global _budget_override
    if steps is not None and steps <= 0:
        raise ValueError("budget must be positive")
    _budget_override = steps


def default_step_budget() -> int:
    if _budget_override is not None:
        return _budget_override
    raw = os.environ.get("QHV_BUDGET")
    if raw is None:
        return DEFAULT_STEP_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"QHV_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("QHV_BUDGET must be positive")
    return value


class _Counter:
    __slots__ = ("steps", "limit")

    def __init__(self, limit: int | None):
        self.steps = 0
        self.limit = default_step_budget() if limit is None else limit

    def tick(self, n: int = 1):
        self.steps += n
        if self.steps > self.limit:
            raise ResourceLimitExceeded(
                f"step budget of {self.limit} exceeded; the instance is beyond desk scale"
            )


class Ideal:
    """Finite generator list with a write-once cached reduced Groebner basis."""

    __slots__ = ("ring", "generators", "_basis")

    def __init__(self, generators: Sequence[Polynomial], ring: VariableContext | None = None):
        gens = tuple(generators)
        if not gens:
            raise PolyError("an ideal needs at least one generator (possibly zero)")
        rings = {g.ring for g in gens}
        if ring is not None:
            rings.add(ring)
        if len(rings) != 1:
            raise ContextMismatch("ideal generators live in different contexts")
        self.ring = gens[0].ring
        self.generators = gens
        self._basis: tuple[Polynomial, ...] | None = None

    def groebner_basis(self, max_steps: int | None = None) -> tuple[Polynomial, ...]:
        if self._basis is None:
            counter = _Counter(max_steps)
            self._basis = tuple(_buchberger(self.generators, self.ring, counter))
        return self._basis

    def __repr__(self):
        return f"Ideal([{', '.join(str(g) for g in self.generators)}])"


# -- division ---------------------------------------------------------------


def _divides(d: Exponent, m: Exponent) -> bool:
    return all(a <= b for a, b in zip(d, m))


def _reduce_terms(
    terms: dict[Exponent, Fraction],
    basis: Sequence[tuple[Exponent, dict[Exponent, Fraction]]],
    ring: VariableContext,
    counter: _Counter,
) -> dict[Exponent, Fraction]:
    """Canonical remainder of a term map modulo monic reducers."""
    key = ring.monomial_key
    work = dict(terms)
    remainder: dict[Exponent, Fraction] = {}
    while work:
        lead = max(work, key=key)
        coeff = work.pop(lead)
        for lt, gterms in basis:
            if _divides(lt, lead):
                shift = tuple(a - b for a, b in zip(lead, lt))
                counter.tick(len(gterms))
                for gexp, gc in gterms.items():
                    if gexp == lt:
                        continue
                    target = tuple(a + b for a, b in zip(shift, gexp))
                    v = work.get(target, Fraction(0)) - coeff * gc
                    if v == 0:
                        work.pop(target, None)
                    else:
                        work[target] = v
                break
        else:
            remainder[lead] = coeff
    return remainder


def _prepare(polys: Iterable[Polynomial]):
    out = []
    for p in polys:
        if p.is_zero():
            continue
        q = strip_unit_content(p).monic()
        lt, _ = q.leading_term()
        out.append((lt, dict(q.terms)))
    return out


def _spoly_terms(
    f: tuple[Exponent, dict[Exponent, Fraction]],
    g: tuple[Exponent, dict[Exponent, Fraction]],
) -> dict[Exponent, Fraction]:
    lf, ft = f
    lg, gt = g
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    sf = tuple(a - b for a, b in zip(lcm, lf))
    sg = tuple(a - b for a, b in zip(lcm, lg))
    out: dict[Exponent, Fraction] = {}
    for exp, c in ft.items():
        out[tuple(a + b for a, b in zip(exp, sf))] = c
    for exp, c in gt.items():
        target = tuple(a + b for a, b in zip(exp, sg))
        v = out.get(target, Fraction(0)) - c
        if v == 0:
            out.pop(target, None)
        else:
            out[target] = v
    return out


def _buchberger(
    generators: Sequence[Polynomial], ring: VariableContext, counter: _Counter
) -> list[Polynomial]:
    key = ring.monomial_key
    basis = _prepare(generators)
    if not basis:
        return []

    def lcm(a: Exponent, b: Exponent) -> Exponent:
        return tuple(max(x, y) for x, y in zip(a, b))

    def mul(a: Exponent, b: Exponent) -> Exponent:
        return tuple(x + y for x, y in zip(a, b))

    # Gebauer-Moeller style pair update: drop pairs by the product and chain
    # criteria as each new element enters the basis.
    pairs: set[tuple[int, int]] = set()

    def update(new_index: int):
        nonlocal pairs
        lm_new = basis[new_index][0]
        kept = set()
        for i, j in pairs:
            l_ij = lcm(basis[i][0], basis[j][0])
            if (
                not _divides(lm_new, l_ij)
                or lcm(basis[i][0], lm_new) == l_ij
                or lcm(basis[j][0], lm_new) == l_ij
            ):
                kept.add((i, j))
        fresh: dict[Exponent, list[int]] = {}
        for i in range(new_index):
            fresh.setdefault(lcm(basis[i][0], lm_new), []).append(i)
        minimal: list[Exponent] = []
        for l in sorted(fresh, key=key):
            if all(not _divides(m, l) for m in minimal):
                minimal.append(l)
        for l in minimal:
            if any(lcm(basis[i][0], lm_new) == mul(basis[i][0], lm_new) for i in fresh[l]):
                continue  # product criterion
            kept.add((min(fresh[l]), new_index))
        pairs = kept

    for idx in range(len(basis)):
        update(idx)

    while pairs:
        counter.tick()
        i, j = min(pairs, key=lambda p: (key(lcm(basis[p[0]][0], basis[p[1]][0])), p))
        pairs.discard((i, j))
        s = _spoly_terms(basis[i], basis[j])
        rem = _reduce_terms(s, basis, ring, counter)
        if rem:
            lead = max(rem, key=key)
            lc = rem[lead]
            basis.append((lead, {e: c / lc for e, c in rem.items()}))
            update(len(basis) - 1)

    # minimalize: keep elements whose leading monomial no other kept one divides
    basis.sort(key=lambda item: key(item[0]))
    minimal_basis = []
    for lt, terms in basis:
        if all(not _divides(k[0], lt) for k in minimal_basis):
            minimal_basis.append((lt, terms))

    # interreduce tails for the unique reduced basis
    reduced: list[Polynomial] = []
    for idx, (lt, terms) in enumerate(minimal_basis):
        others = minimal_basis[:idx] + minimal_basis[idx + 1 :]
        rem = _reduce_terms(terms, others, ring, counter)
        lc = rem[max(rem, key=key)]
        reduced.append(Polynomial(ring, {e: c / lc for e, c in rem.items()}))
    reduced.sort(key=lambda p: key(p.leading_term()[0]))
    return reduced


# -- public operations --------------------------------------------------------


def groebner(I: Ideal, max_steps: int | None = None) -> tuple[Polynomial, ...]:
    """Reduced monic Groebner basis of I under its context's order."""
    return I.groebner_basis(max_steps)


def normal_form(p: Polynomial, I: Ideal, max_steps: int | None = None) -> Polynomial:
    """Unique remainder of p modulo the reduced basis of I."""
    if p.ring != I.ring:
        raise ContextMismatch("polynomial and ideal contexts differ")
    basis = I.groebner_basis(max_steps)
    prepared = [(g.leading_term()[0], dict(g.terms)) for g in basis]
    counter = _Counter(max_steps)
    rem = _reduce_terms(dict(p.terms), prepared, I.ring, counter)
    return Polynomial(I.ring, rem)


def contains(I: Ideal, p: Polynomial, max_steps: int | None = None) -> bool:
    return normal_form(p, I, max_steps).is_zero()


def equal_up_to_units(I: Ideal, J: Ideal, max_steps: int | None = None) -> bool:
    """Generator-by-generator ideal equality after clearing unit monomials.

    Each generator of either side is normalized by a single Laurent monomial
    in the invertible variables and then tested for membership in the other
    (likewise normalized) ideal.
    """
    if I.ring != J.ring:
        raise ContextMismatch("ideals live in different contexts")
    In = Ideal([strip_unit_content(g) for g in I.generators])
    Jn = Ideal([strip_unit_content(g) for g in J.generators])
    return all(
        contains(Jn, g, max_steps) for g in In.generators
    ) and all(contains(In, h, max_steps) for h in Jn.generators)


def convert_context(p: Polynomial, target: VariableContext) -> Polynomial:
    """Rewrite p in a context that contains all variables in its support."""
    positions = []
    for i, name in enumerate(p.ring.names):
        if any(exp[i] for exp in p.terms):
            positions.append((i, target.index(name)))
        else:
            positions.append((i, target.index(name) if name in target.names else -1))
    width = len(target.names)
    out = {}
    for exp, c in p.terms.items():
        nexp = [0] * width
        for i, j in positions:
            if exp[i]:
                nexp[j] = exp[i]
        out[tuple(nexp)] = c
    return Polynomial(target, out)


def eliminate(I: Ideal, drop: Iterable[str], max_steps: int | None = None) -> Ideal:
    """Generators of the contraction of I to the subring without ``drop``.

    Computes a Groebner basis under a block order with the dropped variables
    in the leading block and keeps the elements free of them.  The result
    lives in the smaller context (same order tag family, grevlex).
    """
    drop_set = set(drop)
    unknown = drop_set - set(I.ring.names)
    if unknown:
        raise PolyError(f"cannot eliminate unknown variables {sorted(unknown)}")
    if not drop_set:
        return I
    block = [n for n in I.ring.names if n in drop_set]
    rest = [n for n in I.ring.names if n not in drop_set]
    elim_ctx = VariableContext(
        tuple(block + rest), I.ring.invertible, elimination_order(len(block))
    )
    lifted = Ideal([convert_context(g, elim_ctx) for g in I.generators])
    basis = lifted.groebner_basis(max_steps)
    nb = len(block)
    target = VariableContext(tuple(rest), I.ring.invertible & set(rest))
    kept = [
        convert_context(g, target)
        for g in basis
        if all(all(e == 0 for e in exp[:nb]) for exp in g.terms)
    ]
    if not kept:
        kept = [target.zero()]
    return Ideal(kept)


def _det(matrix: list[list[Polynomial]], ring: VariableContext) -> Polynomial:
    if len(matrix) == 1:
        return matrix[0][0]
    total = ring.zero()
    for col in range(len(matrix)):
        entry = matrix[0][col]
        if entry.is_zero():
            continue
        minor = [[row[c] for c in range(len(matrix)) if c != col] for row in matrix[1:]]
        cofactor = _det(minor, ring)
        total = total + entry * cofactor * (-1) ** col
    return total


def jacobian_ideal(I: Ideal, variables: Sequence[str]) -> Ideal:
    """Singular-locus ideal of V(I) on an affine chart.

    For a hypersurface this is the ideal generated by the single equation and
    its partials; multi-generator input adds every maximal minor of the
    Jacobian matrix instead.
    """
    names = list(variables)
    gens = list(I.generators)
    if len(gens) == 1:
        extra = [derivative(gens[0], v) for v in names]
    else:
        if len(gens) > len(names):
            raise PolyError("more generators than chart variables; not a complete intersection")
        jac = [[derivative(g, v) for v in names] for g in gens]
        extra = []
        for cols in itertools.combinations(range(len(names)), len(gens)):
            minor = [[row[c] for c in cols] for row in jac]
            extra.append(_det(minor, I.ring))
    return Ideal(gens + extra)


def contains_one(I: Ideal, max_steps: int | None = None) -> bool:
    """True when I is the unit ideal (the chart is smooth for Jacobian ideals)."""
    return contains(I, I.ring.one(), max_steps)


def minimal_generators(
    polys: Sequence[Polynomial],
    max_steps: int | None = None,
    degree=None,
) -> list[Polynomial]:
    """Greedy minimal generating subset, scanning by ascending degree.

    ``degree`` defaults to total degree; pass a callable to rank by a custom
    grading (for instance one in which a unit-like variable weighs zero).  A
    candidate already contained in the ideal of the kept ones is dropped.
    Deterministic: ties are broken by the context's monomial order on
    leading terms.
    """
    ring = polys[0].ring
    if degree is None:
        degree = Polynomial.total_degree
    ordered = sorted(
        (p for p in polys if not p.is_zero()),
        key=lambda p: (degree(p), ring.monomial_key(p.leading_term()[0])),
    )
    kept: list[Polynomial] = []
    for p in ordered:
        if kept and contains(Ideal(kept), p, max_steps):
            continue
        kept.append(p)
    return kept


def spolynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """S-polynomial of two nonzero polynomials in one context (monic inputs)."""
    if f.ring != g.ring:
        raise ContextMismatch("S-polynomial requires one context")
    fm, gm = f.monic(), g.monic()
    terms = _spoly_terms(
        (fm.leading_term()[0], dict(fm.terms)), (gm.leading_term()[0], dict(gm.terms))
    )
    return Polynomial(f.ring, terms)


def is_groebner_basis(basis: Sequence[Polynomial], max_steps: int | None = None) -> bool:
    """Buchberger postcondition: every S-polynomial reduces to zero."""
    if not basis:
        return True
    ring = basis[0].ring
    prepared = [(g.monic().leading_term()[0], dict(g.monic().terms)) for g in basis]
    counter = _Counter(max_steps)
    for i in range(len(prepared)):
        for j in range(i + 1, len(prepared)):
            s = _spoly_terms(prepared[i], prepared[j])
            if _reduce_terms(s, prepared, ring, counter):
                return False
    return True
