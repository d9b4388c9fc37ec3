"""Derivations, sl2 triples and torus scalings on coordinate rings.

A :class:`Derivation` assigns a polynomial image to every ring variable and
extends to the whole ring by the Leibniz rule; the sl2 operators used by the
degeneration checks are concrete derivations.  A :class:`TorusAction` records
the integer scaling weight of each variable, making semi-invariance a
termwise weight computation and the scaling identity a polynomial identity in
a formal invertible parameter ``xi``.

The standard raising/lowering convention used everywhere in this package:
on the quadric chart ring,

    E = {x -> y, y -> 2z, z -> 0},   H = {x -> -2x, y -> 0, z -> 2z},
    F = {x -> 0, y -> 2x, z -> y},

so H-weights of (x, y, z) are (-2, 0, 2), E raises the weight by 2, and the
commutators satisfy [H,E] = 2E, [H,F] = -2F, [E,F] = H as operators.  All
three annihilate 4xz - y^2.  The five-variable triple is never transcribed:
it is pushed forward through the quadratic embedding

    a = x^2, b = 2xy, c = 2xz + y^2, e = 2yz, f = z^2, g = l^-k (4xz - y^2)

by differentiating each coordinate function and re-expressing the result as a
linear form in (a, .., f, l^k g).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import ideals
from .polyring import (
    NotHomogeneous,
    PolyError,
    Polynomial,
    SubstitutionMap,
    VariableContext,
    weight_of,
)

#: Chart ring of the quadric degenerations ([x:y:z:w] and the base parameter l).
QUADRIC_CHART_RING = VariableContext(("x", "y", "z", "w", "l"), invertible={"l"})

#: Chart ring of the F4 degenerations ([a:b:c:e:f:g] and the base parameter l).
F4_CHART_RING = VariableContext(("a", "b", "c", "e", "f", "g", "l"), invertible={"l"})


@dataclass(frozen=True)
class Derivation:
    """Variable-to-polynomial assignment extended by the Leibniz rule."""

    ring: VariableContext
    images: Mapping[str, Polynomial] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "images", dict(self.images))
        missing = set(self.ring.names) - set(self.images)
        if missing:
            raise PolyError(f"derivation lacks images for {sorted(missing)}")
        for name, img in self.images.items():
            if img.ring != self.ring:
                raise PolyError(f"image of {name!r} lives in a different context")

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)


def apply(D: Derivation, p: Polynomial) -> Polynomial:
    """Leibniz extension of D applied to p; valid on Laurent exponents."""
    if p.ring != D.ring:
        raise PolyError("polynomial does not live in the derivation's ring")
    ring = D.ring
    result = ring.zero()
    for exp, coeff in p.terms.items():
        for i, name in enumerate(ring.names):
            e = exp[i]
            if e == 0:
                continue
            img = D.images[name]
            if img.is_zero():
                continue
            lowered = exp[:i] + (e - 1,) + exp[i + 1 :]
            factor = Polynomial(ring, {lowered: coeff * e})
            result = result + factor * img
    return result


def commutator(D1: Derivation, D2: Derivation) -> Derivation:
    """Operator commutator D1 D2 - D2 D1, again a derivation."""
    if D1.ring != D2.ring:
        raise PolyError("commutator requires one ring")
    ring = D1.ring
    return Derivation(
        ring,
        {n: apply(D1, D2.images[n]) - apply(D2, D1.images[n]) for n in ring.names},
    )


@dataclass(frozen=True)
class Sl2Triple:
    """Raising, weight and lowering operators with [H,E]=2E, [H,F]=-2F, [E,F]=H."""

    E: Derivation
    H: Derivation
    F: Derivation

    def operators(self) -> tuple[Derivation, Derivation, Derivation]:
        return (self.E, self.H, self.F)

    def bracket_defects(self) -> list[Polynomial]:
        """Per-variable defects of the three bracket relations; all zero iff valid."""
        out = []
        for got, want in (
            (commutator(self.H, self.E), _scale(self.E, 2)),
            (commutator(self.H, self.F), _scale(self.F, -2)),
            (commutator(self.E, self.F), self.H),
        ):
            for name in self.E.ring.names:
                out.append(got.images[name] - want.images[name])
        return out


def _scale(D: Derivation, c) -> Derivation:
    return Derivation(D.ring, {n: img * Fraction(c) for n, img in D.images.items()})


def monomials_up_to_degree(ring: VariableContext, degree: int) -> list[Polynomial]:
    """All monomials of total degree <= degree with nonnegative exponents."""
    n = len(ring.names)
    out = []
    for total in range(degree + 1):
        for cuts in itertools.combinations_with_replacement(range(n), total):
            exp = [0] * n
            for i in cuts:
                exp[i] += 1
            out.append(Polynomial(ring, {tuple(exp): Fraction(1)}))
    return out


def brackets_hold_on_monomials(T: Sl2Triple, degree: int = 4) -> bool:
    """Check the three bracket relations termwise on all monomials up to ``degree``."""
    ring = T.E.ring
    pairs = (
        (T.H, T.E, _scale(T.E, 2)),
        (T.H, T.F, _scale(T.F, -2)),
        (T.E, T.F, T.H),
    )
    for m in monomials_up_to_degree(ring, degree):
        for A, B, want in pairs:
            lhs = apply(A, apply(B, m)) - apply(B, apply(A, m))
            if lhs != apply(want, m):
                return False
    return True


def leibniz_holds(D: Derivation, p: Polynomial, q: Polynomial) -> bool:
    return apply(D, p * q) == apply(D, p) * q + p * apply(D, q)


# -- the concrete triples ----------------------------------------------------


def sl2_v2_triple(ring: VariableContext = QUADRIC_CHART_RING) -> Sl2Triple:
    """The standard triple on (x, y, z), all other ring variables fixed.

    E and F annihilate 4xz - y^2, H has weights (-2, 0, 2) on (x, y, z).
    """
    for needed in ("x", "y", "z"):
        ring.index(needed)
    zero = ring.zero()

    def images(x_img, y_img, z_img):
        base = {n: zero for n in ring.names}
        base["x"], base["y"], base["z"] = x_img, y_img, z_img
        return base

    E = Derivation(ring, images(ring.var("y"), 2 * ring.var("z"), zero))
    H = Derivation(ring, images(-2 * ring.var("x"), zero, 2 * ring.var("z")))
    F = Derivation(ring, images(zero, 2 * ring.var("x"), ring.var("y")))
    triple = Sl2Triple(E, H, F)
    if any(not d.is_zero() for d in triple.bracket_defects()):
        raise AssertionError("sl2 bracket normalization broken")
    return triple


_XYZ = VariableContext(("x", "y", "z"))

#: Coordinate functions of the quadratic embedding, indexed like (a, b, c, e, f)
#: plus the invariant quadric that l^k g pulls back to.
EMBEDDING_COMPONENTS: dict[str, Polynomial] = {
    "a": _XYZ.parse("x^2"),
    "b": _XYZ.parse("2*x*y"),
    "c": _XYZ.parse("2*x*z + y^2"),
    "e": _XYZ.parse("2*y*z"),
    "f": _XYZ.parse("z^2"),
}

#: 4xz - y^2, the quadric invariant; the image of l^k g under the embedding.
QUADRIC_INVARIANT: Polynomial = _XYZ.parse("4*x*z - y^2")


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a square exact linear system by Gaussian elimination."""
    n = len(matrix)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise PolyError("singular re-expression system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def _express_in_embedding(q: Polynomial) -> list[Fraction]:
    """Coordinates of a quadratic form in the basis (a,b,c,e,f, invariant)."""
    basis = list(EMBEDDING_COMPONENTS.values()) + [QUADRIC_INVARIANT]
    monoms = sorted({m for b in basis for m in b.terms} | set(q.terms))
    if len(monoms) != 6:
        raise PolyError("image is not a quadratic form in (x, y, z)")
    matrix = [[b.terms.get(m, Fraction(0)) for b in basis] for m in monoms]
    rhs = [q.terms.get(m, Fraction(0)) for m in monoms]
    return _solve_exact(matrix, rhs)


def sl2_v4_triple(k: int, ring: VariableContext = F4_CHART_RING) -> Sl2Triple:
    """Triple on (a, .., f) obtained by push-forward through the embedding.

    Each image is the derivative of the corresponding coordinate function,
    re-expressed as a linear form in (a, .., f, l^k g); g and l map to 0.
    """
    if k < 0:
        raise PolyError("twist must be nonnegative")
    for needed in ("a", "b", "c", "e", "f", "g", "l"):
        ring.index(needed)
    source = sl2_v2_triple(VariableContext(("x", "y", "z"), order=_XYZ.order))
    zero = ring.zero()
    dressed_g = ring.monomial(1, {"l": k, "g": 1})

    def push(D: Derivation) -> Derivation:
        images = {n: zero for n in ring.names}
        for name, component in EMBEDDING_COMPONENTS.items():
            coords = _express_in_embedding(apply(D, component))
            img = ring.zero()
            for coeff, target in zip(coords, ("a", "b", "c", "e", "f")):
                img = img + ring.var(target) * coeff
            img = img + dressed_g * coords[5]
            images[name] = img
        return Derivation(ring, images)

    triple = Sl2Triple(push(source.E), push(source.H), push(source.F))
    if any(not d.is_zero() for d in triple.bracket_defects()):
        raise AssertionError("push-forward broke the bracket relations")
    return triple


# -- invariance checks -------------------------------------------------------


def check_ideal_invariance(I: ideals.Ideal, T: Sl2Triple, max_steps: int | None = None) -> bool:
    """True iff every operator image of every generator lies in I."""
    return all(
        ideals.contains(I, apply(D, g), max_steps)
        for D in T.operators()
        for g in I.generators
    )


@dataclass(frozen=True)
class TorusAction:
    """Diagonal one-parameter scaling: each variable scales by xi^weight."""

    weights: Mapping[str, int] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", dict(self.weights))

    def weight(self, p: Polynomial) -> int:
        return weight_of(p, self.weights)

    def is_semi_invariant(self, p: Polynomial) -> bool:
        try:
            self.weight(p)
            return True
        except NotHomogeneous:
            return False

    def scaling_map(self, ring: VariableContext, xi: str = "xi") -> SubstitutionMap:
        """Substitution v -> xi^w(v) * v into the ring extended by invertible xi."""
        ext = ring.extend((xi,), invertible=(xi,))
        return SubstitutionMap(
            ring,
            ext,
            {
                n: ext.monomial(1, {xi: self.weights.get(n, 0), n: 1})
                for n in ring.names
            },
        )


def check_semi_invariance(I: ideals.Ideal, A: TorusAction) -> bool:
    """True iff every generator is weight-homogeneous for A."""
    return all(A.is_semi_invariant(g) for g in I.generators)


def scaling_identity_holds(p: Polynomial, A: TorusAction, xi: str = "xi") -> bool:
    """Literal identity: substituting the scaling yields xi^d times p."""
    try:
        d = A.weight(p)
    except NotHomogeneous:
        return False
    ring = p.ring
    scale = A.scaling_map(ring, xi)
    ext = scale.target
    inclusion = SubstitutionMap(ring, ext, {n: ext.var(n) for n in ring.names})
    return scale.apply(p) == ext.monomial(1, {xi: d}) * inclusion.apply(p)


# -- weight bases ------------------------------------------------------------


def generate_weight_basis(
    middle: Polynomial, T: Sl2Triple, steps: int
) -> list[Polynomial]:
    """Weight vectors [F^s m, .., F m, m, E m, .., E^s m] with zero tails trimmed.

    ``middle`` must be an H-weight-0 vector (H kills it); this reconstructs
    the weight basis of the representation generated by the middle vector.
    """
    if not apply(T.H, middle).is_zero():
        raise NotHomogeneous("middle vector is not H-homogeneous of weight 0")
    down: list[Polynomial] = []
    current = middle
    for _ in range(steps):
        current = apply(T.F, current)
        if current.is_zero():
            break
        down.append(current)
    up: list[Polynomial] = []
    current = middle
    for _ in range(steps):
        current = apply(T.E, current)
        if current.is_zero():
            break
        up.append(current)
    return list(reversed(down)) + [middle] + up
