"""Acceptance criteria: one test and one printed pass/fail line each.

Every assertion is an exact identity (rational arithmetic, integer lattice
values, transcript equality); the only tolerances are the stated wall-clock
budgets, pinned here as hard bounds.
"""

import random
import time
from pathlib import Path

from qhv import cli
from qhv.degenerations import (
    adjudicate_f4_generators,
    derive_f4_ideal,
    f4_chart,
    glued_family,
    quadric_chart,
    quadric_generator,
    quadric_singular_loci,
    reference_f4_generators,
    verify_embedding,
    verify_equivariance,
    verify_gluing,
    verify_quotient,
)
from qhv.group_actions import (
    F4_CHART_RING,
    QUADRIC_CHART_RING,
    apply,
    brackets_hold_on_monomials,
    leibniz_holds,
    monomials_up_to_degree,
    sl2_v2_triple,
    sl2_v4_triple,
)
from qhv.ideals import Ideal, groebner, is_groebner_basis, jacobian_ideal, normal_form
from qhv.polyring import SubstitutionMap, VariableContext, strip_unit_content, substitute
from qhv.ruled import (
    A0,
    AINF,
    E0,
    EINF,
    DivisorClass,
    construct_twisted,
    figure1_normalize,
    homology_lemma_cases,
    intersect,
    minus_one_curves,
    quadric_blowup,
    replay_reversed,
)
from qhv.singular import CyclicQuotient, classify_terminal_types, is_terminal, wps_singularity_report
from linalg_oracle import is_member_bounded, is_member_up_to
from randpoly import random_polynomial, random_ring

QUADRIC_TWISTS = (1, 3, 5, 7, 9)
F4_TWISTS = (0, 1, 2, 3)
GOLDEN_DIR = Path(__file__).resolve().parent.parent / "goldens"


def _line(number: int, ok: bool, text: str):
    print(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {text}")


def test_criterion_01_gluing_identity():
    start = time.perf_counter()
    ok = True
    for k in QUADRIC_TWISTS:
        for l in QUADRIC_TWISTS:
            fam = glued_family("quadric", k, l)
            image = strip_unit_content(
                substitute(fam.chart0.ideal.generators[0], fam.gluing)
            )
            ok = ok and image == quadric_generator(l)
            ok = ok and verify_gluing(fam)["passed"]
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    _line(1, ok, f"gluing carries each zero-chart equation to the infinity-chart "
                 f"equation exactly after clearing ({elapsed:.2f}s)")
    assert ok


def test_criterion_02_equivariance():
    ext = QUADRIC_CHART_RING.extend(("xi",), invertible=("xi",))
    ok = True
    for k in QUADRIC_TWISTS:
        for l in QUADRIC_TWISTS:
            fam = glued_family("quadric", k, l)
            report = verify_equivariance(fam)
            ok = ok and report["passed"]
            rows = {r["variable"]: r for r in report["torus"]}
            # the scaling parameter identity and the twisted-coordinate identity
            expected_l = ext.parse("l^-1*xi^2")
            expected_w = ext.monomial(1, {"w": 1, "l": (k + l) // 2, "xi": -k})
            ok = ok and ext.parse(rows["l"]["action_then_glue"]) == expected_l
            ok = ok and ext.parse(rows["l"]["glue_then_action"]) == expected_l
            ok = ok and ext.parse(rows["w"]["action_then_glue"]) == expected_w
            ok = ok and ext.parse(rows["w"]["glue_then_action"]) == expected_w
    _line(2, ok, "torus action and gluing commute as polynomial identities in xi")
    assert ok


def test_criterion_03_sl2_stability():
    ok = True
    for k in QUADRIC_TWISTS:
        I = quadric_chart(k).ideal
        T = sl2_v2_triple()
        for D in T.operators():
            for g in I.generators:
                ok = ok and normal_form(apply(D, g), I).is_zero()
    for k in F4_TWISTS:
        I = f4_chart(k).ideal
        T = sl2_v4_triple(k)
        for D in T.operators():
            for g in I.generators:
                ok = ok and normal_form(apply(D, g), I).is_zero()
    _line(3, ok, "every raising/weight/lowering image reduces to normal form 0")
    assert ok


def test_criterion_04_embedding_identity():
    ok = all(verify_embedding(k)["passed"] for k in F4_TWISTS)
    _line(4, ok, "the quadratic parametrization annihilates all derived "
                 "generators for twists 0..3")
    assert ok


def test_criterion_05_quotient_identity():
    ok = True
    for k in F4_TWISTS:
        report = verify_quotient(k)
        ok = ok and report["passed"]
        ok = ok and all(
            row["in_quadric_ideal"] and row["sign_invariant"]
            for row in report["witnesses"]
        )
    _line(5, ok, "derived generators pull back into the quadric ideal and are "
                 "fixed by the sign involution")
    assert ok


def test_criterion_06_generator_adjudication(capsys):
    ok = True
    for k in F4_TWISTS:
        adjudication = adjudicate_f4_generators(k)
        ok = ok and adjudication["matched"]
    variant_flags = [
        row["member"]
        for row in adjudicate_f4_generators(1)["rows"]
        if row["source"] == "variant"
    ]
    ok = ok and variant_flags == [True, True, True, True, False, True]
    # deterministic golden file, duration excluded from the comparison
    code = cli.main(["verify", "f4", "--golden", str(GOLDEN_DIR)])
    capsys.readouterr()
    ok = ok and code == 0
    _line(6, ok, "derived ideal matches the recorded six member-by-member; "
                 "exactly the known transcription deviation is a non-member")
    assert ok


def test_criterion_07_smoothness_and_singularity():
    report1 = quadric_singular_loci(1)
    ok = report1["passed"] and all(
        r["status"] == "smooth" for r in report1["charts"].values()
    )
    for k in (3, 5):
        report = quadric_singular_loci(k)
        ok = ok and report["passed"]
        ok = ok and report["charts"]["w"]["status"] == "single_point_origin"
        ok = ok and all(
            report["charts"][c]["status"] == "smooth" for c in ("x", "y", "z")
        )
    _line(7, ok, "twist 1 is smooth on all charts; twists 3 and 5 are singular "
                 "exactly at the single chart origin")
    assert ok


def test_criterion_08_terminality():
    ok = is_terminal(CyclicQuotient(2, (1, 1, 1)))
    ok = ok and not is_terminal(CyclicQuotient(3, (1, 1, 1)))
    ok = ok and is_terminal(CyclicQuotient(3, (1, 1, 2)))
    start = time.perf_counter()
    table = classify_terminal_types(50)
    elapsed = time.perf_counter() - start
    ok = ok and table == [] and elapsed < 10.0
    for weights in ((1, 1, 1, 2), (1, 1, 2, 3)):
        rows = wps_singularity_report(list(weights))
        ok = ok and rows and all(r["terminal"] for r in rows)
    _line(8, ok, f"age criterion values, empty counterexample table up to "
                 f"order 50 ({elapsed:.1f}s), terminal vertex reports")
    assert ok


def test_criterion_09_lattice_analysis():
    counts = {r: len(minus_one_curves(quadric_blowup(r))) for r in (0, 1, 2)}
    counts_ok = counts == {0: 0, 1: 3, 2: 7}  # stated counts, asserted literally
    lat = quadric_blowup(1)
    c1 = DivisorClass(lat, (1, 0, 1))
    c2 = DivisorClass(lat, (0, 0, -1))
    c3 = DivisorClass(lat, (0, 1, 1))
    gram_ok = (
        intersect(c1, c2) == 1 and intersect(c2, c3) == 1 and intersect(c1, c3) == 0
    )
    witness_ok = all(
        homology_lemma_cases(fiber)["passed"]
        and all(case["product"] <= 0 for case in homology_lemma_cases(fiber)["cases"])
        for fiber in ("sigma1", "blowup1", "blowup2")
    )
    ok = counts_ok and gram_ok and witness_ok
    _line(9, ok, f"minus-one counts {tuple(counts[r] for r in (0, 1, 2))} vs stated "
                 f"(0, 3, 7); witness and intersection clauses "
                 f"{'hold' if gram_ok and witness_ok else 'fail'}")
    assert gram_ok and witness_ok
    assert counts_ok, (
        "stated count 7 for r=2 is unattainable: the blowup of the quadric "
        "surface in two general points is the degree-6 del Pezzo surface, "
        "whose (-1)-classes are e1, e2, f1-e1, f1-e2, f2-e1, f2-e2 (six); "
        "the additionally listed class f1+f2-e1-e2 has self-intersection 0. "
        "Verified by exhaustive enumeration with coordinate bound 6."
    )


def test_criterion_10_figure1_round_trip():
    rng = random.Random(271828)
    start = time.perf_counter()
    ok = True
    for _ in range(500):
        n = rng.randint(1, 5)
        k0 = rng.randint(0, 6)
        kinf = rng.randint(0, 6)
        state = construct_twisted(n, k0, kinf)
        final, steps = figure1_normalize(state)  # StopB would raise
        ok = ok and final.fiber_m == 0
        ok = ok and len(steps) == k0 + kinf
        ok = ok and replay_reversed(n, steps) == state
        rebuilt = tuple({A0: E0, AINF: EINF}[s] for s in reversed(steps))
        ok = ok and rebuilt == state.transcript
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    _line(10, ok, f"500 randomized normalizations stop at the trivial fiber in "
                  f"k0+kinf steps with exact round-trip ({elapsed:.2f}s)")
    assert ok


def test_criterion_11_engine_soundness():
    ok = True
    # Buchberger postcondition on every basis the artifact computes
    audited = []
    for k in QUADRIC_TWISTS:
        audited.append(Ideal([quadric_generator(k)]))
    for k in F4_TWISTS:
        audited.append(derive_f4_ideal(k))
        audited.append(Ideal(reference_f4_generators(k)))
    chart_ring = VariableContext(("x", "y", "z", "l"))
    for k in (1, 3, 5):
        audited.append(
            jacobian_ideal(
                Ideal([chart_ring.parse(f"4*x*z - y^2 - l^{k}")]), chart_ring.names
            )
        )
    for ideal in audited:
        ok = ok and is_groebner_basis(groebner(ideal))

    # the once-computed specialized basis against its stored form, each
    # element cross-checked by the independent linear-algebra oracle
    plain_ring = VariableContext(("a", "b", "c", "e", "f", "g"))
    images = {n: plain_ring.var(n) for n in "abcefg"}
    images["l"] = plain_ring.one()
    specialize = SubstitutionMap(F4_CHART_RING, plain_ring, images)
    specialized = [specialize.apply(g) for g in derive_f4_ideal(1).generators]
    basis = groebner(Ideal(specialized))
    stored = (GOLDEN_DIR / "f4-basis-k1-lambda1.txt").read_text().splitlines()
    ok = ok and [str(g) for g in basis] == stored
    ok = ok and all(is_member_up_to(g, specialized, 2) for g in basis)

    # membership agreement with the oracle on 200 random small instances
    rng = random.Random(60902)
    checked = 0
    while checked < 200:
        ring = random_ring(rng, max_vars=3)
        gens = [
            random_polynomial(rng, ring, max_degree=2, max_terms=3)
            for _ in range(rng.randint(1, 3))
        ]
        I = Ideal(gens)
        if rng.random() < 0.5:
            p = ring.zero()
            for g in gens:
                p = p + random_polynomial(rng, ring, max_degree=2, max_terms=2) * g
            if p.is_zero():
                continue
            ok = ok and normal_form(p, I).is_zero() and is_member_up_to(p, gens, 4)
        else:
            p = random_polynomial(rng, ring, max_degree=3, max_terms=3)
            if normal_form(p, I).is_zero():
                ok = ok and is_member_up_to(p, gens, 4)
            else:
                ok = ok and not is_member_bounded(p, gens, 2)
        checked += 1

    # Leibniz and bracket relations on monomials
    v2, v4 = sl2_v2_triple(), sl2_v4_triple(1)
    ok = ok and brackets_hold_on_monomials(v2, degree=4)
    ok = ok and brackets_hold_on_monomials(v4, degree=4)
    small = monomials_up_to_degree(QUADRIC_CHART_RING, 2)
    for D in v2.operators():
        for p in small:
            for q in small:
                ok = ok and leibniz_holds(D, p, q)
    rng = random.Random(140)
    for _ in range(500):
        p = random_polynomial(rng, QUADRIC_CHART_RING, max_degree=3)
        q = random_polynomial(rng, QUADRIC_CHART_RING, max_degree=3)
        ok = ok and all(leibniz_holds(D, p, q) for D in v2.operators())
    _line(11, ok, "S-polynomial postcondition, oracle agreement on 200 "
                  "instances, Leibniz and bracket relations")
    assert ok
