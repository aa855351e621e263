"""Exit criteria.  Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line; the
lines are repeated in the terminal summary (see conftest)."""
import random
import time
from fractions import Fraction
from itertools import product

import pytest

from typact.action_engine import perm as P
from typact.action_engine.action import FiniteAction
from typact.action_engine.closure import centralizer_brute, canonical_parametrization, good_approx_defect, weak_closure_witness
from typact.action_engine.extend import extend_finite_action, relations_hold, restriction_is_lift
from typact.action_engine.metric import dn_brute, dn_cycle, metric_d, product_inequality_check
from typact.action_engine.presentation import Presentation
from typact.action_engine.rge import random_instance
from typact.chacon import averaging_identity, chacon_select, chacon_verify, random_instance as chacon_instance
from typact.classify import (
    FiniteGroupTable,
    embeds,
    extends_to_any,
    extends_to_any_exhaustive,
    extends_to_free,
    oracle_embeds,
    validate_witness,
    weak_isomorphic,
)
from typact.duality import annihilator_mask, spectral_criterion_masks
from typact.finite import FiniteAbelian, abelian_groups_up_to
from typact.grammar import parse_group as G
from typact.group_model import OMEGA, direct_sum, from_invariant_factors, group, m_bar

from helpers import random_action

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, str] = {}


def report(n, ok, detail, elapsed=None, limit=None):
    timing = "" if elapsed is None else f" in {elapsed:.1f}s" + ("" if limit is None else f" (limit {limit}s)")
    if limit is not None and elapsed is not None and elapsed >= limit:
        ok = False
    line = f"ACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}: {detail}{timing}"
    RESULTS[n] = line
    print(line)
    assert ok, line


# ----------------------------------------------------------------- 1
def test_criterion_1_embeds_oracle():
    t0 = time.perf_counter()
    groups = abelian_groups_up_to(64)
    tables = {f: FiniteGroupTable(f) for f in groups}
    descs = {f: from_invariant_factors(f) for f in groups}
    bad = []
    for h, g in product(groups, repeat=2):
        if embeds(descs[h], descs[g]).answer != oracle_embeds(tables[h], tables[g]):
            bad.append((h, g))
    n = len(groups) ** 2
    report(1, not bad, f"{n - len(bad)}/{n} ordered pairs of order <= 64 agree with the oracle", time.perf_counter() - t0, 60)


# ----------------------------------------------------------------- 2
WEAK_GOLDEN = [
    ("(Z/2)^inf + (Z/4)^inf", "(Z/4)^inf", True),
    ("(Z/2)^inf + Z/4", "(Z/2)^inf + (Z/4)^2", False),
    ("(Z/2)^inf", "(Z/2)^inf + Z/2", True),
    ("(Z/2)^inf", "(Z/2)^inf + Z/4", False),
    ("(Z/2)^inf", "(Z/2)^inf + Z/3", False),
    ("(Z/4)^inf + Z/2", "(Z/4)^inf", True),
    ("(Z/4)^inf + (Z/2)^5", "(Z/4)^inf + (Z/2)^inf", True),
    ("(Z/8)^inf", "(Z/8)^inf + (Z/4)^inf + (Z/2)^inf", True),
    ("(Z/8)^inf", "(Z/4)^inf", False),
    ("(Z/8)^inf + Z/16", "(Z/8)^inf", False),
    ("(Z/3)^inf + (Z/9)^2", "(Z/3)^inf + (Z/9)^2 + (Z/3)^4", True),
    ("(Z/3)^inf + (Z/9)^2", "(Z/3)^inf + Z/9", False),
    ("(Z/6)^inf", "(Z/2)^inf + (Z/3)^inf", True),
    ("(Z/6)^inf", "(Z/2)^inf + Z/3", False),
    ("(Z/2)^inf + (Z/3)^inf + (Z/5)^inf", "(Z/30)^inf", True),
    ("(Z/4)^inf + (Z/9)^inf", "(Z/2)^inf + (Z/4)^inf + (Z/3)^inf + (Z/9)^inf", True),
    ("(Z/4)^3 + (Z/2)^inf", "(Z/4)^3 + (Z/2)^inf + Z/2", True),
    ("(Z/4)^3 + (Z/2)^inf", "(Z/4)^2 + (Z/2)^inf", False),
    ("(Z/5)^inf + Z/25", "(Z/5)^inf + Z/25 + Z/5", True),
    ("(Z/5)^inf + Z/25", "(Z/25)^inf", False),
]


def weak_golden_list():
    cases = [(G(a), G(b), ans) for a, b, ans in WEAK_GOLDEN]
    rng = random.Random(20240)
    while len(cases) < 50:
        p = rng.choice([2, 3])
        top = rng.randint(1, 3)
        k_inf = rng.randint(1, top)
        base = {(p, k_inf): OMEGA}
        for k in range(k_inf + 1, top + 1):
            base[(p, k)] = rng.randint(0, 2)
        a = group(cyclic=base)
        if rng.random() < 0.5:
            # absorbed summands below the infinite multiplicity: weakly isomorphic
            j = rng.randint(1, k_inf)
            b = direct_sum(a, group(cyclic={(p, j): rng.choice([1, 2, OMEGA])}))
            ans = True
        else:
            # an extra summand above the infinite multiplicity changes m_bar there
            b = direct_sum(a, group(cyclic={(p, top + 1): 1}))
            ans = False
        cases.append((a, b, ans))
    return cases


def test_criterion_2_weak_isomorphism():
    t0 = time.perf_counter()
    groups = abelian_groups_up_to(96)
    descs = {f: from_invariant_factors(f) for f in groups}
    bad = 0
    pairs = 0
    for a, b in product(groups, repeat=2):
        pairs += 1
        w = weak_isomorphic(descs[a], descs[b]).answer
        iso = a == b
        same = descs[a] == descs[b]
        if not (w == iso == same):
            bad += 1
        elif len(descs[a].cyclic) and FiniteAbelian(a).order == FiniteAbelian(b).order and FiniteAbelian(a).order <= 48:
            mutual = oracle_embeds(FiniteGroupTable(a), FiniteGroupTable(b)) and oracle_embeds(FiniteGroupTable(b), FiniteGroupTable(a))
            bad += mutual != iso
    sym_bad = 0
    cases = weak_golden_list()
    for a, b, ans in cases:
        mutual = embeds(a, b).answer and embeds(b, a).answer
        route = m_bar(a) == m_bar(b)
        sym_bad += not (mutual == route == ans == weak_isomorphic(a, b).answer)
    report(
        2,
        bad == 0 and sym_bad == 0 and len(cases) == 50,
        f"finite: {pairs - bad}/{pairs} pairs of order <= 96 consistent; symbolic: {50 - sym_bad}/50 golden cases",
        time.perf_counter() - t0,
    )


# ----------------------------------------------------------------- 3
def decision_table():
    rows = [("Z", "Z^2", True, "H-unbounded")]
    for n in range(1, 11):
        # n Z is infinite cyclic, so its description is Z
        rows.append(("Z", "Z", True, "H-unbounded"))
    rows += [
        ("(Z/2)^inf", "(Z/2)^inf + Z/3", False, "bounded-mbar-differ"),
        ("(Z/2)^inf", "(Z/2)^inf + Z/4", False, "bounded-mbar-differ"),
        ("(Z/2)^inf", "(Z/2)^inf", True, "bounded-mbar-equal"),
        ("(Z/2)^inf + (Z/4)^inf", "(Z/4)^inf", True, "bounded-mbar-equal"),
        ("(Z/2)^inf", "(Z/2)^inf + Z", False, "bounded-G-unbounded"),
        ("T(2)", "T(2) + Z^inf", True, "H-unbounded"),
        ("C(3^inf)", "C(3^inf)^2", True, "H-unbounded"),
    ]
    for h in ["0", "Z/2", "Z/4", "Z/6", "(Z/2)^3", "Z/9 + Z/3"]:
        for g in ["Z", "Z^2", "(Z/2)^inf", "T(3)", "Z/2", "C(5^inf)"]:
            rows.append((h, g, True, "H-finite"))
    return rows


def test_criterion_3_decision_table():
    rows = decision_table()
    bad = []
    for h, g, ans, rule in rows:
        d = extends_to_free(G(h), G(g))
        if (d.answer, d.rule) != (ans, rule):
            bad.append((h, g, d.answer, d.rule))
    report(3, not bad, f"{len(rows) - len(bad)}/{len(rows)} decision-table rows match answer and rule")


# ----------------------------------------------------------------- 4
def random_bounded(rng, infinite):
    cyc = {}
    for p in rng.sample([2, 3], rng.randint(1, 2)):
        for k in rng.sample([1, 2, 3], rng.randint(1, 3)):
            cyc[(p, k)] = rng.choice([0, 1, 2, OMEGA])
    if infinite and OMEGA not in cyc.values():
        cyc[next(iter(cyc))] = OMEGA
    return group(cyclic=cyc)


def extend_any_suite():
    rng = random.Random(6008)
    cases = []
    while len(cases) < 100:
        h = random_bounded(rng, infinite=True)
        r = rng.random()
        if r < 0.4:
            g = direct_sum(h, random_bounded(rng, infinite=False))
        elif r < 0.8:
            g = random_bounded(rng, infinite=True)
        else:
            g = direct_sum(random_bounded(rng, infinite=True), group(towers=[rng.choice([2, 3])]))
        if embeds(h, g):
            cases.append((h, g))
    return cases


def test_criterion_4_extend_any():
    ex1 = extends_to_any(G("(Z/2)^inf"), G("(Z/2)^inf + Z/3"))
    ex2 = extends_to_any(G("(Z/2)^inf"), G("(Z/4)^inf"))
    examples_ok = ex1.answer and ex1.witness == G("(Z/2)^inf") and not ex2.answer
    bad, yes = [], 0
    for h, g in extend_any_suite():
        d = extends_to_any(h, g)
        ok = d.answer == extends_to_any_exhaustive(h, g)
        if d.answer:
            yes += 1
            ok = ok and d.witness is not None and validate_witness(h, g, d.witness) and m_bar(d.witness) == m_bar(h)
        if not ok:
            bad.append((h, g))
    report(
        4,
        examples_ok and not bad and 0 < yes < 100,
        f"examples {'ok' if examples_ok else 'wrong'}; {100 - len(bad)}/100 random cases match the exhaustive oracle ({yes} yes, witnesses re-validated)",
    )


# ----------------------------------------------------------------- 5
def test_criterion_5_metric():
    t0 = time.perf_counter()
    rng = random.Random(55)

    def rp(q):
        p = list(range(q))
        rng.shuffle(p)
        return tuple(p)

    formula_bad = 0
    for i in range(200):
        q = 1 + i % 12
        s, t = rp(q), rp(q)
        rho = P.compose(P.inverse(s), t)
        formula_bad += dn_cycle(rho) != dn_brute(rho)
    prod_bad = 0
    for i in range(1000):
        factors = rng.choice([(12,), (2, 6), (8,), (2, 4), (3, 3), (2, 2, 2)])
        img = sorted(FiniteAction.regular(factors).image)
        pairs = [(rng.choice(img), rng.choice(img)) for _ in range(rng.randint(1, 4))]
        prod_bad += not product_inequality_check(pairs)[2]
    tri_bad = 0
    for i in range(1000):
        q = rng.choice([2, 3, 4, 6, 8, 12])
        a, b, c = rp(q), rp(q), rp(q)
        tri_bad += not metric_d(a, c) <= metric_d(a, b) + metric_d(b, c)
    report(
        5,
        formula_bad == prod_bad == tri_bad == 0,
        f"cycle formula {200 - formula_bad}/200, product inequality {1000 - prod_bad}/1000, triangle {1000 - tri_bad}/1000",
        time.perf_counter() - t0,
        30,
    )


# ----------------------------------------------------------------- 6
def test_criterion_6_extension():
    t0 = time.perf_counter()
    rng = random.Random(22)
    bad = 0
    for i in range(500):
        a = random_action(rng)
        for _ in range(rng.randint(1, 2)):
            k = rng.choice([OMEGA, 1, 2, 3])
            h = None if k is OMEGA else tuple(rng.randint(-2, 2) for _ in range(a.rank))
            ext = extend_finite_action(a, k, h)
            ok = relations_hold(ext.action) and restriction_is_lift(ext, a)
            if k is not OMEGA:
                ok = ok and P.power(ext.action.gens[-1], k) == P.lift(a.element(h), k)
            bad += not ok
            a = ext.action
    report(6, bad == 0, f"{500 - bad}/500 extension chains are homomorphisms restricting to the lifted base", time.perf_counter() - t0, 30)


# ----------------------------------------------------------------- 7
def test_criterion_7_weak_closure():
    groups = [f for f in abelian_groups_up_to(48)]
    bad = []
    for f in groups:
        a = FiniteAction.regular(f)
        cent = centralizer_brute(a)
        ok = len(cent) == a.q and set(cent) == set(a.image)
        if a.q > 1:
            param = canonical_parametrization(a)
            for s in cent:
                w = weak_closure_witness(a, s, param)
                ok = ok and a.element(w.element) == s
        if not ok:
            bad.append(f)
    report(7, not bad, f"{len(groups) - len(bad)}/{len(groups)} regular actions of order <= 48: centralizer = image, witnesses exact")


# ----------------------------------------------------------------- 8
def test_criterion_8_chacon():
    t0 = time.perf_counter()
    rng = random.Random(46)
    bad = 0
    for _ in range(10_000):
        inst = chacon_instance(rng)
        g, sc = chacon_select(inst)
        lhs, rhs = averaging_identity(inst)
        bad += not (inst.hypothesis() and chacon_verify(inst, g).meets_bound and lhs == rhs)
    report(8, bad == 0, f"{10_000 - bad}/10000 instances meet the bound with the averaging identity exact", time.perf_counter() - t0, 60)


# ----------------------------------------------------------------- 9
def test_criterion_9_duality():
    groups = abelian_groups_up_to(36)
    pairs = bad = 0
    for f in groups:
        g = FiniteAbelian(f)
        subs = g.subgroups()
        ann = {h: annihilator_mask(g, h) for h in subs}
        for h in subs:
            bad += ann[h].bit_count() * h.bit_count() != g.order
            for k in subs:
                lhs, rhs = spectral_criterion_masks(g, h, k, ann[h], ann[k])
                pairs += 1
                bad += lhs != rhs
    report(9, bad == 0, f"{pairs} subgroup pairs over {len(groups)} groups of order <= 36, {bad} mismatches")


# ---------------------------------------------------------------- 10
def test_criterion_10_rge():
    exact = hyp = held = 0
    for seed in range(100):
        res = random_instance(seed).run()
        exact += res.relations_exact and res.commuting
        if res.hypotheses_hold:
            hyp += 1
            held += res.bound_holds
    report(10, exact == 100 and held == hyp and hyp > 0, f"relations exact {exact}/100; bound holds on {held}/{hyp} instances meeting the hypotheses")


# ---------------------------------------------------------------- 11
def rotation(n, k, order=OMEGA):
    return FiniteAction(n, (tuple((x + k) % n for x in range(n)),), Presentation((order,)))


def test_criterion_11_defect():
    rng = random.Random(11)
    lift_bad = 0
    for _ in range(50):
        p = random_action(rng, ngens=rng.randint(1, 2), relabel=True)
        while not p.is_finite_transitive():
            p = random_action(rng, factors=rng.choice([(6,), (2, 4), (3, 3), (2, 2, 2), (10,), (12,)]), ngens=2)
        lift_bad += good_approx_defect(p.lift(rng.randint(1, 3)), p) != 0
    # rotation by alpha = 1/2 + 1/8 + 1/4096 on 8192 blocks; p at q rotates by round(alpha q)
    Q = 8192
    alpha = Fraction(2561, 4096)
    target = rotation(Q, int(alpha * Q))
    seq = []
    for q in (2, 8, 4096):
        k = round(alpha * q)
        seq.append(good_approx_defect(target, rotation(q, k, q)))
    monotone = all(a >= b for a, b in zip(seq, seq[1:]))
    report(
        11,
        lift_bad == 0 and monotone,
        f"lift defect zero on {50 - lift_bad}/50; rotation defects at q = 2, 8, 4096: {', '.join(map(str, seq))}",
    )
