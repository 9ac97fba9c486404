import random
from fractions import Fraction as F

import pytest

from refdep.choices import warp_over
from refdep.engine import ReferenceOrder
from refdep.exceptions import AxiomFails, InfeasibleFit, NotIncreasing
from refdep.risk import (
    AreuParams,
    Concavity,
    Fanning,
    check_avoidable_risk,
    check_risk_reference_dependence,
    concavity_compare,
    extreme_spread,
    fanning_classify,
    fit_areu,
    fosd,
    independence_over,
    least_risky,
    linkage_report_risk,
    mps,
    rho_vector,
    riskier_than,
    simulate_areu,
    transitivity_over,
    betweenness_over,
    triangle_rows,
    verify_areu,
    worst_dilution,
)

from helpers import (
    ALLAIS_LOTTERIES,
    all_menus,
    allais_dataset,
    areu_instance,
    lot,
    lottery_dataset,
    random_rho_monotone_areu,
    reverse_allais_dataset,
)

PRIZES = (F(0), F(3000), F(4000))


def vec(w, m, b):
    return (F(w), F(m), F(b))


# -- the risk orders ---------------------------------------------------------


def test_fosd_best_dominates_worst():
    assert fosd(PRIZES, vec(0, 0, 1), vec(1, 0, 0))
    assert not fosd(PRIZES, vec(1, 0, 0), vec(0, 0, 1))


def test_fosd_is_irreflexive():
    p = vec(F(1, 5), 0, F(4, 5))
    assert not fosd(PRIZES, p, p)


def test_fosd_allais_pair():
    assert fosd(PRIZES, vec(F(1, 5), 0, F(4, 5)), vec(F(4, 5), 0, F(1, 5)))


def test_mps_symmetric_spread_of_the_midpoint():
    prizes = (F(0), F(2000), F(4000))
    spread = vec(F(1, 2), 0, F(1, 2))
    mid = vec(0, 1, 0)
    assert mps(prizes, spread, mid)
    assert not mps(prizes, mid, spread)


def test_mps_is_irreflexive():
    p = vec(F(1, 4), F(1, 2), F(1, 4))
    assert not mps(PRIZES, p, p)


def test_mps_requires_equal_means():
    assert not mps(PRIZES, vec(F(1, 2), 0, F(1, 2)), vec(0, 1, 0))


def test_extreme_spread_construction():
    # q has interior mass; p = 1/2 q + 1/2 (1/2 best + 1/2 worst)
    q = vec(F(1, 4), F(1, 2), F(1, 4))
    p = tuple(F(1, 2) * x + F(1, 2) * e
              for x, e in zip(q, vec(F(1, 2), 0, F(1, 2))))
    assert extreme_spread(PRIZES, p, q)
    assert q[2] < F(1, 2) < 1 - q[0]


def test_extreme_spread_is_irreflexive():
    p = vec(F(1, 4), F(1, 2), F(1, 4))
    assert not extreme_spread(PRIZES, p, p)
    e = vec(F(1, 2), 0, F(1, 2))
    assert not extreme_spread(PRIZES, e, e)


def test_extreme_spread_alpha_window_is_open():
    q = vec(F(1, 2), 0, F(1, 2))
    # any best/worst mixture against q needs alpha in (1/2, 1/2): empty
    assert not extreme_spread(PRIZES, vec(F(1, 5), 0, F(4, 5)), q)
    # a two-point bet against a lottery with interior mass, inside the window
    assert extreme_spread(PRIZES, vec(F(4, 5), 0, F(1, 5)),
                          vec(F(3, 4), F(1, 4), 0))


def test_worst_dilution_detects_quarter_mix():
    p1 = vec(0, 1, 0)
    q1 = vec(F(3, 4), F(1, 4), 0)
    assert worst_dilution(PRIZES, q1, p1)
    assert not worst_dilution(PRIZES, p1, q1)
    assert not extreme_spread(PRIZES, q1, p1)  # alpha = 0 boundary excluded


def test_least_risky_drops_spreads():
    ds = allais_dataset()
    assert least_risky(ds, frozenset(("p1", "p2"))) == frozenset(("p1",))
    assert least_risky(ds, frozenset(("q1", "q2"))) == frozenset(("q1",))
    assert least_risky(ds, frozenset(("p1",))) == frozenset(("p1",))


def test_least_risky_retains_unordered_pairs():
    lots = {"a": lot([(3000, 1)]), "b": lot([(0, F(1, 5)), (4000, F(4, 5))])}
    # b is an extreme spread of a, so only a survives; with two unrelated
    # interior lotteries both survive
    ds = lottery_dataset(lots, [(frozenset(lots), ["a"])])
    assert least_risky(ds, frozenset(lots)) == frozenset(("a",))
    lots2 = {"a": lot([(0, F(1, 10)), (3000, F(8, 10)), (4000, F(1, 10))]),
             "b": lot([(0, F(2, 10)), (3000, F(7, 10)), (4000, F(1, 10))])}
    ds2 = lottery_dataset(lots2, [(frozenset(lots2), ["a"])])
    assert least_risky(ds2, frozenset(lots2)) == frozenset(("a", "b"))


def test_order_sanity_on_random_lottery_sets():
    rng = random.Random(3)
    prizes = (F(0), F(1), F(3), F(4))
    for _ in range(60):
        vectors = []
        while len(vectors) < 6:
            cuts = sorted(rng.randint(0, 6) for _ in range(3))
            candidate = (F(cuts[0], 6), F(cuts[1] - cuts[0], 6),
                         F(cuts[2] - cuts[1], 6), F(6 - cuts[2], 6))
            if candidate not in vectors:
                vectors.append(candidate)
        for p in vectors:
            assert not mps(prizes, p, p)
            assert not extreme_spread(prizes, p, p)
        edges = {(i, j) for i in range(6) for j in range(6) if i != j
                 and riskier_than(prizes, vectors[i], vectors[j])}
        # forced constraints are acyclic
        remaining = set(range(6))
        while remaining:
            free = [n for n in remaining
                    if not any((n, m) in edges for m in remaining)]
            assert free, "cycle in the forced risk order"
            remaining.difference_update(free)
        for i, j in edges:
            assert not fosd(prizes, vectors[i], vectors[j]) or \
                not extreme_spread(prizes, vectors[i], vectors[j])


def test_extreme_spread_never_dominates_its_base():
    rng = random.Random(5)
    prizes = (F(0), F(2), F(5))
    for _ in range(200):
        denom = rng.choice([4, 5, 6, 8])
        a = rng.randint(0, denom)
        b = rng.randint(0, denom - a)
        p = (F(a, denom), F(b, denom), F(denom - a - b, denom))
        a2 = rng.randint(0, denom)
        b2 = rng.randint(0, denom - a2)
        q = (F(a2, denom), F(b2, denom), F(denom - a2 - b2, denom))
        if extreme_spread(prizes, p, q):
            assert p != q
            assert not fosd(prizes, p, q)


# -- independence ------------------------------------------------------------


def test_independence_flags_allais():
    ds = allais_dataset()
    witnesses = independence_over(ds, ds.menus())
    assert witnesses
    assert {frozenset(w.menus) for w in witnesses} == {
        frozenset({frozenset(("p1", "p2")), frozenset(("q1", "q2"))})}


def test_independence_single_eu_menu_passes():
    lots = dict(ALLAIS_LOTTERIES)
    ds = lottery_dataset(lots, [(frozenset(lots), ["p1"])])
    # p1 maximizes any sufficiently concave utility; one menu alone is
    # mixture-consistent
    assert independence_over(ds, ds.menus()) == []


def test_independence_clean_on_expected_utility_data():
    # one utility, exhaustive menus; brute-force every recovered quadruple
    table = {"p1": F(9, 10), "p2": F(8, 10) * 1, "q1": F(9, 40), "q2": F(1, 5)}
    lots = dict(ALLAIS_LOTTERIES)
    menus = all_menus(lots, 2, 4)
    rows = []
    for menu in menus:
        best = max(table[x] for x in menu)
        rows.append((menu, {x for x in menu if table[x] == best}))
    ds = lottery_dataset(lots, rows)
    assert independence_over(ds, ds.menus()) == []


# -- the risk axioms ---------------------------------------------------------


def test_risk_reference_dependence_passes_on_allais():
    assert check_risk_reference_dependence(allais_dataset()) == []


def test_risk_reference_dependence_passes_on_eu_data():
    params = random_rho_monotone_areu(random.Random(2))
    flat = {name: params.utility(params.order.ranking[0])
            for name, _ in params.lotteries}
    eu = AreuParams.build(params.prizes, dict(params.lotteries),
                          params.order, flat)
    ds = simulate_areu(eu, all_menus([i for i, _ in eu.lotteries], 2, 3))
    assert check_risk_reference_dependence(ds) == []


def test_risk_reference_dependence_fails_inside_a_preserving_family():
    safe = lot([(3000, 1)])
    s1 = lot([(0, F(2, 10)), (3000, F(5, 10)), (4000, F(3, 10))])
    s2 = lot([(0, F(4, 10)), (3000, 0), (4000, F(6, 10))])
    lots = {"safe": safe, "s1": s1, "s2": s2}
    # both s1 and s2 are extreme spreads of safe, so safe anchors every menu;
    # flip the s1/s2 ranking between nested menus to break WARP inside
    ds = lottery_dataset(lots, [
        (frozenset(("safe", "s1", "s2")), ["s1"]),
        (frozenset(("safe", "s1")), ["safe"]),
        (frozenset(("safe", "s2")), ["s2"]),
        (frozenset(("s1", "s2")), ["s1"]),
    ])
    failures = check_risk_reference_dependence(ds)
    assert failures and sorted(failures[0].menu) == ["s1", "s2", "safe"]


def test_avoidable_risk_flags_expansion_toward_risk():
    lots = dict(ALLAIS_LOTTERIES)
    lots["z"] = lot([(0, F(9, 10)), (4000, F(1, 10))])
    ds = lottery_dataset(lots, [
        (frozenset(("p1", "p2")), ["p1"]),
        (frozenset(("p1", "p2", "z")), ["p2"]),
    ])
    witnesses = check_avoidable_risk(ds)
    assert witnesses
    assert witnesses[0].kind == "AvoidableRisk"


def test_avoidable_risk_passes_on_eu_data():
    params = random_rho_monotone_areu(random.Random(4))
    flat = {name: params.utility(params.order.ranking[0])
            for name, _ in params.lotteries}
    eu = AreuParams.build(params.prizes, dict(params.lotteries),
                          params.order, flat)
    ds = simulate_areu(eu, all_menus([i for i, _ in eu.lotteries], 2, 3))
    assert check_avoidable_risk(ds) == []


def test_avoidable_risk_vacuous_without_nested_pairs():
    assert check_avoidable_risk(allais_dataset()) == []


# -- concavity ---------------------------------------------------------------


def test_rho_requires_increasing_utilities():
    with pytest.raises(NotIncreasing):
        rho_vector(PRIZES, (F(0), F(1), F(1)))


def test_concavity_compare_examples():
    u = (F(0), F(7, 10), F(1))
    assert concavity_compare(PRIZES, u, u) is Concavity.EQUAL
    hi = (F(0), F(9, 10), F(1))
    assert concavity_compare(PRIZES, hi, u) is Concavity.MORE_CONCAVE
    assert concavity_compare(PRIZES, u, hi) is Concavity.LESS_CONCAVE


def test_concavity_crossing_rhos_are_incomparable():
    prizes = (F(0), F(1), F(2), F(3))
    u1 = (F(0), F(1, 2), F(3, 4), F(1))
    u2 = (F(0), F(1, 4), F(9, 10), F(1))
    assert concavity_compare(prizes, u1, u2) is Concavity.INCOMPARABLE


def _piecewise_concave_transform_exists(prizes, u_target, u_base):
    slopes = [(u_target[i + 1] - u_target[i]) / (u_base[i + 1] - u_base[i])
              for i in range(len(prizes) - 1)]
    return all(slopes[i] >= slopes[i + 1] for i in range(len(slopes) - 1))


def test_rho_dominance_matches_interpolation_oracle():
    rng = random.Random(9)
    prizes = tuple(F(x) for x in (0, 1, 3, 6, 10))
    for _ in range(200):
        cuts1 = sorted(rng.randint(1, 39) for _ in range(3))
        cuts2 = sorted(rng.randint(1, 39) for _ in range(3))
        while len(set(cuts1)) < 3:
            cuts1 = sorted(rng.randint(1, 39) for _ in range(3))
        while len(set(cuts2)) < 3:
            cuts2 = sorted(rng.randint(1, 39) for _ in range(3))
        u1 = (F(0),) + tuple(F(c, 40) for c in cuts1) + (F(1),)
        u2 = (F(0),) + tuple(F(c, 40) for c in cuts2) + (F(1),)
        more = concavity_compare(prizes, u1, u2) in (
            Concavity.MORE_CONCAVE, Concavity.EQUAL)
        assert more == _piecewise_concave_transform_exists(prizes, u1, u2)


# -- fitting -----------------------------------------------------------------


def test_fit_allais_pins_the_footnote_values():
    ds = allais_dataset()
    params = fit_areu(ds)
    u_safe = params.utility(params.order.argmax(frozenset(("p1", "p2"))))
    u_risk = params.utility(params.order.argmax(frozenset(("q1", "q2"))))
    assert u_safe[1] > F(4, 5) > u_risk[1]
    assert verify_areu(params, ds) == []


def test_fit_reverse_allais_is_infeasible():
    with pytest.raises(InfeasibleFit):
        fit_areu(reverse_allais_dataset())


def test_fit_round_trips_expected_utility_data():
    rng = random.Random(6)
    params = random_rho_monotone_areu(rng)
    flat = {name: params.utility(params.order.ranking[-1])
            for name, _ in params.lotteries}
    eu = AreuParams.build(params.prizes, dict(params.lotteries),
                          params.order, flat)
    names = [i for i, _ in eu.lotteries]
    ds = simulate_areu(eu, all_menus(names, 2, 3))
    fitted = fit_areu(ds)
    assert verify_areu(fitted, ds) == []
    used = {fitted.order.argmax(menu) for menu in ds.menus()}
    tables = {fitted.utility(r) for r in used}
    assert len(tables) == 1


def test_fit_round_trips_on_four_prizes():
    lots = {
        "safe": lot([(2, 1)]),
        "mid": lot([(1, F(1, 2)), (3, F(1, 2))]),
        "wide": lot([(0, F(1, 2)), (4, F(1, 2))]),
        "tilt": lot([(0, F(1, 4)), (3, F(3, 4))]),
    }
    u = {F(0): F(0), F(1): F(2, 5), F(2): F(3, 5), F(3): F(4, 5), F(4): F(1)}
    rows = []
    for menu in all_menus(lots, 2, 4):
        scores = {name: sum(p * u[x] for x, p in lots[name].probs)
                  for name in menu}
        best = max(scores.values())
        rows.append((menu, {n for n, s in scores.items() if s == best}))
    ds = lottery_dataset(lots, rows)
    fitted = fit_areu(ds)
    assert verify_areu(fitted, ds) == []


def test_fit_two_classes_on_four_prizes():
    # needs two utilities: x beats y alongside the sure anchor, y beats x
    # alone; the cross-class concavity coupling runs on the 4-prize path
    prizes = (F(0), F(1), F(2), F(3))
    vectors = {"anchor": vec4(0, 1, 0, 0),
               "x": vec4(0, F(6, 10), 0, F(4, 10)),
               "y": vec4(F(1, 10), 0, F(5, 10), F(4, 10))}
    lots = {k: lot([(p, m) for p, m in zip(prizes, v)])
            for k, v in vectors.items()}
    m1 = frozenset(("anchor", "x", "y"))
    m2 = frozenset(("x", "y"))
    ds = lottery_dataset(lots, [(m1, {"x"}), (m2, {"y"})])
    params = fit_areu(ds)
    assert verify_areu(params, ds) == []
    u_top = params.utility(params.order.argmax(m1))
    u_low = params.utility(params.order.argmax(m2))
    from refdep.risk import rho_vector
    assert all(a >= b for a, b in zip(rho_vector(prizes, u_top),
                                      rho_vector(prizes, u_low)))


def vec4(w, a, b, c):
    return (F(w), F(a), F(b), F(c))


def test_fit_rejects_dominated_choices():
    lots = {"good": lot([(4000, 1)]), "bad": lot([(0, 1)])}
    ds = lottery_dataset(lots, [(frozenset(lots), ["bad"])])
    with pytest.raises(AxiomFails):
        fit_areu(ds)


def test_simulated_fit_round_trip_on_random_instances():
    rng = random.Random(8)
    for _ in range(5):
        params, menus = areu_instance(rng, distinct=rng.random() < 0.5)
        small = [m for m in menus if len(m) <= 3][:20]
        ds = simulate_areu(params, small)
        fitted = fit_areu(ds)
        assert verify_areu(fitted, ds) == []


def test_fit_certifies_every_dilution_respecting_simulation():
    rng = random.Random(14)
    for _ in range(15):
        params = random_rho_monotone_areu(rng, n_lotteries=rng.choice([4, 5]))
        names = [i for i, _ in params.lotteries]
        ds = simulate_areu(params, all_menus(names, 2, 3))
        fitted = fit_areu(ds)
        assert verify_areu(fitted, ds) == []


# -- simulation and the triple-menu prediction --------------------------------


def warp_prediction_params():
    prizes = PRIZES
    lots_vec = {
        "p1": vec(0, 1, 0),
        "q1": vec(F(1, 10), F(7, 10), F(2, 10)),
        "q2": vec(F(3, 10), F(3, 10), F(4, 10)),
    }
    order = ReferenceOrder(("p1", "q1", "q2"))
    utilities = {"p1": (F(0), F(3, 5), F(1)),
                 "q1": (F(0), F(2, 5), F(1)),
                 "q2": (F(0), F(2, 5), F(1))}
    return AreuParams.build(prizes, lots_vec, order, utilities)


def test_triple_menu_simulation_reproduces_the_warp_violation():
    params = warp_prediction_params()
    triple = frozenset(("p1", "q1", "q2"))
    pair = frozenset(("q1", "q2"))
    ds = simulate_areu(params, [triple, pair])
    assert ds.observations[triple] == frozenset(("q1",))
    assert ds.observations[pair] == frozenset(("q2",))
    assert warp_over(ds, ds.menus()) != []


def test_constant_utility_simulation_is_independence_clean():
    params = warp_prediction_params()
    flat = {name: params.utility("q1") for name, _ in params.lotteries}
    eu = AreuParams.build(params.prizes, dict(params.lotteries),
                          params.order, flat)
    ds = simulate_areu(eu, all_menus(("p1", "q1", "q2"), 2, 3))
    assert independence_over(ds, ds.menus()) == []
    assert warp_over(ds, ds.menus()) == []


# -- betweenness / transitivity -----------------------------------------------


def test_betweenness_flags_the_common_ratio_footnote():
    # 3000 sure over 80% of 4000; 80% of 4000 over the 50/40 mixture,
    # where the mixture is the half-half blend of the two
    sure = lot([(3000, 1)])
    risky = lot([(0, F(1, 5)), (4000, F(4, 5))])
    mixture = lot([(0, F(1, 10)), (3000, F(1, 2)), (4000, F(2, 5))])
    lots = {"sure": sure, "risky": risky, "mix": mixture}
    ds = lottery_dataset(lots, [
        (frozenset(("sure", "risky")), ["sure"]),
        (frozenset(("sure", "mix")), ["sure"]),
        (frozenset(("mix", "risky")), ["risky"]),
    ])
    witnesses = betweenness_over(ds, ds.menus())
    assert witnesses and witnesses[0].kind == "Betweenness"


def test_betweenness_clean_on_eu_binary_data():
    params = random_rho_monotone_areu(random.Random(12))
    flat = {name: params.utility(params.order.ranking[0])
            for name, _ in params.lotteries}
    eu = AreuParams.build(params.prizes, dict(params.lotteries),
                          params.order, flat)
    names = [i for i, _ in eu.lotteries]
    ds = simulate_areu(eu, all_menus(names, 2, 2))
    assert betweenness_over(ds, ds.menus()) == []
    assert transitivity_over(ds, ds.menus()) == []


def test_transitivity_flags_a_cycle():
    lots = {"a": lot([(3000, 1)]),
            "b": lot([(0, F(1, 2)), (4000, F(1, 2))]),
            "c": lot([(0, F(1, 10)), (3000, F(1, 2)), (4000, F(2, 5))])}
    ds = lottery_dataset(lots, [
        (frozenset(("a", "b")), ["a"]),
        (frozenset(("b", "c")), ["b"]),
        (frozenset(("a", "c")), ["c"]),
    ])
    assert transitivity_over(ds, ds.menus()) != []


# -- triangle ----------------------------------------------------------------


def triangle_grid(k):
    points = {}
    for i in range(k + 1):
        for j in range(k + 1 - i):
            points[f"g{i}_{j}"] = (F(i, k), F(k - i - j, k), F(j, k))
    return points


def fan_out_params(prizes, k):
    points = triangle_grid(k)
    ranking = sorted(points, key=lambda a: (points[a][0], -points[a][2], a))
    neutral = (prizes[1] - prizes[0]) / (prizes[2] - prizes[0])
    n = len(ranking)
    utilities = {alt: (F(0), neutral + (1 - neutral) * F(n - rank, n + 1), F(1))
                 for rank, alt in enumerate(ranking)}
    return AreuParams.build(prizes, points, ReferenceOrder(tuple(ranking)),
                            utilities)


def test_fanning_fan_out_fan_in_and_neutral():
    prizes = (F(0), F(1), F(3))
    k = 6
    params = fan_out_params(prizes, k)
    report = fanning_classify(params, prizes, k)
    assert report.category is Fanning.RISK_AVERSE_FAN_OUT

    points = triangle_grid(k)
    ranking = sorted(points, key=lambda a: (points[a][2], -points[a][0], a))
    neutral = F(1, 3)
    n = len(ranking)
    utilities = {alt: (F(0), neutral * F(n - rank, n + 1), F(1))
                 for rank, alt in enumerate(ranking)}
    mirrored = AreuParams.build(prizes, points, ReferenceOrder(tuple(ranking)),
                                utilities)
    assert fanning_classify(mirrored, prizes, k).category \
        is Fanning.RISK_LOVING_FAN_IN

    flat = AreuParams.build(
        prizes, points,
        ReferenceOrder(tuple(sorted(points, key=lambda a: (points[a][0],
                                                           -points[a][2], a)))),
        {alt: (F(0), neutral, F(1)) for alt in points})
    assert fanning_classify(flat, prizes, k).category is Fanning.RISK_NEUTRAL


def test_fanning_mixed_violation():
    prizes = (F(0), F(1), F(3))
    k = 4
    points = triangle_grid(k)
    ranking = sorted(points, key=lambda a: (points[a][0], -points[a][2], a))
    neutral = F(1, 3)
    # one side above neutral, the other below: mixed attitude
    utilities = {}
    n = len(ranking)
    for rank, alt in enumerate(ranking):
        off = F(n - 2 * rank, 4 * n)
        utilities[alt] = (F(0), neutral + off, F(1))
    params = AreuParams.build(prizes, points, ReferenceOrder(tuple(ranking)),
                              utilities)
    assert fanning_classify(params, prizes, k).category is Fanning.MIXED_VIOLATION


def test_triangle_rows_cover_the_grid():
    prizes = (F(0), F(1), F(3))
    params = fan_out_params(prizes, 4)
    rows = triangle_rows(params, prizes, 4)
    assert len(rows) == 15
    assert all(len(r) == 4 for r in rows)


# -- linkage -----------------------------------------------------------------


def test_linkage_flags_both_on_allais():
    report = linkage_report_risk(allais_dataset())
    assert report["independence"] != []
    # the two Allais menus are not nested, so WARP alone cannot see it
    assert report["warp"] == []


def test_linkage_fails_both_on_allais_plus_triple_data():
    prizes = PRIZES
    lots_vec = {
        "p1": vec(0, 1, 0),
        "p2": vec(F(1, 2), 0, F(1, 2)),
        "q1": vec(F(1, 10), F(7, 10), F(2, 10)),
        "q2": vec(F(3, 10), F(3, 10), F(4, 10)),
    }
    order = ReferenceOrder(("p1", "q1", "q2", "p2"))  # p2 spreads everything
    u_hi = (F(0), F(3, 5), F(1))
    u_lo = (F(0), F(2, 5), F(1))
    params = AreuParams.build(prizes, lots_vec, order,
                              {"p1": u_hi, "p2": u_lo, "q1": u_lo, "q2": u_lo})
    menus = [frozenset(("p1", "p2")), frozenset(("q1", "q2")),
             frozenset(("p1", "q1", "q2")), frozenset(("p1", "q1"))]
    ds = simulate_areu(params, menus)
    report = linkage_report_risk(ds)
    assert report["warp"] != [] and report["independence"] != []


def test_linkage_clean_on_eu_data():
    params = random_rho_monotone_areu(random.Random(21))
    flat = {name: params.utility(params.order.ranking[0])
            for name, _ in params.lotteries}
    eu = AreuParams.build(params.prizes, dict(params.lotteries),
                          params.order, flat)
    ds = simulate_areu(eu, all_menus([i for i, _ in eu.lotteries], 2, 3))
    report = linkage_report_risk(ds)
    assert report["warp"] == [] and report["independence"] == []
