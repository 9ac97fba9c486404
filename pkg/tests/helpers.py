"""Shared builders, generators, and independent oracles for the tests.

The oracles here deliberately avoid the library's own algorithms: weak
orders are enumerated directly, rival models are replayed forward, and
feasibility cross-checks use elimination instead of the simplex.
"""

from fractions import Fraction as F
from itertools import combinations, permutations, product

from refdep.choices import (
    Alternative,
    DATED_PAYMENT,
    GENERIC,
    INCOME_SPLIT,
    LOTTERY,
    LotteryPayload,
    PaymentPayload,
    SplitPayload,
    validate_dataset,
)
from refdep.engine import ReferenceOrder
from refdep.risk import AreuParams
from refdep.social import FspuParams, gini
from refdep.timepref import PbduParams


# -- dataset builders --------------------------------------------------------


def generic_dataset(rows):
    """rows: iterable of (menu string/iterable, choice string/iterable)."""
    alts = sorted({x for menu, _ in rows for x in menu})
    return validate_dataset(
        GENERIC, [Alternative(a) for a in alts],
        [(frozenset(menu), frozenset(choice)) for menu, choice in rows])


def lot(pairs):
    return LotteryPayload(tuple(sorted((F(x), F(p)) for x, p in pairs if F(p) != 0)))


def lottery_dataset(lotteries, rows):
    alts = [Alternative(name, payload) for name, payload in lotteries.items()]
    return validate_dataset(
        LOTTERY, alts,
        [(frozenset(menu), frozenset(choice)) for menu, choice in rows])


def pay(x, t):
    return PaymentPayload(F(x), F(t))


def payment_dataset(payments, rows):
    alts = [Alternative(name, payload) for name, payload in payments.items()]
    return validate_dataset(
        DATED_PAYMENT, alts,
        [(frozenset(menu), frozenset(choice)) for menu, choice in rows])


def split(x, y):
    return SplitPayload(F(x), F(y))


def split_dataset(splits, rows, floor=F(1)):
    alts = [Alternative(name, payload) for name, payload in splits.items()]
    return validate_dataset(
        INCOME_SPLIT, alts,
        [(frozenset(menu), frozenset(choice)) for menu, choice in rows],
        floor=floor)


def all_menus(ids, min_size=2, max_size=None):
    ids = sorted(ids)
    max_size = max_size or len(ids)
    out = []
    for size in range(min_size, max_size + 1):
        out.extend(frozenset(c) for c in combinations(ids, size))
    return out


# -- the Allais datasets -----------------------------------------------------

ALLAIS_LOTTERIES = {
    "p1": lot([(3000, 1)]),
    "p2": lot([(4000, F(4, 5)), (0, F(1, 5))]),
    "q1": lot([(3000, F(1, 4)), (0, F(3, 4))]),
    "q2": lot([(4000, F(1, 5)), (0, F(4, 5))]),
}


def allais_dataset():
    return lottery_dataset(ALLAIS_LOTTERIES, [
        ("p1 p2".split(), ["p1"]), ("q1 q2".split(), ["q2"])])


def reverse_allais_dataset():
    return lottery_dataset(ALLAIS_LOTTERIES, [
        ("p1 p2".split(), ["p2"]), ("q1 q2".split(), ["q1"])])


# -- exhaustive tiny-universe enumerations ------------------------------------


def exhaustive_single_valued_datasets(ids=("a", "b", "c")):
    """Every single-valued choice function on all size->=2 menus."""
    menus = all_menus(ids)
    for picks in product(*[sorted(menu) for menu in menus]):
        yield generic_dataset([(menu, {pick}) for menu, pick in zip(menus, picks)])


def exhaustive_correspondences(ids=("a", "b", "c")):
    """Every choice correspondence on all size->=2 menus."""
    menus = all_menus(ids)
    option_sets = []
    for menu in menus:
        opts = []
        for size in range(1, len(menu) + 1):
            opts.extend(frozenset(c) for c in combinations(sorted(menu), size))
        option_sets.append(opts)
    for picks in product(*option_sets):
        yield generic_dataset([(menu, choice) for menu, choice in zip(menus, picks)])


# -- independent oracles ------------------------------------------------------


def weak_orders(members):
    """Ordered set partitions, best class first (independent enumeration)."""
    members = list(members)
    if not members:
        return [()]
    head, rest = members[0], members[1:]
    out = []
    for tail in weak_orders(rest):
        for i in range(len(tail)):
            out.append(tail[:i] + (tail[i] | {head},) + tail[i + 1:])
        for i in range(len(tail) + 1):
            out.append(tail[:i] + (frozenset((head,)),) + tail[i:])
    return out


def rationalizable_by_weak_order(dataset, menus):
    members = sorted({x for m in menus for x in m})
    for order in weak_orders(members):
        rank = {}
        for depth, cls in enumerate(order):
            for alt in cls:
                rank[alt] = depth
        if all(frozenset(x for x in menu if rank[x] == min(rank[y] for y in menu))
               == dataset.observations[frozenset(menu)] for menu in menus):
            return True
    return False


def ordu_bruteforce(dataset):
    """Representation search over all orders x per-class weak orders."""
    ids = sorted(dataset.universe)
    menus = list(dataset.observations)
    for ranking in permutations(ids):
        rank = {x: i for i, x in enumerate(ranking)}
        classes = {}
        for menu in menus:
            ref = min(menu, key=lambda x: rank[x])
            classes.setdefault(ref, []).append(menu)
        if all(rationalizable_by_weak_order(dataset, family)
               for family in classes.values()):
            return True
    return False


def directed_pair_relations(members):
    """All asymmetric relations as sets of (winner, loser) pairs."""
    pairs = list(combinations(sorted(members), 2))
    for states in product(range(3), repeat=len(pairs)):
        edges = set()
        for (x, y), state in zip(pairs, states):
            if state == 1:
                edges.add((x, y))
            elif state == 2:
                edges.add((y, x))
        yield edges


def rsm_bruteforce(dataset):
    """Forward replay of every relation pair (independent of the checker)."""
    members = sorted(dataset.universe)
    observed = {menu: next(iter(choice))
                for menu, choice in dataset.observations.items()}
    for first in directed_pair_relations(members):
        for second in directed_pair_relations(members):
            good = True
            for menu, chosen in observed.items():
                survivors = [x for x in menu
                             if not any((y, x) in first for y in menu)]
                winners = [x for x in survivors
                           if not any((y, x) in second for y in survivors)]
                if winners != [chosen] and set(winners) != {chosen}:
                    good = False
                    break
            if good:
                return True
    return False


def pe_bruteforce(dataset):
    """Forward replay of every complete relation over the universe."""
    members = sorted(dataset.universe)
    full = all_menus(members, min_size=1)
    for strict in directed_pair_relations(members):
        tables = {}
        ok = True
        for menu in full:
            winners = frozenset(x for x in menu
                                if not any((y, x) in strict for y in menu))
            if not winners:
                ok = False
                break
            tables[menu] = winners
        if not ok:
            continue
        if all(tables[menu] == choice
               for menu, choice in dataset.observations.items()):
            return True
    return False


# -- random model parameters ---------------------------------------------------


def random_ordu_params(rng, ids=("a", "b", "c", "d", "e")):
    ranking = list(ids)
    rng.shuffle(ranking)
    utilities = {ref: {alt: F(rng.randint(0, 6)) for alt in ids} for ref in ids}
    from refdep.ordu import OrduParams
    return OrduParams.build(ReferenceOrder(tuple(ranking)), utilities)


def _random_fraction(rng, lo, hi, denom=24):
    lo, hi = F(lo), F(hi)
    span = hi - lo
    step = rng.randint(1, denom - 1)
    return lo + span * F(step, denom)


def areu_instance(rng, distinct):
    """Lottery universe with a guaranteed cross-reference probe.

    Contains a safe anchor (the sure middle prize), a probe pair whose
    ranking flips between the two utilities, and their half-mixtures
    with the anchor, plus noise lotteries.  With ``distinct`` the anchor
    reference carries a strictly more concave utility, which makes both
    a WARP and an Independence violation observable; otherwise all
    references share one utility and the data is classical.
    """
    w, m, b = sorted(rng.sample([0, 1, 2, 3, 5, 8, 13], 3))
    prizes = (F(w), F(m), F(b))
    neutral = F(m - w, b - w)
    v_hi = _random_fraction(rng, neutral + F(1, 50), F(24, 25))
    v_lo = _random_fraction(rng, F(1, 50), v_hi - F(1, 50))
    gamma = _random_fraction(rng, F(1, 10), F(9, 10), denom=12)
    lo_bound = v_lo + gamma * (1 - v_lo)
    hi_bound = v_hi + gamma * (1 - v_hi)
    eta = (lo_bound + hi_bound) / 2
    half = F(1, 2)
    vectors = {
        "anchor": (F(0), F(1), F(0)),
        "probe_hi": (F(0), 1 - gamma, gamma),       # gamma on best, rest middle
        "probe_lo": (1 - eta, F(0), eta),           # eta on best, rest worst
    }
    vectors["mix_hi"] = tuple(half * x for x in vectors["probe_hi"])
    vectors["mix_hi"] = tuple(a + half * s for a, s in
                              zip(vectors["mix_hi"], vectors["anchor"]))
    vectors["mix_lo"] = tuple(half * x + half * s for x, s in
                              zip(vectors["probe_lo"], vectors["anchor"]))
    target = 6 + rng.randint(0, 2)
    noise = 0
    while len(vectors) < target and noise < 12:
        noise += 1
        denom = rng.choice([4, 5, 6])
        cut1 = rng.randint(0, denom)
        cut2 = rng.randint(0, denom - cut1)
        vec = (F(cut1, denom), F(cut2, denom), F(denom - cut1 - cut2, denom))
        if vec not in vectors.values():
            vectors[f"n{noise}"] = vec
    from refdep.risk import riskier_than, worst_dilution
    names = sorted(vectors)
    edges = {(q, p) for p in names for q in names if p != q
             and (riskier_than(prizes, vectors[p], vectors[q])
                  or worst_dilution(prizes, vectors[p], vectors[q]))}
    ranking = []
    remaining = set(names)
    blocked = {n: {a for a, b in edges if b == n} for n in names}
    while remaining:
        ready = sorted(n for n in remaining if not (blocked[n] & remaining))
        head = "anchor" if "anchor" in ready else ready[0]
        ranking.append(head)
        remaining.discard(head)
    u_hi = (F(0), v_hi, F(1))
    u_lo = (F(0), v_lo, F(1)) if distinct else u_hi
    utilities = {name: (u_hi if name == "anchor" else u_lo) for name in names}
    params = AreuParams.build(prizes, vectors, ReferenceOrder(tuple(ranking)),
                              utilities)
    menus = all_menus(names, 2, 4)
    return params, menus


def random_rho_monotone_areu(rng, n_lotteries=5):
    """Valid parameters with per-reference utilities strictly ordered in
    concavity down the reference order (3-prize grids)."""
    w, m, b = sorted(rng.sample([0, 1, 2, 4, 7, 11], 3))
    prizes = (F(w), F(m), F(b))
    vectors = {}
    tries = 0
    while len(vectors) < n_lotteries and tries < 50:
        tries += 1
        denom = rng.choice([3, 4, 5, 6])
        cut1 = rng.randint(0, denom)
        cut2 = rng.randint(0, denom - cut1)
        vec = (F(cut1, denom), F(cut2, denom), F(denom - cut1 - cut2, denom))
        if vec not in vectors.values():
            vectors[f"l{len(vectors)}"] = vec
    from refdep.risk import riskier_than, worst_dilution
    names = sorted(vectors)
    # also orient pure worst-prize dilutions downward, matching the
    # stance the fitter takes on them
    edges = {(q, p) for p in names for q in names if p != q
             and (riskier_than(prizes, vectors[p], vectors[q])
                  or worst_dilution(prizes, vectors[p], vectors[q]))}
    ranking = []
    remaining = set(names)
    blocked = {n: {a for a, b in edges if b == n} for n in names}
    while remaining:
        ready = sorted(n for n in remaining if not (blocked[n] & remaining))
        ranking.append(ready[0])
        remaining.discard(ready[0])
    levels = sorted({_random_fraction(rng, F(1, 20), F(19, 20), denom=40)
                     for _ in ranking}, reverse=True)
    while len(levels) < len(ranking):
        levels.append(levels[-1])
    utilities = {name: (F(0), levels[i], F(1)) for i, name in enumerate(ranking)}
    return AreuParams.build(prizes, vectors, ReferenceOrder(tuple(ranking)),
                            utilities)


def pbdu_instance(rng, distinct):
    """Amount/time grid containing the canonical reversal pattern."""
    x = rng.randint(10, 14)
    y = x + rng.randint(1, 4)
    t = rng.randint(2, 4)
    d0 = -F(rng.randint(5, 9), 2)
    dt = d0 + (F(rng.randint(1, 4), 2) if distinct else 0)
    times = [F(0), F(1), F(t), F(t + 1)]
    discounts = {F(0): d0, F(1): d0, F(t): dt, F(t + 1): dt}
    ly = F(rng.randint(0, 3))
    lx = ly + (d0 + dt) / 2
    w = x - rng.randint(1, 3)
    lw = lx + t * d0 - 1
    params = PbduParams(
        tuple(sorted([(F(w), lw), (F(x), lx), (F(y), ly)])),
        tuple(sorted(discounts.items())))
    payments = {
        "w0": pay(w, 0),
        "x0": pay(x, 0), "y1": pay(y, 1),
        "xt": pay(x, t), "yt1": pay(y, t + 1),
    }
    menus = all_menus(payments, 2, 4)
    return params, payments, menus


def fspu_instance(rng, distinct):
    """Income-split universe containing the sharing-flip pattern.

    The sharing increment between the two probe incomes is 2S at the
    perfectly balanced reference and S/2 at every other reference, with
    S the own-payment advantage of the stingy probe, so the generous
    probe wins exactly when the balanced split is attainable.
    """
    floor = F(1)
    y_hi = rng.randint(4, 6)
    y_lo = rng.randint(2, y_hi - 1)
    x = rng.randint(2 * y_hi, 2 * y_hi + 4)
    shift = rng.randint(1, 3)
    scale = F(rng.randint(2, 5))  # S
    m0 = rng.randint(1, 2)
    splits = {
        "balanced": split(m0, m0),
        "share_more": split(x, y_hi),
        "share_less": split(x + scale, y_lo),
        "share_more_shift": split(x + shift, y_hi),
        "share_less_shift": split(x + scale + shift, y_lo),
    }
    incomes = sorted({s.other for s in splits.values()})
    refs = sorted({gini(s) for s in splits.values()})
    span = y_hi - y_lo

    def increment(r, lo, hi):
        per_unit = (F(1, 2) if (distinct and r > 0) else 2) * scale / span
        return (hi - lo) * per_unit

    tables = {}
    for r in refs:
        table = [(incomes[0], F(0))]
        for lo, hi in zip(incomes, incomes[1:]):
            table.append((hi, table[-1][1] + increment(r, lo, hi)))
        tables[r] = tuple(table)
    params = FspuParams(tuple(sorted(tables.items())))
    menus = all_menus(splits, 2, 3)
    return params, splits, menus, floor
