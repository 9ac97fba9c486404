"""Risk domain: lotteries, risk orders, expected-utility fitting.

Lotteries live on the dataset's prize grid (the sorted union of
supports) and are handled as exact probability vectors.  Two partial
risk orders drive everything: mean-preserving spreads and extreme
spreads; the admissible references of a menu are the members spread
over by nobody.  The fitted representation assigns one normalized
Bernoulli utility per reference, more concave for safer references.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .choices import (
    Alternative,
    ChoiceDataset,
    FiniteProperty,
    LOTTERY,
    LotteryPayload,
    Menu,
    ViolationWitness,
    WARP,
    conjoin,
    menu_key,
    sort_witnesses,
    sorted_menus,
    warp_over,
)
from .engine import (
    PsiMap,
    ReferenceOrder,
    check_reference_dependence,
)
from .exceptions import (
    AxiomFails,
    EmptyPsi,
    InfeasibleFit,
    NotATriangle,
    NotIncreasing,
    PrizeSetMismatch,
    UnknownLottery,
    ValidationError,
)
from .feasibility import LinearFeasibilityProblem, solve_linear_feasibility
from .serialize import format_rational, parse_rational

_ZERO = Fraction(0)
_ONE = Fraction(1)


# -- prize grids and vectors ----------------------------------------------


def prize_grid(dataset: ChoiceDataset):
    grid = dataset._cache.get("prizes")
    if grid is None:
        prizes = set()
        for alt in dataset.alternatives.values():
            prizes.update(alt.payload.support())
        grid = tuple(sorted(prizes))
        if len(grid) < 2:
            raise PrizeSetMismatch("a lottery dataset needs at least two prizes")
        dataset._cache["prizes"] = grid
    return grid


def lottery_vector(payload: LotteryPayload, prizes) -> tuple:
    vec = [payload.prob(x) for x in prizes]
    if sum(vec, _ZERO) != 1:
        raise PrizeSetMismatch("lottery has mass outside the prize grid")
    return tuple(vec)


def _vectors(dataset: ChoiceDataset) -> dict:
    table = dataset._cache.get("vectors")
    if table is None:
        prizes = prize_grid(dataset)
        table = {alt_id: lottery_vector(alt.payload, prizes)
                 for alt_id, alt in dataset.alternatives.items()}
        dataset._cache["vectors"] = table
    return table


def _check_same_grid(prizes, *vectors):
    for vec in vectors:
        if len(vec) != len(prizes):
            raise PrizeSetMismatch(
                f"vector of length {len(vec)} on a {len(prizes)}-prize grid")


# -- the risk orders -------------------------------------------------------


def fosd(prizes, p, q) -> bool:
    """p first-order stochastically dominates q (strictly somewhere)."""
    _check_same_grid(prizes, p, q)
    if p == q:
        return False
    fp = fq = _ZERO
    for i in range(len(prizes)):
        fp += p[i]
        fq += q[i]
        if fp > fq:
            return False
    return True


def mps(prizes, p, q) -> bool:
    """p is a mean-preserving spread of q.

    Equal means plus second-order dominance of q over p: the gap-weighted
    partial sums of the CDF difference stay nonnegative at every prize.
    """
    _check_same_grid(prizes, p, q)
    if p == q:
        return False
    mean_p = sum((prizes[i] * p[i] for i in range(len(prizes))), _ZERO)
    mean_q = sum((prizes[i] * q[i] for i in range(len(prizes))), _ZERO)
    if mean_p != mean_q:
        return False
    fp = fq = _ZERO
    acc = _ZERO
    for i in range(len(prizes) - 1):
        fp += p[i]
        fq += q[i]
        acc += (fp - fq) * (prizes[i + 1] - prizes[i])
        if acc < 0:
            return False
    return True


def extreme_spread(prizes, p, q) -> bool:
    """p mixes q with a best/worst bet whose best-prize weight falls
    strictly inside (q(best), 1 - q(worst))."""
    _check_same_grid(prizes, p, q)
    n = len(prizes)
    interior = range(1, n - 1)
    beta = None
    for i in interior:
        if q[i] != 0:
            beta = p[i] / q[i]
            break
    if beta is None:
        beta = _ZERO  # q lives on the extreme prizes only
    if not 0 <= beta < 1:
        return False
    for i in interior:
        if p[i] != beta * q[i]:
            return False
    alpha = (p[-1] - beta * q[-1]) / (1 - beta)
    if not q[-1] < alpha < 1 - q[0]:
        return False
    return p[0] == beta * q[0] + (1 - beta) * (1 - alpha)


def worst_dilution(prizes, p, q) -> bool:
    """p = beta*q + (1-beta)*(worst prize for sure), beta in [0,1), p != q.

    Not part of the least-risky map; used only to force the reference
    order in fitting (diluting toward the worst prize never makes a
    lottery safer).
    """
    _check_same_grid(prizes, p, q)
    if p == q:
        return False
    beta = None
    for i in range(1, len(prizes)):
        if q[i] != 0:
            beta = p[i] / q[i]
            break
    if beta is None:
        return False  # q is the degenerate worst-prize lottery
    if not 0 <= beta < 1:
        return False
    for i in range(1, len(prizes)):
        if p[i] != beta * q[i]:
            return False
    return p[0] == beta * q[0] + (1 - beta)


def riskier_than(prizes, p, q) -> bool:
    return mps(prizes, p, q) or extreme_spread(prizes, p, q)


def least_risky(dataset: ChoiceDataset, menu) -> frozenset:
    """The admissible references: members no other member spreads over."""
    prizes = prize_grid(dataset)
    vectors = _vectors(dataset)
    menu = sorted(menu)
    dominated = set()
    for p in menu:
        for q in menu:
            if p != q and riskier_than(prizes, vectors[p], vectors[q]):
                dominated.add(p)
                break
    kept = frozenset(x for x in menu if x not in dominated)
    if not kept:
        raise EmptyPsi(f"all members of {menu} are spreads of one another")
    return kept


LEAST_RISKY_PSI = PsiMap("least-risky", least_risky)


# -- mixture detection -----------------------------------------------------


def _diff_key(vec):
    """Canonical (direction, sign) key; two diffs match a positive scalar
    multiple iff their keys are equal."""
    pivot = None
    for x in vec:
        if x != 0:
            pivot = x
            break
    if pivot is None:
        return None
    return (tuple(x / abs(pivot) for x in vec), pivot > 0)


def _diff_table(dataset: ChoiceDataset):
    table = dataset._cache.get("diffs")
    if table is None:
        vectors = _vectors(dataset)
        ids = sorted(vectors)
        table = {}
        for a in ids:
            for b in ids:
                if a == b:
                    continue
                vec = tuple(x - y for x, y in zip(vectors[a], vectors[b]))
                table[(a, b)] = (vec, _diff_key(vec))
        dataset._cache["diffs"] = table
    return table


def _mixture_quadruples(dataset: ChoiceDataset):
    """All (p, q, p', q', alpha) with p' = p^a s and q' = q^a s exactly,
    a in (0,1), for some lottery s on the grid."""
    quads = dataset._cache.get("mixture-quadruples")
    if quads is not None:
        return quads
    vectors = _vectors(dataset)
    diffs = _diff_table(dataset)
    groups = {}
    for pair, (vec, key) in diffs.items():
        if key is not None:
            groups.setdefault(key, []).append(pair)
    quads = []
    for pairs in groups.values():
        for p, q in pairs:
            base = diffs[(p, q)][0]
            pivot = next(i for i, x in enumerate(base) if x != 0)
            for p2, q2 in pairs:
                alpha = diffs[(p2, q2)][0][pivot] / base[pivot]
                if not 0 < alpha < 1:
                    continue
                mixer = tuple((x2 - alpha * x) / (1 - alpha)
                              for x2, x in zip(vectors[p2], vectors[p]))
                if all(x >= 0 for x in mixer):
                    quads.append((p, q, p2, q2, alpha))
    quads.sort()
    dataset._cache["mixture-quadruples"] = quads
    return quads


def _family_masks(dataset: ChoiceDataset, family):
    menus = sorted_menus(frozenset(m) for m in family)
    contain = {}
    chosen = {}
    for pos, menu in enumerate(menus):
        bit = 1 << pos
        picked = dataset.choice(menu)
        for alt in menu:
            contain[alt] = contain.get(alt, 0) | bit
            if alt in picked:
                chosen[alt] = chosen.get(alt, 0) | bit
    return menus, contain, chosen


def independence_over(dataset: ChoiceDataset, family) -> list:
    """Violations of the common-mixture condition inside ``family``.

    Both clauses are tested on every exact mixture quadruple
    (p, q, p^a s, q^a s) recoverable from the universe.
    """
    menus, contain, chosen = _family_masks(dataset, family)
    witnesses = []

    def clause(tag, top, other, mixed_top, mixed_other, alpha):
        mask_a = chosen.get(top, 0) & contain.get(other, 0)
        mask_b = (chosen.get(mixed_other, 0) & contain.get(mixed_top, 0)
                  & ~chosen.get(mixed_top, 0))
        if mask_a and mask_b:
            for i, menu_a in enumerate(menus):
                if not mask_a >> i & 1:
                    continue
                for j, menu_b in enumerate(menus):
                    if not mask_b >> j & 1:
                        continue
                    witnesses.append(ViolationWitness(
                        kind="Independence",
                        menus=(menu_a, menu_b),
                        narrative=(
                            f"{tag}: {top} chosen over {other} but the "
                            f"{format_rational(alpha)}-mixture {mixed_top} loses "
                            f"to {mixed_other}"),
                    ))

    for p, q, p2, q2, alpha in _mixture_quadruples(dataset):
        clause("clause 1", p, q, p2, q2, alpha)
        clause("clause 2", p2, q2, p, q, alpha)
    return sort_witnesses(witnesses)


INDEPENDENCE = FiniteProperty("Independence", independence_over)
RISK_PROPERTY = conjoin(WARP, INDEPENDENCE)


def check_risk_reference_dependence(dataset: ChoiceDataset) -> list:
    """Reference dependence with T = WARP & Independence, least-risky Psi."""
    return check_reference_dependence(dataset, RISK_PROPERTY, LEAST_RISKY_PSI)


def check_fosd_dominance(dataset: ChoiceDataset) -> list:
    """A dominated lottery must never be chosen while its dominator is present."""
    prizes = prize_grid(dataset)
    vectors = _vectors(dataset)
    witnesses = []
    for menu in dataset.menus():
        picked = dataset.observations[menu]
        for loser in sorted(picked):
            for winner in sorted(menu):
                if winner != loser and fosd(prizes, vectors[winner], vectors[loser]):
                    witnesses.append(ViolationWitness(
                        kind="FOSD",
                        menus=(menu,),
                        narrative=f"{loser} chosen although {winner} dominates it"))
    return witnesses


def check_avoidable_risk(dataset: ChoiceDataset) -> list:
    """Expanding a menu may only increase risk aversion.

    A violation is a nested pair small < big where the sure-ish side of a
    common decomposition wins in small while the risky side of a
    positively proportional decomposition wins strictly in big.
    """
    diffs = _diff_table(dataset)
    witnesses = []
    one_negative = {}
    for pair, (vec, key) in diffs.items():
        one_negative[pair] = key is not None and sum(1 for x in vec if x < 0) == 1
    for small, big in dataset.nested_pairs():
        c_small = dataset.observations[small]
        c_big = dataset.observations[big]
        for safe1 in sorted(c_small):
            for risky1 in sorted(small):
                if risky1 == safe1 or not one_negative[(risky1, safe1)]:
                    continue
                key1 = diffs[(risky1, safe1)][1]
                for risky2 in sorted(c_big):
                    for safe2 in sorted(big - c_big):
                        if risky2 == safe2:
                            continue
                        if diffs[(risky2, safe2)][1] == key1:
                            witnesses.append(ViolationWitness(
                                kind="AvoidableRisk",
                                menus=(small, big),
                                narrative=(
                                    f"{safe1} beats {risky1} in the sub-menu but the "
                                    f"proportional decomposition ({risky2} over "
                                    f"{safe2}) wins strictly after expansion"),
                            ))
    return sort_witnesses(witnesses)


# -- concavity comparison --------------------------------------------------


class Concavity(enum.Enum):
    MORE_CONCAVE = "MoreConcave"
    LESS_CONCAVE = "LessConcave"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def rho_vector(prizes, u) -> tuple:
    """Interior gap ratios (u_i - u_{i-1}) / (u_{i+1} - u_{i-1})."""
    _check_same_grid(prizes, u)
    if any(u[i] >= u[i + 1] for i in range(len(u) - 1)):
        raise NotIncreasing("utility vector must be strictly increasing")
    return tuple((u[i] - u[i - 1]) / (u[i + 1] - u[i - 1])
                 for i in range(1, len(u) - 1))


def concavity_compare(prizes, u1, u2) -> Concavity:
    r1 = rho_vector(prizes, u1)
    r2 = rho_vector(prizes, u2)
    if r1 == r2:
        return Concavity.EQUAL
    if all(a >= b for a, b in zip(r1, r2)):
        return Concavity.MORE_CONCAVE
    if all(a <= b for a, b in zip(r1, r2)):
        return Concavity.LESS_CONCAVE
    return Concavity.INCOMPARABLE


# -- AREU parameters -------------------------------------------------------


@dataclass(frozen=True)
class AreuParams:
    """Reference order over named lotteries plus per-reference utilities.

    Utilities are normalized to 0 at the worst prize and 1 at the best,
    strictly increasing, and weakly more concave up the order.
    """

    prizes: tuple
    lotteries: tuple  # tuple[(id, prob vector), ...]
    order: ReferenceOrder
    utilities: tuple  # tuple[(id, utility vector), ...]

    @staticmethod
    def build(prizes, lotteries, order, utilities, validate=True) -> "AreuParams":
        prizes = tuple(Fraction(x) for x in prizes)
        lot = tuple(sorted((i, tuple(Fraction(x) for x in v))
                           for i, v in dict(lotteries).items()))
        uts = tuple(sorted((i, tuple(Fraction(x) for x in v))
                           for i, v in dict(utilities).items()))
        params = AreuParams(prizes, lot, order, uts)
        if validate:
            params.validate()
        return params

    def vector(self, alt_id):
        for i, v in self.lotteries:
            if i == alt_id:
                return v
        raise UnknownLottery(alt_id)

    def utility(self, ref_id):
        for i, v in self.utilities:
            if i == ref_id:
                return v
        raise UnknownLottery(f"no utility for reference {ref_id!r}")

    def validate(self) -> None:
        ids = {i for i, _ in self.lotteries}
        if set(self.order.ranking) != ids:
            raise ValidationError("order must cover exactly the named lotteries")
        if {i for i, _ in self.utilities} != ids:
            raise ValidationError("every lottery needs a reference utility")
        for _, vec in self.lotteries:
            _check_same_grid(self.prizes, vec)
            if sum(vec, _ZERO) != 1 or any(x < 0 for x in vec):
                raise ValidationError("bad probability vector")
        rhos = {}
        for i, u in self.utilities:
            if u[0] != 0 or u[-1] != 1:
                raise ValidationError("utilities must be normalized to [0, 1]")
            rhos[i] = rho_vector(self.prizes, u)
        ranking = self.order.ranking
        vectors = dict(self.lotteries)
        for hi_pos, hi in enumerate(ranking):
            for lo in ranking[hi_pos + 1:]:
                if riskier_than(self.prizes, vectors[hi], vectors[lo]):
                    raise ValidationError(
                        f"order is not risk-consistent: {hi} is a spread of {lo}")
                if any(a < b for a, b in zip(rhos[hi], rhos[lo])):
                    raise ValidationError(
                        f"concavity must not increase down the order "
                        f"({hi} vs {lo})")

    def to_json(self) -> dict:
        return {
            "prizes": [format_rational(x) for x in self.prizes],
            "lotteries": {i: [format_rational(x) for x in v]
                          for i, v in self.lotteries},
            "order": self.order.to_json(),
            "utilities": {i: [format_rational(x) for x in v]
                          for i, v in self.utilities},
        }

    @staticmethod
    def from_json(doc) -> "AreuParams":
        return AreuParams.build(
            [parse_rational(x) for x in doc["prizes"]],
            {i: [parse_rational(x) for x in v] for i, v in doc["lotteries"].items()},
            ReferenceOrder(tuple(doc["order"])),
            {i: [parse_rational(x) for x in v] for i, v in doc["utilities"].items()},
        )


def expected_utility(vec, u) -> Fraction:
    return sum((p * x for p, x in zip(vec, u)), _ZERO)


def evaluate_areu(params: AreuParams, menu) -> Menu:
    menu = frozenset(menu)
    known = set(params.order.ranking)
    if not menu <= known:
        raise UnknownLottery(f"{sorted(menu - known)} not covered by the order")
    ref = params.order.argmax(menu)
    u = params.utility(ref)
    scores = {alt: expected_utility(params.vector(alt), u) for alt in menu}
    best = max(scores.values())
    return frozenset(alt for alt, s in scores.items() if s == best)


def simulate_areu(params: AreuParams, menus) -> ChoiceDataset:
    prizes = params.prizes
    alts = {}
    for alt_id, vec in params.lotteries:
        probs = tuple((x, p) for x, p in zip(prizes, vec) if p != 0)
        alts[alt_id] = Alternative(alt_id, LotteryPayload(probs))
    observations = {frozenset(m): evaluate_areu(params, m) for m in menus}
    return ChoiceDataset(LOTTERY, alts, observations)


def verify_areu(params: AreuParams, dataset: ChoiceDataset) -> list:
    mismatches = []
    for menu in dataset.menus():
        predicted = evaluate_areu(params, menu)
        if predicted != dataset.observations[menu]:
            mismatches.append((menu, predicted, dataset.observations[menu]))
    return mismatches


# -- AREU fitting ----------------------------------------------------------


def _forced_edges(dataset: ChoiceDataset) -> set:
    """(above, below) pairs forced on any admissible reference order."""
    prizes = prize_grid(dataset)
    vectors = _vectors(dataset)
    edges = set()
    ids = sorted(vectors)
    for p in ids:
        for q in ids:
            if p == q:
                continue
            if riskier_than(prizes, vectors[p], vectors[q]) or \
                    worst_dilution(prizes, vectors[p], vectors[q]):
                edges.add((q, p))
    return edges


def _has_cycle(nodes, edges) -> bool:
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    adjacency = {n: [] for n in nodes}
    for a, b in edges:
        adjacency[a].append(b)

    def visit(n):
        color[n] = GREY
        for m in adjacency[n]:
            if color[m] == GREY:
                return True
            if color[m] == WHITE and visit(m):
                return True
        color[n] = BLACK
        return False

    return any(color[n] == WHITE and visit(n) for n in nodes)


def _linear_extensions(items, edges):
    """All total orders of ``items`` respecting (above, below) edges,
    most-constrained deterministic order."""
    items = sorted(items)
    below = {i: {b for a, b in edges if a == i and b in items} for i in items}

    def rec(remaining, acc):
        if not remaining:
            yield tuple(acc)
            return
        for candidate in remaining:
            # next iff no other remaining element must sit above it
            if any(candidate in below.get(other, ()) for other in remaining
                   if other != candidate):
                continue
            yield from rec([x for x in remaining if x != candidate],
                           acc + [candidate])

    yield from rec(items, [])


def _transitive_pairs(nodes, edges):
    reach = {n: set() for n in nodes}
    adjacency = {n: set() for n in nodes}
    for a, b in edges:
        if a in adjacency:
            adjacency[a].add(b)
    for n in nodes:
        stack = list(adjacency[n])
        while stack:
            m = stack.pop()
            if m in reach[n]:
                continue
            reach[n].add(m)
            stack.extend(adjacency.get(m, ()))
    return {(a, b) for a in nodes for b in reach[a] if b in nodes}


def _reference_assignments(dataset: ChoiceDataset, forced):
    """DFS over per-menu admissible reference choices, pruned for
    order-consistency; yields {menu: reference} maps."""
    menus = sorted(dataset.menus(), key=lambda m: (-len(m), menu_key(m)))
    vectors = _vectors(dataset)
    candidates = {m: sorted(least_risky(dataset, m), key=lambda i: vectors[i])
                  for m in menus}
    nodes = sorted(dataset.universe)

    def rec(pos, assigned, edges):
        if pos == len(menus):
            yield dict(assigned)
            return
        menu = menus[pos]
        for ref in candidates[menu]:
            ok = True
            for other, other_ref in assigned.items():
                if menu < other and other_ref in menu and other_ref != ref:
                    ok = False  # the bigger menu's reference survives inside
                    break
                if other < menu and ref in other and assigned[other] != ref:
                    ok = False
                    break
            if not ok:
                continue
            new_edges = edges | {(ref, y) for y in menu if y != ref}
            if _has_cycle(nodes, new_edges):
                continue
            assigned[menu] = ref
            yield from rec(pos + 1, assigned, new_edges)
            del assigned[menu]

    yield from rec(0, {}, set(forced))


def _class_constraints(problem, dataset, menu, ref, var):
    """EU-rationalization constraints of one menu under reference ``ref``."""
    vectors = _vectors(dataset)
    picked = sorted(dataset.observations[menu])
    others = sorted(set(menu) - set(picked))
    head = picked[0]

    def coeffs(a, b):
        diff = {}
        const = _ZERO
        va, vb = vectors[a], vectors[b]
        for i in range(len(va)):
            c = va[i] - vb[i]
            if c == 0:
                continue
            name = var(ref, i)
            if name is None:  # normalized endpoint
                const += c * (_ONE if i == len(va) - 1 else _ZERO)
            else:
                diff[name] = diff.get(name, _ZERO) + c
        return diff, const

    for other in picked[1:]:
        diff, const = coeffs(head, other)
        problem.add(diff, "=", -const)
    for other in others:
        diff, const = coeffs(head, other)
        problem.add(diff, ">", -const)


def _solve_classes(dataset, classes, chain, couple_exact):
    """One joint feasibility problem for the reference classes.

    ``classes`` maps ref -> menus, ``chain`` is the refs ordered safest
    first.  With ``couple_exact`` (3-prize grids) the concavity ordering
    is enforced inside the LP; otherwise the caller post-checks.
    """
    prizes = prize_grid(dataset)
    n = len(prizes)

    def var(ref, i):
        if i == 0 or i == n - 1:
            return None
        return f"u[{ref}][{i}]"

    problem = LinearFeasibilityProblem()
    for ref in chain:
        last = None
        for i in range(1, n - 1):
            name = var(ref, i)
            if last is None:
                problem.add({name: 1}, ">", 0)
            else:
                problem.add({name: 1, last: -1}, ">", 0)
            last = name
        if last is not None:
            problem.add({last: 1}, "<", 1)
        for menu in classes[ref]:
            _class_constraints(problem, dataset, menu, ref, var)
    if couple_exact and n == 3:
        for hi, lo in zip(chain, chain[1:]):
            problem.add({var(hi, 1): 1, var(lo, 1): -1}, ">=", 0)
    result = solve_linear_feasibility(problem)
    if not result:
        return None
    out = {}
    for ref in chain:
        u = [_ZERO]
        for i in range(1, n - 1):
            u.append(result.assignment[var(ref, i)])
        u.append(_ONE)
        out[ref] = tuple(u)
    return out


def _rho_monotone(prizes, chain, utilities) -> bool:
    rhos = [rho_vector(prizes, utilities[r]) for r in chain]
    return all(all(a >= b for a, b in zip(rhos[i], rhos[i + 1]))
               for i in range(len(rhos) - 1))


def _solve_shared(dataset, classes):
    """Try one utility for every class; sound for any prize count and
    exactly covers classical expected-utility data."""
    prizes = prize_grid(dataset)
    n = len(prizes)

    def var(_ref, i):
        if i == 0 or i == n - 1:
            return None
        return f"u[shared][{i}]"

    problem = LinearFeasibilityProblem()
    last = None
    for i in range(1, n - 1):
        name = var(None, i)
        problem.add({name: 1, last: -1} if last else {name: 1}, ">", 0)
        last = name
    if last is not None:
        problem.add({last: 1}, "<", 1)
    for ref, menus in classes.items():
        for menu in menus:
            _class_constraints(problem, dataset, menu, ref, var)
    result = solve_linear_feasibility(problem)
    if not result:
        return None
    u = [_ZERO]
    for i in range(1, n - 1):
        u.append(result.assignment[var(None, i)])
    u.append(_ONE)
    return {ref: tuple(u) for ref in classes}


def _solve_with_grid(dataset, classes, chain):
    """Concavity coupling on 4+ prize grids: relax, post-check, then pin
    the gap ratios between adjacent classes to a refined rational grid."""
    prizes = prize_grid(dataset)
    n = len(prizes)
    solution = _solve_classes(dataset, classes, chain, couple_exact=False)
    if solution is None:
        return None
    if _rho_monotone(prizes, chain, solution):
        return solution
    for denom in (64, 512):
        problem = LinearFeasibilityProblem()

        def var(ref, i):
            if i == 0 or i == n - 1:
                return None
            return f"u[{ref}][{i}]"

        for ref in chain:
            last = None
            for i in range(1, n - 1):
                name = var(ref, i)
                problem.add({name: 1, last: -1} if last else {name: 1}, ">", 0)
                last = name
            problem.add({last: 1}, "<", 1)
            for menu in classes[ref]:
                _class_constraints(problem, dataset, menu, ref, var)
        rhos = [rho_vector(prizes, solution[r]) for r in chain]
        for k in range(len(chain) - 1):
            hi, lo = chain[k], chain[k + 1]
            for i in range(1, n - 1):
                mid = (rhos[k][i - 1] + rhos[k + 1][i - 1]) / 2
                tau = Fraction(round(mid * denom), denom)
                # rho_i >= tau  <=>  u_i - u_{i-1} >= tau (u_{i+1} - u_{i-1})
                for ref, relation in ((hi, ">="), (lo, "<=")):
                    coeffs = {}
                    const = _ZERO
                    for j, weight in ((i, _ONE), (i - 1, tau - 1), (i + 1, -tau)):
                        name = var(ref, j)
                        if name is None:
                            const += weight * (_ONE if j == n - 1 else _ZERO)
                        else:
                            coeffs[name] = coeffs.get(name, _ZERO) + weight
                    problem.add(coeffs, relation, -const)
        result = solve_linear_feasibility(problem)
        if result:
            out = {}
            for ref in chain:
                u = [_ZERO]
                for i in range(1, n - 1):
                    u.append(result.assignment[var(ref, i)])
                u.append(_ONE)
                out[ref] = tuple(u)
            if _rho_monotone(prizes, chain, out):
                return out
    return None


def fit_areu(dataset: ChoiceDataset) -> AreuParams:
    """Search for an exact ordered-reference expected-utility certificate.

    Raises AxiomFails when the axiom battery already rejects the data and
    InfeasibleFit when no (reference assignment, order, utilities) triple
    certifies it.  On 4+ prize grids the cross-class concavity coupling
    uses a refined rational grid, so InfeasibleFit there means "no
    certificate found", not a proof of non-representability.
    """
    if dataset.kind != LOTTERY:
        raise ValidationError("fit_areu needs a lottery dataset")
    for name, witnesses in (
            ("FOSD", check_fosd_dominance(dataset)),
            ("risk reference dependence", check_risk_reference_dependence(dataset)),
            ("avoidable risk", check_avoidable_risk(dataset))):
        if witnesses:
            raise AxiomFails(name, witnesses)
    prizes = prize_grid(dataset)
    vectors = _vectors(dataset)
    forced = _forced_edges(dataset)
    nodes = sorted(dataset.universe)
    if _has_cycle(nodes, forced):
        raise EmptyPsi("forced risk-consistency constraints are cyclic")

    for assignment in _reference_assignments(dataset, forced):
        classes = {}
        for menu, ref in assignment.items():
            classes.setdefault(ref, []).append(menu)
        for menus in classes.values():
            menus.sort(key=menu_key)
        arising = sorted(classes)
        edges = set(forced) | {(ref, y) for menu, ref in assignment.items()
                               for y in menu if y != ref}
        order_pairs = _transitive_pairs(nodes, edges)
        ref_pairs = {(a, b) for a, b in order_pairs if a in arising and b in arising}
        shared = _solve_shared(dataset, classes)
        for chain in _linear_extensions(arising, ref_pairs):
            if shared is not None:
                solution = shared
            elif len(prizes) == 3:
                solution = _solve_classes(dataset, classes, list(chain),
                                          couple_exact=True)
            else:
                solution = _solve_with_grid(dataset, classes, list(chain))
            if solution is None:
                continue
            full_edges = edges | {(chain[i], chain[i + 1])
                                  for i in range(len(chain) - 1)}
            ranking = _topological_order(nodes, full_edges)
            utilities = {}
            chain_positions = [ranking.index(r) for r in chain]
            for pos, alt in enumerate(ranking):
                later = [r for r, cpos in zip(chain, chain_positions) if cpos >= pos]
                anchor = later[0] if later else chain[-1]
                utilities[alt] = solution[anchor]
            order = ReferenceOrder(tuple(ranking))
            params = AreuParams.build(prizes, vectors, order, utilities)
            return params
    raise InfeasibleFit("no reference assignment and utility system certifies the data")


def _topological_order(nodes, edges):
    pending = {n: set() for n in nodes}
    for a, b in edges:
        pending[b].add(a)
    out = []
    remaining = set(nodes)
    while remaining:
        ready = sorted(n for n in remaining if not (pending[n] & remaining))
        if not ready:
            raise EmptyPsi("cyclic order constraints")
        head = ready[0]
        out.append(head)
        remaining.discard(head)
    return out


# -- betweenness and transitivity over doubleton families ------------------


def betweenness_over(dataset: ChoiceDataset, family) -> list:
    fam = {frozenset(m) for m in family}
    doubles = sorted_menus(m for m in fam if len(m) == 2)
    vectors = _vectors(dataset)
    witnesses = []
    ids = sorted(dataset.universe)
    for pair in doubles:
        p, q = sorted(pair)
        for orientation in ((p, q), (q, p)):
            a, b = orientation
            for mid in ids:
                if mid in (a, b):
                    continue
                alpha = _mixture_weight(vectors[a], vectors[b], vectors[mid])
                if alpha is None or frozenset((a, mid)) not in fam \
                        or frozenset((mid, b)) not in fam:
                    continue
                c_ab = dataset.observations[pair]
                c_am = dataset.observations[frozenset((a, mid))]
                c_mb = dataset.observations[frozenset((mid, b))]
                if c_ab == {a}:
                    if c_am != {a} or c_mb != {mid}:
                        witnesses.append(ViolationWitness(
                            kind="Betweenness",
                            menus=(pair, frozenset((a, mid)), frozenset((mid, b))),
                            narrative=(f"{a} strictly beats {b} but the mixture "
                                       f"{mid} breaks the strict chain")))
                elif c_ab == pair:
                    if c_am != frozenset((a, mid)) or c_mb != frozenset((mid, b)):
                        witnesses.append(ViolationWitness(
                            kind="Betweenness",
                            menus=(pair, frozenset((a, mid)), frozenset((mid, b))),
                            narrative=(f"{a} and {b} tie but the mixture {mid} "
                                       f"breaks the indifference chain")))
    return sort_witnesses(set(witnesses))


def _mixture_weight(va, vb, vm):
    """alpha in (0,1) with vm = alpha va + (1-alpha) vb, else None."""
    alpha = None
    for x, y, z in zip(va, vb, vm):
        if x == y:
            if z != x:
                return None
            continue
        candidate = (z - y) / (x - y)
        if alpha is None:
            alpha = candidate
        elif alpha != candidate:
            return None
    if alpha is None or not 0 < alpha < 1:
        return None
    return alpha


def transitivity_over(dataset: ChoiceDataset, family) -> list:
    fam = {frozenset(m) for m in family}
    doubles = sorted_menus(m for m in fam if len(m) == 2)
    members = sorted({x for m in doubles for x in m})
    witnesses = []
    for trio in combinations(members, 3):
        menus = [frozenset(pair) for pair in combinations(trio, 2)]
        if not all(m in fam for m in menus):
            continue
        for p, q, s in permutations(trio):
            pq, qs, sp = frozenset((p, q)), frozenset((q, s)), frozenset((s, p))
            if p in dataset.observations[pq] and q in dataset.observations[qs] \
                    and p not in dataset.observations[sp]:
                witnesses.append(ViolationWitness(
                    kind="Transitivity",
                    menus=(pq, qs, sp),
                    narrative=f"{p} >= {q} >= {s} but {s} strictly beats {p}"))
    return sort_witnesses(set(witnesses))


# -- triangle diagnostics --------------------------------------------------


class Fanning(enum.Enum):
    RISK_AVERSE_FAN_OUT = "RiskAverseFanOut"
    RISK_LOVING_FAN_IN = "RiskLovingFanIn"
    RISK_NEUTRAL = "RiskNeutral"
    MIXED_VIOLATION = "MixedViolation"


@dataclass(frozen=True)
class SlopeSample:
    """One sampled binary comparison: the worse point, its improvement
    direction, the reference used, and the indifference slope there."""

    worse: tuple  # (worst-prize mass, best-prize mass)
    better: tuple
    reference: str
    slope: Fraction


@dataclass(frozen=True)
class FanningReport:
    category: Fanning
    neutral_slope: Fraction
    samples: tuple


def _triangle_points(params: AreuParams, prizes, resolution):
    if len(prizes) != 3:
        raise NotATriangle("need exactly three prizes")
    if tuple(prizes) != params.prizes:
        raise NotATriangle("params are not over this prize grid")
    by_vector = {v: i for i, v in params.lotteries}
    k = int(resolution)
    points = {}
    for i in range(k + 1):
        for j in range(k + 1 - i):
            vec = (Fraction(i, k), Fraction(k - i - j, k), Fraction(j, k))
            alt = by_vector.get(vec)
            if alt is None:
                raise NotATriangle(
                    f"grid point (w={i}/{k}, b={j}/{k}) not named in the params")
            points[(i, j)] = alt
    return k, points


def _slope(u) -> Fraction:
    return (u[1] - u[0]) / (u[2] - u[1])


def fanning_classify(params: AreuParams, prizes, resolution) -> FanningReport:
    """Sample indifference slopes on the triangle grid and classify.

    Each sample is a dominance-adjacent binary menu; the slope used is
    the reference class of that menu per the fitted order.  Fan-out
    means slopes never decrease toward dominating lotteries.
    """
    prizes = tuple(Fraction(x) for x in prizes)
    k, points = _triangle_points(params, prizes, resolution)
    neutral = (prizes[1] - prizes[0]) / (prizes[2] - prizes[1])
    samples = []
    for (i, j), alt in sorted(points.items()):
        for di, dj in ((-1, 0), (0, 1)):  # west (less worst mass), north (more best)
            ni, nj = i + di, j + dj
            if (ni, nj) not in points:
                continue
            better = points[(ni, nj)]
            ref = params.order.argmax(frozenset((alt, better)))
            samples.append(SlopeSample(
                worse=(Fraction(i, k), Fraction(j, k)),
                better=(Fraction(ni, k), Fraction(nj, k)),
                reference=ref,
                slope=_slope(params.utility(ref)),
            ))
    entries = [((s.worse[0] + s.better[0]) / 2, (s.worse[1] + s.better[1]) / 2,
                s.slope) for s in samples]

    def monotone(bad):
        for wa, ba, sa in entries:
            for wb, bb, sb in entries:
                if wb <= wa and bb >= ba and (wb, bb) != (wa, ba) and bad(sb, sa):
                    return False
        return True

    ups = monotone(lambda sb, sa: sb < sa)
    downs = monotone(lambda sb, sa: sb > sa)
    slopes = {s.slope for s in samples}
    if slopes == {neutral}:
        category = Fanning.RISK_NEUTRAL
    elif all(s >= neutral for s in slopes) and ups:
        category = Fanning.RISK_AVERSE_FAN_OUT
    elif all(s <= neutral for s in slopes) and downs:
        category = Fanning.RISK_LOVING_FAN_IN
    else:
        category = Fanning.MIXED_VIOLATION
    return FanningReport(category, neutral, tuple(samples))


def triangle_rows(params: AreuParams, prizes, resolution) -> list:
    """CSV rows (p_b, p_w, reference_id, utility_level) over the grid."""
    prizes = tuple(Fraction(x) for x in prizes)
    k, points = _triangle_points(params, prizes, resolution)
    rows = []
    for (i, j), alt in sorted(points.items()):
        level = expected_utility(params.vector(alt), params.utility(alt))
        rows.append((format_rational(Fraction(j, k)),
                     format_rational(Fraction(i, k)),
                     alt,
                     format_rational(level)))
    return rows


def linkage_report_risk(dataset: ChoiceDataset) -> dict:
    """Global WARP and global Independence verdicts (witness lists)."""
    family = dataset.menus()
    return {
        "warp": warp_over(dataset, family),
        "independence": independence_over(dataset, family),
    }
