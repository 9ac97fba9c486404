"""Time domain: dated payments, stationarity machinery, discount fitting.

The fitted representation keeps one consumption utility and lets the
discount factor depend on the earliest arrival time in the menu.  To
stay exact, parameters live in additive form: L(x) stands for the log
of u(x) and D(r) for the log of the reference-r discount factor, both
rational, and all comparisons use t*D(r) + L(x) directly.  Decimal
delta values are derived for display only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .choices import (
    ChoiceDataset,
    DATED_PAYMENT,
    FiniteProperty,
    Menu,
    PaymentPayload,
    ViolationWitness,
    WARP,
    conjoin,
    sort_witnesses,
    sorted_menus,
    warp_over,
)
from .engine import PsiMap
from .exceptions import (
    AxiomFails,
    InfeasibleFit,
    UnknownAlternative,
    ValidationError,
)
from .feasibility import LinearFeasibilityProblem, solve_linear_feasibility
from .serialize import format_rational, parse_rational

_ZERO = Fraction(0)


def _payment(dataset: ChoiceDataset, alt_id) -> PaymentPayload:
    return dataset.alternatives[alt_id].payload


def earliest_payments(dataset: ChoiceDataset, menu) -> frozenset:
    """Members arriving at the menu's minimal time."""
    menu = sorted(menu)
    soonest = min(_payment(dataset, x).time for x in menu)
    return frozenset(x for x in menu if _payment(dataset, x).time == soonest)


EARLIEST_PSI = PsiMap("earliest-payments", earliest_payments)


def stationarity_over(dataset: ChoiceDataset, family) -> list:
    """Violations of choice invariance under a common positive delay."""
    menus = sorted_menus(frozenset(m) for m in family)
    contain, chosen = {}, {}
    for pos, menu in enumerate(menus):
        bit = 1 << pos
        picked = dataset.choice(menu)
        for alt in menu:
            contain[alt] = contain.get(alt, 0) | bit
            if alt in picked:
                chosen[alt] = chosen.get(alt, 0) | bit
    ids = sorted(dataset.universe)
    by_amount = {}
    for alt in ids:
        pay = _payment(dataset, alt)
        by_amount.setdefault(pay.amount, []).append((pay.time, alt))
    witnesses = []
    for i1 in ids:
        p1 = _payment(dataset, i1)
        for j1 in ids:
            if j1 == i1:
                continue
            q1 = _payment(dataset, j1)
            for t2, i2 in by_amount[p1.amount]:
                shift = t2 - p1.time
                if shift <= 0:
                    continue
                for t3, j2 in by_amount[q1.amount]:
                    if t3 - q1.time != shift:
                        continue
                    mask_a = chosen.get(i1, 0) & contain.get(j1, 0)
                    mask_b = (chosen.get(j2, 0) & contain.get(i2, 0)
                              & ~chosen.get(i2, 0))
                    if not (mask_a and mask_b):
                        continue
                    for a_pos, menu_a in enumerate(menus):
                        if not mask_a >> a_pos & 1:
                            continue
                        for b_pos, menu_b in enumerate(menus):
                            if not mask_b >> b_pos & 1:
                                continue
                            witnesses.append(ViolationWitness(
                                kind="Stationarity",
                                menus=(menu_a, menu_b),
                                narrative=(
                                    f"{i1} chosen alongside {j1}, but after a common "
                                    f"delay of {format_rational(shift)} the shifted "
                                    f"{j2} is chosen while {i2} is not"),
                            ))
    return sort_witnesses(set(witnesses))


STATIONARITY = FiniteProperty("Stationarity", stationarity_over)
TIME_PROPERTY = conjoin(WARP, STATIONARITY)


def check_time_reference_dependence(dataset: ChoiceDataset) -> list:
    """WARP and Stationarity over every observed menu pair sharing an
    earliest payment (including each menu with itself)."""
    menus = dataset.menus()
    earliest = {m: earliest_payments(dataset, m) for m in menus}
    witnesses = []
    for i, menu_a in enumerate(menus):
        for menu_b in menus[i:]:
            if earliest[menu_a] & earliest[menu_b]:
                witnesses.extend(TIME_PROPERTY.check(dataset, {menu_a, menu_b}))
    return sort_witnesses(set(witnesses))


@dataclass(frozen=True)
class EquivalenceReport:
    status: str  # "agree" | "disagree" | "not_applicable"
    pairwise: tuple
    subset_form: tuple


def _subset_closed(dataset: ChoiceDataset) -> bool:
    observed = set(dataset.observations)
    for menu in observed:
        members = sorted(menu)
        for size in range(2, len(members)):
            for sub in combinations(members, size):
                if frozenset(sub) not in observed:
                    return False
    return True


def pairwise_anchored_equivalence(dataset: ChoiceDataset) -> EquivalenceReport:
    """Compare the pairwise axiom with the anchored subset-family form.

    Applicability requires subset-closed observations; the two forms
    provably coincide when unions of observed menus are observed too
    (power-set designs).  Non-subset-closed data reports not_applicable.
    """
    if not _subset_closed(dataset):
        return EquivalenceReport("not_applicable", (), ())
    pairwise = check_time_reference_dependence(dataset)
    subset_form = []
    for menu in dataset.menus():
        inside = dataset.observed_subsets(menu)
        for anchor in sorted(earliest_payments(dataset, menu)):
            family = [m for m in inside if anchor in m]
            subset_form.extend(TIME_PROPERTY.check(dataset, family))
    subset_form = sort_witnesses(set(subset_form))
    status = "agree" if bool(pairwise) == bool(subset_form) else "disagree"
    return EquivalenceReport(status, tuple(pairwise), tuple(subset_form))


def check_outcome_monotonicity_impatience(dataset: ChoiceDataset) -> list:
    """Binary menus: more money at the same time wins; same money sooner wins."""
    witnesses = []
    for menu in dataset.menus():
        if len(menu) != 2:
            continue
        x, y = sorted(menu)
        px, py = _payment(dataset, x), _payment(dataset, y)
        expected = None
        if px.time == py.time and px.amount != py.amount:
            expected = x if px.amount > py.amount else y
            tag = "OutcomeMonotonicity"
        elif px.amount == py.amount and px.time != py.time:
            expected = x if px.time < py.time else y
            tag = "Impatience"
        if expected is not None and dataset.observations[menu] != {expected}:
            witnesses.append(ViolationWitness(
                kind=tag, menus=(menu,),
                narrative=f"{expected} should be the unique choice"))
    return witnesses


def check_present_bias(dataset: ChoiceDataset) -> list:
    """Patience may only grow under a uniform delay, plus the scaled-menu
    indifference-propagation clause."""
    witnesses = []
    menus = dataset.menus()
    pays = {alt: _payment(dataset, alt) for alt in dataset.universe}

    def timeline(menu):
        members = sorted(menu, key=lambda alt: (pays[alt].time, pays[alt].amount))
        times = [pays[alt].time for alt in members]
        if len(set(times)) != len(times):
            return None
        return members, times

    doubles = [m for m in menus if len(m) == 2]
    for menu_a in doubles:
        line_a = timeline(menu_a)
        if line_a is None:
            continue
        (e1, l1), (ta, tb) = line_a
        for menu_b in doubles:
            line_b = timeline(menu_b)
            if line_b is None:
                continue
            (e2, l2), (sa, sb) = line_b
            d = sa - ta
            if d <= 0 or sb - tb != d:
                continue
            if pays[e1].amount != pays[e2].amount or \
                    pays[l1].amount != pays[l2].amount:
                continue
            if dataset.observations[menu_a] == {l1} and \
                    dataset.observations[menu_b] != {l2}:
                witnesses.append(ViolationWitness(
                    kind="PresentBias",
                    menus=(menu_a, menu_b),
                    narrative=(f"the later option {l1} wins, but after delaying "
                               f"both by {format_rational(d)} it no longer does"),
                ))
    triples = [m for m in menus if len(m) == 3]
    for menu_a in triples:
        line_a = timeline(menu_a)
        if line_a is None or dataset.observations[menu_a] != menu_a:
            continue
        members_a, times_a = line_a
        for menu_b in triples:
            if menu_b == menu_a:
                continue
            line_b = timeline(menu_b)
            if line_b is None:
                continue
            members_b, times_b = line_b
            if any(pays[x].amount != pays[y].amount
                   for x, y in zip(members_a, members_b)):
                continue
            span = times_a[2] - times_a[0]
            scale = (times_b[2] - times_b[0]) / span
            offset = times_b[0] - scale * times_a[0]
            if not 0 < scale < 1:
                continue
            if times_b[1] != scale * times_a[1] + offset:
                continue
            picked = dataset.observations[menu_b]
            if members_b[0] in picked and members_b[2] in picked \
                    and members_b[1] not in picked:
                witnesses.append(ViolationWitness(
                    kind="PresentBias",
                    menus=(menu_a, menu_b),
                    narrative=("indifference among all three did not carry the "
                               "middle option through the time rescaling"),
                ))
    return sort_witnesses(set(witnesses))


# -- parameters -------------------------------------------------------------


@dataclass(frozen=True)
class PbduParams:
    """Log-form parameters: L = log-utility per amount, D = log-discount
    per reference time, all exact rationals."""

    log_utility: tuple   # tuple[(amount, L)], amounts ascending, L strictly up
    log_discount: tuple  # tuple[(time, D)], times ascending, D nondecreasing, < 0

    def __post_init__(self):
        amounts = [a for a, _ in self.log_utility]
        if amounts != sorted(amounts) or len(set(amounts)) != len(amounts):
            raise ValidationError("amount grid must be strictly sorted")
        values = [v for _, v in self.log_utility]
        if any(values[i] >= values[i + 1] for i in range(len(values) - 1)):
            raise ValidationError("log-utility must be strictly increasing")
        times = [t for t, _ in self.log_discount]
        if times != sorted(times) or len(set(times)) != len(times):
            raise ValidationError("time grid must be strictly sorted")
        discounts = [v for _, v in self.log_discount]
        if any(discounts[i] > discounts[i + 1] for i in range(len(discounts) - 1)):
            raise ValidationError("log-discount must be nondecreasing in time")
        if any(v >= 0 for v in discounts):
            raise ValidationError("log-discounts must be negative")

    def utility_log(self, amount) -> Fraction:
        for a, v in self.log_utility:
            if a == amount:
                return v
        raise UnknownAlternative(f"amount {amount} outside the fitted grid")

    def discount_log(self, ref_time) -> Fraction:
        # Step extension: reference times between grid points inherit the
        # value of the largest fitted time below them.
        below = [v for t, v in self.log_discount if t <= ref_time]
        if below:
            return below[-1]
        return self.log_discount[0][1]

    def display_deltas(self) -> dict:
        """Decimal approximations of the discount factors (non-normative)."""
        return {format_rational(t): math.exp(float(v))
                for t, v in self.log_discount}

    def to_json(self) -> dict:
        return {
            "log_utility": {format_rational(a): format_rational(v)
                            for a, v in self.log_utility},
            "log_discount": {format_rational(t): format_rational(v)
                             for t, v in self.log_discount},
            "display_deltas_approx": self.display_deltas(),
        }

    @staticmethod
    def from_json(doc) -> "PbduParams":
        return PbduParams(
            tuple(sorted((parse_rational(a), parse_rational(v))
                         for a, v in doc["log_utility"].items())),
            tuple(sorted((parse_rational(t), parse_rational(v))
                         for t, v in doc["log_discount"].items())),
        )


def evaluate_pbdu(params: PbduParams, payments: dict) -> frozenset:
    """``payments`` maps ids to PaymentPayload; returns the chosen ids."""
    ref = min(p.time for p in payments.values())
    d = params.discount_log(ref)
    scores = {alt: params.utility_log(p.amount) + p.time * d
              for alt, p in payments.items()}
    best = max(scores.values())
    return frozenset(alt for alt, s in scores.items() if s == best)


def simulate_pbdu(params: PbduParams, alternatives, menus) -> ChoiceDataset:
    alts = {a.id: a for a in alternatives}
    observations = {}
    for menu in menus:
        menu = frozenset(menu)
        observations[menu] = evaluate_pbdu(
            params, {alt: alts[alt].payload for alt in menu})
    return ChoiceDataset(DATED_PAYMENT, alts, observations)


def verify_pbdu(params: PbduParams, dataset: ChoiceDataset) -> list:
    mismatches = []
    for menu in dataset.menus():
        predicted = evaluate_pbdu(
            params, {alt: _payment(dataset, alt) for alt in menu})
        if predicted != dataset.observations[menu]:
            mismatches.append((menu, predicted, dataset.observations[menu]))
    return mismatches


def standing_assumption(dataset: ChoiceDataset):
    """True/False for the best-late-vs-worst-now doubleton when observed,
    None when that menu never appears."""
    amounts = [_payment(dataset, alt).amount for alt in dataset.universe]
    times = [_payment(dataset, alt).time for alt in dataset.universe]
    lo_now = [alt for alt in dataset.universe
              if _payment(dataset, alt).amount == min(amounts)
              and _payment(dataset, alt).time == min(times)]
    hi_late = [alt for alt in dataset.universe
               if _payment(dataset, alt).amount == max(amounts)
               and _payment(dataset, alt).time == max(times)]
    for a in lo_now:
        for b in hi_late:
            menu = frozenset((a, b))
            if menu in dataset.observations:
                return b in dataset.observations[menu]
    return None


def fit_pbdu(dataset: ChoiceDataset) -> PbduParams:
    """One exact feasibility system for the whole dataset.

    Menu with reference time r, chosen (x,t) against member (y,s):
    t*D(r) + L(x) >= s*D(r) + L(y), strict when (y,s) is unchosen, an
    equality when both are chosen; plus L strictly increasing, D
    nondecreasing and negative.
    """
    if dataset.kind != DATED_PAYMENT:
        raise ValidationError("fit_pbdu needs a dated-payment dataset")
    for name, witnesses in (
            ("outcome monotonicity / impatience",
             check_outcome_monotonicity_impatience(dataset)),
            ("time reference dependence", check_time_reference_dependence(dataset)),
            ("present bias", check_present_bias(dataset))):
        if witnesses:
            raise AxiomFails(name, witnesses)
    amounts = sorted({_payment(dataset, alt).amount for alt in dataset.universe})
    refs = sorted({min(_payment(dataset, alt).time for alt in menu)
                   for menu in dataset.menus()})
    lvar = {a: f"L[{format_rational(a)}]" for a in amounts}

    def build(dvar):
        problem = LinearFeasibilityProblem()
        for lo, hi in zip(amounts, amounts[1:]):
            problem.add({lvar[hi]: 1, lvar[lo]: -1}, ">", 0)
        seen = sorted({dvar(r) for r in refs})
        for name in seen:
            problem.add({name: 1}, "<", 0)
        ordered = [dvar(r) for r in refs]
        for lo, hi in zip(ordered, ordered[1:]):
            if lo != hi:
                problem.add({hi: 1, lo: -1}, ">=", 0)
        for menu in dataset.menus():
            ref = min(_payment(dataset, alt).time for alt in menu)
            picked = sorted(dataset.observations[menu])
            head = picked[0]
            hp = _payment(dataset, head)
            for other in sorted(menu):
                if other == head:
                    continue
                op = _payment(dataset, other)
                coeffs = {}
                coeffs[lvar[hp.amount]] = coeffs.get(lvar[hp.amount], _ZERO) + 1
                coeffs[lvar[op.amount]] = coeffs.get(lvar[op.amount], _ZERO) - 1
                coeffs[dvar(ref)] = coeffs.get(dvar(ref), _ZERO) + hp.time - op.time
                coeffs = {k: v for k, v in coeffs.items() if v != 0}
                relation = "=" if other in dataset.observations[menu] else ">"
                problem.add(coeffs, relation, 0)
        return problem

    # a single discount first: classical data stays classical
    result = solve_linear_feasibility(build(lambda r: "D[shared]"))
    if not result:
        result = solve_linear_feasibility(
            build(lambda r: f"D[{format_rational(r)}]"))
        if not result:
            raise InfeasibleFit("no log-utility / log-discount system fits the data")
        discount = tuple((r, result.assignment[f"D[{format_rational(r)}]"])
                         for r in refs)
    else:
        discount = tuple((r, result.assignment["D[shared]"]) for r in refs)
    log_utility = tuple((a, result.assignment[lvar[a]]) for a in amounts)
    return PbduParams(log_utility, discount)


def single_switching_check(params: PbduParams, earlier: PaymentPayload,
                           later: PaymentPayload, shifts) -> list:
    """Simulate the binary choice under each postponement and demand the
    pattern earlier* (tie)? later*: one switch, never back."""
    if not (earlier.amount < later.amount and earlier.time < later.time):
        raise ValidationError("need a smaller-sooner vs larger-later pair")
    sequence = []
    for shift in sorted(Fraction(s) for s in shifts):
        menu = {
            "early": PaymentPayload(earlier.amount, earlier.time + shift),
            "late": PaymentPayload(later.amount, later.time + shift),
        }
        picked = evaluate_pbdu(params, menu)
        sequence.append((shift, "both" if len(picked) == 2
                         else ("early" if "early" in picked else "late")))
    witnesses = []
    state = 0  # 0: earlier phase, 1: tie seen, 2: later phase
    for shift, verdict in sequence:
        if verdict == "early":
            if state > 0:
                witnesses.append(ViolationWitness(
                    kind="SingleSwitching", menus=(),
                    narrative=f"switched back to the earlier option at shift "
                              f"{format_rational(shift)}"))
            continue
        if verdict == "both":
            if state == 2:
                witnesses.append(ViolationWitness(
                    kind="SingleSwitching", menus=(),
                    narrative=f"tie after the switch at shift "
                              f"{format_rational(shift)}"))
            state = max(state, 1)
            continue
        state = 2
    return witnesses


def linkage_report_time(dataset: ChoiceDataset) -> dict:
    family = dataset.menus()
    return {
        "warp": warp_over(dataset, family),
        "stationarity": stationarity_over(dataset, family),
    }
