"""Choice datasets, WARP machinery, and the finite-property framework.

A dataset is a finite choice correspondence: a map from observed menus
(nonempty sets of alternative ids) to nonempty chosen subsets.  All
behavioral checkers in this package consume this one primitive.  Every
quantity attached to an alternative (probabilities, payments, incomes)
is an exact ``fractions.Fraction``; no checker ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .exceptions import (
    ChoiceOutsideMenu,
    DuplicateMenu,
    EmptyChoice,
    MixedPayloadKinds,
    UnobservedMenu,
    ValidationError,
)

Menu = frozenset  # frozenset[str]; aliased for readability in signatures

GENERIC = "generic"
LOTTERY = "lottery"
DATED_PAYMENT = "dated_payment"
INCOME_SPLIT = "income_split"
KINDS = (GENERIC, LOTTERY, DATED_PAYMENT, INCOME_SPLIT)


@dataclass(frozen=True)
class LotteryPayload:
    """A lottery as sorted (prize, probability) pairs with positive mass."""

    probs: tuple  # tuple[(Fraction prize, Fraction prob), ...]

    def support(self):
        return tuple(x for x, _ in self.probs)

    def prob(self, prize) -> Fraction:
        for x, p in self.probs:
            if x == prize:
                return p
        return Fraction(0)

    def mean(self) -> Fraction:
        return sum((x * p for x, p in self.probs), Fraction(0))


@dataclass(frozen=True)
class PaymentPayload:
    """A single dated payment: ``amount`` arriving at ``time``."""

    amount: Fraction
    time: Fraction


@dataclass(frozen=True)
class SplitPayload:
    """An income split: ``own`` for the chooser, ``other`` for the recipient."""

    own: Fraction
    other: Fraction


@dataclass(frozen=True)
class Alternative:
    id: str
    payload: object = None  # LotteryPayload | PaymentPayload | SplitPayload | None


def menu_key(menu: Menu):
    """Canonical sort key for menus: size, then sorted ids."""
    return (len(menu), tuple(sorted(menu)))


def sorted_menus(menus: Iterable[Menu]):
    return sorted(menus, key=menu_key)


@dataclass(frozen=True)
class ViolationWitness:
    """A certified axiom violation.

    ``menus`` are exactly the observations whose replay reproduces the
    failure of the named clause; ``narrative`` says which clause and how.
    """

    kind: str
    menus: tuple  # tuple[Menu, ...]
    narrative: str

    def sort_key(self):
        return (tuple(menu_key(m) for m in self.menus), self.kind, self.narrative)


def sort_witnesses(witnesses):
    return sorted(witnesses, key=ViolationWitness.sort_key)


@dataclass(frozen=True)
class FiniteProperty:
    """A behavioral postulate with finitely certified violations.

    ``evaluator(dataset, family)`` returns every violation witnessable
    inside ``family`` (a collection of observed menus); an empty list
    means the restricted data passes.  Evaluators must be monotone under
    restriction: shrinking the family can only remove witnesses.
    """

    name: str
    evaluator: Callable

    def check(self, dataset: "ChoiceDataset", family) -> list:
        return self.evaluator(dataset, family)


def conjoin(*properties: FiniteProperty) -> FiniteProperty:
    """Intersection of finite properties; witnesses keep their conjunct's tag."""

    name = " & ".join(p.name for p in properties)

    def evaluator(dataset, family):
        out = []
        for prop in properties:
            out.extend(prop.check(dataset, family))
        return sort_witnesses(out)

    return FiniteProperty(name, evaluator)


class ChoiceDataset:
    """Finite choice correspondence over a universe of alternatives.

    Instances are immutable by convention.  ``observations`` maps each
    observed menu (frozenset of ids) to its nonempty chosen subset.
    """

    def __init__(self, kind, alternatives, observations, floor=None, _validated=False):
        self.kind = kind
        self.alternatives = dict(alternatives)  # id -> Alternative
        self.observations = {Menu(m): Menu(c) for m, c in observations.items()}
        self.floor = floor  # income floor, income_split datasets only
        self._cache = {}
        if not _validated:
            _check_invariants(self)

    # -- basic views -------------------------------------------------

    @property
    def universe(self) -> Menu:
        return Menu(self.alternatives)

    def menus(self):
        return sorted_menus(self.observations)

    def choice(self, menu: Menu) -> Menu:
        try:
            return self.observations[Menu(menu)]
        except KeyError:
            raise UnobservedMenu(f"menu {sorted(menu)} was not observed")

    def payload(self, alt_id: str):
        return self.alternatives[alt_id].payload

    def same_observations(self, other: "ChoiceDataset") -> bool:
        return self.observations == other.observations

    # -- derived structure (cached per dataset) ------------------------

    def observed_subsets(self, menu: Menu):
        """All observed menus contained in ``menu`` (including itself)."""
        table = self._cache.get("subsets")
        if table is None:
            table = {}
            ordered = self.menus()
            for big in ordered:
                table[big] = [small for small in ordered if small <= big]
            self._cache["subsets"] = table
        if Menu(menu) in table:
            return table[Menu(menu)]
        target = Menu(menu)
        return [m for m in self.menus() if m <= target]

    def nested_pairs(self):
        """All observed (small, big) pairs with small a strict subset of big."""
        pairs = self._cache.get("nested")
        if pairs is None:
            pairs = []
            ordered = self.menus()
            for big in ordered:
                for small in self.observed_subsets(big):
                    if small != big:
                        pairs.append((small, big))
            self._cache["nested"] = pairs
        return pairs

    def restrict(self, family) -> "ChoiceDataset":
        """Keep only the observations in ``family``; universe unchanged."""
        family = [Menu(m) for m in family]
        for m in family:
            if m not in self.observations:
                raise UnobservedMenu(f"menu {sorted(m)} was not observed")
        kept = {m: self.observations[m] for m in family}
        return ChoiceDataset(self.kind, self.alternatives, kept,
                             floor=self.floor, _validated=True)


def _check_invariants(ds: ChoiceDataset) -> None:
    if ds.kind not in KINDS:
        raise ValidationError(f"unknown dataset kind {ds.kind!r}")
    payload_types = {
        GENERIC: type(None),
        LOTTERY: LotteryPayload,
        DATED_PAYMENT: PaymentPayload,
        INCOME_SPLIT: SplitPayload,
    }
    want = payload_types[ds.kind]
    for alt in ds.alternatives.values():
        if not isinstance(alt.payload, want):
            raise MixedPayloadKinds(
                f"alternative {alt.id!r} has payload {type(alt.payload).__name__}, "
                f"dataset kind is {ds.kind!r}")
    ids = ds.universe
    for menu, choice in ds.observations.items():
        if not menu:
            raise ValidationError("empty menu")
        if not menu <= ids:
            raise ValidationError(f"menu {sorted(menu)} not contained in the universe")
        if not choice:
            raise EmptyChoice(f"menu {sorted(menu)} has an empty choice")
        if not choice <= menu:
            raise ChoiceOutsideMenu(
                f"choice {sorted(choice)} not contained in menu {sorted(menu)}")
    if ds.kind == INCOME_SPLIT:
        floor = ds.floor if ds.floor is not None else Fraction(0)
        if floor <= 0:
            raise ValidationError("income floor must be positive")
        for alt in ds.alternatives.values():
            if alt.payload.own < floor or alt.payload.other < floor:
                raise ValidationError(
                    f"alternative {alt.id!r} pays below the floor {floor}")


def validate_dataset(kind, alternatives, observations, floor=None) -> ChoiceDataset:
    """Build a dataset from raw pieces, checking every invariant.

    ``observations`` may be any iterable of (menu, choice) id-collection
    pairs; duplicate menus are rejected rather than merged (observing the
    same menu twice with different choices has no agreed semantics).
    """
    alt_map = {}
    for alt in alternatives:
        if alt.id in alt_map:
            raise ValidationError(f"duplicate alternative id {alt.id!r}")
        alt_map[alt.id] = alt
    obs = {}
    if isinstance(observations, Mapping):
        observations = observations.items()
    for menu, choice in observations:
        key = Menu(menu)
        if key in obs:
            raise DuplicateMenu(f"menu {sorted(key)} observed twice")
        obs[key] = Menu(choice)
    return ChoiceDataset(kind, alt_map, obs, floor=floor)


# -- WARP ----------------------------------------------------------------


def warp_over(dataset: ChoiceDataset, family) -> list:
    """Violations of WARP inside ``family``.

    For observed menus B strictly inside A with c(A) meeting B, the clause
    requires c(A) ∩ B = c(B).  Every offending (A, B) pair is reported,
    sorted lexicographically by menu.
    """
    fam = [Menu(m) for m in family]
    for m in fam:
        if m not in dataset.observations:
            raise UnobservedMenu(f"menu {sorted(m)} was not observed")
    fam = sorted_menus(set(fam))
    witnesses = []
    for big in fam:
        c_big = dataset.observations[big]
        for small in fam:
            if small == big or not small < big:
                continue
            kept = c_big & small
            if kept and kept != dataset.observations[small]:
                witnesses.append(ViolationWitness(
                    kind="WARP",
                    menus=(big, small),
                    narrative=(
                        f"c({_fmt(big)}) ∩ {_fmt(small)} = {_fmt(kept)} "
                        f"but c({_fmt(small)}) = {_fmt(dataset.observations[small])}"),
                ))
    return sort_witnesses(witnesses)


def _fmt(ids) -> str:
    return "{" + ",".join(sorted(ids)) + "}"


WARP = FiniteProperty("WARP", warp_over)


def restrict(dataset: ChoiceDataset, family) -> ChoiceDataset:
    """Functional alias for :meth:`ChoiceDataset.restrict`."""
    return dataset.restrict(family)
