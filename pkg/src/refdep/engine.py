"""The unified reference-dependence engine.

Everything here is parameterized by a finite property T and an
admissible-reference map Psi.  A menu's candidate references are the
admissible members whose preservation keeps T intact on the observed
sub-menus; the generalized axiom asks every menu to have at least one
(or, in universal mode, demands it of every admissible member).  When
the axiom holds, a total reference order consistent with the data can
be synthesized by the doubleton-pruning recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from .choices import (
    ChoiceDataset,
    FiniteProperty,
    Menu,
    ViolationWitness,
    menu_key,
    sorted_menus,
)
from .exceptions import AxiomFails, NonHereditaryPsi, SynthesisFailed


@dataclass(frozen=True)
class PsiMap:
    """Admissible-reference map: menu -> nonempty subset of the menu.

    Must be hereditary: an admissible member of a menu stays admissible
    in any sub-menu containing it.  ``evaluator(dataset, menu)`` may use
    alternative payloads (least-risky lotteries, earliest payments, ...).
    """

    name: str
    evaluator: Callable

    def of(self, dataset: ChoiceDataset, menu) -> frozenset:
        return frozenset(self.evaluator(dataset, menu))


IDENTITY_PSI = PsiMap("identity", lambda dataset, menu: frozenset(menu))


def check_psi_hereditary(dataset: ChoiceDataset, psi: PsiMap) -> None:
    """Raise NonHereditaryPsi if heredity fails on an observed nested pair."""
    key = ("psi-hereditary", psi.name)
    if dataset._cache.get(key):
        return
    for small, big in dataset.nested_pairs():
        stuck = (psi.of(dataset, big) & small) - psi.of(dataset, small)
        if stuck:
            raise NonHereditaryPsi(
                f"{psi.name}: {sorted(stuck)} admissible in {sorted(big)} "
                f"but not in sub-menu {sorted(small)}")
    dataset._cache[key] = True


@dataclass(frozen=True)
class ReferenceOrder:
    """Strict total order over alternative ids, highest-ranked first."""

    ranking: tuple

    def __post_init__(self):
        if len(set(self.ranking)) != len(self.ranking):
            raise ValueError("ranking has duplicates")

    def position(self, alt_id) -> int:
        return self.ranking.index(alt_id)

    def rank_map(self) -> dict:
        return {alt_id: i for i, alt_id in enumerate(self.ranking)}

    def argmax(self, menu) -> str:
        ranks = self.rank_map()
        return min(menu, key=lambda alt_id: ranks[alt_id])

    def above(self, x, y) -> bool:
        ranks = self.rank_map()
        return ranks[x] <= ranks[y]

    def to_json(self):
        return list(self.ranking)


def candidate_set(dataset: ChoiceDataset, prop: FiniteProperty, psi: PsiMap,
                  pool) -> frozenset:
    """Candidate references of an arbitrary alternative set ``pool``.

    A member x qualifies when the data restricted to observed menus
    inside ``pool`` that contain x satisfies T.
    """
    pool = frozenset(pool)
    inside = [m for m in dataset.observed_subsets(pool)]
    admissible = psi.of(dataset, pool)
    out = []
    for x in sorted(admissible):
        family = [m for m in inside if x in m]
        if not prop.check(dataset, family):
            out.append(x)
    return frozenset(out)


def candidate_references(dataset: ChoiceDataset, prop: FiniteProperty,
                         psi: PsiMap) -> dict:
    """Per observed menu, the candidate-reference set (a CandidateMap)."""
    check_psi_hereditary(dataset, psi)
    return {menu: candidate_set(dataset, prop, psi, menu)
            for menu in dataset.menus()}


@dataclass(frozen=True)
class ReferenceDependenceFailure:
    """A menu with no working reference, with each admissible member's
    blocking violations."""

    menu: Menu
    per_candidate: tuple  # tuple[(str, tuple[ViolationWitness, ...]), ...]

    def narrative(self) -> str:
        names = ", ".join(x for x, _ in self.per_candidate)
        return (f"menu {{{','.join(sorted(self.menu))}}} has no admissible "
                f"reference; failing candidates: {names}")


def check_reference_dependence(dataset: ChoiceDataset, prop: FiniteProperty,
                               psi: PsiMap, universal: bool = False) -> list:
    """Empty list iff the generalized reference-dependence axiom holds.

    Existential form (default): every observed menu needs some admissible
    member preserving T on the observed sub-menus containing it.  With
    ``universal=True`` every admissible member must do so (the social
    domain's stronger quantifier); failures then list only the broken
    candidates.
    """
    check_psi_hereditary(dataset, psi)
    failures = []
    for menu in dataset.menus():
        inside = dataset.observed_subsets(menu)
        admissible = sorted(psi.of(dataset, menu))
        broken = []
        ok = 0
        for x in admissible:
            family = [m for m in inside if x in m]
            witnesses = prop.check(dataset, family)
            if witnesses:
                broken.append((x, tuple(witnesses)))
            else:
                ok += 1
        bad = (ok == 0) if not universal else bool(broken)
        if bad:
            failures.append(ReferenceDependenceFailure(menu, tuple(broken)))
    return sorted(failures, key=lambda f: menu_key(f.menu))


def synthesize_reference_order(dataset: ChoiceDataset, prop: FiniteProperty,
                               psi: PsiMap, debug: bool = False) -> ReferenceOrder:
    """Build a Psi-consistent total reference order explaining the data.

    Finite doubleton-pruning recursion: start each observed menu's image
    at its candidate set, walk the doubletons of the universe in id
    order, and at each one delete (from every observed superset) a
    member whose removal empties no image.  Once all doubletons are
    visited the surviving images are singletons and the kept-over
    relation is the order.
    """
    failures = check_reference_dependence(dataset, prop, psi)
    if failures:
        raise AxiomFails(f"reference dependence ({prop.name} / {psi.name})", failures)
    images = dict(candidate_references(dataset, prop, psi))
    universe = sorted(dataset.universe)
    beats = {}

    def deletable(z, supersets):
        return all(images[menu] - {z} for menu in supersets if z in images[menu])

    for x, y in combinations(universe, 2):
        pair = frozenset((x, y))
        supersets = [menu for menu in dataset.menus() if pair <= menu]
        dx = deletable(x, supersets)
        dy = deletable(y, supersets)
        if dx and dy:
            drop, keep = (y, x)  # free pair: keep the lexicographically smaller
        elif dx:
            drop, keep = x, y
        elif dy:
            drop, keep = y, x
        else:
            raise SynthesisFailed(
                f"neither of {{{x},{y}}} is deletable; the observed menus are "
                "too sparse for the pruning recursion (no observed union menu)")
        beats[(keep, drop)] = True
        for menu in supersets:
            images[menu] = images[menu] - {drop}
        if debug:
            for menu, image in images.items():
                assert image, f"image of {sorted(menu)} emptied"
                for sub in dataset.observed_subsets(menu):
                    assert image & sub <= images[sub], "alpha property broken"

    wins = {x: 0 for x in universe}
    for keep, _ in beats:
        wins[keep] += 1
    ranking = sorted(universe, key=lambda z: (-wins[z], z))
    for hi, lo in combinations(ranking, 2):
        if (hi, lo) not in beats:
            raise SynthesisFailed(
                f"kept-over relation is cyclic around {{{hi},{lo}}}; "
                "cannot linearize on this partial dataset")
    order = ReferenceOrder(tuple(ranking))

    for menu, image in images.items():
        if len(image) != 1 or order.argmax(menu) not in image:
            raise SynthesisFailed(
                f"image of {sorted(menu)} did not collapse to its order maximum")
    for x in universe:
        family = [m for m in dataset.menus() if order.argmax(m) == x]
        witnesses = prop.check(dataset, family)
        if witnesses:
            raise SynthesisFailed(
                f"reference class of {x!r} violates {prop.name} across "
                "non-nested observed menus; data too sparse to certify")
    return order


def psi_consistency_check(order: ReferenceOrder, psi: PsiMap,
                          dataset: ChoiceDataset, menus) -> list:
    """Witnesses to Psi-inconsistency: a menu whose non-admissible member
    outranks every admissible member."""
    witnesses = []
    ranks = order.rank_map()
    for menu in sorted_menus(frozenset(m) for m in menus):
        admissible = psi.of(dataset, menu)
        best_admissible = min(ranks[x] for x in admissible)
        for y in sorted(menu - admissible):
            if ranks[y] < best_admissible:
                witnesses.append(ViolationWitness(
                    kind="psi-consistency",
                    menus=(menu,),
                    narrative=(f"{y} is not admissible in {{{','.join(sorted(menu))}}} "
                               f"yet outranks every admissible member"),
                ))
    return witnesses
