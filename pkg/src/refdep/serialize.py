"""JSON wire formats: datasets, menus files, fitted parameters.

Rationals travel as strings, either "p/q" or decimal ("0.8"), and are
parsed exactly.  All emitters sort keys so identical inputs always
produce byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .choices import (
    Alternative,
    ChoiceDataset,
    DATED_PAYMENT,
    GENERIC,
    INCOME_SPLIT,
    LOTTERY,
    LotteryPayload,
    PaymentPayload,
    SplitPayload,
    validate_dataset,
)
from .exceptions import ValidationError


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValidationError(f"refusing float {text!r}; pass a string for exactness")
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational literal {text!r}") from exc


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _payload_from_json(kind, raw):
    if kind == GENERIC:
        if raw not in (None, {}):
            raise ValidationError("generic alternatives carry no payload")
        return None
    if raw is None:
        raise ValidationError(f"{kind} alternatives need a payload")
    if kind == LOTTERY:
        probs = sorted((parse_rational(x), parse_rational(p))
                       for x, p in raw["probs"].items())
        probs = tuple((x, p) for x, p in probs if p != 0)
        total = sum((p for _, p in probs), Fraction(0))
        if total != 1 or any(p < 0 for _, p in probs):
            raise ValidationError("lottery probabilities must be >= 0 and sum to 1")
        return LotteryPayload(probs)
    if kind == DATED_PAYMENT:
        amount = parse_rational(raw["amount"])
        time = parse_rational(raw["time"])
        if amount <= 0 or time < 0:
            raise ValidationError("payments need amount > 0 and time >= 0")
        return PaymentPayload(amount, time)
    if kind == INCOME_SPLIT:
        return SplitPayload(parse_rational(raw["own"]), parse_rational(raw["other"]))
    raise ValidationError(f"unknown dataset kind {kind!r}")


def _payload_to_json(payload):
    if payload is None:
        return None
    if isinstance(payload, LotteryPayload):
        return {"probs": {format_rational(x): format_rational(p)
                          for x, p in payload.probs}}
    if isinstance(payload, PaymentPayload):
        return {"amount": format_rational(payload.amount),
                "time": format_rational(payload.time)}
    if isinstance(payload, SplitPayload):
        return {"own": format_rational(payload.own),
                "other": format_rational(payload.other)}
    raise ValidationError(f"unknown payload {payload!r}")


def dataset_from_dict(doc) -> ChoiceDataset:
    try:
        kind = doc["kind"]
        alts = [Alternative(a["id"], _payload_from_json(kind, a.get("payload")))
                for a in doc["alternatives"]]
        observations = [(obs["menu"], obs["choice"]) for obs in doc["observations"]]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed dataset document: {exc}") from exc
    floor = parse_rational(doc["floor"]) if "floor" in doc else None
    return validate_dataset(kind, alts, observations, floor=floor)


def dataset_to_dict(ds: ChoiceDataset) -> dict:
    doc = {
        "kind": ds.kind,
        "alternatives": [
            {"id": alt_id, **({"payload": _payload_to_json(alt.payload)}
                              if alt.payload is not None else {})}
            for alt_id, alt in sorted(ds.alternatives.items())
        ],
        "observations": [
            {"menu": sorted(menu), "choice": sorted(ds.observations[menu])}
            for menu in ds.menus()
        ],
    }
    if ds.floor is not None:
        doc["floor"] = format_rational(ds.floor)
    return doc


def load_dataset(path) -> ChoiceDataset:
    with open(path) as fh:
        return dataset_from_dict(json.load(fh))


def dump_dataset(ds: ChoiceDataset, path) -> None:
    with open(path, "w") as fh:
        json.dump(dataset_to_dict(ds), fh, indent=2, sort_keys=True)
        fh.write("\n")


def menus_from_dict(doc):
    """A menus file is a dataset document with "menus" instead of observations."""
    try:
        kind = doc["kind"]
        alts = [Alternative(a["id"], _payload_from_json(kind, a.get("payload")))
                for a in doc["alternatives"]]
        menus = [frozenset(m) for m in doc["menus"]]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed menus document: {exc}") from exc
    ids = {a.id for a in alts}
    for menu in menus:
        if not menu:
            raise ValidationError("empty menu in menus file")
        if not menu <= ids:
            raise ValidationError(f"menu {sorted(menu)} uses undeclared ids")
    floor = parse_rational(doc["floor"]) if "floor" in doc else None
    return kind, {a.id: a for a in alts}, menus, floor


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
