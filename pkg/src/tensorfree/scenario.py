"""Scenario files: JSON descriptions of spaces, variables, and bindings.

Two kinds of file.  A tensor scenario lists K factor spaces (group
algebra, group algebra with a value table, or spectral) and binds each
joint variable to one component variable per factor.  A group scenario
lists a presented group and a collection of its elements, for the
group-level freeness checks and their group-algebra bridge.

Values are exact: scalars are integers, [num, den] rationals, or
[re_num, re_den, im_num, im_den] complex rationals.  Star patterns use
the grammar "aa*a" (a letter per "a", starred by a following "*");
unitary power moments are keyed by signed integers; group elements use
the shared token grammar ("g1.2^-3", identity "e").
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ScenarioError
from .groups import (
    FreeProductPresentation,
    GroupElement,
    GroupPresentation,
    parse_group_word,
)
from .ncpartitions import MomentSequence
from .scalars import ExactComplex, as_scalar, scalar_from_json
from .spaces import (
    GroupAlgebraModel,
    MomentFunctional,
    SpectralModel,
    TableFunctional,
)
from .tensor import TensorScenario

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GroupCollection:
    """A presented group with an indexed collection of its elements."""

    presentation: GroupPresentation
    elements: dict[int, GroupElement]
    name: str = ""

    def __post_init__(self) -> None:
        if not self.elements:
            raise ScenarioError("empty group collection")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements))


def canonical_trace_view(collection: GroupCollection) -> GroupAlgebraModel:
    """The collection's elements as variables of the group algebra with
    the canonical trace, so star-word freeness can be tested on them."""
    return GroupAlgebraModel(collection.presentation, dict(collection.elements))


@dataclass(frozen=True)
class ScenarioFile:
    """A parsed scenario: exactly one of tensor or collection is set."""

    name: str
    kind: str
    tensor: TensorScenario | None = None
    collection: GroupCollection | None = None
    bounds: Mapping[str, int] = field(default_factory=dict)
    alpha: ExactComplex | None = None


# -- reading ---------------------------------------------------------------


def _require(data: Mapping, key: str, where: str):
    if key not in data:
        raise ScenarioError(f"{where}: missing {key!r}")
    return data[key]


def _scalar(raw, where: str) -> ExactComplex:
    try:
        return scalar_from_json(raw)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"{where}: bad scalar {raw!r}: {exc}") from exc


def _int_key(text: str, where: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ScenarioError(f"{where}: bad integer key {text!r}") from None


def presentation_from_json(data, where: str = "presentation") -> GroupPresentation:
    if not isinstance(data, Mapping):
        raise ScenarioError(f"{where}: must be an object")
    components = _require(data, "components", where)
    if not isinstance(components, list) or not components:
        raise ScenarioError(f"{where}: components must be a nonempty list")
    parts = []
    for n, comp in enumerate(components, start=1):
        orders_raw = _require(comp, "cyclic_orders", f"{where}.components[{n}]")
        orders = []
        for o in orders_raw:
            if o == "inf" or o is None:
                orders.append(None)
            elif isinstance(o, int):
                orders.append(o)
            else:
                raise ScenarioError(
                    f"{where}: cyclic order must be an integer or \"inf\", got {o!r}"
                )
        parts.append(FreeProductPresentation(tuple(orders)))
    return GroupPresentation(tuple(parts))


def _pattern_from_text(text: str) -> tuple[bool, ...]:
    out: list[bool] = []
    for ch in text:
        if ch == "a":
            out.append(False)
        elif ch == "*":
            if not out or out[-1]:
                raise ScenarioError(f"bad star pattern {text!r}")
            out[-1] = True
        else:
            raise ScenarioError(f"bad star pattern {text!r}")
    if not out:
        raise ScenarioError("empty star pattern")
    return tuple(out)


def _pattern_to_text(pattern) -> str:
    return "".join("a*" if b else "a" for b in pattern)


def _sequence_from_json(data, where: str) -> MomentSequence:
    if not isinstance(data, Mapping):
        raise ScenarioError(f"{where}: must be an object")
    unitary = bool(data.get("unitary", False))
    period = data.get("period")
    if period is not None and (not isinstance(period, int) or period < 1):
        raise ScenarioError(f"{where}: period must be a positive integer")
    complete_through = data.get("complete_through")
    if complete_through is not None and (
        not isinstance(complete_through, int) or complete_through < 0
    ):
        raise ScenarioError(f"{where}: complete_through must be a nonnegative integer")
    moments_raw = data.get("moments", {})
    if not isinstance(moments_raw, Mapping):
        raise ScenarioError(f"{where}: moments must be an object")
    moments: dict = {}
    for key_text, raw in moments_raw.items():
        value = _scalar(raw, f"{where}.moments[{key_text!r}]")
        if unitary:
            moments[_int_key(key_text, f"{where}.moments")] = value
        else:
            moments[_pattern_from_text(key_text)] = value
    try:
        return MomentSequence(
            moments,
            unitary=unitary,
            period=period,
            complete_through=complete_through,
        )
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def factor_from_json(data, where: str) -> MomentFunctional:
    if not isinstance(data, Mapping):
        raise ScenarioError(f"{where}: must be an object")
    kind = _require(data, "space", where)
    if kind == "spectral":
        variables_raw = _require(data, "variables", where)
        variables = {
            _int_key(v, f"{where}.variables"): _sequence_from_json(
                seq, f"{where}.variables[{v}]"
            )
            for v, seq in variables_raw.items()
        }
        if not variables:
            raise ScenarioError(f"{where}: no variables")
        return SpectralModel(variables, assume_free=bool(data.get("assume_free", False)))
    if kind in ("group", "table"):
        presentation = presentation_from_json(
            _require(data, "presentation", where), f"{where}.presentation"
        )
        variables_raw = _require(data, "variables", where)
        generators = {}
        for v, text in variables_raw.items():
            if not isinstance(text, str):
                raise ScenarioError(f"{where}.variables[{v}]: must be a group word")
            generators[_int_key(v, f"{where}.variables")] = parse_group_word(
                presentation, text
            )
        if not generators:
            raise ScenarioError(f"{where}: no variables")
        if kind == "group":
            return GroupAlgebraModel(presentation, generators)
        table_raw = _require(data, "table", where)
        table = {
            parse_group_word(presentation, text): _scalar(
                raw, f"{where}.table[{text!r}]"
            )
            for text, raw in table_raw.items()
        }
        return TableFunctional(presentation, generators, table)
    raise ScenarioError(f"{where}: unknown space kind {kind!r}")


def scenario_from_json(data, default_name: str = "") -> ScenarioFile:
    if not isinstance(data, Mapping):
        raise ScenarioError("scenario: top level must be an object")
    version = data.get("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"scenario: unsupported version {version!r}")
    name = data.get("name", default_name)
    if not isinstance(name, str):
        raise ScenarioError("scenario: name must be a string")
    bounds_raw = data.get("bounds", {})
    if not isinstance(bounds_raw, Mapping):
        raise ScenarioError("scenario: bounds must be an object")
    bounds = {}
    for key, value in bounds_raw.items():
        if key not in ("max_len", "max_blocks", "max_exp", "gram_len"):
            raise ScenarioError(f"scenario: unknown bound {key!r}")
        if not isinstance(value, int) or value < 1:
            raise ScenarioError(f"scenario: bound {key!r} must be a positive integer")
        bounds[key] = value
    alpha = None
    if "alpha" in data:
        alpha = _scalar(data["alpha"], "scenario.alpha")
    kind = _require(data, "kind", "scenario")
    if kind == "tensor":
        factors_raw = _require(data, "factors", "scenario")
        if not isinstance(factors_raw, list) or not factors_raw:
            raise ScenarioError("scenario: factors must be a nonempty list")
        factors = tuple(
            factor_from_json(f, f"factors[{n}]")
            for n, f in enumerate(factors_raw, start=1)
        )
        tensor_raw = _require(data, "tensor", "scenario")
        variables_raw = _require(tensor_raw, "variables", "scenario.tensor")
        assignments = {}
        for i, components in variables_raw.items():
            if not isinstance(components, list):
                raise ScenarioError(
                    f"scenario.tensor.variables[{i}]: must be a list of variable ids"
                )
            assignments[_int_key(i, "scenario.tensor.variables")] = tuple(components)
        free = tensor_raw.get("free", [False] * len(factors))
        if not isinstance(free, list) or not all(isinstance(b, bool) for b in free):
            raise ScenarioError("scenario.tensor.free: must be a list of booleans")
        tensor = TensorScenario(
            factors=factors,
            assignments=assignments,
            free_flags=tuple(free),
            name=name,
            bounds=bounds,
        )
        return ScenarioFile(name, "tensor", tensor=tensor, bounds=bounds, alpha=alpha)
    if kind == "group":
        presentation = presentation_from_json(
            _require(data, "presentation", "scenario"), "scenario.presentation"
        )
        elements_raw = _require(data, "elements", "scenario")
        elements = {}
        for i, text in elements_raw.items():
            if not isinstance(text, str):
                raise ScenarioError(f"scenario.elements[{i}]: must be a group word")
            elements[_int_key(i, "scenario.elements")] = parse_group_word(
                presentation, text
            )
        collection = GroupCollection(presentation, elements, name=name)
        return ScenarioFile(
            name, "group", collection=collection, bounds=bounds, alpha=alpha
        )
    raise ScenarioError(f"scenario: unknown kind {kind!r}")


def load_scenario(path) -> ScenarioFile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file is not valid JSON: {exc}") from exc
    default_name = os.path.splitext(os.path.basename(str(path)))[0]
    return scenario_from_json(data, default_name)


# -- writing ---------------------------------------------------------------


def scalar_json(value) -> object:
    """Most compact exact form: int, [num, den], or the 4-entry complex."""
    value = as_scalar(value)
    if value.is_real():
        re = value.re
        if re.denominator == 1:
            return int(re)
        return [re.numerator, re.denominator]
    return [
        value.re.numerator,
        value.re.denominator,
        value.im.numerator,
        value.im.denominator,
    ]


def presentation_to_json(presentation: GroupPresentation) -> dict:
    return {
        "components": [
            {"cyclic_orders": ["inf" if o is None else o for o in comp.orders]}
            for comp in presentation.factors
        ]
    }


def _sequence_to_json(seq: MomentSequence) -> dict:
    out: dict = {}
    if seq.unitary:
        out["unitary"] = True
        if seq.period is not None:
            out["period"] = seq.period
        out["moments"] = {
            str(power): scalar_json(value)
            for power, value in sorted(seq.values.items())
        }
    else:
        if seq.complete_through is not None:
            out["complete_through"] = seq.complete_through
        out["moments"] = {
            _pattern_to_text(key): scalar_json(value)
            for key, value in sorted(seq.values.items())
        }
    return out


def factor_to_json(functional: MomentFunctional) -> dict:
    if isinstance(functional, SpectralModel):
        return {
            "space": "spectral",
            "assume_free": functional.assume_free,
            "variables": {
                str(v): _sequence_to_json(seq)
                for v, seq in sorted(functional.sequences.items())
            },
        }
    if isinstance(functional, TableFunctional):
        return {
            "space": "table",
            "presentation": presentation_to_json(functional.presentation),
            "variables": {
                str(v): g.text() for v, g in sorted(functional.generators.items())
            },
            "table": {
                element.text(): scalar_json(value)
                for element, value in sorted(
                    functional.table.items(), key=lambda kv: kv[0].text()
                )
            },
        }
    if isinstance(functional, GroupAlgebraModel):
        return {
            "space": "group",
            "presentation": presentation_to_json(functional.presentation),
            "variables": {
                str(v): g.text() for v, g in sorted(functional.generators.items())
            },
        }
    raise ScenarioError(f"cannot serialize factor of type {type(functional).__name__}")


def scenario_to_json(scenario: ScenarioFile) -> dict:
    out: dict = {"version": SCHEMA_VERSION, "name": scenario.name, "kind": scenario.kind}
    if scenario.bounds:
        out["bounds"] = dict(sorted(scenario.bounds.items()))
    if scenario.alpha is not None:
        out["alpha"] = scalar_json(scenario.alpha)
    if scenario.kind == "tensor":
        tensor = scenario.tensor
        out["factors"] = [factor_to_json(f) for f in tensor.factors]
        out["tensor"] = {
            "variables": {
                str(i): list(components)
                for i, components in sorted(tensor.assignments.items())
            },
            "free": list(tensor.free_flags),
        }
        return out
    out["presentation"] = presentation_to_json(scenario.collection.presentation)
    out["elements"] = {
        str(i): g.text() for i, g in sorted(scenario.collection.elements.items())
    }
    return out


def scenario_dumps(scenario: ScenarioFile) -> str:
    return json.dumps(scenario_to_json(scenario), indent=2, sort_keys=True) + "\n"


def save_scenario(scenario: ScenarioFile, path) -> None:
    text = scenario_dumps(scenario)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
