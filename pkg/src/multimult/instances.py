"""Declarative instance files: parsing, validation, and diagnostics.

An instance file is a JSON document declaring the ambient variables, the
module relations, the ideal family, named joint-reduction candidates, and a
list of requests to run:

    {
      "variables": ["x1", "x2"],
      "module_relations": [],
      "J": ["x1", "x2"],
      "ideals": {"I1": ["x1", "x2"]},
      "candidates": {
        "c": {
          "type": {"k0": 0, "k": [1]},
          "elements": [
            {"monomial": "x1", "source": "I1"},
            {"monomial": "x2", "source": "J"}
          ]
        }
      },
      "requests": [{"command": "mixed", "type": {"k0": 0, "k": [1]}}]
    }

Monomial syntax is a '*'-separated product of powers like "x1^2*x3", or "1".
Every diagnostic names the JSON path (and the offending token for monomial
errors) so failures are actionable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .hilbert import IdealFamily, MixedType
from .monomials import Monomial, MonomialIdeal, QuotientModule, RingContext, ideal
from .reductions import J_SOURCE, JointReductionCandidate


class InstanceParseError(ValueError):
    """A malformed instance file; the message carries the location."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def parse_monomial(text: str, variables: list[str], ctx: RingContext, location: str) -> Monomial:
    """Parse a '*'-separated product of powers against the declared variables."""
    if not isinstance(text, str) or not text.strip():
        raise InstanceParseError("monomial must be a non-empty string", location)
    exps = [0] * ctx.num_vars
    if text.strip() == "1":
        return Monomial(tuple(exps))
    for pos, factor in enumerate(text.split("*")):
        factor = factor.strip()
        where = f"{location}, factor {pos + 1} ({factor!r})"
        name, sep, power = factor.partition("^")
        if name not in variables:
            raise InstanceParseError(f"unknown variable {name!r}", where)
        if sep:
            if not power.isdigit() or int(power) < 1:
                raise InstanceParseError(f"malformed exponent {power!r}", where)
            e = int(power)
        else:
            e = 1
        exps[variables.index(name)] += e
    return Monomial(tuple(exps))


def _parse_ideal(entries, variables, ctx, location) -> MonomialIdeal:
    if not isinstance(entries, list):
        raise InstanceParseError("expected a list of monomial strings", location)
    monos = [
        parse_monomial(t, variables, ctx, f"{location}[{i}]") for i, t in enumerate(entries)
    ]
    return ideal(ctx, monos)


def _parse_type(obj, d: int, location: str) -> MixedType:
    if not isinstance(obj, dict) or set(obj) != {"k0", "k"}:
        raise InstanceParseError('type must be {"k0": int, "k": [int, ...]}', location)
    k = obj["k"]
    if not isinstance(obj["k0"], int) or not isinstance(k, list) or len(k) != d:
        raise InstanceParseError(
            f"type needs integer k0 and a k-list of length {d}", location
        )
    try:
        return MixedType(obj["k0"], tuple(int(x) for x in k))
    except ValueError as exc:
        raise InstanceParseError(str(exc), location) from exc


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise InstanceParseError(f"duplicate key {key!r}")
        seen[key] = value
    return seen


@dataclass(frozen=True)
class InstanceFile:
    """A validated instance: the family, named candidates, and requests."""

    name: str
    variables: tuple[str, ...]
    family: IdealFamily
    ideal_names: tuple[str, ...]
    candidates: dict[str, JointReductionCandidate]
    requests: tuple[dict, ...]
    raw: dict

    def candidate(self, name: str) -> JointReductionCandidate:
        if name not in self.candidates:
            raise InstanceParseError(f"request references undeclared candidate {name!r}")
        return self.candidates[name]

    def ideal_index(self, name: str) -> int:
        if name not in self.ideal_names:
            raise InstanceParseError(f"request references undeclared ideal {name!r}")
        return self.ideal_names.index(name)


def parse_instance(text: str, name: str = "<instance>") -> InstanceFile:
    """Parse and validate an instance document."""
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(
            f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}"
        ) from exc
    if not isinstance(raw, dict):
        raise InstanceParseError("top level must be an object")

    variables = raw.get("variables")
    if not isinstance(variables, list) or not variables or not all(
        isinstance(v, str) for v in variables
    ):
        raise InstanceParseError("need a non-empty list of variable names", "variables")
    if len(set(variables)) != len(variables):
        raise InstanceParseError("duplicate variable name", "variables")
    ctx = RingContext(len(variables))

    relations = _parse_ideal(raw.get("module_relations", []), variables, ctx, "module_relations")
    if not relations.gens:
        relations = MonomialIdeal.zero(ctx)
    module = QuotientModule(ctx, relations)

    if "J" not in raw:
        raise InstanceParseError("missing J", "J")
    j = _parse_ideal(raw["J"], variables, ctx, "J")

    ideals_obj = raw.get("ideals")
    if not isinstance(ideals_obj, dict) or not ideals_obj:
        raise InstanceParseError("at-least-one-ideal: declare a non-empty ideals object", "ideals")
    ideal_names = tuple(ideals_obj)
    if "J" in ideal_names:
        raise InstanceParseError("duplicate ideal name: 'J' is reserved", "ideals")
    parsed_ideals = tuple(
        _parse_ideal(ideals_obj[nm], variables, ctx, f"ideals.{nm}") for nm in ideal_names
    )

    try:
        family = IdealFamily(j, parsed_ideals, module)
    except ValueError as exc:
        raise InstanceParseError(str(exc), "J") from exc

    candidates = {}
    for cname, cobj in (raw.get("candidates") or {}).items():
        loc = f"candidates.{cname}"
        if not isinstance(cobj, dict) or "type" not in cobj or "elements" not in cobj:
            raise InstanceParseError("candidate needs 'type' and 'elements'", loc)
        mt = _parse_type(cobj["type"], len(ideal_names), f"{loc}.type")
        elements = []
        for i, eobj in enumerate(cobj["elements"]):
            eloc = f"{loc}.elements[{i}]"
            if not isinstance(eobj, dict) or "monomial" not in eobj or "source" not in eobj:
                raise InstanceParseError("element needs 'monomial' and 'source'", eloc)
            mono = parse_monomial(eobj["monomial"], variables, ctx, eloc)
            src_name = eobj["source"]
            if src_name == "J":
                src = J_SOURCE
            elif src_name in ideal_names:
                src = ideal_names.index(src_name)
            else:
                raise InstanceParseError(f"unknown source {src_name!r}", eloc)
            elements.append((mono, src))
        try:
            cand = JointReductionCandidate(tuple(elements), mt)
            cand.check_membership(family)
        except ValueError as exc:
            raise InstanceParseError(f"candidate-type mismatch: {exc}", loc) from exc
        candidates[cname] = cand

    requests = raw.get("requests", [])
    if not isinstance(requests, list):
        raise InstanceParseError("requests must be a list", "requests")
    for i, req in enumerate(requests):
        if not isinstance(req, dict) or "command" not in req:
            raise InstanceParseError("request needs a 'command'", f"requests[{i}]")

    return InstanceFile(
        name=name,
        variables=tuple(variables),
        family=family,
        ideal_names=ideal_names,
        candidates=candidates,
        requests=tuple(requests),
        raw=raw,
    )
