"""JSON envelopes for morphisms and channels.

A morphism travels as {"category", "domain", "codomain", "payload"};
the payload shape is category-specific and documented by each category
module.  Channels travel as {"matrix": [[...], ...]}.  Serialization is
deterministic: sorted keys, two-space indent, shortest round-trip
floats (Python's repr), so identical values produce identical bytes.
"""

from __future__ import annotations

import json

from .capacity import Channel
from .core import CategoryId, category
from .errors import InvalidMorphism


def morphism_to_json(f) -> dict:
    ops = category(f.category)
    return {
        "category": f.category.value,
        "domain": ops.object_to_json(f.domain),
        "codomain": ops.object_to_json(f.codomain),
        "payload": ops.payload_to_json(f),
    }


def morphism_from_json(data: dict):
    try:
        cat_id = CategoryId(data["category"])
    except (KeyError, ValueError) as exc:
        raise InvalidMorphism(f"unknown or missing category: {data.get('category')!r}") from exc
    ops = category(cat_id)
    try:
        domain = ops.object_from_json(data["domain"])
        codomain = ops.object_from_json(data["codomain"])
        return ops.morphism_from_json(domain, codomain, data["payload"])
    except KeyError as exc:
        raise InvalidMorphism(f"missing morphism field: {exc}") from exc


def channel_to_json(ch: Channel) -> dict:
    return {"matrix": [list(row) for row in ch.matrix]}


def channel_from_json(data: dict) -> Channel:
    try:
        matrix = data["matrix"]
    except KeyError as exc:
        raise InvalidMorphism("channel JSON needs a 'matrix' field") from exc
    return Channel(tuple(tuple(float(v) for v in row) for row in matrix))


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)
