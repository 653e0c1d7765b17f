"""Named information measures and their per-category registry.

A measure assigns a nonnegative real to each morphism of one category.
It may be partial: values can be Undefined (empty sources, mass-zero
conditionals), and audits count those instead of failing.  Measures can
also expose an exact representation of their value (LogVal), which the
audit uses to decide equalities without a float tolerance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .core import UNDEFINED, CategoryId
from .errors import EmptyDomain, UnknownMeasure, ZeroMassFiber
from .exact import LogVal


@dataclass(frozen=True)
class InfoMeasure:
    name: str
    category: CategoryId
    value: Callable  # morphism -> float
    exact: Callable | None = None  # morphism -> LogVal, when exactly computable
    # Extra float slack for iteratively computed measures (solver gap).
    slack: float = 0.0


_REGISTRY: dict[tuple[CategoryId, str], InfoMeasure] = {}
_FACTORIES: dict[tuple[CategoryId, str], Callable[[str], InfoMeasure]] = {}


def register_measure(measure: InfoMeasure) -> InfoMeasure:
    _REGISTRY[(measure.category, measure.name)] = measure
    return measure


def register_factory(category: CategoryId, prefix: str, factory: Callable[[str], InfoMeasure]) -> None:
    """Register a parser for parameterized measure names like afn(...)."""
    _FACTORIES[(category, prefix)] = factory


def get_measure(category: CategoryId | str, name: str) -> InfoMeasure:
    category = CategoryId(category)
    found = _REGISTRY.get((category, name))
    if found is not None:
        return found
    match = re.fullmatch(r"(\w+)\((.*)\)", name)
    if match:
        factory = _FACTORIES.get((category, match.group(1)))
        if factory is not None:
            return factory(match.group(2))
    raise UnknownMeasure(f"no measure {name!r} for category {category.value}")


def measure_names(category: CategoryId) -> list[str]:
    return sorted(name for cat, name in _REGISTRY if cat is category)


def value_of(measure: InfoMeasure, m):
    """Float value of the measure, or UNDEFINED where it is partial."""
    try:
        return measure.value(m)
    except (EmptyDomain, ZeroMassFiber):
        return UNDEFINED


def exact_of(measure: InfoMeasure, m) -> LogVal | None:
    """Exact value when the measure supports it, else None."""
    if measure.exact is None:
        return None
    try:
        return measure.exact(m)
    except (EmptyDomain, ZeroMassFiber):
        return None
