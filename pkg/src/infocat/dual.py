"""Formal opposites of the set and linear categories.

A morphism A -> B here is just a base morphism B -> A worn backwards,
so every algorithm delegates to the base category and (f*)* = f holds
by construction.  Products become coproducts of the base: disjoint
unions with offset indexing for sets, direct sums for vector spaces;
the terminal object is the base initial object (empty set, zero space).
The information measures are the raw image cardinality of the inner set
map and the image dimension of the inner linear map; both are exact
integers, no logarithm involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from typing import Iterator, Union

from .core import ArrowIso, Category, CategoryId, IsoWitness, Limits, register
from .errors import (
    CategoryMismatch,
    DomainMismatch,
    ObjectMismatch,
    SearchBudgetExceeded,
)
from .exact import LogVal
from .finset import FinSetCategory, FinSetMorphism, FinSetObject, _all_mappings
from .finvect import (
    GF2,
    FinVectCategory,
    LinearMorphism,
    VectObject,
    _rank,
    rank,
)
from .measures import InfoMeasure, register_measure

_FINSET = FinSetCategory()
_FINVECT = FinVectCategory()


@dataclass(frozen=True, slots=True)
class DualMorphism:
    """A base morphism presented in the opposite direction."""

    inner: Union[FinSetMorphism, LinearMorphism]

    @property
    def domain(self):
        return self.inner.codomain

    @property
    def codomain(self):
        return self.inner.domain

    @property
    def category(self) -> CategoryId:
        if isinstance(self.inner, FinSetMorphism):
            return CategoryId.FINSET_DUAL
        return CategoryId.FINVECT_DUAL


def image_cardinality_info(f: DualMorphism) -> int:
    """Number of distinct values the inner set map takes."""
    return len(set(f.inner.mapping))


def image_dimension_info(f: DualMorphism) -> int:
    """Rank of the inner linear map."""
    return rank(f.inner)


class _DualCategory(Category):
    """Shared delegation logic; subclasses supply the coproducts."""

    base: Category

    def _wrap_witness(self, witness: IsoWitness) -> IsoWitness:
        return IsoWitness(DualMorphism(witness.backward), DualMorphism(witness.forward))

    # -- structure ----------------------------------------------------
    def compose(self, g: DualMorphism, f: DualMorphism) -> DualMorphism:
        if f.codomain != g.domain:
            raise ObjectMismatch("cannot compose: middle objects differ")
        return DualMorphism(self.base.compose(f.inner, g.inner))

    def identity(self, obj) -> DualMorphism:
        return DualMorphism(self.base.identity(obj))

    def internal_product(self, f: DualMorphism, g: DualMorphism) -> DualMorphism:
        if f.domain != g.domain:
            raise DomainMismatch("internal product needs a shared source")
        return DualMorphism(self._case_split(f.inner, g.inner))

    # -- isomorphism --------------------------------------------------
    def iso_invariant(self, f: DualMorphism):
        return self.base.iso_invariant(f.inner)

    def arrow_iso(self, f: DualMorphism, g: DualMorphism, budget: int = 100_000):
        found = self.base.arrow_iso(f.inner, g.inner, budget)
        if found is None:
            return None
        # The inner witnesses run backwards: the base codomain pair
        # carries the dual domains and vice versa.
        return ArrowIso(self._wrap_witness(found.beta), self._wrap_witness(found.alpha))

    def random_iso_out(self, rng, obj) -> IsoWitness:
        return self._wrap_witness(self.base.random_iso_out(rng, obj))

    # -- sections -----------------------------------------------------
    def section_search(self, f: DualMorphism, g: DualMorphism, budget: int = 1_000_000) -> bool:
        if f.codomain != g.domain:
            raise ObjectMismatch("section test needs composable f then g")
        # A section s*: C -> B is an inner map s: B -> C with
        # f.inner . g.inner . s == f.inner.
        fg = self.base.compose(f.inner, g.inner)
        for s in self._maps_between(f.inner.domain, g.inner.domain, budget):
            if self.base.compose(fg, s) == f.inner:
                return True
        return False

    # -- corpus -------------------------------------------------------
    def exhaustive_morphisms(self, limits: Limits) -> Iterator[DualMorphism]:
        for obj in self.exhaustive_objects(limits):
            yield from self.exhaustive_morphisms_from(obj, limits)

    def exhaustive_morphisms_from(self, obj, limits: Limits) -> Iterator[DualMorphism]:
        for cod in self.exhaustive_objects(limits):
            for inner in self._maps_between(cod, obj, float("inf")):
                yield DualMorphism(inner)

    def random_morphism(self, rng, limits: Limits) -> DualMorphism:
        return self.random_morphism_from(rng, self.random_object(rng, limits), limits)

    # -- serialization --------------------------------------------------
    def object_to_json(self, obj) -> dict:
        return self.base.object_to_json(obj)

    def object_from_json(self, data: dict):
        return self.base.object_from_json(data)

    def payload_to_json(self, m: DualMorphism) -> dict:
        return {"dual": True, "inner": self.base.payload_to_json(m.inner)}

    def morphism_from_json(self, domain, codomain, payload: dict) -> DualMorphism:
        inner = self.base.morphism_from_json(codomain, domain, payload["inner"])
        return DualMorphism(inner)


class FinSetDualCategory(_DualCategory):
    id = CategoryId.FINSET_DUAL
    base = _FINSET

    # -- coproducts of the base ----------------------------------------
    def product_object(self, x: FinSetObject, y: FinSetObject):
        prod = FinSetObject(x.size + y.size)
        p1 = DualMorphism(
            FinSetMorphism(x, prod, tuple(range(x.size)))
        )
        p2 = DualMorphism(
            FinSetMorphism(y, prod, tuple(x.size + i for i in range(y.size)))
        )
        return prod, p1, p2

    def external_product(self, f: DualMorphism, g: DualMorphism) -> DualMorphism:
        if not isinstance(g.inner, FinSetMorphism):
            raise CategoryMismatch("cannot pair duals from different base categories")
        fi, gi = f.inner, g.inner
        dom = FinSetObject(fi.domain.size + gi.domain.size)
        cod = FinSetObject(fi.codomain.size + gi.codomain.size)
        offset = fi.codomain.size
        mapping = fi.mapping + tuple(v + offset for v in gi.mapping)
        return DualMorphism(FinSetMorphism(dom, cod, mapping))

    def _case_split(self, fi: FinSetMorphism, gi: FinSetMorphism) -> FinSetMorphism:
        dom = FinSetObject(fi.domain.size + gi.domain.size)
        return FinSetMorphism(dom, fi.codomain, fi.mapping + gi.mapping)

    def terminal_object(self) -> FinSetObject:
        return FinSetObject(0)

    def unique_to_terminal(self, obj: FinSetObject) -> DualMorphism:
        return DualMorphism(FinSetMorphism(FinSetObject(0), obj, ()))

    def coslice_iso(self, p: DualMorphism, q: DualMorphism, budget: int = 100_000) -> bool:
        if p.domain != q.domain:
            raise DomainMismatch("coslice comparison needs a shared source")
        if p.codomain.size != q.codomain.size:
            return False
        counts_p = [0] * p.domain.size
        for v in p.inner.mapping:
            counts_p[v] += 1
        counts_q = [0] * q.domain.size
        for v in q.inner.mapping:
            counts_q[v] += 1
        # A bijection over A exists iff every point of A is hit equally
        # often by the two inner maps.
        return counts_p == counts_q

    def section_exists(self, f: DualMorphism, g: DualMorphism) -> bool:
        if f.codomain != g.domain:
            raise ObjectMismatch("section test needs composable f then g")
        fg = self.base.compose(f.inner, g.inner)
        return set(f.inner.mapping) <= set(fg.mapping)

    def _maps_between(self, dom: FinSetObject, cod: FinSetObject, budget) -> Iterator[FinSetMorphism]:
        if dom.size == 0:
            yield FinSetMorphism(dom, cod, ())
            return
        if cod.size == 0:
            return
        if cod.size ** dom.size > budget:
            raise SearchBudgetExceeded(
                f"{cod.size ** dom.size} candidate maps exceed budget {budget}"
            )
        for mapping in _all_mappings(dom.size, cod.size):
            yield FinSetMorphism(dom, cod, mapping)

    def exhaustive_objects(self, limits: Limits) -> Iterator[FinSetObject]:
        # Size 0 is the terminal object here, so the corpus includes it.
        for n in range(0, limits.max_size + 1):
            yield FinSetObject(n)

    def random_object(self, rng, limits: Limits) -> FinSetObject:
        return FinSetObject(rng.randint(0, limits.max_size))

    def random_morphism_from(self, rng, obj: FinSetObject, limits: Limits) -> DualMorphism:
        if obj.size == 0:
            return DualMorphism(FinSetMorphism(FinSetObject(0), obj, ()))
        cod = FinSetObject(rng.randint(0, limits.max_size))
        inner = FinSetMorphism(
            cod, obj, tuple(rng.randbelow(obj.size) for _ in range(cod.size))
        )
        return DualMorphism(inner)


class FinVectDualCategory(_DualCategory):
    id = CategoryId.FINVECT_DUAL
    base = _FINVECT

    def product_object(self, x: VectObject, y: VectObject):
        if x.field != y.field:
            raise CategoryMismatch("cannot pair spaces over different fields")
        field = x.field
        prod = VectObject(x.dim + y.dim, field)
        zero, one = field.zero(), field.one()
        inj1 = LinearMorphism(
            x, prod,
            tuple(tuple(one if j == i else zero for j in range(x.dim)) for i in range(prod.dim)),
        )
        inj2 = LinearMorphism(
            y, prod,
            tuple(
                tuple(one if j == i - x.dim else zero for j in range(y.dim))
                for i in range(prod.dim)
            ),
        )
        return prod, DualMorphism(inj1), DualMorphism(inj2)

    def external_product(self, f: DualMorphism, g: DualMorphism) -> DualMorphism:
        if not isinstance(g.inner, LinearMorphism):
            raise CategoryMismatch("cannot pair duals from different base categories")
        return DualMorphism(self.base.external_product(f.inner, g.inner))

    def _case_split(self, fi: LinearMorphism, gi: LinearMorphism) -> LinearMorphism:
        # (w, u) -> f(w) + g(u): horizontally concatenated blocks.
        dom = VectObject(fi.domain.dim + gi.domain.dim, fi.field)
        entries = tuple(row_f + row_g for row_f, row_g in zip(fi.entries, gi.entries))
        return LinearMorphism(dom, fi.codomain, entries)

    def terminal_object(self, field=None) -> VectObject:
        return VectObject(0, field if field is not None else GF2)

    def unique_to_terminal(self, obj: VectObject) -> DualMorphism:
        zero_space = VectObject(0, obj.field)
        return DualMorphism(
            LinearMorphism(zero_space, obj, ((),) * obj.dim)
        )

    def coslice_iso(self, p: DualMorphism, q: DualMorphism, budget: int = 100_000) -> bool:
        if p.domain != q.domain:
            raise DomainMismatch("coslice comparison needs a shared source")
        if p.codomain.dim != q.codomain.dim:
            return False
        # An invertible change of source exists iff the inner maps have
        # the same column space.
        rp = rank(p.inner)
        if rank(q.inner) != rp:
            return False
        field = p.inner.field
        concat = tuple(
            row_p + row_q for row_p, row_q in zip(p.inner.entries, q.inner.entries)
        )
        return _rank(field, [list(r) for r in concat]) == rp

    def section_exists(self, f: DualMorphism, g: DualMorphism) -> bool:
        if f.codomain != g.domain:
            raise ObjectMismatch("section test needs composable f then g")
        fg = self.base.compose(f.inner, g.inner)
        rank_fg = rank(fg)
        field = fg.field
        concat = tuple(
            row_c + row_f for row_c, row_f in zip(fg.entries, f.inner.entries)
        )
        # Solvable iff the image of the inner f sits inside the image
        # of the inner f.g.
        return _rank(field, [list(r) for r in concat]) == rank_fg

    def _maps_between(self, dom: VectObject, cod: VectObject, budget) -> Iterator[LinearMorphism]:
        field = dom.field
        if not field.char:
            raise SearchBudgetExceeded("rational matrices cannot be enumerated")
        count = field.char ** (dom.dim * cod.dim)
        if count > budget:
            raise SearchBudgetExceeded(f"{count} candidate maps exceed budget {budget}")
        for flat in iter_product(range(field.char), repeat=cod.dim * dom.dim):
            entries = tuple(
                flat[i * dom.dim:(i + 1) * dom.dim] for i in range(cod.dim)
            )
            yield LinearMorphism(dom, cod, entries)

    def exhaustive_objects(self, limits: Limits) -> Iterator[VectObject]:
        field = limits.field if limits.field is not None else self.terminal_object().field
        for n in range(0, limits.max_size + 1):
            yield VectObject(n, field)

    def random_object(self, rng, limits: Limits) -> VectObject:
        return self.base.random_object(rng, limits)

    def random_morphism_from(self, rng, obj: VectObject, limits: Limits) -> DualMorphism:
        cod_dim = rng.randint(0, limits.max_size)
        cod = VectObject(cod_dim, obj.field)
        inner = LinearMorphism(
            cod, obj,
            tuple(
                tuple(self.base._random_scalar(rng, obj.field) for _ in range(cod_dim))
                for _ in range(obj.dim)
            ),
        )
        return DualMorphism(inner)


FINSET_DUAL = register(FinSetDualCategory())
FINVECT_DUAL = register(FinVectDualCategory())

register_measure(
    InfoMeasure(
        "image_cardinality",
        CategoryId.FINSET_DUAL,
        lambda f: float(image_cardinality_info(f)),
        lambda f: LogVal.from_rational(image_cardinality_info(f)),
    )
)
register_measure(
    InfoMeasure(
        "image_dimension",
        CategoryId.FINVECT_DUAL,
        lambda f: float(image_dimension_info(f)),
        lambda f: LogVal.from_rational(image_dimension_info(f)),
    )
)
