"""Linear maps over GF(p) and the rationals: rank, sections, corpus."""

import random
from fractions import Fraction
from itertools import product

import pytest

from infocat import CategoryId, category, compose
from infocat.core import Limits
from infocat.errors import CategoryMismatch, InvalidMorphism, InvalidObject
from infocat.exact import LogVal
from infocat.finvect import (
    GF2,
    GF3,
    RATIONAL,
    LinearMorphism,
    VectObject,
    gf,
    linear_morphism,
    parse_field,
    rank,
    section_exists_linear,
)
from infocat.measures import exact_of, get_measure, value_of

OPS = category(CategoryId.FINVECT)


def rank_oracle_mod(rows, p):
    """Row reduction mod p, written directly against the definition."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] % p:
                factor = rows[i][c]
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == n_rows:
            break
    return r


def rank_oracle_q(rows):
    rows = [[Fraction(v) for v in r] for r in rows]
    if not rows or not rows[0]:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        rows[r] = [v / rows[r][c] for v in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == n_rows:
            break
    return r


class TestFields:
    def test_parse_known_names(self):
        assert parse_field("gf2") == GF2
        assert parse_field("gf3") == GF3
        assert parse_field("rational") == RATIONAL

    def test_prime_modulus_required(self):
        with pytest.raises(InvalidObject):
            gf(4)
        with pytest.raises(InvalidObject):
            parse_field("gf1")

    def test_unknown_field_name(self):
        with pytest.raises(InvalidObject):
            parse_field("reals")


class TestValidation:
    def test_row_shape_checked(self):
        with pytest.raises(InvalidMorphism):
            LinearMorphism(VectObject(2, GF2), VectObject(1, GF2), ((1,),))

    def test_field_mismatch(self):
        with pytest.raises(CategoryMismatch):
            LinearMorphism(VectObject(1, GF2), VectObject(1, GF3), ((1,),))

    def test_negative_dimension(self):
        with pytest.raises(InvalidObject):
            VectObject(-1, GF2)


class TestRank:
    def test_against_mod_p_oracle(self):
        rnd = random.Random(5)
        for p, field in ((2, GF2), (3, GF3)):
            for _ in range(250):
                rows = [
                    [rnd.randrange(p) for _ in range(rnd.randint(0, 4))]
                    for _ in range(rnd.randint(1, 4))
                ]
                width = len(rows[0])
                rows = [r[:width] + [0] * (width - len(r)) for r in rows]
                f = linear_morphism(field, rows)
                assert rank(f) == rank_oracle_mod(rows, p)

    def test_against_rational_oracle(self):
        rnd = random.Random(6)
        for _ in range(150):
            rows = [
                [Fraction(rnd.randint(-4, 4), rnd.randint(1, 3)) for _ in range(3)]
                for _ in range(3)
            ]
            f = linear_morphism(RATIONAL, rows)
            assert rank(f) == rank_oracle_q(rows)

    def test_rank_measure_is_exact(self):
        m = get_measure(CategoryId.FINVECT, "rank")
        f = linear_morphism(GF2, [[1, 0, 1], [0, 1, 1]])
        assert value_of(m, f) == 2.0
        assert exact_of(m, f) == LogVal.from_rational(2)


class TestCompose:
    def test_matches_matrix_product(self):
        f = linear_morphism(GF3, [[1, 2], [0, 1], [2, 2]])  # 2 -> 3
        g = linear_morphism(GF3, [[1, 1, 0], [0, 2, 1]])  # 3 -> 2
        gf_map = compose(g, f)
        # Hand multiplication mod 3.
        assert gf_map.entries == ((1, 0), (2, 1))

    def test_through_zero_dimensional_middle(self):
        # A -> 0 -> B composes to the zero map with well-shaped rows.
        f = LinearMorphism(VectObject(2, GF2), VectObject(0, GF2), ())
        g = LinearMorphism(VectObject(0, GF2), VectObject(3, GF2), ((), (), ()))
        z = compose(g, f)
        assert z.entries == ((0, 0), (0, 0), (0, 0))
        assert rank(z) == 0


class TestSections:
    def all_matrices(self, n_rows, n_cols):
        for flat in product((0, 1), repeat=n_rows * n_cols):
            yield [list(flat[i * n_cols : (i + 1) * n_cols]) for i in range(n_rows)]

    def brute_section(self, f, g):
        """Search every linear s: C -> B for s.g.f == f."""
        b, c = g.domain.dim, g.codomain.dim
        gf_map = OPS.compose(g, f)
        for rows in self.all_matrices(b, c):
            # Explicit endpoints: rows alone cannot pin down a map into
            # or out of the zero space.
            s = LinearMorphism(
                VectObject(c, GF2),
                VectObject(b, GF2),
                tuple(tuple(GF2.element(v) for v in row) for row in rows),
            )
            if OPS.compose(s, gf_map) == f:
                return True
        return False

    def test_oracle_matches_brute_force(self):
        corpus = list(OPS.exhaustive_morphisms(Limits(2, field=GF2)))
        by_dom = {}
        for m in corpus:
            by_dom.setdefault(m.domain, []).append(m)
        checked = 0
        for f in corpus:
            for g in by_dom.get(f.codomain, []):
                assert section_exists_linear(f, g) == self.brute_section(f, g)
                checked += 1
        assert checked > 100


class TestCorpus:
    def test_counts_small_fields(self):
        # dims 0..1 over GF(2): one empty map per degenerate shape plus
        # the two scalars.
        got = list(OPS.exhaustive_morphisms(Limits(1, field=GF2)))
        assert len(got) == 5
        got2 = list(OPS.exhaustive_morphisms(Limits(2, field=GF2)))
        assert len(got2) == 31
        got3 = list(OPS.exhaustive_morphisms(Limits(2, field=GF3)))
        assert len(got3) == 107

    def test_corpus_distinct_and_reproducible(self):
        a = list(OPS.exhaustive_morphisms(Limits(2, field=GF2)))
        b = list(OPS.exhaustive_morphisms(Limits(2, field=GF2)))
        assert a == b
        assert len(set(a)) == len(a)


class TestProducts:
    def test_external_is_block_diagonal(self):
        f = linear_morphism(GF2, [[1, 1]])
        g = linear_morphism(GF2, [[1], [1]])
        p = OPS.external_product(f, g)
        assert p.domain.dim == 3 and p.codomain.dim == 3
        assert rank(p) == rank(f) + rank(g)

    def test_internal_is_stacked(self):
        f = linear_morphism(GF2, [[1, 0]])
        g = linear_morphism(GF2, [[0, 1]])
        p = OPS.internal_product(f, g)
        assert p.domain.dim == 2 and p.codomain.dim == 2
        assert rank(p) == 2

    def test_terminal_is_zero_space(self):
        assert OPS.terminal_object(GF3) == VectObject(0, GF3)
        bang = OPS.unique_to_terminal(VectObject(2, GF3))
        assert rank(bang) == 0


class TestIsos:
    def test_random_iso_out_is_invertible(self):
        from infocat.prng import trial_rng

        rng = trial_rng(1, "iso-v", 0)
        for field in (GF2, GF3):
            for dim in (0, 1, 3):
                w = OPS.random_iso_out(rng, VectObject(dim, field))
                ident = OPS.identity(VectObject(dim, field))
                assert OPS.compose(w.backward, w.forward) == ident
