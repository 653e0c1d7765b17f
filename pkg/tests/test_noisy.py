"""Noisy codings: mutual information against a histogram oracle, the
equal-fiber corpus restriction, and the recorded closed-form gap."""

import math
import random
from collections import Counter

import pytest

from infocat import CategoryId, category, internal_product
from infocat.core import Limits
from infocat.errors import InvalidMorphism, InvalidObject
from infocat.measures import get_measure, value_of
from infocat.noisy import (
    NoisyMorphism,
    NoisyObject,
    channel_of,
    closed_form_ni,
    equal_fibers,
    noisy_capacity,
    noisy_information,
    noisy_information_exact,
)
from infocat.prng import trial_rng

OPS = category(CategoryId.NOISY_FINSET)


def mi_oracle(f):
    """I(sent; received) from the raw joint histogram, uniform noise."""
    m = f.domain.m_size
    joint = Counter()
    for x in range(m):
        joint[(f.domain.pi[x], f.codomain.pi[f.mapping[x]])] += 1
    pa = Counter()
    pb = Counter()
    for (a, b), c in joint.items():
        pa[a] += c
        pb[b] += c
    total = 0.0
    for (a, b), c in joint.items():
        p_ab = c / m
        total += p_ab * math.log2(p_ab / ((pa[a] / m) * (pb[b] / m)))
    return total


def random_system(rnd, max_m):
    m = rnd.randint(1, max_m)
    a = rnd.randint(1, m)
    pi = list(range(a)) + [rnd.randrange(a) for _ in range(m - a)]
    rnd.shuffle(pi)
    return NoisyObject(m, a, tuple(pi))


def random_coding(rnd, max_m=12):
    dom = random_system(rnd, max_m)
    cod = random_system(rnd, max_m)
    mapping = tuple(rnd.randrange(cod.m_size) for _ in range(dom.m_size))
    return NoisyMorphism(dom, cod, mapping)


class TestValidation:
    def test_pi_must_be_surjective(self):
        with pytest.raises(InvalidObject):
            NoisyObject(3, 2, (0, 0, 0))

    def test_message_count_bounds(self):
        with pytest.raises(InvalidObject):
            NoisyObject(2, 3, (0, 1))
        with pytest.raises(InvalidObject):
            NoisyObject(2, 0, (0, 0))

    def test_mapping_range_checked(self):
        x = NoisyObject(2, 2, (0, 1))
        with pytest.raises(InvalidMorphism):
            NoisyMorphism(x, x, (0, 2))


class TestNoisyInformation:
    def test_against_histogram_oracle(self):
        rnd = random.Random(2024)
        for _ in range(400):
            f = random_coding(rnd)
            assert noisy_information(f) == pytest.approx(
                mi_oracle(f), abs=1e-12
            )

    def test_exact_matches_float(self):
        rnd = random.Random(77)
        for _ in range(100):
            f = random_coding(rnd, max_m=8)
            assert float(noisy_information_exact(f)) == pytest.approx(
                noisy_information(f), abs=1e-12
            )

    def test_noiseless_identity_is_log_messages(self):
        x = NoisyObject(4, 4, (0, 1, 2, 3))
        f = OPS.identity(x)
        assert noisy_information(f) == 2.0

    def test_total_noise_gives_zero(self):
        x = NoisyObject(4, 2, (0, 0, 1, 1))
        cod = NoisyObject(1, 1, (0,))
        f = NoisyMorphism(x, cod, (0, 0, 0, 0))
        assert noisy_information(f) == 0.0


class TestStrongSubadditivityCounterexample:
    def test_parity_triple_breaks_the_bound(self):
        """Three equal-fiber maps out of a two-bit source: the second
        bit and the parity each carry nothing about the first bit, but
        together they determine it.  The combined coding carries one
        full bit more than the pairwise bound allows, so the inequality
        has a genuine counterexample even in measure-compatible mode.
        The acceptance suite leaves this red on purpose."""
        src = NoisyObject(4, 2, (0, 0, 1, 1))  # messages = first bit
        bit2 = NoisyMorphism(src, NoisyObject(2, 2, (0, 1)), (0, 1, 0, 1))
        const = NoisyMorphism(src, NoisyObject(1, 1, (0,)), (0, 0, 0, 0))
        parity = NoisyMorphism(src, NoisyObject(2, 2, (0, 1)), (0, 1, 1, 0))
        for leg in (bit2, const, parity):
            assert equal_fibers(leg.mapping, leg.codomain.m_size)

        fg = internal_product(bit2, const)
        gh = internal_product(const, parity)
        fgh = internal_product(fg, parity)
        v_fgh = noisy_information(fgh)
        bound = (
            noisy_information(fg)
            + noisy_information(gh)
            - noisy_information(const)
        )
        assert noisy_information(fg) == 0.0
        assert noisy_information(gh) == 0.0
        assert v_fgh == pytest.approx(1.0, abs=1e-12)
        assert v_fgh > bound + 0.5

    def test_external_additivity_does_hold_on_equal_fiber_pairs(self):
        lim = Limits(8, measure_compatible=True)
        for i in range(200):
            f = OPS.random_morphism(trial_rng(55, "gen:add", i), lim)
            g = OPS.random_morphism(trial_rng(56, "gen:add", i), lim)
            p = OPS.external_product(f, g)
            assert noisy_information(p) == pytest.approx(
                noisy_information(f) + noisy_information(g), abs=1e-9
            )


class TestClosedForm:
    def test_noiseless_four_messages(self):
        x = NoisyObject(4, 4, (0, 1, 2, 3))
        f = OPS.identity(x)
        assert noisy_information(f) == 2.0
        assert closed_form_ni(f) == -16.0
        assert closed_form_ni(f) - noisy_information(f) == -18.0

    def test_zero_information_case(self):
        x = NoisyObject(2, 2, (0, 1))
        f = NoisyMorphism(x, NoisyObject(1, 1, (0,)), (0, 0))
        assert noisy_information(f) == 0.0
        assert closed_form_ni(f) == -5.0

    def test_single_message_degenerate_agreement(self):
        x = NoisyObject(1, 1, (0,))
        f = OPS.identity(x)
        assert closed_form_ni(f) == noisy_information(f) == 0.0

    def test_registered_measure_uses_the_definition(self):
        m = get_measure(CategoryId.NOISY_FINSET, "noisy_information")
        x = NoisyObject(4, 4, (0, 1, 2, 3))
        f = OPS.identity(x)
        assert value_of(m, f) == 2.0  # never the closed form


class TestChannelBridge:
    def test_channel_of_rows(self):
        dom = NoisyObject(4, 2, (0, 0, 1, 1))
        cod = NoisyObject(2, 2, (0, 1))
        f = NoisyMorphism(dom, cod, (0, 1, 1, 1))
        ch = channel_of(f)
        assert ch.matrix == ((0.5, 0.5), (0.0, 1.0))

    def test_noiseless_capacity_is_log_messages(self):
        x = NoisyObject(4, 4, (0, 1, 2, 3))
        f = OPS.identity(x)
        assert noisy_capacity(f) == pytest.approx(2.0, abs=1e-9)

    def test_capacity_upper_bounds_information(self):
        rnd = random.Random(4)
        for _ in range(25):
            f = random_coding(rnd, max_m=6)
            assert noisy_capacity(f) >= noisy_information(f) - 1e-7


class TestEqualFibers:
    def test_predicate(self):
        assert equal_fibers((0, 1, 0, 1), 2)
        assert not equal_fibers((0, 0, 0, 1), 2)
        assert not equal_fibers((0, 1, 0), 2)  # size does not divide

    def test_measure_compatible_generator_property(self):
        lim = Limits(12, measure_compatible=True)
        for i in range(300):
            f = OPS.random_morphism(trial_rng(9, "gen:mc", i), lim)
            assert equal_fibers(f.mapping, f.codomain.m_size)
            assert f.domain.m_size % f.codomain.m_size == 0

    def test_exhaustive_corpus_respects_flag(self):
        free = list(OPS.exhaustive_morphisms(Limits(3)))
        restricted = list(OPS.exhaustive_morphisms(Limits(3, measure_compatible=True)))
        assert len(restricted) < len(free)
        assert all(equal_fibers(m.mapping, m.codomain.m_size) for m in restricted)
        assert set(restricted) <= set(free)


class TestStructuredIsos:
    def test_conjugation_preserves_information(self):
        rnd_stream = trial_rng(21, "iso-n", 0)
        rnd = random.Random(3)
        for _ in range(60):
            f = random_coding(rnd, max_m=7)
            a = OPS.random_iso_out(rnd_stream, f.domain)
            b = OPS.random_iso_out(rnd_stream, f.codomain)
            other = OPS.compose(b.forward, OPS.compose(f, a.backward))
            assert noisy_information(other) == pytest.approx(
                noisy_information(f), abs=1e-12
            )
            assert noisy_information_exact(other) == noisy_information_exact(f)

    def test_unstructured_bijection_is_not_an_iso(self):
        # Same carrier sizes, incompatible message assignment.
        x = NoisyObject(2, 1, (0, 0))
        y = NoisyObject(2, 2, (0, 1))
        f = OPS.identity(x)
        g = OPS.identity(y)
        assert OPS.arrow_iso(f, g) is None
