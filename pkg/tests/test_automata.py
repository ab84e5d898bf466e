import random

import pytest

from chancodes import (
    Alphabet,
    BINARY,
    Dfa,
    EmptyLanguageError,
    Nfa,
    Trellis,
    WordError,
    format_word,
    trellis_from_words,
    universe_trellis,
)


def random_nfa(rng: random.Random, max_states=6, eps=True) -> Nfa:
    n = rng.randint(1, max_states)
    labels = ["0", "1"] + ([None] if eps else [])
    transitions = []
    for _ in range(rng.randint(0, 3 * n)):
        transitions.append(
            (rng.randrange(n), rng.choice(labels), rng.randrange(n))
        )
    states = list(range(n))
    initial = frozenset(rng.sample(states, rng.randint(1, n)))
    final = frozenset(rng.sample(states, rng.randint(0, n)))
    return Nfa(BINARY, n, initial, final, tuple(transitions))


def brute_accepts_dfa(d: Dfa, word) -> bool:
    """Path search over the raw transition tuples, no delta map."""
    current = {q for q in d.initial}
    for sym in word:
        current = {
            dst for src, lab, dst in d.transitions
            if src in current and lab == sym
        }
    return bool(current & d.final)


class TestMembership:
    def test_universe_membership(self):
        u = universe_trellis(BINARY, 3)
        assert u.accepts("010")
        assert not u.accepts("01")

    def test_block_code_membership(self):
        t = trellis_from_words(["0100", "1001"], BINARY)
        assert t.accepts("0100") and t.accepts("1001")
        assert not t.accepts("0000")

    def test_epsilon_cycle_accepts_empty_word(self):
        a = Nfa(BINARY, 2, frozenset({0}), frozenset({1}),
                ((0, None, 1), (1, None, 0)))
        assert a.accepts("")
        assert not a.accepts("0")

    def test_symbol_outside_alphabet_rejected(self):
        u = universe_trellis(BINARY, 2)
        with pytest.raises(WordError):
            u.accepts("0x")

    def test_accepts_agrees_with_path_search(self):
        rng = random.Random(13)
        for _ in range(40):
            nfa = random_nfa(rng, max_states=6, eps=False)
            d = nfa.determinize()
            assert d.num_states <= 2**6 + 1
            for _ in range(20):
                w = tuple(rng.choice("01") for _ in range(rng.randint(0, 6)))
                assert d.accepts(w) == brute_accepts_dfa(d, w)


class TestTrim:
    def test_removes_unreachable_component(self):
        a = Nfa(BINARY, 5, frozenset({0}), frozenset({2}),
                ((0, "0", 1), (1, "1", 2), (3, "0", 4), (4, "0", 3)))
        t = a.trim()
        assert t.num_states == 3
        assert t.words_up_to(4) == a.words_up_to(4)

    def test_idempotent(self):
        rng = random.Random(7)
        for _ in range(25):
            a = random_nfa(rng)
            once = a.trim()
            assert once.trim() == once

    def test_empty_language_trims_to_nothing(self):
        a = Nfa(BINARY, 2, frozenset({0}), frozenset(), ((0, "0", 1),))
        assert a.trim().num_states == 0
        assert a.is_empty()


class TestDeterminize:
    def test_language_preserved(self):
        rng = random.Random(99)
        for _ in range(30):
            a = random_nfa(rng)
            d = a.determinize()
            assert a.words_up_to(8) == d.words_up_to(8)

    def test_two_initial_states(self):
        a = Nfa(BINARY, 4, frozenset({0, 1}), frozenset({2, 3}),
                ((0, "0", 2), (1, "1", 3)))
        d = a.determinize()
        assert len(d.initial) == 1
        assert {format_word(w) for w in d.words_up_to(3)} == {"0", "1"}


class TestBooleanOps:
    def test_complement_within_length(self):
        t = trellis_from_words(["000"], BINARY)
        c = t.complement(length=3)
        assert c.count_words() == 7
        assert not c.accepts("000")

    def test_complement_partition_counts(self):
        rng = random.Random(5)
        for _ in range(15):
            ell = rng.randint(1, 6)
            pool = ["".join(rng.choice("01") for _ in range(ell))
                    for _ in range(rng.randint(0, 2**ell))]
            t = trellis_from_words(set(pool), BINARY, length=ell)
            c = t.complement(length=ell)
            assert t.count_words() + c.count_words() == 2**ell

    def test_intersection_identity(self):
        u = universe_trellis(BINARY, 3)
        t = trellis_from_words(["010", "111"], BINARY)
        both = u.intersect(t).trim()
        assert {format_word(w) for w in both.words_up_to(3)} == {"010", "111"}


class TestUniverseTrellis:
    def test_small(self):
        u = universe_trellis(BINARY, 2)
        assert u.num_states == 3
        assert {format_word(w) for w in u.iter_words()} == {"00", "01", "10", "11"}

    def test_count(self):
        assert universe_trellis(BINARY, 8).count_words() == 256

    def test_other_alphabet(self):
        abc = Alphabet(("a", "b", "c"))
        u = universe_trellis(abc, 1)
        assert {format_word(w) for w in u.iter_words()} == {"a", "b", "c"}

    def test_degenerate_zero_length(self):
        u = universe_trellis(BINARY, 0)
        assert u.count_words() == 1
        assert u.accepts("")


class TestTrellisFromWords:
    def test_two_words(self):
        t = trellis_from_words(["00", "11"], BINARY)
        assert {format_word(w) for w in t.iter_words()} == {"00", "11"}
        assert len(t.final) == 1

    def test_exact_language(self):
        t = trellis_from_words(["0100", "1001"], BINARY)
        assert sorted(map(format_word, t.iter_words())) == ["0100", "1001"]

    def test_mixed_lengths_rejected(self):
        with pytest.raises(WordError):
            trellis_from_words(["0", "00"], BINARY)

    def test_empty_set_needs_length(self):
        with pytest.raises(WordError):
            trellis_from_words([], BINARY)
        t = trellis_from_words([], BINARY, length=3)
        assert t.count_words() == 0 and t.length == 3


class TestAddWord:
    def test_basic(self):
        t = trellis_from_words(["00"], BINARY)
        t2 = t.add_word("01")
        assert {format_word(w) for w in t2.iter_words()} == {"00", "01"}

    def test_grow_from_empty(self):
        t = trellis_from_words([], BINARY, length=2)
        t = t.add_word("11").add_word("10")
        assert {format_word(w) for w in t.iter_words()} == {"10", "11"}

    def test_noop_when_present(self):
        t = trellis_from_words(["00", "11"], BINARY)
        assert t.add_word("11") is t

    def test_wrong_length(self):
        t = trellis_from_words(["00"], BINARY)
        with pytest.raises(WordError):
            t.add_word("000")

    def test_language_and_determinism_random(self):
        rng = random.Random(31)
        for _ in range(20):
            ell = rng.randint(1, 10)
            words = {
                "".join(rng.choice("01") for _ in range(ell))
                for _ in range(rng.randint(0, 12))
            }
            t = trellis_from_words([], BINARY, length=ell)
            expected: set[str] = set()
            for w in sorted(words):
                t = t.add_word(w)
                expected.add(w)
                assert isinstance(t, Trellis)  # construction re-validates
                assert {format_word(x) for x in t.iter_words()} == expected


class TestCountingAndSampling:
    def test_count_matches_enumeration(self):
        rng = random.Random(4)
        for _ in range(15):
            ell = rng.randint(1, 10)
            words = {
                "".join(rng.choice("01") for _ in range(ell))
                for _ in range(rng.randint(1, 40))
            }
            t = trellis_from_words(words, BINARY)
            assert t.count_words() == len(words)
            assert {format_word(w) for w in t.iter_words()} == words

    def test_sampling_uniform_chi_squared(self):
        # 30 words, 1e5 draws, fixed seed; critical value for df=29 at the
        # 0.001 level is 58.3012
        words = [format_word(w) for w in BINARY.words_of_length(6)][:30]
        t = trellis_from_words(words, BINARY)
        rng = random.Random(20240817)
        draws = 100_000
        counts: dict[str, int] = {w: 0 for w in words}
        for _ in range(draws):
            counts[format_word(t.sample_uniform(rng))] += 1
        expected = draws / 30
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        assert chi2 < 58.3012

    def test_two_word_frequencies(self):
        t = trellis_from_words(["0100", "1001"], BINARY)
        assert t.count_words() == 2
        rng = random.Random(8)
        hits = sum(
            1 for _ in range(10_000)
            if format_word(t.sample_uniform(rng)) == "0100"
        )
        # 3 sigma around p=1/2 over 10k draws
        assert abs(hits / 10_000 - 0.5) < 3 * 0.005

    def test_empty_language_sampling_error(self):
        t = trellis_from_words([], BINARY, length=4)
        with pytest.raises(EmptyLanguageError):
            t.sample_uniform(random.Random(0))

    def test_counts_on_universe(self):
        u = universe_trellis(BINARY, 8)
        rng = random.Random(17)
        seen = {format_word(u.sample_uniform(rng)) for _ in range(2000)}
        assert len(seen) > 250  # almost all of the 256 words show up
