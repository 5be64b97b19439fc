import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from relayrate.errors import (
    EmptySubsetError,
    InvalidPairError,
    JNotInComplementError,
    KOutOfRangeError,
)
from relayrate.imeasure import (
    atom_table,
    balanced_check,
    composition_check,
    conditional_multi_info,
    expansion_residual,
    gap,
    lemma5_check,
    lemma6_check,
    multi_info,
)
from relayrate.source import TabularPMF, gen_component, gen_sensor, validate_tabular
from relayrate.subsets import mask_of, ordered_subsets, popcount

from .conftest import random_corpus
from .oracles import all_entropies, multi_info_from
from .strategies import pmfs

CORPUS = [src for L in (2, 3, 4) for src in random_corpus(seed=100 + L, L=L, count=34)]


def _entries(src):
    pmf = src.to_pmf()
    return list(pmf.entries)


class TestMultiInfo:
    def test_independent_bits_share_nothing(self):
        entries = tuple(((a, b), 0.25) for a in (0, 1) for b in (0, 1))
        src = validate_tabular(TabularPMF((2, 2), entries))
        assert multi_info(src, 0b11) == pytest.approx(0.0, abs=1e-12)

    def test_component_atoms_are_component_rates(self):
        rates = {mask_of([1]): 1, mask_of([1, 2]): 2, mask_of([1, 3]): 3, mask_of([2, 3]): 4}
        src = gen_component(3, rates)
        for K in range(1, 7):
            assert multi_info(src, K) == pytest.approx(rates.get(K, 0.0), abs=1e-12)

    def test_example3_pair(self, ex3):
        assert multi_info(ex3, mask_of([1, 2])) == pytest.approx(1.0)

    def test_empty_rejected(self, ex3):
        with pytest.raises(EmptySubsetError):
            multi_info(ex3, 0)

    @pytest.mark.parametrize("idx", range(0, len(CORPUS), 7))
    def test_matches_alternating_sum_oracle(self, idx):
        src = CORPUS[idx]
        L = src.num_users
        H = all_entropies(_entries(src), L)
        atoms = atom_table(src)
        for K in range(1, 1 << L):
            ref = multi_info_from(H, K, L)
            assert multi_info(src, K) == pytest.approx(ref, abs=1e-9)
            assert atoms[K] == pytest.approx(ref, abs=1e-9)


class TestAtomTable:
    def test_example3(self, ex3):
        atoms = atom_table(ex3)
        for K in range(1, 7):
            assert atoms[K] == pytest.approx(1.0, abs=1e-12)
        assert atoms[7] == pytest.approx(0.0, abs=1e-12)

    def test_example4(self, ex4):
        atoms = atom_table(ex4)
        ones = {mask_of([1]), mask_of([2]), mask_of([3]), mask_of([2, 3])}
        for K in range(1, 8):
            assert atoms[K] == pytest.approx(1.0 if K in ones else 0.0, abs=1e-12)

    def test_shared_bit(self):
        src = validate_tabular(TabularPMF((2, 2), (((0, 0), 0.5), ((1, 1), 0.5))))
        atoms = atom_table(src)
        assert atoms[1] == pytest.approx(0.0, abs=1e-12)
        assert atoms[2] == pytest.approx(0.0, abs=1e-12)
        assert atoms[3] == pytest.approx(1.0, abs=1e-12)

    def test_items_are_ordered(self, ex5):
        masks = [m for m, _ in atom_table(ex5).items()]
        assert masks == ordered_subsets(3)
        assert [popcount(m) for m in masks] == sorted(popcount(m) for m in masks)


class TestIdentities:
    def test_composition_empty_set(self, ex5):
        assert composition_check(ex5, 0) == 0.0

    def test_composition_example5(self, ex5):
        assert composition_check(ex5, mask_of([2, 3])) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("src", CORPUS, ids=lambda s: f"L{s.num_users}")
    def test_composition_on_corpus(self, src):
        atoms = atom_table(src)
        for S in range(1 << src.num_users):
            assert composition_check(src, S, atoms) <= 1e-8

    @pytest.mark.parametrize("src", CORPUS, ids=lambda s: f"L{s.num_users}")
    def test_lemma5_on_corpus(self, src):
        L = src.num_users
        atoms = atom_table(src)
        for S in range(1 << L):
            for j in range(1, L + 1):
                if not S >> (j - 1) & 1:
                    assert lemma5_check(src, S, j, atoms) <= 1e-8

    @pytest.mark.parametrize("src", CORPUS, ids=lambda s: f"L{s.num_users}")
    def test_lemma6_on_corpus(self, src):
        L = src.num_users
        atoms = atom_table(src)
        for S in range(1 << L):
            outside = [u for u in range(1, L + 1) if not S >> (u - 1) & 1]
            for j, m in itertools.combinations(outside, 2):
                assert lemma6_check(src, S, j, m, atoms) <= 1e-8

    def test_lemma5_examples(self, ex3, ex5):
        assert lemma5_check(ex3, mask_of([2, 3]), 1) == pytest.approx(0.0, abs=1e-12)
        assert lemma5_check(ex5, 0, 2) == pytest.approx(0.0, abs=1e-12)

    def test_lemma6_example4(self, ex4):
        lhs = conditional_multi_info(ex4, mask_of([2, 3]))
        assert lhs == pytest.approx(1.0)
        assert lemma6_check(ex4, mask_of([1]), 2, 3) == pytest.approx(0.0, abs=1e-12)
        assert lemma6_check(ex4, 0, 1, 2) == pytest.approx(0.0, abs=1e-12)

    def test_lemma_argument_errors(self, ex3):
        with pytest.raises(JNotInComplementError):
            lemma5_check(ex3, mask_of([1]), 1)
        with pytest.raises(InvalidPairError):
            lemma6_check(ex3, 0, 2, 2)
        with pytest.raises(InvalidPairError):
            lemma6_check(ex3, mask_of([1]), 1, 2)

    @pytest.mark.parametrize("src", CORPUS[::5], ids=lambda s: f"L{s.num_users}")
    def test_expansion_identity(self, src):
        L = src.num_users
        for K in range(1, 1 << L):
            for T in range(1 << L):
                if K & T:
                    continue
                for e in range(1, L + 1):
                    if (K | T) >> (e - 1) & 1:
                        continue
                    assert expansion_residual(src, K, e, T) <= 1e-8

    @pytest.mark.parametrize("src", CORPUS, ids=lambda s: f"L{s.num_users}")
    def test_atoms_sum_to_joint_entropy(self, src):
        atoms = atom_table(src)
        assert atoms.values[1:].sum() == pytest.approx(src.entropy(src.full), abs=1e-8)

    @pytest.mark.parametrize("src", CORPUS, ids=lambda s: f"L{s.num_users}")
    def test_low_order_atoms_nonnegative(self, src):
        atoms = atom_table(src)
        for K in range(1, 1 << src.num_users):
            if popcount(K) <= 2:
                assert atoms[K] >= -1e-9


@settings(max_examples=40, deadline=None)
@given(pmfs(min_users=3, max_users=3))
def test_symmetrised_pmf_has_equal_atoms_per_size(pmf):
    # average the pmf over all user permutations; the result is exchangeable
    acc = {}
    perms = list(itertools.permutations(range(3)))
    alph = max(pmf.alphabet_sizes)
    for sym, p in pmf.entries:
        for perm in perms:
            key = tuple(sym[i] for i in perm)
            acc[key] = acc.get(key, 0.0) + p / len(perms)
    src = validate_tabular(TabularPMF((alph,) * 3, tuple(acc.items())))
    atoms = atom_table(src)
    for k in (1, 2, 3):
        vals = atoms.of_size(k)
        assert np.ptp(vals) <= 1e-9
    assert balanced_check(src).overall


class TestGap:
    @pytest.mark.parametrize("k, L, expected", [(2, 3, 2.0), (2, 4, 1.5), (3, 4, 1.5)])
    def test_values(self, k, L, expected):
        assert gap(k, L) == pytest.approx(expected)

    @pytest.mark.parametrize("k, L", [(1, 3), (3, 3), (0, 5), (5, 5)])
    def test_out_of_range(self, k, L):
        with pytest.raises(KOutOfRangeError):
            gap(k, L)


class TestBalancedCheck:
    @pytest.mark.parametrize(
        "sigmas, expected",
        [((0.1, 0.1, 0.1), True), ((0.40, 0.41, 0.42), True), ((0.1, 0.12, 0.2), False), ((0.1, 0.12, 0.14), True)],
    )
    def test_sensor_sources(self, sigmas, expected):
        report = balanced_check(validate_tabular(gen_sensor(0.2, sigmas)))
        assert report.overall is expected

    def test_two_users_pass_vacuously(self):
        src = gen_component(2, {1: 1.0, 3: 5.0})
        report = balanced_check(src)
        assert report.levels == () and report.overall

    def test_example4_is_not_balanced(self, ex4):
        report = balanced_check(ex4)
        assert not report.overall
        (level,) = report.levels
        assert level.mu_bar == pytest.approx(1.0) and level.mu_under == pytest.approx(0.0)
        assert level.margin == pytest.approx(-1.0)

    def test_negative_atoms_flagged(self):
        # XOR triple: all pairwise atoms vanish, the triple atom is -1
        entries = tuple(((a, b, a ^ b), 0.25) for a in (0, 1) for b in (0, 1))
        report = balanced_check(validate_tabular(TabularPMF((2, 2, 2), entries)))
        assert not report.negative_atoms  # k = 2 atoms are 1 each; triple lies outside [2, L-1]
        src4 = validate_tabular(TabularPMF((2,) * 4, tuple(((a, b, a ^ b, 0), 0.25) for a in (0, 1) for b in (0, 1))))
        assert balanced_check(src4).negative_atoms

    def test_margin_reports_room(self, ex3):
        (level,) = balanced_check(ex3).levels
        assert level.margin == pytest.approx(1.0)
