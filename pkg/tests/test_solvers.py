import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mesc.core import LOG2E, DomainError, InvalidInstanceError, SetSystem, avg_frequency, entropy_of_cover, validate
from mesc.generators import GenSpec, random_set_system, random_suite
from mesc.solvers import (
    best_delta,
    biased,
    biased_greedy,
    certify,
    enumerate_min_entropy_cover,
    exact_min_entropy_cover,
    greedy,
    split_light_heavy,
    theorem_bound,
)

H_3_1 = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))  # 0.8112781


class TestSplit:
    def test_extremes(self, paper_system):
        s0 = split_light_heavy(paper_system, 0)
        assert not s0.light and s0.heavy == frozenset(range(1, 9))
        s1 = split_light_heavy(paper_system, 1)
        assert s1.light == frozenset(range(1, 9)) and not s1.heavy

    def test_tie_rule(self):
        s = SetSystem(4, [(1, 3), (2, 3, 4)])  # frequencies 1,1,2,1
        split = split_light_heavy(s, 0.5)
        assert split.light == {1, 2}
        assert split.heavy == {3, 4}
        assert split.frequency_order == (1, 2, 4, 3)

    def test_ceiling(self):
        s = SetSystem(10, [tuple(range(1, 11))])
        assert len(split_light_heavy(s, 0.3).light) == 3
        assert len(split_light_heavy(s, 0.31).light) == 4

    @pytest.mark.parametrize("delta", [-0.1, 1.5, float("nan")])
    def test_domain(self, paper_system, delta):
        with pytest.raises(DomainError):
            split_light_heavy(paper_system, delta)


class TestBiasedGreedy:
    @pytest.mark.parametrize("delta", [0, 0.3, 1])
    def test_single_set(self, delta):
        cover, _ = biased_greedy(SetSystem(5, [(1, 2, 3, 4, 5)]), delta)
        assert cover.assignment == (1,) * 5
        assert entropy_of_cover(cover) == 0

    def test_paper_biased(self, paper_system):
        # sets: 1={1,2,3} 2={3,4,6} 3={4,5} 4={6,7,8}
        cover, trace = biased(paper_system)
        assert cover.assignment[4] == 3
        assert len(paper_system.sets[cover.assignment[3] - 1]) == 3
        assert cover.assignment[3] != cover.assignment[4]
        assert all(r.phase == "biased" for r in trace.records)

    def test_two_sets_greedy(self, two_sets):
        # A covers its three uncovered elements first, then B takes 4
        cover, trace = greedy(two_sets)
        assert cover.assignment == (1, 1, 1, 2)
        assert cover.class_sizes == (3, 1)
        assert entropy_of_cover(cover) == pytest.approx(H_3_1, abs=1e-12)
        assert [r.current_size for r in trace.records] == [3, 3, 3, 1]

    def test_two_sets_biased(self, two_sets):
        cover, _ = biased(two_sets)
        assert cover.assignment == (1, 1, 1, 2)
        assert entropy_of_cover(cover) == pytest.approx(0.8112781, abs=1e-7)

    def test_empty_set_never_chosen(self):
        s = SetSystem(3, [(), (1, 2), (2, 3)])
        for d in (0, 0.5, 1):
            cover, _ = biased_greedy(s, d)
            assert cover.class_sizes[0] == 0

    def test_invalid_system(self):
        with pytest.raises(InvalidInstanceError):
            biased_greedy(SetSystem(3, [(1, 2)]), 0.5)


@pytest.fixture(scope="module")
def suite():
    return [s for _, s in random_suite(200, 7)]


def test_aliases(suite):
    for s in suite:
        assert greedy(s) == biased_greedy(s, 0)
        assert biased(s) == biased_greedy(s, 1)


@pytest.mark.parametrize("delta", [0, 0.25, 0.5, 0.75, 1])
def test_cover_validity_and_trace(suite, delta):
    for s in suite:
        cover, trace = biased_greedy(s, delta)
        assert cover.n == s.n and sum(cover.class_sizes) == s.n
        for u, i in enumerate(cover.assignment, start=1):
            assert u in s.sets[i - 1]
        assert sorted(trace.order) == list(range(1, s.n + 1))
        for r in trace.records:
            assert r.a_v >= r.current_size >= 1
            if r.phase == "biased":
                assert r.a_v == r.current_size == max(len(s.sets[i - 1]) for i in s.containing(r.element))
        assert biased_greedy(s, delta) == (cover, trace)


class TestExact:
    def test_single_set(self):
        res = exact_min_entropy_cover(SetSystem(3, [(1, 2, 3)]))
        assert res.entropy == 0 and res.certified

    def test_two_sets(self, two_sets):
        # only two covers exist: (A,A,A,B) and (A,A,B,B)
        res = exact_min_entropy_cover(two_sets)
        assert res.cover.assignment == (1, 1, 1, 2)
        assert res.entropy == pytest.approx(H_3_1, abs=1e-12)
        assert entropy_of_cover(enumerate_min_entropy_cover(two_sets)[0]) == pytest.approx(H_3_1)

    def test_paper(self, paper_system):
        cover, ent = exact_min_entropy_cover(paper_system)
        assert sorted(c for c in cover.class_sizes if c) == [2, 3, 3]
        assert ent == pytest.approx(1.5612781, abs=1e-7)

    def test_budget(self, paper_system):
        res = exact_min_entropy_cover(paper_system, budget=3)
        assert not res.certified
        assert validate(paper_system).ok and sum(res.cover.class_sizes) == 8

    @settings(max_examples=100, deadline=None)
    @given(n=st.integers(1, 8), m=st.integers(1, 5), frac=st.floats(0, 1), seed=st.integers(0, 2**32))
    def test_matches_enumeration(self, n, m, frac, seed):
        s = random_set_system(GenSpec(n, m, 1 + frac * (m - 1), seed))
        ref_cover, ref_ent = enumerate_min_entropy_cover(s)
        res = exact_min_entropy_cover(s)
        assert res.certified
        assert res.entropy == pytest.approx(ref_ent, abs=1e-12)
        assert res.cover.assignment == ref_cover.assignment


class TestTheoremBound:
    def test_delta_one(self):
        rhs, beta = theorem_bound(1.5612781, 11 / 8, 1, 8)
        assert beta == 0
        assert rhs == pytest.approx(1.5612781 + math.log2(1.375), abs=1e-12)
        assert rhs == pytest.approx(2.0207097, abs=1e-7)

    def test_delta_zero(self):
        rhs, beta = theorem_bound(0.7, 2.0, 0, 9)
        assert beta == 1
        assert rhs == pytest.approx(0.7 + 1 + LOG2E)

    def test_half(self):
        rhs, beta = theorem_bound(0.0, 1.0, 0.5, 10)
        assert beta == 0.5
        assert rhs == pytest.approx(0.5 * (1 + LOG2E), abs=1e-12)
        assert rhs == pytest.approx(1.2213475, abs=1e-7)

    def test_domain(self):
        with pytest.raises(DomainError):
            theorem_bound(0.0, 0.5, 0.5, 10)


class TestCertify:
    @pytest.mark.parametrize("delta", [0, 0.5, 1])
    def test_single_set(self, delta):
        cert = certify(SetSystem(4, [(1, 2, 3, 4)]), delta)
        assert cert.holds and cert.ent_alg == 0
        if delta == 1:
            assert cert.slack == 0

    def test_two_sets(self, two_sets):
        cert = certify(two_sets, 0)
        assert cert.ent_alg == pytest.approx(H_3_1)
        assert cert.rhs == pytest.approx(H_3_1 + math.log2(1.25) + LOG2E, abs=1e-12)
        assert cert.rhs == pytest.approx(2.5759, abs=1e-4)
        assert cert.holds

    def test_slack_accounts_for_divergences(self, suite):
        # the dropped proof terms are nonnegative and never exceed the slack
        for s in suite[:60]:
            for d in (0, 0.5, 1):
                cert = certify(s, d)
                assert cert.divergence_alg >= 0 and cert.divergence_heavy >= 0
                assert cert.divergence_alg + cert.divergence_heavy <= cert.slack + 1e-9


class TestBestDelta:
    def test_values(self):
        assert best_delta(1.375) == (1, False)
        assert best_delta(3) == (0, False)
        assert best_delta(math.e).tie

    def test_domain(self):
        with pytest.raises(DomainError):
            best_delta(0.9)
