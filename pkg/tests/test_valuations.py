import time

import numpy as np
import pytest

from logoswb.errors import InvalidContext, MissingNode, UnknownId
from logoswb.graph import build_commutation_graph
from logoswb.linalg import make_density, make_projector, vector_to_projector
from logoswb.psa import evaluate_psa, make_psa
from logoswb.randomstates import random_density, random_rank_one_context
from logoswb.valuations import (
    BinaryValuation,
    NoneExists,
    argmax_selection,
    check_intensive_valuation,
    find_binary_valuation,
    ks18_problem,
    make_problem,
)

from oracles import brute_force_valuations, count_valuations

S = 1 / np.sqrt(2)


def qubit_basis(prefix="P"):
    return [(f"{prefix}0", vector_to_projector([1, 0])), (f"{prefix}1", vector_to_projector([0, 1]))]


def is_valid(assignment, problem):
    return all(sum(assignment[i] for i in c) == 1 for c in problem.contexts)


class TestBinary:
    def test_single_context_lexicographic_first(self):
        p = make_problem([["P0", "P1"]], qubit_basis())
        v = find_binary_valuation(p)
        assert isinstance(v, BinaryValuation)
        assert dict(v.assignment) == {"P0": 1, "P1": 0}

    def test_two_disjoint_contexts(self):
        p = make_problem([["A0", "A1"], ["B0", "B1"]], qubit_basis("A") + qubit_basis("B"))
        v = find_binary_valuation(p)
        assert v and is_valid(v.assignment, p)
        assert dict(v.assignment) == {"A0": 1, "A1": 0, "B0": 1, "B1": 0}

    def test_ks18_has_none(self):
        p = ks18_problem()
        assert len(p.ids) == 18 and len(p.contexts) == 9
        t0 = time.perf_counter()
        result = find_binary_valuation(p)
        assert time.perf_counter() - t0 < 10
        assert isinstance(result, NoneExists) and not result
        assert result.explored > 0
        assert count_valuations(p.ids, p.contexts) == 0

    def test_ks18_minus_one_context_is_colourable(self):
        full = ks18_problem()
        for drop in range(9):
            ctxs = [c for k, c in enumerate(full.contexts) if k != drop]
            p = make_problem(ctxs, full.projectors)
            v = find_binary_valuation(p)
            assert isinstance(v, BinaryValuation)
            assert is_valid(v.assignment, p)
            assert count_valuations(p.ids, p.contexts) > 0

    def test_every_ks18_context_is_a_resolution(self):
        p = ks18_problem()
        for c in p.contexts:
            assert np.allclose(sum(p.projectors[i].matrix for i in c), np.eye(4))

    def test_invalid_context(self):
        items = qubit_basis() + [("Pp", vector_to_projector([S, S]))]
        with pytest.raises(InvalidContext):
            make_problem([["P0", "Pp"]], items)
        with pytest.raises(InvalidContext):
            make_problem([["P0"]], items)
        with pytest.raises(InvalidContext):
            make_problem([["P0", "I"]], items + [("I", make_projector(np.eye(2)))])

    def test_unknown_id(self):
        with pytest.raises(UnknownId):
            make_problem([["P0", "Q"]], qubit_basis())

    def test_agrees_with_brute_force_on_random_problems(self, rng):
        exists = none = 0
        for _ in range(150):
            n = int(rng.integers(2, 13))
            ids = [f"n{k:02d}" for k in range(n)]
            ctxs = []
            for _ in range(int(rng.integers(1, 8))):
                size = int(rng.integers(1, min(n, 4) + 1))
                ctxs.append(list(rng.choice(ids, size=size, replace=False)))
            p = make_problem(ctxs, ids=ids)
            result = find_binary_valuation(p)
            oracle = brute_force_valuations(p.ids, p.contexts)
            if oracle:
                exists += 1
                assert isinstance(result, BinaryValuation)
                assert dict(result.assignment) in oracle
            else:
                none += 1
                assert isinstance(result, NoneExists)
        assert exists and none

    def test_deterministic(self):
        p = ks18_problem()
        assert find_binary_valuation(p) == find_binary_valuation(p)


class TestIntensive:
    def test_maximally_mixed(self):
        p = make_problem([["P0", "P1"]], qubit_basis())
        psa = evaluate_psa(make_density(np.diag([0.5, 0.5])), build_commutation_graph(qubit_basis()))
        rep = check_intensive_valuation(psa, p)
        assert rep.passed and rep.contexts[0].total == 1.0

    def test_pure_state_own_context(self):
        a, b = 0.6, 0.8
        items = [("v", vector_to_projector([a, b])), ("w", vector_to_projector([-b, a]))]
        p = make_problem([["v", "w"]], items)
        psa = make_psa({"v": 1.0, "w": 0.0})
        assert check_intensive_valuation(psa, p).passed

    def test_failing_context(self):
        p = make_problem([["P0", "P1"]], qubit_basis())
        rep = check_intensive_valuation(make_psa({"P0": 0.7, "P1": 0.7}), p)
        assert not rep.passed
        assert rep.worst_defect == pytest.approx(0.4)

    def test_missing_node(self):
        p = make_problem([["P0", "P1"]], qubit_basis())
        with pytest.raises(MissingNode):
            check_intensive_valuation(make_psa({"P0": 1.0}), p)

    def test_ks18_random_states(self, rng):
        p = ks18_problem()
        g = build_commutation_graph(list(p.projectors.items()))
        for _ in range(20):
            rep = check_intensive_valuation(evaluate_psa(random_density(4, rng), g), p)
            assert rep.passed and rep.worst_defect <= 1e-9

    def test_intensive_passes_whenever_binary_fails(self, rng):
        full = ks18_problem()
        g = build_commutation_graph(list(full.projectors.items()))
        assert isinstance(find_binary_valuation(full), NoneExists)
        for dim_state in range(10):
            rho = random_density(4, rng, rank=1 + dim_state % 4)
            assert check_intensive_valuation(evaluate_psa(rho, g), full).passed


def test_argmax_selection_is_scale_invariant(rng):
    items = random_rank_one_context(3, rng, "a") + random_rank_one_context(3, rng, "b")
    p = make_problem([["a0", "a1", "a2"], ["b0", "b1", "b2"]], items)
    psa = evaluate_psa(random_density(3, rng), build_commutation_graph(items))
    base = argmax_selection(psa, p)
    for scale in (0.9, 0.5, 1e-3):
        scaled = make_psa({i: scale * x for i, x in psa.rows()})
        assert argmax_selection(scaled, p) == base
