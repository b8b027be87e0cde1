import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowrepair.class_b import (
    ClassBNode,
    NoClassBNodes,
    NotMember,
    Uncovered,
    build_class_b,
    designated_parity,
    init_read_costs,
    plan_from_nodes,
    read_cost,
)
from lowrepair.model import CodeParams, ParityEquation, SymbolPos, set_Q, set_X

P = CodeParams(10, 5, 7, 1)
INF = np.inf


def d(i, j):
    return SymbolPos(i, j)


def eq(*positions, target=d(0, 7)):
    return ParityEquation(target, tuple((p, 1) for p in positions))


def full_params():
    """Every (k, tau) at desk scale with the full set of k - tau - 1 Class B nodes."""
    out = []
    for k in range(3, 13):
        for tau in range(1, k - 1):
            n_a = k + tau + 1
            if n_a < 2 * k:
                out.append(CodeParams(n_a + k - tau - 1, k, n_a, tau))
    return out


def test_read_cost_examples():
    assert read_cost(d(4, 0), eq(d(4, 0), d(0, 2)), P) == 1
    assert read_cost(d(0, 3), eq(d(4, 0), d(0, 3)), P) == 2
    assert read_cost(d(3, 0), eq(d(3, 0)), P) == 1
    with pytest.raises(NotMember):
        read_cost(d(2, 0), eq(d(3, 0)), P)
    with pytest.raises(ValueError):
        read_cost(d(1, 0), eq(d(1, 0)), P)  # recovered by Class A, not in any Q


def test_init_read_costs():
    a = init_read_costs(P)
    want = np.array(
        [
            [5, INF, INF, INF, 1],
            [1, 5, INF, INF, INF],
            [INF, 1, 5, INF, INF],
            [INF, INF, 1, 5, INF],
            [INF, INF, INF, 1, 5],
        ]
    )
    assert np.array_equal(a, want)
    assert np.isinf(a).sum() == 15


@pytest.mark.parametrize("p", full_params(), ids=lambda p: f"k{p.k}t{p.tau}")
def test_init_inf_count(p):
    a = init_read_costs(p)
    assert np.isinf(a).sum() == p.k * (p.k - p.tau - 1)
    q = {pos for j in range(p.k) for pos in set_Q(j, p)}
    assert {SymbolPos(*ix) for ix in zip(*np.nonzero(np.isinf(a)))} == q
    if p.tau == p.k - 2:
        assert all(np.isinf(a[:, j]).sum() == 1 for j in range(p.k))


def test_worked_example_nodes():
    plan = build_class_b(P)
    p7, p8, p9 = plan.nodes
    # P7: d[2,0] plus its mirror d[0,2], then d[0,1]
    assert p7.terms(0, 5) == [d(2, 0), d(0, 2), d(0, 1)]
    assert p7.mirror
    for t in range(5):
        assert p7.terms(t, 5)[:2] == [d((2 + t) % 5, t), d(t, (2 + t) % 5)]
    # P8: d[4,0] with d[0,2]
    assert p8.terms(0, 5) == [d(4, 0), d(0, 2)]
    # P9: the singleton d[3,0]
    assert p9.terms(0, 5) == [d(3, 0)]
    assert [n.index for n in plan.nodes] == [7, 8, 9]


def test_worked_example_costs():
    plan = build_class_b(P)
    after = dict(plan.history)
    assert after["P7"][4, 0] == 3
    assert after["P7 itr 2"][0, 2] == 2  # rises while P7 grows
    assert after["P9"][0, 2] == 1  # and is 1 again at the end
    want = np.ones((5, 5))
    np.fill_diagonal(want, 5)
    assert np.array_equal(plan.read_costs, want)


def test_designated_examples():
    plan = build_class_b(P)
    assert designated_parity(d(0, 2), plan) == d(2, 9)
    assert designated_parity(d(4, 0), plan) == d(0, 8)
    assert designated_parity(d(2, 0), plan) == d(0, 7)
    assert designated_parity(d(3, 0), plan) == d(0, 9)
    # without P9, row 3 of P8 (d[2,3] + d[3,0]) still covers d[3,0], at cost 2
    short = plan.punctured(1)
    assert designated_parity(d(3, 0), short) == d(3, 8)
    assert short.read_costs[3, 0] == 2
    with pytest.raises(ValueError):
        plan.punctured(4)


def test_uncovered():
    lone = plan_from_nodes(CodeParams(8, 5, 7, 1), [ClassBNode(7, 3, ())])
    assert designated_parity(d(3, 0), lone) == d(0, 7)
    with pytest.raises(Uncovered):
        designated_parity(d(2, 0), lone)
    assert np.isinf(lone.read_costs[2, 0])


def test_designated_is_highest_covering_node():
    plan = build_class_b(P)
    for pos, target in plan.designated.items():
        covering = [e.target for e in plan.equations if pos in e]
        assert target == max(covering, key=lambda t: t.col)
        # one equation per node at most
        assert len({t.col for t in covering}) == len(covering)


@pytest.mark.parametrize("p", full_params(), ids=lambda p: f"k{p.k}t{p.tau}")
def test_invariants(p):
    k, tau = p.k, p.tau
    plan = build_class_b(p)
    want = np.ones((k, k))
    np.fill_diagonal(want, k)
    assert np.array_equal(plan.read_costs, want)
    assert [len(n.terms(0, k)) for n in plan.nodes] == list(range(k - tau - 1, 0, -1))
    for node in plan.nodes:
        base = node.equation(0, k)
        for t in range(k):
            shifted = [SymbolPos((q.row + t) % k, (q.col + t) % k) for q in base.positions]
            e = node.equation(t, k)
            assert e.positions == shifted and e.target == SymbolPos(t, node.index)
            assert all(c == 1 for _, c in e.terms)
        if node.mirror:
            seed_mirror = eq(*node.terms(0, k)[:2])
            assert read_cost(node.terms(0, k)[0], seed_mirror, p) == 1
    # every Q symbol is covered
    q = {pos for j in range(k) for pos in set_Q(j, p)}
    assert q <= set(plan.designated)
    # replaying the stored node descriptions gives the same plan
    again = plan_from_nodes(p, plan.nodes)
    assert np.array_equal(again.read_costs, plan.read_costs)
    assert again.designated == plan.designated
    # costs never exceed their initial values
    init = init_read_costs(p)
    for _, a in plan.history:
        assert np.all(a <= init)


@given(st.sampled_from(full_params()), st.data())
def test_proposition_one(p, data):
    # Q symbol plus any subset of X_j costs one read
    j = data.draw(st.integers(0, p.k - 1))
    q = data.draw(st.sampled_from(set_Q(j, p)))
    xs = data.draw(st.lists(st.sampled_from(set_X(j, p)), unique=True))
    assert read_cost(q, eq(q, *xs), p) == 1


def test_no_mirror_corner():
    # k < 2(tau + 1): no Q_0 seed has a usable mirror
    p = CodeParams(10, 5, 8, 2)
    plan = build_class_b(p)
    assert not any(n.mirror for n in plan.nodes)
    assert [n.terms(0, 5)[0] for n in plan.nodes] == [d(3, 0), d(4, 0)]
    want = np.ones((5, 5))
    np.fill_diagonal(want, 5)
    assert np.array_equal(plan.read_costs, want)


def test_partial_and_empty():
    with pytest.raises(NoClassBNodes):
        build_class_b(CodeParams(7, 5, 7, 1))
    plan = build_class_b(CodeParams(8, 5, 7, 1))
    assert len(plan.nodes) == 1
    assert plan.nodes[0] == build_class_b(P).nodes[0]
