"""Class B parity nodes: addition-only parities that make Q-symbol repair cheap.

Each node is designed through its row-0 equation, which sums one seed symbol
d[i,0] from Q_0 with some symbols d[0,c] from X_0. Row t of the node is the
same equation shifted by (+t, +t), so every decision is made once and holds
for all rows; the read-cost matrix is therefore constant along wrapped
diagonals and is updated a whole diagonal at a time.

Read-cost matrix semantics: a[d] is the additional read cost of d through the
highest-indexed Class B parity containing it, which is the parity used at
repair time. Extending an equation is rejected if it would leave any member
costlier than it was before the current node was started, so the matrix
never gets worse from one node to the next.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import CodeParams, ParityEquation, SymbolPos, in_Q, set_Q, set_X

INF = np.inf


class NoClassBNodes(ValueError):
    pass


class NotMember(ValueError):
    pass


class Uncovered(LookupError):
    pass


def read_cost(d: SymbolPos, eq: ParityEquation, params: CodeParams) -> int:
    """Additional reads needed to recover ``d`` from ``eq`` when node d.col failed.

    Counts the parity itself (standing in for ``d``) plus every other term
    outside the cached set X_j.
    """
    if d not in eq:
        raise NotMember(f"{d} is not a term of the parity at {eq.target}")
    if not in_Q(d, params):
        raise ValueError(f"{d} is not in any Q set")
    cached = set(set_X(d.col, params))
    return sum(1 for pos in eq.positions if pos not in cached)


def init_read_costs(params: CodeParams) -> np.ndarray:
    """Read costs right after Class A decoding: inf on Q symbols, k on the diagonal, else 1."""
    k = params.k
    a = np.ones((k, k))
    for j in range(k):
        for pos in set_Q(j, params):
            a[pos] = INF
    np.fill_diagonal(a, k)
    return a


@dataclass(frozen=True)
class ClassBNode:
    """One Class B node, described by its row-0 equation.

    ``seed`` is the row i of d[i,0]; ``cols`` are the columns c of the X_0
    symbols d[0,c], in the order they were added.
    """

    index: int
    seed: int
    cols: tuple[int, ...]
    mirror: bool = False

    def terms(self, t: int, k: int) -> list[SymbolPos]:
        out = [SymbolPos((self.seed + t) % k, t)]
        out += [SymbolPos(t, (c + t) % k) for c in self.cols]
        return out

    def equation(self, t: int, k: int) -> ParityEquation:
        return ParityEquation(SymbolPos(t, self.index), tuple((p, 1) for p in self.terms(t, k)))

    def equations(self, k: int) -> list[ParityEquation]:
        return [self.equation(t, k) for t in range(k)]


@dataclass
class ClassBPlan:
    params: CodeParams
    nodes: list[ClassBNode]
    read_costs: np.ndarray
    designated: dict[SymbolPos, SymbolPos]
    history: list[tuple[str, np.ndarray]] = field(default_factory=list, repr=False)

    @property
    def equations(self) -> list[ParityEquation]:
        k = self.params.k
        return [eq for node in self.nodes for eq in node.equations(k)]

    def equation_at(self, target: SymbolPos) -> ParityEquation:
        node = self.nodes[target.col - self.params.n_a]
        return node.equation(target.row, self.params.k)

    def punctured(self, count: int = 1) -> ClassBPlan:
        """The plan with the last ``count`` nodes removed."""
        keep = len(self.nodes) - count
        if keep < 0:
            raise ValueError("cannot puncture more nodes than exist")
        return _replay(self.params.with_n(self.params.n_a + keep), self.nodes[:keep])


def _has_mirror(i: int, params: CodeParams) -> bool:
    # d[0,i] in X_0 and not on the wrapped diagonal through d[i,0]
    k = params.k
    return 1 <= i <= k - params.tau - 1 and (k - i) % k != i


def _choose_seed(a: np.ndarray, params: CodeParams) -> int:
    rows = [pos.row for pos in set_Q(0, params)]
    return max(rows, key=lambda i: (a[i, 0], _has_mirror(i, params), -i))


def _set_diagonal(a: np.ndarray, pos: SymbolPos, value: float):
    k = a.shape[0]
    for t in range(k):
        a[(pos.row + t) % k, (pos.col + t) % k] = value


def _costs(node: ClassBNode, params: CodeParams) -> dict[SymbolPos, int]:
    eq = node.equation(0, params.k)
    return {pos: read_cost(pos, eq, params) for pos in eq.positions}


def _apply(a: np.ndarray, node: ClassBNode, params: CodeParams):
    for pos, cost in _costs(node, params).items():
        _set_diagonal(a, pos, cost)


def build_class_b(params: CodeParams) -> ClassBPlan:
    """Greedy construction of the n - n_a Class B nodes, lowest index first."""
    n_nodes = params.n - params.n_a
    if n_nodes == 0:
        raise NoClassBNodes("n = n_A leaves no room for Class B nodes")
    k, tau = params.k, params.tau
    a = init_read_costs(params)
    history = [("init", a.copy())]
    nodes: list[ClassBNode] = []
    max_itr = k - tau - 2
    x0_cols = [pos.col for pos in set_X(0, params)]

    for w in range(n_nodes):
        omega = params.n_a + w
        before = a.copy()
        i = _choose_seed(a, params)
        node = ClassBNode(omega, i, ())
        _apply(a, node, params)

        for itr in range(1, max_itr + 1):
            if itr == 1 and _has_mirror(i, params) and a[0, i] > 1:
                # seed + mirror: both cost one read (each lies in the other's X set)
                node = ClassBNode(omega, i, (i,), mirror=True)
            else:
                for c in x0_cols:
                    if c in node.cols or (k - c) % k == i or a[0, c] <= 1:
                        continue
                    trial = ClassBNode(omega, i, node.cols + (c,), node.mirror)
                    if all(cost <= before[pos] for pos, cost in _costs(trial, params).items()):
                        node = trial
                        break
                else:
                    continue
            _apply(a, node, params)
            history.append((f"P{omega} itr {itr}", a.copy()))

        history.append((f"P{omega}", a.copy()))
        nodes.append(node)
        max_itr -= 1

    return ClassBPlan(params, nodes, a, _designated(params, nodes), history)


def _designated(params: CodeParams, nodes: list[ClassBNode]) -> dict[SymbolPos, SymbolPos]:
    out = {}
    for node in nodes:
        for eq in node.equations(params.k):
            for pos in eq.positions:
                out[pos] = eq.target
    return out


def _replay(params: CodeParams, nodes: list[ClassBNode]) -> ClassBPlan:
    a = init_read_costs(params)
    for node in nodes:
        _apply(a, node, params)
    return ClassBPlan(params, list(nodes), a, _designated(params, nodes))


def plan_from_nodes(params: CodeParams, nodes: list[ClassBNode]) -> ClassBPlan:
    """Rebuild a plan (costs and designations) from stored node descriptions."""
    return _replay(params, nodes)


def designated_parity(d: SymbolPos, plan: ClassBPlan) -> SymbolPos:
    """The parity read to repair ``d``: the highest-indexed Class B parity containing it."""
    try:
        return plan.designated[d]
    except KeyError:
        raise Uncovered(f"no Class B parity covers {d}") from None


def q_offsets(params: CodeParams) -> range:
    return range(params.tau + 1, params.k)
