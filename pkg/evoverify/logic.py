"""
Logic over explored state graphs
Formula ASTs, fragment classification and the fixpoint model checker.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Literal, Set, Tuple, Union

import networkx as nx

from .lts import StateGraph
from .verdict import Verdict

logger = logging.getLogger(__name__)

FormulaClass = Literal["general", "monotone", "restricted", "restricted_negation"]


@dataclass(frozen=True)
class Atom:
    polarity: str
    name: str


@dataclass(frozen=True)
class Truth:
    pass


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Next:
    """One tau-step: Pred"""
    body: "Formula"


@dataclass(frozen=True)
class Ev:
    """Eventually: reflexive-transitive Pred*"""
    body: "Formula"


Formula = Union[Atom, Truth, Or, And, Not, Next, Ev]
TT = Truth()


def atom(barb: Tuple[str, str]) -> Atom:
    return Atom(barb[0], barb[1])


def children(formula: Formula) -> Tuple[Formula, ...]:
    if isinstance(formula, (Or, And)):
        return formula.left, formula.right
    if isinstance(formula, (Not, Next, Ev)):
        return (formula.body,)
    return ()


def subformulas(formula: Formula) -> Iterable[Formula]:
    """Pre-order, left before right"""
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def postorder(formula: Formula) -> List[Formula]:
    """
    Distinct subformula objects, children before parents.

    Nodes are told apart by identity so that deeply nested formulas are
    never hashed or compared structurally.
    """
    order: List[Formula] = []
    seen: Set[int] = set()
    stack: List[Tuple[Formula, bool]] = [(formula, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        stack.extend((child, False) for child in reversed(children(node)))
    return order


def _is_predicate(formula: Formula) -> bool:
    return isinstance(formula, (Atom, Truth))


def is_monotone(formula: Formula) -> bool:
    return not any(isinstance(sub, Not) for sub in subformulas(formula))


def is_restricted(formula: Formula) -> bool:
    """Monotone and every conjunction has a predicate conjunct"""
    if not is_monotone(formula):
        return False
    return all(
        _is_predicate(sub.left) or _is_predicate(sub.right)
        for sub in subformulas(formula)
        if isinstance(sub, And)
    )


def classify_formula(formula: Formula) -> FormulaClass:
    """Most specific fragment the formula belongs to"""
    if is_restricted(formula):
        return "restricted"
    if isinstance(formula, Not) and is_restricted(formula.body):
        return "restricted_negation"
    if is_monotone(formula):
        return "monotone"
    return "general"


def in_restricted_logic(formula: Formula) -> bool:
    return classify_formula(formula) in ("restricted", "restricted_negation")


# ---------------------------------------------------------------------------
# Model checking
# ---------------------------------------------------------------------------

def pred(graph: nx.DiGraph, targets: Set[int]) -> Set[int]:
    """States with at least one tau-successor in `targets`"""
    found: Set[int] = set()
    for target in targets:
        found.update(graph.predecessors(target))
    return found


def pred_star(graph: nx.DiGraph, targets: Set[int]) -> Set[int]:
    """States that reach `targets` in zero or more tau-steps"""
    found = set(targets)
    queue = deque(targets)
    while queue:
        state = queue.popleft()
        for previous in graph.predecessors(state):
            if previous not in found:
                found.add(previous)
                queue.append(previous)
    return found


class _Evaluator:
    """
    Computes, per subformula, the tentative set over the explored graph and
    the must/may sets that account for unexplored successors of frontier states.
    """

    def __init__(self, g: StateGraph):
        self.g = g
        self.graph = g.to_networkx()
        self.all_states = set(range(len(g.states)))
        self.frontier = set(g.frontier)
        # keyed by id(); `nodes` keeps every keyed formula alive
        self.memo: Dict[int, Tuple[Set[int], Set[int], Set[int]]] = {}
        self.nodes: List[Formula] = []

    def evaluate(self, formula: Formula) -> Tuple[Set[int], Set[int], Set[int]]:
        for node in postorder(formula):
            if id(node) not in self.memo:
                self.memo[id(node)] = self._evaluate(node)
                self.nodes.append(node)
        return self.memo[id(formula)]

    def _result(self, formula: Formula) -> Tuple[Set[int], Set[int], Set[int]]:
        return self.memo[id(formula)]

    def _evaluate(self, formula: Formula) -> Tuple[Set[int], Set[int], Set[int]]:
        """One node, once its children are in the memo"""
        if isinstance(formula, Truth):
            states = set(self.all_states)
            return states, states, states
        if isinstance(formula, Atom):
            barb = (formula.polarity, formula.name)
            states = {s for s in self.all_states if barb in self.g.barbs[s]}
            return states, states, states
        if isinstance(formula, Or):
            sat_l, must_l, may_l = self._result(formula.left)
            sat_r, must_r, may_r = self._result(formula.right)
            return sat_l | sat_r, must_l | must_r, may_l | may_r
        if isinstance(formula, And):
            sat_l, must_l, may_l = self._result(formula.left)
            sat_r, must_r, may_r = self._result(formula.right)
            return sat_l & sat_r, must_l & must_r, may_l & may_r
        if isinstance(formula, Not):
            sat, must, may = self._result(formula.body)
            return self.all_states - sat, self.all_states - may, self.all_states - must
        if isinstance(formula, Next):
            sat, must, may = self._result(formula.body)
            return pred(self.graph, sat), pred(self.graph, must), pred(self.graph, may) | self.frontier
        if isinstance(formula, Ev):
            sat, must, may = self._result(formula.body)
            return (pred_star(self.graph, sat), pred_star(self.graph, must),
                    pred_star(self.graph, may | self.frontier))
        raise TypeError(f"not a formula: {formula!r}")


def _path_to(g: StateGraph, targets: Set[int]):
    if not targets:
        return [g.root]
    graph = g.to_networkx()
    lengths = nx.single_source_shortest_path_length(graph, g.root)
    reachable = [t for t in targets if t in lengths]
    if not reachable:
        return [g.root]
    goal = min(reachable, key=lambda t: (lengths[t], t))
    return nx.shortest_path(graph, g.root, goal)


def model_check(g: StateGraph, formula: Formula) -> Tuple[Set[int], Verdict]:
    """
    Evaluate a formula over an explored state graph.

    Args:
        g: Explored state graph
        formula: Formula to evaluate

    Returns:
        (sat, verdict): the tentative satisfaction set over the explored
        states and the verdict at the root. On incomplete graphs the verdict
        is unknown unless the answer is fixed by explored structure alone.
    """
    from .printer import render_formula

    evaluator = _Evaluator(g)
    sat, must, may = evaluator.evaluate(formula)
    text = render_formula(formula)

    if g.root in must:
        status, reason = "holds", "root satisfies the formula"
    elif g.root not in may:
        status, reason = "violated", "root does not satisfy the formula"
    else:
        status = "unknown"
        reason = "answer depends on states beyond the exploration bounds"
        logger.warning(f"Model checking of {text} degraded to unknown ({g.bounds_hit})")

    witness = None
    if status == "violated":
        witness = [g.root]
        if isinstance(formula, Not) and isinstance(formula.body, Ev):
            _, inner_must, _ = evaluator.evaluate(formula.body.body)
            witness = _path_to(g, inner_must)

    verdict = Verdict(
        property=f"mc({text})",
        status=status,
        witness=witness,
        reason=reason,
        states_explored=len(g.states),
        complete=g.complete,
        bounds=g.bounds(),
    )
    logger.info(f"Model checked {text}: {status}, |sat|={len(sat)}")
    return sat, verdict
