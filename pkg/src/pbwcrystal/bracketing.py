'''Simply braided words and the bracketing rule for f_i.

A plan is a sequence of braid moves bringing alpha_i to the front of a convex
order, where every move of more than two letters has alpha_i as the rightmost
root of its window.  Each such move contributes a rank 2 window; the bracket
string of a datum is read off those windows and its leftmost uncanceled "("
says where f_i acts.
'''
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass

from pbwcrystal import brackets
from pbwcrystal.brackets import CLOSE, OPEN, Block
from pbwcrystal.config_schema import SearchParameters
from pbwcrystal.exceptions import (IllegalMoveError, OrderError, PlanError, SearchBudgetExceeded,
                                   UnsupportedTypeError)
from pbwcrystal.lusztig import LusztigDatum, window_transition
from pbwcrystal.rootsys import as_root_system
from pbwcrystal.weyl import (COMMUTING, LONG_FIRST, SHORT_FIRST, SL3, BraidMove, apply_move,
                             classify_window, commutation_path, convex_order, format_word,
                             hybrid_order, is_good_enumeration, lex_order)

logger = logging.getLogger(__name__)

A2 = "A2"
B2 = "B2"  # alpha_i short: window (L, L+S, L+2S, alpha_i)
C2 = "C2"  # alpha_i long: window (S, 2S+L, S+L, alpha_i)

_SUBSYSTEM_KIND = {SL3: A2, LONG_FIRST: B2, SHORT_FIRST: C2}


@dataclass(frozen=True)
class Subsystem(object):
    '''Rank 2 window of a nontrivial move, alpha_i rightmost.'''
    kind: str
    roots: tuple


@dataclass(frozen=True)
class BracketPlan(object):
    '''Validated braid moves bringing alpha_i to the front of ``order``.'''
    order: object
    node: int
    moves: tuple
    subsystems: tuple

    @classmethod
    def from_moves(cls, order, i, moves):
        '''Replay ``moves`` on ``order`` and record the windows; PlanError if any step is not allowed.'''
        alpha = order.system.simple_root(i)
        current = order
        subsystems = []
        for k, move in enumerate(moves):
            if move.arity > 2:
                window = current.roots[move.start:move.stop]
                kind = classify_window(current.system, window) if len(window) == move.arity else None
                if kind is None or window[-1] != alpha:
                    raise PlanError(f"move {k + 1} at position {move.position} does not end at {alpha.compact()}")
                subsystems.append(Subsystem(_SUBSYSTEM_KIND[kind], tuple(window)))
            try:
                current = apply_move(current, move)
            except IllegalMoveError as err:
                raise PlanError(f"move {k + 1} does not apply: {err}") from err
        if current.roots[0] != alpha:
            raise PlanError(f"moves leave {current.roots[0].compact()} in front instead of {alpha.compact()}")
        return cls(order, i, tuple(moves), tuple(subsystems))


def _window_ending_at(order, p):
    '''Nontrivial move whose window ends at 0-based position p, or None.'''
    for arity in (3, 4):
        start = p - arity + 1
        if start >= 0 and classify_window(order.system, order.roots[start:p + 1]) is not None:
            return BraidMove(start + 1, arity)
    return None


def _is_swap(order, k):
    return classify_window(order.system, order.roots[k:k + 2]) == COMMUTING


class Search(object):
    '''Depth-first search over the prefix ending at alpha_i.

    Candidates come in a fixed order: the window ending at alpha_i, the swap
    of alpha_i with its left neighbour, then 2-term moves in the prefix,
    nearest first.  States are keyed by the prefix, which is all a later move
    can touch.
    '''

    def __init__(self, order, i, node_cap=None):
        self.order = order
        self.node = i
        self.node_cap = node_cap if node_cap is not None else SearchParameters().node_cap
        self.alpha = order.system.simple_root(i)
        self.visited = set()

    def _key(self, order):
        return order.roots[:order.position(self.alpha) + 1]

    def candidates(self, order):
        p = order.position(self.alpha)
        moves = []
        window = _window_ending_at(order, p)
        if window is not None:
            moves.append(window)
        if p >= 1 and _is_swap(order, p - 1):
            moves.append(BraidMove(p, 2))
        moves.extend(BraidMove(k + 1, 2) for k in range(p - 2, -1, -1) if _is_swap(order, k))
        return moves

    def run(self):
        '''Moves of a plan, or None when alpha_i cannot reach the front.'''
        if self.order.roots[0] == self.alpha:
            return []
        self.visited = {self._key(self.order)}
        stack = [(self.order, iter(self.candidates(self.order)))]
        path = []
        while stack:
            order, pending = stack[-1]
            move = next(pending, None)
            if move is None:
                stack.pop()
                if path:
                    path.pop()
                continue
            try:
                found = apply_move(order, move)
            except IllegalMoveError:
                continue
            key = self._key(found)
            if key in self.visited:
                continue
            self.visited.add(key)
            if len(self.visited) > self.node_cap:
                logger.warning(f"search for node {self.node} on ({format_word(self.order.word)}) hit the node cap")
                raise SearchBudgetExceeded(self.node_cap, len(self.visited))
            path.append(move)
            if found.roots[0] == self.alpha:
                logger.debug(f"plan for node {self.node}: {len(path)} moves, {len(self.visited)} states")
                return list(path)
            stack.append((found, iter(self.candidates(found))))
        return None


def is_simply_braided(order, i, node_cap=None):
    return Search(order, i, node_cap).run() is not None


def _walk_left(order, alpha):
    moves = []
    current = order
    p = current.position(alpha)
    while p > 0:
        move = BraidMove(p, 2) if _is_swap(current, p - 1) else _window_ending_at(current, p)
        if move is None:
            raise PlanError(f"{alpha.compact()} is stuck at position {p + 1}")
        try:
            current = apply_move(current, move)
        except IllegalMoveError as err:
            raise PlanError(str(err)) from err
        moves.append(move)
        p = current.position(alpha)
    return moves


def construct_plan(order, i, enumeration=None):
    '''Plan read off a good enumeration, for orders commutation equivalent to its lex order.

    Commute to the lex order, then to the hybrid that orders the roots before
    alpha_i as the lex order with i moved last, then walk alpha_i left.
    '''
    system = order.system
    enumeration = enumeration if enumeration is not None else order.enumeration
    if enumeration is None or not is_good_enumeration(system, enumeration):
        raise PlanError(f"no good enumeration recorded for ({format_word(order.word)})")
    enumeration = tuple(enumeration)
    alpha = system.simple_root(i)
    lex = lex_order(system, enumeration)
    last = lex_order(system, tuple(j for j in enumeration if j != i) + (i,))
    try:
        moves = list(commutation_path(system, order.word, lex.word).moves)
        hybrid = hybrid_order(last, lex, alpha)
        moves.extend(commutation_path(system, lex.word, hybrid.word).moves)
    except OrderError as err:
        raise PlanError(f"cannot reach the hybrid order for node {i}: {err}") from err
    moves.extend(_walk_left(hybrid, alpha))
    logger.debug(f"constructed plan for node {i} on ({format_word(order.word)}): {len(moves)} moves")
    return BracketPlan.from_moves(order, i, moves)


class PlanCache(object):
    '''Plans per (type, word, node); None is cached for words that are not simply braided.'''

    def __init__(self):
        self._entries = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._entries)

    def clear(self):
        with self._lock:
            self._entries.clear()

    def get_or_build(self, key, build):
        if key in self._entries:
            return self._entries[key]
        value = build()
        with self._lock:
            return self._entries.setdefault(key, value)


default_plan_cache = PlanCache()


def _build_plan(order, i, node_cap):
    if order.enumeration is not None and is_good_enumeration(order.system, order.enumeration):
        try:
            return construct_plan(order, i)
        except PlanError as err:
            logger.warning(f"falling back to search for node {i}: {err}")
    moves = Search(order, i, node_cap).run()
    if moves is None:
        return None
    return BracketPlan.from_moves(order, i, moves)


def plan(order, i, node_cap=None, cache=None):
    '''BracketPlan for node i, or None when the order is not simply braided for i.'''
    if i not in order.system.nodes:
        raise ValueError(f"node {i} is not a node of {order.system}")
    key = (order.system.key, order.word, i)
    cache = cache if cache is not None else default_plan_cache
    return cache.get_or_build(key, lambda: _build_plan(order, i, node_cap))


def good_enumeration_word(tr, enumeration):
    system = as_root_system(tr)
    enumeration = tuple(int(i) for i in enumeration)
    if not is_good_enumeration(system, enumeration):
        raise OrderError(f"({format_word(enumeration)}) is not a good enumeration of {system}")
    return lex_order(system, enumeration)


def canonical_word(tr):
    '''The standard simply braided word of a classical type.'''
    system = as_root_system(tr)
    tr = system.type_rank
    if tr is None or not tr.is_classical:
        raise UnsupportedTypeError(f"no canonical word for {system}")
    n = tr.rank
    word = []
    if tr.letter == "A":
        for k in range(n, 0, -1):
            word.extend(range(1, k + 1))
    elif tr.letter == "D":
        for j in range(1, n - 1):
            word.extend(range(j, n + 1))
            word.extend(range(n - 2, j - 1, -1))
        word.extend((n - 1, n))
    else:
        for j in range(1, n + 1):
            word.extend(range(j, n + 1))
            word.extend(range(n - 1, j - 1, -1))
    return convex_order(system, word, enumeration=system.nodes)


def rank2_eps_jump(system, window, counts, i):
    '''(R, L) of one window: epsilon_i and the jump of the window datum with c_{alpha_i} = 0.'''
    system = as_root_system(system)
    window = tuple(window)
    counts = list(counts[:-1]) + [0]
    if window[-1] != system.simple_root(i):
        raise PlanError(f"window does not end at alpha_{i}")
    epsilon = window_transition(system, window, counts)[0]
    pairing = -sum(c * system.pairing(i, beta) for beta, c in zip(window, counts))
    return epsilon, pairing + epsilon + counts[-1]


def _refined_blocks(sub, c, k):
    r = sub.roots
    if sub.kind == A2:
        beta, mid = r[0], r[1]
        layout = [(CLOSE, c[mid], mid), (OPEN, c[beta], beta)]
    elif sub.kind == B2:
        lg, m1, m2 = r[0], r[1], r[2]
        layout = [(CLOSE, c[m1], m1), (OPEN, 2 * c[lg], lg), (CLOSE, 2 * c[m2], m2), (OPEN, c[m1], m1)]
    else:
        s, m2, m1 = r[0], r[1], r[2]
        layout = [(CLOSE, c[m2], m2), (OPEN, c[s], s), (CLOSE, c[m1], m1), (OPEN, c[m2], m2)]
    return [Block(symbol, count, source=root, segment=k) for symbol, count, root in layout]


@dataclass(frozen=True)
class BracketString(object):
    '''Coarse string of (R, L) blocks per window and the refined per-root string.'''
    blocks: tuple
    refined: tuple
    cancellation: brackets.Cancellation
    refined_cancellation: brackets.Cancellation

    @property
    def text(self):
        return brackets.symbols(self.blocks)

    @property
    def refined_text(self):
        return brackets.symbols(self.refined)

    @property
    def selected_segment(self):
        '''Window index holding the leftmost uncanceled "(", None if there is none.'''
        k = self.cancellation.leftmost_unmatched(self.blocks)
        return None if k is None else self.blocks[k].segment

    @property
    def selected_block(self):
        k = self.refined_cancellation.leftmost_unmatched(self.refined)
        return None if k is None else self.refined[k]

    def render(self):
        return brackets.render(self.refined, lambda block: block.source.compact())


def _check_plan(d, p):
    if p is None:
        raise PlanError(f"no plan: ({format_word(d.order.word)}) is not simply braided for this node")
    if p.order != d.order:
        raise PlanError("plan was built for a different order")


def bracket_string(d, p):
    '''S_i of ``d``: windows from the last move to the first, then c_{alpha_i} closing brackets.'''
    _check_plan(d, p)
    system = d.system
    c = {beta: d.count(beta) for beta in system.positive_roots}
    alpha = system.simple_root(p.node)
    coarse, refined = [], []
    for k in range(len(p.subsystems) - 1, -1, -1):
        sub = p.subsystems[k]
        r, l = rank2_eps_jump(system, sub.roots, [c[beta] for beta in sub.roots], p.node)
        coarse.append(Block(CLOSE, r, source=alpha, segment=k, role="R"))
        coarse.append(Block(OPEN, l, source=alpha, segment=k, role="L"))
        refined.extend(_refined_blocks(sub, c, k))
    final = Block(CLOSE, c[alpha], source=alpha, role="alpha")
    coarse.append(final)
    refined.append(final)
    return BracketString(tuple(coarse), tuple(refined), brackets.cancel(coarse), brackets.cancel(refined))


def _window_update(sub, source, c):
    r = sub.roots
    if sub.kind == A2:
        return {r[0]: -1, r[1]: 1}
    if sub.kind == B2:
        if source == r[0]:
            return {r[0]: -1, r[1]: 1}
        return {r[1]: -1, r[2]: 1}
    s, m2, m1 = r[0], r[1], r[2]
    if source == m2:
        return {m2: -1, m1: 2}
    if c[m1] == c[s] - 1:
        return {s: -1, m1: 1}
    return {s: -2, m2: 1}


def f_bracket(i, d, p):
    '''f_i by the bracketing rule on a simply braided order.'''
    _check_plan(d, p)
    if p.node != i:
        raise PlanError(f"plan is for node {p.node}, not {i}")
    s = bracket_string(d, p)
    counts = list(d.counts)
    block = s.selected_block
    if block is None:
        counts[d.order.position(d.system.simple_root(i))] += 1
        return LusztigDatum(d.order, tuple(counts))
    if block.segment != s.selected_segment:
        raise PlanError("coarse and refined strings select different windows")
    sub = p.subsystems[block.segment]
    c = {beta: d.count(beta) for beta in sub.roots}
    update = _window_update(sub, block.source, c)
    if sub.roots[-1] in update:
        raise PlanError("window update touched alpha_i")
    for beta, delta in update.items():
        counts[d.order.position(beta)] += delta
    return LusztigDatum(d.order, tuple(counts))
