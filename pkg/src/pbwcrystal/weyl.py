'''Reduced words of w0, convex orders on the positive roots and braid moves.

Words are tuples of 1-based node indices.  A ``ConvexOrder`` pairs a reduced
word of w0 with the roots beta_k = s_{i_1}...s_{i_{k-1}} alpha_{i_k}.
'''
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from pbwcrystal.exceptions import IllegalMoveError, InvalidWordError, OrderError
from pbwcrystal.rootsys import Root, as_root_system

logger = logging.getLogger(__name__)

# window kinds, see classify_window
COMMUTING = "commuting"
SL3 = "sl3"
LONG_FIRST = "long_first"
SHORT_FIRST = "short_first"


def parse_word(text):
    '''"1,3,2" -> (1, 3, 2).'''
    text = str(text).strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.replace(" ", ",").split(",") if part)
    except ValueError as err:
        raise InvalidWordError(f"cannot parse word {text!r}") from err


def format_word(word):
    return ",".join(str(i) for i in word)


@lru_cache(maxsize=None)
def _reflection_matrices(system):
    matrices = {}
    for i in system.nodes:
        s = np.eye(system.rank, dtype=np.int64)
        s[i - 1, :] -= system.matrix[i - 1, :]
        matrices[i] = s
    return matrices


class WeylElement(object):
    '''Weyl group element as an integer matrix whose column j is the image of alpha_j.'''

    def __init__(self, matrix, inverse=None):
        self.matrix = np.asarray(matrix, dtype=np.int64)
        if inverse is None:
            inverse = np.rint(np.linalg.inv(self.matrix)).astype(np.int64)
        self.inverse_matrix = np.asarray(inverse, dtype=np.int64)

    @classmethod
    def identity(cls, system):
        eye = np.eye(system.rank, dtype=np.int64)
        return cls(eye, eye)

    @classmethod
    def reflection(cls, system, i):
        s = _reflection_matrices(system)[i]
        return cls(s, s)

    @classmethod
    def from_word(cls, system, word):
        matrices = _reflection_matrices(system)
        m = np.eye(system.rank, dtype=np.int64)
        inv = np.eye(system.rank, dtype=np.int64)
        for i in word:
            m = m @ matrices[i]
            inv = matrices[i] @ inv
        return cls(m, inv)

    @property
    def inverse(self):
        return WeylElement(self.inverse_matrix, self.matrix)

    def __matmul__(self, other):
        return WeylElement(self.matrix @ other.matrix, other.inverse_matrix @ self.inverse_matrix)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def apply(self, beta):
        return Root(self.matrix @ np.asarray(beta, dtype=np.int64))

    def length(self, system):
        return sum(1 for beta in system.positive_roots if not self.apply(beta).is_positive())


@dataclass(frozen=True)
class ConvexOrder(object):
    '''A reduced word of w0 together with its induced order on the positive roots.

    ``enumeration`` is set when the order was built from an enumeration of the
    nodes (lexicographic or canonical words); it never takes part in equality.
    '''
    system: object = field(repr=False)
    word: tuple
    roots: tuple = field(repr=False)
    enumeration: tuple = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.word)

    @cached_property
    def positions(self):
        return {beta: k for k, beta in enumerate(self.roots)}

    def position(self, root):
        '''0-based position of ``root`` in the order.'''
        try:
            return self.positions[Root(root)]
        except KeyError:
            raise OrderError(f"{Root(root).compact()} is not a positive root of {self.system}") from None

    def compact(self):
        return [beta.compact() for beta in self.roots]

    def __str__(self):
        return " ".join(self.compact())


@dataclass(frozen=True)
class BraidMove(object):
    '''Braid relation applied to the window starting at 1-based ``position``.'''
    position: int
    arity: int

    @property
    def start(self):
        return self.position - 1

    @property
    def stop(self):
        return self.position - 1 + self.arity


@dataclass(frozen=True)
class BraidPath(object):
    source: tuple
    target: tuple
    moves: tuple

    def __len__(self):
        return len(self.moves)

    def reversed(self):
        return BraidPath(self.target, self.source, tuple(reversed(self.moves)))


def _check_letters(system, word):
    for i in word:
        if not 1 <= i <= system.rank:
            raise InvalidWordError(f"letter {i} is not a node of {system}")


def _word_roots(system, word):
    '''Roots beta_k of ``word``; None once a prefix stops being reduced.'''
    m = np.eye(system.rank, dtype=np.int64)
    roots = []
    for i in word:
        beta = Root(m[:, i - 1])
        if not beta.is_positive():
            return None
        roots.append(beta)
        m = m - np.outer(m[:, i - 1], system.matrix[i - 1, :])
    return roots


def is_reduced(tr, word):
    system = as_root_system(tr)
    word = tuple(word)
    if any(not 1 <= i <= system.rank for i in word):
        return False
    return _word_roots(system, word) is not None


def left_descents(tr, w):
    '''Nodes i with w^{-1} alpha_i negative.'''
    system = as_root_system(tr)
    inv = w.inverse
    return {i for i in system.nodes if not inv.apply(system.simple_root(i)).is_positive()}


def reduced_word(tr, w):
    '''Reduced word of ``w`` by repeatedly stripping its smallest left descent.'''
    system = as_root_system(tr)
    letters = []
    while True:
        descents = left_descents(system, w)
        if not descents:
            return tuple(letters)
        i = min(descents)
        letters.append(i)
        w = WeylElement.reflection(system, i) @ w


def longest_word(tr):
    '''Reduced word of w0, always extending by the smallest possible node.'''
    system = as_root_system(tr)
    m = np.eye(system.rank, dtype=np.int64)
    word = []
    while True:
        step = next((i for i in system.nodes if Root(m[:, i - 1]).is_positive()), None)
        if step is None:
            return tuple(word)
        word.append(step)
        m = m - np.outer(m[:, step - 1], system.matrix[step - 1, :])


def _longest_word_checked(system, word):
    word = tuple(int(i) for i in word)
    _check_letters(system, word)
    if len(word) != system.N or _word_roots(system, word) is None:
        raise InvalidWordError(f"({format_word(word)}) is not a reduced word of w0 in {system}")
    return word


def convex_order(tr, word, enumeration=None):
    '''Convex order attached to a reduced word of w0.'''
    system = as_root_system(tr)
    word = _longest_word_checked(system, word)
    return ConvexOrder(system, word, tuple(_word_roots(system, word)), enumeration)


def word_of_order(tr, roots):
    '''Recover the reduced word whose convex order is ``roots``.'''
    system = as_root_system(tr)
    roots = tuple(Root(beta) for beta in roots)
    if len(roots) != system.N or set(roots) != set(system.positive_roots):
        raise OrderError(f"sequence does not enumerate the {system.N} positive roots of {system}")
    matrices = _reflection_matrices(system)
    inverse = np.eye(system.rank, dtype=np.int64)
    word = []
    for k, beta in enumerate(roots):
        gamma = Root(inverse @ np.asarray(beta, dtype=np.int64))
        if gamma.height != 1 or not gamma.is_positive():
            raise OrderError(f"{beta.compact()} at position {k + 1} is not realizable")
        i = gamma.index(1) + 1
        word.append(i)
        inverse = matrices[i] @ inverse
    return tuple(word)


def _check_enumeration(system, enumeration):
    enumeration = tuple(int(i) for i in enumeration)
    if sorted(enumeration) != list(system.nodes):
        raise ValueError(f"({format_word(enumeration)}) is not an enumeration of the nodes of {system}")
    return enumeration


def _leading_node(beta, enumeration):
    return next(i for i in enumeration if beta[i - 1] != 0)


def lex_order(tr, enumeration):
    '''Convex order sorting roots by their first nonzero coefficient, then by ratios.'''
    system = as_root_system(tr)
    enumeration = _check_enumeration(system, enumeration)

    def key(beta):
        coeffs = [beta[i - 1] for i in enumeration]
        first = next(k for k, c in enumerate(coeffs) if c)
        return first, tuple(Fraction(c, coeffs[first]) for c in coeffs[first + 1:])

    roots = tuple(sorted(system.positive_roots, key=key))
    return ConvexOrder(system, word_of_order(system, roots), roots, enumeration)


def hybrid_order(o1, o2, beta):
    '''Roots of o1 before position of beta in o2, then o2 from beta on.

    Requires the roots preceding beta in o2 to be exactly the first roots of o1.
    '''
    k = o2.position(beta)
    if set(o1.roots[:k]) != set(o2.roots[:k]):
        raise OrderError(f"prefixes before {Root(beta).compact()} differ between the two orders")
    order = convex_order(o1.system, o1.word[:k] + o2.word[k:])
    if order.roots != o1.roots[:k] + o2.roots[k:]:
        raise OrderError("hybrid word does not realize the hybrid order")
    return order


def is_convex(tr, roots):
    '''Every summing pair has its sum strictly between the two summands.'''
    system = as_root_system(tr)
    roots = [Root(beta) for beta in roots]
    if len(roots) != system.N or set(roots) != set(system.positive_roots):
        return False
    position = {beta: k for k, beta in enumerate(roots)}
    for a, b in itertools.combinations(roots, 2):
        total = a + b
        if total in position:
            low, high = sorted((position[a], position[b]))
            if not low < position[total] < high:
                return False
    return True


def classify_window(system, roots):
    '''Kind of braid move whose roots are ``roots`` in order, or None.'''
    if len(roots) == 2:
        return COMMUTING if system.bilinear(roots[0], roots[1]) == 0 else None
    if len(roots) == 3:
        x, y, z = roots
        n = system.norm(x)
        if y == x + z and system.norm(z) == n and 2 * system.bilinear(x, z) == -n:
            return SL3
        return None
    if len(roots) == 4:
        w0, w1, w2, w3 = roots
        n0, n3 = system.norm(w0), system.norm(w3)
        if n0 == 2 * n3 and w1 == w0 + w3 and w2 == w0 + w3.scaled(2):
            return LONG_FIRST
        if n3 == 2 * n0 and w1 == w0.scaled(2) + w3 and w2 == w0 + w3:
            return SHORT_FIRST
    return None


def available_moves(tr, order):
    '''Every 2, 3 or 4 term move the roots of ``order`` allow.'''
    system, roots = as_root_system(tr), order.roots
    moves = []
    for k in range(len(roots) - 1):
        for arity in (2, 3, 4):
            if k + arity <= len(roots) and classify_window(system, roots[k:k + arity]) is not None:
                moves.append(BraidMove(k + 1, arity))
    return moves


def _move_letters(system, word, move):
    k, m = move.start, move.arity
    if k < 0 or move.stop > len(word):
        raise IllegalMoveError(f"move at {move.position} of arity {m} leaves the word")
    a, b = word[k], word[k + 1]
    if a == b or system.braid_order(a, b) != m:
        raise IllegalMoveError(f"letters {a},{b} at position {move.position} admit no {m}-term move")
    if any(word[k + t] != (a if t % 2 == 0 else b) for t in range(m)):
        raise IllegalMoveError(f"window at position {move.position} does not alternate")
    flipped = tuple(b if t % 2 == 0 else a for t in range(m))
    return word[:k] + flipped + word[move.stop:]


def apply_move(order, move):
    '''Apply a braid move; the affected window of roots is reversed.'''
    window = order.roots[move.start:move.stop]
    if move.start < 0 or len(window) != move.arity or classify_window(order.system, window) is None:
        raise IllegalMoveError(f"no {move.arity}-term move at position {move.position}")
    word = _move_letters(order.system, order.word, move)
    roots = order.roots[:move.start] + tuple(reversed(window)) + order.roots[move.stop:]
    return ConvexOrder(order.system, word, roots)


def replay(order, moves):
    for move in moves:
        order = apply_move(order, move)
    return order


def _alternating(a, b, m):
    return tuple(a if t % 2 == 0 else b for t in range(m))


def _connect(system, u, v):
    '''Moves turning u into v, two reduced words of one element.'''
    moves = []
    current = tuple(u)
    for k in range(len(v)):
        if current[k] != v[k]:
            sub, suffix = _raise_letter(system, current[k:], v[k])
            moves.extend(BraidMove(move.position + k, move.arity) for move in sub)
            current = current[:k] + suffix
    return moves, current


def _raise_letter(system, word, b):
    '''Moves bringing the left descent b to the front of ``word``.'''
    a = word[0]
    if a == b:
        return [], tuple(word)
    m = system.braid_order(a, b)
    head = _alternating(a, b, m)
    rest = WeylElement.from_word(system, head).inverse @ WeylElement.from_word(system, word)
    target = head + reduced_word(system, rest)
    if len(target) != len(word):
        raise InvalidWordError(f"{b} is not a left descent of ({format_word(word)})")
    moves, current = _connect(system, word, target)
    front = BraidMove(1, m)
    moves.append(front)
    return moves, _move_letters(system, current, front)


def connect(tr, u, v):
    '''Braid path between two reduced words of w0.'''
    system = as_root_system(tr)
    u = _longest_word_checked(system, u)
    v = _longest_word_checked(system, v)
    moves, end = _connect(system, u, v)
    assert end == v
    return BraidPath(u, v, tuple(moves))


def to_front(tr, word, i):
    '''Path to a word of w0 starting with i.'''
    system = as_root_system(tr)
    word = _longest_word_checked(system, word)
    moves, target = _raise_letter(system, word, i)
    return BraidPath(word, target, tuple(moves))


def diagram_involution(tr):
    '''{i: j} with -w0 alpha_i = alpha_j.'''
    system = as_root_system(tr)
    w0 = WeylElement.from_word(system, longest_word(system))
    images = {-w0.apply(system.simple_root(i)): i for i in system.nodes}
    return {i: images[system.simple_root(i)] for i in system.nodes}


def to_back(tr, word, i):
    '''Path to a word of w0 whose last root is alpha_i.

    The last root of a word ending in j is alpha of the involution of j, so the
    letter raised on the reversed word is the image of i.
    '''
    system = as_root_system(tr)
    word = _longest_word_checked(system, word)
    if i not in system.nodes:
        raise InvalidWordError(f"letter {i} is not a node of {system}")
    moves, target = _raise_letter(system, tuple(reversed(word)), diagram_involution(system)[i])
    n = len(word)
    mirrored = tuple(BraidMove(n - move.position - move.arity + 2, move.arity) for move in moves)
    return BraidPath(word, tuple(reversed(target)), mirrored)


def commutation_path(tr, u, v):
    '''Path of 2-term moves between commutation equivalent words.'''
    system = as_root_system(tr)
    current = list(u)
    moves = []
    for k, letter in enumerate(v):
        try:
            j = current.index(letter, k)
        except ValueError:
            raise OrderError(f"({format_word(u)}) and ({format_word(v)}) are not commutation equivalent") from None
        for t in range(j, k, -1):
            if system.braid_order(current[t - 1], current[t]) != 2:
                raise OrderError(f"({format_word(u)}) and ({format_word(v)}) are not commutation equivalent")
            current[t - 1], current[t] = current[t], current[t - 1]
            moves.append(BraidMove(t, 2))
    return BraidPath(tuple(u), tuple(v), tuple(moves))


def tau_factor(tr, enumeration):
    '''Blocks of the lex order word, one per node of the enumeration.'''
    system = as_root_system(tr)
    order = lex_order(system, enumeration)
    enumeration = order.enumeration
    blocks = []
    for node, group in itertools.groupby(zip(order.word, order.roots),
                                         key=lambda pair: _leading_node(pair[1], enumeration)):
        blocks.append((node, tuple(letter for letter, _ in group)))
    if [node for node, _ in blocks] != list(enumeration):
        raise OrderError("lex order blocks are not contiguous")
    return [block for _, block in blocks]


def _prefix_then(enumeration, stops):
    '''enumeration = (1, 2, ..., k, x, ...) with x the first member of ``stops``.'''
    p = next(k for k, i in enumerate(enumeration) if i in stops)
    return enumeration[:p] == tuple(range(1, p + 1))


_E6_AS_D5 = {
    1: {6: 1, 5: 2, 4: 3, 2: 4, 3: 5},
    6: {1: 1, 3: 2, 4: 3, 2: 4, 5: 5},
}


def is_good_enumeration(tr, enumeration):
    '''Type-wise classification of good enumerations.'''
    system = as_root_system(tr)
    enumeration = tuple(enumeration)
    if sorted(enumeration) != list(system.nodes):
        return False
    tr = system.type_rank
    if tr is None:
        return good_enumeration_by_oracle(system, enumeration)
    n = tr.rank
    if tr.letter == "A":
        return True
    if tr.letter in "BC":
        return _prefix_then(enumeration, {n})
    if tr.letter == "D":
        return _prefix_then(enumeration, {n - 1, n})
    if tr.letter == "E" and n in (6, 7):
        if n == 7:
            if enumeration[0] != 7:
                return False
            enumeration = enumeration[1:]
        relabel = _E6_AS_D5.get(enumeration[0])
        if relabel is None:
            return False
        return _prefix_then(tuple(relabel[i] for i in enumeration[1:]), {4, 5})
    return False


def _letter_moves(system, word):
    for k in range(len(word) - 1):
        a, b = word[k], word[k + 1]
        if a == b:
            continue
        m = system.braid_order(a, b)
        if k + m <= len(word) and all(word[k + t] == (a if t % 2 == 0 else b) for t in range(m)):
            yield BraidMove(k + 1, m)


def reduced_words(tr, word):
    '''All reduced words of the element of ``word`` (closure under braid moves).'''
    system = as_root_system(tr)
    seen = {tuple(word)}
    stack = [tuple(word)]
    while stack:
        current = stack.pop()
        for move in _letter_moves(system, current):
            nxt = _move_letters(system, current, move)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def commutation_classes(tr, word):
    system = as_root_system(tr)
    remaining = set(reduced_words(system, word))
    classes = []
    while remaining:
        start = min(remaining)
        component = {start}
        stack = [start]
        while stack:
            current = stack.pop()
            for move in _letter_moves(system, current):
                if move.arity == 2:
                    nxt = _move_letters(system, current, move)
                    if nxt not in component:
                        component.add(nxt)
                        stack.append(nxt)
        classes.append(frozenset(component))
        remaining -= component
    return classes


def is_braidless(tr, i):
    '''Oracle: the minimal coset word tau^i has a single commutation class.'''
    system = as_root_system(tr)
    enumeration = (i,) + tuple(j for j in system.nodes if j != i)
    return len(commutation_classes(system, tau_factor(system, enumeration)[0])) == 1


def good_enumeration_by_oracle(tr, enumeration):
    '''Each node braidless in the sub-diagram of itself and the nodes after it.'''
    system = as_root_system(tr)
    enumeration = _check_enumeration(system, enumeration)
    for k, head in enumerate(enumeration):
        sub = system.restrict(enumeration[k:])
        if not is_braidless(sub, sorted(enumeration[k:]).index(head) + 1):
            return False
    return True


def random_reduced_word(tr, rng, steps=50, start=None):
    '''Seeded random walk over braid moves, from longest_word by default.'''
    system = as_root_system(tr)
    word = tuple(start) if start is not None else longest_word(system)
    for _ in range(steps):
        moves = list(_letter_moves(system, word))
        if not moves:
            break
        word = _move_letters(system, word, moves[int(rng.integers(len(moves)))])
    return word
