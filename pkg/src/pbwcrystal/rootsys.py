'''Exact root system arithmetic for finite types.

Roots are integer vectors over the simple roots, nodes are numbered
following Bourbaki and are 1-based everywhere in the public API.
The Cartan convention is a_ij = <alpha_i^vee, alpha_j>.
'''
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np

from pbwcrystal.exceptions import InvalidTypeError, UnsupportedTypeError

logger = logging.getLogger(__name__)

# letter -> (min rank, max rank or None)
RANK_BOUNDS = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (3, None),
    "E": (6, 8),
    "F": (4, 4),
}
CLASSICAL = frozenset("ABCD")
BRAID_ORDERS = {0: 2, 1: 3, 2: 4}

_TYPE_PATTERN = re.compile(r"^\s*([A-Za-z])\s*(\d+)\s*$")


class Root(tuple):
    '''Element of the root lattice as coefficients over the simple roots.

    ``+`` and ``-`` act coordinatewise, not as tuple concatenation.
    '''
    __slots__ = ()

    def __new__(cls, coeffs):
        return super().__new__(cls, (int(c) for c in coeffs))

    def __add__(self, other):
        return Root(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return Root(a - b for a, b in zip(self, other))

    def __neg__(self):
        return Root(-a for a in self)

    def __repr__(self):
        return f"Root({self.compact()})"

    def scaled(self, k):
        return Root(k * a for a in self)

    @property
    def height(self):
        return sum(self)

    def is_zero(self):
        return not any(self)

    def is_positive(self):
        return all(a >= 0 for a in self) and any(a > 0 for a in self)

    def dotted(self):
        '''Render as "c1.c2.....cn".'''
        return ".".join(str(a) for a in self)

    def compact(self):
        '''Render as the digit multiset, e.g. "12234" for a1+2a2+a3+a4.'''
        if len(self) > 9:
            return self.dotted()
        if self.is_positive():
            return "".join(str(i + 1) * a for i, a in enumerate(self))
        if (-self).is_positive():
            return "-" + (-self).compact()
        if self.is_zero():
            return "0"
        return self.dotted()

    @classmethod
    def zero(cls, rank):
        return cls([0] * rank)

    @classmethod
    def simple(cls, i, rank):
        if not 1 <= i <= rank:
            raise ValueError(f"node {i} out of range 1..{rank}")
        return cls(1 if k == i - 1 else 0 for k in range(rank))

    @classmethod
    def parse(cls, text, rank):
        '''Parse either the dotted or the compact rendering.'''
        text = text.strip()
        if not text:
            raise ValueError("empty root string")
        if text.startswith("-"):
            return -cls.parse(text[1:], rank)
        if "." in text or rank > 9:
            parts = text.split(".")
            if len(parts) != rank:
                raise ValueError(f"root {text!r} does not have {rank} coefficients")
            return cls(int(p) for p in parts)
        if text == "0":
            return cls.zero(rank)
        coeffs = [0] * rank
        for ch in text:
            if not ch.isdigit() or not 1 <= int(ch) <= rank:
                raise ValueError(f"root {text!r} names a node outside 1..{rank}")
            coeffs[int(ch) - 1] += 1
        return cls(coeffs)


@dataclass(frozen=True)
class TypeRank(object):
    '''A Cartan type letter with its rank, e.g. D4.'''
    letter: str
    rank: int

    def __post_init__(self):
        letter = str(self.letter).upper()
        object.__setattr__(self, "letter", letter)
        if letter == "G":
            raise UnsupportedTypeError("type G2 needs 6-term braid moves and is not supported")
        if letter not in RANK_BOUNDS:
            raise InvalidTypeError(f"unknown type letter {self.letter!r}")
        if not isinstance(self.rank, (int, np.integer)):
            raise InvalidTypeError(f"rank must be an integer, got {self.rank!r}")
        low, high = RANK_BOUNDS[letter]
        if self.rank < low or (high is not None and self.rank > high):
            bound = f"{low}..{high}" if high is not None else f">= {low}"
            raise InvalidTypeError(f"type {letter} needs rank {bound}, got {self.rank}")

    @classmethod
    def parse(cls, text):
        match = _TYPE_PATTERN.match(str(text))
        if match is None:
            raise InvalidTypeError(f"cannot parse type {text!r}; expected e.g. 'B3'")
        return cls(match.group(1), int(match.group(2)))

    @property
    def is_classical(self):
        return self.letter in CLASSICAL

    def __str__(self):
        return f"{self.letter}{self.rank}"


def _solve_symmetrizers(rows):
    '''Smallest positive integers d with d_i a_ij = d_j a_ji, per connected component.'''
    n = len(rows)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        component = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and rows[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * rows[i][j] / rows[j][i]
                    component.append(j)
                    stack.append(j)
        scale = lcm(*(d[k].denominator for k in component))
        ints = [int(d[k] * scale) for k in component]
        common = gcd(*ints)
        for k, value in zip(component, ints):
            d[k] = Fraction(value // common)
    return tuple(int(x) for x in d)


@dataclass(frozen=True)
class CartanData(object):
    '''Cartan matrix A = (a_ij) with symmetrizers d_i (d_i a_ij = d_j a_ji).'''
    cartan: tuple
    symmetrizers: tuple

    def __post_init__(self):
        n = len(self.cartan)
        if len(self.symmetrizers) != n or any(len(row) != n for row in self.cartan):
            raise ValueError("Cartan matrix must be square and match the symmetrizers")
        for i in range(n):
            if self.cartan[i][i] != 2:
                raise ValueError(f"a_{i + 1}{i + 1} must be 2")
            for j in range(n):
                if i != j and self.cartan[i][j] > 0:
                    raise ValueError(f"a_{i + 1}{j + 1} must be <= 0")
                if self.symmetrizers[i] * self.cartan[i][j] != self.symmetrizers[j] * self.cartan[j][i]:
                    raise ValueError(f"symmetrizers do not symmetrize entry ({i + 1},{j + 1})")

    @classmethod
    def from_matrix(cls, matrix):
        rows = tuple(tuple(int(a) for a in row) for row in matrix)
        return cls(rows, _solve_symmetrizers(rows))

    @property
    def rank(self):
        return len(self.cartan)

    @property
    def matrix(self):
        return np.array(self.cartan, dtype=np.int64)


def _bourbaki_matrix(tr):
    n = tr.rank
    a = 2 * np.eye(n, dtype=np.int64)

    def join(i, j, a_ij=-1, a_ji=-1):
        a[i - 1, j - 1] = a_ij
        a[j - 1, i - 1] = a_ji

    if tr.letter in "ABC":
        for k in range(1, n):
            join(k, k + 1)
        if tr.letter == "B":
            join(n - 1, n, -1, -2)
        elif tr.letter == "C":
            join(n - 1, n, -2, -1)
    elif tr.letter == "D":
        for k in range(1, n - 1):
            join(k, k + 1)
        join(n - 2, n)
    elif tr.letter == "E":
        join(1, 3)
        join(2, 4)
        for k in range(3, n):
            join(k, k + 1)
    elif tr.letter == "F":
        join(1, 2)
        join(2, 3, -1, -2)
        join(3, 4)
    return a


def cartan_data(tr):
    '''Bourbaki Cartan matrix of ``tr`` with min d_i = 1.'''
    tr = tr if isinstance(tr, TypeRank) else TypeRank.parse(tr)
    return CartanData.from_matrix(_bourbaki_matrix(tr))


class RootSystem(object):
    '''Positive roots, reflections and the invariant form of a finite root system.

    ``labels`` records the ambient node label of each local node when the
    system is a sub-diagram built by ``restrict``.
    '''

    def __init__(self, cartan, type_rank=None, labels=None):
        self.cartan = cartan
        self.type_rank = type_rank
        self.rank = cartan.rank
        self.nodes = tuple(range(1, self.rank + 1))
        self.labels = tuple(labels) if labels is not None else self.nodes
        self.matrix = cartan.matrix
        self.form = np.diag(np.array(cartan.symmetrizers, dtype=np.int64)) @ self.matrix
        self._rows = cartan.cartan
        self._form_rows = tuple(tuple(int(x) for x in row) for row in self.form)
        for i in self.nodes:
            for j in self.nodes:
                if i != j:
                    self.braid_order(i, j)
        self.positive_roots = self._generate()
        self.index = {beta: k for k, beta in enumerate(self.positive_roots)}
        logger.debug(f"generated {len(self.positive_roots)} positive roots for {self}")

    def __repr__(self):
        return f"RootSystem({self})"

    def __str__(self):
        if self.type_rank is not None:
            return str(self.type_rank)
        return f"rank {self.rank} on nodes {self.labels}"

    def __eq__(self, other):
        return isinstance(other, RootSystem) and (self.cartan, self.labels) == (other.cartan, other.labels)

    def __hash__(self):
        return hash((self.cartan, self.labels))

    @property
    def key(self):
        return str(self.type_rank) if self.type_rank is not None else (self.cartan.cartan, self.labels)

    @property
    def N(self):
        return len(self.positive_roots)

    def simple_root(self, i):
        return Root.simple(i, self.rank)

    def is_root(self, beta):
        return beta in self.index or (-beta) in self.index

    def pairing(self, i, beta):
        '''<alpha_i^vee, beta>.'''
        return sum(a * b for a, b in zip(self._rows[i - 1], beta))

    def bilinear(self, beta, gamma):
        '''(beta|gamma) with (alpha_i|alpha_j) = d_i a_ij.'''
        return sum(b * sum(f * g for f, g in zip(row, gamma)) for b, row in zip(beta, self._form_rows))

    def norm(self, beta):
        return self.bilinear(beta, beta)

    def reflect(self, i, beta):
        return beta - self.simple_root(i).scaled(self.pairing(i, beta))

    def braid_order(self, i, j):
        '''Order m(i, j) of s_i s_j; 1 when i == j.'''
        if i == j:
            return 1
        product = self._rows[i - 1][j - 1] * self._rows[j - 1][i - 1]
        if product not in BRAID_ORDERS:
            raise UnsupportedTypeError(f"nodes {i}, {j} need a {2 * product}-term braid relation")
        return BRAID_ORDERS[product]

    def neighbours(self, i):
        return tuple(j for j in self.nodes if j != i and self._rows[i - 1][j - 1] != 0)

    def _generate(self):
        seen = {self.simple_root(i) for i in self.nodes}
        frontier = list(seen)
        while frontier:
            found = []
            for beta in frontier:
                for i in self.nodes:
                    gamma = self.reflect(i, beta)
                    if gamma.is_positive() and gamma not in seen:
                        seen.add(gamma)
                        found.append(gamma)
            frontier = found
        return tuple(sorted(seen, key=lambda b: (b.height, tuple(b))))

    def restrict(self, nodes):
        '''Root system of the sub-diagram on ``nodes`` (local numbering, labels kept).'''
        nodes = sorted(nodes)
        sub = [[self._rows[i - 1][j - 1] for j in nodes] for i in nodes]
        return RootSystem(CartanData.from_matrix(sub), labels=[self.labels[k - 1] for k in nodes])


@lru_cache(maxsize=None)
def root_system(tr):
    tr = tr if isinstance(tr, TypeRank) else TypeRank.parse(tr)
    return RootSystem(cartan_data(tr), type_rank=tr)


def as_root_system(obj):
    '''Accept a RootSystem, a TypeRank or a string such as "C3".'''
    if isinstance(obj, RootSystem):
        return obj
    return root_system(obj if isinstance(obj, TypeRank) else TypeRank.parse(obj))


def positive_roots(tr):
    return list(as_root_system(tr).positive_roots)


def reflect(tr, i, beta):
    return as_root_system(tr).reflect(i, Root(beta))


def pairing(tr, i, beta):
    return as_root_system(tr).pairing(i, Root(beta))


def bilinear(tr, beta, gamma):
    return as_root_system(tr).bilinear(Root(beta), Root(gamma))


def minuscule_nodes(tr):
    '''Nodes whose fundamental weight is minuscule.'''
    tr = tr if isinstance(tr, TypeRank) else TypeRank.parse(tr)
    n = tr.rank
    table = {
        "A": set(range(1, n + 1)),
        "B": {n},
        "C": {1},
        "D": {1, n - 1, n},
        "E": {6: {1, 6}, 7: {7}, 8: set()}.get(n, set()),
        "F": set(),
    }
    return frozenset(table[tr.letter])


def cominuscule_nodes(tr):
    '''Minuscule nodes of the dual type.'''
    tr = tr if isinstance(tr, TypeRank) else TypeRank.parse(tr)
    dual = {"B": "C", "C": "B"}.get(tr.letter, tr.letter)
    return minuscule_nodes(TypeRank(dual, tr.rank))
