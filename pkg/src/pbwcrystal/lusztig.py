'''Lusztig data on convex orders and their piecewise-linear transition maps.'''
from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np
from numba import njit

from pbwcrystal import brackets
from pbwcrystal.config_schema import DatumRecord
from pbwcrystal.exceptions import DatumError, IllegalMoveError, TransitionError
from pbwcrystal.rootsys import Root, TypeRank
from pbwcrystal.weyl import (COMMUTING, LONG_FIRST, SHORT_FIRST, SL3, apply_move, classify_window,
                             convex_order)

logger = logging.getLogger(__name__)

_REVERSED_KIND = {COMMUTING: COMMUTING, SL3: SL3, LONG_FIRST: SHORT_FIRST, SHORT_FIRST: LONG_FIRST}


class Rank2Transition(object):
    '''Transition kernels of the rank 2 braid moves; outputs are in reversed window order.'''

    @staticmethod
    @njit
    def sl3(a, b, c):
        '''Counts on (beta, beta+gamma, gamma) to counts on (gamma, beta+gamma, beta).'''
        return max(b, c + b - a), min(a, c), max(b, a + b - c)

    @staticmethod
    @njit
    def b2(long_count, mid_short, mid_long, short_count):
        '''Counts on (L, L+S, L+2S, S) to counts on (S, L+2S, L+S, L).'''
        pi1 = min(long_count + mid_short, long_count + short_count, mid_long + short_count)
        pi2 = min(2 * long_count + mid_short, 2 * long_count + short_count, 2 * mid_long + short_count)
        return (mid_short + 2 * mid_long + short_count - pi2,
                pi2 - pi1,
                2 * pi1 - pi2,
                long_count + mid_short + mid_long - pi1)


def _transition(kind, counts):
    if kind == COMMUTING:
        return (counts[1], counts[0])
    if kind == SL3:
        return tuple(int(x) for x in Rank2Transition.sl3(*counts))
    if kind == LONG_FIRST:
        return tuple(int(x) for x in Rank2Transition.b2(*counts))
    # (S, 2S+L, S+L, L) read as the long-first roles
    s, m2, m1, lg = counts
    s_new, m2_new, m1_new, lg_new = Rank2Transition.b2(lg, m1, m2, s)
    return (int(lg_new), int(m1_new), int(m2_new), int(s_new))


def window_transition(system, roots, counts):
    '''Counts on a braid window to counts on the reversed window.'''
    kind = classify_window(system, tuple(roots))
    if kind is None:
        raise TransitionError(f"roots {[Root(b).compact() for b in roots]} do not form a braid window")
    return _transition(kind, tuple(counts))


@dataclass(frozen=True)
class LusztigDatum(object):
    '''A non-negative count for each positive root, aligned with a convex order.'''
    order: object
    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if len(counts) != len(self.order):
            raise DatumError(f"{len(counts)} counts for an order of {len(self.order)} roots")
        if any(c < 0 for c in counts):
            raise DatumError(f"counts must be non-negative, got {counts}")

    @classmethod
    def zero(cls, order):
        return cls(order, (0,) * len(order))

    @property
    def system(self):
        return self.order.system

    def count(self, root):
        return self.counts[self.order.position(root)]

    def with_counts(self, counts):
        return LusztigDatum(self.order, tuple(counts))

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.counts) + ")"


def weight(d):
    '''-sum c_beta beta.'''
    if not any(d.counts):
        return Root.zero(d.system.rank)
    roots = np.array(d.order.roots, dtype=np.int64)
    return Root(-(np.array(d.counts, dtype=np.int64) @ roots))


def transition_move(d, move):
    order = apply_move(d.order, move)
    counts = list(d.counts)
    counts[move.start:move.stop] = window_transition(d.system, d.order.roots[move.start:move.stop],
                                                     counts[move.start:move.stop])
    return LusztigDatum(order, tuple(counts))


class Transport(object):
    '''A braid path resolved once against its orders into window operations.'''

    def __init__(self, source, target, operations):
        self.source = source
        self.target = target
        self.operations = tuple(operations)

    def __len__(self):
        return len(self.operations)

    @classmethod
    def compile(cls, order, path):
        if tuple(path.source) != order.word:
            raise IllegalMoveError("path does not start at the datum's word")
        operations = []
        current = order
        for move in path.moves:
            window = current.roots[move.start:move.stop]
            kind = classify_window(current.system, window) if len(window) == move.arity else None
            if kind is None:
                raise IllegalMoveError(f"no {move.arity}-term move at position {move.position}")
            operations.append((move.start, move.arity, kind))
            current = apply_move(current, move)
        return cls(order, current, operations)

    def apply(self, counts):
        counts = list(counts)
        for start, arity, kind in self.operations:
            counts[start:start + arity] = _transition(kind, counts[start:start + arity])
        return counts

    def inverse(self):
        operations = [(start, arity, _REVERSED_KIND[kind]) for start, arity, kind in reversed(self.operations)]
        return Transport(self.target, self.source, operations)

    def __call__(self, d):
        if d.order != self.source:
            raise IllegalMoveError("datum is not on the transport's source order")
        return LusztigDatum(self.target, tuple(self.apply(d.counts)))


def transition_path(d, path):
    return Transport.compile(d.order, path)(d)


def bracket_transition_B2(counts, long_first=True):
    '''B2 transition by small/large bracket cancellation, reversed window order.

    Long-first counts are on (L, L+S, L+2S, S), short-first on (S, 2S+L, S+L, L).
    '''
    if long_first:
        lg, m1, m2, s = counts
    else:
        s, m2, m1, lg = counts
    blocks = [
        brackets.Block(brackets.CLOSE, m1, role="M1"),
        brackets.Block(brackets.BIG_OPEN, lg, role="L"),
        brackets.Block(brackets.BIG_CLOSE, m2, role="M2"),
        brackets.Block(brackets.OPEN, m1, role="M1"),
        brackets.Block(brackets.CLOSE, s, role="S"),
        brackets.Block(brackets.BIG_OPEN, m2, role="M2"),
    ]
    small = brackets.cancel(blocks)
    big = brackets.cancel(blocks, brackets.BIG_OPEN, brackets.BIG_CLOSE, unmatched=small.unmatched)
    unmatched, singles, doubles = brackets.absorb(blocks, big.unmatched)
    small_pairs = sum(n for _, _, n in small.pairs)
    big_pairs = sum(n for _, _, n in big.pairs)
    lg_new = unmatched[3] + unmatched[1] + unmatched[5]
    m1_new = small_pairs + singles
    m2_new = big_pairs + doubles
    s_new = unmatched[0] + unmatched[4] + 2 * unmatched[2]
    if long_first:
        return (s_new, m2_new, m1_new, lg_new)
    return (lg_new, m1_new, m2_new, s_new)


def datum_to_record(d):
    tr = d.system.type_rank
    if tr is None:
        raise DatumError("only data on a named type can be serialized")
    return DatumRecord(type=tr.letter, rank=tr.rank, word=list(d.order.word), counts=list(d.counts))


def datum_to_json(d):
    return json.dumps(datum_to_record(d).model_dump())


def datum_from_record(record):
    order = convex_order(TypeRank(record.type, record.rank), record.word)
    return LusztigDatum(order, tuple(record.counts))


def datum_from_json(text):
    return datum_from_record(DatumRecord.model_validate_json(text))


def load_datum(path):
    with open(path) as f:
        return datum_from_json(f.read())


def save_datum(d, path):
    with open(path, "w") as f:
        f.write(datum_to_json(d) + "\n")


def kostant_lines(d):
    '''One "<root> x<multiplicity>" line per nonzero count, in convex order.'''
    return [f"{beta.compact()} x{c}" for beta, c in zip(d.order.roots, d.counts) if c]


def kostant_parts(d):
    return [beta.compact() for beta, c in zip(d.order.roots, d.counts) for _ in range(c)]


def parse_kostant(text, order):
    '''Datum on ``order`` from kostant_lines or kostant_parts text; a bare root counts once.'''
    counts = [0] * len(order)
    for line in text.splitlines():
        fields = line.split()
        if not fields:
            continue
        multiplicity = int(fields[1].lstrip("x")) if len(fields) > 1 else 1
        counts[order.position(Root.parse(fields[0], order.system.rank))] += multiplicity
    return LusztigDatum(order, tuple(counts))
