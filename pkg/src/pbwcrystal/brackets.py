'''Strings of bracket blocks and their cancellation.

A block is a run of identical brackets.  Cancellation works on counts, so a
block with a large count costs the same as a block with one bracket.
'''
from __future__ import annotations

from dataclasses import dataclass

OPEN = "("
CLOSE = ")"
BIG_OPEN = "["
BIG_CLOSE = "]"


@dataclass(frozen=True)
class Block(object):
    '''``count`` copies of ``symbol`` with an optional source tag.'''
    symbol: str
    count: int
    source: object = None
    segment: object = None
    role: str = ""

    @property
    def text(self):
        return self.symbol * self.count


@dataclass(frozen=True)
class Cancellation(object):
    '''Unmatched count per block and the matched (open, close, n) block pairs.'''
    unmatched: tuple
    pairs: tuple

    def matched(self, blocks, k):
        return blocks[k].count - self.unmatched[k]

    def leftmost_unmatched(self, blocks, symbol=OPEN):
        return next((k for k, block in enumerate(blocks)
                     if block.symbol == symbol and self.unmatched[k] > 0), None)


def cancel(blocks, open_symbol=OPEN, close_symbol=CLOSE, unmatched=None):
    '''Match every open bracket with the nearest unmatched close bracket to its right.

    Blocks of other symbols are transparent.  ``unmatched`` lets a second pass
    start from the leftovers of an earlier one.
    '''
    unmatched = [block.count for block in blocks] if unmatched is None else list(unmatched)
    pairs = []
    pending = []
    for k in range(len(blocks) - 1, -1, -1):
        block = blocks[k]
        if block.symbol == close_symbol and unmatched[k]:
            pending.append(k)
        elif block.symbol == open_symbol:
            while unmatched[k] and pending:
                top = pending[-1]
                n = min(unmatched[k], unmatched[top])
                unmatched[k] -= n
                unmatched[top] -= n
                pairs.append((k, top, n))
                if not unmatched[top]:
                    pending.pop()
    return Cancellation(tuple(unmatched), tuple(pairs))


def absorb(blocks, unmatched, open_symbol=BIG_OPEN, close_symbol=CLOSE):
    '''Let each leftover big open bracket cancel one or two close brackets to its right.

    The split maximizes the number of brackets cancelled.  Returns the new
    unmatched counts and the totals of single and double absorptions.
    '''
    unmatched = list(unmatched)
    singles = doubles = 0
    for k in range(len(blocks) - 1, -1, -1):
        if blocks[k].symbol != open_symbol or not unmatched[k]:
            continue
        closes = [j for j in range(k + 1, len(blocks)) if blocks[j].symbol == close_symbol]
        x, y = unmatched[k], sum(unmatched[j] for j in closes)
        if y >= 2 * x:
            t1, t2 = 0, x
        elif y >= x:
            t1, t2 = 2 * x - y, y - x
        else:
            t1, t2 = y, 0
        unmatched[k] -= t1 + t2
        take = t1 + 2 * t2
        for j in closes:
            n = min(take, unmatched[j])
            unmatched[j] -= n
            take -= n
        singles += t1
        doubles += t2
    return unmatched, singles, doubles


def symbols(blocks):
    return "".join(block.text for block in blocks)


def render(blocks, label):
    '''Two lines: the brackets, and ``label(block)`` under each nonempty block.'''
    top, bottom = [], []
    for block in blocks:
        if not block.count:
            continue
        text, tag = block.text, label(block)
        width = max(len(text), len(tag))
        top.append(text.ljust(width))
        bottom.append(tag.ljust(width))
    return " ".join(top).rstrip() + "\n" + " ".join(bottom).rstrip()
