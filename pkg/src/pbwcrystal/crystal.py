'''Crystal operators of B(infinity) on Lusztig data, computed by braid-path transport.

f_i moves alpha_i to the front of the order, adds one to its count and moves
back.  The starred operators do the same at the back of the order.  e_i and
e_i^* return None when the transported count is zero.
'''
from __future__ import annotations

import json
import logging
import threading

import networkx as nx

from pbwcrystal.lusztig import LusztigDatum, Transport, weight
from pbwcrystal.rootsys import as_root_system
from pbwcrystal.weyl import convex_order, format_word, longest_word, to_back, to_front

logger = logging.getLogger(__name__)

FRONT = "front"
BACK = "back"


class PathCache(object):
    '''Compiled transports per (type, word, node, side).

    Lookups take no lock; inserts go through the lock and keep the first entry,
    so concurrent callers always see one transport per key.
    '''

    def __init__(self):
        self._entries = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._entries)

    def clear(self):
        with self._lock:
            self._entries.clear()

    def transports(self, order, i, side):
        '''(forward, backward) transports between ``order`` and alpha_i at ``side``.'''
        key = (order.system.key, order.word, i, side)
        found = self._entries.get(key)
        if found is not None:
            return found
        if i not in order.system.nodes:
            raise ValueError(f"node {i} is not a node of {order.system}")
        path = (to_front if side == FRONT else to_back)(order.system, order.word, i)
        forward = Transport.compile(order, path)
        logger.debug(f"compiled {side} transport for node {i} on ({format_word(order.word)}): {len(path)} moves")
        with self._lock:
            return self._entries.setdefault(key, (forward, forward.inverse()))


default_cache = PathCache()


def _transports(d, i, side, cache):
    # an empty PathCache is falsy
    return (cache if cache is not None else default_cache).transports(d.order, i, side)


def _shift(d, i, side, delta, cache):
    forward, backward = _transports(d, i, side, cache)
    counts = forward.apply(d.counts)
    k = 0 if side == FRONT else -1
    if counts[k] + delta < 0:
        return None
    counts[k] += delta
    return LusztigDatum(d.order, tuple(backward.apply(counts)))


def _edge_count(d, i, side, cache):
    forward, _ = _transports(d, i, side, cache)
    return forward.apply(d.counts)[0 if side == FRONT else -1]


def f(i, d, cache=None):
    return _shift(d, i, FRONT, 1, cache)


def e(i, d, cache=None):
    return _shift(d, i, FRONT, -1, cache)


def fstar(i, d, cache=None):
    return _shift(d, i, BACK, 1, cache)


def estar(i, d, cache=None):
    return _shift(d, i, BACK, -1, cache)


def epsilon(i, d, cache=None):
    return _edge_count(d, i, FRONT, cache)


def epsilonstar(i, d, cache=None):
    return _edge_count(d, i, BACK, cache)


OPERATORS = {"f": f, "e": e, "fstar": fstar, "estar": estar}


def crystal_graph(tr, word=None, depth=1, cache=None):
    '''Data reachable from the zero datum by at most ``depth`` lowering operators.'''
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    system = as_root_system(tr)
    order = convex_order(system, word if word is not None else longest_word(system))
    start = LusztigDatum.zero(order)
    seen = {start.counts: start}
    frontier = [start]
    edges = []
    for _ in range(depth):
        found = []
        for d in frontier:
            for i in system.nodes:
                image = f(i, d, cache)
                edges.append((d.counts, image.counts, i))
                if image.counts not in seen:
                    seen[image.counts] = image
                    found.append(image)
        frontier = found
    graph = nx.DiGraph(type=str(system), word=format_word(order.word), depth=depth)
    for counts in sorted(seen):
        graph.add_node(counts, weight=weight(seen[counts]).dotted())
    for source, target, i in sorted(edges):
        graph.add_edge(source, target, node=i, label=f"f_{i}")
    logger.info(f"crystal graph of {system} to depth {depth}: {graph.number_of_nodes()} vertices")
    return graph


def _vertex_label(counts):
    return "(" + ",".join(str(c) for c in counts) + ")"


def graph_to_dot(graph):
    ids = {node: k for k, node in enumerate(graph.nodes)}
    lines = ["digraph crystal {"]
    for node in graph.nodes:
        lines.append(f'  v{ids[node]} [label="{_vertex_label(node)}"];')
    for source, target, data in graph.edges(data=True):
        lines.append(f'  v{ids[source]} -> v{ids[target]} [label="{data["label"]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph):
    labelled = nx.relabel_nodes(graph, {node: _vertex_label(node) for node in graph.nodes})
    return json.dumps(nx.adjacency_data(labelled)) + "\n"


def kostant_partition_count(tr, max_height):
    '''Number of Kostant partitions of total height at most ``max_height``.'''
    system = as_root_system(tr)
    ways = [1] + [0] * max_height
    for beta in system.positive_roots:
        for h in range(beta.height, max_height + 1):
            ways[h] += ways[h - beta.height]
    return sum(ways)
