'''Property sweeps behind ``pbwcrystal verify``.

Each suite runs on one type and returns a SuiteResult with the number of cases
checked and the counterexamples found.  Data are exhaustive up to a count
bound when the number of cases fits the cap, and seeded random otherwise.
'''
from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from pbwcrystal import crystal
from pbwcrystal.bracketing import canonical_word, f_bracket, good_enumeration_word, is_simply_braided, plan
from pbwcrystal.config_schema import SUITES, SearchParameters, VerificationParameters
from pbwcrystal.exceptions import PlanError, SearchBudgetExceeded
from pbwcrystal.lusztig import (LusztigDatum, Transport, bracket_transition_B2, transition_move, weight,
                               window_transition)
from pbwcrystal.rootsys import as_root_system, cominuscule_nodes, minuscule_nodes
from pbwcrystal.weyl import (available_moves, connect, convex_order, format_word, good_enumeration_by_oracle,
                             is_braidless, is_convex, is_good_enumeration, lex_order, random_reduced_word)

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult(object):
    suite: str
    type: str
    cases: int = 0
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def violations(self):
        return len(self.counterexamples)

    @property
    def passed(self):
        return not self.counterexamples

    def check(self, ok, describe):
        '''Count one case; ``describe()`` builds the counterexample text only on failure.'''
        self.cases += 1
        if not ok:
            self.counterexamples.append(describe())


def _random_counts(rng, n, bound):
    return tuple(int(x) for x in rng.integers(0, bound + 1, size=n))


def sample_data(order, params, rng, per_datum=1):
    '''Every datum with counts <= max_count if that fits exhaustive_cap, else random_samples random ones.'''
    n = len(order)
    if (params.max_count + 1) ** n * per_datum <= params.exhaustive_cap:
        for counts in itertools.product(range(params.max_count + 1), repeat=n):
            yield LusztigDatum(order, counts)
    else:
        for _ in range(params.random_samples):
            yield LusztigDatum(order, _random_counts(rng, n, params.random_max_count))


def _random_datum(order, params, rng):
    return LusztigDatum(order, _random_counts(rng, len(order), params.random_max_count))


def _on(d):
    return f"{d} on ({format_word(d.order.word)})"


def _bond_windows(system):
    '''One sl3 and one B2 window of the type, when it has such bonds.'''
    windows = {}
    for i in system.nodes:
        for j in system.nodes:
            m = system.braid_order(i, j)
            a, b = system.simple_root(i), system.simple_root(j)
            if m == 3 and 3 not in windows:
                windows[3] = (a, a + b, b)
            elif m == 4 and 4 not in windows and system.norm(a) > system.norm(b):
                windows[4] = (a, a + b, a + b.scaled(2), b)
    return windows


def check_rank2(system, params, rng, result, node_cap=None):
    '''Kernels against the bracket form and their own inverses, exhaustive to rank2_bound.'''
    bound = params.rank2_bound
    for arity, window in sorted(_bond_windows(system).items()):
        back = tuple(reversed(window))
        for counts in itertools.product(range(bound + 1), repeat=arity):
            out = window_transition(system, window, counts)
            result.check(tuple(window_transition(system, back, out)) == counts,
                         lambda: f"rank2 round trip {counts} -> {out}")
            moved = sum((beta.scaled(c) for beta, c in zip(back, out)), window[0].scaled(0))
            kept = sum((beta.scaled(c) for beta, c in zip(window, counts)), window[0].scaled(0))
            result.check(moved == kept, lambda: f"rank2 weight {counts} -> {out}")
            if arity == 4:
                result.check(bracket_transition_B2(counts, long_first=True) == tuple(out),
                             lambda: f"B2 brackets long first {counts}")
                short_out = window_transition(system, back, counts)
                result.check(bracket_transition_B2(counts, long_first=False) == tuple(short_out),
                             lambda: f"B2 brackets short first {counts}")


def check_transport(system, params, rng, result, node_cap=None):
    '''Transition maps commute with f_i and invert along the reversed path.'''
    cache = crystal.PathCache()
    pairs = max(1, params.samples // 10)
    per_pair = max(1, params.samples // pairs)
    for _ in range(pairs):
        u = convex_order(system, random_reduced_word(system, rng))
        v = random_reduced_word(system, rng, start=u.word)
        transport = Transport.compile(u, connect(system, u.word, v))
        for _ in range(per_pair):
            d = _random_datum(u, params, rng)
            i = int(rng.integers(1, system.rank + 1))
            moved = transport(d)
            result.check(transport.inverse()(moved) == d, lambda: f"inverse transport of {_on(d)}")
            lhs = transport(crystal.f(i, d, cache))
            rhs = crystal.f(i, moved, cache)
            result.check(lhs == rhs, lambda: f"f_{i} of {_on(d)} vs ({format_word(v)}): {lhs} != {rhs}")
        for move in available_moves(system, u):
            d = _random_datum(u, params, rng)
            i = int(rng.integers(1, system.rank + 1))
            lhs = transition_move(crystal.f(i, d, cache), move)
            rhs = crystal.f(i, transition_move(d, move), cache)
            result.check(lhs == rhs, lambda: f"f_{i} of {_on(d)} across {move}: {lhs} != {rhs}")


def _simply_braided_order(system):
    if system.type_rank is not None and system.type_rank.is_classical:
        return canonical_word(system)
    for enumeration in itertools.permutations(system.nodes):
        if is_good_enumeration(system, enumeration):
            return good_enumeration_word(system, enumeration)
    return None


def check_bracket_agreement(system, params, rng, result, node_cap=None):
    '''f_bracket equals transport f on the standard simply braided word.'''
    order = _simply_braided_order(system)
    if order is None:
        logger.warning(f"{system} has no good enumeration; bracket-agreement has nothing to check")
        return
    cache = crystal.PathCache()
    plans = {}
    for i in system.nodes:
        plans[i] = plan(order, i, node_cap=node_cap)
        result.check(plans[i] is not None, lambda: f"({format_word(order.word)}) not simply braided for {i}")
    plans = {i: p for i, p in plans.items() if p is not None}
    for d in sample_data(order, params, rng, per_datum=len(plans)):
        for i, p in plans.items():
            try:
                fast = f_bracket(i, d, p)
            except PlanError as err:
                result.check(False, lambda: f"f_{i} bracket on {_on(d)}: {err}")
                continue
            slow = crystal.f(i, d, cache)
            result.check(fast == slow, lambda: f"f_{i} on {_on(d)}: bracket {fast} transport {slow}")


def check_crystal_axioms(system, params, rng, result, node_cap=None):
    '''Star and plain operators: inverses, weights and their compatibility.'''
    cache = crystal.PathCache()
    order = convex_order(system, random_reduced_word(system, rng))
    for _ in range(params.samples):
        b = _random_datum(order, params, rng)
        wt = weight(b)
        for i in system.nodes:
            fb, sb = crystal.f(i, b, cache), crystal.fstar(i, b, cache)
            result.check(fb is not None and sb is not None, lambda: f"f_{i} or f*_{i} null on {_on(b)}")
            result.check(crystal.e(i, fb, cache) == b, lambda: f"e_{i} f_{i} != id on {_on(b)}")
            result.check(crystal.estar(i, sb, cache) == b, lambda: f"e*_{i} f*_{i} != id on {_on(b)}")
            result.check(weight(fb) == wt - system.simple_root(i), lambda: f"wt f_{i} on {_on(b)}")
            eps, eps_star = crystal.epsilon(i, b, cache), crystal.epsilonstar(i, b, cache)
            jump = eps + eps_star + system.pairing(i, wt)
            result.check(jump >= 0, lambda: f"negative jump {jump} for {i} on {_on(b)}")
            if jump == 0:
                result.check(fb == sb, lambda: f"f_{i} != f*_{i} at jump 0 on {_on(b)}")
            if jump >= 1:
                result.check(crystal.epsilonstar(i, fb, cache) == eps_star
                             and crystal.epsilon(i, sb, cache) == eps,
                             lambda: f"epsilon changed at jump {jump} for {i} on {_on(b)}")
            if jump >= 2:
                result.check(crystal.f(i, sb, cache) == crystal.fstar(i, fb, cache),
                             lambda: f"f_{i} f*_{i} != f*_{i} f_{i} on {_on(b)}")
            for j in system.nodes:
                if j != i:
                    result.check(crystal.fstar(i, crystal.f(j, b, cache), cache)
                                 == crystal.f(j, sb, cache),
                                 lambda: f"f*_{i} f_{j} != f_{j} f*_{i} on {_on(b)}")
    graph = crystal.crystal_graph(system, order.word, depth=2, cache=cache)
    partitions = crystal.kostant_partition_count(system, 2)
    result.check(graph.number_of_nodes() == partitions,
                 lambda: f"depth 2 graph has {graph.number_of_nodes()} vertices, {partitions} Kostant partitions")


def check_convexity(system, params, rng, result, node_cap=None):
    '''Lex orders are convex, and simply braided for good enumerations.'''
    tr = system.type_rank
    if tr is not None and tr.is_classical and system.rank <= 4:
        braidless = {i for i in system.nodes if is_braidless(system, i)}
        expected = set(system.nodes) if system.rank <= 2 else minuscule_nodes(tr) | cominuscule_nodes(tr)
        result.check(braidless == expected,
                     lambda: f"braidless nodes {sorted(braidless)}, minuscule or cominuscule {sorted(expected)}")
    enumerations = list(itertools.permutations(system.nodes))
    if len(enumerations) > params.samples:
        picks = rng.choice(len(enumerations), size=params.samples, replace=False)
        enumerations = [enumerations[k] for k in sorted(picks)]
    for enumeration in enumerations:
        order = lex_order(system, enumeration)
        label = format_word(enumeration)
        result.check(is_convex(system, order.roots), lambda: f"lex ({label}) not convex")
        good = is_good_enumeration(system, enumeration)
        if system.rank <= 4:
            result.check(good == good_enumeration_by_oracle(system, enumeration),
                         lambda: f"({label}) good enumeration table disagrees with the braidless oracle")
        if good:
            for i in system.nodes:
                try:
                    ok = is_simply_braided(order, i, node_cap)
                except SearchBudgetExceeded as err:
                    ok = False
                    logger.warning(str(err))
                result.check(ok, lambda: f"lex ({label}) not simply braided for {i}")


CHECKS = {
    "rank2": check_rank2,
    "transport": check_transport,
    "bracket-agreement": check_bracket_agreement,
    "crystal-axioms": check_crystal_axioms,
    "convexity": check_convexity,
}


def _rng(seed, suite, system):
    return np.random.default_rng([seed, SUITES.index(suite)] + [ord(ch) for ch in str(system)])


def run_suite(suite, tr, params=None, node_cap=None):
    if suite not in CHECKS:
        raise ValueError(f"unknown suite {suite!r}, choose from {', '.join(SUITES)}")
    params = params or VerificationParameters()
    node_cap = node_cap or SearchParameters().node_cap
    system = as_root_system(tr)
    result = SuiteResult(suite, str(system))
    logger.info(f"suite {suite} on {system}: start")
    start = time.time()
    CHECKS[suite](system, params, _rng(params.seed, suite, system), result, node_cap)
    result.seconds = time.time() - start
    result.counterexamples.sort()
    logger.info(f"suite {suite} on {system}: {result.cases} cases, "
                f"{result.violations} violations in {result.seconds:.2f} seconds")
    return result


def _run_job(job):
    return run_suite(*job)


def run_verification(suites, targets, params=None, node_cap=None):
    '''Run every (suite, target) pair, in a process pool when params.workers > 1.'''
    params = params or VerificationParameters()
    jobs = [(suite, target, params, node_cap) for suite in suites for target in targets]
    if params.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(params.workers, len(jobs))) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(job) for job in jobs]
    return sorted(results, key=lambda r: (SUITES.index(r.suite), r.type))
