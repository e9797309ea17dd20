"""Independent brute-force references for cross-validation.

Nothing here calls into the solver modules; only the arena data model is
shared.  Everything is exact rational and deterministic, and the size
guards are hard errors rather than silent truncation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .arena import (
    Edge,
    ExtRational,
    GameError,
    GameGraph,
    Infinity,
    IntervalUnion,
    MINUS_INF,
    PLUS_INF,
    Payoff,
    Player,
    UnsupportedObjective,
    complement_intervals,
    contains,
)
from .parity import ParityGame

PAIR_GUARD = 10 ** 6
NODE_GUARD = 2 * 10 ** 6


class TooLarge(GameError):
    """The instance exceeds a brute-force guard."""

    exit_code = 5


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic play: a finite prefix and a repeated cycle."""

    prefix: tuple[Edge, ...]
    cycle: tuple[Edge, ...]

    def __post_init__(self):
        if not self.cycle:
            raise GameError("lasso cycle must be nonempty")
        walk = list(self.prefix) + list(self.cycle)
        for a, b in zip(walk, walk[1:]):
            if a.dst != b.src:
                raise GameError("lasso edges are not contiguous")
        if self.cycle[-1].dst != self.cycle[0].src:
            raise GameError("lasso cycle does not close")


def _cycle_mean(cycle: Sequence[Edge]) -> Fraction:
    return Fraction(sum(e.weight for e in cycle), len(cycle))


def _ds_lasso(prefix: Sequence[int], cycle: Sequence[int], lam: Fraction) -> Fraction:
    total = Fraction(0)
    power = Fraction(1)
    for w in prefix:
        total += power * w
        power *= lam
    cyc = Fraction(0)
    cpow = Fraction(1)
    for w in cycle:
        cyc += cpow * w
        cpow *= lam
    return total + power * cyc / (1 - lam ** len(cycle))


def play_value(
    lasso: Lasso, payoff: Payoff, lam: Optional[Fraction] = None
) -> ExtRational:
    """Exact payoff of the ultimately periodic play."""
    cycle_weights = [e.weight for e in lasso.cycle]
    prefix_weights = [e.weight for e in lasso.prefix]
    if payoff is Payoff.LIMINF:
        return Fraction(min(cycle_weights))
    if payoff is Payoff.LIMSUP:
        return Fraction(max(cycle_weights))
    if payoff in (Payoff.MP_INF, Payoff.MP_SUP):
        # periodic running averages converge, both variants agree
        return _cycle_mean(lasso.cycle)
    if payoff is Payoff.DISCOUNTED:
        if lam is None:
            raise GameError("discounted payoff needs a discount factor")
        return _ds_lasso(prefix_weights, cycle_weights, lam)
    if payoff in (Payoff.TOTAL_INF, Payoff.TOTAL_SUP):
        cycle_sum = sum(cycle_weights)
        if cycle_sum > 0:
            return PLUS_INF
        if cycle_sum < 0:
            return MINUS_INF
        base = sum(prefix_weights)
        running = []
        acc = 0
        for w in cycle_weights:
            acc += w
            running.append(base + acc)
        if payoff is Payoff.TOTAL_INF:
            return Fraction(min(running))
        return Fraction(max(running))
    raise GameError(f"no play value for payoff {payoff}")


def _lasso_from(choice: Sequence[int], game, start: int) -> Lasso:
    """Follow one edge choice per vertex until a vertex repeats."""
    seen: dict[int, int] = {}
    path_edges = []
    v = start
    while v not in seen:
        seen[v] = len(path_edges)
        j = choice[v]
        e = game.edges[j]
        path_edges.append(e)
        v = e.dst
    k = seen[v]
    prefix = tuple(path_edges[:k])
    cycle = tuple(path_edges[k:])
    if isinstance(game, GameGraph):
        return Lasso(prefix=prefix, cycle=cycle)
    # parity edges carry no weight; substitute the source priority so the
    # liminf of the weight sequence is the minimal recurring priority
    def reweight(edges):
        return tuple(Edge(e.src, e.dst, game.priority[e.src]) for e in edges)

    return Lasso(prefix=reweight(prefix), cycle=reweight(cycle))


def _strategy_space(game, player: Player):
    vertices = [v for v in range(game.n) if game.owner[v] is player]
    slots = [game.out_edges[v] for v in vertices]
    return vertices, slots


def _guard_pairs(game) -> None:
    product = 1
    for v in range(game.n):
        product *= len(game.out_edges[v])
        if product > PAIR_GUARD:
            raise TooLarge(
                f"positional strategy space exceeds {PAIR_GUARD} pairs"
            )


@dataclass(frozen=True)
class OracleRegions:
    """Brute-force result.  When `exact` is false the sets are lower
    bounds computed from positional play only (the objective may require
    memory) and the partition may leave vertices unclaimed."""

    win_eve: frozenset[int]
    win_adam: frozenset[int]
    exact: bool


def _is_threshold(iu: IntervalUnion) -> bool:
    if len(iu.intervals) != 1:
        return False
    j = iu.intervals[0]
    return isinstance(j.lo, Infinity) or isinstance(j.hi, Infinity)


def _pair_enumeration(game, wins_for_eve) -> tuple[frozenset[int], frozenset[int]]:
    """eve set: some Eve choice beats every Adam choice from the vertex;
    adam set: symmetric.  `wins_for_eve(lasso)` evaluates one play."""
    n = game.n
    eve_vertices, eve_slots = _strategy_space(game, Player.EVE)
    adam_vertices, adam_slots = _strategy_space(game, Player.ADAM)

    def assemble(sigma, tau):
        choice = [0] * n
        for v, j in zip(eve_vertices, sigma):
            choice[v] = j
        for v, j in zip(adam_vertices, tau):
            choice[v] = j
        return choice

    eve_lower = set()
    for sigma in itertools.product(*eve_slots):
        pending = set(range(n)) - eve_lower
        if not pending:
            break
        good = set(pending)
        for tau in itertools.product(*adam_slots):
            choice = assemble(sigma, tau)
            good = {v for v in good if wins_for_eve(_lasso_from(choice, game, v))}
            if not good:
                break
        eve_lower |= good
    adam_lower = set()
    for tau in itertools.product(*adam_slots):
        pending = set(range(n)) - adam_lower
        if not pending:
            break
        bad = set(pending)
        for sigma in itertools.product(*eve_slots):
            choice = assemble(sigma, tau)
            bad = {v for v in bad if not wins_for_eve(_lasso_from(choice, game, v))}
            if not bad:
                break
        adam_lower |= bad
    return frozenset(eve_lower), frozenset(adam_lower)


def brute_force_positional(
    game: Union[GameGraph, ParityGame],
    objective=None,
) -> OracleRegions:
    """Enumerate positional strategies and evaluate induced lassos.

    Exact for parity games, liminf/limsup objectives and single-sided
    threshold intervals (positional determinacy holds there).  For other
    mean-payoff unions the per-strategy residual is a one-player game and
    is decided exactly through reachable cycle-mean ranges, so the
    returned sets are sound bounds on the true regions; objectives that
    may require infinite memory keep them strictly smaller.
    """
    _guard_pairs(game)
    if isinstance(game, ParityGame):
        if objective is not None:
            raise GameError("parity games carry no separate objective")
        eve, adam = _pair_enumeration(
            game, lambda lasso: play_value(lasso, Payoff.LIMINF).numerator % 2 == 0
        )
        result = OracleRegions(eve, adam, exact=True)
        assert not (result.win_eve & result.win_adam)
        assert len(result.win_eve | result.win_adam) == game.n
        return result

    payoff, iu, lam = objective.payoff, objective.intervals, objective.lam
    if payoff is Payoff.DISCOUNTED:
        raise UnsupportedObjective(
            "no positional oracle for discounted payoffs; use the finite-horizon search"
        )
    if payoff in (Payoff.LIMINF, Payoff.LIMSUP):
        eve, adam = _pair_enumeration(
            game, lambda lasso: contains(iu, play_value(lasso, payoff))
        )
        result = OracleRegions(eve, adam, exact=True)
    elif payoff in (Payoff.TOTAL_INF, Payoff.TOTAL_SUP):
        eve, adam = _pair_enumeration(
            game, lambda lasso: contains(iu, play_value(lasso, payoff))
        )
        result = OracleRegions(eve, adam, exact=_is_threshold(iu))
    elif payoff in (Payoff.MP_INF, Payoff.MP_SUP):
        if _is_threshold(iu):
            eve, adam = _pair_enumeration(
                game, lambda lasso: contains(iu, play_value(lasso, payoff))
            )
            result = OracleRegions(eve, adam, exact=True)
        else:
            result = _mp_union_bounds(game, iu if payoff is Payoff.MP_INF else iu.negate(),
                                      negate=payoff is Payoff.MP_SUP)
    else:
        raise UnsupportedObjective(f"no positional oracle for {payoff}")
    if result.exact:
        assert not (result.win_eve & result.win_adam)
        assert len(result.win_eve | result.win_adam) == game.n
    else:
        assert not (result.win_eve & result.win_adam)
    return result


def _mp_union_bounds(g: GameGraph, iu: IntervalUnion, negate: bool) -> OracleRegions:
    """One side fixes a positional strategy; the remaining one-player game
    achieves every mean in a reachable cycle-mean range, which decides the
    residual exactly even though the full game may need infinite memory."""
    work = g.negate_weights() if negate else g
    co = complement_intervals(iu)
    eve_vertices, eve_slots = _strategy_space(work, Player.EVE)
    adam_vertices, adam_slots = _strategy_space(work, Player.ADAM)

    def residual(fixed_vertices, fixed_choice) -> GameGraph:
        chosen = dict(zip(fixed_vertices, fixed_choice))
        edges = []
        for v in range(work.n):
            if v in chosen:
                edges.append(work.edges[chosen[v]])
            else:
                edges.extend(work.edges[j] for j in work.out_edges[v])
        return GameGraph(
            names=work.names,
            owner=tuple(Player.EVE for _ in range(work.n)),
            edges=tuple(edges),
            initial=work.initial,
        )

    eve_lower = set()
    for sigma in itertools.product(*eve_slots):
        refuted = one_player_mp_achievable(residual(eve_vertices, sigma), co)
        eve_lower |= {v for v in range(work.n) if not refuted[v]}
    adam_lower = set()
    for tau in itertools.product(*adam_slots):
        achieved = one_player_mp_achievable(residual(adam_vertices, tau), iu)
        adam_lower |= {v for v in range(work.n) if not achieved[v]}
    return OracleRegions(frozenset(eve_lower), frozenset(adam_lower), exact=False)


def _sccs(n: int, succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Tarjan, iterative."""
    index = [0] * n
    low = [0] * n
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done
    counter = itertools.count(1)
    stack: list[int] = []
    out: list[list[int]] = []
    for root in range(n):
        if state[root]:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = next(counter)
        state[root] = 1
        stack.append(root)
        while work:
            v, it = work[-1]
            advanced = False
            for u in it:
                if not state[u]:
                    index[u] = low[u] = next(counter)
                    state[u] = 1
                    stack.append(u)
                    work.append((u, iter(succ[u])))
                    advanced = True
                    break
                if state[u] == 1:
                    low[v] = min(low[v], index[u])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    state[u] = 2
                    comp.append(u)
                    if u == v:
                        break
                out.append(comp)
    return out


def _simple_cycle_means(g: GameGraph, comp: Sequence[int]) -> Optional[tuple[Fraction, Fraction]]:
    """(min, max) mean over the simple cycles inside one component."""
    inside = set(comp)
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None

    def note(total: int, length: int):
        nonlocal lo, hi
        mean = Fraction(total, length)
        if lo is None or mean < lo:
            lo = mean
        if hi is None or mean > hi:
            hi = mean

    for start in sorted(comp):
        # simple paths through vertices >= start only, so each cycle is
        # discovered exactly once from its smallest vertex
        stack = [(start, 0, 0, {start})]
        while stack:
            v, total, length, visited = stack.pop()
            for j in g.out_edges[v]:
                e = g.edges[j]
                if e.dst == start:
                    note(total + e.weight, length + 1)
                elif e.dst in inside and e.dst > start and e.dst not in visited:
                    stack.append((e.dst, total + e.weight, length + 1, visited | {e.dst}))
    if lo is None:
        return None
    return lo, hi


def one_player_mp_achievable(g: GameGraph, iu: IntervalUnion) -> list[bool]:
    """Per vertex: can the single controller reach mean-payoff inside the
    union?  Every value in a reachable component's cycle-mean range is
    attainable by mixing its cycles, so the achievable set is the union of
    those closed ranges."""
    if g.n > 8:
        raise TooLarge("one-player cycle enumeration is limited to 8 vertices")
    succ = [[g.edges[j].dst for j in g.out_edges[v]] for v in range(g.n)]
    comps = _sccs(g.n, succ)
    good_comp = []
    for comp in comps:
        means = _simple_cycle_means(g, comp)
        if means is None:
            continue
        lo, hi = means
        if any(j.intersects_closed(lo, hi) for j in iu.intervals):
            good_comp.append(set(comp))
    achievable = [False] * g.n
    targets = set().union(*good_comp) if good_comp else set()
    if targets:
        # backward reachability to any good component
        reach = set(targets)
        changed = True
        while changed:
            changed = False
            for v in range(g.n):
                if v in reach:
                    continue
                if any(u in reach for u in succ[v]):
                    reach.add(v)
                    changed = True
        achievable = [v in reach for v in range(g.n)]
    return achievable


def brute_force_finite_horizon_ds(
    g: GameGraph,
    lam: Fraction,
    iu: IntervalUnion,
    depth: int,
) -> frozenset[int]:
    """Reference alternating search: no pruning, no memoization.

    `depth` is the number of edges explored before the endgame check; use
    the horizon plus one to mirror the production solver.  Returns the set
    of vertices Eve wins from.  The endgame strategies and their values
    are recomputed here by plain enumeration of positional strategy pairs.
    """
    if iu.has_singleton_interval or iu.has_singleton_gap:
        raise UnsupportedObjective("singleton intervals unsupported for discounted sum")
    n = g.n
    if iu.is_empty:
        return frozenset()
    w = max((abs(e.weight) for e in g.edges), default=0)
    if w == 0:
        zero_ok = contains(iu, Fraction(0))
        return frozenset(range(n)) if zero_ok else frozenset()
    branching = max(len(g.out_edges[v]) for v in range(n))
    nodes = 0
    layer = 1
    for _ in range(depth + 1):
        nodes += layer
        if nodes > NODE_GUARD:
            raise TooLarge("finite-horizon search exceeds the node guard")
        layer *= branching

    _guard_pairs(g)
    eve_vertices, eve_slots = _strategy_space(g, Player.EVE)
    adam_vertices, adam_slots = _strategy_space(g, Player.ADAM)

    def assemble(sigma, tau):
        choice = [0] * n
        for v, j in zip(eve_vertices, sigma):
            choice[v] = j
        for v, j in zip(adam_vertices, tau):
            choice[v] = j
        return choice

    sigmas = list(itertools.product(*eve_slots))
    taus = list(itertools.product(*adam_slots))
    values = {}
    for sigma in sigmas:
        for tau in taus:
            choice = assemble(sigma, tau)
            row = []
            for v in range(n):
                lasso = _lasso_from(choice, g, v)
                row.append(
                    _ds_lasso(
                        [e.weight for e in lasso.prefix],
                        [e.weight for e in lasso.cycle],
                        lam,
                    )
                )
            values[(sigma, tau)] = row

    def vec_min(sigma):
        return [min(values[(sigma, tau)][v] for tau in taus) for v in range(n)]

    def vec_max(sigma):
        return [max(values[(sigma, tau)][v] for tau in taus) for v in range(n)]

    mins = {sigma: vec_min(sigma) for sigma in sigmas}
    maxs = {sigma: vec_max(sigma) for sigma in sigmas}
    minmax = [max(mins[s][v] for s in sigmas) for v in range(n)]
    maxmin = [min(maxs[s][v] for s in sigmas) for v in range(n)]
    sigma_max = next(s for s in sigmas if mins[s] == minmax)
    sigma_min = next(s for s in sigmas if maxs[s] == maxmin)
    maxmax = maxs[sigma_max]
    minmin = mins[sigma_min]

    reach = Fraction(w) / (1 - lam)

    def endgame(v: int, x: Fraction, factor: Fraction) -> bool:
        lo, hi = x - factor * reach, x + factor * reach
        candidates = [j for j in iu.intervals if j.intersects_closed(lo, hi)]
        if not candidates:
            return False
        target = candidates[0]
        if target.contains(x + factor * minmax[v]) and target.contains(
            x + factor * maxmax[v]
        ):
            return True
        return target.contains(x + factor * minmin[v]) and target.contains(
            x + factor * maxmin[v]
        )

    def wins(v: int, k: int, x: Fraction, factor: Fraction) -> bool:
        if k == depth:
            return endgame(v, x, factor)
        eve = g.owner[v] is Player.EVE
        results = [
            wins(g.edges[j].dst, k + 1, x + factor * g.edges[j].weight, factor * lam)
            for j in g.out_edges[v]
        ]
        return any(results) if eve else all(results)

    return frozenset(v for v in range(n) if wins(v, 0, Fraction(0), Fraction(1)))


# ---------------------------------------------------------------------------
# direct searches for the generator families

def subset_sum_winner(target: int, pairs: Sequence[tuple[int, int]]) -> bool:
    """Eve wins the alternating selection game iff the chosen sum can be
    forced to equal the target (Adam moves on odd rounds)."""

    def eve_wins(i: int, acc: int) -> bool:
        if i == len(pairs):
            return acc == target
        options = [eve_wins(i + 1, acc + x) for x in pairs[i]]
        # rounds are 1-based, so index i is Adam's turn when i is even
        if (i + 1) % 2 == 1:
            return all(options)
        return any(options)

    return eve_wins(0, 0)


def countdown_winner(
    owner: Sequence[Player],
    edges: Sequence[tuple[int, int, int]],
    initial: int,
    credit: int,
) -> bool:
    """Direct countdown search: a move landing the counter exactly on 0
    wins for Eve; overshooting makes the branch hopeless."""
    succ: dict[int, list[tuple[int, int]]] = {}
    for src, dst, weight in edges:
        succ.setdefault(src, []).append((dst, weight))
    memo: dict[tuple[int, int], bool] = {}

    def eve_wins(v: int, k: int) -> bool:
        # k strictly decreases along every edge, so the recursion is finite
        key = (v, k)
        if key in memo:
            return memo[key]
        outcomes = []
        for dst, weight in succ.get(v, []):
            k2 = k + weight
            if k2 == 0:
                outcomes.append(True)
            elif k2 < 0:
                outcomes.append(False)
            else:
                outcomes.append(eve_wins(dst, k2))
        result = any(outcomes) if owner[v] is Player.EVE else all(outcomes)
        memo[key] = result
        return result

    return eve_wins(initial, credit)
