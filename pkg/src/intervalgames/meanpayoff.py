"""Mean-payoff threshold and interval solvers.

The threshold problem ("can Eve force the liminf average weight to be at
least a") is solved with an energy-style progress measure after an affine
rescale to integer weights and threshold zero.  Strict comparisons reduce
to non-strict ones because cycle means in a game with n vertices are
rationals with denominator at most n.  The interval solvers iterate
threshold calls, peeling off regions Adam wins outright, and recurse on
objectives with fewer finite interval boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .arena import (
    Edge,
    GameGraph,
    Infinity,
    Interval,
    IntervalUnion,
    MINUS_INF,
    Player,
    Regions,
    UnsupportedObjective,
    complement_intervals,
    subgame_with_map,
)
from .parity import ParityGame, attractor_with_strategy


class PriorityOutOfRange(UnsupportedObjective):
    pass


class Cmp(Enum):
    GE = ">="
    GT = ">"
    LE = "<="
    LT = "<"


@dataclass(frozen=True)
class ThresholdQuery:
    threshold: Fraction
    cmp: Cmp


# Positional strategies map owned vertices to a chosen outgoing edge index.
PositionalStrategy = dict[int, int]


def _energy_win(g: GameGraph) -> tuple[frozenset[int], PositionalStrategy]:
    """Vertices from which Eve keeps the running sum bounded below, which
    is exactly where she forces mean-payoff >= 0; also her positional
    strategy.  Least-fixpoint progress measure, values capped at n*W."""
    n = g.n
    cap = n * max((abs(e.weight) for e in g.edges), default=0)
    top = cap + 1
    f = [0] * n

    def lift(v: int) -> int:
        best: Optional[int] = None
        eve = g.owner[v] is Player.EVE
        for j in g.out_edges[v]:
            e = g.edges[j]
            fu = f[e.dst]
            val = top if fu >= top else max(0, fu - e.weight)
            if val > cap:
                val = top
            if best is None:
                best = val
            elif eve:
                if val < best:
                    best = val
            else:
                if val > best:
                    best = val
        return best if best is not None else top

    pending = set(range(n))
    while pending:
        v = pending.pop()
        new = lift(v)
        if new > f[v]:
            f[v] = new
            for j in g.in_edges[v]:
                u = g.edges[j].src
                if f[u] < top:
                    pending.add(u)
    win = frozenset(v for v in range(n) if f[v] < top)
    strategy: PositionalStrategy = {}
    for v in win:
        if g.owner[v] is not Player.EVE:
            continue
        for j in g.out_edges[v]:
            e = g.edges[j]
            fu = f[e.dst]
            val = top if fu >= top else max(0, fu - e.weight)
            if val > cap:
                val = top
            if val <= f[v]:
                strategy[v] = j
                break
        assert v in strategy, "progress measure without a witnessing edge"
    return win, strategy


def _rescaled_ge0(g: GameGraph, a: Fraction, strict: bool) -> GameGraph:
    # MP >= p/q  <=>  MP(q*n*w - p*n) >= 0; strict thresholds shift by one
    # unit, valid because cycle means have denominator <= n
    n = g.n
    q, p = a.denominator, a.numerator
    shift = 1 if strict else 0
    edges = tuple(
        Edge(e.src, e.dst, q * n * e.weight - p * n - shift) for e in g.edges
    )
    return GameGraph(names=g.names, owner=g.owner, edges=edges, initial=g.initial)


def mp_threshold(g: GameGraph, query: ThresholdQuery) -> Regions:
    """Exact partition for "Eve forces MP ~ a" with positional witnesses
    for both players embedded in the result."""
    a, cmp = query.threshold, query.cmp
    if cmp in (Cmp.LE, Cmp.LT):
        # Eve minimizing: negate weights and flip the comparison
        flipped = ThresholdQuery(-a, Cmp.GE if cmp is Cmp.LE else Cmp.GT)
        return mp_threshold(g.negate_weights(), flipped)
    strict = cmp is Cmp.GT
    win_eve, eve_strategy = _energy_win(_rescaled_ge0(g, a, strict))
    # Adam's side: he forces the complementary strict/non-strict threshold
    # in the owner-swapped, weight-negated game
    dual = g.swap_owners().negate_weights()
    win_adam, adam_strategy = _energy_win(_rescaled_ge0(dual, -a, not strict))
    regions = Regions(
        win_eve=win_eve,
        win_adam=win_adam,
        eve_strategy=eve_strategy,
        adam_strategy=adam_strategy,
    )
    regions.check_partition(g.n)
    return regions


def _close_removal(g: GameGraph, removed: set[int]) -> tuple[frozenset[int], dict[int, int]]:
    """Close a set of Adam-won vertices under Adam's attractor.

    Every removed vertex is one from which Adam defeats the (prefix
    independent) objective, so he also wins wherever he can force the play
    into the set: an Adam vertex with one edge into it, or an Eve vertex
    with no edge avoiding it.  Peeling without this closure is unsound;
    later iterations solve subgames in which the escape edges no longer
    exist, so they cannot see that Adam may simply step into territory he
    has already won.  Returns the closed set and the attractor edges for
    newly added Adam vertices.
    """
    return attractor_with_strategy(g, removed, Player.ADAM)


def solve_mp_interval(g: GameGraph, iu: IntervalUnion) -> Regions:
    """Winning regions for "mean-payoff lands in the union".

    Peels Adam-winning regions to a fixpoint: Adam wins outright where he
    wins the threshold game just below the union, or the recursive game
    whose objective also admits everything below the first interval.  The
    recursion swaps players and complements when the union is unbounded
    below; it terminates because each step drops one finite boundary.
    """
    if iu.is_empty:
        return Regions(win_eve=frozenset(), win_adam=frozenset(range(g.n)))
    a = iu.inf
    if a == MINUS_INF:
        swapped = solve_mp_interval(g.swap_owners(), complement_intervals(iu))
        regions = Regions(win_eve=swapped.win_adam, win_adam=swapped.win_eve)
        regions.check_partition(g.n)
        return regions
    assert isinstance(a, Fraction)
    strict = iu.intervals[0].lo_open  # a in I iff the first interval is closed at a
    recursive_iu = IntervalUnion(
        (Interval(MINUS_INF, a, True, False),) + iu.intervals
    )
    adam_total: frozenset[int] = frozenset()
    while len(adam_total) < g.n:
        current, vmap, _ = subgame_with_map(g, adam_total)
        thr = mp_threshold(current, ThresholdQuery(a, Cmp.GT if strict else Cmp.GE))
        rec = solve_mp_interval(current, recursive_iu)
        new = {vmap[v] for v in thr.win_adam | rec.win_adam}
        if not new:
            break
        adam_total, _ = _close_removal(g, set(adam_total) | new)
    regions = Regions(
        win_eve=frozenset(range(g.n)) - adam_total,
        win_adam=adam_total,
    )
    regions.check_partition(g.n)
    return regions


def solve_mp_single(g: GameGraph, interval: Interval) -> Regions:
    """Single-interval variant: alternately remove Adam's regions for the
    lower and upper threshold games until nothing changes.  Adam's
    composed strategy is positional and is returned on his region."""
    lo, hi = interval.lo, interval.hi
    adam_total: frozenset[int] = frozenset()
    adam_strategy: PositionalStrategy = {}
    while len(adam_total) < g.n:
        current, vmap, emap = subgame_with_map(g, adam_total)
        removed: set[int] = set()
        level_strategy: dict[int, int] = {}  # original indices
        if not isinstance(lo, Infinity):
            low = mp_threshold(
                current, ThresholdQuery(lo, Cmp.GT if interval.lo_open else Cmp.GE)
            )
            removed |= low.win_adam
            for v in low.win_adam:
                if current.owner[v] is Player.ADAM:
                    level_strategy[vmap[v]] = emap[low.adam_strategy[v]]
        if not isinstance(hi, Infinity) and len(removed) < current.n:
            sub, vmap2, emap2 = subgame_with_map(current, removed)
            high = mp_threshold(
                sub, ThresholdQuery(hi, Cmp.LT if interval.hi_open else Cmp.LE)
            )
            removed |= {vmap2[v] for v in high.win_adam}
            for v in high.win_adam:
                if sub.owner[v] is Player.ADAM:
                    level_strategy[vmap[vmap2[v]]] = emap[emap2[high.adam_strategy[v]]]
        if not removed:
            break
        new_total, attractor_strategy = _close_removal(
            g, set(adam_total) | {vmap[v] for v in removed}
        )
        adam_strategy.update(level_strategy)
        for v, j in attractor_strategy.items():
            adam_strategy.setdefault(v, j)
        adam_total = new_total
    regions = Regions(
        win_eve=frozenset(range(g.n)) - adam_total,
        win_adam=adam_total,
        adam_strategy=adam_strategy,
    )
    regions.check_partition(g.n)
    return regions


def parity_to_mp(p: ParityGame) -> tuple[GameGraph, IntervalUnion]:
    """Replace each parity vertex with a three-vertex averaging gadget.

    The target union is [0,1) u [2,3) u ... u [m,m+1) with m the smallest
    even integer >= |V|.  The gadget for a vertex of priority q is
    controlled by Eve iff q is even; its entry and pass-through edges
    weigh q, and the two adjustment loops weigh q+1 and q-1.  Output size
    is exactly 4|V| vertices and |E| + 6|V| edges.
    """
    n_v = p.n
    for q in p.priority:
        if q > n_v:
            raise PriorityOutOfRange(f"priority {q} exceeds the vertex count {n_v}")
    m = n_v if n_v % 2 == 0 else n_v + 1
    intervals = tuple(
        Interval(Fraction(k), Fraction(k + 1), False, True) for k in range(0, m + 1, 2)
    )
    taken = set(p.names)

    def fresh(base: str) -> str:
        name = base
        suffix = 0
        while name in taken:
            suffix += 1
            name = f"{base}_{suffix}"
        taken.add(name)
        return name

    names = list(p.names)
    owner = list(p.owner)
    gadget_index: dict[tuple[int, str], int] = {}
    for v in range(n_v):
        gadget_owner = Player.EVE if p.priority[v] % 2 == 0 else Player.ADAM
        for tag in ("0", "+", "-"):
            gadget_index[(v, tag)] = len(names)
            names.append(fresh(f"{p.names[v]}^{tag}"))
            owner.append(gadget_owner)
    edges = []
    for e in p.edges:
        edges.append(Edge(e.src, gadget_index[(e.dst, "0")], p.priority[e.src]))
    for v in range(n_v):
        q = p.priority[v]
        v0, vp, vm = (gadget_index[(v, t)] for t in ("0", "+", "-"))
        edges.append(Edge(v0, vp, q))
        edges.append(Edge(v0, vm, q))
        edges.append(Edge(vp, v, q))
        edges.append(Edge(vm, v, q))
        edges.append(Edge(vp, vp, q + 1))
        edges.append(Edge(vm, vm, q - 1))
    g = GameGraph(
        names=tuple(names),
        owner=tuple(owner),
        edges=tuple(edges),
        initial=p.initial,
    )
    return g, IntervalUnion(intervals)
