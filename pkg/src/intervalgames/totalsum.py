"""Total-sum interval games via parity games on one-counter graphs.

The running total of a play is tracked by an integer counter; which
interval (or gap) currently holds it determines a priority, and the
reduced parity game makes Eve assert the region while Adam may demand a
proof through a pumping gadget that ends in a zero test.

Solving the one-counter parity game exactly is out of scope; instead the
counter is clamped to [-B, B] and the finite game is solved twice, once
counting escapes for Eve and once for Adam, yielding sound EVE/ADAM
verdicts and an honest UNKNOWN in between.  When the input graph has no
positive (negative) cycle, a play that escapes downward (upward) can
never return, so the escape vertex can be given its true priority and the
corresponding UNKNOWNs disappear; this closes, among others, the whole
countdown family.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, NamedTuple, Optional

from .arena import (
    DeadEndVertexError,
    Edge,
    GameError,
    GameGraph,
    Infinity,
    Interval,
    IntervalUnion,
    MINUS_INF,
    MalformedDocument,
    PLUS_INF,
    Player,
    UnknownVertexReference,
    UnsupportedObjective,
    Verdict,
    max_abs_weight,
    _parse_edges,
    _parse_vertices,
)
from .liminf import PriorityMap, integerize, omega_I
from .parity import ParityGame, PEdge, solve_parity


class NoFiniteEndpoint(UnsupportedObjective):
    """The region structure has no finite boundary to anchor the counter
    gadget (the objective misses the integers entirely or covers them)."""


class CEdge(NamedTuple):
    src: int
    dst: int
    weight: int


class ZEdge(NamedTuple):
    src: int
    dst: int


@dataclass(frozen=True)
class OneCounterParityGame:
    """Parity game over configurations (vertex, counter in Z).

    Counter edges add their weight to the counter; zero-test edges are
    enabled only when the counter is exactly 0.  Negative counter values
    are allowed.  A vertex may have zero-test edges as its only exits.
    """

    names: tuple[str, ...]
    owner: tuple[Player, ...]
    priority: tuple[int, ...]
    edges: tuple[CEdge, ...]
    zero_edges: tuple[ZEdge, ...]
    initial: int

    def __post_init__(self):
        n = len(self.names)
        if n == 0:
            raise MalformedDocument("a one-counter game needs at least one vertex")
        if len(set(self.names)) != n:
            raise MalformedDocument("duplicate vertex identifiers")
        if len(self.owner) != n or len(self.priority) != n:
            raise MalformedDocument("owner/priority lists do not match vertex list")
        for p in self.priority:
            if not isinstance(p, int) or isinstance(p, bool) or p < 0:
                raise MalformedDocument(f"priority {p!r} is not a non-negative integer")
        if not 0 <= self.initial < n:
            raise UnknownVertexReference(f"initial vertex index {self.initial}")
        has_out = [False] * n
        for e in self.edges:
            if not (0 <= e.src < n and 0 <= e.dst < n):
                raise UnknownVertexReference(f"edge {e} references a missing vertex")
            if not isinstance(e.weight, int) or isinstance(e.weight, bool):
                raise MalformedDocument(f"counter weight {e.weight!r} is not an integer")
            has_out[e.src] = True
        for z in self.zero_edges:
            if not (0 <= z.src < n and 0 <= z.dst < n):
                raise UnknownVertexReference(f"zero edge {z} references a missing vertex")
            has_out[z.src] = True
        for v, ok in enumerate(has_out):
            if not ok:
                raise DeadEndVertexError(self.names[v])

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        buckets: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            buckets[e.src].append(i)
        return tuple(tuple(b) for b in buckets)

    @cached_property
    def out_zero(self) -> tuple[tuple[int, ...], ...]:
        buckets: list[list[int]] = [[] for _ in range(self.n)]
        for i, z in enumerate(self.zero_edges):
            buckets[z.src].append(i)
        return tuple(tuple(b) for b in buckets)


@dataclass(frozen=True)
class CountdownInstance:
    """Countdown game: strictly negative weights, initial credit c > 0,
    Eve wins by driving the counter to exactly 0.  The reduction assumes
    the players alternate, so graphs should be bipartite by owner."""

    names: tuple[str, ...]
    owner: tuple[Player, ...]
    edges: tuple[CEdge, ...]
    initial: int
    credit: int

    def __post_init__(self):
        if self.credit <= 0:
            raise GameError(f"initial credit {self.credit} must be positive")
        for e in self.edges:
            if e.weight >= 0:
                raise GameError(f"countdown weights must be negative, got {e.weight}")


Config = tuple[int, int]  # (vertex index, counter value)


@dataclass(frozen=True)
class ThreeValuedRegions:
    """Three-valued solution over the explored configurations.

    `verdicts` maps original-game vertex names to the verdict of starting
    there with counter 0 (present only when produced by
    `solve_total_interval`); `initial_verdict` is the verdict of the
    designated initial configuration.
    """

    win_eve: frozenset[Config]
    win_adam: frozenset[Config]
    unknown: frozenset[Config]
    bound: int
    initial_verdict: Verdict
    verdicts: Optional[Mapping[str, Verdict]] = None

    def verdict(self, config: Config) -> Verdict:
        if config in self.win_eve:
            return Verdict.EVE
        if config in self.win_adam:
            return Verdict.ADAM
        return Verdict.UNKNOWN


def assertable_regions(pm: PriorityMap) -> list[int]:
    """Region indices Eve may assert: exactly the image of the priority
    function.  The outermost gaps are empty when the objective is
    unbounded on that side; an empty region has no punish edges, so
    allowing its assertion would hand Eve an unpunishable lie that masks
    the true priority."""
    r = pm.r
    out = []
    for i in range(1, 2 * r + 2):
        m, mx = _region_bounds(pm, i)
        if m == PLUS_INF and mx == MINUS_INF:
            continue
        out.append(i)
    return out


def copy_vertex_index(regions: list[int], v: int, b: int, i: int) -> int:
    """Index of copy (v, b, i) inside the reduced one-counter game; the
    construction lays copies out v-major, b in (1, 0), then i over the
    assertable regions in order."""
    width = len(regions)
    return v * 2 * width + (0 if b == 1 else width) + regions.index(i)


def totalsum_to_ocpg(g: GameGraph, iu: IntervalUnion) -> OneCounterParityGame:
    """Region-assertion construction over one graph copy per region.

    Copy (v,1,i) is where the owner of v moves having asserted region i;
    every move passes through an Eve vertex that re-asserts the region,
    then an Adam vertex that may either accept or challenge the assertion
    by moving to a pumping gadget whose zero test resolves the challenge.
    A nonempty region is bounded on every side a counter can err toward,
    so each wrong assertion has its punish edge.
    """
    pm = integerize(iu)
    if pm.is_empty:
        raise NoFiniteEndpoint("objective contains no integers")
    r = pm.r
    regions = assertable_regions(pm)
    bounds = {i: _region_bounds(pm, i) for i in regions}
    if not any(
        isinstance(m, int) or isinstance(mx, int) for m, mx in bounds.values()
    ):
        raise NoFiniteEndpoint("objective has no finite region boundary")

    taken = set()

    def fresh(base: str) -> str:
        name = base
        suffix = 0
        while name in taken:
            suffix += 1
            name = f"{base}_{suffix}"
        taken.add(name)
        return name

    names: list[str] = []
    owner: list[Player] = []
    priority: list[int] = []
    copy_index: dict[tuple[int, int, int], int] = {}
    for v in range(g.n):
        for b in (1, 0):
            for i in regions:
                copy_index[(v, b, i)] = len(names)
                names.append(fresh(f"{g.names[v]}~{b}~{i}"))
                owner.append(g.owner[v] if b == 1 else Player.ADAM)
                priority.append(i)
    top_priority = 2 * r + 1
    edge_vertex: dict[int, int] = {}
    for k in range(len(g.edges)):
        edge_vertex[k] = len(names)
        names.append(fresh(f"e{k}"))
        owner.append(Player.EVE)
        priority.append(top_priority)
    v_zero = len(names)
    names.append(fresh("zero"))
    owner.append(Player.EVE)
    priority.append(2 * r)
    v_bot = len(names)
    names.append(fresh("bot"))
    owner.append(Player.EVE)
    priority.append(top_priority)
    v_top = len(names)
    names.append(fresh("top"))
    owner.append(Player.EVE)
    priority.append(top_priority)

    edges: list[CEdge] = []
    for k, e in enumerate(g.edges):
        for i in regions:
            edges.append(CEdge(copy_index[(e.src, 1, i)], edge_vertex[k], e.weight))
    for k, e in enumerate(g.edges):
        for i in regions:
            edges.append(CEdge(edge_vertex[k], copy_index[(e.dst, 0, i)], 0))
    for v in range(g.n):
        for i in regions:
            m_i, mx_i = bounds[i]
            src = copy_index[(v, 0, i)]
            if isinstance(m_i, int):
                edges.append(CEdge(src, v_bot, -m_i))
            if isinstance(mx_i, int):
                edges.append(CEdge(src, v_top, -mx_i))
            edges.append(CEdge(src, copy_index[(v, 1, i)], 0))
    edges.append(CEdge(v_bot, v_bot, -1))
    edges.append(CEdge(v_top, v_top, +1))
    edges.append(CEdge(v_zero, v_zero, 0))
    zero_edges = (ZEdge(v_bot, v_zero), ZEdge(v_top, v_zero))

    return OneCounterParityGame(
        names=tuple(names),
        owner=tuple(owner),
        priority=tuple(priority),
        edges=tuple(edges),
        zero_edges=zero_edges,
        initial=copy_index[(g.initial, 1, omega_I(0, pm))],
    )


def _region_bounds(pm: PriorityMap, i: int):
    """(min, max) integer of the region with priority i; infinite markers
    for unbounded sides, (PLUS_INF, MINUS_INF) when the region is empty
    (only possible for the outermost gaps)."""
    r = len(pm.intervals)
    if i % 2 == 0:
        return pm.intervals[i // 2 - 1]
    if i == 1:
        first_lo = pm.intervals[0][0]
        if isinstance(first_lo, Infinity):
            return PLUS_INF, MINUS_INF
        return MINUS_INF, first_lo - 1
    if i == 2 * r + 1:
        last_hi = pm.intervals[-1][1]
        if isinstance(last_hi, Infinity):
            return PLUS_INF, MINUS_INF
        return last_hi + 1, PLUS_INF
    j = (i - 1) // 2  # gap between intervals j and j+1, both sides finite
    return pm.intervals[j - 1][1] + 1, pm.intervals[j][0] - 1


def _has_positive_cycle(g: GameGraph) -> bool:
    return _has_cycle_sign(g, +1)


def _has_negative_cycle(g: GameGraph) -> bool:
    return _has_cycle_sign(g, -1)


def _has_cycle_sign(g: GameGraph, sign: int) -> bool:
    """Bellman-Ford style check for a cycle with positive (sign=+1) or
    negative (sign=-1) total weight."""
    n = g.n
    best = [0] * n
    for round_ in range(n):
        changed = False
        for e in g.edges:
            cand = best[e.src] + sign * e.weight
            if cand > best[e.dst]:
                best[e.dst] = cand
                changed = True
        if not changed:
            return False
    return changed


def solve_ocpg_bounded(
    p: OneCounterParityGame,
    bound: int,
    escape_down: Optional[Mapping[int, int]] = None,
    escape_up: Optional[Mapping[int, int]] = None,
) -> ThreeValuedRegions:
    """Clamp the counter to [-bound, bound] and solve the finite parity
    game twice: optimistically (escapes count for Eve) and pessimistically
    (for Adam).  EVE verdicts come from the pessimistic run and ADAM
    verdicts from the optimistic run, so both are sound for the true
    infinite game; the rest is UNKNOWN.

    `escape_down`/`escape_up` optionally pin, per escape-target vertex,
    the priority an escaping play is worth in both runs; callers use this
    when they can prove what such a play is worth in the true game.  Games
    without zero tests do not depend on the counter at all and are solved
    directly.

    Only configurations reachable from counter 0 are materialized; a
    configuration whose owner cannot move (zero tests disabled, no counter
    edges) is lost by its owner.
    """
    if bound < 1:
        raise GameError(f"counter bound {bound} must be positive")
    if not p.zero_edges:
        flat = ParityGame(
            names=p.names,
            owner=p.owner,
            edges=tuple(PEdge(e.src, e.dst) for e in p.edges),
            priority=p.priority,
            initial=p.initial,
        )
        solved = solve_parity(flat)
        win_eve = set()
        win_adam = set()
        for v in range(p.n):
            target = win_eve if v in solved.win_eve else win_adam
            for c in range(-bound, bound + 1):
                target.add((v, c))
        initial = Verdict.EVE if p.initial in solved.win_eve else Verdict.ADAM
        return ThreeValuedRegions(
            win_eve=frozenset(win_eve),
            win_adam=frozenset(win_adam),
            unknown=frozenset(),
            bound=bound,
            initial_verdict=initial,
        )

    escape_down = escape_down or {}
    escape_up = escape_up or {}
    configs: list[Config] = []
    index: dict[Config, int] = {}

    def intern(cfg: Config) -> int:
        i = index.get(cfg)
        if i is None:
            i = len(configs)
            index[cfg] = i
            configs.append(cfg)
        return i

    starts = [(v, 0) for v in range(p.n)]
    for cfg in starts:
        intern(cfg)
    # reachable closure within the clamp; escapes carry either a proven
    # priority or None for the run-dependent limbo
    frontier = list(range(len(configs)))
    moves: dict[int, list[tuple[str, Optional[int]]]] = {}
    while frontier:
        ci = frontier.pop()
        v, c = configs[ci]
        out: list[tuple[str, Optional[int]]] = []
        for j in p.out_edges[v]:
            e = p.edges[j]
            c2 = c + e.weight
            if -bound <= c2 <= bound:
                before = len(configs)
                ti = intern((e.dst, c2))
                if ti == before:
                    frontier.append(ti)
                out.append(("cfg", ti))
            else:
                pinned = (escape_down if c2 < -bound else escape_up).get(e.dst)
                out.append(("escape", pinned))
        if c == 0:
            for j in p.out_zero[v]:
                z = p.zero_edges[j]
                before = len(configs)
                ti = intern((z.dst, 0))
                if ti == before:
                    frontier.append(ti)
                out.append(("cfg", ti))
        moves[ci] = out

    n_cfg = len(configs)
    pinned_priorities = sorted(
        {prio for out in moves.values() for kind, prio in out
         if kind == "escape" and prio is not None}
    )
    pin_sink = {prio: n_cfg + k for k, prio in enumerate(pinned_priorities)}
    open_v = n_cfg + len(pin_sink)
    stuck_eve, stuck_adam = open_v + 1, open_v + 2

    def build(open_priority: int) -> ParityGame:
        names = [f"c{v}_{c}" for v, c in configs]
        names += [f"pin{prio}" for prio in pinned_priorities]
        names += ["limbo", "stuck_eve", "stuck_adam"]
        owner = [p.owner[v] for v, _ in configs]
        owner += [Player.EVE] * (len(pin_sink) + 2) + [Player.ADAM]
        priority = [p.priority[v] for v, _ in configs]
        priority += pinned_priorities + [open_priority, 1, 0]
        edges = []
        for ci in range(n_cfg):
            out = moves[ci]
            if not out:
                v, _ = configs[ci]
                target = stuck_eve if p.owner[v] is Player.EVE else stuck_adam
                edges.append(PEdge(ci, target))
                continue
            for kind, val in out:
                if kind == "cfg":
                    edges.append(PEdge(ci, val))
                elif val is not None:
                    edges.append(PEdge(ci, pin_sink[val]))
                else:
                    edges.append(PEdge(ci, open_v))
        for sink in list(pin_sink.values()) + [open_v, stuck_eve, stuck_adam]:
            edges.append(PEdge(sink, sink))
        return ParityGame(
            names=tuple(names),
            owner=tuple(owner),
            edges=tuple(edges),
            priority=tuple(priority),
            initial=index.get((p.initial, 0), 0),
        )

    optimistic = solve_parity(build(0))
    pessimistic = solve_parity(build(1))

    win_eve = frozenset(configs[ci] for ci in range(n_cfg) if ci in pessimistic.win_eve)
    win_adam = frozenset(configs[ci] for ci in range(n_cfg) if ci in optimistic.win_adam)
    unknown = frozenset(configs) - win_eve - win_adam
    assert not (win_eve & win_adam), "optimistic and pessimistic runs disagree"
    init_cfg = (p.initial, 0)
    if init_cfg in win_eve:
        initial = Verdict.EVE
    elif init_cfg in win_adam:
        initial = Verdict.ADAM
    else:
        initial = Verdict.UNKNOWN
    return ThreeValuedRegions(
        win_eve=win_eve,
        win_adam=win_adam,
        unknown=unknown,
        bound=bound,
        initial_verdict=initial,
    )


def default_bound(g: GameGraph, iu: IntervalUnion) -> int:
    """max |finite endpoint| + |V| * W + 2: wide enough that an escaping
    play is below (above) every region boundary forever when the graph has
    no positive (negative) cycles, and that the punish gadgets always have
    room to reach their zero test."""
    pm = integerize(iu)
    endpoints = [abs(x) for lo, hi in pm.intervals for x in (lo, hi) if isinstance(x, int)]
    base = max(endpoints, default=0)
    return base + g.n * max_abs_weight(g) + 2


def solve_total_interval(
    g: GameGraph, iu: IntervalUnion, bound: Optional[int] = None
) -> ThreeValuedRegions:
    """Reduce to a one-counter parity game and solve under the clamp.

    When the objective has no integer points at all Adam wins everywhere
    outright (finite totals are integers and infinite totals need an
    unbounded interval), reported without touching the reduction.
    """
    pm = integerize(iu)
    if pm.is_empty:
        verdicts = {name: Verdict.ADAM for name in g.names}
        return ThreeValuedRegions(
            win_eve=frozenset(),
            win_adam=frozenset((v, 0) for v in range(g.n)),
            unknown=frozenset(),
            bound=bound if bound is not None else 0,
            initial_verdict=Verdict.ADAM,
            verdicts=verdicts,
        )
    ocpg = totalsum_to_ocpg(g, iu)
    b = bound if bound is not None else default_bound(g, iu)
    safe = b >= default_bound(g, iu)

    r = pm.r
    # the pumping gadget's escapes have known winners: moving away from
    # zero, the pump never reaches its zero test again (top priority is
    # odd), while overshooting into the pump lets Eve ride it back to the
    # test and stop at the winning sink
    v_top, v_bot, v_zero = ocpg.n - 1, ocpg.n - 2, ocpg.n - 3
    escape_down: dict[int, int] = {v_bot: 2 * r + 1, v_top: 2 * r}
    escape_up: dict[int, int] = {v_top: 2 * r + 1, v_bot: 2 * r}
    fabric = [v for v in range(ocpg.n) if v not in (v_top, v_bot, v_zero)]
    if safe and not _has_positive_cycle(g):
        # an escape below the clamp stays below every region boundary
        lo_first = pm.intervals[0][0]
        prio = 2 if isinstance(lo_first, Infinity) else 1
        for v in fabric:
            escape_down[v] = prio
    if safe and not _has_negative_cycle(g):
        hi_last = pm.intervals[-1][1]
        prio = 2 * r if isinstance(hi_last, Infinity) else 2 * r + 1
        for v in fabric:
            escape_up[v] = prio
    solved = solve_ocpg_bounded(ocpg, b, escape_down=escape_down, escape_up=escape_up)

    omega0 = omega_I(0, pm)
    regions = assertable_regions(pm)
    verdicts = {}
    for v in range(g.n):
        start = copy_vertex_index(regions, v, 1, omega0)
        verdicts[g.names[v]] = solved.verdict((start, 0))
    return ThreeValuedRegions(
        win_eve=solved.win_eve,
        win_adam=solved.win_adam,
        unknown=solved.unknown,
        bound=b,
        initial_verdict=verdicts[g.names[g.initial]],
        verdicts=verdicts,
    )


def countdown_to_total(cd: CountdownInstance) -> tuple[GameGraph, IntervalUnion]:
    """Total-sum game in which Eve wins iff she wins the countdown game.

    A fresh entry vertex charges the initial credit, every Eve vertex may
    stop at a zero-weight sink, and every Eve edge gets a twin that takes
    the same step but stops immediately; the objective is the singleton
    {0}.  (A credit-guessing variant for unit weights would add a +1 loop
    on the entry vertex; it is a trivial variant and not provided.)
    """
    taken = set(cd.names)

    def fresh(base: str) -> str:
        name = base
        suffix = 0
        while name in taken:
            suffix += 1
            name = f"{base}_{suffix}"
        taken.add(name)
        return name

    names = list(cd.names)
    owner = list(cd.owner)
    v_entry = len(names)
    names.append(fresh("start"))
    owner.append(Player.EVE)
    v_stop = len(names)
    names.append(fresh("stop"))
    owner.append(Player.EVE)

    edges = [Edge(e.src, e.dst, e.weight) for e in cd.edges]
    for e in cd.edges:
        if cd.owner[e.src] is Player.EVE:
            edges.append(Edge(e.src, v_stop, e.weight))
    for v in range(len(cd.names)):
        if cd.owner[v] is Player.EVE:
            edges.append(Edge(v, v_stop, 0))
    edges.append(Edge(v_entry, cd.initial, cd.credit))
    edges.append(Edge(v_stop, v_stop, 0))

    g = GameGraph(
        names=tuple(names), owner=tuple(owner), edges=tuple(edges), initial=v_entry
    )
    iu = IntervalUnion((Interval(Fraction(0), Fraction(0)),))
    return g, iu


# ---------------------------------------------------------------------------
# one-counter documents (emitted by the reduce command)

def serialize_ocpg(p: OneCounterParityGame, comment: Optional[str] = None) -> str:
    doc: dict = {}
    if comment is not None:
        doc["comment"] = comment
    doc["vertices"] = [
        {"id": name, "owner": owner.value, "priority": prio}
        for name, owner, prio in zip(p.names, p.owner, p.priority)
    ]
    doc["edges"] = [
        {"src": p.names[e.src], "dst": p.names[e.dst], "weight": e.weight}
        for e in p.edges
    ]
    doc["zero_edges"] = [
        {"src": p.names[z.src], "dst": p.names[z.dst]} for z in p.zero_edges
    ]
    doc["initial"] = p.names[p.initial]
    doc["objective"] = {"payoff": "ocpg"}
    return json.dumps(doc, indent=2) + "\n"


def parse_ocpg(text: str) -> OneCounterParityGame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("document root must be an object")
    obj = doc.get("objective")
    if not isinstance(obj, dict) or obj.get("payoff") != "ocpg":
        raise MalformedDocument("not a one-counter parity document")
    names, owners, priorities = _parse_vertices(doc)
    for name, p in zip(names, priorities):
        if p is None:
            raise MalformedDocument(f"vertex {name!r}: missing priority")
    index_of = {name: i for i, name in enumerate(names)}
    edges = _parse_edges(doc, index_of, weight_required=True)
    zero_edges = []
    for entry in doc.get("zero_edges", []):
        try:
            zero_edges.append(ZEdge(index_of[entry["src"]], index_of[entry["dst"]]))
        except KeyError as exc:
            raise UnknownVertexReference(f"zero edge references {exc.args[0]!r}")
    if doc["initial"] not in index_of:
        raise UnknownVertexReference(f"initial vertex {doc['initial']!r} not listed")
    return OneCounterParityGame(
        names=tuple(names),
        owner=tuple(owners),
        priority=tuple(priorities),
        edges=tuple(CEdge(e.src, e.dst, e.weight) for e in edges),
        zero_edges=tuple(zero_edges),
        initial=index_of[doc["initial"]],
    )
