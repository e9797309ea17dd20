"""Min-parity games: attractor computation and a Zielonka-style solver.

Convention: Eve wins a play iff the minimal priority seen infinitely
often is even.  The solver returns positional strategies for both players
on their winning regions; ties are broken toward the lowest-index edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

from .arena import (
    DeadEndVertexError,
    MalformedDocument,
    Player,
    Regions,
    UnknownVertexReference,
    _parse_edges,
    _parse_vertices,
)


class PEdge(NamedTuple):
    src: int
    dst: int


@dataclass(frozen=True)
class ParityGame:
    names: tuple[str, ...]
    owner: tuple[Player, ...]
    edges: tuple[PEdge, ...]
    priority: tuple[int, ...]
    initial: int

    def __post_init__(self):
        n = len(self.names)
        if n == 0:
            raise MalformedDocument("a parity game needs at least one vertex")
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
            has_out[e.src] = True
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
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        buckets: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            buckets[e.dst].append(i)
        return tuple(tuple(b) for b in buckets)


def parse_parity_game(text: str) -> ParityGame:
    """Parse a parity document: the game format with payoff "parity" and a
    per-vertex priority; edge weights are ignored."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("document root must be an object")
    obj = doc.get("objective")
    if not isinstance(obj, dict) or obj.get("payoff") != "parity":
        raise MalformedDocument("not a parity document")
    names, owners, priorities = _parse_vertices(doc)
    for name, p in zip(names, priorities):
        if p is None:
            raise MalformedDocument(f"vertex {name!r}: parity documents need a priority")
    index_of = {name: i for i, name in enumerate(names)}
    edges = _parse_edges(doc, index_of, weight_required=False)
    if doc["initial"] not in index_of:
        raise UnknownVertexReference(f"initial vertex {doc['initial']!r} not listed")
    return ParityGame(
        names=tuple(names),
        owner=tuple(owners),
        edges=tuple(PEdge(e.src, e.dst) for e in edges),
        priority=tuple(priorities),
        initial=index_of[doc["initial"]],
    )


def serialize_parity_game(p: ParityGame, comment: Optional[str] = None) -> str:
    doc: dict = {}
    if comment is not None:
        doc["comment"] = comment
    doc["vertices"] = [
        {"id": name, "owner": owner.value, "priority": prio}
        for name, owner, prio in zip(p.names, p.owner, p.priority)
    ]
    doc["edges"] = [{"src": p.names[e.src], "dst": p.names[e.dst]} for e in p.edges]
    doc["initial"] = p.names[p.initial]
    doc["objective"] = {"payoff": "parity"}
    return json.dumps(doc, indent=2) + "\n"


def attractor(
    game,
    target: Iterable[int],
    player: Player,
    within: Optional[frozenset[int]] = None,
) -> frozenset[int]:
    """Least set from which `player` can force reaching `target`.

    Works on any graph-like object exposing owner/edges/out_edges/in_edges
    (ParityGame or GameGraph).  `within` restricts play to a subset of
    vertices (edges leaving it do not exist); by default all vertices.
    """
    attr, _ = attractor_with_strategy(game, target, player, within)
    return attr


def attractor_with_strategy(
    game,
    target: Iterable[int],
    player: Player,
    within: Optional[frozenset[int]] = None,
) -> tuple[frozenset[int], dict[int, int]]:
    """Attractor plus, for player-owned vertices pulled in (excluding the
    target itself), the lowest-index edge that makes progress."""
    alive = frozenset(range(game.n)) if within is None else within
    attr = {v for v in target if v in alive}
    strategy: dict[int, int] = {}
    # countdown of not-yet-attracted successors for opponent vertices
    remaining = {}
    for v in alive:
        if game.owner[v] is not player:
            remaining[v] = sum(1 for i in game.out_edges[v] if game.edges[i].dst in alive)
    queue = sorted(attr)
    while queue:
        next_queue: set[int] = set()
        for u in queue:
            for i in game.in_edges[u]:
                v = game.edges[i].src
                if v not in alive or v in attr:
                    continue
                if game.owner[v] is player:
                    # lowest-index edge into the attractor before v joins,
                    # so progress toward the target is guaranteed
                    for j in game.out_edges[v]:
                        if game.edges[j].dst in attr:
                            strategy[v] = j
                            break
                    attr.add(v)
                    next_queue.add(v)
                else:
                    remaining[v] -= 1
                    if remaining[v] == 0:
                        attr.add(v)
                        next_queue.add(v)
        queue = sorted(next_queue)
    return frozenset(attr), strategy


def _only_priority_region(p: ParityGame, alive: frozenset[int], parity: int):
    """All of `alive` is won by the parity owner when every priority in it
    has that parity; strategy: lowest-index edge staying alive."""
    winner = Player.EVE if parity == 0 else Player.ADAM
    strat = {}
    for v in alive:
        if p.owner[v] is winner:
            for j in p.out_edges[v]:
                if p.edges[j].dst in alive:
                    strat[v] = j
                    break
    return winner, strat


def _solve(p: ParityGame, alive: frozenset[int]):
    """Zielonka recursion over an alive-mask; the second recursion is
    unrolled into a loop so stack depth stays proportional to the number
    of priority alternations rather than the vertex count."""
    adam_total: set[int] = set()
    adam_strat_total: dict[int, int] = {}
    eve_total: set[int] = set()
    eve_strat_total: dict[int, int] = {}
    while alive:
        d = min(p.priority[v] for v in alive)
        player = Player.EVE if d % 2 == 0 else Player.ADAM
        if all(p.priority[v] % 2 == d % 2 for v in alive):
            winner, strat = _only_priority_region(p, alive, d % 2)
            if winner is Player.EVE:
                eve_total |= alive
                eve_strat_total.update(strat)
            else:
                adam_total |= alive
                adam_strat_total.update(strat)
            break
        target = frozenset(v for v in alive if p.priority[v] == d)
        attr, attr_strat = attractor_with_strategy(p, target, player, alive)
        sub_eve, sub_adam, sub_se, sub_sa = _solve(p, alive - attr)
        opp_region = sub_adam if player is Player.EVE else sub_eve
        if not opp_region:
            # player wins everything still alive
            strat = dict(sub_se if player is Player.EVE else sub_sa)
            strat.update(attr_strat)
            for v in sorted(target):
                if p.owner[v] is player and v not in strat:
                    for j in p.out_edges[v]:
                        if p.edges[j].dst in alive:
                            strat[v] = j
                            break
            if player is Player.EVE:
                eve_total |= alive
                eve_strat_total.update(strat)
            else:
                adam_total |= alive
                adam_strat_total.update(strat)
            break
        opponent = player.opponent
        battr, battr_strat = attractor_with_strategy(p, opp_region, opponent, alive)
        opp_strat = dict(sub_sa if player is Player.EVE else sub_se)
        opp_strat.update(battr_strat)
        if opponent is Player.EVE:
            eve_total |= battr
            eve_strat_total.update(opp_strat)
        else:
            adam_total |= battr
            adam_strat_total.update(opp_strat)
        alive = alive - battr
    return (
        frozenset(eve_total),
        frozenset(adam_total),
        eve_strat_total,
        adam_strat_total,
    )


def solve_parity(p: ParityGame) -> Regions:
    """Exact winning partition with positional strategies for both players."""
    eve, adam, se, sa = _solve(p, frozenset(range(p.n)))
    regions = Regions(
        win_eve=eve,
        win_adam=adam,
        eve_strategy={v: j for v, j in se.items() if p.owner[v] is Player.EVE},
        adam_strategy={v: j for v, j in sa.items() if p.owner[v] is Player.ADAM},
    )
    regions.check_partition(p.n)
    return regions
