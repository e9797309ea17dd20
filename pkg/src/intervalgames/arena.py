"""Core data model: weighted game graphs, interval unions, objectives.

Everything here is exact: weights are integers, all other numeric data
(interval endpoints, thresholds, discount factors) are `fractions.Fraction`.
Floating point never participates in a decision.

All types are immutable after construction and safe to share between
concurrent tasks; the operations in this module are pure functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union


class GameError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class DocumentError(GameError):
    """A document could not be parsed or validated."""

    exit_code = 2


class MalformedDocument(DocumentError):
    pass


class UnknownVertexReference(DocumentError):
    pass


class DeadEndVertexError(DocumentError):
    """A vertex has no outgoing edge.

    Raised while validating input documents, and also by `subgame` when a
    removal strands a vertex; in the latter case it signals a solver bug.
    """

    def __init__(self, vertex: str):
        super().__init__(f"vertex {vertex!r} has no outgoing edge")
        self.vertex = vertex


class LambdaOutOfRange(DocumentError):
    pass


class EmptyInterval(DocumentError):
    pass


class BadParameters(DocumentError):
    pass


class UnsupportedObjective(GameError):
    """The instance is valid but the requested solve is not supported."""

    exit_code = 3


class Player(Enum):
    EVE = "eve"
    ADAM = "adam"

    @property
    def opponent(self) -> "Player":
        return Player.ADAM if self is Player.EVE else Player.EVE


class Verdict(Enum):
    EVE = "eve"
    ADAM = "adam"
    UNKNOWN = "unknown"


class Payoff(Enum):
    LIMINF = "liminf"
    LIMSUP = "limsup"
    MP_INF = "mp-inf"
    MP_SUP = "mp-sup"
    DISCOUNTED = "discounted"
    TOTAL_INF = "total-inf"
    TOTAL_SUP = "total-sup"


# sup-style payoffs normalize to their inf counterpart by weight negation
_SUP_TO_INF = {
    Payoff.LIMSUP: Payoff.LIMINF,
    Payoff.MP_SUP: Payoff.MP_INF,
    Payoff.TOTAL_SUP: Payoff.TOTAL_INF,
}


class Infinity:
    """Signed infinity, totally ordered against Fraction and int."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __neg__(self) -> "Infinity":
        return MINUS_INF if self.sign > 0 else PLUS_INF

    def __eq__(self, other) -> bool:
        return isinstance(other, Infinity) and other.sign == self.sign

    def __hash__(self) -> int:
        return hash(("Infinity", self.sign))

    def _cmp(self, other) -> Optional[int]:
        if isinstance(other, Infinity):
            return (self.sign > other.sign) - (self.sign < other.sign)
        if isinstance(other, (int, Fraction)):
            return self.sign
        return None

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __repr__(self) -> str:
        return "inf" if self.sign > 0 else "-inf"


PLUS_INF = Infinity(1)
MINUS_INF = Infinity(-1)

ExtRational = Union[Fraction, Infinity]


def parse_rational(text) -> Fraction:
    """Parse "p/q" or "n"; JSON integers are accepted, floats are not."""
    if isinstance(text, bool):
        raise MalformedDocument(f"expected a rational, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedDocument(f"bad rational {text!r}") from exc
    raise MalformedDocument(f"expected a rational, got {text!r}")


def parse_ext(text) -> ExtRational:
    """Like `parse_rational` but also accepts "inf" and "-inf"."""
    if isinstance(text, str):
        s = text.strip()
        if s in ("inf", "+inf"):
            return PLUS_INF
        if s == "-inf":
            return MINUS_INF
    return parse_rational(text)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_ext(x: ExtRational) -> str:
    if isinstance(x, Infinity):
        return repr(x)
    return format_rational(x)


class Edge(NamedTuple):
    src: int
    dst: int
    weight: int


@dataclass(frozen=True)
class GameGraph:
    """Finite arena: named vertices with owners, integer-weighted edges.

    Vertex identifiers are strings in documents; internally vertices are
    dense indices in document order, which is also the universal tie-break
    order for strategy choices.
    """

    names: tuple[str, ...]
    owner: tuple[Player, ...]
    edges: tuple[Edge, ...]
    initial: int

    def __post_init__(self):
        n = len(self.names)
        if n == 0:
            raise MalformedDocument("a game needs at least one vertex")
        if len(set(self.names)) != n:
            raise MalformedDocument("duplicate vertex identifiers")
        if len(self.owner) != n:
            raise MalformedDocument("owner list does not match vertex list")
        if not 0 <= self.initial < n:
            raise UnknownVertexReference(f"initial vertex index {self.initial}")
        has_out = [False] * n
        for e in self.edges:
            if not (0 <= e.src < n and 0 <= e.dst < n):
                raise UnknownVertexReference(f"edge {e} references a missing vertex")
            if not isinstance(e.weight, int) or isinstance(e.weight, bool):
                raise MalformedDocument(f"edge weight {e.weight!r} is not an integer")
            has_out[e.src] = True
        for v, ok in enumerate(has_out):
            if not ok:
                raise DeadEndVertexError(self.names[v])

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices grouped by source vertex, in edge-list order."""
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

    @cached_property
    def index_of(self) -> Mapping[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def swap_owners(self) -> "GameGraph":
        return GameGraph(
            names=self.names,
            owner=tuple(o.opponent for o in self.owner),
            edges=self.edges,
            initial=self.initial,
        )

    def negate_weights(self) -> "GameGraph":
        return GameGraph(
            names=self.names,
            owner=self.owner,
            edges=tuple(Edge(e.src, e.dst, -e.weight) for e in self.edges),
            initial=self.initial,
        )


@dataclass(frozen=True)
class Interval:
    """One nonempty interval of the extended real line.

    Singletons have lo == hi with both endpoints closed.  Infinite
    endpoints are always open.
    """

    lo: ExtRational
    hi: ExtRational
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if isinstance(self.lo, Infinity) and not self.lo_open:
            raise EmptyInterval("infinite endpoints must be open")
        if isinstance(self.hi, Infinity) and not self.hi_open:
            raise EmptyInterval("infinite endpoints must be open")
        if self.lo == PLUS_INF or self.hi == MINUS_INF:
            raise EmptyInterval(f"empty interval {self}")
        if self.lo == self.hi and (self.lo_open or self.hi_open):
            raise EmptyInterval(f"empty interval {self}")
        if not self.lo == self.hi and not self.lo < self.hi:
            raise EmptyInterval(f"empty interval {self}")

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def width(self) -> ExtRational:
        """hi - lo; PLUS_INF when either endpoint is infinite."""
        if isinstance(self.lo, Infinity) or isinstance(self.hi, Infinity):
            return PLUS_INF
        return self.hi - self.lo

    def contains(self, x: ExtRational) -> bool:
        if x == PLUS_INF:
            return self.hi == PLUS_INF
        if x == MINUS_INF:
            return self.lo == MINUS_INF
        if x < self.lo or (x == self.lo and self.lo_open):
            return False
        if x > self.hi or (x == self.hi and self.hi_open):
            return False
        return True

    def intersects_closed(self, lo: ExtRational, hi: ExtRational) -> bool:
        """Does this interval meet the closed interval [lo, hi]?"""
        if self.lo > hi or (self.lo == hi and self.lo_open):
            return False
        if self.hi < lo or (self.hi == lo and self.hi_open):
            return False
        return True

    def __repr__(self) -> str:
        lb = "(" if self.lo_open else "["
        rb = ")" if self.hi_open else "]"
        return f"{lb}{format_ext(self.lo)},{format_ext(self.hi)}{rb}"


def _merges_with(cur: Interval, nxt: Interval) -> bool:
    # sorted by lo; they merge when overlapping or touching with at least
    # one closed endpoint at the touch point, e.g. [0,1] + (1,2] -> [0,2]
    if nxt.lo < cur.hi:
        return True
    if nxt.lo == cur.hi:
        return not (nxt.lo_open and cur.hi_open)
    return False


@dataclass(frozen=True)
class IntervalUnion:
    """Canonical ordered union of pairwise disjoint intervals.

    Construction sorts and merges adjacent intervals whose set union is
    itself an interval, so every union has a unique representation and the
    interval count is well defined.
    """

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        ivs = sorted(
            self.intervals,
            key=lambda j: (
                (j.lo == MINUS_INF and -1) or 0,
                j.lo if not isinstance(j.lo, Infinity) else 0,
                j.lo_open,
            ),
        )
        merged: list[Interval] = []
        for j in ivs:
            if merged and _merges_with(merged[-1], j):
                cur = merged[-1]
                hi, hi_open = cur.hi, cur.hi_open
                if j.hi > hi or (j.hi == hi and not j.hi_open):
                    hi, hi_open = j.hi, j.hi_open
                merged[-1] = Interval(cur.lo, hi, cur.lo_open, hi_open)
            else:
                merged.append(j)
        object.__setattr__(self, "intervals", tuple(merged))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def has_singleton_interval(self) -> bool:
        return any(j.is_singleton for j in self.intervals)

    @property
    def has_singleton_gap(self) -> bool:
        for a, b in zip(self.intervals, self.intervals[1:]):
            if a.hi == b.lo and a.hi_open and b.lo_open:
                return True
        return False

    @property
    def inf(self) -> Optional[ExtRational]:
        return self.intervals[0].lo if self.intervals else None

    @property
    def sup(self) -> Optional[ExtRational]:
        return self.intervals[-1].hi if self.intervals else None

    def negate(self) -> "IntervalUnion":
        """Mirror through 0: each [a,b] becomes [-b,-a], flags swapped."""
        return IntervalUnion(
            tuple(Interval(-j.hi, -j.lo, j.hi_open, j.lo_open) for j in self.intervals)
        )

    def __repr__(self) -> str:
        if not self.intervals:
            return "{}"
        return " u ".join(repr(j) for j in self.intervals)


def contains(iu: IntervalUnion, x: ExtRational) -> bool:
    """Exact membership.  PLUS_INF is in the union iff some interval is
    right-unbounded, MINUS_INF iff some interval is left-unbounded."""
    return any(j.contains(x) for j in iu.intervals)


def complement_intervals(iu: IntervalUnion) -> IntervalUnion:
    """Canonical complement of the union in the real line."""
    pieces = []
    lo: ExtRational = MINUS_INF
    lo_open = True
    for j in iu.intervals:
        # gap ends where j begins; it contains the boundary iff j does not
        hi, hi_open = j.lo, not j.lo_open
        nonempty = lo < hi or (lo == hi and not lo_open and not hi_open)
        if nonempty:
            pieces.append(Interval(lo, hi, lo_open, hi_open))
        lo, lo_open = j.hi, not j.hi_open
    if lo != PLUS_INF:
        pieces.append(Interval(lo, PLUS_INF, lo_open, True))
    elif not iu.intervals:
        pieces.append(Interval(MINUS_INF, PLUS_INF, True, True))
    return IntervalUnion(tuple(pieces))


@dataclass(frozen=True)
class Objective:
    payoff: Payoff
    intervals: IntervalUnion
    lam: Optional[Fraction] = None

    def __post_init__(self):
        if self.payoff is Payoff.DISCOUNTED:
            if self.lam is None:
                raise LambdaOutOfRange("discounted objective needs a discount factor")
            if not (0 < self.lam < 1):
                raise LambdaOutOfRange(f"discount factor {self.lam} not in (0,1)")
        elif self.lam is not None:
            raise MalformedDocument("discount factor given for a non-discounted payoff")


@dataclass(frozen=True)
class Regions:
    """Solved partition of the vertex set, with optional positional
    strategies (vertex index -> chosen edge index)."""

    win_eve: frozenset[int]
    win_adam: frozenset[int]
    unknown: frozenset[int] = frozenset()
    eve_strategy: Optional[Mapping[int, int]] = None
    adam_strategy: Optional[Mapping[int, int]] = None

    def check_partition(self, n: int) -> None:
        total = len(self.win_eve) + len(self.win_adam) + len(self.unknown)
        assert total == n, "regions do not cover the vertex set"
        assert not (self.win_eve & self.win_adam)
        assert not (self.win_eve & self.unknown)
        assert not (self.win_adam & self.unknown)

    def verdict(self, v: int) -> Verdict:
        if v in self.win_eve:
            return Verdict.EVE
        if v in self.win_adam:
            return Verdict.ADAM
        return Verdict.UNKNOWN


# ---------------------------------------------------------------------------
# documents

_PAYOFF_BY_NAME = {p.value: p for p in Payoff}


def _expect_keys(obj: dict, required: Sequence[str], context: str) -> None:
    for key in required:
        if key not in obj:
            raise MalformedDocument(f"{context}: missing key {key!r}")


def _parse_vertices(doc: dict):
    _expect_keys(doc, ("vertices", "edges", "initial"), "game document")
    names: list[str] = []
    owners: list[Player] = []
    priorities: list[Optional[int]] = []
    for entry in doc["vertices"]:
        if not isinstance(entry, dict):
            raise MalformedDocument(f"bad vertex entry {entry!r}")
        _expect_keys(entry, ("id", "owner"), "vertex")
        name = entry["id"]
        if not isinstance(name, str):
            raise MalformedDocument(f"vertex id {name!r} is not a string")
        owner = entry["owner"]
        if owner not in ("eve", "adam"):
            raise MalformedDocument(f"vertex {name!r}: owner must be 'eve' or 'adam'")
        names.append(name)
        owners.append(Player(owner))
        priorities.append(entry.get("priority"))
    return names, owners, priorities


def _parse_edges(doc: dict, index_of: Mapping[str, int], weight_required: bool):
    edges: list[Edge] = []
    for entry in doc["edges"]:
        if not isinstance(entry, dict):
            raise MalformedDocument(f"bad edge entry {entry!r}")
        _expect_keys(entry, ("src", "dst"), "edge")
        try:
            src = index_of[entry["src"]]
            dst = index_of[entry["dst"]]
        except KeyError as exc:
            raise UnknownVertexReference(f"edge references unknown vertex {exc.args[0]!r}")
        weight = entry.get("weight", None)
        if weight is None:
            if weight_required:
                raise MalformedDocument(f"edge {entry!r}: missing weight")
            weight = 0
        if not isinstance(weight, int) or isinstance(weight, bool):
            raise MalformedDocument(f"edge {entry!r}: weight must be an integer")
        edges.append(Edge(src, dst, weight))
    return edges


def _parse_interval(entry: dict) -> Interval:
    if not isinstance(entry, dict):
        raise MalformedDocument(f"bad interval entry {entry!r}")
    _expect_keys(entry, ("lo", "hi"), "interval")
    lo = parse_ext(entry["lo"])
    hi = parse_ext(entry["hi"])
    lo_open = bool(entry.get("lo_open", isinstance(lo, Infinity)))
    hi_open = bool(entry.get("hi_open", isinstance(hi, Infinity)))
    return Interval(lo, hi, lo_open, hi_open)


def parse_game(text: str) -> tuple[GameGraph, Objective]:
    """Parse and validate a game document.

    Documents with payoff "parity" are not payoff games; they are handled
    by `parity.parse_parity_game` and accepted only by the reduce/check
    commands.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("document root must be an object")
    names, owners, _ = _parse_vertices(doc)
    graph_index = {name: i for i, name in enumerate(names)}
    edges = _parse_edges(doc, graph_index, weight_required=True)
    if doc["initial"] not in graph_index:
        raise UnknownVertexReference(f"initial vertex {doc['initial']!r} not listed")

    _expect_keys(doc, ("objective",), "game document")
    obj = doc["objective"]
    if not isinstance(obj, dict):
        raise MalformedDocument("objective must be an object")
    _expect_keys(obj, ("payoff",), "objective")
    payoff_name = obj["payoff"]
    if payoff_name == "parity":
        raise UnsupportedObjective("parity documents are only accepted by reduce/check")
    if payoff_name not in _PAYOFF_BY_NAME:
        raise MalformedDocument(f"unknown payoff {payoff_name!r}")
    payoff = _PAYOFF_BY_NAME[payoff_name]
    lam = None
    if payoff is Payoff.DISCOUNTED:
        _expect_keys(obj, ("lambda",), "discounted objective")
        lam = parse_rational(obj["lambda"])
    elif "lambda" in obj:
        raise MalformedDocument("'lambda' is only meaningful for the discounted payoff")
    intervals = IntervalUnion(tuple(_parse_interval(e) for e in obj.get("intervals", [])))

    graph = GameGraph(
        names=tuple(names),
        owner=tuple(owners),
        edges=tuple(edges),
        initial=graph_index[doc["initial"]],
    )
    return graph, Objective(payoff=payoff, intervals=intervals, lam=lam)


def _interval_to_doc(j: Interval) -> dict:
    return {
        "lo": format_ext(j.lo),
        "hi": format_ext(j.hi),
        "lo_open": j.lo_open,
        "hi_open": j.hi_open,
    }


def serialize_game(g: GameGraph, o: Objective, comment: Optional[str] = None) -> str:
    doc: dict = {}
    if comment is not None:
        doc["comment"] = comment
    doc["vertices"] = [
        {"id": name, "owner": owner.value} for name, owner in zip(g.names, g.owner)
    ]
    doc["edges"] = [
        {"src": g.names[e.src], "dst": g.names[e.dst], "weight": e.weight}
        for e in g.edges
    ]
    doc["initial"] = g.names[g.initial]
    objective: dict = {"payoff": o.payoff.value}
    if o.lam is not None:
        objective["lambda"] = format_rational(o.lam)
    objective["intervals"] = [_interval_to_doc(j) for j in o.intervals.intervals]
    doc["objective"] = objective
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# operations

def normalize(g: GameGraph, o: Objective) -> tuple[GameGraph, Objective]:
    """Rewrite sup-style payoffs as their inf counterpart.

    Negating every weight and mirroring every interval preserves the
    winner; inf-style and discounted objectives are returned unchanged.
    """
    if o.payoff not in _SUP_TO_INF:
        return g, o
    return g.negate_weights(), Objective(
        payoff=_SUP_TO_INF[o.payoff],
        intervals=o.intervals.negate(),
        lam=None,
    )


def subgame(g: GameGraph, remove: Iterable[int]) -> GameGraph:
    """Induced game on vertices minus `remove`; re-validates invariants.

    Raises DeadEndVertexError when removal strands a vertex, which in
    solver context signals a bug rather than bad input.  If the initial
    vertex is removed the lowest surviving index becomes initial (solvers
    compute regions for every vertex, so this choice is inert).
    """
    sub, _, _ = subgame_with_map(g, remove)
    return sub


def subgame_with_map(
    g: GameGraph, remove: Iterable[int]
) -> tuple[GameGraph, tuple[int, ...], tuple[int, ...]]:
    """`subgame` plus vertex and edge maps back to the original indices."""
    removed = set(remove)
    keep = [v for v in range(g.n) if v not in removed]
    if not keep:
        raise MalformedDocument("cannot remove every vertex")
    new_index = {v: i for i, v in enumerate(keep)}
    edge_map = []
    edges = []
    for i, e in enumerate(g.edges):
        if e.src in new_index and e.dst in new_index:
            edges.append(Edge(new_index[e.src], new_index[e.dst], e.weight))
            edge_map.append(i)
    initial = new_index.get(g.initial, 0)
    sub = GameGraph(
        names=tuple(g.names[v] for v in keep),
        owner=tuple(g.owner[v] for v in keep),
        edges=tuple(edges),
        initial=initial,
    )
    return sub, tuple(keep), tuple(edge_map)


def max_abs_weight(g: GameGraph) -> int:
    return max((abs(e.weight) for e in g.edges), default=0)
