"""
ZX rewrite rules applied at explicitly named sites.

Each rule checks its structural precondition and raises RuleNotApplicableError
naming the failed check. Sites are addressed by spider and edge ids; spiders a
rule creates take ids from `RuleSite.new_ids` when given, otherwise fresh ids in
ascending order of the edges they are created on.
"""

import math
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from mbqaoa.core.errors import RuleNotApplicableError
from mbqaoa.zx.diagram import Edge, Spider, SpiderColor, ZxDiagram
from mbqaoa.zx.phase import Phase, PhaseLike


class Rule(str, Enum):
    """Rewrite rules."""
    FUSION = "S"
    IDENTITY = "Id"
    COLOR_CHANGE = "H"
    HH_CANCEL = "HH"
    PI_COPY = "pi"
    COPY = "copy"
    BIALGEBRA = "bialgebra"


class RuleSite(BaseModel):
    """Where (and in which direction) to apply a rule."""
    model_config = ConfigDict(frozen=True)

    spiders: Tuple[int, ...] = ()
    left: Tuple[int, ...] = ()  # bialgebra collapse: one side of the bipartite block
    right: Tuple[int, ...] = ()
    edge: Optional[int] = None  # identity insertion
    edges: Tuple[int, ...] = ()  # unfuse: edges handed to the new spider
    color: Optional[SpiderColor] = None  # identity insertion colour
    phase: Optional[Phase] = None  # unfuse: phase of the new spider
    new_ids: Tuple[int, ...] = ()
    reverse: bool = False


def site(*spiders: int, **fields: object) -> RuleSite:
    """Shorthand: site(3, 4) or site(7, edges=(2,), phase=Phase.pi(), reverse=True)."""
    if "phase" in fields and fields["phase"] is not None:
        fields["phase"] = Phase.coerce(fields["phase"])  # type: ignore[arg-type]
    return RuleSite(spiders=tuple(spiders), **fields)  # type: ignore[arg-type]


class _Ids:
    """Hands out new spider ids (requested ones first) and new edge ids."""

    def __init__(self, diagram: ZxDiagram, requested: Sequence[int]):
        self._requested = list(requested)
        self._next_node = diagram.fresh_node_id()
        self._next_edge = diagram.fresh_edge_id()
        self._taken = set(diagram.node_ids())

    def node(self) -> int:
        if self._requested:
            node = self._requested.pop(0)
            if node in self._taken:
                raise RuleNotApplicableError("ids", f"requested id {node} already in use")
        else:
            while self._next_node in self._taken:
                self._next_node += 1
            node = self._next_node
        self._taken.add(node)
        return node

    def edge(self) -> int:
        edge_id = self._next_edge
        self._next_edge += 1
        return edge_id


def _require(condition: bool, rule: Rule, check: str) -> None:
    if not condition:
        raise RuleNotApplicableError(rule.value, check)


def _spider(diagram: ZxDiagram, node: int, rule: Rule) -> Spider:
    _require(diagram.has_spider(node), rule, f"{node} is not a spider")
    return diagram.spider(node)


def _swap(diagram: ZxDiagram, spider: Spider) -> List[Spider]:
    return [spider if s.id == spider.id else s for s in diagram.spiders]


def _other_edges(diagram: ZxDiagram, node: int, excluded: Sequence[int]) -> List[Edge]:
    return sorted(
        (e for e in diagram.incident(node) if e.id not in excluded), key=lambda e: e.id
    )


def _repoint(edge: Edge, old: int, new: int) -> Edge:
    return edge.model_copy(
        update={"a": new if edge.a == old else edge.a, "b": new if edge.b == old else edge.b}
    )


# S: spider fusion and its inverse


def fuse(diagram: ZxDiagram, s1: int, s2: int) -> ZxDiagram:
    """
    Fuse two same-coloured spiders joined by at least one plain edge.

    Parallel plain edges between them vanish; parallel Hadamard edges become
    Hadamard self-loops, each worth a pi phase and a 1/sqrt(2) scalar.
    """
    rule = Rule.FUSION
    _require(s1 != s2, rule, "cannot fuse a spider with itself")
    a, b = _spider(diagram, s1, rule), _spider(diagram, s2, rule)
    _require(a.color == b.color, rule, f"colours differ ({a.color.value} vs {b.color.value})")
    between = diagram.edges_between(s1, s2)
    _require(any(not e.hadamard for e in between), rule, f"no plain edge {s1}-{s2}")

    phase = a.phase + b.phase
    scalar = diagram.scalar
    edges: List[Edge] = []
    for edge in diagram.edges:
        if edge.touches(s2):
            edge = _repoint(edge, s2, s1)
        if edge.is_self_loop and edge.a == s1:
            if edge.hadamard:
                phase = phase + Phase.pi()
                scalar /= math.sqrt(2.0)
            continue
        edges.append(edge)

    spiders = [s for s in diagram.spiders if s.id != s2]
    spiders = [a.with_phase(phase) if s.id == s1 else s for s in spiders]
    return diagram.replace(spiders=spiders, edges=edges, scalar=scalar)


def unfuse(
    diagram: ZxDiagram,
    node: int,
    moved_edges: Sequence[int],
    phase: PhaseLike = 0,
    new_id: Optional[int] = None,
) -> ZxDiagram:
    """Split a spider: a new same-coloured spider with `phase` takes `moved_edges`."""
    rule = Rule.FUSION
    original = _spider(diagram, node, rule)
    incident = {e.id: e for e in diagram.incident(node)}
    for edge_id in moved_edges:
        _require(edge_id in incident, rule, f"edge {edge_id} is not incident to {node}")
        _require(not incident[edge_id].is_self_loop, rule, "cannot move a self-loop")

    ids = _Ids(diagram, [new_id] if new_id is not None else [])
    fresh = ids.node()
    split = Phase.coerce(phase)
    edges = [_repoint(e, node, fresh) if e.id in moved_edges else e for e in diagram.edges]
    edges.append(Edge(id=ids.edge(), a=node, b=fresh, hadamard=False))
    spiders = _swap(diagram, original.with_phase(original.phase - split))
    spiders.append(Spider(id=fresh, color=original.color, phase=split))
    return diagram.replace(spiders=spiders, edges=edges)


# Id: identity removal / insertion


def remove_identity(diagram: ZxDiagram, node: int, rule: Rule = Rule.IDENTITY) -> ZxDiagram:
    """Drop a phase-free degree-2 spider, joining its neighbours."""
    spider = _spider(diagram, node, rule)
    _require(spider.phase.is_zero(), rule, f"spider {node} has phase {spider.phase}")
    incident = diagram.incident(node)
    _require(
        len(incident) == 2 and not any(e.is_self_loop for e in incident),
        rule,
        f"spider {node} does not have exactly two non-loop edges",
    )
    first, second = incident
    if rule is Rule.HH_CANCEL:
        _require(first.hadamard and second.hadamard, rule, "both edges must be Hadamard")

    joined = Edge(
        id=first.id,
        a=first.other(node),
        b=second.other(node),
        hadamard=first.hadamard != second.hadamard,
    )
    edges = [joined if e.id == first.id else e for e in diagram.edges if e.id != second.id]
    spiders = [s for s in diagram.spiders if s.id != node]
    return diagram.replace(spiders=spiders, edges=edges)


def insert_identity(
    diagram: ZxDiagram,
    edge_id: int,
    color: SpiderColor = SpiderColor.Z,
    new_id: Optional[int] = None,
) -> ZxDiagram:
    """Place a phase-free spider on an edge; the edge's Hadamard stays on the `a` side."""
    rule = Rule.IDENTITY
    try:
        edge = diagram.edge(edge_id)
    except KeyError:
        raise RuleNotApplicableError(rule.value, f"no edge {edge_id}")
    ids = _Ids(diagram, [new_id] if new_id is not None else [])
    fresh = ids.node()
    near = Edge(id=edge.id, a=edge.a, b=fresh, hadamard=edge.hadamard)
    far = Edge(id=ids.edge(), a=fresh, b=edge.b, hadamard=False)
    edges = [near if e.id == edge.id else e for e in diagram.edges] + [far]
    spiders = list(diagram.spiders) + [Spider(id=fresh, color=color, phase=Phase.zero())]
    return diagram.replace(spiders=spiders, edges=edges)


# H: colour change, HH cancellation


def color_change(diagram: ZxDiagram, node: int) -> ZxDiagram:
    """Flip a spider's colour and toggle the Hadamard flag on its non-loop edges."""
    spider = _spider(diagram, node, Rule.COLOR_CHANGE)
    edges = [
        e.model_copy(update={"hadamard": not e.hadamard})
        if e.touches(node) and not e.is_self_loop
        else e
        for e in diagram.edges
    ]
    spiders = _swap(diagram, spider.with_color(spider.color.flipped()))
    return diagram.replace(spiders=spiders, edges=edges)


def hh_cancel(diagram: ZxDiagram, node: int) -> ZxDiagram:
    """Two Hadamard edges in series through a phase-free spider become one plain edge."""
    return remove_identity(diagram, node, rule=Rule.HH_CANCEL)


# pi-copy and state copy


def pi_copy(
    diagram: ZxDiagram, pi_node: int, target: int, new_ids: Sequence[int] = ()
) -> ZxDiagram:
    """
    Push a degree-2 pi spider through an opposite-coloured spider.

    The target's phase is negated and a pi spider of the pushed colour appears on
    each of its other legs; the scalar picks up e^{i alpha}.
    """
    rule = Rule.PI_COPY
    pi_spider = _spider(diagram, pi_node, rule)
    target_spider = _spider(diagram, target, rule)
    _require(pi_spider.phase.is_pi(), rule, f"spider {pi_node} does not carry phase pi")
    _require(pi_spider.color != target_spider.color, rule, "colours must differ")
    pi_edges = diagram.incident(pi_node)
    _require(
        len(pi_edges) == 2 and not any(e.is_self_loop for e in pi_edges),
        rule,
        f"spider {pi_node} must have degree 2",
    )
    links = [e for e in pi_edges if e.other(pi_node) == target]
    _require(len(links) == 1, rule, f"exactly one edge {pi_node}-{target} required")
    link = links[0]
    _require(not link.hadamard, rule, f"edge {pi_node}-{target} must be plain")
    onward = pi_edges[1] if pi_edges[0].id == link.id else pi_edges[0]
    _require(
        not any(e.is_self_loop for e in diagram.incident(target)),
        rule,
        f"spider {target} has a self-loop",
    )

    ids = _Ids(diagram, new_ids)
    bridged = Edge(id=onward.id, a=onward.other(pi_node), b=target, hadamard=onward.hadamard)
    edges: List[Edge] = []
    new_spiders: List[Spider] = []
    legs = _other_edges(diagram, target, excluded=(link.id,))
    leg_ids = {e.id for e in legs}
    for edge in diagram.edges:
        if edge.id in (link.id, onward.id):
            continue
        if edge.id in leg_ids:
            fresh = ids.node()
            new_spiders.append(Spider(id=fresh, color=pi_spider.color, phase=Phase.pi()))
            edges.append(Edge(id=edge.id, a=target, b=fresh, hadamard=False))
            edges.append(
                Edge(id=ids.edge(), a=fresh, b=edge.other(target), hadamard=edge.hadamard)
            )
            continue
        edges.append(edge)
    edges.append(bridged)

    alpha = target_spider.phase.radians
    spiders = [s for s in diagram.spiders if s.id != pi_node]
    spiders = [target_spider.with_phase(-target_spider.phase) if s.id == target else s
               for s in spiders] + new_spiders
    return diagram.replace(
        spiders=spiders, edges=edges, scalar=diagram.scalar * np.exp(1j * alpha)
    )


def copy_state(
    diagram: ZxDiagram, state: int, target: int, new_ids: Sequence[int] = ()
) -> ZxDiagram:
    """Copy a degree-1 Pauli-phase spider through an opposite-coloured spider."""
    rule = Rule.COPY
    state_spider = _spider(diagram, state, rule)
    target_spider = _spider(diagram, target, rule)
    _require(state_spider.phase.is_pauli(), rule, f"spider {state} phase is not 0 or pi")
    _require(state_spider.color != target_spider.color, rule, "colours must differ")
    state_edges = diagram.incident(state)
    _require(
        len(state_edges) == 1 and not state_edges[0].is_self_loop,
        rule,
        f"spider {state} must have degree 1",
    )
    link = state_edges[0]
    _require(link.other(state) == target, rule, f"spider {state} is not attached to {target}")
    _require(not link.hadamard, rule, "edge must be plain")
    _require(
        not any(e.is_self_loop for e in diagram.incident(target)),
        rule,
        f"spider {target} has a self-loop",
    )

    ids = _Ids(diagram, new_ids)
    legs = _other_edges(diagram, target, excluded=(link.id,))
    leg_ids = {e.id for e in legs}
    edges: List[Edge] = []
    new_spiders: List[Spider] = []
    for edge in diagram.edges:
        if edge.id == link.id:
            continue
        if edge.id in leg_ids:
            fresh = ids.node()
            new_spiders.append(
                Spider(id=fresh, color=state_spider.color, phase=state_spider.phase)
            )
            edges.append(Edge(id=edge.id, a=fresh, b=edge.other(target), hadamard=edge.hadamard))
            continue
        edges.append(edge)

    k = len(legs)
    factor = math.sqrt(2.0) ** (1 - k)
    if state_spider.phase.is_pi():
        factor *= np.exp(1j * target_spider.phase.radians)
    spiders = [s for s in diagram.spiders if s.id not in (state, target)] + new_spiders
    return diagram.replace(spiders=spiders, edges=edges, scalar=diagram.scalar * factor)


# Bialgebra


def bialgebra_collapse(
    diagram: ZxDiagram, left: Sequence[int], right: Sequence[int], new_ids: Sequence[int] = ()
) -> ZxDiagram:
    """
    Replace a complete bipartite block by a connected pair.

    `left` spiders share one colour, `right` the other, all phase-free; every
    left/right pair is joined by one plain edge and each spider has exactly one
    further edge. The new spiders are [A, B]: A takes the left spiders' outer
    edges with the right colour, B the right spiders' outer edges with the left
    colour.
    """
    rule = Rule.BIALGEBRA
    _require(len(left) >= 1 and len(right) >= 1, rule, "both sides must be non-empty")
    _require(not set(left) & set(right), rule, "sides overlap")
    block = set(left) | set(right)
    lefts = [_spider(diagram, n, rule) for n in left]
    rights = [_spider(diagram, n, rule) for n in right]
    left_color = lefts[0].color
    _require(all(s.color == left_color for s in lefts), rule, "left side colours differ")
    _require(
        all(s.color == left_color.flipped() for s in rights), rule, "right side must be opposite"
    )
    _require(all(s.phase.is_zero() for s in lefts + rights), rule, "block spiders need phase 0")

    internal: List[int] = []
    for l_id in left:
        for r_id in right:
            between = diagram.edges_between(l_id, r_id)
            _require(
                len(between) == 1 and not between[0].hadamard,
                rule,
                f"need exactly one plain edge {l_id}-{r_id}",
            )
            internal.append(between[0].id)

    outer: Dict[int, Edge] = {}
    for node in block:
        rest = [e for e in diagram.incident(node) if e.id not in internal]
        _require(len(rest) == 1, rule, f"spider {node} must have exactly one outer edge")
        _require(
            not rest[0].is_self_loop and rest[0].other(node) not in block,
            rule,
            f"outer edge of {node} must leave the block",
        )
        outer[node] = rest[0]

    ids = _Ids(diagram, new_ids)
    hub_a, hub_b = ids.node(), ids.node()
    edges = [e for e in diagram.edges if e.id not in internal and e.id not in
             {outer[n].id for n in block}]
    for node in left:
        edges.append(_repoint(outer[node], node, hub_a))
    for node in right:
        edges.append(_repoint(outer[node], node, hub_b))
    edges.append(Edge(id=ids.edge(), a=hub_a, b=hub_b, hadamard=False))

    m, n = len(left), len(right)
    spiders = [s for s in diagram.spiders if s.id not in block] + [
        Spider(id=hub_a, color=left_color.flipped()),
        Spider(id=hub_b, color=left_color),
    ]
    factor = 2.0 ** (-(m - 1) * (n - 1) / 2.0)
    return diagram.replace(spiders=spiders, edges=edges, scalar=diagram.scalar * factor)


def bialgebra_expand(
    diagram: ZxDiagram, first: int, second: int, new_ids: Sequence[int] = ()
) -> ZxDiagram:
    """
    Replace a connected phase-free opposite-coloured pair by a bipartite block.

    New spiders: one per outer edge of `first` (ascending edge id, opposite
    colour to `first`), then one per outer edge of `second`.
    """
    rule = Rule.BIALGEBRA
    a, b = _spider(diagram, first, rule), _spider(diagram, second, rule)
    _require(a.color != b.color, rule, "pair colours must differ")
    _require(a.phase.is_zero() and b.phase.is_zero(), rule, "pair spiders need phase 0")
    between = diagram.edges_between(first, second)
    _require(len(between) == 1 and not between[0].hadamard, rule, "need one plain edge")
    link = between[0]
    a_edges = _other_edges(diagram, first, excluded=(link.id,))
    b_edges = _other_edges(diagram, second, excluded=(link.id,))
    _require(len(a_edges) >= 1 and len(b_edges) >= 1, rule, "both spiders need outer edges")
    _require(
        not any(e.is_self_loop or e.other(first) == second for e in a_edges)
        and not any(e.is_self_loop or e.other(second) == first for e in b_edges),
        rule,
        "outer edges must leave the pair",
    )

    ids = _Ids(diagram, new_ids)
    a_side = [ids.node() for _ in a_edges]
    b_side = [ids.node() for _ in b_edges]
    replaced = {e.id for e in a_edges + b_edges} | {link.id}
    edges = [e for e in diagram.edges if e.id not in replaced]
    for edge, node in zip(a_edges, a_side):
        edges.append(_repoint(edge, first, node))
    for edge, node in zip(b_edges, b_side):
        edges.append(_repoint(edge, second, node))
    for a_node in a_side:
        for b_node in b_side:
            edges.append(Edge(id=ids.edge(), a=a_node, b=b_node, hadamard=False))

    m, n = len(a_side), len(b_side)
    spiders = [s for s in diagram.spiders if s.id not in (first, second)]
    spiders += [Spider(id=node, color=a.color.flipped()) for node in a_side]
    spiders += [Spider(id=node, color=a.color) for node in b_side]
    factor = 2.0 ** ((m - 1) * (n - 1) / 2.0)
    return diagram.replace(spiders=spiders, edges=edges, scalar=diagram.scalar * factor)


# Dispatch


def apply_rule(diagram: ZxDiagram, rule: Rule, where: RuleSite) -> ZxDiagram:
    """
    Apply `rule` at `where`.

    Raises:
        RuleNotApplicableError: If the rule's precondition fails at the site
    """
    rule = Rule(rule)
    spiders = where.spiders

    def need(count: int) -> None:
        _require(len(spiders) >= count, rule, f"site needs {count} spider id(s)")

    if rule is Rule.FUSION:
        if where.reverse:
            need(1)
            return unfuse(
                diagram,
                spiders[0],
                where.edges,
                where.phase if where.phase is not None else Phase.zero(),
                where.new_ids[0] if where.new_ids else None,
            )
        need(2)
        return fuse(diagram, spiders[0], spiders[1])
    if rule is Rule.IDENTITY:
        if where.reverse:
            _require(where.edge is not None, rule, "insertion needs an edge id")
            assert where.edge is not None
            return insert_identity(
                diagram,
                where.edge,
                where.color or SpiderColor.Z,
                where.new_ids[0] if where.new_ids else None,
            )
        need(1)
        return remove_identity(diagram, spiders[0])
    if rule is Rule.COLOR_CHANGE:
        need(1)
        return color_change(diagram, spiders[0])
    if rule is Rule.HH_CANCEL:
        need(1)
        return hh_cancel(diagram, spiders[0])
    if rule is Rule.PI_COPY:
        need(2)
        return pi_copy(diagram, spiders[0], spiders[1], where.new_ids)
    if rule is Rule.COPY:
        need(2)
        return copy_state(diagram, spiders[0], spiders[1], where.new_ids)
    if rule is Rule.BIALGEBRA:
        if where.reverse:
            need(2)
            return bialgebra_expand(diagram, spiders[0], spiders[1], where.new_ids)
        return bialgebra_collapse(diagram, where.left, where.right, where.new_ids)
    raise RuleNotApplicableError(str(rule), "unknown rule")


def candidate_sites(diagram: ZxDiagram) -> Iterator[Tuple[Rule, RuleSite]]:
    """Enumerate sites where the forward rules structurally apply (used by random testing)."""
    smap = diagram.spider_map()
    ids = sorted(smap)
    for i, s1 in enumerate(ids):
        for s2 in ids[i + 1:]:
            if smap[s1].color == smap[s2].color and any(
                not e.hadamard for e in diagram.edges_between(s1, s2)
            ):
                yield Rule.FUSION, site(s1, s2)
    for node in ids:
        yield Rule.COLOR_CHANGE, site(node)
        incident = diagram.incident(node)
        if smap[node].phase.is_zero() and len(incident) == 2 and not any(
            e.is_self_loop for e in incident
        ):
            yield Rule.IDENTITY, site(node)
            if all(e.hadamard for e in incident):
                yield Rule.HH_CANCEL, site(node)
        for other in diagram.neighbors(node):
            if other in smap and smap[other].color != smap[node].color:
                yield Rule.PI_COPY, site(node, other)
                yield Rule.COPY, site(node, other)
                yield Rule.BIALGEBRA, site(node, other, reverse=True)
    yield from _collapse_sites(diagram, smap)


def _plain_link(diagram: ZxDiagram, a: int, b: int) -> bool:
    between = diagram.edges_between(a, b)
    return len(between) == 1 and not between[0].hadamard


def _collapse_sites(
    diagram: ZxDiagram, smap: Dict[int, Spider]
) -> Iterator[Tuple[Rule, RuleSite]]:
    """Bipartite blocks grown from each phase-free spider, plus one-smaller variants."""
    free = sorted(n for n, s in smap.items() if s.phase.is_zero())
    seen = set()
    for seed in free:
        color = smap[seed].color
        around = sorted(
            n for n in set(diagram.neighbors(seed))
            if n in free and smap[n].color != color and _plain_link(diagram, seed, n)
        )
        variants = [around] + [[n for n in around if n != x] for x in around]
        for left in variants:
            if not left:
                continue
            right = [
                n for n in free
                if smap[n].color == color and all(_plain_link(diagram, n, m) for m in left)
            ]
            key = (tuple(left), tuple(right))
            if right and key not in seen:
                seen.add(key)
                yield Rule.BIALGEBRA, RuleSite(left=tuple(left), right=tuple(right))
