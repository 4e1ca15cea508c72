"""Spin networks built from 3j-nodes and 2j-nodes, with exact evaluation.

Conventions
-----------
An edge joins two endpoints (node ports or terminals) and carries an arrow
from its *tail* to its *head*.  At a node port the arrow decides the index
position: an arrow pointing into the node gives a lower (covariant) index,
an arrow leaving it gives an upper one.  Components with an upper index are
obtained from the all-lower ones by ``X^m = (-1)^(j+m) X_{-m}``, and a
contraction along an edge sums the shared ``m`` with weight one.

All-lower components are

* 3j-node ``(a, b, c)`` counterclockwise: the 3j symbol ``(ja jb jc; ma mb mc)``;
  a clockwise node uses the order ``(a, c, b)``;
* 2j-node: ``(-1)^(j - m_first) delta(m_first, -m_second)``, i.e. the 2j
  symbol times ``sqrt(2j+1)``.  ``stub="up"`` makes port 0 the first
  operand and ``stub="down"`` makes port 1 the first operand.

With these rules reversing one arrow multiplies the contraction by
``(-1)^(2j)``, inverting a stub does the same, and an arrow that runs
straight from one 3j-node to another equals a 2j-node inserted on that edge
with its first operand on the tail side and both arrows pointing at the
3j-nodes.  Every network value carries a ``phase`` prefactor; the rewrite
helpers update it so that :func:`evaluate_closed` is unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional

from .errors import NotATwoJNode, ParseError, ResourceLimit, UnknownEdge, ValidationError
from .exact import ExactRadical, HalfInt, as_half
from .symbols import SixJArgs, _mul, _three_j_form

__all__ = [
    "Terminal",
    "Endpoint",
    "Node",
    "Edge",
    "SpinNetwork",
    "parse",
    "serialize",
    "reverse_arrow",
    "invert_stub",
    "cancel_stub_pairs",
    "remove_two_j_node",
    "insert_two_j_node",
    "to_standard_form",
    "is_standard",
    "hermitian_conjugate",
    "contract",
    "evaluate_closed",
    "theta_network",
    "tetrahedral_network",
    "loop_network",
    "CONTRACT_MAX_STATES",
]

CONTRACT_MAX_STATES = 5_000_000


@dataclass(frozen=True)
class Terminal:
    """Open end of an edge: a ket or bra chevron, or a fixed index ``m``."""

    kind: str  # "ket", "bra" or "m"
    m: Optional[HalfInt] = None
    starred: bool = False

    def wants_head(self) -> bool:
        # standard form: arrows point at starred symbols and ket chevrons
        if self.kind == "m":
            return self.starred
        return self.kind == "ket"

    def conjugate(self) -> "Terminal":
        if self.kind == "ket":
            return Terminal("bra")
        if self.kind == "bra":
            return Terminal("ket")
        return Terminal("m", self.m, not self.starred)


@dataclass(frozen=True)
class Endpoint:
    node: Optional[str] = None
    port: Optional[int] = None
    terminal: Optional[Terminal] = None

    @property
    def is_terminal(self) -> bool:
        return self.terminal is not None


@dataclass(frozen=True)
class Node:
    id: str
    kind: str  # "w3" or "k2"
    ports: tuple
    orientation: str = "ccw"
    stub: Optional[str] = None

    def first_port(self) -> int:
        return 0 if self.stub == "up" else 1


@dataclass(frozen=True)
class Edge:
    id: str
    j: HalfInt
    a: Endpoint  # "from"
    b: Endpoint  # "to"
    arrow: str = "from_to"

    @property
    def tail(self) -> Endpoint:
        return self.a if self.arrow == "from_to" else self.b

    @property
    def head(self) -> Endpoint:
        return self.b if self.arrow == "from_to" else self.a

    def reversed(self) -> "Edge":
        return replace(self, arrow="to_from" if self.arrow == "from_to" else "from_to")


@dataclass(frozen=True)
class SpinNetwork:
    nodes: tuple
    edges: tuple
    phase: ExactRadical = field(default_factory=ExactRadical.one)

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise UnknownEdge(edge_id)

    def terminals(self) -> list[Terminal]:
        return [ep.terminal for e in self.edges for ep in (e.a, e.b) if ep.is_terminal]

    def is_closed(self) -> bool:
        return not self.terminals()

    def port_map(self) -> dict:
        """(node id, port) -> (edge, 'a' or 'b')."""
        out = {}
        for e in self.edges:
            for side, ep in (("a", e.a), ("b", e.b)):
                if not ep.is_terminal:
                    out[(ep.node, ep.port)] = (e, side)
        return out

    def with_phase(self, factor: ExactRadical) -> "SpinNetwork":
        return replace(self, phase=self.phase * factor)


# --------------------------------------------------------------------------
# parsing and serialization

def _fail(msg: str):
    raise ValidationError(msg)


def _endpoint_from_json(obj, where: str) -> Endpoint:
    if not isinstance(obj, dict):
        _fail(f"{where}: endpoint must be an object")
    if "terminal" in obj:
        t = obj["terminal"]
        if not isinstance(t, dict):
            _fail(f"{where}: terminal must be an object")
        kind = t.get("kind")
        if kind not in ("ket", "bra", "m"):
            _fail(f"{where}: terminal kind must be ket, bra or m")
        if kind == "m":
            if not isinstance(t.get("m2"), int):
                _fail(f"{where}: m terminal needs integer m2")
            return Endpoint(terminal=Terminal("m", HalfInt(t["m2"]), bool(t.get("starred", False))))
        return Endpoint(terminal=Terminal(kind))
    node, port = obj.get("node"), obj.get("port")
    if not isinstance(node, str) or not isinstance(port, int) or isinstance(port, bool):
        _fail(f"{where}: endpoint needs string 'node' and integer 'port'")
    return Endpoint(node=node, port=port)


def _endpoint_to_json(ep: Endpoint) -> dict:
    if ep.is_terminal:
        t = ep.terminal
        if t.kind == "m":
            return {"terminal": {"kind": "m", "m2": t.m.twice, "starred": t.starred}}
        return {"terminal": {"kind": t.kind}}
    return {"node": ep.node, "port": ep.port}


def validate(net: SpinNetwork) -> SpinNetwork:
    """Check the structural invariants, raising ValidationError on failure."""
    ids = [n.id for n in net.nodes]
    if len(set(ids)) != len(ids):
        _fail("node ids must be unique")
    eids = [e.id for e in net.edges]
    if len(set(eids)) != len(eids):
        _fail("edge ids must be unique")
    nodes = {n.id: n for n in net.nodes}
    for n in net.nodes:
        if n.kind == "w3":
            if len(n.ports) != 3:
                _fail(f"node {n.id}: a 3j-node has exactly three ports")
            if n.orientation not in ("ccw", "cw"):
                _fail(f"node {n.id}: orientation must be ccw or cw")
        elif n.kind == "k2":
            if len(n.ports) != 2:
                _fail(f"node {n.id}: a 2j-node has exactly two ports")
            if n.stub not in ("up", "down"):
                _fail(f"node {n.id}: a 2j-node needs stub up or down")
        else:
            _fail(f"node {n.id}: unknown kind {n.kind!r}")
    seen: dict = {}
    for e in net.edges:
        if e.j.twice < 0:
            _fail(f"edge {e.id}: negative spin")
        if e.arrow not in ("from_to", "to_from"):
            _fail(f"edge {e.id}: arrow must be from_to or to_from")
        for ep in (e.a, e.b):
            if ep.is_terminal:
                t = ep.terminal
                if t.kind == "m":
                    if abs(t.m.twice) > e.j.twice or (e.j.twice - t.m.twice) % 2:
                        _fail(f"edge {e.id}: terminal m={t.m} invalid for j={e.j}")
                continue
            if ep.node not in nodes:
                _fail(f"edge {e.id}: unknown node {ep.node!r}")
            if not 0 <= ep.port < len(nodes[ep.node].ports):
                _fail(f"edge {e.id}: node {ep.node} has no port {ep.port}")
            key = (ep.node, ep.port)
            if key in seen:
                _fail(f"port {ep.port} of node {ep.node} is attached to more than one edge end")
            seen[key] = e
    for n in net.nodes:
        for p in range(len(n.ports)):
            if (n.id, p) not in seen:
                _fail(f"dangling port {p} ({n.ports[p]}) on node {n.id}")
        if n.kind == "k2":
            j0, j1 = seen[(n.id, 0)].j, seen[(n.id, 1)].j
            if j0 != j1:
                _fail(f"node {n.id}: both edges of a 2j-node carry the same spin")
    return net


def from_dict(doc) -> SpinNetwork:
    if not isinstance(doc, dict):
        _fail("document root must be an object")
    raw_nodes = doc.get("nodes", [])
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_nodes, list) or not isinstance(raw_edges, list):
        _fail("'nodes' and 'edges' must be arrays")
    nodes = []
    for i, rn in enumerate(raw_nodes):
        if not isinstance(rn, dict):
            _fail(f"nodes[{i}] must be an object")
        nid, kind, ports = rn.get("id"), rn.get("kind"), rn.get("ports")
        if not isinstance(nid, str):
            _fail(f"nodes[{i}]: id must be a string")
        if not isinstance(ports, list) or not all(isinstance(p, str) for p in ports):
            _fail(f"node {nid}: ports must be a list of strings")
        nodes.append(Node(nid, kind, tuple(ports), rn.get("orientation", "ccw"),
                          rn.get("stub") if kind == "k2" else None))
    edges = []
    for i, re_ in enumerate(raw_edges):
        if not isinstance(re_, dict):
            _fail(f"edges[{i}] must be an object")
        eid, j2 = re_.get("id"), re_.get("j2")
        if not isinstance(eid, str):
            _fail(f"edges[{i}]: id must be a string")
        if not isinstance(j2, int) or isinstance(j2, bool):
            _fail(f"edge {eid}: j2 must be an integer")
        if "from" not in re_ or "to" not in re_:
            _fail(f"edge {eid}: needs 'from' and 'to'")
        edges.append(Edge(eid, HalfInt(j2), _endpoint_from_json(re_["from"], f"edge {eid}"),
                          _endpoint_from_json(re_["to"], f"edge {eid}"),
                          re_.get("arrow", "from_to")))
    ph = doc.get("phase")
    if ph is None:
        phase = ExactRadical.one()
    else:
        try:
            phase = ExactRadical(Fraction(ph["coef_num"], ph["coef_den"]),
                                 Fraction(ph["radicand_num"], ph["radicand_den"]))
        except (KeyError, TypeError, ZeroDivisionError):
            _fail("phase needs integer coef_num, coef_den, radicand_num, radicand_den")
    return validate(SpinNetwork(tuple(nodes), tuple(edges), phase))


def parse(text: str) -> SpinNetwork:
    """Read a network from its JSON description."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos, exc.lineno, exc.colno) from None
    return from_dict(doc)


def to_dict(net: SpinNetwork) -> dict:
    nodes = []
    for n in net.nodes:
        d = {"id": n.id, "kind": n.kind, "ports": list(n.ports)}
        if n.kind == "w3":
            d["orientation"] = n.orientation
        else:
            d["stub"] = n.stub
        nodes.append(d)
    edges = [{"id": e.id, "j2": e.j.twice, "from": _endpoint_to_json(e.a),
              "to": _endpoint_to_json(e.b), "arrow": e.arrow} for e in net.edges]
    p = net.phase
    return {"nodes": nodes, "edges": edges,
            "phase": {"coef_num": p.coef.numerator, "coef_den": p.coef.denominator,
                      "radicand_num": p.radicand.numerator,
                      "radicand_den": p.radicand.denominator}}


def serialize(net: SpinNetwork) -> str:
    return json.dumps(to_dict(net), indent=2) + "\n"


# --------------------------------------------------------------------------
# rewrites

def _parity(j: HalfInt) -> ExactRadical:
    return ExactRadical(Fraction(-1 if j.twice % 2 else 1))


def _replace_edges(net: SpinNetwork, edges: Iterable[Edge], nodes=None, factor=None) -> SpinNetwork:
    phase = net.phase if factor is None else net.phase * factor
    return SpinNetwork(tuple(net.nodes if nodes is None else nodes), tuple(edges), phase)


def reverse_arrow(net: SpinNetwork, edge_id: str) -> SpinNetwork:
    """Flip one arrow and multiply the phase by ``(-1)^(2j)``."""
    e = net.edge(edge_id)
    edges = [x.reversed() if x.id == edge_id else x for x in net.edges]
    return _replace_edges(net, edges, factor=_parity(e.j))


def invert_stub(net: SpinNetwork, node_id: str) -> SpinNetwork:
    """Swap the operand order of a 2j-node; phase picks up ``(-1)^(2j)``."""
    try:
        n = net.node(node_id)
    except KeyError:
        raise NotATwoJNode(node_id) from None
    if n.kind != "k2":
        raise NotATwoJNode(node_id)
    j = net.port_map()[(node_id, 0)][0].j
    flipped = replace(n, stub="down" if n.stub == "up" else "up")
    nodes = [flipped if x.id == node_id else x for x in net.nodes]
    return SpinNetwork(tuple(nodes), net.edges, net.phase * _parity(j))


def _other(e: Edge, node_id: str, port: int) -> Endpoint:
    if e.a.node == node_id and e.a.port == port and not e.a.is_terminal:
        return e.b
    return e.a


def remove_two_j_node(net: SpinNetwork, node_id: str) -> SpinNetwork:
    """Delete a 2j-node, splicing its two edges into one; value preserved.

    With ``A`` on the first-operand side and ``B`` on the second:

    * arrows both in or both out: a plain edge ``A -> B``;
    * arrow passing through from ``A`` to ``B``: edge ``A -> B`` times ``(-1)^(2j)``;
    * arrow passing through from ``B`` to ``A``: edge ``B -> A``, no phase;
    * a loop closing on the node itself gives ``(2j+1)`` or ``(-1)^(2j)(2j+1)``.
    """
    n = net.node(node_id)
    if n.kind != "k2":
        raise NotATwoJNode(node_id)
    pm = net.port_map()
    f = n.first_port()
    s = 1 - f
    ef, _ = pm[(node_id, f)]
    es, _ = pm[(node_id, s)]
    j = ef.j
    nodes = [x for x in net.nodes if x.id != node_id]

    def head_at(e: Edge, port: int) -> bool:
        h = e.head
        return (not h.is_terminal) and h.node == node_id and h.port == port

    if ef.id == es.id:
        dim = ExactRadical(Fraction(j.twice + 1))
        factor = dim * _parity(j) if head_at(ef, f) else dim
        edges = [x for x in net.edges if x.id != ef.id]
        return SpinNetwork(tuple(nodes), tuple(edges), net.phase * factor)

    A = _other(ef, node_id, f)
    B = _other(es, node_id, s)
    in_f, in_s = head_at(ef, f), head_at(es, s)
    factor = None
    if in_f == in_s:
        new = Edge(ef.id, j, A, B, "from_to")
    elif in_f:
        new = Edge(ef.id, j, A, B, "from_to")
        factor = _parity(j)
    else:
        new = Edge(ef.id, j, B, A, "from_to")
    edges = []
    for x in net.edges:
        if x.id == ef.id:
            edges.append(new)
        elif x.id != es.id:
            edges.append(x)
    return SpinNetwork(tuple(nodes), tuple(edges), net.phase if factor is None else net.phase * factor)


def insert_two_j_node(net: SpinNetwork, edge_id: str) -> SpinNetwork:
    """Split an edge ``T -> H`` into ``T <- K -> H`` with K's first operand at T.

    This is the removal rule read backwards, so no phase appears.
    """
    e = net.edge(edge_id)
    taken = {n.id for n in net.nodes} | {x.id for x in net.edges}
    base = e.id
    while f"{base}.k" in taken or f"{base}.t" in taken or f"{base}.h" in taken:
        base += "'"
    kid = f"{base}.k"
    k = Node(kid, "k2", ("t", "h"), "ccw", "up")
    et = Edge(f"{base}.t", e.j, Endpoint(kid, 0), e.tail, "from_to")
    eh = Edge(f"{base}.h", e.j, Endpoint(kid, 1), e.head, "from_to")
    edges = []
    for x in net.edges:
        edges.extend((et, eh) if x.id == edge_id else (x,))
    return SpinNetwork(net.nodes + (k,), tuple(edges), net.phase)


def _k2_pairs(net: SpinNetwork):
    nodes = {n.id: n for n in net.nodes}
    for e in net.edges:
        if e.a.is_terminal or e.b.is_terminal:
            continue
        n1, n2 = nodes[e.a.node], nodes[e.b.node]
        if n1.kind != "k2" or n2.kind != "k2" or n1.id == n2.id:
            continue
        first1 = n1.first_port() == e.a.port
        first2 = n2.first_port() == e.b.port
        # drawn along the chain, the stubs point in opposite directions
        # exactly when both first operands face the shared edge or both
        # face away from it
        if first1 == first2:
            yield n1.id, n2.id


def cancel_stub_pairs(net: SpinNetwork) -> SpinNetwork:
    """Remove adjacent 2j-node pairs whose stubs point in opposite directions."""
    while True:
        pair = next(_k2_pairs(net), None)
        if pair is None:
            return net
        net = remove_two_j_node(net, pair[0])
        net = remove_two_j_node(net, pair[1])


def _wants_head(net_nodes: dict, ep: Endpoint) -> bool:
    if ep.is_terminal:
        return ep.terminal.wants_head()
    return net_nodes[ep.node].kind == "w3"


def is_standard(net: SpinNetwork) -> bool:
    nodes = {n.id: n for n in net.nodes}
    for e in net.edges:
        for ep, at_head in ((e.head, True), (e.tail, False)):
            if ep.is_terminal:
                if ep.terminal.kind == "m" and ep.terminal.wants_head() != at_head:
                    return False
                continue
            if (nodes[ep.node].kind == "w3") != at_head:
                return False
    return True


def to_standard_form(net: SpinNetwork) -> SpinNetwork:
    """Equivalent network with arrows into 3j-nodes and out of 2j-nodes.

    2j-nodes that cannot be kept (looped, or adjacent to another 2j-node or
    to an unstarred terminal) are spliced out; edges whose two ends both
    need an incoming arrow receive a new 2j-node.  Every phase is folded
    into ``net.phase``.  Applying the function twice changes nothing.
    """
    while True:
        nodes = {n.id: n for n in net.nodes}
        pm = net.port_map()
        changed = False
        for n in net.nodes:
            if n.kind != "k2":
                continue
            e0, _ = pm[(n.id, 0)]
            e1, _ = pm[(n.id, 1)]
            ends = [_other(e0, n.id, 0), _other(e1, n.id, 1)]
            if e0.id == e1.id or not all(_wants_head(nodes, ep) for ep in ends):
                net = remove_two_j_node(net, n.id)
                changed = True
                break
            for e, port in ((e0, 0), (e1, 1)):
                h = e.head
                if not h.is_terminal and h.node == n.id and h.port == port:
                    net = reverse_arrow(net, e.id)
                    changed = True
            if changed:
                break
        if not changed:
            break

    nodes = {n.id: n for n in net.nodes}
    new_nodes = list(net.nodes)
    new_edges = []
    phase = net.phase
    for e in net.edges:
        ends = [e.a, e.b]
        if any((not ep.is_terminal) and nodes[ep.node].kind == "k2" for ep in ends):
            new_edges.append(e)
            continue
        want_tail_head = (_wants_head(nodes, e.tail), _wants_head(nodes, e.head))
        if want_tail_head == (False, True):
            new_edges.append(e)
        elif want_tail_head == (True, False):
            new_edges.append(e.reversed())
            phase = phase * _parity(e.j)
        elif want_tail_head == (True, True):
            kid = f"{e.id}.k"
            new_nodes.append(Node(kid, "k2", ("t", "h"), "ccw", "up"))
            new_edges.append(Edge(f"{e.id}.t", e.j, Endpoint(kid, 0), e.tail, "from_to"))
            new_edges.append(Edge(f"{e.id}.h", e.j, Endpoint(kid, 1), e.head, "from_to"))
        else:
            # two unstarred ends: no 3j/2j arrangement makes this standard
            new_edges.append(e)
    return validate(SpinNetwork(tuple(new_nodes), tuple(new_edges), phase))


def hermitian_conjugate(net: SpinNetwork) -> SpinNetwork:
    """Swap chevrons, reverse every arrow and toggle every star.

    The phase is multiplied by ``(-1)^(sum of 2j over edges)``.  That factor
    is 1 on a closed network in standard form, where each 2j-node owns two
    equal-spin edges; elsewhere it absorbs the reversal phases so that a
    closed (real) network keeps its value.  Applying the map twice returns
    the original network exactly.
    """
    total = sum(e.j.twice for e in net.edges)

    def conj(ep: Endpoint) -> Endpoint:
        return Endpoint(terminal=ep.terminal.conjugate()) if ep.is_terminal else ep

    edges = [replace(e.reversed(), a=conj(e.a), b=conj(e.b)) for e in net.edges]
    factor = ExactRadical(Fraction(-1 if total % 2 else 1))
    return SpinNetwork(net.nodes, tuple(edges), net.phase * factor)


# --------------------------------------------------------------------------
# evaluation

def contract(net: SpinNetwork, max_states: int | None = None) -> ExactRadical:
    """Sum over all edge labels of the product of node components.

    Excludes ``net.phase``.  The search assigns one ``m`` per edge, forcing
    values through each node's selection rule as soon as all but one of its
    edges are fixed.
    """
    if not net.is_closed():
        raise ValidationError("only closed networks (no terminals) can be evaluated")
    limit = CONTRACT_MAX_STATES if max_states is None else max_states
    edges = list(net.edges)
    eidx = {e.id: i for i, e in enumerate(edges)}
    nodes = list(net.nodes)
    # for each node: list of (edge index, sign, j-twice) in operand order,
    # where sign=+1 for a lower index and -1 for an upper one
    slots = []
    for n in nodes:
        pm = []
        for p in range(len(n.ports)):
            pm.append(None)
        for e in edges:
            for ep in (e.a, e.b):
                if ep.node == n.id:
                    is_head = e.head is ep
                    pm[ep.port] = (eidx[e.id], 1 if is_head else -1, e.j.twice)
        if n.kind == "w3":
            order = (0, 1, 2) if n.orientation == "ccw" else (0, 2, 1)
        else:
            f = n.first_port()
            order = (f, 1 - f)
        slots.append((n.kind, [pm[p] for p in order]))

    # visit edges in an order that closes nodes early
    order: list[int] = []
    for kind, sl in slots:
        for i, _, _ in sl:
            if i not in order:
                order.append(i)
    node_of_edge = {i: [] for i in range(len(edges))}
    for ni, (_, sl) in enumerate(slots):
        for i, _, _ in sl:
            if ni not in node_of_edge[i]:
                node_of_edge[i].append(ni)

    m = [None] * len(edges)
    acc: dict[int, Fraction] = {}
    states = 0

    def node_ok(ni) -> Optional[bool]:
        kind, sl = slots[ni]
        vals = [m[i] for i, _, _ in sl]
        if any(v is None for v in vals):
            return None
        return sum(sg * v for (i, sg, _), v in zip(sl, vals)) == 0

    def forced(i):
        for ni in node_of_edge[i]:
            kind, sl = slots[ni]
            rest = 0
            mine = 0
            unknown = False
            for k, sg, _ in sl:
                if k == i:
                    mine += sg
                elif m[k] is None:
                    unknown = True
                    break
                else:
                    rest += sg * m[k]
            if unknown:
                continue
            if mine == 0:
                continue
            if rest % mine:
                return "none"
            return -rest // mine
        return None

    def value():
        v = (Fraction(1), 1)
        for kind, sl in slots:
            eff = []
            sign = 1
            for i, sg, tj in sl:
                if sg == 1:
                    eff.append(m[i])
                else:
                    eff.append(-m[i])
                    # raising: X^m = (-1)^(j+m) X_{-m}
                    if ((tj + m[i]) // 2) % 2:
                        sign = -sign
            if kind == "w3":
                f = _three_j_form(sl[0][2], sl[1][2], sl[2][2], *eff)
            else:
                if eff[0] != -eff[1]:
                    return None
                f = (Fraction(-1 if ((sl[0][2] - eff[0]) // 2) % 2 else 1), 1)
            if not f[0]:
                return None
            v = _mul(v, (sign * f[0], f[1]))
        return v

    def rec(pos):
        nonlocal states
        states += 1
        if states > limit:
            raise ResourceLimit("m-lattice too large for network contraction")
        if pos == len(order):
            v = value()
            if v is not None and v[0]:
                acc[v[1]] = acc.get(v[1], Fraction(0)) + v[0]
            return
        i = order[pos]
        tj = edges[i].j.twice
        fv = forced(i)
        if fv == "none":
            return
        cands = [fv] if fv is not None else range(-tj, tj + 1, 2)
        for c in cands:
            if abs(c) > tj or (tj - c) % 2:
                continue
            m[i] = c
            if all(node_ok(ni) is not False for ni in node_of_edge[i]):
                rec(pos + 1)
            m[i] = None

    rec(0)
    out = ExactRadical.zero()
    for k in sorted(acc):
        if acc[k]:
            out = out + ExactRadical._from_int_form(acc[k], k)
    return out


def evaluate_closed(net: SpinNetwork, max_states: int | None = None) -> ExactRadical:
    """Exact value of a closed network, including its phase prefactor."""
    return net.phase * contract(net, max_states)


# --------------------------------------------------------------------------
# builders

def _w3(nid, ports, orientation="ccw"):
    return Node(nid, "w3", tuple(ports), orientation)


def theta_network(j1, j2, j3, standard: bool = True) -> SpinNetwork:
    """Two 3j-nodes joined by three edges; evaluates to 1 on a valid triad.

    Node ``A`` lists its edges counterclockwise as (1, 2, 3).  Drawn in the
    plane, the other node meets them in the opposite sense, so it is stored
    clockwise as (1, 3, 2).  Arrows run from ``A`` to ``B``; with
    ``standard=True`` each edge instead carries a 2j-node.
    """
    js = [as_half(x) for x in (j1, j2, j3)]
    nodes = [_w3("A", ["e1", "e2", "e3"]), _w3("B", ["e1", "e3", "e2"], "cw")]
    bport = {0: 0, 1: 2, 2: 1}
    edges = [Edge(f"e{i + 1}", js[i], Endpoint("A", i), Endpoint("B", bport[i]))
             for i in range(3)]
    net = validate(SpinNetwork(tuple(nodes), tuple(edges)))
    return to_standard_form(net) if standard else net


# tetrahedron: (edge label, tail node, tail port, head node, head port)
_TETRA_NODES = [("N1", (0, 1, 2)), ("N2", (0, 4, 5)), ("N3", (1, 5, 3)), ("N4", (2, 3, 4))]
_TETRA_ARROWS = [("N1", "N2"), ("N1", "N3"), ("N1", "N4"), ("N3", "N4"), ("N4", "N2"), ("N2", "N3")]


def tetrahedral_network(args: SixJArgs, standard: bool = True) -> SpinNetwork:
    """Network whose value is the 6j symbol ``{j1 j2 j12; j3 j4 j23}``.

    With symmetric labels ``a1..a6 = (j1, j2, j12, j3, j4, j23)`` the four
    counterclockwise 3j-nodes carry ``(a1 a2 a3)``, ``(a1 a5 a6)``,
    ``(a2 a6 a4)`` and ``(a3 a4 a5)``.  Each edge's arrow starts at the node
    holding the unprimed ``m`` of the explicit m-sum, so inserting the 2j
    nodes (``standard=True``) reproduces that sum term by term.
    """
    args = args if isinstance(args, SixJArgs) else SixJArgs.of(*args)
    labels = list(args)
    names = ["a1", "a2", "a3", "a4", "a5", "a6"]
    nodes = []
    where = {}
    for nid, edges_at in _TETRA_NODES:
        nodes.append(_w3(nid, [names[r] for r in edges_at]))
        for port, r in enumerate(edges_at):
            where[(r, nid)] = port
    edges = []
    for r, (tail, head) in enumerate(_TETRA_ARROWS):
        edges.append(Edge(names[r], labels[r], Endpoint(tail, where[(r, tail)]),
                          Endpoint(head, where[(r, head)])))
    net = validate(SpinNetwork(tuple(nodes), tuple(edges)))
    return to_standard_form(net) if standard else net


def loop_network(j, arrow_from_first: bool = True) -> SpinNetwork:
    """One 2j-node whose two ports are joined by a single edge."""
    j = as_half(j)
    k = Node("K", "k2", ("p", "q"), "ccw", "up")
    a, b = (Endpoint("K", 0), Endpoint("K", 1))
    e = Edge("e", j, a, b, "from_to" if arrow_from_first else "to_from")
    return validate(SpinNetwork((k,), (e,)))
