"""Regenerate tests/data/networks/*.json and expected.json.

Expected values come from the Racah formula and closed-form phases only;
the network contraction code is never used to produce them.

    python tests/data/make_network_corpus.py
"""

from __future__ import annotations

import json
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from w6j.exact import ExactRadical
from w6j.network import (
    SpinNetwork,
    insert_two_j_node,
    loop_network,
    serialize,
    tetrahedral_network,
    theta_network,
)
from w6j.symbols import SixJArgs, six_j_racah

OUT = Path(__file__).parent / "networks"


def sign(twice: int) -> ExactRadical:
    return ExactRadical(Fraction(-1 if twice % 2 else 1))


def raw_reverse(net: SpinNetwork, edge_id: str) -> SpinNetwork:
    # flip the arrow without touching the phase
    return replace(net, edges=tuple(e.reversed() if e.id == edge_id else e for e in net.edges))


def raw_flip_stub(net: SpinNetwork, node_id: str) -> SpinNetwork:
    nodes = tuple(replace(n, stub="down" if n.stub == "up" else "up") if n.id == node_id else n
                  for n in net.nodes)
    return replace(net, nodes=nodes)


def disjoint_union(a: SpinNetwork, b: SpinNetwork) -> SpinNetwork:
    def tag(net, t):
        nodes = tuple(replace(n, id=t + n.id) for n in net.nodes)
        edges = []
        for e in net.edges:
            ea = replace(e.a, node=t + e.a.node) if not e.a.is_terminal else e.a
            eb = replace(e.b, node=t + e.b.node) if not e.b.is_terminal else e.b
            edges.append(replace(e, id=t + e.id, a=ea, b=eb))
        return nodes, tuple(edges)

    na, ea = tag(a, "L.")
    nb, eb = tag(b, "R.")
    return SpinNetwork(na + nb, ea + eb, a.phase * b.phase)


def six(*js) -> tuple[SixJArgs, ExactRadical]:
    args = SixJArgs.of(*js)
    return args, six_j_racah(args)


def build():
    cases = []
    a, v = six(1, 1, 1, 1, 1, 1)
    cases.append(("tetra_111111_yutsis", tetrahedral_network(a, standard=False), v))
    cases.append(("tetra_111111_standard", tetrahedral_network(a), v))
    a, v = six("1/2", "1/2", 1, 1, 1, "1/2")
    cases.append(("tetra_half_yutsis", tetrahedral_network(a, standard=False), v))
    cases.append(("tetra_half_standard", tetrahedral_network(a), v))
    a, v = six("3/2", 1, "1/2", 1, "3/2", 2)
    cases.append(("tetra_mixed_yutsis", tetrahedral_network(a, standard=False), v))
    a, v = six(2, 2, 2, 2, 2, 2)
    cases.append(("tetra_222222_standard", tetrahedral_network(a), v))
    a, v = six(3, 2, 1, 2, 3, 2)
    cases.append(("tetra_321232_yutsis", tetrahedral_network(a, standard=False), v))
    a, v = six("5/2", 2, "3/2", 1, "3/2", 2)
    cases.append(("tetra_odd_standard", tetrahedral_network(a), v))

    one = ExactRadical.one()
    cases.append(("theta_111_standard", theta_network(1, 1, 1), one))
    cases.append(("theta_half_yutsis", theta_network("1/2", "1/2", 1, standard=False), one))
    cases.append(("theta_mixed_standard", theta_network("3/2", 1, "1/2"), one))
    cases.append(("theta_211_yutsis", theta_network(2, 1, 1, standard=False), one))

    cases.append(("loop_half_out", loop_network("1/2"), ExactRadical(Fraction(2))))
    cases.append(("loop_3half_in", loop_network("3/2", arrow_from_first=False), ExactRadical(Fraction(-4))))

    # raw edits: the stored phase is not updated, so the value changes sign
    a, v = six("1/2", "1/2", 1, 1, 1, "1/2")
    net = tetrahedral_network(a, standard=False)
    cases.append(("tetra_half_raw_reversed", raw_reverse(net, "a1"), v * sign(1)))
    net = tetrahedral_network(a)
    k = next(n.id for n in net.nodes if n.kind == "k2" and n.id.startswith("a6"))
    cases.append(("tetra_half_raw_stub", raw_flip_stub(net, k), v * sign(1)))

    # 2j-node chains that cancel pairwise
    a, v = six(1, 1, 1, 1, 1, 1)
    net = insert_two_j_node(tetrahedral_network(a), "a2.t")
    cases.append(("tetra_111111_chain", net, v))
    net = insert_two_j_node(theta_network("1/2", "1/2", 1), "e1.t")
    cases.append(("theta_half_chain", net, one))

    cases.append(("two_thetas", disjoint_union(theta_network(1, 1, 1), theta_network("1/2", 1, "1/2")), one))
    a, v = six(1, 1, 1, 1, 1, 1)
    net = tetrahedral_network(a, standard=False)
    for e in net.edges:
        net = raw_reverse(net, e.id)
    cases.append(("tetra_111111_all_reversed", net, v))
    return cases


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    expected = {}
    for name, net, value in build():
        (OUT / f"{name}.json").write_text(serialize(net), encoding="utf-8")
        expected[name] = {"coef": str(value.coef), "radicand": str(value.radicand)}
    (OUT / "expected.json").write_text(json.dumps(expected, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(expected)} networks to {OUT}")


if __name__ == "__main__":
    main()
