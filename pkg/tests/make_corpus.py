"""Regenerate tests/data/connected_upto8.g6: every connected graph on 1..8
vertices up to isomorphism (atlas for n <= 7, one-vertex extensions for 8)."""

from collections import defaultdict
from pathlib import Path

import networkx as nx

OUT = Path(__file__).parent / "data" / "connected_upto8.g6"


def main() -> None:
    small = [g for g in nx.graph_atlas_g() if g.number_of_nodes() >= 1]
    connected = [g for g in small if nx.is_connected(g)]
    buckets = defaultdict(list)
    for base in (g for g in small if g.number_of_nodes() == 7):
        for subset in range(1, 1 << 7):
            h = base.copy()
            h.add_node(7)
            h.add_edges_from((7, v) for v in range(7) if subset >> v & 1)
            if not nx.is_connected(h):
                continue
            key = (nx.weisfeiler_lehman_graph_hash(h, iterations=3),
                   tuple(sorted(d for _, d in h.degree())))
            if any(nx.is_isomorphic(h, o) for o in buckets[key]):
                continue
            buckets[key].append(h)
    eight = [h for hs in buckets.values() for h in hs]
    lines = [nx.to_graph6_bytes(g, header=False).decode().strip()
             for g in connected + eight]
    OUT.write_text("\n".join(sorted(lines, key=lambda s: (len(s), s))) + "\n")
    print(len(connected), len(eight))


if __name__ == "__main__":
    main()
