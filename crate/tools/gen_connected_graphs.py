#!/usr/bin/env python3
"""Generate all non-isomorphic connected graphs of a given order as graph6.

Every connected graph on n vertices has a non-cut vertex, so extending each
connected graph on n-1 vertices by one vertex joined to a nonempty subset
reaches every isomorphism class. Duplicates are removed with nauty canonical
certificates (pynauty). Output is one graph6 string per line in the canonical
labeling, sorted, so the files are reproducible.

    pip install pynauty networkx
    python3 tools/gen_connected_graphs.py 8 > data/connected8.g6

Expected counts: 1, 1, 2, 6, 21, 112, 853, 11117, 261080 for n = 1..9.
"""

import sys

import networkx as nx
import pynauty


def to_nauty(n, adj):
    return pynauty.Graph(n, adjacency_dict={v: sorted(adj[v]) for v in range(n)})


def canonical(n, adj):
    g = to_nauty(n, adj)
    cert = pynauty.certificate(g)
    return cert, g


def relabeled_graph6(n, adj, g):
    lab = pynauty.canon_label(g)
    pos = {v: i for i, v in enumerate(lab)}
    h = nx.Graph()
    h.add_nodes_from(range(n))
    for v in range(n):
        for u in adj[v]:
            if u > v:
                h.add_edge(pos[u], pos[v])
    return nx.to_graph6_bytes(h, header=False).decode().strip()


def generate(order):
    level = {None: (1, [set()])}
    for n in range(2, order + 1):
        nxt = {}
        for m, adj in level.values():
            for mask in range(1, 1 << m):
                new = [set(a) for a in adj] + [set()]
                for u in range(m):
                    if mask >> u & 1:
                        new[u].add(m)
                        new[m].add(u)
                cert, _ = canonical(n, new)
                if cert not in nxt:
                    nxt[cert] = (n, new)
        level = nxt
    return level


def main():
    order = int(sys.argv[1])
    lines = []
    for n, adj in generate(order).values():
        _, g = canonical(n, adj)
        lines.append(relabeled_graph6(n, adj, g))
    lines.sort()
    sys.stdout.write("".join(line + "\n" for line in lines))
    print(f"{len(lines)} connected graphs of order {order}", file=sys.stderr)


if __name__ == "__main__":
    main()
