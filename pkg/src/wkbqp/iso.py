"""Exact canonical labelling of finite directed multigraphs.

Colour refinement splits vertices by (degree sequence, neighbour colours);
remaining ties are broken by individualising each candidate in turn and
keeping the lexicographically least adjacency matrix over all leaves.  The
search is exhaustive, so equal canonical forms mean isomorphic graphs.
"""

from __future__ import annotations

from typing import Hashable, Sequence


def _refine(n: int, adj: list[list[int]], colours: list[int]) -> list[int]:
    while True:
        sigs = []
        for v in range(n):
            out_sig = sorted((colours[w], adj[v][w]) for w in range(n) if adj[v][w])
            in_sig = sorted((colours[w], adj[w][v]) for w in range(n) if adj[w][v])
            sigs.append((colours[v], adj[v][v], tuple(out_sig), tuple(in_sig)))
        order = sorted(set(sigs))
        rank = {s: i for i, s in enumerate(order)}
        new = [rank[s] for s in sigs]
        if len(order) == len(set(colours)):
            return new
        colours = new


def _matrix(adj: list[list[int]], perm: Sequence[int]) -> tuple:
    return tuple(tuple(adj[a][b] for b in perm) for a in perm)


def canonical_matrix(vertices: Sequence[Hashable], edges: Sequence[tuple[Hashable, Hashable]]) -> tuple:
    """Canonical adjacency matrix (with multiplicities) of a directed multigraph."""
    index = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    adj = [[0] * n for _ in range(n)]
    for a, b in edges:
        adj[index[a]][index[b]] += 1
    best: list = [None]

    def search(colours: list[int]):
        colours = _refine(n, adj, colours)
        if len(set(colours)) == n:
            perm = sorted(range(n), key=lambda v: colours[v])
            m = _matrix(adj, perm)
            if best[0] is None or m < best[0]:
                best[0] = m
            return
        counts: dict[int, int] = {}
        for c in colours:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        for v in range(n):
            if colours[v] == target:
                # individualise v: it precedes the rest of its cell
                split = [2 * c + (1 if c == target and w != v else 0) for w, c in enumerate(colours)]
                search(split)

    if n == 0:
        return ()
    search([0] * n)
    return best[0]
