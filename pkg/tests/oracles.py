"""Brute-force reference computations, written independently of the package."""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx


def paths_of_length(arrows, vertices, n):
    """All composable arrow sequences of length ``n`` (``arrows`` as (id, s, t))."""
    if n == 0:
        return [((), v, v) for v in vertices]
    out = []
    for p, s, t in paths_of_length(arrows, vertices, n - 1):
        for a, x, y in arrows:
            if x == t:
                out.append((p + (a,), s, y))
    return out


def monomial_quotient_dims(arrows, vertices, forbidden, N):
    """``dim kQ / (forbidden subwords) + m^j`` for ``j = 1..N``."""
    dims = []
    total = 0
    for n in range(N):
        good = [p for p, _, _ in paths_of_length(arrows, vertices, n)
                if not any(p[i:i + len(f)] == f for f in forbidden for i in range(len(p)))]
        total += len(good)
        dims.append(total)
    return dims


def _rank(rows):
    rows = [dict(r) for r in rows if r]
    rank = 0
    cols = sorted({c for r in rows for c in r})
    for c in cols:
        piv = next((r for r in rows if r.get(c, 0) != 0), None)
        if piv is None:
            continue
        rows.remove(piv)
        rank += 1
        for r in rows:
            f = r.get(c, 0)
            if f:
                for k, v in piv.items():
                    r[k] = r.get(k, 0) - f * v / piv[c]
                    if r[k] == 0:
                        del r[k]
    return rank


def cyclic_derivative(W, a):
    out = {}
    for w, c in W.items():
        for i, x in enumerate(w):
            if x == a:
                p = w[i + 1:] + w[:i]
                out[p] = out.get(p, 0) + c
    return {p: c for p, c in out.items() if c}


def jacobian_dims(arrows, vertices, W, N):
    """Dimension of ``kQ / (I + m^j)`` by rebuilding the ideal for every ``j``.

    ``W`` maps words to rationals.  Slow but direct.
    """
    src = {a: s for a, s, _ in arrows}
    tgt = {a: t for a, _, t in arrows}
    rels = [cyclic_derivative(W, a) for a, _, _ in arrows]
    dims = []
    for j in range(1, N + 1):
        paths = [p for n in range(j) for p in paths_of_length(arrows, vertices, n)]
        rows = []
        for r in rels:
            if not r:
                continue
            for (u, us, ut), (v, vs, vt) in itertools.product(paths, paths):
                row = {}
                for w, c in r.items():
                    if u and tgt[u[-1]] != src[w[0]]:
                        continue
                    if not u and us != src[w[0]]:
                        continue
                    if v and src[v[0]] != tgt[w[-1]]:
                        continue
                    if not v and vs != tgt[w[-1]]:
                        continue
                    full = u + w + v
                    if len(full) < j:
                        row[full] = row.get(full, 0) + Fraction(c)
                if row:
                    rows.append(row)
        dims.append(len(paths) - _rank(rows))
    return dims


def quiver_graph(Q):
    G = nx.MultiDiGraph()
    G.add_nodes_from(Q.vertices)
    for a in Q.arrows:
        G.add_edge(a.src, a.tgt)
    return G


def vf2_isomorphic(Q1, Q2) -> bool:
    return nx.is_isomorphic(quiver_graph(Q1), quiver_graph(Q2))


def marked_point_count(T) -> int:
    """Vertices of the glued complex via graph components of corner identifications."""
    G = nx.Graph()
    n = len(T.triangles)
    for t in range(n):
        for k in range(3):
            G.add_node((t, k))  # corner k: start of side k
    where = {}
    for t, tri in enumerate(T.triangles):
        for k, (e, s) in enumerate(tri):
            where.setdefault(e, []).append((t, k, s))
    for e, occ in where.items():
        if len(occ) != 2:
            continue
        (t1, k1, s1), (t2, k2, s2) = occ
        # side k runs from corner k to corner k+1; opposite signs glue start to end
        a1, b1 = (t1, k1), (t1, (k1 + 1) % 3)
        a2, b2 = (t2, k2), (t2, (k2 + 1) % 3)
        if s1 == s2:
            G.add_edge(a1, a2)
            G.add_edge(b1, b2)
        else:
            G.add_edge(a1, b2)
            G.add_edge(b1, a2)
    return nx.number_connected_components(G)
