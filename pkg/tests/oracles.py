"""Slow, obviously-correct reference implementations used only by the tests."""

from __future__ import annotations

import itertools
import math

import numpy as np
import scipy.sparse as sp

INF = math.inf


def random_connected_graph(rng: np.random.Generator, n: int, extra: float = 0.08):
    """Random spanning tree plus independent extra edges; returns a sorted edge list."""
    edges = set()
    order = rng.permutation(n)
    for k in range(1, n):
        a, b = int(order[k]), int(order[rng.integers(k)])
        edges.add((min(a, b), max(a, b)))
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < extra:
            edges.add((a, b))
    return sorted(edges)


def to_csr(n: int, edges) -> sp.csr_matrix:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    a = sp.csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
    a.sort_indices()
    return a


def neighbours(n: int, edges) -> list[set[int]]:
    nb = [set() for _ in range(n)]
    for a, b in edges:
        nb[a].add(b)
        nb[b].add(a)
    return nb


def floyd_warshall(n: int, edges, weights=None) -> list[list[float]]:
    d = [[0.0 if i == j else INF for j in range(n)] for i in range(n)]
    for k, (a, b) in enumerate(edges):
        w = 1.0 if weights is None else float(weights[k])
        d[a][b] = min(d[a][b], w)
        d[b][a] = min(d[b][a], w)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def diameter_apl_oracle(n: int, edges) -> tuple[float, float]:
    """Diameter and APL over all connected ordered pairs of the graph (assumed connected)."""
    d = floyd_warshall(n, edges)
    finite = [d[i][j] for i in range(n) for j in range(n) if i != j and d[i][j] < INF]
    return max(finite), sum(finite) / len(finite)


def all_shortest_paths(nb: list[set[int]], dist: list[list[float]], s: int, t: int):
    """Explicitly enumerate every shortest s-t path (hop metric) as a node tuple."""
    out = []

    def walk(path):
        u = path[-1]
        if u == t:
            out.append(tuple(path))
            return
        for w in sorted(nb[u]):
            if dist[s][w] == dist[s][u] + 1 and dist[w][t] == dist[u][t] - 1:
                path.append(w)
                walk(path)
                path.pop()

    walk([s])
    return out


def betweenness_oracle(n: int, edges) -> np.ndarray:
    """Normalised betweenness by listing every shortest path between every ordered pair."""
    nb = neighbours(n, edges)
    dist = floyd_warshall(n, edges)
    bc = np.zeros(n)
    for s in range(n):
        for t in range(n):
            if s == t or dist[s][t] == INF:
                continue
            paths = all_shortest_paths(nb, dist, s, t)
            for path in paths:
                for v in path[1:-1]:
                    bc[v] += 1.0 / len(paths)
    if n < 3:
        return np.zeros(n)
    return bc / ((n - 1) * (n - 2))


def clustering_oracle(n: int, edges) -> list[float]:
    """Local clustering by scanning every pair of neighbours."""
    nb = neighbours(n, edges)
    out = []
    for v in range(n):
        k = len(nb[v])
        if k < 2:
            out.append(0.0)
            continue
        links = sum(1 for a, b in itertools.combinations(sorted(nb[v]), 2) if b in nb[a])
        out.append(2.0 * links / (k * (k - 1)))
    return out


def components_oracle(n: int, edges) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(n)})


def elevation_oracle(gs, sat) -> float:
    """Elevation as 90 deg minus the angle between local vertical and line of sight."""
    gs = np.asarray(gs, float)
    los = np.asarray(sat, float) - gs
    cosz = np.dot(gs, los) / (np.linalg.norm(gs) * np.linalg.norm(los))
    return 90.0 - math.degrees(math.acos(max(-1.0, min(1.0, cosz))))
