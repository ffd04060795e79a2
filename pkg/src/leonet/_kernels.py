"""Compiled single-source shortest-path kernels.

Each kernel handles a contiguous block of BFS/Dijkstra sources and writes the
block's betweenness contributions into its own output row, so callers can run
blocks on any number of threads and still reduce in a fixed order.
"""

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def bfs_block(indptr, indices, start, stop, want_bc, bc_row, ecc, dsum, reach):
    n = indptr.size - 1
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    delta = np.zeros(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    for src in range(start, stop):
        dist[src] = 0
        sigma[src] = 1.0
        order[0] = src
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v] + 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dv
                    order[tail] = w
                    tail += 1
                if dist[w] == dv:
                    sigma[w] += sigma[v]
        ecc[src] = dist[order[tail - 1]]
        total = 0.0
        for k in range(tail):
            total += dist[order[k]]
        dsum[src] = total
        reach[src] = tail - 1
        if want_bc:
            for k in range(tail - 1, 0, -1):
                w = order[k]
                coeff = (1.0 + delta[w]) / sigma[w]
                dw = dist[w] - 1
                for j in range(indptr[w], indptr[w + 1]):
                    v = indices[j]
                    if dist[v] == dw:
                        delta[v] += sigma[v] * coeff
                bc_row[w] += delta[w]
        for k in range(tail):
            v = order[k]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0


@njit(nogil=True, cache=True)
def _heap_push(hkey, hval, size, key, val):
    i = size
    hkey[i] = key
    hval[i] = val
    while i > 0:
        parent = (i - 1) // 2
        if hkey[parent] < hkey[i] or (hkey[parent] == hkey[i] and hval[parent] <= hval[i]):
            break
        hkey[parent], hkey[i] = hkey[i], hkey[parent]
        hval[parent], hval[i] = hval[i], hval[parent]
        i = parent
    return size + 1


@njit(nogil=True, cache=True)
def _heap_pop(hkey, hval, size):
    key = hkey[0]
    val = hval[0]
    size -= 1
    hkey[0] = hkey[size]
    hval[0] = hval[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        c = left
        right = left + 1
        if right < size and (hkey[right] < hkey[left] or (hkey[right] == hkey[left] and hval[right] < hval[left])):
            c = right
        if hkey[i] < hkey[c] or (hkey[i] == hkey[c] and hval[i] <= hval[c]):
            break
        hkey[c], hkey[i] = hkey[i], hkey[c]
        hval[c], hval[i] = hval[i], hval[c]
        i = c
    return key, val, size


@njit(nogil=True, cache=True)
def dijkstra_block(indptr, indices, weights, start, stop, bc_row, ecc, dsum, reach):
    n = indptr.size - 1
    m = indices.size
    dist = np.full(n, np.inf)
    sigma = np.zeros(n, dtype=np.float64)
    delta = np.zeros(n, dtype=np.float64)
    done = np.zeros(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    hkey = np.empty(m + 1, dtype=np.float64)
    hval = np.empty(m + 1, dtype=np.int64)
    for src in range(start, stop):
        dist[src] = 0.0
        sigma[src] = 1.0
        size = _heap_push(hkey, hval, 0, 0.0, src)
        tail = 0
        while size > 0:
            d, v, size = _heap_pop(hkey, hval, size)
            if done[v] or d > dist[v]:
                continue
            done[v] = True
            order[tail] = v
            tail += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if done[w]:
                    continue
                nd = d + weights[k]
                if nd < dist[w]:
                    dist[w] = nd
                    sigma[w] = sigma[v]
                    size = _heap_push(hkey, hval, size, nd, w)
                elif nd == dist[w]:
                    sigma[w] += sigma[v]
        ecc[src] = dist[order[tail - 1]]
        total = 0.0
        for k in range(tail):
            total += dist[order[k]]
        dsum[src] = total
        reach[src] = tail - 1
        for k in range(tail - 1, 0, -1):
            w = order[k]
            coeff = (1.0 + delta[w]) / sigma[w]
            for j in range(indptr[w], indptr[w + 1]):
                v = indices[j]
                if dist[v] + weights[j] == dist[w]:
                    delta[v] += sigma[v] * coeff
            bc_row[w] += delta[w]
        for k in range(tail):
            v = order[k]
            dist[v] = np.inf
            sigma[v] = 0.0
            delta[v] = 0.0
            done[v] = False
