# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled flow kernel: unit-capacity disjoint-path counting.

Same network layout and results as ``pure``; see that module for the
interface contract.
"""

from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memcpy

NAME = "c"


cdef class _Prep:
    cdef int n
    cdef int nedges
    cdef int *eto
    cdef signed char *base_cap
    cdef int *adj_ptr      # CSR over split nodes, length 2n+1
    cdef int *adj_eid
    cdef signed char *cap  # scratch
    cdef int *pred
    cdef int *seen
    cdef int *queue
    cdef int stamp

    def __cinit__(self, int n, adjacency):
        cdef int m = 0
        for row in adjacency:
            m += len(row)
        cdef int pairs = n + m
        self.n = n
        self.nedges = 2 * pairs
        self.eto = <int *> malloc(self.nedges * sizeof(int))
        self.base_cap = <signed char *> malloc(self.nedges)
        self.adj_ptr = <int *> calloc(2 * n + 2, sizeof(int))
        self.adj_eid = <int *> malloc(self.nedges * sizeof(int))
        self.cap = <signed char *> malloc(self.nedges)
        self.pred = <int *> malloc(2 * n * sizeof(int))
        self.seen = <int *> calloc(2 * n, sizeof(int))
        self.queue = <int *> malloc(2 * n * sizeof(int))
        self.stamp = 0
        if (self.eto == NULL or self.base_cap == NULL or self.adj_ptr == NULL
                or self.adj_eid == NULL or self.cap == NULL or self.pred == NULL
                or self.seen == NULL or self.queue == NULL):
            raise MemoryError()

        # first pass: degree counts per split node
        cdef int u, v, w
        for v in range(n):
            self.adj_ptr[v + 1] += 1          # entry(v) -> exit(v)
            self.adj_ptr[v + n + 1] += 1      # reverse
        for u in range(n):
            for w in adjacency[u]:
                self.adj_ptr[u + n + 1] += 1  # exit(u) -> entry(w)
                self.adj_ptr[w + 1] += 1      # reverse
        for v in range(2 * n):
            self.adj_ptr[v + 1] += self.adj_ptr[v]

        cdef int *fill = <int *> calloc(2 * n, sizeof(int))
        if fill == NULL:
            raise MemoryError()
        cdef int eid = 0
        for v in range(n):
            eid = self._add(v, v + n, fill, eid)
        for u in range(n):
            for w in adjacency[u]:
                eid = self._add(u + n, w, fill, eid)
        free(fill)

    cdef int _add(self, int a, int b, int *fill, int eid):
        self.eto[eid] = b
        self.base_cap[eid] = 1
        self.adj_eid[self.adj_ptr[a] + fill[a]] = eid
        fill[a] += 1
        self.eto[eid + 1] = a
        self.base_cap[eid + 1] = 0
        self.adj_eid[self.adj_ptr[b] + fill[b]] = eid + 1
        fill[b] += 1
        return eid + 2

    def __dealloc__(self):
        free(self.eto)
        free(self.base_cap)
        free(self.adj_ptr)
        free(self.adj_eid)
        free(self.cap)
        free(self.pred)
        free(self.seen)
        free(self.queue)


def prepare(int n, adjacency):
    return _Prep(n, adjacency)


def local_connectivity(_Prep prep, int s, int t, int limit):
    cdef int n = prep.n
    if limit <= 0:
        limit = n
    memcpy(prep.cap, prep.base_cap, prep.nedges)
    cdef int src = s + n
    cdef int snk = t
    cdef int flow = 0
    cdef int head, tail, u, v, eid, i, reached
    while flow < limit:
        prep.stamp += 1
        prep.seen[src] = prep.stamp
        prep.queue[0] = src
        head = 0
        tail = 1
        reached = 0
        while head < tail:
            u = prep.queue[head]
            head += 1
            if u == snk:
                reached = 1
                break
            for i in range(prep.adj_ptr[u], prep.adj_ptr[u + 1]):
                eid = prep.adj_eid[i]
                v = prep.eto[eid]
                if prep.cap[eid] and prep.seen[v] != prep.stamp:
                    prep.seen[v] = prep.stamp
                    prep.pred[v] = eid
                    prep.queue[tail] = v
                    tail += 1
        if not reached:
            break
        v = snk
        while v != src:
            eid = prep.pred[v]
            prep.cap[eid] -= 1
            prep.cap[eid ^ 1] += 1
            v = prep.eto[eid ^ 1]
        flow += 1
    return flow
