# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled search kernel; same interface and results as ``_kernels_py``."""

from libc.string cimport memcpy
from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair
from libcpp.algorithm cimport sort

import math

BACKEND = "cython"

cdef int INF_COST = 1 << 30


cdef inline bint test(const unsigned char* s, int i) nogil:
    return (s[i >> 3] >> (i & 7)) & 1


cdef inline void setbit(unsigned char* s, int i) nogil:
    s[i >> 3] |= <unsigned char>(1 << (i & 7))


cdef inline void clearbit(unsigned char* s, int i) nogil:
    s[i >> 3] &= <unsigned char>~(1 << (i & 7))


cdef class Kernel:
    cdef object task
    cdef int n, n_bytes, n_ops
    cdef const int[:] pre_pos_off, pre_pos_idx, pre_neg_off, pre_neg_idx
    cdef const int[:] act_eff_off
    cdef const int[:] eff_cpos_off, eff_cpos_idx, eff_cneg_off, eff_cneg_idx
    cdef const int[:] eff_add_off, eff_add_idx, eff_del_off, eff_del_idx
    cdef const int[:] op_pre_off, op_pre_idx, op_add_off, op_add_idx
    cdef const int[:] fluent_ops_off, fluent_ops_idx
    cdef const int[:] trig_off, trig_idx, always, goal_pos, goal_neg
    cdef object _keep
    # scratch buffers reused across calls
    cdef vector[int] cost, remaining, acc, cand, adds, dels
    cdef vector[unsigned char] mark

    def __init__(self, task):
        self.task = task
        self.n = task.n_fluents
        self.n_bytes = task.n_bytes
        f = task.flat()
        self._keep = f
        self.pre_pos_off, self.pre_pos_idx = f["pre_pos_off"], f["pre_pos_idx"]
        self.pre_neg_off, self.pre_neg_idx = f["pre_neg_off"], f["pre_neg_idx"]
        self.act_eff_off = f["act_eff_off"]
        self.eff_cpos_off, self.eff_cpos_idx = f["eff_cpos_off"], f["eff_cpos_idx"]
        self.eff_cneg_off, self.eff_cneg_idx = f["eff_cneg_off"], f["eff_cneg_idx"]
        self.eff_add_off, self.eff_add_idx = f["eff_add_off"], f["eff_add_idx"]
        self.eff_del_off, self.eff_del_idx = f["eff_del_off"], f["eff_del_idx"]
        self.op_pre_off, self.op_pre_idx = f["op_pre_off"], f["op_pre_idx"]
        self.op_add_off, self.op_add_idx = f["op_add_off"], f["op_add_idx"]
        self.fluent_ops_off, self.fluent_ops_idx = f["fluent_ops_off"], f["fluent_ops_idx"]
        self.trig_off, self.trig_idx = f["trig_off"], f["trig_idx"]
        self.always, self.goal_pos, self.goal_neg = f["always"], f["goal_pos"], f["goal_neg"]
        self.n_ops = len(f["op_pre_off"]) - 1
        self.cost.resize(self.n)
        self.remaining.resize(self.n_ops)
        self.acc.resize(self.n_ops)
        self.mark.resize(self.n)

    def is_goal(self, bytes state):
        cdef const unsigned char* s = state
        cdef int k
        for k in range(self.goal_pos.shape[0]):
            if not test(s, self.goal_pos[k]):
                return False
        for k in range(self.goal_neg.shape[0]):
            if test(s, self.goal_neg[k]):
                return False
        return True

    def goal_count(self, bytes state):
        cdef const unsigned char* s = state
        cdef int k, c = 0
        for k in range(self.goal_pos.shape[0]):
            if not test(s, self.goal_pos[k]):
                c += 1
        for k in range(self.goal_neg.shape[0]):
            if test(s, self.goal_neg[k]):
                c += 1
        return c

    cdef bint _applicable(self, const unsigned char* s, int a) nogil:
        cdef int k
        for k in range(self.pre_pos_off[a], self.pre_pos_off[a + 1]):
            if not test(s, self.pre_pos_idx[k]):
                return False
        for k in range(self.pre_neg_off[a], self.pre_neg_off[a + 1]):
            if test(s, self.pre_neg_idx[k]):
                return False
        return True

    cdef bint _triggered(self, const unsigned char* s, int e) nogil:
        cdef int k
        for k in range(self.eff_cpos_off[e], self.eff_cpos_off[e + 1]):
            if not test(s, self.eff_cpos_idx[k]):
                return False
        for k in range(self.eff_cneg_off[e], self.eff_cneg_off[e + 1]):
            if test(s, self.eff_cneg_idx[k]):
                return False
        return True

    def successors(self, bytes state):
        cdef const unsigned char* s = state
        cdef int i, k, a, e, f
        cdef bint bad
        cdef bytearray buf
        cdef unsigned char* t
        self.cand.clear()
        for k in range(self.always.shape[0]):
            self.cand.push_back(self.always[k])
        for i in range(self.n):
            if test(s, i):
                for k in range(self.trig_off[i], self.trig_off[i + 1]):
                    self.cand.push_back(self.trig_idx[k])
        sort(self.cand.begin(), self.cand.end())
        out = []
        for i in range(<int>self.cand.size()):
            a = self.cand[i]
            if not self._applicable(s, a):
                continue
            self.adds.clear()
            self.dels.clear()
            for e in range(self.act_eff_off[a], self.act_eff_off[a + 1]):
                if self._triggered(s, e):
                    for k in range(self.eff_add_off[e], self.eff_add_off[e + 1]):
                        self.adds.push_back(self.eff_add_idx[k])
                    for k in range(self.eff_del_off[e], self.eff_del_off[e + 1]):
                        self.dels.push_back(self.eff_del_idx[k])
            # conflict check: an atom both added and deleted
            for k in range(<int>self.adds.size()):
                self.mark[self.adds[k]] = 1
            bad = False
            for k in range(<int>self.dels.size()):
                if self.mark[self.dels[k]]:
                    bad = True
                    break
            for k in range(<int>self.adds.size()):
                self.mark[self.adds[k]] = 0
            if bad:
                continue
            buf = bytearray(self.n_bytes)
            t = buf
            memcpy(t, s, self.n_bytes)
            for k in range(<int>self.dels.size()):
                clearbit(t, self.dels[k])
            for k in range(<int>self.adds.size()):
                setbit(t, self.adds[k])
            out.append((a, bytes(buf)))
        return out

    def h_add(self, bytes state):
        cdef const unsigned char* s = state
        cdef int i, k, u, g, h, c, nc, goals_left = 0, unsat_neg = 0
        cdef long total = 0
        cdef priority_queue[pair[int, int]] heap  # max-heap on (-cost, fluent)
        cdef pair[int, int] top
        for k in range(self.goal_neg.shape[0]):
            if test(s, self.goal_neg[k]):
                unsat_neg += 1
        for k in range(self.goal_pos.shape[0]):
            if not test(s, self.goal_pos[k]):
                goals_left += 1
        if goals_left == 0:
            return unsat_neg
        for i in range(self.n):
            if test(s, i):
                self.cost[i] = 0
                heap.push(pair[int, int](0, -i))
            else:
                self.cost[i] = INF_COST
        for u in range(self.n_ops):
            self.remaining[u] = self.op_pre_off[u + 1] - self.op_pre_off[u]
            self.acc[u] = 0
            if self.remaining[u] == 0:
                for k in range(self.op_add_off[u], self.op_add_off[u + 1]):
                    g = self.op_add_idx[k]
                    if self.cost[g] > 1:
                        self.cost[g] = 1
                        heap.push(pair[int, int](-1, -g))
        for k in range(self.goal_pos.shape[0]):
            self.mark[self.goal_pos[k]] = 1 if self.cost[self.goal_pos[k]] != 0 else 0
        while not heap.empty() and goals_left > 0:
            top = heap.top()
            heap.pop()
            c = -top.first
            i = -top.second
            if c > self.cost[i]:
                continue
            if self.mark[i]:
                self.mark[i] = 0
                goals_left -= 1
            for k in range(self.fluent_ops_off[i], self.fluent_ops_off[i + 1]):
                u = self.fluent_ops_idx[k]
                self.acc[u] += c
                self.remaining[u] -= 1
                if self.remaining[u] == 0:
                    nc = self.acc[u] + 1
                    for g in range(self.op_add_off[u], self.op_add_off[u + 1]):
                        h = self.op_add_idx[g]
                        if nc < self.cost[h]:
                            self.cost[h] = nc
                            heap.push(pair[int, int](-nc, -h))
        for k in range(self.goal_pos.shape[0]):
            self.mark[self.goal_pos[k]] = 0
        for k in range(self.goal_pos.shape[0]):
            c = self.cost[self.goal_pos[k]]
            if c >= INF_COST:
                return math.inf
            total += c
        return total + unsat_neg
