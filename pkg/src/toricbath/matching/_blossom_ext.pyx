# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled blossom core; a typed transcription of ``_blossom_py``.

Hot per-vertex / per-edge state lives in int64 buffers.  Blossom child
lists stay Python lists: they are touched only when blossoms are created,
expanded or augmented through.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef class _State:
    cdef public Py_ssize_t nvertex, nedge
    cdef int64_t[::1] ei, ej, ew, endpoint, nbstart, nbend
    cdef int64_t[::1] mate, label, labelend, inblossom, blossomparent
    cdef int64_t[::1] blossombase, bestedge, dualvar, queue, bestedgeto
    cdef char[::1] allowedge
    cdef Py_ssize_t qlen
    cdef list blossomchilds, blossomendps, blossombestedges, unused

    cdef inline int64_t slack(self, Py_ssize_t k):
        return self.dualvar[self.ei[k]] + self.dualvar[self.ej[k]] - 2 * self.ew[k]

    cdef list leaves(self, Py_ssize_t b):
        cdef list out = []
        cdef list stack
        cdef Py_ssize_t t
        if b < self.nvertex:
            out.append(b)
            return out
        stack = [b]
        while stack:
            t = stack.pop()
            if t < self.nvertex:
                out.append(t)
            else:
                stack.extend(reversed(self.blossomchilds[t]))
        return out

    cdef void push(self, int64_t v):
        self.queue[self.qlen] = v
        self.qlen += 1

    cdef void assign_label(self, Py_ssize_t w, int64_t t, int64_t p):
        cdef Py_ssize_t b, base
        cdef object v
        while True:
            b = self.inblossom[w]
            self.label[w] = t
            self.label[b] = t
            self.labelend[w] = p
            self.labelend[b] = p
            self.bestedge[w] = -1
            self.bestedge[b] = -1
            if t == 1:
                if b < self.nvertex:
                    self.push(b)
                else:
                    for v in self.leaves(b):
                        self.push(v)
                return
            base = self.blossombase[b]
            w = self.endpoint[self.mate[base]]
            p = self.mate[base] ^ 1
            t = 1

    cdef Py_ssize_t scan_blossom(self, Py_ssize_t v, Py_ssize_t w):
        cdef list path = []
        cdef Py_ssize_t base = -1, b, tmp
        cdef object bo
        while v != -1 or w != -1:
            b = self.inblossom[v]
            if self.label[b] & 4:
                base = self.blossombase[b]
                break
            path.append(b)
            self.label[b] = 5
            if self.labelend[b] == -1:
                v = -1
            else:
                v = self.endpoint[self.labelend[b]]
                b = self.inblossom[v]
                v = self.endpoint[self.labelend[b]]
            if w != -1:
                tmp = v
                v = w
                w = tmp
        for bo in path:
            self.label[<Py_ssize_t>bo] = 1
        return base

    cdef void add_blossom(self, Py_ssize_t base, Py_ssize_t k):
        cdef Py_ssize_t v = self.ei[k], w = self.ej[k]
        cdef Py_ssize_t bb = self.inblossom[base]
        cdef Py_ssize_t bv = self.inblossom[v]
        cdef Py_ssize_t bw = self.inblossom[w]
        cdef Py_ssize_t b = self.unused.pop()
        cdef list path = [], endps = [], touched = [], nblist, lst
        cdef object vo, bvo, kko
        cdef Py_ssize_t kk, i, j, bj, q, cur
        self.blossombase[b] = base
        self.blossomparent[b] = -1
        self.blossomparent[bb] = b
        while bv != bb:
            self.blossomparent[bv] = b
            path.append(bv)
            endps.append(self.labelend[bv])
            v = self.endpoint[self.labelend[bv]]
            bv = self.inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.blossomparent[bw] = b
            path.append(bw)
            endps.append(self.labelend[bw] ^ 1)
            w = self.endpoint[self.labelend[bw]]
            bw = self.inblossom[w]
        self.blossomchilds[b] = path
        self.blossomendps[b] = endps
        self.label[b] = 1
        self.labelend[b] = self.labelend[bb]
        self.dualvar[b] = 0
        for vo in self.leaves(b):
            v = vo
            if self.label[self.inblossom[v]] == 2:
                self.push(v)
            self.inblossom[v] = b
        for bvo in path:
            bv = bvo
            if self.blossombestedges[bv] is None:
                for vo in self.leaves(bv):
                    v = vo
                    for q in range(self.nbstart[v], self.nbstart[v + 1]):
                        kk = self.nbend[q] // 2
                        self._consider(kk, b, touched)
            else:
                lst = self.blossombestedges[bv]
                for kko in lst:
                    self._consider(kko, b, touched)
            self.blossombestedges[bv] = None
            self.bestedge[bv] = -1
        touched.sort()
        nblist = []
        for kko in touched:
            bj = kko
            nblist.append(self.bestedgeto[bj])
            self.bestedgeto[bj] = -1
        self.blossombestedges[b] = nblist
        self.bestedge[b] = -1
        for kko in nblist:
            kk = kko
            if self.bestedge[b] == -1 or self.slack(kk) < self.slack(self.bestedge[b]):
                self.bestedge[b] = kk

    cdef inline void _consider(self, Py_ssize_t kk, Py_ssize_t b, list touched):
        cdef Py_ssize_t i = self.ei[kk], j = self.ej[kk], bj, cur
        if self.inblossom[j] == b:
            j = i
        bj = self.inblossom[j]
        if bj != b and self.label[bj] == 1:
            cur = self.bestedgeto[bj]
            if cur == -1:
                touched.append(bj)
                self.bestedgeto[bj] = kk
            elif self.slack(kk) < self.slack(cur):
                self.bestedgeto[bj] = kk

    cdef void expand_blossom(self, Py_ssize_t b, bint endstage):
        cdef list childs, endps
        cdef object so, vo
        cdef Py_ssize_t s, v, entrychild, j, jstep, endptrick, p, bv, found, n
        for so in self.blossomchilds[b]:
            s = so
            self.blossomparent[s] = -1
            if s < self.nvertex:
                self.inblossom[s] = s
            elif endstage and self.dualvar[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for vo in self.leaves(s):
                    self.inblossom[<Py_ssize_t>vo] = s
        if not endstage and self.label[b] == 2:
            childs = self.blossomchilds[b]
            endps = self.blossomendps[b]
            n = len(childs)
            entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]]
            j = childs.index(entrychild)
            if j & 1:
                j -= n
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = self.labelend[b]
            while j != 0:
                self.label[self.endpoint[p ^ 1]] = 0
                self.label[self.endpoint[(<Py_ssize_t>endps[_wrap(j - endptrick, n)]) ^ endptrick ^ 1]] = 0
                self.assign_label(self.endpoint[p ^ 1], 2, p)
                self.allowedge[(<Py_ssize_t>endps[_wrap(j - endptrick, n)]) // 2] = 1
                j += jstep
                p = (<Py_ssize_t>endps[_wrap(j - endptrick, n)]) ^ endptrick
                self.allowedge[p // 2] = 1
                j += jstep
            bv = childs[_wrap(j, n)]
            self.label[self.endpoint[p ^ 1]] = 2
            self.label[bv] = 2
            self.labelend[self.endpoint[p ^ 1]] = p
            self.labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while <Py_ssize_t>childs[_wrap(j, n)] != entrychild:
                bv = childs[_wrap(j, n)]
                if self.label[bv] == 1:
                    j += jstep
                    continue
                found = -1
                for vo in self.leaves(bv):
                    if self.label[<Py_ssize_t>vo] != 0:
                        found = vo
                        break
                if found != -1:
                    v = found
                    self.label[v] = 0
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0
                    self.assign_label(v, 2, self.labelend[v])
                j += jstep
        self.label[b] = -1
        self.labelend[b] = -1
        self.blossomchilds[b] = None
        self.blossomendps[b] = None
        self.blossombase[b] = -1
        self.blossombestedges[b] = None
        self.bestedge[b] = -1
        self.unused.append(b)

    cdef void augment_blossom(self, Py_ssize_t b, Py_ssize_t v):
        cdef Py_ssize_t t = v, i, j, jstep, endptrick, p, n
        cdef list childs, endps
        while self.blossomparent[t] != b:
            t = self.blossomparent[t]
        if t >= self.nvertex:
            self.augment_blossom(t, v)
        childs = self.blossomchilds[b]
        endps = self.blossomendps[b]
        n = len(childs)
        i = childs.index(t)
        j = i
        if i & 1:
            j -= n
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = childs[_wrap(j, n)]
            p = (<Py_ssize_t>endps[_wrap(j - endptrick, n)]) ^ endptrick
            if t >= self.nvertex:
                self.augment_blossom(t, self.endpoint[p])
            j += jstep
            t = childs[_wrap(j, n)]
            if t >= self.nvertex:
                self.augment_blossom(t, self.endpoint[p ^ 1])
            self.mate[self.endpoint[p]] = p ^ 1
            self.mate[self.endpoint[p ^ 1]] = p
        self.blossomchilds[b] = childs[i:] + childs[:i]
        self.blossomendps[b] = endps[i:] + endps[:i]
        self.blossombase[b] = self.blossombase[<Py_ssize_t>self.blossomchilds[b][0]]

    cdef void augment_matching(self, Py_ssize_t k):
        cdef Py_ssize_t s, p, bs, t, bt, j, side
        for side in range(2):
            if side == 0:
                s = self.ei[k]
                p = 2 * k + 1
            else:
                s = self.ej[k]
                p = 2 * k
            while True:
                bs = self.inblossom[s]
                if bs >= self.nvertex:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if self.labelend[bs] == -1:
                    break
                t = self.endpoint[self.labelend[bs]]
                bt = self.inblossom[t]
                s = self.endpoint[self.labelend[bt]]
                j = self.endpoint[self.labelend[bt] ^ 1]
                if bt >= self.nvertex:
                    self.augment_blossom(bt, j)
                self.mate[j] = self.labelend[bt]
                p = self.labelend[bt] ^ 1


cdef inline Py_ssize_t _wrap(Py_ssize_t j, Py_ssize_t n):
    # Python-style negative indexing for the blossom child lists.
    if j < 0:
        return j + n
    return j


def max_weight_matching(Py_ssize_t nvertex, ei, ej, ew, bint maxcardinality=True):
    """Compiled counterpart of ``_blossom_py.max_weight_matching``."""
    cdef _State st = _State()
    cdef Py_ssize_t nedge, k, v, w, p, b, i, j, stage, q
    cdef int64_t maxweight, kslack, delta, d
    cdef Py_ssize_t deltatype, deltaedge, deltablossom
    cdef bint augmented
    cdef int64_t lb

    if nvertex == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty, empty

    ei_a = np.ascontiguousarray(ei, dtype=np.int64)
    ej_a = np.ascontiguousarray(ej, dtype=np.int64)
    ew_a = np.ascontiguousarray(ew, dtype=np.int64)
    nedge = ei_a.shape[0]
    st.nvertex = nvertex
    st.nedge = nedge
    st.ei = ei_a
    st.ej = ej_a
    st.ew = ew_a
    maxweight = 0
    if nedge:
        maxweight = max(0, int(ew_a.max()))

    endpoint = np.empty(2 * nedge, dtype=np.int64)
    endpoint[0::2] = ei_a
    endpoint[1::2] = ej_a
    st.endpoint = endpoint

    # CSR adjacency of edge endpoints, in edge order per vertex
    deg = np.bincount(ei_a, minlength=nvertex) + np.bincount(ej_a, minlength=nvertex)
    nbstart = np.zeros(nvertex + 1, dtype=np.int64)
    np.cumsum(deg, out=nbstart[1:])
    nbend = np.empty(2 * nedge, dtype=np.int64)
    fill = nbstart[:-1].copy()
    cdef int64_t[::1] fillv = fill
    cdef int64_t[::1] nbendv = nbend
    for k in range(nedge):
        i = st.ei[k]
        j = st.ej[k]
        nbendv[fillv[i]] = 2 * k + 1
        fillv[i] += 1
        nbendv[fillv[j]] = 2 * k
        fillv[j] += 1
    st.nbstart = nbstart
    st.nbend = nbend

    st.mate = np.full(nvertex, -1, dtype=np.int64)
    st.label = np.zeros(2 * nvertex, dtype=np.int64)
    st.labelend = np.full(2 * nvertex, -1, dtype=np.int64)
    st.inblossom = np.arange(nvertex, dtype=np.int64)
    st.blossomparent = np.full(2 * nvertex, -1, dtype=np.int64)
    base_arr = np.full(2 * nvertex, -1, dtype=np.int64)
    base_arr[:nvertex] = np.arange(nvertex)
    st.blossombase = base_arr
    st.bestedge = np.full(2 * nvertex, -1, dtype=np.int64)
    st.bestedgeto = np.full(2 * nvertex, -1, dtype=np.int64)
    dual = np.zeros(2 * nvertex, dtype=np.int64)
    dual[:nvertex] = maxweight
    st.dualvar = dual
    st.allowedge = np.zeros(max(nedge, 1), dtype=np.int8)
    # every vertex enters the queue at most twice per stage
    st.queue = np.empty(4 * nvertex + 4, dtype=np.int64)
    st.qlen = 0
    st.blossomchilds = [None] * (2 * nvertex)
    st.blossomendps = [None] * (2 * nvertex)
    st.blossombestedges = [None] * (2 * nvertex)
    st.unused = list(range(nvertex, 2 * nvertex))

    for stage in range(nvertex):
        st.label[:] = 0
        st.bestedge[:] = -1
        for b in range(nvertex, 2 * nvertex):
            st.blossombestedges[b] = None
        st.allowedge[:] = 0
        st.qlen = 0

        for v in range(nvertex):
            if st.mate[v] == -1 and st.label[st.inblossom[v]] == 0:
                st.assign_label(v, 1, -1)

        augmented = False
        while True:
            while st.qlen > 0 and not augmented:
                st.qlen -= 1
                v = st.queue[st.qlen]
                for q in range(st.nbstart[v], st.nbstart[v + 1]):
                    p = st.nbend[q]
                    k = p // 2
                    w = st.endpoint[p]
                    if st.inblossom[v] == st.inblossom[w]:
                        continue
                    kslack = 0
                    if not st.allowedge[k]:
                        kslack = st.slack(k)
                        if kslack <= 0:
                            st.allowedge[k] = 1
                    if st.allowedge[k]:
                        if st.label[st.inblossom[w]] == 0:
                            st.assign_label(w, 2, p ^ 1)
                        elif st.label[st.inblossom[w]] == 1:
                            b = st.scan_blossom(v, w)
                            if b >= 0:
                                st.add_blossom(b, k)
                            else:
                                st.augment_matching(k)
                                augmented = True
                                break
                        elif st.label[w] == 0:
                            st.label[w] = 2
                            st.labelend[w] = p ^ 1
                    elif st.label[st.inblossom[w]] == 1:
                        b = st.inblossom[v]
                        if st.bestedge[b] == -1 or kslack < st.slack(st.bestedge[b]):
                            st.bestedge[b] = k
                    elif st.label[w] == 0:
                        if st.bestedge[w] == -1 or kslack < st.slack(st.bestedge[w]):
                            st.bestedge[w] = k
            if augmented:
                break

            deltatype = -1
            delta = 0
            deltaedge = -1
            deltablossom = -1
            if not maxcardinality:
                deltatype = 1
                delta = st.dualvar[0]
                for v in range(1, nvertex):
                    if st.dualvar[v] < delta:
                        delta = st.dualvar[v]
            for v in range(nvertex):
                if st.label[st.inblossom[v]] == 0 and st.bestedge[v] != -1:
                    d = st.slack(st.bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = st.bestedge[v]
            for b in range(2 * nvertex):
                if st.blossomparent[b] == -1 and st.label[b] == 1 and st.bestedge[b] != -1:
                    d = st.slack(st.bestedge[b]) // 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = st.bestedge[b]
            for b in range(nvertex, 2 * nvertex):
                if (st.blossombase[b] >= 0 and st.blossomparent[b] == -1
                        and st.label[b] == 2
                        and (deltatype == -1 or st.dualvar[b] < delta)):
                    delta = st.dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                deltatype = 1
                delta = st.dualvar[0]
                for v in range(1, nvertex):
                    if st.dualvar[v] < delta:
                        delta = st.dualvar[v]
                if delta < 0:
                    delta = 0

            for v in range(nvertex):
                lb = st.label[st.inblossom[v]]
                if lb == 1:
                    st.dualvar[v] -= delta
                elif lb == 2:
                    st.dualvar[v] += delta
            for b in range(nvertex, 2 * nvertex):
                if st.blossombase[b] >= 0 and st.blossomparent[b] == -1:
                    if st.label[b] == 1:
                        st.dualvar[b] += delta
                    elif st.label[b] == 2:
                        st.dualvar[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                st.allowedge[deltaedge] = 1
                i = st.ei[deltaedge]
                j = st.ej[deltaedge]
                if st.label[st.inblossom[i]] == 0:
                    i = j
                st.push(i)
            elif deltatype == 3:
                st.allowedge[deltaedge] = 1
                st.push(st.ei[deltaedge])
            else:
                st.expand_blossom(deltablossom, False)

        if not augmented:
            break

        for b in range(nvertex, 2 * nvertex):
            if (st.blossomparent[b] == -1 and st.blossombase[b] >= 0
                    and st.label[b] == 1 and st.dualvar[b] == 0):
                st.expand_blossom(b, True)

    out = np.full(nvertex, -1, dtype=np.int64)
    cdef int64_t[::1] outv = out
    for v in range(nvertex):
        if st.mate[v] >= 0:
            outv[v] = st.endpoint[st.mate[v]]
    return (out, np.asarray(st.dualvar).copy(), np.asarray(st.blossomparent).copy(),
            np.asarray(st.blossombase).copy())
