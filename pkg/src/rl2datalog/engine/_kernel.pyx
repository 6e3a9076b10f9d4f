# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled join kernel; behaviour matches ``_kernel_py``."""

from libc.stdlib cimport malloc, free

cdef enum:
    ATOM = 0
    NEG = 1
    CMP = 2

ctypedef long long val_t


cdef struct StepInfo:
    int kind
    int op
    int nkey
    int key_off
    int nchk
    int chk_off
    int nbind
    int bind_off
    val_t a
    val_t b


cdef class Plan:
    cdef StepInfo* steps
    cdef val_t* data
    cdef val_t* binding
    cdef val_t* head
    cdef int nsteps
    cdef int nhead
    cdef int nvars
    cdef list sources
    cdef set out

    def __cinit__(self, steps, sources, head, nvars):
        cdef int total = 0, i, j, off
        steps = [tuple(s) for s in steps]
        self.nsteps = len(steps)
        self.nvars = max(int(nvars), 1)
        self.nhead = len(head)
        for s in steps:
            if s[0] == ATOM:
                total += len(s[1]) + len(s[2]) + len(s[3])
            elif s[0] == NEG:
                total += len(s[1])
        self.steps = <StepInfo*>malloc(max(self.nsteps, 1) * sizeof(StepInfo))
        self.data = <val_t*>malloc(max(total, 1) * sizeof(val_t))
        self.binding = <val_t*>malloc(self.nvars * sizeof(val_t))
        self.head = <val_t*>malloc(max(self.nhead, 1) * sizeof(val_t))
        if not (self.steps and self.data and self.binding and self.head):
            raise MemoryError()
        for i in range(self.nvars):
            self.binding[i] = 0
        for i in range(self.nhead):
            self.head[i] = head[i]
        off = 0
        for i, s in enumerate(steps):
            self.steps[i].kind = s[0]
            self.steps[i].nkey = self.steps[i].nchk = self.steps[i].nbind = 0
            if s[0] == ATOM:
                self.steps[i].nkey = len(s[1])
                self.steps[i].key_off = off
                for v in s[1]:
                    self.data[off] = v
                    off += 1
                self.steps[i].nchk = len(s[2]) // 2
                self.steps[i].chk_off = off
                for v in s[2]:
                    self.data[off] = v
                    off += 1
                self.steps[i].nbind = len(s[3]) // 2
                self.steps[i].bind_off = off
                for v in s[3]:
                    self.data[off] = v
                    off += 1
            elif s[0] == NEG:
                self.steps[i].nkey = len(s[1])
                self.steps[i].key_off = off
                for v in s[1]:
                    self.data[off] = v
                    off += 1
            else:
                self.steps[i].op = s[1]
                self.steps[i].a = s[2]
                self.steps[i].b = s[3]
        self.sources = list(sources)

    def __dealloc__(self):
        free(self.steps)
        free(self.data)
        free(self.binding)
        free(self.head)

    def set_source(self, int i, source):
        self.sources[i] = source

    def run(self, set out):
        self.out = out
        try:
            self._go(0)
        finally:
            self.out = None
        return len(out)

    cdef inline val_t _val(self, val_t src):
        return self.binding[src] if src >= 0 else -src - 1

    cdef int _go(self, int d) except -1:
        cdef StepInfo* st
        cdef int j, ok, op
        cdef val_t x, y
        cdef val_t* dat
        cdef tuple row
        cdef object rows, src, key
        if d == self.nsteps:
            self.out.add(tuple([self._val(self.head[j]) for j in range(self.nhead)]))
            return 0
        st = &self.steps[d]
        dat = self.data
        if st.kind == ATOM:
            src = self.sources[d]
            if st.nkey:
                if st.nkey == 1:
                    key = self._val(dat[st.key_off])
                else:
                    key = tuple([self._val(dat[st.key_off + j]) for j in range(st.nkey)])
                rows = src.get(key)
                if rows is None:
                    return 0
            else:
                rows = src
            for row in rows:
                for j in range(st.nbind):
                    self.binding[dat[st.bind_off + 2 * j + 1]] = row[dat[st.bind_off + 2 * j]]
                ok = 1
                for j in range(st.nchk):
                    if <val_t>row[dat[st.chk_off + 2 * j]] != self._val(dat[st.chk_off + 2 * j + 1]):
                        ok = 0
                        break
                if ok:
                    self._go(d + 1)
        elif st.kind == NEG:
            key = tuple([self._val(dat[st.key_off + j]) for j in range(st.nkey)])
            if key not in self.sources[d]:
                self._go(d + 1)
        else:
            x = self._val(st.a)
            y = self._val(st.b)
            op = st.op
            if op == 0:
                ok = x < y
            elif op == 1:
                ok = x <= y
            elif op == 2:
                ok = x > y
            elif op == 3:
                ok = x >= y
            elif op == 4:
                ok = x == y
            else:
                ok = x != y
            if ok:
                self._go(d + 1)
        return 0
