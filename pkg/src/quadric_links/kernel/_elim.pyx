# cython: language_level=3
"""Compiled boundary reduction for ``cells_homology``.

Same contract as ``_elim_py``.  Each boundary matrix is column-reduced with
int64 arithmetic as long as every pivot is a unit; a reduced matrix whose
pivots are all ±1 has Smith form (1, ..., 1, 0, ...), so only the rank is
needed.  A non-unit pivot or a coefficient that could overflow hands that one
matrix back to the pure-Python eliminator, which is exact.
"""
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t, uint64_t

from ._elim_py import boundary_invariants as _py_boundary_invariants
from ._elim_py import _boundary_columns as _py_boundary_columns

cdef int64_t LIMIT = (<int64_t>1) << 40


cdef struct Col:
    int n
    int cap
    int* idx
    int64_t* val


cdef inline int _search(const uint64_t* arr, int n, uint64_t key) noexcept nogil:
    cdef int lo = 0
    cdef int hi = n - 1
    cdef int mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if arr[mid] == key:
            return mid
        if arr[mid] < key:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


cdef int _axpy(Col* dst, const Col* src, int64_t f, int* tmp_idx, int64_t* tmp_val) noexcept nogil:
    """dst <- dst - f * src, merged in row order.  Returns 1 on overflow risk."""
    cdef int a = 0
    cdef int b = 0
    cdef int k = 0
    cdef int64_t v
    cdef int64_t s
    while a < dst.n or b < src.n:
        if b >= src.n or (a < dst.n and dst.idx[a] < src.idx[b]):
            tmp_idx[k] = dst.idx[a]
            tmp_val[k] = dst.val[a]
            a += 1
            k += 1
        elif a >= dst.n or src.idx[b] < dst.idx[a]:
            s = src.val[b]
            if s > LIMIT or s < -LIMIT or f > LIMIT or f < -LIMIT:
                return 1
            tmp_idx[k] = src.idx[b]
            tmp_val[k] = -f * s
            b += 1
            k += 1
        else:
            s = src.val[b]
            if s > LIMIT or s < -LIMIT or f > LIMIT or f < -LIMIT:
                return 1
            v = dst.val[a] - f * s
            if v != 0:
                if v > LIMIT or v < -LIMIT:
                    return 1
                tmp_idx[k] = dst.idx[a]
                tmp_val[k] = v
                k += 1
            a += 1
            b += 1
    cdef int i
    for i in range(k):
        dst.idx[i] = tmp_idx[i]
        dst.val[i] = tmp_val[i]
    dst.n = k
    return 0


cdef int _reduce(const uint64_t* upper, int nu, const uint64_t* lower, int nl, int* rank_out) noexcept nogil:
    """Column-reduce the boundary from ``upper`` cells to ``lower`` cells.

    Returns 0 when every pivot was a unit (rank in rank_out), 1 otherwise.
    Column capacity is bounded by the number of rows, so one allocation per
    column suffices.
    """
    cdef int status = 0
    cdef int j, i, t, low, owner
    cdef uint64_t c, m, bit
    cdef int64_t sign, f
    cdef int rank = 0
    cdef Col* cols = <Col*> malloc(nu * sizeof(Col))
    cdef int* pivot_of = <int*> malloc((nl + 1) * sizeof(int))
    cdef int* tmp_idx = <int*> malloc((nl + 1) * sizeof(int))
    cdef int64_t* tmp_val = <int64_t*> malloc((nl + 1) * sizeof(int64_t))
    if cols == NULL or pivot_of == NULL or tmp_idx == NULL or tmp_val == NULL:
        free(cols); free(pivot_of); free(tmp_idx); free(tmp_val)
        return 1
    for i in range(nl):
        pivot_of[i] = -1
    for j in range(nu):
        cols[j].n = 0
        cols[j].cap = nl + 1
        cols[j].idx = <int*> malloc((nl + 1) * sizeof(int))
        cols[j].val = <int64_t*> malloc((nl + 1) * sizeof(int64_t))
        if cols[j].idx == NULL or cols[j].val == NULL:
            status = 1
    if status == 0:
        for j in range(nu):
            # faces in increasing bit order, sign alternating from +1
            c = upper[j]
            m = c
            sign = 1
            while m:
                bit = m & (~m + 1)
                t = _search(lower, nl, c ^ bit)
                if t >= 0:
                    cols[j].idx[cols[j].n] = t
                    cols[j].val[cols[j].n] = sign
                    cols[j].n += 1
                sign = -sign
                m ^= bit
            # lower is sorted ascending, faces found in bit order are not
            # necessarily sorted by index: insertion sort the short column
            for i in range(1, cols[j].n):
                t = cols[j].idx[i]
                f = cols[j].val[i]
                low = i - 1
                while low >= 0 and cols[j].idx[low] > t:
                    cols[j].idx[low + 1] = cols[j].idx[low]
                    cols[j].val[low + 1] = cols[j].val[low]
                    low -= 1
                cols[j].idx[low + 1] = t
                cols[j].val[low + 1] = f
        for j in range(nu):
            while cols[j].n > 0:
                low = cols[j].idx[cols[j].n - 1]
                owner = pivot_of[low]
                if owner < 0:
                    break
                # owner's low entry is ±1, so its inverse is itself
                f = cols[j].val[cols[j].n - 1] * cols[owner].val[cols[owner].n - 1]
                if _axpy(&cols[j], &cols[owner], f, tmp_idx, tmp_val):
                    status = 1
                    break
            if status:
                break
            if cols[j].n > 0:
                f = cols[j].val[cols[j].n - 1]
                if f != 1 and f != -1:
                    status = 1
                    break
                pivot_of[cols[j].idx[cols[j].n - 1]] = j
                rank += 1
    for j in range(nu):
        free(cols[j].idx)
        free(cols[j].val)
    free(cols)
    free(pivot_of)
    free(tmp_idx)
    free(tmp_val)
    rank_out[0] = rank
    return status


cdef uint64_t* _as_array(list cells, int* ok):
    cdef int n = len(cells)
    cdef uint64_t* arr = <uint64_t*> malloc((n + 1) * sizeof(uint64_t))
    cdef int i
    ok[0] = 1
    if arr == NULL:
        ok[0] = 0
        return NULL
    for i in range(n):
        v = cells[i]
        if v < 0 or v >= (1 << 63):
            ok[0] = 0
            break
        arr[i] = <uint64_t> v
    return arr


def boundary_rank_torsion(upper, lower):
    """Rank and non-unit invariant factors of the boundary ``upper -> lower``."""
    cdef list up = sorted(upper)
    cdef list lo = sorted(lower)
    cdef int ok_u = 0
    cdef int ok_l = 0
    cdef int rank = 0
    cdef int status = 1
    cdef int nu = len(up)
    cdef int nl = len(lo)
    cdef uint64_t* ua = _as_array(up, &ok_u)
    cdef uint64_t* la = _as_array(lo, &ok_l)
    if ok_u and ok_l:
        with nogil:
            status = _reduce(ua, nu, la, nl, &rank)
    free(ua)
    free(la)
    if status == 0:
        return rank, []
    index = {c: i for i, c in enumerate(lo)}
    return _py_boundary_invariants(_py_boundary_columns(up, index))


def cells_homology(cells_by_dim):
    """Betti numbers and torsion per degree, degree q - 1 at list index q."""
    top = len(cells_by_dim)
    ranks = [0] * (top + 1)
    torsion = [[] for _ in range(top)]
    for q in range(1, top):
        lower = cells_by_dim[q - 1]
        upper = cells_by_dim[q]
        if not lower or not upper:
            continue
        r, tors = boundary_rank_torsion(upper, lower)
        ranks[q] = r
        torsion[q - 1] = sorted(tors)
    betti = [len(cells_by_dim[q]) - ranks[q] - ranks[q + 1] for q in range(top)]
    return betti, torsion


def boundary_invariants(cols):
    return _py_boundary_invariants(cols)


cdef extern from "stdlib.h":
    void qsort(void* base, size_t nmemb, size_t size, int (*compar)(const void*, const void*)) nogil


cdef int _cmp_u64(const void* a, const void* b) noexcept nogil:
    cdef uint64_t x = (<const uint64_t*> a)[0]
    cdef uint64_t y = (<const uint64_t*> b)[0]
    return (x > y) - (x < y)


cdef inline int _popc(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef class FaceTable:
    """Compiled twin of ``_elim_py.FaceTable`` (same methods, same results)."""

    cdef uint64_t* faces
    cdef int nfaces
    cdef int top
    cdef uint64_t* buf
    cdef uint64_t* grouped
    cdef object py_faces

    def __cinit__(self, faces):
        cdef list fl = sorted(set(faces))
        cdef int i
        self.nfaces = len(fl)
        self.faces = <uint64_t*> malloc((self.nfaces + 1) * sizeof(uint64_t))
        self.buf = <uint64_t*> malloc((self.nfaces + 1) * sizeof(uint64_t))
        self.grouped = <uint64_t*> malloc((self.nfaces + 1) * sizeof(uint64_t))
        self.top = 0
        for i in range(self.nfaces):
            if fl[i] < 0 or fl[i] >= (1 << 63):
                raise OverflowError("face masks must fit in 63 bits")
            self.faces[i] = <uint64_t> fl[i]
            if _popc(self.faces[i]) > self.top:
                self.top = _popc(self.faces[i])
        self.py_faces = fl

    def __dealloc__(self):
        free(self.faces)
        free(self.buf)
        free(self.grouped)

    @property
    def face_list(self):
        return list(self.py_faces)

    cdef tuple _homology(self, int count, int top):
        # group self.buf[0:count] by popcount into self.grouped, sorted per group
        cdef int starts[66]
        cdef int sizes[66]
        cdef int fill[66]
        cdef int i, q, g, r, st
        for q in range(66):
            sizes[q] = 0
        for i in range(count):
            sizes[_popc(self.buf[i])] += 1
        st = 0
        for q in range(top + 1):
            starts[q] = st
            fill[q] = st
            st += sizes[q]
        for i in range(count):
            g = _popc(self.buf[i])
            self.grouped[fill[g]] = self.buf[i]
            fill[g] += 1
        for q in range(top + 1):
            if sizes[q] > 1:
                qsort(&self.grouped[starts[q]], sizes[q], sizeof(uint64_t), _cmp_u64)
        ranks = [0] * (top + 2)
        torsion = [[] for _ in range(top + 1)]
        for q in range(1, top + 1):
            if sizes[q] == 0 or sizes[q - 1] == 0:
                continue
            with nogil:
                st = _reduce(&self.grouped[starts[q]], sizes[q], &self.grouped[starts[q - 1]], sizes[q - 1], &r)
            if st == 0:
                ranks[q] = r
            else:
                up = [self.grouped[starts[q] + i] for i in range(sizes[q])]
                lo = [self.grouped[starts[q - 1] + i] for i in range(sizes[q - 1])]
                index = {c: i for i, c in enumerate(lo)}
                rr, tors = _py_boundary_invariants(_py_boundary_columns(up, index))
                ranks[q] = rr
                torsion[q - 1] = sorted(tors)
        betti = [sizes[q] - ranks[q] - ranks[q + 1] for q in range(top + 1)]
        while len(betti) > 1 and sizes[len(betti) - 1] == 0:
            betti.pop()
            torsion.pop()
        return betti, torsion

    def induced(self, mask, cone_bit=0):
        cdef uint64_t m = <uint64_t> mask
        cdef uint64_t v = <uint64_t> cone_bit
        cdef uint64_t rest, f
        cdef int i, count = 0
        if m == 0:
            return [1], [[]]
        if v:
            rest = m & ~v
            for i in range(self.nfaces):
                f = self.faces[i]
                if f and not (f & ~rest) and _search(self.faces, self.nfaces, f | v) < 0:
                    self.buf[count] = f
                    count += 1
        else:
            for i in range(self.nfaces):
                f = self.faces[i]
                if not (f & ~m):
                    self.buf[count] = f
                    count += 1
        return self._homology(count, self.top)

    def link(self, vmask, cone_bit):
        cdef uint64_t m = <uint64_t> vmask
        cdef uint64_t v = <uint64_t> cone_bit
        cdef uint64_t rest = m & ~v
        cdef uint64_t f
        cdef int i, count = 0
        for i in range(self.nfaces):
            f = self.faces[i]
            if not (f & ~rest) and _search(self.faces, self.nfaces, f | v) < 0:
                self.buf[count] = m ^ (f | v)
                count += 1
        return self._homology(count, _popc(m))
