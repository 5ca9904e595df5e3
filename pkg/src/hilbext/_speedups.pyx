# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sign kernels; same contract as ``_pykernels``."""

from libc.stdlib cimport malloc, free

ctypedef unsigned long long u64


cdef inline int _popcount(u64 x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef int* _as_cints(seq, Py_ssize_t n) except NULL:
    cdef int* buf = <int*> malloc(max(n, 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t k
    for k in range(n):
        buf[k] = seq[k]
    return buf


cdef inline int _eps_sigma(const int* im, int n, u64 mask) nogil:
    cdef int a, b, inv = 0
    for a in range(n):
        if not (mask >> a) & 1:
            continue
        for b in range(a + 1, n):
            if (mask >> b) & 1 and im[a] > im[b]:
                inv += 1
    return -1 if inv & 1 else 1


cdef inline int _eps_m(int m, u64 mask) nogil:
    return -1 if _popcount(mask & ((<u64> 1 << m) - 1)) & 1 else 1


def perm_sign(images):
    cdef Py_ssize_t n = len(images)
    cdef int* im = _as_cints(images, n)
    cdef int s
    try:
        s = _eps_sigma(im, <int> n, (<u64> 1 << n) - 1 if n < 64 else <u64> -1)
    finally:
        free(im)
    return s


def koszul_sign(images, degrees):
    cdef Py_ssize_t n = len(images)
    if len(degrees) != n:
        raise ValueError("length mismatch between permutation and degrees")
    cdef u64 mask = 0
    cdef Py_ssize_t k
    if n > 64:
        from hilbext._pykernels import koszul_sign as slow
        return slow(images, degrees)
    for k in range(n):
        if degrees[k] & 1:
            mask |= <u64> 1 << k
    cdef int* im = _as_cints(images, n)
    cdef int s
    try:
        s = _eps_sigma(im, <int> n, mask)
    finally:
        free(im)
    return s


def eps_sigma_mask(images, u64 mask):
    cdef Py_ssize_t n = len(images)
    cdef int* im = _as_cints(images, n)
    cdef int s
    try:
        s = _eps_sigma(im, <int> n, mask)
    finally:
        free(im)
    return s


def eps_m_mask(int m, u64 mask):
    return _eps_m(m, mask)


def image_mask(images, u64 mask):
    cdef u64 out = 0
    cdef Py_ssize_t a
    for a in range(len(images)):
        if (mask >> a) & 1:
            out |= <u64> 1 << <int> images[a]
    return out


def d_squared_violations(int n):
    bad = []
    cdef u64 J, full = (<u64> 1 << n)
    cdef int i, j, lhs
    for J in range(full):
        for i in range(n):
            if not (J >> i) & 1:
                continue
            for j in range(i + 1, n):
                if not (J >> j) & 1:
                    continue
                lhs = (_eps_m(i, J) * _eps_m(j, J & ~(<u64> 1 << i))
                       + _eps_m(j, J) * _eps_m(i, J & ~(<u64> 1 << j)))
                if lhs != 0:
                    bad.append((J, i, j))
    return bad


def equivariance_violations(images, int n):
    bad = []
    cdef int* im = _as_cints(images, n)
    cdef u64 I, J, sI, sJ, full = (<u64> 1 << n) - 1
    cdef int i, a, e_I
    try:
        for I in range(1, full):
            e_I = _eps_sigma(im, n, I)
            sI = 0
            for a in range(n):
                if (I >> a) & 1:
                    sI |= <u64> 1 << im[a]
            for i in range(n):
                if (I >> i) & 1:
                    continue
                J = I | (<u64> 1 << i)
                sJ = sI | (<u64> 1 << im[i])
                if _eps_m(i, J) * e_I != _eps_sigma(im, n, J) * _eps_m(im[i], sJ):
                    bad.append((I, i))
    finally:
        free(im)
    return bad
