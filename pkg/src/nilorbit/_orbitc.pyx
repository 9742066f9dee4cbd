# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit kernel: partition of F_p^d under a matrix monoid.

Same contract as _kernels_py.orbit_partition, but runs the BFS entirely in
C with a dense label array and an explicit stack, computing images on the
fly (no per-generator image tables, so memory stays at ~16 bytes/point).
"""

import numpy as np

from libc.stdint cimport int64_t

BACKEND = "c"


def orbit_partition(mats, long p, jobs=None):
    mats_arr = np.ascontiguousarray(np.asarray(mats, dtype=np.int64) % p)
    cdef int64_t[:, :, ::1] M = mats_arr
    cdef long g = mats_arr.shape[0]
    cdef long d = mats_arr.shape[1]
    if mats_arr.shape[2] != d:
        raise ValueError("generator matrices must be square")
    cdef long n = 1
    cdef long i, j, a
    for i in range(d):
        n *= p

    labels_arr = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] labels = labels_arr
    stack_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] stack = stack_arr
    radix_arr = np.empty(d, dtype=np.int64)
    cdef int64_t[::1] radix = radix_arr
    digits_arr = np.empty(d, dtype=np.int64)
    cdef int64_t[::1] digits = digits_arr

    radix[0] = 1
    for i in range(1, d):
        radix[i] = radix[i - 1] * p

    cdef long next_id = 0
    cdef long seed = 0
    cdef long top
    cdef int64_t cur, img, acc, rem
    while seed < n:
        if labels[seed] >= 0:
            seed += 1
            continue
        labels[seed] = next_id
        top = 0
        stack[top] = seed
        top += 1
        while top > 0:
            top -= 1
            cur = stack[top]
            rem = cur
            for i in range(d):
                digits[i] = rem % p
                rem = rem // p
            for a in range(g):
                img = 0
                for i in range(d):
                    acc = 0
                    for j in range(d):
                        acc += M[a, i, j] * digits[j]
                    img += (acc % p) * radix[i]
                if labels[img] < 0:
                    labels[img] = next_id
                    stack[top] = img
                    top += 1
        next_id += 1
    return labels_arr
