# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled sample-evaluation kernel.

Same contract as ``_pure.eval_many``: per sample, fill a Hermite table by
the three-term recurrence, then accumulate weighted products over the
coefficient rows.  Built with -ffp-contract=off so results match the
numpy fallback bit for bit.
"""
import numpy as np


def eval_many(occ, weights, samples):
    occ_arr = np.ascontiguousarray(occ, dtype=np.int64)
    w_arr = np.ascontiguousarray(weights, dtype=np.float64)
    s_arr = np.ascontiguousarray(samples, dtype=np.float64)
    out_arr = np.zeros(s_arr.shape[0], dtype=np.float64)

    cdef long long[:, ::1] occ_v = occ_arr
    cdef double[::1] w_v = w_arr
    cdef double[:, ::1] s_v = s_arr
    cdef double[::1] out_v = out_arr

    cdef Py_ssize_t n_coeffs = occ_v.shape[0]
    cdef Py_ssize_t n_samples = s_v.shape[0]
    cdef Py_ssize_t dim = s_v.shape[1]
    if n_coeffs == 0:
        return out_arr
    if occ_v.shape[1] != dim:
        raise ValueError("occupation and sample dims disagree")

    cdef long long kmax = 0
    cdef Py_ssize_t i, j, t, k
    for j in range(n_coeffs):
        for i in range(dim):
            if occ_v[j, i] > kmax:
                kmax = occ_v[j, i]
    cdef Py_ssize_t n_orders = kmax + 1

    herm_arr = np.empty((dim, n_orders), dtype=np.float64)
    cdef double[:, ::1] herm = herm_arr
    cdef double x, acc, p

    with nogil:
        for t in range(n_samples):
            for i in range(dim):
                x = s_v[t, i]
                herm[i, 0] = 1.0
                if n_orders > 1:
                    herm[i, 1] = x
                for k in range(2, n_orders):
                    herm[i, k] = x * herm[i, k - 1] - (k - 1) * herm[i, k - 2]
            acc = 0.0
            for j in range(n_coeffs):
                p = w_v[j]
                for i in range(dim):
                    p *= herm[i, occ_v[j, i]]
                acc += p
            out_v[t] = acc
    return out_arr
