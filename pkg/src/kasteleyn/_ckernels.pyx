# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in _pykernels."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin

cnp.import_array()


def power_sums(const double complex[:] logg, const double complex[:] logg1,
               const double complex[:] weight, const long long[:] ks,
               const long long[:] ls, const double[:] shifts):
    cdef Py_ssize_t m, j, nm = ks.shape[0], nj = weight.shape[0]
    cdef double re, im, amp, cr, ci, sr, si, l, k
    out = np.empty(nm, dtype=np.complex128)
    cdef double complex[:] o = out
    for m in range(nm):
        l = <double>ls[m]
        k = <double>ks[m]
        sr = 0.0
        si = 0.0
        for j in range(nj):
            re = l * logg[j].real + k * logg1[j].real - shifts[m]
            im = l * logg[j].imag + k * logg1[j].imag
            amp = exp(re)
            cr = amp * cos(im)
            ci = amp * sin(im)
            sr += weight[j].real * cr - weight[j].imag * ci
            si += weight[j].real * ci + weight[j].imag * cr
        o[m] = sr + 1j * si
    return out


def transfer_step(const double[:] vec, int n_out, const long long[:] opt_bit,
                  const double[:] opt_w, const long long[:] keep, long long retire_mask):
    cdef Py_ssize_t s, o, i, ns = vec.shape[0], no = opt_bit.shape[0], nk = keep.shape[0]
    cdef long long b, s2, t
    cdef double v
    out = np.zeros(1 << n_out, dtype=np.float64)
    cdef double[:] res = out
    for s in range(ns):
        v = vec[s]
        if v == 0.0:
            continue
        for o in range(no):
            b = (<long long>1) << opt_bit[o]
            if s & b:
                continue
            s2 = s | b
            if (s2 & retire_mask) != retire_mask:
                continue
            t = 0
            for i in range(nk):
                t |= ((s2 >> keep[i]) & 1) << i
            res[t] += v * opt_w[o]
    return out
