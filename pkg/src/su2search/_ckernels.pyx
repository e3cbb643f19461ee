"""Compiled inner loops. Same signatures as :mod:`su2search._pykernels`."""

from libc.math cimport sqrt

BACKEND = "cython"


def power2(double complex[:, ::1] g, Py_ssize_t m, double complex[:, ::1] out):
    cdef double complex a = g[0, 0], b = g[0, 1], c = g[1, 0], d = g[1, 1]
    cdef double complex r00 = 1, r01 = 0, r10 = 0, r11 = 1
    cdef double complex t00, t01, t10, t11
    cdef Py_ssize_t k
    for k in range(m):
        t00 = a * r00 + b * r10
        t01 = a * r01 + b * r11
        t10 = c * r00 + d * r10
        t11 = c * r01 + d * r11
        r00 = t00
        r01 = t01
        r10 = t10
        r11 = t11
    out[0, 0] = r00
    out[0, 1] = r01
    out[1, 0] = r10
    out[1, 1] = r11


def apply_power2_batch(double complex[:, :, ::1] gs, double complex[:, ::1] vs,
                       Py_ssize_t m, double complex[:, ::1] out):
    cdef Py_ssize_t i, k, n = gs.shape[0]
    cdef double complex a, b, c, d, x, y, t
    for i in range(n):
        a = gs[i, 0, 0]
        b = gs[i, 0, 1]
        c = gs[i, 1, 0]
        d = gs[i, 1, 1]
        x = vs[i, 0]
        y = vs[i, 1]
        for k in range(m):
            t = a * x + b * y
            y = c * x + d * y
            x = t
        out[i, 0] = x
        out[i, 1] = y


cdef void _fwht(double complex[::1] v) noexcept nogil:
    cdef Py_ssize_t n = v.shape[0], h = 1, i, j
    cdef double complex x, y
    cdef double scale
    while h < n:
        i = 0
        while i < n:
            for j in range(i, i + h):
                x = v[j]
                y = v[j + h]
                v[j] = x + y
                v[j + h] = x - y
            i += 2 * h
        h *= 2
    scale = 1.0 / sqrt(<double>n)
    for j in range(n):
        v[j] = v[j] * scale


def fwht(double complex[::1] v):
    _fwht(v)


def walsh_search(double complex[::1] v, Py_ssize_t tau, Py_ssize_t eta,
                 double complex e_phi, double complex e_theta, Py_ssize_t m):
    cdef Py_ssize_t k, j, n = v.shape[0]
    with nogil:
        for k in range(m):
            v[tau] = v[tau] * e_phi
            _fwht(v)
            v[eta] = v[eta] * e_theta
            _fwht(v)
            for j in range(n):
                v[j] = -v[j]
