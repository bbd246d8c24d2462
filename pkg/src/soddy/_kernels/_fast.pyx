# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: residual products, Jacobian data, flower bisection.

Mirrors ``_ref.py`` operation for operation; both backends must return
bit-identical results.
"""

from libc.math cimport atan2, sqrt, fabs
from libc.stdlib cimport malloc, free

cdef double TWO_PI = 6.283185307179586476925287

cdef enum:
    TRIANGLE = 0
    EDGE = 1
    VERTEX = 2
    HOLONOMY = 3
    PIN = 4
    RATIO = 5
    VERTEX_ARG = 6
    HOLONOMY_ARG = 7


def product_im(double[::1] m, signed char[::1] delta):
    cdef double re = 1.0, im = 0.0, a, d, t
    cdef Py_ssize_t j
    for j in range(m.shape[0]):
        a = m[j]
        d = <double> delta[j]
        t = re * a - im * d
        im = re * d + im * a
        re = t
    return im


def product_im_grad(double[::1] m, signed char[::1] delta, double[::1] out):
    cdef Py_ssize_t n = m.shape[0], j
    cdef double re = 1.0, im = 0.0, sre = 1.0, sim = 0.0, a, d, t
    cdef double *pre_re = <double *> malloc(2 * n * sizeof(double))
    cdef double *pre_im = pre_re + n
    if pre_re == NULL:
        raise MemoryError()
    try:
        for j in range(n):
            pre_re[j] = re
            pre_im[j] = im
            a = m[j]
            d = <double> delta[j]
            t = re * a - im * d
            im = re * d + im * a
            re = t
        for j in range(n - 1, -1, -1):
            out[j] = pre_re[j] * sim + pre_im[j] * sre
            a = m[j]
            d = <double> delta[j]
            t = sre * a - sim * d
            sim = sre * d + sim * a
            sre = t
    finally:
        free(pre_re)


def angle_theta_sum(double[::1] m, signed char[::1] delta):
    cdef double s = 0.0
    cdef Py_ssize_t j
    for j in range(m.shape[0]):
        s += (<double> delta[j]) * 2.0 * atan2(1.0, m[j])
    return s


def system_residuals(signed char[::1] kinds, int[::1] off, int[::1] cidx,
                     signed char[::1] delta, double[::1] ca, double[::1] cb,
                     double[::1] values, double[::1] out):
    cdef Py_ssize_t e, j
    cdef int k, lo, hi
    cdef double a, b, c, d, re, im, s, t
    for e in range(kinds.shape[0]):
        k = kinds[e]
        lo = off[e]
        hi = off[e + 1]
        if k == TRIANGLE:
            a = values[cidx[lo]]
            b = values[cidx[lo + 1]]
            c = values[cidx[lo + 2]]
            out[e] = a * b * c - a - b - c
        elif k == EDGE:
            out[e] = (values[cidx[lo]] * values[cidx[lo + 1]]
                      - values[cidx[lo + 2]] * values[cidx[lo + 3]])
        elif k == VERTEX or k == HOLONOMY:
            re = 1.0
            im = 0.0
            for j in range(lo, hi):
                a = values[cidx[j]]
                d = <double> delta[j]
                t = re * a - im * d
                im = re * d + im * a
                re = t
            out[e] = im
        elif k == PIN:
            out[e] = values[cidx[lo]] - ca[e]
        elif k == RATIO:
            out[e] = ca[e] * values[cidx[lo]] - cb[e] * values[cidx[lo + 1]]
        else:
            s = 0.0
            for j in range(lo, hi):
                s += (<double> delta[j]) * 2.0 * atan2(1.0, values[cidx[j]])
            if k == VERTEX_ARG:
                s -= TWO_PI
            out[e] = s


def system_jacobian_data(signed char[::1] kinds, int[::1] off, int[::1] cidx,
                         signed char[::1] delta, double[::1] ca,
                         double[::1] cb, double[::1] values, double[::1] out):
    cdef Py_ssize_t e, t_
    cdef int k, lo, hi, n
    cdef double a, re, im, sre, sim, tmp, d
    cdef int nmax = 0
    for e in range(kinds.shape[0]):
        if off[e + 1] - off[e] > nmax:
            nmax = off[e + 1] - off[e]
    cdef double *pre_re = <double *> malloc(2 * nmax * sizeof(double))
    cdef double *pre_im = pre_re + nmax
    if pre_re == NULL:
        raise MemoryError()
    try:
        for e in range(kinds.shape[0]):
            k = kinds[e]
            lo = off[e]
            hi = off[e + 1]
            if k == TRIANGLE:
                out[lo] = values[cidx[lo + 1]] * values[cidx[lo + 2]] - 1.0
                out[lo + 1] = values[cidx[lo]] * values[cidx[lo + 2]] - 1.0
                out[lo + 2] = values[cidx[lo]] * values[cidx[lo + 1]] - 1.0
            elif k == EDGE:
                out[lo] = values[cidx[lo + 1]]
                out[lo + 1] = values[cidx[lo]]
                out[lo + 2] = -values[cidx[lo + 3]]
                out[lo + 3] = -values[cidx[lo + 2]]
            elif k == VERTEX or k == HOLONOMY:
                n = hi - lo
                re = 1.0
                im = 0.0
                for t_ in range(n):
                    pre_re[t_] = re
                    pre_im[t_] = im
                    a = values[cidx[lo + t_]]
                    d = <double> delta[lo + t_]
                    tmp = re * a - im * d
                    im = re * d + im * a
                    re = tmp
                sre = 1.0
                sim = 0.0
                for t_ in range(n - 1, -1, -1):
                    out[lo + t_] = pre_re[t_] * sim + pre_im[t_] * sre
                    a = values[cidx[lo + t_]]
                    d = <double> delta[lo + t_]
                    tmp = sre * a - sim * d
                    sim = sre * d + sim * a
                    sre = tmp
            elif k == PIN:
                out[lo] = 1.0
            elif k == RATIO:
                out[lo] = ca[e]
                out[lo + 1] = -cb[e]
            else:
                for t_ in range(lo, hi):
                    a = values[cidx[t_]]
                    out[t_] = -2.0 * (<double> delta[t_]) / (1.0 + a * a)
    finally:
        free(pre_re)


cdef inline double _flower_angle(double rc, double a, double b) nogil:
    return 2.0 * atan2(sqrt(a * b), sqrt(rc * (rc + a + b)))


def flower_angle(double rc, double a, double b):
    return _flower_angle(rc, a, b)


def flower_angle_sum(double rc, double[::1] petals):
    cdef Py_ssize_t n = petals.shape[0], j
    cdef double s = 0.0
    for j in range(n):
        s += _flower_angle(rc, petals[j - 1] if j > 0 else petals[n - 1],
                           petals[j])
    return s


def solve_flower_radius(double rc, double[::1] fixed, double target,
                        double lo, double hi, double tol, int maxiter):
    cdef Py_ssize_t n = fixed.shape[0], j
    cdef double base = 0.0, a, b, x, fx
    cdef int it
    for j in range(1, n):
        base += _flower_angle(rc, fixed[j - 1], fixed[j])
    a = lo
    b = hi
    x = 0.5 * (a + b)
    for it in range(maxiter):
        x = 0.5 * (a + b)
        fx = (base + _flower_angle(rc, fixed[n - 1], x)
              + _flower_angle(rc, x, fixed[0]) - target)
        if fabs(fx) <= tol:
            return x
        if fx < 0.0:
            a = x
        else:
            b = x
    return x
