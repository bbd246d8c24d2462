"""Pure-Python reference kernels.

Fallback used when the compiled extension is unavailable.  The loops mirror
``_fast.pyx`` operation for operation so both backends produce bit-identical
results.
"""

import math

TWO_PI = 6.283185307179586476925287

# equation kind codes shared with the compiled kernels
TRIANGLE = 0
EDGE = 1
VERTEX = 2
HOLONOMY = 3
PIN = 4
RATIO = 5
VERTEX_ARG = 6
HOLONOMY_ARG = 7


def product_im(m, delta):
    """Im of prod_j (m_j + i*delta_j)."""
    re = 1.0
    im = 0.0
    for j in range(len(m)):
        a = m[j]
        d = float(delta[j])
        re, im = re * a - im * d, re * d + im * a
    return im


def product_im_grad(m, delta, out):
    """out[k] = Im of prod_{j != k} (m_j + i*delta_j)."""
    n = len(m)
    # prefix[k] = prod_{j<k}, built in place; suffix accumulated backwards
    pre_re = [0.0] * n
    pre_im = [0.0] * n
    re = 1.0
    im = 0.0
    for j in range(n):
        pre_re[j] = re
        pre_im[j] = im
        a = m[j]
        d = float(delta[j])
        re, im = re * a - im * d, re * d + im * a
    sre = 1.0
    sim = 0.0
    for j in range(n - 1, -1, -1):
        out[j] = pre_re[j] * sim + pre_im[j] * sre
        a = m[j]
        d = float(delta[j])
        sre, sim = sre * a - sim * d, sre * d + sim * a


def angle_theta_sum(m, delta):
    """sum_j delta_j * 2*atan2(1, m_j)."""
    s = 0.0
    for j in range(len(m)):
        s += float(delta[j]) * 2.0 * math.atan2(1.0, m[j])
    return s


def system_residuals(kinds, off, cidx, delta, ca, cb, values, out):
    for e in range(len(kinds)):
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
                d = float(delta[j])
                re, im = re * a - im * d, re * d + im * a
            out[e] = im
        elif k == PIN:
            out[e] = values[cidx[lo]] - ca[e]
        elif k == RATIO:
            out[e] = ca[e] * values[cidx[lo]] - cb[e] * values[cidx[lo + 1]]
        else:  # VERTEX_ARG / HOLONOMY_ARG
            s = 0.0
            for j in range(lo, hi):
                s += float(delta[j]) * 2.0 * math.atan2(1.0, values[cidx[j]])
            if k == VERTEX_ARG:
                s -= TWO_PI
            out[e] = s


def system_jacobian_data(kinds, off, cidx, delta, ca, cb, values, out):
    """Per-slot partial d r_e / d m_(corner at slot), in slot order."""
    for e in range(len(kinds)):
        k = kinds[e]
        lo = off[e]
        hi = off[e + 1]
        if k == TRIANGLE:
            a = values[cidx[lo]]
            b = values[cidx[lo + 1]]
            c = values[cidx[lo + 2]]
            out[lo] = b * c - 1.0
            out[lo + 1] = a * c - 1.0
            out[lo + 2] = a * b - 1.0
        elif k == EDGE:
            out[lo] = values[cidx[lo + 1]]
            out[lo + 1] = values[cidx[lo]]
            out[lo + 2] = -values[cidx[lo + 3]]
            out[lo + 3] = -values[cidx[lo + 2]]
        elif k == VERTEX or k == HOLONOMY:
            n = hi - lo
            pre_re = [0.0] * n
            pre_im = [0.0] * n
            re = 1.0
            im = 0.0
            for t in range(n):
                pre_re[t] = re
                pre_im[t] = im
                a = values[cidx[lo + t]]
                d = float(delta[lo + t])
                re, im = re * a - im * d, re * d + im * a
            sre = 1.0
            sim = 0.0
            for t in range(n - 1, -1, -1):
                out[lo + t] = pre_re[t] * sim + pre_im[t] * sre
                a = values[cidx[lo + t]]
                d = float(delta[lo + t])
                sre, sim = sre * a - sim * d, sre * d + sim * a
        elif k == PIN:
            out[lo] = 1.0
        elif k == RATIO:
            out[lo] = ca[e]
            out[lo + 1] = -cb[e]
        else:  # VERTEX_ARG / HOLONOMY_ARG
            for j in range(lo, hi):
                a = values[cidx[j]]
                out[j] = -2.0 * float(delta[j]) / (1.0 + a * a)


def flower_angle(rc, a, b):
    """Angle at the centre of a flower triangle with petal radii a, b."""
    return 2.0 * math.atan2(math.sqrt(a * b), math.sqrt(rc * (rc + a + b)))


def flower_angle_sum(rc, petals):
    n = len(petals)
    s = 0.0
    for j in range(n):
        s += flower_angle(rc, petals[j - 1] if j > 0 else petals[n - 1],
                          petals[j])
    return s


def solve_flower_radius(rc, fixed, target, lo, hi, tol, maxiter):
    """Bisect for the last petal radius so the cyclic angle sum hits target.

    ``fixed`` holds the first n-1 radii; the angle sum is monotone in the
    unknown.  Assumes f(lo) <= 0 <= f(hi).
    """
    n = len(fixed)
    base = 0.0
    for j in range(1, n):
        base += flower_angle(rc, fixed[j - 1], fixed[j])

    def f(x):
        return (base + flower_angle(rc, fixed[n - 1], x)
                + flower_angle(rc, x, fixed[0]) - target)

    a = lo
    b = hi
    x = 0.5 * (a + b)
    for _ in range(maxiter):
        x = 0.5 * (a + b)
        fx = f(x)
        if abs(fx) <= tol:
            return x
        if fx < 0.0:
            a = x
        else:
            b = x
    return x
