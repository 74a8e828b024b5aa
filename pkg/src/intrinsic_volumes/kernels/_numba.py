"""numba implementations of the hot kernels.

Every function here has a twin with the same signature in ``_numpy.py``.
The random-word generator is SplitMix64 used in counter mode: word ``i`` of
the stream with key ``k`` is ``fmix64(k + (i + 1) * GOLDEN)``.
"""

import math

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = 1.0 / 9007199254740992.0
_HALF53 = 0.5 / 9007199254740992.0
_TWO_PI = 2.0 * math.pi


@njit(inline="always")
def _word(key, i):
    z = key + (i + _ONE) * GOLDEN
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(inline="always")
def _unit(key, i):
    # strictly inside (0, 1): safe for log
    return (_word(key, i) >> _S11) * _INV53 + _HALF53


@njit(cache=True, nogil=True)
def fill_uniform_rows(key, start, stride, out):
    rows, width = out.shape
    for j in range(rows):
        base = np.uint64(start) + np.uint64(j) * np.uint64(stride)
        for i in range(width):
            out[j, i] = _unit(key, base + np.uint64(i))


@njit(cache=True, nogil=True)
def fill_normal_rows(key, start, stride, out):
    rows, width = out.shape
    for j in range(rows):
        base = np.uint64(start) + np.uint64(j) * np.uint64(stride)
        for p in range((width + 1) // 2):
            u1 = _unit(key, base + np.uint64(2 * p))
            u2 = _unit(key, base + np.uint64(2 * p + 1))
            r = math.sqrt(-2.0 * math.log(u1))
            theta = _TWO_PI * u2
            out[j, 2 * p] = r * math.cos(theta)
            if 2 * p + 1 < width:
                out[j, 2 * p + 1] = r * math.sin(theta)


@njit(cache=True, nogil=True)
def path_norms(z, out):
    """Norm functionals of the four processes built from BM increments.

    ``z[j]`` holds the n standard-normal increments of path j; ``out`` has
    shape (paths, 4, 9) with stars ordered BM, CBM, BB, CBB and columns
    sup|X|, sup X+, sup X-, |X|_1, |X+|_1, |X-|_1, |X|_2, |X+|_2, |X-|_2.
    """
    paths, n = z.shape
    h = 1.0 / n
    scale = math.sqrt(h)
    w = np.empty(n + 1)
    for j in range(paths):
        w[0] = 0.0
        acc = 0.0
        tot = 0.0
        for i in range(n):
            acc += z[j, i] * scale
            w[i + 1] = acc
            tot += acc
        w1 = w[n]
        mean_w = h * (tot - 0.5 * w1)
        for s in range(4):
            slope = 0.0
            shift = 0.0
            if s == 1:
                shift = mean_w
            elif s == 2:
                slope = w1
            elif s == 3:
                slope = w1
                shift = mean_w - 0.5 * w1
            smax = 0.0
            smin = 0.0
            a1 = 0.0
            p1 = 0.0
            a2 = 0.0
            p2 = 0.0
            for i in range(n + 1):
                x = w[i] - slope * (i * h) - shift
                wt = 0.5 if (i == 0 or i == n) else 1.0
                if x > 0.0:
                    if x > smax:
                        smax = x
                    p1 += wt * x
                    p2 += wt * x * x
                else:
                    if x < smin:
                        smin = x
                a1 += wt * abs(x)
                a2 += wt * x * x
            n1 = h * (a1 - p1)
            n2 = h * (a2 - p2)
            out[j, s, 0] = max(smax, -smin)
            out[j, s, 1] = smax
            out[j, s, 2] = -smin
            out[j, s, 3] = h * a1
            out[j, s, 4] = h * p1
            out[j, s, 5] = n1
            out[j, s, 6] = math.sqrt(h * a2)
            out[j, s, 7] = math.sqrt(h * p2)
            out[j, s, 8] = math.sqrt(max(n2, 0.0))


@njit(inline="always")
def _term(kind, prod, n, last):
    if kind == 0:
        return 1.0 / math.sqrt(prod)
    if kind == 1:
        return math.sqrt((n - last) / (n * prod))
    if kind == 2:
        return math.sqrt(prod)
    return math.sqrt(prod * (n - last))


@njit(cache=True, nogil=True)
def composition_sum(n, k, kind):
    """Sum a per-tuple term over all 1 <= l_1 < ... < l_k <= n.

    With d_1 = l_1 and d_j = l_j - l_{j-1} the tuples are in bijection with
    compositions (d_1..d_k) of a number <= n.  ``kind`` selects the term:
    0: 1/sqrt(prod d), 1: sqrt((n - l_k)/(n prod d)), 2: sqrt(prod d),
    3: sqrt(prod d * (n - l_k)).  Neumaier-compensated summation.
    """
    ls = np.zeros(k + 1, dtype=np.int64)
    prod = np.ones(k + 1)
    total = 0.0
    comp = 0.0
    if k == 1:
        for last in range(1, n + 1):
            t = _term(kind, float(last), n, last)
            s = total + t
            if abs(total) >= abs(t):
                comp += (total - s) + t
            else:
                comp += (t - s) + total
            total = s
        return total + comp
    j = 1
    ls[1] = 0
    while j >= 1:
        ls[j] += 1
        if ls[j] > n - (k - j):
            j -= 1
            continue
        prod[j] = prod[j - 1] * (ls[j] - ls[j - 1])
        if j == k - 1:
            prev = ls[j]
            pj = prod[j]
            for last in range(prev + 1, n + 1):
                t = _term(kind, pj * (last - prev), n, last)
                s = total + t
                if abs(total) >= abs(t):
                    comp += (total - s) + t
                else:
                    comp += (t - s) + total
                total = s
        else:
            j += 1
            ls[j] = ls[j - 1]
    return total + comp


@njit(inline="always")
def _cross(x, y, a, b, c):
    return (x[b] - x[a]) * (y[c] - y[a]) - (y[b] - y[a]) * (x[c] - x[a])


@njit(cache=True, nogil=True)
def _hull2d_one(x, y):
    m = x.shape[0]
    if m < 2:
        return 0.0, 0.0
    order = np.argsort(y, kind="mergesort")
    order = order[np.argsort(x[order], kind="mergesort")]
    hull = np.empty(2 * m, dtype=np.int64)
    h = 0
    for t in range(m):
        idx = order[t]
        while h >= 2 and _cross(x, y, hull[h - 2], hull[h - 1], idx) <= 0.0:
            h -= 1
        hull[h] = idx
        h += 1
    lower = h + 1
    for t in range(m - 2, -1, -1):
        idx = order[t]
        while h >= lower and _cross(x, y, hull[h - 2], hull[h - 1], idx) <= 0.0:
            h -= 1
        hull[h] = idx
        h += 1
    h -= 1
    area = 0.0
    perim = 0.0
    for t in range(h):
        a = hull[t]
        b = hull[(t + 1) % h]
        area += x[a] * y[b] - x[b] * y[a]
        perim += math.hypot(x[b] - x[a], y[b] - y[a])
    return 0.5 * abs(area), perim


@njit(cache=True, nogil=True)
def hull2d_measures(points, out):
    """Area and perimeter of the planar hull of each point set.

    ``points`` has shape (sets, m, 2); ``out`` has shape (sets, 2).
    """
    for j in range(points.shape[0]):
        x = points[j, :, 0].copy()
        y = points[j, :, 1].copy()
        a, p = _hull2d_one(x, y)
        out[j, 0] = a
        out[j, 1] = p


@njit(cache=True, nogil=True)
def zonotope2d_area(gens, out):
    """Area of the planar zonotope spanned by each generator set."""
    for j in range(gens.shape[0]):
        m = gens.shape[1]
        acc = 0.0
        for a in range(m):
            xa = gens[j, a, 0]
            ya = gens[j, a, 1]
            for b in range(a + 1, m):
                acc += abs(xa * gens[j, b, 1] - ya * gens[j, b, 0])
        out[j] = acc
