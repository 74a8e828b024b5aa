"""Pure-numpy twins of the numba kernels (same signatures, same results up
to libm rounding)."""

import math

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 1 << 20


def _words(key, idx):
    with np.errstate(over="ignore"):
        z = np.uint64(key) + (idx + np.uint64(1)) * GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _units(key, idx):
    return (_words(key, idx) >> np.uint64(11)).astype(np.float64) * 2.0**-53 + 2.0**-54


def _row_index(start, stride, rows, width):
    base = np.uint64(start) + np.arange(rows, dtype=np.uint64)[:, None] * np.uint64(stride)
    return base + np.arange(width, dtype=np.uint64)[None, :]


def fill_uniform_rows(key, start, stride, out):
    rows, width = out.shape
    step = max(1, _CHUNK // max(width, 1))
    for r0 in range(0, rows, step):
        r1 = min(rows, r0 + step)
        out[r0:r1] = _units(key, _row_index(start + r0 * stride, stride, r1 - r0, width))


def fill_normal_rows(key, start, stride, out):
    rows, width = out.shape
    pairs = (width + 1) // 2
    step = max(1, _CHUNK // max(2 * pairs, 1))
    for r0 in range(0, rows, step):
        r1 = min(rows, r0 + step)
        u = _units(key, _row_index(start + r0 * stride, stride, r1 - r0, 2 * pairs))
        r = np.sqrt(-2.0 * np.log(u[:, 0::2]))
        theta = (2.0 * math.pi) * u[:, 1::2]
        out[r0:r1, 0::2] = r * np.cos(theta)
        out[r0:r1, 1::2] = (r * np.sin(theta))[:, : width // 2]


def path_norms(z, out):
    paths, n = z.shape
    h = 1.0 / n
    w = np.zeros((paths, n + 1))
    np.cumsum(z * math.sqrt(h), axis=1, out=w[:, 1:])
    w1 = w[:, n]
    mean_w = h * (w[:, 1:].sum(axis=1) - 0.5 * w1)
    t = np.arange(n + 1) * h
    wt = np.ones(n + 1)
    wt[0] = wt[-1] = 0.5
    zero = np.zeros(paths)
    settings = ((zero, zero), (zero, mean_w), (w1, zero), (w1, mean_w - 0.5 * w1))
    for s, (slope, shift) in enumerate(settings):
        x = w - slope[:, None] * t[None, :] - shift[:, None]
        pos = np.maximum(x, 0.0)
        neg = np.maximum(-x, 0.0)
        out[:, s, 1] = pos.max(axis=1)
        out[:, s, 2] = neg.max(axis=1)
        out[:, s, 0] = np.maximum(out[:, s, 1], out[:, s, 2])
        out[:, s, 4] = h * (pos @ wt)
        out[:, s, 5] = h * (neg @ wt)
        out[:, s, 3] = out[:, s, 4] + out[:, s, 5]
        p2 = h * ((pos * pos) @ wt)
        n2 = h * ((neg * neg) @ wt)
        out[:, s, 6] = np.sqrt(p2 + n2)
        out[:, s, 7] = np.sqrt(p2)
        out[:, s, 8] = np.sqrt(n2)


def _terms(kind, prod, n, last):
    if kind == 0:
        return 1.0 / np.sqrt(prod)
    if kind == 1:
        return np.sqrt((n - last) / (n * prod))
    if kind == 2:
        return np.sqrt(prod)
    return np.sqrt(prod * (n - last))


def composition_sum(n, k, kind):
    parts = []

    def walk(depth, prev, prod):
        if depth == k - 1:
            last = np.arange(prev + 1, n + 1, dtype=np.float64)
            if last.size:
                parts.append(math.fsum(_terms(kind, prod * (last - prev), n, last)))
            return
        for l in range(prev + 1, n - (k - depth) + 2):
            walk(depth + 1, l, prod * (l - prev))

    walk(0, 0, 1.0)
    return math.fsum(parts)


def _hull2d_one(x, y):
    m = x.shape[0]
    if m < 2:
        return 0.0, 0.0
    if m > 8:
        # drop points strictly inside the extreme quadrilateral
        ext = {int(np.argmin(x)), int(np.argmax(x)), int(np.argmin(y)), int(np.argmax(y))}
        if len(ext) >= 3:
            q = sorted(ext, key=lambda i: math.atan2(y[i] - y.mean(), x[i] - x.mean()))
            keep = np.zeros(m, dtype=bool)
            for a, b in zip(q, q[1:] + q[:1]):
                keep |= (x[b] - x[a]) * (y - y[a]) - (y[b] - y[a]) * (x - x[a]) <= 0.0
            keep[list(ext)] = True
            x = x[keep]
            y = y[keep]
    order = np.lexsort((y, x))
    pts = list(zip(x[order].tolist(), y[order].tolist()))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    area = 0.0
    perim = 0.0
    for i, a in enumerate(hull):
        b = hull[(i + 1) % len(hull)]
        area += a[0] * b[1] - b[0] * a[1]
        perim += math.hypot(b[0] - a[0], b[1] - a[1])
    return 0.5 * abs(area), perim


def hull2d_measures(points, out):
    for j in range(points.shape[0]):
        out[j] = _hull2d_one(points[j, :, 0], points[j, :, 1])


def zonotope2d_area(gens, out):
    for j in range(gens.shape[0]):
        g = gens[j]
        c = np.abs(np.outer(g[:, 0], g[:, 1]) - np.outer(g[:, 1], g[:, 0]))
        out[j] = 0.5 * c.sum()
