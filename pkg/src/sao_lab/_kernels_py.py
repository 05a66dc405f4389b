"""Pure-numpy fallback kernels.

Same interface as the compiled module ``sao_lab._kernels_cy``.  Every
routine is vectorised across paths or across eigenvalue targets rather
than across steps, so the fallback is slower than the extension by a
large factor (see ``benchmarks/bench_kernels.py``) but produces samples
from identical laws and eigenvalues within the same bisection tolerance.

Random streams are consumed in a different (vectorised) order than the
compiled kernels, so individual samples differ between backends; each
backend is deterministic for a fixed seed on its own.
"""

import numpy as np

__all__ = [
    "sturm_count",
    "eig_by_index",
    "free_bridge_batch",
    "reflected_bridge_batch",
    "occupation_histogram",
    "occupation_histogram_batch",
    "boundary_time_batch",
    "path_integral_batch",
]

BACKEND_NAME = "python"

_EPS = np.finfo(np.float64).eps
_TINY = np.finfo(np.float64).tiny


def _sturm_vec(d, e2, xs, pivmin):
    """Sturm counts (#eigenvalues <= x) for a vector of shifts ``xs``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    q = d[0] - xs
    q[np.abs(q) <= pivmin] = -pivmin
    cnt = (q <= 0.0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = d[i] - xs - e2[i - 1] / q
        q[np.abs(q) <= pivmin] = -pivmin
        cnt += q <= 0.0
    return cnt


def _prepare(diag, offdiag):
    d = np.ascontiguousarray(diag, dtype=np.float64)
    e = np.ascontiguousarray(offdiag, dtype=np.float64)
    if e.shape[0] != d.shape[0] - 1:
        raise ValueError("offdiag must have length len(diag) - 1")
    e2 = e * e
    pivmin = _TINY * max(1.0, e2.max(initial=0.0))
    return d, e, e2, pivmin


def sturm_count(diag, offdiag, x):
    """Count eigenvalues <= ``x`` of the symmetric tridiagonal matrix."""
    d, _, e2, pivmin = _prepare(diag, offdiag)
    return int(_sturm_vec(d, e2, float(x), pivmin)[0])


def eig_by_index(diag, offdiag, j_lo, j_hi, tol, lo_hint=None, hi_hint=None):
    """Eigenvalues with 1-based ascending indices ``j_lo..j_hi`` (inclusive).

    Independent Sturm bisection per target index, vectorised across the
    targets; each eigenvalue is located to within ``tol``.  Hints are
    validated and silently widened to the Gershgorin enclosure when they
    do not bracket the requested indices.
    """
    d, e, e2, pivmin = _prepare(diag, offdiag)
    m = d.shape[0]
    if not (1 <= j_lo <= j_hi <= m):
        raise ValueError("index range out of bounds")
    radius = np.zeros(m)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    glo = float(np.min(d - radius))
    ghi = float(np.max(d + radius))
    margin = _EPS * max(abs(glo), abs(ghi), 1.0)
    glo -= margin
    ghi += margin
    if lo_hint is not None and glo < lo_hint < ghi:
        if _sturm_vec(d, e2, float(lo_hint), pivmin)[0] < j_lo:
            glo = float(lo_hint)
    if hi_hint is not None and glo < hi_hint < ghi:
        if _sturm_vec(d, e2, float(hi_hint), pivmin)[0] >= j_hi:
            ghi = float(hi_hint)

    targets = np.arange(j_lo, j_hi + 1)
    lo = np.full(targets.shape, glo)
    hi = np.full(targets.shape, ghi)
    while True:
        width_floor = 2.0 * _EPS * np.maximum(np.abs(lo), np.abs(hi))
        active = (hi - lo) > np.maximum(2.0 * tol, width_floor)
        if not active.any():
            break
        mid = 0.5 * (lo[active] + hi[active])
        cnt = _sturm_vec(d, e2, mid, pivmin)
        go_down = cnt >= targets[active]
        hi_a = hi[active]
        lo_a = lo[active]
        hi_a[go_down] = mid[go_down]
        lo_a[~go_down] = mid[~go_down]
        hi[active] = hi_a
        lo[active] = lo_a
    return 0.5 * (lo + hi)


def free_bridge_batch(x, y, t, n_steps, n_paths, rng):
    """Sample standard Brownian bridges from x to y over [0, t]."""
    if n_steps < 1 or n_paths < 1 or t <= 0.0:
        raise ValueError("need n_steps >= 1, n_paths >= 1, t > 0")
    dt = t / n_steps
    v = np.empty((n_paths, n_steps + 1))
    v[:, 0] = x
    cur = np.full(n_paths, float(x))
    for j in range(n_steps - 1):
        rem = (n_steps - j) * dt
        mean = cur + (y - cur) * (dt / rem)
        sd = np.sqrt(dt * (rem - dt) / rem)
        cur = mean + sd * rng.standard_normal(n_paths)
        v[:, j + 1] = cur
    v[:, n_steps] = y
    return v


def reflected_bridge_batch(x, t, n_steps, n_paths, rng):
    """Sample reflected Brownian bridges from x back to x over [0, t].

    Same rejection scheme as the compiled kernel, vectorised across paths
    at each step.
    """
    if x < 0.0:
        raise ValueError("reflected bridge start must be >= 0")
    if n_steps < 1 or n_paths < 1 or t <= 0.0:
        raise ValueError("need n_steps >= 1, n_paths >= 1, t > 0")
    dt = t / n_steps
    sdt = np.sqrt(dt)
    v = np.empty((n_paths, n_steps + 1))
    v[:, 0] = x
    cur = np.full(n_paths, float(x))
    for j in range(n_steps - 1):
        tau = (n_steps - j - 1) * dt
        pending = np.arange(n_paths)
        nxt = np.empty(n_paths)
        rounds = 0
        while pending.size:
            z = np.abs(cur[pending] + sdt * rng.standard_normal(pending.size))
            acc = 0.5 * (np.exp(-((z - x) ** 2) / (2.0 * tau))
                         + np.exp(-((z + x) ** 2) / (2.0 * tau)))
            ok = rng.random(pending.size) < acc
            nxt[pending[ok]] = z[ok]
            pending = pending[~ok]
            rounds += 1
            if rounds > 1000000:
                raise RuntimeError("reflected bridge rejection sampler stalled")
        cur = nxt
        v[:, j + 1] = cur
    v[:, n_steps] = x
    return v


def _segments(values, dt, delta):
    a = values[..., :-1]
    b = values[..., 1:]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    b0 = np.floor(lo / delta).astype(np.int64)
    b1 = np.floor(hi / delta).astype(np.int64)
    return lo, hi, b0, b1


def _fill_histogram(hist2d, lo, hi, b0, b1, dt, delta, offset):
    """Scatter exact per-segment occupation into per-path histograms."""
    n_paths, nseg = lo.shape
    rows = np.broadcast_to(np.arange(n_paths)[:, None], lo.shape)
    flat = (hist2d.ravel(), hist2d.shape[1])

    single = b0 == b1
    if single.any():
        np.add.at(flat[0], rows[single] * flat[1] + (b0[single] - offset),
                  dt / delta)
    multi = ~single
    if not multi.any():
        return
    lo_m, hi_m = lo[multi], hi[multi]
    b0_m, b1_m = b0[multi], b1[multi]
    rows_m = rows[multi]
    inv = dt / ((hi_m - lo_m) * delta)
    max_span = int((b1_m - b0_m).max())
    for s in range(max_span + 1):
        bb = b0_m + s
        live = bb <= b1_m
        if not live.any():
            break
        seg_lo = np.maximum(lo_m[live], bb[live] * delta)
        seg_hi = np.minimum(hi_m[live], (bb[live] + 1) * delta)
        np.add.at(flat[0], rows_m[live] * flat[1] + (bb[live] - offset),
                  (seg_hi - seg_lo) * inv[live])


def occupation_histogram(values, dt, delta):
    """Exact occupation density of one piecewise-linear path.

    Returns ``(offset, hist)``; bin ``b`` covers
    ``[(offset+b)*delta, (offset+b+1)*delta)``.
    """
    if delta <= 0.0 or dt <= 0.0:
        raise ValueError("delta and dt must be positive")
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.shape[0] < 2:
        raise ValueError("path needs at least two values")
    offset = int(np.floor(values.min() / delta))
    top = int(np.floor(values.max() / delta))
    hist = np.zeros((1, top - offset + 1))
    lo, hi, b0, b1 = _segments(values[None, :], dt, delta)
    _fill_histogram(hist, lo, hi, b0, b1, dt, delta, offset)
    return offset, hist[0]


def occupation_histogram_batch(values, dt, delta, n_bins):
    """Occupation densities for a batch of nonnegative paths on a fixed lattice."""
    if delta <= 0.0 or dt <= 0.0:
        raise ValueError("delta and dt must be positive")
    values = np.asarray(values, dtype=np.float64)
    if values.min() < 0.0 or values.max() >= n_bins * delta:
        raise ValueError("path leaves the [0, n_bins*delta) lattice")
    hist = np.zeros((values.shape[0], n_bins))
    lo, hi, b0, b1 = _segments(values, dt, delta)
    _fill_histogram(hist, lo, hi, b0, b1, dt, delta, 0)
    return hist


def boundary_time_batch(values, dt, eps):
    """Time each piecewise-linear path spends at positions in [0, eps)."""
    if eps <= 0.0 or dt <= 0.0:
        raise ValueError("eps and dt must be positive")
    values = np.asarray(values, dtype=np.float64)
    a = values[:, :-1]
    b = values[:, 1:]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    flat = hi == lo
    olo = np.clip(lo, 0.0, None)
    ohi = np.minimum(hi, eps)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(~flat & (ohi > olo), (ohi - olo) / (hi - lo), 0.0)
    frac = np.where(flat & (lo >= 0.0) & (lo < eps), 1.0, frac)
    return dt * frac.sum(axis=1)


def path_integral_batch(values, dt):
    """Integral of position over time for each path (exact for the interpolant)."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    values = np.asarray(values, dtype=np.float64)
    return dt * 0.5 * (values[:, :-1] + values[:, 1:]).sum(axis=1)
