# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels.

Hot inner loops of the laboratory: Sturm-count bisection for symmetric
tridiagonal eigenvalues, exact-in-law Brownian/reflected bridge samplers,
and occupation-time accumulators for piecewise-linear paths.  The module
`sao_lab._kernels_py` provides a pure-numpy implementation of the same
interface; `sao_lab.kernels` selects between the two at import time.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport exp, fabs, floor, sqrt
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_normal,
    random_standard_uniform,
)

cnp.import_array()

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

BACKEND_NAME = "cython"

cdef double DBL_EPS = np.finfo(np.float64).eps
cdef double DBL_TINY = np.finfo(np.float64).tiny


cdef bitgen_t *_bitgen(object rng):
    """Extract the raw bit-generator pointer from a numpy Generator."""
    capsule = rng.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


# ---------------------------------------------------------------------------
# Sturm counts and bisection
# ---------------------------------------------------------------------------

cdef Py_ssize_t _sturm(Py_ssize_t m, const double *d, const double *e2,
                       double x, double pivmin) noexcept nogil:
    """Number of eigenvalues of the tridiagonal matrix that are <= x.

    Uses the LDL^T pivot recurrence; pivots trapped in (-pivmin, pivmin)
    are replaced by -pivmin so the count stays well defined through
    near-singular leading minors.
    """
    cdef Py_ssize_t i, cnt = 0
    cdef double q = d[0] - x
    if fabs(q) <= pivmin:
        q = -pivmin
    if q <= 0.0:
        cnt += 1
    for i in range(1, m):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) <= pivmin:
            q = -pivmin
        if q <= 0.0:
            cnt += 1
    return cnt


def sturm_count(double[::1] diag, double[::1] offdiag, double x):
    """Count eigenvalues <= ``x`` of the symmetric tridiagonal matrix."""
    cdef Py_ssize_t m = diag.shape[0]
    if offdiag.shape[0] != m - 1:
        raise ValueError("offdiag must have length len(diag) - 1")
    cdef cnp.ndarray[double, ndim=1] e2 = np.empty(max(m - 1, 1), dtype=np.float64)
    cdef Py_ssize_t i
    cdef double emax2 = 0.0
    for i in range(m - 1):
        e2[i] = offdiag[i] * offdiag[i]
        if e2[i] > emax2:
            emax2 = e2[i]
    cdef double pivmin = DBL_TINY * max(1.0, emax2)
    return int(_sturm(m, &diag[0], &e2[0], x, pivmin))


cdef void _sturm_block8(Py_ssize_t m, const double *d, const double *e2,
                        const double *xs, double pivmin,
                        Py_ssize_t *out) noexcept nogil:
    """Sturm counts for 8 shifts in one pass.

    The pivot recurrence is a serial division chain per shift; running 8
    independent chains through the same matrix sweep pipelines the
    divisions and dominates the eigensolver's throughput.
    """
    cdef double q[8]
    cdef Py_ssize_t c[8]
    cdef Py_ssize_t i, b
    cdef double val, di, ei
    for b in range(8):
        val = d[0] - xs[b]
        if fabs(val) <= pivmin:
            val = -pivmin
        q[b] = val
        c[b] = 1 if val <= 0.0 else 0
    for i in range(1, m):
        di = d[i]
        ei = e2[i - 1]
        for b in range(8):
            val = di - xs[b] - ei / q[b]
            if fabs(val) <= pivmin:
                val = -pivmin
            q[b] = val
            if val <= 0.0:
                c[b] += 1
    for b in range(8):
        out[b] = c[b]


def eig_by_index(double[::1] diag, double[::1] offdiag, Py_ssize_t j_lo,
                 Py_ssize_t j_hi, double tol, lo_hint=None, hi_hint=None):
    """Eigenvalues with 1-based ascending indices ``j_lo..j_hi`` (inclusive).

    Parallel bisection on Sturm counts, each eigenvalue located to within
    ``tol``.  Every count evaluated for one target tightens the brackets of
    all the others.  Optional search-bound hints are validated with two
    counts and silently widened to the Gershgorin enclosure when they do
    not bracket the requested indices, so they are a pure optimisation.
    """
    cdef Py_ssize_t m = diag.shape[0]
    if offdiag.shape[0] != m - 1:
        raise ValueError("offdiag must have length len(diag) - 1")
    if not (1 <= j_lo <= j_hi <= m):
        raise ValueError("index range out of bounds")
    cdef Py_ssize_t nk = j_hi - j_lo + 1

    cdef cnp.ndarray[double, ndim=1] e2 = np.empty(max(m - 1, 1), dtype=np.float64)
    cdef Py_ssize_t i
    cdef double emax2 = 0.0
    for i in range(m - 1):
        e2[i] = offdiag[i] * offdiag[i]
        if e2[i] > emax2:
            emax2 = e2[i]
    cdef double pivmin = DBL_TINY * max(1.0, emax2)
    cdef const double *dptr = &diag[0]
    cdef const double *e2ptr = &e2[0]

    # Gershgorin enclosure of the whole spectrum.
    cdef double glo = diag[0], ghi = diag[0], r
    for i in range(m):
        r = 0.0
        if i > 0:
            r += fabs(offdiag[i - 1])
        if i < m - 1:
            r += fabs(offdiag[i])
        if diag[i] - r < glo:
            glo = diag[i] - r
        if diag[i] + r > ghi:
            ghi = diag[i] + r
    cdef double margin = DBL_EPS * max(fabs(glo), fabs(ghi), 1.0)
    glo -= margin
    ghi += margin

    cdef double blo = glo, bhi = ghi, hint
    if lo_hint is not None:
        hint = <double> lo_hint
        if glo < hint < ghi and _sturm(m, dptr, e2ptr, hint, pivmin) < j_lo:
            blo = hint
    if hi_hint is not None:
        hint = <double> hi_hint
        if blo < hint < ghi and _sturm(m, dptr, e2ptr, hint, pivmin) >= j_hi:
            bhi = hint

    cdef cnp.ndarray[double, ndim=1] lo_arr = np.full(nk, blo)
    cdef cnp.ndarray[double, ndim=1] hi_arr = np.full(nk, bhi)
    cdef cnp.ndarray[double, ndim=1] mids_arr = np.empty(nk, dtype=np.float64)
    cdef cnp.ndarray[Py_ssize_t, ndim=1] act_arr = np.empty(nk, dtype=np.intp)
    cdef cnp.ndarray[Py_ssize_t, ndim=1] cnt_arr = np.empty(nk, dtype=np.intp)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(nk, dtype=np.float64)
    cdef double[::1] lo_v = lo_arr, hi_v = hi_arr, mids = mids_arr, out_v = out
    cdef Py_ssize_t[::1] act = act_arr, cnts = cnt_arr
    cdef double lo, hi, mid, stop
    cdef double xs8[8]
    cdef Py_ssize_t out8[8]
    cdef Py_ssize_t jj, ii, b, nb, pos, n_active, cnt

    with nogil:
        while True:
            n_active = 0
            for ii in range(nk):
                lo = lo_v[ii]
                hi = hi_v[ii]
                stop = 2.0 * tol
                if 2.0 * DBL_EPS * max(fabs(lo), fabs(hi)) > stop:
                    stop = 2.0 * DBL_EPS * max(fabs(lo), fabs(hi))
                if hi - lo > stop:
                    act[n_active] = ii
                    mids[n_active] = 0.5 * (lo + hi)
                    n_active += 1
            if n_active == 0:
                break
            pos = 0
            while pos < n_active:
                nb = n_active - pos
                if nb > 8:
                    nb = 8
                for b in range(nb):
                    xs8[b] = mids[pos + b]
                for b in range(nb, 8):
                    xs8[b] = mids[pos]
                _sturm_block8(m, dptr, e2ptr, xs8, pivmin, out8)
                for b in range(nb):
                    cnts[pos + b] = out8[b]
                pos += nb
            for jj in range(n_active):
                mid = mids[jj]
                cnt = cnts[jj]
                for ii in range(nk):
                    if cnt >= j_lo + ii:
                        if mid < hi_v[ii]:
                            hi_v[ii] = mid
                    else:
                        if mid > lo_v[ii]:
                            lo_v[ii] = mid
        for ii in range(nk):
            out_v[ii] = 0.5 * (lo_v[ii] + hi_v[ii])
    return out


# ---------------------------------------------------------------------------
# Bridge samplers
# ---------------------------------------------------------------------------

def free_bridge_batch(double x, double y, double t, Py_ssize_t n_steps,
                      Py_ssize_t n_paths, object rng):
    """Sample standard Brownian bridges from x to y over [0, t].

    Sequential exact Gaussian transitions; returns shape (n_paths, n_steps+1)
    with both endpoints hit exactly.
    """
    if n_steps < 1 or n_paths < 1 or t <= 0.0:
        raise ValueError("need n_steps >= 1, n_paths >= 1, t > 0")
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n_paths, n_steps + 1))
    cdef double[:, ::1] v = out
    cdef bitgen_t *bg = _bitgen(rng)
    cdef Py_ssize_t p, j
    cdef double dt = t / n_steps
    cdef double rem, mean, sd, cur
    with rng.bit_generator.lock, nogil:
        for p in range(n_paths):
            cur = x
            v[p, 0] = x
            for j in range(n_steps - 1):
                rem = (n_steps - j) * dt
                mean = cur + (y - cur) * dt / rem
                sd = sqrt(dt * (rem - dt) / rem)
                cur = mean + sd * random_standard_normal(bg)
                v[p, j + 1] = cur
            v[p, n_steps] = y
    return out


def reflected_bridge_batch(double x, double t, Py_ssize_t n_steps,
                           Py_ssize_t n_paths, object rng):
    """Sample reflected Brownian bridges from x back to x over [0, t].

    Exact in law at the grid times: each transition draws from the
    Markov-bridge kernel of reflected Brownian motion by rejection.  The
    proposal |N(v, dt)| is the unconditioned reflected step; the acceptance
    ratio is the remaining-time reflected kernel toward the pinned endpoint,
    normalised by its maximum at the origin gap.
    """
    if x < 0.0:
        raise ValueError("reflected bridge start must be >= 0")
    if n_steps < 1 or n_paths < 1 or t <= 0.0:
        raise ValueError("need n_steps >= 1, n_paths >= 1, t > 0")
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n_paths, n_steps + 1))
    cdef double[:, ::1] v = out
    cdef bitgen_t *bg = _bitgen(rng)
    cdef Py_ssize_t p, j
    cdef long tries
    cdef double dt = t / n_steps
    cdef double sdt = sqrt(dt)
    cdef double cur, tau, z, acc, gap_m, gap_p
    cdef int failed = 0
    with rng.bit_generator.lock, nogil:
        for p in range(n_paths):
            cur = x
            v[p, 0] = x
            for j in range(n_steps - 1):
                tau = (n_steps - j - 1) * dt
                tries = 0
                while True:
                    z = fabs(cur + sdt * random_standard_normal(bg))
                    gap_m = z - x
                    gap_p = z + x
                    acc = 0.5 * (exp(-gap_m * gap_m / (2.0 * tau))
                                 + exp(-gap_p * gap_p / (2.0 * tau)))
                    if random_standard_uniform(bg) < acc:
                        break
                    tries += 1
                    if tries > 1000000:
                        failed = 1
                        break
                if failed:
                    break
                cur = z
                v[p, j + 1] = cur
            if failed:
                break
            v[p, n_steps] = x
    if failed:
        raise RuntimeError("reflected bridge rejection sampler stalled")
    return out


# ---------------------------------------------------------------------------
# Occupation-time accumulators
# ---------------------------------------------------------------------------

cdef void _accumulate_segment(double a, double b, double dt, double delta,
                              long offset, double *hist) noexcept nogil:
    """Spread the time dt of one linear segment over the bins it crosses."""
    cdef double lo, hi, seg_lo, seg_hi, inv
    cdef long b0, b1, bb
    if a <= b:
        lo = a
        hi = b
    else:
        lo = b
        hi = a
    b0 = <long> floor(lo / delta)
    b1 = <long> floor(hi / delta)
    if b0 == b1:
        hist[b0 - offset] += dt / delta
        return
    inv = dt / ((hi - lo) * delta)
    for bb in range(b0, b1 + 1):
        seg_lo = bb * delta
        if lo > seg_lo:
            seg_lo = lo
        seg_hi = (bb + 1) * delta
        if hi < seg_hi:
            seg_hi = hi
        hist[bb - offset] += (seg_hi - seg_lo) * inv


def occupation_histogram(double[::1] values, double dt, double delta):
    """Exact occupation density of one piecewise-linear path.

    Returns ``(offset, hist)`` where bin ``b`` of ``hist`` covers the
    position interval ``[(offset+b)*delta, (offset+b+1)*delta)`` and holds
    time-in-bin divided by ``delta``.
    """
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    cdef Py_ssize_t n = values.shape[0]
    if n < 2:
        raise ValueError("path needs at least two values")
    cdef double vmin = values[0], vmax = values[0]
    cdef Py_ssize_t j
    for j in range(1, n):
        if values[j] < vmin:
            vmin = values[j]
        if values[j] > vmax:
            vmax = values[j]
    cdef long offset = <long> floor(vmin / delta)
    cdef long top = <long> floor(vmax / delta)
    cdef Py_ssize_t nbins = top - offset + 1
    cdef cnp.ndarray[double, ndim=1] hist = np.zeros(nbins, dtype=np.float64)
    cdef double *h = &hist[0]
    with nogil:
        for j in range(n - 1):
            _accumulate_segment(values[j], values[j + 1], dt, delta, offset, h)
    return int(offset), hist


def occupation_histogram_batch(double[:, ::1] values, double dt, double delta,
                               Py_ssize_t n_bins):
    """Occupation densities for a batch of nonnegative paths on a fixed lattice.

    Bin ``b`` covers ``[b*delta, (b+1)*delta)``; paths must stay inside
    ``[0, n_bins*delta)``.
    """
    if delta <= 0.0 or dt <= 0.0:
        raise ValueError("delta and dt must be positive")
    cdef Py_ssize_t P = values.shape[0]
    cdef Py_ssize_t n = values.shape[1]
    cdef cnp.ndarray[double, ndim=2] hist = np.zeros((P, n_bins), dtype=np.float64)
    cdef double[:, ::1] hv = hist
    cdef Py_ssize_t p, j
    cdef double top = n_bins * delta
    cdef int bad = 0
    with nogil:
        for p in range(P):
            for j in range(n):
                if values[p, j] < 0.0 or values[p, j] >= top:
                    bad = 1
                    break
            if bad:
                break
            for j in range(n - 1):
                _accumulate_segment(values[p, j], values[p, j + 1], dt, delta,
                                    0, &hv[p, 0])
    if bad:
        raise ValueError("path leaves the [0, n_bins*delta) lattice")
    return hist


def boundary_time_batch(double[:, ::1] values, double dt, double eps):
    """Time each piecewise-linear path spends at positions in [0, eps)."""
    if eps <= 0.0 or dt <= 0.0:
        raise ValueError("eps and dt must be positive")
    cdef Py_ssize_t P = values.shape[0]
    cdef Py_ssize_t n = values.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(P, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t p, j
    cdef double a, b, lo, hi, olo, ohi, acc
    with nogil:
        for p in range(P):
            acc = 0.0
            for j in range(n - 1):
                a = values[p, j]
                b = values[p, j + 1]
                if a <= b:
                    lo = a
                    hi = b
                else:
                    lo = b
                    hi = a
                if hi == lo:
                    if 0.0 <= lo < eps:
                        acc += dt
                    continue
                olo = lo if lo > 0.0 else 0.0
                ohi = hi if hi < eps else eps
                if ohi > olo:
                    acc += dt * (ohi - olo) / (hi - lo)
            ov[p] = acc
    return out


def path_integral_batch(double[:, ::1] values, double dt):
    """Integral of position over time for each path (exact for the interpolant)."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    cdef Py_ssize_t P = values.shape[0]
    cdef Py_ssize_t n = values.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(P, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t p, j
    cdef double acc
    with nogil:
        for p in range(P):
            acc = 0.0
            for j in range(n - 1):
                acc += 0.5 * (values[p, j] + values[p, j + 1])
            ov[p] = acc * dt
    return out
