# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trial kernels.

Same contracts and per-iteration tail order as difflmp._kernels_py (update
state, record trajectory, record squared deviations, check divergence,
snapshot weights); only the inner loops are fused C.  Results agree with
the numpy backend to floating-point accumulation order.
"""

import numpy as np

from libc.math cimport exp, fabs, isfinite, pow

from ._kernels_py import TrialResult

BACKEND_NAME = "compiled"

cdef double LOGIT_MIN = -30.0
cdef double LOGIT_MAX = 30.0


cdef inline double _influence(double e, double p, double eps, bint is_lms) noexcept nogil:
    if is_lms:
        return e
    return pow(fabs(e) + eps, p - 2.0) * e


cdef inline double _abs_pow(double e, double p, bint is_lms) noexcept nogil:
    if is_lms:
        return e * e
    return pow(fabs(e), p)


cdef void _softmax(const double* z, double* out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double m = z[0]
    cdef double s = 0.0
    for i in range(1, n):
        if z[i] > m:
            m = z[i]
    for i in range(n):
        out[i] = exp(z[i] - m)
        s += out[i]
    for i in range(n):
        out[i] /= s


cdef void _clamp_translate(double* z, Py_ssize_t n) noexcept nogil:
    # Translation is softmax-invariant; truncation only bites when the
    # spread exceeds the box width (see weighting.clamp_logits).
    cdef Py_ssize_t i
    cdef double lo = z[0]
    cdef double hi = z[0]
    cdef double shift
    for i in range(1, n):
        if z[i] < lo:
            lo = z[i]
        if z[i] > hi:
            hi = z[i]
    if lo >= LOGIT_MIN and hi <= LOGIT_MAX:
        return
    shift = LOGIT_MAX - hi
    for i in range(n):
        z[i] += shift
        if z[i] < LOGIT_MIN:
            z[i] = LOGIT_MIN


def run_centralized_trial(
    double[:, :, ::1] U,
    double[:, ::1] d,
    double[::1] w_o,
    double p,
    double mu,
    double epsilon,
    bint weighted,
    double mu_a,
    Py_ssize_t stride,
    double div_limit,
    bint record_trajectory=False,
):
    cdef Py_ssize_t T = U.shape[0]
    cdef Py_ssize_t N = U.shape[1]
    cdef Py_ssize_t M = U.shape[2]
    cdef Py_ssize_t S = (T + stride - 1) // stride
    cdef bint is_lms = p == 2.0

    w_arr = np.zeros(M)
    logits_arr = np.zeros(N)
    alpha_arr = np.full(N, 1.0 / N)
    e_arr = np.zeros(N)
    sq_dev_arr = np.zeros(T)
    snaps_arr = np.zeros((S if weighted else 1, N))
    traj_arr = np.zeros((T if record_trajectory else 1, M))

    cdef double[::1] w = w_arr
    cdef double[::1] logits = logits_arr
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] e = e_arr
    cdef double[::1] sq_dev = sq_dev_arr
    cdef double[:, ::1] snaps = snaps_arr
    cdef double[:, ::1] traj = traj_arr

    cdef double lim2 = div_limit * div_limit
    cdef Py_ssize_t n, k, m
    cdef double acc, g, coef, rsq, b, sq, wsq, dev
    cdef Py_ssize_t diverged_at = -1

    with nogil:
        for n in range(T):
            if weighted:
                _softmax(&logits[0], &alpha[0], N)
            for k in range(N):
                acc = 0.0
                for m in range(M):
                    acc += w[m] * U[n, k, m]
                e[k] = d[n, k] - acc
            for k in range(N):
                g = _influence(e[k], p, epsilon, is_lms)
                coef = mu * alpha[k] * g
                for m in range(M):
                    w[m] += coef * U[n, k, m]
            if weighted:
                for k in range(N):
                    rsq = 0.0
                    for m in range(M):
                        rsq += U[n, k, m] * U[n, k, m]
                    b = alpha[k] * (1.0 - alpha[k])
                    logits[k] -= mu_a * mu * _abs_pow(e[k], p, is_lms) * rsq * b
                _clamp_translate(&logits[0], N)
            if record_trajectory:
                for m in range(M):
                    traj[n, m] = w[m]
            sq = 0.0
            wsq = 0.0
            for m in range(M):
                dev = w[m] - w_o[m]
                sq += dev * dev
                wsq += w[m] * w[m]
            sq_dev[n] = sq
            if not isfinite(wsq) or wsq > lim2:
                diverged_at = n
                break
            if weighted and n % stride == 0:
                _softmax(&logits[0], &snaps[n // stride, 0], N)

    final = _py_softmax(logits_arr) if weighted else None
    return TrialResult(
        sq_dev=sq_dev_arr,
        node_sq_dev=None,
        snap_iterations=np.arange(0, T, stride, dtype=np.int64),
        snapshots=snaps_arr if weighted else None,
        final_weights=final,
        diverged_at=int(diverged_at),
        trajectory=traj_arr if record_trajectory else None,
    )


def _py_softmax(z):
    ex = np.exp(z - np.max(z))
    return ex / ex.sum()


def run_diffusion_trial(
    double[:, :, ::1] U,
    double[:, ::1] d,
    double[::1] w_o,
    offsets_in,
    flat_in,
    double p,
    double mu,
    double epsilon,
    bint weighted,
    double mu_a,
    Py_ssize_t stride,
    double div_limit,
    bint record_trajectory=False,
):
    cdef Py_ssize_t T = U.shape[0]
    cdef Py_ssize_t N = U.shape[1]
    cdef Py_ssize_t M = U.shape[2]
    cdef Py_ssize_t S = (T + stride - 1) // stride
    cdef bint is_lms = p == 2.0

    offsets_arr = np.ascontiguousarray(offsets_in, dtype=np.int64)
    flat_arr = np.ascontiguousarray(flat_in, dtype=np.int64)
    cdef long[::1] offsets = offsets_arr
    cdef long[::1] nbr = flat_arr
    cdef Py_ssize_t R = flat_arr.shape[0]

    W_arr = np.zeros((N, M))
    Wn_arr = np.zeros((N, M))
    Phi_arr = np.zeros((N, M))
    Psi_arr = np.zeros((N, M))
    rw_arr = np.zeros(R)
    logits_arr = np.zeros(R)
    e_flat_arr = np.zeros(R)
    rsq_arr = np.zeros(N)
    sq_dev_arr = np.zeros(T)
    node_sq_arr = np.zeros((N, T))
    snaps_arr = np.zeros((S if weighted else 1, R))
    traj_arr = np.zeros((T if record_trajectory else 1, N, M))

    cdef double[:, ::1] W = W_arr
    cdef double[:, ::1] Wn = Wn_arr
    cdef double[:, ::1] Phi = Phi_arr
    cdef double[:, ::1] Psi = Psi_arr
    cdef double[::1] rw = rw_arr
    cdef double[::1] logits = logits_arr
    cdef double[::1] e_flat = e_flat_arr
    cdef double[::1] rsq = rsq_arr
    cdef double[::1] sq_dev = sq_dev_arr
    cdef double[:, ::1] node_sq = node_sq_arr
    cdef double[:, ::1] snaps = snaps_arr
    cdef double[:, :, ::1] traj = traj_arr

    cdef double lim2 = div_limit * div_limit
    cdef Py_ssize_t n, k, m, j, l
    cdef double acc, g, coef, c, ee, sq, wsq, dev, netsq
    cdef Py_ssize_t diverged_at = -1
    cdef bint bad

    if not weighted:
        for k in range(N):
            for j in range(offsets[k], offsets[k + 1]):
                rw_arr[j] = 1.0 / (offsets[k + 1] - offsets[k])

    with nogil:
        for n in range(T):
            if weighted:
                for k in range(N):
                    _softmax(&logits[offsets[k]], &rw[offsets[k]], offsets[k + 1] - offsets[k])
            for k in range(N):
                acc = 0.0
                for m in range(M):
                    acc += U[n, k, m] * U[n, k, m]
                rsq[k] = acc
            # combine 1
            for k in range(N):
                for m in range(M):
                    Phi[k, m] = 0.0
                for j in range(offsets[k], offsets[k + 1]):
                    l = nbr[j]
                    c = rw[j]
                    for m in range(M):
                        Phi[k, m] += c * W[l, m]
            # adapt on neighborhood data
            for k in range(N):
                for m in range(M):
                    Psi[k, m] = Phi[k, m]
                for j in range(offsets[k], offsets[k + 1]):
                    l = nbr[j]
                    acc = 0.0
                    for m in range(M):
                        acc += Phi[k, m] * U[n, l, m]
                    ee = d[n, l] - acc
                    e_flat[j] = ee
                    g = _influence(ee, p, epsilon, is_lms)
                    coef = mu * rw[j] * g
                    for m in range(M):
                        Psi[k, m] += coef * U[n, l, m]
            # combine 2 (synchronous)
            for k in range(N):
                for m in range(M):
                    Wn[k, m] = 0.0
                for j in range(offsets[k], offsets[k + 1]):
                    l = nbr[j]
                    c = rw[j]
                    for m in range(M):
                        Wn[k, m] += c * Psi[l, m]
            for k in range(N):
                for m in range(M):
                    W[k, m] = Wn[k, m]
            # penalty-driven combination weight update
            if weighted:
                for k in range(N):
                    for j in range(offsets[k], offsets[k + 1]):
                        l = nbr[j]
                        c = rw[j]
                        logits[j] -= mu_a * mu * _abs_pow(e_flat[j], p, is_lms) * rsq[l] * c * (1.0 - c)
                    _clamp_translate(&logits[offsets[k]], offsets[k + 1] - offsets[k])
            if record_trajectory:
                for k in range(N):
                    for m in range(M):
                        traj[n, k, m] = W[k, m]
            netsq = 0.0
            bad = 0
            for k in range(N):
                sq = 0.0
                wsq = 0.0
                for m in range(M):
                    dev = W[k, m] - w_o[m]
                    sq += dev * dev
                    wsq += W[k, m] * W[k, m]
                node_sq[k, n] = sq
                netsq += sq
                if not isfinite(wsq) or wsq > lim2:
                    bad = 1
            sq_dev[n] = netsq / N
            if bad:
                diverged_at = n
                break
            if weighted and n % stride == 0:
                for k in range(N):
                    _softmax(&logits[offsets[k]], &snaps[n // stride, offsets[k]], offsets[k + 1] - offsets[k])

    final = None
    if weighted:
        final = np.concatenate(
            [_py_softmax(logits_arr[offsets_arr[k] : offsets_arr[k + 1]]) for k in range(N)]
        )
    return TrialResult(
        sq_dev=sq_dev_arr,
        node_sq_dev=node_sq_arr,
        snap_iterations=np.arange(0, T, stride, dtype=np.int64),
        snapshots=snaps_arr if weighted else None,
        final_weights=final,
        diverged_at=int(diverged_at),
        trajectory=traj_arr if record_trajectory else None,
    )
