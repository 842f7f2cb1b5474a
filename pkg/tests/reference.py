"""Straight-line reference implementations used as test oracles.

Deliberately unvectorized and independent of the package numerics: plain
Python floats, explicit loops, naive softmax.  ``run_centralized`` and
``run_diffusion`` mirror the shipped algorithm semantics; the ``*_lms``
twins are structurally identical least-mean-squares versions (no powers
anywhere) used to check the p=2 reduction.
"""

import math

LOGIT_MIN, LOGIT_MAX = -30.0, 30.0


def softmax(z):
    exps = [math.exp(v) for v in z]
    s = sum(exps)
    return [v / s for v in exps]


def clamp(z):
    lo, hi = min(z), max(z)
    if lo >= LOGIT_MIN and hi <= LOGIT_MAX:
        return list(z)
    shifted = [v + (LOGIT_MAX - hi) for v in z]
    return [max(v, LOGIT_MIN) for v in shifted]


def influence(e, p, eps):
    if p == 2.0:
        return e
    return (abs(e) + eps) ** (p - 2.0) * e


def penalty(e, p):
    if p == 2.0:
        return e * e
    return abs(e) ** p


def as_lists(arr):
    try:
        return [as_lists(x) for x in arr]
    except TypeError:
        return float(arr)


def run_centralized(U, d, p, mu, eps, weighted, mu_a):
    """Per-iteration history of the fusion-center estimate."""
    T, N, M = len(U), len(U[0]), len(U[0][0])
    w = [0.0] * M
    logits = [0.0] * N
    history = []
    for n in range(T):
        alpha = softmax(logits) if weighted else [1.0 / N] * N
        e = []
        for k in range(N):
            acc = 0.0
            for m in range(M):
                acc += w[m] * U[n][k][m]
            e.append(d[n][k] - acc)
        for k in range(N):
            coef = mu * alpha[k] * influence(e[k], p, eps)
            for m in range(M):
                w[m] += coef * U[n][k][m]
        if weighted:
            new = []
            for k in range(N):
                rsq = sum(x * x for x in U[n][k])
                b = alpha[k] * (1.0 - alpha[k])
                new.append(logits[k] - mu_a * mu * penalty(e[k], p) * rsq * b)
            logits = clamp(new)
        history.append(list(w))
    return history


def run_diffusion(U, d, neighbor_lists, p, mu, eps, weighted, mu_a):
    """Per-iteration history of all node estimates (combine/adapt/combine)."""
    T, N, M = len(U), len(U[0]), len(U[0][0])
    W = [[0.0] * M for _ in range(N)]
    logits = [[0.0] * len(neighbor_lists[k]) for k in range(N)]
    history = []
    for n in range(T):
        if weighted:
            C = [softmax(row) for row in logits]
        else:
            C = [[1.0 / len(nb)] * len(nb) for nb in neighbor_lists]
        phi = []
        for k in range(N):
            row = [0.0] * M
            for c, l in zip(C[k], neighbor_lists[k]):
                for m in range(M):
                    row[m] += c * W[l][m]
            phi.append(row)
        psi = []
        errs = []
        for k in range(N):
            row = list(phi[k])
            row_errs = []
            for c, l in zip(C[k], neighbor_lists[k]):
                acc = 0.0
                for m in range(M):
                    acc += phi[k][m] * U[n][l][m]
                el = d[n][l] - acc
                row_errs.append(el)
                coef = mu * c * influence(el, p, eps)
                for m in range(M):
                    row[m] += coef * U[n][l][m]
            psi.append(row)
            errs.append(row_errs)
        W = []
        for k in range(N):
            row = [0.0] * M
            for c, l in zip(C[k], neighbor_lists[k]):
                for m in range(M):
                    row[m] += c * psi[l][m]
            W.append(row)
        if weighted:
            for k in range(N):
                new_row = []
                for j, (c, l) in enumerate(zip(C[k], neighbor_lists[k])):
                    rsq = sum(x * x for x in U[n][l])
                    new_row.append(
                        logits[k][j] - mu_a * mu * penalty(errs[k][j], p) * rsq * c * (1.0 - c)
                    )
                logits[k] = clamp(new_row)
        history.append([list(row) for row in W])
    return history


def run_centralized_lms(U, d, weighted, mu, mu_a):
    """Least-mean-squares twin of run_centralized: influence(e) = e."""
    T, N, M = len(U), len(U[0]), len(U[0][0])
    w = [0.0] * M
    logits = [0.0] * N
    history = []
    for n in range(T):
        alpha = softmax(logits) if weighted else [1.0 / N] * N
        e = []
        for k in range(N):
            acc = 0.0
            for m in range(M):
                acc += w[m] * U[n][k][m]
            e.append(d[n][k] - acc)
        for k in range(N):
            coef = mu * alpha[k] * e[k]
            for m in range(M):
                w[m] += coef * U[n][k][m]
        if weighted:
            new = []
            for k in range(N):
                rsq = sum(x * x for x in U[n][k])
                b = alpha[k] * (1.0 - alpha[k])
                new.append(logits[k] - mu_a * mu * e[k] * e[k] * rsq * b)
            logits = clamp(new)
        history.append(list(w))
    return history


def run_diffusion_lms(U, d, neighbor_lists, weighted, mu, mu_a):
    """Least-mean-squares twin of run_diffusion: influence(e) = e."""
    T, N, M = len(U), len(U[0]), len(U[0][0])
    W = [[0.0] * M for _ in range(N)]
    logits = [[0.0] * len(neighbor_lists[k]) for k in range(N)]
    history = []
    for n in range(T):
        if weighted:
            C = [softmax(row) for row in logits]
        else:
            C = [[1.0 / len(nb)] * len(nb) for nb in neighbor_lists]
        phi = []
        for k in range(N):
            row = [0.0] * M
            for c, l in zip(C[k], neighbor_lists[k]):
                for m in range(M):
                    row[m] += c * W[l][m]
            phi.append(row)
        psi = []
        errs = []
        for k in range(N):
            row = list(phi[k])
            row_errs = []
            for c, l in zip(C[k], neighbor_lists[k]):
                acc = 0.0
                for m in range(M):
                    acc += phi[k][m] * U[n][l][m]
                el = d[n][l] - acc
                row_errs.append(el)
                coef = mu * c * el
                for m in range(M):
                    row[m] += coef * U[n][l][m]
            psi.append(row)
            errs.append(row_errs)
        W = []
        for k in range(N):
            row = [0.0] * M
            for c, l in zip(C[k], neighbor_lists[k]):
                for m in range(M):
                    row[m] += c * psi[l][m]
            W.append(row)
        if weighted:
            for k in range(N):
                new_row = []
                for j, (c, l) in enumerate(zip(C[k], neighbor_lists[k])):
                    rsq = sum(x * x for x in U[n][l])
                    new_row.append(
                        logits[k][j] - mu_a * mu * errs[k][j] * errs[k][j] * rsq * c * (1.0 - c)
                    )
                logits[k] = clamp(new_row)
        history.append([list(row) for row in W])
    return history
