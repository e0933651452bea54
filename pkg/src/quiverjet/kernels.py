"""Hot loops over the chain ring R = F_q[t]/(t^n).

Ring elements are length-n int64 coefficient vectors (index = power of t),
matrices are ``(rows, cols, n)`` arrays.  All functions here are compiled
by numba when available; see ``_accel``.  ``q`` must be prime and small
enough that ``n * q**2`` fits in int64.
"""

from __future__ import annotations

import numpy as np

from ._accel import jit, jit_parallel, prange


def inverse_table(q: int) -> np.ndarray:
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, q - 2, q)
    return inv


@jit
def valuation(a, n):
    for i in range(n):
        if a[i] != 0:
            return i
    return n


@jit
def poly_mul(a, b, out, q, n):
    for k in range(n):
        s = 0
        for i in range(k + 1):
            s += a[i] * b[k - i]
        out[k] = s % q


@jit
def series_inverse(u, out, q, n, inv):
    """Inverse of a unit (u[0] != 0) modulo t^n."""
    c = inv[u[0]]
    out[0] = c
    for k in range(1, n):
        s = 0
        for i in range(1, k + 1):
            s += u[i] * out[k - i]
        out[k] = (q - (c * (s % q)) % q) % q


@jit
def eliminate(A, b, q, n, inv):
    """Pivot ``A`` (and right-hand side ``b``) in place over R.

    Returns ``k`` such that the solution set of ``A y = b`` has q**k
    elements, or -1 when the system is inconsistent.  With ``b = 0`` this is
    the kernel exponent.  Pivots are chosen by minimal valuation, so every
    remaining entry of the pivot row and column is divisible by the pivot;
    the implicit column clearing then only touches the pivot row and can
    be skipped.
    """
    rows = A.shape[0]
    cols = A.shape[1]
    u = np.zeros(n, dtype=np.int64)
    uinv = np.zeros(n, dtype=np.int64)
    w = np.zeros(n, dtype=np.int64)
    f = np.zeros(n, dtype=np.int64)
    prod = np.zeros(n, dtype=np.int64)
    tmp = np.zeros(n, dtype=np.int64)
    pivot_val = np.zeros(min(rows, cols) + 1, dtype=np.int64)
    k = 0
    r = 0
    while r < rows and r < cols:
        best = n
        bi = -1
        bj = -1
        for i in range(r, rows):
            for j in range(r, cols):
                v = valuation(A[i, j], n)
                if v < best:
                    best = v
                    bi = i
                    bj = j
                    if v == 0:
                        break
            if best == 0:
                break
        if best == n:
            break
        if bi != r:
            for j in range(cols):
                for c in range(n):
                    tmp[c] = A[r, j, c]
                    A[r, j, c] = A[bi, j, c]
                    A[bi, j, c] = tmp[c]
            for c in range(n):
                tmp[c] = b[r, c]
                b[r, c] = b[bi, c]
                b[bi, c] = tmp[c]
        if bj != r:
            for i in range(rows):
                for c in range(n):
                    tmp[c] = A[i, r, c]
                    A[i, r, c] = A[i, bj, c]
                    A[i, bj, c] = tmp[c]
        v = best
        for c in range(n):
            u[c] = A[r, r, c + v] if c + v < n else 0
        series_inverse(u, uinv, q, n, inv)
        for i in range(r + 1, rows):
            vi = valuation(A[i, r], n)
            if vi == n:
                continue
            for c in range(n):
                w[c] = A[i, r, c + v] if c + v < n else 0
            poly_mul(w, uinv, f, q, n)
            for j in range(r, cols):
                poly_mul(f, A[r, j], prod, q, n)
                for c in range(n):
                    A[i, j, c] = (A[i, j, c] - prod[c]) % q
            poly_mul(f, b[r], prod, q, n)
            for c in range(n):
                b[i, c] = (b[i, c] - prod[c]) % q
        pivot_val[r] = v
        k += v
        r += 1
    npiv = r
    for p in range(npiv):
        if valuation(b[p], n) < pivot_val[p]:
            return -1
    for p in range(npiv, rows):
        if valuation(b[p], n) < n:
            return -1
    return k + n * (cols - npiv)


@jit
def kernel_exponent(A, q, n, inv):
    work = A.copy()
    b = np.zeros((A.shape[0], n), dtype=np.int64)
    return eliminate(work, b, q, n, inv)


@jit
def decode_into(idx, x, q, n, shift):
    """Write base-q digits of ``idx`` into coefficients shift..n-1 of x.

    Coordinate-major: digit position = coord * (n - shift) + (c - shift).
    Lower coefficients are zeroed.
    """
    rem = idx
    for a in range(x.shape[0]):
        for c in range(shift):
            x[a, c] = 0
        for c in range(shift, n):
            x[a, c] = rem % q
            rem //= q


@jit
def build_linear(x, t_eq, t_lin, t_coef, t_sign, L, q, n, shift):
    """L[eq, lin] = sum sign * t^shift * x[coef] over template monomials."""
    L[:, :, :] = 0
    for m in range(t_eq.shape[0]):
        e = t_eq[m]
        l = t_lin[m]
        xi = t_coef[m]
        s = t_sign[m]
        for c in range(shift, n):
            L[e, l, c] = (L[e, l, c] + s * x[xi, c - shift]) % q


@jit
def eval_moment(x, y, t_eq, t_x, t_y, t_sign, out, q, n):
    """out[eq] = sum sign * x[xi] * y[yi] over template monomials."""
    out[:, :] = 0
    prod = np.zeros(n, dtype=np.int64)
    for m in range(t_eq.shape[0]):
        poly_mul(x[t_x[m]], y[t_y[m]], prod, q, n)
        e = t_eq[m]
        s = t_sign[m]
        for c in range(n):
            out[e, c] = (out[e, c] + s * prod[c]) % q


@jit_parallel
def moment_kernel_hist(t_eq, t_y, t_x, t_sign, n_x, n_y, n_eq, q, n, x_shift, mat_shift,
                       start, stop, nchunks, inv):
    """Histogram of kernel exponents of the y-linear system over x-points.

    x runs over indices [start, stop) decoded with ``decode_into`` (so
    x = t^x_shift * x'), and the linear map is multiplied by t^mat_shift.
    Chunks are disjoint index ranges; the histogram is summed at the end.
    """
    width = n_y * n + 1
    hist = np.zeros((nchunks, width), dtype=np.int64)
    total = stop - start
    for ch in prange(nchunks):
        lo = start + (total * ch) // nchunks
        hi = start + (total * (ch + 1)) // nchunks
        x = np.zeros((n_x, n), dtype=np.int64)
        L = np.zeros((n_eq, n_y, n), dtype=np.int64)
        b = np.zeros((n_eq, n), dtype=np.int64)
        for idx in range(lo, hi):
            decode_into(idx, x, q, n, x_shift)
            build_linear(x, t_eq, t_y, t_x, t_sign, L, q, n, mat_shift)
            b[:, :] = 0
            k = eliminate(L, b, q, n, inv)
            hist[ch, k] += 1
    out = np.zeros(width, dtype=np.int64)
    for ch in range(nchunks):
        for k in range(width):
            out[k] += hist[ch, k]
    return out


@jit
def _mat_zero(M):
    M[:, :, :] = 0


@jit
def _matmul_acc(A, B, out, sign, q, n, prod):
    """out += sign * A @ B over R."""
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            for k in range(A.shape[1]):
                poly_mul(A[i, k], B[k, j], prod, q, n)
                for c in range(n):
                    out[i, j, c] = (out[i, j, c] + sign * prod[c]) % q


@jit
def brute_moment_count(src, tgt, dims, x_off, y_off, n_coords, q, n, shift, start, stop):
    """Count (x, y) with mu(x, y) = 0 by direct matrix products.

    Independent of the template path: matrices are read straight from the
    flat coordinate vectors using the arrow layout (x_a is d_t x d_s,
    y_a is d_s x d_t, both row-major).
    """
    nv = dims.shape[0]
    dm = 1
    for i in range(nv):
        if dims[i] > dm:
            dm = dims[i]
    xy = np.zeros((2 * n_coords, n), dtype=np.int64)
    X = np.zeros((dm, dm, n), dtype=np.int64)
    Y = np.zeros((dm, dm, n), dtype=np.int64)
    mu = np.zeros((dm, dm, n), dtype=np.int64)
    prod = np.zeros(n, dtype=np.int64)
    count = 0
    for idx in range(start, stop):
        decode_into(idx, xy, q, n, shift)
        ok = True
        for v in range(nv):
            dv = dims[v]
            mv = mu[:dv, :dv, :]
            _mat_zero(mv)
            for a in range(src.shape[0]):
                s = src[a]
                t = tgt[a]
                if s != v and t != v:
                    continue
                ds = dims[s]
                dt = dims[t]
                Xa = X[:dt, :ds, :]
                Ya = Y[:ds, :dt, :]
                for p in range(dt):
                    for c in range(ds):
                        for e in range(n):
                            Xa[p, c, e] = xy[x_off[a] + p * ds + c, e]
                for p in range(ds):
                    for c in range(dt):
                        for e in range(n):
                            Ya[p, c, e] = xy[n_coords + y_off[a] + p * dt + c, e]
                if t == v:
                    _matmul_acc(Xa, Ya, mv, 1, q, n, prod)
                if s == v:
                    _matmul_acc(Ya, Xa, mv, -1, q, n, prod)
            for i in range(dv):
                for j in range(dv):
                    for e in range(n):
                        if mv[i, j, e] != 0:
                            ok = False
            if not ok:
                break
        if ok:
            count += 1
    return count


@jit
def fq_rank(J, q, inv):
    """Rank over F_q of an integer matrix (entries reduced mod q)."""
    A = J.copy() % q
    rows = A.shape[0]
    cols = A.shape[1]
    r = 0
    for c in range(cols):
        p = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        for j in range(cols):
            tmp = A[r, j]
            A[r, j] = A[p, j]
            A[p, j] = tmp
        iv = inv[A[r, c]]
        for j in range(cols):
            A[r, j] = (A[r, j] * iv) % q
        for i in range(rows):
            if i != r and A[i, c] != 0:
                f = A[i, c]
                for j in range(cols):
                    A[i, j] = (A[i, j] - f * A[r, j]) % q
        r += 1
        if r == rows:
            break
    return r


@jit
def jacobian_at(x0, y0, t_eq, t_x, t_y, t_sign, n_eq, n_x, n_y, q):
    """Jacobian of mu at an F_q-point: columns are x-coordinates then y-coordinates."""
    J = np.zeros((n_eq, n_x + n_y), dtype=np.int64)
    for m in range(t_eq.shape[0]):
        e = t_eq[m]
        s = t_sign[m]
        J[e, t_x[m]] = (J[e, t_x[m]] + s * y0[t_y[m]]) % q
        J[e, n_x + t_y[m]] = (J[e, n_x + t_y[m]] + s * x0[t_x[m]]) % q
    return J


@jit
def singular_lift_hist(t_eq, t_x, t_y, t_sign, n_x, n_y, n_eq, q, n, rank_cut, inv):
    """Count jets over R_n whose reduction mod t is a singular point.

    Reductions (x0, y0) run over F_q^(n_x + n_y); those on mu = 0 with
    Jacobian rank < rank_cut are lifted: x = x0 + t x1 is enumerated and
    y = y0 + t y1 solves the affine system t L(x) y1 = -mu(x, y0).  The
    histogram counts solution exponents k (each worth q^(k - n_y) jets).
    Returns (histogram, number of singular F_q-points).
    """
    width = n_y * n + 1
    hist = np.zeros(width, dtype=np.int64)
    n_sing = 0
    red = np.zeros((n_x + n_y, 1), dtype=np.int64)
    x0 = np.zeros(n_x, dtype=np.int64)
    y0 = np.zeros(n_y, dtype=np.int64)
    x1 = np.zeros((n_x, n), dtype=np.int64)
    x = np.zeros((n_x, n), dtype=np.int64)
    y = np.zeros((n_y, n), dtype=np.int64)
    mu0 = np.zeros((n_eq, 1), dtype=np.int64)
    mu = np.zeros((n_eq, n), dtype=np.int64)
    L = np.zeros((n_eq, n_y, n), dtype=np.int64)
    b = np.zeros((n_eq, n), dtype=np.int64)
    total_red = q ** (n_x + n_y)
    total_lift = q ** (n_x * (n - 1))
    for ridx in range(total_red):
        decode_into(ridx, red, q, 1, 0)
        for a in range(n_x):
            x0[a] = red[a, 0]
        for a in range(n_y):
            y0[a] = red[n_x + a, 0]
        eval_moment(red[:n_x], red[n_x:], t_eq, t_x, t_y, t_sign, mu0, q, 1)
        on_fiber = True
        for e in range(n_eq):
            if mu0[e, 0] != 0:
                on_fiber = False
                break
        if not on_fiber:
            continue
        J = jacobian_at(x0, y0, t_eq, t_x, t_y, t_sign, n_eq, n_x, n_y, q)
        if fq_rank(J, q, inv) >= rank_cut:
            continue
        n_sing += 1
        for a in range(n_y):
            y[a, :] = 0
            y[a, 0] = y0[a]
        for lidx in range(total_lift):
            decode_into(lidx, x1, q, n, 1)
            for a in range(n_x):
                x[a, 0] = x0[a]
                for c in range(1, n):
                    x[a, c] = x1[a, c]
            eval_moment(x, y, t_eq, t_x, t_y, t_sign, mu, q, n)
            for e in range(n_eq):
                for c in range(n):
                    b[e, c] = (q - mu[e, c]) % q
            build_linear(x, t_eq, t_y, t_x, t_sign, L, q, n, 1)
            k = eliminate(L, b, q, n, inv)
            if k >= 0:
                hist[k] += 1
    return hist, n_sing


@jit
def brute_singular_count(t_eq, t_x, t_y, t_sign, n_x, n_y, n_eq, q, n, rank_cut, inv):
    """Oracle: all (x, y) over R_n with mu = 0 and singular reduction."""
    xy = np.zeros((n_x + n_y, n), dtype=np.int64)
    mu = np.zeros((n_eq, n), dtype=np.int64)
    x0 = np.zeros(n_x, dtype=np.int64)
    y0 = np.zeros(n_y, dtype=np.int64)
    count = 0
    total = q ** ((n_x + n_y) * n)
    for idx in range(total):
        decode_into(idx, xy, q, n, 0)
        eval_moment(xy[:n_x], xy[n_x:], t_eq, t_x, t_y, t_sign, mu, q, n)
        zero = True
        for e in range(n_eq):
            for c in range(n):
                if mu[e, c] != 0:
                    zero = False
        if not zero:
            continue
        for a in range(n_x):
            x0[a] = xy[a, 0]
        for a in range(n_y):
            y0[a] = xy[n_x + a, 0]
        J = jacobian_at(x0, y0, t_eq, t_x, t_y, t_sign, n_eq, n_x, n_y, q)
        if fq_rank(J, q, inv) < rank_cut:
            count += 1
    return count


@jit
def invert_matrix(A, out, q, n, inv):
    """Gauss-Jordan inverse over R; returns False if A is not invertible.

    A square matrix over the local ring R is invertible iff its reduction
    mod t is, so each column must offer a unit pivot.
    """
    d = A.shape[0]
    W = np.zeros((d, 2 * d, n), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            for c in range(n):
                W[i, j, c] = A[i, j, c]
        W[i, d + i, 0] = 1
    pinv = np.zeros(n, dtype=np.int64)
    f = np.zeros(n, dtype=np.int64)
    prod = np.zeros(n, dtype=np.int64)
    tmp = np.zeros(n, dtype=np.int64)
    for col in range(d):
        p = -1
        for i in range(col, d):
            if W[i, col, 0] != 0:
                p = i
                break
        if p < 0:
            return False
        if p != col:
            for j in range(2 * d):
                for c in range(n):
                    tmp[c] = W[col, j, c]
                    W[col, j, c] = W[p, j, c]
                    W[p, j, c] = tmp[c]
        series_inverse(W[col, col], pinv, q, n, inv)
        for j in range(2 * d):
            poly_mul(W[col, j], pinv, prod, q, n)
            for c in range(n):
                W[col, j, c] = prod[c]
        for i in range(d):
            if i == col or valuation(W[i, col], n) == n:
                continue
            for c in range(n):
                f[c] = W[i, col, c]
            for j in range(2 * d):
                poly_mul(f, W[col, j], prod, q, n)
                for c in range(n):
                    W[i, j, c] = (W[i, j, c] - prod[c]) % q
    for i in range(d):
        for j in range(d):
            for c in range(n):
                out[i, j, c] = W[i, d + j, c]
    return True


@jit
def _one_plus_product(A, B, out, q, n, prod):
    """out = I + A @ B."""
    _mat_zero(out)
    _matmul_acc(A, B, out, 1, q, n, prod)
    for i in range(out.shape[0]):
        out[i, i, 0] = (out[i, i, 0] + 1) % q


@jit
def multiplicative_count(src, tgt, dims, m_off, s_off, order, alpha, n_coords, q, n,
                         start, stop, inv):
    """Brute-force count of the multiplicative preprojective relation.

    Coordinates: M_a (d_t x d_s) at m_off[a], M*_a (d_s x d_t) at
    n_coords + s_off[a].  At each vertex i the ordered product of
    (1 + M_a M*_a) over arrows ending at i, times the ordered product of
    (1 + M*_a M_a)^{-1} over arrows starting at i, must equal alpha_i * I.
    Points with any non-invertible factor are rejected.
    """
    nv = dims.shape[0]
    dm = 1
    for i in range(nv):
        if dims[i] > dm:
            dm = dims[i]
    xy = np.zeros((2 * n_coords, n), dtype=np.int64)
    M = np.zeros((dm, dm, n), dtype=np.int64)
    S = np.zeros((dm, dm, n), dtype=np.int64)
    F = np.zeros((dm, dm, n), dtype=np.int64)
    Fi = np.zeros((dm, dm, n), dtype=np.int64)
    P = np.zeros((dm, dm, n), dtype=np.int64)
    P2 = np.zeros((dm, dm, n), dtype=np.int64)
    prod = np.zeros(n, dtype=np.int64)
    count = 0
    for idx in range(start, stop):
        decode_into(idx, xy, q, n, 0)
        ok = True
        for v in range(nv):
            dv = dims[v]
            Pv = P[:dv, :dv, :]
            _mat_zero(Pv)
            for i in range(dv):
                Pv[i, i, 0] = 1
            for phase in range(2):
                for oi in range(order.shape[0]):
                    a = order[oi]
                    s = src[a]
                    t = tgt[a]
                    if (phase == 0 and t != v) or (phase == 1 and s != v):
                        continue
                    ds = dims[s]
                    dt = dims[t]
                    Ma = M[:dt, :ds, :]
                    Sa = S[:ds, :dt, :]
                    for p in range(dt):
                        for c in range(ds):
                            for e in range(n):
                                Ma[p, c, e] = xy[m_off[a] + p * ds + c, e]
                    for p in range(ds):
                        for c in range(dt):
                            for e in range(n):
                                Sa[p, c, e] = xy[n_coords + s_off[a] + p * dt + c, e]
                    if phase == 0:
                        Fa = F[:dt, :dt, :]
                        Fia = Fi[:dt, :dt, :]
                        _one_plus_product(Ma, Sa, Fa, q, n, prod)
                        if not invert_matrix(Fa, Fia, q, n, inv):
                            ok = False
                            break
                        right = Fa
                    else:
                        Fa = F[:ds, :ds, :]
                        Fia = Fi[:ds, :ds, :]
                        _one_plus_product(Sa, Ma, Fa, q, n, prod)
                        if not invert_matrix(Fa, Fia, q, n, inv):
                            ok = False
                            break
                        right = Fia
                    P2v = P2[:dv, :dv, :]
                    _mat_zero(P2v)
                    _matmul_acc(Pv, right, P2v, 1, q, n, prod)
                    for i in range(dv):
                        for j in range(dv):
                            for e in range(n):
                                Pv[i, j, e] = P2v[i, j, e]
                if not ok:
                    break
            if not ok:
                break
            for i in range(dv):
                for j in range(dv):
                    for e in range(n):
                        want = (alpha[v] % q) if (i == j and e == 0) else 0
                        if Pv[i, j, e] != want:
                            ok = False
            if not ok:
                break
        if ok:
            count += 1
    return count
