# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot per-pixel kernels.

Mirrors ``_pykernels`` exactly: same tap orders, same sector constants, same
comparison asymmetries. Keep the two in lockstep; the parity test suite runs
both backends against each other.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, fabs, M_PI

cnp.import_array()

# tan(pi/8) and tan(3*pi/8); identical literals to the NumPy backend
TAN_22_5 = 0.41421356237309503
TAN_67_5 = 2.414213562373095

cdef double _T1 = 0.41421356237309503
cdef double _T2 = 2.414213562373095


cdef inline Py_ssize_t _clamp(Py_ssize_t v, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    if v < lo:
        return lo
    if v > hi:
        return hi
    return v


def sep_convolve(img, kernel):
    """Separable 2D convolution with replicated borders (tap-order accumulation)."""
    cdef double[:, ::1] src = np.ascontiguousarray(img, dtype=np.float64)
    cdef double[::1] k = np.ascontiguousarray(kernel, dtype=np.float64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], n = k.shape[0], r = n // 2
    cdef Py_ssize_t i, j, t
    cdef double acc
    horiz_arr = np.zeros((h, w), dtype=np.float64)
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] horiz = horiz_arr
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(h):
            for j in range(w):
                acc = 0.0
                for t in range(n):
                    acc += k[t] * src[i, _clamp(j + t - r, 0, w - 1)]
                horiz[i, j] = acc
        for i in range(h):
            for j in range(w):
                acc = 0.0
                for t in range(n):
                    acc += k[t] * horiz[_clamp(i + t - r, 0, h - 1), j]
                out[i, j] = acc
    return out_arr


cdef double[3][3] _SX = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]]
cdef double[3][3] _SY = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]]


def sobel(img):
    """3x3 Sobel gradients (correlation, y growing downward), replicated borders."""
    cdef double[:, ::1] src = np.ascontiguousarray(img, dtype=np.float64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t i, j, dy, dx
    cdef double ax, ay, v
    gx_arr = np.zeros((h, w), dtype=np.float64)
    gy_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] gx = gx_arr
    cdef double[:, ::1] gy = gy_arr
    with nogil:
        for i in range(h):
            for j in range(w):
                ax = 0.0
                ay = 0.0
                for dy in range(3):
                    for dx in range(3):
                        v = src[_clamp(i + dy - 1, 0, h - 1), _clamp(j + dx - 1, 0, w - 1)]
                        if _SX[dy][dx] != 0.0:
                            ax += _SX[dy][dx] * v
                        if _SY[dy][dx] != 0.0:
                            ay += _SY[dy][dx] * v
                gx[i, j] = ax
                gy[i, j] = ay
    return gx_arr, gy_arr


def nonmax_suppress(mag, gx, gy):
    """Keep ridge pixels: strictly greater than the earlier neighbor, >= the later."""
    cdef double[:, ::1] m = np.ascontiguousarray(mag, dtype=np.float64)
    cdef double[:, ::1] dx = np.ascontiguousarray(gx, dtype=np.float64)
    cdef double[:, ::1] dy = np.ascontiguousarray(gy, dtype=np.float64)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    cdef Py_ssize_t i, j
    cdef double v, ax, ay, a, b
    out_arr = np.zeros((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    if h < 3 or w < 3:
        return out_arr
    with nogil:
        for i in range(1, h - 1):
            for j in range(1, w - 1):
                v = m[i, j]
                if v <= 0.0:
                    continue
                ax = fabs(dx[i, j])
                ay = fabs(dy[i, j])
                if ay < _T1 * ax:
                    a = m[i, j - 1]
                    b = m[i, j + 1]
                elif ay > _T2 * ax:
                    a = m[i - 1, j]
                    b = m[i + 1, j]
                elif dx[i, j] * dy[i, j] > 0.0:
                    a = m[i - 1, j - 1]
                    b = m[i + 1, j + 1]
                else:
                    a = m[i - 1, j + 1]
                    b = m[i + 1, j - 1]
                if v > a and v >= b:
                    out[i, j] = v
    return out_arr


def hysteresis(mag, double low, double high):
    """Double-threshold edge linking: seeds above high, growth above low, 8-connected."""
    cdef double[:, ::1] m = np.ascontiguousarray(mag, dtype=np.float64)
    cdef Py_ssize_t h = m.shape[0], w = m.shape[1]
    cdef Py_ssize_t i, j, top, ci, cj, ni, nj, di, dj
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    stack_arr = np.empty(h * w, dtype=np.int64)
    cdef long long[::1] stack = stack_arr
    top = 0
    with nogil:
        for i in range(h):
            for j in range(w):
                if m[i, j] > high:
                    out[i, j] = 255
                    stack[top] = i * w + j
                    top += 1
        while top > 0:
            top -= 1
            ci = stack[top] // w
            cj = stack[top] % w
            for di in range(-1, 2):
                for dj in range(-1, 2):
                    if di == 0 and dj == 0:
                        continue
                    ni = ci + di
                    nj = cj + dj
                    if ni < 0 or nj < 0 or ni >= h or nj >= w:
                        continue
                    if out[ni, nj] == 0 and m[ni, nj] > low:
                        out[ni, nj] = 255
                        stack[top] = ni * w + nj
                        top += 1
    return out_arr


cdef void _fft1d(double complex* buf, Py_ssize_t n) noexcept nogil:
    """In-place radix-2 decimation-in-time FFT; n must be a power of two."""
    cdef Py_ssize_t i, j, bit, size, half, base
    cdef double complex tmp, tw, u, v
    cdef double ang
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            tmp = buf[i]
            buf[i] = buf[j]
            buf[j] = tmp
    size = 2
    while size <= n:
        half = size >> 1
        for i in range(half):
            ang = -2.0 * M_PI * i / size
            tw = cos(ang) + 1j * sin(ang)
            base = 0
            while base < n:
                u = buf[base + i]
                v = buf[base + i + half] * tw
                buf[base + i] = u + v
                buf[base + i + half] = u - v
                base += size
        size <<= 1


cdef void _dft1d(double complex* src, double complex* dst,
                 double complex* table, Py_ssize_t n) noexcept nogil:
    """Direct O(n^2) transform using a precomputed exp(-2 pi i t / n) table."""
    cdef Py_ssize_t k, j
    cdef double complex acc
    for k in range(n):
        acc = 0.0
        for j in range(n):
            acc += src[j] * table[(k * j) % n]
        dst[k] = acc


cdef bint _is_pow2(Py_ssize_t n) noexcept nogil:
    return n >= 1 and (n & (n - 1)) == 0


def dft2d(a):
    """Unnormalized forward 2D DFT of a complex128 (M, N) matrix (row-column)."""
    out_arr = np.ascontiguousarray(a, dtype=np.complex128).copy()
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t m = out.shape[0], n = out.shape[1]
    cdef Py_ssize_t r, c, t
    cdef double ang
    tmp_arr = np.empty(max(m, n), dtype=np.complex128)
    cdef double complex[::1] tmp = tmp_arr
    buf_arr = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] buf = buf_arr
    table_arr = np.empty(max(m, n), dtype=np.complex128)
    cdef double complex[::1] table = table_arr

    if _is_pow2(n):
        with nogil:
            for r in range(m):
                _fft1d(&out[r, 0], n)
    else:
        with nogil:
            for t in range(n):
                ang = -2.0 * M_PI * t / n
                table[t] = cos(ang) + 1j * sin(ang)
            for r in range(m):
                _dft1d(&out[r, 0], &tmp[0], &table[0], n)
                for t in range(n):
                    out[r, t] = tmp[t]

    if _is_pow2(m):
        with nogil:
            for c in range(n):
                for r in range(m):
                    buf[r] = out[r, c]
                _fft1d(&buf[0], m)
                for r in range(m):
                    out[r, c] = buf[r]
    else:
        with nogil:
            for t in range(m):
                ang = -2.0 * M_PI * t / m
                table[t] = cos(ang) + 1j * sin(ang)
            for c in range(n):
                for r in range(m):
                    buf[r] = out[r, c]
                _dft1d(&buf[0], &tmp[0], &table[0], m)
                for r in range(m):
                    out[r, c] = tmp[r]
    return out_arr


def moment_sums(img, double cx, double cy):
    """Sums of (x-cx)^p (y-cy)^q I for p+q <= 3, same order as the NumPy backend."""
    cdef double[:, ::1] src = np.ascontiguousarray(img, dtype=np.float64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t i, j
    cdef double x, y, v, xv, yv
    cdef double s00 = 0, s10 = 0, s01 = 0, s20 = 0, s11 = 0, s02 = 0
    cdef double s30 = 0, s21 = 0, s12 = 0, s03 = 0
    with nogil:
        for i in range(h):
            y = i - cy
            for j in range(w):
                v = src[i, j]
                if v == 0.0:
                    continue
                x = j - cx
                xv = x * v
                yv = y * v
                s00 += v
                s10 += xv
                s01 += yv
                s20 += x * xv
                s11 += x * yv
                s02 += y * yv
                s30 += x * x * xv
                s21 += x * x * yv
                s12 += y * y * xv
                s03 += y * y * yv
    out = np.empty(10, dtype=np.float64)
    out[0] = s00
    out[1] = s10
    out[2] = s01
    out[3] = s20
    out[4] = s11
    out[5] = s02
    out[6] = s30
    out[7] = s21
    out[8] = s12
    out[9] = s03
    return out


# 8-neighborhood, clockwise from east, as (row, col) offsets
cdef int[8] _NBR_I = [0, 1, 1, 1, 0, -1, -1, -1]
cdef int[8] _NBR_J = [1, 1, 0, -1, -1, -1, 0, 1]


cdef inline int _nbr_index(int di, int dj) noexcept nogil:
    cdef int t
    for t in range(8):
        if _NBR_I[t] == di and _NBR_J[t] == dj:
            return t
    return -1


def trace_borders(binary):
    """Raster-scan border following; see the NumPy backend for the contract."""
    cdef const unsigned char[:, ::1] src = np.ascontiguousarray(binary, dtype=np.uint8)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    f_arr = np.zeros((h + 2, w + 2), dtype=np.int32)
    cdef int[:, ::1] f = f_arr
    cdef Py_ssize_t i, j
    for i in range(h):
        for j in range(w):
            if src[i, j] != 0:
                f[i + 1, j + 1] = 1

    border_type = [0, 2]
    border_parent = [0, 0]
    chains = []
    chain_slot = [-1, -1]
    cdef int nbd = 1
    cdef int lnbd, fij, btype, parent
    cdef Py_ssize_t i2, j2

    for i in range(1, h + 1):
        lnbd = 1
        for j in range(1, w + 1):
            fij = f[i, j]
            if fij == 0:
                continue
            if fij == 1 and f[i, j - 1] == 0:
                nbd += 1
                btype = 1
                i2 = i
                j2 = j - 1
            elif fij >= 1 and f[i, j + 1] == 0:
                nbd += 1
                btype = 2
                i2 = i
                j2 = j + 1
                if fij > 1:
                    lnbd = fij
            else:
                if f[i, j] != 1:
                    lnbd = abs(f[i, j])
                continue
            parent = border_parent[lnbd] if border_type[lnbd] == btype else lnbd
            border_type.append(btype)
            border_parent.append(parent)
            chain = _follow_border(f, i, j, i2, j2, nbd)
            if chain.shape[0] >= 2:
                chain_slot.append(len(chains))
                chains.append(chain)
            else:
                chain_slot.append(-1)
            if f[i, j] != 1:
                lnbd = abs(f[i, j])

    arrays = [np.asarray(c) - 1 for c in chains]
    parents = [-1] * len(chains)
    cdef int b, p
    for b in range(2, nbd + 1):
        slot = chain_slot[b]
        if slot == -1:
            continue
        p = border_parent[b]
        while p > 1 and chain_slot[p] == -1:
            p = border_parent[p]
        parents[slot] = chain_slot[p] if p > 1 else -1
    return arrays, parents


cdef _follow_border(int[:, ::1] f, Py_ssize_t i, Py_ssize_t j,
                    Py_ssize_t i2, Py_ssize_t j2, int nbd):
    cdef Py_ssize_t cap = 64, length = 0
    chain_arr = np.empty((cap, 2), dtype=np.int32)
    cdef int[:, ::1] chain = chain_arr
    cdef int start, found, t, idx, p
    cdef Py_ssize_t i1, j1, i3, j3, i4, j4, ni, nj
    cdef bint east_zero

    start = _nbr_index(<int>(i2 - i), <int>(j2 - j))
    found = -1
    for t in range(8):
        idx = (start + t) % 8
        if f[i + _NBR_I[idx], j + _NBR_J[idx]] != 0:
            found = idx
            break
    if found == -1:
        f[i, j] = -nbd
        chain[0, 0] = <int>i
        chain[0, 1] = <int>j
        return chain_arr[:1].copy()

    i1 = i + _NBR_I[found]
    j1 = j + _NBR_J[found]
    i2 = i1
    j2 = j1
    i3 = i
    j3 = j
    while True:
        p = _nbr_index(<int>(i2 - i3), <int>(j2 - j3))
        east_zero = False
        i4 = -1
        j4 = -1
        for t in range(1, 9):
            idx = (p - t + 8) % 8  # cdivision: keep the operand nonnegative
            ni = i3 + _NBR_I[idx]
            nj = j3 + _NBR_J[idx]
            if f[ni, nj] != 0:
                i4 = ni
                j4 = nj
                break
            if idx == 0:
                east_zero = True
        if east_zero:
            f[i3, j3] = -nbd
        elif f[i3, j3] == 1:
            f[i3, j3] = nbd
        if length == cap:
            cap *= 2
            new_arr = np.empty((cap, 2), dtype=np.int32)
            new_arr[:length] = chain_arr[:length]
            chain_arr = new_arr
            chain = chain_arr
        chain[length, 0] = <int>i3
        chain[length, 1] = <int>j3
        length += 1
        if i4 == i and j4 == j and i3 == i1 and j3 == j1:
            break
        i2 = i3
        j2 = j3
        i3 = i4
        j3 = j4
    return chain_arr[:length].copy()
