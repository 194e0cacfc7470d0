"""NumPy implementations of the hot per-pixel kernels.

This is the fallback backend; ``_cykernels`` is the compiled twin. The two
must stay interchangeable, so accumulation orders are kept identical (tap
loops instead of reassociated sums) and tie-breaking constants are shared
literals. On integer-valued inputs the convolution and gradient kernels are
bit-equal across backends.
"""

from __future__ import annotations

import numpy as np

# tan(pi/8) and tan(3*pi/8): sector boundaries for gradient direction
# quantization. Literal constants so both backends compare identical doubles.
TAN_22_5 = 0.41421356237309503
TAN_67_5 = 2.414213562373095


def sep_convolve(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Separable 2D convolution with replicated borders.

    ``img`` is float64 (h, w); ``kernel`` is a 1D float64 tap vector applied
    horizontally then vertically. Accumulates in tap order.
    """
    h, w = img.shape
    n = kernel.shape[0]
    r = n // 2

    padded = np.pad(img, ((0, 0), (r, r)), mode="edge")
    horiz = np.zeros((h, w), dtype=np.float64)
    for t in range(n):
        horiz += kernel[t] * padded[:, t : t + w]

    padded = np.pad(horiz, ((r, r), (0, 0)), mode="edge")
    out = np.zeros((h, w), dtype=np.float64)
    for t in range(n):
        out += kernel[t] * padded[t : t + h, :]
    return out


_SOBEL_X = ((-1.0, 0.0, 1.0), (-2.0, 0.0, 2.0), (-1.0, 0.0, 1.0))
_SOBEL_Y = ((-1.0, -2.0, -1.0), (0.0, 0.0, 0.0), (1.0, 2.0, 1.0))


def sobel(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """3x3 Sobel gradients (correlation, y growing downward), replicated borders.

    Returns (gx, gy) as float64 arrays of the input shape.
    """
    h, w = img.shape
    padded = np.pad(img, 1, mode="edge")
    gx = np.zeros((h, w), dtype=np.float64)
    gy = np.zeros((h, w), dtype=np.float64)
    for dy in range(3):
        for dx in range(3):
            window = padded[dy : dy + h, dx : dx + w]
            cx = _SOBEL_X[dy][dx]
            cy = _SOBEL_Y[dy][dx]
            if cx != 0.0:
                gx += cx * window
            if cy != 0.0:
                gy += cy * window
    return gx, gy


def nonmax_suppress(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Keep gradient-magnitude ridge pixels only.

    The gradient direction is quantized into four sectors by comparing
    |gy| against tan(22.5)|gx| and tan(67.5)|gx|. A pixel survives when its
    magnitude is strictly greater than the earlier neighbor along the
    gradient and >= the later one, which keeps exactly one pixel of a
    two-wide plateau. The one-pixel image border is zeroed.
    """
    h, w = mag.shape
    out = np.zeros((h, w), dtype=np.float64)
    if h < 3 or w < 3:
        return out

    m = mag[1:-1, 1:-1]
    ax = np.abs(gx[1:-1, 1:-1])
    ay = np.abs(gy[1:-1, 1:-1])
    sector0 = ay < TAN_22_5 * ax
    sector2 = ay > TAN_67_5 * ax
    diag = ~(sector0 | sector2)
    pos = gx[1:-1, 1:-1] * gy[1:-1, 1:-1] > 0.0
    sector1 = diag & pos
    sector3 = diag & ~pos

    west = mag[1:-1, :-2]
    east = mag[1:-1, 2:]
    north = mag[:-2, 1:-1]
    south = mag[2:, 1:-1]
    nw = mag[:-2, :-2]
    se = mag[2:, 2:]
    ne = mag[:-2, 2:]
    sw = mag[2:, :-2]

    keep = (m > 0.0) & (
        (sector0 & (m > west) & (m >= east))
        | (sector2 & (m > north) & (m >= south))
        | (sector1 & (m > nw) & (m >= se))
        | (sector3 & (m > ne) & (m >= sw))
    )
    out[1:-1, 1:-1] = np.where(keep, m, 0.0)
    return out


def hysteresis(mag: np.ndarray, low: float, high: float) -> np.ndarray:
    """Double-threshold edge linking on a thinned magnitude map.

    Seeds are pixels with mag > high; pixels with mag > low join when
    8-connected to a seed. Returns uint8 {0, 255}.
    """
    strong = mag > high
    candidate = mag > low
    reached = strong.copy()
    frontier = strong
    while frontier.any():
        grown = np.zeros_like(reached)
        grown[:-1, :] |= frontier[1:, :]
        grown[1:, :] |= frontier[:-1, :]
        grown[:, :-1] |= frontier[:, 1:]
        grown[:, 1:] |= frontier[:, :-1]
        grown[:-1, :-1] |= frontier[1:, 1:]
        grown[1:, 1:] |= frontier[:-1, :-1]
        grown[:-1, 1:] |= frontier[1:, :-1]
        grown[1:, :-1] |= frontier[:-1, 1:]
        frontier = grown & candidate & ~reached
        reached |= frontier
    return np.where(reached, 255, 0).astype(np.uint8)


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _fft1d_rows(a: np.ndarray) -> np.ndarray:
    """Iterative radix-2 decimation-in-time FFT over the last axis (pow-2 length)."""
    b, n = a.shape
    if n == 1:
        return a.copy()
    levels = n.bit_length() - 1
    # bit-reversal permutation
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for bit in range(levels):
        rev |= ((idx >> bit) & 1) << (levels - 1 - bit)
    out = a[:, rev].astype(np.complex128)
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(b, n // size, size)
        even = blocks[:, :, :half]
        odd = blocks[:, :, half:] * tw
        blocks[:, :, :half] = even + odd
        blocks[:, :, half:] = even - odd
        size *= 2
    return out


def _dft1d_rows(a: np.ndarray) -> np.ndarray:
    """Direct O(n^2) transform over the last axis, for non-pow-2 lengths."""
    n = a.shape[1]
    k = np.arange(n)
    w = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return a @ w.T


def dft2d(a: np.ndarray) -> np.ndarray:
    """Unnormalized forward 2D DFT of a complex128 (M, N) matrix.

    Row-column decomposition; each axis uses the radix-2 FFT when its length
    is a power of two and the direct transform otherwise.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    m, n = a.shape
    rows = _fft1d_rows(a) if _is_pow2(n) else _dft1d_rows(a)
    cols = rows.T.copy()
    cols = _fft1d_rows(cols) if _is_pow2(m) else _dft1d_rows(cols)
    return np.ascontiguousarray(cols.T)


def moment_sums(img: np.ndarray, cx: float, cy: float) -> np.ndarray:
    """Sums of (x-cx)^p (y-cy)^q I(x, y) for p+q <= 3.

    Order: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) (3,0) (2,1) (1,2) (0,3),
    with x the column index and y the row index.
    """
    h, w = img.shape
    x = np.arange(w, dtype=np.float64) - cx
    y = np.arange(h, dtype=np.float64) - cy
    col = img.sum(axis=0)
    row = img.sum(axis=1)
    xi = img @ x
    out = np.empty(10, dtype=np.float64)
    out[0] = img.sum()
    out[1] = col @ x
    out[2] = row @ y
    out[3] = col @ (x * x)
    out[4] = xi @ y
    out[5] = row @ (y * y)
    out[6] = col @ (x * x * x)
    out[7] = (img @ (x * x)) @ y
    out[8] = (img.T @ (y * y)) @ x
    out[9] = row @ (y * y * y)
    return out


# 8-neighborhood in clockwise order starting east, image coords (row, col).
_NBR = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))


def trace_borders(binary: np.ndarray) -> tuple[list[np.ndarray], list[int]]:
    """Raster-scan border following over a {0, 255} uint8 image.

    Returns (chains, parents): each chain is an int32 (n, 2) array of
    (row, col) border pixels in traversal order; ``parents[i]`` is the index
    of the enclosing contour or -1 at top level. Outer and hole borders are
    both traced; isolated single-pixel borders are discarded.
    """
    h, w = binary.shape
    f = np.zeros((h + 2, w + 2), dtype=np.int32)
    f[1:-1, 1:-1] = (binary != 0).astype(np.int32)

    # border bookkeeping; slot 1 is the picture frame (a hole border)
    border_type = [0, 2]  # 1 = outer, 2 = hole
    border_parent = [0, 0]
    chains: list[list[tuple[int, int]]] = []
    chain_slot: list[int] = [-1, -1]  # border number -> index into chains, -1 if none
    nbd = 1

    for i in range(1, h + 1):
        lnbd = 1
        for j in range(1, w + 1):
            fij = f[i, j]
            if fij == 0:
                continue
            outer = fij == 1 and f[i, j - 1] == 0
            hole = fij >= 1 and f[i, j + 1] == 0
            if outer or hole:
                nbd += 1
                if outer:
                    btype = 1
                    i2, j2 = i, j - 1
                else:
                    btype = 2
                    i2, j2 = i, j + 1
                    if fij > 1:
                        lnbd = fij
                prev_type = border_type[lnbd]
                parent = border_parent[lnbd] if prev_type == btype else lnbd
                border_type.append(btype)
                border_parent.append(parent)
                chain = _follow_border(f, i, j, i2, j2, nbd)
                if len(chain) >= 2:
                    chain_slot.append(len(chains))
                    chains.append(chain)
                else:
                    chain_slot.append(-1)
            fij = f[i, j]
            if fij != 1:
                lnbd = abs(fij)

    arrays = [np.array(c, dtype=np.int32) - 1 for c in chains]  # undo padding offset
    parents = [-1] * len(chains)
    for b in range(2, nbd + 1):
        slot = chain_slot[b]
        if slot == -1:
            continue
        p = border_parent[b]
        while p > 1 and chain_slot[p] == -1:
            p = border_parent[p]
        parents[slot] = chain_slot[p] if p > 1 else -1
    return arrays, parents


def _follow_border(f, i, j, i2, j2, nbd):
    """Trace one border starting at (i, j) with initial probe (i2, j2)."""
    start = _NBR.index((i2 - i, j2 - j))
    found = -1
    for t in range(8):
        idx = (start + t) % 8
        if f[i + _NBR[idx][0], j + _NBR[idx][1]] != 0:
            found = idx
            break
    if found == -1:
        f[i, j] = -nbd
        return [(i, j)]
    i1 = i + _NBR[found][0]
    j1 = j + _NBR[found][1]
    i2, j2 = i1, j1
    i3, j3 = i, j
    chain = []
    while True:
        p = _NBR.index((i2 - i3, j2 - j3))
        east_zero = False
        i4 = j4 = -1
        for t in range(1, 9):
            idx = (p - t) % 8
            ni = i3 + _NBR[idx][0]
            nj = j3 + _NBR[idx][1]
            if f[ni, nj] != 0:
                i4, j4 = ni, nj
                break
            if idx == 0:
                east_zero = True
        if east_zero:
            f[i3, j3] = -nbd
        elif f[i3, j3] == 1:
            f[i3, j3] = nbd
        chain.append((i3, j3))
        if i4 == i and j4 == j and i3 == i1 and j3 == j1:
            break
        i2, j2 = i3, j3
        i3, j3 = i4, j4
    return chain
