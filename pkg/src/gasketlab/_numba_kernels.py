"""Numba implementations of the hot kernels.

Each kernel has a signature-identical twin in `_numpy_kernels`; the wrappers
in `graph`, `neighborhoods` and `render` canonicalize the raw output so the
two backends are interchangeable bit for bit.

Coordinates are packed into int64 hash keys, which requires candidate
translations to satisfy |re|, |im| < 2^21; the build wrappers enforce this
(the complexity gate rejects such systems long before).
"""
from __future__ import annotations

import numpy as np
from numba import njit, int32, int64
from numba.typed import Dict

_OFF = 1 << 21
_ID_KEY = (_OFF << 24) + (_OFF << 2)  # key of the identity isometry


@njit(cache=True, inline="always")
def _rot(q, re, im):
    if q == 0:
        return re, im
    if q == 1:
        return -im, re
    if q == 2:
        return -re, -im
    return im, -re


@njit(cache=True, inline="always")
def _key(q, re, im):
    return ((re + _OFF) << 24) + ((im + _OFF) << 2) + q


@njit(cache=True)
def closure(m, qs, vre, vim, bound, ceiling, early_exit):
    """Breadth-first closure of the neighbor-map transition system.

    Seeds with f_j^-1 f_k (j != k), expands every discovered map under all
    (j, k) transitions, and discards targets with |w|^2 > bound.  Records a
    parent edge per vertex for witness reconstruction.

    Returns (vq, vre, vim, e_from, e_j, e_k, e_to, par, pj, pk,
             id_index, overflowed).
    """
    cap = 256
    oq = np.empty(cap, np.int8)
    ore = np.empty(cap, np.int64)
    oim = np.empty(cap, np.int64)
    par = np.empty(cap, np.int32)
    pj = np.empty(cap, np.int8)
    pk = np.empty(cap, np.int8)
    ecap = 1024
    ef = np.empty(ecap, np.int32)
    ej = np.empty(ecap, np.int8)
    ek = np.empty(ecap, np.int8)
    et = np.empty(ecap, np.int32)
    table = Dict.empty(key_type=int64, value_type=int32)
    n = 0
    ne = 0
    id_index = -1
    overflow = False

    # seed: transitions of the identity with j != k
    for j in range(m):
        for k in range(m):
            if j == k:
                continue
            qinv = (4 - qs[j]) & 3
            q2 = (qinv + qs[k]) & 3
            tr = vre[k] - vre[j]
            ti = vim[k] - vim[j]
            wr, wi = _rot(qinv, tr, ti)
            key = _key(q2, wr, wi)
            if key in table:
                continue
            if n == cap:
                cap *= 2
                oq = _grow8(oq, cap)
                ore = _grow64(ore, cap)
                oim = _grow64(oim, cap)
                par = _grow32(par, cap)
                pj = _grow8(pj, cap)
                pk = _grow8(pk, cap)
            table[key] = n
            oq[n] = q2
            ore[n] = wr
            oim[n] = wi
            par[n] = -1
            pj[n] = j
            pk[n] = k
            if key == _ID_KEY:
                id_index = n
            n += 1

    head = 0
    stop = early_exit and id_index >= 0
    while head < n and not stop and not overflow:
        hq = oq[head]
        hre = ore[head]
        him = oim[head]
        for j in range(m):
            qinv = (4 - qs[j]) & 3
            for k in range(m):
                q2 = (qinv + hq + qs[k]) & 3
                tr, ti = _rot(hq, vre[k], vim[k])
                tr += 2 * hre - vre[j]
                ti += 2 * him - vim[j]
                wr, wi = _rot(qinv, tr, ti)
                if wr * wr + wi * wi > bound:
                    continue
                key = _key(q2, wr, wi)
                if key in table:
                    tid = table[key]
                else:
                    if n > ceiling:
                        overflow = True
                        break
                    if n == cap:
                        cap *= 2
                        oq = _grow8(oq, cap)
                        ore = _grow64(ore, cap)
                        oim = _grow64(oim, cap)
                        par = _grow32(par, cap)
                        pj = _grow8(pj, cap)
                        pk = _grow8(pk, cap)
                    table[key] = n
                    oq[n] = q2
                    ore[n] = wr
                    oim[n] = wi
                    par[n] = head
                    pj[n] = j
                    pk[n] = k
                    tid = n
                    if key == _ID_KEY:
                        id_index = n
                        if early_exit:
                            stop = True
                    n += 1
                if ne == ecap:
                    ecap *= 2
                    ef = _grow32(ef, ecap)
                    ej = _grow8(ej, ecap)
                    ek = _grow8(ek, ecap)
                    et = _grow32(et, ecap)
                ef[ne] = head
                ej[ne] = j
                ek[ne] = k
                et[ne] = tid
                ne += 1
            if overflow or (stop and early_exit):
                break
        if n > ceiling:
            overflow = True
        head += 1

    return (oq[:n].copy(), ore[:n].copy(), oim[:n].copy(),
            ef[:ne].copy(), ej[:ne].copy(), ek[:ne].copy(), et[:ne].copy(),
            par[:n].copy(), pj[:n].copy(), pk[:n].copy(),
            id_index, overflow)


@njit(cache=True)
def _grow8(a, cap):
    b = np.empty(cap, np.int8)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _grow32(a, cap):
    b = np.empty(cap, np.int32)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _grow64(a, cap):
    b = np.empty(cap, np.int64)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def scc_labels(n, indptr, targets):
    """Iterative Tarjan over a CSR digraph.

    Returns (labels, ncomp); components are numbered in emission order,
    which is reverse-topological: every edge u -> v across components has
    labels[u] > labels[v].
    """
    index = np.full(n, -1, np.int64)
    low = np.zeros(n, np.int64)
    on = np.zeros(n, np.uint8)
    comp = np.full(n, -1, np.int32)
    stack = np.empty(n, np.int32)
    sp = 0
    wv = np.empty(n + 1, np.int32)
    wi = np.empty(n + 1, np.int64)
    counter = 0
    nc = 0
    for root in range(n):
        if index[root] != -1:
            continue
        top = 0
        wv[0] = root
        wi[0] = indptr[root]
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        on[root] = 1
        while top >= 0:
            v = wv[top]
            i = wi[top]
            advanced = False
            while i < indptr[v + 1]:
                w = targets[i]
                i += 1
                if index[w] == -1:
                    wi[top] = i
                    top += 1
                    wv[top] = w
                    wi[top] = indptr[w]
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    on[w] = 1
                    advanced = True
                    break
                elif on[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            wi[top] = i
            if low[v] == index[v]:
                while True:
                    w = stack[sp - 1]
                    sp -= 1
                    on[w] = 0
                    comp[w] = nc
                    if w == v:
                        break
                nc += 1
            top -= 1
            if top >= 0:
                p = wv[top]
                if low[v] < low[p]:
                    low[p] = low[v]
    return comp, nc


@njit(cache=True, inline="always")
def _state_hash(states, sid, words):
    h = np.uint64(1469598103934665603)
    for w in range(words):
        h ^= states[sid, w]
        h *= np.uint64(1099511628211)
    return h


@njit(cache=True)
def state_closure(nproper, m, words, init_masks, trans_masks, ceiling, tsize):
    """BFS closure of neighborhood states (bitmask rows of `words` u64 each).

    State 0 is the empty root.  Returns (states, trans, overflowed) where
    trans[s, j] is the successor state id.
    """
    cap = 1024
    states = np.zeros((cap, words), np.uint64)
    trans = np.full((cap, m), -1, np.int32)
    mask = tsize - 1
    table = np.full(tsize, -1, np.int32)
    n = 1  # root
    h = _state_hash(states, 0, words)
    table[int(h) & mask] = 0
    tmp = np.zeros(words, np.uint64)
    overflow = False

    head = 0
    while head < n and not overflow:
        for j in range(m):
            for w in range(words):
                tmp[w] = init_masks[j, w]
            for p in range(nproper):
                if (states[head, p >> 6] >> np.uint64(p & 63)) & np.uint64(1):
                    for w in range(words):
                        tmp[w] |= trans_masks[p, j, w]
            # lookup / insert
            h = np.uint64(1469598103934665603)
            for w in range(words):
                h ^= tmp[w]
                h *= np.uint64(1099511628211)
            idx = int(h) & mask
            sid = -1
            while True:
                cur = table[idx]
                if cur == -1:
                    break
                same = True
                for w in range(words):
                    if states[cur, w] != tmp[w]:
                        same = False
                        break
                if same:
                    sid = cur
                    break
                idx = (idx + 1) & mask
            if sid == -1:
                if n > ceiling:
                    overflow = True
                    break
                if n == cap:
                    cap *= 2
                    ns = np.zeros((cap, words), np.uint64)
                    ns[:n] = states[:n]
                    states = ns
                    nt = np.full((cap, m), -1, np.int32)
                    nt[:n] = trans[:n]
                    trans = nt
                sid = n
                for w in range(words):
                    states[sid, w] = tmp[w]
                table[idx] = sid
                n += 1
            trans[head, j] = sid
        head += 1

    return states[:n].copy(), trans[:n].copy(), overflow


@njit(cache=True)
def paint(m, qs, vxr, vxi, radii, scales,
          gx0, gy1, ps, half_ps,
          tile_x0, tile_y0, width, height,
          post_q, post_re, post_im, use_post,
          img, touched, per_piece, colors, fixed_r, fixed_g, fixed_b,
          max_depth):
    """Adaptive-subdivision rasterizer.

    Depth-first over pieces; a piece is pruned when its bounding disk misses
    the tile window and painted once the disk radius drops under half a
    pixel.  Pixel indices are computed against the *global* grid so tiled
    renders stitch bit-exactly.
    """
    cap = (max_depth + 2) * m + 2
    sx = np.empty(cap, np.float64)
    sy = np.empty(cap, np.float64)
    sq = np.empty(cap, np.int8)
    sd = np.empty(cap, np.int16)
    sf = np.empty(cap, np.int16)
    tx0 = gx0 + tile_x0 * ps
    tx1 = gx0 + (tile_x0 + width) * ps
    ty1 = gy1 - tile_y0 * ps
    ty0 = gy1 - (tile_y0 + height) * ps
    top = 0
    sx[0] = 0.0
    sy[0] = 0.0
    sq[0] = 0
    sd[0] = 0
    sf[0] = -1
    count = 0
    while top >= 0:
        x = sx[top]
        y = sy[top]
        q = sq[top]
        d = sd[top]
        first = sf[top]
        top -= 1
        if use_post:
            px, py = _rotf(post_q, x, y)
            px += post_re
            py += post_im
        else:
            px = x
            py = y
        r = radii[d]
        dx = tx0 - px
        if px - tx1 > dx:
            dx = px - tx1
        if dx < 0.0:
            dx = 0.0
        dy = ty0 - py
        if py - ty1 > dy:
            dy = py - ty1
        if dy < 0.0:
            dy = 0.0
        if dx * dx + dy * dy > r * r:
            continue
        if r < half_ps:
            col = int(np.floor((px - gx0) / ps)) - tile_x0
            row = int(np.floor((gy1 - py) / ps)) - tile_y0
            if 0 <= col < width and 0 <= row < height:
                if per_piece and first >= 0:
                    img[row, col, 0] = colors[first, 0]
                    img[row, col, 1] = colors[first, 1]
                    img[row, col, 2] = colors[first, 2]
                else:
                    img[row, col, 0] = fixed_r
                    img[row, col, 1] = fixed_g
                    img[row, col, 2] = fixed_b
                if touched[row, col] == 0:
                    touched[row, col] = 1
                    count += 1
            continue
        if d >= max_depth:
            return -1  # depth cap hit before reaching pixel scale
        s = scales[d]
        for k in range(m - 1, -1, -1):
            rx, ry = _rotf(q, vxr[k], vxi[k])
            top += 1
            sx[top] = x + rx * s
            sy[top] = y + ry * s
            sq[top] = (q + qs[k]) & 3
            sd[top] = d + 1
            sf[top] = k if first < 0 else first
    return count


@njit(cache=True, inline="always")
def _rotf(q, x, y):
    if q == 0:
        return x, y
    if q == 1:
        return -y, x
    if q == 2:
        return -x, -y
    return y, -x


def warmup():
    """Force compilation of all kernels (cached on disk afterwards)."""
    qs = np.array([0, 0], np.int8)
    vre = np.array([-4, 4], np.int64)
    vim = np.array([0, 0], np.int64)
    closure(2, qs, vre, vim, 64, 1000, False)
    indptr = np.array([0, 1, 2], np.int64)
    targets = np.array([1, 0], np.int32)
    scc_labels(2, indptr, targets)
    im = np.zeros((2, 1), np.uint64)
    tm = np.zeros((2, 2, 1), np.uint64)
    state_closure(2, 2, 1, im, tm, 100, 256)
    img = np.zeros((4, 4, 3), np.uint8)
    tch = np.zeros((4, 4), np.uint8)
    colors = np.zeros((2, 3), np.uint8)
    radii = np.array([4.0, 2.0, 1.0, 0.5])
    scales = np.array([0.5, 0.25, 0.125, 0.0625])
    paint(2, qs, vre.astype(np.float64), vim.astype(np.float64), radii, scales,
          -1.0, 1.0, 0.5, 0.25, 0, 0, 4, 4, 0, 0.0, 0.0, False,
          img, tch, True, colors, np.uint8(0), np.uint8(0), np.uint8(0), 3)
