"""Pure numpy/python fallback for the hot kernels (no JIT).

Same signatures and same observable output as `_numba_kernels`: the closure
produces the identical vertex/edge sets (order may differ; the wrappers
canonicalize), `state_closure` visits states in the identical BFS order, and
`paint` writes the identical bytes (leaf pieces are processed in the same
lexicographic word order the jitted DFS uses).
"""
from __future__ import annotations

import numpy as np

_OFF = 1 << 21
_ID_KEY = (_OFF << 24) + (_OFF << 2)


def _rot_arrays(q, re, im):
    """Vectorized unit rotation; q, re, im are same-shape int arrays."""
    out_re = np.empty_like(re)
    out_im = np.empty_like(im)
    for qq, (fr, fi) in enumerate(((1, 0), (0, 1), (-1, 0), (0, -1))):
        sel = q == qq
        out_re[sel] = fr * re[sel] - fi * im[sel]
        out_im[sel] = fr * im[sel] + fi * re[sel]
    return out_re, out_im


def closure(m, qs, vre, vim, bound, ceiling, early_exit):
    """Level-synchronous vectorized closure; see the numba twin for contract."""
    qs = qs.astype(np.int64)
    vre = vre.astype(np.int64)
    vim = vim.astype(np.int64)
    qinv = (4 - qs) & 3

    # seed transitions of the identity, j != k, in (j, k) order
    seed_q, seed_re, seed_im, seed_j, seed_k = [], [], [], [], []
    for j in range(m):
        for k in range(m):
            if j != k:
                q2 = (qinv[j] + qs[k]) & 3
                wr, wi = _rot_arrays(np.array([qinv[j]]),
                                     np.array([vre[k] - vre[j]]),
                                     np.array([vim[k] - vim[j]]))
                seed_q.append(q2)
                seed_re.append(wr[0])
                seed_im.append(wi[0])
                seed_j.append(j)
                seed_k.append(k)
    seed_q = np.array(seed_q, np.int64)
    seed_re = np.array(seed_re, np.int64)
    seed_im = np.array(seed_im, np.int64)
    keys = ((seed_re + _OFF) << 24) + ((seed_im + _OFF) << 2) + seed_q
    uniq, first = np.unique(keys, return_index=True)
    order = np.sort(first)  # keep discovery order
    vq = list(seed_q[order])
    vr = list(seed_re[order])
    vi = list(seed_im[order])
    par = [-1] * len(order)
    pj = [seed_j[i] for i in order]
    pk = [seed_k[i] for i in order]
    known = {int(keys[i]): idx for idx, i in enumerate(order)}
    id_index = known.get(_ID_KEY, -1)

    ef, ej, ek, et = [], [], [], []
    frontier = np.array(range(len(vq)), np.int64)
    overflow = False
    while frontier.size and not overflow and not (early_exit and id_index >= 0):
        fq = np.array([vq[i] for i in frontier], np.int64)
        fre = np.array([vr[i] for i in frontier], np.int64)
        fim = np.array([vi[i] for i in frontier], np.int64)
        new_ids = []
        for j in range(m):
            for k in range(m):
                q2 = (qinv[j] + fq + qs[k]) & 3
                tr, ti = _rot_arrays(fq, np.full_like(fq, vre[k]), np.full_like(fq, vim[k]))
                tr = tr + 2 * fre - vre[j]
                ti = ti + 2 * fim - vim[j]
                wr, wi = _rot_arrays(np.full_like(fq, qinv[j]), tr, ti)
                ok = wr * wr + wi * wi <= bound
                src = frontier[ok]
                q2, wr, wi = q2[ok], wr[ok], wi[ok]
                kk = ((wr + _OFF) << 24) + ((wi + _OFF) << 2) + q2
                for idx in range(src.size):
                    key = int(kk[idx])
                    tid = known.get(key, -1)
                    if tid < 0:
                        tid = len(vq)
                        known[key] = tid
                        vq.append(int(q2[idx]))
                        vr.append(int(wr[idx]))
                        vi.append(int(wi[idx]))
                        par.append(int(src[idx]))
                        pj.append(j)
                        pk.append(k)
                        new_ids.append(tid)
                        if key == _ID_KEY:
                            id_index = tid
                    ef.append(int(src[idx]))
                    ej.append(j)
                    ek.append(k)
                    et.append(tid)
        if len(vq) > ceiling:
            overflow = True
        frontier = np.array(new_ids, np.int64)

    return (np.array(vq, np.int8), np.array(vr, np.int64), np.array(vi, np.int64),
            np.array(ef, np.int32), np.array(ej, np.int8), np.array(ek, np.int8),
            np.array(et, np.int32),
            np.array(par, np.int32), np.array(pj, np.int8), np.array(pk, np.int8),
            id_index, overflow)


def scc_labels(n, indptr, targets):
    """Iterative Tarjan, python edition; identical labeling to the jitted one."""
    index = [-1] * n
    low = [0] * n
    on = bytearray(n)
    comp = np.full(n, -1, np.int32)
    stack = []
    counter = 0
    nc = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, indptr[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = 1
        while work:
            v, i = work[-1]
            advanced = False
            while i < indptr[v + 1]:
                w = int(targets[i])
                i += 1
                if index[w] == -1:
                    work[-1] = (v, i)
                    work.append((w, indptr[w]))
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = 1
                    advanced = True
                    break
                elif on[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work[-1] = (v, i)
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on[w] = 0
                    comp[w] = nc
                    if w == v:
                        break
                nc += 1
            work.pop()
            if work:
                p = work[-1][0]
                if low[v] < low[p]:
                    low[p] = low[v]
    return comp, nc


def state_closure(nproper, m, words, init_masks, trans_masks, ceiling, tsize):
    """BFS over neighborhood states using python ints as bitmasks."""
    def pack(mask_int):
        row = np.empty(words, np.uint64)
        for w in range(words):
            row[w] = (mask_int >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
        return row

    init = []
    for j in range(m):
        v = 0
        for w in range(words):
            v |= int(init_masks[j, w]) << (64 * w)
        init.append(v)
    tmask = []
    for p in range(nproper):
        row = []
        for j in range(m):
            v = 0
            for w in range(words):
                v |= int(trans_masks[p, j, w]) << (64 * w)
            row.append(v)
        tmask.append(row)

    ids = {0: 0}
    masks = [0]
    trans = []
    overflow = False
    head = 0
    while head < len(masks) and not overflow:
        cur = masks[head]
        row = []
        for j in range(m):
            nm = init[j]
            x = cur
            while x:
                lowbit = x & -x
                p = lowbit.bit_length() - 1
                x ^= lowbit
                nm |= tmask[p][j]
            sid = ids.get(nm, -1)
            if sid < 0:
                if len(masks) > ceiling:
                    overflow = True
                    break
                sid = len(masks)
                ids[nm] = sid
                masks.append(nm)
            row.append(sid)
        trans.append(row + [-1] * (m - len(row)))
        head += 1

    n = len(masks)
    states = np.zeros((n, words), np.uint64)
    for i, mk in enumerate(masks):
        states[i] = pack(mk)
    tr = np.full((n, m), -1, np.int32)
    for i, row in enumerate(trans):
        tr[i, : len(row)] = row
    return states, tr, overflow


def paint(m, qs, vxr, vxi, radii, scales,
          gx0, gy1, ps, half_ps,
          tile_x0, tile_y0, width, height,
          post_q, post_re, post_im, use_post,
          img, touched, per_piece, colors, fixed_r, fixed_g, fixed_b,
          max_depth):
    """Level-synchronous subdivision; leaves processed in lexicographic word
    order so contested pixels resolve exactly as in the DFS backend."""
    tx0 = gx0 + tile_x0 * ps
    tx1 = gx0 + (tile_x0 + width) * ps
    ty1 = gy1 - tile_y0 * ps
    ty0 = gy1 - (tile_y0 + height) * ps
    rot = {0: (1.0, 0.0), 1: (0.0, 1.0), 2: (-1.0, 0.0), 3: (0.0, -1.0)}
    pr, pi = rot[post_q]
    # rotated translation components per (unit, map); sign flips only, exact
    rot_re = np.empty((4, m))
    rot_im = np.empty((4, m))
    for qq in range(4):
        ur, ui = rot[qq]
        for k in range(m):
            rot_re[qq, k] = ur * vxr[k] - ui * vxi[k]
            rot_im[qq, k] = ur * vxi[k] + ui * vxr[k]

    def post(x, y):
        if not use_post:
            return x, y
        return pr * x - pi * y + post_re, pr * y + pi * x + post_im

    def alive(x, y, r):
        px, py = post(x, y)
        dx = np.maximum(np.maximum(tx0 - px, px - tx1), 0.0)
        dy = np.maximum(np.maximum(ty0 - py, py - ty1), 0.0)
        return dx * dx + dy * dy <= r * r

    x = np.zeros(1)
    y = np.zeros(1)
    q = np.zeros(1, np.int64)
    first = np.full(1, -1, np.int16)
    depth = 0
    while True:
        keep = alive(x, y, radii[depth])
        x, y, q, first = x[keep], y[keep], q[keep], first[keep]
        if x.size == 0:
            return 0
        if radii[depth] < half_ps:
            break
        if depth >= max_depth:
            return -1
        s = scales[depth]
        nx = np.empty((x.size, m))
        ny = np.empty((x.size, m))
        nq = np.empty((x.size, m), np.int64)
        nf = np.empty((x.size, m), np.int16)
        for k in range(m):
            nx[:, k] = x + rot_re[q, k] * s
            ny[:, k] = y + rot_im[q, k] * s
            nq[:, k] = (q + qs[k]) & 3
            nf[:, k] = np.where(first < 0, k, first)
        x = nx.reshape(-1)
        y = ny.reshape(-1)
        q = nq.reshape(-1)
        first = nf.reshape(-1)
        depth += 1

    px, py = post(x, y)
    col = np.floor((px - gx0) / ps).astype(np.int64) - tile_x0
    row = np.floor((gy1 - py) / ps).astype(np.int64) - tile_y0
    ok = (col >= 0) & (col < width) & (row >= 0) & (row < height)
    col, row, first = col[ok], row[ok], first[ok]
    if col.size == 0:
        return 0
    if per_piece:
        fill = np.where(first[:, None] >= 0, colors[np.maximum(first, 0)],
                        np.array([fixed_r, fixed_g, fixed_b], np.uint8))
        img[row, col] = fill  # duplicate indices: numpy keeps the last write
    else:
        img[row, col] = np.array([fixed_r, fixed_g, fixed_b], np.uint8)
    flat = touched.reshape(-1)
    uniq = np.unique(row * np.int64(width) + col)
    count = int((flat[uniq] == 0).sum())
    flat[uniq] = 1
    return count


def warmup():
    return None
