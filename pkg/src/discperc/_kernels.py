"""Compiled kernels for crossing decisions, bottlenecks, and grid sweeps.

Everything here is a plain function of ndarrays so the hot Monte Carlo
loops stay off the Python interpreter.  Geometry conventions:

  * a spatial hash assigns center k to cell (ix, iy) with flat key
    ix * ncy + iy; points arrive sorted by key and starts[key] ..
    starts[key+1] delimits a cell's slice (CSR layout).  Cell size is
    always >= twice the disc radius under test, so any two centers whose
    discs can meet lie in 3x3 neighboring cells.
  * grids store values[ix * ny + iy] for the node at
    (x0 + ix * h, y0 + iy * h).
  * axis 0 joins the two x-extreme sides (a horizontal crossing),
    axis 1 the two y-extreme sides.

Union-find is path-halving with union by size; iteration order is fixed
by the sorted inputs so results replay exactly.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

INF = np.inf


# ======================================================================
# scalar geometry
# ======================================================================

@njit(cache=True, inline="always")
def _seg_point_d2(px, py, ax, ay, bx, by):
    """Squared distance from (px,py) to segment a-b."""
    ux = bx - ax
    uy = by - ay
    l2 = ux * ux + uy * uy
    if l2 > 0.0:
        t = ((px - ax) * ux + (py - ay) * uy) / l2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    else:
        t = 0.0
    dx = ax + t * ux - px
    dy = ay + t * uy - py
    return dx * dx + dy * dy


@njit(cache=True)
def _seg_minmax(c1x, c1y, c2x, c2y, ax, ay, bx, by):
    """min over x on segment a-b of max(|x-c1|, |x-c2|).

    The function is convex along the segment, so the minimum sits at an
    endpoint, at the perpendicular foot of either center, or at the
    equidistant point.  All candidates have closed forms; evaluating the
    max at each and taking the least is exact.
    """
    ux = bx - ax
    uy = by - ay
    length = math.sqrt(ux * ux + uy * uy)
    if length == 0.0:
        d1 = math.sqrt((ax - c1x) ** 2 + (ay - c1y) ** 2)
        d2 = math.sqrt((ax - c2x) ** 2 + (ay - c2y) ** 2)
        return max(d1, d2)
    ex = ux / length
    ey = uy / length

    v1x = c1x - ax
    v1y = c1y - ay
    v2x = c2x - ax
    v2y = c2y - ay
    t1 = v1x * ex + v1y * ey
    t2 = v2x * ex + v2y * ey

    cand = np.empty(5, np.float64)
    cand[0] = 0.0
    cand[1] = length
    ncand = 2
    if 0.0 <= t1 <= length:
        cand[ncand] = t1
        ncand += 1
    if 0.0 <= t2 <= length:
        cand[ncand] = t2
        ncand += 1
    denom = 2.0 * (t2 - t1)
    if denom != 0.0:
        teq = ((v2x * v2x + v2y * v2y) - (v1x * v1x + v1y * v1y)) / denom
        if 0.0 <= teq <= length:
            cand[ncand] = teq
            ncand += 1

    best = INF
    for k in range(ncand):
        t = cand[k]
        x = ax + t * ex
        y = ay + t * ey
        d1 = (x - c1x) ** 2 + (y - c1y) ** 2
        d2 = (x - c2x) ** 2 + (y - c2y) ** 2
        g = math.sqrt(max(d1, d2))
        if g < best:
            best = g
    return best


@njit(cache=True)
def _activation(c1x, c1y, c2x, c2y, xmin, xmax, ymin, ymax):
    """Smallest r with B(c1,r), B(c2,r) and the rectangle all meeting.

    Equals min over x in rect of max(|x-c1|, |x-c2|): the midpoint value
    if the midpoint lies inside, otherwise (the minimized function being
    convex) the minimum over the four boundary edges.
    """
    mx = 0.5 * (c1x + c2x)
    my = 0.5 * (c1y + c2y)
    if xmin <= mx <= xmax and ymin <= my <= ymax:
        dx = c1x - c2x
        dy = c1y - c2y
        return 0.5 * math.sqrt(dx * dx + dy * dy)
    best = _seg_minmax(c1x, c1y, c2x, c2y, xmin, ymin, xmax, ymin)
    b = _seg_minmax(c1x, c1y, c2x, c2y, xmax, ymin, xmax, ymax)
    if b < best:
        best = b
    b = _seg_minmax(c1x, c1y, c2x, c2y, xmax, ymax, xmin, ymax)
    if b < best:
        best = b
    b = _seg_minmax(c1x, c1y, c2x, c2y, xmin, ymax, xmin, ymin)
    if b < best:
        best = b
    return best


@njit(cache=True, inline="always")
def _side_dist(px, py, axis, lo, qxmin, qxmax, qymin, qymax):
    """Distance from a point to one full side of the query rectangle.

    axis 0: the side is vertical, at x = qxmin (lo=True) or x = qxmax.
    axis 1: the side is horizontal, at y = qymin (lo=True) or y = qymax.
    """
    if axis == 0:
        s = qxmin if lo else qxmax
        dx = px - s
        if py < qymin:
            dy = qymin - py
        elif py > qymax:
            dy = py - qymax
        else:
            dy = 0.0
    else:
        s = qymin if lo else qymax
        dx = py - s
        if px < qxmin:
            dy = qxmin - px
        elif px > qxmax:
            dy = px - qxmax
        else:
            dy = 0.0
    return math.sqrt(dx * dx + dy * dy)


# ======================================================================
# union-find
# ======================================================================

@njit(cache=True, inline="always")
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True, inline="always")
def _union(parent, size, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return False
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]
    return True


# ======================================================================
# crossing decision
# ======================================================================

@njit(cache=True, inline="always")
def _cell_index(x, x0, cell, ncells):
    """Clamped hash cell of coordinate x; must match the python builder.

    Clamping projects out-of-window points onto the edge cells; it only
    shrinks index differences, so pairs within one cell size still land
    in Chebyshev-adjacent cells and the 3x3 scan stays exhaustive.
    """
    c = int(math.floor((x - x0) / cell))
    if c < 0:
        c = 0
    elif c > ncells - 1:
        c = ncells - 1
    return c


@njit(cache=True)
def crossing_kernel(xs, ys, starts, ncx, ncy, cell, hx0, hy0, r,
                    qxmin, qxmax, qymin, qymax, axis):
    """True iff radius-r discs at the given centers cross the rectangle.

    Two discs are adjacent within the rectangle iff their activation
    radius is <= r; a disc reaches a side iff its center is within r of
    that side segment.  Union-find over centers plus two virtual side
    nodes then decides the event exactly.
    """
    m = xs.shape[0]
    left = m
    right = m + 1
    parent = np.arange(m + 2, dtype=np.int64)
    size = np.ones(m + 2, dtype=np.int64)
    r2x4 = 4.0 * r * r

    for i in range(m):
        if _side_dist(xs[i], ys[i], axis, True, qxmin, qxmax, qymin, qymax) <= r:
            _union(parent, size, i, left)
        if _side_dist(xs[i], ys[i], axis, False, qxmin, qxmax, qymin, qymax) <= r:
            _union(parent, size, i, right)

    for i in range(m):
        cx = _cell_index(xs[i], hx0, cell, ncx)
        cy = _cell_index(ys[i], hy0, cell, ncy)
        for dx in range(-1, 2):
            nx_ = cx + dx
            if nx_ < 0 or nx_ >= ncx:
                continue
            for dy in range(-1, 2):
                ny_ = cy + dy
                if ny_ < 0 or ny_ >= ncy:
                    continue
                key = nx_ * ncy + ny_
                for j in range(starts[key], starts[key + 1]):
                    if j <= i:
                        continue
                    ddx = xs[j] - xs[i]
                    ddy = ys[j] - ys[i]
                    if ddx * ddx + ddy * ddy > r2x4:
                        continue
                    if _activation(xs[i], ys[i], xs[j], ys[j],
                                   qxmin, qxmax, qymin, qymax) <= r:
                        _union(parent, size, i, j)

    return _find(parent, left) == _find(parent, right)


@njit(cache=True)
def pair_edges(xs, ys, starts, ncx, ncy, cell, hx0, hy0, cap,
               qxmin, qxmax, qymin, qymax, ei, ej, ew, count_only):
    """Enumerate center pairs with activation radius <= cap.

    With count_only=True just counts (passing size-0 outputs); a second
    call with arrays of that size fills them in the same order.
    """
    m = xs.shape[0]
    cap2x4 = 4.0 * cap * cap
    k = 0
    for i in range(m):
        cx = _cell_index(xs[i], hx0, cell, ncx)
        cy = _cell_index(ys[i], hy0, cell, ncy)
        for dx in range(-1, 2):
            nx_ = cx + dx
            if nx_ < 0 or nx_ >= ncx:
                continue
            for dy in range(-1, 2):
                ny_ = cy + dy
                if ny_ < 0 or ny_ >= ncy:
                    continue
                key = nx_ * ncy + ny_
                for j in range(starts[key], starts[key + 1]):
                    if j <= i:
                        continue
                    ddx = xs[j] - xs[i]
                    ddy = ys[j] - ys[i]
                    if ddx * ddx + ddy * ddy > cap2x4:
                        continue
                    act = _activation(xs[i], ys[i], xs[j], ys[j],
                                      qxmin, qxmax, qymin, qymax)
                    if act <= cap:
                        if not count_only:
                            ei[k] = i
                            ej[k] = j
                            ew[k] = act
                        k += 1
    return k


@njit(cache=True)
def kruskal_bottleneck(order, ei, ej, ew, m):
    """Sweep edges in ascending weight; stop when the side nodes join.

    Nodes 0..m-1 are centers, m and m+1 the virtual sides.  Returns the
    connecting weight (inf if the sides never join) plus the tree edges
    used, for witness reconstruction.
    """
    left = m
    right = m + 1
    parent = np.arange(m + 2, dtype=np.int64)
    size = np.ones(m + 2, dtype=np.int64)
    used = np.empty(order.shape[0], dtype=np.int64)
    nused = 0
    for kk in range(order.shape[0]):
        k = order[kk]
        if _union(parent, size, ei[k], ej[k]):
            used[nused] = k
            nused += 1
            if _find(parent, left) == _find(parent, right):
                return ew[k], used[:nused]
    return INF, used[:nused]


# ======================================================================
# grid kernels
# ======================================================================

@njit(cache=True)
def stamp_coverage(mask, nx, ny, x0, y0, h, cxs, cys, radius):
    """Set mask[ix*ny+iy] = 1 where the node lies within radius of a center.

    Exact at node positions: per center, per x-column, the covered
    y-interval has a closed form.
    """
    r2 = radius * radius
    for k in range(cxs.shape[0]):
        cx = cxs[k]
        cy = cys[k]
        ix_lo = int(math.ceil((cx - radius - x0) / h))
        ix_hi = int(math.floor((cx + radius - x0) / h))
        if ix_lo < 0:
            ix_lo = 0
        if ix_hi > nx - 1:
            ix_hi = nx - 1
        for ix in range(ix_lo, ix_hi + 1):
            dx = x0 + ix * h - cx
            rem = r2 - dx * dx
            if rem < 0.0:
                continue
            half = math.sqrt(rem)
            iy_lo = int(math.ceil((cy - half - y0) / h))
            iy_hi = int(math.floor((cy + half - y0) / h))
            if iy_lo < 0:
                iy_lo = 0
            if iy_hi > ny - 1:
                iy_hi = ny - 1
            base = ix * ny
            for iy in range(iy_lo, iy_hi + 1):
                mask[base + iy] = 1


@njit(cache=True)
def nearest_center_dist(nx, ny, gx0, gy0, h,
                        xs, ys, starts, ncx, ncy, cell, hx0, hy0):
    """Distance from every grid node to the nearest center (inf if none).

    Expanding Chebyshev-ring search over the center hash: points in the
    ring at index rho lie at least (rho-1)*cell away, so the scan stops
    as soon as that bound exceeds the best hit.
    """
    out = np.empty(nx * ny, np.float64)
    max_ring = ncx + ncy + 2
    for ix in range(nx):
        px = gx0 + ix * h
        ccx = int(math.floor((px - hx0) / cell))
        for iy in range(ny):
            py = gy0 + iy * h
            ccy = int(math.floor((py - hy0) / cell))
            best2 = INF
            ring = 0
            while ring <= max_ring:
                if ring > 0:
                    lb = (ring - 1) * cell
                    if best2 <= lb * lb:
                        break
                for cx in range(ccx - ring, ccx + ring + 1):
                    if cx < 0 or cx >= ncx:
                        continue
                    on_x_edge = cx == ccx - ring or cx == ccx + ring
                    for cy in range(ccy - ring, ccy + ring + 1):
                        if cy < 0 or cy >= ncy:
                            continue
                        if not on_x_edge and cy != ccy - ring and cy != ccy + ring:
                            continue
                        key = cx * ncy + cy
                        for k in range(starts[key], starts[key + 1]):
                            dx = xs[k] - px
                            dy = ys[k] - py
                            d2 = dx * dx + dy * dy
                            if d2 < best2:
                                best2 = d2
                ring += 1
            out[ix * ny + iy] = math.sqrt(best2) if best2 < INF else INF
    return out


@njit(cache=True)
def dijkstra_maximin(values, nx, ny, axis):
    """Best bottleneck value over 8-connected paths joining opposite sides.

    Max-heap search on path minima: pop the largest tentative value,
    settle it, relax neighbors with min(path value, node value).  The
    first settled node on the far side carries the answer.
    """
    n = nx * ny
    best = np.full(n, -1.0, np.float64)
    done = np.zeros(n, np.uint8)
    # each node settles once and relaxes <= 8 neighbors, so 9n bounds pushes
    cap = 9 * n + 16
    hv = np.empty(cap, np.float64)
    hidx = np.empty(cap, np.int64)
    hn = 0

    if axis == 0:
        for iy in range(ny):
            best[iy] = values[iy]
    else:
        for ix in range(nx):
            best[ix * ny] = values[ix * ny]

    for idx in range(n):
        if best[idx] >= 0.0:
            hv[hn] = best[idx]
            hidx[hn] = idx
            k = hn
            hn += 1
            while k > 0:
                p = (k - 1) >> 1
                if hv[p] < hv[k]:
                    hv[p], hv[k] = hv[k], hv[p]
                    hidx[p], hidx[k] = hidx[k], hidx[p]
                    k = p
                else:
                    break

    while hn > 0:
        v = hv[0]
        idx = hidx[0]
        hn -= 1
        hv[0] = hv[hn]
        hidx[0] = hidx[hn]
        k = 0
        while True:
            l = 2 * k + 1
            if l >= hn:
                break
            c = l
            rr = l + 1
            if rr < hn and hv[rr] > hv[l]:
                c = rr
            if hv[c] > hv[k]:
                hv[c], hv[k] = hv[k], hv[c]
                hidx[c], hidx[k] = hidx[k], hidx[c]
                k = c
            else:
                break

        if done[idx] or v < best[idx]:
            continue
        done[idx] = 1
        ix = idx // ny
        iy = idx % ny
        if (axis == 0 and ix == nx - 1) or (axis == 1 and iy == ny - 1):
            return v

        for dx in range(-1, 2):
            jx = ix + dx
            if jx < 0 or jx >= nx:
                continue
            for dy in range(-1, 2):
                if dx == 0 and dy == 0:
                    continue
                jy = iy + dy
                if jy < 0 or jy >= ny:
                    continue
                jdx = jx * ny + jy
                if done[jdx]:
                    continue
                cand = v if values[jdx] > v else values[jdx]
                if cand > best[jdx]:
                    best[jdx] = cand
                    hv[hn] = cand
                    hidx[hn] = jdx
                    k = hn
                    hn += 1
                    while k > 0:
                        p = (k - 1) >> 1
                        if hv[p] < hv[k]:
                            hv[p], hv[k] = hv[k], hv[p]
                            hidx[p], hidx[k] = hidx[k], hidx[p]
                            k = p
                        else:
                            break
    return -1.0


@njit(cache=True)
def maximin_desc_union(order, values, nx, ny, axis):
    """Same maximin as dijkstra_maximin via a descending-threshold sweep.

    Activate cells in decreasing value order, merging with active
    neighbors; the value being activated when the two sides first connect
    is the maximin.  One argsort plus a linear pass, which beats the heap
    on multi-million-cell grids.
    """
    n = nx * ny
    left = n
    right = n + 1
    parent = np.arange(n + 2, dtype=np.int64)
    size = np.ones(n + 2, dtype=np.int64)
    active = np.zeros(n, np.uint8)

    for t in range(order.shape[0]):
        idx = order[t]
        active[idx] = 1
        ix = idx // ny
        iy = idx % ny
        for dx in range(-1, 2):
            jx = ix + dx
            if jx < 0 or jx >= nx:
                continue
            for dy in range(-1, 2):
                if dx == 0 and dy == 0:
                    continue
                jy = iy + dy
                if jy < 0 or jy >= ny:
                    continue
                jdx = jx * ny + jy
                if active[jdx]:
                    _union(parent, size, idx, jdx)
        if axis == 0:
            if ix == 0:
                _union(parent, size, idx, left)
            if ix == nx - 1:
                _union(parent, size, idx, right)
        else:
            if iy == 0:
                _union(parent, size, idx, left)
            if iy == ny - 1:
                _union(parent, size, idx, right)
        if _find(parent, left) == _find(parent, right):
            return values[idx]
    return -1.0


def warmup() -> None:
    """Trigger compilation of every kernel on tiny inputs."""
    xs = np.array([0.0, 1.0])
    ys = np.array([0.0, 0.0])
    starts = np.array([0, 2], dtype=np.int64)
    crossing_kernel(xs, ys, starts, 1, 1, 10.0, -5.0, -5.0, 1.0,
                    -1.0, 1.0, -1.0, 1.0, 0)
    empty_i = np.empty(0, np.int64)
    empty_w = np.empty(0, np.float64)
    cnt = pair_edges(xs, ys, starts, 1, 1, 10.0, -5.0, -5.0, 2.0,
                     -1.0, 1.0, -1.0, 1.0, empty_i, empty_i, empty_w, True)
    ei = np.empty(cnt, np.int64)
    ej = np.empty(cnt, np.int64)
    ew = np.empty(cnt, np.float64)
    pair_edges(xs, ys, starts, 1, 1, 10.0, -5.0, -5.0, 2.0,
               -1.0, 1.0, -1.0, 1.0, ei, ej, ew, False)
    kruskal_bottleneck(np.argsort(ew), ei, ej, ew, 2)
    mask = np.zeros(9, np.uint8)
    stamp_coverage(mask, 3, 3, -1.0, -1.0, 1.0, xs, ys, 1.0)
    nearest_center_dist(2, 2, 0.0, 0.0, 0.5, xs, ys, starts,
                        1, 1, 10.0, -5.0, -5.0)
    vals = np.arange(9, dtype=np.float64)
    dijkstra_maximin(vals, 3, 3, 0)
    maximin_desc_union(np.argsort(vals)[::-1].copy(), vals, 3, 3, 0)
