"""Combinatorial horoballs over abelian base graphs.

A horoball vertex is a pair (base_point, depth).  Depth 0 is the rim, where
the edges are exactly the base-graph edges; at depth k > 0 two vertices are
adjacent when their base distance is at most 2^k, and every vertex has
vertical edges one level up and (above the rim) one level down.

Base graphs are Cayley graphs of Z^rank x prod Z/d_j with the standard
generators: points are flat tuples (free coordinates, then one cyclic
coordinate per torsion factor), and the metric is the L1 metric plus cyclic
distances.  An optional box bound materializes only a finite region; queries
that would leave it raise RegionError.
"""


class RegionError(Exception):
    """A query left the materialized region of a base graph."""


class PathInfeasible(Exception):
    """No ball-avoiding path exists (virtually cyclic obstruction)."""


def _cyc(t, m):
    t %= m
    return min(t, m - t)


class LatticeBase:
    """Z^rank x prod(Z/d) with standard generators, optionally boxed."""

    def __init__(self, rank, torsion_orders=(), box=None):
        if rank < 0 or any(d < 2 for d in torsion_orders):
            raise ValueError("rank must be >= 0 and torsion orders >= 2")
        self.rank = rank
        self.torsion_orders = tuple(torsion_orders)
        self.box = box
        self._offset_cache = {}

    @property
    def dim(self):
        return self.rank + len(self.torsion_orders)

    def check_point(self, p):
        if len(p) != self.dim:
            raise ValueError(f"point {p} has wrong dimension")
        if self.box is not None and any(abs(x) > self.box for x in p[:self.rank]):
            raise RegionError(f"point {p} outside the materialized box")

    def in_box(self, p):
        return self.box is None or all(abs(x) <= self.box for x in p[:self.rank])

    def canon(self, p):
        free = tuple(p[:self.rank])
        tors = tuple(t % d for t, d in zip(p[self.rank:], self.torsion_orders))
        return free + tors

    def dist(self, u, v):
        d = sum(abs(a - b) for a, b in zip(u[:self.rank], v[:self.rank]))
        for a, b, m in zip(u[self.rank:], v[self.rank:], self.torsion_orders):
            d += _cyc(a - b, m)
        return d

    def origin(self):
        return (0,) * self.dim

    def norm(self, p):
        return self.dist(p, self.origin())

    def _offsets(self, radius):
        if radius in self._offset_cache:
            return self._offset_cache[radius]
        parts = [((), 0)]
        for _ in range(self.rank):
            parts = [(f + (x,), c + abs(x))
                     for f, c in parts for x in range(-radius, radius + 1)
                     if c + abs(x) <= radius]
        for m in self.torsion_orders:
            parts = [(f + (x,), c + _cyc(x, m))
                     for f, c in parts for x in range(m)
                     if c + _cyc(x, m) <= radius]
        out = sorted(f for f, c in parts if c > 0)
        self._offset_cache[radius] = out
        return out

    def neighbors_within(self, p, radius):
        """All points w with 0 < d(p, w) <= radius, inside the box."""
        self.check_point(p)
        out = []
        for off in self._offsets(radius):
            w = self.canon(tuple(a + b for a, b in zip(p, off)))
            if self.in_box(w):
                out.append(w)
        return out

    def far_point(self, p, distance, away_from=None):
        """A point at base distance exactly `distance` from p, reached along
        one coordinate axis; with `away_from` given, the axis and sign also
        move away from that point."""
        self.check_point(p)
        if self.rank == 0:
            raise RegionError("finite base graph has no far points")
        axis, sign = 0, 1
        if away_from is not None:
            diffs = [p[i] - away_from[i] for i in range(self.rank)]
            axis = max(range(self.rank), key=lambda i: abs(diffs[i]))
            sign = 1 if diffs[axis] >= 0 else -1
        tries = [(axis, sign), (axis, -sign)]
        tries += [(i, s) for i in range(self.rank) for s in (1, -1) if i != axis]
        for ax, s in tries:
            w = list(p)
            w[ax] += s * distance
            if self.in_box(tuple(w)):
                return tuple(w)
        raise RegionError(
            f"no far point at distance {distance} inside the materialized box")

    def step_toward(self, u, v):
        """A neighbor of u one step closer to v: free coordinates first, then
        torsion moved the short way (ties resolved upward)."""
        for i in range(self.rank):
            if u[i] != v[i]:
                w = list(u)
                w[i] += 1 if v[i] > u[i] else -1
                return tuple(w)
        for j, m in enumerate(self.torsion_orders):
            i = self.rank + j
            if u[i] != v[i]:
                t = (v[i] - u[i]) % m
                w = list(u)
                w[i] = (u[i] + (1 if t <= m - t else -1)) % m
                return tuple(w)
        raise ValueError("step_toward called with equal points")

    def walk(self, u, v):
        """A geodesic from u to v as a vertex list."""
        path = [u]
        while path[-1] != v:
            path.append(self.step_toward(path[-1], v))
        return path

    def interpolate(self, u, v, step):
        """Waypoints of a geodesic from u to v with hops of base distance at
        most `step`: exactly ceil(d(u,v)/step) hops."""
        if step < 1:
            raise ValueError("step must be >= 1")
        path = self.walk(u, v)
        way = path[::step]
        if way[-1] != v:
            way.append(v)
        return way


# ---------------------------------------------------------------------------
# implicit adjacency and the exact metric


def neighbors(v, base, max_depth=None):
    """Neighbors of the horoball vertex v = (point, depth), sorted."""
    p, d = v
    base.check_point(p)
    if d < 0:
        raise ValueError("depth must be >= 0")
    radius = 1 if d == 0 else (1 << d)
    out = [(w, d) for w in base.neighbors_within(p, radius)]
    if d > 0:
        out.append((p, d - 1))
    if max_depth is None or d + 1 <= max_depth:
        out.append((p, d + 1))
    return sorted(out)


def _levels(d1, d2, base_dist):
    """(level, horizontal_hops, cost) for every candidate level."""
    l = max(d1, d2)
    out = []
    while True:
        if base_dist == 0:
            h = 0
        elif l == 0:
            h = base_dist
        else:
            h = -(-base_dist // (1 << l))
        out.append((l, h, (l - d1) + (l - d2) + h))
        if (1 << l) >= base_dist:
            return out
        l += 1


def horoball_distance(x, y, base):
    """Exact graph distance: minimum over levels l >= both depths of
    (l - d1) + (l - d2) + ceil(base_dist / 2^l), with plain base distance at
    level 0."""
    (p1, d1), (p2, d2) = x, y
    return min(c for _, _, c in _levels(d1, d2, base.dist(p1, p2)))


def geodesic_level(x, y, base, short_horizontal=False):
    """The level the returned geodesic travels at: the smallest
    cost-minimizing level whose horizontal segment obeys the normal form
    (length <= 3 whenever the level is strictly below both endpoints).

    short_horizontal=True demands a horizontal segment of length <= 3
    outright; a minimizing level with that property always exists.
    """
    (p1, d1), (p2, d2) = x, y
    entries = _levels(d1, d2, base.dist(p1, p2))
    best = min(c for _, _, c in entries)
    for l, h, c in entries:
        if c != best:
            continue
        if h <= 3 or (not short_horizontal and l == max(d1, d2)):
            return l
    raise AssertionError("no normal-form level found")


def horoball_geodesic(x, y, base):
    """A geodesic from x to y in normal form: descending vertical segment,
    one horizontal segment, ascending vertical segment."""
    (p1, d1), (p2, d2) = x, y
    if x == y:
        return [x]
    level = geodesic_level(x, y, base)
    path = [(p1, d) for d in range(d1, level + 1)]
    if p1 != p2:
        step = 1 if level == 0 else (1 << level)
        path.extend((w, level) for w in base.interpolate(p1, p2, step)[1:])
    path.extend((p2, d) for d in range(level - 1, d2 - 1, -1))
    return path


def level_interpolate(u, v, level, base):
    """Horizontal path at the given depth: ceil(d(u,v)/2^level) edges."""
    step = 1 if level == 0 else (1 << level)
    return [(w, level) for w in base.interpolate(u, v, step)]


# ---------------------------------------------------------------------------
# sibling points


def sibling_point(p0, p1, k, base):
    """Given p0 at depth >= k > 0 and p1 at depth exactly k-1, produce p2 at
    depth k-1 with d(p0,p2) <= d(p0,p1) + 3 and Gromov product
    (p1.p2)_{p0} <= 3.

    Case analysis on the shape of the normal-form geodesic from p1 to p0:
    with two vertical segments, p2 sits vertically below p0; purely vertical
    or vertical-then-horizontal shapes route through a far point at base
    distance 3 * 2^depth(p0), which keeps p0 on a geodesic from p1 to p2 up
    to the short horizontal slack.
    """
    (b0, i), (b1, j) = p0, p1
    if not (k > 0 and i >= k and j == k - 1):
        raise ValueError("need depth(p0) >= k > 0 and depth(p1) == k-1")

    level = geodesic_level(p1, p0, base, short_horizontal=True)
    candidates = []
    if level > i:
        candidates.append((b0, k - 1))
    elif b0 == b1:
        candidates.append((base.far_point(b0, 3 * (1 << i)), k - 1))
    else:
        candidates.append((base.far_point(b1, 3 * (1 << i), away_from=b0), k - 1))
    candidates.append((base.far_point(b0, 3 * (1 << i), away_from=b1), k - 1))
    candidates.append((b0, k - 1))

    d01 = horoball_distance(p0, p1, base)
    for p2 in candidates:
        d02 = horoball_distance(p0, p2, base)
        d12 = horoball_distance(p1, p2, base)
        # both bounds, the product one in doubled form to stay integral
        if d02 <= d01 + 3 and d01 + d02 - d12 <= 6:
            return p2
    raise RuntimeError("sibling construction failed on every candidate")


# ---------------------------------------------------------------------------
# ball-avoiding paths in the base group


def _cyclic_arc(alpha, beta, m, avoid_zero=True):
    """Values visited walking from alpha to beta in Z/m a shortest way
    (alpha excluded, beta included); ties prefer the side avoiding zero."""
    up = (beta - alpha) % m
    down = (alpha - beta) % m
    if up < down:
        direction = 1
    elif down < up:
        direction = -1
    else:
        up_hits_zero = any((alpha + s) % m == 0 for s in range(1, up + 1))
        direction = -1 if (avoid_zero and up_hits_zero and beta != 0) else 1
    out = []
    cur = alpha
    while cur != beta:
        cur = (cur + direction) % m
        out.append(cur)
    return out


def _dedup(path):
    out = [path[0]]
    for p in path[1:]:
        if p != out[-1]:
            out.append(p)
    return out


def _stitch(prefix, suffix, base):
    u, v = prefix[-1], suffix[-1]
    if u == v:
        return _dedup(prefix + suffix[-2::-1])
    if base.dist(u, v) == 1:
        return _dedup(prefix + suffix[::-1])
    raise RuntimeError("route segments failed to meet")


def avoid_ball_path_abelian(a, b, r, base):
    """A path from a to b of length at most 3*d(a,b) avoiding the ball of
    radius r-1 about the identity (every vertex on it has norm >= r).

    Requires norm(a) >= r and norm(b) >= r.  For free rank >= 2 the
    construction always succeeds: same-sign coordinate reduction, torsion
    alignment away from zero, then the three-leg corner route.  For free
    rank 1 with torsion, the identity column is crossed at the torsion
    antipode when that clears the ball; otherwise PathInfeasible is raised
    (the virtually cyclic obstruction).
    """
    base.check_point(a)
    base.check_point(b)
    a, b = base.canon(a), base.canon(b)
    if r < 1:
        raise ValueError("r must be >= 1")
    if base.norm(a) < r or base.norm(b) < r:
        raise ValueError("endpoints must be at distance >= r from the identity")
    if a == b:
        return [a]
    if base.dist(a, b) == 1:
        return [a, b]
    if base.rank >= 2:
        path = _route_high_rank(a, b, r, base)
    elif base.rank == 1:
        path = _route_rank_one(a, b, r, base)
    else:
        raise PathInfeasible("finite (rank-0) abelian group: no room to route")
    for u, v in zip(path, path[1:]):
        if base.dist(u, v) != 1:
            raise RuntimeError("constructed route is not an edge path")
    if any(base.norm(p) < r for p in path):
        raise RuntimeError("constructed route entered the forbidden ball")
    if len(path) - 1 > 3 * base.dist(a, b):
        raise RuntimeError("constructed route exceeded the length budget")
    return path


def _unit(base, i, s):
    e = [0] * base.dim
    e[i] = s
    return tuple(e)


def _translate(base, p, e):
    return base.canon(tuple(x + y for x, y in zip(p, e)))


def _align_torsion(prefix, suffix, base):
    """Phase two: for each cyclic coordinate whose geodesic between the two
    current endpoints misses zero, move the endpoint with the smaller cyclic
    norm onto the other one's value, walking the zero-free side."""
    m = base.rank
    for j, mod in enumerate(base.torsion_orders):
        i = m + j
        u, v = prefix[-1], suffix[-1]
        alpha, beta = u[i], v[i]
        if alpha == beta:
            continue
        if _cyc(alpha - beta, mod) == _cyc(alpha, mod) + _cyc(beta, mod):
            continue
        if _cyc(alpha, mod) <= _cyc(beta, mod):
            side, target, start = prefix, beta, alpha
        else:
            side, target, start = suffix, alpha, beta
        for t in _cyclic_arc(start, target, mod):
            w = list(side[-1])
            w[i] = t
            side.append(base.canon(tuple(w)))


def _route_high_rank(a, b, r, base):
    m = base.rank
    prefix, suffix = [a], [b]

    # phase one: same-sign reduction.  Translate both ends one step away from
    # the identity along a shared-sign axis, then bring each end one step
    # toward the other along the translated geodesic; repeats shrink d by 2.
    while base.dist(prefix[-1], suffix[-1]) >= 2:
        u, v = prefix[-1], suffix[-1]
        same = [i for i in range(m) if u[i] * v[i] > 0]
        if not same:
            break
        i = same[0]
        e = _unit(base, i, 1 if u[i] > 0 else -1)
        u2 = _translate(base, u, e)
        v2 = _translate(base, v, e)
        prefix.append(u2)
        suffix.append(v2)
        a3 = base.step_toward(u2, v2)
        prefix.append(a3)
        if a3 != v2:
            suffix.append(base.step_toward(v2, a3))

    u, v = prefix[-1], suffix[-1]
    if u == v or base.dist(u, v) == 1:
        return _stitch(prefix, suffix, base)

    _align_torsion(prefix, suffix, base)
    u, v = prefix[-1], suffix[-1]
    if u == v or base.dist(u, v) == 1:
        return _stitch(prefix, suffix, base)

    # phase three: the corner route.  Flip free axes so u <= 0 <= v
    # coordinatewise, empty u into the last axis and v into the first, then
    # connect the two corners along the axes.
    sign = [1] * m
    for i in range(m):
        if u[i] > 0 or v[i] < 0:
            sign[i] = -1

    def flip(p):
        return tuple(x * s for x, s in zip(p[:m], sign)) + tuple(p[m:])

    tor = base.torsion_orders
    nt = len(tor)

    def clear_into(point, sink, sink_sign, order, emit):
        """Transfer every coordinate in `order` into axis `sink` one unit at
        a time: a sink move away from zero, then a source move toward zero.
        The norm never drops below the starting norm."""
        cur = list(point)
        for i in order:
            while (cur[i] != 0) if i < m else (_cyc(cur[i], tor[i - m]) > 0):
                cur[sink] += sink_sign
                emit(tuple(cur))
                if i < m:
                    cur[i] += 1 if cur[i] < 0 else -1
                else:
                    t = cur[i] % tor[i - m]
                    cur[i] = (cur[i] + (1 if t > tor[i - m] - t else -1)) % tor[i - m]
                emit(tuple(cur))
        return cur

    fu, fv = flip(u), flip(v)
    mid = []

    def emit_u(p):
        mid.append(base.canon(flip(p)))

    # torsion coordinates already shared by both ends stay frozen: clearing
    # them would cost edges without shrinking d(u, v)
    moving = [m + j for j in range(nt) if fu[m + j] != fv[m + j]]
    cur = clear_into(fu, m - 1, -1, list(range(m - 1)) + moving, emit_u)
    sa = -cur[m - 1]

    back = []
    curv = clear_into(fv, 0, +1, list(range(1, m)) + moving,
                      lambda p: back.append(base.canon(flip(p))))
    sb = curv[0]

    # across: raise axis 0 to sb, then lift axis m-1 back to 0
    for _ in range(sb - cur[0]):
        cur[0] += 1
        emit_u(tuple(cur))
    for _ in range(sa):
        cur[m - 1] += 1
        emit_u(tuple(cur))

    corner_v = base.canon(flip(tuple(curv)))
    path = prefix + mid
    if back:
        if path[-1] != corner_v:
            raise RuntimeError("corner route mismatch")
        path = path + back[-2::-1] + [base.canon(flip(tuple(fv)))]
    return _dedup(path + suffix[::-1])


def _route_rank_one(a, b, r, base):
    tor = base.torsion_orders
    xa, xb = a[0], b[0]
    if xa * xb >= 0:
        # one-sided: align torsion on the zero-free side, then walk the free
        # coordinate at the aligned torsion value
        prefix, suffix = [a], [b]
        for j, mod in enumerate(tor):
            i = 1 + j
            u, v = prefix[-1], suffix[-1]
            if u[i] == v[i]:
                continue
            if _cyc(u[i], mod) <= _cyc(v[i], mod):
                side, start, target = prefix, u[i], v[i]
            else:
                side, start, target = suffix, v[i], u[i]
            for t in _cyclic_arc(start, target, mod):
                w = list(side[-1])
                w[i] = t
                side.append(base.canon(tuple(w)))
        while prefix[-1][0] != suffix[-1][0]:
            w = list(prefix[-1])
            w[0] += 1 if suffix[-1][0] > w[0] else -1
            prefix.append(base.canon(tuple(w)))
        return _stitch(prefix, suffix, base)

    if not tor:
        raise PathInfeasible("infinite cyclic base: the identity separates")
    cmax = sum(mod // 2 for mod in tor)
    if cmax < r:
        raise PathInfeasible("free rank 1: the identity column blocks every crossing")

    # cross the x = 0 column at a torsion point of norm >= r: first raise
    # every coordinate whose cyclic norm is below b's to b's value (walking
    # the zero-free arc), then climb further only as much as the crossing
    # needs, cross, and come back down to b's values on b's side
    prefix = [a]
    for j, mod in enumerate(tor):
        i = 1 + j
        if _cyc(prefix[-1][i], mod) < _cyc(b[i], mod):
            for t in _cyclic_arc(prefix[-1][i], b[i], mod):
                w = list(prefix[-1])
                w[i] = t
                prefix.append(base.canon(tuple(w)))

    def torsion_norm(p):
        return sum(_cyc(p[1 + j], mod) for j, mod in enumerate(tor))

    for j, mod in enumerate(tor):
        i = 1 + j
        while torsion_norm(prefix[-1]) < r and _cyc(prefix[-1][i], mod) < mod // 2:
            cur = prefix[-1][i]
            nxt = (cur + 1) % mod
            if _cyc(nxt, mod) <= _cyc(cur, mod):
                nxt = (cur - 1) % mod
            w = list(prefix[-1])
            w[i] = nxt
            prefix.append(base.canon(tuple(w)))
    while prefix[-1][0] != xb:
        w = list(prefix[-1])
        w[0] += 1 if xb > prefix[-1][0] else -1
        prefix.append(base.canon(tuple(w)))
    for j, mod in enumerate(tor):
        i = 1 + j
        for t in _cyclic_arc(prefix[-1][i], b[i], mod):
            w = list(prefix[-1])
            w[i] = t
            prefix.append(base.canon(tuple(w)))
    return _dedup(prefix)
