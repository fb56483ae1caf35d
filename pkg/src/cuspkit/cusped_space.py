"""The cusped space: a Cayley graph with a combinatorial horoball glued onto
every peripheral coset, as one implicit graph.

Vertices are sortable tuples:
    ("c", element_key)                       Cayley vertex
    ("h", i, transversal_key, coords, depth) horoball vertex, depth >= 1
Depth-0 horoball vertices are always normalized to Cayley vertices, so every
vertex has a single canonical form.
"""

from dataclasses import dataclass
from fractions import Fraction
from collections import deque

from . import horoball
from .horoball import LatticeBase, RegionError
from .presentations import FreeProductOracle, StructureError


class ResourceBudget(Exception):
    """A computation exceeded its configured budget."""

    def __init__(self, message, attained=None):
        super().__init__(message)
        self.attained = attained


# ---------------------------------------------------------------------------
# the constants ledger


@dataclass(frozen=True)
class ConstantsLedger:
    delta: int
    C: int
    M: int
    k: int
    K: int
    R_slope: int
    R_intercept: int
    K1: object = None
    certified: bool = False
    toy: bool = False

    def R(self, n):
        return self.R_slope * n + self.R_intercept

    def forbidden_radius(self, m, eps):
        return m - self.C - 45 * self.delta + 3 * eps

    def as_dict(self):
        out = {
            "delta": str(self.delta), "C": str(self.C), "M": str(self.M),
            "k": str(self.k), "K": str(self.K),
            "R_slope": str(self.R_slope), "R_intercept": str(self.R_intercept),
            "certified": self.certified, "toy": self.toy,
        }
        if self.K1 is not None:
            out["K1"] = str(self.K1)
        return out


def compute_constants(delta, K_iso=None, certified=False):
    """Exact big-integer ledger: C = 3d, M = 6(C+45d)+2d+3, k = 2M,
    K = 3*2^(2M+3)+M+3, R(n) = 4(n+M)+3k+50d+3, and K1 = 3*K_iso*(2*K_iso+1)
    when an isoperimetric constant is supplied."""
    if not isinstance(delta, int) or delta < 1:
        raise ValueError("delta must be a positive integer")
    C = 3 * delta
    M = 6 * (C + 45 * delta) + 2 * delta + 3
    k = 2 * M
    K = 3 * (1 << (2 * M + 3)) + M + 3
    intercept = 4 * M + 3 * k + 50 * delta + 3
    K1 = 3 * K_iso * (2 * K_iso + 1) if K_iso is not None else None
    return ConstantsLedger(delta, C, M, k, K, 4, intercept, K1,
                           certified=certified, toy=False)


def toy_constants(mapping):
    """A deliberately small ledger for end-to-end runs: any field may be
    overridden, the rest are derived from delta.  Always uncertified."""
    delta = mapping.get("delta", 1)
    derived = compute_constants(delta)
    r_map = mapping.get("R", {})
    return ConstantsLedger(
        delta,
        mapping.get("C", derived.C),
        mapping.get("M", derived.M),
        mapping.get("k", derived.k),
        mapping.get("K", derived.K),
        r_map.get("slope", derived.R_slope),
        r_map.get("intercept", derived.R_intercept),
        mapping.get("K1"),
        certified=False,
        toy=True,
    )


# ---------------------------------------------------------------------------
# implicit spaces


def vertex_depth(v):
    return 0 if v[0] == "c" else v[4]


class CuspedSpace:
    """Implicit cusped graph of a relative structure.

    The ambient group must either have no parabolics, or be a declared free
    product of abelian groups with every parabolic equal to a factor (the
    supported class for horoball gluing; the coset split is the syllable
    decomposition there).
    """

    def __init__(self, structure, max_depth=None):
        self.structure = structure
        self.oracle = structure.oracle
        self.max_depth = max_depth
        self.v0 = ("c", self.oracle.identity_key)
        self.bases = []
        self._factor_of_parabolic = []
        for p in structure.parabolics:
            if p.rank < 1:
                raise StructureError(
                    "finite parabolic: drop it before building the cusped space")
            self.bases.append(LatticeBase(p.rank, p.torsion_orders))
            self._factor_of_parabolic.append(self._match_factor(p))

    def _match_factor(self, parabolic):
        if not isinstance(self.oracle, FreeProductOracle):
            raise StructureError(
                "horoball gluing needs a free-product-of-abelians oracle "
                "with each parabolic equal to a factor")
        members = {g for g in range(1, self.oracle.n_gens + 1)}
        for f in range(len(self.oracle.factors)):
            fac = {g for g in members if self.oracle.factor_of_gen[g - 1] == f}
            if fac == set(parabolic.gen_indices):
                return f
        raise StructureError("parabolic is not a free-product factor")

    def coset_split(self, key, i):
        """key = t * p with t the canonical transversal representative of the
        coset key*P_i and p in parabolic coordinates."""
        p = self.structure.parabolics[i]
        f = self._factor_of_parabolic[i]
        t_key, fac_key = self.oracle.strip_trailing_factor(key, f)
        word = self.oracle.factors[f].key_word(fac_key)
        table = self.oracle.local_to_global[f]
        local = tuple(
            (1 if table[x] > 0 else -1) * (p.gen_indices.index(abs(table[x])) + 1)
            for x in word)
        free, tors = p.coords_of_local_word(local)
        return t_key, free + tors

    def coset_element(self, i, t_key, coords):
        p = self.structure.parabolics[i]
        local = p.local_word_of_coords(coords[:p.rank], coords[p.rank:])
        return self.oracle.mul(t_key, self.oracle.normal_key(p.ambient_word(local)))

    def neighbors(self, v):
        out = []
        if v[0] == "c":
            key = v[1]
            for g in range(1, self.structure.presentation.generator_count + 1):
                for letter in (g, -g):
                    w = self.oracle.mul_gen(key, letter)
                    if w != key:
                        out.append(("c", w))
            for i in range(len(self.structure.parabolics)):
                t_key, coords = self.coset_split(key, i)
                out.append(("h", i, t_key, coords, 1))
        else:
            _, i, t_key, coords, depth = v
            base = self.bases[i]
            for w in base.neighbors_within(coords, 1 << depth):
                out.append(("h", i, t_key, w, depth))
            if depth > 1:
                out.append(("h", i, t_key, coords, depth - 1))
            else:
                out.append(("c", self.coset_element(i, t_key, coords)))
            if self.max_depth is None or depth + 1 <= self.max_depth:
                out.append(("h", i, t_key, coords, depth + 1))
        return sorted(set(out))

    def parabolic_base(self, i):
        return self.bases[i]


class HoroballSpace:
    """A single horoball over an abelian base graph, as a standalone space
    (used to exercise the pair predicates on a space with one-point-boundary
    behaviour).  The base point v0 is the rim vertex over the origin."""

    def __init__(self, base, max_depth=None):
        self.base = base
        self.max_depth = max_depth
        self.v0 = (base.origin(), 0)

    def neighbors(self, v):
        return horoball.neighbors(v, self.base, max_depth=self.max_depth)

    def exact_distance(self, x, y):
        if self.max_depth is None:
            return horoball.horoball_distance(x, y, self.base)
        level = horoball.geodesic_level(x, y, self.base)
        if level > self.max_depth:
            return None
        return horoball.horoball_distance(x, y, self.base)


# ---------------------------------------------------------------------------
# balls and distances


class BallGraph:
    """Materialized BFS ball: exact center distances and the induced
    adjacency, in a deterministic (sorted-key) order."""

    def __init__(self, center, radius, dist, adjacency):
        self.center = center
        self.radius = radius
        self.dist = dist
        self.adjacency = adjacency
        self.vertices = tuple(sorted(dist))

    def __contains__(self, v):
        return v in self.dist

    def __len__(self):
        return len(self.dist)

    def bfs_from(self, start, allowed=None, bound=None):
        """BFS distances inside the ball subgraph, optionally restricted to
        vertices passing `allowed` and cut off beyond `bound`."""
        if start not in self.dist:
            raise KeyError("start vertex not in the ball")
        out = {start: 0}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            d = out[v]
            if bound is not None and d >= bound:
                continue
            for w in self.adjacency[v]:
                if w in out or (allowed is not None and not allowed(w)):
                    continue
                out[w] = d + 1
                queue.append(w)
        return out


def build_ball(space, radius, max_vertices=None):
    """BFS ball around space.v0 with exact distances; raises ResourceBudget
    (reporting the attained radius) if max_vertices is exceeded."""
    v0 = space.v0
    dist = {v0: 0}
    queue = deque([v0])
    nbrs = {}
    while queue:
        v = queue.popleft()
        d = dist[v]
        if d == radius:
            continue
        ns = space.neighbors(v)
        nbrs[v] = ns
        for w in ns:
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
                if max_vertices is not None and len(dist) > max_vertices:
                    raise ResourceBudget(
                        f"ball budget of {max_vertices} vertices exceeded",
                        attained=d)
    adjacency = {}
    for v in dist:
        ns = nbrs.get(v)
        if ns is None:
            ns = space.neighbors(v)
        adjacency[v] = tuple(w for w in ns if w in dist)
    return BallGraph(v0, radius, dist, adjacency)


def distance(space, x, y, bound):
    """Exact d(x, y) when it is <= bound, else None.  Bidirectional BFS over
    the implicit graph."""
    if x == y:
        return 0
    front_x, front_y = {x: 0}, {y: 0}
    layer_x, layer_y = [x], [y]
    rx = ry = 0
    while rx + ry < bound:
        if len(layer_x) <= len(layer_y):
            side, other, layer = front_x, front_y, layer_x
            rx += 1
            r = rx
        else:
            side, other, layer = front_y, front_x, layer_y
            ry += 1
            r = ry
        nxt = []
        best = None
        for v in layer:
            for w in space.neighbors(v):
                if w in other:
                    cand = r + other[w]
                    if best is None or cand < best:
                        best = cand
                if w not in side:
                    side[w] = r
                    nxt.append(w)
        if best is not None and best <= bound:
            return best
        if not nxt:
            return None
        if side is front_x:
            layer_x = nxt
        else:
            layer_y = nxt
    return None


def gromov_product(space, x, y, z, bound):
    """(x . y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2 as an exact Fraction."""
    dxz = distance(space, x, z, bound)
    dyz = distance(space, y, z, bound)
    dxy = distance(space, x, y, bound)
    if None in (dxz, dyz, dxy):
        raise ResourceBudget(f"a pairwise distance exceeded the bound {bound}")
    return Fraction(dxz + dyz - dxy, 2)


def thick_part_member(v, k):
    """True iff the vertex sits at depth <= k (the k-thick part)."""
    return vertex_depth(v) <= k


# ---------------------------------------------------------------------------
# hyperbolicity estimation


def estimate_delta(space, radius, sample_count=0, seed=0, max_vertices=None):
    """Maximum four-point defect over quadruples of ball vertices:
    max over (w,x,y,z) of min((x.z)_w, (y.z)_w) - (x.y)_w.

    Exhaustive when sample_count == 0, else over sampled quadruples (seeded).
    Distances are space.exact_distance when available, otherwise shortest
    paths inside the ball subgraph.  The estimate is a witness lower bound
    for delta, never a certificate: certified is always False.
    """
    import numpy as np

    ball = build_ball(space, radius, max_vertices=max_vertices)
    verts = ball.vertices
    n = len(verts)
    exact = getattr(space, "exact_distance", None)
    D = np.zeros((n, n), dtype=np.int32)
    filled = False
    if exact is not None:
        filled = True
        for i, v in enumerate(verts):
            for j in range(i + 1, n):
                d = exact(v, verts[j])
                if d is None:
                    filled = False
                    break
                D[i, j] = D[j, i] = d
            if not filled:
                break
    if not filled:
        index = {v: i for i, v in enumerate(verts)}
        for i, v in enumerate(verts):
            row = ball.bfs_from(v)
            for w, d in row.items():
                D[i, index[w]] = d
    best = 0
    if sample_count and n ** 4 > sample_count:
        import random
        rng = random.Random(seed)
        for _ in range(sample_count):
            w, x, y, z = (rng.randrange(n) for _ in range(4))
            pxz = D[w, x] + D[w, z] - D[x, z]
            pyz = D[w, y] + D[w, z] - D[y, z]
            pxy = D[w, x] + D[w, y] - D[x, y]
            best = max(best, min(pxz, pyz) - pxy)
    else:
        chunk = max(1, (1 << 22) // max(1, n * n))
        for w in range(n):
            P = D[w][:, None] + D[w][None, :] - D  # doubled Gromov products
            for lo in range(0, n, chunk):
                hi = min(n, lo + chunk)
                # min((x.z)_w, (y.z)_w) maximized over z, minus (x.y)_w
                t = np.minimum(P[lo:hi, None, :], P[None, :, :]).max(axis=2)
                defect = int((t - P[lo:hi]).max())
                if defect > best:
                    best = defect
    return Fraction(best, 2), False


# ---------------------------------------------------------------------------
# the deep-pair path (pairs far down one horoball)


def _identity_coset_forbidden_radius(base, level, m):
    """Largest base norm s with d(v0, (p, level)) <= m - 1 for points of the
    identity-coset horoball (v0 on its rim over the origin); -1 when the
    forbidden set misses this level entirely."""
    rim = (base.origin(), 0)
    lo = -1
    s = 0
    while True:
        probe = tuple([s] + [0] * (base.dim - 1)) if base.rank else base.origin()
        d = horoball.horoball_distance(rim, (probe, level), base)
        if d <= m - 1:
            lo = s
            s += 1
        else:
            return lo


def _chunk(path, step):
    way = path[::step]
    if way[-1] != path[-1]:
        way.append(path[-1])
    return way


def deep_pair_path(space, x, y, ledger, ball=None):
    """A path between two vertices of one horoball, of length at most K,
    avoiding the open ball of radius m = min(d(v0,x), d(v0,y)) about v0.

    Preconditions: x and y lie in the same horoball at depth >= k,
    d(x,y) <= M, and |d(v0,x) - d(v0,y)| <= 20*delta.  The construction
    aligns the deeper endpoint vertically to the shallower depth, then routes
    in the level graph: straight interpolation when it stays clear, otherwise
    a ball-avoiding base route chunked into level-sized hops (supported for
    identity-coset horoballs).  Every candidate is validated against exact
    distances before being returned.
    """
    if x == y:
        return [x]
    if x[0] != "h" or y[0] != "h" or x[1:3] != y[1:3]:
        raise ValueError("x and y must lie in the same horoball")
    _, i, t_key, bx, dx = x
    _, _, _, by, dy = y
    if min(dx, dy) < ledger.k:
        raise ValueError(f"both depths must be >= k = {ledger.k}")
    base = space.parabolic_base(i) if hasattr(space, "parabolic_base") else space.base

    def vdist(v, bound):
        if ball is not None and v in ball.dist:
            return ball.dist[v]
        return distance(space, space.v0, v, bound)

    dxy = distance(space, x, y, ledger.M)
    if dxy is None:
        raise ValueError(f"d(x,y) exceeds M = {ledger.M}")
    big = ledger.M + ledger.K + 4
    dvx = vdist(x, big)
    dvy = vdist(y, big)
    if dvx is None or dvy is None:
        raise ResourceBudget("base-point distances exceed the search bound")
    if abs(dvx - dvy) > 20 * ledger.delta:
        raise ValueError("|d(v0,x) - d(v0,y)| exceeds 20*delta")
    m = min(dvx, dvy)

    swapped = dx > dy
    if swapped:
        x, y = y, x
        bx, dx, by, dy = by, dy, bx, dx

    def allowed(v):
        d = vdist(v, m)
        return d is None or d >= m

    def validate(path):
        if len(path) - 1 > ledger.K:
            return False
        return all(allowed(v) for v in path)

    if hasattr(space, "oracle"):
        is_identity_coset = t_key == space.oracle.identity_key
    else:
        is_identity_coset = True

    candidates = []
    for level in (dx, dy):
        shallow_first = level == dx
        vertical = [ (by, d) for d in range(dy, level - 1, -1) ] if shallow_first \
            else [ (bx, d) for d in range(dx, level + 1) ]
        horizontals = [horoball.level_interpolate(bx, by, level, base)]
        if is_identity_coset and base.rank >= 2:
            rb = _identity_coset_forbidden_radius(base, level, m) + 1
            if base.norm(bx) >= rb and base.norm(by) >= rb and rb >= 1:
                try:
                    route = horoball.avoid_ball_path_abelian(bx, by, rb, base)
                    step = 1 if level == 0 else (1 << level)
                    horizontals.append([(p, level) for p in _chunk(route, step)])
                except (horoball.PathInfeasible, RuntimeError):
                    pass
        for horizontal in horizontals:
            if shallow_first:
                seg = [(bx, d) for d in range(dx, level)] + horizontal \
                    + vertical[-2::-1]
            else:
                seg = vertical[:-1] + horizontal \
                    + [(by, d) for d in range(level - 1, dy - 1, -1)]
            path = [("h", i, t_key, p, d) for p, d in seg]
            candidates.append(path)

    for path in candidates:
        if path[0] != x or path[-1] != y:
            continue
        if validate(path):
            return path
    raise RuntimeError(
        "no validated deep-pair path; widen the ledger or the region")


# ---------------------------------------------------------------------------
# finite-horizon geodesic cover check


def ray_cover_check(space, ball, x, horizon, delta):
    """Finite-horizon proxy for the geodesic-ray cover property: is there a
    geodesic (inside the ball) from v0 to some vertex at distance
    d(v0,x) + horizon that passes within 3*delta of x?"""
    if x not in ball.dist:
        raise ValueError("x must lie inside the ball")
    target = ball.dist[x] + horizon
    if target > ball.radius:
        raise ResourceBudget("horizon exceeds the ball radius")
    near = ball.bfs_from(x, bound=3 * delta)
    for u, dux in near.items():
        if dux > 3 * delta:
            continue
        du = ball.dist[u]
        reach = ball.bfs_from(u)
        for w, duw in reach.items():
            if ball.dist[w] == target and du + duw == target:
                return True
    return False
