"""Pair predicates on a space with base point, and the boundary-connectivity
semi-decision built on them.

A "space" here is anything with a `v0` vertex and a sorted `neighbors(v)`
method; distances from v0 come from a materialized BallGraph, pair distances
from bounded bidirectional search on the implicit graph.
"""

from dataclasses import dataclass, field
from collections import deque

from .cusped_space import build_ball, distance, ResourceBudget


@dataclass
class Verdict:
    """Three-valued outcome of a semi-decision run."""

    kind: str                      # "connected" | "disconnected" | "unknown"
    certified: bool = False
    n: object = None               # witness n for connected verdicts
    witness: object = None         # splitting or violating pair
    report: dict = field(default_factory=dict)

    def exit_code(self):
        return 2 if self.kind == "unknown" else 0


def star(x, y, eps, ledger, dist_v0, dxy):
    """The near-pair condition: |d(v0,x) - d(v0,y)| <= eps and d(x,y) <= M."""
    if dxy is None or dxy > ledger.M:
        return False
    return abs(dist_v0[x] - dist_v0[y]) <= eps


def forbidden_set(ball, m, eps, ledger):
    """Vertices of the closed ball of radius m - C - 45*delta + 3*eps about
    v0; empty when that radius is <= 0."""
    rho = ledger.forbidden_radius(m, eps)
    if rho <= 0:
        return frozenset(), rho
    return frozenset(v for v, d in ball.dist.items() if d <= rho), rho


def ddagger(ball, x, y, eps, n, ledger):
    """Is there a path of length <= n from x to y avoiding the ball of
    radius m - C - 45*delta + 3*eps about v0?  Returns (holds, witness_path).

    The search region B(v0, max(d(v0,x), d(v0,y)) + n) already contains every
    candidate path; the materialized ball must cover it, else ResourceBudget
    is raised (never a silent False).
    """
    if x not in ball.dist or y not in ball.dist:
        raise ResourceBudget("pair outside the materialized ball")
    m = min(ball.dist[x], ball.dist[y])
    if max(ball.dist[x], ball.dist[y]) + n > ball.radius:
        raise ResourceBudget(
            f"ball radius {ball.radius} too small for a length-{n} search")
    rho = ledger.forbidden_radius(m, eps)

    def allowed(v):
        return rho <= 0 or ball.dist[v] > rho

    if not allowed(x) or not allowed(y):
        return False, None
    if x == y:
        return True, [x]
    parent = {x: None}
    frontier = deque([(x, 0)])
    while frontier:
        v, d = frontier.popleft()
        if d == n:
            continue
        for w in ball.adjacency[v]:
            if w in parent or not allowed(w):
                continue
            parent[w] = v
            if w == y:
                path = [y]
                while path[-1] is not None and parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return True, path
            frontier.append((w, d + 1))
    return False, None


def ddagger_monotone_check(ball, x, y, eps, n, n2, ledger):
    """Assert the one-directional monotonicity: a pair passing at n passes at
    every n2 >= n.  Returns True when the implication holds."""
    if n2 < n:
        raise ValueError("n2 must be >= n")
    held, _ = ddagger(ball, x, y, eps, n, ledger)
    if not held:
        return True
    held2, _ = ddagger(ball, x, y, eps, n2, ledger)
    return held2


@dataclass
class PairScan:
    pairs_checked: int
    violating: object          # None or (x, y)
    witness_count: int


def iter_star_pairs(space, ball, pair_radius, eps, ledger):
    """All unordered pairs (x, y), x <= y, of vertices within pair_radius of
    v0 satisfying the near-pair condition, in canonical order.

    Pair distances are exact: a geodesic of length <= M from a vertex within
    pair_radius stays inside B(v0, pair_radius + M), so the ball subgraph
    suffices whenever it covers that; otherwise the implicit graph is
    searched directly."""
    verts = [v for v in ball.vertices if ball.dist[v] <= pair_radius]
    use_ball = ball.radius >= pair_radius + ledger.M
    for x in verts:
        if use_ball:
            reach = ball.bfs_from(x, bound=ledger.M)
        else:
            reach = _bounded_bfs(space, x, ledger.M)
        for y in verts:
            if y < x:
                continue
            dxy = reach.get(y)
            if star(x, y, eps, ledger, ball.dist, dxy):
                yield x, y


def _bounded_bfs(space, start, bound):
    out = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        d = out[v]
        if d == bound:
            continue
        for w in space.neighbors(v):
            if w not in out:
                out[w] = d + 1
                queue.append(w)
    return out


def find_violating_pair(space, ball, eps, n, ledger, pair_radius):
    """First near-pair (canonical order) failing the ball-avoiding path
    condition, or None if every pair passes."""
    checked = 0
    witnesses = 0
    for x, y in iter_star_pairs(space, ball, pair_radius, eps, ledger):
        checked += 1
        holds, path = ddagger(ball, x, y, eps, n, ledger)
        if not holds:
            return PairScan(checked, (x, y), witnesses)
        witnesses += 1
    return PairScan(checked, None, witnesses)


def check_connectivity(space, ledger, n_start, n_budget, ball_budget=None):
    """Budgeted connectivity semi-decision: for each n, materialize
    B(v0, R(n)+n) and test every near-pair inside B(v0, R(n)); all pairs
    passing at some n is a sound certificate of connectivity (at certified
    constants), a violating pair advances n; exhaustion returns Unknown."""
    eps = 10 * ledger.delta
    report = {"per_n": [], "eps": eps}
    last_violation = None
    if n_budget < n_start:
        report["reason"] = "empty n range"
        return Verdict("unknown", certified=False, report=report)
    for n in range(n_start, n_budget + 1):
        radius = ledger.R(n) + n
        try:
            ball = build_ball(space, radius, max_vertices=ball_budget)
        except ResourceBudget as e:
            report["reason"] = str(e)
            report["attained_radius"] = e.attained
            return Verdict("unknown", certified=False, report=report)
        scan = find_violating_pair(space, ball, eps, n, ledger,
                                   pair_radius=ledger.R(n))
        entry = {"n": n, "ball_radius": radius, "ball_size": len(ball),
                 "pairs_checked": scan.pairs_checked}
        if scan.violating is not None:
            entry["violating_pair"] = [str(v) for v in scan.violating]
            last_violation = (n, scan.violating)
        report["per_n"].append(entry)
        if scan.violating is None:
            report["passed_at_n"] = n
            return Verdict("connected", certified=ledger.certified, n=n,
                           report=report)
    report["reason"] = "n budget exhausted"
    if last_violation is not None:
        report["last_violating_pair"] = [str(v) for v in last_violation[1]]
        return Verdict("unknown", certified=False, witness=last_violation[1],
                       report=report)
    return Verdict("unknown", certified=False, report=report)
