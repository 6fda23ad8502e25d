"""Exhaustive reference implementations for cross-checking.

Everything here is exponential-time and guarded by an explicit vertex budget;
the point is independent ground truth for small instances, not speed. The
subset dynamic program and the brute-force elimination search share no code
with each other or with the incremental engine.
"""

from __future__ import annotations

from itertools import permutations

from .errors import BudgetError
from .graph import Graph
from .splits import Split, make_split
from .treedec import RootedView, TreeDecomposition


def _check_budget(g: Graph, max_n: int, what: str) -> None:
    if g.n > max_n:
        raise BudgetError(f"{what} refused: {g.n} vertices exceeds budget {max_n}")


def exact_treewidth(g: Graph, max_n: int = 12) -> int:
    """Exact treewidth by dynamic programming over elimination prefixes.

    f[S] is the best achievable over orderings of S of the maximum back
    degree, where eliminating v after S\\{v} costs the number of neighbors of
    v's component in G[S] that lie outside S. Runs in O(2^n poly n).
    """
    _check_budget(g, max_n, "exact_treewidth")
    n = g.n
    if n == 0:
        return -1
    adj_mask = [0] * n
    for u in range(n):
        for v in g.adj[u]:
            adj_mask[u] |= 1 << v
    full = (1 << n) - 1
    inf = n + 1
    f = [inf] * (1 << n)
    f[0] = -1
    masks_by_size: list[list[int]] = [[] for _ in range(n + 1)]
    for s in range(1, 1 << n):
        masks_by_size[s.bit_count()].append(s)
    for size in range(1, n + 1):
        for s in masks_by_size[size]:
            # components of G[S] are shared by all v in S: the cost of
            # eliminating v last is |N(component of v in G[S]) \ S|
            best = inf
            rem = s
            while rem:
                low = rem & -rem
                comp = low
                frontier = low
                while frontier:
                    grow = 0
                    ff = frontier
                    while ff:
                        b = ff & -ff
                        ff ^= b
                        grow |= adj_mask[b.bit_length() - 1]
                    frontier = (grow & s) & ~comp
                    comp |= frontier
                nbrs = 0
                cc = comp
                while cc:
                    b = cc & -cc
                    cc ^= b
                    nbrs |= adj_mask[b.bit_length() - 1]
                q = (nbrs & ~s).bit_count()
                cc = comp
                while cc:
                    b = cc & -cc
                    cc ^= b
                    prev = f[s ^ b]
                    cand = prev if prev > q else q
                    if cand < best:
                        best = cand
                rem &= ~comp
            f[s] = best
    return f[full]


def exact_treewidth_naive(g: Graph, max_n: int = 7) -> int:
    """Treewidth as the best over all n! elimination orderings of the
    maximum degree at elimination time (with fill-in). Cross-check only."""
    _check_budget(g, max_n, "exact_treewidth_naive")
    n = g.n
    if n == 0:
        return -1
    best = n - 1
    base = [set(g.adj[v]) for v in range(n)]
    for order in permutations(range(n)):
        adj = [set(s) for s in base]
        worst = -1
        for v in order:
            nb = adj[v]
            if len(nb) > worst:
                worst = len(nb)
                if worst >= best:
                    break
            for a in nb:
                adj[a].discard(v)
                adj[a].update(nb - {a, v})
        if worst < best:
            best = worst
    return best


def _rooted_view(t: TreeDecomposition, root: int) -> RootedView:
    # deliberately re-derived here rather than imported from the engine side
    adj: list[list[int]] = [[] for _ in t.bags]
    for a, b in t.edges:
        adj[a].append(b)
        adj[b].append(a)
    for lst in adj:
        lst.sort()
    parent: list[int | None] = [None] * len(t.bags)
    depth = [0] * len(t.bags)
    order = [root]
    head = 0
    seen = [False] * len(t.bags)
    seen[root] = True
    while head < len(order):
        cur = order[head]
        head += 1
        for nb in adj[cur]:
            if not seen[nb]:
                seen[nb] = True
                parent[nb] = cur
                depth[nb] = depth[cur] + 1
                order.append(nb)
    home: dict[int, int] = {}
    for node in order:
        for x in t.bags[node]:
            if x not in home:
                home[x] = node
    return RootedView(root=root, parent=parent, depth=depth, home=home, order=order)


def _components_avoiding(g: Graph, banned: frozenset[int]) -> list[list[int]]:
    seen = set(banned)
    comps = []
    for start in range(g.n):
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        stack = [start]
        while stack:
            cur = stack.pop()
            for nb in g.adj[cur]:
                if nb not in seen:
                    seen.add(nb)
                    comp.append(nb)
                    stack.append(nb)
        comps.append(sorted(comp))
    return comps


def _assign_components(
    weights: list[int], cap: int, bins: int
) -> list[int] | None:
    """First assignment (in try order 0,1,2 per component) packing every
    component weight into `bins` groups with per-group weight <= cap."""
    order = sorted(range(len(weights)), key=lambda i: -weights[i])
    loads = [0] * bins
    choice = [0] * len(weights)

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        w = weights[order[i]]
        for b in range(bins):
            if b > 0 and loads[b] == loads[b - 1] and w > 0:
                continue  # identical load, symmetric branch
            if loads[b] + w <= cap:
                loads[b] += w
                choice[order[i]] = b
                if rec(i + 1):
                    return True
                loads[b] -= w
        return False

    return choice if rec(0) else None


def exhaustive_min_split(
    g: Graph,
    t: TreeDecomposition,
    root: int,
    w: frozenset[int] | set[int] | list[int],
    groups: int = 3,
    max_n: int = 12,
) -> Split | None:
    """Minimum split of bag w by brute force over all separators.

    Separators are scanned in increasing (size, home-depth sum, mask) order;
    the surviving connected components are packed into the requested number
    of groups. Returns None when no separator admits a valid split.
    """
    _check_budget(g, max_n, "exhaustive_min_split")
    if groups not in (2, 3):
        raise ValueError("groups must be 2 or 3")
    rv = _rooted_view(t, root)
    wset = frozenset(w)
    n = g.n
    dvec = [rv.depth[rv.home[v]] for v in range(n)]

    def key(mask: int) -> tuple[int, int, int]:
        size = mask.bit_count()
        d = 0
        mm = mask
        while mm:
            b = mm & -mm
            mm ^= b
            d += dvec[b.bit_length() - 1]
        return (size, d, mask)

    cap_all = len(wset)
    for mask in sorted(range(1 << n), key=key):
        x = frozenset(v for v in range(n) if mask >> v & 1)
        cap = cap_all - len(x) - 1
        if cap < 0:
            continue
        comps = _components_avoiding(g, x)
        weights = [len(wset.intersection(c)) for c in comps]
        choice = _assign_components(weights, cap, groups)
        if choice is None:
            continue
        parts = [set(), set(), set()]
        for ci, comp in enumerate(comps):
            parts[choice[ci]].update(comp)
        return make_split(
            frozenset(parts[0]), frozenset(parts[1]), frozenset(parts[2]), x, rv
        )
    return None
