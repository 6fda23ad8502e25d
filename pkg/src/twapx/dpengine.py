"""Incremental dynamic programming engine over a rooted tree decomposition.

The engine maintains, for every node i, a table over assignments of the bag
of i into three component groups plus a separator. An assignment is encoded
as a base-4 integer with one digit per bag vertex, ascending vertex order,
smallest vertex in the most significant digit; digits 0..2 are the groups and
digit 3 the separator (two-way mode drops the third group: base 3, digit 2 is
the separator). A table maps code -> {nsep: cost} where nsep counts separator
vertices in the subtree of i and cost sums, over those vertices, the edge
distance from their shallowest containing bag to i.

Supported operations: re-root one edge at a time (recomputes two tables),
query a minimum split of the root bag, read back per-node restrictions of the
chosen split, and splice a replacement subtree over a region containing the
root (recomputes only the new tables).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation
from .graph import Graph
from .treedec import TreeDecomposition, validate

INF = None  # absent entry stands in for an unreachable state


@dataclass
class EditPlan:
    """Replacement of a connected region containing the current root.

    removed lists engine node ids to delete; bags/edges describe the new
    subtree over local ids 0..len(bags)-1; attach maps every border node
    (neighbor of the region that survives) to the local id it connects to;
    pointer names the local id that becomes the new root.
    """

    removed: list[int]
    bags: list[frozenset[int]]
    edges: list[tuple[int, int]]
    attach: dict[int, int]
    pointer: int


class SplitEngine:
    """Split tables over a rooted tree decomposition of maximum degree 3."""

    def __init__(
        self,
        g: Graph,
        t: TreeDecomposition,
        root: int | None = None,
        groups: int = 3,
    ):
        if groups not in (2, 3):
            raise ContractViolation("groups must be 2 or 3")
        problems = validate(g, t)
        if problems:
            raise ContractViolation("invalid decomposition: " + problems[0])
        adj = t.adjacency()
        for i, nb in enumerate(adj):
            if len(nb) > 3:
                raise ContractViolation(f"node {i} has degree {len(nb)} > 3")
        self.g = g
        self.groups = groups
        self.base = groups + 1
        self.xdigit = self.base - 1
        self.hmax = max((len(b) for b in t.bags), default=1) - 1
        if self.hmax < 0:
            self.hmax = 0

        r = root if root is not None else (t.root if t.root is not None else 0)
        if not (0 <= r < len(t.bags)):
            raise ContractViolation(f"root {r} out of range")

        self.bags: dict[int, frozenset[int]] = {}
        self.bag_list: dict[int, list[int]] = {}
        self.parent: dict[int, int | None] = {}
        self.children: dict[int, list[int]] = {}
        self.table: dict[int, dict[int, dict[int, int]]] = {}
        self.state: dict[int, tuple[int, int, int]] = {}
        self.stamp: dict[int, int] = {}
        self.epoch = 0
        self.root = r
        self._next_id = len(t.bags)

        self.tables_computed = 0
        self.moves = 0

        for i, bag in enumerate(t.bags):
            self.bags[i] = frozenset(bag)
            self.bag_list[i] = list(bag)
            self.children[i] = []
        order = [r]
        self.parent[r] = None
        seen = {r}
        head = 0
        while head < len(order):
            cur = order[head]
            head += 1
            for nb in adj[cur]:
                if nb not in seen:
                    seen.add(nb)
                    self.parent[nb] = cur
                    self.children[cur].append(nb)
                    order.append(nb)
        for i in self.children:
            self.children[i].sort()
        for i in reversed(order):
            self._compute_table(i)

    # ------------------------------------------------------------------ codes

    def _digit(self, code: int, idx: int, size: int) -> int:
        return (code // self.base ** (size - 1 - idx)) % self.base

    def decode(self, code: int, bag: list[int]) -> tuple[frozenset[int], ...]:
        parts: list[set[int]] = [set() for _ in range(self.base)]
        for idx, v in enumerate(bag):
            parts[self._digit(code, idx, len(bag))].add(v)
        out = [frozenset(p) for p in parts]
        if self.groups == 2:
            return (out[0], out[1], frozenset(), out[2])
        return (out[0], out[1], out[2], out[3])

    def encode(self, bag: list[int], assign: dict[int, int]) -> int:
        code = 0
        for v in bag:
            code = code * self.base + assign[v]
        return code

    # ----------------------------------------------------------------- tables

    def _local_table(self, i: int) -> dict[int, dict[int, int]]:
        """Assignments of bag i alone: all codes without an internal edge
        joining two distinct groups; nsep counts separator digits, cost 0."""
        bag = self.bag_list[i]
        xd = self.xdigit
        entries: list[tuple[int, int]] = [(0, 0)]  # (code, nsep)
        placed: list[int] = []
        for v in bag:
            nbr_idx = [j for j, u in enumerate(placed) if self.g.has_edge(u, v)]
            size = len(placed)
            nxt: list[tuple[int, int]] = []
            for code, h in entries:
                digs = [self._digit(code, j, size) for j in nbr_idx]
                for dv in range(self.base):
                    if dv == xd:
                        if h + 1 <= self.hmax:
                            nxt.append((code * self.base + dv, h + 1))
                    elif all(du == dv or du == xd for du in digs):
                        nxt.append((code * self.base + dv, h))
            entries = nxt
            placed.append(v)
        out: dict[int, dict[int, int]] = {}
        for code, h in entries:
            out.setdefault(code, {})[h] = 0
        return out

    def _reanchor(self, child: int, pset: frozenset[int]) -> dict[int, dict[int, int]]:
        """Child table with costs advanced one edge toward the parent: each
        separator vertex counted in nsep pays 1 unless still in both bags."""
        cbag = self.bag_list[child]
        size = len(cbag)
        xd = self.xdigit
        shared = [idx for idx, v in enumerate(cbag) if v in pset]
        out: dict[int, dict[int, int]] = {}
        for code, hs in self.table[child].items():
            xin = 0
            for idx in shared:
                if self._digit(code, idx, size) == xd:
                    xin += 1
            out[code] = {h: d + (h - xin) for h, d in hs.items()}
        return out

    def _forget_all(
        self, tab: dict[int, dict[int, int]], bag: list[int], keep: frozenset[int]
    ) -> tuple[dict[int, dict[int, int]], list[int]]:
        """Project out every bag vertex not in keep, taking minima."""
        size = len(bag)
        drop = [idx for idx, v in enumerate(bag) if v not in keep]
        if not drop:
            return tab, list(bag)
        cur = tab
        cur_size = size
        for idx in reversed(drop):
            low_pw = self.base ** (cur_size - 1 - idx)
            nxt: dict[int, dict[int, int]] = {}
            for code, hs in cur.items():
                high = code // (low_pw * self.base)
                low = code % low_pw
                ncode = high * low_pw + low
                slot = nxt.setdefault(ncode, {})
                for h, d in hs.items():
                    if h not in slot or d < slot[h]:
                        slot[h] = d
            cur = nxt
            cur_size -= 1
        return cur, [v for v in bag if v in keep]

    def _introduce_all(
        self, tab: dict[int, dict[int, int]], frame: list[int], target: list[int]
    ) -> dict[int, dict[int, int]]:
        """Extend the frame to target (a superset) one vertex at a time,
        rejecting assignments that put adjacent vertices in distinct groups."""
        xd = self.xdigit
        cur = tab
        cur_frame = list(frame)
        frame_set = set(frame)
        for v in target:
            if v in frame_set:
                continue
            frame_set.add(v)
            idx = 0
            while idx < len(cur_frame) and cur_frame[idx] < v:
                idx += 1
            size = len(cur_frame)
            nbrs = [
                (j, cur_frame[j])
                for j in range(size)
                if self.g.has_edge(cur_frame[j], v)
            ]
            low_pw = self.base ** (size - idx)
            nxt: dict[int, dict[int, int]] = {}
            for code, hs in cur.items():
                digs = [self._digit(code, j, size) for j, _ in nbrs]
                high = code // low_pw
                low = code % low_pw
                for dv in range(self.base):
                    if dv != xd and any(du != dv and du != xd for du in digs):
                        continue
                    ncode = (high * self.base + dv) * low_pw + low
                    slot = nxt.setdefault(ncode, {})
                    if dv == xd:
                        for h, d in hs.items():
                            if h + 1 <= self.hmax and (
                                h + 1 not in slot or d < slot[h + 1]
                            ):
                                slot[h + 1] = d
                    else:
                        for h, d in hs.items():
                            if h not in slot or d < slot[h]:
                                slot[h] = d
            cur = nxt
            cur_frame.insert(idx, v)
        return cur

    def _lift(self, child: int, i: int) -> dict[int, dict[int, int]]:
        """Child table re-expressed over the bag of i."""
        pset = self.bags[i]
        t1 = self._reanchor(child, pset)
        t2, frame = self._forget_all(t1, self.bag_list[child], pset)
        return self._introduce_all(t2, frame, self.bag_list[i])

    def _join(
        self,
        a: dict[int, dict[int, int]],
        b: dict[int, dict[int, int]],
        bag: list[int],
    ) -> dict[int, dict[int, int]]:
        size = len(bag)
        xd = self.xdigit
        out: dict[int, dict[int, int]] = {}
        small, big = (a, b) if len(a) <= len(b) else (b, a)
        for code, hs1 in small.items():
            hs2 = big.get(code)
            if hs2 is None:
                continue
            xcnt = 0
            for idx in range(size):
                if self._digit(code, idx, size) == xd:
                    xcnt += 1
            slot: dict[int, int] = {}
            for h1, d1 in hs1.items():
                for h2, d2 in hs2.items():
                    h = h1 + h2 - xcnt
                    if h > self.hmax:
                        continue
                    d = d1 + d2
                    if h not in slot or d < slot[h]:
                        slot[h] = d
            if slot:
                out[code] = slot
        return out

    def _chain(
        self, i: int, keep: bool = False
    ) -> tuple[
        dict[int, dict[int, int]],
        list[dict[int, dict[int, int]]],
        list[dict[int, dict[int, int]]],
    ]:
        """Forward accumulation at node i; optionally keep intermediates.

        Returns (final, accs, lifts) where accs[j] is the accumulated table
        before joining child j and lifts[j] the lifted table of child j.
        """
        acc = self._local_table(i)
        accs: list[dict[int, dict[int, int]]] = []
        lifts: list[dict[int, dict[int, int]]] = []
        for c in self.children[i]:
            lifted = self._lift(c, i)
            if keep:
                accs.append(acc)
                lifts.append(lifted)
            acc = self._join(acc, lifted, self.bag_list[i])
        return acc, accs, lifts

    def _compute_table(self, i: int) -> None:
        self.table[i], _, _ = self._chain(i)
        self.tables_computed += 1

    # ------------------------------------------------------------------ moves

    def move_to(self, target: int) -> None:
        """Re-root at target, stepping one tree edge at a time."""
        if target not in self.bags:
            raise ContractViolation(f"unknown node {target}")
        path = [target]
        while path[-1] != self.root:
            p = self.parent[path[-1]]
            if p is None:
                raise ContractViolation("target not connected to root")
            path.append(p)
        for node in reversed(path[:-1]):
            self._step(node)

    def _step(self, s: int) -> None:
        r = self.root
        if self.parent[s] != r:
            raise ContractViolation(f"node {s} is not a child of the root")
        self._push_state(r)
        self._push_state(s)
        # re-root the edge (r, s)
        self.children[r].remove(s)
        self.parent[r] = s
        self.children[s].append(r)
        self.children[s].sort()
        self.parent[s] = None
        self.root = s
        self._compute_table(r)
        self._compute_table(s)
        self.moves += 1

    def _push_state(self, i: int) -> None:
        """Materialize split restrictions on the children of i by inverting
        the forward chain, when i has a current state and some child lacks one."""
        if self.stamp.get(i) != self.epoch:
            return
        kids = self.children[i]
        if all(self.stamp.get(c) == self.epoch for c in kids):
            return
        code_i, h_i, d_i = self.state[i]
        _, accs, lifts = self._chain(i, keep=True)
        need = (code_i, h_i, d_i)
        for j in range(len(kids) - 1, -1, -1):
            code, h, d = need
            acc = accs[j]
            lift = lifts[j]
            xcnt = 0
            size = len(self.bag_list[i])
            for idx in range(size):
                if self._digit(code, idx, size) == self.xdigit:
                    xcnt += 1
            found = None
            for h1 in sorted(acc.get(code, {})):
                d1 = acc[code][h1]
                h2 = h + xcnt - h1
                hs2 = lift.get(code, {})
                if h2 in hs2 and d1 + hs2[h2] == d:
                    found = (h1, d1, h2, hs2[h2])
                    break
            if found is None:
                raise ContractViolation(
                    f"cannot invert join at node {i} for child {kids[j]}"
                )
            h1, d1, h2, d2 = found
            self._invert_lift(kids[j], i, code, h2, d2)
            need = (code, h1, d1)
        code, h, d = need
        local = self._local_table(i)
        if local.get(code, {}).get(h) != d:
            raise ContractViolation(f"chain inversion at node {i} left a residue")

    def _invert_lift(self, child: int, i: int, code: int, h: int, d: int) -> None:
        """Recover the child's own table entry from a lifted entry and stamp it."""
        pset = self.bags[i]
        pbag = self.bag_list[i]
        cset = self.bags[child]
        xd = self.xdigit
        # undo introduces: strip digits of vertices of bag i absent from child
        size = len(pbag)
        ccode, ch = code, h
        for idx in range(size - 1, -1, -1):
            if pbag[idx] in cset:
                continue
            low_pw = self.base ** (size - 1 - idx)
            dv = (ccode // low_pw) % self.base
            high = ccode // (low_pw * self.base)
            ccode = high * low_pw + ccode % low_pw
            size -= 1
            if dv == xd:
                ch -= 1
        # now ccode ranges over bag(child) ∩ bag(i); undo the forget by scanning
        # the re-anchored child table for the first matching full assignment
        t1 = self._reanchor(child, pset)
        cbag = self.bag_list[child]
        keep_idx = [idx for idx, v in enumerate(cbag) if v in pset]
        csize = len(cbag)
        target = None
        for full_code in sorted(t1):
            proj = 0
            for idx in keep_idx:
                proj = proj * self.base + self._digit(full_code, idx, csize)
            if proj != ccode:
                continue
            if t1[full_code].get(ch) == d:
                target = full_code
                break
        if target is None:
            raise ContractViolation(f"cannot invert lift for child {child}")
        # undo the re-anchor cost shift
        xin = 0
        for idx in keep_idx:
            if self._digit(target, idx, csize) == xd:
                xin += 1
        d_child = d - (ch - xin)
        if self.table[child].get(target, {}).get(ch) != d_child:
            raise ContractViolation(f"recovered entry missing in child {child} table")
        self.state[child] = (target, ch, d_child)
        self.stamp[child] = self.epoch

    # ---------------------------------------------------------------- queries

    def split_query(self) -> bool:
        """Look for a minimum split of the root bag.

        Scans root entries satisfying |W ∩ Cᵢ| + h < |W| for every group;
        when one exists, records the (h, d, code)-minimal one as the root's
        state, advances the epoch, and returns True.
        """
        r = self.root
        wsize = len(self.bag_list[r])
        best: tuple[int, int, int] | None = None
        for code, hs in self.table[r].items():
            counts = [0] * self.base
            tmp = code
            for _ in range(wsize):
                counts[tmp % self.base] += 1
                tmp //= self.base
            worst = max(counts[: self.groups])
            for h, d in hs.items():
                if h + worst >= wsize:
                    continue
                cand = (h, d, code)
                if best is None or cand < best:
                    best = cand
        if best is None:
            return False
        h, d, code = best
        self.epoch += 1
        self.state = {r: (code, h, d)}
        self.stamp = {r: self.epoch}
        return True

    def split_objective(self) -> tuple[int, int]:
        """(separator size, distance) of the split found by the last
        successful split_query."""
        r = self.root
        if self.stamp.get(r) != self.epoch or r not in self.state:
            raise ContractViolation("no split is active at the current root")
        _code, h, d = self.state[r]
        return (h, d)

    def state_query(self, i: int | None = None) -> tuple[frozenset[int], ...]:
        """Restriction of the current split to the bag of i (default: the
        root) as (group1, group2, group3, separator), in table digit order."""
        if i is None:
            i = self.root
        if self.stamp.get(i) != self.epoch or i not in self.state:
            raise ContractViolation(f"node {i} has no assignment for the current split")
        code, _h, _d = self.state[i]
        return self.decode(code, self.bag_list[i])

    def neighbors(self, i: int) -> list[int]:
        out = list(self.children[i])
        if self.parent[i] is not None:
            out.append(self.parent[i])
        return sorted(out)

    # ------------------------------------------------------------------- edit

    def edit(self, plan: EditPlan) -> list[int]:
        """Replace a region by a new subtree; returns engine ids of the new
        nodes indexed by local id. Only the new tables are computed."""
        removed = set(plan.removed)
        if not removed or self.root not in removed:
            raise ContractViolation("edit region must be nonempty and contain the root")
        for i in removed:
            if i not in self.bags:
                raise ContractViolation(f"removed node {i} does not exist")
        # region connectivity
        stack = [self.root]
        seen = {self.root}
        while stack:
            cur = stack.pop()
            for nb in self.neighbors(cur):
                if nb in removed and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if seen != removed:
            raise ContractViolation("edit region is not connected")
        borders = set()
        for i in removed:
            for nb in self.neighbors(i):
                if nb not in removed:
                    borders.add(nb)
        if borders != set(plan.attach):
            raise ContractViolation(
                f"attach map covers {sorted(plan.attach)} but borders are {sorted(borders)}"
            )
        nn = len(plan.bags)
        if nn == 0:
            raise ContractViolation("replacement must have at least one node")
        if not (0 <= plan.pointer < nn):
            raise ContractViolation(f"pointer {plan.pointer} outside replacement")
        deg = [0] * nn
        ladj: list[list[int]] = [[] for _ in range(nn)]
        if len(plan.edges) != nn - 1:
            raise ContractViolation("replacement edges do not form a tree")
        for a, b in plan.edges:
            if not (0 <= a < nn and 0 <= b < nn) or a == b:
                raise ContractViolation(f"bad replacement edge ({a}, {b})")
            deg[a] += 1
            deg[b] += 1
            ladj[a].append(b)
            ladj[b].append(a)
        for b_, loc in plan.attach.items():
            if not (0 <= loc < nn):
                raise ContractViolation(f"attach target {loc} out of range")
            deg[loc] += 1
        if any(x > 3 for x in deg):
            raise ContractViolation("replacement would exceed degree 3")
        reach = {0}
        stack = [0]
        while stack:
            cur = stack.pop()
            for nb in ladj[cur]:
                if nb not in reach:
                    reach.add(nb)
                    stack.append(nb)
        if len(reach) != nn:
            raise ContractViolation("replacement edges do not form a tree")
        for bag in plan.bags:
            for v in bag:
                if not (0 <= v < self.g.n):
                    raise ContractViolation(f"replacement bag vertex {v} out of range")

        for i in removed:
            del self.bags[i]
            del self.bag_list[i]
            del self.table[i]
            del self.parent[i]
            del self.children[i]
            self.state.pop(i, None)
            self.stamp.pop(i, None)

        ids = list(range(self._next_id, self._next_id + nn))
        self._next_id += nn
        for loc, bag in enumerate(plan.bags):
            i = ids[loc]
            self.bags[i] = frozenset(bag)
            self.bag_list[i] = sorted(bag)
            self.children[i] = []
            self.parent[i] = None

        new_root = ids[plan.pointer]
        adj_new: dict[int, list[int]] = {i: [] for i in ids}
        for a, b in plan.edges:
            adj_new[ids[a]].append(ids[b])
            adj_new[ids[b]].append(ids[a])
        for border, loc in plan.attach.items():
            adj_new[ids[loc]].append(border)

        order = [new_root]
        seen2 = {new_root}
        head = 0
        while head < len(order):
            cur = order[head]
            head += 1
            if cur not in adj_new:
                continue  # border: keeps its old subtree orientation
            for nb in adj_new[cur]:
                if nb in seen2:
                    continue
                seen2.add(nb)
                self.parent[nb] = cur
                self.children[cur].append(nb)
                order.append(nb)
        for i in ids:
            self.children[i].sort()
        self.parent[new_root] = None
        self.root = new_root
        for i in reversed(order):
            if i in adj_new:
                self._compute_table(i)
        self.epoch += 1
        self.state = {}
        self.stamp = {}
        return ids

    # ------------------------------------------------------------------ export

    def export_decomposition(
        self, skip: int | None = None
    ) -> tuple[TreeDecomposition, dict[int, int]]:
        """Snapshot as a TreeDecomposition plus engine-id -> exported-id map.

        skip drops one leaf node (and its incident edge) from the export.
        """
        keep = sorted(i for i in self.bags if i != skip)
        if skip is not None and skip in self.bags and len(self.neighbors(skip)) > 1:
            raise ContractViolation(f"cannot skip non-leaf node {skip}")
        remap = {i: j for j, i in enumerate(keep)}
        bags = [sorted(self.bags[i]) for i in keep]
        edges = []
        for i in keep:
            p = self.parent[i]
            if p is not None and p != skip:
                a, b = remap[i], remap[p]
                edges.append((min(a, b), max(a, b)))
        root = remap.get(self.root)
        if root is None and keep:
            root = remap[self.neighbors(self.root)[0]]
        return TreeDecomposition(bags, sorted(edges), root=root), remap
