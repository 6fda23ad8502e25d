"""Width reduction by repeated local splitting.

One pass walks the decomposition depth-first from an added empty starting
bag. Every maximum-size bag it reaches is either split (the editable region
around it is rewritten into strictly smaller bags) or certifies, for bags of
size >= 2k+3, that the treewidth exceeds k. The outer loop repeats passes,
dropping the width by one each time, until the width reaches 2k+1 or a bag
refuses to split.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .dpengine import EditPlan, SplitEngine
from .errors import ContractViolation
from .graph import Graph
from .splits import is_valid_split
from .treedec import (
    TreeDecomposition,
    initial_decomposition,
    normalize_degree3,
    validate,
    width,
)

ORACLE_CHECK_MAX_N = 12


@dataclass
class Decomposition:
    """Successful outcome: a valid decomposition of width <= 2k+1."""

    td: TreeDecomposition


@dataclass
class LowerBound:
    """Certificate that treewidth exceeds k: a valid decomposition containing
    a bag of size >= 2k+3 that admits no split."""

    k: int
    td: TreeDecomposition
    node: int

    @property
    def bag(self) -> list[int]:
        return self.td.bags[self.node]


@dataclass
class RunStats:
    outcome: str = ""
    width: int = -1
    k: int = -1
    passes: int = 0
    two_way_passes: int = 0
    splits: int = 0
    inserted: int = 0
    removed: int = 0
    moves: int = 0
    tables: int = 0
    wall_time_s: float = 0.0

    def as_lines(self) -> list[str]:
        return [
            f"outcome={self.outcome}",
            f"width={self.width}",
            f"k={self.k}",
            f"passes={self.passes}",
            f"two_way_passes={self.two_way_passes}",
            f"splits={self.splits}",
            f"inserted={self.inserted}",
            f"removed={self.removed}",
            f"moves={self.moves}",
            f"tables={self.tables}",
            f"wall_time_s={self.wall_time_s:.3f}",
        ]


@dataclass
class EditableInfo:
    """The region rewritten by one local split.

    nodes lists the editable bags in discovery order starting at the split
    root; borders maps each surviving neighbor to the index of the single
    component group its bag meets (0 when the bag lies inside the separator).
    """

    nodes: list[int]
    states: dict[int, tuple[frozenset[int], ...]]
    borders: dict[int, int]
    border_states: dict[int, tuple[frozenset[int], ...]]
    x_full: frozenset[int]


def potential(t: TreeDecomposition) -> int:
    """Sum over bags of 7^(bag size), as an exact integer."""
    return sum(7 ** len(b) for b in t.bags)


def _group_count(state: tuple[frozenset[int], ...]) -> int:
    return sum(1 for p in state[:3] if p)


def find_editable(engine: SplitEngine) -> EditableInfo:
    """Explore the editable region around the split root.

    A node is editable when its bag meets at least two component groups and
    the whole path to the split root is editable. The walk moves the engine
    pointer into every examined node (materializing its state) and returns
    with the pointer back at the split root.
    """
    u = engine.root
    st_u = engine.state_query()
    if _group_count(st_u) < 2:
        raise ContractViolation("split root bag must meet at least two groups")
    nodes = [u]
    states = {u: st_u}
    borders: dict[int, int] = {}
    border_states: dict[int, tuple[frozenset[int], ...]] = {}
    stack: list[tuple[int, list[int]]] = [(u, list(engine.children[u]))]
    while stack:
        cur, todo = stack[-1]
        if not todo:
            stack.pop()
            if stack:
                engine.move_to(stack[-1][0])
            continue
        c = todo.pop(0)
        engine.move_to(c)
        stc = engine.state_query()
        if _group_count(stc) >= 2:
            nodes.append(c)
            states[c] = stc
            stack.append((c, [x for x in engine.children[c] if x != cur]))
        else:
            borders[c] = next((i for i in range(3) if stc[i]), 0)
            border_states[c] = stc
            engine.move_to(cur)
    x_full = frozenset().union(
        *(s[3] for s in states.values()), *(s[3] for s in border_states.values())
    )
    return EditableInfo(
        nodes=nodes,
        states=states,
        borders=borders,
        border_states=border_states,
        x_full=x_full,
    )


def build_replacement(
    engine: SplitEngine, info: EditableInfo, pointer_border: int
) -> EditPlan:
    """Plan replacing the editable region by per-group copies plus a
    separator bag, preserving degree <= 3 via duplicate root-copy bags.

    Every editable bag B becomes, for each group i, the bag
    (B ∩ (Cᵢ ∪ X)) ∪ Bˣ where Bˣ collects separator vertices homed strictly
    below B; the copies are wired like the region, a bag holding the whole
    separator joins the root copies, and borders attach to the copy of their
    group. All new bags are strictly smaller than the split bag and at most
    3t+4 nodes are created for t removed.
    """
    u = engine.root
    rnodes = info.nodes
    rset = set(rnodes)
    t = len(rnodes)
    wsize = len(engine.bags[u])

    bx: dict[int, frozenset[int]] = {}
    for m in reversed(rnodes):
        acc: set[int] = set()
        for c in engine.children[m]:
            if c in rset:
                acc |= bx[c]
                acc |= info.states[c][3] - engine.bags[m]
            else:
                acc |= info.border_states[c][3] - engine.bags[m]
        bx[m] = frozenset(acc)

    for m in rnodes:
        if bx[m]:
            st = info.states[m]
            for i in range(3):
                for j in range(i + 1, 3):
                    if len(bx[m]) >= len(st[i]) + len(st[j]):
                        raise ContractViolation(
                            f"separator spill {len(bx[m])} at node {m} is not "
                            f"smaller than |B ∩ (C{i+1} ∪ C{j+1})| = "
                            f"{len(st[i]) + len(st[j])}"
                        )

    groups = engine.groups
    bags: list[frozenset[int]] = []
    loc: dict[tuple[int, int], int] = {}
    for i in range(groups):
        for m in rnodes:
            st = info.states[m]
            loc[(i, m)] = len(bags)
            bags.append(st[i] | st[3] | bx[m])
    ledges: list[tuple[int, int]] = []
    for i in range(groups):
        for m in rnodes:
            if m != u:
                ledges.append((loc[(i, m)], loc[(i, engine.parent[m])]))
    xid = len(bags)
    bags.append(info.x_full)
    attach = {b: loc[(part, engine.parent[b])] for b, part in info.borders.items()}

    for i in range(groups):
        rc = loc[(i, u)]
        mirror_children = [loc[(i, c)] for c in engine.children[u] if c in rset]
        border_children = sorted(b for b in info.borders if attach[b] == rc)
        top = rc
        if len(mirror_children) + len(border_children) >= 3:
            rep = len(bags)
            bags.append(bags[rc])
            if mirror_children:
                mv = mirror_children[0]
                ledges.remove((mv, rc))
                ledges.append((mv, rep))
            else:
                attach[border_children[0]] = rep
            ledges.append((rep, rc))
            top = rep
        ledges.append((xid, top))

    for bag in bags:
        if len(bag) >= wsize:
            raise ContractViolation(
                f"inserted bag of size {len(bag)} not smaller than |W| = {wsize}"
            )
    if len(bags) > 3 * t + 4:
        raise ContractViolation(
            f"{len(bags)} inserted bags exceed the 3t+4 = {3 * t + 4} bound"
        )
    return EditPlan(
        removed=list(rnodes),
        bags=bags,
        edges=sorted((min(a, b), max(a, b)) for a, b in ledges),
        attach=attach,
        pointer=attach[pointer_border],
    )


def _check_open_path(
    engine: SplitEngine, status: dict[int, str], dfs_parent: dict[int, int | None]
) -> None:
    open_set = {i for i, s in status.items() if s == "open"}
    path = []
    cur: int | None = engine.root
    while cur is not None:
        path.append(cur)
        if status.get(cur) != "open":
            raise ContractViolation(f"walk node {cur} is not open")
        cur = dfs_parent[cur]
    if set(path) != open_set:
        raise ContractViolation(
            f"open nodes {sorted(open_set)} do not form the walk path {path}"
        )


def _check_assembled_split(
    g: Graph, w: frozenset[int], info: EditableInfo
) -> None:
    """Reassemble a full vertex partition from the per-bag restrictions and
    verify it is a valid split of w."""
    group_of: dict[int, int] = {}
    for st in list(info.states.values()) + list(info.border_states.values()):
        for gi in range(3):
            for v in st[gi]:
                if group_of.setdefault(v, gi) != gi:
                    raise ContractViolation(
                        f"vertex {v} assigned to two different groups"
                    )
    x = info.x_full
    seen = set(x)
    parts: list[set[int]] = [set(), set(), set()]
    for start in range(g.n):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        head = 0
        while head < len(comp):
            curv = comp[head]
            head += 1
            for nb in g.adj[curv]:
                if nb not in seen:
                    seen.add(nb)
                    comp.append(nb)
        gset = {group_of[v] for v in comp if v in group_of}
        if len(gset) > 1:
            raise ContractViolation(f"component {sorted(comp)} spans groups {gset}")
        parts[gset.pop() if gset else 0].update(comp)
    if not is_valid_split(g, w, parts[0], parts[1], parts[2], x):
        raise ContractViolation("assembled assignment is not a valid split")


def reduce_width_pass(
    engine: SplitEngine,
    sentinel: int,
    check: bool = False,
    stats: RunStats | None = None,
) -> int | None:
    """One depth-first width-reduction pass.

    Returns None when every bag ends at size <= w (w = width at engine
    initialization), or the engine node id of a maximum bag that admits no
    split. The walk starts at the empty sentinel bag; closing it means every
    node was processed.
    """
    w = engine.hmax
    g = engine.g
    status: dict[int, str] = {i: "unseen" for i in engine.bags}
    dfs_parent: dict[int, int | None] = {sentinel: None}
    engine.move_to(sentinel)
    status[sentinel] = "open"
    while True:
        if check:
            _check_open_path(engine, status, dfs_parent)
        cur = engine.root
        nxt = next((c for c in engine.children[cur] if status.get(c) == "unseen"), None)
        if nxt is not None:
            status[nxt] = "open"
            dfs_parent[nxt] = cur
            engine.move_to(nxt)
            continue
        if cur == sentinel:
            status[cur] = "closed"
            if check and any(s != "closed" for s in status.values()):
                raise ContractViolation("pass ended with unprocessed nodes")
            return None
        if len(engine.bags[cur]) <= w:
            status[cur] = "closed"
            parent = dfs_parent[cur]
            assert parent is not None
            engine.move_to(parent)
            continue
        if not engine.split_query():
            if check and g.n <= ORACLE_CHECK_MAX_N:
                from .oracle import exhaustive_min_split

                exported, remap = engine.export_decomposition()
                ref = exhaustive_min_split(
                    g,
                    exported,
                    remap[cur],
                    engine.bags[cur],
                    groups=engine.groups,
                )
                if ref is not None:
                    raise ContractViolation(
                        f"engine found no split but oracle found {ref.objective}"
                    )
            return cur
        objective = engine.split_objective()
        if check and g.n <= ORACLE_CHECK_MAX_N:
            from .oracle import exhaustive_min_split

            exported, remap = engine.export_decomposition()
            ref = exhaustive_min_split(
                g, exported, remap[cur], engine.bags[cur], groups=engine.groups
            )
            if ref is None or ref.objective != objective:
                raise ContractViolation(
                    f"engine split objective {objective} disagrees with oracle "
                    f"{None if ref is None else ref.objective}"
                )
        info = find_editable(engine)
        if len(info.x_full) != objective[0]:
            raise ContractViolation(
                f"collected separator has {len(info.x_full)} vertices, "
                f"expected {objective[0]}"
            )
        if check:
            _check_assembled_split(g, engine.bags[cur], info)
        q = dfs_parent[cur]
        rset = set(info.nodes)
        while q in rset:
            q = dfs_parent[q]
        assert q is not None
        removed_sizes = [len(engine.bags[m]) for m in info.nodes]
        if check:
            pre_hist = sum(1 for b in engine.bags.values() if len(b) == w + 1)
        plan = build_replacement(engine, info, q)
        new_ids = engine.edit(plan)
        for m in info.nodes:
            del status[m]
            dfs_parent.pop(m, None)
        for i in new_ids:
            status[i] = "unseen"
        if stats is not None:
            stats.splits += 1
            stats.inserted += len(new_ids)
            stats.removed += len(info.nodes)
        if check:
            post_hist = sum(1 for b in engine.bags.values() if len(b) == w + 1)
            if post_hist >= pre_hist:
                raise ContractViolation(
                    f"count of maximum bags did not decrease ({pre_hist} -> {post_hist})"
                )
            drop = sum(7**s for s in removed_sizes) - sum(
                7 ** len(b) for b in plan.bags
            )
            if drop < len(info.nodes):
                raise ContractViolation(
                    f"potential dropped by {drop} < t = {len(info.nodes)}"
                )
            exported, _ = engine.export_decomposition()
            problems = validate(g, exported)
            if problems:
                raise ContractViolation("edit broke the decomposition: " + problems[0])
        engine.move_to(q)


def approximate(
    g: Graph,
    k: int,
    t0: TreeDecomposition | None = None,
    two_way: str = "auto",
    strategy: str = "min-degree",
    check: bool = False,
    stats: RunStats | None = None,
) -> Decomposition | LowerBound:
    """Decomposition of width <= 2k+1, or a certificate that treewidth > k.

    Starts from t0 (validated) or a heuristic decomposition, then runs
    width-reduction passes while the width is at least 2k+2. Each pass
    re-initializes the engine; two-way tables are used when allowed by
    two_way and the current maximum bag size (>= 3k+4 for "auto"). A failed
    two-way pass is retried three-way before a lower bound is reported, so
    certificates always come from unrestricted splits.
    """
    start = time.monotonic()
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if two_way not in ("auto", "on", "off"):
        raise ValueError(f"two_way must be auto, on, or off, got {two_way!r}")
    st = stats if stats is not None else RunStats()
    st.k = k
    if t0 is None:
        t = initial_decomposition(g, strategy)
    else:
        problems = validate(g, t0)
        if problems:
            raise ValueError("starting decomposition invalid: " + problems[0])
        t = t0
    force_three = False
    while width(t) >= 2 * k + 2:
        t = normalize_degree3(t)
        deg = [len(a) for a in t.adjacency()]
        attach_at = min(i for i, d in enumerate(deg) if d <= 2)
        sentinel = len(t.bags)
        seeded = TreeDecomposition(
            [list(b) for b in t.bags] + [[]],
            list(t.edges) + [(attach_at, sentinel)],
            root=sentinel,
        )
        maxbag = width(t) + 1
        if force_three or two_way == "off":
            groups = 3
        elif two_way == "on":
            groups = 2
        else:
            groups = 2 if maxbag >= 3 * k + 4 else 3
        engine = SplitEngine(g, seeded, root=sentinel, groups=groups)
        bad = reduce_width_pass(engine, sentinel, check=check, stats=st)
        st.passes += 1
        if groups == 2:
            st.two_way_passes += 1
        st.moves += engine.moves
        st.tables += engine.tables_computed
        exported, remap = engine.export_decomposition(skip=sentinel)
        if bad is None:
            t = exported
            force_three = False
            continue
        if groups == 2:
            # two-way splittability is only guaranteed for larger bags; retry
            # the pass with full three-way tables before concluding anything
            t = exported
            force_three = True
            continue
        st.outcome = "lower-bound"
        st.width = width(exported)
        st.wall_time_s = time.monotonic() - start
        return LowerBound(k=k, td=exported, node=remap[bad])
    if check:
        problems = validate(g, t)
        if problems:
            raise ContractViolation("result decomposition invalid: " + problems[0])
    st.outcome = "decomposition"
    st.width = width(t)
    st.wall_time_s = time.monotonic() - start
    return Decomposition(td=t)
