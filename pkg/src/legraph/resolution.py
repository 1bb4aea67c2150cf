"""Ng resolution, Lagrangian slice diagrams, and canonical m-copies.

The Lagrangian diagram is a slice-event list like the front, but with
x-extrema explicit and every crossing tagged at construction time with
its generator id, degree, link grade (target copy, source copy) and
which local germ is the z-over strand ('desc' = the strand running from
position i to i+1, 'asc' = the other one).

Conventions pinned by the worked example:
  * front crossing: over = the strand of more negative slope (the
    descending one); degree = mu(over) - mu(under);
  * right cusp: one kink crossing of degree 1; a marked cusp carries its
    basepoint on the lower loop arc, oriented left to right;
  * type-(l, r) vertex: the l left half-edges are rerouted through a
    reversal braid (binom(l,2) fan crossings, h_a over h_b for a < b,
    degree mu_f(a) - mu_f(b)); half-edge potentials are front potential
    plus one on the left, front potential on the right; vertex chords
    v_{a, s} have degree mu_v(a) - mu_v(a+s) + N(val, a, s) - 1 where N
    jumps by 2 each time the chord sweep crosses the bottom sector.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from .frontdiag import FrontDiagram, FrontError, close as front_close


@dataclass(frozen=True)
class LEvent:
    kind: str                 # 'min' | 'max' | 'cross' | 'vertex' | 'base'
    i: int                    # 1-based top strand index
    gen: Optional[str] = None          # crossing generator id
    over: Optional[str] = None         # 'desc' | 'asc'
    degree: Optional[int] = None
    grade: Tuple[int, int] = (1, 1)    # (target copy, source copy)
    vid: Optional[str] = None
    l: int = 0
    r: int = 0
    bid: Optional[str] = None
    sign: int = 1                      # +1: edge oriented left-to-right here
    tag: str = ""                      # 'kink' | 'fan' | 'copy' | ...


@dataclass
class VertexInfo:
    vid: str
    val: int
    l: int
    r: int
    mu_v: Tuple[int, ...]     # half-edge potentials, labels 1..val clockwise
    role: str = "interior"    # 'interior' | 'zero' | 'inf'
    copy: int = 1
    base: Optional[str] = None  # 1-copy vertex id for m-copies


@dataclass
class LagrangianDiagram:
    n_left: int
    mu_left: Tuple[int, ...]
    events: List[LEvent]
    vertices: Dict[str, VertexInfo]
    basepoints: Dict[str, dict]
    copy_count: int = 1

    def strand_counts(self):
        cur = self.n_left * self.copy_count
        out = [cur]
        for ev in self.events:
            if ev.kind == "min":
                cur += 2
            elif ev.kind == "max":
                cur -= 2
            elif ev.kind == "vertex":
                cur += ev.r - ev.l
            out.append(cur)
        return out

    def validate(self):
        counts = self.strand_counts()
        for k, ev in enumerate(self.events):
            n = counts[k]
            need = {"min": (1, n + 1), "max": (1, n - 1), "cross": (1, n - 1),
                    "base": (1, n), "vertex": (1, n - ev.l + 1)}[ev.kind]
            if not need[0] <= ev.i <= max(need[0], need[1]):
                raise FrontError(f"Lagrangian event {k} ({ev.kind}) index "
                                 f"{ev.i} out of range for {n} strands")
        if counts[-1] != 0 and self.n_left == 0:
            raise FrontError("closed diagram does not end with 0 strands")
        return self

    def crossings(self):
        return [ev for ev in self.events if ev.kind == "cross"]

    def crossing_count(self):
        return sum(1 for ev in self.events if ev.kind == "cross")


# ---------------------------------------------------------------------------
# Ng resolution


def ng_resolve(d: FrontDiagram) -> LagrangianDiagram:
    """Resolve a front diagram into a Lagrangian slice diagram."""
    d.validate()
    slices = d.slices()
    events: List[LEvent] = []
    vertices: Dict[str, VertexInfo] = {}
    basepoints: Dict[str, dict] = {}
    ncross = 0
    nvert = 0
    nbase = 0

    for k, ev in enumerate(d.events):
        mu = list(slices[k])
        i = ev.i
        if ev.kind == "cuspl":
            events.append(LEvent("min", i))
        elif ev.kind == "cross":
            ncross += 1
            gid = f"q{ncross}"
            events.append(LEvent("cross", i, gen=gid, over="desc",
                                 degree=mu[i - 1] - mu[i], tag="front"))
        elif ev.kind == "cuspr":
            ncross += 1
            gid = f"q{ncross}"
            events.append(LEvent("cross", i, gen=gid, over="desc",
                                 degree=1, tag="kink"))
            if ev.marked:
                nbase += 1
                bid = f"t{nbase}"
                basepoints[bid] = {"copy": 1, "base": bid}
                # on the upper loop arc, which the edge traverses westward
                events.append(LEvent("base", i, bid=bid, sign=-1))
            events.append(LEvent("max", i))
        elif ev.kind == "base":
            nbase += 1
            bid = f"t{nbase}"
            basepoints[bid] = {"copy": 1, "base": bid}
            events.append(LEvent("base", i, bid=bid, sign=1))
        elif ev.kind == "vertex":
            nvert += 1
            vid = f"v{nvert}"
            l, r = ev.l, ev.r
            # reversal braid: front half-edge a (top to bottom 1..l) dives
            # below; crossing (a, b) for a < b has h_a descending over h_b
            fan_mu = mu[i - 1:i - 1 + l]
            order = list(range(1, l + 1))  # current half-edge per position
            for a in range(1, l):          # h_a sinks below h_{a+1}..h_l
                for step in range(l - a):
                    p = order.index(a)
                    b = order[p + 1]
                    ncross += 1
                    events.append(LEvent(
                        "cross", i + p, gen=f"f:{vid}:{a}:{b}", over="desc",
                        degree=fan_mu[a - 1] - fan_mu[b - 1], tag="fan"))
                    order[p], order[p + 1] = order[p + 1], order[p]
            mu_v = tuple(fan_mu[a] + 1 for a in range(l)) + ev.new_potentials
            vertices[vid] = VertexInfo(vid, l + r, l, r, mu_v)
            events.append(LEvent("vertex", i, vid=vid, l=l, r=r))
    return LagrangianDiagram(d.n_left, tuple(d.mu_left), events,
                             vertices, basepoints).validate()


def resolve_closure(d: FrontDiagram) -> LagrangianDiagram:
    """Resolution of the closure; border vertices get roles 'zero'/'inf'."""
    L = ng_resolve(front_close(d))
    vids = [ev.vid for ev in L.events if ev.kind == "vertex"]
    if d.n_left:
        v0 = vids[0]
        L.vertices[v0].role = "zero"
    if d.n_right:
        vinf = vids[-1]
        L.vertices[vinf].role = "inf"
    return L


# ---------------------------------------------------------------------------
# Vertex chord bookkeeping


def wrap_count(val, a, span):
    """Number of times the clockwise sweep from h_a over `span` sectors
    crosses the bottom sector s_val.  Sectors are s_a, ..., s_{a+span-1}
    with indices mod val in 1..val."""
    n = 0
    for t in range(span):
        if (a + t - 1) % val + 1 == val:
            n += 1
    return n


def vertex_chord_degree(info: VertexInfo, a, span):
    """Degree of v_{a, span} (span >= 1), labels mod val."""
    val = info.val
    b = (a + span - 1) % val + 1
    return info.mu_v[a - 1] - info.mu_v[b - 1] + 2 * wrap_count(val, a, span) - 1


def vertex_lmax(info: VertexInfo):
    dmu = max(info.mu_v) - min(info.mu_v)
    return info.val * (dmu + 3)


def vertex_chords(info: VertexInfo, lmax=None):
    """(generator id, degree) for v_{a, s}, 1 <= s <= lmax.

    Asserts the truncation bound: no chord of degree <= 2 exists with
    lmax < s <= lmax + val.
    """
    if lmax is None:
        lmax = vertex_lmax(info)
    out = []
    for a in range(1, info.val + 1):
        for s in range(1, lmax + 1):
            out.append((f"{info.vid}:{a}:{s}",
                        vertex_chord_degree(info, a, s)))
        for s in range(lmax + 1, lmax + info.val + 1):
            assert vertex_chord_degree(info, a, s) > 2, \
                "vertex chord truncation bound violated"
    return out


# ---------------------------------------------------------------------------
# Canonical m-copies


def m_copy(L: LagrangianDiagram, m: int) -> LagrangianDiagram:
    """Canonical Lagrangian m-copy (copy 1 on top)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if L.copy_count != 1:
        raise ValueError("m_copy expects a 1-copy diagram")
    if m == 1:
        return L
    events: List[LEvent] = []
    vertices: Dict[str, VertexInfo] = {}
    basepoints: Dict[str, dict] = {}
    nmin = 0
    nmax = 0

    def base(p):           # first absolute position of the block of the
        return (p - 1) * m  # 1-copy position p (0-based offset)

    def emit_max(ev):
        """x-crossings, then the caps."""
        b = base(ev.i)
        nonlocal nmax
        nmax += 1
        order = [("t", k) for k in range(1, m + 1)] + \
                [("b", k) for k in range(1, m + 1)]
        target = []
        for k in range(1, m + 1):
            target += [("t", k), ("b", k)]
        for evn in _sort_braid(order, target, b):
            s1, s2 = evn["pair"]
            tt = s1 if s1[0] == "t" else s2
            bb = s2 if s1[0] == "t" else s1
            cc, aa = bb[1], tt[1]         # crossing (t_a, b_c), c < a
            events.append(LEvent(
                "cross", evn["pos"], gen=f"x:max{nmax}:{cc}:{aa}",
                over="desc" if s1 == bb else "asc",
                degree=0, grade=(cc, aa), tag="copy-max"))
        for _k in range(m):
            events.append(LEvent("max", b + 1))

    for ev in L.events:
        b = base(ev.i)
        if ev.kind == "min":
            nmin += 1
            # births copy by copy, then bubble uppers above lower branches
            for k in range(m):
                events.append(LEvent("min", b + 2 * k + 1))
            # order now [u1 l1 u2 l2 ...]; sort to [u1..um l1..lm]
            order = []
            for k in range(1, m + 1):
                order += [("u", k), ("l", k)]
            target = [("u", k) for k in range(1, m + 1)] + \
                     [("l", k) for k in range(1, m + 1)]
            for evn in _sort_braid(order, target, b):
                s1, s2 = evn["pair"]          # s1 above s2 before the swap
                lo = s1 if s1[0] == "l" else s2
                up = s2 if s1[0] == "l" else s1
                i_, j_ = lo[1], up[1]         # crossing (l_i, u_j), i < j
                events.append(LEvent(
                    "cross", evn["pos"], gen=f"y:min{nmin}:{i_}:{j_}",
                    over="desc" if s1 == lo else "asc",
                    degree=-1, grade=(i_, j_), tag="copy-min"))
        elif ev.kind == "max":
            emit_max(ev)
        elif ev.kind == "cross":
            # block swap: descending copies (block A at the top) pass the
            # ascending copies; diamond slice order by (beta - alpha)
            pairs = [(al, be) for al in range(1, m + 1)
                     for be in range(1, m + 1)]
            pairs.sort(key=lambda p: (p[1] - p[0], p[0]))
            order = [("A", k) for k in range(1, m + 1)] + \
                    [("B", k) for k in range(1, m + 1)]
            pos = {s: t for t, s in enumerate(order)}
            for al, be in pairs:
                pa, pb = pos[("A", al)], pos[("B", be)]
                assert pb == pa + 1, "block swap schedule broken"
                if ev.over == "desc":
                    gr = (al, be)
                else:
                    gr = (be, al)
                events.append(LEvent(
                    "cross", b + pa + 1, gen=f"{ev.gen}:{al}:{be}",
                    over=ev.over, degree=ev.degree, grade=gr,
                    tag=ev.tag + "-copy"))
                pos[("A", al)], pos[("B", be)] = pb, pa
        elif ev.kind == "base":
            for k in range(1, m + 1):
                bid = f"{ev.bid}^{k}"
                basepoints[bid] = {"copy": k, "base": ev.bid}
                events.append(LEvent("base", b + k, bid=bid, sign=ev.sign))
        elif ev.kind == "vertex":
            info = L.vertices[ev.vid]
            l, r = ev.l, ev.r
            # incoming blocks: half-edges top-to-bottom h_l..h_1 (post-fan),
            # each block copies 1..m; sort to copy-major [v1 fan, v2 fan, ..]
            order = [(a, k) for a in range(l, 0, -1) for k in range(1, m + 1)]
            target = [(a, k) for k in range(1, m + 1) for a in range(l, 0, -1)]
            for evn in _sort_braid(order, target, b,
                                   schedule="sink-high-copy"):
                (a1, k1), (a2, k2) = evn["pair"]   # s1 above s2
                hi = (a1, k1) if k1 < k2 else (a2, k2)   # lower copy index
                lo = (a1, k1) if k1 > k2 else (a2, k2)
                aa, bb = hi[0], lo[0]
                assert aa < bb and hi[1] < lo[1]
                events.append(LEvent(
                    "cross", evn["pos"],
                    gen=f"{ev.vid}:{aa}:{bb - aa}:{hi[1]}:{lo[1]}",
                    over="desc" if evn["pair"][0] == hi else "asc",
                    degree=info.mu_v[aa - 1] - info.mu_v[bb - 1] - 1,
                    grade=(hi[1], lo[1]), tag="copy-vertex"))
            for k in range(1, m + 1):
                vid = f"{ev.vid}^{k}"
                vertices[vid] = VertexInfo(
                    vid, info.val, l, r, info.mu_v, role=info.role,
                    copy=k, base=ev.vid)
                events.append(LEvent("vertex", b + (k - 1) * r + 1,
                                     vid=vid, l=l, r=r))
            # outgoing copy-major [v1 outs .. vm outs] -> half-edge-major
            order = [(a, k) for k in range(1, m + 1)
                     for a in range(l + 1, l + r + 1)]
            target = [(a, k) for a in range(l + 1, l + r + 1)
                      for k in range(1, m + 1)]
            for evn in _sort_braid(order, target, b,
                                   schedule="rise-high-copy"):
                (a1, k1), (a2, k2) = evn["pair"]
                hi = (a1, k1) if k1 < k2 else (a2, k2)
                lo = (a1, k1) if k1 > k2 else (a2, k2)
                aa, bb = hi[0], lo[0]
                assert aa > bb and hi[1] < lo[1]
                events.append(LEvent(
                    "cross", evn["pos"],
                    gen=f"{ev.vid}:{aa}:{bb - aa}:{hi[1]}:{lo[1]}",
                    over="desc" if evn["pair"][0] == hi else "asc",
                    degree=info.mu_v[aa - 1] - info.mu_v[bb - 1],
                    grade=(hi[1], lo[1]), tag="copy-vertex"))
    out = LagrangianDiagram(L.n_left, L.mu_left, events, vertices,
                            basepoints, copy_count=m)
    return out.validate()


def _sort_braid(order, target, abs_base, schedule="plain"):
    """Adjacent-transposition sort from `order` to `target`.

    Yields {"pos": absolute 1-based position, "pair": (upper, lower)}
    per swap.  Schedules:
      * plain           — insertion sort, last-out-of-place first;
      * sink-high-copy  — copy shells sink bottom-up (copy m first);
      * rise-high-copy  — copy shells rise (copy 2 first).
    Each pair of labels may cross at most once (permutation braid).
    """
    cur = list(order)
    rank = {s: t for t, s in enumerate(target)}

    def do_swap(p):
        s1, s2 = cur[p], cur[p + 1]
        cur[p], cur[p + 1] = s2, s1
        return {"pos": abs_base + p + 1, "pair": (s1, s2)}

    if schedule == "sink-high-copy":
        copies = sorted({k for (_a, k) in order}, reverse=True)
    elif schedule == "rise-high-copy":
        copies = sorted({k for (_a, k) in order})
    else:
        copies = [None]
    for shell in copies:
        moved = True
        while moved:
            moved = False
            for p in range(len(cur) - 1):
                if rank[cur[p]] > rank[cur[p + 1]]:
                    if shell is not None and shell not in (cur[p][1],
                                                           cur[p + 1][1]):
                        continue
                    yield do_swap(p)
                    moved = True
    assert cur == list(target), "sort braid failed to reach target"


# ---------------------------------------------------------------------------
# Edges and generator table


def edge_partition(L: LagrangianDiagram):
    """Assign edge ids to strand segments; edges break at vertices and
    basepoints.  Returns (dict (slice, pos) -> edge id, list of edge ids,
    dict edge id -> set of x-min event indices)."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    counts = L.strand_counts()
    for k, ev in enumerate(L.events):
        n = counts[k]
        i = ev.i

        def passthrough(skip=()):
            shift_at = i
            delta = {"min": 2, "max": -2, "cross": 0, "base": 0,
                     "vertex": ev.r - ev.l}[ev.kind]
            consumed = {"max": [i, i + 1], "cross": [],
                        "vertex": list(range(i, i + ev.l))}.get(ev.kind, [])
            for p in range(1, n + 1):
                if p in consumed or p in skip:
                    continue
                q = p if p < shift_at else p + delta
                union((k, p), (k + 1, q))

        if ev.kind == "min":
            union((k + 1, i), (k + 1, i + 1))
            passthrough()
        elif ev.kind == "max":
            union((k, i), (k, i + 1))
            passthrough()
        elif ev.kind == "cross":
            union((k, i), (k + 1, i + 1))
            union((k, i + 1), (k + 1, i))
            passthrough(skip=[i, i + 1])
        elif ev.kind == "vertex":
            passthrough()
        elif ev.kind == "base":
            # edge breaks here
            passthrough(skip=[i])
            parent.setdefault((k, i), (k, i))
            parent.setdefault((k + 1, i), (k + 1, i))
        parent.setdefault((k, i), (k, i))
    # name edges in first-appearance order
    seg2edge = {}
    names = {}
    edge_list = []
    mins = {}
    for k in range(len(L.events) + 1):
        n = counts[k]
        for p in range(1, n + 1):
            s = (k, p)
            parent.setdefault(s, s)
            root = find(s)
            if root not in names:
                names[root] = f"e{len(names) + 1}"
                edge_list.append(names[root])
            seg2edge[s] = names[root]
    for k, ev in enumerate(L.events):
        if ev.kind == "min":
            eid = seg2edge[(k + 1, ev.i)]
            mins.setdefault(eid, set()).add(k)
    return seg2edge, edge_list, mins


@dataclass
class GenInfo:
    gid: str
    kind: str        # 'crossing' | 'vertex' | 'unit' | 'border'
    degree: int
    grade: Tuple[int, int]


def generator_table(L: LagrangianDiagram, lmax_override=None):
    """All CE generators of the (possibly closed) diagram.

    Border-role vertices ('zero'/'inf') contribute no generators here;
    their chords are translated to border letters by the disk engine.
    """
    table: Dict[str, GenInfo] = {}
    for ev in L.events:
        if ev.kind == "cross":
            table[ev.gen] = GenInfo(ev.gen, "crossing", ev.degree, ev.grade)
    for vid, info in L.vertices.items():
        if info.role != "interior":
            continue
        for gid, deg in vertex_chords(info, lmax_override):
            table[gid] = GenInfo(gid, "vertex", deg, (info.copy, info.copy))
    for bid, rec in L.basepoints.items():
        c = rec["copy"]
        table[f"t:{bid}"] = GenInfo(f"t:{bid}", "unit", 0, (c, c))
        table[f"ti:{bid}"] = GenInfo(f"ti:{bid}", "unit", 0, (c, c))
    return table


def table_to_json(table):
    return [
        {"id": g.gid, "kind": g.kind, "degree": g.degree,
         "grade": list(g.grade)}
        for g in sorted(table.values(), key=lambda g: g.gid)
    ]
