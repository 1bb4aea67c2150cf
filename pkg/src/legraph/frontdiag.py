"""Bordered front diagrams as slice-event sequences.

A diagram is a left border (strand count + Maslov potentials, top to
bottom) followed by one event per x-slice.  Events use 1-based strand
indices counted from the top:

    cuspl i m      left cusp, inserts strands at i, i+1 with potentials m, m-1
    cuspr i [marked]  right cusp, consumes strands i, i+1 (marked = basepoint
                   at the cusp tip)
    cross i        crossing of strands i, i+1
    vertex i l r [p1,...,pr]  vertex consuming l strands at i..i+l-1 and
                   emitting r strands with the given potentials
    base i         basepoint on strand i (oriented along increasing x)

Validation propagates potentials from the left border and enforces the
cusp rule mu(upper) = mu(lower) + 1 at every right cusp.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple


class FrontError(Exception):
    """Invalid diagram or malformed DSL input."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class CuspL:
    i: int
    m: int
    kind: str = field(default="cuspl", init=False)

    def arity(self):
        return 2


@dataclass(frozen=True)
class CuspR:
    i: int
    marked: bool = False
    kind: str = field(default="cuspr", init=False)

    def arity(self):
        return -2


@dataclass(frozen=True)
class Cross:
    i: int
    kind: str = field(default="cross", init=False)

    def arity(self):
        return 0


@dataclass(frozen=True)
class Vertex:
    i: int
    l: int
    r: int
    new_potentials: Tuple[int, ...] = ()
    kind: str = field(default="vertex", init=False)

    def arity(self):
        return self.r - self.l


@dataclass(frozen=True)
class Base:
    i: int
    kind: str = field(default="base", init=False)

    def arity(self):
        return 0


Event = object  # any of the above


@dataclass(frozen=True)
class FrontDiagram:
    n_left: int
    mu_left: Tuple[int, ...]
    events: Tuple[Event, ...]

    # -- validation / derived data ------------------------------------

    def slices(self):
        """Potentials per strand just before each event, plus the final slice.

        Returns a list of length len(events)+1 of tuples of potentials.
        Raises FrontError on any inconsistency.
        """
        cur = list(self.mu_left)
        if len(cur) != self.n_left:
            raise FrontError("mu_left length does not match n_left")
        out = [tuple(cur)]
        for k, ev in enumerate(self.events):
            n = len(cur)
            i = ev.i
            if ev.kind == "cuspl":
                if not 1 <= i <= n + 1:
                    raise FrontError(f"event {k}: cuspl index {i} out of range")
                cur[i - 1:i - 1] = [ev.m, ev.m - 1]
            elif ev.kind == "cuspr":
                if not 1 <= i <= n - 1:
                    raise FrontError(f"event {k}: cuspr index {i} out of range")
                if cur[i - 1] != cur[i] + 1:
                    raise FrontError(
                        f"event {k}: right cusp needs mu(upper)=mu(lower)+1, "
                        f"got {cur[i - 1]}, {cur[i]}")
                del cur[i - 1:i + 1]
            elif ev.kind == "cross":
                if not 1 <= i <= n - 1:
                    raise FrontError(f"event {k}: cross index {i} out of range")
                cur[i - 1], cur[i] = cur[i], cur[i - 1]
            elif ev.kind == "vertex":
                if ev.l < 0 or ev.r < 0 or ev.l + ev.r < 1:
                    raise FrontError(f"event {k}: vertex must have valence >= 1")
                if len(ev.new_potentials) != ev.r:
                    raise FrontError(f"event {k}: vertex needs {ev.r} potentials")
                if not 1 <= i <= n - ev.l + 1 or (ev.l == 0 and not 1 <= i <= n + 1):
                    raise FrontError(f"event {k}: vertex index {i} out of range")
                cur[i - 1:i - 1 + ev.l] = list(ev.new_potentials)
            elif ev.kind == "base":
                if not 1 <= i <= n:
                    raise FrontError(f"event {k}: base index {i} out of range")
            else:
                raise FrontError(f"event {k}: unknown event kind {ev.kind!r}")
            out.append(tuple(cur))
        return out

    @property
    def n_right(self):
        return len(self.slices()[-1])

    @property
    def mu_right(self):
        return self.slices()[-1]

    def validate(self):
        """Full validation; returns self for chaining."""
        self.slices()
        # every x-max-bearing closed component needs a vertex or basepoint
        for comp in self._components():
            if comp["has_max"] and not comp["has_break"] and comp["closed"]:
                raise FrontError(
                    "closed component through an x-maximum carries no vertex "
                    "or basepoint")
        return self

    # -- component bookkeeping ----------------------------------------
    #
    # Strand segments are (slice, position) pairs; cusps join the two
    # branches, crossings continue both strands, vertices and basepoints
    # break components ("edges" end there).

    def _components(self):
        """Connected components of the diagram minus vertices/basepoints."""
        slices = self.slices()
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

        info = {}

        def seg(k, p):
            s = (k, p)
            parent.setdefault(s, s)
            return s

        for k, ev in enumerate(self.events):
            n = len(slices[k])
            i = ev.i
            if ev.kind == "cuspl":
                union(seg(k + 1, i), seg(k + 1, i + 1))
                for p in range(1, n + 1):
                    q = p if p < i else p + 2
                    union(seg(k, p), seg(k + 1, q))
            elif ev.kind == "cuspr":
                union(seg(k, i), seg(k, i + 1))
                info.setdefault(find(seg(k, i)), {})["max"] = True
                if ev.marked:
                    info.setdefault(find(seg(k, i)), {})["break"] = True
                for p in range(1, n + 1):
                    if p < i:
                        union(seg(k, p), seg(k + 1, p))
                    elif p > i + 1:
                        union(seg(k, p), seg(k + 1, p - 2))
            elif ev.kind == "cross":
                union(seg(k, i), seg(k + 1, i + 1))
                union(seg(k, i + 1), seg(k + 1, i))
                for p in range(1, n + 1):
                    if p not in (i, i + 1):
                        union(seg(k, p), seg(k + 1, p))
            elif ev.kind == "vertex":
                for p in range(ev.l):
                    info.setdefault(find(seg(k, i + p)), {})["break"] = True
                for p in range(ev.r):
                    info.setdefault(find(seg(k + 1, i + p)), {})["break"] = True
                for p in range(1, n + 1):
                    if p < i:
                        union(seg(k, p), seg(k + 1, p))
                    elif p >= i + ev.l:
                        union(seg(k, p), seg(k + 1, p - ev.l + ev.r))
            elif ev.kind == "base":
                info.setdefault(find(seg(k, i)), {})["break"] = True
                for p in range(1, n + 1):
                    union(seg(k, p), seg(k + 1, p))
        # collect
        comps = {}
        for s in list(parent):
            r = find(s)
            comps.setdefault(r, []).append(s)
        # re-key info by final root
        out = []
        for r, segs in comps.items():
            has_break = any(
                info.get(find(s), {}).get("break") for s in segs) or \
                info.get(r, {}).get("break", False)
            has_max = any(
                info.get(find(s), {}).get("max") for s in segs) or \
                info.get(r, {}).get("max", False)
            touches_border = any(k == 0 for (k, _p) in segs) or any(
                k == len(self.events) for (k, _p) in segs)
            out.append({
                "segments": segs,
                "has_break": has_break,
                "has_max": has_max,
                "closed": not touches_border,
            })
        return out

    # -- constructors ---------------------------------------------------

    def with_events(self, events):
        return replace(self, events=tuple(events))


# ---------------------------------------------------------------------------
# DSL


def parse_front(text):
    """Parse the one-statement-per-line DSL into a validated FrontDiagram."""
    n_left = None
    mu_left = ()
    mu_right = None
    events = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0].lower()
        try:
            if head == "left":
                if n_left is not None:
                    raise FrontError("duplicate 'left' statement", lineno)
                mu_left = _parse_intlist(" ".join(toks[1:]), lineno)
                n_left = len(mu_left)
            elif head == "right":
                mu_right = _parse_intlist(" ".join(toks[1:]), lineno)
            elif head == "cuspl":
                events.append(CuspL(int(toks[1]), int(toks[2])))
            elif head == "cuspr":
                marked = len(toks) > 2 and toks[2].lower() == "marked"
                events.append(CuspR(int(toks[1]), marked))
            elif head == "cross":
                events.append(Cross(int(toks[1])))
            elif head == "vertex":
                pots = _parse_intlist(" ".join(toks[4:]), lineno) if len(toks) > 4 else ()
                events.append(Vertex(int(toks[1]), int(toks[2]), int(toks[3]), pots))
            elif head == "base":
                events.append(Base(int(toks[1])))
            else:
                raise FrontError(f"unknown statement {head!r}", lineno)
        except (IndexError, ValueError) as exc:
            raise FrontError(f"malformed statement: {raw.strip()!r}", lineno) from exc
    if n_left is None:
        raise FrontError("missing 'left' statement")
    d = FrontDiagram(n_left, mu_left, tuple(events))
    d.validate()
    if mu_right is not None and tuple(mu_right) != d.mu_right:
        raise FrontError(
            f"declared right border {list(mu_right)} does not match "
            f"computed {list(d.mu_right)}")
    return d


def _parse_intlist(s, lineno):
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise FrontError("expected [..] integer list", lineno)
    body = s[1:-1].strip()
    if not body:
        return ()
    return tuple(int(t) for t in body.replace(",", " ").split())


def serialize_front(d):
    """Canonical DSL text; parse(serialize(d)) == d."""
    lines = [f"left [{','.join(map(str, d.mu_left))}]"]
    for ev in d.events:
        if ev.kind == "cuspl":
            lines.append(f"cuspl {ev.i} {ev.m}")
        elif ev.kind == "cuspr":
            lines.append(f"cuspr {ev.i} marked" if ev.marked else f"cuspr {ev.i}")
        elif ev.kind == "cross":
            lines.append(f"cross {ev.i}")
        elif ev.kind == "vertex":
            pots = ",".join(map(str, ev.new_potentials))
            lines.append(f"vertex {ev.i} {ev.l} {ev.r} [{pots}]")
        elif ev.kind == "base":
            lines.append(f"base {ev.i}")
    lines.append(f"right [{','.join(map(str, d.mu_right))}]")
    return "\n".join(lines) + "\n"


def front_to_json(d):
    return {
        "n_left": d.n_left,
        "mu_left": list(d.mu_left),
        "n_right": d.n_right,
        "mu_right": list(d.mu_right),
        "events": [_event_json(ev) for ev in d.events],
    }


def _event_json(ev):
    out = {"kind": ev.kind, "i": ev.i}
    if ev.kind == "cuspl":
        out["m"] = ev.m
    elif ev.kind == "cuspr":
        out["marked"] = ev.marked
    elif ev.kind == "vertex":
        out["l"] = ev.l
        out["r"] = ev.r
        out["new_potentials"] = list(ev.new_potentials)
    return out


# ---------------------------------------------------------------------------
# Closure / concatenation


def concat(d1, d2):
    """Splice two diagrams along matching borders."""
    if d1.n_right != d2.n_left or d1.mu_right != tuple(d2.mu_left):
        raise FrontError(
            f"border mismatch: {list(d1.mu_right)} vs {list(d2.mu_left)}")
    return FrontDiagram(d1.n_left, d1.mu_left, d1.events + d2.events).validate()


def close(d):
    """Attach the 0_{n_L} and infinity_{n_R} vertex pieces."""
    d.validate()
    events = []
    if d.n_left:
        events.append(Vertex(1, 0, d.n_left, tuple(d.mu_left)))
    events.extend(d.events)
    if d.n_right:
        events.append(Vertex(1, d.n_right, 0))
    return FrontDiagram(0, (), tuple(events)).validate()


def cut(d, k):
    """Split at slice k (before event k); returns (left piece, right piece)."""
    if not 0 <= k <= len(d.events):
        raise FrontError(f"cut index {k} out of range")
    mu_mid = d.slices()[k]
    left = FrontDiagram(d.n_left, d.mu_left, d.events[:k]).validate()
    right = FrontDiagram(len(mu_mid), mu_mid, d.events[k:]).validate()
    return left, right


# ---------------------------------------------------------------------------
# Moves


@dataclass(frozen=True)
class MoveSpec:
    """A move name, an event index, and per-move parameters.

    move in {"I","II","III","IV","V","VI","B1","B2","B3"}; `inverse`
    applies the right-to-left reading of the move's defining rewrite.
    """
    move: str
    at: int
    strand: int = 0
    inverse: bool = False


def apply_move(d, spec):
    d.validate()
    move = spec.move.upper()
    if move == "IV":
        move = "VI"  # IV is a special case of VI
    handler = {
        "I": _move_I, "II": _move_II, "III": _move_III,
        "V": _move_V, "VI": _move_VI,
        "B1": _move_B1, "B2": _move_B2, "B3": _move_B3,
    }.get(move)
    if handler is None:
        raise FrontError(f"unknown move {spec.move!r}")
    out = handler(d, spec)
    out.validate()
    _check_border_preserved(d, out)
    return out


def _check_border_preserved(d, out):
    if (d.n_left, d.mu_left) != (out.n_left, out.mu_left) or \
            d.mu_right != out.mu_right:
        raise FrontError("move changed border data")


def _events_list(d):
    return list(d.events)


def _move_I(d, spec):
    """Move I: a small loop (cusp pair plus one crossing) on a strand.

    Forward at slice `at`, strand s:
        []  ->  [cuspl(s+1, mu(s)), cross(s), cuspr(s+1)]
    which preserves the strand's potential.  Inverse removes the pattern.
    """
    ev = _events_list(d)
    s = spec.strand
    if not spec.inverse:
        slices = d.slices()
        if not 0 <= spec.at <= len(ev):
            raise FrontError("move I: index out of range")
        if not 1 <= s <= len(slices[spec.at]):
            raise FrontError("move I: strand out of range")
        m = slices[spec.at][s - 1]
        ev[spec.at:spec.at] = [CuspL(s + 1, m), Cross(s), CuspR(s + 1)]
        return d.with_events(ev)
    pat = ev[spec.at:spec.at + 3]
    if len(pat) == 3 and pat[0].kind == "cuspl" and pat[1].kind == "cross" \
            and pat[2].kind == "cuspr" and not pat[2].marked \
            and pat[1].i == pat[0].i - 1 and pat[2].i == pat[0].i:
        del ev[spec.at:spec.at + 3]
        return d.with_events(ev)
    raise FrontError("move I: pattern mismatch")


def _move_II(d, spec):
    """Move II: a cusp pokes through a transverse strand.

    Left-cusp forms (S = the transverse strand, at position i both sides):
      poke up:   [cuspl(i, m), cross(i+1), cross(i)]   <-> [cuspl(i+1, m)]
      poke down: [cuspl(i+1, m), cross(i), cross(i+1)] <-> [cuspl(i, m)]
    Right-cusp forms:
      poke up:   [cross(i-1), cross(i), cuspr(i-1)]    <-> [cuspr(i)]
      poke down: [cross(i+1), cross(i), cuspr(i+1)]    <-> [cuspr(i)]
    Forward reads right-to-left here (cusp moves past S, adding two
    crossings); inverse removes them.  `strand` >= 0 pokes up.
    """
    ev = _events_list(d)
    k = spec.at
    up = spec.strand >= 0
    if not spec.inverse:
        if k >= len(ev):
            raise FrontError("move II: index out of range")
        e0 = ev[k]
        n = len(d.slices()[k])
        if e0.kind == "cuspl":
            i = e0.i
            if up:
                if i < 2:
                    raise FrontError("move II: no strand above cusp")
                ev[k:k + 1] = [CuspL(i - 1, e0.m), Cross(i), Cross(i - 1)]
            else:
                if i > n:
                    raise FrontError("move II: no strand below cusp")
                ev[k:k + 1] = [CuspL(i + 1, e0.m), Cross(i), Cross(i + 1)]
        elif e0.kind == "cuspr":
            i = e0.i
            if up:
                if i < 2:
                    raise FrontError("move II: no strand above cusp")
                ev[k:k + 1] = [Cross(i - 1), Cross(i), CuspR(i - 1, e0.marked)]
            else:
                if i + 2 > n:
                    raise FrontError("move II: no strand below cusp")
                ev[k:k + 1] = [Cross(i + 1), Cross(i), CuspR(i + 1, e0.marked)]
        else:
            raise FrontError("move II: pattern mismatch (need a cusp)")
        return d.with_events(ev)
    # inverse: recognize the three-event patterns
    pat = ev[k:k + 3]
    if len(pat) == 3 and pat[0].kind == "cuspl" and pat[1].kind == "cross" \
            and pat[2].kind == "cross":
        i = pat[0].i
        if pat[1].i == i + 1 and pat[2].i == i:
            ev[k:k + 3] = [CuspL(i + 1, pat[0].m)]
            return d.with_events(ev)
        if pat[1].i == i - 1 and pat[2].i == i:
            ev[k:k + 3] = [CuspL(i - 1, pat[0].m)]
            return d.with_events(ev)
    if len(pat) == 3 and pat[0].kind == "cross" and pat[1].kind == "cross" \
            and pat[2].kind == "cuspr":
        c = pat[2].i
        if pat[0].i == c and pat[1].i == c + 1:
            ev[k:k + 3] = [CuspR(c + 1, pat[2].marked)]
            return d.with_events(ev)
        if pat[0].i == c and pat[1].i == c - 1:
            ev[k:k + 3] = [CuspR(c - 1, pat[2].marked)]
            return d.with_events(ev)
    raise FrontError("move II: pattern mismatch")


def _move_III(d, spec):
    """Move III: braid relation on three adjacent crossings."""
    ev = _events_list(d)
    k = spec.at
    pat = ev[k:k + 3]
    if len(pat) != 3 or any(e.kind != "cross" for e in pat):
        raise FrontError("move III: need three crossings")
    a, b, c = (e.i for e in pat)
    if a == c and abs(a - b) == 1:
        ev[k:k + 3] = [Cross(b), Cross(a), Cross(b)]
        return d.with_events(ev)
    raise FrontError("move III: pattern mismatch")


def _move_V(d, spec):
    """Move V: a strand passes downward through a vertex.

    With the strand S just above the fan on both sides:
        LHS  [cross(i), cross(i+1), ..., cross(i+l-1), vertex(i, l, r, P)]
        RHS  [vertex(i+1, l, r, P), cross(i), ..., cross(i+r-1)]
    Forward rewrites LHS -> RHS at index `at` (the first crossing);
    inverse rewrites RHS -> LHS at the vertex index.
    """
    ev = _events_list(d)
    k = spec.at
    if not spec.inverse:
        j = k
        while j < len(ev) and ev[j].kind == "cross":
            j += 1
        if j >= len(ev) or ev[j].kind != "vertex":
            raise FrontError("move V: no vertex after crossings")
        v = ev[j]
        if j - k != v.l:
            raise FrontError("move V: need exactly l crossings before the vertex")
        if [c.i for c in ev[k:j]] != [v.i + t for t in range(v.l)]:
            raise FrontError("move V: pattern mismatch")
        ev[k:j + 1] = [Vertex(v.i + 1, v.l, v.r, v.new_potentials)] + \
            [Cross(v.i + t) for t in range(v.r)]
        return d.with_events(ev)
    if k >= len(ev) or ev[k].kind != "vertex":
        raise FrontError("move V: need vertex at index")
    v = ev[k]
    if v.i < 2:
        raise FrontError("move V: no strand above the fan")
    after = ev[k + 1:k + 1 + v.r]
    if len(after) != v.r or any(e.kind != "cross" for e in after) or \
            [c.i for c in after] != [v.i - 1 + t for t in range(v.r)]:
        raise FrontError("move V: pattern mismatch")
    ev[k:k + 1 + v.r] = [Cross(v.i - 1 + t) for t in range(v.l)] + \
        [Vertex(v.i - 1, v.l, v.r, v.new_potentials)]
    return d.with_events(ev)


def _move_VI(d, spec):
    """Move VI: vertex absorbs/releases an edge through an adjacent cusp.

    Forward (absorb, (l, r) -> (l+1, r-1)):
        [vertex(i, l, r, P)]  ->  [cuspl(i+l, m), vertex(i, l+1, r-1, P[:-1])]
    where the released strand is the bottom right half-edge with
    potential P[-1] = m-1.  Inverse reads right-to-left.
    """
    ev = _events_list(d)
    k = spec.at
    if not spec.inverse:
        if k >= len(ev) or ev[k].kind != "vertex":
            raise FrontError("move VI: need a vertex")
        v = ev[k]
        if v.r < 1:
            raise FrontError("move VI: vertex has no right half-edges")
        m = v.new_potentials[-1] + 1
        ev[k:k + 1] = [CuspL(v.i + v.l, m),
                       Vertex(v.i, v.l + 1, v.r - 1, v.new_potentials[:-1])]
        return d.with_events(ev)
    pat = ev[k:k + 2]
    if len(pat) != 2 or pat[0].kind != "cuspl" or pat[1].kind != "vertex":
        raise FrontError("move VI: pattern mismatch")
    cusp, v = pat
    if v.l < 1 or cusp.i != v.i + v.l - 1:
        raise FrontError("move VI: cusp is not the vertex's bottom-left edge")
    ev[k:k + 2] = [Vertex(v.i, v.l - 1, v.r + 1,
                          v.new_potentials + (cusp.m - 1,))]
    return d.with_events(ev)


def _move_B1(d, spec):
    """B1: slide a basepoint through an adjacent crossing."""
    ev = _events_list(d)
    k = spec.at
    pat = ev[k:k + 2]
    if len(pat) == 2 and pat[0].kind == "base" and pat[1].kind == "cross":
        b, c = pat
        if b.i in (c.i, c.i + 1):
            ni = c.i + 1 if b.i == c.i else c.i
            ev[k:k + 2] = [Cross(c.i), Base(ni)]
            return d.with_events(ev)
    if len(pat) == 2 and pat[0].kind == "cross" and pat[1].kind == "base":
        c, b = pat
        if b.i in (c.i, c.i + 1):
            ni = c.i + 1 if b.i == c.i else c.i
            ev[k:k + 2] = [Base(ni), Cross(c.i)]
            return d.with_events(ev)
    raise FrontError("move B1: pattern mismatch")


def _move_B2(d, spec):
    """B2: split a basepoint in two (forward) or merge two (inverse)."""
    ev = _events_list(d)
    k = spec.at
    if not spec.inverse:
        if k >= len(ev) or ev[k].kind != "base":
            raise FrontError("move B2: need a basepoint")
        ev[k:k + 1] = [Base(ev[k].i), Base(ev[k].i)]
        return d.with_events(ev)
    pat = ev[k:k + 2]
    if len(pat) != 2 or pat[0].kind != "base" or pat[1].kind != "base" \
            or pat[0].i != pat[1].i:
        raise FrontError("move B2: pattern mismatch")
    ev[k:k + 2] = [Base(pat[0].i)]
    return d.with_events(ev)


def _move_B3(d, spec):
    """B3: create/remove a basepoint on a half-edge adjacent to a vertex.

    Forward inserts `base` just after the vertex on its `strand`-th
    emitted half-edge (1-based); with r = 0, just before it on the
    `strand`-th consumed half-edge.
    """
    ev = _events_list(d)
    k = spec.at
    if not spec.inverse:
        if k >= len(ev) or ev[k].kind != "vertex":
            raise FrontError("move B3: need a vertex")
        v = ev[k]
        s = spec.strand or 1
        if v.r >= 1:
            if not 1 <= s <= v.r:
                raise FrontError("move B3: half-edge out of range")
            ev[k + 1:k + 1] = [Base(v.i + s - 1)]
        else:
            if not 1 <= s <= v.l:
                raise FrontError("move B3: half-edge out of range")
            ev[k:k] = [Base(v.i + s - 1)]
        return d.with_events(ev)
    # inverse: basepoint adjacent to a vertex disappears
    pat = ev[k:k + 2]
    if len(pat) == 2 and pat[0].kind == "vertex" and pat[1].kind == "base" \
            and pat[0].i <= pat[1].i < pat[0].i + pat[0].r:
        del ev[k + 1]
        return d.with_events(ev)
    if len(pat) == 2 and pat[0].kind == "base" and pat[1].kind == "vertex" \
            and pat[1].i <= pat[0].i < pat[1].i + pat[1].l:
        del ev[k]
        return d.with_events(ev)
    raise FrontError("move B3: pattern mismatch")


# ---------------------------------------------------------------------------
# Normal form


def is_normal_form(d):
    """All vertices of type (val, 0) consumed last at the top; all right
    cusps marked."""
    try:
        d.validate()
    except FrontError:
        return False
    seen_vertex = False
    for ev in d.events:
        if ev.kind == "vertex":
            if ev.r != 0 or ev.i != 1:
                return False
            seen_vertex = True
        else:
            if seen_vertex:
                return False
            if ev.kind == "cuspr" and not ev.marked:
                return False
    return True


def normalize(d):
    """Rewrite into normal form; returns (normal diagram, move trace).

    The trace lists MoveSpec-like dicts replaying the *forward* rewrites
    applied here, so the output transforms back to the input by undoing
    them in reverse order.
    """
    d.validate()
    trace = []
    ev = list(d.events)

    # 1. mark every right cusp (basepoint lives at the cusp tip)
    for k, e in enumerate(ev):
        if e.kind == "cuspr" and not e.marked:
            ev[k] = CuspR(e.i, True)
            trace.append({"move": "mark-cusp", "at": k})
    cur = FrontDiagram(d.n_left, d.mu_left, tuple(ev)).validate()

    # 2. vertices to type (val, 0) via repeated VI
    changed = True
    while changed:
        changed = False
        for k, e in enumerate(cur.events):
            if e.kind == "vertex" and e.r > 0:
                cur = apply_move(cur, MoveSpec("VI", k))
                trace.append({"move": "VI", "at": k})
                changed = True
                break

    # 3. float each (val,0) vertex to the end, raising its fan to the top
    #    with V moves where other strands lie above it
    done = False
    while not done:
        done = True
        evs = list(cur.events)
        for k, e in enumerate(evs):
            if e.kind != "vertex":
                continue
            # raise fan to the top: strand above the fan passes through (V)
            if e.i > 1:
                cur = apply_move(cur, MoveSpec("V", k, inverse=True))
                trace.append({"move": "V", "at": k, "inverse": True})
                done = False
                break
            # commute past a later non-vertex event
            if k + 1 < len(evs) and evs[k + 1].kind != "vertex":
                nxt = evs[k + 1]
                # next event indices are below the (already consumed) fan,
                # so shift them up by l when moving before the vertex
                shifted = _shift_event(nxt, e.l)
                evs[k], evs[k + 1] = shifted, e
                cur = cur.with_events(evs).validate()
                trace.append({"move": "slide", "at": k})
                done = False
                break
    assert is_normal_form(cur), "normalize failed to reach normal form"
    return cur, trace


def _shift_event(ev, delta):
    if ev.kind == "cuspl":
        return CuspL(ev.i + delta, ev.m)
    if ev.kind == "cuspr":
        return CuspR(ev.i + delta, ev.marked)
    if ev.kind == "cross":
        return Cross(ev.i + delta)
    if ev.kind == "vertex":
        return Vertex(ev.i + delta, ev.l, ev.r, ev.new_potentials)
    if ev.kind == "base":
        return Base(ev.i + delta)
    raise FrontError(f"cannot shift {ev.kind}")


# ---------------------------------------------------------------------------
# Example fronts


def trivial_tangle(mu):
    """I_n with the given potentials."""
    mu = tuple(mu)
    return FrontDiagram(len(mu), mu, ()).validate()


def example_graph():
    """The closed front with one type-(2,2) vertex and two marked right
    cusps used throughout the test suite (two nested loops joined at the
    vertex, potentials 1 on both upper strands).

    Strands before the vertex: [outer upper (1), inner upper (1),
    inner lower (0), outer lower (0)]; the vertex consumes the two lower
    strands (its left half-edges, top to bottom h1 = inner, h2 = outer).
    """
    return parse_front(
        """
        left []
        cuspl 1 1      # outer loop
        cuspl 2 1      # inner loop
        vertex 3 2 2 [0,0]
        cuspr 2 marked # inner right cusp (t1)
        cuspr 1 marked # outer right cusp (t2)
        right []
        """)
