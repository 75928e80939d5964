"""Exact calculus of drawn curves and arcs on a triangulated surface.

A *drawn object* is the combinatorial trace of an embedded closed curve or
of an embedded arc between vertices: the sequence of slots through which it
exits triangles (cyclic for curves, linear for arcs, together with the
endpoint corners).  Reduced sequences - no immediate re-crossing, arc ends
leaving through the side opposite their corner - are unique in their
isotopy class rel the vertex set, so they serve as canonical forms.

Relative positions of parallel strands are never stored; they are recovered
on demand by the divergence comparator: two strands crossing a common edge
are traced in parallel until they separate, and the turn taken at the
separation decides their order along the edge.  Intersection numbers,
crossing signs and Dehn-twist images all come from this comparator.

Rank convention inside a triangle entered through slot ``g`` (CCW
orientation, corners named by the slot at whose tail they sit)::

    rank 0   arc ends at corner(g)          tail of g
    rank 1   strand exits through prv(g)    cuts the tail corner
    rank 2   arc ends at corner(prv(g))     the far vertex
    rank 3   strand exits through nxt(g)    cuts the head corner
    rank 4   arc ends at corner(nxt(g))     head of g

Tracing two strands forward from a common entry and comparing ranks at the
first disagreement answers "who is nearer the tail corner of the entry";
the answer propagates verbatim along shared corridors, and arc ends at a
common vertex compare as ties (their order around the vertex is free).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .complexes import Surf, _nxt, _prv
from .errors import InternalError, NotACurve


@dataclass(frozen=True)
class Drawn:
    """A drawn closed curve, or an arc with endpoint corners."""

    steps: tuple[int, ...]
    start: int | None = None
    end: int | None = None

    @property
    def closed(self) -> bool:
        return self.start is None

    def __len__(self) -> int:
        return len(self.steps)


# ---------------------------------------------------------------------------
# Reduction, canonical forms, validity
# ---------------------------------------------------------------------------


def _reduce_cyclic(glue, steps):
    out = list(steps)
    while True:
        stack = []
        for s in out:
            if stack and s == glue[stack[-1]]:
                stack.pop()
            else:
                stack.append(s)
        changed = len(stack) != len(out)
        while len(stack) >= 2 and stack[0] == glue[stack[-1]]:
            stack.pop()
            stack.pop(0)
            changed = True
        out = stack
        if not changed:
            return tuple(out)


def _reduce_linear(glue, steps):
    stack = []
    for s in steps:
        if stack and s == glue[stack[-1]]:
            stack.pop()
        else:
            stack.append(s)
    return stack


def reduce_drawn(surf: Surf, d: Drawn) -> Drawn:
    """The unique reduced form of a drawn object."""
    glue = surf.glue
    if d.closed:
        return Drawn(_reduce_cyclic(glue, d.steps))
    steps = _reduce_linear(glue, d.steps)
    start, end = d.start, d.end
    while True:
        if steps:
            s0 = steps[0]
            if s0 == start:                       # crosses the outgoing side
                start = _nxt(glue[start])
                steps = _reduce_linear(glue, steps[1:])
                continue
            if s0 == _prv(start):                 # crosses the incoming side
                start = glue[_prv(start)]
                steps = _reduce_linear(glue, steps[1:])
                continue
            sl = glue[steps[-1]]                  # slot it entered the last tri by
            if sl == end:
                end = _nxt(glue[end])
                steps = _reduce_linear(glue, steps[:-1])
                continue
            if sl == _prv(end):
                end = glue[_prv(end)]
                steps = _reduce_linear(glue, steps[:-1])
                continue
        break
    out = Drawn(tuple(steps), start, end)
    check_drawn(surf, out)
    return out


def reverse_drawn(surf: Surf, d: Drawn) -> Drawn:
    glue = surf.glue
    steps = tuple(glue[s] for s in reversed(d.steps))
    if d.closed:
        return Drawn(steps)
    return Drawn(steps, d.end, d.start)


def canonical_cyclic(surf: Surf, steps, oriented: bool):
    """Lexicographically least rotation (least of both directions if
    unoriented) of a reduced cyclic sequence."""
    if not steps:
        return tuple(steps)
    best = min(tuple(steps[i:]) + tuple(steps[:i]) for i in range(len(steps)))
    if oriented:
        return best
    rev = tuple(surf.glue[s] for s in reversed(steps))
    best_r = min(rev[i:] + rev[:i] for i in range(len(rev)))
    return min(best, best_r)


def check_drawn(surf: Surf, d: Drawn) -> None:
    glue = surf.glue
    st = d.steps
    for i in range(len(st) - 1):
        if surf.tri(st[i + 1]) != surf.tri(glue[st[i]]):
            raise InternalError("inconsistent step sequence")
    if d.closed:
        if st and surf.tri(st[0]) != surf.tri(glue[st[-1]]):
            raise InternalError("inconsistent cyclic closure")
    else:
        if d.start is None or d.end is None:
            raise InternalError("arc without endpoints")
        if st:
            if surf.tri(st[0]) != surf.tri(d.start):
                raise InternalError("arc start in wrong triangle")
            if surf.tri(d.end) != surf.tri(glue[st[-1]]):
                raise InternalError("arc end in wrong triangle")
        elif surf.tri(d.start) != surf.tri(d.end):
            raise InternalError("empty arc spans two triangles")


def is_reduced(surf: Surf, d: Drawn) -> bool:
    return reduce_drawn(surf, d).steps == d.steps if not d.closed else \
        _reduce_cyclic(surf.glue, d.steps) == tuple(d.steps)


def is_primitive(steps) -> bool:
    n = len(steps)
    if n == 0:
        return False
    t = tuple(steps)
    for p in range(1, n):
        if n % p == 0 and t[p:] + t[:p] == t:
            return False
    return True


# ---------------------------------------------------------------------------
# Coordinates and resolution
# ---------------------------------------------------------------------------


def edge_weights(surf: Surf, d: Drawn) -> dict[int, int]:
    w = {}
    for s in d.steps:
        e = surf.edge_rep[s]
        w[e] = w.get(e, 0) + 1
    return w


def coords_vector(surf: Surf, d: Drawn) -> tuple[int, ...]:
    w = edge_weights(surf, d)
    return tuple(w.get(e, 0) for e in surf.edges)


def components_from_coords(surf: Surf, vec) -> list[Drawn]:
    """Resolve normal coordinates into disjoint closed components."""
    edges = surf.edges
    if len(vec) != len(edges):
        raise NotACurve("coordinate vector has wrong length")
    if any(x < 0 for x in vec):
        raise NotACurve("negative normal coordinate")
    glue = surf.glue
    w = {}
    for e, x in zip(edges, vec):
        w[e] = x
        w[glue[e]] = x

    t_corner = {}
    for s in range(surf.nslots):
        tot = w[_prv(s)] + w[s] - w[_nxt(s)]
        if tot % 2 or tot < 0:
            raise NotACurve("coordinates violate the matching conditions")
        t_corner[s] = tot // 2

    def through(s, p):
        # Enter tri(s) across slot s at position p (1..w[s], tail->head);
        # return the (exit_slot, exit_position) inside this triangle.
        if p <= t_corner[s]:
            m = _prv(s)
            return m, w[m] + 1 - p
        m = _nxt(s)
        return m, w[s] - p + 1

    seen = set()
    out = []
    for s0 in range(surf.nslots):
        for p0 in range(1, w.get(s0, 0) + 1):
            if (s0, p0) in seen:
                continue
            steps = []
            s, p = s0, p0
            while True:
                if (s, p) in seen:
                    break
                seen.add((s, p))
                seen.add((glue[s], w[s] + 1 - p))  # same point, other side
                m, q = through(s, p)
                steps.append(m)
                s, p = glue[m], w[m] + 1 - q
            if (s, p) != (s0, p0):
                raise NotACurve("resolution failed to close up")
            out.append(Drawn(tuple(steps)))
    for d in out:
        check_drawn(surf, d)
    return out


# ---------------------------------------------------------------------------
# Divergence comparator
# ---------------------------------------------------------------------------


class _Cursor:
    """Walks a drawn object away from one of its edge passages.

    direction +1 follows the stored orientation, -1 runs against it.  The
    fresh cursor has just crossed passage ``i`` in its travel direction and
    sits in the triangle on that side; ``prev_i`` remembers the passage at
    the last shared edge for the caller.
    """

    __slots__ = ("surf", "d", "i", "dir", "prev_i", "finished")

    def __init__(self, surf, d, i, direction):
        self.surf = surf
        self.d = d
        self.i = i
        self.dir = direction
        self.prev_i = i
        self.finished = False

    def entry_slot(self):
        s = self.d.steps[self.i]
        return self.surf.glue[s] if self.dir == 1 else s

    def state(self):
        return (self.i, self.dir)

    def next_move(self):
        d = self.d
        n = len(d.steps)
        self.prev_i = self.i
        if self.dir == 1:
            j = self.i + 1
            if j == n:
                if d.closed:
                    j = 0
                else:
                    self.finished = True
                    return ("end", d.end)
            self.i = j
            return ("x", d.steps[j])
        j = self.i - 1
        if j < 0:
            if d.closed:
                j = n - 1
            else:
                self.finished = True
                return ("end", d.start)
        self.i = j
        return ("x", self.surf.glue[d.steps[j]])


def _rank(surf, entry, move):
    kind, val = move
    if kind == "x":
        if val == _prv(entry):
            return 1
        if val == _nxt(entry):
            return 3
        raise InternalError("exit through the entry slot of a reduced object")
    if val == entry:
        return 0
    if val == _prv(entry):
        return 2
    if val == _nxt(entry):
        return 4
    raise InternalError("arc end in a foreign triangle")


def _diverge(surf, ca: _Cursor, cb: _Cursor):
    """Parallel-trace two cursors from a common entry slot.

    Returns (verdict, depth, ctx); verdict +1 when A is nearer the tail
    corner of the entry slot, -1 when B is, 0 for ties (parallel closed
    strands, or arc ends at a common vertex).  ctx = (entry, move_a,
    move_b, rank_a, rank_b) at the divergence.
    """
    entry = ca.entry_slot()
    if entry != cb.entry_slot():
        raise InternalError("cursors entered different triangles")
    both_closed = ca.d.closed and cb.d.closed
    seen = set()
    depth = 0
    while True:
        if both_closed:
            st = (ca.state(), cb.state())
            if st in seen:
                return 0, depth, None
            seen.add(st)
        ma = ca.next_move()
        mb = cb.next_move()
        if ma == mb:
            if ma[0] == "end":
                return 0, depth, None
            entry = surf.glue[ma[1]]
            depth += 1
            continue
        if (ma[0] == "end" and mb[0] == "end"
                and surf.corner_vertex[ma[1]] == surf.corner_vertex[mb[1]]):
            return 0, depth, None  # free order around the shared vertex
        ra = _rank(surf, entry, ma)
        rb = _rank(surf, entry, mb)
        if ra == rb:
            raise InternalError("equal ranks for distinct moves")
        return (1 if ra < rb else -1), depth, (entry, ma, mb, ra, rb)


# ---------------------------------------------------------------------------
# Crossings
# ---------------------------------------------------------------------------

# Groups order the twist detours sharing a gap along the target:
GRP_START, GRP_FWD, GRP_BWD, GRP_END = 0, 1, 2, 3


@dataclass(frozen=True)
class Crossing:
    """One minimal-position crossing of X with the closed curve C, anchored
    for splicing: the detour is inserted in the gap before X.steps[gap]
    (gap == len(X.steps) appends), based in triangle gap_tri."""

    gap: int
    group: int
    c_idx: int
    gap_tri: int
    upward: bool
    sort_hint: int = 0


def _passages_by_edge(surf, d):
    by = {}
    for i, s in enumerate(d.steps):
        by.setdefault(surf.edge_rep[s], []).append(i)
    return by


def _passage_order(surf, items):
    """Sort (obj, index) passages of one common edge along its rep slot."""
    def cmp(a, b):
        (da, ia), (db, ib) = a, b
        if da is db and ia == ib:
            return 0
        sa, sb = da.steps[ia], db.steps[ib]
        e = surf.edge_rep[sa]
        ma = _Cursor(surf, da, ia, -1 if sa == e else 1)
        mb = _Cursor(surf, db, ib, -1 if sb == e else 1)
        vm, _, _ = _diverge(surf, ma, mb)
        if vm != 0:
            return -vm
        pa = _Cursor(surf, da, ia, 1 if sa == e else -1)
        pb = _Cursor(surf, db, ib, 1 if sb == e else -1)
        vp, _, _ = _diverge(surf, pa, pb)
        return vp
    return sorted(items, key=cmp_to_key(cmp))


def _corridor_crossings(surf, x: Drawn, c: Drawn):
    """Crossings found by the shared-edge corridor machinery.

    Sides are taken relative to X's own traversal: the minus trace runs
    backward along X, the plus trace forward.  A passage pair anchors its
    corridor exactly when the backward trace diverges immediately, so each
    crossing is reported once (twice, mirrored, when x and c are the same
    object).
    """
    out = []
    bx = _passages_by_edge(surf, x)
    bc = _passages_by_edge(surf, c)
    nx = len(x.steps)
    for e, xs in bx.items():
        cs = bc.get(e)
        if not cs:
            continue
        for i in xs:
            for j in cs:
                sx, sc = x.steps[i], c.steps[j]
                same_dir = sc == sx
                mx = _Cursor(surf, x, i, -1)
                mc = _Cursor(surf, c, j, -1 if same_dir else 1)
                vm, dm, _ = _diverge(surf, mx, mc)
                if vm == 0 or dm != 0:
                    continue
                px = _Cursor(surf, x, i, 1)
                pc = _Cursor(surf, c, j, 1 if same_dir else -1)
                vp, dp, ctx = _diverge(surf, px, pc)
                if vp == 0 or vp != vm:
                    continue
                entry, ma, mb, rx, rc = ctx
                c_fwd = pc.dir == 1
                upward = (rx < rc) if c_fwd else (rx > rc)
                gap_tri = surf.tri(entry)
                gap = nx if ma[0] == "end" else px.prev_i + 1
                out.append((Crossing(gap=gap, group=GRP_FWD, c_idx=pc.prev_i,
                                     gap_tri=gap_tri, upward=upward),
                            i, e, dp))
    return out


def _chords_cutting_corner(surf, c: Drawn, corner):
    """Passage pairs of c whose chord cuts the given corner.

    Returns (j_exit, runs_prv_to_slot): the chord occupies steps j_exit-1 ->
    j_exit of c (entering tri via glue[steps[j-1]], exiting via steps[j]);
    ``runs_prv_to_slot`` says c's forward direction enters through the edge
    of prv(corner) and leaves through the edge of slot ``corner``.
    """
    kslot = corner
    pslot = _prv(corner)
    glue = surf.glue
    n = len(c.steps)
    res = []
    rng = range(n) if c.closed else range(1, n)
    for j in rng:
        entry = glue[c.steps[j - 1]]
        exit_ = c.steps[j]
        if {entry, exit_} == {kslot, pslot}:
            res.append((j, entry == pslot))
    return res


def _corner_rank_key(surf, c: Drawn, corner, pairs):
    """Sort corner-cutting chords from innermost (nearest the vertex) out.

    Innermost along the edge of slot ``corner`` means nearest its tail.
    """
    n = len(c.steps)

    def kslot_passage(j):
        # chord = (entry glue[c[j-1]], exit c[j]); the passage crossing the
        # corner-slot edge is j when the exit is that slot, else j-1.
        return j % n if c.steps[j % n] == corner else (j - 1) % n

    items = [(c, kslot_passage(j)) for j, _ in pairs]
    ordered = _passage_order(surf, items)
    pos = {it[1]: k for k, it in enumerate(ordered)}
    e = surf.edge_rep[corner]
    tail_first = corner == e

    def key(pair):
        j, _ = pair
        p = pos[kslot_passage(j)]
        return p if tail_first else -p
    return key


def _corner_crossing_records(surf, x: Drawn, c: Drawn) -> list[Crossing]:
    """Crossings of the closed curve c with the endpoint germs of arc x."""
    recs = []
    n = len(c.steps)
    for corner, leaving, group in ((x.start, True, GRP_START),
                                   (x.end, False, GRP_END)):
        pairs = _chords_cutting_corner(surf, c, corner)
        if not pairs:
            continue
        key = _corner_rank_key(surf, c, corner, pairs)
        pairs = sorted(pairs, key=key)       # innermost first
        if not leaving:
            pairs = list(reversed(pairs))    # farthest first at the end
        for rank, (j, prv_to_slot) in enumerate(pairs):
            upward = prv_to_slot if leaving else not prv_to_slot
            recs.append(Crossing(gap=0 if leaving else len(x.steps),
                                 group=group,
                                 c_idx=(j - 1) % n,
                                 gap_tri=surf.tri(corner),
                                 upward=upward, sort_hint=rank))
    return recs


def crossing_records(surf: Surf, x: Drawn, c: Drawn) -> list[Crossing]:
    """All minimal-position crossings of x with the closed curve c, with
    splice anchors.  Requires c closed and both objects reduced."""
    if not c.closed:
        raise InternalError("crossing_records needs a closed second curve")
    recs = [r for (r, _, _, _) in _corridor_crossings(surf, x, c)]
    if not x.closed:
        recs.extend(_corner_crossing_records(surf, x, c))
    return recs


def _end_germs(surf, d: Drawn):
    """(corner, entry_edge_or_None) for each endpoint of an arc."""
    if d.closed:
        return []
    return [(d.start, None), (d.end, None)]


def crossing_number(surf: Surf, x: Drawn, y: Drawn) -> int:
    """Minimal geometric intersection number rel the vertex set.

    For two arcs, endpoints are shared freely around their vertices
    (interior intersections only, per the bigon criterion for paths).
    """
    n = len(_corridor_crossings(surf, x, y))
    if x.steps == y.steps and x.start == y.start and x.end == y.end:
        return n // 2 if n else 0
    # corner-local contributions at arc endpoints
    if not x.closed:
        for corner in (x.start, x.end):
            n += len(_chords_cutting_corner(surf, y, corner))
    if not y.closed:
        for corner in (y.start, y.end):
            n += len(_chords_cutting_corner(surf, x, corner))
    if not x.closed and not y.closed:
        cv = surf.corner_vertex
        for ka in (x.start, x.end):
            for kb in (y.start, y.end):
                if surf.tri(ka) == surf.tri(kb) and ka != kb \
                        and cv[ka] != cv[kb]:
                    n += 1
    return n


def self_crossing_number(surf: Surf, x: Drawn) -> int:
    n = len(_corridor_crossings(surf, x, x))
    if n % 2:
        raise InternalError("odd self-crossing anchor count")
    return n // 2


def algebraic_crossing_number(surf: Surf, x: Drawn, c: Drawn) -> int:
    """Signed crossing count; +1 for x passing from the right of c to its
    left.  Both curves closed and oriented by their sequences."""
    if not (x.closed and c.closed):
        raise InternalError("algebraic count needs closed curves")
    tot = 0
    for r, _, _, _ in _corridor_crossings(surf, x, c):
        tot += 1 if r.upward else -1
    return tot


# ---------------------------------------------------------------------------
# Dehn twists by splicing
# ---------------------------------------------------------------------------


def _detour(surf, c: Drawn, j: int, direction: int, gap_tri: int):
    """One full traversal of c based in gap_tri, which must be adjacent to
    c's passage j; direction +1 follows c, -1 runs against it."""
    glue = surf.glue
    n = len(c.steps)
    sc = c.steps[j]
    far = surf.tri(glue[sc]) == gap_tri
    if not far and surf.tri(sc) != gap_tri:
        raise InternalError("detour base not adjacent to the c-passage")
    if direction == 1:
        if far:
            return [c.steps[(j + 1 + t) % n] for t in range(n)]
        return [c.steps[(j + t) % n] for t in range(n)]
    if far:
        return [glue[c.steps[(j - t) % n]] for t in range(n)]
    return [glue[c.steps[(j - 1 - t) % n]] for t in range(n)]


def _assembly_order(surf, x, c, corridor, corner_recs):
    """Order all crossing records for splice assembly: by gap, by group,
    then by the along-the-target order of the crossing points in the gap."""
    buckets = {}
    for rec, xi, e, _ in corridor:
        buckets.setdefault((rec.gap, rec.group), []).append((rec, xi, e))
    ordered = []
    for (gap, group), items in buckets.items():
        if len(items) == 1:
            ordered.append((gap, group, 0, items[0][0]))
            continue
        xi = items[0][1]
        order = _passage_order(
            surf, [(x, xi)] + [(c, rec.c_idx) for rec, _, _ in items])
        pos = {}
        for k, (obj, idx) in enumerate(order):
            pos[(obj is x, idx)] = k
        px = pos[(True, xi)]
        for rec, _, _ in items:
            dist = abs(pos[(False, rec.c_idx)] - px)
            hint = -dist if group == GRP_FWD else dist
            ordered.append((gap, group, hint, rec))
    for rec in corner_recs:
        ordered.append((rec.gap, rec.group, rec.sort_hint, rec))
    ordered.sort(key=lambda t: (t[0], t[1], t[2]))
    return [(g, r) for g, _, _, r in ordered]


def twist(surf: Surf, target: Drawn, c: Drawn, k: int) -> Drawn:
    """Image of target under the k-th power of the twist along c.

    For k > 0 a strand crossing c from its right to its left detours along
    c's own orientation; this fixes the handedness once and for all (the
    induced homology transvection is calibrated in surface.py).
    """
    if not c.closed:
        raise InternalError("can only twist along closed curves")
    if k == 0:
        return target
    corridor = _corridor_crossings(surf, target, c)
    corner_recs = [] if target.closed \
        else _corner_crossing_records(surf, target, c)
    if not corridor and not corner_recs:
        return target
    seq = _assembly_order(surf, target, c, corridor, corner_recs)
    n = len(target.steps)
    by_gap = {}
    for gap, rec in seq:
        by_gap.setdefault(gap, []).append(rec)
    pieces = []
    for idx in range(n + 1):
        for rec in by_gap.get(idx, []):
            direction = 1 if (k > 0) == rec.upward else -1
            det = _detour(surf, c, rec.c_idx, direction, rec.gap_tri)
            pieces.extend(det * abs(k))
        if idx < n:
            pieces.append(target.steps[idx])
    out = Drawn(tuple(pieces), target.start, target.end)
    check_drawn(surf, out)
    red = reduce_drawn(surf, out)
    if not target.closed:
        cv = surf.corner_vertex
        if cv[red.start] != cv[target.start] or cv[red.end] != cv[target.end]:
            raise InternalError("twist moved an arc endpoint")
    return red


# ---------------------------------------------------------------------------
# Auxiliary constructions
# ---------------------------------------------------------------------------


def apply_slot_permutation(d: Drawn, perm) -> Drawn:
    steps = tuple(perm[s] for s in d.steps)
    if d.closed:
        return Drawn(steps)
    return Drawn(steps, perm[d.start], perm[d.end])


def vertex_wrap(surf: Surf, corner: int):
    """Exit slots of one full swing around the vertex of ``corner``,
    starting and ending in its triangle."""
    out = []
    c = corner
    while True:
        out.append(c)
        c = surf.vnext(c)
        if c == corner:
            break
    return out


def arc_neighborhood_boundary(surf: Surf, arc: Drawn) -> Drawn:
    """The boundary circle of a regular neighborhood of an arc (including
    its endpoints): runs along one side, wraps the far vertex, returns on
    the other side and wraps the near vertex."""
    if arc.closed:
        raise InternalError("expected an arc")
    glue = surf.glue
    steps = list(arc.steps)
    seq = steps + vertex_wrap(surf, arc.end) \
        + [glue[s] for s in reversed(steps)] + vertex_wrap(surf, arc.start)
    out = Drawn(tuple(seq))
    check_drawn(surf, out)
    return reduce_drawn(surf, out)
