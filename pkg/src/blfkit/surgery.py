"""Surface surgery: cut complements, neighborhood boundaries, capping.

* ``CutAnalysis``: region decomposition of the complement of a drawn
  closed curve; components, Euler characteristics, boundary counts, and
  placement of disjoint curves and vertices.  Regions of a triangle are
  the corner strips cut off by the curve's chords plus one central cell.

* ribbon-graph neighborhood boundaries: the boundary circles of a regular
  neighborhood of a subgraph of the 1-skeleton.

* the capping pipeline: cut the standard model along its two-step capping
  curve, cap the two boundary bigons with cones at the new marked points,
  then contract edges until only the marked points remain as vertices.
  Tracked curves are transported by local rewrites; before a contraction
  they are pushed off the collapsing edge around its dying endpoint (an
  auxiliary vertex, so the sweep does not change the semantic class).
"""

from __future__ import annotations

from functools import cmp_to_key

from .complexes import Surf, _nxt, _prv
from .errors import CrossesC, InternalError
from .strands import (Drawn, _Cursor, _diverge, check_drawn, crossing_number,
                      edge_weights, reduce_drawn)


def _order_cmp(surf):
    """Comparator ordering passages (obj, idx) along their common edge."""
    def cmp(a, b):
        (da, ia), (db, ib) = a, b
        if da is db and ia == ib:
            return 0
        sa, sb = da.steps[ia], db.steps[ib]
        e = surf.edge_rep[sa]
        ca = _Cursor(surf, da, ia, -1 if sa == e else 1)
        cb = _Cursor(surf, db, ib, -1 if sb == e else 1)
        vm, _, _ = _diverge(surf, ca, cb)
        if vm != 0:
            return -vm
        pa = _Cursor(surf, da, ia, 1 if sa == e else -1)
        pb = _Cursor(surf, db, ib, 1 if sb == e else -1)
        vp, _, _ = _diverge(surf, pa, pb)
        return vp
    return cmp


# ---------------------------------------------------------------------------
# Region decomposition of the complement of a closed drawn curve
# ---------------------------------------------------------------------------


class CutAnalysis:
    """Components and topology of the surface cut along a drawn curve."""

    def __init__(self, surf: Surf, d: Drawn):
        if not d.closed or not d.steps:
            raise InternalError("cut expects a nonempty closed curve")
        self.surf = surf
        self.d = d
        self._build()

    def _build(self):
        surf = self.surf
        d = self.d
        w = {}
        for e, x in edge_weights(surf, d).items():
            w[e] = x
            w[surf.glue[e]] = x
        cnt = {}
        for s in range(surf.nslots):
            tot = w.get(_prv(s), 0) + w.get(s, 0) - w.get(_nxt(s), 0)
            if tot % 2 or tot < 0:
                raise InternalError("cut curve has broken chord counts")
            cnt[s] = tot // 2
        self._w = w
        self._cnt = cnt

        # order the passages along each edge once
        cmp = _order_cmp(surf)
        self._pos = {}           # passage index -> position along its edge
        self._edge_passages = {}
        for e in surf.edges:
            idxs = [i for i, s in enumerate(d.steps) if surf.edge_rep[s] == e]
            if not idxs:
                continue
            ordered = sorted(((d, i) for i in idxs), key=cmp_to_key(cmp))
            self._edge_passages[e] = [i for (_, i) in ordered]
            for k, (_, i) in enumerate(ordered):
                self._pos[i] = k      # position along rep slot, from tail

        parent = {}

        def find(a):
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for t in range(surf.ntri):
            find((t, "z"))
            for r in range(3):
                s = 3 * t + r
                for j in range(cnt[s]):
                    find((t, s, j))
        for e in surf.edges:
            we = w.get(e, 0)
            m = surf.glue[e]
            for k in range(we + 1):
                union(self._interval_region(e, k),
                      self._interval_region(m, we - k))
        self._find = find
        roots = {}
        for key in list(parent):
            roots.setdefault(find(key), len(roots))
        self.ncomponents = len(roots)
        comp = {key: roots[find(key)] for key in parent}
        self._region_comp = comp

        faces = [0] * self.ncomponents
        for key in parent:
            faces[comp[key]] += 0
        seen = set()
        for key in list(parent):
            if key not in seen:
                seen.add(key)
                faces[comp[key]] += 1
        edges_cnt = [0] * self.ncomponents
        for e in surf.edges:
            for k in range(w.get(e, 0) + 1):
                edges_cnt[comp[self._find(self._interval_region(e, k))]] += 1

        L = len(d.steps)
        lefts, rights = set(), set()
        xcnt = [0] * self.ncomponents
        for i in range(L):
            inner, outer, corner_right = self._chord_regions(i)
            ci = comp[self._find(inner)]
            co = comp[self._find(outer)]
            edges_cnt[ci] += 1
            edges_cnt[co] += 1
            xcnt[ci] += 1
            xcnt[co] += 1
            if corner_right:
                rights.add(ci)
                lefts.add(co)
            else:
                lefts.add(ci)
                rights.add(co)
        vcnt = [0] * self.ncomponents
        self._vertex_comp = []
        for v in range(surf.nvertices):
            c0 = next(s for s in range(surf.nslots)
                      if surf.corner_vertex[s] == v)
            cc = comp[self._find(self._corner_region(c0))]
            self._vertex_comp.append(cc)
            vcnt[cc] += 1
        self.chi = [vcnt[c] + xcnt[c] - edges_cnt[c] + faces[c]
                    for c in range(self.ncomponents)]
        if len(lefts) != 1 or len(rights) != 1:
            raise InternalError("curve sides not component-constant")
        self.left_comp = lefts.pop()
        self.right_comp = rights.pop()
        self.boundaries = [0] * self.ncomponents
        self.boundaries[self.left_comp] += 1
        self.boundaries[self.right_comp] += 1

    def _interval_region(self, slot, k):
        """Region touching interval k (0..w) of ``slot`` from its tail,
        seen inside tri(slot)."""
        t_tail = self._cnt[slot]
        if k < t_tail:
            return (self.surf.tri(slot), slot, k)
        if k == t_tail:
            return (self.surf.tri(slot), "z")
        return (self.surf.tri(slot), _nxt(slot), self._w[slot] - k)

    def _corner_region(self, corner):
        if self._cnt[corner]:
            return (self.surf.tri(corner), corner, 0)
        return self._interval_region(corner, 0)

    def _chord_regions(self, i):
        """(inner, outer, corner_is_right) for the chord of passage i in
        the triangle it exits; inner is the cut-corner side.  A chord
        exiting through nxt(entry) cuts the corner to the right of the
        traversal, one exiting through prv(entry) cuts to the left."""
        surf, d = self.surf, self.d
        s = d.steps[i]
        prev = d.steps[i - 1]
        ent = surf.glue[prev]
        t = surf.tri(s)
        if s == _nxt(ent):
            corner = _nxt(ent)
            corner_right = True
        elif s == _prv(ent):
            corner = ent
            corner_right = False
        else:
            raise InternalError("cut chord does not cut a corner")
        j = self._corner_chord_depth(i, corner)
        inner = (t, corner, j)
        outer = (t, corner, j + 1) if j + 1 < self._cnt[corner] \
            else (t, "z")
        return inner, outer, corner_right

    def _corner_chord_depth(self, i, corner):
        """Depth of passage i's chord among those cutting ``corner``
        (0 = innermost).  The corner-cutting chords cross the corner's
        outgoing edge at the positions nearest the corner."""
        surf, d = self.surf, self.d
        e = surf.edge_rep[corner]
        s = d.steps[i]
        if s == corner:
            pidx = i
        else:
            pidx = (i - 1) % len(d.steps)
            if surf.glue[d.steps[pidx]] != corner:
                raise InternalError("depth lookup inconsistent")
        pos = self._pos[pidx]
        total = len(self._edge_passages[e])
        depth = pos if corner == e else total - 1 - pos
        if depth >= self._cnt[corner]:
            raise InternalError("chord depth exceeds the corner count")
        return depth

    # -- queries ------------------------------------------------------------

    def component_genus(self, comp):
        chi = self.chi[comp]
        b = self.boundaries[comp]
        g2 = 2 - chi - b
        if g2 % 2 or g2 < 0:
            raise InternalError("bad genus in cut component")
        return g2 // 2

    def vertex_component(self, v):
        return self._vertex_comp[v]

    def component_of(self, x: Drawn):
        surf = self.surf
        if not x.steps:
            return self._region_comp[self._find(self._corner_region(x.start))]
        s0 = x.steps[0]
        e = surf.edge_rep[s0]
        cmp = _order_cmp(surf)
        k = 0
        for i in self._edge_passages.get(e, []):
            if cmp((self.d, i), (x, 0)) < 0:
                k += 1
        kk = k if s0 == e else self._w.get(e, 0) - k
        reg = self._interval_region(s0, kk)
        return self._region_comp[self._find(reg)]

    def region_path_arc(self, corner_from, corner_to) -> Drawn:
        """An arc between two vertices inside one complement component,
        found by BFS over regions; unique up to isotopy when the component
        is a disk."""
        surf = self.surf
        start = self._find(self._corner_region(corner_from))
        goal = self._find(self._corner_region(corner_to))
        prev = {start: None}
        queue = [start]
        while queue and goal not in prev:
            cur = queue.pop(0)
            for e in surf.edges:
                we = self._w.get(e, 0)
                m = surf.glue[e]
                for k in range(we + 1):
                    r1 = self._find(self._interval_region(e, k))
                    r2 = self._find(self._interval_region(m, we - k))
                    for a, b, slot in ((r1, r2, e), (r2, r1, m)):
                        if a == cur and b not in prev:
                            prev[b] = (cur, slot)
                            queue.append(b)
        if goal not in prev:
            raise InternalError("no arc path inside the component")
        steps = []
        node = goal
        while prev[node] is not None:
            node, slot = prev[node]
            steps.append(slot)
        steps.reverse()
        arc = Drawn(tuple(steps), corner_from, corner_to)
        check_drawn(surf, arc)
        return reduce_drawn(surf, arc)


def cut_analysis(surf: Surf, d: Drawn) -> CutAnalysis:
    return CutAnalysis(surf, d)


# ---------------------------------------------------------------------------
# Ribbon-graph neighborhood boundaries
# ---------------------------------------------------------------------------


def subgraph_neighborhood_boundaries(surf: Surf, edge_set) -> list[Drawn]:
    """Boundary circles of a regular neighborhood of a set of edges."""
    edges = {surf.edge_rep[e] for e in edge_set}
    verts = set()
    for e in edges:
        verts.add(surf.corner_vertex[e])
        verts.add(surf.corner_vertex[_nxt(e)])
    seen = set()
    out = []
    for c0 in range(surf.nslots):
        if surf.corner_vertex[c0] not in verts or c0 in seen:
            continue
        emitted = []
        c = c0
        while True:
            seen.add(c)
            if surf.edge_rep[c] in edges:
                c = _nxt(c)
            else:
                emitted.append(c)
                c = surf.vnext(c)
            if c == c0:
                break
            if c in seen:
                break
        if emitted:
            d = reduce_drawn(surf, Drawn(tuple(emitted)))
            if d.steps:
                out.append(d)
    return out


# ---------------------------------------------------------------------------
# Pushing a crossing around a vertex, and edge contraction
# ---------------------------------------------------------------------------


def _push_walk(surf: Surf, s, u_vertex):
    """Replacement exits for a crossing of slot s pushed around the vertex
    ``u_vertex``, which must be an endpoint of the edge (a non-loop)."""
    e = surf.edge_rep[s]
    tail_v = surf.corner_vertex[s]
    head_v = surf.corner_vertex[_nxt(s)]
    if tail_v == head_v:
        raise InternalError("cannot push off a loop edge")
    out = []
    if u_vertex == tail_v:
        # wrap from corner s backwards to corner vnext(s)
        c = s
        target = surf.vnext(s)
        while c != target:
            out.append(_prv(c))
            c = surf.vprev(c)
            if len(out) > surf.nslots:
                raise InternalError("push walk did not close")
    elif u_vertex == head_v:
        c = _nxt(s)
        target = surf.glue[s]
        while c != target:
            out.append(c)
            c = surf.vnext(c)
            if len(out) > surf.nslots:
                raise InternalError("push walk did not close")
    else:
        raise InternalError("vertex is not an endpoint of the edge")
    if any(surf.edge_rep[x] == e for x in out):
        raise InternalError("push walk crosses the avoided edge")
    return out


def push_off_edge(surf: Surf, x: Drawn, edge, u_vertex) -> Drawn:
    """Isotope x across ``u_vertex`` until it avoids the given edge."""
    e = surf.edge_rep[edge]
    while True:
        hit = next((i for i, s in enumerate(x.steps)
                    if surf.edge_rep[s] == e), None)
        if hit is None:
            return x
        walk = _push_walk(surf, x.steps[hit], u_vertex)
        steps = x.steps[:hit] + tuple(walk) + x.steps[hit + 1:]
        x = reduce_drawn(surf, Drawn(steps, x.start, x.end))


class Contraction:
    """One edge contraction with its transport data."""

    def __init__(self, surf: Surf, directed_slot):
        # the tail vertex of directed_slot dies, its head survives
        self.old = surf
        d = directed_slot
        dp = surf.glue[d]
        self.edge = surf.edge_rep[d]
        self.die_vertex = surf.corner_vertex[d]
        self.keep_vertex = surf.corner_vertex[_nxt(d)]
        if self.die_vertex == self.keep_vertex:
            raise InternalError("contraction edge is a loop")
        t1, t2 = surf.tri(d), surf.tri(dp)
        if t1 == t2:
            raise InternalError("contraction edge bounds one triangle")
        b, c = _nxt(d), _prv(d)
        b2, c2 = _nxt(dp), _prv(dp)
        if surf.edge_rep[b] == surf.edge_rep[c] or \
           surf.edge_rep[b2] == surf.edge_rep[c2]:
            raise InternalError("contraction violates the link condition")
        self.t_dead = (t1, t2)
        dead_slots = {3 * t1, 3 * t1 + 1, 3 * t1 + 2,
                      3 * t2, 3 * t2 + 1, 3 * t2 + 2}
        hop = {b: surf.glue[c], c: surf.glue[b],
               b2: surf.glue[c2], c2: surf.glue[b2]}

        def resolve(s):
            guard = 0
            while s in dead_slots:
                if s not in hop:
                    raise InternalError("path resolves through the collapsed edge")
                s = hop[s]
                guard += 1
                if guard > 10:
                    raise InternalError("cyclic resolution in contraction")
            return s

        tri_map = {}
        k = 0
        for t in range(surf.ntri):
            if t in self.t_dead:
                continue
            tri_map[t] = k
            k += 1
        slot_map = {}
        for t, nt in tri_map.items():
            for r in range(3):
                slot_map[3 * t + r] = 3 * nt + r
        glue = [-1] * (3 * k)
        for old_s, new_s in slot_map.items():
            glue[new_s] = slot_map[resolve(surf.glue[old_s])]
        self.new = Surf(tuple(glue))
        self.slot_map = slot_map
        self.dead_slots = dead_slots

    def transport(self, x: Drawn) -> Drawn:
        x = push_off_edge(self.old, x, self.edge, self.die_vertex)
        steps = []
        for s in x.steps:
            if s in self.dead_slots:
                continue
            steps.append(self.slot_map[s])
        start = end = None
        if not x.closed:
            start = self.slot_map[self._corner_out(x.start)]
            end = self.slot_map[self._corner_out(x.end)]
        out = Drawn(tuple(steps), start, end)
        check_drawn(self.new, out)
        return reduce_drawn(self.new, out)

    def _corner_out(self, corner):
        if corner not in self.dead_slots:
            return corner
        raise InternalError("arc endpoint in a collapsed triangle")


def find_contraction(surf: Surf, dying: set) -> Contraction | None:
    """A valid contraction collapsing some vertex in ``dying``."""
    for s in range(surf.nslots):
        tv = surf.corner_vertex[s]
        hv = surf.corner_vertex[_nxt(s)]
        if tv not in dying or tv == hv:
            continue
        try:
            return Contraction(surf, s)
        except InternalError:
            continue
    return None
