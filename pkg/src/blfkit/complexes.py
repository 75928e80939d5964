"""Triangulated oriented closed surfaces, encoded by slot gluings.

A complex with ``n`` triangles has slots ``0 .. 3n-1``; triangle ``t`` owns
slots ``3t, 3t+1, 3t+2``, listed in counterclockwise boundary order.  Slot
``s`` is a directed side of its triangle (tail -> head going CCW).  ``glue``
is a fixed-point-free involution pairing each slot with its mate in the
neighbouring triangle; gluing reverses direction, so tail(glue[s]) is the
same point of the surface as head(s).

Corners are identified with slots: corner ``s`` sits at the *tail* of slot
``s`` (equivalently at the head of ``prv(s)``).  Rotating a corner once
around its vertex is ``vnext(s) = nxt(glue[s])``; vertices are the orbits.

The standard genus-g model is the (4g+2)-gon with opposite sides identified
(boundary word  u_0 u_1 ... u_2g  u_0^-1 ... u_2g^-1), triangulated by the
two fans hung off corners 0 and 2g+1.  This triangulation is invariant
under the rotation by pi, which realizes the hyperelliptic involution as a
slot permutation: each polygon side is mapped to itself reversed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import InternalError


def _tri(s: int) -> int:
    return s // 3


def _nxt(s: int) -> int:
    return s - s % 3 + (s + 1) % 3


def _prv(s: int) -> int:
    return s - s % 3 + (s + 2) % 3


@dataclass(frozen=True)
class Surf:
    """A closed oriented triangulated surface."""

    glue: tuple[int, ...]

    def __post_init__(self):
        g = self.glue
        if len(g) % 3:
            raise InternalError("slot count not divisible by 3")
        for s, m in enumerate(g):
            if m == s or not (0 <= m < len(g)) or g[m] != s:
                raise InternalError("glue is not a fixed-point-free involution")

    # -- basic combinatorics -------------------------------------------------

    @property
    def nslots(self) -> int:
        return len(self.glue)

    @property
    def ntri(self) -> int:
        return len(self.glue) // 3

    def tri(self, s: int) -> int:
        return s // 3

    def nxt(self, s: int) -> int:
        return _nxt(s)

    def prv(self, s: int) -> int:
        return _prv(s)

    def vnext(self, s: int) -> int:
        """Next corner counterclockwise around the vertex at corner s."""
        return _nxt(self.glue[s])

    def vprev(self, s: int) -> int:
        return self.glue[_prv(s)]

    # -- derived structure ---------------------------------------------------

    @cached_property
    def edge_rep(self) -> tuple[int, ...]:
        """edge_rep[s] = min(s, glue[s]); canonical edge id of slot s."""
        return tuple(min(s, m) for s, m in enumerate(self.glue))

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted({self.edge_rep[s] for s in range(self.nslots)}))

    @cached_property
    def edge_index(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def corner_vertex(self) -> tuple[int, ...]:
        """corner_vertex[s] = vertex id of the corner at the tail of slot s."""
        vert = [-1] * self.nslots
        nv = 0
        for s in range(self.nslots):
            if vert[s] >= 0:
                continue
            c = s
            while vert[c] < 0:
                vert[c] = nv
                c = self.vnext(c)
            if c != s and vert[c] != nv:
                raise InternalError("vertex orbit closed at a foreign corner")
            nv += 1
        return tuple(vert)

    @property
    def nvertices(self) -> int:
        return max(self.corner_vertex) + 1

    def vertex_of_slot_tail(self, s: int) -> int:
        return self.corner_vertex[s]

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        """Vertices at (tail, head) of the representative slot e."""
        return self.corner_vertex[e], self.corner_vertex[_nxt(e)]

    def vertex_corners(self, v: int) -> list[int]:
        return [s for s in range(self.nslots) if self.corner_vertex[s] == v]

    @property
    def euler_characteristic(self) -> int:
        return self.nvertices - self.nslots // 2 + self.ntri

    @property
    def genus(self) -> int:
        chi = self.euler_characteristic
        if chi % 2:
            raise InternalError("odd Euler characteristic")
        return (2 - chi) // 2

    # -- dual spanning tree and polygon scheme -------------------------------

    @cached_property
    def dual_tree_slots(self) -> frozenset[int]:
        """Slots whose gluings form a spanning tree of the dual graph.

        Deterministic: BFS from triangle 0 in slot order.
        """
        seen = {0}
        tree = set()
        queue = [0]
        while queue:
            t = queue.pop(0)
            for s in (3 * t, 3 * t + 1, 3 * t + 2):
                t2 = _tri(self.glue[s])
                if t2 not in seen:
                    seen.add(t2)
                    tree.add(s)
                    tree.add(self.glue[s])
                    queue.append(t2)
        if len(seen) != self.ntri:
            raise InternalError("dual graph disconnected")
        return frozenset(tree)

    def letter_of_slot(self, s: int):
        """Generator letter picked up when exiting through slot s.

        Returns None for dual-tree slots (the crossing stays inside the
        unfolded polygon), else (edge_id, sign).
        """
        if s in self.dual_tree_slots:
            return None
        e = self.edge_rep[s]
        return (e, 1 if s == e else -1)

    @cached_property
    def polygon_boundary(self) -> tuple[int, ...]:
        """Non-tree slots in the cyclic order of the unfolded-polygon boundary."""
        tree = self.dual_tree_slots
        nontree = [s for s in range(self.nslots) if s not in tree]
        if not nontree:
            raise InternalError("no boundary: sphere with one triangle pair?")
        start = nontree[0]
        out = []
        s = start
        while True:
            out.append(s)
            c = _nxt(s)
            while c in tree:
                c = _nxt(self.glue[c])
            s = c
            if s == start:
                break
        if len(out) != len(nontree):
            raise InternalError("polygon boundary walk missed slots")
        return tuple(out)

    def scheme_word(self) -> list[tuple[int, int]]:
        """The one-polygon identification word as signed edge letters."""
        return [self.letter_of_slot(s) for s in self.polygon_boundary]


# ---------------------------------------------------------------------------
# Standard closed model: (4g+2)-gon, opposite sides identified, double fan.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedModelData:
    """The standard genus-g complex plus the polygon bookkeeping."""

    surf: Surf
    g: int
    side_slot: tuple[int, ...]       # polygon side j -> slot carrying it
    fan_a_chord: tuple[int, ...]     # chord (0,k) -> slot traversed 0->k, k=2..2g+1
    involution: tuple[int, ...]      # slot permutation realizing iota
    field_order: tuple = field(default=(), repr=False)

    @property
    def nsides(self) -> int:
        return 4 * self.g + 2


def closed_model_complex(g: int) -> ClosedModelData:
    """Build the symmetric double-fan triangulation of the (4g+2)-gon model."""
    if g < 1:
        raise InternalError("closed model needs genus >= 1")
    h = 2 * g + 1
    N = 4 * g + 2
    ntri = 4 * g
    glue = [-1] * (3 * ntri)

    # Triangle indices: fan A triangles A_k = (0,k,k+1), k=1..2g  -> index k-1.
    #                   fan B triangles B_k = (h,k,k+1), k=h+1..N-1 -> 2g + (k-h-1).
    def A(k):  # noqa: E743 - matches the fan naming above
        return k - 1

    def B(k):
        return 2 * g + (k - h - 1)

    side_slot = [-1] * N
    side_slot[0] = 3 * A(1) + 0
    side_slot[1] = 3 * A(1) + 1
    for k in range(2, 2 * g + 1):
        side_slot[k] = 3 * A(k) + 1
    side_slot[h] = 3 * B(h + 1) + 0
    side_slot[h + 1] = 3 * B(h + 1) + 1
    for k in range(h + 2, N):
        side_slot[k] = 3 * B(k) + 1

    def set_glue(a, b):
        if glue[a] != -1 or glue[b] != -1:
            raise InternalError("double glue")
        glue[a] = b
        glue[b] = a

    # Fan A chords (0,k): slot 3*A(k)+0 runs 0->k, slot 3*A(k-1)+2 runs k->0.
    for k in range(2, 2 * g + 1):
        set_glue(3 * A(k) + 0, 3 * A(k - 1) + 2)
    # Fan B chords (h,k): slot 3*B(k)+0 runs h->k, slot 3*B(k-1)+2 runs k->h.
    for k in range(h + 2, N):
        set_glue(3 * B(k) + 0, 3 * B(k - 1) + 2)
    # Shared chord (0,h): A_{2g}.slot2 runs h->0, B_{N-1}.slot2 runs 0->h.
    set_glue(3 * A(2 * g) + 2, 3 * B(N - 1) + 2)
    # Polygon sides: s_j glued to s_{j+h}.
    for j in range(h):
        set_glue(side_slot[j], side_slot[j + h])

    surf = Surf(tuple(glue))
    if surf.genus != g:
        raise InternalError(f"closed model genus check failed: {surf.genus} != {g}")
    if surf.nvertices != 2:
        raise InternalError("closed model should have two vertices")

    # Involution: A_k <-> B_{k+h} slotwise, i.e. triangle i <-> i +- 2g.
    inv = []
    for s in range(3 * ntri):
        t, r = divmod(s, 3)
        t2 = t + 2 * g if t < 2 * g else t - 2 * g
        inv.append(3 * t2 + r)
    inv = tuple(inv)
    for s in range(3 * ntri):
        if inv[inv[s]] != s or glue[inv[s]] != inv[glue[s]]:
            raise InternalError("involution is not a simplicial automorphism")

    chords = tuple(3 * A(k) + 0 if k <= 2 * g else 3 * B(N - 1) + 2
                   for k in range(2, h + 1))
    return ClosedModelData(surf=surf, g=g, side_slot=tuple(side_slot),
                           fan_a_chord=chords, involution=inv)


# ---------------------------------------------------------------------------
# Star subdivision (marked points)
# ---------------------------------------------------------------------------


def star_subdivide(surf: Surf, t: int) -> tuple[Surf, int]:
    """Subdivide triangle t around a new central vertex.

    Returns the new complex and a corner id whose vertex is the new centre.
    Original slots keep their ids except the two sides of t that move to the
    appended triangles; callers build curves only after all subdivisions.
    """
    n = surf.ntri
    glue = list(surf.glue) + [-1] * 6
    t1, t2 = n, n + 1
    old = [3 * t, 3 * t + 1, 3 * t + 2]
    mates = [surf.glue[s] for s in old]

    # New triangle r covers the quad (V_r, V_{r+1}, C): slot0 outer side,
    # slot1 = V_{r+1}->C spoke, slot2 = C->V_r spoke.
    outer = {0: 3 * t, 1: 3 * t1, 2: 3 * t2}
    for r in range(3):
        glue[outer[r]] = mates[r]
        glue[mates[r]] = outer[r]
    spokes = [(outer[0] + 1, outer[1] + 2), (outer[1] + 1, outer[2] + 2),
              (outer[2] + 1, outer[0] + 2)]
    for a, b in spokes:
        glue[a] = b
        glue[b] = a
    new = Surf(tuple(glue))
    centre_corner = outer[0] + 2  # slot C->V_0 has its tail at C
    return new, centre_corner
