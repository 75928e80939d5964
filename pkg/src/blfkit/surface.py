"""Fixed combinatorial models of closed oriented surfaces.

The genus-g model is the (4g+2)-gon with opposite sides identified,
triangulated by the double fan (see complexes.py).  The standard curves are
lifts of arcs between the 2g+2 branch points of the hyperelliptic quotient,
realized as explicit chords of the polygon:

* chain curves c_0 .. c_{2g-1}: c_k joins the midpoints of sides k and k+1
  (and their antipodes); they give a1 = c_0, b_i = c_{2i-1}, e_i = c_{2i};
* a_g: the chord joining the midpoints of side 2g and its antipode;
* middle a_i (1 < i < g): the interior route from side 2i to its antipode,
  one of the two lifts of a circle surrounding the branch points beyond
  edge 2i.

The rotation by pi realizes the hyperelliptic involution simplicially.  It
fixes every chain curve and a_g; the two lifts making up each middle a_i
are swapped, so for g >= 3 those generators are genuinely asymmetric (no
generating configuration of this shape can be entirely symmetric, since
the twists along symmetric curves centralize the involution while the
centre of the mapping class group is trivial in genus >= 3).
"""

from __future__ import annotations

from functools import cached_property

from . import strands
from .complexes import ClosedModelData, Surf, closed_model_complex, star_subdivide
from .errors import InternalError, UnknownGenerator, UnsupportedConfiguration
from .intlin import solve_integer
from .strands import Drawn, reduce_drawn, reverse_drawn

_REGISTRY: dict[str, "SurfaceModel"] = {}


class SurfaceModel:
    """A triangulated model surface with its standard curve tables.

    Instances are interned by ``model_id``; curve classes refer to their
    model by this id.  Immutable after construction apart from lazily
    attached machinery (fundamental-group data, the capping pipeline).
    """

    def __init__(self, model_id, surf, genus, marked, generators,
                 involution=None, parent=None):
        self.model_id = model_id
        self.surf: Surf = surf
        self.genus = genus
        self.marked = tuple(marked)          # (label, vertex_id) pairs
        self.generators: dict[str, Drawn] = generators
        self.involution = involution
        self.parent = parent                 # capped models remember theirs
        self.cache: dict = {}

    def __repr__(self):
        return f"<SurfaceModel {self.model_id}>"

    @property
    def marked_labels(self):
        return [lb for lb, _ in self.marked]

    def marked_vertex(self, label):
        for lb, v in self.marked:
            if lb == label:
                return v
        raise UnknownGenerator(f"no marked point {label!r}")

    def generator(self, name) -> Drawn:
        try:
            return self.generators[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    @property
    def capping_name(self) -> str:
        return f"a{self.genus}"

    # -- homology ------------------------------------------------------------

    def letter_vector(self, d: Drawn):
        """Signed crossing counts of a closed curve over non-tree edges."""
        surf = self.surf
        idx = self.cache.get("nontree_index")
        if idx is None:
            nontree = [e for e in surf.edges
                       if e not in surf.dual_tree_slots]
            idx = {e: i for i, e in enumerate(nontree)}
            self.cache["nontree_index"] = idx
        vec = [0] * len(idx)
        for s in d.steps:
            let = surf.letter_of_slot(s)
            if let is not None:
                e, sg = let
                vec[idx[e]] += sg
        return tuple(vec)

    @cached_property
    def homology_basis(self):
        """Columns lambda(a_1..a_g, b_1..b_g) of the symplectic basis."""
        names = [f"a{i}" for i in range(1, self.genus + 1)] + \
                [f"b{i}" for i in range(1, self.genus + 1)]
        return [self.letter_vector(self.generators[n]) for n in names]

    def homology_of(self, d: Drawn):
        """Integer coordinates of [d] in the (a_i, b_i) basis."""
        vec = self.letter_vector(d)
        sol = solve_integer(self.homology_basis, vec)
        if sol is None:
            raise InternalError("curve class outside the homology lattice")
        return tuple(sol)

    @cached_property
    def symplectic_form(self):
        """J[i][j] = algebraic intersection of basis curves i and j."""
        names = [f"a{i}" for i in range(1, self.genus + 1)] + \
                [f"b{i}" for i in range(1, self.genus + 1)]
        cs = [self.generators[n] for n in names]
        n = len(cs)
        return [[strands.algebraic_crossing_number(self.surf, cs[i], cs[j])
                 for j in range(n)] for i in range(n)]

    # -- involution ----------------------------------------------------------

    def involution_image(self, d: Drawn) -> Drawn:
        if self.involution is None:
            raise UnsupportedConfiguration(
                "model has no standard involution (marked or capped model)")
        return reduce_drawn(self.surf, strands.apply_slot_permutation(
            d, self.involution))


# ---------------------------------------------------------------------------
# Construction of the closed models and their generator tables
# ---------------------------------------------------------------------------


def _route_tables(data: ClosedModelData):
    """Linear order of the polygon's triangles and the connecting slots."""
    g = data.g
    h = 2 * g + 1
    N = 4 * g + 2
    # positions 0..2g-1: A_1..A_2g (tri k-1); positions 2g..4g-1: B_{N-1}
    # down to B_{h+1} (tri 2g + (k-h-1)).
    pos_of_tri = {}
    tri_of_pos = {}
    for k in range(1, 2 * g + 1):
        pos_of_tri[k - 1] = k - 1
        tri_of_pos[k - 1] = k - 1
    for p in range(2 * g, 4 * g):
        k = 6 * g + 1 - p
        t = 2 * g + (k - h - 1)
        pos_of_tri[t] = p
        tri_of_pos[p] = t
    conn_right = {}
    for p in range(4 * g - 1):
        t = tri_of_pos[p]
        conn_right[p] = 3 * t + 2 if p < 2 * g else 3 * t + 0
    return pos_of_tri, tri_of_pos, conn_right


def _route(data: ClosedModelData, surf, pos_of_tri, conn_right,
           enter_side, exit_side):
    """Interior exits from the triangle of ``enter_side`` to and through
    ``exit_side``."""
    t_from = surf.tri(data.side_slot[enter_side])
    t_to = surf.tri(data.side_slot[exit_side])
    p, q = pos_of_tri[t_from], pos_of_tri[t_to]
    out = []
    if p <= q:
        for i in range(p, q):
            out.append(conn_right[i])
    else:
        for i in range(p, q, -1):
            out.append(surf.glue[conn_right[i - 1]])
    out.append(data.side_slot[exit_side])
    return out


def _build_generators(data: ClosedModelData):
    g = data.g
    h = 2 * g + 1
    surf = data.surf
    pos_of_tri, _, conn_right = _route_tables(data)

    def route(a, b):
        return _route(data, surf, pos_of_tri, conn_right, a, b)

    def chain_curve(k):
        steps = route(k, k + 1) + route(k + 1 + h, k + h)
        return reduce_drawn(surf, Drawn(tuple(steps)))

    def across_curve(j):
        # from side j straight across to its antipodal side j+h
        steps = route(j, j + h)
        return reduce_drawn(surf, Drawn(tuple(steps)))

    def circle_curve(i):
        # One lift of the circle surrounding the branch points beyond the
        # i-th handle: alternates fans along the enclosed legs, crosses the
        # shared chord, and closes down fan B.  Degenerates to the straight
        # route for i = g.
        N = 4 * g + 2
        seq = []
        fan_a = True
        for j in range(2 * i, 2 * g):
            if fan_a:
                seq.append(3 * (j - 1) + 2)          # A_j -> A_{j+1}
                seq.append(data.side_slot[j + 1])
            else:
                t = 2 * g + (j + h - h - 1)          # tri index of B_{j+h}
                seq.append(3 * t + 2)                # B_{j+h} -> B_{j+h+1}
                seq.append(data.side_slot[j + 1 + h])
            fan_a = not fan_a
        if not fan_a:
            raise InternalError("circle curve parity broken")
        seq.append(3 * (2 * g - 1) + 2)              # shared chord, A_2g side
        for k in range(N - 1, 2 * i + h, -1):
            t = 2 * g + (k - h - 1)
            seq.append(3 * t + 0)                    # B_k -> B_{k-1}
        seq.append(data.side_slot[2 * i + h])
        return reduce_drawn(surf, Drawn(tuple(seq)))

    gens = {}
    gens["a1"] = chain_curve(0)
    for i in range(1, g + 1):
        gens[f"b{i}"] = chain_curve(2 * i - 1)
    for i in range(1, g):
        gens[f"e{i}"] = chain_curve(2 * i)
    # The curve dual to the i-th handle crosses b_i once and nothing else.
    # Depending on which side of the branch midpoint the straight route
    # passes, the right realization is the route from side 2i or 2i-1;
    # pick by the verified pattern.
    for i in range(2, g + 1):
        want_hit = gens[f"b{i}"]
        others = [d for n, d in gens.items() if n != f"b{i}"]
        chosen = None
        for cand in (circle_curve(i), across_curve(2 * i),
                     across_curve(2 * i - 1)):
            if strands.crossing_number(surf, cand, want_hit) != 1:
                continue
            if any(strands.crossing_number(surf, cand, o) for o in others):
                continue
            chosen = cand
            break
        if chosen is None:
            raise InternalError(f"no valid dual curve for handle {i}")
        gens[f"a{i}"] = chosen
    return gens


_PATTERN_DOC = """Required intersection pattern of the generator table:
i(a_i, b_i) = 1, all other pairs of a/b generators disjoint, e_i meets
exactly b_i and b_{i+1} once each."""


def _expected_pattern(g, n1, n2):
    def kind(n):
        return n[0], int(n[1:])
    k1, i1 = kind(n1)
    k2, i2 = kind(n2)
    if n1 == n2:
        return 0
    if {k1, k2} == {"a", "b"} and i1 == i2:
        return 1
    if k1 == "e" and k2 == "b" and i2 in (i1, i1 + 1):
        return 1
    if k2 == "e" and k1 == "b" and i1 in (i2, i2 + 1):
        return 1
    if k1 == "e" and k2 == "e":
        return 0
    return 0


def _verify_and_orient(model: SurfaceModel):
    """Check the generator pattern and orient the basis so that
    <a_i, b_i> = +1; the resulting J is the reference symplectic form."""
    g = model.genus
    surf = model.surf
    names = list(model.generators)
    for i, n1 in enumerate(names):
        for n2 in names[i:]:
            got = strands.crossing_number(surf, model.generators[n1],
                                          model.generators[n2])
            want = _expected_pattern(g, n1, n2)
            if got != want:
                raise InternalError(
                    f"generator pattern broken: i({n1},{n2}) = {got}, "
                    f"expected {want}. " + _PATTERN_DOC)
    for d in model.generators.values():
        if strands.self_crossing_number(surf, d):
            raise InternalError("generator curve is not embedded")
    for i in range(1, g + 1):
        a = model.generators[f"a{i}"]
        b = model.generators[f"b{i}"]
        if strands.algebraic_crossing_number(surf, a, b) == -1:
            model.generators[f"b{i}"] = reverse_drawn(surf, b)
    J = model.symplectic_form
    for i in range(g):
        for j in range(2 * g):
            want = 1 if j == g + i else 0
            if J[i][j] != want or J[g + i][j] != (-1 if j == i else 0):
                raise InternalError("symplectic calibration failed")


def _closed_model(g: int) -> SurfaceModel:
    data = closed_model_complex(g)
    gens = _build_generators(data)
    model = SurfaceModel(model_id=f"closed:{g}", surf=data.surf, genus=g,
                         marked=(), generators=gens,
                         involution=data.involution)
    model.cache["polygon_data"] = data
    _verify_and_orient(model)
    return model


# ---------------------------------------------------------------------------
# Marked models (star subdivisions)
# ---------------------------------------------------------------------------


def _transport_through_subdivision(old: Surf, t: int, new: Surf, d: Drawn):
    """Rewrite a closed drawn curve after star-subdividing triangle t."""
    n_old = old.ntri
    outer = {0: 3 * t, 1: 3 * n_old, 2: 3 * (n_old + 1)}
    steps = []
    prev = d.steps[-1]
    for s in d.steps:
        if old.tri(s) != t:
            steps.append(s)
            prev = s
            continue
        q = old.glue[prev] - 3 * t       # entry side index in t
        r = s - 3 * t                    # exit side index
        if not (0 <= q < 3 and 0 <= r < 3 and q != r):
            raise InternalError("bad passage through subdivided triangle")
        if r == (q + 1) % 3:
            steps.append(outer[q] + 1)
        else:
            steps.append(outer[q] + 2)
        steps.append(outer[r])
        prev = s
    return reduce_drawn(new, Drawn(tuple(steps)))


def _marked_model(g: int, marked: int) -> SurfaceModel:
    base = standard_model(g, 0)
    data: ClosedModelData = base.cache["polygon_data"]
    surf = base.surf
    gens = dict(base.generators)
    labels = []
    # subdivide the first fan-A triangle, then (for two points) its
    # involution partner, so the marked pair is symmetric.
    targets = [0] if marked == 1 else [0, 2 * g]
    for k, t in enumerate(targets[:marked]):
        new_surf, centre = star_subdivide(surf, t)
        gens = {n: _transport_through_subdivision(surf, t, new_surf, d)
                for n, d in gens.items()}
        surf = new_surf
        labels.append((f"m{k + 1}", surf.corner_vertex[centre]))
    model = SurfaceModel(model_id=f"marked:{g}:{marked}", surf=surf,
                         genus=g, marked=labels, generators=gens,
                         involution=None)
    _verify_and_orient(model)
    return model


def standard_model(g: int, marked: int = 0) -> SurfaceModel:
    """The canonical model of the closed genus-g surface, optionally with
    one or two marked points.  Deterministic and interned."""
    if g < 1 or marked not in (0, 1, 2):
        raise UnsupportedConfiguration(
            f"supported configurations are g >= 1 with 0-2 marked points, "
            f"got g={g}, marked={marked}")
    key = f"closed:{g}" if marked == 0 else f"marked:{g}:{marked}"
    if key not in _REGISTRY:
        _REGISTRY[key] = _closed_model(g) if marked == 0 \
            else _marked_model(g, marked)
    return _REGISTRY[key]


def register_model(model: SurfaceModel):
    _REGISTRY[model.model_id] = model


def model_by_id(model_id: str) -> SurfaceModel:
    try:
        return _REGISTRY[model_id]
    except KeyError:
        raise InternalError(f"unknown model id {model_id!r}") from None
