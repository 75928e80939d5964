"""Fundamental-group machinery: free-homotopy tests for closed curves.

Every model complex unfolds along a dual spanning tree into a single
polygon whose boundary word is a quadratic orientable identification
scheme over the non-tree edges.  A transverse closed curve picks up one
letter per boundary crossing; the product is its class in the deck group.

The scheme is normalized by the classical classification-of-surfaces
moves - folding adjacent inverse pairs, merging vertex classes, and
collecting handles by cut-and-paste - while tracking what each original
letter becomes.  The result is the standard relator
x1 y1 x1^-1 y1^-1 ... of length 4g, on which Dehn's algorithm decides the
word problem and, via minimal cyclic words and half-relator exchanges, the
conjugacy problem.  Free homotopy classes of closed curves are conjugacy
classes (up to inversion when unoriented), and essential simple closed
curves on a closed surface are isotopic iff freely homotopic.

Genus one is handled by abelianization (Z^2), genus zero is trivial.
"""

from __future__ import annotations

from .errors import InternalError
from .strands import Drawn
from .surface import SurfaceModel

# Words are tuples of nonzero ints: +k / -k is the k-th generator (inverse).


def w_inv(w):
    return tuple(-x for x in reversed(w))


def w_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def w_cyc_reduce(w):
    w = list(w_reduce(w))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def _substitute(word, letter, expr):
    out = []
    inv = w_inv(expr)
    for x in word:
        if x == letter:
            out.extend(expr)
        elif x == -letter:
            out.extend(inv)
        else:
            out.append(x)
    return w_reduce(out)


class _Scheme:
    """Polygon identification scheme with substitution tracking.

    ``word`` is the cyclic boundary word; corner k sits between word[k-1]
    and word[k].  ``rho`` maps every initial letter to a word over the
    current letters, and is kept consistent through all moves.
    """

    def __init__(self, word, nletters):
        self.word = list(word)
        self.next_id = nletters + 1
        self.rho = {k: (k,) for k in range(1, nletters + 1)}
        self.collected = set()
        self.sphere = False

    # -- bookkeeping ----------------------------------------------------------

    def _positions(self, letter):
        return [i for i, x in enumerate(self.word) if abs(x) == letter]

    def _fresh(self):
        k = self.next_id
        self.next_id += 1
        return k

    def _eliminate(self, letter, expr):
        for k in list(self.rho):
            self.rho[k] = _substitute(self.rho[k], letter, expr)

    def vertex_classes(self):
        """Union-find classes of the polygon corners."""
        n = len(self.word)
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        occ = {}
        for i, x in enumerate(self.word):
            occ.setdefault(abs(x), []).append(i)
        for letter, (i, j) in occ.items():
            # side i glued to side j reversed: tail(i)~head(j), head(i)~tail(j)
            union(i, (j + 1) % n)
            union((i + 1) % n, j)
        classes = {}
        for c in range(n):
            classes.setdefault(find(c), []).append(c)
        return list(classes.values())

    # -- moves ----------------------------------------------------------------

    def _fold_once(self):
        """Cancel one adjacent pair x x^-1 (the folded letter reads as the
        empty word: its edge becomes an interior spur, so any transverse
        curve crosses it in immediately cancelling pairs)."""
        n = len(self.word)
        if n <= 2:
            return False
        for i in range(n):
            j = (i + 1) % n
            if self.word[i] == -self.word[j]:
                x = abs(self.word[i])
                self._eliminate(x, ())
                w = self.word[:]
                if j > i:
                    del w[j], w[i]
                else:
                    del w[i], w[j]
                self.word = w
                return True
        return False

    def _cut_paste(self, k):
        """Cut z across the two sides at positions (k, k+1) and reglue
        along the side at position k.

        The cut piece is the triangle z^-1 y w (y = word[k], w = word[k+1]),
        so the eliminated letter satisfies y = z w^-1.
        """
        n = len(self.word)
        y, w = self.word[k], self.word[(k + 1) % n]
        if y == -w:
            raise InternalError("cut across a foldable pair")
        v = [self.word[(k + 2 + t) % n] for t in range(n - 2)]
        if -y not in v:
            raise InternalError("glue partner missing from the remainder")
        mrel = v.index(-y)
        z = self._fresh()
        expr = (z, -w) if y > 0 else w_inv((z, -w))
        self._eliminate(abs(y), expr)
        v1, v2 = v[:mrel], v[mrel + 1:]
        # u = u1 y u2 with u1 = [], u2 = [w]: new word u2 z^-1 u1 v2 z v1
        self.word = [w, -z] + v2 + [z] + v1
        return z

    def _merge_vertices_once(self):
        classes = self.vertex_classes()
        if len(classes) <= 1:
            return False
        largest = max(classes, key=len)
        lset = set(largest)
        n = len(self.word)
        metric = n - len(largest)
        for k in range(n):
            # side k runs corner k -> corner k+1; Massey's move absorbs the
            # corner after a largest-class corner by cutting across the two
            # sides flanking it.
            if k in lset and (k + 1) % n not in lset:
                self._cut_paste(k)
                classes2 = self.vertex_classes()
                metric2 = len(self.word) - max(len(c) for c in classes2)
                if metric2 >= metric:
                    raise InternalError("vertex merge did not progress")
                return True
        raise InternalError("no mergeable vertex pair found")

    def _linked_pair(self):
        w = self.word
        letters = sorted({abs(x) for x in w} - self.collected)
        for x in letters:
            px = self._positions(x)
            if len(px) != 2:
                raise InternalError("scheme not quadratic")
            i1, i2 = px
            for y in letters:
                if y == x:
                    continue
                py = self._positions(y)
                if (i1 < py[0] < i2) != (i1 < py[1] < i2):
                    return x, y
        return None

    def _rotate_to(self, pos):
        self.word = self.word[pos:] + self.word[:pos]

    def _collect_handle(self):
        """Collect one commutator block [z2, z^-1] at the front.

        On the linked pattern x A y B x^-1 C y^-1 D, cut z = x A y B x^-1
        and reglue along y, then cut z2 = z C B x^-1 and reglue along x;
        the word becomes z2 z^-1 z2^-1 z (C B A D).
        """
        pair = self._linked_pair()
        if pair is None:
            if any(abs(x) not in self.collected for x in self.word):
                raise InternalError("non-collected letter without partner")
            return False
        x, y = pair
        i1, _ = self._positions(x)
        self._rotate_to(i1)
        w = self.word
        xval = w[0]
        i2 = self._positions(abs(x))[1]
        j1 = [i for i in self._positions(abs(y)) if 0 < i < i2][0]
        yval = w[j1]
        j2 = [i for i in self._positions(abs(y)) if i > i2][0]
        A = list(w[1:j1])
        B = list(w[j1 + 1:i2])
        C = list(w[i2 + 1:j2])
        D = list(w[j2 + 1:])
        if w[i2] != -xval or w[j2] != -yval:
            raise InternalError("scheme is not orientable")

        z = self._fresh()
        expr = w_reduce(tuple(-a for a in reversed(A)) + (-xval, z, xval)
                        + tuple(-b for b in reversed(B)))
        if yval < 0:
            expr = w_inv(expr)
        self._eliminate(abs(yval), expr)

        z2 = self._fresh()
        expr_x = w_reduce((-z2, z) + tuple(C) + tuple(B))
        if xval < 0:
            expr_x = w_inv(expr_x)
        self._eliminate(abs(xval), expr_x)

        self.word = [z2, -z, -z2, z] + C + B + A + D
        self.collected.add(z)
        self.collected.add(z2)
        return True

    # -- driver ----------------------------------------------------------------

    def normalize(self):
        guard = 0
        while True:
            guard += 1
            if guard > 10000:
                raise InternalError("scheme normalization did not terminate")
            if len(self.word) == 2 and self.word[0] == -self.word[1]:
                self.sphere = True
                self._eliminate(abs(self.word[0]), ())
                self.word = []
                break
            if self._fold_once():
                continue
            if self._merge_vertices_once():
                continue
            if self._collect_handle():
                continue
            break
        w = self.word
        if len(w) % 4:
            raise InternalError("normalized scheme has broken length")
        relabel = {}
        out = []
        k = 1
        for t in range(0, len(w), 4):
            p, q, pi, qi = w[t:t + 4]
            if p != -pi or q != -qi or abs(p) == abs(q):
                raise InternalError("normalized scheme is not in block form")
            relabel[p] = k
            relabel[q] = k + 1
            out.extend([k, k + 1, -k, -(k + 1)])
            k += 2
        sub = {}
        for signed, new in relabel.items():
            sub[abs(signed)] = (new,) if signed > 0 else (-new,)
        rho = {}
        for orig, word in self.rho.items():
            acc = []
            for ltr in word:
                tgt = sub.get(abs(ltr))
                if tgt is None:
                    raise InternalError("dangling letter after normalization")
                acc.extend(tgt if ltr > 0 else w_inv(tgt))
            rho[orig] = w_reduce(acc)
        return tuple(out), rho


# ---------------------------------------------------------------------------
# Dehn's algorithm on the standard presentation
# ---------------------------------------------------------------------------


class DehnAlgebra:
    """Word and conjugacy problems for pi1 of a closed genus >= 2 surface."""

    def __init__(self, relator):
        self.relator = tuple(relator)
        self.length = len(relator)
        self.half = self.length // 2
        self.genus = self.length // 4
        self._long = None
        self._half_t = None

    def _long_table(self):
        if self._long is None:
            table = {}
            L = self.length
            for base in (self.relator, w_inv(self.relator)):
                dbl = base + base
                for i in range(L):
                    rot = dbl[i:i + L]
                    table[rot[:self.half + 1]] = w_inv(rot[self.half + 1:])
            self._long = table
        return self._long

    def _half_table(self):
        if self._half_t is None:
            table = {}
            L = self.length
            for base in (self.relator, w_inv(self.relator)):
                dbl = base + base
                for i in range(L):
                    rot = dbl[i:i + L]
                    table.setdefault(rot[:self.half], set()).add(
                        w_inv(rot[self.half:]))
            self._half_t = table
        return self._half_t

    def dehn_reduce(self, word):
        word = w_reduce(word)
        table = self._long_table()
        k = self.half + 1
        changed = True
        while changed:
            changed = False
            for i in range(len(word) - k + 1):
                rep = table.get(tuple(word[i:i + k]))
                if rep is not None:
                    word = w_reduce(word[:i] + rep + word[i + k:])
                    changed = True
                    break
        return word

    def is_trivial(self, word):
        return len(self.dehn_reduce(word)) == 0

    def cyc_dehn_reduce(self, word):
        word = w_cyc_reduce(word)
        table = self._long_table()
        k = self.half + 1
        while True:
            if not word:
                return ()
            n = len(word)
            dbl = word + word
            hit = None
            for i in range(n):
                piece = dbl[i:i + k]
                if len(piece) == k and piece in table:
                    hit = (i, table[piece])
                    break
            if hit is None:
                return word
            i, rep = hit
            rot = dbl[i:i + n]
            word = w_cyc_reduce(rep + rot[k:])

    def conjugate_classes_equal(self, u, v):
        u = self.cyc_dehn_reduce(u)
        v = self.cyc_dehn_reduce(v)
        if len(u) != len(v):
            return False
        if not u:
            return True
        n = len(v)
        dv = v + v
        vset = {dv[i:i + n] for i in range(n)}
        half = self._half_table()
        seen = set()
        frontier = [u]
        budget = 200000
        while frontier:
            nxt = []
            for w in frontier:
                dw = w + w
                for i in range(len(w)):
                    rot = dw[i:i + len(w)]
                    if rot in seen:
                        continue
                    seen.add(rot)
                    if rot in vset:
                        return True
                    if len(seen) > budget:
                        raise InternalError("conjugacy closure exceeded budget")
                    for rep in half.get(rot[:self.half], ()):
                        w2 = w_cyc_reduce(rep + rot[self.half:])
                        if len(w2) == len(w) and w2 not in seen:
                            nxt.append(w2)
            frontier = nxt
        return False


# ---------------------------------------------------------------------------
# Per-model machinery
# ---------------------------------------------------------------------------


class ModelPi1:
    """Reads drawn curves as conjugacy classes in pi1 of the closed model."""

    def __init__(self, model: SurfaceModel):
        self.model = model
        surf = model.surf
        letters = [e for e in surf.edges if e not in surf.dual_tree_slots]
        lid = {e: i + 1 for i, e in enumerate(letters)}
        raw = []
        for s in surf.polygon_boundary:
            e, sg = surf.letter_of_slot(s)
            raw.append(sg * lid[e])
        scheme = _Scheme(raw, len(letters))
        self.relator, rho = scheme.normalize()
        self.trivial_group = scheme.sphere
        if not self.trivial_group and len(self.relator) != 4 * model.genus:
            raise InternalError("normalized relator has the wrong genus")
        self.dehn = DehnAlgebra(self.relator) if model.genus >= 2 else None
        self.value = {e: rho[lid[e]] for e in letters}
        # verification: the original boundary word must die in the quotient
        full = []
        for s in surf.polygon_boundary:
            e, sg = surf.letter_of_slot(s)
            v = self.value[e]
            full.extend(v if sg > 0 else w_inv(v))
        if not self.is_trivial(tuple(full)):
            raise InternalError("scheme substitution lost the relator")

    def word_of(self, d: Drawn):
        surf = self.model.surf
        out = []
        for s in d.steps:
            let = surf.letter_of_slot(s)
            if let is None:
                continue
            e, sg = let
            v = self.value[e]
            out.extend(v if sg > 0 else w_inv(v))
        return w_reduce(tuple(out))

    # -- decision procedures --------------------------------------------------

    def _abelian(self, w):
        vec = [0] * (2 * self.model.genus)
        for x in w:
            vec[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(vec)

    def is_trivial(self, word) -> bool:
        g = self.model.genus
        if self.trivial_group or g == 0:
            return True
        if g == 1:
            return self._abelian(word) == (0, 0)
        return self.dehn.is_trivial(word)

    def words_conjugate(self, w1, w2, oriented: bool) -> bool:
        g = self.model.genus
        if self.trivial_group or g == 0:
            return True
        if g == 1:
            a1, a2 = self._abelian(w1), self._abelian(w2)
            return a1 == a2 or (not oriented and a1 == tuple(-x for x in a2))
        if self.dehn.conjugate_classes_equal(w1, w2):
            return True
        if not oriented:
            return self.dehn.conjugate_classes_equal(w1, w_inv(w2))
        return False

    def freely_homotopic(self, d1: Drawn, d2: Drawn, oriented: bool) -> bool:
        return self.words_conjugate(self.word_of(d1), self.word_of(d2),
                                    oriented)

    def is_essential(self, d: Drawn) -> bool:
        return not self.is_trivial(self.word_of(d))


def get_pi1(model: SurfaceModel) -> ModelPi1:
    p = model.cache.get("pi1")
    if p is None:
        p = ModelPi1(model)
        model.cache["pi1"] = p
    return p
