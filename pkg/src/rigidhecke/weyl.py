"""Finite and extended affine Weyl group arithmetic.

Elements of the extended affine Weyl group X ⋊ W are pairs ``(x, w)`` of a
translation vector x in Z^m and a finite-part index w, multiplying by
``(x, w)(y, v) = (x + w(y), wv)``.  Affine roots are pairs (beta^, n) of a
coroot and an integer level; ``t_x u`` sends (beta^, n) to
(u(beta^), n - <x, u(beta^)>), positives are levels > 0 together with
positive coroots at level 0, and the length of an element counts positives
sent to negatives.  The length-zero elements form the subgroup Omega ≅ X/Q.

The convention above is pinned by two mandatory certificates: every affine
simple reflection has length 1, and lengths agree with BFS word length over
S^a ∪ Omega on radius-8 balls of every preset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import intlinalg
from .rootdata import (
    BasedRootDatum,
    RootSystem,
    generate_root_system,
    validate_datum,
    _simple_root_coords,
)

Vec = tuple[int, ...]
Elt = tuple[Vec, int]  # (translation vector, finite part index)


class OmegaSearchExhausted(RuntimeError):
    """No length-zero representative found within the search box."""


class FinWeylGroup:
    """The finite Weyl group, fully materialized with BFS data.

    Element 0 is the identity; ``word[i]`` is the lexicographically least
    reduced word (as a tuple of simple-reflection positions into Pi).
    """

    def __init__(self, datum: BasedRootDatum, bound: int = 100_000):
        self.datum = datum
        m = datum.rank
        k = len(datum.simple_roots)
        self.ngens = k
        gen_mats = []
        for i in range(k):
            cols = []
            for j in range(m):
                e = tuple(int(j == t) for t in range(m))
                av = datum.simple_coroots[i]
                a = datum.simple_roots[i]
                pair = sum(e[t] * av[t] for t in range(m))
                cols.append(tuple(e[t] - pair * a[t] for t in range(m)))
            gen_mats.append(tuple(tuple(cols[j][r] for j in range(m)) for r in range(m)))
        ident = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
        self.mats: list[tuple] = [ident]
        self.index: dict[tuple, int] = {ident: 0}
        self.length: list[int] = [0]
        self.word: list[tuple[int, ...]] = [()]
        self.gen_mats = gen_mats
        frontier = [0]
        while frontier:
            nxt = []
            for wi in sorted(frontier, key=lambda t: self.word[t]):
                for g in range(k):
                    mat = self._matmul(self.mats[wi], gen_mats[g])
                    if mat not in self.index:
                        self.index[mat] = len(self.mats)
                        self.mats.append(mat)
                        self.length.append(self.length[wi] + 1)
                        self.word.append(self.word[wi] + (g,))
                        nxt.append(self.index[mat])
                        if len(self.mats) > bound:
                            raise RuntimeError("Weyl group exceeded bound")
            frontier = nxt
        self.size = len(self.mats)
        self.gen_index = [self.index[gm] for gm in gen_mats]
        self._mult_memo: dict[tuple[int, int], int] = {}
        self.inverse = [self.index[self._matinv(mat)] for mat in self.mats]

    @staticmethod
    def _matmul(a, b):
        m = len(a)
        return tuple(
            tuple(sum(a[r][k] * b[k][c] for k in range(m)) for c in range(m))
            for r in range(m)
        )

    @staticmethod
    def _matinv(a):
        m = len(a)
        if m == 0:
            return ()
        inv = intlinalg.mat_inverse_unimodular([list(r) for r in a])
        return tuple(tuple(row) for row in inv)

    def mult(self, a: int, b: int) -> int:
        key = (a, b)
        got = self._mult_memo.get(key)
        if got is None:
            got = self.index[self._matmul(self.mats[a], self.mats[b])]
            self._mult_memo[key] = got
        return got

    def act(self, w: int, x: Sequence[int]) -> Vec:
        mat = self.mats[w]
        return tuple(sum(row[j] * x[j] for j in range(len(x))) for row in mat)

    def act_frac(self, w: int, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        mat = self.mats[w]
        return tuple(sum(Fraction(row[j]) * x[j] for j in range(len(x))) for row in mat)

    def order_of(self, w: int) -> int:
        n = 1
        cur = w
        while cur != 0:
            cur = self.mult(cur, w)
            n += 1
        return n

    def subgroup(self, gens: Sequence[int]) -> tuple[list[int], dict[int, tuple[int, ...]]]:
        """Members (sorted) and lex-least words over the given Pi positions."""
        words = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for wi in sorted(frontier, key=lambda t: words[t]):
                for g in gens:
                    prod = self.mult(wi, self.gen_index[g])
                    if prod not in words:
                        words[prod] = words[wi] + (g,)
                        nxt.append(prod)
            frontier = nxt
        return sorted(words), words


@dataclass(frozen=True)
class AffineSimple:
    """One element of S^a = S ∪ {t_{-gamma} s_gamma : gamma in R_m}."""

    name: str
    elt: Elt
    kind: str  # "finite" | "affine"
    pi_index: Optional[int]  # position into Pi for finite ones
    root: Vec  # reflecting root (gamma for affine ones)
    coroot: Vec


@dataclass(frozen=True)
class AffineData:
    roots: RootSystem
    minimal_roots: tuple[Vec, ...]
    affine_simple: tuple[AffineSimple, ...]
    param_orbits: tuple[tuple[str, ...], ...]
    orbit_names: tuple[str, ...]
    two_Xvee_flags: tuple[bool, ...]


@dataclass(frozen=True)
class OmegaGroup:
    elements: tuple[Elt, ...]
    names: tuple[str, ...]
    mult: tuple[tuple[int, ...], ...]
    action_on_sa: tuple[tuple[int, ...], ...]  # permutation of S^a per element


class WeylData:
    """All derived group data of a based root datum, lazily materialized."""

    def __init__(self, datum: BasedRootDatum, weyl_bound: int = 100_000):
        self.datum = datum
        self.weyl_size = validate_datum(datum, weyl_bound)
        self.rank = datum.rank
        self._identity = ((0,) * self.rank, 0)
        self._length_cache: dict[Elt, int] = {}
        self.roots = generate_root_system(datum, weyl_bound)
        self.W = FinWeylGroup(datum, weyl_bound)
        self.root_index = {v: i for i, v in enumerate(self.roots.roots)}
        self.npi = len(datum.simple_roots)
        self._build_affine_simples()
        self._build_omega()
        self._build_orbits()
        self.gen_names = [s.name for s in self.affine_simple] + list(self.omega_names)
        order = sorted(range(len(self.gen_names)), key=lambda i: self.gen_names[i])
        self._gen_order = order  # BFS letter order: sorted by name
        self._ball: dict[Elt, tuple[int, tuple[str, ...]]] = {}
        self._ball_radius = -1

    # -- basic element operations -------------------------------------------

    def identity(self) -> Elt:
        return self._identity

    def mult(self, a: Elt, b: Elt) -> Elt:
        xa, wa = a
        xb, wb = b
        moved = self.W.act(wa, xb)
        return (tuple(p + q for p, q in zip(xa, moved)), self.W.mult(wa, wb))

    def inv(self, a: Elt) -> Elt:
        x, w = a
        wi = self.W.inverse[w]
        mx = self.W.act(wi, x)
        return (tuple(-p for p in mx), wi)

    def conjugate(self, g: Elt, e: Elt) -> Elt:
        return self.mult(self.mult(g, e), self.inv(g))

    def power(self, e: Elt, n: int) -> Elt:
        if n < 0:
            return self.power(self.inv(e), -n)
        out = self.identity()
        base = e
        while n:
            if n & 1:
                out = self.mult(out, base)
            base = self.mult(base, base)
            n >>= 1
        return out

    def act_on_X(self, e: Elt, y: Sequence[int]) -> Vec:
        x, w = e
        moved = self.W.act(w, y)
        return tuple(p + q for p, q in zip(x, moved))

    def translation(self, x: Sequence[int]) -> Elt:
        return (tuple(int(v) for v in x), 0)

    # -- length ---------------------------------------------------------------

    def length(self, e: Elt) -> int:
        """Number of positive affine roots sent to negative ones."""
        got = self._length_cache.get(e)
        if got is not None:
            return got
        x, w = e
        nroots = len(self.roots.roots)
        if nroots == 0:
            return 0
        shifts = []
        img = []
        for k in range(nroots):
            beta = self.roots.roots[k]
            iv = self.root_index[self.W.act(w, beta)]
            img.append(iv)
            cv = self.roots.coroots[iv]
            shifts.append(sum(a * b for a, b in zip(x, cv)))
        nmax = 1 + max(abs(c) for c in shifts)
        total = 0
        for k in range(nroots):
            iv = img[k]
            c = shifts[k]
            for n in range(nmax + 1):
                src_pos = n > 0 or (n == 0 and self.roots.positive[k])
                lvl = n - c
                img_neg = lvl < 0 or (lvl == 0 and not self.roots.positive[iv])
                if src_pos and img_neg:
                    total += 1
        self._length_cache[e] = total
        return total

    # -- affine simple system -------------------------------------------------

    def _build_affine_simples(self):
        datum = self.datum
        simples = []
        for i in range(self.npi):
            a = datum.simple_roots[i]
            av = datum.simple_coroots[i]
            w = self.W.gen_index[i]
            simples.append(
                AffineSimple(f"s{i + 1}", ((0,) * self.rank, w), "finite", i, a, av)
            )
        # components of the finite diagram (by simple-root adjacency)
        comp = list(range(self.npi))

        def find(i):
            while comp[i] != i:
                comp[i] = comp[comp[i]]
                i = comp[i]
            return i

        for i in range(self.npi):
            for j in range(i + 1, self.npi):
                if datum.pairing(datum.simple_roots[i], datum.simple_coroots[j]) != 0:
                    comp[find(i)] = find(j)
        comp_ids = sorted({find(i) for i in range(self.npi)})
        # R_m: roots whose coroots are dominance-minimal within their component
        minimal = []
        for cid_pos, cid in enumerate(comp_ids):
            members = [i for i in range(self.npi) if find(i) == cid]
            cand = []
            for k, gamma in enumerate(self.roots.roots):
                coords = _simple_root_coords(datum, gamma)
                if any(coords[i] != 0 for i in range(self.npi) if find(i) != cid):
                    continue
                if all(coords[i] == 0 for i in members):
                    continue
                cand.append(k)
            def leq(b, a):  # b <= a in (R^, <=): a^ - b^ nonneg integer comb of Pi^
                diff = tuple(
                    p - q for p, q in zip(self.roots.coroots[a], self.roots.coroots[b])
                )
                coords = _coroot_coords(datum, diff)
                return coords is not None and all(
                    c >= 0 and c.denominator == 1 for c in coords
                )
            for k in cand:
                if all(k == j or not leq(j, k) for j in cand):
                    gamma = self.roots.roots[k]
                    gv = self.roots.coroots[k]
                    w = self._reflection_index(k)
                    name = "s0" if len(comp_ids) == 1 else f"s0{chr(ord('a') + cid_pos)}"
                    simples.append(
                        AffineSimple(
                            name,
                            (tuple(-t for t in gamma), w),
                            "affine",
                            None,
                            gamma,
                            gv,
                        )
                    )
                    minimal.append(gamma)
                    break  # minimal coroot is unique per component
        self.affine_simple = tuple(
            sorted(simples, key=lambda s: s.name)
        )
        self.minimal_roots = tuple(minimal)
        self.sa_index = {s.name: i for i, s in enumerate(self.affine_simple)}
        self.sa_by_elt = {s.elt: i for i, s in enumerate(self.affine_simple)}
        self.two_Xvee_flags = tuple(
            all(c % 2 == 0 for c in datum.simple_coroots[i]) for i in range(self.npi)
        )

    def _reflection_index(self, root_pos: int) -> int:
        """Index in W of the reflection in the root at position root_pos."""
        m = self.rank
        a = self.roots.roots[root_pos]
        av = self.roots.coroots[root_pos]
        cols = []
        for j in range(m):
            e = tuple(int(j == t) for t in range(m))
            pair = sum(e[t] * av[t] for t in range(m))
            cols.append(tuple(e[t] - pair * a[t] for t in range(m)))
        mat = tuple(tuple(cols[j][r] for j in range(m)) for r in range(m))
        return self.W.index[mat]

    def bond_order(self, i: int, j: int, cap: int = 12) -> Optional[int]:
        """Order of s_i s_j for S^a members, or None if it exceeds the cap."""
        prod = self.mult(self.affine_simple[i].elt, self.affine_simple[j].elt)
        cur = prod
        for n in range(1, cap + 1):
            if cur == self.identity():
                return n
            cur = self.mult(cur, prod)
        return None

    # -- Omega ----------------------------------------------------------------

    def _build_omega(self):
        datum = self.datum
        m = self.rank
        if m == 0:
            self.omega_elements = (self.identity(),)
            self.omega_names = ()
            self._omega_name = {self.identity(): None}
            self.omega_mult = ((0,),)
            self.omega_action_sa = ((),)
            return
        amat = [list(r) for r in datum.simple_roots]
        d, _u, v = intlinalg.smith_normal_form(amat)
        divisors = [d[i][i] if i < min(len(d), m) else 0 for i in range(m)]
        if any(x == 0 for x in divisors):
            raise OmegaSearchExhausted(
                "X/Q is infinite (datum not semisimple); Omega not materialized"
            )
        vinv = intlinalg.mat_inverse_unimodular(v)
        reps = []
        for combo in itertools.product(*[range(abs(di)) for di in divisors]):
            reps.append(tuple(intlinalg.mat_vec(list(zip(*vinv)), list(combo))))
        found = []
        for rep in reps:
            bound = max(abs(c) for c in rep) + 2
            hit = None
            for x in itertools.product(range(-bound, bound + 1), repeat=m):
                diff = [a - b for a, b in zip(x, rep)]
                if not intlinalg.in_lattice([list(r) for r in datum.simple_roots], diff):
                    continue
                for w in range(self.W.size):
                    if self.length((tuple(x), w)) == 0:
                        hit = (tuple(x), w)
                        break
                if hit:
                    break
            if hit is None:
                raise OmegaSearchExhausted(f"no length-0 element in coset of {rep}")
            found.append(hit)
        ident = self.identity()
        others = sorted([e for e in found if e != ident])
        self.omega_elements = (ident,) + tuple(others)
        self.omega_names = tuple(
            "tau" if i == 0 else f"tau{i + 1}" for i in range(len(others))
        )
        self._omega_name = {e: (None if e == ident else self.omega_names[k])
                            for k, e in enumerate(self.omega_elements[1:], 0)}
        self._omega_name[ident] = None
        lookup = {e: i for i, e in enumerate(self.omega_elements)}
        mult = []
        for a in self.omega_elements:
            row = []
            for b in self.omega_elements:
                p = self.mult(a, b)
                if p not in lookup:
                    raise OmegaSearchExhausted("Omega candidates not closed")
                row.append(lookup[p])
            mult.append(tuple(row))
        self.omega_mult = tuple(mult)
        acts = []
        for om in self.omega_elements:
            perm = []
            for s in self.affine_simple:
                c = self.conjugate(om, s.elt)
                if c not in self.sa_by_elt:
                    raise OmegaSearchExhausted(
                        f"Omega element {om} does not normalize S^a"
                    )
                perm.append(self.sa_by_elt[c])
            acts.append(tuple(perm))
        self.omega_action_sa = tuple(acts)

    # -- parameter orbits -------------------------------------------------------

    def _build_orbits(self):
        n = len(self.affine_simple)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(i, j):
            parent[find(i)] = find(j)

        for i in range(n):
            for j in range(i + 1, n):
                m = self.bond_order(i, j)
                if m is not None and m % 2 == 1:
                    union(i, j)
        for perm in self.omega_action_sa:
            for i in range(n):
                union(i, perm[i])
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        orbits = sorted(
            (tuple(sorted(g, key=lambda k: self.affine_simple[k].name)) for g in groups.values()),
            key=lambda g: self.affine_simple[g[0]].name,
        )
        self.param_orbits = orbits
        custom = self.datum.param_orbit_names
        if custom is not None and len(custom) != len(orbits):
            raise ValueError(
                f"param_orbit_names has {len(custom)} entries, datum has {len(orbits)} orbits"
            )
        if custom is not None:
            names = list(custom)
        elif len(orbits) == 1:
            names = ["q"]
        else:
            names = [f"q{k}" for k in range(len(orbits))]
        self.orbit_names = tuple(names)
        self.orbit_of_sa = [0] * n
        for oi, g in enumerate(orbits):
            for k in g:
                self.orbit_of_sa[k] = oi

    # -- accessors used by rootdata wrappers ------------------------------------

    def affine_data(self) -> AffineData:
        return AffineData(
            self.roots,
            self.minimal_roots,
            self.affine_simple,
            tuple(tuple(self.affine_simple[k].name for k in g) for g in self.param_orbits),
            self.orbit_names,
            self.two_Xvee_flags,
        )

    def omega_data(self) -> OmegaGroup:
        return OmegaGroup(
            self.omega_elements, self.omega_names, self.omega_mult, self.omega_action_sa
        )

    # -- generators, balls, words -------------------------------------------------

    def generator_elt(self, name: str) -> Elt:
        if name in self.sa_index:
            return self.affine_simple[self.sa_index[name]].elt
        if name in self.omega_names:
            return self.omega_elements[1 + self.omega_names.index(name)]
        raise KeyError(f"unknown generator {name!r}; have {self.gen_names}")

    def evaluate_word(self, letters: Iterable[str]) -> Elt:
        e = self.identity()
        for name in letters:
            e = self.mult(e, self.generator_elt(name))
        return e

    def _extend_ball(self, radius: int):
        if radius <= self._ball_radius:
            return
        if self._ball_radius < 0:
            self._ball = {}
            ident = self.identity()
            self._ball[ident] = (0, ())
            layer = [ident]
            self._close_omega(layer)
            self._layers = [sorted(layer, key=lambda e: self._ball[e][1])]
            self._ball_radius = 0
        while self._ball_radius < radius:
            cur = self._layers[self._ball_radius]
            nxt = []
            target = self._ball_radius + 1
            for e in cur:
                word = self._ball[e][1]
                for gi in self._gen_order:
                    name = self.gen_names[gi]
                    if name not in self.sa_index:
                        continue
                    f = self.mult(e, self.generator_elt(name))
                    if f in self._ball:
                        continue
                    if self.length(f) != target:
                        continue
                    self._ball[f] = (target, word + (name,))
                    nxt.append(f)
            self._close_omega(nxt)
            self._layers.append(sorted(nxt, key=lambda e: self._ball[e][1]))
            self._ball_radius = target

    def _close_omega(self, layer: list[Elt]):
        queue = sorted(layer, key=lambda e: self._ball[e][1])
        while queue:
            e = queue.pop(0)
            lv, word = self._ball[e]
            for k, name in enumerate(self.omega_names):
                f = self.mult(e, self.omega_elements[k + 1])
                if f not in self._ball:
                    self._ball[f] = (lv, word + (name,))
                    layer.append(f)
                    queue.append(f)

    def enumerate_ball(self, max_length: int) -> list[Elt]:
        """All elements of length <= max_length, canonically sorted."""
        self._extend_ball(max_length)
        out = [e for e, (lv, _) in self._ball.items() if lv <= max_length]
        out.sort(key=lambda e: (self._ball[e][0], e[0], e[1]))
        return out

    def word(self, e: Elt) -> tuple[str, ...]:
        """Lex-least geodesic word of e over generator names."""
        need = self.length(e)
        self._extend_ball(need)
        try:
            return self._ball[e][1]
        except KeyError:
            raise RuntimeError(f"element {e} of length {need} missing from ball") from None

    def label(self, e: Elt) -> str:
        return "".join(self.word(e)) or "1"

    def render(self, e: Elt) -> str:
        """Canonical rendering ``t[x1,..,xm]*w`` used in CLI output/goldens."""
        x, w = e
        fw = "".join(f"s{i + 1}" for i in self.W.word[w]) or "e"
        return f"t[{','.join(str(c) for c in x)}]*{fw}"

    # -- Newton points and ellipticity ---------------------------------------------

    def dominant_rep(self, nu: Sequence[Fraction]) -> tuple[Fraction, ...]:
        v = [Fraction(t) for t in nu]
        moved = True
        while moved:
            moved = False
            for i in range(self.npi):
                av = self.datum.simple_coroots[i]
                p = sum(a * b for a, b in zip(v, av))
                if p < 0:
                    a = self.datum.simple_roots[i]
                    v = [t - p * s for t, s in zip(v, a)]
                    moved = True
        return tuple(v)

    def newton_point(self, e: Elt) -> tuple[tuple[Fraction, ...], tuple[int, ...]]:
        """Dominant Newton point and the subset J_nu of Pi it is fixed by."""
        x, w = e
        n = self.W.order_of(w)
        lam = [0] * self.rank
        cur = list(x)
        wp = 0
        for _ in range(n):
            lam = [a + b for a, b in zip(lam, self.W.act(wp, x))]
            wp = self.W.mult(wp, w)
        nu = [Fraction(a, n) for a in lam]
        dom = self.dominant_rep(nu)
        j = tuple(
            i
            for i in range(self.npi)
            if sum(a * b for a, b in zip(dom, self.datum.simple_coroots[i])) == 0
        )
        return dom, j

    def has_finite_order(self, e: Elt) -> bool:
        _x, w = e
        return self.power(e, self.W.order_of(w)) == self.identity()

    def is_elliptic(self, e: Elt) -> bool:
        """Fixed space of the finite part lies inside the W-invariants."""
        _x, w = e
        m = self.rank
        if m == 0:
            return True
        mat = self.W.mats[w]
        rows = [
            [Fraction(mat[r][c] - int(r == c)) for c in range(m)] for r in range(m)
        ]
        # fixed vectors x: (M - I) x = 0, i.e. x in kernel of columns
        ker = intlinalg.rational_kernel_basis([[rows[c][r] for c in range(m)] for r in range(m)])
        for v in ker:
            for i in range(self.npi):
                if sum(a * b for a, b in zip(v, self.datum.simple_coroots[i])) != 0:
                    return False
        return True

    # -- cosets ---------------------------------------------------------------------

    def minimal_coset_reps(self, J: Sequence[int]) -> list[int]:
        """W^J = {w : l(w s_j) > l(w) for all j in J}, sorted by (length, word)."""
        out = []
        for w in range(self.W.size):
            ok = True
            for j in J:
                img = self.W.act(w, self.datum.simple_roots[j])
                if not self.roots.positive[self.root_index[img]]:
                    ok = False
                    break
            if ok:
                out.append(w)
        out.sort(key=lambda w: (self.W.length[w], self.W.word[w]))
        return out

    def double_coset_reps(self, K: Sequence[int], J: Sequence[int]):
        """^K W^J with K_w = K ∩ wJw^{-1} and J_w = J ∩ w^{-1}Kw per rep."""
        roots = self.datum.simple_roots
        jroots = {roots[j] for j in J}
        kroots = {roots[k] for k in K}
        reps = []
        for w in self.minimal_coset_reps(J):
            wi = self.W.inverse[w]
            if any(
                not self.roots.positive[self.root_index[self.W.act(wi, roots[k])]]
                for k in K
            ):
                continue
            kw = tuple(k for k in K if self.W.act(wi, roots[k]) in jroots)
            jw = tuple(j for j in J if self.W.act(w, roots[j]) in kroots)
            reps.append((w, kw, jw))
        return reps

    def factorize_coset(self, w: int, J: Sequence[int]) -> tuple[int, int]:
        """w = u * w_J with u in W^J, w_J in W_J, lengths adding."""
        u = w
        wj = 0
        moved = True
        while moved:
            moved = False
            for j in J:
                img = self.W.act(u, self.datum.simple_roots[j])
                if not self.roots.positive[self.root_index[img]]:
                    u = self.W.mult(u, self.W.gen_index[j])
                    wj = self.W.mult(self.W.gen_index[j], wj)
                    moved = True
        return u, wj

    def coset_reps(self, J: Sequence[int], K: Optional[Sequence[int]] = None):
        """W^J, or with K the triples (w, K_w, J_w) over ^K W^J."""
        if K is None:
            return self.minimal_coset_reps(J)
        return self.double_coset_reps(K, J)

    def normalizer_reps(self, J: Sequence[int]) -> list[int]:
        """N_J = {z in ^J W^J : z(J) = J}."""
        roots = self.datum.simple_roots
        jroots = {roots[j] for j in J}
        out = []
        for w, _kw, _jw in self.double_coset_reps(J, J):
            if all(self.W.act(w, roots[j]) in jroots for j in J):
                out.append(w)
        return out


def _coroot_coords(datum: BasedRootDatum, v: Sequence[int]):
    dual = BasedRootDatum(
        datum.name + "^", datum.rank, datum.simple_coroots, datum.simple_roots
    )
    return _simple_root_coords(dual, v)
