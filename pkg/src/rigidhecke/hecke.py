"""The affine Hecke algebra over the Laurent ring of formal parameter roots.

Internal canonical form is Iwahori-Matsumoto: finite maps from extended
affine Weyl elements to Laurent coefficients, with T_w T_s = T_{ws} when
lengths add and the quadratic relation (T_s + 1)(T_s - q(s)^2) = 0.  The
Bernstein-Lusztig form Σ c θ_x T_w is computed on demand: θ_x is seeded from
dominant translations via θ_x = q(t_{x1})^{-1} q(t_{x2}) T_{t_{x1}}
T_{t_{x2}}^{-1}, the affine generator's Bernstein expression is derived from
θ_{-γ} (never hardcoded), and the cross-commutation uses the finite
geometric-sum expansion of the Bernstein-Lusztig relation, with the
q(s)q(s~) branch when α^ ∈ 2X^.

Parabolic subalgebras H_J carry the same lattice and the parameter pairs
inherited from the ambient diagram; their elements are kept in Bernstein
form.  The cocenter operations (T_O, reduction to minimal classes, the
r̄_J blocks) all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .conj import ConjClassRecord, NotFound
from .exactpoly import LaurentPoly, PARAM_SQRT, TWIST, VarTable
from .rootdata import SemisimpleQuotient, semisimple_quotient
from .weyl import Elt, WeylData

Vec = tuple[int, ...]
BKey = tuple[Vec, int]  # (theta exponent, finite Weyl index)


class ConversionBudgetExceeded(RuntimeError):
    pass


class NonNewtonZeroLeaf(RuntimeError):
    """Cocenter reduction reached a class outside the provided list."""


class BudgetExceeded(RuntimeError):
    pass


def _sqrt_name(orbit_name: str) -> str:
    return "v" + orbit_name[1:] if orbit_name.startswith("q") else "v_" + orbit_name


class HeckeContext:
    """Algebra context: a WeylData plus the parameter/twist variable table.

    ``orbit_assignment`` maps orbit names to display parameter names and may
    merge orbits (the SL(2) table uses a single q for both orbits).
    """

    def __init__(
        self,
        wd: WeylData,
        orbit_assignment: Optional[Mapping[str, str]] = None,
        n_twist: int = 0,
        table: Optional[VarTable] = None,
        var_of_orbit: Optional[Sequence[str]] = None,
    ):
        self.wd = wd
        if table is not None:
            # shared-ring construction (quotient algebras)
            self.table = table
            self.var_of_orbit = list(var_of_orbit)
        else:
            assignment = dict(orbit_assignment or {})
            display = [assignment.get(n, n) for n in wd.orbit_names]
            names: list[str] = []
            for d in display:
                v = _sqrt_name(d)
                if v not in names:
                    names.append(v)
            kinds = [PARAM_SQRT] * len(names)
            for k in range(n_twist):
                names.append(f"z{k}")
                kinds.append(TWIST)
            self.table = VarTable(tuple(names), tuple(kinds))
            self.var_of_orbit = [_sqrt_name(d) for d in display]
        self.n_twist = sum(1 for k in self.table.kinds if k == TWIST)
        self.twist_names = [
            n for n, k in zip(self.table.names, self.table.kinds) if k == TWIST
        ]
        self._one = LaurentPoly.const(self.table, 1)
        self._zero = LaurentPoly(self.table, {})
        # per affine-simple data
        self.v_of_sa = [
            self.table.gen(self.var_of_orbit[wd.orbit_of_sa[k]])
            for k in range(len(wd.affine_simple))
        ]
        self.Q_of_sa = [v * v for v in self.v_of_sa]
        # per finite simple root: v, Q, and the q(s)q(s~) twin data
        self._build_finite_pairs()
        self.two_rho_vee = [0] * wd.rank
        for k, pos in enumerate(wd.roots.positive):
            if pos:
                cv = wd.roots.coroots[k]
                self.two_rho_vee = [a + b for a, b in zip(self.two_rho_vee, cv)]
        self._theta_im_cache: dict[Vec, "HeckeElt"] = {}
        self._theta_T_cache: dict[BKey, "HeckeElt"] = {}
        self._bern_seed: dict[str, "BernsteinElt"] = {}
        self._split_cache: dict[Vec, tuple[Vec, Vec]] = {}
        self._parabolic_cache: dict[tuple[int, ...], "Parabolic"] = {}
        self._quotient_cache: dict[tuple[int, ...], "QuotientAlgebra"] = {}

    # -- parameter plumbing --------------------------------------------------

    def _build_finite_pairs(self):
        wd = self.wd
        n = len(wd.affine_simple)
        bonds = {}
        for i in range(n):
            for j in range(i + 1, n):
                m = wd.bond_order(i, j)
                if m is None or m > 2:
                    bonds.setdefault(i, []).append(j)
                    bonds.setdefault(j, []).append(i)
        self.v_of_pi: list[LaurentPoly] = []
        self.Q_of_pi: list[LaurentPoly] = []
        self.twin_v_of_pi: list[Optional[LaurentPoly]] = []
        for i in range(wd.npi):
            k = wd.sa_index[f"s{i + 1}"]
            v = self.v_of_sa[k]
            self.v_of_pi.append(v)
            self.Q_of_pi.append(v * v)
            if not wd.two_Xvee_flags[i]:
                self.twin_v_of_pi.append(None)
                continue
            # mirror node of s in its affine C~_l component (a path graph)
            comp = {k}
            frontier = [k]
            while frontier:
                nxt = []
                for a in frontier:
                    for b in bonds.get(a, []):
                        if b not in comp:
                            comp.add(b)
                            nxt.append(b)
                frontier = nxt
            ends = [a for a in comp if len([b for b in bonds.get(a, []) if b in comp]) <= 1]
            if len(comp) == 1:
                raise ValueError("2X^-flagged root with isolated diagram node")
            start = min(ends)
            path = [start]
            while len(path) < len(comp):
                nbrs = [b for b in bonds.get(path[-1], []) if b in comp and b not in path]
                if len(nbrs) != 1:
                    raise ValueError("2X^ component is not a path; cannot find s~")
                path.append(nbrs[0])
            mirror = path[len(path) - 1 - path.index(k)]
            self.twin_v_of_pi.append(self.v_of_sa[mirror])

    def one(self) -> LaurentPoly:
        return self._one

    def zero(self) -> LaurentPoly:
        return self._zero

    def q_mono_of_word(self, letters: Iterable[str]) -> LaurentPoly:
        out = self._one
        for name in letters:
            if name in self.wd.sa_index:
                out = out * self.v_of_sa[self.wd.sa_index[name]]
        return out

    def q_of_elt(self, e: Elt) -> LaurentPoly:
        return self.q_mono_of_word(self.wd.word(e))

    # -- IM elements -----------------------------------------------------------

    def elt(self, support: Mapping[Elt, LaurentPoly]) -> "HeckeElt":
        return HeckeElt(self, dict(support))

    def unit(self) -> "HeckeElt":
        return HeckeElt(self, {self.wd.identity(): self._one})

    def T(self, e: Elt) -> "HeckeElt":
        return HeckeElt(self, {e: self._one})

    def T_word(self, letters: Iterable[str]) -> "HeckeElt":
        out = self.unit()
        for name in letters:
            out = out.mul_gen_right(name)
        return out

    # -- theta machinery ---------------------------------------------------------

    def is_dominant(self, x: Sequence[int]) -> bool:
        d = self.wd.datum
        return all(
            sum(a * b for a, b in zip(x, d.simple_coroots[i])) >= 0
            for i in range(self.wd.npi)
        )

    def translation_length(self, x: Sequence[int]) -> int:
        # for dominant x equals <x, 2 rho^>; used only as a search heuristic
        return self.wd.length(self.wd.translation(x))

    def dominant_split(self, x: Vec) -> tuple[Vec, Vec]:
        """x = x1 - x2 with x1, x2 dominant, minimizing total length."""
        x = tuple(x)
        got = self._split_cache.get(x)
        if got is not None:
            return got
        import itertools as it

        m = self.wd.rank
        best = None
        for bound in range(0, 16):
            for combo in it.product(range(-bound, bound + 1), repeat=m):
                if max((abs(c) for c in combo), default=0) != bound:
                    continue
                x2 = tuple(combo)
                if not self.is_dominant(x2):
                    continue
                x1 = tuple(a + b for a, b in zip(x, x2))
                if not self.is_dominant(x1):
                    continue
                cost = self.translation_length(x1) + self.translation_length(x2)
                if best is None or cost < best[0]:
                    best = (cost, x1, x2)
            if best is not None:
                break
        if best is None:
            raise RuntimeError(f"no dominant split of {x} up to box 15")
        self._split_cache[x] = (best[1], best[2])
        return best[1], best[2]

    def theta_im(self, x: Vec) -> "HeckeElt":
        """IM form of θ_x."""
        x = tuple(x)
        got = self._theta_im_cache.get(x)
        if got is not None:
            return got
        x1, x2 = self.dominant_split(x)
        out = self.theta_im_from_split(x1, x2)
        self._theta_im_cache[x] = out
        return out

    def theta_im_from_split(self, x1: Vec, x2: Vec) -> "HeckeElt":
        """q(t_{x1})^{-1} q(t_{x2}) T_{t_{x1}} T_{t_{x2}}^{-1} for a chosen
        dominant split; the result is independent of the split (tested)."""
        wd = self.wd
        if not (self.is_dominant(x1) and self.is_dominant(x2)):
            raise ValueError("both split parts must be dominant")
        t1 = wd.translation(x1)
        t2 = wd.translation(x2)
        out = self.T(t1)
        for name in reversed(wd.word(t2)):
            out = out.mul_geninv_right(name)
        return out.scale(self.q_of_elt(t1).inverse() * self.q_of_elt(t2))

    def theta_element(self, x: Vec) -> "BernsteinElt":
        """θ_x as a Bernstein basis element (its IM form is theta_im)."""
        return BernsteinElt(self, {(tuple(x), 0): self._one})

    def theta_T_im(self, x: Vec, w: int) -> "HeckeElt":
        key = (tuple(x), w)
        got = self._theta_T_cache.get(key)
        if got is not None:
            return got
        out = self.theta_im(x)
        for j in self.wd.W.word[w]:
            out = out.mul_gen_right(f"s{j + 1}")
        self._theta_T_cache[key] = out
        return out

    # -- IM <-> Bernstein conversion -----------------------------------------------

    def _elim_key(self, e: Elt):
        x, w = e
        dom = self.wd.dominant_rep([Fraction(c) for c in x])
        dom = tuple(int(c) for c in dom)
        l_dom = sum(
            a * b for a, b in zip(dom, self.two_rho_vee)
        )
        drop = sum((a - Fraction(b)) * c for a, b, c in zip(dom, x, self.two_rho_vee))
        return (l_dom, drop, self.wd.W.length[w], w, x)

    def im_to_bernstein(self, h: "HeckeElt", budget: int = 50_000) -> "BernsteinElt":
        work = dict(h.c)
        out: dict[BKey, LaurentPoly] = {}
        steps = 0
        while work:
            steps += 1
            if steps > budget:
                raise ConversionBudgetExceeded(f"IM->Bernstein exceeded {budget} steps")
            e = max(work, key=self._elim_key)
            c = work.pop(e)
            if c.is_zero():
                continue
            x, w = e
            p = self.theta_T_im(x, w)
            unit = p.c.get(e)
            if unit is None or not unit.is_monomial():
                raise ConversionBudgetExceeded(
                    f"theta_T({x},{w}) has non-unit coefficient at its anchor"
                )
            q = c * unit.inverse()
            key = (x, w)
            prev = out.get(key, self._zero) + q
            if prev.is_zero():
                out.pop(key, None)
            else:
                out[key] = prev
            for f, cf in p.c.items():
                if f == e:
                    continue
                s = work.get(f, self._zero) - q * cf
                if s.is_zero():
                    work.pop(f, None)
                else:
                    work[f] = s
        return BernsteinElt(self, out)

    def bernstein_to_im(self, b: "BernsteinElt") -> "HeckeElt":
        out = self.elt({})
        for (x, w), c in b.c.items():
            out = out + self.theta_T_im(x, w).scale(c)
        return out

    def bernstein_seed(self, name: str) -> "BernsteinElt":
        """Bernstein form of T_{s0} (derived from θ_{-γ}) or T_ω."""
        got = self._bern_seed.get(name)
        if got is not None:
            return got
        wd = self.wd
        if name in wd.sa_index:
            s = wd.affine_simple[wd.sa_index[name]]
            if s.kind == "finite":
                out = BernsteinElt(
                    self, {((0,) * wd.rank, wd.W.gen_index[s.pi_index]): self._one}
                )
            else:
                gamma = s.root
                mg = tuple(-c for c in gamma)
                t = wd.translation(mg)
                refl = s.elt[1]
                if wd.length(t) != 1 + wd.W.length[refl]:
                    raise RuntimeError("l(t_{-gamma}) != 1 + l(s_gamma); convention broken")
                inv = self.unit()
                for j in reversed(wd.W.word[refl]):
                    inv = inv.mul_geninv_right(f"s{j + 1}")
                coeff = self.q_of_elt(t)
                terms = {}
                for e, c in inv.c.items():
                    xx, ww = e
                    if xx != (0,) * wd.rank:
                        raise RuntimeError("finite inverse left the finite part")
                    terms[(mg, ww)] = coeff * c
                out = BernsteinElt(self, terms)
        else:
            out = self.im_to_bernstein(self.T(wd.generator_elt(name)))
        self._bern_seed[name] = out
        return out

    # -- subalgebras ------------------------------------------------------------------

    def parabolic(self, J: Sequence[int]) -> "Parabolic":
        J = tuple(sorted(J))
        got = self._parabolic_cache.get(J)
        if got is None:
            got = Parabolic(self, J)
            self._parabolic_cache[J] = got
        return got

    def quotient_algebra(self, J: Sequence[int]) -> "QuotientAlgebra":
        J = tuple(sorted(J))
        got = self._quotient_cache.get(J)
        if got is None:
            got = QuotientAlgebra(self, J)
            self._quotient_cache[J] = got
        return got

    # -- cocenter ---------------------------------------------------------------------

    def class_element(self, rec: ConjClassRecord) -> "HeckeElt":
        return self.T(rec.rep)

    def cocenter_reduce(
        self,
        e: Elt,
        classes: Sequence[ConjClassRecord],
        extend: bool = False,
        budget: int = 1_000_000,
    ) -> "CocenterCombination":
        """Express T_e as Σ a_O T_O modulo commutators by length descent."""
        from .conj import descend_to_minimal

        wd = self.wd
        known = list(classes)
        out: dict[str, LaurentPoly] = {}
        rec_by_label = {r.label: r for r in known}
        work: dict[Elt, LaurentPoly] = {e: self._one}
        steps = 0
        while work:
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"cocenter reduction exceeded {budget} steps")
            cur = max(work, key=lambda t: (wd.length(t), t[0], t[1]))
            c = work.pop(cur)
            if c.is_zero():
                continue
            lcur = wd.length(cur)
            # explore the equal-length plateau for a strict descent
            seen = {cur}
            queue = [cur]
            descent = None
            while queue and descent is None:
                f = queue.pop(0)
                for s in wd.affine_simple:
                    g = wd.conjugate(s.elt, f)
                    lg = wd.length(g)
                    if lg <= lcur - 2:
                        descent = (f, s)
                        break
                    if lg == lcur and g not in seen:
                        seen.add(g)
                        queue.append(g)
                if descent is not None:
                    break
                for om in wd.omega_elements[1:]:
                    g = wd.conjugate(om, f)
                    if g not in seen:
                        seen.add(g)
                        queue.append(g)
                if len(seen) > budget:
                    raise BudgetExceeded("plateau exploration exceeded budget")
            if descent is None:
                # minimal: identify the class
                rec = None
                for r in known:
                    if seen & set(r.min_reps):
                        rec = r
                        break
                if rec is None:
                    plateau, _ = descend_to_minimal(wd, cur)
                    for r in known:
                        if set(plateau) & set(r.min_reps):
                            rec = r
                            break
                if rec is None:
                    if not extend:
                        nu, _ = wd.newton_point(cur)
                        if any(nu):
                            raise NonNewtonZeroLeaf(
                                f"leaf {wd.render(cur)} has Newton point {nu}"
                            )
                        raise NotFound(
                            f"minimal leaf {wd.render(cur)} not in the class list"
                        )
                    plateau, _ = descend_to_minimal(wd, cur)
                    rep = min(plateau, key=wd.word)
                    nu, j_o = wd.newton_point(rep)
                    rec = ConjClassRecord(
                        rep=rep,
                        label=wd.label(rep),
                        min_length=wd.length(rep),
                        min_reps=tuple(plateau),
                        newton=nu,
                        J_O=j_o,
                        elliptic=wd.is_elliptic(rep),
                    )
                    known.append(rec)
                    rec_by_label[rec.label] = rec
                prev = out.get(rec.label, self._zero) + c
                if prev.is_zero():
                    out.pop(rec.label, None)
                else:
                    out[rec.label] = prev
                continue
            f, s = descent
            sf = wd.mult(s.elt, f)
            sfs = wd.conjugate(s.elt, f)
            if wd.length(sf) != lcur - 1:
                # use the right-handed variant: T_f = T_{fs} T_s
                fs = wd.mult(f, s.elt)
                if wd.length(fs) != lcur - 1:
                    raise RuntimeError("descent without one-sided length drop")
                sf = fs
            Q = self.Q_of_sa[wd.sa_index[s.name]]
            for tgt, cc in ((sf, c * (Q - 1)), (sfs, c * Q)):
                prev = work.get(tgt, self._zero) + cc
                if prev.is_zero():
                    work.pop(tgt, None)
                else:
                    work[tgt] = prev
        entries = [(rec_by_label[lab], out[lab]) for lab in out]
        entries.sort(key=lambda t: (t[0].min_length, wd.word(t[0].rep)), reverse=True)
        return CocenterCombination(self, tuple(entries), e)

    # -- restriction to parabolic blocks ----------------------------------------------

    def bar_restrict(self, h: "HeckeElt", J: Sequence[int]) -> "ParabolicElt":
        """r̃_J(h) = Σ_u (u,u)-block of left multiplication on ⊕ T_u H_J."""
        par = self.parabolic(J)
        total = par.zero_elt()
        for u in par.coset_reps:
            hu = h
            for j in self.wd.W.word[u]:
                hu = hu.mul_gen_right(f"s{j + 1}")
            blocks = par.decompose(self.im_to_bernstein(hu))
            blk = blocks.get(u)
            if blk is not None:
                total = total + blk
        return total

    def adjoint_iJ_rJ(self, h: "HeckeElt", J: Sequence[int]) -> "HeckeElt":
        """ī_J(r̄_J(h)) at the element level: restrict blocks, embed back."""
        return self.bar_restrict(h, J).to_ambient_im()

    def adjoint_A(self, h: "HeckeElt") -> "HeckeElt":
        """The operator adjoint to A: bar A = bar A^1 ∘ ... ∘ bar A^{|Pi|}."""
        from itertools import combinations

        npi = self.wd.npi
        cur = h
        for ell in range(npi, 0, -1):
            for K in combinations(range(npi), npi - ell):
                n_k = len(self.wd.normalizer_reps(K))
                cur = self.adjoint_iJ_rJ(cur, K) - cur.scale(
                    LaurentPoly.const(self.table, n_k)
                )
        return cur


class HeckeElt:
    """Finite Λ-combination of IM basis elements T_w."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: HeckeContext, c: dict):
        self.ctx = ctx
        self.c = {e: v for e, v in c.items() if not v.is_zero()}

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        out = dict(self.c)
        for e, v in other.c.items():
            s = out.get(e, self.ctx._zero) + v
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return HeckeElt(self.ctx, out)

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + other.scale(LaurentPoly.const(self.ctx.table, -1))

    def scale(self, c: LaurentPoly) -> "HeckeElt":
        return HeckeElt(self.ctx, {e: v * c for e, v in self.c.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElt) and self.c == other.c

    def is_zero(self) -> bool:
        return not self.c

    def mul_gen_right(self, name: str) -> "HeckeElt":
        ctx = self.ctx
        wd = ctx.wd
        g = wd.generator_elt(name)
        out: dict = {}

        def add(e, v):
            s = out.get(e, ctx._zero) + v
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s

        if name not in wd.sa_index:  # omega: always length-preserving
            for e, v in self.c.items():
                add(wd.mult(e, g), v)
            return HeckeElt(ctx, out)
        Q = ctx.Q_of_sa[wd.sa_index[name]]
        for e, v in self.c.items():
            eg = wd.mult(e, g)
            if wd.length(eg) > wd.length(e):
                add(eg, v)
            else:
                add(e, v * (Q - 1))
                add(eg, v * Q)
        return HeckeElt(ctx, out)

    def mul_gen_left(self, name: str) -> "HeckeElt":
        ctx = self.ctx
        wd = ctx.wd
        g = wd.generator_elt(name)
        out: dict = {}

        def add(e, v):
            s = out.get(e, ctx._zero) + v
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s

        if name not in wd.sa_index:
            for e, v in self.c.items():
                add(wd.mult(g, e), v)
            return HeckeElt(ctx, out)
        Q = ctx.Q_of_sa[wd.sa_index[name]]
        for e, v in self.c.items():
            ge = wd.mult(g, e)
            if wd.length(ge) > wd.length(e):
                add(ge, v)
            else:
                add(e, v * (Q - 1))
                add(ge, v * Q)
        return HeckeElt(ctx, out)

    def mul_geninv_right(self, name: str) -> "HeckeElt":
        """Multiply by T_s^{-1} = Q^{-1} T_s + (Q^{-1} - 1), or T_ω^{-1}."""
        ctx = self.ctx
        wd = ctx.wd
        if name not in wd.sa_index:
            g = wd.inv(wd.generator_elt(name))
            return HeckeElt(ctx, {wd.mult(e, g): v for e, v in self.c.items()})
        Q = ctx.Q_of_sa[wd.sa_index[name]]
        qi = Q.inverse()
        return self.mul_gen_right(name).scale(qi) + self.scale(qi - 1)

    def mul_basis_right(self, e: Elt) -> "HeckeElt":
        out = self
        for name in self.ctx.wd.word(e):
            out = out.mul_gen_right(name)
        return out

    def __mul__(self, other: "HeckeElt") -> "HeckeElt":
        out = HeckeElt(self.ctx, {})
        for e, v in other.c.items():
            out = out + self.mul_basis_right(e).scale(v)
        return out

    def render(self) -> str:
        wd = self.ctx.wd
        items = sorted(self.c.items(), key=lambda t: (wd.length(t[0]), t[0][0], t[0][1]))
        if not items:
            return "0"
        parts = []
        for e, v in items:
            body = v.render()
            if len(v.terms) > 1:
                body = f"({body})"
            parts.append(f"{body}*T[{wd.render(e)}]")
        return " + ".join(parts)

    def __repr__(self):
        return f"HeckeElt({self.render()})"


class BernsteinElt:
    """Finite combination Σ c θ_x T_w with w in the finite Weyl group."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: HeckeContext, c: dict):
        self.ctx = ctx
        self.c = {k: v for k, v in c.items() if not v.is_zero()}

    def to_im(self) -> HeckeElt:
        return self.ctx.bernstein_to_im(self)

    def __add__(self, other: "BernsteinElt") -> "BernsteinElt":
        out = dict(self.c)
        for k, v in other.c.items():
            s = out.get(k, self.ctx._zero) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return BernsteinElt(self.ctx, out)

    def scale(self, c: LaurentPoly) -> "BernsteinElt":
        return BernsteinElt(self.ctx, {k: v * c for k, v in self.c.items()})

    def mul_finite_gen_right(self, j: int) -> "BernsteinElt":
        """Right multiplication by T_{s_j} for a finite simple root position j."""
        ctx = self.ctx
        W = ctx.wd.W
        sj = W.gen_index[j]
        Q = ctx.Q_of_pi[j]
        out: dict = {}

        def add(k, v):
            s = out.get(k, ctx._zero) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s

        for (x, w), v in self.c.items():
            ws = W.mult(w, sj)
            if W.length[ws] > W.length[w]:
                add((x, ws), v)
            else:
                add((x, w), v * (Q - 1))
                add((x, ws), v * Q)
        return BernsteinElt(ctx, out)

    def __eq__(self, other):
        return isinstance(other, BernsteinElt) and self.c == other.c

    def is_zero(self) -> bool:
        return not self.c

    def __repr__(self):
        return f"BernsteinElt({len(self.c)} terms)"


@dataclass(frozen=True)
class CocenterCombination:
    """Σ a_O T_O with pairwise distinct classes, plus the source element."""

    ctx: HeckeContext
    entries: tuple[tuple[ConjClassRecord, LaurentPoly], ...]
    source: Elt

    def coefficient(self, label: str) -> LaurentPoly:
        for rec, c in self.entries:
            if rec.label == label:
                return c
        return self.ctx.zero()

    def render(self) -> str:
        from .exactpoly import OddDegree, render_in_Q

        if not self.entries:
            return "0"
        parts = []
        for rec, c in self.entries:
            try:
                shown = render_in_Q(c)
            except OddDegree:  # IM structure constants live in Q; be safe anyway
                shown = c
            body = shown.render()
            if len(shown.terms) > 1:
                body = f"({body})"
            parts.append(f"{body}*T[{rec.label}]")
        return " + ".join(parts)


class Parabolic:
    """The parabolic subalgebra H_J (full lattice, roots R_J), Bernstein form.

    Also used with the full J = Pi to drive decompositions of the whole
    algebra into Σ T_u H_J blocks.
    """

    def __init__(self, ctx: HeckeContext, J: tuple[int, ...]):
        self.ctx = ctx
        self.J = J
        wd = ctx.wd
        self.members, self.words = wd.W.subgroup([j for j in J])
        self.member_set = set(self.members)
        self.coset_reps = wd.minimal_coset_reps(J)
        self._theta_right_cache: dict = {}
        self._theta_left_cache: dict = {}

    def zero_elt(self) -> "ParabolicElt":
        return ParabolicElt(self, {})

    def elt(self, c: dict) -> "ParabolicElt":
        for (_x, w) in c:
            if w not in self.member_set:
                raise ValueError("support leaves W_J")
        return ParabolicElt(self, dict(c))

    def one_elt(self) -> "ParabolicElt":
        return ParabolicElt(self, {((0,) * self.ctx.wd.rank, 0): self.ctx._one})

    # Bernstein-Lusztig commutator R_j(x) = θ_x T_s - T_s θ_{s x} as a θ-combo
    def bl_comm(self, j: int, x: Vec) -> dict:
        ctx = self.ctx
        d = ctx.wd.datum
        k = sum(a * b for a, b in zip(x, d.simple_coroots[j]))
        if k == 0:
            return {}
        alpha = d.simple_roots[j]
        if k < 0:
            sx = tuple(a - k * b for a, b in zip(x, alpha))
            return {y: -c for y, c in self.bl_comm(j, sx).items()}
        out: dict = {}
        Q = ctx.Q_of_pi[j]
        if ctx.twin_v_of_pi[j] is None:
            for i in range(k):
                y = tuple(a - i * b for a, b in zip(x, alpha))
                out[y] = out.get(y, ctx._zero) + (Q - 1)
        else:
            v = ctx.v_of_pi[j]
            tw = ctx.twin_v_of_pi[j]
            cplus = v * tw - v * tw.inverse()
            t = k // 2
            for i in range(t):
                y = tuple(a - 2 * i * b for a, b in zip(x, alpha))
                out[y] = out.get(y, ctx._zero) + (Q - 1)
                y2 = tuple(a - (2 * i + 1) * b for a, b in zip(x, alpha))
                out[y2] = out.get(y2, ctx._zero) + cplus
        return {y: c for y, c in out.items() if not c.is_zero()}

    def _s_act(self, j: int, x: Vec) -> Vec:
        d = self.ctx.wd.datum
        k = sum(a * b for a, b in zip(x, d.simple_coroots[j]))
        return tuple(a - k * b for a, b in zip(x, d.simple_roots[j]))

    def move_theta_left(self, word: tuple[int, ...], y: Vec) -> "ParabolicElt":
        """T_word θ_y as Σ θ_z T_v (word is a reduced J-word of Pi positions)."""
        key = (word, y)
        got = self._theta_left_cache.get(key)
        if got is not None:
            return got
        ctx = self.ctx
        if not word:
            out = ParabolicElt(self, {(y, 0): ctx._one})
        else:
            pre, last = word[:-1], word[-1]
            sy = self._s_act(last, y)
            main = self.move_theta_left(pre, sy).mul_finite_gen_right(last)
            acc = main
            for z, c in self.bl_comm(last, sy).items():
                acc = acc - self.move_theta_left(pre, z).scale(c)
            out = acc
        self._theta_left_cache[key] = out
        return out

    def move_theta_right(self, word: tuple[int, ...], x: Vec) -> dict:
        """θ_x T_word as {(v, z): coeff} meaning Σ T_v θ_z."""
        key = (word, x)
        got = self._theta_right_cache.get(key)
        if got is not None:
            return got
        ctx = self.ctx
        W = ctx.wd.W
        if not word:
            out = {(0, x): ctx._one}
        else:
            first, rest = word[0], word[1:]
            sx = self._s_act(first, x)
            out = {}

            def add(k2, v):
                s = out.get(k2, ctx._zero) + v
                if s.is_zero():
                    out.pop(k2, None)
                else:
                    out[k2] = s

            sj = W.gen_index[first]
            Qj = ctx.Q_of_pi[first]
            for (v, z), c in self.move_theta_right(rest, sx).items():
                sv = W.mult(sj, v)
                if W.length[sv] > W.length[v]:
                    add((sv, z), c)
                else:
                    add((v, z), c * (Qj - 1))
                    add((sv, z), c * Qj)
            for z, c in self.bl_comm(first, x).items():
                for (v, z2), c2 in self.move_theta_right(rest, z).items():
                    add((v, z2), c * c2)
        self._theta_right_cache[key] = out
        return out

    def decompose(self, b: BernsteinElt) -> dict:
        """h = Σ_u T_u h_u over u in W^J; returns {u: ParabolicElt h_u}."""
        ctx = self.ctx
        wd = ctx.wd
        blocks: dict[int, ParabolicElt] = {}
        for (x, w), c in b.c.items():
            u, wj = wd.factorize_coset(w, self.J)
            for (v, z), c2 in self.move_theta_right(wd.W.word[u], x).items():
                u2, vj = wd.factorize_coset(v, self.J)
                inner = self.move_theta_left(self.words[vj], z)
                for jj in self.words[wj]:
                    inner = inner.mul_finite_gen_right(jj)
                inner = inner.scale(c * c2)
                if u2 in blocks:
                    blocks[u2] = blocks[u2] + inner
                else:
                    blocks[u2] = inner
        return {u: blk for u, blk in blocks.items() if not blk.is_zero()}

    def reassemble(self, blocks: dict) -> HeckeElt:
        """Σ_u T_u h_u back in ambient IM form (exactness check helper)."""
        ctx = self.ctx
        out = ctx.elt({})
        for u, blk in blocks.items():
            lead = ctx.unit()
            for j in ctx.wd.W.word[u]:
                lead = lead.mul_gen_right(f"s{j + 1}")
            out = out + lead * blk.to_ambient_im()
        return out


class ParabolicElt:
    """Element of H_J in Bernstein form: Σ c θ_x T_w, w in W_J."""

    __slots__ = ("par", "c")

    def __init__(self, par: Parabolic, c: dict):
        self.par = par
        self.c = {k: v for k, v in c.items() if not v.is_zero()}

    def __add__(self, other: "ParabolicElt") -> "ParabolicElt":
        out = dict(self.c)
        for k, v in other.c.items():
            s = out.get(k, self.par.ctx._zero) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return ParabolicElt(self.par, out)

    def __sub__(self, other: "ParabolicElt") -> "ParabolicElt":
        return self + other.scale(LaurentPoly.const(self.par.ctx.table, -1))

    def scale(self, c: LaurentPoly) -> "ParabolicElt":
        return ParabolicElt(self.par, {k: v * c for k, v in self.c.items()})

    def mul_finite_gen_right(self, j: int) -> "ParabolicElt":
        ctx = self.par.ctx
        W = ctx.wd.W
        sj = W.gen_index[j]
        Q = ctx.Q_of_pi[j]
        out: dict = {}

        def add(k, v):
            s = out.get(k, ctx._zero) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s

        for (x, w), v in self.c.items():
            ws = W.mult(w, sj)
            if W.length[ws] > W.length[w]:
                add((x, ws), v)
            else:
                add((x, w), v * (Q - 1))
                add((x, ws), v * Q)
        return ParabolicElt(self.par, out)

    def __mul__(self, other: "ParabolicElt") -> "ParabolicElt":
        par = self.par
        out = par.zero_elt()
        for (x1, w1), c1 in self.c.items():
            for (x2, w2), c2 in other.c.items():
                mid = par.move_theta_left(par.words[w1], x2)
                for (z, v), c3 in mid.c.items():
                    term = ParabolicElt(
                        par, {(tuple(a + b for a, b in zip(x1, z)), v): c1 * c2 * c3}
                    )
                    for jj in par.words[w2]:
                        term = term.mul_finite_gen_right(jj)
                    out = out + term
        return out

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other):
        return isinstance(other, ParabolicElt) and self.c == other.c

    def to_ambient_im(self) -> HeckeElt:
        ctx = self.par.ctx
        out = ctx.elt({})
        for (x, w), c in self.c.items():
            out = out + ctx.theta_T_im(x, w).scale(c)
        return out

    def __repr__(self):
        return f"ParabolicElt(J={self.par.J}, {len(self.c)} terms)"


class QuotientAlgebra:
    """H_J^sem: the affine Hecke algebra of the semisimple quotient datum.

    Shares the parent's variable table; parameters are inherited node by
    node (finite nodes from the matching parent orbit, affine nodes through
    the q(s~)-twin of a 2X^-flagged finite root in their component).
    """

    def __init__(self, parent: HeckeContext, J: tuple[int, ...]):
        self.parent = parent
        self.J = J
        self.quot: SemisimpleQuotient = semisimple_quotient(parent.wd.datum, J)
        qwd = WeylData(self.quot.datum)
        var_of_orbit = []
        for orbit in qwd.param_orbits:
            var = None
            for k in orbit:
                s = qwd.affine_simple[k]
                if s.kind == "finite":
                    var = parent.var_of_orbit[
                        parent.wd.orbit_of_sa[
                            parent.wd.sa_index[f"s{J[s.pi_index] + 1}"]
                        ]
                    ]
                    break
            if var is None:
                # purely affine orbit: find a flagged finite root whose s~ is here
                for k in orbit:
                    for pos, twin in enumerate(self._twin_nodes(qwd)):
                        if twin == k:
                            tw = parent.twin_v_of_pi[J[pos]]
                            if tw is None:
                                raise ValueError(
                                    "quotient affine node without a parameter source"
                                )
                            var = tw.table.names[
                                next(iter(tw.terms))
                                .index(1)
                            ]
                            break
                    if var is not None:
                        break
            if var is None:
                raise ValueError("cannot infer parameter for a quotient orbit")
            var_of_orbit.append(var)
        self.ctx = HeckeContext(qwd, table=parent.table, var_of_orbit=var_of_orbit)
        # parameter pairs must agree with the parent's B-L data
        for pos in range(len(J)):
            if (self.ctx.v_of_pi[pos] != parent.v_of_pi[J[pos]]) or (
                qwd.two_Xvee_flags[pos] != parent.wd.two_Xvee_flags[J[pos]]
            ):
                raise ValueError("quotient parameter pairs disagree with parent")
            pt = parent.twin_v_of_pi[J[pos]]
            qt = self.ctx.twin_v_of_pi[pos]
            if (pt is None) != (qt is None) or (pt is not None and pt != qt):
                raise ValueError("quotient twin parameters disagree with parent")

    @staticmethod
    def _twin_nodes(qwd: WeylData) -> list:
        """For each quotient Pi position, the S^a index of its s~ (or None)."""
        out = []
        bonds: dict[int, list[int]] = {}
        n = len(qwd.affine_simple)
        for i in range(n):
            for j in range(i + 1, n):
                m = qwd.bond_order(i, j)
                if m is None or m > 2:
                    bonds.setdefault(i, []).append(j)
                    bonds.setdefault(j, []).append(i)
        for pos in range(qwd.npi):
            if not qwd.two_Xvee_flags[pos]:
                out.append(None)
                continue
            k = qwd.sa_index[f"s{pos + 1}"]
            comp = {k}
            frontier = [k]
            while frontier:
                nxt = []
                for a in frontier:
                    for b in bonds.get(a, []):
                        if b not in comp:
                            comp.add(b)
                            nxt.append(b)
                frontier = nxt
            ends = [a for a in comp if len([b for b in bonds.get(a, []) if b in comp]) <= 1]
            start = min(ends)
            path = [start]
            while len(path) < len(comp):
                nbrs = [b for b in bonds.get(path[-1], []) if b in comp and b not in path]
                path.append(nbrs[0])
            out.append(path[len(path) - 1 - path.index(k)])
        return out
