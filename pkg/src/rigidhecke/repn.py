"""Finite-dimensional modules as generator matrices over the Laurent ring.

A module stores one matrix per T-generator in scope (all of S^a and Omega
for modules of the full algebra; the J-reflections for parabolic modules)
plus matrices for θ of ± each lattice basis vector.  Construction goes
through four paths: the one-dimensional solver, parahoric lifts, inflation
along χ_t, and parabolic induction.  Every constructor re-verifies the
defining relations as exact matrix identities; a module that fails

its certificate is never returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactpoly import LaurentPoly, PolyMatrix
from .hecke import BernsteinElt, HeckeContext, HeckeElt, Parabolic, ParabolicElt, QuotientAlgebra
from .weyl import Elt


class RelationFailed(RuntimeError):
    """A defining relation does not hold; names the relation family."""


def _nth_root_fraction(c: Fraction, d: int) -> list[Fraction]:
    """All rational d-th roots of c."""
    if d == 1:
        return [c]
    if c == 0:
        return [Fraction(0)]

    def iroot(n: int) -> Optional[int]:
        if n < 0:
            return None
        k = round(n ** (1.0 / d))
        for cand in (k - 1, k, k + 1):
            if cand >= 0 and cand ** d == n:
                return cand
        return None

    roots = []
    num, den = abs(c.numerator), c.denominator
    rn, rd = iroot(num), iroot(den)
    if rn is None or rd is None:
        return []
    base = Fraction(rn, rd)
    if c > 0:
        roots.append(base)
        if d % 2 == 0:
            roots.append(-base)
        else:
            pass
    else:
        if d % 2 == 1:
            roots.append(-base)
    return roots


def monomial_roots(p: LaurentPoly, d: int) -> list[LaurentPoly]:
    """All Laurent-monomial d-th roots of a monomial p."""
    if not p.is_monomial():
        return []
    ((e, c),) = p.terms.items()
    if any(x % d for x in e):
        return []
    ee = tuple(x // d for x in e)
    return [LaurentPoly.monomial(p.table, ee, r) for r in _nth_root_fraction(c, d)]


@dataclass
class FinDimModule:
    """Generator matrices of a representation; immutable after verification."""

    alg: HeckeContext
    scope: Optional[tuple[int, ...]]  # None: full algebra; else the subset J of Pi
    dim: int
    tmat: dict  # generator name -> PolyMatrix
    theta_pos: list  # per lattice basis vector
    theta_neg: list
    provenance: str = ""
    twist_vars: tuple[str, ...] = ()

    # -- actions -------------------------------------------------------------

    def theta_of(self, x: Sequence[int]) -> PolyMatrix:
        out = PolyMatrix.identity(self.alg.table, self.dim)
        for i, k in enumerate(x):
            if k > 0:
                for _ in range(k):
                    out = out * self.theta_pos[i]
            elif k < 0:
                for _ in range(-k):
                    out = out * self.theta_neg[i]
        return out

    def finite_word_mat(self, word: Sequence[int]) -> PolyMatrix:
        out = PolyMatrix.identity(self.alg.table, self.dim)
        for j in word:
            out = out * self.tmat[f"s{j + 1}"]
        return out

    def act_parabolic(self, elt: ParabolicElt) -> PolyMatrix:
        par = elt.par
        out = PolyMatrix.zero(self.alg.table, self.dim, self.dim)
        for (x, w), c in elt.c.items():
            out = out + (self.theta_of(x) * self.finite_word_mat(par.words[w])).scale(c)
        return out

    def act_bernstein(self, b: BernsteinElt) -> PolyMatrix:
        out = PolyMatrix.zero(self.alg.table, self.dim, self.dim)
        for (x, w), c in b.c.items():
            out = out + (
                self.theta_of(x) * self.finite_word_mat(self.alg.wd.W.word[w])
            ).scale(c)
        return out

    def act_elt(self, e: Elt) -> PolyMatrix:
        if self.scope is not None:
            raise ValueError("IM action needs a full-algebra module")
        out = PolyMatrix.identity(self.alg.table, self.dim)
        for name in self.alg.wd.word(e):
            out = out * self.tmat[name]
        return out

    def act(self, h: HeckeElt) -> PolyMatrix:
        out = PolyMatrix.zero(self.alg.table, self.dim, self.dim)
        for e, c in h.c.items():
            out = out + self.act_elt(e).scale(c)
        return out

    def trace(self, h: Union[HeckeElt, Elt]) -> LaurentPoly:
        if not isinstance(h, HeckeElt):
            return self.act_elt(h).trace()
        return self.act(h).trace()

    def trace_parabolic(self, elt: ParabolicElt) -> LaurentPoly:
        return self.act_parabolic(elt).trace()

    def gen_trace(self, name: str) -> LaurentPoly:
        return self.tmat[name].trace()

    def signature(self) -> dict:
        sig = {name: m.trace().render() for name, m in sorted(self.tmat.items())}
        sig["1"] = str(self.dim)
        return sig

    # -- certificates -----------------------------------------------------------

    def verify_relations(self) -> list[str]:
        """Exact matrix checks of every defining relation family in scope."""
        alg = self.alg
        wd = alg.wd
        table = alg.table
        ident = PolyMatrix.identity(table, self.dim)
        done = []

        def need(cond, family, detail=""):
            if not cond:
                raise RelationFailed(f"{family} {detail}".strip())

        if self.scope is None:
            gen_items = [(s.name, wd.sa_index[s.name]) for s in wd.affine_simple]
            for name, k in gen_items:
                T = self.tmat[name]
                Q = alg.Q_of_sa[k]
                resid = (T + ident) * (T - ident.scale(Q))
                need(resid.is_zero(), "quadratic", name)
            done.append("quadratic")
            for (n1, k1), (n2, k2) in itertools.combinations(gen_items, 2):
                m = wd.bond_order(k1, k2)
                if m is None:
                    continue
                a = b = ident
                for t in range(m):
                    a = a * (self.tmat[n1] if t % 2 == 0 else self.tmat[n2])
                    b = b * (self.tmat[n2] if t % 2 == 0 else self.tmat[n1])
                need(a == b, "braid", f"{n1},{n2} (m={m})")
            done.append("braid")
            for kk, name in enumerate(wd.omega_names):
                om = wd.omega_elements[kk + 1]
                for s in wd.affine_simple:
                    conj = wd.conjugate(om, s.elt)
                    cname = wd.affine_simple[wd.sa_by_elt[conj]].name
                    lhs = self.tmat[name] * self.tmat[s.name]
                    rhs = self.tmat[cname] * self.tmat[name]
                    need(lhs == rhs, "omega-conjugation", f"{name},{s.name}")
                for k2, name2 in enumerate(wd.omega_names):
                    prod = wd.mult(om, wd.omega_elements[k2 + 1])
                    need(
                        self.tmat[name] * self.tmat[name2] == self._omega_mat(prod),
                        "omega-mult",
                        f"{name},{name2}",
                    )
            done.append("omega")
            pi_positions = range(wd.npi)
        else:
            for j in self.scope:
                T = self.tmat[f"s{j + 1}"]
                Q = alg.Q_of_pi[j]
                need(((T + ident) * (T - ident.scale(Q))).is_zero(), "quadratic", f"s{j + 1}")
            done.append("quadratic")
            for j1, j2 in itertools.combinations(self.scope, 2):
                m = wd.W.order_of(wd.W.mult(wd.W.gen_index[j1], wd.W.gen_index[j2]))
                a = b = ident
                for t in range(m):
                    a = a * (self.tmat[f"s{j1 + 1}"] if t % 2 == 0 else self.tmat[f"s{j2 + 1}"])
                    b = b * (self.tmat[f"s{j2 + 1}"] if t % 2 == 0 else self.tmat[f"s{j1 + 1}"])
                need(a == b, "braid", f"s{j1 + 1},s{j2 + 1}")
            done.append("braid")
            pi_positions = self.scope
        for i in range(wd.rank):
            need(self.theta_pos[i] * self.theta_neg[i] == ident, "theta-invertible", f"e{i}")
            for i2 in range(i + 1, wd.rank):
                need(
                    self.theta_pos[i] * self.theta_pos[i2]
                    == self.theta_pos[i2] * self.theta_pos[i],
                    "theta-commute",
                    f"e{i},e{i2}",
                )
        done.append("theta-group")
        par = alg.parabolic(tuple(pi_positions))
        basis_vecs = []
        for i in range(wd.rank):
            e = [0] * wd.rank
            e[i] = 1
            basis_vecs.append(tuple(e))
            basis_vecs.append(tuple(-c for c in e))
        for j in pi_positions:
            T = self.tmat[f"s{j + 1}"]
            for x in basis_vecs:
                sx = par._s_act(j, x)
                lhs = self.theta_of(x) * T - T * self.theta_of(sx)
                rhs = PolyMatrix.zero(table, self.dim, self.dim)
                for z, c in par.bl_comm(j, x).items():
                    rhs = rhs + self.theta_of(z).scale(c)
                need(lhs == rhs, "bernstein-lusztig", f"s{j + 1}, x={x}")
        done.append("bernstein-lusztig")
        if self.scope is None and wd.rank > 0:
            for i in range(wd.rank):
                e = [0] * wd.rank
                e[i] = 1
                need(
                    self.theta_pos[i] == self.act(alg.theta_im(tuple(e))),
                    "theta-consistency",
                    f"e{i}",
                )
            done.append("theta-consistency")
        return done

    def _omega_mat(self, om: Elt) -> PolyMatrix:
        wd = self.alg.wd
        if om == wd.identity():
            return PolyMatrix.identity(self.alg.table, self.dim)
        name = wd.omega_names[list(wd.omega_elements).index(om) - 1]
        return self.tmat[name]


def _scalar_module(alg: HeckeContext, tvals: dict, theta_vals: list, provenance: str) -> FinDimModule:
    tmat = {name: PolyMatrix([[v]]) for name, v in tvals.items()}
    pos = [PolyMatrix([[v]]) for v in theta_vals]
    neg = [PolyMatrix([[v.inverse()]]) for v in theta_vals]
    return FinDimModule(alg, None, 1, tmat, pos, neg, provenance)


def one_dim_modules(alg: HeckeContext) -> list[FinDimModule]:
    """All one-dimensional modules with Λ-monomial θ-characters.

    T-signatures run over {-1, Q} per parameter orbit meeting the finite
    simple reflections; θ-characters are solved from the scalar
    Bernstein-Lusztig relation and extended over X by Smith-form root
    extraction.  Affine and Omega generator scalars are derived from their
    Bernstein expressions, never chosen.
    """
    wd = alg.wd
    if wd.rank == 0:
        return [FinDimModule(alg, None, 1, {}, [], [], "trivial")]
    finite_orbits = sorted(
        {wd.orbit_of_sa[wd.sa_index[f"s{j + 1}"]] for j in range(wd.npi)}
    )
    from . import intlinalg

    m = wd.rank
    A = [list(wd.datum.simple_roots[j]) for j in range(wd.npi)]
    d, u, v = intlinalg.smith_normal_form(A)
    vinv = intlinalg.mat_inverse_unimodular(v)
    divisors = [d[i][i] for i in range(min(len(A), m))]
    if len(divisors) < m or any(x == 0 for x in divisors):
        raise ValueError("one-dim solver requires a semisimple datum")
    out = []
    for combo in itertools.product((0, 1), repeat=len(finite_orbits)):
        eps_of_orbit = {
            o: ("-1" if c == 0 else "Q") for o, c in zip(finite_orbits, combo)
        }
        theta_alpha_choices = []
        for j in range(wd.npi):
            o = wd.orbit_of_sa[wd.sa_index[f"s{j + 1}"]]
            Q = alg.Q_of_pi[j]
            vj = alg.v_of_pi[j]
            tw = alg.twin_v_of_pi[j]
            if tw is None:
                theta_alpha_choices.append(
                    [Q.inverse()] if eps_of_orbit[o] == "-1" else [Q]
                )
            elif eps_of_orbit[o] == "-1":
                theta_alpha_choices.append([(vj * tw).inverse(), (tw * vj.inverse()) * -1])
            else:
                theta_alpha_choices.append([vj * tw, (vj * tw.inverse()) * -1])
        for chosen in itertools.product(*theta_alpha_choices):
            # theta on the adapted basis b_i (rows of V^{-1}); d_i b_i = sum_j U[i][j] alpha_j
            candidate_lists = []
            for i in range(m):
                mono = LaurentPoly.const(alg.table, 1)
                for j in range(wd.npi):
                    mono = mono * chosen[j] ** u[i][j]
                candidate_lists.append(monomial_roots(mono, abs(divisors[i])))
            for broots in itertools.product(*candidate_lists):
                theta_e = []
                good = True
                for r in range(m):
                    val = LaurentPoly.const(alg.table, 1)
                    for i in range(m):
                        val = val * broots[i] ** v[r][i]
                    theta_e.append(val)
                tvals = {}
                for j in range(wd.npi):
                    o = wd.orbit_of_sa[wd.sa_index[f"s{j + 1}"]]
                    tvals[f"s{j + 1}"] = (
                        LaurentPoly.const(alg.table, -1)
                        if eps_of_orbit[o] == "-1"
                        else alg.Q_of_pi[j]
                    )
                # derive affine and omega scalars from their Bernstein seeds
                def scalar_of_bernstein(b: BernsteinElt):
                    total = LaurentPoly.const(alg.table, 0)
                    for (x, w), c in b.c.items():
                        term = c
                        for r in range(m):
                            term = term * theta_e[r] ** x[r]
                        for j in wd.W.word[w]:
                            term = term * tvals[f"s{j + 1}"]
                        total = total + term
                    return total

                for s in wd.affine_simple:
                    if s.kind == "affine":
                        tvals[s.name] = scalar_of_bernstein(alg.bernstein_seed(s.name))
                for name in wd.omega_names:
                    tvals[name] = scalar_of_bernstein(alg.bernstein_seed(name))
                mod = _scalar_module(
                    alg, tvals, theta_e,
                    "onedim:" + ",".join(f"{n}={tvals[n].render()}" for n in sorted(tvals)),
                )
                try:
                    mod.verify_relations()
                except RelationFailed:
                    good = False
                if good:
                    out.append(mod)
    # dedupe by full scalar signature; sort for deterministic selection
    seen = {}
    for mod in out:
        key = (
            tuple(sorted((n, mat.entries[0][0].render()) for n, mat in mod.tmat.items())),
            tuple(p.entries[0][0].render() for p in mod.theta_pos),
        )
        seen.setdefault(key, mod)
    return [seen[k] for k in sorted(seen)]


class TwistChar:
    """An unramified character of X trivial on X ∩ QJ.

    Values are Laurent monomials: products of twist variables for the
    symbolic character, rationals for a numeric one.
    """

    def __init__(self, qa: QuotientAlgebra, values: Optional[Sequence] = None, symbolic: bool = False):
        from . import intlinalg

        parent = qa.parent
        self.qa = qa
        m = parent.wd.rank
        J = qa.J
        if J:
            sat = intlinalg.row_saturation(
                [list(parent.wd.datum.simple_roots[j]) for j in J]
            )
        else:
            sat = []
        if sat:
            d, _u, v = intlinalg.smith_normal_form(sat)
            vinv = intlinalg.mat_inverse_unimodular(v)
            rank_sub = sum(1 for i in range(min(len(sat), m)) if d[i][i] != 0)
        else:
            vinv = intlinalg.identity_matrix(m)
            rank_sub = 0
        self.rank = m - rank_sub
        # coordinates of x in the adapted basis; the last self.rank ones are free
        binv = intlinalg.mat_inverse_unimodular(vinv)
        self._coord_rows = [
            [binv[r][i] for r in range(m)] for i in range(rank_sub, m)
        ]
        table = parent.table
        if symbolic:
            if len(parent.twist_names) < self.rank:
                raise ValueError(
                    f"context has {len(parent.twist_names)} twist variables, need {self.rank}"
                )
            self.values = [table.gen(parent.twist_names[k]) for k in range(self.rank)]
        elif values is None:
            self.values = [LaurentPoly.const(table, 1)] * self.rank
        else:
            if len(values) != self.rank:
                raise ValueError(f"need {self.rank} twist values")
            vals = []
            for val in values:
                p = val if isinstance(val, LaurentPoly) else LaurentPoly.const(table, val)
                if not p.is_monomial():
                    raise ValueError("twist values must be invertible monomials")
                vals.append(p)
            self.values = vals

    def of(self, x: Sequence[int]) -> LaurentPoly:
        out = LaurentPoly.const(self.qa.parent.table, 1)
        for k, row in enumerate(self._coord_rows):
            c = sum(r * xi for r, xi in zip(row, x))
            if c:
                out = out * self.values[k] ** c
        return out


def inflate_chi_t(
    qa: QuotientAlgebra, sigma: FinDimModule, twist: Optional[TwistChar] = None
) -> FinDimModule:
    """Pull an H_J^sem-module back to H_J through χ_t: θ_x ↦ t(x) θ_{x_J}."""
    parent = qa.parent
    if sigma.alg is not qa.ctx:
        raise ValueError("sigma must live over the quotient algebra")
    t = twist if twist is not None else TwistChar(qa)
    J = qa.J
    m = parent.wd.rank
    tmat = {}
    for pos, j in enumerate(J):
        tmat[f"s{j + 1}"] = sigma.tmat[f"s{pos + 1}"]
    pos_mats = []
    neg_mats = []
    for i in range(m):
        e = [0] * m
        e[i] = 1
        xb = qa.quot.project(e)
        pos_mats.append(sigma.theta_of(xb).scale(t.of(e)))
        neg_mats.append(
            sigma.theta_of(tuple(-c for c in xb)).scale(t.of(e).inverse())
        )
    twist_vars = tuple(
        name for v in t.values for name in v.table.names if v.uses_variable(name)
    )
    mod = FinDimModule(
        parent,
        tuple(J),
        sigma.dim,
        tmat,
        pos_mats,
        neg_mats,
        f"inflate[J={list(J)}]({sigma.provenance})",
        twist_vars,
    )
    mod.verify_relations()
    return mod


_FINITE_C2_MODULES = ("2x0", "11x0", "0x2", "0x11", "1x1")


def finite_parahoric_module(
    alg: HeckeContext, K: Sequence[str], name: str
) -> dict:
    """Matrices of a built-in simple module of the finite algebra on K.

    For |K| = 1 (type A1): names "sign" (T = -1) and "triv" (T = Q).  For
    |K| = 2 with bond 4 (type C2): the bipartition-labelled modules of the
    finite type-C2 algebra; the 2-dimensional 1x1 uses an explicit two-parameter
    model whose braid identity (T_a T_b)^2 = (T_b T_a)^2 = -Q_a Q_b holds
    exactly.
    """
    table = alg.table
    wd = alg.wd
    idx = [wd.sa_index[n] for n in K]
    Q = [alg.Q_of_sa[i] for i in idx]
    one = LaurentPoly.const(table, 1)
    mone = LaurentPoly.const(table, -1)
    zero = LaurentPoly(table, {})
    if len(K) == 1:
        if name == "sign":
            return {K[0]: PolyMatrix([[mone]])}
        if name == "triv":
            return {K[0]: PolyMatrix([[Q[0]]])}
        raise KeyError(f"unknown A1 module {name!r}")
    if len(K) == 2:
        m = wd.bond_order(idx[0], idx[1])
        if m != 4:
            raise KeyError(f"built-in finite modules need a type-C2 pair, bond {m}")
        qa, qb = Q
        scalars = {
            "2x0": (qa, qb),
            "11x0": (mone, qb),
            "0x2": (qa, mone),
            "0x11": (mone, mone),
        }
        if name in scalars:
            va, vb = scalars[name]
            return {K[0]: PolyMatrix([[va]]), K[1]: PolyMatrix([[vb]])}
        if name == "1x1":
            ta = PolyMatrix([[mone, qa + qb], [zero, qa]])
            tb = PolyMatrix([[qb, zero], [one, mone]])
            return {K[0]: ta, K[1]: tb}
        raise KeyError(f"unknown C2 module {name!r}")
    raise KeyError("built-in finite modules cover |K| <= 2 only")


def lift_from_parahoric(
    alg: HeckeContext,
    K: Sequence[str],
    module: Union[str, dict],
    scalars: dict,
) -> FinDimModule:
    """Extend a finite-parahoric module by scalars on the other generators.

    ``scalars`` maps each S^a name outside K to "-1" or "Q".  Requires
    trivial Omega (otherwise no canonical Omega action exists).
    """
    wd = alg.wd
    if wd.omega_names:
        raise ValueError("parahoric lifts are implemented for trivial Omega only")
    mats = (
        finite_parahoric_module(alg, K, module) if isinstance(module, str) else dict(module)
    )
    dim = next(iter(mats.values())).rows
    tmat = dict(mats)
    for s in wd.affine_simple:
        if s.name in tmat:
            continue
        tag = scalars[s.name]
        val = (
            LaurentPoly.const(alg.table, -1)
            if tag == "-1"
            else alg.Q_of_sa[wd.sa_index[s.name]]
        )
        tmat[s.name] = PolyMatrix.identity(alg.table, dim).scale(val)
    mod = FinDimModule(
        alg, None, dim, tmat, [], [], f"lift[K={list(K)}:{module}]", ()
    )
    pos, neg = [], []
    for i in range(wd.rank):
        e = [0] * wd.rank
        e[i] = 1
        pos.append(mod.act(alg.theta_im(tuple(e))))
        neg.append(mod.act(alg.theta_im(tuple(-c for c in e))))
    mod.theta_pos = pos
    mod.theta_neg = neg
    mod.verify_relations()
    return mod


def induce(alg: HeckeContext, J: Sequence[int], sigma: FinDimModule) -> FinDimModule:
    """Parabolic induction to the full algebra: basis {T_u ⊗ e_i}, u ∈ W^J."""
    J = tuple(sorted(J))
    if sigma.scope is None or tuple(sigma.scope) != J:
        raise ValueError(f"sigma must be an H_J-module for J={J}")
    wd = alg.wd
    par = alg.parabolic(J)
    reps = par.coset_reps
    pos_of = {u: k for k, u in enumerate(reps)}
    dim = len(reps) * sigma.dim
    zero = PolyMatrix.zero(alg.table, dim, dim)

    def assemble(gen_bernstein: BernsteinElt) -> PolyMatrix:
        out = [[alg.zero() for _ in range(dim)] for _ in range(dim)]
        for u in reps:
            b = gen_bernstein
            for j in wd.W.word[u]:
                b = b.mul_finite_gen_right(j)
            for u2, blk in par.decompose(b).items():
                mat = sigma.act_parabolic(blk)
                r0 = pos_of[u2] * sigma.dim
                c0 = pos_of[u] * sigma.dim
                for r in range(sigma.dim):
                    for c in range(sigma.dim):
                        out[r0 + r][c0 + c] = out[r0 + r][c0 + c] + mat.entries[r][c]
        return PolyMatrix(out)

    tmat = {}
    for s in wd.affine_simple:
        tmat[s.name] = assemble(alg.bernstein_seed(s.name))
    for name in wd.omega_names:
        tmat[name] = assemble(alg.bernstein_seed(name))
    pos_mats, neg_mats = [], []
    for i in range(wd.rank):
        e = [0] * wd.rank
        e[i] = 1
        pos_mats.append(assemble(BernsteinElt(alg, {(tuple(e), 0): alg.one()})))
        neg_mats.append(
            assemble(BernsteinElt(alg, {(tuple(-c for c in e), 0): alg.one()}))
        )
    mod = FinDimModule(
        alg,
        None,
        dim,
        tmat,
        pos_mats,
        neg_mats,
        f"induce[J={list(J)}]({sigma.provenance})",
        sigma.twist_vars,
    )
    mod.verify_relations()
    return mod


def induce_in_parabolic(
    alg: HeckeContext, K: Sequence[int], J: Sequence[int], sigma: FinDimModule
) -> FinDimModule:
    """i^K_J: induction from H_J to H_K inside the ambient algebra."""
    K = tuple(sorted(K))
    J = tuple(sorted(J))
    if not set(J) <= set(K):
        raise ValueError("J must be contained in K")
    if sigma.scope is None or tuple(sigma.scope) != J:
        raise ValueError(f"sigma must be an H_J-module for J={J}")
    wd = alg.wd
    parK = alg.parabolic(K)
    parJ = alg.parabolic(J)
    reps = [u for u in parJ.coset_reps if u in parK.member_set]
    pos_of = {u: k for k, u in enumerate(reps)}
    dim = len(reps) * sigma.dim

    def assemble(gen_bernstein: BernsteinElt) -> PolyMatrix:
        out = [[alg.zero() for _ in range(dim)] for _ in range(dim)]
        for u in reps:
            b = gen_bernstein
            for j in parK.words[u]:
                b = b.mul_finite_gen_right(j)
            for u2, blk in parJ.decompose(b).items():
                if u2 not in pos_of:
                    raise RelationFailed("induction block left the subgroup")
                mat = sigma.act_parabolic(blk)
                r0 = pos_of[u2] * sigma.dim
                c0 = pos_of[u] * sigma.dim
                for r in range(sigma.dim):
                    for c in range(sigma.dim):
                        out[r0 + r][c0 + c] = out[r0 + r][c0 + c] + mat.entries[r][c]
        return PolyMatrix(out)

    tmat = {}
    for j in K:
        tmat[f"s{j + 1}"] = assemble(
            BernsteinElt(alg, {((0,) * wd.rank, wd.W.gen_index[j]): alg.one()})
        )
    pos_mats, neg_mats = [], []
    for i in range(wd.rank):
        e = [0] * wd.rank
        e[i] = 1
        pos_mats.append(assemble(BernsteinElt(alg, {(tuple(e), 0): alg.one()})))
        neg_mats.append(
            assemble(BernsteinElt(alg, {(tuple(-c for c in e), 0): alg.one()}))
        )
    mod = FinDimModule(
        alg,
        K,
        dim,
        tmat,
        pos_mats,
        neg_mats,
        f"induce[{list(J)}->{list(K)}]({sigma.provenance})",
        sigma.twist_vars,
    )
    mod.verify_relations()
    return mod


def restrict(mod: FinDimModule, K: Sequence[int]) -> FinDimModule:
    """Forget the T-generators outside K; θ matrices are kept."""
    K = tuple(sorted(K))
    in_scope = set(range(mod.alg.wd.npi)) if mod.scope is None else set(mod.scope)
    if not set(K) <= in_scope:
        raise ValueError(f"K={K} not contained in scope {sorted(in_scope)}")
    tmat = {f"s{j + 1}": mod.tmat[f"s{j + 1}"] for j in K}
    out = FinDimModule(
        mod.alg,
        K,
        mod.dim,
        tmat,
        mod.theta_pos,
        mod.theta_neg,
        f"restrict[{list(K)}]({mod.provenance})",
        mod.twist_vars,
    )
    out.verify_relations()
    return out


def twist_by(mod: FinDimModule, w: int, J: Sequence[int]) -> FinDimModule:
    """Transport an H_K-module to H_J along w with w(J) = K.

    The new module acts by T_{s_j} ↦ M(T_{s_{w(j)}}) and θ_x ↦ M(θ_{w(x)}).
    """
    alg = mod.alg
    wd = alg.wd
    J = tuple(sorted(J))
    roots = wd.datum.simple_roots
    pi_pos = {roots[j]: j for j in range(wd.npi)}
    tmat = {}
    for j in J:
        img = wd.W.act(w, roots[j])
        if img not in pi_pos:
            raise ValueError(f"w does not map alpha_{j} to a simple root")
        k = pi_pos[img]
        if mod.scope is not None and k not in mod.scope:
            raise ValueError("w(J) is not inside the module scope")
        tmat[f"s{j + 1}"] = mod.tmat[f"s{k + 1}"]
    pos, neg = [], []
    for i in range(wd.rank):
        e = [0] * wd.rank
        e[i] = 1
        pos.append(mod.theta_of(wd.W.act(w, tuple(e))))
        neg.append(mod.theta_of(wd.W.act(w, tuple(-c for c in e))))
    out = FinDimModule(
        alg, J, mod.dim, tmat, pos, neg, f"twist[w={w}]({mod.provenance})", mod.twist_vars
    )
    out.verify_relations()
    return out


@dataclass(frozen=True)
class VirtualModule:
    """Integer combination of modules with formal i_K∘r_K words applied.

    A term (c, M, (K1, K2, ...)) stands for c · i_{K1} r_{K1} i_{K2} r_{K2}
    ... (M).  Traces are evaluated through the adjoint operators
    ī_K ∘ r̄_K on the Hecke-element side, so no huge induced matrices are
    ever materialized; the module-level realization (restrict then induce)
    is available separately and cross-checked in the tests.
    """

    alg: HeckeContext
    terms: tuple  # (int, FinDimModule, tuple[tuple[int, ...], ...])

    def __add__(self, other: "VirtualModule") -> "VirtualModule":
        return VirtualModule(self.alg, self.terms + other.terms)

    def scale(self, c: int) -> "VirtualModule":
        return VirtualModule(self.alg, tuple((c * a, m, w) for a, m, w in self.terms))

    def trace(self, h: HeckeElt) -> LaurentPoly:
        out = self.alg.zero()
        for c, mod, word in self.terms:
            hh = h
            for K in word:
                hh = self.alg.adjoint_iJ_rJ(hh, K)
            out = out + mod.trace(hh) * c
        return out


def virtual(mod: FinDimModule) -> VirtualModule:
    return VirtualModule(mod.alg, ((1, mod, ()),))


def apply_iKrK(mod: FinDimModule, K: Sequence[int]) -> FinDimModule:
    """Module-level i_K ∘ r_K: restrict then induce (relation-certified)."""
    return induce(mod.alg, K, restrict(mod, K))


def A_operator(v: Union[FinDimModule, VirtualModule]) -> VirtualModule:
    """The elliptic projector A = A_{|Pi|} ∘ ... ∘ A_1 on virtual modules.

    A_l = Π_{|K| = |Pi| - l} (i_K ∘ r_K - |N_K|), subsets of each size in a
    fixed lexicographic order.
    """
    if isinstance(v, FinDimModule):
        v = virtual(v)
    alg = v.alg
    npi = alg.wd.npi
    cur = v
    for ell in range(1, npi + 1):
        for K in itertools.combinations(range(npi), npi - ell):
            n_k = len(alg.wd.normalizer_reps(K))
            plus = VirtualModule(alg, tuple((c, m, (K,) + w) for c, m, w in cur.terms))
            cur = plus + cur.scale(-n_k)
    return cur


def parabolic_one_dim_modules(
    ctx: HeckeContext, J: Sequence[int], with_twist: bool = False
) -> list[FinDimModule]:
    """One-dimensional H_J^sem-modules inflated to H_J.

    With ``with_twist`` the free θ-directions (the unramified characters of
    X/X∩QJ) carry fresh twist variables from the context's twist slots.
    """
    qa = ctx.quotient_algebra(tuple(sorted(J)))
    t = TwistChar(qa, symbolic=True) if with_twist else None
    return [inflate_chi_t(qa, m, t) for m in one_dim_modules(qa.ctx)]
