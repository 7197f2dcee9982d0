"""Conjugacy classes of the extended affine Weyl group.

Newton-zero (equivalently, finite-order) classes are enumerated by
partitioning a length ball under the conjugation moves e ↦ s e s (s ∈ S^a)
and e ↦ ω e ω^{-1} (ω ∈ Omega).  Minimal-length representatives are found by
the descent e ↦ s e s whenever the length does not increase; equal-length
plateaus are explored by BFS.  Minimality is certified against a brute-force
conjugation oracle in the test suite, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import intlinalg
from .rootdata import semisimple_quotient
from .weyl import Elt, WeylData


class PlateauBudgetExceeded(RuntimeError):
    pass


class UnstableAtBound(RuntimeError):
    """Class data changed between the bound L and L+2."""


class NotFound(LookupError):
    """The element's class is not in the provided list (bound too small)."""


@dataclass(frozen=True)
class ConjClassRecord:
    """One Newton-zero conjugacy class, anchored on a canonical minimal rep."""

    rep: Elt
    label: str
    min_length: int
    min_reps: tuple[Elt, ...]
    newton: tuple[Fraction, ...]
    J_O: tuple[int, ...]
    elliptic: bool

    @property
    def id(self) -> str:
        return self.label

    def to_json(self, wd: WeylData) -> dict:
        return {
            "rep": wd.render(self.rep),
            "min_length": self.min_length,
            "newton": [str(c) for c in self.newton],
            "elliptic": self.elliptic,
            "label": self.label,
        }


def descend_to_minimal(
    wd: WeylData, e: Elt, budget: int = 1_000_000
) -> tuple[list[Elt], list[tuple[str, Elt]]]:
    """Full minimal-length plateau reachable from e by non-increasing moves.

    Returns (plateau, path) where path is one witness chain of conjugation
    steps (generator name, intermediate element) from e down to a plateau
    member.
    """
    start_len = wd.length(e)
    seen = {e: None}
    queue = [e]
    best = e
    best_len = start_len
    while queue:
        f = queue.pop(0)
        lf = wd.length(f)
        moves = [(s.name, s.elt, s.elt) for s in wd.affine_simple]
        for k, name in enumerate(wd.omega_names):
            om = wd.omega_elements[k + 1]
            moves.append((name, om, wd.inv(om)))
        for name, g, ginv in moves:
            h = wd.mult(wd.mult(g, f), ginv)
            if h in seen:
                continue
            lh = wd.length(h)
            if lh > lf:
                continue
            seen[h] = (f, name)
            if len(seen) > budget:
                raise PlateauBudgetExceeded(f"exceeded {budget} nodes")
            queue.append(h)
            if lh < best_len:
                best, best_len = h, lh
    plateau = sorted(
        (h for h in seen if wd.length(h) == best_len), key=lambda t: (t[0], t[1])
    )
    path = []
    cur = best
    while seen[cur] is not None:
        prev, name = seen[cur]
        path.append((name, cur))
        cur = prev
    path.reverse()
    return plateau, path


def _finite_order_ball(wd: WeylData, L: int) -> list[Elt]:
    return [e for e in wd.enumerate_ball(L) if wd.has_finite_order(e)]


def _partition(wd: WeylData, elems: list[Elt]) -> list[list[Elt]]:
    index = {e: i for i, e in enumerate(elems)}
    parent = list(range(len(elems)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    conjugators = [(s.elt, s.elt) for s in wd.affine_simple] + [
        (om, wd.inv(om)) for om in wd.omega_elements[1:]
    ]
    for e in elems:
        i = index[e]
        for g, ginv in conjugators:
            h = wd.mult(wd.mult(g, e), ginv)
            j = index.get(h)
            if j is not None:
                union(i, j)
    groups: dict[int, list[Elt]] = {}
    for e in elems:
        groups.setdefault(find(index[e]), []).append(e)
    return list(groups.values())


def _records_from_partition(wd: WeylData, groups: list[list[Elt]]) -> list[ConjClassRecord]:
    records = []
    for grp in groups:
        min_len = min(wd.length(e) for e in grp)
        min_reps = sorted(
            (e for e in grp if wd.length(e) == min_len), key=lambda t: (t[0], t[1])
        )
        rep = min(min_reps, key=wd.word)
        nu, j_o = wd.newton_point(rep)
        records.append(
            ConjClassRecord(
                rep=rep,
                label=wd.label(rep),
                min_length=min_len,
                min_reps=tuple(min_reps),
                newton=nu,
                J_O=j_o,
                elliptic=wd.is_elliptic(rep),
            )
        )
    records.sort(key=lambda r: (r.min_length, wd.word(r.rep)))
    return records


def newton_zero_classes(
    wd: WeylData, L: int = 8, check_stability: bool = True
) -> list[ConjClassRecord]:
    """All Newton-zero conjugacy classes closed in the length-L ball.

    With ``check_stability`` the enumeration is repeated at L+2 and must give
    the same classes, else :class:`UnstableAtBound`.
    """
    records = _records_from_partition(wd, _partition(wd, _finite_order_ball(wd, L)))
    if check_stability:
        again = _records_from_partition(
            wd, _partition(wd, _finite_order_ball(wd, L + 2))
        )
        if [r.label for r in again] != [r.label for r in records]:
            raise UnstableAtBound(
                f"classes changed between L={L} ({[r.label for r in records]}) "
                f"and L={L + 2} ({[r.label for r in again]})"
            )
    return records


def classify(wd: WeylData, e: Elt, classes: Sequence[ConjClassRecord]) -> ConjClassRecord:
    """Match e to a known class by descending to its minimal-length plateau."""
    plateau, _path = descend_to_minimal(wd, e)
    pset = set(plateau)
    for rec in classes:
        if pset & set(rec.min_reps):
            return rec
    raise NotFound(f"class of {wd.render(e)} not among {[r.label for r in classes]}")


def brute_force_conjugacy_oracle(wd: WeylData, a: Elt, b: Elt, L: int) -> bool:
    """Exhaustive search: is g a g^{-1} = b for some g of length <= L?"""
    for g in wd.enumerate_ball(L):
        if wd.conjugate(g, a) == b:
            return True
    return False


@dataclass(frozen=True)
class CountIdentityReport:
    """Per-parabolic elliptic counts versus the Newton-zero class total."""

    ok: bool
    total: int
    expected: int
    per_J: tuple[tuple[tuple[int, ...], int], ...]

    def __bool__(self) -> bool:
        return self.ok


def _subset_reps(wd: WeylData) -> list[tuple[int, ...]]:
    """Subsets of Pi up to J ~ J' iff w(J) = J' for some w in W."""
    import itertools as it

    npi = wd.npi
    subsets = [tuple(c) for r in range(npi + 1) for c in it.combinations(range(npi), r)]
    root_sets = {
        J: frozenset(wd.datum.simple_roots[j] for j in J) for J in subsets
    }
    reps = []
    seen = set()
    for J in subsets:
        if J in seen:
            continue
        orbit = {J}
        for w in range(wd.W.size):
            img = frozenset(wd.W.act(w, r) for r in root_sets[J])
            for K in subsets:
                if root_sets[K] == img:
                    orbit.add(K)
        seen |= orbit
        reps.append(min(orbit))
    return reps


def _quotient_weyl_index(qwd: WeylData, mat) -> int:
    key = tuple(tuple(row) for row in mat)
    return qwd.W.index[key]


def count_identity_check(wd: WeylData, L: int = 8) -> CountIdentityReport:
    """Check sum_J |elliptic Newton-zero classes of W~_J| / N_J = |cl(W~)_0|.

    For each J the elliptic classes of the semisimple quotient X_J ⋊ W_J are
    counted, keeping only those that lift to Newton-zero classes of X ⋊ W_J,
    i.e. whose translation part lies in image(X ∩ QJ) + (1-u) X_J, and then
    identifying N_J-orbits.
    """
    expected = len(newton_zero_classes(wd, L, check_stability=False))
    total = 0
    per_j = []
    for J in _subset_reps(wd):
        quot = semisimple_quotient(wd.datum, J)
        qwd = WeylData(quot.datum)
        qclasses = newton_zero_classes(qwd, L, check_stability=False)
        r = quot.datum.rank
        lifting = []
        for rec in qclasses:
            if not rec.elliptic:
                continue
            x, u = rec.rep
            if r == 0:
                lifting.append(rec)
                continue
            umat = qwd.W.mats[u]
            gens = [list(v) for v in quot.root_lattice_image]
            for j in range(r):
                col = [int(i == j) - umat[i][j] for i in range(r)]
                gens.append(col)
            if intlinalg.solve_integer(gens, list(x)) is not None:
                lifting.append(rec)
        # N_J orbits on the lifting classes
        n_j = wd.normalizer_reps(J)
        label_to_pos = {rec.label: k for k, rec in enumerate(lifting)}
        parent = list(range(len(lifting)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        if r > 0 and len(n_j) > 1 and lifting:
            m = wd.rank
            for z in n_j:
                zmat = wd.W.mats[z]
                zbar = [
                    list(quot.project([sum(zmat[a][b] * quot.section[i][b] for b in range(m)) for a in range(m)]))
                    for i in range(r)
                ]
                # zbar rows: images of the X_J basis; act on column vectors via transpose
                zcol = tuple(tuple(zbar[j][i] for j in range(r)) for i in range(r))
                zinv = tuple(
                    tuple(row) for row in intlinalg.mat_inverse_unimodular([list(rw) for rw in zcol])
                )
                for k, rec in enumerate(lifting):
                    x, u = rec.rep
                    xx = tuple(sum(zcol[i][j] * x[j] for j in range(r)) for i in range(r))
                    umat = qwd.W.mats[u]
                    conj = tuple(
                        tuple(
                            sum(
                                zcol[i][a] * umat[a][b] * zinv[b][j]
                                for a in range(r)
                                for b in range(r)
                            )
                            for j in range(r)
                        )
                        for i in range(r)
                    )
                    uu = _quotient_weyl_index(qwd, conj)
                    target = classify(qwd, (xx, uu), lifting)
                    j2 = label_to_pos[target.label]
                    ri, rj = find(k), find(j2)
                    if ri != rj:
                        parent[ri] = rj
        orbits = len({find(i) for i in range(len(lifting))}) if lifting else 0
        total += orbits
        per_j.append((J, orbits))
    return CountIdentityReport(total == expected, total, expected, tuple(per_j))
