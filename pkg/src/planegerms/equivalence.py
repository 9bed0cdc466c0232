"""Deciding whether two germs are bi-Lipschitz contact equivalent.

Two germs are equivalent exactly when some bijection of their irreducible
factors preserves factor multiplicities, Puiseux characteristic data and all
pairwise intersection numbers.  The search is plain backtracking over
candidates pruned by colour refinement; every positive answer is re-checked
by :func:`verify_certificate` before it is returned.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidCertificate
from .germ import GermPresentation


def _labels(g: GermPresentation) -> list[tuple]:
    return [(k, cd.key()) for k, cd in zip(g.mults, g.char_data())]


def _refine(labels: list, matrix: list[list[int]], groups: Sequence[Sequence[int]]) -> list[int]:
    """Colour refinement; ``groups`` lists node sets with no edges between them.

    Colours are ranks of sorted values, so they are comparable across groups.
    """
    colors = _rank(labels)
    while True:
        sig = [None] * len(labels)
        for group in groups:
            for i in group:
                sig[i] = (colors[i], tuple(sorted((colors[j], matrix[i][j]) for j in group if j != i)))
        new = _rank(sig)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _rank(values: list) -> list[int]:
    order = {v: r for r, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


@dataclass(frozen=True)
class Signature:
    """Canonical form: factor labels and intersection matrix in canonical order."""

    labels: tuple
    matrix: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "factors": [
                {"mult": k, "m": m, "pairs": [list(p) for p in pairs]} for k, (m, pairs) in self.labels
            ],
            "intersection_matrix": [list(r) for r in self.matrix],
        }


def _twins(i: int, j: int, colors: list[int], matrix: list[list[int]], nodes: Sequence[int]) -> bool:
    if colors[i] != colors[j]:
        return False
    return all(matrix[i][k] == matrix[j][k] for k in nodes if k != i and k != j)


def canonical_order(g: GermPresentation) -> list[int]:
    labels = _labels(g)
    mat = g.intersection_matrix()
    r = len(labels)
    colors = _refine(labels, mat, [range(r)])
    best: list = [None, None]

    def rows(order: list[int]) -> tuple:
        k = len(order) - 1
        return (colors[order[k]],) + tuple(mat[order[k]][order[i]] for i in range(k))

    def search(order: list[int], key: tuple):
        if len(order) == r:
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, list(order)
            return
        rest = [i for i in range(r) if i not in order]
        cmin = min(colors[i] for i in rest)
        cands = [i for i in rest if colors[i] == cmin]
        # interchangeable candidates give the same key; keep one of each twin class
        reps: list[int] = []
        for i in cands:
            if not any(_twins(i, j, colors, mat, range(r)) for j in reps):
                reps.append(i)
        scored = []
        for i in reps:
            nk = key + rows(order + [i])
            scored.append((nk, i))
        low = min(s[0] for s in scored)
        if best[0] is not None and low > best[0][: len(low)]:
            return
        for nk, i in scored:
            if nk == low:
                search(order + [i], nk)

    search([], ())
    return best[1]


def invariant_signature(g: GermPresentation) -> Signature:
    order = canonical_order(g)
    labels = _labels(g)
    mat = g.intersection_matrix()
    return Signature(
        tuple(labels[i] for i in order),
        tuple(tuple(mat[i][j] for j in order) for i in order),
    )


@dataclass(frozen=True)
class EquivalenceCertificate:
    verdict: str
    sigma: tuple[int, ...] | None = None
    witness: dict | None = field(default=None)

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent"

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.sigma is not None:
            out["sigma"] = list(self.sigma)
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _no(kind: str, **details) -> EquivalenceCertificate:
    return EquivalenceCertificate("not_equivalent", None, {"kind": kind, **details})


def _check_sigma(f: GermPresentation, g: GermPresentation, sigma: Sequence[int]) -> None:
    r = len(f)
    if len(sigma) != r or len(g) != r:
        raise InvalidCertificate(f"sigma has {len(sigma)} entries for germs with {r} and {len(g)} factors")
    for j in sigma:
        if not isinstance(j, int) or isinstance(j, bool) or not 0 <= j < r:
            raise InvalidCertificate(f"sigma entry {j!r} is out of range 0..{r - 1}")
    if len(set(sigma)) != r:
        raise InvalidCertificate("sigma is not a permutation")


def verify_certificate(f: GermPresentation, g: GermPresentation, sigma: Sequence[int]) -> bool:
    """Whether ``i -> sigma[i]`` preserves multiplicities, Puiseux data and intersections."""
    sigma = list(sigma)
    _check_sigma(f, g, sigma)
    lf, lg = _labels(f), _labels(g)
    if any(lf[i] != lg[sigma[i]] for i in range(len(f))):
        return False
    mf, mg = f.intersection_matrix(), g.intersection_matrix()
    return all(mf[i][j] == mg[sigma[i]][sigma[j]] for i in range(len(f)) for j in range(len(f)))


def decide_equivalence(f: GermPresentation, g: GermPresentation) -> EquivalenceCertificate:
    r = len(f)
    if r != len(g):
        return _no("FactorCountMismatch", left=r, right=len(g))
    if sorted(f.mults) != sorted(g.mults):
        return _no("MultiplicityMultisetMismatch", left=sorted(f.mults), right=sorted(g.mults))
    lf, lg = _labels(f), _labels(g)
    count_g = Counter(lg)
    count_f = Counter(lf)
    for i, lab in enumerate(lf):
        if count_f[lab] != count_g[lab]:
            return _no("PuiseuxPairMismatch", index=i, mult=lab[0], m=lab[1][0], pairs=[list(p) for p in lab[1][1]])
    mf, mg = f.intersection_matrix(), g.intersection_matrix()
    # compare the multisets of entries between each pair of label classes
    for i in range(r):
        for j in range(i + 1, r):
            key = (lf[i], lf[j])
            vf = Counter(mf[a][b] for a in range(r) for b in range(r) if a != b and (lf[a], lf[b]) == key)
            vg = Counter(mg[a][b] for a in range(r) for b in range(r) if a != b and (lg[a], lg[b]) == key)
            if vf[mf[i][j]] > vg[mf[i][j]]:
                return _no("IntersectionMatrixMismatch", i=i, j=j, value=mf[i][j])
    # joint refinement on the disjoint union
    big = [[0] * (2 * r) for _ in range(2 * r)]
    for a in range(r):
        for b in range(r):
            big[a][b] = mf[a][b]
            big[r + a][r + b] = mg[a][b]
    colors = _refine(lf + lg, big, [range(r), range(r, 2 * r)])
    cf, cg = colors[:r], colors[r:]
    if sorted(cf) != sorted(cg):
        return _no("NoConsistentBijection")
    sigma: list[int | None] = [None] * r
    used = [False] * r
    order = sorted(range(r), key=lambda i: (Counter(cf)[cf[i]], i))

    def extend(pos: int) -> bool:
        if pos == r:
            return True
        i = order[pos]
        for j in range(r):
            if used[j] or cg[j] != cf[i]:
                continue
            if all(mf[i][k] == mg[j][sigma[k]] for k in order[:pos]):
                sigma[i], used[j] = j, True
                if extend(pos + 1):
                    return True
                sigma[i], used[j] = None, False
        return False

    if not extend(0):
        return _no("NoConsistentBijection")
    if not verify_certificate(f, g, sigma):
        raise AssertionError("bijection found by search failed verification")
    return EquivalenceCertificate("equivalent", tuple(sigma))
