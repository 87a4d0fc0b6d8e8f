"""The bound path algebras Lambda(p, q, r) and their indecomposable projectives.

Vertices are ``-q, ..., p-1``. Arrow ``i`` (written ``a<i>``) runs
``i+1 -> i`` on the line part (``i < 0``) and ``(i+1) mod p -> i`` on the
cycle, so the cycle reads ``0 -> p-1 -> ... -> 1 -> 0``. The zero relations
kill the length-two paths through the vertices ``0, p-1, ..., p-r+1`` along
the cycle: the relation usually written ``a_{p-1} a_0`` is the path that
traverses ``a0`` and then ``a_{p-1}``.

Module conventions: ``P_v`` has the surviving paths starting at ``v`` as a
basis, and a path ``b -> a`` acts as the homomorphism ``P_a -> P_b`` given by
left concatenation. With this choice ``P_{i-1}`` is a submodule of ``P_i``
through the arrow ``i -> i-1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class ParameterError(ValueError):
    """Raised for (p, q, r) outside the family or invalid module requests."""


@dataclass(frozen=True)
class Arrow:
    index: int
    source: int
    target: int

    @property
    def name(self) -> str:
        return f"a{self.index}"


@dataclass(frozen=True)
class Path:
    """A surviving path; ``arrows`` lists arrow indices in traversal order."""

    source: int
    target: int
    arrows: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def name(self) -> str:
        if not self.arrows:
            return f"e{self.source}"
        return ".".join(f"a{a}" for a in self.arrows)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class GentlePresentation:
    p: int
    q: int
    r: int
    vertices: tuple[int, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[int, int], ...]  # (first traversed, second traversed)

    @property
    def infinite_gldim(self) -> bool:
        return self.r == self.p

    def arrow(self, index: int) -> Arrow:
        return self.arrows[index + self.q]

    def out_arrows(self, v: int) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def is_gentle(self) -> bool:
        rel = set(self.relations)
        for v in self.vertices:
            ins = [a for a in self.arrows if a.target == v]
            outs = self.out_arrows(v)
            if len(ins) > 2 or len(outs) > 2:
                return False
            for a in ins:
                killed = sum((a.index, b.index) in rel for b in outs)
                kept = sum(1 for b in outs if (a.index, b.index) not in rel)
                if killed > 1 or kept > 1:
                    return False
            for b in outs:
                killed = sum((a.index, b.index) in rel for a in ins)
                kept = sum(1 for a in ins if (a.index, b.index) not in rel)
                if killed > 1 or kept > 1:
                    return False
        return True

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "source": a.source, "target": a.target} for a in self.arrows],
            "relations": [[f"a{x}", f"a{y}"] for x, y in self.relations],
            "gldim": "infinite" if self.infinite_gldim else "finite",
        }


def presentation(p: int, q: int, r: int) -> GentlePresentation:
    if not (isinstance(p, int) and isinstance(q, int) and isinstance(r, int)):
        raise ParameterError("p, q, r must be integers")
    if p < 1 or q < 0 or not 1 <= r <= p:
        raise ParameterError(f"need p >= 1, q >= 0 and 1 <= r <= p, got ({p}, {q}, {r})")
    vertices = tuple(range(-q, p))
    arrows = [Arrow(i, i + 1, i) for i in range(-q, 0)]
    arrows += [Arrow(i, (i + 1) % p, i) for i in range(p)]
    # middle vertices 0, p-1, ..., p-r+1; through vertex m the cycle path
    # enters by arrow m (mod p) and leaves by arrow m-1
    relations = []
    for m in range(p, p - r, -1):
        relations.append((m % p, (m - 1) % p))
    return GentlePresentation(p, q, r, vertices, tuple(arrows), tuple(relations))


@dataclass(frozen=True, eq=False)
class AlgebraData:
    presentation: GentlePresentation
    basis: tuple[Path, ...]
    hom_bases: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.presentation.vertices

    @property
    def signature(self) -> tuple[int, int, int]:
        pr = self.presentation
        return pr.p, pr.q, pr.r

    @cached_property
    def index(self) -> dict[Path, int]:
        return {path: i for i, path in enumerate(self.basis)}

    @cached_property
    def trivial(self) -> dict[int, int]:
        """Basis index of the idempotent ``e_v``."""
        return {path.source: i for i, path in enumerate(self.basis) if not path.arrows}

    @cached_property
    def mult(self) -> np.ndarray:
        """``mult[i, j]`` is the index of basis path i followed by j, or -1."""
        n = self.dim
        table = np.full((n, n), -1, dtype=np.int64)
        for i, x in enumerate(self.basis):
            for j, y in enumerate(self.basis):
                z = compose(self.presentation, x, y)
                if z is not None:
                    table[i, j] = self.index[z]
        return table

    @cached_property
    def projective_basis(self) -> dict[int, tuple[int, ...]]:
        """Basis path indices of ``P_v`` (paths starting at v)."""
        return {v: tuple(i for i, path in enumerate(self.basis) if path.source == v) for v in self.vertices}

    @cached_property
    def proj_dim(self) -> dict[int, int]:
        return {v: len(b) for v, b in self.projective_basis.items()}

    @cached_property
    def action(self) -> list[tuple[tuple[int, int], ...]]:
        """For each basis path g: pairs (pos of rho in P_u, pos of g.rho in P_w).

        Here g runs w -> u, and these pairs are the nonzero entries of the
        K-linear map P_u -> P_w that g induces.
        """
        pos = {}
        for v, idxs in self.projective_basis.items():
            for k, i in enumerate(idxs):
                pos[i] = k
        out = []
        mult = self.mult
        for g, path in enumerate(self.basis):
            pairs = []
            for rho in self.projective_basis[path.target]:
                s = mult[g, rho]
                if s >= 0:
                    pairs.append((pos[rho], pos[int(s)]))
            out.append(tuple(pairs))
        return out

    def hom_basis(self, a: int, b: int) -> list[Path]:
        return list(self.hom_bases[(a, b)])

    def hom_indices(self, a: int, b: int) -> tuple[int, ...]:
        """Basis indices of Hom(P_a, P_b), i.e. paths from b to a."""
        return self._hom_idx[(a, b)]

    @cached_property
    def _hom_idx(self) -> dict:
        return {key: tuple(self.index[x] for x in paths) for key, paths in self.hom_bases.items()}

    def path_by_name(self, name: str) -> int:
        return self._by_name[name]

    @cached_property
    def _by_name(self) -> dict[str, int]:
        return {path.name: i for i, path in enumerate(self.basis)}

    def to_dict(self) -> dict:
        d = self.presentation.to_dict()
        d["dim"] = self.dim
        d["projective_dims"] = {str(v): self.proj_dim[v] for v in self.vertices}
        d["basis"] = [path.name for path in self.basis]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def compose(pres: GentlePresentation, x: Path, y: Path) -> Path | None:
    """Path ``x`` followed by path ``y``; None when it is zero in the algebra."""
    if x.target != y.source:
        return None
    if x.arrows and y.arrows and (x.arrows[-1], y.arrows[0]) in set(pres.relations):
        return None
    return Path(x.source, y.target, x.arrows + y.arrows)


def enumerate_paths(pres: GentlePresentation) -> list[Path]:
    """All surviving paths, ordered by source, then length, then arrows."""
    rel = set(pres.relations)
    out = []
    for v in pres.vertices:
        frontier = [Path(v, v)]
        while frontier:
            out.extend(frontier)
            nxt = []
            for path in frontier:
                for arrow in pres.out_arrows(path.target):
                    if path.arrows and (path.arrows[-1], arrow.index) in rel:
                        continue
                    nxt.append(Path(path.source, arrow.target, path.arrows + (arrow.index,)))
            frontier = sorted(nxt, key=lambda x: x.arrows)
    return out


def build_lambda(p: int, q: int, r: int) -> AlgebraData:
    pres = presentation(p, q, r)
    basis = tuple(enumerate_paths(pres))
    hom_bases = {}
    for a in pres.vertices:
        for b in pres.vertices:
            hom_bases[(a, b)] = tuple(x for x in basis if x.source == b and x.target == a)
    return AlgebraData(pres, basis, hom_bases)


def hom_basis(alg: AlgebraData, a: int, b: int) -> list[Path]:
    return alg.hom_basis(a, b)
